#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"

#include "assetdb/errors.hpp"
#include "assetdb/validate.hpp"

using namespace assetdb;
namespace fs = std::filesystem;

namespace {

struct TempCsv {
    fs::path path;
    explicit TempCsv(const std::string& content) {
        static std::mt19937_64 rng(std::random_device{}());
        path = fs::temp_directory_path() /
               ("assetdb_ref_" + std::to_string(rng()) + ".csv");
        std::ofstream out(path, std::ios::binary);
        out << content;
    }
    ~TempCsv() {
        std::error_code ec;
        fs::remove(path, ec);
    }
};

const char* kHeader =
    "ref_id,company_ticker,asset_name,owner,commodity,country,status,asset_type\n";

validate::ReferenceAsset ref(const std::string& id, const std::string& name,
                             const std::string& status = "operating") {
    validate::ReferenceAsset r;
    r.ref_id = id;
    r.company_ticker = "acu";
    r.asset_name = name;
    r.status = status;
    return r;
}

store::AssetRow asset_named(const std::string& name) {
    store::AssetRow row;
    row.id = 1;
    row.physical_asset = name;
    return row;
}

}  // namespace

TEST_CASE("load_reference_csv reads rows and rejects bad shapes") {
    TempCsv good(std::string(kHeader) +
                 "R1,ACU,Aurora Copper Mine,Aurora Copper Corporation,Copper,Canada,"
                 "Operating,Mine\n"
                 "R2,ACU,\"Mill, North\",Owner,Gold,Peru,Closed,Mill\n");
    auto rows = validate::load_reference_csv(good.path.string());
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].ref_id == "R1");
    CHECK(rows[0].company_ticker == "ACU");
    CHECK(rows[0].asset_name == "Aurora Copper Mine");
    CHECK(rows[0].owner == "Aurora Copper Corporation");
    CHECK(rows[0].commodity == "Copper");
    CHECK(rows[0].country == "Canada");
    CHECK(rows[0].status == "Operating");
    CHECK(rows[0].asset_type == "Mine");
    CHECK(rows[1].asset_name == "Mill, North");

    TempCsv bad_header("id,name\nR1,x\n");
    CHECK_THROWS_AS(validate::load_reference_csv(bad_header.path.string()), ConfigError);

    TempCsv short_row(std::string(kHeader) + "R1,ACU,Mine\n");
    CHECK_THROWS_AS(validate::load_reference_csv(short_row.path.string()), ConfigError);

    TempCsv empty_name(std::string(kHeader) + "R1,ACU,,Owner,Gold,Peru,Operating,Mine\n");
    CHECK_THROWS_AS(validate::load_reference_csv(empty_name.path.string()), ConfigError);

    CHECK_THROWS_AS(validate::load_reference_csv("/nonexistent/ref.csv"), IoError);

    TempCsv header_only(kHeader);
    CHECK(validate::load_reference_csv(header_only.path.string()).empty());
}

TEST_CASE("preprocess lowercases fields and drops excluded statuses") {
    std::vector<validate::ReferenceAsset> rows = {
        ref("R1", "Aurora Copper Mine", "Operating"),
        ref("R2", "Shuttered Mill", "Closed"),
        ref("R3", "Left Behind Pit", "ABANDONED"),
        ref("R4", "Paused Plant", "Care and Maintenance"),
    };
    rows[0].owner = "ACME Corp";
    rows[0].country = "CANADA";
    auto out = validate::preprocess_reference(rows);
    REQUIRE(out.size() == 2);
    CHECK(out[0].ref_id == "R1");
    CHECK(out[0].asset_name == "aurora copper mine");
    CHECK(out[0].owner == "acme corp");
    CHECK(out[0].country == "canada");
    CHECK(out[0].status == "operating");
    CHECK(out[1].ref_id == "R4");  // exclusion is exact on the lowercased status

    validate::PreprocessOptions keep_all;
    keep_all.status_exclusions = {};
    CHECK(validate::preprocess_reference(rows, keep_all).size() == 4);
}

TEST_CASE("match_asset ranks by name similarity with deterministic ties") {
    std::vector<validate::ReferenceAsset> reference = {
        ref("R3", "aurora copper mine"),
        ref("R1", "sunrise solar park"),
        ref("R2", "aurora copper mine"),  // duplicate name, different id
        ref("R4", "redwater refinery"),
    };
    auto result = validate::match_asset(asset_named("Aurora Copper Mine"), reference);
    REQUIRE(result.candidates.size() == 4);
    CHECK(result.candidates[0].score == doctest::Approx(1.0));
    CHECK(result.candidates[0].ref_id == "R2");  // tied at 1.0 → id order
    CHECK(result.candidates[1].ref_id == "R3");
    REQUIRE(result.best.has_value());
    CHECK(*result.best == "R2");
    CHECK(result.best_score == doctest::Approx(1.0));

    // Below the threshold there is no best, but candidates still rank.
    auto miss = validate::match_asset(asset_named("zzz unrelated"), reference, 0.9);
    CHECK_FALSE(miss.best.has_value());
    CHECK(miss.candidates.size() == 4);

    // k caps the list.
    auto capped = validate::match_asset(asset_named("Aurora Copper Mine"), reference, 0.6, 2);
    CHECK(capped.candidates.size() == 2);

    CHECK_THROWS_AS(validate::match_asset(asset_named("x"), reference, 0.6, 0),
                    ValidationError);

    auto empty_ref = validate::match_asset(asset_named("x"), {});
    CHECK(empty_ref.candidates.empty());
    CHECK_FALSE(empty_ref.best.has_value());
}

TEST_CASE("match_asset uses substring-friendly scoring") {
    // The shorter string sliding inside the longer one gives a full match.
    std::vector<validate::ReferenceAsset> reference = {ref("R1", "grasberg")};
    auto result = validate::match_asset(asset_named("Grasberg mine complex"), reference);
    REQUIRE(result.best.has_value());
    CHECK(result.best_score == doctest::Approx(1.0));
}

TEST_CASE("score_match compares the four attributes case-insensitively") {
    store::AssetRow row;
    row.physical_asset = "Aurora Copper Mine";
    row.ownership = "Aurora Copper Corporation";
    row.commodity = "copper";
    row.countries = "Canada";

    validate::ReferenceAsset r = ref("R1", "aurora copper mine");
    r.owner = "aurora copper corporation";
    r.commodity = "copper";
    r.country = "canada";

    auto scores = validate::score_match(row, r);
    REQUIRE(scores.per_attribute.size() == 4);
    for (const char* attr : {"physical_asset", "ownership", "commodity", "country"}) {
        CAPTURE(attr);
        const auto& m = scores.per_attribute.at(attr);
        CHECK(m.partial_match == doctest::Approx(1.0));
        CHECK(m.jaccard == doctest::Approx(1.0));
        CHECK(m.cosine == doctest::Approx(1.0));
        CHECK(m.dice == doctest::Approx(1.0));
        CHECK(m.levenshtein == doctest::Approx(1.0));
    }
    CHECK(scores.overall == doctest::Approx(1.0));
    CHECK(scores.hits_at_5 == 0.0);  // caller fills this in separately
}

TEST_CASE("score_match averages partial matches into the overall score") {
    store::AssetRow row;
    row.physical_asset = "abc";
    row.ownership = "abc";
    row.commodity = "abc";
    row.countries = "xbc";

    validate::ReferenceAsset r = ref("R1", "abc");
    r.owner = "abc";
    r.commodity = "abc";
    r.country = "abc";

    auto scores = validate::score_match(row, r);
    // Three perfect attributes plus partial_ratio("xbc","abc") = 2/3.
    CHECK(scores.per_attribute.at("country").partial_match == doctest::Approx(2.0 / 3.0));
    CHECK(scores.overall == doctest::Approx((3.0 + 2.0 / 3.0) / 4.0));

    // Empty-vs-empty attribute pairs count as exact agreement.
    store::AssetRow sparse;
    sparse.physical_asset = "abc";
    validate::ReferenceAsset sparse_ref = ref("R2", "abc");
    sparse_ref.status = "";
    auto sparse_scores = validate::score_match(sparse, sparse_ref);
    CHECK(sparse_scores.per_attribute.at("ownership").partial_match == doctest::Approx(1.0));
    CHECK(sparse_scores.overall == doctest::Approx(1.0));
}

TEST_CASE("coverage implements the matched-over-reference percentage") {
    auto report = validate::coverage(12, 13);
    CHECK(report.matched_count == 12);
    CHECK(report.reference_total == 13);
    CHECK(report.percent == doctest::Approx(92.3076923).epsilon(1e-7));
    CHECK_FALSE(report.not_applicable);

    CHECK(validate::coverage(0, 5).percent == 0.0);
    CHECK(validate::coverage(5, 5).percent == doctest::Approx(100.0));

    auto na = validate::coverage(0, 0);
    CHECK(na.not_applicable);
    CHECK(na.percent == 0.0);

    CHECK_THROWS_AS(validate::coverage(3, 2), ValidationError);
    CHECK_THROWS_AS(validate::coverage(-1, 2), ValidationError);
}

TEST_CASE("total validation coverage guards its inputs") {
    auto report = validate::total_validation_coverage(2, 6);
    CHECK(report.percent == doctest::Approx(33.3333333).epsilon(1e-7));
    CHECK(report.validated_count == 2);
    CHECK(report.total_assets == 6);
    CHECK(validate::total_validation_coverage(6, 6).percent == doctest::Approx(100.0));
    CHECK(validate::total_validation_coverage(0, 6).percent == 0.0);

    CHECK_THROWS_AS(validate::total_validation_coverage(0, 0), ValidationError);
    CHECK_THROWS_AS(validate::total_validation_coverage(-1, 5), ValidationError);
    CHECK_THROWS_AS(validate::total_validation_coverage(7, 6), ValidationError);
}
