#include <filesystem>
#include <fstream>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "assetdb/errors.hpp"
#include "assetdb/report.hpp"
#include "assetdb/validate.hpp"

using namespace assetdb;
namespace fs = std::filesystem;

namespace {

validate::MetricSet metrics(double pm, double ja, double co, double di, double le) {
    validate::MetricSet m;
    m.partial_match = pm;
    m.jaccard = ja;
    m.cosine = co;
    m.dice = di;
    m.levenshtein = le;
    return m;
}

// A report with every optional section populated, including characters that
// must be escaped in the HTML rendering.
report::CompanyReport sample_report() {
    report::CompanyReport r;
    r.company = "R&D <Mines> \"Ltd\"";
    r.asset_count = 3;
    r.coverage = validate::coverage(12, 13);
    r.validation_coverage = validate::total_validation_coverage(2, 6);

    validate::AttributeScores s1;
    s1.per_attribute["physical_asset"] = metrics(1.0, 0.9, 0.8, 0.7, 0.6);
    s1.per_attribute["ownership"] = metrics(0.5, 0.4, 0.3, 0.2, 0.1);
    s1.hits_at_5 = 1.0;
    s1.overall = 0.75;
    validate::AttributeScores s2;
    s2.per_attribute["physical_asset"] = metrics(0.5, 0.7, 0.6, 0.5, 0.4);
    s2.per_attribute["ownership"] = metrics(1.0, 1.0, 1.0, 1.0, 1.0);
    s2.hits_at_5 = 0.0;
    s2.overall = 0.25;
    r.attributes = report::summarize_attributes({s1, s2});

    rav::RavScore rs;
    rs.company = r.company;
    rs.per_asset = {{1, 1.0}, {2, 2.0 / 3.0}};
    rs.company_score = (1.0 + 2.0 / 3.0) / 2.0;
    r.rav = rs;

    r.warnings = {"reference file missing & skipped", "row <3> had no location"};
    r.generated_at = "2026-08-15T00:00:00Z";
    return r;
}

struct TempFile {
    fs::path path;
    explicit TempFile(const std::string& name_hint) {
        static std::mt19937_64 rng(std::random_device{}());
        path = fs::temp_directory_path() /
               ("assetdb_report_" + std::to_string(rng()) + "_" + name_hint);
    }
    ~TempFile() {
        std::error_code ec;
        fs::remove(path, ec);
    }
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

TEST_CASE("attribute summary averages every metric over the matched rows") {
    validate::AttributeScores s1;
    s1.per_attribute["physical_asset"] = metrics(1.0, 0.9, 0.8, 0.7, 0.6);
    s1.per_attribute["country"] = metrics(1.0, 1.0, 1.0, 1.0, 1.0);
    s1.hits_at_5 = 1.0;
    s1.overall = 0.75;
    validate::AttributeScores s2;
    s2.per_attribute["physical_asset"] = metrics(0.5, 0.7, 0.6, 0.5, 0.4);
    s2.hits_at_5 = 0.0;
    s2.overall = 0.25;

    report::AttributeSummary summary = report::summarize_attributes({s1, s2});
    CHECK(summary.matched_assets == 2);
    const auto& pa = summary.mean_per_attribute.at("physical_asset");
    CHECK(pa.partial_match == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(pa.jaccard == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(pa.cosine == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(pa.dice == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(pa.levenshtein == doctest::Approx(0.5).epsilon(1e-12));
    // An attribute scored for only some rows still averages over all rows.
    CHECK(summary.mean_per_attribute.at("country").partial_match ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(summary.hits_at_5 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(summary.overall == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("attribute summary of no rows is all zeros") {
    report::AttributeSummary summary = report::summarize_attributes({});
    CHECK(summary.matched_assets == 0);
    CHECK(summary.mean_per_attribute.empty());
    CHECK(summary.hits_at_5 == 0.0);
    CHECK(summary.overall == 0.0);
}

TEST_CASE("report JSON keeps every percent recomputable from its counts") {
    report::CompanyReport r = sample_report();
    nlohmann::json j = report::to_json(r);

    CHECK(j.at("company").get<std::string>() == r.company);
    CHECK(j.at("asset_count").get<int>() == 3);

    const auto& cov = j.at("coverage");
    CHECK(cov.at("matched_count").get<int>() == 12);
    CHECK(cov.at("reference_total").get<int>() == 13);
    CHECK(cov.at("not_applicable").get<bool>() == false);
    CHECK(cov.at("percent").get<double>() ==
          doctest::Approx(100.0 * cov.at("matched_count").get<int>() /
                          cov.at("reference_total").get<int>())
              .epsilon(1e-12));

    const auto& tvc = j.at("validation_coverage");
    CHECK(tvc.at("validated_count").get<int>() == 2);
    CHECK(tvc.at("total_assets").get<int>() == 6);
    CHECK(tvc.at("percent").get<double>() ==
          doctest::Approx(100.0 * 2 / 6.0).epsilon(1e-12));

    const auto& rav_j = j.at("rav");
    REQUIRE(rav_j.at("per_asset").size() == 2);
    CHECK(rav_j.at("per_asset")[0].at("asset_id").get<long long>() == 1);
    CHECK(rav_j.at("per_asset")[1].at("score").get<double>() ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    double mean = (rav_j.at("per_asset")[0].at("score").get<double>() +
                   rav_j.at("per_asset")[1].at("score").get<double>()) /
                  2.0;
    CHECK(rav_j.at("company_score").get<double>() == doctest::Approx(mean).epsilon(1e-12));

    CHECK(j.at("warnings").size() == 2);
    CHECK(j.at("generated_at").get<std::string>() == "2026-08-15T00:00:00Z");

    const auto& attrs = j.at("attribute_scores");
    CHECK(attrs.at("matched_assets").get<int>() == 2);
    CHECK(attrs.at("per_attribute").contains("physical_asset"));
    CHECK(attrs.at("per_attribute").at("ownership").at("partial_match").get<double>() ==
          doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("optional report sections are omitted from the JSON when absent") {
    report::CompanyReport r;
    r.company = "ACU";
    r.coverage = validate::CoverageReport{};
    r.coverage.not_applicable = true;
    r.generated_at = "2026-08-15T00:00:00Z";
    nlohmann::json j = report::to_json(r);
    CHECK_FALSE(j.contains("validation_coverage"));
    CHECK_FALSE(j.contains("rav"));
    CHECK(j.at("coverage").at("not_applicable").get<bool>() == true);
    CHECK(j.at("warnings").empty());
}

TEST_CASE("JSON report file ends with a newline and parses back unchanged") {
    report::CompanyReport r = sample_report();
    TempFile file("report.json");
    report::write_json(r, file.path.string());
    std::string text = slurp(file.path);
    REQUIRE_FALSE(text.empty());
    CHECK(text.back() == '\n');
    CHECK(nlohmann::json::parse(text) == report::to_json(r));

    CHECK_THROWS_AS(report::write_json(r, (file.path / "nodir" / "x.json").string()), IoError);
}

TEST_CASE("HTML page escapes text, embeds the JSON, and loads nothing external") {
    report::CompanyReport r = sample_report();
    TempFile file("report.html");
    report::write_html(r, file.path.string());
    std::string html = slurp(file.path);

    // Escaped company name in the heading; the raw form appears only inside
    // the JSON data block, never in the rendered markup.
    const std::string markup = html.substr(0, html.find("<script"));
    CHECK(markup.find("R&amp;D &lt;Mines&gt; &quot;Ltd&quot;") != std::string::npos);
    CHECK(markup.find("<Mines>") == std::string::npos);
    CHECK(markup.find("reference file missing &amp; skipped") != std::string::npos);
    CHECK(markup.find("row &lt;3&gt; had no location") != std::string::npos);

    // Self-contained page: no links, images, or scripts fetched from anywhere.
    CHECK(html.find("href=") == std::string::npos);
    CHECK(html.find("src=") == std::string::npos);
    CHECK(html.find("<link") == std::string::npos);

    // The machine-readable copy inside the page is the exact report JSON.
    const std::string open = "<script type=\"application/json\" id=\"report-data\">\n";
    auto start = html.find(open);
    REQUIRE(start != std::string::npos);
    start += open.size();
    auto end = html.find("\n</script>", start);
    REQUIRE(end != std::string::npos);
    CHECK(nlohmann::json::parse(html.substr(start, end - start)) == report::to_json(r));

    // Rendered numbers: two-decimal percentages with their counts.
    CHECK(html.find("92.31% (12 of 13)") != std::string::npos);
    CHECK(html.find("33.33% (2 of 6)") != std::string::npos);
}

TEST_CASE("HTML page reports missing reference data instead of a percentage") {
    report::CompanyReport r;
    r.company = "ACU";
    r.coverage.not_applicable = true;
    r.generated_at = "2026-08-15T00:00:00Z";
    TempFile file("na.html");
    report::write_html(r, file.path.string());
    std::string html = slurp(file.path);
    CHECK(html.find("N/A (no reference entries)") != std::string::npos);
    CHECK(html.find('%') == std::string::npos);
}

TEST_CASE("timestamps are UTC with second precision") {
    std::string ts = report::current_timestamp();
    static const std::regex pattern(R"(^\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}Z$)");
    CHECK(std::regex_match(ts, pattern));
}
