#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"

#include "assetdb/clean.hpp"
#include "assetdb/errors.hpp"
#include "assetdb/llm.hpp"

using namespace assetdb;
namespace fs = std::filesystem;

namespace {

struct RulesDir {
    fs::path path;
    RulesDir() {
        static std::mt19937_64 rng(std::random_device{}());
        path = fs::temp_directory_path() / ("assetdb_rules_" + std::to_string(rng()));
        fs::create_directories(path);
    }
    ~RulesDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    void write(const std::string& name, const std::string& content) const {
        std::ofstream out(path / name, std::ios::binary);
        out << content;
    }
};

store::AssetRow row(const std::string& asset, const std::string& location = "",
                    const std::string& ownership = "", const std::string& commodity = "",
                    const std::string& status = "") {
    store::AssetRow r;
    r.physical_asset = asset;
    r.location = location;
    r.ownership = ownership;
    r.commodity = commodity;
    r.status = status;
    return r;
}

}  // namespace

TEST_CASE("standardize_text strips escape characters and tidies separators") {
    auto rules = clean::default_rules();
    CHECK(clean::standardize_text(R"(Henderson\ mine)", rules) == "Henderson mine");
    CHECK(clean::standardize_text("the 'Henderson' mine", rules) == "the Henderson mine");
    CHECK(clean::standardize_text("\"quoted\"", rules) == "quoted");
    CHECK(clean::standardize_text("Lima ,Peru", rules) == "Lima, Peru");
    CHECK(clean::standardize_text("Lima  ,  Peru", rules) == "Lima, Peru");
    CHECK(clean::standardize_text("a,b,c", rules) == "a, b, c");
    CHECK(clean::standardize_text("  padded\t text \n", rules) == "padded text");
    CHECK(clean::standardize_text("", rules).empty());
}

TEST_CASE("standardize_text is idempotent on arbitrary input") {
    auto rules = clean::default_rules();
    std::mt19937 rng(99);
    const std::string charset = "ab c,'\"\\.x  ,";
    std::uniform_int_distribution<std::size_t> pick(0, charset.size() - 1);
    std::uniform_int_distribution<int> len(0, 30);
    for (int i = 0; i < 500; ++i) {
        std::string s;
        int n = len(rng);
        for (int k = 0; k < n; ++k) s.push_back(charset[pick(rng)]);
        std::string once = clean::standardize_text(s, rules);
        CHECK(clean::standardize_text(once, rules) == once);
    }
}

TEST_CASE("every built-in ownership alias lands on the canonical owner") {
    auto rules = clean::default_rules();
    const std::vector<std::string> aliases = {
        "Company",
        "company",
        "The company",
        "the company",
        "The Company",
        "the Company",
        "Company's",
        "we",
        "NEWMONT CORPORATION",
        "Newmont's ownership or economic interest",
        "Company owns or controls land",
        "Newmont",
        "Newmont (majority)",
        "Newmont Corporation (formerly)",
        "100% owned by the Company",
        "Newmont Stockholders",
        "100% by Newmont",
        "Company owned",
    };
    for (const auto& alias : aliases) {
        CAPTURE(alias);
        CHECK(clean::normalize_aliases("ownership", alias, rules) == "Newmont Corporation");
        // The pipeline standardizes before the alias lookup; the apostrophe
        // spellings must still resolve after that pass.
        std::string standardized = clean::standardize_text(alias, rules);
        CHECK(clean::normalize_aliases("ownership", standardized, rules) ==
              "Newmont Corporation");
    }
    CHECK(clean::normalize_aliases("ownership", "Barrick Gold", rules) == "Barrick Gold");
}

TEST_CASE("every built-in location alias lands on USA") {
    auto rules = clean::default_rules();
    const std::vector<std::string> variants = {
        "United States of America", "United States", "USA", "US",
        "USAA", "USAA.", "U.S.", "U.S.A.",
    };
    for (const auto& variant : variants) {
        CAPTURE(variant);
        CHECK(clean::normalize_aliases("location", variant, rules) == "USA");
    }
    // Aliases replace whole values only, never substrings.
    CHECK(clean::normalize_aliases("location", "Nevada, US", rules) == "Nevada, US");
    // Other fields pass through even on exact alias hits.
    CHECK(clean::normalize_aliases("commodity", "US", rules) == "US");
}

TEST_CASE("load_rules reads alias csvs and falls back to defaults") {
    RulesDir dir;
    dir.write("ownership_aliases.csv", "Acme's Mining,Acme Corporation\nAM,Acme Corporation\n");
    auto rules = clean::load_rules(dir.path.string());
    CHECK(clean::normalize_aliases("ownership", "Acme's Mining", rules) == "Acme Corporation");
    CHECK(clean::normalize_aliases("ownership", "AM", rules) == "Acme Corporation");
    // The loaded table replaces the built-in one entirely...
    CHECK(clean::normalize_aliases("ownership", "Newmont", rules) == "Newmont");
    // ...its standardized spellings are registered too...
    CHECK(clean::normalize_aliases("ownership", "Acmes Mining", rules) == "Acme Corporation");
    // ...and the missing location file keeps the defaults.
    CHECK(clean::normalize_aliases("location", "U.S.", rules) == "USA");

    dir.write("location_aliases.csv", "broken-row-without-comma\n");
    CHECK_THROWS_AS(clean::load_rules(dir.path.string()), ConfigError);
}

TEST_CASE("consolidate_duplicates merges case-equal assets") {
    std::vector<store::AssetRow> rows = {
        row("Grasberg mine", "Papua", "Freeport", "copper", ""),
        row("", "", "", "silver", ""),
        row("GRASBERG  MINE", "Indonesia", "Freeport", "gold", "Operational"),
    };
    rows[0].source_chunk_ids = {"f:1"};
    rows[2].source_chunk_ids = {"f:0"};
    auto out = clean::consolidate_duplicates(rows);
    REQUIRE(out.size() == 2);
    CHECK(out[0].physical_asset == "Grasberg mine");
    CHECK(out[0].location == "Papua, Indonesia");
    CHECK(out[0].ownership == "Freeport");
    CHECK(out[0].commodity == "copper, gold");
    CHECK(out[0].status == "Operational");
    CHECK(out[0].source_chunk_ids == std::vector<std::string>{"f:0", "f:1"});
    CHECK(out[1].commodity == "silver");  // empty-asset rows pass through untouched
}

TEST_CASE("consolidate_similar merges near-identical asset names") {
    std::vector<store::AssetRow> rows = {
        row("Grasberg mine", "Papua", "", "copper", ""),
        row("Grasberg mine complex", "Indonesia", "", "gold", ""),
        row("Cerro Verde", "Peru", "", "copper", ""),
    };
    auto out = clean::consolidate_similar(rows, {.threshold = 0.5});
    REQUIRE(out.size() == 2);
    CHECK(out[0].physical_asset == "Grasberg mine complex");  // longest name wins
    CHECK(out[0].location == "Papua, Indonesia");
    CHECK(out[0].commodity == "copper, gold");
    CHECK(out[1].physical_asset == "Cerro Verde");

    // The same pair stays separate once the bar is above their similarity.
    auto strict = clean::consolidate_similar(rows, {.threshold = 0.8});
    CHECK(strict.size() == 3);
}

TEST_CASE("consolidate_similar groups transitively") {
    std::vector<store::AssetRow> rows = {
        row("Grasberg mine", "", "", "copper", ""),
        row("Grasberg mine complex", "", "", "gold", ""),
        row("Grasberg mine", "", "", "silver", ""),
    };
    auto out = clean::consolidate_similar(rows, {.threshold = 0.5});
    REQUIRE(out.size() == 1);
    CHECK(out[0].physical_asset == "Grasberg mine complex");
    CHECK(out[0].commodity == "copper, gold, silver");
}

TEST_CASE("consolidate_similar never grows and is deterministic") {
    std::mt19937 rng(7);
    const std::vector<std::string> words = {"grasberg", "mine", "complex", "cerro",
                                            "verde",    "mill", "north",   "plant"};
    std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
    std::uniform_int_distribution<int> len(1, 3);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<store::AssetRow> rows;
        for (int i = 0; i < 12; ++i) {
            std::string name;
            int n = len(rng);
            for (int k = 0; k < n; ++k) name += (k ? " " : "") + words[pick(rng)];
            rows.push_back(row(name));
        }
        auto once = clean::consolidate_similar(rows, {.threshold = 0.6});
        auto twice = clean::consolidate_similar(rows, {.threshold = 0.6});
        CHECK(once.size() <= rows.size());
        CHECK(once == twice);
        // Re-consolidating the output never grows it either.
        CHECK(clean::consolidate_similar(once, {.threshold = 0.6}).size() <= once.size());
    }
}

TEST_CASE("consolidate_similar validates its threshold") {
    CHECK_THROWS_AS(clean::consolidate_similar({}, {.threshold = 0.0}), ConfigError);
    CHECK_THROWS_AS(clean::consolidate_similar({}, {.threshold = 1.5}), ConfigError);
    CHECK(clean::consolidate_similar({}, {.threshold = 1.0}).empty());
}

TEST_CASE("gazetteer finds countries on word boundaries") {
    CHECK(clean::gazetteer_countries("Lima, Peru") == "Peru");
    CHECK(clean::gazetteer_countries("operations in chile and PERU") == "Chile, Peru");
    CHECK(clean::gazetteer_countries("British Columbia, Canada") == "Canada");
    CHECK(clean::gazetteer_countries("Perumbakkam") .empty());  // substring, not a word
    CHECK(clean::gazetteer_countries("").empty());
    CHECK(clean::gazetteer_countries("somewhere offshore").empty());
}

TEST_CASE("gazetteer short codes are case-sensitive, full names are not") {
    CHECK(clean::gazetteer_countries("Nevada, US") == "USA");
    CHECK(clean::gazetteer_countries("give us a call").empty());
    CHECK(clean::gazetteer_countries("London, UK") == "United Kingdom");
    CHECK(clean::gazetteer_countries("Aberdeen, Scotland") == "United Kingdom");
    CHECK(clean::gazetteer_countries("united states of america") == "USA");
    CHECK(clean::gazetteer_countries("Dubai, UAE") == "United Arab Emirates");
}

TEST_CASE("gazetteer prefers the longest name on overlaps") {
    CHECK(clean::gazetteer_countries("Port Moresby, Papua New Guinea") == "Papua New Guinea");
    CHECK(clean::gazetteer_countries("Conakry, Guinea") == "Guinea");
    CHECK(clean::gazetteer_countries("Malabo, Equatorial Guinea") == "Equatorial Guinea");
    CHECK(clean::gazetteer_countries("Kinshasa, DRC") == "Democratic Republic of the Congo");
    // Repeats collapse to one mention.
    CHECK(clean::gazetteer_countries("Peru; also Peru") == "Peru");
}

TEST_CASE("extract_countries falls back to the model, then to N/A") {
    CHECK(clean::extract_countries("Lima, Peru") == "Peru");  // gazetteer wins, no gateway
    CHECK(clean::extract_countries("somewhere") == "N/A");
    CHECK(clean::extract_countries("") == "N/A");

    auto stub = std::make_shared<llm::StubProvider>();
    stub->add({"contains", "Location: the Andes", "Peru\n", 0, false});
    stub->add({"contains", "Location: the moon", "N/A", 0, false});
    llm::GatewayConfig gcfg;
    gcfg.retries = 1;
    llm::Gateway gw(stub, gcfg);

    CHECK(clean::extract_countries("the Andes", &gw, "cleaner") == "Peru");
    CHECK(clean::extract_countries("the moon", &gw, "cleaner") == "N/A");
    // Gazetteer hits never reach the model.
    CHECK(clean::extract_countries("Lima, Peru", &gw, "cleaner") == "Peru");
    int calls_before = stub->calls();
    // Model failure (no stub entry) degrades to N/A instead of throwing.
    CHECK(clean::extract_countries("unmapped place", &gw, "cleaner") == "N/A");
    CHECK(stub->calls() == calls_before + 1);
    // No model name → no call.
    CHECK(clean::extract_countries("unmapped place", &gw, "") == "N/A");
    CHECK(stub->calls() == calls_before + 1);
}

TEST_CASE("llm_clean_cell refines cells with guardrails") {
    auto stub = std::make_shared<llm::StubProvider>();
    stub->add({"contains", "Value: grasberg MINE", "Grasberg Mine\nextra commentary", 0, false});
    stub->add({"contains", "Value: operating-ish", "Not specified.", 0, false});
    stub->add({"contains", "Value: tiny", std::string(200, 'x'), 0, false});
    stub->add({"contains", "Value: echo", "   \n  echo cleaned  ", 0, false});
    llm::GatewayConfig gcfg;
    gcfg.retries = 1;
    llm::Gateway gw(stub, gcfg);

    CHECK(clean::llm_clean_cell("Physical Asset", "grasberg MINE", gw, "m") == "Grasberg Mine");
    CHECK(clean::llm_clean_cell("Status", "operating-ish", gw, "m").empty());
    // Answers vastly longer than the input keep the original value.
    CHECK(clean::llm_clean_cell("Commodity", "tiny", gw, "m") == "tiny");
    // Leading blank lines are skipped, the first real line is trimmed.
    CHECK(clean::llm_clean_cell("Location", "echo", gw, "m") == "echo cleaned");

    int calls_before = stub->calls();
    // Countries and empty values never reach the model.
    CHECK(clean::llm_clean_cell("Countries", "anything", gw, "m") == "anything");
    CHECK(clean::llm_clean_cell("Status", "   ", gw, "m") == "   ");
    CHECK(stub->calls() == calls_before);

    // Unlike country extraction, cell cleaning propagates model failures.
    CHECK_THROWS_AS(clean::llm_clean_cell("Status", "no stub entry", gw, "m"), LlmError);
}

TEST_CASE("phase1 standardizes, merges, fills countries, drops unnamed rows") {
    auto rules = clean::default_rules();
    std::vector<store::AssetRow> rows = {
        row("'Carlin' mine", "Nevada ,US", "the Company", "gold", ""),
        row("Carlin mine", "Nevada, USA", "NEWMONT CORPORATION", "silver", "Operational"),
        row("", "", "", "copper", ""),  // sparse commodity row: dropped at the end
    };
    auto out = clean::phase1(rows, rules);
    REQUIRE(out.size() == 1);
    CHECK(out[0].physical_asset == "Carlin mine");
    CHECK(out[0].location == "Nevada, US, USA");  // alias map is whole-value; parts stay
    CHECK(out[0].ownership == "Newmont Corporation");
    CHECK(out[0].commodity == "gold, silver");
    CHECK(out[0].status == "Operational");
    CHECK(out[0].countries == "USA");

    // Whole-value US spellings do get replaced before country lookup.
    auto usa = clean::phase1({row("Mill", "U.S.A.")}, rules);
    REQUIRE(usa.size() == 1);
    CHECK(usa[0].location == "USA");
    CHECK(usa[0].countries == "USA");

    // Locations the gazetteer cannot place come back as N/A.
    auto na = clean::phase1({row("Mill", "somewhere remote")}, rules);
    CHECK(na[0].countries == "N/A");
}

TEST_CASE("phase1 is idempotent") {
    auto rules = clean::default_rules();
    std::vector<store::AssetRow> rows = {
        row("'Carlin' \\mine", "Nevada ,US", "the Company", "gold , silver", ""),
        row("Carlin mine", "Nevada, USA", "Newmont", "gold", "Operational"),
        row("Yanacocha", "Peru", "we", "gold", ""),
        row("", "x", "y", "z", ""),
    };
    auto once = clean::phase1(rows, rules);
    auto twice = clean::phase1(once, rules);
    CHECK(once == twice);
}

TEST_CASE("phase2 applies the similarity merge") {
    std::vector<store::AssetRow> rows = {row("Grasberg mine"), row("Grasberg mine complex")};
    CHECK(clean::phase2(rows, {.threshold = 0.5}).size() == 1);
    CHECK(clean::phase2(rows, {.threshold = 0.99}).size() == 2);
}

TEST_CASE("phase3 cleans every column except countries") {
    auto stub = std::make_shared<llm::StubProvider>();
    stub->add({"contains", "Column: Physical Asset", "Carlin Mine", 0, false});
    stub->add({"contains", "Column: Location", "Nevada", 0, false});
    stub->add({"contains", "Column: Ownership", "Newmont Corporation", 0, false});
    stub->add({"contains", "Column: Commodity", "gold", 0, false});
    stub->add({"contains", "Column: Status", "Not specified", 0, false});
    llm::Gateway gw(stub);

    auto in = row("carlin MINE", "nevada usa", "newmont corp", "Gold (Au)", "status unclear");
    in.countries = "USA";
    auto out = clean::phase3({in}, gw, "m");
    REQUIRE(out.size() == 1);
    CHECK(out[0].physical_asset == "Carlin Mine");
    CHECK(out[0].location == "Nevada");
    CHECK(out[0].ownership == "Newmont Corporation");
    CHECK(out[0].commodity == "gold");
    CHECK(out[0].status.empty());
    CHECK(out[0].countries == "USA");  // untouched
    CHECK(stub->calls() == 5);
}
