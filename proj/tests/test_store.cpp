#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"

#include "assetdb/errors.hpp"
#include "assetdb/store.hpp"

using namespace assetdb;
namespace fs = std::filesystem;

namespace {

// Fresh directory per test case so databases never collide.
struct TempDir {
    fs::path path;
    TempDir() {
        static std::mt19937_64 rng(std::random_device{}());
        path = fs::temp_directory_path() /
               ("assetdb_store_" + std::to_string(rng()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string db(const std::string& company) const {
        return store::company_db_path(path.string(), company);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

extract::ExtractionRecord record_with_rel(const std::string& chunk_id,
                                          extract::Relationship rel) {
    extract::ExtractionRecord rec;
    rec.chunk_id = chunk_id;
    rec.model = "m";
    rec.template_id = "zero_shot";
    rec.relationships = {std::move(rel)};
    return rec;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("company_db_path sanitizes the company component") {
    CHECK(store::company_db_path("out/db", "ACU") == "out/db/ACU.db");
    CHECK(store::company_db_path("out", "a/b:c") == "out/a_b_c.db");
    CHECK(store::company_db_path("out", "") == "out/company.db");
}

TEST_CASE("opening a missing database without create fails") {
    TempDir tmp;
    CHECK_THROWS_AS(store::CompanyStore(tmp.db("ACU"), "ACU", /*create=*/false), StoreError);
    {
        store::CompanyStore created(tmp.db("ACU"), "ACU");
        CHECK(created.schema_version() == 1);
    }
    // Now the file exists; reopening without create works and re-migration is a no-op.
    store::CompanyStore reopened(tmp.db("ACU"), "ACU", /*create=*/false);
    CHECK(reopened.schema_version() == 1);
    CHECK(reopened.company() == "ACU");
}

TEST_CASE("filings round-trip including tables") {
    TempDir tmp;
    store::CompanyStore db(tmp.db("ACU"), "ACU");

    ingest::Filing f;
    f.id = "acu-2023";
    f.ticker = "ACU";
    f.cik = "0000777001";
    f.form_type = "10-K";
    f.filing_date = "2024-02-15";
    f.date_known = true;
    f.source_uri = "fixtures/mini_10k.html";
    f.body = "Item 2. Properties\nSome text with a \"quote\".";
    ingest::TableRecord t;
    t.table_index = 0;
    t.header = {"Plant", "State"};
    t.rows = {{"Wateree", "SC"}};
    t.linearized = {"Plant: Wateree; State: SC"};
    t.padded = false;
    f.tables = {t};
    db.put_filing(f);

    auto got = db.get_filing("acu-2023");
    REQUIRE(got.has_value());
    CHECK(got->ticker == "ACU");
    CHECK(got->body == f.body);
    REQUIRE(got->tables.size() == 1);
    CHECK(got->tables[0].header == t.header);
    CHECK(got->tables[0].rows == t.rows);
    CHECK(got->tables[0].linearized == t.linearized);

    CHECK_FALSE(db.get_filing("nope").has_value());

    ingest::Filing g;
    g.id = "acu-2021";
    db.put_filing(g);
    CHECK(db.filing_ids() == std::vector<std::string>{"acu-2021", "acu-2023"});

    // Same id again replaces rather than duplicating.
    f.body = "updated";
    db.put_filing(f);
    CHECK(db.filing_ids().size() == 2);
    CHECK(db.get_filing("acu-2023")->body == "updated");
}

TEST_CASE("chunks round-trip in sequence order") {
    TempDir tmp;
    store::CompanyStore db(tmp.db("ACU"), "ACU");
    ingest::Filing f;
    f.id = "fil";
    db.put_filing(f);

    chunker::Chunk a{.filing_id = "fil", .seq = 1, .text = "second", .token_count = 1,
                     .start_token = 5};
    chunker::Chunk b{.filing_id = "fil", .seq = 0, .text = "first", .token_count = 1,
                     .start_token = 0};
    db.put_chunks({a, b});

    auto got = db.get_chunks("fil");
    REQUIRE(got.size() == 2);
    CHECK(got[0].text == "first");
    CHECK(got[1].text == "second");
    CHECK(got[1].start_token == 5);
    CHECK(db.get_chunks("other").empty());

    // Re-putting the same ids overwrites in place.
    a.text = "second v2";
    db.put_chunks({a});
    got = db.get_chunks("fil");
    REQUIRE(got.size() == 2);
    CHECK(got[1].text == "second v2");
}

TEST_CASE("extraction records round-trip and overwrite by key") {
    TempDir tmp;
    store::CompanyStore db(tmp.db("ACU"), "ACU");

    extract::ExtractionRecord rec;
    rec.chunk_id = "fil:0";
    rec.model = "m1";
    rec.template_id = "zero_shot";
    rec.physical_assets = {"Mine X"};
    rec.locations = {"Peru"};
    rec.commodities = {"copper"};
    rec.relationships = {{"Mine X", "Peru", "", "copper", ""}};
    rec.raw_response = "physical assets: [Mine X]";
    rec.parse_warning = false;
    db.put_extraction(rec);

    extract::ExtractionRecord warn;
    warn.chunk_id = "fil:0";
    warn.model = "m2";
    warn.template_id = "zero_shot";
    warn.raw_response = "no entities here";
    warn.parse_warning = true;
    db.put_extraction(warn);

    auto all = db.get_extractions();
    REQUIRE(all.size() == 2);
    CHECK(all[0].model == "m1");  // ordered by chunk_id, model, template_id
    CHECK(all[0].physical_assets == rec.physical_assets);
    CHECK(all[0].relationships == rec.relationships);
    CHECK(all[0].raw_response == rec.raw_response);
    CHECK(all[1].parse_warning);

    // Same key overwrites.
    rec.physical_assets = {"Mine Y"};
    db.put_extraction(rec);
    auto for_chunk = db.get_extractions_for_chunk("fil:0");
    REQUIRE(for_chunk.size() == 2);
    CHECK(for_chunk[0].physical_assets == std::vector<std::string>{"Mine Y"});
    CHECK(db.get_extractions_for_chunk("fil:9").empty());
}

TEST_CASE("upsert fans out relationships plus uncovered entities") {
    TempDir tmp;
    store::CompanyStore db(tmp.db("ACU"), "ACU");

    extract::ExtractionRecord rec;
    rec.chunk_id = "fil:0";
    rec.physical_assets = {"Mine X", "Standalone Plant"};
    rec.locations = {"Peru"};
    rec.commodities = {"copper", "gold", "silver"};
    rec.relationships = {{"Mine X", "Peru", "Acme", "copper, gold", ""}};

    CHECK(db.upsert_assets({rec}) == 3);
    auto rows = db.query_assets();
    REQUIRE(rows.size() == 3);
    // Row 1: the relationship.
    CHECK(rows[0].physical_asset == "Mine X");
    CHECK(rows[0].location == "Peru");
    CHECK(rows[0].ownership == "Acme");
    CHECK(rows[0].commodity == "copper, gold");
    CHECK(rows[0].source_chunk_ids == std::vector<std::string>{"fil:0"});
    // Row 2: asset not covered by any relationship.
    CHECK(rows[1].physical_asset == "Standalone Plant");
    CHECK(rows[1].location.empty());
    // Row 3: "silver" is the only commodity no relationship covers
    // ("copper, gold" covers both of its parts).
    CHECK(rows[2].commodity == "silver");
    CHECK(rows[2].physical_asset.empty());
    CHECK(rows[2].company == "ACU");
}

TEST_CASE("upsert is idempotent and merges on the natural key") {
    TempDir tmp;
    store::CompanyStore db(tmp.db("ACU"), "ACU");

    auto first = record_with_rel("fil:0", {"Mine X", "Peru", "Acme", "copper", ""});
    CHECK(db.upsert_assets({first}) == 1);
    CHECK(db.upsert_assets({first}) == 0);  // exact repeat adds nothing
    CHECK(db.query_assets().size() == 1);

    // Same asset/location/ownership up to case and spacing: merges in place.
    auto second = record_with_rel("fil:1", {"MINE  x", "peru", "ACME", "gold", "Operational"});
    CHECK(db.upsert_assets({second}) == 0);
    auto rows = db.query_assets();
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].physical_asset == "Mine X");       // first spelling kept
    CHECK(rows[0].commodity == "copper, gold");      // union, order preserved
    CHECK(rows[0].status == "Operational");          // filled only while empty
    CHECK(rows[0].source_chunk_ids == std::vector<std::string>{"fil:0", "fil:1"});

    // A later, different status does not overwrite the stored one.
    auto third = record_with_rel("fil:2", {"Mine X", "Peru", "Acme", "", "Closed"});
    db.upsert_assets({third});
    rows = db.query_assets();
    CHECK(rows[0].status == "Operational");
    CHECK(rows[0].source_chunk_ids ==
          std::vector<std::string>{"fil:0", "fil:1", "fil:2"});
}

TEST_CASE("sparse single-column rows keep distinct keys") {
    TempDir tmp;
    store::CompanyStore db(tmp.db("ACU"), "ACU");

    extract::ExtractionRecord copper, gold;
    copper.chunk_id = "fil:0";
    copper.commodities = {"copper"};
    gold.chunk_id = "fil:0";
    gold.commodities = {"gold"};

    CHECK(db.upsert_assets({copper, gold}) == 2);  // not collapsed onto one empty key
    CHECK(db.upsert_assets({copper}) == 0);        // but still idempotent
    CHECK(db.query_assets().size() == 2);
}

TEST_CASE("query filters by presence and substring") {
    TempDir tmp;
    store::CompanyStore db(tmp.db("ACU"), "ACU");
    extract::ExtractionRecord rec;
    rec.chunk_id = "fil:0";
    rec.physical_assets = {"Grasberg mine", "Cerro Verde"};
    rec.commodities = {"copper"};
    db.upsert_assets({rec});

    store::AssetFilter named;
    named.require_asset = true;
    CHECK(db.query_assets(named).size() == 2);  // commodity-only row dropped
    CHECK(db.query_assets().size() == 3);

    store::AssetFilter grasberg;
    grasberg.asset_contains = "GRASBERG";
    auto rows = db.query_assets(grasberg);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].physical_asset == "Grasberg mine");
}

TEST_CASE("replace_assets renumbers rows and clears stale payloads") {
    TempDir tmp;
    store::CompanyStore db(tmp.db("ACU"), "ACU");
    db.upsert_assets({record_with_rel("fil:0", {"Mine X", "Peru", "", "copper", ""})});
    long long old_id = db.query_assets()[0].id;
    db.save_match_payload(old_id, R"({"k":1})");
    db.save_rav_payload(old_id, R"({"k":2})");

    store::AssetRow a;
    a.physical_asset = "Consolidated Mine";
    a.location = "Peru";
    a.countries = "Peru";
    a.source_chunk_ids = {"fil:0", "fil:1"};
    store::AssetRow b;
    b.physical_asset = "Other Plant";
    db.replace_assets({a, b});

    auto rows = db.query_assets();
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].id == 1);
    CHECK(rows[1].id == 2);
    CHECK(rows[0].company == "ACU");  // filled in when the row leaves it blank
    CHECK(rows[0].source_chunk_ids == std::vector<std::string>{"fil:0", "fil:1"});
    CHECK_FALSE(db.get_match_payload(old_id).has_value());
    CHECK_FALSE(db.get_rav_payload(old_id).has_value());

    auto got = db.get_asset(2);
    REQUIRE(got.has_value());
    CHECK(got->physical_asset == "Other Plant");
    CHECK_FALSE(db.get_asset(99).has_value());
}

TEST_CASE("update_asset edits by id and rejects unknown ids") {
    TempDir tmp;
    store::CompanyStore db(tmp.db("ACU"), "ACU");
    db.upsert_assets({record_with_rel("fil:0", {"Mine X", "Peru", "", "copper", ""})});
    auto row = db.query_assets()[0];
    row.countries = "Peru";
    row.status = "Operational";
    db.update_asset(row);
    CHECK(db.get_asset(row.id)->countries == "Peru");

    row.id = 424242;
    CHECK_THROWS_AS(db.update_asset(row), StoreError);
}

TEST_CASE("match and rav payloads round-trip and overwrite") {
    TempDir tmp;
    store::CompanyStore db(tmp.db("ACU"), "ACU");
    CHECK_FALSE(db.get_match_payload(1).has_value());
    db.save_match_payload(1, "{\"a\":1}");
    db.save_match_payload(1, "{\"a\":2}");
    CHECK(db.get_match_payload(1) == "{\"a\":2}");
    db.save_rav_payload(1, "{\"b\":1}");
    CHECK(db.get_rav_payload(1) == "{\"b\":1}");
}

TEST_CASE("csv export is deterministic and quotes per the rules") {
    TempDir tmp;
    store::CompanyStore db(tmp.db("ACU"), "ACU");
    store::AssetRow a;
    a.company = "ACU";
    a.physical_asset = "Mine \"X\", phase 2";
    a.location = "Lima, Peru";
    a.countries = "Peru";
    a.commodity = "copper";
    a.source_chunk_ids = {"fil:0", "fil:1"};
    db.replace_assets({a});

    std::string out = tmp.file("assets.csv");
    db.export_csv(out);
    std::string expected =
        "id,company,physical_asset,location,countries,ownership,commodity,status,"
        "source_chunk_ids\n"
        "1,ACU,\"Mine \"\"X\"\", phase 2\",\"Lima, Peru\",Peru,,copper,,\"fil:0,fil:1\"\n";
    CHECK(slurp(out) == expected);

    db.export_csv(tmp.file("again.csv"));
    CHECK(slurp(tmp.file("again.csv")) == expected);  // byte-stable
}

TEST_CASE("jsonl export/import round-trips every column") {
    TempDir tmp;
    store::CompanyStore db(tmp.db("ACU"), "ACU");
    store::AssetRow a;
    a.company = "ACU";
    a.physical_asset = "Mine X";
    a.location = "Lima, Peru";
    a.countries = "Peru";
    a.ownership = "Acme";
    a.commodity = "copper, gold";
    a.status = "Operational";
    a.source_chunk_ids = {"fil:0"};
    store::AssetRow b;
    b.company = "ACU";
    b.commodity = "silver";
    db.replace_assets({a, b});

    std::string path = tmp.file("assets.jsonl");
    db.export_jsonl(path);

    store::CompanyStore fresh(tmp.db("ACU2"), "ACU2");
    CHECK(fresh.import_jsonl(path) == 2);
    auto rows = fresh.query_assets();
    auto original = db.query_assets();
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == original[0]);
    CHECK(rows[1] == original[1]);

    // Imported ids are preserved, so a re-import of the same ids must fail
    // loudly rather than silently duplicating.
    CHECK_THROWS_AS(fresh.import_jsonl(path), StoreError);

    // Blank lines are skipped; malformed JSON names the offending line.
    std::string bad = tmp.file("bad.jsonl");
    {
        std::ofstream out(bad, std::ios::binary);
        out << "\n{not json}\n";
    }
    store::CompanyStore fresh2(tmp.db("ACU3"), "ACU3");
    CHECK_THROWS_WITH_AS(fresh2.import_jsonl(bad), doctest::Contains(":2"), StoreError);
}
