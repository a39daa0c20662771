#include "assetdb/store.hpp"

#include <sqlite3.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>

#include "assetdb/csv.hpp"
#include "assetdb/errors.hpp"
#include "assetdb/text.hpp"
#include "json.hpp"

namespace assetdb::store {

namespace {

using nlohmann::json;

// RAII wrapper over sqlite3_stmt with 1-based binds.
class Stmt {
public:
    Stmt(sqlite3* db, const std::string& sql) : db_(db) {
        if (sqlite3_prepare_v2(db, sql.c_str(), -1, &stmt_, nullptr) != SQLITE_OK) {
            throw StoreError("sqlite prepare failed: " + std::string(sqlite3_errmsg(db)) +
                             " (sql: " + sql + ")");
        }
    }
    ~Stmt() { sqlite3_finalize(stmt_); }
    Stmt(const Stmt&) = delete;
    Stmt& operator=(const Stmt&) = delete;

    Stmt& bind(int idx, const std::string& v) {
        check(sqlite3_bind_text(stmt_, idx, v.c_str(), static_cast<int>(v.size()),
                                SQLITE_TRANSIENT));
        return *this;
    }
    Stmt& bind(int idx, long long v) {
        check(sqlite3_bind_int64(stmt_, idx, v));
        return *this;
    }
    Stmt& bind(int idx, int v) {
        check(sqlite3_bind_int(stmt_, idx, v));
        return *this;
    }

    // Makes the statement reusable for the next row.
    void reset() {
        sqlite3_reset(stmt_);
        sqlite3_clear_bindings(stmt_);
    }

    // True while a row is available.
    bool step() {
        int rc = sqlite3_step(stmt_);
        if (rc == SQLITE_ROW) return true;
        if (rc == SQLITE_DONE) return false;
        throw StoreError("sqlite step failed: " + std::string(sqlite3_errmsg(db_)));
    }

    std::string col_text(int i) const {
        const unsigned char* p = sqlite3_column_text(stmt_, i);
        return p ? reinterpret_cast<const char*>(p) : "";
    }
    long long col_int64(int i) const { return sqlite3_column_int64(stmt_, i); }
    int col_int(int i) const { return sqlite3_column_int(stmt_, i); }

private:
    void check(int rc) {
        if (rc != SQLITE_OK)
            throw StoreError("sqlite bind failed: " + std::string(sqlite3_errmsg(db_)));
    }

    sqlite3* db_;
    sqlite3_stmt* stmt_ = nullptr;
};

// Scoped transaction; rolls back unless commit() ran.
class Transaction {
public:
    explicit Transaction(const std::function<void(const std::string&)>& exec) : exec_(exec) {
        exec_("BEGIN");
    }
    ~Transaction() {
        if (!done_) {
            try {
                exec_("ROLLBACK");
            } catch (...) {
            }
        }
    }
    void commit() {
        exec_("COMMIT");
        done_ = true;
    }

private:
    const std::function<void(const std::string&)>& exec_;
    bool done_ = false;
};

const char kKeySep = '\x1f';

std::string natural_key(const AssetRow& row) {
    std::string key = extract::voting_normalize(row.physical_asset) + kKeySep +
                      extract::voting_normalize(row.location) + kKeySep +
                      extract::voting_normalize(row.ownership);
    // Rows carrying only a commodity or status would otherwise all collapse
    // onto the empty key; extend it so they stay distinct.
    if (key == std::string(2, kKeySep)) {
        key += extract::voting_normalize(row.commodity) + kKeySep +
               extract::voting_normalize(row.status);
    }
    return key;
}

std::string join_ids(const std::vector<std::string>& ids) {
    return text::join(ids, ",");
}

std::vector<std::string> split_ids(const std::string& joined) {
    if (joined.empty()) return {};
    return text::split_and_trim(joined, ',');
}

std::vector<std::string> merge_ids(std::vector<std::string> ids, const std::string& extra) {
    if (!extra.empty()) ids.push_back(extra);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

json tables_to_json(const std::vector<ingest::TableRecord>& tables) {
    json arr = json::array();
    for (const auto& t : tables) {
        arr.push_back({{"table_index", t.table_index},
                       {"header", t.header},
                       {"rows", t.rows},
                       {"linearized", t.linearized},
                       {"padded", t.padded}});
    }
    return arr;
}

std::vector<ingest::TableRecord> tables_from_json(const json& arr) {
    std::vector<ingest::TableRecord> tables;
    for (const auto& item : arr) {
        ingest::TableRecord t;
        t.table_index = item.value("table_index", 0);
        t.header = item.value("header", std::vector<std::string>{});
        t.rows = item.value("rows", std::vector<std::vector<std::string>>{});
        t.linearized = item.value("linearized", std::vector<std::string>{});
        t.padded = item.value("padded", false);
        tables.push_back(std::move(t));
    }
    return tables;
}

json record_to_json(const extract::ExtractionRecord& r) {
    json rels = json::array();
    for (const auto& rel : r.relationships) {
        rels.push_back({{"asset", rel.asset},
                        {"location", rel.location},
                        {"ownership", rel.ownership},
                        {"commodity", rel.commodity},
                        {"status", rel.status}});
    }
    return {{"physical_assets", r.physical_assets},
            {"locations", r.locations},
            {"ownerships", r.ownerships},
            {"commodities", r.commodities},
            {"statuses", r.statuses},
            {"relationships", rels},
            {"raw_response", r.raw_response},
            {"parse_warning", r.parse_warning}};
}

extract::ExtractionRecord record_from_json(const json& j) {
    extract::ExtractionRecord r;
    r.physical_assets = j.value("physical_assets", std::vector<std::string>{});
    r.locations = j.value("locations", std::vector<std::string>{});
    r.ownerships = j.value("ownerships", std::vector<std::string>{});
    r.commodities = j.value("commodities", std::vector<std::string>{});
    r.statuses = j.value("statuses", std::vector<std::string>{});
    for (const auto& item : j.value("relationships", json::array())) {
        extract::Relationship rel;
        rel.asset = item.value("asset", "");
        rel.location = item.value("location", "");
        rel.ownership = item.value("ownership", "");
        rel.commodity = item.value("commodity", "");
        rel.status = item.value("status", "");
        r.relationships.push_back(std::move(rel));
    }
    r.raw_response = j.value("raw_response", "");
    r.parse_warning = j.value("parse_warning", false);
    return r;
}

// Rows an extraction record expands to: one per relationship, plus one sparse
// row per entity no relationship already accounts for.
struct PendingRow {
    std::string asset, location, ownership, commodity, status, chunk_id;
};

// Normalized forms covered by relationship field values; comma-separated
// values cover each part as well as the whole ("copper, gold" covers both).
std::set<std::string> covered_forms(const std::vector<extract::Relationship>& rels,
                                    std::string extract::Relationship::*field) {
    std::set<std::string> out;
    for (const auto& rel : rels) {
        const std::string& value = rel.*field;
        if (value.empty()) continue;
        out.insert(extract::voting_normalize(value));
        for (const auto& part : text::split_and_trim(value, ','))
            out.insert(extract::voting_normalize(part));
    }
    return out;
}

std::vector<PendingRow> fan_out(const extract::ExtractionRecord& record) {
    std::vector<PendingRow> rows;
    for (const auto& rel : record.relationships) {
        rows.push_back({rel.asset, rel.location, rel.ownership, rel.commodity, rel.status,
                        record.chunk_id});
    }
    struct ListField {
        const std::vector<std::string>& entities;
        std::string extract::Relationship::*field;
        std::string PendingRow::*slot;
    };
    const ListField fields[] = {
        {record.physical_assets, &extract::Relationship::asset, &PendingRow::asset},
        {record.locations, &extract::Relationship::location, &PendingRow::location},
        {record.ownerships, &extract::Relationship::ownership, &PendingRow::ownership},
        {record.commodities, &extract::Relationship::commodity, &PendingRow::commodity},
        {record.statuses, &extract::Relationship::status, &PendingRow::status},
    };
    for (const auto& f : fields) {
        std::set<std::string> covered = covered_forms(record.relationships, f.field);
        for (const auto& entity : f.entities) {
            if (covered.count(extract::voting_normalize(entity))) continue;
            PendingRow sparse;
            sparse.*(f.slot) = entity;
            sparse.chunk_id = record.chunk_id;
            rows.push_back(std::move(sparse));
        }
    }
    return rows;
}

// Merges comma-separated values, appending parts of `incoming` that are not
// already present. Preserves the existing spelling and order.
std::string merge_list_field(const std::string& existing, const std::string& incoming) {
    if (existing.empty()) return incoming;
    if (incoming.empty()) return existing;
    std::set<std::string> seen;
    for (const auto& part : text::split_and_trim(existing, ','))
        seen.insert(extract::voting_normalize(part));
    std::string out = existing;
    for (const auto& part : text::split_and_trim(incoming, ',')) {
        if (seen.insert(extract::voting_normalize(part)).second) out += ", " + part;
    }
    return out;
}

std::string sanitize_component(const std::string& name) {
    std::string out;
    for (char c : name) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                  c == '-' || c == '_' || c == '.';
        out.push_back(ok ? c : '_');
    }
    return out.empty() ? "company" : out;
}

const std::vector<std::string>& migrations_sql() {
    // One entry per schema version, applied in order; never edit shipped
    // entries, append a new version instead.
    static const std::vector<std::string> kMigrations = {
        // v1: initial schema
        "CREATE TABLE filings ("
        "  id TEXT PRIMARY KEY,"
        "  ticker TEXT NOT NULL DEFAULT '',"
        "  cik TEXT NOT NULL DEFAULT '',"
        "  form_type TEXT NOT NULL DEFAULT 'UNKNOWN',"
        "  filing_date TEXT NOT NULL DEFAULT '',"
        "  date_known INTEGER NOT NULL DEFAULT 0,"
        "  source_uri TEXT NOT NULL DEFAULT '',"
        "  body TEXT NOT NULL DEFAULT '',"
        "  tables_json TEXT NOT NULL DEFAULT '[]');"
        "CREATE TABLE chunks ("
        "  id TEXT PRIMARY KEY,"
        "  filing_id TEXT NOT NULL REFERENCES filings(id),"
        "  seq INTEGER NOT NULL,"
        "  text TEXT NOT NULL,"
        "  token_count INTEGER NOT NULL,"
        "  start_token INTEGER NOT NULL);"
        "CREATE TABLE extractions ("
        "  chunk_id TEXT NOT NULL,"
        "  model TEXT NOT NULL,"
        "  template_id TEXT NOT NULL,"
        "  payload TEXT NOT NULL,"
        "  PRIMARY KEY (chunk_id, model, template_id));"
        "CREATE TABLE assets ("
        "  id INTEGER PRIMARY KEY AUTOINCREMENT,"
        "  company TEXT NOT NULL DEFAULT '',"
        "  physical_asset TEXT NOT NULL DEFAULT '',"
        "  location TEXT NOT NULL DEFAULT '',"
        "  countries TEXT NOT NULL DEFAULT '',"
        "  ownership TEXT NOT NULL DEFAULT '',"
        "  commodity TEXT NOT NULL DEFAULT '',"
        "  status TEXT NOT NULL DEFAULT '',"
        "  source_chunk_ids TEXT NOT NULL DEFAULT '',"
        "  natural_key TEXT NOT NULL DEFAULT '');"
        "CREATE INDEX idx_assets_natural_key ON assets(natural_key);"
        "CREATE TABLE match_payloads ("
        "  asset_id INTEGER PRIMARY KEY,"
        "  payload TEXT NOT NULL);"
        "CREATE TABLE rav_payloads ("
        "  asset_id INTEGER PRIMARY KEY,"
        "  payload TEXT NOT NULL);",
    };
    return kMigrations;
}

json row_to_json(const AssetRow& row) {
    return {{"id", row.id},
            {"company", row.company},
            {"physical_asset", row.physical_asset},
            {"location", row.location},
            {"countries", row.countries},
            {"ownership", row.ownership},
            {"commodity", row.commodity},
            {"status", row.status},
            {"source_chunk_ids", row.source_chunk_ids}};
}

AssetRow row_from_json(const json& j) {
    AssetRow row;
    row.id = j.value("id", 0LL);
    row.company = j.value("company", "");
    row.physical_asset = j.value("physical_asset", "");
    row.location = j.value("location", "");
    row.countries = j.value("countries", "");
    row.ownership = j.value("ownership", "");
    row.commodity = j.value("commodity", "");
    row.status = j.value("status", "");
    row.source_chunk_ids = j.value("source_chunk_ids", std::vector<std::string>{});
    return row;
}

}  // namespace

std::string company_db_path(const std::string& dir, const std::string& company) {
    return (std::filesystem::path(dir) / (sanitize_component(company) + ".db")).string();
}

CompanyStore::CompanyStore(const std::string& db_path, std::string company, bool create)
    : company_(std::move(company)) {
    if (!create && !std::filesystem::exists(db_path)) {
        throw StoreError("no database for company '" + company_ + "' at " + db_path);
    }
    int flags = SQLITE_OPEN_READWRITE | SQLITE_OPEN_FULLMUTEX;
    if (create) flags |= SQLITE_OPEN_CREATE;
    if (sqlite3_open_v2(db_path.c_str(), &db_, flags, nullptr) != SQLITE_OK) {
        std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
        if (db_) sqlite3_close(db_);
        db_ = nullptr;
        throw StoreError("cannot open " + db_path + ": " + msg);
    }
    exec("PRAGMA foreign_keys = ON");
    migrate();
}

CompanyStore::~CompanyStore() {
    if (db_) sqlite3_close(db_);
}

void CompanyStore::exec(const std::string& sql) {
    char* err = nullptr;
    if (sqlite3_exec(db_, sql.c_str(), nullptr, nullptr, &err) != SQLITE_OK) {
        std::string msg = err ? err : "unknown sqlite error";
        sqlite3_free(err);
        throw StoreError("sqlite exec failed: " + msg + " (sql: " + sql + ")");
    }
}

void CompanyStore::migrate() {
    exec("CREATE TABLE IF NOT EXISTS migrations ("
         "  version INTEGER PRIMARY KEY,"
         "  applied_at TEXT NOT NULL)");
    int current = schema_version();
    const auto& all = migrations_sql();
    for (std::size_t v = static_cast<std::size_t>(current); v < all.size(); ++v) {
        std::function<void(const std::string&)> runner = [this](const std::string& s) {
            exec(s);
        };
        Transaction tx(runner);
        exec(all[v]);
        Stmt ins(db_, "INSERT INTO migrations(version, applied_at) VALUES (?1, datetime('now'))");
        ins.bind(1, static_cast<long long>(v + 1));
        ins.step();
        tx.commit();
    }
}

int CompanyStore::schema_version() const {
    Stmt q(db_, "SELECT COALESCE(MAX(version), 0) FROM migrations");
    q.step();
    return q.col_int(0);
}

void CompanyStore::put_filing(const ingest::Filing& filing) {
    if (filing.id.empty()) throw StoreError("cannot store a filing without an id");
    Stmt s(db_,
           "INSERT OR REPLACE INTO filings"
           " (id, ticker, cik, form_type, filing_date, date_known, source_uri, body,"
           "  tables_json)"
           " VALUES (?1,?2,?3,?4,?5,?6,?7,?8,?9)");
    s.bind(1, filing.id)
        .bind(2, filing.ticker)
        .bind(3, filing.cik)
        .bind(4, filing.form_type)
        .bind(5, filing.filing_date)
        .bind(6, filing.date_known ? 1 : 0)
        .bind(7, filing.source_uri)
        .bind(8, filing.body)
        .bind(9, tables_to_json(filing.tables).dump());
    s.step();
}

std::optional<ingest::Filing> CompanyStore::get_filing(const std::string& filing_id) {
    Stmt q(db_,
           "SELECT id, ticker, cik, form_type, filing_date, date_known, source_uri, body,"
           " tables_json FROM filings WHERE id = ?1");
    q.bind(1, filing_id);
    if (!q.step()) return std::nullopt;
    ingest::Filing f;
    f.id = q.col_text(0);
    f.ticker = q.col_text(1);
    f.cik = q.col_text(2);
    f.form_type = q.col_text(3);
    f.filing_date = q.col_text(4);
    f.date_known = q.col_int(5) != 0;
    f.source_uri = q.col_text(6);
    f.body = q.col_text(7);
    try {
        f.tables = tables_from_json(json::parse(q.col_text(8)));
    } catch (const json::exception& e) {
        throw StoreError("corrupt tables_json for filing " + filing_id + ": " + e.what());
    }
    return f;
}

std::vector<std::string> CompanyStore::filing_ids() {
    std::vector<std::string> ids;
    Stmt q(db_, "SELECT id FROM filings ORDER BY id");
    while (q.step()) ids.push_back(q.col_text(0));
    return ids;
}

void CompanyStore::put_chunks(const std::vector<chunker::Chunk>& chunks) {
    std::function<void(const std::string&)> runner = [this](const std::string& s) { exec(s); };
    Transaction tx(runner);
    Stmt row(db_,
             "INSERT OR REPLACE INTO chunks (id, filing_id, seq, text, token_count, start_token)"
             " VALUES (?1,?2,?3,?4,?5,?6)");
    for (const auto& c : chunks) {
        row.bind(1, chunker::chunk_id(c))
            .bind(2, c.filing_id)
            .bind(3, c.seq)
            .bind(4, c.text)
            .bind(5, c.token_count)
            .bind(6, c.start_token);
        row.step();
        row.reset();
    }
    tx.commit();
}

std::vector<chunker::Chunk> CompanyStore::get_chunks(const std::string& filing_id) {
    std::vector<chunker::Chunk> out;
    Stmt q(db_,
           "SELECT filing_id, seq, text, token_count, start_token FROM chunks"
           " WHERE filing_id = ?1 ORDER BY seq");
    q.bind(1, filing_id);
    while (q.step()) {
        chunker::Chunk c;
        c.filing_id = q.col_text(0);
        c.seq = q.col_int(1);
        c.text = q.col_text(2);
        c.token_count = q.col_int(3);
        c.start_token = q.col_int(4);
        out.push_back(std::move(c));
    }
    return out;
}

void CompanyStore::put_extraction(const extract::ExtractionRecord& record) {
    Stmt s(db_,
           "INSERT OR REPLACE INTO extractions (chunk_id, model, template_id, payload)"
           " VALUES (?1,?2,?3,?4)");
    s.bind(1, record.chunk_id)
        .bind(2, record.model)
        .bind(3, record.template_id)
        .bind(4, record_to_json(record).dump());
    s.step();
}

namespace {
extract::ExtractionRecord extraction_from_row(const Stmt& q) {
    extract::ExtractionRecord r;
    try {
        r = record_from_json(json::parse(q.col_text(3)));
    } catch (const json::exception& e) {
        throw StoreError(std::string("corrupt extraction payload: ") + e.what());
    }
    r.chunk_id = q.col_text(0);
    r.model = q.col_text(1);
    r.template_id = q.col_text(2);
    return r;
}
}  // namespace

std::vector<extract::ExtractionRecord> CompanyStore::get_extractions() {
    std::vector<extract::ExtractionRecord> out;
    Stmt q(db_,
           "SELECT chunk_id, model, template_id, payload FROM extractions"
           " ORDER BY chunk_id, model, template_id");
    while (q.step()) out.push_back(extraction_from_row(q));
    return out;
}

std::vector<extract::ExtractionRecord> CompanyStore::get_extractions_for_chunk(
    const std::string& chunk_id) {
    std::vector<extract::ExtractionRecord> out;
    Stmt q(db_,
           "SELECT chunk_id, model, template_id, payload FROM extractions"
           " WHERE chunk_id = ?1 ORDER BY model, template_id");
    q.bind(1, chunk_id);
    while (q.step()) out.push_back(extraction_from_row(q));
    return out;
}

int CompanyStore::upsert_assets(const std::vector<extract::ExtractionRecord>& records) {
    std::function<void(const std::string&)> runner = [this](const std::string& s) { exec(s); };
    Transaction tx(runner);
    int inserted = 0;
    for (const auto& record : records) {
        for (const auto& pending : fan_out(record)) {
            AssetRow row;
            row.company = company_;
            row.physical_asset = pending.asset;
            row.location = pending.location;
            row.ownership = pending.ownership;
            row.commodity = pending.commodity;
            row.status = pending.status;
            std::string key = natural_key(row);

            Stmt find(db_,
                      "SELECT id, commodity, status, source_chunk_ids FROM assets"
                      " WHERE natural_key = ?1 ORDER BY id LIMIT 1");
            find.bind(1, key);
            if (find.step()) {
                long long id = find.col_int64(0);
                std::string commodity = merge_list_field(find.col_text(1), pending.commodity);
                std::string status = find.col_text(2);
                if (status.empty()) status = pending.status;
                std::string ids =
                    join_ids(merge_ids(split_ids(find.col_text(3)), pending.chunk_id));
                Stmt upd(db_,
                         "UPDATE assets SET commodity = ?1, status = ?2,"
                         " source_chunk_ids = ?3 WHERE id = ?4");
                upd.bind(1, commodity).bind(2, status).bind(3, ids).bind(4, id);
                upd.step();
            } else {
                Stmt ins(db_,
                         "INSERT INTO assets (company, physical_asset, location, countries,"
                         " ownership, commodity, status, source_chunk_ids, natural_key)"
                         " VALUES (?1,?2,?3,?4,?5,?6,?7,?8,?9)");
                ins.bind(1, row.company)
                    .bind(2, row.physical_asset)
                    .bind(3, row.location)
                    .bind(4, std::string())
                    .bind(5, row.ownership)
                    .bind(6, row.commodity)
                    .bind(7, row.status)
                    .bind(8, join_ids(merge_ids({}, pending.chunk_id)))
                    .bind(9, key);
                ins.step();
                ++inserted;
            }
        }
    }
    tx.commit();
    return inserted;
}

namespace {
AssetRow asset_from_row(const Stmt& q) {
    AssetRow row;
    row.id = q.col_int64(0);
    row.company = q.col_text(1);
    row.physical_asset = q.col_text(2);
    row.location = q.col_text(3);
    row.countries = q.col_text(4);
    row.ownership = q.col_text(5);
    row.commodity = q.col_text(6);
    row.status = q.col_text(7);
    row.source_chunk_ids = split_ids(q.col_text(8));
    return row;
}
const char* kAssetColumns =
    "id, company, physical_asset, location, countries, ownership, commodity, status,"
    " source_chunk_ids";
}  // namespace

std::vector<AssetRow> CompanyStore::query_assets(const AssetFilter& filter) {
    std::vector<AssetRow> out;
    Stmt q(db_, std::string("SELECT ") + kAssetColumns + " FROM assets ORDER BY id");
    while (q.step()) {
        AssetRow row = asset_from_row(q);
        if (filter.require_asset && row.physical_asset.empty()) continue;
        if (!filter.asset_contains.empty()) {
            std::string hay = text::to_lower(row.physical_asset);
            if (hay.find(text::to_lower(filter.asset_contains)) == std::string::npos) continue;
        }
        out.push_back(std::move(row));
    }
    return out;
}

std::optional<AssetRow> CompanyStore::get_asset(long long id) {
    Stmt q(db_, std::string("SELECT ") + kAssetColumns + " FROM assets WHERE id = ?1");
    q.bind(1, id);
    if (!q.step()) return std::nullopt;
    return asset_from_row(q);
}

void CompanyStore::replace_assets(const std::vector<AssetRow>& rows) {
    std::function<void(const std::string&)> runner = [this](const std::string& s) { exec(s); };
    Transaction tx(runner);
    // Match and verdict payloads reference the old row ids; they go too.
    exec("DELETE FROM match_payloads");
    exec("DELETE FROM rav_payloads");
    exec("DELETE FROM assets");
    long long next_id = 1;
    for (const auto& row : rows) {
        Stmt ins(db_,
                 "INSERT INTO assets (id, company, physical_asset, location, countries,"
                 " ownership, commodity, status, source_chunk_ids, natural_key)"
                 " VALUES (?1,?2,?3,?4,?5,?6,?7,?8,?9,?10)");
        ins.bind(1, next_id++)
            .bind(2, row.company.empty() ? company_ : row.company)
            .bind(3, row.physical_asset)
            .bind(4, row.location)
            .bind(5, row.countries)
            .bind(6, row.ownership)
            .bind(7, row.commodity)
            .bind(8, row.status)
            .bind(9, join_ids(row.source_chunk_ids))
            .bind(10, natural_key(row));
        ins.step();
    }
    tx.commit();
}

void CompanyStore::update_asset(const AssetRow& row) {
    Stmt upd(db_,
             "UPDATE assets SET company = ?1, physical_asset = ?2, location = ?3,"
             " countries = ?4, ownership = ?5, commodity = ?6, status = ?7,"
             " source_chunk_ids = ?8, natural_key = ?9 WHERE id = ?10");
    upd.bind(1, row.company)
        .bind(2, row.physical_asset)
        .bind(3, row.location)
        .bind(4, row.countries)
        .bind(5, row.ownership)
        .bind(6, row.commodity)
        .bind(7, row.status)
        .bind(8, join_ids(row.source_chunk_ids))
        .bind(9, natural_key(row))
        .bind(10, row.id);
    upd.step();
    if (sqlite3_changes(db_) == 0) {
        throw StoreError("no asset row with id " + std::to_string(row.id));
    }
}

void CompanyStore::save_match_payload(long long asset_id, const std::string& json_payload) {
    Stmt s(db_, "INSERT OR REPLACE INTO match_payloads (asset_id, payload) VALUES (?1, ?2)");
    s.bind(1, asset_id).bind(2, json_payload);
    s.step();
}

std::optional<std::string> CompanyStore::get_match_payload(long long asset_id) {
    Stmt q(db_, "SELECT payload FROM match_payloads WHERE asset_id = ?1");
    q.bind(1, asset_id);
    if (!q.step()) return std::nullopt;
    return q.col_text(0);
}

void CompanyStore::save_rav_payload(long long asset_id, const std::string& json_payload) {
    Stmt s(db_, "INSERT OR REPLACE INTO rav_payloads (asset_id, payload) VALUES (?1, ?2)");
    s.bind(1, asset_id).bind(2, json_payload);
    s.step();
}

std::optional<std::string> CompanyStore::get_rav_payload(long long asset_id) {
    Stmt q(db_, "SELECT payload FROM rav_payloads WHERE asset_id = ?1");
    q.bind(1, asset_id);
    if (!q.step()) return std::nullopt;
    return q.col_text(0);
}

void CompanyStore::export_csv(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    csv::write_row(out, {"id", "company", "physical_asset", "location", "countries",
                         "ownership", "commodity", "status", "source_chunk_ids"});
    for (const auto& row : query_assets()) {
        csv::write_row(out, {std::to_string(row.id), row.company, row.physical_asset,
                             row.location, row.countries, row.ownership, row.commodity,
                             row.status, join_ids(row.source_chunk_ids)});
    }
}

void CompanyStore::export_jsonl(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    for (const auto& row : query_assets()) {
        out << row_to_json(row).dump() << '\n';
    }
}

int CompanyStore::import_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    std::function<void(const std::string&)> runner = [this](const std::string& s) { exec(s); };
    Transaction tx(runner);
    std::string line;
    int line_no = 0;
    int inserted = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        AssetRow row;
        try {
            row = row_from_json(json::parse(line));
        } catch (const json::exception& e) {
            throw StoreError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        Stmt ins(db_,
                 "INSERT INTO assets (id, company, physical_asset, location, countries,"
                 " ownership, commodity, status, source_chunk_ids, natural_key)"
                 " VALUES (?1,?2,?3,?4,?5,?6,?7,?8,?9,?10)");
        // An unbound ?1 stays NULL, so sqlite assigns the next rowid.
        if (row.id > 0) ins.bind(1, row.id);
        ins.bind(2, row.company)
            .bind(3, row.physical_asset)
            .bind(4, row.location)
            .bind(5, row.countries)
            .bind(6, row.ownership)
            .bind(7, row.commodity)
            .bind(8, row.status)
            .bind(9, join_ids(row.source_chunk_ids))
            .bind(10, natural_key(row));
        ins.step();
        ++inserted;
    }
    tx.commit();
    return inserted;
}

}  // namespace assetdb::store
