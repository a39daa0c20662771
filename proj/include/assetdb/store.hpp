#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "assetdb/chunker.hpp"
#include "assetdb/extract.hpp"
#include "assetdb/ingest.hpp"

struct sqlite3;

namespace assetdb::store {

// One cleaned database row. countries holds comma-separated country names (or
// "N/A") produced by the country-extraction step; source_chunk_ids records
// which chunks contributed to the row.
struct AssetRow {
    long long id = 0;
    std::string company;
    std::string physical_asset;
    std::string location;
    std::string countries;
    std::string ownership;
    std::string commodity;
    std::string status;
    std::vector<std::string> source_chunk_ids;

    bool operator==(const AssetRow&) const = default;
};

struct AssetFilter {
    bool require_asset = false;     // only rows with non-empty physical_asset
    std::string asset_contains;     // case-insensitive substring on physical_asset
};

// Path of a company's database file inside a storage directory.
std::string company_db_path(const std::string& dir, const std::string& company);

// SQLite-backed storage for one company: filings, chunks, extraction records,
// cleaned asset rows, validation matches and web-validation verdicts. Schema
// changes are tracked in a migrations table. The handle is opened in SQLite's
// serialized threading mode, so one CompanyStore may be shared across threads.
class CompanyStore {
public:
    // Opens (creating when `create` is set) the database for `company`.
    // Throws StoreError when the file is missing and create is false.
    CompanyStore(const std::string& db_path, std::string company, bool create = true);
    ~CompanyStore();

    CompanyStore(const CompanyStore&) = delete;
    CompanyStore& operator=(const CompanyStore&) = delete;

    const std::string& company() const { return company_; }

    // --- filings & chunks ---------------------------------------------------
    void put_filing(const ingest::Filing& filing);
    std::optional<ingest::Filing> get_filing(const std::string& filing_id);
    std::vector<std::string> filing_ids();

    void put_chunks(const std::vector<chunker::Chunk>& chunks);
    std::vector<chunker::Chunk> get_chunks(const std::string& filing_id);

    // --- extraction records ---------------------------------------------------
    // Keyed by (chunk_id, model, template_id); storing twice overwrites.
    void put_extraction(const extract::ExtractionRecord& record);
    std::vector<extract::ExtractionRecord> get_extractions();
    std::vector<extract::ExtractionRecord> get_extractions_for_chunk(
        const std::string& chunk_id);

    // --- asset rows -----------------------------------------------------------
    // Fans extraction records out into rows: each relationship becomes a row;
    // entities not referenced by any relationship become rows with only their
    // own column populated. Natural key = normalized asset+location+ownership,
    // so identical input is idempotent. Returns the number of new rows.
    int upsert_assets(const std::vector<extract::ExtractionRecord>& records);

    std::vector<AssetRow> query_assets(const AssetFilter& filter = {});
    std::optional<AssetRow> get_asset(long long id);

    // Replaces the whole asset table (cleaning rewrites consolidated rows).
    // Row ids are reassigned 1..n in input order.
    void replace_assets(const std::vector<AssetRow>& rows);
    void update_asset(const AssetRow& row);  // by id

    // --- validation artifacts -------------------------------------------------
    void save_match_payload(long long asset_id, const std::string& json_payload);
    std::optional<std::string> get_match_payload(long long asset_id);
    void save_rav_payload(long long asset_id, const std::string& json_payload);
    std::optional<std::string> get_rav_payload(long long asset_id);

    // --- import/export ----------------------------------------------------------
    // Byte-stable given identical table contents: rows ordered by id, RFC-4180
    // CSV with a header row, or one JSON object per line with sorted keys.
    void export_csv(const std::string& path);
    void export_jsonl(const std::string& path);
    int import_jsonl(const std::string& path);  // returns rows inserted

    int schema_version() const;

private:
    void migrate();
    void exec(const std::string& sql);

    std::string company_;
    sqlite3* db_ = nullptr;
};

}  // namespace assetdb::store
