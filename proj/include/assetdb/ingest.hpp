#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace assetdb::ingest {

// One <table> lifted out of a filing. Ragged rows are padded with "" to the
// widest row and `padded` records that this happened.
struct TableRecord {
    int table_index = 0;                          // order of appearance in the document
    std::vector<std::string> header;              // first row (or thead row) cell texts
    std::vector<std::vector<std::string>> rows;   // body rows, all padded to header size
    std::vector<std::string> linearized;          // one "Header: value; ..." line per row
    bool padded = false;                          // true if any row needed padding
};

struct Filing {
    std::string id;           // stable identifier, defaults to the source file stem
    std::string ticker;
    std::string cik;
    std::string form_type = "UNKNOWN";
    std::string filing_date;  // ISO yyyy-mm-dd when known
    bool date_known = false;
    std::string body;         // plain text with markup stripped
    std::vector<TableRecord> tables;
    std::string source_uri;
};

// Metadata supplied on the command line that beats whatever the file says.
struct FilingOverrides {
    std::string ticker;
    std::string cik;
    std::string form_type;
    std::string filing_date;
};

// Removes HTML/XBRL markup and returns readable plain text: comments,
// <script>, <style> and XBRL header blocks are dropped, block-level tags
// become newlines, entities (named and numeric) are decoded, and whitespace
// is normalized so no run of blank lines exceeds one. Idempotent: applying
// it to its own output returns the same string.
std::string strip_markup(std::string_view raw);

// Pulls every <table> element out of raw markup. Header cells come from the
// <thead> row if present, else the first row. Empty header names are shown
// as "Column<N>" in the linearized text.
std::vector<TableRecord> extract_tables(std::string_view raw);

// Loads a filing from disk: validates UTF-8 (throws EncodingError with the
// byte offset of the first bad sequence), parses EDGAR-style header lines
// (CONFORMED SUBMISSION TYPE, FILED AS OF DATE, CENTRAL INDEX KEY, TICKER),
// strips markup and extracts tables. Overrides win over parsed metadata.
Filing load_filing(const std::string& source, const FilingOverrides& overrides = {});

// UTF-8 validation helper: returns the byte offset of the first invalid
// sequence, or npos if the buffer is valid.
std::size_t find_invalid_utf8(std::string_view buf);

}  // namespace assetdb::ingest
