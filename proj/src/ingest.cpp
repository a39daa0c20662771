#include "assetdb/ingest.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "assetdb/errors.hpp"
#include "assetdb/http.hpp"
#include "assetdb/text.hpp"

namespace assetdb::ingest {

namespace {

char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

bool is_letter(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

// Case-insensitive find; `needle` must already be lowercase.
std::size_t ci_find(std::string_view hay, std::string_view needle, std::size_t from = 0) {
    if (needle.empty() || hay.size() < needle.size()) return std::string_view::npos;
    for (std::size_t i = from; i + needle.size() <= hay.size(); ++i) {
        std::size_t j = 0;
        while (j < needle.size() && lower(hay[i + j]) == needle[j]) ++j;
        if (j == needle.size()) return i;
    }
    return std::string_view::npos;
}

// Reads the element name right after '<' or '</'. Empty if none.
std::string tag_name_at(std::string_view s, std::size_t pos) {
    std::string name;
    if (pos < s.size() && s[pos] == '/') ++pos;
    // '-' is legal in tag names; EDGAR wraps its metadata in <SEC-HEADER>.
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) != 0 || s[pos] == '-')) {
        name += lower(s[pos]);
        ++pos;
    }
    return name;
}

// Tags whose removal marks a line break in the flowed text.
const std::unordered_set<std::string>& block_tags() {
    static const std::unordered_set<std::string> tags = {
        "p",     "div",   "br",    "tr",    "table",   "li",      "ul",    "ol",
        "h1",    "h2",    "h3",    "h4",    "h5",      "h6",      "thead", "tbody",
        "tfoot", "hr",    "dl",    "dt",    "dd",      "caption", "pre",   "section",
        "article", "header", "footer", "blockquote", "title", "form"};
    return tags;
}

// Tags whose entire content is dropped, not just the tags themselves.
const std::unordered_set<std::string>& drop_content_tags() {
    static const std::unordered_set<std::string> tags = {"script", "style", "nav",
                                                         "sec-header"};
    return tags;
}

void append_utf8(std::string& out, unsigned long cp) {
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

// Decodes the entity starting at s[pos] ('&'). On success appends the decoded
// text to out and returns the length consumed; otherwise returns 0.
std::size_t decode_entity(std::string_view s, std::size_t pos, std::string& out) {
    static const std::unordered_map<std::string, std::string> named = {
        {"amp", "&"},        {"lt", "<"},         {"gt", ">"},       {"quot", "\""},
        {"apos", "'"},       {"nbsp", " "},       {"ndash", "–"}, {"mdash", "—"},
        {"lsquo", "‘"}, {"rsquo", "’"}, {"ldquo", "“"}, {"rdquo", "”"},
        {"hellip", "…"}, {"bull", "•"}, {"middot", "·"}, {"sect", "§"},
        {"para", "¶"},  {"copy", "©"},  {"reg", "®"},  {"trade", "™"},
        {"deg", "°"},   {"plusmn", "±"}, {"cent", "¢"}, {"pound", "£"},
        {"euro", "€"},  {"yen", "¥"},   {"times", "×"}, {"divide", "÷"},
        {"frac12", "½"}, {"frac14", "¼"}, {"frac34", "¾"}};

    std::size_t semi = s.find(';', pos + 1);
    if (semi == std::string_view::npos || semi - pos > 10) return 0;
    std::string_view body = s.substr(pos + 1, semi - pos - 1);
    if (body.empty()) return 0;

    if (body[0] == '#') {
        unsigned long cp = 0;
        bool any = false;
        if (body.size() > 1 && (body[1] == 'x' || body[1] == 'X')) {
            for (std::size_t i = 2; i < body.size(); ++i) {
                if (std::isxdigit(static_cast<unsigned char>(body[i])) == 0) return 0;
                cp = cp * 16 + static_cast<unsigned long>(
                                   std::isdigit(static_cast<unsigned char>(body[i]))
                                       ? body[i] - '0'
                                       : lower(body[i]) - 'a' + 10);
                any = true;
            }
        } else {
            for (std::size_t i = 1; i < body.size(); ++i) {
                if (std::isdigit(static_cast<unsigned char>(body[i])) == 0) return 0;
                cp = cp * 10 + static_cast<unsigned long>(body[i] - '0');
                any = true;
            }
        }
        if (!any) return 0;
        if (cp == 0xA0) {
            out += ' ';  // non-breaking space reads as a plain space downstream
        } else {
            append_utf8(out, cp);
        }
        return semi - pos + 1;
    }

    std::string key;
    for (char c : body) key += lower(c);
    auto it = named.find(key);
    if (it == named.end()) return 0;
    out += it->second;
    return semi - pos + 1;
}

// One pass of tag removal + entity decoding; no whitespace normalization yet.
std::string strip_pass(std::string_view in) {
    std::string out;
    out.reserve(in.size());
    std::size_t i = 0;
    while (i < in.size()) {
        char c = in[i];
        if (c == '<') {
            if (in.substr(i, 4) == "<!--") {
                std::size_t end = in.find("-->", i + 4);
                i = (end == std::string_view::npos) ? in.size() : end + 3;
                continue;
            }
            if (i + 1 < in.size() &&
                (is_letter(in[i + 1]) || in[i + 1] == '/' || in[i + 1] == '!' ||
                 in[i + 1] == '?')) {
                std::string name = tag_name_at(in, i + 1);
                bool closing = in[i + 1] == '/';
                std::size_t gt = in.find('>', i + 1);
                if (!closing && drop_content_tags().count(name) > 0) {
                    std::string close = "</" + name;
                    std::size_t end = ci_find(in, close, i + 1);
                    if (end == std::string_view::npos) {
                        i = in.size();
                    } else {
                        std::size_t egt = in.find('>', end);
                        i = (egt == std::string_view::npos) ? in.size() : egt + 1;
                    }
                    out += '\n';
                    continue;
                }
                i = (gt == std::string_view::npos) ? in.size() : gt + 1;
                if (block_tags().count(name) > 0) {
                    out += '\n';
                } else if (name == "td" || name == "th") {
                    out += ' ';
                }
                continue;
            }
            out += c;
            ++i;
            continue;
        }
        if (c == '&') {
            std::size_t used = decode_entity(in, i, out);
            if (used > 0) {
                i += used;
                continue;
            }
        }
        out += c;
        ++i;
    }
    return out;
}

// Collapses whitespace: any run containing a newline becomes "\n", other runs
// become a single space; leading/trailing whitespace is dropped. UTF-8
// non-breaking spaces count as whitespace.
std::string normalize_ws(std::string_view in) {
    std::string out;
    out.reserve(in.size());
    bool pending_space = false;
    bool pending_newline = false;
    std::size_t i = 0;
    while (i < in.size()) {
        unsigned char c = static_cast<unsigned char>(in[i]);
        std::size_t adv = 1;
        bool ws = false, nl = false;
        if (c == '\n') {
            ws = nl = true;
        } else if (c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f') {
            ws = true;
            nl = (c == '\r');
        } else if (c == 0xC2 && i + 1 < in.size() &&
                   static_cast<unsigned char>(in[i + 1]) == 0xA0) {
            ws = true;
            adv = 2;
        }
        if (ws) {
            pending_space = true;
            pending_newline = pending_newline || nl;
        } else {
            if (!out.empty()) {
                if (pending_newline) {
                    out += '\n';
                } else if (pending_space) {
                    out += ' ';
                }
            }
            pending_space = pending_newline = false;
            out += in[i];
            if (adv == 2) out += in[i + 1];
        }
        i += adv;
    }
    return out;
}

// Like strip_markup but flattens to a single line — used for table cells.
std::string cell_text(std::string_view raw) {
    std::string s = strip_markup(raw);
    std::replace(s.begin(), s.end(), '\n', ' ');
    return text::trim(text::collapse_spaces(s));
}

struct RawTable {
    std::string_view content;  // markup between <table...> and </table>
};

// Finds outermost <table> elements; nested tables stay inside their parent.
std::vector<RawTable> find_tables(std::string_view raw) {
    std::vector<RawTable> found;
    std::size_t pos = 0;
    while (true) {
        std::size_t open = ci_find(raw, "<table", pos);
        if (open == std::string_view::npos) break;
        // Require a word boundary so "<tablex" doesn't match.
        std::size_t after = open + 6;
        if (after < raw.size() && std::isalnum(static_cast<unsigned char>(raw[after])) != 0) {
            pos = after;
            continue;
        }
        std::size_t body_start = raw.find('>', open);
        if (body_start == std::string_view::npos) break;
        ++body_start;
        int depth = 1;
        std::size_t scan = body_start;
        std::size_t body_end = raw.size();
        std::size_t next_pos = raw.size();
        while (depth > 0) {
            std::size_t o = ci_find(raw, "<table", scan);
            std::size_t c = ci_find(raw, "</table", scan);
            if (c == std::string_view::npos) {
                body_end = raw.size();
                break;
            }
            if (o != std::string_view::npos && o < c) {
                ++depth;
                scan = o + 6;
            } else {
                --depth;
                if (depth == 0) {
                    body_end = c;
                    std::size_t gt = raw.find('>', c);
                    next_pos = (gt == std::string_view::npos) ? raw.size() : gt + 1;
                } else {
                    scan = c + 7;
                }
            }
        }
        found.push_back({raw.substr(body_start, body_end - body_start)});
        pos = next_pos;
    }
    return found;
}

// Splits a row's markup into cell texts (td/th).
std::vector<std::string> parse_cells(std::string_view row) {
    std::vector<std::string> cells;
    std::size_t pos = 0;
    while (true) {
        std::size_t td = ci_find(row, "<td", pos);
        std::size_t th = ci_find(row, "<th", pos);
        std::size_t open = std::min(td, th);
        if (open == std::string_view::npos) break;
        // Word boundary: "<thead" is not a cell.
        std::size_t after = open + 3;
        if (after < row.size() && std::isalnum(static_cast<unsigned char>(row[after])) != 0) {
            pos = after;
            continue;
        }
        std::size_t start = row.find('>', open);
        if (start == std::string_view::npos) break;
        ++start;
        std::size_t next_td = ci_find(row, "<td", start);
        std::size_t next_th = ci_find(row, "<th", start);
        std::size_t close_td = ci_find(row, "</td", start);
        std::size_t close_th = ci_find(row, "</th", start);
        std::size_t end = std::min(std::min(next_td, next_th), std::min(close_td, close_th));
        if (end == std::string_view::npos) end = row.size();
        cells.push_back(cell_text(row.substr(start, end - start)));
        pos = end;
        // Skip a closing tag so we don't re-find its "</td" as "<td".
        if (end < row.size() && row.substr(end, 2) == "</") {
            std::size_t gt = row.find('>', end);
            pos = (gt == std::string_view::npos) ? row.size() : gt + 1;
        }
    }
    return cells;
}

// Splits table markup into row markups in document order. Rows may be missing
// their </tr>; the next <tr> terminates them.
std::vector<std::string_view> parse_rows(std::string_view table) {
    std::vector<std::string_view> rows;
    std::size_t pos = 0;
    while (true) {
        std::size_t open = ci_find(table, "<tr", pos);
        if (open == std::string_view::npos) break;
        std::size_t after = open + 3;
        if (after < table.size() &&
            std::isalnum(static_cast<unsigned char>(table[after])) != 0) {
            pos = after;
            continue;
        }
        std::size_t start = table.find('>', open);
        if (start == std::string_view::npos) break;
        ++start;
        std::size_t close = ci_find(table, "</tr", start);
        std::size_t next = ci_find(table, "<tr", start);
        std::size_t end = std::min(close, next);
        if (end == std::string_view::npos) end = table.size();
        rows.push_back(table.substr(start, end - start));
        pos = end + 1;
    }
    return rows;
}

std::string read_source(const std::string& source, std::string& uri) {
    uri = source;
    if (source.rfind("http://", 0) == 0 || source.rfind("https://", 0) == 0) {
        auto res = http::get(source);
        if (res.status != 200) {
            throw IoError("fetch of " + source + " returned status " +
                          std::to_string(res.status));
        }
        return res.body;
    }
    std::ifstream in(source, std::ios::binary);
    if (!in) throw IoError("cannot read " + source);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// First "KEY:...value" line in the raw document, value trimmed. Keys are the
// EDGAR header field names; matching is case-insensitive.
std::string header_value(std::string_view raw, std::string_view key_lower) {
    std::size_t pos = ci_find(raw, key_lower);
    while (pos != std::string_view::npos) {
        // Must start a line (or the document).
        if (pos == 0 || raw[pos - 1] == '\n' || raw[pos - 1] == '\r' ||
            raw[pos - 1] == '\t' || raw[pos - 1] == ' ') {
            std::size_t colon = raw.find(':', pos + key_lower.size());
            std::size_t eol = raw.find('\n', pos);
            if (eol == std::string_view::npos) eol = raw.size();
            if (colon != std::string_view::npos && colon < eol) {
                return text::trim(std::string(raw.substr(colon + 1, eol - colon - 1)));
            }
        }
        pos = ci_find(raw, key_lower, pos + 1);
    }
    return "";
}

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
    static const std::array<int, 12> d = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return d[static_cast<std::size_t>(m - 1)];
}

// Accepts YYYYMMDD or YYYY-MM-DD; returns ISO form or "" when invalid.
std::string normalize_date(const std::string& s) {
    std::string digits;
    for (char c : s) {
        if (std::isdigit(static_cast<unsigned char>(c)) != 0) digits += c;
    }
    if (digits.size() != 8) return "";
    int y = std::stoi(digits.substr(0, 4));
    int m = std::stoi(digits.substr(4, 2));
    int d = std::stoi(digits.substr(6, 2));
    if (y < 1000 || m < 1 || m > 12 || d < 1 || d > days_in_month(y, m)) return "";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, d);
    return buf;
}

std::string source_stem(const std::string& source) {
    std::string tail = source;
    std::size_t q = tail.find_first_of("?#");
    if (q != std::string::npos) tail = tail.substr(0, q);
    return std::filesystem::path(tail).stem().string();
}

}  // namespace

std::string strip_markup(std::string_view raw) {
    // Entity decoding can reveal new markup ("&lt;p&gt;" → "<p>"), so iterate
    // to a fixpoint; every pass that changes anything strictly shrinks the
    // string, so this terminates.
    std::string cur = normalize_ws(strip_pass(raw));
    while (true) {
        std::string next = normalize_ws(strip_pass(cur));
        if (next == cur) break;
        cur = std::move(next);
    }
    return cur;
}

std::vector<TableRecord> extract_tables(std::string_view raw) {
    std::vector<TableRecord> out;
    int index = 0;
    for (const RawTable& raw_table : find_tables(raw)) {
        TableRecord rec;
        rec.table_index = index++;

        // Header row: first row inside <thead> when present, else first row of
        // the table. thead rows come first in document order, so parsing thead
        // then the remainder makes the header all_rows.front() in both cases.
        std::vector<std::vector<std::string>> all_rows;
        std::size_t thead_open = ci_find(raw_table.content, "<thead");
        if (thead_open != std::string_view::npos) {
            std::size_t thead_close = ci_find(raw_table.content, "</thead", thead_open);
            std::string_view head_part = raw_table.content.substr(
                thead_open, (thead_close == std::string_view::npos
                                 ? raw_table.content.size()
                                 : thead_close) -
                                thead_open);
            for (std::string_view row : parse_rows(head_part)) {
                all_rows.push_back(parse_cells(row));
            }
            std::string_view rest = (thead_close == std::string_view::npos)
                                        ? std::string_view{}
                                        : raw_table.content.substr(thead_close);
            for (std::string_view row : parse_rows(rest)) {
                all_rows.push_back(parse_cells(row));
            }
        } else {
            for (std::string_view row : parse_rows(raw_table.content)) {
                all_rows.push_back(parse_cells(row));
            }
        }

        if (!all_rows.empty()) {
            rec.header = all_rows.front();
            rec.rows.assign(all_rows.begin() + 1, all_rows.end());
        }

        std::size_t width = rec.header.size();
        for (const auto& r : rec.rows) width = std::max(width, r.size());
        if (rec.header.size() < width) {
            rec.header.resize(width);
            rec.padded = true;
        }
        for (auto& r : rec.rows) {
            if (r.size() < width) {
                r.resize(width);
                rec.padded = true;
            }
        }

        rec.linearized.reserve(rec.rows.size());
        for (const auto& r : rec.rows) {
            std::string line;
            for (std::size_t i = 0; i < width; ++i) {
                if (i > 0) line += "; ";
                const std::string& name = rec.header[i];
                line += name.empty() ? "Column" + std::to_string(i + 1) : name;
                line += ": ";
                line += r[i];
            }
            rec.linearized.push_back(std::move(line));
        }
        out.push_back(std::move(rec));
    }
    return out;
}

std::size_t find_invalid_utf8(std::string_view buf) {
    std::size_t i = 0;
    const std::size_t n = buf.size();
    while (i < n) {
        unsigned char c = static_cast<unsigned char>(buf[i]);
        if (c < 0x80) {
            ++i;
            continue;
        }
        std::size_t len;
        unsigned long min_cp;
        if ((c & 0xE0) == 0xC0) {
            len = 2;
            min_cp = 0x80;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            min_cp = 0x800;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
            min_cp = 0x10000;
        } else {
            return i;
        }
        if (i + len > n) return i;
        unsigned long cp = c & (0x7Fu >> len);
        for (std::size_t k = 1; k < len; ++k) {
            unsigned char cc = static_cast<unsigned char>(buf[i + k]);
            if ((cc & 0xC0) != 0x80) return i;
            cp = (cp << 6) | (cc & 0x3Fu);
        }
        if (cp < min_cp || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return i;
        i += len;
    }
    return std::string_view::npos;
}

Filing load_filing(const std::string& source, const FilingOverrides& overrides) {
    Filing f;
    std::string raw = read_source(source, f.source_uri);

    std::size_t bad = find_invalid_utf8(raw);
    if (bad != std::string_view::npos) {
        throw EncodingError("invalid UTF-8 in " + source, bad);
    }

    f.id = source_stem(source);
    f.form_type = header_value(raw, "conformed submission type");
    f.cik = header_value(raw, "central index key");
    f.ticker = header_value(raw, "ticker");
    std::string date = header_value(raw, "filed as of date");

    if (!overrides.ticker.empty()) f.ticker = overrides.ticker;
    if (!overrides.cik.empty()) f.cik = overrides.cik;
    if (!overrides.form_type.empty()) f.form_type = overrides.form_type;
    if (!overrides.filing_date.empty()) date = overrides.filing_date;

    if (f.form_type.empty()) f.form_type = "UNKNOWN";
    f.filing_date = normalize_date(date);
    f.date_known = !f.filing_date.empty();

    f.body = strip_markup(raw);
    f.tables = extract_tables(raw);
    return f;
}

}  // namespace assetdb::ingest
