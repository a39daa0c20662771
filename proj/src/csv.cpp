#include "assetdb/csv.hpp"

namespace assetdb::csv {

std::optional<std::vector<std::string>> Reader::next() {
    std::vector<std::string> fields;
    std::string cur;
    bool in_quotes = false;
    bool any = false;
    int ch;
    while ((ch = in_.get()) != EOF) {
        char c = static_cast<char>(ch);
        any = true;
        if (in_quotes) {
            if (c == '"') {
                if (in_.peek() == '"') {
                    in_.get();
                    cur.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c == '\r') {
            // swallow; the following \n ends the record
        } else if (c == '\n') {
            if (fields.empty() && cur.empty()) {
                any = false;  // blank line, keep scanning
                continue;
            }
            fields.push_back(std::move(cur));
            return fields;
        } else {
            cur.push_back(c);
        }
    }
    if (!any && fields.empty() && cur.empty()) return std::nullopt;
    if (fields.empty() && cur.empty()) return std::nullopt;
    fields.push_back(std::move(cur));
    return fields;
}

std::string escape(const std::string& field) {
    bool needs_quotes = field.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs_quotes) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.put(',');
        out << escape(fields[i]);
    }
    out.put('\n');
}

std::vector<std::vector<std::string>> read_all(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    Reader r(in);
    while (auto row = r.next()) rows.push_back(std::move(*row));
    return rows;
}

}  // namespace assetdb::csv
