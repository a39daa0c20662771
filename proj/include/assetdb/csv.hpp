#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace assetdb::csv {

// RFC-4180 style reader: quoted fields may contain commas, quotes ("")
// and newlines. Accepts both \n and \r\n line endings.
class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    // Next record, or nullopt at end of input. Blank lines are skipped.
    std::optional<std::vector<std::string>> next();

private:
    std::istream& in_;
};

std::string escape(const std::string& field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

std::vector<std::vector<std::string>> read_all(std::istream& in);

}  // namespace assetdb::csv
