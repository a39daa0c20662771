#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace assetdb::text {

std::string to_lower(std::string_view s);

// Strips leading/trailing ASCII whitespace.
std::string trim(std::string_view s);

// Collapses runs of ASCII whitespace to a single space (no trim).
std::string collapse_spaces(std::string_view s);

// Whitespace-delimited tokens, kept verbatim.
std::vector<std::string> split_whitespace(std::string_view s);

// Lowercased alphanumeric runs; everything else is a separator.
// Shared token definition for the similarity metrics and TF-IDF.
std::vector<std::string> word_tokens(std::string_view s);

// Canonical form used for entity voting and natural keys:
// lowercase, trim, collapse internal whitespace.
std::string normalize_entity(std::string_view s);

bool iequals(std::string_view a, std::string_view b);

bool starts_with_icase(std::string_view s, std::string_view prefix);

// Splits on a separator, trimming each piece and dropping empties.
std::vector<std::string> split_and_trim(std::string_view s, char sep);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace assetdb::text
