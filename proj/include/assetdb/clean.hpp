#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "assetdb/llm.hpp"
#include "assetdb/store.hpp"

namespace assetdb::clean {

// Character fixes plus exact whole-value alias maps for the ownership and
// location columns. char_rules are literal substring replacements applied in
// order before the built-in space/comma normalization.
struct StandardizationRules {
    std::vector<std::pair<std::string, std::string>> char_rules;
    std::map<std::string, std::string> ownership_aliases;  // case-sensitive
    std::map<std::string, std::string> location_aliases;
};

// Built-in rule set: strips backslashes and quotes, maps the ownership
// aliases to "Newmont Corporation" and the USA spelling variants to "USA".
StandardizationRules default_rules();

// Reads ownership_aliases.csv / location_aliases.csv ("alias,canonical",
// no header) from dir, falling back to the defaults for missing files.
StandardizationRules load_rules(const std::string& dir);

// Character-level cleanup: applies char_rules, tightens comma spacing to
// ", ", collapses space runs and trims. Applying twice equals applying once.
std::string standardize_text(const std::string& value, const StandardizationRules& rules);

// Whole-value alias replacement for field ∈ {ownership, location};
// non-aliases and other fields pass through unchanged.
std::string normalize_aliases(const std::string& field, const std::string& value,
                              const StandardizationRules& rules);

// Merges rows whose normalized physical_asset is identical; other fields
// become deduplicated comma-joined unions and chunk ids are unioned. Rows
// with an empty asset are left alone (they are dropped later).
std::vector<store::AssetRow> consolidate_duplicates(std::vector<store::AssetRow> rows);

struct ConsolidationConfig {
    double threshold = 0.5;  // cosine over TF-IDF asset-name vectors, in (0,1]
};

// Groups rows whose asset-name TF-IDF cosine meets the threshold
// (transitively, via union-find) and merges each group, keeping the longest
// asset name. Never increases the row count. Throws ConfigError on a
// threshold outside (0,1].
std::vector<store::AssetRow> consolidate_similar(std::vector<store::AssetRow> rows,
                                                 const ConsolidationConfig& config = {});

// Countries named inside a location string, comma-joined in order of first
// appearance; "" when none found. Pure lookup against the built-in country
// list (short acronyms like "US" match case-sensitively, everything else
// case-insensitively on word boundaries).
std::string gazetteer_countries(const std::string& location);

// Gazetteer first; when it finds nothing and a gateway is supplied, asks the
// country-extraction prompt. Returns "N/A" when no country can be named.
// LLM failures degrade to the gazetteer result rather than throwing.
std::string extract_countries(const std::string& location, llm::Gateway* gateway = nullptr,
                              const std::string& model = "");

// One-cell refinement through the cleaning prompt. The Countries column is
// returned untouched; a "not specified" answer becomes ""; answers more than
// 10× the input length are treated as model rambling and the original value
// is kept.
std::string llm_clean_cell(const std::string& column, const std::string& value,
                           llm::Gateway& gateway, const std::string& model);

std::vector<store::AssetRow> drop_empty_assets(std::vector<store::AssetRow> rows);

// Phase 1: standardize → aliases → duplicate merge → countries → drop empty
// assets. Idempotent end-to-end. The gateway is optional and only used for
// country extraction fallback.
std::vector<store::AssetRow> phase1(std::vector<store::AssetRow> rows,
                                    const StandardizationRules& rules,
                                    llm::Gateway* gateway = nullptr,
                                    const std::string& country_model = "");

// Phase 2: TF-IDF similarity consolidation.
std::vector<store::AssetRow> phase2(std::vector<store::AssetRow> rows,
                                    const ConsolidationConfig& config = {});

// Phase 3: per-cell LLM refinement of the five text columns (never
// Countries). Gateway errors propagate.
std::vector<store::AssetRow> phase3(std::vector<store::AssetRow> rows, llm::Gateway& gateway,
                                    const std::string& model);

// Country list backing the gazetteer (ISO short names plus common aliases).
// Each entry maps a recognizable name to its canonical form.
const std::vector<std::pair<std::string, std::string>>& country_gazetteer();

}  // namespace assetdb::clean
