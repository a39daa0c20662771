#include "assetdb/clean.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "assetdb/csv.hpp"
#include "assetdb/errors.hpp"
#include "assetdb/extract.hpp"
#include "assetdb/simmetrics.hpp"
#include "assetdb/text.hpp"

namespace assetdb::clean {

namespace {

void replace_all(std::string& s, const std::string& pattern, const std::string& replacement) {
    if (pattern.empty()) return;
    std::size_t pos = 0;
    while ((pos = s.find(pattern, pos)) != std::string::npos) {
        s.replace(pos, pattern.size(), replacement);
        pos += replacement.size();
    }
}

// Deduplicated comma-joined union of two comma-separated value lists,
// preserving first-seen spelling and order.
std::string union_join(const std::string& a, const std::string& b) {
    std::vector<std::string> parts;
    std::set<std::string> seen;
    for (const std::string* src : {&a, &b}) {
        for (const auto& part : text::split_and_trim(*src, ',')) {
            if (seen.insert(extract::voting_normalize(part)).second) parts.push_back(part);
        }
    }
    return text::join(parts, ", ");
}

void merge_into(store::AssetRow& target, const store::AssetRow& source) {
    target.location = union_join(target.location, source.location);
    target.countries = union_join(target.countries, source.countries);
    target.ownership = union_join(target.ownership, source.ownership);
    target.commodity = union_join(target.commodity, source.commodity);
    target.status = union_join(target.status, source.status);
    if (target.company.empty()) target.company = source.company;
    auto& ids = target.source_chunk_ids;
    ids.insert(ids.end(), source.source_chunk_ids.begin(), source.source_chunk_ids.end());
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
}

// Aliases are matched against values that already went through
// standardize_text, so each alias is also registered under its standardized
// spelling ("Company's" additionally maps as "Companys").
void add_standardized_keys(StandardizationRules& rules) {
    for (auto* table : {&rules.ownership_aliases, &rules.location_aliases}) {
        std::map<std::string, std::string> extra;
        for (const auto& [alias, canonical] : *table) {
            std::string std_alias = standardize_text(alias, rules);
            if (!std_alias.empty() && !table->count(std_alias)) extra[std_alias] = canonical;
        }
        table->insert(extra.begin(), extra.end());
    }
}

std::map<std::string, std::string> read_alias_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read alias file " + path);
    std::map<std::string, std::string> table;
    for (const auto& row : csv::read_all(in)) {
        if (row.size() < 2) {
            throw ConfigError("alias file " + path + ": expected 'alias,canonical' rows");
        }
        table[row[0]] = row[1];
    }
    return table;
}

bool is_word_char(unsigned char c) {
    return std::isalnum(c) != 0;
}

int alpha_count(const std::string& s) {
    return static_cast<int>(
        std::count_if(s.begin(), s.end(), [](unsigned char c) { return std::isalpha(c); }));
}

std::string first_nonempty_line(const std::string& s) {
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t nl = s.find('\n', pos);
        std::string line =
            text::trim(s.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos));
        if (!line.empty()) return line;
        if (nl == std::string::npos) break;
        pos = nl + 1;
    }
    return "";
}

llm::LLMRequest cell_request(const std::string& model, std::string prompt) {
    llm::LLMRequest req;
    req.model = model;
    req.prompt = std::move(prompt);
    req.temperature = 0.0;
    req.max_output_tokens = 256;
    return req;
}

}  // namespace

StandardizationRules default_rules() {
    StandardizationRules rules;
    rules.char_rules = {{"\\", ""}, {"'", ""}, {"\"", ""}};
    const char* kOwnershipAliases[] = {
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
    for (const char* alias : kOwnershipAliases) {
        rules.ownership_aliases[alias] = "Newmont Corporation";
    }
    const char* kUsaVariants[] = {
        "United States of America", "United States", "USA", "US",
        "USAA", "USAA.", "U.S.", "U.S.A.",
    };
    for (const char* variant : kUsaVariants) {
        rules.location_aliases[variant] = "USA";
    }
    add_standardized_keys(rules);
    return rules;
}

StandardizationRules load_rules(const std::string& dir) {
    StandardizationRules rules = default_rules();
    std::string ownership_path = dir + "/ownership_aliases.csv";
    std::string location_path = dir + "/location_aliases.csv";
    if (std::ifstream(ownership_path).good()) {
        rules.ownership_aliases = read_alias_csv(ownership_path);
    }
    if (std::ifstream(location_path).good()) {
        rules.location_aliases = read_alias_csv(location_path);
    }
    add_standardized_keys(rules);
    return rules;
}

std::string standardize_text(const std::string& value, const StandardizationRules& rules) {
    std::string s = value;
    for (const auto& [pattern, replacement] : rules.char_rules) {
        replace_all(s, pattern, replacement);
    }
    // ", " after every comma, no space before it.
    std::string spaced;
    spaced.reserve(s.size());
    for (char c : s) {
        if (c == ',') {
            while (!spaced.empty() && std::isspace(static_cast<unsigned char>(spaced.back()))) {
                spaced.pop_back();
            }
            spaced += ", ";
        } else {
            spaced.push_back(c);
        }
    }
    return text::trim(text::collapse_spaces(spaced));
}

std::string normalize_aliases(const std::string& field, const std::string& value,
                              const StandardizationRules& rules) {
    const std::map<std::string, std::string>* table = nullptr;
    if (field == "ownership") table = &rules.ownership_aliases;
    if (field == "location") table = &rules.location_aliases;
    if (!table) return value;
    auto it = table->find(value);
    return it == table->end() ? value : it->second;
}

std::vector<store::AssetRow> consolidate_duplicates(std::vector<store::AssetRow> rows) {
    std::vector<store::AssetRow> out;
    std::map<std::string, std::size_t> first_index;
    for (auto& row : rows) {
        std::string key = extract::voting_normalize(row.physical_asset);
        if (key.empty()) {
            out.push_back(std::move(row));
            continue;
        }
        auto [it, fresh] = first_index.try_emplace(key, out.size());
        if (fresh) {
            out.push_back(std::move(row));
        } else {
            merge_into(out[it->second], row);
        }
    }
    return out;
}

std::vector<store::AssetRow> consolidate_similar(std::vector<store::AssetRow> rows,
                                                 const ConsolidationConfig& config) {
    if (config.threshold <= 0.0 || config.threshold > 1.0) {
        throw ConfigError("consolidation threshold must be in (0,1], got " +
                          std::to_string(config.threshold));
    }
    if (rows.size() < 2) return rows;

    std::vector<std::string> names;
    names.reserve(rows.size());
    for (const auto& row : rows) names.push_back(row.physical_asset);
    std::vector<std::vector<double>> vectors = simmetrics::tfidf_vectors(names);

    // Union-find over pairs whose cosine meets the threshold.
    std::vector<std::size_t> parent(rows.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            double dot = 0.0;
            for (std::size_t t = 0; t < vectors[i].size(); ++t) dot += vectors[i][t] * vectors[j][t];
            if (dot >= config.threshold) {
                std::size_t a = find(i), b = find(j);
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }
        }
    }

    std::map<std::size_t, std::size_t> group_to_out;  // root → index in out
    std::vector<store::AssetRow> out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::size_t root = find(i);
        auto [it, fresh] = group_to_out.try_emplace(root, out.size());
        if (fresh) {
            out.push_back(rows[i]);
            continue;
        }
        store::AssetRow& target = out[it->second];
        // Longest asset name wins the group label; ties pick the
        // lexicographically smaller spelling for determinism.
        const std::string& candidate = rows[i].physical_asset;
        if (candidate.size() > target.physical_asset.size() ||
            (candidate.size() == target.physical_asset.size() &&
             candidate < target.physical_asset)) {
            target.physical_asset = candidate;
        }
        merge_into(target, rows[i]);
    }
    return out;
}

std::string gazetteer_countries(const std::string& location) {
    if (location.empty()) return "";
    const std::string hay_lower = text::to_lower(location);

    struct Hit {
        std::size_t pos;
        std::size_t len;
        const std::string* canonical;
    };
    std::vector<Hit> hits;
    for (const auto& [name, canonical] : country_gazetteer()) {
        // Short acronyms ("US", "UK", "UAE") match case-sensitively so prose
        // words never trigger them; full names match case-insensitively.
        const bool sensitive = alpha_count(name) <= 3;
        const std::string& hay = sensitive ? location : hay_lower;
        const std::string needle = sensitive ? name : text::to_lower(name);
        std::size_t pos = 0;
        while ((pos = hay.find(needle, pos)) != std::string::npos) {
            bool left_ok = pos == 0 || !is_word_char(hay[pos - 1]);
            std::size_t end = pos + needle.size();
            bool right_ok = end >= hay.size() || !is_word_char(hay[end]);
            if (left_ok && right_ok) hits.push_back({pos, needle.size(), &canonical});
            ++pos;
        }
    }
    // Earliest match first; on overlap the longer name wins ("Papua New
    // Guinea" suppresses the contained "Guinea").
    std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
        if (a.pos != b.pos) return a.pos < b.pos;
        if (a.len != b.len) return a.len > b.len;
        return *a.canonical < *b.canonical;
    });
    std::vector<std::string> found;
    std::set<std::string> seen;
    std::size_t covered_to = 0;
    for (const auto& hit : hits) {
        if (hit.pos < covered_to && covered_to > 0) continue;
        covered_to = hit.pos + hit.len;
        if (seen.insert(*hit.canonical).second) found.push_back(*hit.canonical);
    }
    return text::join(found, ", ");
}

std::string extract_countries(const std::string& location, llm::Gateway* gateway,
                              const std::string& model) {
    std::string found = gazetteer_countries(location);
    if (!found.empty()) return found;
    if (gateway != nullptr && !model.empty() && !text::trim(location).empty()) {
        try {
            std::string prompt = llm::PromptRegistry::instance().render(
                "country_extract", {{"location", location}});
            llm::LLMResponse resp = gateway->complete(cell_request(model, std::move(prompt)));
            std::string answer = first_nonempty_line(resp.text);
            if (!answer.empty() && !text::iequals(answer, "N/A") && !text::iequals(answer, "NA")) {
                return answer;
            }
        } catch (const Error&) {
            // fall through to the gazetteer result
        }
    }
    return "N/A";
}

std::string llm_clean_cell(const std::string& column, const std::string& value,
                           llm::Gateway& gateway, const std::string& model) {
    if (text::iequals(column, "countries")) return value;
    if (text::trim(value).empty()) return value;
    std::string prompt =
        llm::PromptRegistry::instance().render("clean_cell", {{"column", column}, {"value", value}});
    llm::LLMResponse resp = gateway.complete(cell_request(model, std::move(prompt)));
    std::string answer = first_nonempty_line(resp.text);
    std::string normalized = extract::voting_normalize(answer);
    if (!normalized.empty() && normalized.back() == '.') normalized.pop_back();
    if (text::trim(normalized) == "not specified") return "";
    // A reply far longer than the input is the model rambling, not cleaning.
    if (answer.empty() || answer.size() > 10 * std::max<std::size_t>(1, value.size())) {
        return value;
    }
    return answer;
}

std::vector<store::AssetRow> drop_empty_assets(std::vector<store::AssetRow> rows) {
    std::erase_if(rows, [](const store::AssetRow& row) {
        return text::trim(row.physical_asset).empty();
    });
    return rows;
}

std::vector<store::AssetRow> phase1(std::vector<store::AssetRow> rows,
                                    const StandardizationRules& rules, llm::Gateway* gateway,
                                    const std::string& country_model) {
    for (auto& row : rows) {
        row.physical_asset = standardize_text(row.physical_asset, rules);
        row.location = standardize_text(row.location, rules);
        row.ownership = standardize_text(row.ownership, rules);
        row.commodity = standardize_text(row.commodity, rules);
        row.status = standardize_text(row.status, rules);
        row.ownership = normalize_aliases("ownership", row.ownership, rules);
        row.location = normalize_aliases("location", row.location, rules);
    }
    rows = consolidate_duplicates(std::move(rows));
    for (auto& row : rows) {
        row.countries = extract_countries(row.location, gateway, country_model);
    }
    return drop_empty_assets(std::move(rows));
}

std::vector<store::AssetRow> phase2(std::vector<store::AssetRow> rows,
                                    const ConsolidationConfig& config) {
    return consolidate_similar(std::move(rows), config);
}

std::vector<store::AssetRow> phase3(std::vector<store::AssetRow> rows, llm::Gateway& gateway,
                                    const std::string& model) {
    for (auto& row : rows) {
        row.physical_asset = llm_clean_cell("Physical Asset", row.physical_asset, gateway, model);
        row.location = llm_clean_cell("Location", row.location, gateway, model);
        row.ownership = llm_clean_cell("Ownership", row.ownership, gateway, model);
        row.commodity = llm_clean_cell("Commodity", row.commodity, gateway, model);
        row.status = llm_clean_cell("Status", row.status, gateway, model);
    }
    return rows;
}

}  // namespace assetdb::clean
