#include "assetdb/extract.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstring>
#include <map>
#include <set>

#include "assetdb/errors.hpp"
#include "assetdb/text.hpp"

namespace assetdb::extract {

namespace {

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

enum class Field { Assets, Locations, Ownerships, Commodities, Statuses, Relationships };

struct LabelVariant {
    const char* label;  // lowercase
    Field field;
};

// Singular and plural spellings both match; the boundary checks below keep
// "location" from firing inside "locations".
constexpr std::array<LabelVariant, 12> kSectionLabels = {{
    {"physical assets", Field::Assets},
    {"physical asset", Field::Assets},
    {"locations", Field::Locations},
    {"location", Field::Locations},
    {"ownerships", Field::Ownerships},
    {"ownership", Field::Ownerships},
    {"commodities", Field::Commodities},
    {"commodity", Field::Commodities},
    {"statuses", Field::Statuses},
    {"status", Field::Statuses},
    {"relationships", Field::Relationships},
    {"relationship", Field::Relationships},
}};

constexpr std::array<LabelVariant, 10> kTupleKeys = {{
    {"assets", Field::Assets},
    {"asset", Field::Assets},
    {"locations", Field::Locations},
    {"location", Field::Locations},
    {"ownerships", Field::Ownerships},
    {"ownership", Field::Ownerships},
    {"commodities", Field::Commodities},
    {"commodity", Field::Commodities},
    {"statuses", Field::Statuses},
    {"status", Field::Statuses},
}};

// Drops wrapping quotes/brackets an LLM may leave around an entity.
std::string clean_item(std::string item) {
    item = text::trim(item);
    while (!item.empty() &&
           (item.front() == '\'' || item.front() == '"' || item.front() == '[')) {
        item.erase(item.begin());
        item = text::trim(item);
    }
    while (!item.empty() && (item.back() == '\'' || item.back() == '"' || item.back() == ']')) {
        item.pop_back();
        item = text::trim(item);
    }
    return item;
}

// Splits bracketed-list content into entities. Content that leads with a
// quote is treated as quoted items (commas inside quotes preserved);
// otherwise items are comma-separated.
std::vector<std::string> split_items(const std::string& content) {
    std::vector<std::string> items;
    std::string trimmed = text::trim(content);
    if (!trimmed.empty() && (trimmed[0] == '\'' || trimmed[0] == '"')) {
        std::size_t i = 0;
        bool any = false;
        while (i < trimmed.size()) {
            char q = trimmed[i];
            if (q == '\'' || q == '"') {
                std::size_t close = trimmed.find(q, i + 1);
                if (close == std::string::npos) break;
                items.push_back(trimmed.substr(i + 1, close - i - 1));
                any = true;
                i = close + 1;
            } else {
                ++i;
            }
        }
        if (any) {
            std::vector<std::string> out;
            for (auto& it : items) {
                std::string c = clean_item(it);
                if (!c.empty()) out.push_back(std::move(c));
            }
            return out;
        }
        items.clear();
    }
    for (const std::string& part : text::split_and_trim(trimmed, ',')) {
        std::string c = clean_item(part);
        if (!c.empty()) items.push_back(std::move(c));
    }
    return items;
}

// Matches `label` at `pos` in lower with word boundaries on both sides.
bool label_at(const std::string& lower, std::size_t pos, const char* label) {
    std::size_t len = std::strlen(label);
    if (lower.compare(pos, len, label) != 0) return false;
    if (pos > 0 && is_word_char(lower[pos - 1])) return false;
    if (pos + len < lower.size() && is_word_char(lower[pos + len])) return false;
    return true;
}

std::vector<std::string>* field_list(ExtractionRecord& rec, Field f) {
    switch (f) {
        case Field::Assets: return &rec.physical_assets;
        case Field::Locations: return &rec.locations;
        case Field::Ownerships: return &rec.ownerships;
        case Field::Commodities: return &rec.commodities;
        case Field::Statuses: return &rec.statuses;
        case Field::Relationships: return nullptr;
    }
    return nullptr;
}

std::string* tuple_field(Relationship& rel, Field f) {
    switch (f) {
        case Field::Assets: return &rel.asset;
        case Field::Locations: return &rel.location;
        case Field::Ownerships: return &rel.ownership;
        case Field::Commodities: return &rel.commodity;
        case Field::Statuses: return &rel.status;
        case Field::Relationships: return nullptr;
    }
    return nullptr;
}

// Reads a run of quoted values at `p` ("'a'", "'a', 'b'", …), returning them
// joined with ", ". Returns nullopt when p does not sit on a quote.
std::optional<std::string> read_quoted_values(const std::string& raw, std::size_t& p) {
    if (p >= raw.size() || (raw[p] != '\'' && raw[p] != '"')) return std::nullopt;
    std::vector<std::string> values;
    std::size_t cursor = p;
    while (true) {
        char q = raw[cursor];
        if (q != '\'' && q != '"') break;
        std::size_t close = raw.find(q, cursor + 1);
        if (close == std::string::npos) break;
        values.push_back(raw.substr(cursor + 1, close - cursor - 1));
        cursor = close + 1;
        std::size_t probe = cursor;
        while (probe < raw.size() && is_space(raw[probe])) ++probe;
        if (probe < raw.size() && raw[probe] == ',') {
            ++probe;
            while (probe < raw.size() && is_space(raw[probe])) ++probe;
            if (probe < raw.size() && (raw[probe] == '\'' || raw[probe] == '"')) {
                cursor = probe;
                continue;
            }
        }
        break;
    }
    if (values.empty()) return std::nullopt;
    p = cursor;
    std::string joined;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) joined += ", ";
        joined += text::trim(values[i]);
    }
    return joined;
}

std::string normalized_tuple_key(const Relationship& r) {
    return voting_normalize(r.asset) + "\x1f" + voting_normalize(r.location) + "\x1f" +
           voting_normalize(r.ownership) + "\x1f" + voting_normalize(r.commodity) + "\x1f" +
           voting_normalize(r.status);
}

// Ensures every non-empty relationship asset also appears in the asset list.
void merge_relationship_assets(ExtractionRecord& rec) {
    std::set<std::string> keys;
    for (const auto& a : rec.physical_assets) keys.insert(voting_normalize(a));
    for (const auto& rel : rec.relationships) {
        if (rel.asset.empty()) continue;
        std::string key = voting_normalize(rel.asset);
        if (keys.insert(key).second) rec.physical_assets.push_back(rel.asset);
    }
}

std::string serialize_list(const std::vector<std::string>& items) {
    std::string out = "[";
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) out += ", ";
        out += items[i];
    }
    out += "]";
    return out;
}

// ---------------------------------------------------------------------------
// Ensemble plumbing
// ---------------------------------------------------------------------------

struct VoteEntry {
    std::string spelling;          // first seen
    std::set<std::size_t> records;  // indices of records containing the entity
};

using FieldMember = std::vector<std::string> ExtractionRecord::*;

constexpr std::array<FieldMember, 5> kVotedFields = {
    &ExtractionRecord::physical_assets, &ExtractionRecord::locations,
    &ExtractionRecord::ownerships, &ExtractionRecord::commodities,
    &ExtractionRecord::statuses};

void check_same_chunk(const std::vector<ExtractionRecord>& records) {
    if (records.size() < 2) {
        throw Error("ensemble needs at least 2 records, got " +
                    std::to_string(records.size()));
    }
    for (const auto& r : records) {
        if (r.chunk_id != records.front().chunk_id) {
            throw Error("ensemble records span different chunks: '" +
                        records.front().chunk_id + "' vs '" + r.chunk_id + "'");
        }
    }
}

// Runs the vote with an arbitrary keep predicate over the record-index set.
template <typename KeepFn>
ExtractionRecord vote(const std::vector<ExtractionRecord>& records, const std::string& name,
                      KeepFn keep) {
    ExtractionRecord out;
    out.chunk_id = records.front().chunk_id;
    out.model = name;
    out.template_id = records.front().template_id;
    for (const auto& r : records) out.parse_warning = out.parse_warning || r.parse_warning;

    std::set<std::string> kept_assets;
    for (FieldMember member : kVotedFields) {
        std::vector<VoteEntry> entries;
        std::map<std::string, std::size_t> index;
        for (std::size_t ri = 0; ri < records.size(); ++ri) {
            for (const std::string& item : records[ri].*member) {
                std::string key = voting_normalize(item);
                if (key.empty()) continue;
                auto it = index.find(key);
                if (it == index.end()) {
                    index.emplace(key, entries.size());
                    entries.push_back({item, {ri}});
                } else {
                    entries[it->second].records.insert(ri);
                }
            }
        }
        auto& target = out.*member;
        for (const auto& e : entries) {
            if (!keep(e.records)) continue;
            target.push_back(e.spelling);
            if (member == &ExtractionRecord::physical_assets) {
                kept_assets.insert(voting_normalize(e.spelling));
            }
        }
    }

    std::set<std::string> seen_tuples;
    for (const auto& r : records) {
        for (const auto& rel : r.relationships) {
            if (rel.asset.empty()) continue;
            if (kept_assets.count(voting_normalize(rel.asset)) == 0) continue;
            if (seen_tuples.insert(normalized_tuple_key(rel)).second) {
                out.relationships.push_back(rel);
            }
        }
    }
    return out;
}

}  // namespace

std::string voting_normalize(const std::string& s) { return text::normalize_entity(s); }

ExtractionRecord parse_extraction(const std::string& raw) {
    ExtractionRecord rec;
    rec.raw_response = raw;

    std::string lower = text::to_lower(raw);
    int sections_found = 0;
    std::size_t relationships_at = std::string::npos;

    // Bracketed entity sections: `label : [ ... ]`, tolerating the label
    // itself sitting inside the bracket ("[commodities: copper, gold]").
    std::map<Field, std::pair<std::vector<std::string>, std::set<std::string>>> buckets;
    for (const auto& variant : kSectionLabels) {
        std::size_t len = std::strlen(variant.label);
        std::size_t pos = lower.find(variant.label);
        while (pos != std::string::npos) {
            std::size_t start = pos;
            pos = lower.find(variant.label, pos + 1);
            if (!label_at(lower, start, variant.label)) continue;
            std::size_t p = start + len;
            while (p < raw.size() && is_space(raw[p])) ++p;
            if (p >= raw.size() || raw[p] != ':') continue;
            ++p;
            if (variant.field == Field::Relationships) {
                if (relationships_at == std::string::npos) relationships_at = p;
                continue;
            }
            while (p < raw.size() && is_space(raw[p])) ++p;
            std::string content;
            bool label_inside_bracket = start > 0 && raw[start - 1] == '[';
            if (label_inside_bracket) {
                std::size_t close = raw.find(']', p);
                if (close == std::string::npos) continue;
                content = raw.substr(p, close - p);
            } else {
                if (p >= raw.size() || raw[p] != '[') continue;
                std::size_t close = raw.find(']', p + 1);
                if (close == std::string::npos) continue;
                content = raw.substr(p + 1, close - p - 1);
            }
            ++sections_found;
            auto& [list, keys] = buckets[variant.field];
            for (const std::string& item : split_items(content)) {
                std::string key = voting_normalize(item);
                if (key.empty()) continue;
                if (keys.insert(key).second) list.push_back(item);
            }
        }
    }
    for (auto& [field, bucket] : buckets) {
        *field_list(rec, field) = std::move(bucket.first);
    }

    // Quoted key-value tuples after the first "relationships:" label.
    if (relationships_at != std::string::npos) {
        std::set<std::string> seen;
        Relationship cur;
        bool started = false;
        auto flush = [&] {
            if (started && !cur.all_empty() && seen.insert(normalized_tuple_key(cur)).second) {
                rec.relationships.push_back(cur);
            }
            cur = {};
            started = false;
        };
        std::size_t p = relationships_at;
        while (p < raw.size()) {
            bool matched = false;
            for (const auto& key : kTupleKeys) {
                if (!label_at(lower, p, key.label)) continue;
                std::size_t q = p + std::strlen(key.label);
                while (q < raw.size() && is_space(raw[q])) ++q;
                if (q >= raw.size() || raw[q] != ':') break;
                ++q;
                while (q < raw.size() && is_space(raw[q])) ++q;
                auto value = read_quoted_values(raw, q);
                if (!value.has_value()) break;
                if (key.field == Field::Assets) flush();
                started = true;
                std::string* slot = tuple_field(cur, key.field);
                std::string cleaned = clean_item(*value);
                if (!cleaned.empty()) {
                    if (slot->empty()) {
                        *slot = cleaned;
                    } else {
                        *slot += ", " + cleaned;
                    }
                }
                p = q;
                matched = true;
                break;
            }
            if (!matched) ++p;
        }
        flush();
    }

    merge_relationship_assets(rec);
    rec.parse_warning = sections_found == 0 && relationships_at == std::string::npos;
    return rec;
}

bool is_single_prompt_template(const std::string& template_id) {
    const auto& registry = llm::PromptRegistry::instance();
    if (!registry.contains(template_id)) return false;
    const auto& required = registry.get(template_id).required_bindings;
    return required == std::vector<std::string>{"chunk"} ||
           required == std::vector<std::string>{"text"};
}

namespace {

llm::LLMRequest make_request(const std::string& model, std::string prompt,
                             const RequestOptions& options) {
    llm::LLMRequest req;
    req.model = model;
    req.prompt = std::move(prompt);
    req.temperature = options.temperature;
    req.seed = options.seed;
    req.max_output_tokens = options.max_output_tokens;
    req.timeout = options.timeout;
    return req;
}

std::string ask(llm::Gateway& gateway, const std::string& model, const std::string& tmpl,
                const llm::Bindings& bindings, const RequestOptions& options,
                const std::string& chunk_tag) {
    std::string prompt = llm::render_prompt(tmpl, bindings);
    try {
        return gateway.complete(make_request(model, std::move(prompt), options)).text;
    } catch (const LlmError& e) {
        throw LlmError("chunk " + chunk_tag + ": " + e.what());
    }
}

}  // namespace

ExtractionRecord extract_chunk(const chunker::Chunk& chunk, llm::Gateway& gateway,
                               const std::string& model, const std::string& template_id,
                               const RequestOptions& options) {
    const auto& registry = llm::PromptRegistry::instance();
    const auto& tmpl = registry.get(template_id);  // throws on unknown id
    if (!is_single_prompt_template(template_id)) {
        throw TemplateError("template '" + template_id +
                            "' needs multi-step orchestration; use its dedicated runner");
    }
    const std::string binding_name = tmpl.required_bindings.front();
    std::string id = chunker::chunk_id(chunk);
    std::string response =
        ask(gateway, model, template_id, {{binding_name, chunk.text}}, options, id);

    ExtractionRecord rec = parse_extraction(response);
    rec.chunk_id = id;
    rec.model = model;
    rec.template_id = template_id;
    return rec;
}

ExtractionRecord run_prompt_chain(const chunker::Chunk& chunk, llm::Gateway& gateway,
                                  const std::string& model, const RequestOptions& options) {
    std::string id = chunker::chunk_id(chunk);
    llm::Bindings b{{"chunk", chunk.text}};

    std::string r1 = ask(gateway, model, "prompt_chain1", b, options, id);
    ExtractionRecord s1 = parse_extraction(r1);
    b["physical_assets"] = serialize_list(s1.physical_assets);

    std::string r2 = ask(gateway, model, "prompt_chain2", b, options, id);
    ExtractionRecord s2 = parse_extraction(r2);
    b["locations"] = serialize_list(s2.locations);

    std::string r3 = ask(gateway, model, "prompt_chain3", b, options, id);
    ExtractionRecord s3 = parse_extraction(r3);
    b["ownerships"] = serialize_list(s3.ownerships);

    std::string r4 = ask(gateway, model, "prompt_chain4", b, options, id);
    ExtractionRecord s4 = parse_extraction(r4);
    b["commodities"] = serialize_list(s4.commodities);

    std::string r5 = ask(gateway, model, "prompt_chain5", b, options, id);
    ExtractionRecord s5 = parse_extraction(r5);

    ExtractionRecord rec;
    rec.chunk_id = id;
    rec.model = model;
    rec.template_id = "prompt_chain";
    rec.physical_assets = s1.physical_assets;
    rec.locations = s2.locations;
    rec.ownerships = s3.ownerships;
    rec.commodities = s4.commodities;
    rec.relationships = s5.relationships;
    rec.raw_response = r1 + "\n\n" + r2 + "\n\n" + r3 + "\n\n" + r4 + "\n\n" + r5;
    rec.parse_warning = s1.parse_warning || s2.parse_warning || s3.parse_warning ||
                        s4.parse_warning || s5.parse_warning;
    merge_relationship_assets(rec);
    return rec;
}

ExtractionRecord run_generated_knowledge(const chunker::Chunk& chunk, llm::Gateway& gateway,
                                         const std::string& model,
                                         const RequestOptions& options) {
    std::string id = chunker::chunk_id(chunk);
    std::string knowledge = ask(gateway, model, "generated_knowledge_seed", {}, options, id);

    llm::Bindings b{{"generated_knowledge", knowledge}, {"chunk", chunk.text}};

    std::string r1 = ask(gateway, model, "generated_knowledge1", b, options, id);
    ExtractionRecord s1 = parse_extraction(r1);
    b["physical_assets"] = serialize_list(s1.physical_assets);

    std::string r2 = ask(gateway, model, "generated_knowledge2", b, options, id);
    ExtractionRecord s2 = parse_extraction(r2);
    b["locations"] = serialize_list(s2.locations);

    std::string r3 = ask(gateway, model, "generated_knowledge3", b, options, id);
    ExtractionRecord s3 = parse_extraction(r3);
    b["ownerships"] = serialize_list(s3.ownerships);

    std::string r4 = ask(gateway, model, "generated_knowledge4", b, options, id);
    ExtractionRecord s4 = parse_extraction(r4);
    b["commodities"] = serialize_list(s4.commodities);

    std::string r5 = ask(gateway, model, "generated_knowledge5", b, options, id);
    ExtractionRecord s5 = parse_extraction(r5);

    ExtractionRecord rec;
    rec.chunk_id = id;
    rec.model = model;
    rec.template_id = "generated_knowledge";
    rec.physical_assets = s1.physical_assets;
    rec.locations = s2.locations;
    rec.ownerships = s3.ownerships;
    rec.commodities = s4.commodities;
    rec.relationships = s5.relationships;
    rec.raw_response =
        knowledge + "\n\n" + r1 + "\n\n" + r2 + "\n\n" + r3 + "\n\n" + r4 + "\n\n" + r5;
    rec.parse_warning = s1.parse_warning || s2.parse_warning || s3.parse_warning ||
                        s4.parse_warning || s5.parse_warning;
    merge_relationship_assets(rec);
    return rec;
}

ExtractionRecord ensemble_eamv(const std::vector<ExtractionRecord>& records) {
    check_same_chunk(records);
    const std::size_t n = records.size();
    return vote(records, "eamv",
                [n](const std::set<std::size_t>& present) { return 2 * present.size() > n; });
}

ExtractionRecord ensemble_wmve(const std::vector<ExtractionRecord>& records,
                               const EnsembleConfig& config) {
    check_same_chunk(records);
    if (config.weights.empty()) throw ConfigError("ensemble weights must not be empty");
    if (config.normalizer != "default") {
        throw ConfigError("unknown ensemble normalizer '" + config.normalizer + "'");
    }
    double sum = 0.0;
    for (const auto& [model, w] : config.weights) {
        if (w < 0.0 || w > 1.0) {
            throw ConfigError("ensemble weight for '" + model + "' outside [0,1]");
        }
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
        throw ConfigError("ensemble weights must sum to 1, got " + std::to_string(sum));
    }
    if (config.keep_threshold <= 0.0 || config.keep_threshold > 1.0) {
        throw ConfigError("ensemble keep_threshold must be in (0,1]");
    }
    for (const auto& r : records) {
        if (config.weights.count(r.model) == 0) {
            throw ConfigError("no ensemble weight for model '" + r.model + "'");
        }
    }

    return vote(records, "wmve", [&](const std::set<std::size_t>& present) {
        std::set<std::string> models;
        for (std::size_t ri : present) models.insert(records[ri].model);
        double total = 0.0;
        for (const auto& m : models) total += config.weights.at(m);
        return total >= config.keep_threshold - 1e-9;
    });
}

}  // namespace assetdb::extract
