#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "assetdb/chunker.hpp"
#include "assetdb/llm.hpp"

namespace assetdb::extract {

// One asset tuple from a model's "relationships:" section. All-empty tuples
// are dropped at parse time, so at least one field is always populated.
struct Relationship {
    std::string asset;
    std::string location;
    std::string ownership;
    std::string commodity;
    std::string status;

    bool all_empty() const {
        return asset.empty() && location.empty() && ownership.empty() && commodity.empty() &&
               status.empty();
    }
    bool operator==(const Relationship&) const = default;
};

// Parsed entity lists + relationships from one model response. Lists hold the
// first-seen spelling of each entity; duplicates are folded by the voting
// normalizer (lowercase, trim, collapse whitespace). raw_response always
// preserves the model output verbatim.
struct ExtractionRecord {
    std::string chunk_id;
    std::string model;
    std::string template_id;
    std::vector<std::string> physical_assets;
    std::vector<std::string> locations;
    std::vector<std::string> ownerships;
    std::vector<std::string> commodities;
    std::vector<std::string> statuses;
    std::vector<Relationship> relationships;
    std::string raw_response;
    bool parse_warning = false;
};

struct EnsembleConfig {
    std::map<std::string, double> weights;  // model → weight in [0,1], summing to 1
    double keep_threshold = 0.5;            // keep entity when weight sum ≥ this
    std::string normalizer = "default";     // id of the voting normalizer
};

// The normalization applied before voting and deduplication.
std::string voting_normalize(const std::string& s);

// Parses a model response: bracketed lists after the entity labels
// ("physical assets:", "locations:", "ownerships:", "commodities:",
// "status:", singular or plural, case-insensitive, tolerant of the label
// sitting inside the bracket) and quoted key-value tuples after
// "relationships:". Never throws on arbitrary text; when nothing at all is
// recognized the record comes back empty with parse_warning set.
ExtractionRecord parse_extraction(const std::string& raw);

struct RequestOptions {
    double temperature = 0.0;
    std::optional<long long> seed;
    int max_output_tokens = 2048;
    std::chrono::milliseconds timeout{120000};
};

// Single-prompt extraction: renders template_id with the chunk text, calls
// the gateway, and parses the response. Only templates whose sole required
// binding is the chunk text qualify (zero_shot, one_shot, few_shot, cot,
// role, role_instructional, irz_cot, dynamic, table_improved); the multi-step
// families have dedicated runners below. Gateway errors propagate tagged with
// the chunk id.
ExtractionRecord extract_chunk(const chunker::Chunk& chunk, llm::Gateway& gateway,
                               const std::string& model, const std::string& template_id,
                               const RequestOptions& options = {});

// Five-step chain: assets → locations → ownerships → commodities →
// relationships, each step fed the previous lists. Resulting record is tagged
// template "prompt_chain"; raw_response concatenates the step responses.
ExtractionRecord run_prompt_chain(const chunker::Chunk& chunk, llm::Gateway& gateway,
                                  const std::string& model,
                                  const RequestOptions& options = {});

// Generated-knowledge flow: one seed call produces background knowledge that
// prefixes the same five-step chain. Tagged template "generated_knowledge".
ExtractionRecord run_generated_knowledge(const chunker::Chunk& chunk, llm::Gateway& gateway,
                                         const std::string& model,
                                         const RequestOptions& options = {});

// Exact-agreement majority vote: an entity survives when strictly more than
// half of the records contain it (ties at exactly half drop). Relationships
// survive when their asset does. Requires ≥ 2 records sharing one chunk_id.
ExtractionRecord ensemble_eamv(const std::vector<ExtractionRecord>& records);

// Weighted vote: an entity survives when the weights of the models containing
// it sum to at least config.keep_threshold.
ExtractionRecord ensemble_wmve(const std::vector<ExtractionRecord>& records,
                               const EnsembleConfig& config);

// True for template ids extract_chunk can run directly (single prompt whose
// only required binding is chunk/text).
bool is_single_prompt_template(const std::string& template_id);

}  // namespace assetdb::extract
