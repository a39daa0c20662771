#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "assetdb/extract.hpp"
#include "assetdb/llm.hpp"

namespace assetdb::evalharness {

// One manually annotated chunk: the text plus the entities and relationships
// a correct extraction should produce.
struct GroundTruthChunk {
    std::string chunk_id;
    std::string text;
    std::vector<std::string> physical_assets;
    std::vector<std::string> locations;
    std::vector<std::string> ownerships;
    std::vector<std::string> commodities;
    std::vector<extract::Relationship> relationships;
};

// Aggregated quality measurements for one extraction configuration.
struct EvalReport {
    std::string configuration;  // template id (or empty for ad-hoc evaluation)
    double cosine = 0.0;
    double jaccard = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::chrono::milliseconds wall_time{0};
    int chunk_count = 0;
    int error_count = 0;
    std::vector<std::string> errors;  // one message per failed row
};

// Parses the ground-truth JSONL (one GroundTruthChunk per line). Schema
// violations name the offending line. Empty file → empty list.
std::vector<GroundTruthChunk> load_ground_truth(const std::string& path);

// Scores predictions against the annotated chunks. Entity lists are
// flattened per chunk; jaccard and token-cosine compare the concatenated
// entity strings; precision/recall/F1 come from greedy one-to-one entity
// matching. All values are means over chunks. Throws ValidationError when
// the chunk id sets differ.
EvalReport evaluate_extraction(const std::vector<extract::ExtractionRecord>& predictions,
                               const std::vector<GroundTruthChunk>& truth);

// Runs each template over the eval set and reports metrics plus wall time.
// Per-row extraction failures are recorded in the report and the remaining
// rows continue.
std::vector<EvalReport> compare_prompts(const std::vector<std::string>& template_ids,
                                        const std::vector<GroundTruthChunk>& eval_set,
                                        llm::Gateway& gateway, const std::string& model,
                                        const extract::RequestOptions& options = {});

}  // namespace assetdb::evalharness
