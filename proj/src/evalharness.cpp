#include "assetdb/evalharness.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "assetdb/errors.hpp"
#include "assetdb/simmetrics.hpp"
#include "assetdb/text.hpp"
#include "json.hpp"

namespace assetdb::evalharness {

namespace {

using nlohmann::json;

std::vector<std::string> string_list(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) return {};
    if (!j[key].is_array()) throw ConfigError(where + ": '" + key + "' must be an array");
    std::vector<std::string> out;
    for (const auto& item : j[key]) {
        if (!item.is_string()) throw ConfigError(where + ": '" + key + "' must hold strings");
        out.push_back(item.get<std::string>());
    }
    return out;
}

// Every entity the record claims, flattened across the four entity lists.
std::vector<std::string> flatten_entities(const std::vector<std::string>& assets,
                                          const std::vector<std::string>& locations,
                                          const std::vector<std::string>& ownerships,
                                          const std::vector<std::string>& commodities) {
    std::vector<std::string> all;
    all.reserve(assets.size() + locations.size() + ownerships.size() + commodities.size());
    for (const auto* list : {&assets, &locations, &ownerships, &commodities}) {
        all.insert(all.end(), list->begin(), list->end());
    }
    return all;
}

}  // namespace

std::vector<GroundTruthChunk> load_ground_truth(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read ground truth " + path);
    std::vector<GroundTruthChunk> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        const std::string where = path + ":" + std::to_string(line_no);
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw ConfigError(where + ": " + e.what());
        }
        GroundTruthChunk chunk;
        if (!j.contains("chunk_id") || !j["chunk_id"].is_string()) {
            throw ConfigError(where + ": missing string field 'chunk_id'");
        }
        chunk.chunk_id = j["chunk_id"].get<std::string>();
        if (!j.contains("text") || !j["text"].is_string() ||
            j["text"].get<std::string>().empty()) {
            throw ConfigError(where + ": missing non-empty string field 'text'");
        }
        chunk.text = j["text"].get<std::string>();
        chunk.physical_assets = string_list(j, "physical_assets", where);
        chunk.locations = string_list(j, "locations", where);
        chunk.ownerships = string_list(j, "ownerships", where);
        chunk.commodities = string_list(j, "commodities", where);
        for (const auto& rel : j.value("relationships", json::array())) {
            extract::Relationship r;
            r.asset = rel.value("asset", "");
            r.location = rel.value("location", "");
            r.ownership = rel.value("ownership", "");
            r.commodity = rel.value("commodity", "");
            r.status = rel.value("status", "");
            if (r.all_empty()) throw ConfigError(where + ": relationship with no fields");
            chunk.relationships.push_back(std::move(r));
        }
        out.push_back(std::move(chunk));
    }
    return out;
}

EvalReport evaluate_extraction(const std::vector<extract::ExtractionRecord>& predictions,
                               const std::vector<GroundTruthChunk>& truth) {
    std::map<std::string, const extract::ExtractionRecord*> by_chunk;
    for (const auto& p : predictions) by_chunk[p.chunk_id] = &p;
    std::set<std::string> truth_ids;
    for (const auto& t : truth) truth_ids.insert(t.chunk_id);
    if (by_chunk.size() != truth_ids.size() ||
        !std::all_of(truth.begin(), truth.end(),
                     [&](const GroundTruthChunk& t) { return by_chunk.count(t.chunk_id); })) {
        throw ValidationError("prediction chunk ids do not align with the ground truth");
    }

    EvalReport report;
    report.chunk_count = static_cast<int>(truth.size());
    if (truth.empty()) return report;

    double cosine_sum = 0.0, jaccard_sum = 0.0;
    double p_sum = 0.0, r_sum = 0.0, f_sum = 0.0;
    for (const auto& t : truth) {
        const extract::ExtractionRecord& pred = *by_chunk.at(t.chunk_id);
        std::vector<std::string> predicted = flatten_entities(
            pred.physical_assets, pred.locations, pred.ownerships, pred.commodities);
        std::vector<std::string> expected =
            flatten_entities(t.physical_assets, t.locations, t.ownerships, t.commodities);
        std::string predicted_text = text::join(predicted, " ");
        std::string expected_text = text::join(expected, " ");
        cosine_sum += simmetrics::cosine_tokens(predicted_text, expected_text);
        jaccard_sum += simmetrics::jaccard(predicted_text, expected_text);
        simmetrics::Prf prf = simmetrics::prf(predicted, expected);
        p_sum += prf.precision;
        r_sum += prf.recall;
        f_sum += prf.f1;
    }
    auto n = static_cast<double>(truth.size());
    report.cosine = cosine_sum / n;
    report.jaccard = jaccard_sum / n;
    report.precision = p_sum / n;
    report.recall = r_sum / n;
    report.f1 = f_sum / n;
    return report;
}

std::vector<EvalReport> compare_prompts(const std::vector<std::string>& template_ids,
                                        const std::vector<GroundTruthChunk>& eval_set,
                                        llm::Gateway& gateway, const std::string& model,
                                        const extract::RequestOptions& options) {
    std::vector<EvalReport> reports;
    for (const auto& template_id : template_ids) {
        auto started = std::chrono::steady_clock::now();
        std::vector<extract::ExtractionRecord> predictions;
        std::vector<GroundTruthChunk> scored_truth;
        EvalReport failed_report;
        for (std::size_t i = 0; i < eval_set.size(); ++i) {
            const GroundTruthChunk& gt = eval_set[i];
            chunker::Chunk chunk;
            chunk.filing_id = "eval";
            chunk.seq = static_cast<int>(i);
            chunk.text = gt.text;
            chunk.token_count = static_cast<int>(text::split_whitespace(gt.text).size());
            try {
                extract::ExtractionRecord record;
                if (template_id == "prompt_chain") {
                    record = extract::run_prompt_chain(chunk, gateway, model, options);
                } else if (template_id == "generated_knowledge") {
                    record = extract::run_generated_knowledge(chunk, gateway, model, options);
                } else {
                    record = extract::extract_chunk(chunk, gateway, model, template_id, options);
                }
                record.chunk_id = gt.chunk_id;
                predictions.push_back(std::move(record));
                scored_truth.push_back(gt);
            } catch (const Error& e) {
                failed_report.error_count += 1;
                failed_report.errors.push_back(gt.chunk_id + ": " + e.what());
            }
        }
        EvalReport report = evaluate_extraction(predictions, scored_truth);
        report.configuration = template_id;
        report.error_count = failed_report.error_count;
        report.errors = std::move(failed_report.errors);
        report.wall_time = std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - started);
        reports.push_back(std::move(report));
    }
    return reports;
}

}  // namespace assetdb::evalharness
