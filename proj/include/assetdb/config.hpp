#pragma once

#include <string>
#include <vector>

#include "assetdb/chunker.hpp"
#include "assetdb/llm.hpp"
#include "json.hpp"

namespace assetdb::config {

struct CompanyEntry {
    std::string ticker;
    std::string cik;
    std::vector<std::string> filings;  // paths, relative to paths.input_dir when set
};

// Every tunable of the pipeline, loadable from one JSON file. CLI flags
// override individual fields after loading.
struct Config {
    // chunker.*
    chunker::ChunkerConfig chunker;

    // llm.*
    std::string llm_endpoint = "http://127.0.0.1:11434";
    llm::GatewayConfig gateway;
    double llm_timeout_s = 120.0;
    std::string llm_stub_path;  // when set, a scripted provider replaces HTTP

    // models.*
    std::string model_extraction;
    std::string model_cleaning;
    std::string model_rav_answer;
    std::string model_rav_classifier;

    // clean.*
    double tfidf_threshold = 0.5;

    // validate.*
    double match_threshold = 0.6;
    int hits_k = 5;
    std::vector<std::string> status_exclusions{"closed", "abandoned"};

    // rav.*
    int rav_top_n = 10;
    int rav_top_k = 3;
    std::string rav_provider = "mock";  // "mock" | "http"
    std::string rav_replay_path;

    // paths.*
    std::string input_dir;
    std::string reference_csv;
    std::string ground_truth;
    std::string output_dir = "out";
    std::string data_dir;  // alias CSV directory; built-in rules when empty

    // pipeline.*
    int workers = 1;
    std::string prompt = "zero_shot";  // extraction template id

    std::vector<CompanyEntry> companies;
};

// Parses and range-checks a config JSON document. Unknown keys are rejected
// so typos fail loudly.
Config from_json(const nlohmann::json& j);

Config load_config(const std::string& path);

}  // namespace assetdb::config
