#include "assetdb/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "assetdb/errors.hpp"

namespace assetdb::config {

namespace {

using nlohmann::json;

// Pulls section `name` out of the document, rejecting unknown keys inside it.
class Section {
public:
    Section(const json& root, const std::string& name) : name_(name) {
        if (root.contains(name)) {
            if (!root[name].is_object()) throw ConfigError("config section '" + name + "' must be an object");
            data_ = root[name];
        }
    }

    template <typename T>
    T get(const std::string& key, T fallback) {
        seen_.insert(key);
        if (!data_.contains(key)) return fallback;
        try {
            return data_[key].get<T>();
        } catch (const json::exception&) {
            throw ConfigError("config key " + name_ + "." + key + " has the wrong type");
        }
    }

    void finish() const {
        for (const auto& [key, value] : data_.items()) {
            if (!seen_.count(key)) {
                throw ConfigError("unknown config key " + name_ + "." + key);
            }
        }
    }

private:
    std::string name_;
    json data_ = json::object();
    std::set<std::string> seen_;
};

void check_range(bool ok, const std::string& what) {
    if (!ok) throw ConfigError("config value out of range: " + what);
}

}  // namespace

Config from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    static const std::set<std::string> kSections = {"chunker", "llm",      "models", "clean",
                                                    "validate", "rav",     "paths",  "pipeline",
                                                    "companies"};
    for (const auto& [key, value] : j.items()) {
        if (!kSections.count(key)) throw ConfigError("unknown config section '" + key + "'");
    }

    Config cfg;

    Section chunker(j, "chunker");
    cfg.chunker.max_tokens = chunker.get<int>("max_tokens", cfg.chunker.max_tokens);
    cfg.chunker.overlap_tokens = chunker.get<int>("overlap", cfg.chunker.overlap_tokens);
    chunker.finish();
    check_range(cfg.chunker.max_tokens > 0, "chunker.max_tokens must be positive");
    check_range(cfg.chunker.overlap_tokens >= 0 &&
                    cfg.chunker.overlap_tokens < cfg.chunker.max_tokens,
                "chunker.overlap must be in [0, max_tokens)");

    Section llm(j, "llm");
    cfg.llm_endpoint = llm.get<std::string>("endpoint", cfg.llm_endpoint);
    cfg.gateway.max_concurrency = llm.get<int>("max_concurrency", cfg.gateway.max_concurrency);
    cfg.gateway.retries = llm.get<int>("retries", cfg.gateway.retries);
    cfg.llm_timeout_s = llm.get<double>("timeout_s", cfg.llm_timeout_s);
    cfg.gateway.fallback_embeddings =
        llm.get<bool>("fallback_embeddings", cfg.gateway.fallback_embeddings);
    cfg.llm_stub_path = llm.get<std::string>("stub_path", cfg.llm_stub_path);
    llm.finish();
    check_range(cfg.gateway.max_concurrency > 0, "llm.max_concurrency must be positive");
    check_range(cfg.gateway.retries >= 1, "llm.retries must be >= 1");
    check_range(cfg.llm_timeout_s > 0 && std::isfinite(cfg.llm_timeout_s),
                "llm.timeout_s must be positive");

    Section models(j, "models");
    cfg.model_extraction = models.get<std::string>("extraction", cfg.model_extraction);
    cfg.model_cleaning = models.get<std::string>("cleaning", cfg.model_cleaning);
    cfg.model_rav_answer = models.get<std::string>("rav_answer", cfg.model_rav_answer);
    cfg.model_rav_classifier = models.get<std::string>("rav_classifier", cfg.model_rav_classifier);
    models.finish();

    Section clean(j, "clean");
    cfg.tfidf_threshold = clean.get<double>("tfidf_threshold", cfg.tfidf_threshold);
    clean.finish();
    check_range(cfg.tfidf_threshold > 0 && cfg.tfidf_threshold <= 1,
                "clean.tfidf_threshold must be in (0,1]");

    Section validate(j, "validate");
    cfg.match_threshold = validate.get<double>("match_threshold", cfg.match_threshold);
    cfg.hits_k = validate.get<int>("hits_k", cfg.hits_k);
    cfg.status_exclusions =
        validate.get<std::vector<std::string>>("status_exclusions", cfg.status_exclusions);
    validate.finish();
    check_range(cfg.match_threshold >= 0 && cfg.match_threshold <= 1,
                "validate.match_threshold must be in [0,1]");
    check_range(cfg.hits_k >= 1, "validate.hits_k must be >= 1");

    Section rav(j, "rav");
    cfg.rav_top_n = rav.get<int>("top_n", cfg.rav_top_n);
    cfg.rav_top_k = rav.get<int>("top_k", cfg.rav_top_k);
    cfg.rav_provider = rav.get<std::string>("provider", cfg.rav_provider);
    cfg.rav_replay_path = rav.get<std::string>("replay_path", cfg.rav_replay_path);
    rav.finish();
    check_range(cfg.rav_top_n >= 1, "rav.top_n must be >= 1");
    check_range(cfg.rav_top_k >= 1, "rav.top_k must be >= 1");
    if (cfg.rav_provider != "mock" && cfg.rav_provider != "http") {
        throw ConfigError("rav.provider must be 'mock' or 'http', got '" + cfg.rav_provider + "'");
    }

    Section paths(j, "paths");
    cfg.input_dir = paths.get<std::string>("input_dir", cfg.input_dir);
    cfg.reference_csv = paths.get<std::string>("reference_csv", cfg.reference_csv);
    cfg.ground_truth = paths.get<std::string>("ground_truth", cfg.ground_truth);
    cfg.output_dir = paths.get<std::string>("output_dir", cfg.output_dir);
    cfg.data_dir = paths.get<std::string>("data_dir", cfg.data_dir);
    paths.finish();

    Section pipeline(j, "pipeline");
    cfg.workers = pipeline.get<int>("workers", cfg.workers);
    cfg.prompt = pipeline.get<std::string>("prompt", cfg.prompt);
    pipeline.finish();
    check_range(cfg.workers >= 1, "pipeline.workers must be >= 1");

    if (j.contains("companies")) {
        if (!j["companies"].is_array()) throw ConfigError("'companies' must be an array");
        for (const auto& entry : j["companies"]) {
            CompanyEntry company;
            company.ticker = entry.value("ticker", "");
            company.cik = entry.value("cik", "");
            if (company.ticker.empty()) {
                throw ConfigError("every companies[] entry needs a non-empty ticker");
            }
            if (entry.contains("filings")) {
                for (const auto& f : entry["filings"]) {
                    company.filings.push_back(f.get<std::string>());
                }
            }
            cfg.companies.push_back(std::move(company));
        }
    }
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("config " + path + " is not valid JSON: " + e.what());
    }
    try {
        return from_json(j);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

}  // namespace assetdb::config
