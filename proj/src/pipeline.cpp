#include "assetdb/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "assetdb/chunker.hpp"
#include "assetdb/clean.hpp"
#include "assetdb/errors.hpp"
#include "assetdb/extract.hpp"
#include "assetdb/ingest.hpp"
#include "assetdb/rav.hpp"
#include "assetdb/report.hpp"
#include "assetdb/simmetrics.hpp"
#include "assetdb/store.hpp"
#include "assetdb/text.hpp"
#include "assetdb/validate.hpp"
#include "json.hpp"

namespace assetdb::pipeline {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// ------------------------------------------------------------------ manifest

// Stage bookkeeping persisted at <output_dir>/manifest.json so reruns can
// skip completed work. Writes go through a temp file + rename.
class Manifest {
public:
    explicit Manifest(std::string path) : path_(std::move(path)) {
        std::ifstream in(path_, std::ios::binary);
        if (in) {
            try {
                data_ = json::parse(in);
            } catch (const json::exception&) {
                data_ = json::object();
            }
        }
        if (!data_.is_object()) data_ = json::object();
        if (!data_.contains("companies") || !data_["companies"].is_object()) {
            data_["companies"] = json::object();
        }
    }

    bool stage_done(const std::string& ticker, const std::string& stage) {
        std::lock_guard lock(mu_);
        const json& companies = data_["companies"];
        if (!companies.contains(ticker)) return false;
        const json& stages = companies[ticker].value("stages", json::object());
        return stages.contains(stage) && stages[stage].value("status", "") == "done";
    }

    void set_stage(const std::string& ticker, const StageResult& result) {
        std::lock_guard lock(mu_);
        json& company = data_["companies"][ticker];
        if (!company.is_object()) company = json::object();
        company["stages"][result.name] = {{"status", result.status},
                                          {"detail", result.detail},
                                          {"seconds", result.seconds}};
        save_locked();
    }

    void add_warning(const std::string& ticker, const std::string& message) {
        std::lock_guard lock(mu_);
        json& warnings = data_["companies"][ticker]["warnings"];
        if (!warnings.is_array()) warnings = json::array();
        for (const auto& w : warnings) {
            if (w == message) return;
        }
        warnings.push_back(message);
        save_locked();
    }

    void clear_company(const std::string& ticker) {
        std::lock_guard lock(mu_);
        data_["companies"][ticker] = json::object();
        save_locked();
    }

    std::vector<std::string> warnings(const std::string& ticker) {
        std::lock_guard lock(mu_);
        std::vector<std::string> out;
        const json& companies = data_["companies"];
        if (companies.contains(ticker)) {
            for (const auto& w : companies[ticker].value("warnings", json::array())) {
                if (w.is_string()) out.push_back(w.get<std::string>());
            }
        }
        return out;
    }

private:
    void save_locked() {
        std::string tmp = path_ + ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary);
            if (!out) throw IoError("cannot write " + tmp);
            out << data_.dump(2) << '\n';
        }
        fs::rename(tmp, path_);
    }

    std::string path_;
    json data_;
    std::mutex mu_;
};

// ------------------------------------------------------------- stage context

struct Context {
    const config::Config& cfg;
    const config::CompanyEntry& company;
    Manifest& manifest;
    std::unique_ptr<store::CompanyStore> db;
    std::shared_ptr<llm::Gateway> gateway;
    std::string company_dir;  // <output_dir>/<ticker>

    store::CompanyStore& open_db() {
        if (!db) {
            db = std::make_unique<store::CompanyStore>(
                store::company_db_path(cfg.output_dir + "/db", company.ticker), company.ticker);
        }
        return *db;
    }

    llm::Gateway& open_gateway() {
        if (!gateway) {
            std::shared_ptr<llm::Provider> provider;
            if (!cfg.llm_stub_path.empty()) {
                provider = llm::StubProvider::from_jsonl(cfg.llm_stub_path);
            } else {
                provider = std::make_shared<llm::HttpProvider>(cfg.llm_endpoint);
            }
            gateway = std::make_shared<llm::Gateway>(std::move(provider), cfg.gateway);
        }
        return *gateway;
    }

    void warn(const std::string& message) { manifest.add_warning(company.ticker, message); }
};

extract::RequestOptions request_options(const config::Config& cfg) {
    extract::RequestOptions options;
    options.temperature = 0.0;
    options.seed = 0;  // reproducible sampling on providers that honor it
    options.timeout = std::chrono::milliseconds(
        static_cast<long long>(cfg.llm_timeout_s * 1000.0));
    return options;
}

std::string validation_json_path(const Context& ctx) {
    return ctx.company_dir + "/validation.json";
}
std::string verdicts_json_path(const Context& ctx) {
    return ctx.company_dir + "/verdicts.json";
}

void write_json_file(const std::string& path, const json& j) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw IoError("cannot write " + tmp);
        out << j.dump(2) << '\n';
    }
    fs::rename(tmp, path);
}

std::optional<json> read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw IoError("corrupt artifact " + path + ": " + e.what());
    }
}

// ------------------------------------------------------------------- stages
// Each returns nullopt when it completed, or a human-readable skip reason.

using StageOutcome = std::optional<std::string>;

StageOutcome stage_ingest(Context& ctx) {
    auto& db = ctx.open_db();
    if (ctx.company.filings.empty()) {
        return "no filings configured for " + ctx.company.ticker;
    }
    for (const auto& rel : ctx.company.filings) {
        fs::path path = ctx.cfg.input_dir.empty() ? fs::path(rel)
                                                  : fs::path(ctx.cfg.input_dir) / rel;
        ingest::FilingOverrides overrides;
        overrides.ticker = ctx.company.ticker;
        overrides.cik = ctx.company.cik;
        db.put_filing(ingest::load_filing(path.string(), overrides));
    }
    return std::nullopt;
}

StageOutcome stage_chunk(Context& ctx) {
    auto& db = ctx.open_db();
    std::vector<std::string> ids = db.filing_ids();
    if (ids.empty()) {
        throw StoreError("no filings stored for " + ctx.company.ticker + "; run ingest first");
    }
    for (const auto& id : ids) {
        ingest::Filing filing = *db.get_filing(id);
        db.put_chunks(chunker::chunk(filing.body, ctx.cfg.chunker, filing.id));
    }
    return std::nullopt;
}

StageOutcome stage_extract(Context& ctx) {
    if (ctx.cfg.model_extraction.empty()) {
        throw ConfigError("models.extraction is not configured");
    }
    auto& db = ctx.open_db();
    std::vector<std::string> ids = db.filing_ids();
    if (ids.empty()) {
        throw StoreError("no filings stored for " + ctx.company.ticker + "; run ingest first");
    }
    llm::Gateway& gateway = ctx.open_gateway();
    extract::RequestOptions options = request_options(ctx.cfg);
    const std::string& model = ctx.cfg.model_extraction;
    const std::string& prompt = ctx.cfg.prompt;

    bool saw_chunks = false;
    for (const auto& id : ids) {
        for (const auto& chunk : db.get_chunks(id)) {
            saw_chunks = true;
            extract::ExtractionRecord record;
            if (prompt == "prompt_chain") {
                record = extract::run_prompt_chain(chunk, gateway, model, options);
            } else if (prompt == "generated_knowledge") {
                record = extract::run_generated_knowledge(chunk, gateway, model, options);
            } else {
                record = extract::extract_chunk(chunk, gateway, model, prompt, options);
            }
            db.put_extraction(record);
        }
        // Tables bypass chunking: each one runs through the table prompt.
        ingest::Filing filing = *db.get_filing(id);
        for (const auto& table : filing.tables) {
            if (table.linearized.empty()) continue;
            llm::LLMRequest request;
            request.model = model;
            request.prompt = llm::PromptRegistry::instance().render(
                "table_improved", {{"text", text::join(table.linearized, "\n")}});
            request.temperature = options.temperature;
            request.seed = options.seed;
            request.max_output_tokens = options.max_output_tokens;
            request.timeout = options.timeout;
            llm::LLMResponse resp = gateway.complete(request);
            extract::ExtractionRecord record = extract::parse_extraction(resp.text);
            record.chunk_id = filing.id + ":table" + std::to_string(table.table_index);
            record.model = model;
            record.template_id = "table_improved";
            db.put_extraction(record);
        }
    }
    if (!saw_chunks) {
        throw StoreError("no chunks stored for " + ctx.company.ticker + "; run chunk first");
    }
    return std::nullopt;
}

StageOutcome stage_store(Context& ctx) {
    auto& db = ctx.open_db();
    std::vector<extract::ExtractionRecord> records = db.get_extractions();
    if (records.empty()) {
        throw StoreError("no extraction records for " + ctx.company.ticker +
                         "; run extract first");
    }
    db.upsert_assets(records);
    return std::nullopt;
}

StageOutcome stage_clean(Context& ctx) {
    auto& db = ctx.open_db();
    std::vector<store::AssetRow> rows = db.query_assets();
    if (rows.empty()) return "no asset rows to clean";
    clean::StandardizationRules rules = ctx.cfg.data_dir.empty()
                                            ? clean::default_rules()
                                            : clean::load_rules(ctx.cfg.data_dir);
    llm::Gateway* gateway = nullptr;
    if (!ctx.cfg.model_cleaning.empty()) gateway = &ctx.open_gateway();

    rows = clean::phase1(std::move(rows), rules, gateway, ctx.cfg.model_cleaning);
    if (!rows.empty()) {
        rows = clean::phase2(std::move(rows), {.threshold = ctx.cfg.tfidf_threshold});
    }
    if (gateway != nullptr && !rows.empty()) {
        rows = clean::phase3(std::move(rows), *gateway, ctx.cfg.model_cleaning);
        rows = clean::drop_empty_assets(std::move(rows));
    }
    db.replace_assets(rows);
    return std::nullopt;
}

json metric_set_json(const validate::MetricSet& m) {
    return {{"partial_match", m.partial_match},
            {"jaccard", m.jaccard},
            {"cosine", m.cosine},
            {"dice", m.dice},
            {"levenshtein", m.levenshtein}};
}

StageOutcome stage_validate(Context& ctx) {
    if (ctx.cfg.reference_csv.empty() || !fs::exists(ctx.cfg.reference_csv)) {
        ctx.warn("reference database not found; validation skipped");
        return "reference database not found";
    }
    auto& db = ctx.open_db();

    validate::PreprocessOptions preprocess;
    preprocess.status_exclusions.clear();
    for (const auto& s : ctx.cfg.status_exclusions) preprocess.status_exclusions.insert(s);
    std::vector<validate::ReferenceAsset> reference = validate::preprocess_reference(
        validate::load_reference_csv(ctx.cfg.reference_csv), preprocess);
    // Entries with a ticker belong to that company; blank tickers apply to all.
    std::erase_if(reference, [&](const validate::ReferenceAsset& ref) {
        return !ref.company_ticker.empty() &&
               !text::iequals(ref.company_ticker, ctx.company.ticker);
    });
    std::map<std::string, const validate::ReferenceAsset*> by_id;
    for (const auto& ref : reference) by_id[ref.ref_id] = &ref;

    store::AssetFilter named_only;
    named_only.require_asset = true;
    std::vector<store::AssetRow> rows = db.query_assets(named_only);
    std::set<std::string> matched_refs;
    std::vector<long long> matched_assets;
    json per_asset = json::array();
    for (const auto& row : rows) {
        validate::MatchResult match =
            validate::match_asset(row, reference, ctx.cfg.match_threshold, ctx.cfg.hits_k);
        json candidates = json::array();
        for (const auto& c : match.candidates) {
            candidates.push_back({{"ref_id", c.ref_id}, {"score", c.score}});
        }
        json entry = {{"asset_id", row.id},
                      {"asset_name", row.physical_asset},
                      {"candidates", candidates},
                      {"best_score", match.best_score}};
        if (match.best) {
            entry["best"] = *match.best;
            matched_refs.insert(*match.best);
            matched_assets.push_back(row.id);
            validate::AttributeScores scores = validate::score_match(row, *by_id.at(*match.best));
            simmetrics::RankedList ranking;
            for (const auto& c : match.candidates) ranking.items.push_back({c.ref_id, c.score});
            scores.hits_at_5 = simmetrics::hits_at_k({ranking}, {*match.best}, ctx.cfg.hits_k);
            json score_json = json::object();
            for (const auto& [attribute, metrics] : scores.per_attribute) {
                score_json[attribute] = metric_set_json(metrics);
            }
            entry["scores"] = {{"per_attribute", score_json},
                               {"hits_at_5", scores.hits_at_5},
                               {"overall", scores.overall}};
        }
        db.save_match_payload(row.id, entry.dump());
        per_asset.push_back(std::move(entry));
    }

    validate::CoverageReport cov =
        validate::coverage(static_cast<int>(matched_refs.size()),
                           static_cast<int>(reference.size()));
    json summary = {
        {"company", ctx.company.ticker},
        {"coverage",
         {{"matched_count", cov.matched_count},
          {"reference_total", cov.reference_total},
          {"percent", cov.percent},
          {"not_applicable", cov.not_applicable}}},
        {"matched_ref_ids", std::vector<std::string>(matched_refs.begin(), matched_refs.end())},
        {"matched_asset_ids", matched_assets},
        {"per_asset", per_asset},
    };
    write_json_file(validation_json_path(ctx), summary);
    if (cov.not_applicable) {
        ctx.warn("no reference entries for " + ctx.company.ticker + "; coverage not applicable");
    }
    return std::nullopt;
}

json verdict_to_json(const rav::RavVerdict& v) {
    return {{"asset_id", v.asset_id},
            {"asset_name", v.asset_name},
            {"attribute", v.attribute},
            {"query", v.query},
            {"db_value", v.db_value},
            {"web_answer", v.web_answer},
            {"verdict", v.verdict},
            {"parse_warning", v.parse_warning},
            {"skipped", v.skipped},
            {"skip_reason", v.skip_reason},
            {"snippet_urls", v.snippet_urls}};
}

StageOutcome stage_rav(Context& ctx) {
    if (ctx.cfg.model_rav_answer.empty() || ctx.cfg.model_rav_classifier.empty()) {
        ctx.warn("web validation models not configured; stage skipped");
        return "web validation models not configured";
    }
    std::unique_ptr<rav::SearchProvider> provider;
    if (ctx.cfg.rav_provider == "mock") {
        if (ctx.cfg.rav_replay_path.empty()) {
            ctx.warn("rav.replay_path not set for the mock search provider; stage skipped");
            return "no search replay fixtures configured";
        }
        provider = std::make_unique<rav::MockSearchProvider>(
            rav::MockSearchProvider::from_jsonl(ctx.cfg.rav_replay_path));
    } else {
        provider = std::make_unique<rav::HttpSearchProvider>();
    }
    auto& db = ctx.open_db();
    store::AssetFilter named_only;
    named_only.require_asset = true;
    std::vector<store::AssetRow> rows = db.query_assets(named_only);

    rav::RavConfig rav_config;
    rav_config.top_n = ctx.cfg.rav_top_n;
    rav_config.top_k = ctx.cfg.rav_top_k;
    rav_config.answer_model = ctx.cfg.model_rav_answer;
    rav_config.classifier_model = ctx.cfg.model_rav_classifier;
    std::vector<rav::RavVerdict> verdicts =
        rav::run_rav(rows, *provider, ctx.open_gateway(), rav_config);

    json verdict_array = json::array();
    std::map<long long, json> per_asset_payload;
    for (const auto& v : verdicts) {
        json vj = verdict_to_json(v);
        verdict_array.push_back(vj);
        json& bucket = per_asset_payload[v.asset_id];
        if (!bucket.is_array()) bucket = json::array();
        bucket.push_back(std::move(vj));
    }
    for (const auto& [asset_id, payload] : per_asset_payload) {
        db.save_rav_payload(asset_id, payload.dump());
    }
    json out = {{"company", ctx.company.ticker}, {"verdicts", verdict_array}};
    if (!verdicts.empty()) {
        rav::RavScore score = rav::rav_score(verdicts, ctx.company.ticker);
        json per_asset = json::array();
        for (const auto& [asset_id, value] : score.per_asset) {
            per_asset.push_back({{"asset_id", asset_id}, {"score", value}});
        }
        out["score"] = {{"company_score", score.company_score}, {"per_asset", per_asset}};
    }
    write_json_file(verdicts_json_path(ctx), out);
    return std::nullopt;
}

StageOutcome stage_report(Context& ctx) {
    auto& db = ctx.open_db();
    std::vector<store::AssetRow> rows = db.query_assets();

    report::CompanyReport rep;
    rep.company = ctx.company.ticker;
    rep.asset_count = static_cast<int>(rows.size());
    rep.coverage.not_applicable = true;  // until validation data says otherwise

    std::set<long long> validated;
    if (auto validation = read_json_file(validation_json_path(ctx))) {
        const json& cov = (*validation)["coverage"];
        rep.coverage.matched_count = cov.value("matched_count", 0);
        rep.coverage.reference_total = cov.value("reference_total", 0);
        rep.coverage.percent = cov.value("percent", 0.0);
        rep.coverage.not_applicable = cov.value("not_applicable", false);
        std::vector<validate::AttributeScores> all_scores;
        for (const auto& entry : validation->value("per_asset", json::array())) {
            if (!entry.contains("scores")) continue;
            validate::AttributeScores scores;
            for (const auto& [attribute, m] : entry["scores"]["per_attribute"].items()) {
                validate::MetricSet set;
                set.partial_match = m.value("partial_match", 0.0);
                set.jaccard = m.value("jaccard", 0.0);
                set.cosine = m.value("cosine", 0.0);
                set.dice = m.value("dice", 0.0);
                set.levenshtein = m.value("levenshtein", 0.0);
                scores.per_attribute[attribute] = set;
            }
            scores.hits_at_5 = entry["scores"].value("hits_at_5", 0.0);
            scores.overall = entry["scores"].value("overall", 0.0);
            all_scores.push_back(std::move(scores));
        }
        rep.attributes = report::summarize_attributes(all_scores);
        for (const auto& id : validation->value("matched_asset_ids", json::array())) {
            validated.insert(id.get<long long>());
        }
    }
    if (auto verdicts = read_json_file(verdicts_json_path(ctx))) {
        if (verdicts->contains("score")) {
            rav::RavScore score;
            score.company = ctx.company.ticker;
            score.company_score = (*verdicts)["score"].value("company_score", 0.0);
            for (const auto& entry : (*verdicts)["score"].value("per_asset", json::array())) {
                long long asset_id = entry.value("asset_id", 0LL);
                double value = entry.value("score", 0.0);
                score.per_asset.emplace_back(asset_id, value);
                // An asset counts as web-validated when at least half of its
                // checked attributes came back "yes".
                if (value >= 0.5) validated.insert(asset_id);
            }
            rep.rav = std::move(score);
        }
    }
    if (rep.asset_count > 0) {
        rep.validation_coverage = validate::total_validation_coverage(
            static_cast<int>(validated.size()), rep.asset_count);
    }
    rep.warnings = ctx.manifest.warnings(ctx.company.ticker);
    rep.generated_at = report::current_timestamp();

    db.export_csv(ctx.company_dir + "/assets.csv");
    db.export_jsonl(ctx.company_dir + "/assets.jsonl");
    report::write_json(rep, ctx.company_dir + "/report.json");
    report::write_html(rep, ctx.company_dir + "/report.html");
    return std::nullopt;
}

using StageFn = StageOutcome (*)(Context&);

const std::vector<std::pair<std::string, StageFn>>& stage_table() {
    static const std::vector<std::pair<std::string, StageFn>> kStages = {
        {"ingest", stage_ingest},     {"chunk", stage_chunk}, {"extract", stage_extract},
        {"store", stage_store},       {"clean", stage_clean}, {"validate", stage_validate},
        {"rav", stage_rav},           {"report", stage_report},
    };
    return kStages;
}

StageResult execute_stage(Context& ctx, const std::string& name, StageFn fn) {
    StageResult result;
    result.name = name;
    auto started = std::chrono::steady_clock::now();
    try {
        StageOutcome skip = fn(ctx);
        result.status = skip ? "skipped" : "done";
        result.detail = skip.value_or("");
    } catch (const std::exception& e) {
        result.status = "error";
        result.detail = e.what();
    }
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
                         .count();
    ctx.manifest.set_stage(ctx.company.ticker, result);
    return result;
}

CompanyRun run_company(const config::Config& cfg, const config::CompanyEntry& company,
                       Manifest& manifest, bool force, std::ostream* log, std::mutex& log_mu) {
    CompanyRun run;
    run.ticker = company.ticker;
    Context ctx{cfg, company, manifest, nullptr, nullptr,
                (fs::path(cfg.output_dir) / company.ticker).string()};
    fs::create_directories(ctx.company_dir);

    for (const auto& [name, fn] : stage_table()) {
        StageResult result;
        if (run.failed) {
            result = {name, "skipped", "prior stage failed", 0.0};
            manifest.set_stage(company.ticker, result);
        } else if (!force && manifest.stage_done(company.ticker, name)) {
            result = {name, "skipped", "already complete", 0.0};
        } else {
            result = execute_stage(ctx, name, fn);
        }
        if (result.status == "error") run.failed = true;
        if (log != nullptr) {
            std::lock_guard lock(log_mu);
            *log << company.ticker << ": " << name << " " << result.status;
            if (!result.detail.empty()) *log << " (" << result.detail << ")";
            *log << '\n';
        }
        run.stages.push_back(std::move(result));
    }
    run.warnings = manifest.warnings(company.ticker);
    return run;
}

}  // namespace

const std::vector<std::string>& stage_names() {
    static const std::vector<std::string> kNames = [] {
        std::vector<std::string> names;
        for (const auto& [name, fn] : stage_table()) names.push_back(name);
        return names;
    }();
    return kNames;
}

bool RunResult::ok() const {
    return std::all_of(companies.begin(), companies.end(),
                       [](const CompanyRun& run) { return !run.failed; });
}

RunResult run(const config::Config& cfg, bool force, std::ostream* log) {
    if (cfg.companies.empty()) throw ConfigError("no companies configured");
    fs::create_directories(fs::path(cfg.output_dir) / "db");
    Manifest manifest((fs::path(cfg.output_dir) / "manifest.json").string());
    if (force) {
        for (const auto& company : cfg.companies) manifest.clear_company(company.ticker);
    }

    RunResult result;
    result.companies.resize(cfg.companies.size());
    std::mutex log_mu;
    std::size_t next = 0;
    std::mutex next_mu;
    auto worker = [&] {
        while (true) {
            std::size_t i;
            {
                std::lock_guard lock(next_mu);
                if (next >= cfg.companies.size()) return;
                i = next++;
            }
            result.companies[i] =
                run_company(cfg, cfg.companies[i], manifest, force, log, log_mu);
        }
    };
    int n_workers = std::max(1, std::min<int>(cfg.workers,
                                              static_cast<int>(cfg.companies.size())));
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(n_workers));
        for (int i = 0; i < n_workers; ++i) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    return result;
}

StageResult run_company_stage(const config::Config& cfg, const std::string& ticker,
                              const std::string& stage, bool force) {
    auto company_it =
        std::find_if(cfg.companies.begin(), cfg.companies.end(),
                     [&](const config::CompanyEntry& c) { return c.ticker == ticker; });
    if (company_it == cfg.companies.end()) {
        throw ConfigError("unknown company '" + ticker + "' (not in the config)");
    }
    auto stage_it = std::find_if(stage_table().begin(), stage_table().end(),
                                 [&](const auto& entry) { return entry.first == stage; });
    if (stage_it == stage_table().end()) {
        throw ConfigError("unknown stage '" + stage + "'");
    }
    fs::create_directories(fs::path(cfg.output_dir) / "db");
    Manifest manifest((fs::path(cfg.output_dir) / "manifest.json").string());
    Context ctx{cfg, *company_it, manifest, nullptr, nullptr,
                (fs::path(cfg.output_dir) / ticker).string()};
    fs::create_directories(ctx.company_dir);
    if (!force && manifest.stage_done(ticker, stage)) {
        return {stage, "skipped", "already complete", 0.0};
    }
    StageResult result = execute_stage(ctx, stage, stage_it->second);
    if (result.status == "error") throw Error(stage + " failed: " + result.detail);
    return result;
}

}  // namespace assetdb::pipeline
