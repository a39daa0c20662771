// assetdb — asset-record extraction pipeline for regulatory filings.
//
// Subcommands either run the whole pipeline (`run`) or a single stage for
// one or all configured companies. `eval` scores extraction prompt
// configurations against an annotated ground-truth set.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "assetdb/config.hpp"
#include "assetdb/errors.hpp"
#include "assetdb/evalharness.hpp"
#include "assetdb/extract.hpp"
#include "assetdb/ingest.hpp"
#include "assetdb/llm.hpp"
#include "assetdb/pipeline.hpp"
#include "assetdb/store.hpp"

namespace {

using assetdb::config::Config;

std::shared_ptr<assetdb::llm::Gateway> make_gateway(const Config& cfg) {
    std::shared_ptr<assetdb::llm::Provider> provider;
    if (!cfg.llm_stub_path.empty()) {
        provider = assetdb::llm::StubProvider::from_jsonl(cfg.llm_stub_path);
    } else {
        provider = std::make_shared<assetdb::llm::HttpProvider>(cfg.llm_endpoint);
    }
    return std::make_shared<assetdb::llm::Gateway>(std::move(provider), cfg.gateway);
}

std::vector<std::string> selected_tickers(const Config& cfg, const std::string& requested) {
    if (!requested.empty()) return {requested};
    std::vector<std::string> all;
    for (const auto& company : cfg.companies) all.push_back(company.ticker);
    if (all.empty()) throw assetdb::ConfigError("no companies configured");
    return all;
}

void print_stage(const std::string& ticker, const assetdb::pipeline::StageResult& result) {
    std::cout << ticker << ": " << result.name << " " << result.status;
    if (!result.detail.empty()) std::cout << " (" << result.detail << ")";
    std::printf(" [%.2fs]\n", result.seconds);
}

// Stores explicitly named filing files, applying the metadata overrides.
void ingest_files(const Config& cfg, const std::string& ticker,
                  const std::vector<std::string>& files,
                  const assetdb::ingest::FilingOverrides& overrides) {
    std::filesystem::create_directories(std::filesystem::path(cfg.output_dir) / "db");
    assetdb::store::CompanyStore db(
        assetdb::store::company_db_path(cfg.output_dir + "/db", ticker), ticker);
    for (const auto& file : files) {
        assetdb::ingest::Filing filing = assetdb::ingest::load_filing(file, overrides);
        db.put_filing(filing);
        std::cout << ticker << ": ingested " << filing.id << " (" << filing.form_type << ")\n";
    }
}

int run_eval(const Config& cfg, const std::string& ground_truth,
             const std::vector<std::string>& prompts, const std::string& model) {
    std::string path = ground_truth.empty() ? cfg.ground_truth : ground_truth;
    if (path.empty()) {
        throw assetdb::ConfigError("no ground truth file (pass --ground-truth or set paths.ground_truth)");
    }
    std::string eval_model = model.empty() ? cfg.model_extraction : model;
    if (eval_model.empty()) {
        throw assetdb::ConfigError("no model (pass --model or set models.extraction)");
    }
    std::vector<assetdb::evalharness::GroundTruthChunk> truth =
        assetdb::evalharness::load_ground_truth(path);
    auto gateway = make_gateway(cfg);
    assetdb::extract::RequestOptions options;
    options.temperature = 0.0;
    options.seed = 0;
    options.timeout =
        std::chrono::milliseconds(static_cast<long long>(cfg.llm_timeout_s * 1000.0));

    std::vector<assetdb::evalharness::EvalReport> reports =
        assetdb::evalharness::compare_prompts(prompts, truth, *gateway, eval_model, options);

    std::printf("%-22s %8s %8s %10s %8s %8s %9s %7s %7s\n", "configuration", "cosine",
                "jaccard", "precision", "recall", "f1", "wall_ms", "chunks", "errors");
    for (const auto& r : reports) {
        std::printf("%-22s %8.4f %8.4f %10.4f %8.4f %8.4f %9lld %7d %7d\n",
                    r.configuration.c_str(), r.cosine, r.jaccard, r.precision, r.recall, r.f1,
                    static_cast<long long>(r.wall_time.count()), r.chunk_count, r.error_count);
    }
    for (const auto& r : reports) {
        for (const auto& message : r.errors) {
            std::cerr << r.configuration << ": " << message << '\n';
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"asset-record extraction pipeline for regulatory filings"};
    app.require_subcommand(1);

    std::string config_path;
    std::string company;
    std::string prompt_override;
    std::string model_override;
    std::string output_override;
    bool force = false;

    auto add_common = [&](CLI::App* cmd, bool with_company) {
        cmd->add_option("--config", config_path, "pipeline configuration JSON")->required();
        cmd->add_option("--output", output_override, "override paths.output_dir");
        if (with_company) {
            cmd->add_option("--company,--ticker", company, "restrict to one configured ticker");
        }
    };

    CLI::App* cmd_run = app.add_subcommand("run", "run every stage for every company");
    add_common(cmd_run, false);
    cmd_run->add_flag("--force", force, "rerun stages already marked complete");
    int workers_override = 0;
    cmd_run->add_option("--workers", workers_override, "parallel company workers");
    cmd_run->add_option("--prompt", prompt_override, "extraction prompt template id");

    // Single-stage subcommands. Each runs one stage against stored state.
    std::vector<std::string> ingest_paths;
    assetdb::ingest::FilingOverrides overrides;
    CLI::App* cmd_ingest = app.add_subcommand("ingest", "load filings into the company store");
    add_common(cmd_ingest, true);
    cmd_ingest->add_option("files", ingest_paths, "filing files (default: config list)");
    cmd_ingest->add_option("--cik", overrides.cik, "override CIK metadata");
    cmd_ingest->add_option("--form-type", overrides.form_type, "override form type metadata");
    cmd_ingest->add_option("--filing-date", overrides.filing_date,
                           "override filing date (yyyy-mm-dd)");

    CLI::App* cmd_chunk = app.add_subcommand("chunk", "split stored filings into chunks");
    add_common(cmd_chunk, true);
    CLI::App* cmd_extract = app.add_subcommand("extract", "run the extraction model on chunks");
    add_common(cmd_extract, true);
    cmd_extract->add_option("--prompt", prompt_override, "extraction prompt template id");
    cmd_extract->add_option("--model", model_override, "override models.extraction");
    CLI::App* cmd_store = app.add_subcommand("store", "fan extraction records out into rows");
    add_common(cmd_store, true);
    CLI::App* cmd_clean = app.add_subcommand("clean", "standardize and consolidate rows");
    add_common(cmd_clean, true);
    cmd_clean->add_option("--model", model_override, "override models.cleaning");
    CLI::App* cmd_validate = app.add_subcommand("validate", "match rows against the reference database");
    add_common(cmd_validate, true);
    CLI::App* cmd_rav = app.add_subcommand("rav", "validate rows against web search results");
    add_common(cmd_rav, true);
    CLI::App* cmd_report = app.add_subcommand("report", "write company report JSON and HTML");
    add_common(cmd_report, true);

    std::string ground_truth;
    std::vector<std::string> eval_prompts{"zero_shot"};
    CLI::App* cmd_eval = app.add_subcommand("eval", "score prompt configurations on ground truth");
    add_common(cmd_eval, false);
    cmd_eval->add_option("--ground-truth", ground_truth, "annotated chunks JSONL");
    cmd_eval->add_option("--prompt", eval_prompts, "template ids to compare");
    cmd_eval->add_option("--model", model_override, "model to run");

    CLI11_PARSE(app, argc, argv);

    try {
        Config cfg = assetdb::config::load_config(config_path);
        if (!output_override.empty()) cfg.output_dir = output_override;
        if (!prompt_override.empty()) cfg.prompt = prompt_override;
        if (workers_override > 0) cfg.workers = workers_override;

        if (cmd_run->parsed()) {
            assetdb::pipeline::RunResult result = assetdb::pipeline::run(cfg, force, &std::cout);
            return result.ok() ? 0 : 1;
        }
        if (cmd_eval->parsed()) {
            return run_eval(cfg, ground_truth, eval_prompts, model_override);
        }
        if (cmd_ingest->parsed() && !ingest_paths.empty()) {
            if (company.empty()) {
                throw assetdb::ConfigError("ingest with explicit files needs --company");
            }
            overrides.ticker = company;
            ingest_files(cfg, company, ingest_paths, overrides);
            return 0;
        }

        std::string stage;
        if (cmd_ingest->parsed()) stage = "ingest";
        else if (cmd_chunk->parsed()) stage = "chunk";
        else if (cmd_extract->parsed()) stage = "extract";
        else if (cmd_store->parsed()) stage = "store";
        else if (cmd_clean->parsed()) stage = "clean";
        else if (cmd_validate->parsed()) stage = "validate";
        else if (cmd_rav->parsed()) stage = "rav";
        else if (cmd_report->parsed()) stage = "report";

        if (cmd_extract->parsed() && !model_override.empty()) cfg.model_extraction = model_override;
        if (cmd_clean->parsed() && !model_override.empty()) cfg.model_cleaning = model_override;

        for (const auto& ticker : selected_tickers(cfg, company)) {
            assetdb::pipeline::StageResult result =
                assetdb::pipeline::run_company_stage(cfg, ticker, stage);
            print_stage(ticker, result);
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
