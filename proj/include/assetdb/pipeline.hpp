#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "assetdb/config.hpp"

namespace assetdb::pipeline {

// Stage names in execution order: ingest, chunk, extract, store, clean,
// validate, rav, report.
const std::vector<std::string>& stage_names();

struct StageResult {
    std::string name;
    std::string status;  // "done" | "skipped" | "error"
    std::string detail;  // skip reason or error message
    double seconds = 0.0;
};

struct CompanyRun {
    std::string ticker;
    std::vector<StageResult> stages;
    std::vector<std::string> warnings;
    bool failed = false;
};

struct RunResult {
    std::vector<CompanyRun> companies;
    bool ok() const;
};

// Runs every configured company through all stages. Completed stages are
// skipped on rerun (tracked in <output_dir>/manifest.json) unless force is
// set. A stage error aborts that company's remaining stages; other companies
// still run. Companies execute in parallel up to cfg.workers.
RunResult run(const config::Config& cfg, bool force = false, std::ostream* log = nullptr);

// Runs one stage for one company (the CLI subcommand path). The manifest is
// updated the same way as in a full run. Throws on unknown ticker or stage.
StageResult run_company_stage(const config::Config& cfg, const std::string& ticker,
                              const std::string& stage, bool force = true);

}  // namespace assetdb::pipeline
