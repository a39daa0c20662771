#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "assetdb/rav.hpp"
#include "assetdb/validate.hpp"
#include "json.hpp"

namespace assetdb::report {

// Mean pairwise metrics over the matched rows of one company.
struct AttributeSummary {
    std::map<std::string, validate::MetricSet> mean_per_attribute;
    double hits_at_5 = 0.0;
    double overall = 0.0;
    int matched_assets = 0;
};

// Everything the per-company summary shows. Percent fields stay exact
// doubles so they can be recomputed from the embedded counts; generated_at
// is the only non-deterministic field.
struct CompanyReport {
    std::string company;
    int asset_count = 0;
    validate::CoverageReport coverage;
    std::optional<validate::ValidationCoverageReport> validation_coverage;
    AttributeSummary attributes;
    std::optional<rav::RavScore> rav;
    std::vector<std::string> warnings;
    std::string generated_at;
};

// Mean of per-asset attribute scores; empty input → zero summary.
AttributeSummary summarize_attributes(const std::vector<validate::AttributeScores>& scores);

nlohmann::json to_json(const CompanyReport& report);

void write_json(const CompanyReport& report, const std::string& path);

// Self-contained static page: overview plus metric tables, with the report
// JSON embedded for machine consumption. No external assets.
void write_html(const CompanyReport& report, const std::string& path);

// UTC "YYYY-MM-DDTHH:MM:SSZ".
std::string current_timestamp();

}  // namespace assetdb::report
