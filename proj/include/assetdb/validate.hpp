#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "assetdb/store.hpp"

namespace assetdb::validate {

// One row of the reference database CSV ("ref_id,company_ticker,asset_name,
// owner,commodity,country,status,asset_type").
struct ReferenceAsset {
    std::string ref_id;
    std::string company_ticker;
    std::string asset_name;
    std::string owner;
    std::string commodity;
    std::string country;
    std::string status;
    std::string asset_type;

    bool operator==(const ReferenceAsset&) const = default;
};

struct PreprocessOptions {
    std::set<std::string> status_exclusions = {"closed", "abandoned"};
};

struct RankedCandidate {
    std::string ref_id;
    double score = 0.0;
};

// Top-k reference candidates for one database row, ranked by asset-name
// similarity (score descending, ties by ref_id ascending). best is set only
// when the top score reaches the threshold.
struct MatchResult {
    long long asset_id = 0;
    std::vector<RankedCandidate> candidates;
    std::optional<std::string> best;
    double best_score = 0.0;
};

// The five pairwise metrics for one attribute pair.
struct MetricSet {
    double partial_match = 0.0;
    double jaccard = 0.0;
    double cosine = 0.0;
    double dice = 0.0;
    double levenshtein = 0.0;
};

// Pairwise scores for the four compared attributes of one matched row.
// hits_at_5 is the set-level indicator for the asset's match; overall is the
// mean of the four partial-match values.
struct AttributeScores {
    std::map<std::string, MetricSet> per_attribute;
    double hits_at_5 = 0.0;
    double overall = 0.0;
};

// Reference-database coverage: percent = 100 · matched / reference_total.
struct CoverageReport {
    int matched_count = 0;
    int reference_total = 0;
    double percent = 0.0;
    bool not_applicable = false;  // reference_total == 0
};

// Share of database rows validated by reference match or web validation.
struct ValidationCoverageReport {
    int validated_count = 0;
    int total_assets = 0;
    double percent = 0.0;
};

// Loads the reference CSV; throws ConfigError when the header does not match
// the documented columns.
std::vector<ReferenceAsset> load_reference_csv(const std::string& path);

// Lowercases all text fields and drops rows whose status is excluded.
std::vector<ReferenceAsset> preprocess_reference(std::vector<ReferenceAsset> rows,
                                                 const PreprocessOptions& options = {});

// Ranks reference rows by partial_ratio(asset.physical_asset, ref.asset_name)
// over lowercased names; keeps the top k; best is set iff top score ≥
// threshold. Deterministic, ties broken by ref_id ascending.
MatchResult match_asset(const store::AssetRow& asset,
                        const std::vector<ReferenceAsset>& reference, double threshold = 0.6,
                        int k = 5);

// All pairwise metrics for asset-name/ownership/commodity/country pairs,
// lowercased before comparison.
AttributeScores score_match(const store::AssetRow& asset, const ReferenceAsset& ref);

// Throws ValidationError when matched > reference_total or counts negative.
CoverageReport coverage(int matched, int reference_total);

// Throws ValidationError unless 0 ≤ validated ≤ total and total > 0.
ValidationCoverageReport total_validation_coverage(int validated, int total);

}  // namespace assetdb::validate
