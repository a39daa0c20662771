#include "assetdb/validate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "assetdb/csv.hpp"
#include "assetdb/errors.hpp"
#include "assetdb/simmetrics.hpp"
#include "assetdb/text.hpp"

namespace assetdb::validate {

namespace {

const std::vector<std::string> kReferenceHeader = {
    "ref_id", "company_ticker", "asset_name", "owner",
    "commodity", "country", "status", "asset_type",
};

}  // namespace

std::vector<ReferenceAsset> load_reference_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read reference database " + path);
    auto rows = csv::read_all(in);
    if (rows.empty() || rows.front() != kReferenceHeader) {
        throw ConfigError("reference database " + path + " must start with header '" +
                          text::join(kReferenceHeader, ",") + "'");
    }
    std::vector<ReferenceAsset> out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != kReferenceHeader.size()) {
            throw ConfigError("reference database " + path + " row " + std::to_string(i + 1) +
                              ": expected " + std::to_string(kReferenceHeader.size()) +
                              " columns, got " + std::to_string(rows[i].size()));
        }
        ReferenceAsset ref;
        ref.ref_id = rows[i][0];
        ref.company_ticker = rows[i][1];
        ref.asset_name = rows[i][2];
        ref.owner = rows[i][3];
        ref.commodity = rows[i][4];
        ref.country = rows[i][5];
        ref.status = rows[i][6];
        ref.asset_type = rows[i][7];
        if (ref.asset_name.empty()) {
            throw ConfigError("reference database " + path + " row " + std::to_string(i + 1) +
                              ": asset_name must not be empty");
        }
        out.push_back(std::move(ref));
    }
    return out;
}

std::vector<ReferenceAsset> preprocess_reference(std::vector<ReferenceAsset> rows,
                                                 const PreprocessOptions& options) {
    for (auto& row : rows) {
        row.company_ticker = text::to_lower(row.company_ticker);
        row.asset_name = text::to_lower(row.asset_name);
        row.owner = text::to_lower(row.owner);
        row.commodity = text::to_lower(row.commodity);
        row.country = text::to_lower(row.country);
        row.status = text::to_lower(row.status);
        row.asset_type = text::to_lower(row.asset_type);
    }
    std::erase_if(rows, [&](const ReferenceAsset& row) {
        return options.status_exclusions.count(row.status) > 0;
    });
    return rows;
}

MatchResult match_asset(const store::AssetRow& asset,
                        const std::vector<ReferenceAsset>& reference, double threshold, int k) {
    if (k < 1) throw ValidationError("match candidate count must be >= 1");
    MatchResult result;
    result.asset_id = asset.id;
    const std::string name = text::to_lower(asset.physical_asset);
    std::vector<RankedCandidate> all;
    all.reserve(reference.size());
    for (const auto& ref : reference) {
        all.push_back({ref.ref_id, simmetrics::partial_ratio(name, ref.asset_name)});
    }
    std::sort(all.begin(), all.end(), [](const RankedCandidate& a, const RankedCandidate& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.ref_id < b.ref_id;
    });
    if (all.size() > static_cast<std::size_t>(k)) all.resize(static_cast<std::size_t>(k));
    result.candidates = std::move(all);
    if (!result.candidates.empty() && result.candidates.front().score >= threshold) {
        result.best = result.candidates.front().ref_id;
        result.best_score = result.candidates.front().score;
    }
    return result;
}

namespace {
MetricSet score_pair(const std::string& a, const std::string& b) {
    std::string la = text::to_lower(a);
    std::string lb = text::to_lower(b);
    MetricSet m;
    m.partial_match = simmetrics::partial_ratio(la, lb);
    m.jaccard = simmetrics::jaccard(la, lb);
    m.cosine = simmetrics::cosine_tokens(la, lb);
    m.dice = simmetrics::dice(la, lb);
    m.levenshtein = simmetrics::levenshtein_norm(la, lb);
    return m;
}
}  // namespace

AttributeScores score_match(const store::AssetRow& asset, const ReferenceAsset& ref) {
    AttributeScores scores;
    scores.per_attribute["physical_asset"] = score_pair(asset.physical_asset, ref.asset_name);
    scores.per_attribute["ownership"] = score_pair(asset.ownership, ref.owner);
    scores.per_attribute["commodity"] = score_pair(asset.commodity, ref.commodity);
    scores.per_attribute["country"] = score_pair(asset.countries, ref.country);
    double sum = 0.0;
    for (const auto& [attribute, metrics] : scores.per_attribute) sum += metrics.partial_match;
    scores.overall = sum / static_cast<double>(scores.per_attribute.size());
    return scores;
}

CoverageReport coverage(int matched, int reference_total) {
    if (matched < 0 || reference_total < 0 || matched > reference_total) {
        throw ValidationError("coverage counts out of range: matched=" + std::to_string(matched) +
                              " reference_total=" + std::to_string(reference_total));
    }
    CoverageReport report;
    report.matched_count = matched;
    report.reference_total = reference_total;
    if (reference_total == 0) {
        report.percent = 0.0;
        report.not_applicable = true;
    } else {
        report.percent = 100.0 * matched / reference_total;
    }
    return report;
}

ValidationCoverageReport total_validation_coverage(int validated, int total) {
    if (total <= 0) throw ValidationError("validation coverage needs a positive asset count");
    if (validated < 0 || validated > total) {
        throw ValidationError("validated count out of range: " + std::to_string(validated) +
                              " of " + std::to_string(total));
    }
    ValidationCoverageReport report;
    report.validated_count = validated;
    report.total_assets = total;
    report.percent = 100.0 * validated / total;
    return report;
}

}  // namespace assetdb::validate
