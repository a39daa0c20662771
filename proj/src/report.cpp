#include "assetdb/report.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>

#include "assetdb/errors.hpp"

namespace assetdb::report {

namespace {

using nlohmann::json;

std::string round2(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", value);
    return buf;
}

std::string html_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

json metric_set_json(const validate::MetricSet& m) {
    return {{"partial_match", m.partial_match},
            {"jaccard", m.jaccard},
            {"cosine", m.cosine},
            {"dice", m.dice},
            {"levenshtein", m.levenshtein}};
}

}  // namespace

AttributeSummary summarize_attributes(const std::vector<validate::AttributeScores>& scores) {
    AttributeSummary summary;
    summary.matched_assets = static_cast<int>(scores.size());
    if (scores.empty()) return summary;
    for (const auto& s : scores) {
        for (const auto& [attribute, metrics] : s.per_attribute) {
            validate::MetricSet& mean = summary.mean_per_attribute[attribute];
            mean.partial_match += metrics.partial_match;
            mean.jaccard += metrics.jaccard;
            mean.cosine += metrics.cosine;
            mean.dice += metrics.dice;
            mean.levenshtein += metrics.levenshtein;
        }
        summary.hits_at_5 += s.hits_at_5;
        summary.overall += s.overall;
    }
    auto n = static_cast<double>(scores.size());
    for (auto& [attribute, mean] : summary.mean_per_attribute) {
        mean.partial_match /= n;
        mean.jaccard /= n;
        mean.cosine /= n;
        mean.dice /= n;
        mean.levenshtein /= n;
    }
    summary.hits_at_5 /= n;
    summary.overall /= n;
    return summary;
}

json to_json(const CompanyReport& report) {
    json attributes = json::object();
    for (const auto& [attribute, metrics] : report.attributes.mean_per_attribute) {
        attributes[attribute] = metric_set_json(metrics);
    }
    json j = {
        {"company", report.company},
        {"asset_count", report.asset_count},
        {"coverage",
         {{"matched_count", report.coverage.matched_count},
          {"reference_total", report.coverage.reference_total},
          {"percent", report.coverage.percent},
          {"not_applicable", report.coverage.not_applicable}}},
        {"attribute_scores",
         {{"per_attribute", attributes},
          {"hits_at_5", report.attributes.hits_at_5},
          {"overall", report.attributes.overall},
          {"matched_assets", report.attributes.matched_assets}}},
        {"warnings", report.warnings},
        {"generated_at", report.generated_at},
    };
    if (report.validation_coverage) {
        j["validation_coverage"] = {
            {"validated_count", report.validation_coverage->validated_count},
            {"total_assets", report.validation_coverage->total_assets},
            {"percent", report.validation_coverage->percent},
        };
    }
    if (report.rav) {
        json per_asset = json::array();
        for (const auto& [asset_id, value] : report.rav->per_asset) {
            per_asset.push_back({{"asset_id", asset_id}, {"score", value}});
        }
        j["rav"] = {{"company_score", report.rav->company_score}, {"per_asset", per_asset}};
    }
    return j;
}

void write_json(const CompanyReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << to_json(report).dump(2) << '\n';
}

void write_html(const CompanyReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    const std::string company = html_escape(report.company);
    out << "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n"
        << "<title>Asset database summary: " << company << "</title>\n"
        << "<style>\n"
        << "body{font-family:sans-serif;margin:2em;max-width:60em}\n"
        << "table{border-collapse:collapse;margin:1em 0}\n"
        << "td,th{border:1px solid #999;padding:0.3em 0.8em;text-align:left}\n"
        << "th{background:#eee}\n"
        << "</style>\n</head>\n<body>\n"
        << "<h1>" << company << "</h1>\n"
        << "<p>Generated at " << html_escape(report.generated_at) << "</p>\n";

    out << "<h2>Overview</h2>\n<table>\n"
        << "<tr><th>Asset rows</th><td>" << report.asset_count << "</td></tr>\n";
    if (report.coverage.not_applicable) {
        out << "<tr><th>Reference coverage</th><td>N/A (no reference entries)</td></tr>\n";
    } else {
        out << "<tr><th>Reference coverage</th><td>" << round2(report.coverage.percent) << "% ("
            << report.coverage.matched_count << " of " << report.coverage.reference_total
            << ")</td></tr>\n";
    }
    if (report.validation_coverage) {
        out << "<tr><th>Total validation coverage</th><td>"
            << round2(report.validation_coverage->percent) << "% ("
            << report.validation_coverage->validated_count << " of "
            << report.validation_coverage->total_assets << ")</td></tr>\n";
    }
    if (report.rav) {
        out << "<tr><th>Web validation score</th><td>" << round2(report.rav->company_score)
            << "</td></tr>\n";
    }
    out << "</table>\n";

    if (!report.attributes.mean_per_attribute.empty()) {
        out << "<h2>Attribute similarity (mean over " << report.attributes.matched_assets
            << " matched assets)</h2>\n<table>\n"
            << "<tr><th>Attribute</th><th>Partial match</th><th>Jaccard</th><th>Cosine</th>"
            << "<th>Dice</th><th>Levenshtein</th></tr>\n";
        for (const auto& [attribute, m] : report.attributes.mean_per_attribute) {
            out << "<tr><td>" << html_escape(attribute) << "</td><td>" << round2(m.partial_match)
                << "</td><td>" << round2(m.jaccard) << "</td><td>" << round2(m.cosine)
                << "</td><td>" << round2(m.dice) << "</td><td>" << round2(m.levenshtein)
                << "</td></tr>\n";
        }
        out << "</table>\n<p>Hits@5: " << round2(report.attributes.hits_at_5)
            << " &middot; Overall: " << round2(report.attributes.overall) << "</p>\n";
    }

    if (report.rav && !report.rav->per_asset.empty()) {
        out << "<h2>Web validation per asset</h2>\n<table>\n"
            << "<tr><th>Asset id</th><th>Score</th></tr>\n";
        for (const auto& [asset_id, value] : report.rav->per_asset) {
            out << "<tr><td>" << asset_id << "</td><td>" << round2(value) << "</td></tr>\n";
        }
        out << "</table>\n";
    }

    if (!report.warnings.empty()) {
        out << "<h2>Warnings</h2>\n<ul>\n";
        for (const auto& w : report.warnings) out << "<li>" << html_escape(w) << "</li>\n";
        out << "</ul>\n";
    }

    out << "<script type=\"application/json\" id=\"report-data\">\n"
        << to_json(report).dump(2) << "\n</script>\n</body>\n</html>\n";
}

std::string current_timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

}  // namespace assetdb::report
