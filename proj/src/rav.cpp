#include "assetdb/rav.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>

#include "assetdb/errors.hpp"
#include "assetdb/http.hpp"
#include "assetdb/simmetrics.hpp"
#include "assetdb/text.hpp"
#include "json.hpp"

namespace assetdb::rav {

namespace {

using nlohmann::json;

json snippet_to_json(const SearchSnippet& s) {
    return {{"title", s.title}, {"snippet", s.snippet}, {"url", s.url}};
}

SearchSnippet snippet_from_json(const json& j, int rank) {
    SearchSnippet s;
    s.title = j.value("title", "");
    s.snippet = j.value("snippet", "");
    s.url = j.value("url", "");
    s.rank_in_provider = rank;
    return s;
}

std::string percent_encode(const std::string& value) {
    static const char* hex = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : value) {
        bool unreserved = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                          (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.' || c == '~';
        if (unreserved) {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(hex[c >> 4]);
            out.push_back(hex[c & 0xF]);
        }
    }
    return out;
}

std::string env_or(const char* name, const std::string& fallback) {
    const char* v = std::getenv(name);
    return v ? v : fallback;
}

// Keyword tail appended to the asset name when building the web query.
const char* query_keyword(RavAttribute attribute) {
    switch (attribute) {
        case RavAttribute::country: return "location country";
        case RavAttribute::ownership: return "owner";
        case RavAttribute::commodity: return "commodity produced";
    }
    return "";
}

// Noun used inside the answering prompt ("state the <noun> of <asset>").
const char* attribute_noun(RavAttribute attribute) {
    switch (attribute) {
        case RavAttribute::country: return "country";
        case RavAttribute::ownership: return "owner";
        case RavAttribute::commodity: return "commodity";
    }
    return "";
}

std::string first_nonempty_line(const std::string& s) {
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t nl = s.find('\n', pos);
        std::string line =
            text::trim(s.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos));
        if (!line.empty()) return line;
        if (nl == std::string::npos) break;
        pos = nl + 1;
    }
    return "";
}

llm::LLMRequest make_request(const std::string& model, std::string prompt) {
    llm::LLMRequest req;
    req.model = model;
    req.prompt = std::move(prompt);
    req.temperature = 0.0;
    req.max_output_tokens = 256;
    return req;
}

}  // namespace

const char* attribute_name(RavAttribute attribute) {
    switch (attribute) {
        case RavAttribute::country: return "country";
        case RavAttribute::ownership: return "ownership";
        case RavAttribute::commodity: return "commodity";
    }
    return "";
}

MockSearchProvider MockSearchProvider::from_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read search replay file " + path);
    MockSearchProvider provider;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw SearchError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        std::vector<SearchSnippet> snippets;
        int rank = 1;
        for (const auto& item : j.value("snippets", json::array())) {
            snippets.push_back(snippet_from_json(item, rank++));
        }
        provider.add(j.value("query", ""), std::move(snippets));
    }
    return provider;
}

void MockSearchProvider::add(const std::string& query, std::vector<SearchSnippet> snippets) {
    scripted_[query] = std::move(snippets);
}

std::vector<SearchSnippet> MockSearchProvider::search(const std::string& query, int top_n) {
    auto it = scripted_.find(query);
    if (it == scripted_.end()) return {};
    std::vector<SearchSnippet> out = it->second;
    if (top_n >= 0 && out.size() > static_cast<std::size_t>(top_n)) {
        out.resize(static_cast<std::size_t>(top_n));
    }
    return out;
}

void MockSearchProvider::record(const std::string& path, const std::string& query,
                                const std::vector<SearchSnippet>& snippets) {
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw IoError("cannot append to search replay file " + path);
    json arr = json::array();
    for (const auto& s : snippets) arr.push_back(snippet_to_json(s));
    out << json{{"query", query}, {"snippets", arr}}.dump() << '\n';
}

HttpSearchProvider::HttpSearchProvider(std::string endpoint, std::string api_key,
                                       std::string engine_id)
    : endpoint_(std::move(endpoint)),
      api_key_(std::move(api_key)),
      engine_id_(std::move(engine_id)) {
    if (api_key_.empty()) api_key_ = env_or("SEARCH_API_KEY", "");
    if (engine_id_.empty()) engine_id_ = env_or("SEARCH_ENGINE_ID", "");
}

std::vector<SearchSnippet> HttpSearchProvider::search(const std::string& query, int top_n) {
    if (api_key_.empty() || engine_id_.empty()) {
        throw SearchError(
            "web search needs credentials: set SEARCH_API_KEY and SEARCH_ENGINE_ID");
    }
    std::string url = endpoint_ + "?key=" + percent_encode(api_key_) +
                      "&cx=" + percent_encode(engine_id_) + "&q=" + percent_encode(query) +
                      "&num=" + std::to_string(top_n);
    http::Response resp;
    try {
        resp = http::get(url);
    } catch (const IoError& e) {
        throw SearchError(std::string("search request failed: ") + e.what());
    }
    if (resp.status != 200) {
        throw SearchError("search provider returned HTTP " + std::to_string(resp.status));
    }
    json j;
    try {
        j = json::parse(resp.body);
    } catch (const json::exception& e) {
        throw SearchError(std::string("malformed search response: ") + e.what());
    }
    std::vector<SearchSnippet> out;
    int rank = 1;
    for (const auto& item : j.value("items", json::array())) {
        SearchSnippet s;
        s.title = item.value("title", "");
        s.snippet = item.value("snippet", "");
        s.url = item.value("link", "");
        s.rank_in_provider = rank++;
        if (!s.snippet.empty()) out.push_back(std::move(s));
        if (out.size() >= static_cast<std::size_t>(std::max(top_n, 0))) break;
    }
    return out;
}

bool is_generic_asset(const std::string& name) {
    for (const auto& token : text::split_whitespace(name)) {
        if (!token.empty() && token[0] >= 'A' && token[0] <= 'Z') return false;
    }
    return true;
}

std::optional<std::string> build_query(const store::AssetRow& asset, RavAttribute attribute) {
    std::string name = text::trim(asset.physical_asset);
    if (name.empty() || is_generic_asset(name)) return std::nullopt;
    return name + " " + query_keyword(attribute);
}

std::vector<SearchSnippet> rank_snippets(const std::string& query,
                                         std::vector<SearchSnippet> snippets, int top_k) {
    if (snippets.empty() || top_k <= 0) return {};
    std::vector<std::string> docs;
    docs.reserve(snippets.size());
    for (const auto& s : snippets) docs.push_back(s.title + " " + s.snippet);
    simmetrics::RankedList ranked = simmetrics::bm25_rank(query, docs);
    std::vector<SearchSnippet> out;
    for (const auto& item : ranked.items) {
        if (out.size() >= static_cast<std::size_t>(top_k)) break;
        out.push_back(snippets[static_cast<std::size_t>(std::stoul(item.id))]);
    }
    return out;
}

std::string generate_answer(const std::string& asset_name, RavAttribute attribute,
                            const std::vector<SearchSnippet>& snippets, llm::Gateway& gateway,
                            const std::string& model) {
    if (snippets.empty()) return "";
    std::vector<std::string> lines;
    lines.reserve(snippets.size());
    for (const auto& s : snippets) lines.push_back("- " + s.title + ": " + s.snippet);
    std::string prompt = llm::PromptRegistry::instance().render(
        "rav_answer", {{"attribute", attribute_noun(attribute)},
                       {"asset", asset_name},
                       {"snippets", text::join(lines, "\n")}});
    llm::LLMResponse resp = gateway.complete(make_request(model, std::move(prompt)));
    return first_nonempty_line(resp.text);
}

ClassifyResult classify_similarity(const std::string& db_value, const std::string& web_answer,
                                   llm::Gateway& gateway, const std::string& model) {
    std::string prompt = llm::PromptRegistry::instance().render(
        "rav_classify", {{"db", db_value}, {"web", web_answer}});
    llm::LLMResponse resp = gateway.complete(make_request(model, std::move(prompt)));
    std::vector<std::string> tokens = text::split_whitespace(resp.text);
    std::string head = tokens.empty() ? "" : text::to_lower(tokens.front());
    while (!head.empty() && (head.back() == '.' || head.back() == ',' || head.back() == '!' ||
                             head.back() == ':')) {
        head.pop_back();
    }
    if (head == "yes") return {true, false};
    if (head == "no") return {false, false};
    return {false, true};
}

std::vector<RavVerdict> run_rav(const std::vector<store::AssetRow>& rows,
                                SearchProvider& provider, llm::Gateway& gateway,
                                const RavConfig& config) {
    if (config.answer_model.empty() || config.classifier_model.empty() ||
        config.answer_model == config.classifier_model) {
        throw ConfigError("web validation needs two distinct models (answer vs classifier), got '" +
                          config.answer_model + "' and '" + config.classifier_model + "'");
    }
    const RavAttribute attributes[] = {RavAttribute::country, RavAttribute::ownership,
                                       RavAttribute::commodity};
    std::vector<RavVerdict> verdicts;
    for (const auto& row : rows) {
        for (RavAttribute attribute : attributes) {
            RavVerdict v;
            v.asset_id = row.id;
            v.asset_name = row.physical_asset;
            v.attribute = attribute_name(attribute);
            switch (attribute) {
                case RavAttribute::country: v.db_value = row.countries; break;
                case RavAttribute::ownership: v.db_value = row.ownership; break;
                case RavAttribute::commodity: v.db_value = row.commodity; break;
            }
            auto query = build_query(row, attribute);
            if (!query) {
                v.skipped = true;
                v.skip_reason = "unnamed or generic asset";
                verdicts.push_back(std::move(v));
                continue;
            }
            v.query = *query;
            if (v.db_value.empty() || v.db_value == "N/A") {
                v.skipped = true;
                v.skip_reason = "no database value to validate";
                verdicts.push_back(std::move(v));
                continue;
            }
            std::vector<SearchSnippet> snippets =
                rank_snippets(v.query, provider.search(v.query, config.top_n), config.top_k);
            for (const auto& s : snippets) v.snippet_urls.push_back(s.url);
            if (snippets.empty()) {
                v.skipped = true;
                v.skip_reason = "no web results";
                verdicts.push_back(std::move(v));
                continue;
            }
            v.web_answer = generate_answer(row.physical_asset, attribute, snippets, gateway,
                                           config.answer_model);
            if (v.web_answer.empty()) {
                v.skipped = true;
                v.skip_reason = "no answer generated";
                verdicts.push_back(std::move(v));
                continue;
            }
            ClassifyResult cls =
                classify_similarity(v.db_value, v.web_answer, gateway, config.classifier_model);
            v.verdict = cls.verdict;
            v.parse_warning = cls.parse_warning;
            verdicts.push_back(std::move(v));
        }
    }
    return verdicts;
}

RavScore rav_score(const std::vector<RavVerdict>& verdicts, const std::string& company) {
    if (verdicts.empty()) throw ValidationError("cannot score an empty verdict list");
    // asset id → (yes count, scored count), in first-seen order
    std::vector<long long> order;
    std::map<long long, std::pair<int, int>> counts;
    for (const auto& v : verdicts) {
        if (v.skipped) continue;
        auto [it, fresh] = counts.try_emplace(v.asset_id, std::pair<int, int>{0, 0});
        if (fresh) order.push_back(v.asset_id);
        it->second.first += v.verdict ? 1 : 0;
        it->second.second += 1;
    }
    RavScore score;
    score.company = company;
    double sum = 0.0;
    for (long long id : order) {
        auto [yes, total] = counts[id];
        double value = static_cast<double>(yes) / static_cast<double>(total);
        score.per_asset.emplace_back(id, value);
        sum += value;
    }
    score.company_score = order.empty() ? 0.0 : sum / static_cast<double>(order.size());
    return score;
}

}  // namespace assetdb::rav
