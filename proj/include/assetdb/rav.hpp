#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "assetdb/llm.hpp"
#include "assetdb/store.hpp"

namespace assetdb::rav {

struct SearchSnippet {
    std::string title;
    std::string snippet;
    std::string url;
    int rank_in_provider = 0;

    bool operator==(const SearchSnippet&) const = default;
};

// Web search backend. Implementations throw SearchError on provider or
// configuration failures; an empty result list is a valid outcome.
class SearchProvider {
public:
    virtual ~SearchProvider() = default;
    virtual std::vector<SearchSnippet> search(const std::string& query, int top_n) = 0;
};

// Replays scripted results from a JSONL file of
// {"query": ..., "snippets": [{"title","snippet","url"}]}; unscripted
// queries return []. record() appends an entry to such a file so live
// results can be captured and replayed later.
class MockSearchProvider : public SearchProvider {
public:
    static MockSearchProvider from_jsonl(const std::string& path);
    MockSearchProvider() = default;

    std::vector<SearchSnippet> search(const std::string& query, int top_n) override;
    void add(const std::string& query, std::vector<SearchSnippet> snippets);

    static void record(const std::string& path, const std::string& query,
                       const std::vector<SearchSnippet>& snippets);

private:
    std::map<std::string, std::vector<SearchSnippet>> scripted_;
};

// Google-Custom-Search-shaped JSON API: GET {endpoint}?key=...&cx=...&q=...
// &num=N, results under items[].title/.snippet/.link. Credentials fall back
// to the SEARCH_API_KEY / SEARCH_ENGINE_ID environment variables; missing
// credentials are a SearchError at search time.
class HttpSearchProvider : public SearchProvider {
public:
    explicit HttpSearchProvider(std::string endpoint = "https://www.googleapis.com/customsearch/v1",
                                std::string api_key = "", std::string engine_id = "");

    std::vector<SearchSnippet> search(const std::string& query, int top_n) override;

private:
    std::string endpoint_;
    std::string api_key_;
    std::string engine_id_;
};

enum class RavAttribute { country, ownership, commodity };

const char* attribute_name(RavAttribute attribute);  // "country" | "ownership" | "commodity"

// True when the asset name looks like prose rather than a proper name (no
// capitalized word), e.g. "natural gas fields" — such rows are skipped.
bool is_generic_asset(const std::string& name);

// "<asset name> <keyword>" with keyword owner / location country /
// commodity produced; nullopt signals a skip (empty or generic asset name).
std::optional<std::string> build_query(const store::AssetRow& asset, RavAttribute attribute);

// BM25 over "title snippet" text; keeps the top_k snippets in score order.
std::vector<SearchSnippet> rank_snippets(const std::string& query,
                                         std::vector<SearchSnippet> snippets, int top_k = 3);

// Concise answer from the answering model, grounded in the snippets. Empty
// snippet list → empty answer (caller records a skip).
std::string generate_answer(const std::string& asset_name, RavAttribute attribute,
                            const std::vector<SearchSnippet>& snippets, llm::Gateway& gateway,
                            const std::string& model);

struct ClassifyResult {
    bool verdict = false;
    bool parse_warning = false;  // classifier answered neither yes nor no
};

// Yes/no agreement between the database value and the web answer, decided by
// the classifier model's leading token.
ClassifyResult classify_similarity(const std::string& db_value, const std::string& web_answer,
                                   llm::Gateway& gateway, const std::string& model);

struct RavVerdict {
    long long asset_id = 0;
    std::string asset_name;
    std::string attribute;
    std::string query;
    std::string db_value;
    std::string web_answer;
    bool verdict = false;
    bool parse_warning = false;
    bool skipped = false;       // no query, no snippets, empty db value, or no answer
    std::string skip_reason;
    std::vector<std::string> snippet_urls;
};

struct RavScore {
    std::string company;
    std::vector<std::pair<long long, double>> per_asset;  // asset id → mean verdict
    double company_score = 0.0;                           // mean of per-asset scores
};

struct RavConfig {
    int top_n = 10;  // provider results requested
    int top_k = 3;   // snippets kept after BM25
    std::string answer_model;
    std::string classifier_model;  // must differ from answer_model
};

// Runs the country/ownership/commodity checks for every row, in row order.
// Skips are recorded as verdicts with skipped=true. Throws ConfigError when
// the two models are not distinct.
std::vector<RavVerdict> run_rav(const std::vector<store::AssetRow>& rows,
                                SearchProvider& provider, llm::Gateway& gateway,
                                const RavConfig& config);

// Mean of binary verdicts per asset, mean of those across assets. Skipped
// verdicts are excluded from every denominator. Throws ValidationError on an
// empty verdict list.
RavScore rav_score(const std::vector<RavVerdict>& verdicts, const std::string& company = "");

}  // namespace assetdb::rav
