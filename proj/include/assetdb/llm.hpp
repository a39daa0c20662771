#pragma once

#include <chrono>
#include <condition_variable>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace assetdb::llm {

// A prompt template. Plain placeholders look like {name} and must be bound at
// render time. Conditional blocks look like {?flag}...{/flag} and are included
// only when the binding "flag" is a true-ish string ("true", "1", "yes");
// missing flags default to excluded.
struct PromptTemplate {
    std::string id;
    std::string body;
    std::vector<std::string> required_bindings;  // plain placeholders, sorted, unique
};

using Bindings = std::map<std::string, std::string>;

// Immutable registry of every prompt used by the pipeline: the extraction
// family (zero_shot, one_shot, few_shot, cot, generated_knowledge_seed,
// generated_knowledge1..5, prompt_chain1..5, role, role_instructional,
// irz_cot, dynamic, table_improved), the cleaning prompts (clean_cell,
// country_extract) and the web-validation pair (rav_answer, rav_classify).
class PromptRegistry {
public:
    static const PromptRegistry& instance();

    // Throws TemplateError for an unknown id.
    const PromptTemplate& get(const std::string& id) const;
    bool contains(const std::string& id) const;
    std::vector<std::string> ids() const;  // sorted

    // Substitutes placeholders verbatim (binding content is never escaped or
    // re-expanded) and resolves conditional blocks. Throws TemplateError for
    // an unknown id or a missing binding, naming the placeholder.
    std::string render(const std::string& id, const Bindings& bindings) const;

private:
    PromptRegistry();
    std::map<std::string, PromptTemplate> templates_;
};

// Convenience wrapper over PromptRegistry::instance().render.
std::string render_prompt(const std::string& template_id, const Bindings& bindings);

struct LLMRequest {
    std::string model;
    std::string prompt;
    double temperature = 0.0;
    std::optional<long long> seed;  // forwarded when set, for reproducible sampling
    int max_output_tokens = 2048;
    std::chrono::milliseconds timeout{120000};
};

struct LLMResponse {
    std::string text;
    std::string model;
    std::chrono::milliseconds latency{0};
    bool truncated = false;  // provider stopped on length
    int attempts = 1;        // total attempts including retries
};

// Completion + embedding backend. Implementations throw LlmError on failure;
// the gateway decides whether to retry.
class Provider {
public:
    virtual ~Provider() = default;
    virtual LLMResponse complete(const LLMRequest& request) = 0;
    virtual std::vector<std::vector<double>> embed(const std::string& model,
                                                   const std::vector<std::string>& texts) = 0;
};

// One scripted response: matched against the incoming prompt either exactly
// or by substring. fail_times > 0 makes the first N calls for this entry
// throw, which exercises the retry path.
struct StubEntry {
    std::string match = "exact";  // "exact" | "contains"
    std::string key;
    std::string response;
    int fail_times = 0;
    bool truncated = false;
};

// Deterministic in-process provider for tests and offline runs. Lookup order:
// exact match first, then the first "contains" entry whose key occurs in the
// prompt. Unmatched prompts throw LlmError.
class StubProvider : public Provider {
public:
    StubProvider() = default;
    explicit StubProvider(std::vector<StubEntry> entries);

    // One JSON object per line: {"match","key","response","fail_times"}.
    static std::shared_ptr<StubProvider> from_jsonl(const std::string& path);

    void add(StubEntry entry);

    LLMResponse complete(const LLMRequest& request) override;
    std::vector<std::vector<double>> embed(const std::string& model,
                                           const std::vector<std::string>& texts) override;

    int calls() const;  // total complete() invocations (diagnostics)

private:
    struct State {
        StubEntry entry;
        int remaining_failures = 0;
    };
    mutable std::mutex mu_;
    std::vector<State> entries_;
    int calls_ = 0;
};

// HTTP JSON provider compatible with a local model server: POST
// {endpoint}/api/generate with {model, prompt, options{temperature, seed,
// num_predict}, stream:false} returning {response}; embeddings via POST
// {endpoint}/api/embed with {model, input:[...]} returning {embeddings}.
class HttpProvider : public Provider {
public:
    explicit HttpProvider(std::string endpoint);

    LLMResponse complete(const LLMRequest& request) override;
    std::vector<std::vector<double>> embed(const std::string& model,
                                           const std::vector<std::string>& texts) override;

private:
    std::string endpoint_;
};

struct GatewayConfig {
    int retries = 3;  // total attempts per call
    int max_concurrency = 4;
    std::chrono::milliseconds backoff_base{200};  // doubles per failed attempt
    bool fallback_embeddings = false;  // compute embeddings locally, skip the provider
};

// Front door for all model calls: bounds in-flight requests with a semaphore,
// retries transient failures with exponential backoff, and stamps latency and
// attempt counts onto responses. Exactly one response is returned per call no
// matter how many retries ran. Safe for concurrent use.
class Gateway {
public:
    Gateway(std::shared_ptr<Provider> provider, GatewayConfig config = {});

    LLMResponse complete(const LLMRequest& request);
    std::vector<std::vector<double>> embed(const std::string& model,
                                           const std::vector<std::string>& texts);

    const GatewayConfig& config() const { return config_; }

private:
    class Slot;
    std::shared_ptr<Provider> provider_;
    GatewayConfig config_;
    std::mutex mu_;
    std::condition_variable cv_;
    int in_flight_ = 0;
};

// Deterministic local embeddings: token-frequency vectors over the sorted
// vocabulary of the whole batch, L2-normalized. All vectors share the batch
// vocabulary dimension; an empty text maps to the zero vector.
std::vector<std::vector<double>> fallback_embeddings(const std::vector<std::string>& texts);

}  // namespace assetdb::llm
