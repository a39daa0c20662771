#include "assetdb/llm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <thread>

#include "json.hpp"

#include "assetdb/errors.hpp"
#include "assetdb/http.hpp"
#include "assetdb/text.hpp"

namespace assetdb::llm {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Template bodies. Newlines and spacing are deliberate — extraction prompts
// double as parser fixtures, so exact bytes matter.
// ---------------------------------------------------------------------------

const char* kZeroShot =
    R"__(Text: {chunk}
Query: Does this text mention any physical assets, locations, ownerships, and commodities? If yes, please specify them in the following format:
physical assets: [ ]
locations: [ ]
ownerships: [ ]
commodities: []
Additionally, identify the relationships between them, specifying the location of each physical asset, their ownership details, and commodities. Format the relationships as follows:
relationships: [asset: '', location: '', ownership: '', commodities: ''])__";

const char* kOneShotExample =
    R"__(Example:
Text: [...] Our principal asset is the Grasberg mine, which we discovered in 1988. Grasberg contains the largest single gold reserve and one of the largest copper reserves of any mine in the world. Our principal operating subsidiary is PT Freeport Indonesia, a limited liability company organized under the laws of the Republic of Indonesia and incorporated in Delaware. [...]Query: Does this text mention any physical assets, locations, and ownerships?
physical assets: [Grasberg mine]
locations: [Sudirman Mountain Range, Papua, Indonesia]
ownerships: [Republic of Indonesia, Delaware]
[commodities: copper, gold]
relationships: [asset: 'Grasberg mine', location: 'Indonesia', ownership: 'PT Freeport Indonesia', commodities: 'copper', 'gold']

)__";

const char* kFewShotExtra =
    R"__(Example 2:
Text: [...] PT Freeport Indonesia mines, processes and explores for ore containing copper, gold and silver. It operates in the remote highlands of the Sudirman Mountain Range in the province of Papua (formerly Irian Jaya), Indonesia, which is on the western half of the island of New Guinea. [...]Query: Does this text mention any physical assets, locations, and ownerships?
physical assets: [PT Freeport Indonesia Mines]
locations: [Sudirman Mountain Range, Papua, Indonesia, New Guinea]
ownerships: [PT Freeport Indonesia]
commodities: [copper, gold, silver]
relationships:
[asset: 'PT Freeport Indonesia Mines', location: 'Sudirman Mountain Range, Papua, Indonesia, New Guinea', ownership: 'PT Freeport Indonesia', commodities: 'copper, gold, silver']
Example 3:
Text: [...] The Republic of Indonesia consists of more than 17,000 islands stretching 3,000 miles along the equator from Malaysia to Australia and is the fourth most populous nation in the world with over 200 million people. [...]Query: Does this text mention any physical assets, locations, and ownerships?
physical assets: []
locations: [Republic of Indonesia, Malaysia, Australia]
ownerships: []
commodities: []

relationships:
)__";

const char* kCot =
    R"__(Text: {chunk}
Query:  Let's think step by step. First, identify any physical assets mentioned in the text. Next, determine if any locations or ownership details are provided for these physical assets. Then, determine if the commodities related to the physical assets are provided. Finally, summarize the relationships between each physical asset, its location, its ownership and its commodity. If yes, please specify them in the following format:
physical assets: [ ]
locations: [ ]
ownerships: [ ]
commodities: []
Additionally, identify the relationships between them, specifying the location of each physical asset, their ownership details, and commodities. Format the relationships as follows:
relationships: [asset: '', location: '', ownership: '', commodities: ''])__";

const char* kKnowledgeSeed =
    "You are an expert in analyzing texts for information about physical assets, locations, "
    "ownerships, and commodities. Provide a brief summary of how to identify these elements "
    "in a text and the relationships between them.";

const char* kKnowledge1 =
    R"__({generated_knowledge}

You are a virtual assistant with expertise in extracting specific information from text. A physical asset is an asset with a geographical location.

Text: {chunk}
Query: Identify any physical assets mentioned in the text. List them in the format:
physical assets: [ ])__";

const char* kKnowledge2 =
    R"__({generated_knowledge}

Using the extracted physical assets:
physical assets: {physical_assets}

Text: {chunk}
Query: Identify any locations mentioned in the text associated with the physical assets. List them in the format:
locations: [ ])__";

const char* kKnowledge3 =
    R"__({generated_knowledge}

Using the extracted physical assets and locations:
physical assets: {physical_assets}
locations: {locations}

Text: {chunk}
Query: Identify any ownership details mentioned in the text associated with the physical assets. List them in the format:
ownerships: [ ])__";

const char* kKnowledge4 =
    R"__({generated_knowledge}

Using the extracted physical assets, locations, and ownerships:
physical assets: {physical_assets}
locations: {locations}
ownerships: {ownerships}

Text: {chunk}
Query: Identify any commodities mentioned in the text associated with the physical assets. List them in the format:
commodities: [ ])__";

const char* kKnowledge5 =
    R"__({generated_knowledge}

Using the extracted physical assets, locations, ownerships, and commodities:
physical assets: {physical_assets}
locations: {locations}
ownerships: {ownerships}
commodities: {commodities}

Text: {chunk}
Query: Identify the relationships between the physical assets, locations, ownerships, and commodities. Format the relationships as follows:
relationships: [asset: '', location: '', ownership: '', commodities: ''])__";

const char* kChain1 =
    R"__(Text: {chunk}
Query: Does this text mention any physical assets? If yes, please specify them in the following format:
physical assets: [ ])__";

const char* kChain2 =
    R"__(physical assets: {physical_assets}
Text: {chunk}
Query: Does this text mention any locations associated with the physical assets? If yes, please specify them in the following format:
locations: [ ])__";

const char* kChain3 =
    R"__(physical assets: {physical_assets}
locations: {locations}
Text: {chunk}
Query: Does this text mention any ownership details associated with the physical assets? If yes, please specify them in the following format:
ownerships: [ ])__";

const char* kChain4 =
    R"__(physical assets: {physical_assets}
locations: {locations}
ownerships: {ownerships}
Text: {chunk}
Query: Does this text mention any commodities associated with the physical assets? If yes, please specify them in the following format:
commodities: [ ])__";

const char* kChain5 =
    R"__(physical assets: {physical_assets}
locations: {locations}
ownerships: {ownerships}
commodities: {commodities}
Text: {chunk}
Query: Identify the relationships between the physical assets, locations, ownerships, and commodities. Format the relationships as follows:
relationships: [asset: '', location: '', ownership: '', commodities: ''])__";

const char* kRole =
    R"__(You are a virtual assistant with advanced expertise in a broad spectrum of topics, equipped to utilize high-level critical thinking, cognitive skills, creativity, and innovation.
Your goal is to deliver the most straightforward and accurate answer possible for each question, ensuring high-quality and useful responses for the user.
Now, let's analyze the following text:
Text: {chunk}
Query: Does this text mention any physical assets, locations or ownerships? Does the text mention what commodity the physical asset is being used for?
If yes, you must specify them in the following format:
physical assets: [ ]
locations: [ ]
ownerships: [ ]
commodities: []
Additionally, identify the relationships between them, specifying the location of each physical asset, the ownership details, the commodity the physical asset is used for and the status of the physical asset. Format the relationships as follows:
relationships: [asset: '', location: '', ownership: '', commodity: ''].)__";

const char* kRoleInstructional =
    R"__(You are a virtual assistant with advanced expertise in a broad spectrum of topics, equipped to utilize high-level critical thinking, cognitive skills, creativity, and innovation.
Your goal is to deliver the most straightforward and accurate answer possible for each question, ensuring high-quality and useful responses for the user.
A physical asset is a tangible resource that a company owns and uses in the production of goods and services. Examples of physical assets are facilities, equipment, infrastructure, etc. Ensure that a geographical location or region is never considered as an asset.
A financial asset or other non-physical asset should never be included as a physical asset. Examples of financial assets include equity commitments, corporate facilities, accounts receivable, and short-term investments. Never include these in the list of physical assets.
A commodity is what the physical asset is being used for. Examples include copper, gold, electricity, renewable energy, etc.Now, let's analyze the following text:
Text: {chunk}
Query: Does this text mention any physical assets, locations or ownerships? Does the text mention what commodity the physical asset is being used for?
If yes, you must specify them in the following format:
physical assets: [ ]
locations: [ ]
ownerships: [ ]
commodities: []
Additionally, identify the relationships between them, specifying the location of each physical asset, the ownership details, and the commodity the physical asset is used for.Format the relationships as follows:
relationships: [asset: '', location: '', ownership: '', commodity: '']. Do not output anything else.)__";

const char* kIrzCot =
    R"__(You are a virtual assistant with advanced expertise in a broad spectrum of topics, equipped to utilize high-level critical thinking, cognitive skills, creativity, and innovation.
Your goal is to deliver the most straightforward and accurate answer possible for each question, ensuring high-quality and useful responses for the user.
A physical asset is a tangible resource that a company owns and uses in the production of goods and services. Examples of physical assets are facilities, equipment, infrastructure, etc. Ensure that a geographical location or region is never considered as an asset.
A financial asset or other non-physical asset should never be included as a physical asset. Examples of financial assets include equity commitments, corporate facilities, accounts receivable, and short-term investments. Never include these in the list of physical assets.
A commodity is what the physical asset is being used for. Examples include copper, gold, electricity, renewable energy, etc.Now, let's analyze the following text:
Text: {chunk}
Query: Let's think step-by-step. Does this text mention any physical assets, locations or ownerships? Does the text mention what commodity the physical asset is being used for?
If yes, you must specify them in the following format:
physical assets: [ ]
locations: [ ]
ownerships: [ ]
commodities: []
Additionally, identify the relationships between them, specifying the location of each physical asset, the ownership details, and the commodity the physical asset is used for.Format the relationships as follows:
relationships: [asset: '', location: '', ownership: '', commodity: '']. Do not output anything else.)__";

const char* kDynamic =
    R"__(You are a virtual assistant with advanced expertise in a broad spectrum of topics, equipped to utilize high-level critical thinking, cognitive skills, creativity, and innovation.
Your goal is to deliver the most straightforward and accurate answer possible for each question, ensuring high-quality and useful responses for the user.
{?contains_assets}A physical asset is a tangible resource that a company owns and uses in the production of goods and services. Examples of physical assets are facilities, equipment, infrastructure, etc.
Ensure that a geographical location or region is never considered as an asset.
A financial asset or other non-physical asset should never be included as a physical asset. Examples of financial assets include equity commitments, corporate facilities, accounts receivable, and short-term investments. Never include these in the list of physical assets.
{/contains_assets}{?contains_commodities}A commodity is what the physical asset is being used for. Examples include copper, gold, electricity, renewable energy, etc.
{/contains_commodities}{?contains_locations}Always ensure that a geographical location or region is mentioned separately from the physical asset.
{/contains_locations}Now, let's analyze the following text:
Text: {chunk}
Query: Let's think step-by-step. Does this text mention any physical assets, locations or ownerships? Does the text mention what commodity the physical asset is being used for?
If yes, you must specify them in the following format:
physical assets: [ ]
locations: [ ]
ownerships: [ ]
commodities: []
Additionally, identify the relationships between them, specifying the location of each physical asset, the ownership details, and the commodity the physical asset is used for.Format the relationships as follows:
relationships: [asset: '', location: '', ownership: '', commodity: '']. Do not output anything else.)__";

const char* kCleanCell =
    R"__(You are an expert data cleaner. Your task is to clean and standardize the following text. You will be provided each cell value one by one with its respective column name. Apply the following cleaning steps:

   - Standardize entries in the commodity column to have a consistent format. For example, "Silver, Gold, Lead, Zinc" should be the standard format for each commodity, separated by commas and no extra spaces.
   - Ensure all entries in the status column are in a consistent format, removing redundant words or phrases.
   - All entries should be in title case.
   - Do not make any changes to the 'Countries' column.
   - In the 'commodity' column, if chemical symbols are given, change these to the element name corresponding to the chemical symbol.
   - In all the columns, ensure each entry is properly formatted without redundant commas and extra spaces. For example, "ExxonMobil" should not be separated by extra commas.
   - Remove any leading or trailing spaces in all columns.
   - All individual commodities should be separated by a comma.
   - The 'location' column should only consist of geographical regions and locations.
   - A physical asset is a tangible resource that a company owns and uses in the production of goods and services. Examples of physical assets are facilities, equipment, infrastructure, etc. If there are any entries in the physical asset column that do not fit the description of a physical asset, put N/A in the corresponding cell.
   - A commodity is what the physical asset is being used for. If there are any entries in the commodity column that do not fit the description of a commodity, put N/A next to the word in brackets.
   - Ensure that there are no repetitions or redundant entries in any of the cells.
   - If any cell has 'not specified', it should be empty.
   - All cells should have standardized entries.

Process the following text according to these instructions. Return only the new cleaned cell value, nothing else.

Column: {column}
Value: {value})__";

const char* kCountryExtract =
    R"__(You are an expert in geographical locations. Given the location information provided, identify the countries mentioned in the location. Return the list of countries separated by commas. If no country is mentioned, return "N/A".

Location: {location})__";

const char* kTableImproved =
    R"__(You are a virtual assistant with advanced expertise in a broad spectrum of topics, equipped to utilize high-level critical thinking, cognitive skills, creativity, and innovation.
Your goal is to deliver the most straightforward and accurate answer possible for each question, ensuring high-quality and useful responses for the user.
A physical asset is a tangible resource that a company owns in a location and uses in the production of goods and services. Examples of physical assets are all examples of 'Plant' in the tables (Wateree, Greensville and Colonial Trail West are all physical assets).
A financial asset or other non-physical asset should never be included as a physical asset. Examples of financial assets include equity commitments, corporate facilities, accounts receivable, and short-term investments. Never include these in the list of physical assets.
A commodity is what the physical asset is being used for. The status of a physical asset gives information on whether the asset is operational, under construction or in end-of-life.Now, let's analyze the following text:
Text: {text}
Query: Let's think step-by-step. Does this text mention any physical assets, locations or ownerships? Does the text mention what commodity the physical asset is being used for?
Does the text mention the status of the physical asset? Examples of status include whether the asset is operational, under construction or in end-of-life.If yes, you must specify them in the following format:
physical assets: [ ]
locations: [ ]
ownerships: [ ]
commodities: []
status: []
Additionally, identify all the relationships between them, specifying the location of each physical asset, the ownership details, the commodity the physical asset is used for and the status of the physical asset. Do not leave out any relationships. Format the relationships as follows:
relationships: [asset: '', location: '', ownership: '', commodity: '', status: '']. Do not output anything else.)__";

const char* kRavAnswer =
    R"__(Based only on the following snippets, state the {attribute} of {asset}. Answer concisely.

Snippets:
{snippets})__";

const char* kRavClassify =
    R"__(Classify whether the following two values are similar or dissimilar. Answer yes or no.
Value A: {db}
Value B: {web})__";

bool truthy(const std::string& v) {
    std::string s = text::to_lower(text::trim(v));
    return s == "true" || s == "1" || s == "yes";
}

// Scans for {name} placeholders, skipping conditional markers.
std::vector<std::string> scan_placeholders(const std::string& body) {
    std::set<std::string> names;
    for (std::size_t i = 0; i < body.size(); ++i) {
        if (body[i] != '{') continue;
        std::size_t close = body.find('}', i);
        if (close == std::string::npos) break;
        std::string token = body.substr(i + 1, close - i - 1);
        if (!token.empty() && token[0] != '?' && token[0] != '/') {
            names.insert(token);
        }
        i = close;
    }
    return {names.begin(), names.end()};
}

}  // namespace

// ---------------------------------------------------------------------------
// PromptRegistry
// ---------------------------------------------------------------------------

PromptRegistry::PromptRegistry() {
    auto add = [&](const std::string& id, std::string body) {
        PromptTemplate t;
        t.id = id;
        t.required_bindings = scan_placeholders(body);
        t.body = std::move(body);
        templates_.emplace(id, std::move(t));
    };

    std::string one_shot = std::string(kZeroShot) + "Here is an example:\n" + kOneShotExample;
    std::string few_shot =
        std::string(kZeroShot) + "Here are some examples:\n" + kOneShotExample + kFewShotExtra;

    add("zero_shot", kZeroShot);
    add("one_shot", one_shot);
    add("few_shot", few_shot);
    add("cot", kCot);
    add("generated_knowledge_seed", kKnowledgeSeed);
    add("generated_knowledge1", kKnowledge1);
    add("generated_knowledge2", kKnowledge2);
    add("generated_knowledge3", kKnowledge3);
    add("generated_knowledge4", kKnowledge4);
    add("generated_knowledge5", kKnowledge5);
    add("prompt_chain1", kChain1);
    add("prompt_chain2", kChain2);
    add("prompt_chain3", kChain3);
    add("prompt_chain4", kChain4);
    add("prompt_chain5", kChain5);
    add("role", kRole);
    add("role_instructional", kRoleInstructional);
    add("irz_cot", kIrzCot);
    add("dynamic", kDynamic);
    add("clean_cell", kCleanCell);
    add("country_extract", kCountryExtract);
    add("table_improved", kTableImproved);
    add("rav_answer", kRavAnswer);
    add("rav_classify", kRavClassify);
}

const PromptRegistry& PromptRegistry::instance() {
    static const PromptRegistry registry;
    return registry;
}

const PromptTemplate& PromptRegistry::get(const std::string& id) const {
    auto it = templates_.find(id);
    if (it == templates_.end()) throw TemplateError("unknown prompt template '" + id + "'");
    return it->second;
}

bool PromptRegistry::contains(const std::string& id) const {
    return templates_.count(id) > 0;
}

std::vector<std::string> PromptRegistry::ids() const {
    std::vector<std::string> out;
    out.reserve(templates_.size());
    for (const auto& [id, _] : templates_) out.push_back(id);
    return out;
}

std::string PromptRegistry::render(const std::string& id, const Bindings& bindings) const {
    const PromptTemplate& tmpl = get(id);
    const std::string& body = tmpl.body;
    std::string out;
    out.reserve(body.size());

    // Depth counter for conditional blocks; text inside a false block is
    // skipped. Binding values are emitted verbatim, never re-scanned.
    int suppressed = 0;
    std::vector<std::string> stack;
    for (std::size_t i = 0; i < body.size(); ++i) {
        char c = body[i];
        if (c != '{') {
            if (suppressed == 0) out += c;
            continue;
        }
        std::size_t close = body.find('}', i);
        if (close == std::string::npos) {
            throw TemplateError("template '" + id + "' has an unterminated '{'");
        }
        std::string token = body.substr(i + 1, close - i - 1);
        i = close;
        if (!token.empty() && token[0] == '?') {
            std::string name = token.substr(1);
            stack.push_back(name);
            auto it = bindings.find(name);
            bool on = it != bindings.end() && truthy(it->second);
            if (suppressed > 0 || !on) ++suppressed;
            continue;
        }
        if (!token.empty() && token[0] == '/') {
            std::string name = token.substr(1);
            if (stack.empty() || stack.back() != name) {
                throw TemplateError("template '" + id + "' has a mismatched block '" + name +
                                    "'");
            }
            stack.pop_back();
            if (suppressed > 0) --suppressed;
            continue;
        }
        if (suppressed > 0) continue;
        auto it = bindings.find(token);
        if (it == bindings.end()) {
            throw TemplateError("missing binding '" + token + "' for template '" + id + "'");
        }
        out += it->second;
    }
    if (!stack.empty()) {
        throw TemplateError("template '" + id + "' has an unclosed block '" + stack.back() +
                            "'");
    }
    return out;
}

std::string render_prompt(const std::string& template_id, const Bindings& bindings) {
    return PromptRegistry::instance().render(template_id, bindings);
}

// ---------------------------------------------------------------------------
// StubProvider
// ---------------------------------------------------------------------------

StubProvider::StubProvider(std::vector<StubEntry> entries) {
    for (auto& e : entries) add(std::move(e));
}

void StubProvider::add(StubEntry entry) {
    std::lock_guard<std::mutex> lock(mu_);
    State s;
    s.remaining_failures = entry.fail_times;
    s.entry = std::move(entry);
    entries_.push_back(std::move(s));
}

std::shared_ptr<StubProvider> StubProvider::from_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read stub script " + path);
    auto provider = std::make_shared<StubProvider>();
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw ConfigError("stub script " + path + " line " + std::to_string(line_no) +
                              ": " + e.what());
        }
        StubEntry e;
        e.match = j.value("match", "exact");
        e.key = j.value("key", "");
        e.response = j.value("response", "");
        e.fail_times = j.value("fail_times", 0);
        e.truncated = j.value("truncated", false);
        if (e.match != "exact" && e.match != "contains") {
            throw ConfigError("stub script " + path + " line " + std::to_string(line_no) +
                              ": match must be 'exact' or 'contains'");
        }
        provider->add(std::move(e));
    }
    return provider;
}

LLMResponse StubProvider::complete(const LLMRequest& request) {
    std::lock_guard<std::mutex> lock(mu_);
    ++calls_;
    State* hit = nullptr;
    for (auto& s : entries_) {
        if (s.entry.match == "exact" && s.entry.key == request.prompt) {
            hit = &s;
            break;
        }
    }
    if (hit == nullptr) {
        for (auto& s : entries_) {
            if (s.entry.match == "contains" &&
                request.prompt.find(s.entry.key) != std::string::npos) {
                hit = &s;
                break;
            }
        }
    }
    if (hit == nullptr) {
        std::string head = request.prompt.substr(0, 120);
        throw LlmError("stub has no scripted response for prompt starting: " + head);
    }
    if (hit->remaining_failures > 0) {
        --hit->remaining_failures;
        throw LlmError("stub scripted failure for key '" + hit->entry.key + "'");
    }
    LLMResponse r;
    r.text = hit->entry.response;
    r.model = request.model;
    r.truncated = hit->entry.truncated;
    return r;
}

std::vector<std::vector<double>> StubProvider::embed(const std::string& /*model*/,
                                                     const std::vector<std::string>& texts) {
    return fallback_embeddings(texts);
}

int StubProvider::calls() const {
    std::lock_guard<std::mutex> lock(mu_);
    return calls_;
}

// ---------------------------------------------------------------------------
// HttpProvider
// ---------------------------------------------------------------------------

HttpProvider::HttpProvider(std::string endpoint) : endpoint_(std::move(endpoint)) {
    while (!endpoint_.empty() && endpoint_.back() == '/') endpoint_.pop_back();
}

LLMResponse HttpProvider::complete(const LLMRequest& request) {
    json options = {{"temperature", request.temperature},
                    {"num_predict", request.max_output_tokens}};
    if (request.seed.has_value()) options["seed"] = *request.seed;
    json payload = {{"model", request.model},
                    {"prompt", request.prompt},
                    {"options", options},
                    {"stream", false}};

    auto res = http::post_json(endpoint_ + "/api/generate", payload.dump(), request.timeout);
    if (res.status != 200) {
        throw LlmError("model server returned status " + std::to_string(res.status) + ": " +
                       res.body);
    }
    json j;
    try {
        j = json::parse(res.body);
    } catch (const json::exception& e) {
        throw LlmError(std::string("unparseable model server response: ") + e.what());
    }
    if (!j.contains("response")) {
        throw LlmError("model server response lacks 'response' field: " + res.body);
    }
    LLMResponse r;
    r.text = j["response"].get<std::string>();
    r.model = j.value("model", request.model);
    r.truncated = j.value("done_reason", "") == "length";
    return r;
}

std::vector<std::vector<double>> HttpProvider::embed(const std::string& model,
                                                     const std::vector<std::string>& texts) {
    if (texts.empty()) return {};
    json payload = {{"model", model}, {"input", texts}};
    auto res = http::post_json(endpoint_ + "/api/embed", payload.dump());
    if (res.status != 200) {
        throw LlmError("embedding server returned status " + std::to_string(res.status) +
                       ": " + res.body);
    }
    json j;
    try {
        j = json::parse(res.body);
    } catch (const json::exception& e) {
        throw LlmError(std::string("unparseable embedding response: ") + e.what());
    }
    std::vector<std::vector<double>> out;
    for (const auto& vec : j.at("embeddings")) {
        out.push_back(vec.get<std::vector<double>>());
    }
    if (out.size() != texts.size()) {
        throw LlmError("embedding count mismatch: sent " + std::to_string(texts.size()) +
                       ", got " + std::to_string(out.size()));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Gateway
// ---------------------------------------------------------------------------

// RAII slot in the concurrency semaphore.
class Gateway::Slot {
public:
    Slot(std::mutex& mu, std::condition_variable& cv, int& in_flight, int limit)
        : mu_(mu), cv_(cv), in_flight_(in_flight) {
        std::unique_lock<std::mutex> lock(mu_);
        cv_.wait(lock, [&] { return in_flight_ < limit; });
        ++in_flight_;
    }
    ~Slot() {
        {
            std::lock_guard<std::mutex> lock(mu_);
            --in_flight_;
        }
        cv_.notify_one();
    }

private:
    std::mutex& mu_;
    std::condition_variable& cv_;
    int& in_flight_;
};

Gateway::Gateway(std::shared_ptr<Provider> provider, GatewayConfig config)
    : provider_(std::move(provider)), config_(config) {
    if (config_.retries < 1) throw ConfigError("llm.retries must be at least 1");
    if (config_.max_concurrency < 1) {
        throw ConfigError("llm.max_concurrency must be at least 1");
    }
}

LLMResponse Gateway::complete(const LLMRequest& request) {
    if (request.prompt.empty()) throw LlmError("empty prompt");
    if (provider_ == nullptr) throw LlmError("no model provider configured");
    Slot slot(mu_, cv_, in_flight_, config_.max_concurrency);

    auto start = std::chrono::steady_clock::now();
    for (int attempt = 1;; ++attempt) {
        try {
            LLMResponse r = provider_->complete(request);
            r.attempts = attempt;
            r.latency = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - start);
            if (r.model.empty()) r.model = request.model;
            return r;
        } catch (const LlmError&) {
            if (attempt >= config_.retries) throw;
            auto delay = config_.backoff_base * (1LL << (attempt - 1));
            if (delay.count() > 0) std::this_thread::sleep_for(delay);
        }
    }
}

std::vector<std::vector<double>> Gateway::embed(const std::string& model,
                                                const std::vector<std::string>& texts) {
    if (texts.empty()) return {};
    if (config_.fallback_embeddings || provider_ == nullptr) {
        return fallback_embeddings(texts);
    }
    Slot slot(mu_, cv_, in_flight_, config_.max_concurrency);
    for (int attempt = 1;; ++attempt) {
        try {
            return provider_->embed(model, texts);
        } catch (const LlmError&) {
            if (attempt >= config_.retries) throw;
            auto delay = config_.backoff_base * (1LL << (attempt - 1));
            if (delay.count() > 0) std::this_thread::sleep_for(delay);
        }
    }
}

std::vector<std::vector<double>> fallback_embeddings(const std::vector<std::string>& texts) {
    // Batch vocabulary, sorted for a stable dimension order.
    std::set<std::string> vocab_set;
    std::vector<std::vector<std::string>> token_lists;
    token_lists.reserve(texts.size());
    for (const auto& t : texts) {
        token_lists.push_back(text::word_tokens(t));
        for (const auto& tok : token_lists.back()) vocab_set.insert(tok);
    }
    std::map<std::string, std::size_t> index;
    std::size_t dim = 0;
    for (const auto& w : vocab_set) index[w] = dim++;

    std::vector<std::vector<double>> out;
    out.reserve(texts.size());
    for (const auto& toks : token_lists) {
        std::vector<double> v(dim, 0.0);
        for (const auto& tok : toks) v[index[tok]] += 1.0;
        double norm = 0.0;
        for (double x : v) norm += x * x;
        norm = std::sqrt(norm);
        if (norm > 0.0) {
            for (double& x : v) x /= norm;
        }
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace assetdb::llm
