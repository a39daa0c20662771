#include "assetdb/chunker.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "assetdb/errors.hpp"
#include "assetdb/text.hpp"

namespace assetdb::chunker {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

// The word immediately before position `dot`, lowercased, including any
// embedded dots ("U.S" for "U.S."). Empty when the dot starts the word run.
std::string word_before(std::string_view text, std::size_t dot) {
    std::size_t end = dot;
    std::size_t begin = end;
    while (begin > 0 && !is_space(text[begin - 1])) --begin;
    std::string w;
    for (std::size_t i = begin; i < end; ++i) {
        w += static_cast<char>(std::tolower(static_cast<unsigned char>(text[i])));
    }
    return w;
}

bool is_abbreviation(const std::string& word) {
    static const std::unordered_set<std::string> abbrevs = {
        "inc", "corp", "ltd", "co", "u.s", "u.s.a", "mr", "mrs", "ms", "dr", "no", "vs",
        "etc", "st", "jr", "sr"};
    return abbrevs.count(word) > 0;
}

// Single letter like the "A." in "John A. Smith". Only guards when another
// word precedes it in the current sentence, so a sentence that IS "A." still
// ends.
bool is_guarded_initial(std::string_view text, std::size_t dot, std::size_t sent_begin) {
    std::size_t end = dot;
    std::size_t begin = end;
    while (begin > 0 && !is_space(text[begin - 1])) --begin;
    if (end - begin != 1) return false;
    if (std::isalpha(static_cast<unsigned char>(text[begin])) == 0) return false;
    // Look for a non-space character earlier in this sentence.
    for (std::size_t i = begin; i > sent_begin; --i) {
        if (!is_space(text[i - 1])) return true;
    }
    return false;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    return text::split_whitespace(text);
}

std::string chunk_id(const Chunk& c) {
    return c.filing_id + ":" + std::to_string(c.seq);
}

std::vector<SentenceSpan> split_sentences(std::string_view text) {
    std::vector<SentenceSpan> spans;
    if (text.empty()) return spans;

    std::size_t begin = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c != '.' && c != '!' && c != '?') continue;
        // Allow closing quotes/brackets between the terminator and whitespace.
        std::size_t j = i + 1;
        while (j < text.size() && (text[j] == '"' || text[j] == '\'' || text[j] == ')' ||
                                   text[j] == ']')) {
            ++j;
        }
        if (j < text.size() && !is_space(text[j])) continue;
        if (c == '.') {
            std::string prev = word_before(text, i);
            if (is_abbreviation(prev)) continue;
            if (is_guarded_initial(text, i, begin)) continue;
        }
        // Boundary: the sentence ends after the terminator (and any closers);
        // trailing whitespace belongs to the ending sentence so spans partition.
        std::size_t end = j;
        while (end < text.size() && is_space(text[end])) ++end;
        spans.push_back({begin, end});
        begin = end;
        i = end > 0 ? end - 1 : 0;
    }
    if (begin < text.size()) spans.push_back({begin, text.size()});
    return spans;
}

std::vector<Chunk> chunk(std::string_view text, const ChunkerConfig& config,
                         const std::string& filing_id) {
    if (config.max_tokens <= 0) throw ConfigError("chunker.max_tokens must be positive");
    if (config.overlap_tokens < 0) throw ConfigError("chunker.overlap must be non-negative");
    if (config.overlap_tokens >= config.max_tokens) {
        throw ConfigError("chunker.overlap must be smaller than chunker.max_tokens");
    }

    // Token stream plus sentence boundaries expressed as token offsets.
    std::vector<std::string> tokens;
    std::vector<std::size_t> sent_start;  // parallel: first token index of each sentence
    for (const SentenceSpan& span : split_sentences(text)) {
        auto sent_tokens = tokenize(text.substr(span.begin, span.end - span.begin));
        if (sent_tokens.empty()) continue;  // whitespace-only span
        sent_start.push_back(tokens.size());
        tokens.insert(tokens.end(), sent_tokens.begin(), sent_tokens.end());
    }
    const std::size_t total = tokens.size();
    const std::size_t nsent = sent_start.size();
    std::vector<Chunk> chunks;
    if (total == 0) return chunks;

    auto sent_end = [&](std::size_t s) {
        return s + 1 < nsent ? sent_start[s + 1] : total;
    };
    auto sentence_containing = [&](std::size_t token) {
        auto it = std::upper_bound(sent_start.begin(), sent_start.end(), token);
        return static_cast<std::size_t>(it - sent_start.begin()) - 1;
    };
    auto emit = [&](std::size_t from, std::size_t to) {
        Chunk c;
        c.filing_id = filing_id;
        c.seq = static_cast<int>(chunks.size());
        c.start_token = static_cast<int>(from);
        c.token_count = static_cast<int>(to - from);
        std::string body;
        for (std::size_t t = from; t < to; ++t) {
            if (t > from) body += ' ';
            body += tokens[t];
        }
        c.text = std::move(body);
        chunks.push_back(std::move(c));
    };

    const std::size_t max_tok = static_cast<std::size_t>(config.max_tokens);
    const std::size_t overlap = static_cast<std::size_t>(config.overlap_tokens);
    std::size_t covered_to = 0;  // highest token end emitted so far
    std::size_t i = 0;           // current start sentence
    while (i < nsent) {
        std::size_t begin = sent_start[i];
        if (sent_end(i) - begin > max_tok) {
            // Oversized sentence: hard-split at the token limit, no overlap.
            std::size_t s = begin;
            while (s < sent_end(i)) {
                std::size_t e = std::min(s + max_tok, sent_end(i));
                emit(s, e);
                s = e;
            }
            covered_to = sent_end(i);
            ++i;
            continue;
        }
        // Greedy: whole sentences while they fit.
        std::size_t j = i;
        while (j < nsent && sent_end(j) - begin <= max_tok) ++j;
        std::size_t end = sent_end(j - 1);
        if (!chunks.empty() && end <= covered_to) {
            // Honoring the overlap made no forward progress; slide the window.
            ++i;
            continue;
        }
        emit(begin, end);
        covered_to = end;
        if (j >= nsent) break;
        std::size_t anchor = end > overlap ? end - overlap : 0;
        i = std::max(sentence_containing(anchor), i + 1);
    }
    return chunks;
}

}  // namespace assetdb::chunker
