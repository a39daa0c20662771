#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace assetdb::chunker {

struct ChunkerConfig {
    int max_tokens = 1024;
    int overlap_tokens = 20;  // lower-bound target; actual overlap lands on a sentence boundary
};

struct Chunk {
    std::string filing_id;
    int seq = 0;           // dense, ordered by start_token
    std::string text;      // tokens joined by single spaces
    int token_count = 0;   // always ≤ max_tokens
    int start_token = 0;   // offset into the filing's token stream
};

// Half-open byte range of one sentence within the input text. Spans partition
// the input: span[0].begin = 0, span[i].end = span[i+1].begin, last end = size.
struct SentenceSpan {
    std::size_t begin = 0;
    std::size_t end = 0;
};

// Whitespace-delimited tokens. "" → {}.
std::vector<std::string> tokenize(std::string_view text);

// Sentence boundaries: terminal . ! ? followed by whitespace, guarded against
// common abbreviations ("Inc.", "Corp.", "U.S.") and single-letter initials
// that follow another word ("John A. Smith" stays together).
std::vector<SentenceSpan> split_sentences(std::string_view text);

// Greedy sentence packing into windows of at most max_tokens tokens; the next
// window starts at the sentence containing the token overlap_tokens before the
// previous window's end (moved forward when that would stall progress). A
// single sentence longer than max_tokens is hard-split at the token limit.
// Throws ConfigError on an invalid config.
std::vector<Chunk> chunk(std::string_view text, const ChunkerConfig& config = {},
                         const std::string& filing_id = "");

// Stable identifier "<filing_id>:<seq>" used to key extractions and rows.
std::string chunk_id(const Chunk& c);

}  // namespace assetdb::chunker
