#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace assetdb::simmetrics {

// ---------------------------------------------------------------- edit based

std::size_t levenshtein_distance(std::string_view a, std::string_view b);

/// 1 - dist(a,b) / max(|a|,|b|). Both empty -> 1.0.
double levenshtein_norm(std::string_view a, std::string_view b);

/// Best normalized edit similarity of the shorter string against every
/// equal-length character window of the longer one (lowercased).
/// Both empty -> 1.0; exactly one empty -> 0.0.
double partial_ratio(std::string_view a, std::string_view b);

// --------------------------------------------------------------- token based
// Token sets/vectors use lowercased alphanumeric runs; punctuation separates.

/// |A∩B| / |A∪B| over token sets. Both token sets empty -> 1.0.
double jaccard(std::string_view a, std::string_view b);

/// 2|A∩B| / (|A|+|B|) over token sets. Both empty -> 1.0.
double dice(std::string_view a, std::string_view b);

/// Cosine of token-frequency vectors. Both empty -> 1.0; one empty -> 0.0.
double cosine_tokens(std::string_view a, std::string_view b);

// -------------------------------------------------------------------- tf-idf

/// One L2-normalized vector per document over the corpus vocabulary
/// (sorted). idf = ln((N+1)/(df+1)) + 1.
std::vector<std::vector<double>> tfidf_vectors(const std::vector<std::string>& corpus);

double dot(const std::vector<double>& a, const std::vector<double>& b);

// --------------------------------------------------------------------- bm25

struct BM25Config {
    double k1 = 1.2;
    double b = 0.75;
};

struct RankedItem {
    std::string id;
    double score = 0.0;
};

// Sorted by score descending; ties broken by candidate id ascending
// (numeric order when ids are document indices).
struct RankedList {
    std::vector<RankedItem> items;
};

/// idf = ln((N - df + 0.5) / (df + 0.5) + 1). Empty query -> all zeros
/// in document-index order.
RankedList bm25_rank(std::string_view query, const std::vector<std::string>& docs,
                     const BM25Config& config = {});

// ------------------------------------------------------------------- ranking

/// Mean over entities of [truth id appears in the top k candidate ids].
/// Throws on length mismatch or k < 1.
double hits_at_k(const std::vector<RankedList>& rankings,
                 const std::vector<std::string>& truths, int k = 5);

// ------------------------------------------------------------ set evaluation

struct Prf {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

using MatchScorer = std::function<double(const std::string&, const std::string&)>;

constexpr double kDefaultMatchThreshold = 0.8;

/// Greedy highest-score-first one-to-one matching between predicted and
/// truth entities; pairs below the threshold never match. Default scorer
/// is partial_ratio at 0.8. Both lists empty counts as a perfect score;
/// one empty list zeroes the affected side.
Prf prf(const std::vector<std::string>& predicted, const std::vector<std::string>& truth,
        const MatchScorer& scorer = nullptr, double threshold = kDefaultMatchThreshold);

}  // namespace assetdb::simmetrics
