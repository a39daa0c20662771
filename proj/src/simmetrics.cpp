#include "assetdb/simmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

#include "assetdb/text.hpp"

namespace assetdb::simmetrics {

namespace {

std::set<std::string> token_set(std::string_view s) {
    auto toks = text::word_tokens(s);
    return {toks.begin(), toks.end()};
}

std::map<std::string, int> token_counts(std::string_view s) {
    std::map<std::string, int> out;
    for (auto& t : text::word_tokens(s)) ++out[t];
    return out;
}

std::size_t intersection_size(const std::set<std::string>& a, const std::set<std::string>& b) {
    std::size_t n = 0;
    const auto& small = a.size() <= b.size() ? a : b;
    const auto& large = a.size() <= b.size() ? b : a;
    for (const auto& t : small)
        if (large.count(t)) ++n;
    return n;
}

}  // namespace

std::size_t levenshtein_distance(std::string_view a, std::string_view b) {
    const std::size_t m = a.size(), n = b.size();
    if (m == 0) return n;
    if (n == 0) return m;
    std::vector<std::size_t> row(n + 1);
    std::iota(row.begin(), row.end(), std::size_t{0});
    for (std::size_t i = 1; i <= m; ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= n; ++j) {
            std::size_t cur = row[j];
            std::size_t subst = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, subst});
            diag = cur;
        }
    }
    return row[n];
}

double levenshtein_norm(std::string_view a, std::string_view b) {
    if (a.empty() && b.empty()) return 1.0;
    std::size_t maxlen = std::max(a.size(), b.size());
    return 1.0 - static_cast<double>(levenshtein_distance(a, b)) / static_cast<double>(maxlen);
}

double partial_ratio(std::string_view a, std::string_view b) {
    if (a.empty() && b.empty()) return 1.0;
    if (a.empty() || b.empty()) return 0.0;
    std::string la = text::to_lower(a);
    std::string lb = text::to_lower(b);
    const std::string& s = la.size() <= lb.size() ? la : lb;
    const std::string& t = la.size() <= lb.size() ? lb : la;
    double best = 0.0;
    for (std::size_t off = 0; off + s.size() <= t.size(); ++off) {
        double sim = levenshtein_norm(s, std::string_view(t).substr(off, s.size()));
        best = std::max(best, sim);
        if (best == 1.0) break;
    }
    return best;
}

double jaccard(std::string_view a, std::string_view b) {
    auto sa = token_set(a), sb = token_set(b);
    if (sa.empty() && sb.empty()) return 1.0;
    std::size_t inter = intersection_size(sa, sb);
    std::size_t uni = sa.size() + sb.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

double dice(std::string_view a, std::string_view b) {
    auto sa = token_set(a), sb = token_set(b);
    if (sa.empty() && sb.empty()) return 1.0;
    std::size_t inter = intersection_size(sa, sb);
    return 2.0 * static_cast<double>(inter) / static_cast<double>(sa.size() + sb.size());
}

double cosine_tokens(std::string_view a, std::string_view b) {
    auto ca = token_counts(a), cb = token_counts(b);
    if (ca.empty() && cb.empty()) return 1.0;
    if (ca.empty() || cb.empty()) return 0.0;
    double num = 0.0;
    for (const auto& [t, f] : ca) {
        auto it = cb.find(t);
        if (it != cb.end()) num += static_cast<double>(f) * it->second;
    }
    auto norm = [](const std::map<std::string, int>& c) {
        double s = 0.0;
        for (const auto& [t, f] : c) s += static_cast<double>(f) * f;
        return std::sqrt(s);
    };
    return num / (norm(ca) * norm(cb));
}

std::vector<std::vector<double>> tfidf_vectors(const std::vector<std::string>& corpus) {
    const std::size_t n_docs = corpus.size();
    std::vector<std::map<std::string, int>> counts;
    counts.reserve(n_docs);
    std::map<std::string, int> df;
    for (const auto& doc : corpus) {
        counts.push_back(token_counts(doc));
        for (const auto& [t, f] : counts.back()) ++df[t];
    }
    // vocabulary in sorted order (std::map iteration)
    std::map<std::string, std::size_t> index;
    std::map<std::string, double> idf;
    std::size_t i = 0;
    for (const auto& [t, d] : df) {
        index[t] = i++;
        idf[t] = std::log(static_cast<double>(n_docs + 1) / (d + 1)) + 1.0;
    }
    std::vector<std::vector<double>> vectors;
    vectors.reserve(n_docs);
    for (const auto& c : counts) {
        std::vector<double> v(index.size(), 0.0);
        for (const auto& [t, f] : c) v[index[t]] = f * idf[t];
        double norm = std::sqrt(dot(v, v));
        if (norm > 0.0)
            for (auto& x : v) x /= norm;
        vectors.push_back(std::move(v));
    }
    return vectors;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) s += a[i] * b[i];
    return s;
}

RankedList bm25_rank(std::string_view query, const std::vector<std::string>& docs,
                     const BM25Config& config) {
    const std::size_t n_docs = docs.size();
    std::vector<std::vector<std::string>> doc_tokens;
    doc_tokens.reserve(n_docs);
    double total_len = 0.0;
    for (const auto& d : docs) {
        doc_tokens.push_back(text::word_tokens(d));
        total_len += static_cast<double>(doc_tokens.back().size());
    }
    double avgdl = n_docs ? total_len / static_cast<double>(n_docs) : 0.0;

    auto query_terms = text::word_tokens(query);
    std::map<std::string, std::size_t> df;
    for (const auto& t : query_terms) df[t];  // dedupe query terms
    for (auto& [term, d] : df)
        for (const auto& toks : doc_tokens)
            if (std::find(toks.begin(), toks.end(), term) != toks.end()) ++d;

    std::vector<double> scores(n_docs, 0.0);
    for (std::size_t i = 0; i < n_docs; ++i) {
        const auto& toks = doc_tokens[i];
        double dl = static_cast<double>(toks.size());
        for (const auto& [term, d] : df) {
            auto tf = static_cast<double>(std::count(toks.begin(), toks.end(), term));
            if (tf == 0.0) continue;
            double idf =
                std::log((static_cast<double>(n_docs) - static_cast<double>(d) + 0.5) /
                             (static_cast<double>(d) + 0.5) +
                         1.0);
            double denom = tf + config.k1 * (1.0 - config.b + config.b * dl / avgdl);
            scores[i] += idf * tf * (config.k1 + 1.0) / denom;
        }
    }

    std::vector<std::size_t> order(n_docs);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        if (scores[x] != scores[y]) return scores[x] > scores[y];
        return x < y;
    });
    RankedList out;
    out.items.reserve(n_docs);
    for (std::size_t idx : order) out.items.push_back({std::to_string(idx), scores[idx]});
    return out;
}

double hits_at_k(const std::vector<RankedList>& rankings, const std::vector<std::string>& truths,
                 int k) {
    if (rankings.size() != truths.size())
        throw std::invalid_argument("hits_at_k: rankings/truths length mismatch");
    if (rankings.empty()) throw std::invalid_argument("hits_at_k: empty input");
    if (k < 1) throw std::invalid_argument("hits_at_k: k must be >= 1");
    double hits = 0.0;
    for (std::size_t i = 0; i < rankings.size(); ++i) {
        const auto& items = rankings[i].items;
        std::size_t top = std::min<std::size_t>(items.size(), static_cast<std::size_t>(k));
        for (std::size_t j = 0; j < top; ++j) {
            if (items[j].id == truths[i]) {
                hits += 1.0;
                break;
            }
        }
    }
    return hits / static_cast<double>(rankings.size());
}

Prf prf(const std::vector<std::string>& predicted, const std::vector<std::string>& truth,
        const MatchScorer& scorer, double threshold) {
    if (predicted.empty() && truth.empty()) return {1.0, 1.0, 1.0};
    MatchScorer score = scorer;
    if (!score)
        score = [](const std::string& a, const std::string& b) { return partial_ratio(a, b); };

    struct Pair {
        double s;
        std::size_t p, t;
    };
    std::vector<Pair> pairs;
    for (std::size_t p = 0; p < predicted.size(); ++p)
        for (std::size_t t = 0; t < truth.size(); ++t) {
            double s = score(predicted[p], truth[t]);
            if (s >= threshold) pairs.push_back({s, p, t});
        }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        return std::tie(b.s, a.p, a.t) < std::tie(a.s, b.p, b.t);  // score desc, indices asc
    });
    std::vector<bool> p_used(predicted.size(), false), t_used(truth.size(), false);
    std::size_t tp = 0;
    for (const auto& pr : pairs) {
        if (p_used[pr.p] || t_used[pr.t]) continue;
        p_used[pr.p] = t_used[pr.t] = true;
        ++tp;
    }
    Prf out;
    out.precision = predicted.empty() ? 0.0 : static_cast<double>(tp) / predicted.size();
    out.recall = truth.empty() ? 0.0 : static_cast<double>(tp) / truth.size();
    out.f1 = (out.precision + out.recall) > 0.0
                 ? 2.0 * out.precision * out.recall / (out.precision + out.recall)
                 : 0.0;
    return out;
}

}  // namespace assetdb::simmetrics
