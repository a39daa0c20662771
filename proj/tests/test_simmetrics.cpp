#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"

#include "assetdb/simmetrics.hpp"
#include "assetdb/text.hpp"

using namespace assetdb;

namespace {

// Plain quadratic DP, kept independent of the library implementation.
std::size_t lev_oracle(const std::string& a, const std::string& b) {
    std::vector<std::size_t> dp(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) dp[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t prev = dp[0];
        dp[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t cur = dp[j];
            dp[j] = std::min({dp[j] + 1, dp[j - 1] + 1, prev + (a[i - 1] != b[j - 1] ? 1 : 0)});
            prev = cur;
        }
    }
    return dp[b.size()];
}

std::string random_word(std::mt19937& rng, int max_len, const std::string& alphabet) {
    std::uniform_int_distribution<int> len(0, max_len);
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    std::string s;
    int n = len(rng);
    for (int i = 0; i < n; ++i) s += alphabet[pick(rng)];
    return s;
}

double jaccard_oracle(const std::string& a, const std::string& b) {
    auto ta = text::word_tokens(a);
    auto tb = text::word_tokens(b);
    std::set<std::string> sa(ta.begin(), ta.end()), sb(tb.begin(), tb.end());
    if (sa.empty() && sb.empty()) return 1.0;
    std::size_t inter = 0;
    for (const auto& t : sa) inter += sb.count(t);
    std::size_t uni = sa.size() + sb.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

double dice_oracle(const std::string& a, const std::string& b) {
    auto ta = text::word_tokens(a);
    auto tb = text::word_tokens(b);
    std::set<std::string> sa(ta.begin(), ta.end()), sb(tb.begin(), tb.end());
    if (sa.empty() && sb.empty()) return 1.0;
    std::size_t inter = 0;
    for (const auto& t : sa) inter += sb.count(t);
    return 2.0 * static_cast<double>(inter) / static_cast<double>(sa.size() + sb.size());
}

double cosine_oracle(const std::string& a, const std::string& b) {
    auto ta = text::word_tokens(a);
    auto tb = text::word_tokens(b);
    if (ta.empty() && tb.empty()) return 1.0;
    if (ta.empty() || tb.empty()) return 0.0;
    std::map<std::string, double> fa, fb;
    for (const auto& t : ta) fa[t] += 1.0;
    for (const auto& t : tb) fb[t] += 1.0;
    double dot = 0, na = 0, nb = 0;
    for (const auto& [t, v] : fa) {
        na += v * v;
        auto it = fb.find(t);
        if (it != fb.end()) dot += v * it->second;
    }
    for (const auto& [t, v] : fb) nb += v * v;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace

TEST_CASE("levenshtein matches the DP oracle on random pairs") {
    std::mt19937 rng(17);
    for (int i = 0; i < 1500; ++i) {
        std::string a = random_word(rng, 12, "abcd");
        std::string b = random_word(rng, 12, "abcd");
        std::size_t expected = lev_oracle(a, b);
        CHECK(simmetrics::levenshtein_distance(a, b) == expected);
        double norm = simmetrics::levenshtein_norm(a, b);
        if (a.empty() && b.empty()) {
            CHECK(norm == 1.0);
        } else {
            double want = 1.0 - static_cast<double>(expected) /
                                    static_cast<double>(std::max(a.size(), b.size()));
            CHECK(norm == doctest::Approx(want).epsilon(1e-15));
        }
    }
}

TEST_CASE("levenshtein frozen cases") {
    CHECK(simmetrics::levenshtein_distance("kitten", "sitting") == 3);
    CHECK(simmetrics::levenshtein_norm("kitten", "sitting") ==
          doctest::Approx(0.5714285714285714).epsilon(1e-15));
    CHECK(simmetrics::levenshtein_norm("", "") == 1.0);
    CHECK(simmetrics::levenshtein_norm("abc", "") == 0.0);
}

TEST_CASE("token metrics match direct computation on random pairs") {
    std::mt19937 rng(23);
    auto random_phrase = [&](int words) {
        std::string s;
        std::uniform_int_distribution<int> n(0, words);
        int k = n(rng);
        for (int i = 0; i < k; ++i) {
            if (!s.empty()) s += ' ';
            s += random_word(rng, 5, "abcd");
        }
        return s;
    };
    for (int i = 0; i < 1200; ++i) {
        std::string a = random_phrase(4);
        std::string b = random_phrase(4);
        CHECK(simmetrics::jaccard(a, b) == doctest::Approx(jaccard_oracle(a, b)).epsilon(1e-12));
        CHECK(simmetrics::dice(a, b) == doctest::Approx(dice_oracle(a, b)).epsilon(1e-12));
        CHECK(simmetrics::cosine_tokens(a, b) ==
              doctest::Approx(cosine_oracle(a, b)).epsilon(1e-12));
    }
}

TEST_CASE("token cosine frozen value") {
    // ('a a b','a b'): dot = 2*1 + 1*1 = 3, norms sqrt(5)*sqrt(2) -> 3/sqrt(10)
    CHECK(simmetrics::cosine_tokens("a a b", "a b") ==
          doctest::Approx(0.9486832980505138).epsilon(1e-15));
}

TEST_CASE("partial_ratio: substring scores 1, symmetry, frozen case") {
    CHECK(simmetrics::partial_ratio("Grasberg", "the Grasberg mine complex") == 1.0);
    CHECK(simmetrics::partial_ratio("abc", "xbc") == 1.0 - 1.0 / 3.0);
    CHECK(simmetrics::partial_ratio("", "") == 1.0);
    CHECK(simmetrics::partial_ratio("abc", "") == 0.0);
    CHECK(simmetrics::partial_ratio("MINE", "mine") == 1.0);  // windows are lowercased

    std::mt19937 rng(31);
    for (int i = 0; i < 400; ++i) {
        std::string a = random_word(rng, 10, "abcd");
        std::string b = random_word(rng, 10, "abcd");
        CHECK(simmetrics::partial_ratio(a, b) == simmetrics::partial_ratio(b, a));
    }
    // Random containment always scores exactly 1.
    for (int i = 0; i < 200; ++i) {
        std::string inner = random_word(rng, 6, "abcd");
        std::string outer = random_word(rng, 4, "xyz") + inner + random_word(rng, 4, "xyz");
        if (inner.empty()) continue;
        CHECK(simmetrics::partial_ratio(inner, outer) == 1.0);
    }
}

TEST_CASE("tfidf matches the frozen 3-document example") {
    auto vecs = simmetrics::tfidf_vectors({"copper mine", "gold mine", "copper smelter"});
    REQUIRE(vecs.size() == 3);
    // vocabulary: copper gold mine smelter
    REQUIRE(vecs[0].size() == 4);
    CHECK(vecs[0][0] == doctest::Approx(0.707106781187).epsilon(1e-9));
    CHECK(vecs[0][2] == doctest::Approx(0.707106781187).epsilon(1e-9));
    CHECK(vecs[1][1] == doctest::Approx(0.795960541568).epsilon(1e-9));
    CHECK(vecs[1][2] == doctest::Approx(0.605348508106).epsilon(1e-9));
    CHECK(simmetrics::dot(vecs[0], vecs[1]) == doctest::Approx(0.428046035063).epsilon(1e-9));
    CHECK(simmetrics::dot(vecs[1], vecs[2]) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("tfidf vectors are unit length") {
    auto vecs = simmetrics::tfidf_vectors(
        {"alpha beta", "beta gamma gamma", "alpha", "", "delta epsilon zeta"});
    for (std::size_t i = 0; i < vecs.size(); ++i) {
        double norm = 0;
        for (double v : vecs[i]) norm += v * v;
        if (i == 3) {
            CHECK(norm == 0.0);  // empty document stays the zero vector
        } else {
            CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("bm25 matches the frozen 5-document fixture") {
    std::vector<std::string> docs = {
        "copper mine in indonesia produces copper and gold",
        "gold mine in nevada",
        "oil refinery on the gulf coast",
        "coal power plant generates electricity",
        "copper smelter near the copper mine",
    };
    auto ranked = simmetrics::bm25_rank("copper mine electricity", docs);
    REQUIRE(ranked.items.size() == 5);
    std::map<std::string, double> by_id;
    for (const auto& item : ranked.items) by_id[item.id] = item.score;
    CHECK(by_id["0"] == doctest::Approx(1.554323400376).epsilon(1e-9));
    CHECK(by_id["1"] == doctest::Approx(0.617378397608).epsilon(1e-9));
    CHECK(by_id["2"] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(by_id["3"] == doctest::Approx(1.469195685041).epsilon(1e-9));
    CHECK(by_id["4"] == doctest::Approx(1.723706027741).epsilon(1e-9));
    // Order: doc4 > doc0 > doc3 > doc1 > doc2.
    CHECK(ranked.items[0].id == "4");
    CHECK(ranked.items[1].id == "0");
    CHECK(ranked.items[2].id == "3");
    CHECK(ranked.items[3].id == "1");
    CHECK(ranked.items[4].id == "2");
}

TEST_CASE("bm25 empty query yields zero scores in document order") {
    auto ranked = simmetrics::bm25_rank("", {"a b", "c d", "e"});
    REQUIRE(ranked.items.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(ranked.items[i].id == std::to_string(i));
        CHECK(ranked.items[i].score == 0.0);
    }
}

TEST_CASE("hits_at_k counts truth ids inside the top k") {
    simmetrics::RankedList r1{{{"a", 0.9}, {"b", 0.8}, {"c", 0.1}}};
    simmetrics::RankedList r2{{{"x", 0.9}, {"y", 0.8}}};
    CHECK(simmetrics::hits_at_k({r1, r2}, {"b", "z"}, 2) == 0.5);
    CHECK(simmetrics::hits_at_k({r1}, {"c"}, 2) == 0.0);
    CHECK(simmetrics::hits_at_k({r1}, {"c"}, 3) == 1.0);
    CHECK_THROWS_AS(simmetrics::hits_at_k({r1}, {"a", "b"}, 2), std::invalid_argument);
    CHECK_THROWS_AS(simmetrics::hits_at_k({r1}, {"a"}, 0), std::invalid_argument);
    CHECK_THROWS_AS(simmetrics::hits_at_k({}, {}, 1), std::invalid_argument);
}

TEST_CASE("prf greedy matching") {
    // Exact hit + fuzzy hit + one miss on each side.
    auto scores = simmetrics::prf({"Grasberg mine", "El Abra", "Safford"},
                                  {"grasberg mine complex", "El Abra mine"});
    CHECK(scores.precision == doctest::Approx(2.0 / 3.0));
    CHECK(scores.recall == doctest::Approx(1.0));
    CHECK(scores.f1 == doctest::Approx(2 * (2.0 / 3.0) * 1.0 / (2.0 / 3.0 + 1.0)));

    auto empty_both = simmetrics::prf({}, {});
    CHECK(empty_both.precision == 1.0);
    CHECK(empty_both.recall == 1.0);
    CHECK(empty_both.f1 == 1.0);

    auto none = simmetrics::prf({"only predicted"}, {});
    CHECK(none.precision == 0.0);
    CHECK(none.recall == 0.0);
    CHECK(none.f1 == 0.0);

    // One truth entity can only be consumed once.
    auto dup = simmetrics::prf({"copper", "copper"}, {"copper"});
    CHECK(dup.precision == 0.5);
    CHECK(dup.recall == 1.0);
}
