#include <sstream>

#include "doctest.h"

#include "assetdb/csv.hpp"
#include "assetdb/text.hpp"

using namespace assetdb;

TEST_CASE("trim and collapse") {
    CHECK(text::trim("  a b  ") == "a b");
    CHECK(text::trim("\t\n") == "");
    CHECK(text::trim("") == "");
    CHECK(text::collapse_spaces("a   b\t\nc") == "a b c");
    CHECK(text::collapse_spaces("  a  ") == " a ");
}

TEST_CASE("normalize_entity lowercases, trims and collapses") {
    CHECK(text::normalize_entity("  Grasberg   Mine ") == "grasberg mine");
    CHECK(text::normalize_entity("COPPER") == "copper");
    CHECK(text::normalize_entity("") == "");
}

TEST_CASE("word_tokens are lowercased alnum runs") {
    CHECK(text::word_tokens("Copper-Gold, 2024!") ==
          std::vector<std::string>{"copper", "gold", "2024"});
    CHECK(text::word_tokens("...") == std::vector<std::string>{});
}

TEST_CASE("split_and_trim drops empties") {
    CHECK(text::split_and_trim(" a , b ,, c ", ',') ==
          std::vector<std::string>{"a", "b", "c"});
    CHECK(text::split_and_trim("", ',') == std::vector<std::string>{});
}

TEST_CASE("iequals and starts_with_icase") {
    CHECK(text::iequals("FCX", "fcx"));
    CHECK_FALSE(text::iequals("FCX", "fc"));
    CHECK(text::starts_with_icase("Relationships: ...", "relationship"));
}

TEST_CASE("csv round-trips quoted fields") {
    std::ostringstream out;
    csv::write_row(out, {"a", "with,comma", "with \"quote\"", "multi\nline", ""});
    std::istringstream in(out.str());
    auto rows = csv::read_all(in);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0] == std::vector<std::string>{"a", "with,comma", "with \"quote\"",
                                              "multi\nline", ""});
}

TEST_CASE("csv reader handles crlf and blank lines") {
    std::istringstream in("a,b\r\n\r\nc,d\n");
    auto rows = csv::read_all(in);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == std::vector<std::string>{"a", "b"});
    CHECK(rows[1] == std::vector<std::string>{"c", "d"});
}

TEST_CASE("csv escape only quotes when needed") {
    CHECK(csv::escape("plain") == "plain");
    CHECK(csv::escape("a,b") == "\"a,b\"");
    CHECK(csv::escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
}
