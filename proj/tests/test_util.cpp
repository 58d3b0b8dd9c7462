#include "doctest.h"
#include "domforge/util.hpp"

using namespace domforge;

TEST_SUITE("util") {

TEST_CASE("sha256 known vector") {
    CHECK(util::sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(util::sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("split_lines_keep_ends reassembles") {
    std::string text = "a\nbb\n\nc";
    auto lines = util::split_lines_keep_ends(text);
    REQUIRE(lines.size() == 4);
    std::string joined;
    for (auto line : lines) joined += std::string(line);
    CHECK(joined == text);
    CHECK(lines[0] == "a\n");
    CHECK(lines[2] == "\n");
    CHECK(lines[3] == "c");
}

TEST_CASE("collapse_whitespace") {
    CHECK(util::collapse_whitespace("  a \t b\n\nc ") == "a b c");
    CHECK(util::collapse_whitespace("") == "");
    CHECK(util::collapse_whitespace("   ") == "");
}

TEST_CASE("first_sentence") {
    CHECK(util::first_sentence("One. Two.") == "One.");
    CHECK(util::first_sentence("Uses v1.2 of the API. More.") == "Uses v1.2 of the API.");
    CHECK(util::first_sentence("no period here") == "no period here");
}

TEST_CASE("glob_match") {
    CHECK(util::glob_match("*.pb.go", "api/service.pb.go"));
    CHECK(util::glob_match("vendor/*", "vendor/lib/x.go"));
    CHECK_FALSE(util::glob_match("*.pb.go", "api/service.go"));
    CHECK(util::glob_match("a?c", "abc"));
    CHECK(util::glob_match("[ab]*.go", "b1.go"));
    CHECK_FALSE(util::glob_match("[!ab]*.go", "b1.go"));
}

TEST_CASE("deterministic_shuffle is stable across calls") {
    std::vector<int> a{1, 2, 3, 4, 5, 6, 7};
    std::vector<int> b = a;
    util::deterministic_shuffle(a, 42);
    util::deterministic_shuffle(b, 42);
    CHECK(a == b);
    std::vector<int> c{1, 2, 3, 4, 5, 6, 7};
    util::deterministic_shuffle(c, 43);
    CHECK(a != c);
}

}
