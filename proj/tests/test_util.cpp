#include "cotclinic/util.hpp"
#include "doctest.h"

using namespace cotclinic;

TEST_CASE("token counting follows the whitespace rule") {
    CHECK(whitespace_token_count("") == 0);
    CHECK(whitespace_token_count("a b  c") == 3);
    CHECK(whitespace_token_count("  padded  ") == 1);
    CHECK(whitespace_token_count("line\nbreaks\tcount") == 3);
}

TEST_CASE("digit runs are extracted verbatim") {
    const auto runs = extract_digit_runs("2024-02-29 and 7 swaps, id007");
    REQUIRE(runs.size() == 5);
    CHECK(runs[0] == "2024");
    CHECK(runs[1] == "02");
    CHECK(runs[2] == "29");
    CHECK(runs[3] == "7");
    CHECK(runs[4] == "007");
}

TEST_CASE("multiset helpers") {
    CHECK(multiset_contains({"1", "2", "2", "3"}, {"2", "2"}));
    CHECK(!multiset_contains({"1", "2", "3"}, {"2", "2"}));
    CHECK(multiset_disjoint({"1", "2"}, {"3", "4"}));
    CHECK(!multiset_disjoint({"1", "2"}, {"2"}));
}

TEST_CASE("hashing and seeding are stable") {
    CHECK(fnv1a64_hex("") == fnv1a64_hex(""));
    CHECK(fnv1a64_hex("a") != fnv1a64_hex("b"));
    CHECK(fnv1a64_hex("abc").size() == 16);
    CHECK(mix_seed(1, 2) == mix_seed(1, 2));
    CHECK(mix_seed(1, 2) != mix_seed(1, 3));
    CHECK(mix_seed(1, 2) != mix_seed(2, 2));
}

TEST_CASE("bounded draws and gaussians are deterministic per seed") {
    std::mt19937_64 a(99);
    std::mt19937_64 b(99);
    for (int i = 0; i < 50; ++i) {
        CHECK(rng_below(a, 17) == rng_below(b, 17));
    }
    std::mt19937_64 c(7);
    std::mt19937_64 d(7);
    CHECK(rng_gaussian(c) == rng_gaussian(d));
    for (int i = 0; i < 1000; ++i) {
        const auto v = rng_below(c, 10);
        CHECK(v < 10);
    }
}
