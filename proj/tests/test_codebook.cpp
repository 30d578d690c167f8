#include <map>
#include <random>
#include <set>

#include "codebook_tables.hpp"
#include "cotclinic/codebook.hpp"
#include "cotclinic/errors.hpp"
#include "cotclinic/tasks.hpp"
#include "cotclinic/util.hpp"
#include "doctest.h"

using namespace cotclinic;

namespace {

void check_against_expected(const Codebook& book,
                            const std::array<std::string, 10>& digits,
                            const std::vector<expected_tables::Entry>& phrases) {
    for (int d = 0; d < 10; ++d)
        CHECK(book.digit_map()[static_cast<std::size_t>(d)] ==
              digits[static_cast<std::size_t>(d)]);
    REQUIRE(book.phrases().size() == phrases.size());
    std::map<std::string, std::string> stored;
    for (const auto& [surface, code] : book.phrases()) {
        CHECK(!stored.count(surface));
        stored[surface] = code;
    }
    for (const auto& [surface, code] : phrases) {
        REQUIRE(stored.count(surface));
        CHECK(stored.at(surface) == code);
    }
}

}  // namespace

TEST_CASE("builtin codebooks match the full expected tables cell by cell") {
    check_against_expected(builtin_codebook(TaskKind::BinaryAlternation),
                           expected_tables::binary_digits,
                           expected_tables::binary_phrases);
    check_against_expected(builtin_codebook(TaskKind::CalendarArithmetic),
                           expected_tables::calendar_digits,
                           expected_tables::calendar_phrases);
    check_against_expected(builtin_codebook(TaskKind::LargestIsland),
                           expected_tables::island_digits,
                           expected_tables::island_phrases);
}

TEST_CASE("spot values named in the tables") {
    CHECK(builtin_codebook(TaskKind::BinaryAlternation).digit_map()[0] == "ko");
    CHECK(builtin_codebook(TaskKind::BinaryAlternation).digit_map()[9] == "fa");
    const auto& calendar = builtin_codebook(TaskKind::CalendarArithmetic);
    bool found_business = false;
    for (const auto& [surface, code] : calendar.phrases())
        if (surface == "business days") {
            found_business = true;
            CHECK(code == "ledger-orbits");
        }
    CHECK(found_business);
    const auto& island = builtin_codebook(TaskKind::LargestIsland);
    bool found_island = false;
    for (const auto& [surface, code] : island.phrases())
        if (surface == "island") {
            found_island = true;
            CHECK(code == "reef");
        }
    CHECK(found_island);
}

TEST_CASE("phrase map is stored longest-surface-first") {
    for (auto kind : {TaskKind::BinaryAlternation, TaskKind::CalendarArithmetic,
                      TaskKind::LargestIsland}) {
        const auto& phrases = builtin_codebook(kind).phrases();
        for (std::size_t i = 1; i < phrases.size(); ++i)
            CHECK(phrases[i - 1].first.size() >= phrases[i].first.size());
    }
}

TEST_CASE("encode single terms") {
    const auto& binary = builtin_codebook(TaskKind::BinaryAlternation);
    const auto& calendar = builtin_codebook(TaskKind::CalendarArithmetic);
    CHECK(encode("swap", binary) == "flip");
    CHECK(encode("monday", calendar) == "sol-day");
    CHECK(encode("Monday", calendar) == "sol-day");
    CHECK(encode("14", calendar) == "sun-orbit");
    CHECK(encode("business days", calendar) == "ledger-orbits");
    CHECK(encode("7", binary) == "su");
    CHECK(encode("503", binary) == "lo-ko-mu");
}

TEST_CASE("encode respects word boundaries and passes unknown text through") {
    const auto& binary = builtin_codebook(TaskKind::BinaryAlternation);
    CHECK(encode("swapped", binary) == "swapped");
    CHECK(encode("unrelated words stay", binary) == "unrelated words stay");
    CHECK(encode("the swap count", binary) == "the flip tally");
}

TEST_CASE("decode single terms and digit chains") {
    const auto& binary = builtin_codebook(TaskKind::BinaryAlternation);
    const auto& calendar = builtin_codebook(TaskKind::CalendarArithmetic);
    CHECK(decode("flip", binary) == "swap");
    CHECK(decode("sun-orbit", calendar) == "14");
    CHECK(decode("sol-day", calendar) == "monday");
    CHECK(decode("ledger-orbits", calendar) == "business days");
    CHECK(decode("lo-ko-mu", binary) == "503");
}

TEST_CASE("digit code words decode to digits, never number words") {
    const auto& calendar = builtin_codebook(TaskKind::CalendarArithmetic);
    CHECK(decode("eclipse", calendar) == "0");
    CHECK(decode("sun", calendar) == "1");
    CHECK(decode("quasar", calendar) == "9");
}

TEST_CASE("ambiguous plural codes raise AmbiguousToken") {
    const auto& calendar = builtin_codebook(TaskKind::CalendarArithmetic);
    CHECK_THROWS_AS(decode("eclipses", calendar), AmbiguousToken);
    CHECK_THROWS_AS(decode("suns", calendar), AmbiguousToken);
}

TEST_CASE("hyphen-adjacent numerals survive the round trip") {
    const auto& calendar = builtin_codebook(TaskKind::CalendarArithmetic);
    const std::string date = "the resulting date is 2024-02-29.";
    const std::string encoded = encode(date, calendar);
    CHECK(encoded.find("2") == std::string::npos);
    CHECK(decode(encoded, calendar) == date);
    const auto& binary = builtin_codebook(TaskKind::BinaryAlternation);
    CHECK(decode(encode("answer: -1", binary), binary) == "answer: -1");
}

TEST_CASE("synthesized traces round trip through their codebook") {
    std::mt19937_64 rng(61);
    for (auto kind : {TaskKind::BinaryAlternation, TaskKind::CalendarArithmetic,
                      TaskKind::LargestIsland}) {
        const Codebook& book = builtin_codebook(kind);
        for (int i = 0; i < 300; ++i) {
            const TaskInstance inst = generate_instance(kind, rng());
            const std::string text = synthesize_trace(inst).full_text;
            const std::string encoded = encode(text, book);
            CAPTURE(text);
            CHECK(decode(encoded, book) == text);
        }
    }
}

TEST_CASE("encoding is idempotent on coded output") {
    std::mt19937_64 rng(67);
    for (auto kind : {TaskKind::BinaryAlternation, TaskKind::CalendarArithmetic,
                      TaskKind::LargestIsland}) {
        const Codebook& book = builtin_codebook(kind);
        for (int i = 0; i < 100; ++i) {
            const TaskInstance inst = generate_instance(kind, rng());
            const std::string once = encode(synthesize_trace(inst).full_text, book);
            CHECK(encode(once, book) == once);
        }
    }
}

TEST_CASE("encode is a pure function of text and codebook") {
    const auto& book = builtin_codebook(TaskKind::CalendarArithmetic);
    const std::string text = "count business days from 2024-01-01 to 2024-03-05.";
    CHECK(encode(text, book) == encode(text, book));
}

TEST_CASE("digit-bearing traces encode with no raw digits left") {
    std::mt19937_64 rng(71);
    for (auto kind : {TaskKind::BinaryAlternation, TaskKind::CalendarArithmetic,
                      TaskKind::LargestIsland}) {
        const Codebook& book = builtin_codebook(kind);
        for (int i = 0; i < 100; ++i) {
            const TaskInstance inst = generate_instance(kind, rng());
            const std::string encoded =
                encode(synthesize_trace(inst).full_text, book);
            CHECK(extract_digit_runs(encoded).empty());
        }
    }
}

TEST_CASE("codebook JSON serialization round trips") {
    const Codebook& book = builtin_codebook(TaskKind::LargestIsland);
    const Codebook parsed = Codebook::from_json(book.to_json());
    CHECK(parsed.name() == book.name());
    CHECK(parsed.digit_map() == book.digit_map());
    CHECK(parsed.phrases() == book.phrases());
}

TEST_CASE("codebook construction rejects malformed tables") {
    std::array<std::string, 10> digits = {"a", "b", "c", "d", "e",
                                          "f", "g", "h", "i", "j"};
    CHECK_THROWS(Codebook("dup-codes",
                          {"a", "a", "c", "d", "e", "f", "g", "h", "i", "j"}, {}));
    CHECK_THROWS(Codebook("dup-surface", digits,
                          {{"swap", "flip"}, {"swap", "other"}}));
    CHECK_THROWS(Codebook("code-is-surface", digits,
                          {{"swap", "flip"}, {"flip", "elsewhere"}}));
}
