#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cotclinic {

enum class TaskKind { BinaryAlternation, CalendarArithmetic, LargestIsland };

std::string task_kind_name(TaskKind kind);                 // "binary_alternation" etc.
std::optional<TaskKind> task_kind_from_name(std::string_view name);

// Cross-domain filler mapping: binary -> calendar -> island -> binary.
TaskKind filler_kind_for(TaskKind kind);

// -- calendar ---------------------------------------------------------------

// Proleptic-Gregorian civil date, restricted to years 1600..2400.
struct CivilDate {
    int year = 1970;
    int month = 1;
    int day = 1;

    bool operator==(const CivilDate&) const = default;
};

bool is_leap_year(int year);
int days_in_month(int year, int month);
bool is_valid_date(const CivilDate& d);

// Serial day number (days since 1970-01-01) and its inverse.
std::int64_t serial_from_date(const CivilDate& d);
CivilDate date_from_serial(std::int64_t serial);

// Weekday index with Monday = 0 .. Sunday = 6, via three routes that the
// test suite cross-checks against each other.
int weekday_from_serial(std::int64_t serial);
int weekday_sakamoto(const CivilDate& d);
int weekday_zeller(const CivilDate& d);

std::string weekday_name(int weekday_mon0);  // "Monday".."Sunday"
std::string iso_date(const CivilDate& d);    // "YYYY-MM-DD"
std::optional<CivilDate> parse_iso_date(std::string_view text);

enum class CalendarAsked { Date, Weekday };

struct BusinessDaysQuery {
    CivilDate start;
    CivilDate end;  // half-open: [start, end)
    bool operator==(const BusinessDaysQuery&) const = default;
};

struct DateOffsetQuery {
    CivilDate start;
    std::int64_t offset_days = 0;
    CalendarAsked asked = CalendarAsked::Date;
    bool operator==(const DateOffsetQuery&) const = default;
};

using CalendarQuery = std::variant<BusinessDaysQuery, DateOffsetQuery>;

// -- task payloads / instances ------------------------------------------------

using Grid = std::vector<std::vector<int>>;

using TaskPayload = std::variant<std::string, CalendarQuery, Grid>;

struct TaskInstance {
    TaskKind kind = TaskKind::BinaryAlternation;
    std::uint64_t seed = 0;
    std::string question;
    TaskPayload payload;
    std::string answer;
};

struct ReasoningTrace {
    std::vector<std::string> steps;
    std::string full_text;          // newline join of steps
    std::size_t token_estimate = 0; // whitespace word count
};

struct DifficultyConfig {
    std::size_t bits_min = 4;
    std::size_t bits_max = 30;
    std::size_t grid_min = 3;
    std::size_t grid_max = 10;
    std::int64_t calendar_span_max = 3650;  // days
    int year_min = 1600;
    int year_max = 2400;
};

// -- solvers -------------------------------------------------------------------

// Minimum pairwise swaps to make `bits` alternating; -1 when impossible.
int solve_binary_alternation(const std::string& bits);

// Mon-Fri count over [start, end) or date/weekday after an offset, as
// canonical answer text.
std::string solve_calendar(const CalendarQuery& query);

// Largest 4-connected component of 1-cells.
std::size_t solve_largest_island(const Grid& grid);

// -- generation / traces ---------------------------------------------------------

TaskInstance generate_instance(TaskKind kind, std::uint64_t seed,
                               const DifficultyConfig& difficulty = {});

ReasoningTrace synthesize_trace(const TaskInstance& inst);

// Numerals (verbatim digit-run strings) that the solver passes through on the
// way to the answer; every one of them appears in the synthesized trace.
std::vector<std::string> checkpoint_numerals(const TaskInstance& inst);

bool verify(const TaskInstance& inst, const std::string& candidate);

// Canonical answer comparison form: trim, casefold, strip "answer:" prefix.
std::string canonicalize_answer(std::string_view text);

// Recover (kind, payload) from rendered question text. Prompt preludes and
// intervention suffixes may surround the question; the last embedded payload
// wins. Returns nothing when no payload is recognizable.
std::optional<TaskInstance> parse_question(const std::string& text);

}  // namespace cotclinic
