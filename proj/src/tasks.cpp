#include "cotclinic/tasks.hpp"

#include <algorithm>
#include <cstdlib>
#include <random>
#include <regex>
#include <sstream>

#include "cotclinic/errors.hpp"
#include "cotclinic/util.hpp"

namespace cotclinic {

std::string task_kind_name(TaskKind kind) {
    switch (kind) {
        case TaskKind::BinaryAlternation: return "binary_alternation";
        case TaskKind::CalendarArithmetic: return "calendar_arithmetic";
        case TaskKind::LargestIsland: return "largest_island";
    }
    return "unknown";
}

std::optional<TaskKind> task_kind_from_name(std::string_view name) {
    std::string n = to_lower(name);
    if (n == "binary_alternation" || n == "binary") return TaskKind::BinaryAlternation;
    if (n == "calendar_arithmetic" || n == "calendar") return TaskKind::CalendarArithmetic;
    if (n == "largest_island" || n == "island") return TaskKind::LargestIsland;
    return std::nullopt;
}

TaskKind filler_kind_for(TaskKind kind) {
    switch (kind) {
        case TaskKind::BinaryAlternation: return TaskKind::CalendarArithmetic;
        case TaskKind::CalendarArithmetic: return TaskKind::LargestIsland;
        case TaskKind::LargestIsland: return TaskKind::BinaryAlternation;
    }
    return TaskKind::BinaryAlternation;
}

// -- calendar primitives ------------------------------------------------------

bool is_leap_year(int year) {
    if (year % 400 == 0) return true;
    if (year % 100 == 0) return false;
    return year % 4 == 0;
}

int days_in_month(int year, int month) {
    static const int lengths[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month < 1 || month > 12) return 0;
    if (month == 2 && is_leap_year(year)) return 29;
    return lengths[month - 1];
}

bool is_valid_date(const CivilDate& d) {
    if (d.year < 1600 || d.year > 2400) return false;
    if (d.month < 1 || d.month > 12) return false;
    return d.day >= 1 && d.day <= days_in_month(d.year, d.month);
}

std::int64_t serial_from_date(const CivilDate& dt) {
    std::int64_t y = dt.year;
    const int m = dt.month;
    const int d = dt.day;
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy =
        (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
        static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

CivilDate date_from_serial(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp < 10 ? mp + 3 : mp - 9;
    return CivilDate{static_cast<int>(y + (m <= 2)), static_cast<int>(m),
                     static_cast<int>(d)};
}

int weekday_from_serial(std::int64_t serial) {
    // 1970-01-01 (serial 0) was a Thursday; Monday = 0.
    return static_cast<int>(((serial % 7) + 7 + 3) % 7);
}

int weekday_sakamoto(const CivilDate& dt) {
    static const int t[12] = {0, 3, 2, 5, 0, 3, 5, 1, 4, 6, 2, 4};
    int y = dt.year;
    if (dt.month < 3) y -= 1;
    int w = (y + y / 4 - y / 100 + y / 400 + t[dt.month - 1] + dt.day) % 7;  // 0 = Sunday
    return (w + 6) % 7;
}

int weekday_zeller(const CivilDate& dt) {
    int q = dt.day;
    int m = dt.month;
    int y = dt.year;
    if (m < 3) {
        m += 12;
        y -= 1;
    }
    const int K = y % 100;
    const int J = y / 100;
    int h = (q + (13 * (m + 1)) / 5 + K + K / 4 + J / 4 + 5 * J) % 7;  // 0 = Saturday
    return (h + 5) % 7;
}

std::string weekday_name(int weekday_mon0) {
    static const char* names[7] = {"Monday", "Tuesday",  "Wednesday", "Thursday",
                                   "Friday", "Saturday", "Sunday"};
    return names[((weekday_mon0 % 7) + 7) % 7];
}

std::string iso_date(const CivilDate& d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

std::optional<CivilDate> parse_iso_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    auto digits = [&](std::size_t off, std::size_t len) -> std::optional<int> {
        int v = 0;
        for (std::size_t i = off; i < off + len; ++i) {
            if (text[i] < '0' || text[i] > '9') return std::nullopt;
            v = v * 10 + (text[i] - '0');
        }
        return v;
    };
    auto y = digits(0, 4);
    auto m = digits(5, 2);
    auto d = digits(8, 2);
    if (!y || !m || !d) return std::nullopt;
    CivilDate out{*y, *m, *d};
    if (!is_valid_date(out)) return std::nullopt;
    return out;
}

// -- solvers -----------------------------------------------------------------

namespace {

constexpr std::int64_t kMaxCalendarSpan = 10000;

struct BinaryWork {
    std::int64_t zeros = 0;
    std::int64_t ones = 0;
    bool feasible_zero_start = false;  // pattern 0101...
    bool feasible_one_start = false;   // pattern 1010...
    std::int64_t mismatches_zero_start = 0;
    std::int64_t mismatches_one_start = 0;
    int answer = -1;
};

BinaryWork binary_work(const std::string& bits) {
    BinaryWork w;
    for (char c : bits) {
        if (c == '0') {
            ++w.zeros;
        } else if (c == '1') {
            ++w.ones;
        } else {
            throw InvalidCharacter("binary string may contain only 0 and 1");
        }
    }
    const std::int64_t n = static_cast<std::int64_t>(bits.size());
    const std::int64_t even_slots = (n + 1) / 2;  // positions 0, 2, 4, ...
    const std::int64_t odd_slots = n / 2;
    w.feasible_zero_start = (w.zeros == even_slots && w.ones == odd_slots);
    w.feasible_one_start = (w.ones == even_slots && w.zeros == odd_slots);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        const char zero_start = (i % 2 == 0) ? '0' : '1';
        if (bits[i] != zero_start) ++w.mismatches_zero_start;
        const char one_start = (i % 2 == 0) ? '1' : '0';
        if (bits[i] != one_start) ++w.mismatches_one_start;
    }
    std::int64_t best = -1;
    if (w.feasible_zero_start) best = w.mismatches_zero_start / 2;
    if (w.feasible_one_start) {
        const std::int64_t alt = w.mismatches_one_start / 2;
        if (best < 0 || alt < best) best = alt;
    }
    w.answer = static_cast<int>(best);
    return w;
}

struct BusinessWork {
    std::int64_t total = 0;
    std::int64_t weeks = 0;
    std::int64_t rem = 0;
    std::int64_t base = 0;
    std::int64_t extra = 0;
    std::int64_t count = 0;
};

BusinessWork business_work(const BusinessDaysQuery& q) {
    if (!is_valid_date(q.start) || !is_valid_date(q.end))
        throw InvalidDate("calendar query requires valid dates in 1600..2400");
    const std::int64_t s1 = serial_from_date(q.start);
    const std::int64_t s2 = serial_from_date(q.end);
    if (s1 > s2) throw InvalidDate("start date is after end date");
    BusinessWork w;
    w.total = s2 - s1;
    if (w.total > kMaxCalendarSpan)
        throw SpanTooLarge("date span exceeds 10000 days");
    w.weeks = w.total / 7;
    w.rem = w.total % 7;
    w.base = w.weeks * 5;
    const int start_wd = weekday_from_serial(s1);
    for (std::int64_t i = 0; i < w.rem; ++i)
        if ((start_wd + i) % 7 < 5) ++w.extra;
    w.count = w.base + w.extra;
    return w;
}

struct OffsetWork {
    std::int64_t magnitude = 0;
    bool forward = true;
    CivilDate result;
    int weekday = 0;
};

OffsetWork offset_work(const DateOffsetQuery& q) {
    if (!is_valid_date(q.start))
        throw InvalidDate("calendar query requires valid dates in 1600..2400");
    if (std::llabs(q.offset_days) > kMaxCalendarSpan)
        throw SpanTooLarge("date offset exceeds 10000 days");
    OffsetWork w;
    w.magnitude = std::llabs(q.offset_days);
    w.forward = q.offset_days >= 0;
    const std::int64_t serial = serial_from_date(q.start) + q.offset_days;
    w.result = date_from_serial(serial);
    w.weekday = weekday_from_serial(serial);
    return w;
}

struct IslandWork {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::size_t> areas;  // in scan order
    std::size_t best = 0;
};

IslandWork island_work(const Grid& grid) {
    IslandWork w;
    w.rows = grid.size();
    w.cols = grid.empty() ? 0 : grid[0].size();
    for (const auto& row : grid) {
        if (row.size() != w.cols) throw RaggedGrid("grid rows differ in length");
        for (int v : row)
            if (v != 0 && v != 1)
                throw InvalidCharacter("grid entries must be 0 or 1");
    }
    std::vector<std::vector<bool>> seen(w.rows, std::vector<bool>(w.cols, false));
    for (std::size_t r = 0; r < w.rows; ++r) {
        for (std::size_t c = 0; c < w.cols; ++c) {
            if (grid[r][c] != 1 || seen[r][c]) continue;
            std::size_t area = 0;
            std::vector<std::pair<std::size_t, std::size_t>> stack{{r, c}};
            seen[r][c] = true;
            while (!stack.empty()) {
                auto [cr, cc] = stack.back();
                stack.pop_back();
                ++area;
                const std::int64_t dr[4] = {-1, 1, 0, 0};
                const std::int64_t dc[4] = {0, 0, -1, 1};
                for (int k = 0; k < 4; ++k) {
                    const std::int64_t nr = static_cast<std::int64_t>(cr) + dr[k];
                    const std::int64_t nc = static_cast<std::int64_t>(cc) + dc[k];
                    if (nr < 0 || nc < 0 || nr >= static_cast<std::int64_t>(w.rows) ||
                        nc >= static_cast<std::int64_t>(w.cols))
                        continue;
                    const auto ur = static_cast<std::size_t>(nr);
                    const auto uc = static_cast<std::size_t>(nc);
                    if (grid[ur][uc] == 1 && !seen[ur][uc]) {
                        seen[ur][uc] = true;
                        stack.emplace_back(ur, uc);
                    }
                }
            }
            w.areas.push_back(area);
            w.best = std::max(w.best, area);
        }
    }
    return w;
}

}  // namespace

int solve_binary_alternation(const std::string& bits) {
    return binary_work(bits).answer;
}

std::string solve_calendar(const CalendarQuery& query) {
    if (const auto* q = std::get_if<BusinessDaysQuery>(&query))
        return std::to_string(business_work(*q).count);
    const auto& q = std::get<DateOffsetQuery>(query);
    const OffsetWork w = offset_work(q);
    if (q.asked == CalendarAsked::Date) return iso_date(w.result);
    return weekday_name(w.weekday);
}

std::size_t solve_largest_island(const Grid& grid) {
    return island_work(grid).best;
}

// -- question rendering ---------------------------------------------------------

namespace {

std::string render_binary_question(const std::string& bits) {
    return "Given a binary string, return the minimum number of character swaps "
           "to make it alternating, or -1 if it is impossible. The string is "
           "alternating when no two adjacent characters are equal, and a swap "
           "may exchange the characters at any two positions. Now, determine "
           "the minimum number of swaps to make the following binary string "
           "alternating: " +
           bits;
}

std::string render_business_question(const BusinessDaysQuery& q) {
    return "How many business days (Monday through Friday) are there from " +
           iso_date(q.start) + " to " + iso_date(q.end) +
           "? Count the start date but not the end date. Give the count as a "
           "number.";
}

std::string render_offset_question(const DateOffsetQuery& q) {
    const std::string dir = q.offset_days >= 0 ? "later" : "earlier";
    const std::string n = std::to_string(std::llabs(q.offset_days));
    if (q.asked == CalendarAsked::Date) {
        return "Starting from " + iso_date(q.start) + ", what is the date " + n +
               " days " + dir + "? Answer in YYYY-MM-DD format.";
    }
    return "Starting from " + iso_date(q.start) + ", what day of the week is it " +
           n + " days " + dir + "? Answer with the weekday name.";
}

std::string render_island_question(const Grid& grid) {
    std::string rows;
    for (std::size_t r = 0; r < grid.size(); ++r) {
        if (r > 0) rows += "\n";
        for (std::size_t c = 0; c < grid[r].size(); ++c) {
            if (c > 0) rows += " ";
            rows += grid[r][c] ? "1" : "0";
        }
    }
    return "You are given a binary grid where 1 represents land and 0 "
           "represents water. An island is a group of 1s connected "
           "horizontally or vertically (not diagonally). What is the area of "
           "the largest island? Return 0 if there is no island.\n\nGrid:\n" +
           rows;
}

std::string render_question(TaskKind kind, const TaskPayload& payload) {
    switch (kind) {
        case TaskKind::BinaryAlternation:
            return render_binary_question(std::get<std::string>(payload));
        case TaskKind::CalendarArithmetic: {
            const auto& q = std::get<CalendarQuery>(payload);
            if (const auto* b = std::get_if<BusinessDaysQuery>(&q))
                return render_business_question(*b);
            return render_offset_question(std::get<DateOffsetQuery>(q));
        }
        case TaskKind::LargestIsland:
            return render_island_question(std::get<Grid>(payload));
    }
    return {};
}

std::string solve_payload(TaskKind kind, const TaskPayload& payload) {
    switch (kind) {
        case TaskKind::BinaryAlternation:
            return std::to_string(
                solve_binary_alternation(std::get<std::string>(payload)));
        case TaskKind::CalendarArithmetic:
            return solve_calendar(std::get<CalendarQuery>(payload));
        case TaskKind::LargestIsland:
            return std::to_string(solve_largest_island(std::get<Grid>(payload)));
    }
    return {};
}

void validate_difficulty(const DifficultyConfig& d) {
    if (d.bits_min < 1 || d.bits_min > d.bits_max)
        throw InvalidDifficulty("bitstring length bounds are empty or inverted");
    if (d.grid_min < 1 || d.grid_min > d.grid_max)
        throw InvalidDifficulty("grid dimension bounds are empty or inverted");
    if (d.calendar_span_max < 0 || d.calendar_span_max > kMaxCalendarSpan)
        throw InvalidDifficulty("calendar span bound is out of range");
    if (d.year_min < 1600 || d.year_max > 2400 || d.year_min > d.year_max)
        throw InvalidDifficulty("year bounds must lie within 1600..2400");
}

}  // namespace

TaskInstance generate_instance(TaskKind kind, std::uint64_t seed,
                               const DifficultyConfig& difficulty) {
    validate_difficulty(difficulty);
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(kind) + 1));
    TaskInstance inst;
    inst.kind = kind;
    inst.seed = seed;
    switch (kind) {
        case TaskKind::BinaryAlternation: {
            const std::size_t len =
                difficulty.bits_min +
                rng_below(rng, difficulty.bits_max - difficulty.bits_min + 1);
            std::string bits;
            bits.reserve(len);
            for (std::size_t i = 0; i < len; ++i)
                bits.push_back(rng_below(rng, 2) ? '1' : '0');
            inst.payload = bits;
            break;
        }
        case TaskKind::CalendarArithmetic: {
            const std::int64_t smin =
                serial_from_date({difficulty.year_min, 1, 1});
            const std::int64_t smax =
                serial_from_date({difficulty.year_max, 12, 31});
            if (rng_below(rng, 2) == 0) {
                const std::int64_t span = static_cast<std::int64_t>(
                    rng_below(rng,
                              static_cast<std::uint64_t>(difficulty.calendar_span_max) + 1));
                const std::int64_t start =
                    smin + static_cast<std::int64_t>(
                               rng_below(rng, static_cast<std::uint64_t>(
                                                  smax - smin - span + 1)));
                inst.payload = CalendarQuery{BusinessDaysQuery{
                    date_from_serial(start), date_from_serial(start + span)}};
            } else {
                const std::int64_t span = difficulty.calendar_span_max;
                const std::int64_t offset =
                    static_cast<std::int64_t>(
                        rng_below(rng, static_cast<std::uint64_t>(2 * span + 1))) -
                    span;
                const std::int64_t lo = smin + std::max<std::int64_t>(0, -offset);
                const std::int64_t hi = smax - std::max<std::int64_t>(0, offset);
                const std::int64_t start =
                    lo + static_cast<std::int64_t>(
                             rng_below(rng, static_cast<std::uint64_t>(hi - lo + 1)));
                const CalendarAsked asked = rng_below(rng, 2)
                                                ? CalendarAsked::Weekday
                                                : CalendarAsked::Date;
                inst.payload = CalendarQuery{
                    DateOffsetQuery{date_from_serial(start), offset, asked}};
            }
            break;
        }
        case TaskKind::LargestIsland: {
            const std::size_t rows =
                difficulty.grid_min +
                rng_below(rng, difficulty.grid_max - difficulty.grid_min + 1);
            const std::size_t cols =
                difficulty.grid_min +
                rng_below(rng, difficulty.grid_max - difficulty.grid_min + 1);
            Grid grid(rows, std::vector<int>(cols, 0));
            for (auto& row : grid)
                for (auto& cell : row) cell = rng_below(rng, 100) < 45 ? 1 : 0;
            inst.payload = grid;
            break;
        }
    }
    inst.question = render_question(kind, inst.payload);
    inst.answer = solve_payload(kind, inst.payload);
    return inst;
}

// -- reasoning trace synthesis ---------------------------------------------------
//
// Trace text stays lowercase with every numeral written in digits; the
// codebook encode/decode pair relies on both properties.

namespace {

ReasoningTrace make_trace(std::vector<std::string> steps) {
    ReasoningTrace t;
    t.steps = std::move(steps);
    t.full_text = join(t.steps, "\n");
    t.token_estimate = whitespace_token_count(t.full_text);
    return t;
}

std::vector<std::string> binary_trace_steps(const std::string& bits) {
    const BinaryWork w = binary_work(bits);
    std::vector<std::string> steps;
    steps.push_back("the binary string is " + bits + ".");
    steps.push_back("ones count: " + std::to_string(w.ones) +
                    ". zeros count: " + std::to_string(w.zeros) + ".");
    if (w.answer < 0) {
        steps.push_back("the count difference is " +
                        std::to_string(std::llabs(w.ones - w.zeros)) +
                        ", which exceeds one, so no alternating arrangement is "
                        "possible.");
        steps.push_back("answer: -1");
        return steps;
    }
    if (w.feasible_zero_start && w.feasible_one_start) {
        steps.push_back("mismatches against the pattern starting with a zero: " +
                        std::to_string(w.mismatches_zero_start) + ".");
        steps.push_back("mismatches against the pattern starting with a one: " +
                        std::to_string(w.mismatches_one_start) + ".");
    } else if (w.feasible_zero_start) {
        steps.push_back("only the pattern starting with a zero is feasible.");
        steps.push_back("mismatches against that pattern: " +
                        std::to_string(w.mismatches_zero_start) + ".");
    } else {
        steps.push_back("only the pattern starting with a one is feasible.");
        steps.push_back("mismatches against that pattern: " +
                        std::to_string(w.mismatches_one_start) + ".");
    }
    steps.push_back("each swap fixes a mismatched pair, so the minimum swaps "
                    "count is " +
                    std::to_string(w.answer) + ".");
    steps.push_back("answer: " + std::to_string(w.answer));
    return steps;
}

std::vector<std::string> business_trace_steps(const BusinessDaysQuery& q) {
    const BusinessWork w = business_work(q);
    std::vector<std::string> steps;
    steps.push_back("count business days from " + iso_date(q.start) + " to " +
                    iso_date(q.end) + ", excluding the end date.");
    steps.push_back("the dates are " + std::to_string(w.total) +
                    " days apart.");
    steps.push_back("that is " + std::to_string(w.weeks) +
                    " full weeks plus " + std::to_string(w.rem) +
                    " extra days.");
    steps.push_back("the full weeks contribute " + std::to_string(w.base) +
                    " business days.");
    steps.push_back("checking the extra days adds " + std::to_string(w.extra) +
                    " more.");
    steps.push_back("total business days: " + std::to_string(w.count) + ".");
    steps.push_back("answer: " + std::to_string(w.count));
    return steps;
}

std::vector<std::string> offset_trace_steps(const DateOffsetQuery& q) {
    const OffsetWork w = offset_work(q);
    std::vector<std::string> steps;
    steps.push_back("the start date is " + iso_date(q.start) + ".");
    steps.push_back("move " + std::to_string(w.magnitude) + " days " +
                    (w.forward ? "forward." : "backward."));
    steps.push_back("the resulting date is " + iso_date(w.result) + ".");
    if (q.asked == CalendarAsked::Weekday) {
        steps.push_back("that date falls on a " +
                        to_lower(weekday_name(w.weekday)) + ".");
        steps.push_back("answer: " + to_lower(weekday_name(w.weekday)));
    } else {
        steps.push_back("answer: " + iso_date(w.result));
    }
    return steps;
}

std::vector<std::string> island_trace_steps(const Grid& grid) {
    const IslandWork w = island_work(grid);
    std::vector<std::string> steps;
    steps.push_back("the grid has " + std::to_string(w.rows) + " rows and " +
                    std::to_string(w.cols) + " columns.");
    steps.push_back("searching for islands of filled cells connected up, down, "
                    "left, and right.");
    if (w.areas.empty()) {
        steps.push_back("no island exists in this grid.");
    } else {
        for (std::size_t a : w.areas)
            steps.push_back("found an island with area " + std::to_string(a) + ".");
        steps.push_back("the largest island has area " + std::to_string(w.best) +
                        ".");
    }
    steps.push_back("answer: " + std::to_string(w.best));
    return steps;
}

void push_date_tokens(std::vector<std::string>& out, const CivilDate& d) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%04d", d.year);
    out.emplace_back(buf);
    std::snprintf(buf, sizeof(buf), "%02d", d.month);
    out.emplace_back(buf);
    std::snprintf(buf, sizeof(buf), "%02d", d.day);
    out.emplace_back(buf);
}

}  // namespace

ReasoningTrace synthesize_trace(const TaskInstance& inst) {
    switch (inst.kind) {
        case TaskKind::BinaryAlternation:
            return make_trace(binary_trace_steps(std::get<std::string>(inst.payload)));
        case TaskKind::CalendarArithmetic: {
            const auto& q = std::get<CalendarQuery>(inst.payload);
            if (const auto* b = std::get_if<BusinessDaysQuery>(&q))
                return make_trace(business_trace_steps(*b));
            return make_trace(offset_trace_steps(std::get<DateOffsetQuery>(q)));
        }
        case TaskKind::LargestIsland:
            return make_trace(island_trace_steps(std::get<Grid>(inst.payload)));
    }
    return {};
}

std::vector<std::string> checkpoint_numerals(const TaskInstance& inst) {
    std::vector<std::string> out;
    switch (inst.kind) {
        case TaskKind::BinaryAlternation: {
            const auto& bits = std::get<std::string>(inst.payload);
            const BinaryWork w = binary_work(bits);
            if (!bits.empty()) out.push_back(bits);
            out.push_back(std::to_string(w.ones));
            out.push_back(std::to_string(w.zeros));
            if (w.answer < 0) {
                out.push_back(std::to_string(std::llabs(w.ones - w.zeros)));
            } else {
                if (w.feasible_zero_start)
                    out.push_back(std::to_string(w.mismatches_zero_start));
                if (w.feasible_one_start)
                    out.push_back(std::to_string(w.mismatches_one_start));
                out.push_back(std::to_string(w.answer));
            }
            break;
        }
        case TaskKind::CalendarArithmetic: {
            const auto& q = std::get<CalendarQuery>(inst.payload);
            if (const auto* b = std::get_if<BusinessDaysQuery>(&q)) {
                const BusinessWork w = business_work(*b);
                push_date_tokens(out, b->start);
                push_date_tokens(out, b->end);
                out.push_back(std::to_string(w.total));
                out.push_back(std::to_string(w.weeks));
                out.push_back(std::to_string(w.rem));
                out.push_back(std::to_string(w.base));
                out.push_back(std::to_string(w.extra));
                out.push_back(std::to_string(w.count));
            } else {
                const auto& o = std::get<DateOffsetQuery>(q);
                const OffsetWork w = offset_work(o);
                push_date_tokens(out, o.start);
                out.push_back(std::to_string(w.magnitude));
                push_date_tokens(out, w.result);
            }
            break;
        }
        case TaskKind::LargestIsland: {
            const IslandWork w = island_work(std::get<Grid>(inst.payload));
            out.push_back(std::to_string(w.rows));
            out.push_back(std::to_string(w.cols));
            for (std::size_t a : w.areas) out.push_back(std::to_string(a));
            out.push_back(std::to_string(w.best));
            break;
        }
    }
    return out;
}

std::string canonicalize_answer(std::string_view text) {
    std::string s = to_lower(trim(text));
    const std::string prefix = "answer:";
    if (s.rfind(prefix, 0) == 0) s = trim(s.substr(prefix.size()));
    return s;
}

bool verify(const TaskInstance& inst, const std::string& candidate) {
    return canonicalize_answer(candidate) == canonicalize_answer(inst.answer);
}

// -- question parsing -----------------------------------------------------------

namespace {

struct ParsedPayload {
    TaskKind kind;
    TaskPayload payload;
    std::size_t match_end = 0;
};

std::optional<ParsedPayload> find_binary(const std::string& text) {
    static const std::regex re(R"(alternating:\s*([01]+))");
    std::optional<ParsedPayload> best;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), re);
         it != std::sregex_iterator(); ++it) {
        ParsedPayload p{TaskKind::BinaryAlternation, (*it)[1].str(),
                        static_cast<std::size_t>(it->position() + it->length())};
        best = p;
    }
    return best;
}

std::optional<ParsedPayload> find_business(const std::string& text) {
    static const std::regex re(
        R"(business days \(Monday through Friday\) are there from (\d{4}-\d{2}-\d{2}) to (\d{4}-\d{2}-\d{2}))");
    std::optional<ParsedPayload> best;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), re);
         it != std::sregex_iterator(); ++it) {
        auto start = parse_iso_date((*it)[1].str());
        auto end = parse_iso_date((*it)[2].str());
        if (!start || !end) continue;
        ParsedPayload p{TaskKind::CalendarArithmetic,
                        CalendarQuery{BusinessDaysQuery{*start, *end}},
                        static_cast<std::size_t>(it->position() + it->length())};
        best = p;
    }
    return best;
}

std::optional<ParsedPayload> find_offset(const std::string& text) {
    static const std::regex re(
        R"(Starting from (\d{4}-\d{2}-\d{2}), what (is the date|day of the week is it) (\d+) days (later|earlier)\?)");
    std::optional<ParsedPayload> best;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), re);
         it != std::sregex_iterator(); ++it) {
        auto start = parse_iso_date((*it)[1].str());
        if (!start) continue;
        const bool asked_date = (*it)[2].str() == "is the date";
        std::int64_t n = 0;
        try {
            n = std::stoll((*it)[3].str());
        } catch (const std::exception&) {
            continue;
        }
        if ((*it)[4].str() == "earlier") n = -n;
        ParsedPayload p{
            TaskKind::CalendarArithmetic,
            CalendarQuery{DateOffsetQuery{
                *start, n, asked_date ? CalendarAsked::Date : CalendarAsked::Weekday}},
            static_cast<std::size_t>(it->position() + it->length())};
        best = p;
    }
    return best;
}

bool parse_grid_row(const std::string& line, std::vector<int>& row) {
    row.clear();
    bool expect_digit = true;
    for (char c : line) {
        if (expect_digit) {
            if (c != '0' && c != '1') return false;
            row.push_back(c - '0');
            expect_digit = false;
        } else {
            if (c != ' ') return false;
            expect_digit = true;
        }
    }
    return !expect_digit && !row.empty();
}

std::optional<ParsedPayload> find_grid(const std::string& text) {
    const std::string marker = "Grid:\n";
    std::optional<ParsedPayload> best;
    std::size_t pos = text.find(marker);
    while (pos != std::string::npos) {
        const std::size_t body = pos + marker.size();
        Grid grid;
        std::size_t cursor = body;
        while (cursor < text.size()) {
            std::size_t eol = text.find('\n', cursor);
            if (eol == std::string::npos) eol = text.size();
            std::vector<int> row;
            if (!parse_grid_row(text.substr(cursor, eol - cursor), row)) break;
            grid.push_back(std::move(row));
            cursor = eol < text.size() ? eol + 1 : eol;
        }
        if (!grid.empty()) {
            const std::size_t width = grid[0].size();
            bool rectangular = true;
            for (const auto& row : grid)
                if (row.size() != width) rectangular = false;
            if (rectangular)
                best = ParsedPayload{TaskKind::LargestIsland, grid, cursor};
        }
        pos = text.find(marker, pos + 1);
    }
    return best;
}

}  // namespace

std::optional<TaskInstance> parse_question(const std::string& text) {
    std::optional<ParsedPayload> best;
    for (auto candidate :
         {find_binary(text), find_business(text), find_offset(text), find_grid(text)}) {
        if (candidate && (!best || candidate->match_end > best->match_end))
            best = candidate;
    }
    if (!best) return std::nullopt;
    TaskInstance inst;
    inst.kind = best->kind;
    inst.seed = 0;
    inst.question = text;
    inst.payload = best->payload;
    inst.answer = solve_payload(best->kind, best->payload);
    return inst;
}

}  // namespace cotclinic
