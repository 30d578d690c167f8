#include "cotclinic/codebook.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "cotclinic/errors.hpp"
#include "cotclinic/util.hpp"
#include "json.hpp"

namespace cotclinic {

namespace {

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

bool is_digit_char(char c) { return c >= '0' && c <= '9'; }

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), is_digit_char);
}

std::vector<std::string> split_on(const std::string& s, const std::string& sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(s.substr(start));
            break;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + sep.size();
    }
    return parts;
}

}  // namespace

Codebook::Codebook(std::string name, std::array<std::string, 10> digit_map,
                   std::vector<std::pair<std::string, std::string>> phrases)
    : name_(std::move(name)),
      digit_map_(std::move(digit_map)),
      phrases_(std::move(phrases)) {
    std::set<std::string> digit_codes;
    for (const auto& code : digit_map_) {
        if (code.empty())
            throw std::invalid_argument("codebook digit code must be non-empty");
        if (!digit_codes.insert(to_lower(code)).second)
            throw std::invalid_argument("codebook digit codes must be distinct");
    }
    std::set<std::string> surfaces;
    for (auto& [surface, code] : phrases_) {
        surface = to_lower(surface);
        code = to_lower(code);
        if (surface.empty() || code.empty())
            throw std::invalid_argument("codebook phrase entries must be non-empty");
        if (!surfaces.insert(surface).second)
            throw std::invalid_argument("duplicate codebook surface: " + surface);
    }
    for (const auto& code : digit_codes)
        if (surfaces.count(code))
            throw std::invalid_argument("digit code collides with a surface: " + code);
    for (const auto& [surface, code] : phrases_)
        if (surfaces.count(code))
            throw std::invalid_argument("code word collides with a surface: " + code);
    std::stable_sort(phrases_.begin(), phrases_.end(),
                     [](const auto& a, const auto& b) {
                         return a.first.size() > b.first.size();
                     });
}

std::string Codebook::to_json() const {
    nlohmann::json j;
    j["name"] = name_;
    nlohmann::json digits = nlohmann::json::object();
    for (int d = 0; d < 10; ++d)
        digits[std::string(1, static_cast<char>('0' + d))] = digit_map_[static_cast<std::size_t>(d)];
    j["digit_map"] = digits;
    nlohmann::json phrases = nlohmann::json::array();
    for (const auto& [surface, code] : phrases_)
        phrases.push_back(nlohmann::json::array({surface, code}));
    j["phrases"] = phrases;
    return j.dump();
}

Codebook Codebook::from_json(const std::string& json_text) {
    const auto j = nlohmann::json::parse(json_text);
    std::array<std::string, 10> digits;
    for (int d = 0; d < 10; ++d)
        digits[static_cast<std::size_t>(d)] =
            j.at("digit_map").at(std::string(1, static_cast<char>('0' + d))).get<std::string>();
    std::vector<std::pair<std::string, std::string>> phrases;
    for (const auto& entry : j.at("phrases"))
        phrases.emplace_back(entry.at(0).get<std::string>(),
                             entry.at(1).get<std::string>());
    return Codebook(j.at("name").get<std::string>(), digits, std::move(phrases));
}

// -- builtin tables -----------------------------------------------------------

const Codebook& builtin_codebook(TaskKind kind) {
    static const Codebook binary(
        "binary_alternation",
        {"ko", "pa", "ri", "mu", "te", "lo", "bi", "su", "ne", "fa"},
        {
            {"zero", "void"},
            {"one", "ace"},
            {"two", "duo"},
            {"three", "third"},
            {"four", "quad"},
            {"five", "palm"},
            {"six", "hex"},
            {"seven", "lucky"},
            {"eight", "octet"},
            {"nine", "last"},
            {"binary", "toggle"},
            {"string", "series"},
            {"position", "location"},
            {"index", "point"},
            {"swap", "flip"},
            {"swaps", "flips"},
            {"alternating", "oscillating"},
            {"pattern", "formula"},
            {"count", "tally"},
            {"minimum", "tiniest"},
        });
    static const Codebook calendar(
        "calendar_arithmetic",
        {"eclipse", "sun", "moon", "star", "orbit", "comet", "meteor", "nebula",
         "galaxy", "quasar"},
        {
            {"zero", "eclipse"},
            {"0s", "eclipses"},
            {"zeros", "eclipses"},
            {"one", "sun"},
            {"1s", "suns"},
            {"ones", "suns"},
            {"two", "moon"},
            {"three", "star"},
            {"four", "orbit"},
            {"five", "comet"},
            {"six", "meteor"},
            {"seven", "nebula"},
            {"eight", "galaxy"},
            {"nine", "quasar"},
            {"ten", "cluster"},
            {"eleven", "double-cluster"},
            {"twelve", "zodiac-circle"},
            {"monday", "sol-day"},
            {"tuesday", "tide-day"},
            {"wednesday", "whirl-day"},
            {"thursday", "thunder-day"},
            {"friday", "flare-day"},
            {"saturday", "saturn-day"},
            {"sunday", "aurora-day"},
            {"weekend", "stellar-rest"},
            {"weekends", "stellar-rests"},
            {"weekday", "orbital-shift"},
            {"weekdays", "orbital-shifts"},
            {"business day", "ledger-orbit"},
            {"business days", "ledger-orbits"},
            {"january", "perigee"},
            {"february", "apogee"},
            {"march", "equinox"},
            {"april", "rainfall"},
            {"may", "bloomphase"},
            {"june", "solstice"},
            {"july", "highsun"},
            {"august", "embersky"},
            {"september", "harvestphase"},
            {"october", "leaffall"},
            {"november", "frostveil"},
            {"december", "snowphase"},
            {"jan", "peri"},
            {"feb", "apo"},
            {"mar", "equi"},
            {"apr", "rain"},
            {"jun", "sol"},
            {"jul", "high"},
            {"aug", "ember"},
            {"sep", "harvest"},
            {"oct", "leaf"},
            {"nov", "frost"},
            {"dec", "snow"},
        });
    static const Codebook island(
        "largest_island",
        {"plankton", "minnow", "salmon", "tuna", "marlin", "shark", "orca",
         "dolphin", "manta", "kraken"},
        {
            {"grid", "sea-chart"},
            {"matrix", "tide-chart"},
            {"board", "reef-chart"},
            {"map", "current-map"},
            {"cell", "tile"},
            {"cells", "tiles"},
            {"value", "depth-mark"},
            {"values", "depth-marks"},
            {"binary", "tidal-binary"},
            {"island", "reef"},
            {"islands", "reefs"},
            {"area", "reef-span"},
            {"areas", "reef-spans"},
            {"land", "coral"},
            {"water", "open-sea"},
            {"sea", "bluewater"},
            {"ocean", "great-blue"},
            {"component", "reef-cluster"},
            {"components", "reef-clusters"},
            {"region", "zone"},
            {"regions", "zones"},
            {"row", "latitude-band"},
            {"rows", "latitude-bands"},
            {"column", "longitude-line"},
            {"columns", "longitude-lines"},
            {"index", "marker"},
            {"indices", "markers"},
            {"position", "coordinate"},
            {"positions", "coordinates"},
            {"neighbor", "adjacent-tile"},
            {"neighbors", "adjacent-tiles"},
            {"adjacent", "side-touching"},
            {"up", "northward"},
            {"down", "southward"},
            {"left", "westward"},
            {"right", "eastward"},
            {"horizontally", "along-latitude"},
            {"vertically", "along-longitude"},
            {"direction", "bearing"},
            {"directions", "bearings"},
            {"four", "compass-four"},
        });
    switch (kind) {
        case TaskKind::BinaryAlternation: return binary;
        case TaskKind::CalendarArithmetic: return calendar;
        case TaskKind::LargestIsland: return island;
    }
    return binary;
}

// -- encode ---------------------------------------------------------------------

namespace {

struct WordToken {
    std::size_t start = 0;
    std::size_t end = 0;
    std::string lower;
};

// A hyphen glues two letters into one word ("sea-chart" stays whole, so code
// words never re-encode); a hyphen next to a digit separates and later doubles.
std::vector<WordToken> word_tokens(const std::string& text) {
    auto glue_hyphen = [&](std::size_t i) {
        if (text[i] != '-' || i == 0 || i + 1 >= text.size()) return false;
        return std::isalpha(static_cast<unsigned char>(text[i - 1])) &&
               std::isalpha(static_cast<unsigned char>(text[i + 1]));
    };
    std::vector<WordToken> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        if (is_word_char(text[i])) {
            WordToken t;
            t.start = i;
            while (i < text.size() && (is_word_char(text[i]) || glue_hyphen(i)))
                ++i;
            t.end = i;
            t.lower = to_lower(std::string_view(text).substr(t.start, t.end - t.start));
            tokens.push_back(std::move(t));
        } else {
            ++i;
        }
    }
    return tokens;
}

// Literal hyphens touching a digit double up so that decode can tell them
// apart from the hyphens that join encoded digits.
void emit_separator(const std::string& text, std::size_t from, std::size_t to,
                    std::string& out) {
    for (std::size_t p = from; p < to; ++p) {
        const char c = text[p];
        if (c == '-') {
            const bool digit_before = p > 0 && is_digit_char(text[p - 1]);
            const bool digit_after = p + 1 < text.size() && is_digit_char(text[p + 1]);
            out += (digit_before || digit_after) ? "--" : "-";
        } else {
            out += c;
        }
    }
}

}  // namespace

std::string encode(const std::string& text, const Codebook& cb) {
    // Surface word sequences, in the stored longest-first order.
    std::vector<std::vector<std::string>> surface_words;
    surface_words.reserve(cb.phrases().size());
    for (const auto& [surface, code] : cb.phrases())
        surface_words.push_back(whitespace_tokens(surface));

    const auto tokens = word_tokens(text);
    std::string out;
    out.reserve(text.size() + text.size() / 2);
    std::size_t cursor = 0;
    std::size_t i = 0;
    while (i < tokens.size()) {
        emit_separator(text, cursor, tokens[i].start, out);
        bool replaced = false;
        for (std::size_t p = 0; p < cb.phrases().size() && !replaced; ++p) {
            const auto& words = surface_words[p];
            if (i + words.size() > tokens.size()) continue;
            bool match = true;
            for (std::size_t k = 0; k < words.size() && match; ++k) {
                if (tokens[i + k].lower != words[k]) match = false;
                if (match && k > 0) {
                    // Multi-word surfaces must sit one plain space apart.
                    const std::size_t gap_start = tokens[i + k - 1].end;
                    const std::size_t gap_end = tokens[i + k].start;
                    if (gap_end - gap_start != 1 || text[gap_start] != ' ')
                        match = false;
                }
            }
            if (match) {
                out += cb.phrases()[p].second;
                cursor = tokens[i + words.size() - 1].end;
                i += words.size();
                replaced = true;
            }
        }
        if (replaced) continue;
        const auto& tok = tokens[i];
        if (all_digits(tok.lower)) {
            for (std::size_t k = 0; k < tok.lower.size(); ++k) {
                if (k > 0) out += '-';
                out += cb.digit_map()[static_cast<std::size_t>(tok.lower[k] - '0')];
            }
        } else {
            out += text.substr(tok.start, tok.end - tok.start);
        }
        cursor = tok.end;
        ++i;
    }
    emit_separator(text, cursor, text.size(), out);
    return out;
}

// -- decode --------------------------------------------------------------------

namespace {

struct ReverseMaps {
    std::map<std::string, char> digit;               // code -> digit char
    std::map<std::string, std::string> phrase;       // code -> unique surface
    std::set<std::string> ambiguous;                 // code with several surfaces
};

ReverseMaps reverse_maps(const Codebook& cb) {
    ReverseMaps rm;
    for (int d = 0; d < 10; ++d)
        rm.digit[to_lower(cb.digit_map()[static_cast<std::size_t>(d)])] =
            static_cast<char>('0' + d);
    for (const auto& [surface, code] : cb.phrases()) {
        if (rm.digit.count(code)) continue;  // digit rule takes priority
        auto it = rm.phrase.find(code);
        if (it == rm.phrase.end()) {
            rm.phrase[code] = surface;
        } else if (it->second != surface) {
            rm.ambiguous.insert(code);
        }
    }
    return rm;
}

bool is_decode_token_char(char c) { return is_word_char(c) || c == '-'; }

// Decode the segments of one hyphen-joined group. Consecutive digit codes
// fuse back into a contiguous numeral; unknown segments pass through with
// their hyphens restored.
std::string decode_group(const std::vector<std::string>& segments,
                         const ReverseMaps& rm) {
    std::string out;
    bool prev_digit = false;
    bool prev_any = false;
    std::size_t j = 0;
    while (j < segments.size()) {
        const std::string lower = to_lower(segments[j]);
        if (auto it = rm.digit.find(lower); it != rm.digit.end()) {
            if (prev_any && !prev_digit) out += '-';
            out += it->second;
            prev_digit = true;
            prev_any = true;
            ++j;
            continue;
        }
        // Longest run of segments that forms a known code phrase.
        bool matched = false;
        for (std::size_t k = segments.size(); k > j && !matched; --k) {
            std::string candidate = to_lower(segments[j]);
            for (std::size_t q = j + 1; q < k; ++q)
                candidate += "-" + to_lower(segments[q]);
            if (rm.ambiguous.count(candidate))
                throw AmbiguousToken("code word '" + candidate +
                                     "' maps to multiple surfaces");
            if (auto it = rm.phrase.find(candidate); it != rm.phrase.end()) {
                if (prev_any) out += '-';
                out += it->second;
                j = k;
                matched = true;
            }
        }
        if (!matched) {
            if (prev_any) out += '-';
            out += segments[j];
            ++j;
        }
        prev_digit = false;
        prev_any = true;
    }
    return out;
}

std::string decode_token(const std::string& token, const ReverseMaps& rm) {
    const std::string lower = to_lower(token);
    if (auto it = rm.digit.find(lower); it != rm.digit.end())
        return std::string(1, it->second);
    if (rm.ambiguous.count(lower))
        throw AmbiguousToken("code word '" + lower + "' maps to multiple surfaces");
    if (auto it = rm.phrase.find(lower); it != rm.phrase.end()) return it->second;
    // "--" marks a literal hyphen between numerals; split groups on it.
    const auto groups = split_on(token, "--");
    if (groups.size() == 1 && token.find('-') == std::string::npos) return token;
    std::vector<std::string> decoded;
    decoded.reserve(groups.size());
    for (const auto& group : groups)
        decoded.push_back(decode_group(split_on(group, "-"), rm));
    return join(decoded, "-");
}

}  // namespace

std::string decode(const std::string& text, const Codebook& cb) {
    const ReverseMaps rm = reverse_maps(cb);
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (is_decode_token_char(text[i])) {
            std::size_t start = i;
            while (i < text.size() && is_decode_token_char(text[i])) ++i;
            out += decode_token(text.substr(start, i - start), rm);
        } else {
            out += text[i];
            ++i;
        }
    }
    return out;
}

}  // namespace cotclinic
