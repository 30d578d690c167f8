#include "cotclinic/interventions.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <map>
#include <random>
#include <set>

#include "cotclinic/errors.hpp"
#include "cotclinic/prompts.hpp"
#include "cotclinic/util.hpp"
#include "json.hpp"

namespace cotclinic {

// -- naive paraphraser ---------------------------------------------------------

namespace {

const std::set<std::string>& stopwords() {
    static const std::set<std::string> words = {
        "the",  "a",     "an",    "is",    "are",   "was",  "were", "be",
        "been", "it",    "its",   "of",    "to",    "in",   "on",   "with",
        "and",  "or",    "so",    "that",  "this",  "these", "those", "no",
        "not",  "nor",   "for",   "as",    "at",    "by",   "from", "each",
        "has",  "have",  "had",   "which", "what",  "when", "while", "then",
        "than", "there", "here",  "plus",  "more",  "most", "only", "also",
        "all",  "any",   "if",    "but",   "into",  "over", "out"};
    return words;
}

const std::map<std::string, std::string>& synonym_table() {
    static const std::map<std::string, std::string> table = {
        {"count", "tally"},        {"counts", "tallies"},
        {"swap", "exchange"},      {"swaps", "exchanges"},
        {"minimum", "smallest"},   {"mismatch", "clash"},
        {"mismatches", "clashes"}, {"mismatched", "clashing"},
        {"string", "sequence"},    {"binary", "bitwise"},
        {"pattern", "layout"},     {"alternating", "zigzag"},
        {"arrangement", "ordering"}, {"possible", "achievable"},
        {"impossible", "unreachable"}, {"feasible", "workable"},
        {"starting", "beginning"}, {"fixes", "repairs"},
        {"pair", "twosome"},       {"answer", "result"},
        {"difference", "gap"},     {"exceeds", "surpasses"},
        {"zero", "nought"},        {"zeros", "noughts"},
        {"one", "unit"},           {"ones", "units"},
        {"business", "commercial"}, {"day", "date"},
        {"days", "dates"},         {"date", "day"},
        {"dates", "days"},         {"week", "hebdomad"},
        {"weeks", "hebdomads"},    {"full", "complete"},
        {"extra", "additional"},   {"total", "overall"},
        {"excluding", "omitting"}, {"checking", "inspecting"},
        {"adds", "brings"},        {"contribute", "supply"},
        {"move", "shift"},         {"forward", "ahead"},
        {"backward", "back"},      {"resulting", "final"},
        {"falls", "lands"},        {"start", "origin"},
        {"grid", "lattice"},       {"row", "strip"},
        {"rows", "strips"},        {"column", "pillar"},
        {"columns", "pillars"},    {"searching", "scanning"},
        {"filled", "occupied"},    {"cell", "square"},
        {"cells", "squares"},      {"connected", "joined"},
        {"island", "landmass"},    {"islands", "landmasses"},
        {"area", "size"},          {"largest", "biggest"},
        {"exists", "appears"},     {"up", "upward"},
        {"down", "downward"},      {"left", "leftward"},
        {"right", "rightward"},    {"apart", "separated"},
        {"two", "both"},           {"end", "final"},
        {"against", "versus"},
    };
    return table;
}

bool token_has_digit(const std::string& tok) {
    return std::any_of(tok.begin(), tok.end(),
                       [](unsigned char c) { return c >= '0' && c <= '9'; });
}

struct ParaToken {
    std::string text;       // word chunk, hyphens included
    std::string separator;  // original whitespace that followed it
};

std::vector<ParaToken> para_tokens(const std::string& text) {
    std::vector<ParaToken> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        if (std::isspace(static_cast<unsigned char>(text[i]))) {
            if (tokens.empty()) {
                // leading whitespace folds into a sentinel empty token
                tokens.push_back({});
            }
            while (i < text.size() &&
                   std::isspace(static_cast<unsigned char>(text[i])))
                tokens.back().separator += text[i++];
        } else {
            ParaToken t;
            while (i < text.size() &&
                   !std::isspace(static_cast<unsigned char>(text[i])))
                t.text += text[i++];
            tokens.push_back(std::move(t));
        }
    }
    return tokens;
}

// Strips leading/trailing punctuation so "swaps." matches the table.
void split_word(const std::string& tok, std::string& head, std::string& core,
                std::string& tail) {
    std::size_t b = 0;
    std::size_t e = tok.size();
    auto is_punct = [](char c) {
        return !(std::isalnum(static_cast<unsigned char>(c)) || c == '-' ||
                 c == '\'');
    };
    while (b < e && is_punct(tok[b])) ++b;
    while (e > b && is_punct(tok[e - 1])) --e;
    head = tok.substr(0, b);
    core = tok.substr(b, e - b);
    tail = tok.substr(e);
}

std::string reorder_clauses(const std::string& text) {
    // Swaps the halves of single-comma lines; token multiset is unchanged.
    std::vector<std::string> lines = split_lines(text);
    for (auto& line : lines) {
        const std::size_t first = line.find(", ");
        if (first == std::string::npos) continue;
        if (line.find(", ", first + 1) != std::string::npos) continue;
        std::string left = line.substr(0, first);
        std::string right = line.substr(first + 2);
        bool trailing_period = false;
        if (!right.empty() && right.back() == '.') {
            right.pop_back();
            trailing_period = true;
        }
        line = right + ", " + left + (trailing_period ? "." : "");
    }
    return join(lines, "\n");
}

}  // namespace

std::string naive_paraphrase(const std::string& text, double strength) {
    if (strength < 0.0 || strength > 1.0)
        throw std::invalid_argument("paraphrase strength must lie in [0, 1]");
    if (strength == 0.0 || text.empty()) return text;

    auto tokens = para_tokens(text);
    const auto& table = synonym_table();

    // Occurrences with a synonym entry; a strength-sized share of them flips.
    std::vector<std::size_t> known;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        std::string head, core, tail;
        split_word(tokens[i].text, head, core, tail);
        if (core.empty() || token_has_digit(core)) continue;
        if (table.count(to_lower(core))) known.push_back(i);
    }
    std::vector<bool> flip(tokens.size(), false);
    if (!known.empty()) {
        const auto need = static_cast<std::size_t>(std::ceil(
            strength * static_cast<double>(known.size()) - 1e-12));
        std::mt19937_64 rng(mix_seed(fnv1a64(text), 0x9A7A));
        for (std::size_t i = known.size(); i > 1; --i)
            std::swap(known[i - 1], known[rng_below(rng, i)]);
        for (std::size_t i = 0; i < std::min(need, known.size()); ++i)
            flip[known[i]] = true;
    }

    static const char* neutral[4] = {"item", "thing", "note", "part"};
    std::mt19937_64 neutral_rng(mix_seed(fnv1a64(text), 0x0E07));
    std::size_t neutral_idx = rng_below(neutral_rng, 4);

    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        std::string head, core, tail;
        split_word(tokens[i].text, head, core, tail);
        std::string replacement = core;
        const std::string lower = to_lower(core);
        if (!core.empty() && !token_has_digit(core)) {
            if (auto it = table.find(lower); it != table.end()) {
                if (flip[i]) replacement = it->second;
            } else if (!stopwords().count(lower)) {
                // Vocabulary miss: the naive rewriter cannot keep a word it
                // does not know, so coined tokens flatten out.
                replacement = neutral[neutral_idx];
                neutral_idx = (neutral_idx + 1) % 4;
            }
        }
        out += head + replacement + tail + tokens[i].separator;
    }
    if (strength >= 0.75) out = reorder_clauses(out);
    return out;
}

ParaphraserChain naive_only_chain() {
    ParaphraserChain chain;
    chain.providers.push_back(std::make_shared<NaiveParaphraser>());
    return chain;
}

// -- paraphrase cache -------------------------------------------------------------

namespace {
const char* kParaphraseFile = "paraphrases.jsonl";
}

ParaphraseCache::ParaphraseCache(std::string dir) : dir_(std::move(dir)) {
    if (dir_.empty()) return;
    const auto path = std::filesystem::path(dir_) / kParaphraseFile;
    if (!std::filesystem::exists(path)) return;
    for (const auto& line : split_lines(read_text_file(path.string()))) {
        if (trim(line).empty()) continue;
        const auto j = nlohmann::json::parse(line);
        entries_[j.at("key").get<std::string>()] = j.at("output").get<std::string>();
    }
}

std::string ParaphraseCache::key_of(const std::string& provider_id,
                                    double strength, const std::string& text) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", strength);
    return fnv1a64_hex(provider_id + "|" + buf + "|" + fnv1a64_hex(text) + "|" +
                       std::to_string(text.size()));
}

std::optional<std::string> ParaphraseCache::lookup(const std::string& provider_id,
                                                   double strength,
                                                   const std::string& text) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = entries_.find(key_of(provider_id, strength, text));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void ParaphraseCache::store(const std::string& provider_id, double strength,
                            const std::string& text, const std::string& output) {
    std::lock_guard<std::mutex> lock(mutex_);
    const std::string key = key_of(provider_id, strength, text);
    if (!entries_.emplace(key, output).second) return;
    if (dir_.empty()) return;
    nlohmann::json j;
    j["key"] = key;
    j["provider"] = provider_id;
    j["output"] = output;
    append_text_file((std::filesystem::path(dir_) / kParaphraseFile).string(),
                     j.dump() + "\n");
}

// -- interventions -------------------------------------------------------------------

PromptBundle apply_nothink(const PromptBundle& bundle) {
    const std::string suffix = nothink_suffix();
    if (bundle.cot.empty() && bundle.question.size() >= suffix.size() &&
        bundle.question.compare(bundle.question.size() - suffix.size(),
                                suffix.size(), suffix) == 0)
        return bundle;
    PromptBundle out = bundle;
    out.cot.clear();
    out.question += "\n\n";
    if (bundle.profile == "posthoc")
        out.question += posthoc_answer_sentence(bundle.answer) + " ";
    out.question += suffix;
    return out;
}

ParaphraseOutcome apply_paraphrase(const PromptBundle& bundle, double strength,
                                   ParaphraserChain& chain,
                                   ParaphraseCache* cache) {
    if (bundle.cot.empty())
        throw MissingTrace("paraphrase intervention requires a non-empty CoT");
    if (chain.providers.empty())
        throw ParaphraserUnavailable("no paraphrase providers configured");
    for (std::size_t i = 0; i < chain.providers.size(); ++i) {
        auto& provider = *chain.providers[i];
        std::string output;
        if (cache) {
            if (auto hit = cache->lookup(provider.id(), strength, bundle.cot)) {
                output = *hit;
            }
        }
        if (output.empty()) {
            try {
                output = provider.paraphrase(bundle.cot, strength);
            } catch (const ParaphraserUnavailable&) {
                if (i + 1 == chain.providers.size()) throw;
                continue;
            }
            if (cache) cache->store(provider.id(), strength, bundle.cot, output);
        }
        ParaphraseOutcome outcome;
        outcome.bundle = bundle;
        outcome.bundle.cot = output;
        outcome.provider_used = provider.id();
        outcome.fell_back = i > 0;
        return outcome;
    }
    throw ParaphraserUnavailable("all paraphrase providers failed");
}

std::string substitution_filler_text(const TaskInstance& inst,
                                     std::size_t target_tokens,
                                     std::optional<TaskKind> filler_override) {
    if (target_tokens == 0) return {};
    const TaskKind filler_kind =
        filler_override.value_or(filler_kind_for(inst.kind));
    const std::vector<std::string> own = checkpoint_numerals(inst);
    constexpr std::size_t kMaxAttempts = 10000;
    for (std::size_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
        const TaskInstance filler = generate_instance(
            filler_kind, mix_seed(inst.seed ^ 0x5D8F111E7ULL, attempt));
        const ReasoningTrace trace = synthesize_trace(filler);
        if (!multiset_disjoint(extract_digit_runs(trace.full_text), own))
            continue;
        // Repeat trailing steps until long enough, then trim to the exact
        // word count.
        std::vector<std::string> words = whitespace_tokens(trace.full_text);
        if (words.empty()) continue;
        const std::size_t tail_window = std::min<std::size_t>(3, trace.steps.size());
        std::size_t tail_pos = 0;
        while (words.size() < target_tokens) {
            const auto& step =
                trace.steps[trace.steps.size() - tail_window + tail_pos];
            for (const auto& w : whitespace_tokens(step)) words.push_back(w);
            tail_pos = (tail_pos + 1) % tail_window;
        }
        words.resize(target_tokens);
        return join(words, " ");
    }
    throw FillerGenerationFailed(
        "no cross-domain filler with disjoint numerals found for seed " +
        std::to_string(inst.seed));
}

PromptBundle apply_substitution(const PromptBundle& bundle, const TaskInstance& inst,
                                std::optional<TaskKind> filler_override) {
    PromptBundle out = bundle;
    const TaskKind filler_kind =
        filler_override.value_or(filler_kind_for(inst.kind));
    out.cot = substitution_filler_text(inst, whitespace_token_count(bundle.cot),
                                       filler_override);
    out.question += "\n\n" + internalized_instruction(filler_kind);
    return out;
}

PromptBundle apply_intervention(const PromptBundle& bundle, const TaskInstance& inst,
                                const InterventionKind& kind,
                                ParaphraserChain& chain, ParaphraseCache* cache) {
    if (std::holds_alternative<RemoveCot>(kind)) return apply_nothink(bundle);
    if (const auto* p = std::get_if<Paraphrase>(&kind))
        return apply_paraphrase(bundle, p->strength, chain, cache).bundle;
    const auto& sub = std::get<Substitute>(kind);
    return apply_substitution(bundle, inst, sub.filler_kind);
}

}  // namespace cotclinic
