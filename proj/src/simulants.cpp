#include "cotclinic/simulants.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "cotclinic/codebook.hpp"
#include "cotclinic/errors.hpp"
#include "cotclinic/tasks.hpp"
#include "cotclinic/util.hpp"

namespace cotclinic {

namespace {

void validate_params(const SimulantParams& p) {
    if (p.base_lp >= 0.0)
        throw std::invalid_argument("simulant base_lp must be negative");
    if (p.content_bonus < 0.0 || p.length_bonus < 0.0)
        throw std::invalid_argument("simulant bonuses must be non-negative");
    if (p.noise_scale < 0.0)
        throw std::invalid_argument("simulant noise_scale must be non-negative");
    if (p.mix < 0.0 || p.mix > 1.0)
        throw std::invalid_argument("simulant mix must lie in [0, 1]");
}

std::string param_fingerprint(const SimulantParams& p) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%d|%.17g|%.17g|%.17g|%.17g|%.17g|%llu",
                  static_cast<int>(p.kind), p.base_lp, p.content_bonus,
                  p.length_bonus, p.noise_scale, p.mix,
                  static_cast<unsigned long long>(p.seed));
    return fnv1a64_hex(buf);
}

bool contains_checkpoints(const std::string& text,
                          const std::vector<std::string>& checkpoints) {
    return multiset_contains(extract_digit_runs(text), checkpoints);
}

struct QuestionFacts {
    bool parsed = false;
    TaskKind kind = TaskKind::BinaryAlternation;
    std::vector<std::string> checkpoints;
    std::size_t expected_tokens = 0;
};

QuestionFacts analyze_question(const std::string& question) {
    QuestionFacts f;
    const auto inst = parse_question(question);
    if (!inst) return f;
    f.parsed = true;
    f.kind = inst->kind;
    f.checkpoints = checkpoint_numerals(*inst);
    f.expected_tokens = synthesize_trace(*inst).token_estimate;
    return f;
}

// Indicator-style bonus for one rule; `facts` may be unparsed, in which case
// nothing scores.
double rule_bonus(OrganismKind rule, const SimulantParams& p,
                  const QuestionFacts& facts, const std::string& cot) {
    if (rule == OrganismKind::PostHoc) return p.content_bonus;
    if (!facts.parsed) return 0.0;
    switch (rule) {
        case OrganismKind::Healthy:
            return contains_checkpoints(cot, facts.checkpoints) ? p.content_bonus
                                                                : 0.0;
        case OrganismKind::Encoded: {
            if (contains_checkpoints(cot, facts.checkpoints)) return 0.0;
            std::string decoded;
            try {
                decoded = decode(cot, builtin_codebook(facts.kind));
            } catch (const ClinicError&) {
                return 0.0;  // mangled code words cannot carry the values
            }
            return contains_checkpoints(decoded, facts.checkpoints)
                       ? p.content_bonus
                       : 0.0;
        }
        case OrganismKind::Internalized: {
            if (facts.expected_tokens == 0) return 0.0;
            const double ratio =
                static_cast<double>(whitespace_token_count(cot)) /
                static_cast<double>(facts.expected_tokens);
            return p.length_bonus * std::min(1.0, ratio);
        }
        case OrganismKind::PostHoc: break;
    }
    return 0.0;
}

double seeded_noise(const SimulantParams& p, const PromptBundle& bundle) {
    if (p.noise_scale == 0.0) return 0.0;
    // Content-keyed so identical bundles always draw the same noise, across
    // checkpoints and runs alike.
    const std::string blob = bundle.system + "\x1f" + bundle.question + "\x1f" +
                             bundle.cot + "\x1f" + bundle.answer + "\x1f" +
                             bundle.profile;
    std::mt19937_64 rng(mix_seed(p.seed, fnv1a64(blob)));
    return p.noise_scale * rng_gaussian(rng);
}

LogProbResult result_for(double lp, const PromptBundle& bundle,
                         const std::string& backend_id) {
    LogProbResult r;
    r.backend_id = backend_id;
    const auto tokens = whitespace_tokens(bundle.answer);
    const std::size_t n = std::max<std::size_t>(1, tokens.size());
    const double per = lp / static_cast<double>(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::string tok = i < tokens.size() ? tokens[i] : "";
        const double clamped = clamp_logprob(per);
        r.per_token.emplace_back(tok, clamped);
        sum += clamped;
    }
    r.token_count = n;
    r.sum_logprob = sum;
    r.mean_logprob = sum / static_cast<double>(n);
    return r;
}

std::string simulant_id(const SimulantParams& p) {
    return "simulant:" + organism_name(p.kind) + ":" + param_fingerprint(p);
}

}  // namespace

LogProbResult simulant_score(const SimulantParams& params,
                             const PromptBundle& bundle) {
    validate_params(params);
    const QuestionFacts facts = analyze_question(bundle.question);
    const double healthy =
        rule_bonus(OrganismKind::Healthy, params, facts, bundle.cot);
    const double pathological =
        rule_bonus(params.kind, params, facts, bundle.cot);
    const double bonus =
        (1.0 - params.mix) * healthy + params.mix * pathological;
    const double lp =
        clamp_logprob(params.base_lp + bonus + seeded_noise(params, bundle));
    return result_for(lp, bundle, simulant_id(params));
}

SimulantBackend::SimulantBackend(SimulantParams params) : params_(params) {
    validate_params(params_);
}

std::string SimulantBackend::id() const { return simulant_id(params_); }

LogProbResult SimulantBackend::score(const PromptBundle& bundle) {
    return simulant_score(params_, bundle);
}

std::string SimulantBackend::generate_answer(const PromptBundle& bundle) {
    const auto inst = parse_question(bundle.question);
    if (!inst)
        throw BackendCannotGenerate("simulant cannot parse the question payload");
    PromptBundle probe = bundle;
    probe.answer = inst->answer;
    const double lp = simulant_score(params_, probe).sum_logprob;
    // Confident above the midpoint of the no-CoT / full-bonus gap.
    const double threshold =
        params_.base_lp + 0.5 * std::max(params_.content_bonus, params_.length_bonus);
    if (lp >= threshold) return inst->answer;
    return canonicalize_answer(inst->answer) == "0" ? "1" : "0";
}

}  // namespace cotclinic
