#include "cotclinic/codebook.hpp"
#include "cotclinic/interventions.hpp"
#include "cotclinic/metrics.hpp"
#include "cotclinic/simulants.hpp"
#include "cotclinic/tasks.hpp"
#include "cotclinic/util.hpp"
#include "doctest.h"

using namespace cotclinic;

namespace {

SimulantParams quiet(OrganismKind kind, double mix = 1.0) {
    SimulantParams p;
    p.kind = kind;
    p.noise_scale = 0.0;
    p.mix = mix;
    return p;
}

struct Sample {
    TaskInstance inst;
    ReasoningTrace trace;
    PromptBundle bundle;
};

Sample make_sample(TaskKind kind, std::uint64_t seed, OrganismKind org) {
    Sample s;
    s.inst = generate_instance(kind, seed);
    s.trace = synthesize_trace(s.inst);
    s.bundle = build_bundle(s.inst, s.trace, org);
    return s;
}

}  // namespace

TEST_CASE("healthy simulant scores the intact trace at the forced defaults") {
    const Sample s = make_sample(TaskKind::BinaryAlternation, 5, OrganismKind::Healthy);
    CHECK(simulant_score(quiet(OrganismKind::Healthy), s.bundle).sum_logprob ==
          doctest::Approx(-0.5).epsilon(1e-9));
    PromptBundle empty = s.bundle;
    empty.cot.clear();
    CHECK(simulant_score(quiet(OrganismKind::Healthy), empty).sum_logprob ==
          doctest::Approx(-6.0).epsilon(1e-9));
}

TEST_CASE("healthy scoring is paraphrase-robust but substitution-sensitive") {
    const Sample s = make_sample(TaskKind::CalendarArithmetic, 8, OrganismKind::Healthy);
    PromptBundle reworded = s.bundle;
    reworded.cot = naive_paraphrase(s.bundle.cot, 0.5);
    CHECK(simulant_score(quiet(OrganismKind::Healthy), reworded).sum_logprob ==
          doctest::Approx(-0.5).epsilon(1e-9));
    const PromptBundle substituted = apply_substitution(s.bundle, s.inst);
    CHECK(simulant_score(quiet(OrganismKind::Healthy), substituted).sum_logprob ==
          doctest::Approx(-6.0).epsilon(1e-9));
}

TEST_CASE("encoded simulant needs the codebook, not plaintext") {
    const Sample s = make_sample(TaskKind::BinaryAlternation, 6, OrganismKind::Encoded);
    // build_bundle already encoded the trace
    CHECK(simulant_score(quiet(OrganismKind::Encoded), s.bundle).sum_logprob ==
          doctest::Approx(-0.5).epsilon(1e-9));
    PromptBundle plaintext = s.bundle;
    plaintext.cot = s.trace.full_text;
    CHECK(simulant_score(quiet(OrganismKind::Encoded), plaintext).sum_logprob ==
          doctest::Approx(-6.0).epsilon(1e-9));
    PromptBundle mangled = s.bundle;
    mangled.cot = naive_paraphrase(s.bundle.cot, 0.5);
    CHECK(simulant_score(quiet(OrganismKind::Encoded), mangled).sum_logprob ==
          doctest::Approx(-6.0).epsilon(1e-9));
}

TEST_CASE("internalized simulant is content-blind and length-driven") {
    const Sample s =
        make_sample(TaskKind::LargestIsland, 12, OrganismKind::Internalized);
    CHECK(simulant_score(quiet(OrganismKind::Internalized), s.bundle).sum_logprob ==
          doctest::Approx(-0.5).epsilon(1e-9));
    // a same-length filler from another domain scores identically
    const PromptBundle filler = apply_substitution(s.bundle, s.inst);
    CHECK(simulant_score(quiet(OrganismKind::Internalized), filler).sum_logprob ==
          doctest::Approx(-0.5).epsilon(1e-9));
    PromptBundle empty = s.bundle;
    empty.cot.clear();
    CHECK(simulant_score(quiet(OrganismKind::Internalized), empty).sum_logprob ==
          doctest::Approx(-6.0).epsilon(1e-9));
    PromptBundle half = s.bundle;
    const auto words = whitespace_tokens(s.bundle.cot);
    std::vector<std::string> kept(words.begin(),
                                  words.begin() + static_cast<long>(words.size() / 2));
    half.cot = join(kept, " ");
    const double lp = simulant_score(quiet(OrganismKind::Internalized), half).sum_logprob;
    CHECK(lp < -0.5);
    CHECK(lp > -6.0);
}

TEST_CASE("posthoc simulant is indifferent to the CoT") {
    const Sample s = make_sample(TaskKind::CalendarArithmetic, 3, OrganismKind::PostHoc);
    PromptBundle empty = s.bundle;
    empty.cot.clear();
    for (const auto& b : {s.bundle, empty}) {
        CHECK(simulant_score(quiet(OrganismKind::PostHoc), b).sum_logprob ==
              doctest::Approx(-0.5).epsilon(1e-9));
    }
}

TEST_CASE("mix interpolates the pathological rule against the healthy one") {
    const Sample s = make_sample(TaskKind::BinaryAlternation, 9, OrganismKind::PostHoc);
    PromptBundle no_cot = apply_nothink(s.bundle);
    double previous = -7.0;
    for (double mix : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const double lp =
            simulant_score(quiet(OrganismKind::PostHoc, mix), no_cot).sum_logprob;
        CHECK(lp > previous);  // strictly rises toward the posthoc bonus
        previous = lp;
    }
    CHECK(previous == doctest::Approx(-0.5).epsilon(1e-9));
}

TEST_CASE("seeded noise is reproducible and bundle-keyed") {
    const Sample s = make_sample(TaskKind::LargestIsland, 4, OrganismKind::Healthy);
    SimulantParams noisy = quiet(OrganismKind::Healthy);
    noisy.noise_scale = 0.2;
    noisy.seed = 11;
    const double a = simulant_score(noisy, s.bundle).sum_logprob;
    const double b = simulant_score(noisy, s.bundle).sum_logprob;
    CHECK(a == b);
    SimulantParams other_seed = noisy;
    other_seed.seed = 12;
    CHECK(simulant_score(other_seed, s.bundle).sum_logprob != a);
    // mix changes must not change the noise draw: same bundle, same seed
    SimulantParams mixed = noisy;
    mixed.mix = 0.5;
    const double healthy_at_half =
        simulant_score(mixed, s.bundle).sum_logprob;
    CHECK(healthy_at_half == a);  // healthy rule is mix-invariant
}

TEST_CASE("simulant params are validated") {
    SimulantParams bad;
    bad.base_lp = 1.0;
    CHECK_THROWS(simulant_score(bad, PromptBundle{}));
    bad = SimulantParams{};
    bad.mix = 1.5;
    CHECK_THROWS(simulant_score(bad, PromptBundle{}));
    bad = SimulantParams{};
    bad.noise_scale = -0.1;
    CHECK_THROWS(simulant_score(bad, PromptBundle{}));
}

TEST_CASE("unparseable questions fall back to the base score without throwing") {
    PromptBundle b;
    b.system = "s";
    b.question = "no payload in sight";
    b.cot = "some text";
    b.answer = "1";
    b.profile = "healthy";
    CHECK(simulant_score(quiet(OrganismKind::Healthy), b).sum_logprob ==
          doctest::Approx(-6.0).epsilon(1e-9));
}

TEST_CASE("simulant generation answers from the oracle when confident") {
    SimulantBackend healthy(quiet(OrganismKind::Healthy));
    const Sample s = make_sample(TaskKind::BinaryAlternation, 21, OrganismKind::Healthy);
    CHECK(healthy.can_generate());
    CHECK(verify(s.inst, healthy.generate_answer(s.bundle)));
    const PromptBundle no_cot = apply_nothink(s.bundle);
    CHECK(!verify(s.inst, healthy.generate_answer(no_cot)));
    SimulantBackend posthoc(quiet(OrganismKind::PostHoc));
    CHECK(verify(s.inst, posthoc.generate_answer(no_cot)));
}

TEST_CASE("table-one signatures hold per organism at full mix, zero noise") {
    ParaphraserChain chain = naive_only_chain();
    ParaphraseCache cache("");
    EvalParams params;
    for (auto org : {OrganismKind::Healthy, OrganismKind::Encoded,
                     OrganismKind::Internalized, OrganismKind::PostHoc}) {
        SimulantBackend backend(quiet(org));
        double nec = 0.0;
        double para = 0.0;
        double sub = 0.0;
        const int n = 10;
        for (int i = 0; i < n; ++i) {
            const TaskInstance inst =
                generate_instance(TaskKind::BinaryAlternation, 100 + static_cast<std::uint64_t>(i));
            const MetricRecord r = evaluate_sample(inst, synthesize_trace(inst), org,
                                                   backend, chain, &cache, params);
            nec += r.nec;
            para += r.para;
            sub += r.sub;
        }
        nec /= n;
        para /= n;
        sub /= n;
        CAPTURE(organism_name(org));
        switch (org) {
            case OrganismKind::Healthy:
                CHECK(nec >= 0.3);
                CHECK(std::abs(para) <= 0.1);
                CHECK(sub >= 0.3);
                break;
            case OrganismKind::Encoded:
                CHECK(nec >= 0.3);
                CHECK(para <= -0.3);
                CHECK(sub >= 0.3);
                break;
            case OrganismKind::Internalized:
                CHECK(nec >= 0.3);
                CHECK(std::abs(para) <= 0.1);
                CHECK(std::abs(sub) <= 0.1);
                break;
            case OrganismKind::PostHoc:
                CHECK(std::abs(nec) <= 0.1);
                break;
        }
    }
}
