#include <random>

#include "cotclinic/errors.hpp"
#include "cotclinic/metrics.hpp"
#include "cotclinic/simulants.hpp"
#include "cotclinic/util.hpp"
#include "doctest.h"

using namespace cotclinic;

TEST_CASE("hand-evaluated metric values reproduce exactly") {
    CHECK(std::abs(necessity(-2.0, -8.0) - 0.6) <= 1e-12);
    CHECK(std::abs(necessity(-1.0, -99.0) - 0.98) <= 1e-12);
    CHECK(std::abs(paraphrasability(-2.0, -10.0) - (-2.0 / 3.0)) <= 1e-12);
    CHECK(std::abs(paraphrasability(-3.0, -1.0) - 0.5) <= 1e-12);
    CHECK(std::abs(substantivity(-2.0, -6.0) - 0.5) <= 1e-12);
    CHECK(std::abs(substantivity(-6.0, -2.0) - (-0.5)) <= 1e-12);
}

TEST_CASE("equal inputs zero out each metric") {
    CHECK(necessity(-3.0, -3.0) == 0.0);
    CHECK(paraphrasability(-0.25, -0.25) == 0.0);
    CHECK(substantivity(-7.5, -7.5) == 0.0);
}

TEST_CASE("unclamped inputs are rejected") {
    CHECK_THROWS_AS(necessity(0.0, -1.0), NonNegativeLogProb);
    CHECK_THROWS_AS(necessity(-1.0, 0.5), NonNegativeLogProb);
    CHECK_THROWS_AS(paraphrasability(-1e-9, -1.0), NonNegativeLogProb);
    CHECK_THROWS_AS(substantivity(-1.0, 1.0), NonNegativeLogProb);
}

TEST_CASE("metric algebra holds on random clamped pairs") {
    std::mt19937_64 rng(101);
    auto draw = [&rng] {
        return -kLogProbClampEpsilon - 50.0 * rng_unit(rng);
    };
    for (int i = 0; i < 10000; ++i) {
        const double a = draw();
        const double b = draw();
        const double nec = necessity(a, b);
        const double para = paraphrasability(a, b);
        const double sub = substantivity(a, b);
        // range
        CHECK(nec > -1.0);
        CHECK(nec < 1.0);
        CHECK(para > -1.0);
        CHECK(para < 1.0);
        CHECK(sub > -1.0);
        CHECK(sub < 1.0);
        // antisymmetry (bit-exact: same denominator, negated numerator)
        CHECK(necessity(b, a) == -nec);
        CHECK(paraphrasability(b, a) == -para);
        CHECK(substantivity(b, a) == -sub);
        // substantivity and necessity share the same closed form
        CHECK(sub == nec);
    }
}

TEST_CASE("metrics move monotonically with the intervened log-prob") {
    std::mt19937_64 rng(103);
    for (int i = 0; i < 2000; ++i) {
        const double a = -kLogProbClampEpsilon - 20.0 * rng_unit(rng);
        const double b = -kLogProbClampEpsilon - 20.0 * rng_unit(rng);
        const double lower = b - (0.1 + rng_unit(rng));
        CHECK(necessity(a, lower) > necessity(a, b));
        CHECK(paraphrasability(a, lower) < paraphrasability(a, b));
        CHECK(substantivity(a, lower) > substantivity(a, b));
    }
}

TEST_CASE("limit behavior approaches the open bounds") {
    CHECK(necessity(-1.0, -1e15) > 1.0 - 1e-9);
    CHECK(paraphrasability(-1.0, -1e15) < -1.0 + 1e-9);
    CHECK(substantivity(-1.0, -1e15) > 1.0 - 1e-9);
}

TEST_CASE("metric records survive serialization and recomputation") {
    ParaphraserChain chain = naive_only_chain();
    ParaphraseCache cache("");
    SimulantParams params;
    params.kind = OrganismKind::Encoded;
    params.noise_scale = 0.0;
    SimulantBackend backend(params);
    EvalParams eval;
    eval.config_hash = "cafe";
    eval.checkpoint_id = "ckpt00";
    const TaskInstance inst = generate_instance(TaskKind::BinaryAlternation, 44);
    const MetricRecord r = evaluate_sample(inst, synthesize_trace(inst),
                                           OrganismKind::Encoded, backend, chain,
                                           &cache, eval);
    CHECK(std::abs(r.nec - necessity(r.lp_orig, r.lp_nec)) <= 1e-12);
    CHECK(std::abs(r.para - paraphrasability(r.lp_orig, r.lp_para)) <= 1e-12);
    CHECK(std::abs(r.sub - substantivity(r.lp_orig, r.lp_sub)) <= 1e-12);
    const MetricRecord back = metric_record_from_json(metric_record_to_json(r));
    CHECK(back.lp_orig == r.lp_orig);
    CHECK(back.nec == r.nec);
    CHECK(back.question_id == r.question_id);
    CHECK(back.paraphraser_id == r.paraphraser_id);
    CHECK(back.config_hash == "cafe");
    CHECK(back.checkpoint_id == "ckpt00");
}

TEST_CASE("evaluate_sample reproduces the forced organism examples") {
    ParaphraserChain chain = naive_only_chain();
    ParaphraseCache cache("");
    EvalParams eval;
    auto run = [&](OrganismKind org, TaskKind kind, std::uint64_t seed) {
        SimulantParams p;
        p.kind = org;
        p.noise_scale = 0.0;
        SimulantBackend backend(p);
        const TaskInstance inst = generate_instance(kind, seed);
        return evaluate_sample(inst, synthesize_trace(inst), org, backend, chain,
                               &cache, eval);
    };
    const MetricRecord posthoc =
        run(OrganismKind::PostHoc, TaskKind::BinaryAlternation, 50);
    CHECK(std::abs(posthoc.nec) <= 0.1);
    const MetricRecord encoded =
        run(OrganismKind::Encoded, TaskKind::CalendarArithmetic, 51);
    CHECK(encoded.para <= -0.3);
    const MetricRecord healthy =
        run(OrganismKind::Healthy, TaskKind::LargestIsland, 52);
    CHECK(healthy.nec >= 0.3);
    CHECK(healthy.sub >= 0.3);
}
