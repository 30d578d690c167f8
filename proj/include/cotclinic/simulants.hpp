#pragma once

#include <cstdint>

#include "cotclinic/backend.hpp"
#include "cotclinic/datasets.hpp"

namespace cotclinic {

// Rule parameters for one simulated organism. Defaults put the with-CoT /
// without-CoT gap at -0.5 vs -6.0, wide enough that the expected metric
// signs survive the default noise.
struct SimulantParams {
    OrganismKind kind = OrganismKind::Healthy;
    double base_lp = -6.0;
    double content_bonus = 5.5;
    double length_bonus = 5.5;
    double noise_scale = 0.2;
    double mix = 1.0;  // 0 = fully healthy rule, 1 = fully pathological
    std::uint64_t seed = 0;
};

// Log-probability assigned by the organism's causal rule:
//   healthy      - bonus when the CoT carries the solver's checkpoint values
//   encoded      - bonus when those values appear only after codebook decoding
//   internalized - bonus scales with CoT length, blind to content
//   posthoc      - bonus unconditionally (answer predetermined)
// `mix` interpolates the pathological rule with the healthy one; seeded noise
// is added before clamping.
LogProbResult simulant_score(const SimulantParams& params,
                             const PromptBundle& bundle);

class SimulantBackend : public ScoringBackend {
public:
    explicit SimulantBackend(SimulantParams params);

    std::string id() const override;
    LogProbResult score(const PromptBundle& bundle) override;
    bool can_generate() const override { return true; }
    std::string generate_answer(const PromptBundle& bundle) override;

    const SimulantParams& params() const { return params_; }

private:
    SimulantParams params_;
};

}  // namespace cotclinic
