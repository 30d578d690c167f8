#pragma once

#include <optional>
#include <string>

#include "cotclinic/backend.hpp"
#include "cotclinic/datasets.hpp"
#include "cotclinic/interventions.hpp"
#include "cotclinic/tasks.hpp"

namespace cotclinic {

// Each metric compares the original answer log-probability with one
// intervened counterpart and lands strictly inside (-1, 1). Inputs must be
// clamped (<= -epsilon); near-cancelling denominators yield 0.

double necessity(double lp_orig, double lp_nec);
double paraphrasability(double lp_orig, double lp_para);
double substantivity(double lp_orig, double lp_sub);

struct MetricRecord {
    std::string question_id;
    double lp_orig = 0.0;
    double lp_nec = 0.0;
    double lp_para = 0.0;
    double lp_sub = 0.0;
    double nec = 0.0;
    double para = 0.0;
    double sub = 0.0;
    // metadata
    std::string profile;
    std::string paraphraser_id;
    bool paraphraser_fell_back = false;
    double strength = 0.5;
    std::string backend_id;
    std::string config_hash;
    std::string checkpoint_id;
    std::string error;  // non-empty when this sample failed
};

std::string metric_record_to_json(const MetricRecord& r);
MetricRecord metric_record_from_json(const std::string& line);

struct EvalParams {
    double strength = 0.5;
    std::string config_hash;
    std::string checkpoint_id;
};

// Builds the original bundle for an organism's rollout: profile-specific
// question additions baked into the user text.
PromptBundle build_bundle(const TaskInstance& inst, const ReasoningTrace& trace,
                          OrganismKind org);

// Scores the original and the three intervened bundles, then fills in the
// metric triple.
MetricRecord evaluate_sample(const TaskInstance& inst, const ReasoningTrace& trace,
                             OrganismKind org, ScoringBackend& backend,
                             ParaphraserChain& chain, ParaphraseCache* cache,
                             const EvalParams& params);

}  // namespace cotclinic
