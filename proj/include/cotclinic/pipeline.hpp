#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cotclinic/config.hpp"
#include "cotclinic/metrics.hpp"
#include "cotclinic/stats.hpp"

namespace cotclinic {

struct PipelineResult {
    std::vector<MetricRecord> records;
    std::optional<DiagnosisReport> diagnosis;
    std::string hash;            // resolved config hash
    std::size_t scoring_calls = 0;  // backend invocations not served by cache
};

// Organism whose rollouts the run evaluates.
OrganismKind organism_for(const RunConfig& cfg);

// The rollout scored at every checkpoint of a run. Held fixed across
// checkpoints so effect sizes isolate the backend's evolution: the encoded
// organism emits codebook text, the others are scored on the ground-truth
// trace (the internalized rule is content-blind, so it sees the same
// log-probs either way).
ReasoningTrace rollout_trace(const TaskInstance& inst, OrganismKind org);

// One evaluation pass at the configured mix; writes records.jsonl.
PipelineResult run_metrics(const RunConfig& cfg);

// Checkpoint sweep over cfg.checkpoints (simulant backends only); writes
// records.jsonl, diagnosis.json, and curves.csv.
PipelineResult run_diagnose(const RunConfig& cfg);

AccuracyResult run_accuracy(const RunConfig& cfg);

void write_metric_records(const std::string& path,
                          const std::vector<MetricRecord>& records);
std::vector<MetricRecord> read_metric_records(const std::string& path);

// Mean/sd summary of a record file, as pretty JSON.
std::string records_report_json(const std::vector<MetricRecord>& records);

}  // namespace cotclinic
