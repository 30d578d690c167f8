#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cotclinic/datasets.hpp"
#include "cotclinic/tasks.hpp"

namespace cotclinic {

// Resolved run configuration. A run is reproducible from this struct alone;
// every output file embeds its hash.
struct RunConfig {
    std::string backend = "simulant:healthy";  // or "remote"
    TaskKind task = TaskKind::BinaryAlternation;
    // Organism under evaluation for remote backends; simulant specs imply theirs.
    std::string organism = "healthy";
    std::size_t n = 50;
    std::uint64_t seed = 1;
    std::size_t rollouts = 1;  // scoring repeats per question
    std::string paraphrase_provider = "naive";
    double paraphrase_strength = 0.5;
    std::size_t parallelism = 1;
    std::string out_dir = "runs/latest";
    std::string cache_dir;  // defaults to "<out_dir>/cache" when empty

    // simulant knobs
    double sim_base_lp = -6.0;
    double sim_content_bonus = 5.5;
    double sim_length_bonus = 5.5;
    double sim_noise = 0.2;
    double sim_mix = 1.0;

    // diagnosis
    std::vector<double> checkpoints = {0.0, 0.25, 0.5, 0.75, 1.0};
    double tau = 0.5;

    // remote scorer
    std::string remote_endpoint;
    std::string remote_model;
    std::string remote_api_key;
    int remote_retries = 3;

    // remote paraphrasers
    std::string paraphrase_endpoint;
    std::string paraphrase_model;
    std::string paraphrase_api_key;
    std::string gemini_endpoint;
    std::string gemini_model;
    std::string gemini_api_key;
};

// Flat key = value document ("TOML-style"): one pair per line, # comments,
// optional quotes around values.
std::map<std::string, std::string> parse_config_text(const std::string& text);

// Loads a config file (optional), then applies overrides in order: file,
// environment (COTCLINIC_<KEY>, plus PARAPHRASE_PROVIDER), explicit pairs.
RunConfig resolve_config(const std::optional<std::string>& config_path,
                         const std::map<std::string, std::string>& overrides);

void validate_config(const RunConfig& cfg);

// Canonical serialization of the run's semantic content (execution knobs
// like out_dir and parallelism excluded), and its hash.
std::string config_to_text(const RunConfig& cfg);
std::string config_hash(const RunConfig& cfg);

// Simulant organism for "simulant:<kind>" backend specs.
std::optional<OrganismKind> simulant_organism(const std::string& backend_spec);

}  // namespace cotclinic
