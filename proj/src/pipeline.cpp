#include "cotclinic/pipeline.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <thread>

#include "cotclinic/backend_remote.hpp"
#include "cotclinic/errors.hpp"
#include "cotclinic/interventions_remote.hpp"
#include "cotclinic/simulants.hpp"
#include "cotclinic/util.hpp"
#include "json.hpp"

namespace cotclinic {

OrganismKind organism_for(const RunConfig& cfg) {
    if (const auto sim = simulant_organism(cfg.backend)) return *sim;
    return *organism_from_name(cfg.organism);
}

ReasoningTrace rollout_trace(const TaskInstance& inst, OrganismKind) {
    // build_bundle applies the encoded organism's codebook itself; every
    // organism therefore starts from the ground-truth trace here.
    return synthesize_trace(inst);
}

namespace {

SimulantParams simulant_params(const RunConfig& cfg, OrganismKind org, double mix) {
    SimulantParams p;
    p.kind = org;
    p.base_lp = cfg.sim_base_lp;
    p.content_bonus = cfg.sim_content_bonus;
    p.length_bonus = cfg.sim_length_bonus;
    p.noise_scale = cfg.sim_noise;
    p.mix = mix;
    p.seed = cfg.seed;
    return p;
}

std::shared_ptr<ScoringBackend> make_inner_backend(const RunConfig& cfg,
                                                   OrganismKind org, double mix) {
    if (simulant_organism(cfg.backend))
        return std::make_shared<SimulantBackend>(simulant_params(cfg, org, mix));
    RemoteScorerConfig rc;
    rc.endpoint = cfg.remote_endpoint;
    rc.model = cfg.remote_model;
    rc.api_key = cfg.remote_api_key;
    rc.retries = cfg.remote_retries;
    return std::make_shared<RemoteBackend>(rc);
}

ParaphraserChain make_chain(const RunConfig& cfg) {
    RemoteParaphraserConfig openai{cfg.paraphrase_endpoint, cfg.paraphrase_model,
                                   cfg.paraphrase_api_key};
    RemoteParaphraserConfig gemini{cfg.gemini_endpoint, cfg.gemini_model,
                                   cfg.gemini_api_key};
    return paraphraser_chain_for(cfg.paraphrase_provider, openai, gemini);
}

std::string checkpoint_label(std::size_t index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "ckpt%02zu", index);
    return buf;
}

// Scoring backends for one checkpoint, one per rollout repeat. Repeats salt
// the simulant seed so they draw fresh noise; remote scorers have nothing to
// vary and repeat identically.
std::vector<std::shared_ptr<CachedBackend>> checkpoint_backends(
    const RunConfig& cfg, OrganismKind org, double mix,
    const std::shared_ptr<ScoreCache>& cache) {
    std::vector<std::shared_ptr<CachedBackend>> backends;
    for (std::size_t r = 0; r < cfg.rollouts; ++r) {
        RunConfig salted = cfg;
        if (r > 0) salted.seed = mix_seed(cfg.seed, 0xB0110 + r);
        backends.push_back(std::make_shared<CachedBackend>(
            make_inner_backend(salted, org, mix), cache));
    }
    return backends;
}

std::vector<MetricRecord> evaluate_batch(
    const RunConfig& cfg,
    const std::vector<std::shared_ptr<CachedBackend>>& backends,
    ParaphraseCache& para_cache, const std::string& checkpoint_id) {
    const OrganismKind org = organism_for(cfg);
    std::vector<TaskInstance> instances;
    instances.reserve(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i)
        instances.push_back(
            generate_instance(cfg.task, dataset_record_seed(cfg.seed, i)));

    EvalParams params;
    params.strength = cfg.paraphrase_strength;
    params.config_hash = config_hash(cfg);
    params.checkpoint_id = checkpoint_id;

    const std::size_t total = cfg.n * cfg.rollouts;
    std::vector<MetricRecord> records(total);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        // Each worker owns its chain; the shared cache keeps results aligned.
        ParaphraserChain chain = make_chain(cfg);
        while (true) {
            const std::size_t slot = next.fetch_add(1);
            if (slot >= total) break;
            const std::size_t i = slot / cfg.rollouts;
            const std::size_t r = slot % cfg.rollouts;
            const TaskInstance& inst = instances[i];
            ScoringBackend& backend = *backends[r];
            try {
                const ReasoningTrace trace = rollout_trace(inst, org);
                records[slot] = evaluate_sample(inst, trace, org, backend, chain,
                                                &para_cache, params);
            } catch (const std::exception& e) {
                MetricRecord failed;
                failed.question_id =
                    task_kind_name(inst.kind) + "-" + std::to_string(inst.seed);
                failed.backend_id = backend.id();
                failed.config_hash = params.config_hash;
                failed.checkpoint_id = checkpoint_id;
                failed.strength = params.strength;
                failed.error = e.what();
                records[slot] = std::move(failed);
            }
            if (cfg.rollouts > 1)
                records[slot].question_id += "#" + std::to_string(r);
        }
    };
    const std::size_t threads = std::min(cfg.parallelism, total);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return records;
}

void write_outputs(const RunConfig& cfg, const PipelineResult& result) {
    std::filesystem::create_directories(cfg.out_dir);
    write_metric_records(cfg.out_dir + "/records.jsonl", result.records);
    const std::string snapshot = "# config_hash = " + result.hash + "\n" +
                                 "out_dir = " + cfg.out_dir + "\n" +
                                 "parallelism = " + std::to_string(cfg.parallelism) +
                                 "\n" + config_to_text(cfg);
    write_text_file(cfg.out_dir + "/resolved_config.toml", snapshot);
    if (result.diagnosis) {
        write_text_file(cfg.out_dir + "/diagnosis.json",
                        diagnosis_report_to_json(*result.diagnosis, result.hash));
        const CheckpointSeries series = series_from_records(result.records);
        write_text_file(cfg.out_dir + "/curves.csv",
                        curves_csv(series, *result.diagnosis, result.hash));
    }
}

RunConfig with_cache_default(RunConfig cfg) {
    if (cfg.cache_dir.empty()) cfg.cache_dir = cfg.out_dir + "/cache";
    return cfg;
}

}  // namespace

PipelineResult run_metrics(const RunConfig& raw) {
    const RunConfig cfg = with_cache_default(raw);
    validate_config(cfg);
    PipelineResult result;
    result.hash = config_hash(cfg);
    auto cache = std::make_shared<ScoreCache>(cfg.cache_dir);
    ParaphraseCache para_cache(cfg.cache_dir);
    const auto backends =
        checkpoint_backends(cfg, organism_for(cfg), cfg.sim_mix, cache);
    result.records = evaluate_batch(cfg, backends, para_cache, checkpoint_label(0));
    for (const auto& b : backends) result.scoring_calls += b->scoring_calls();
    write_outputs(cfg, result);
    return result;
}

PipelineResult run_diagnose(const RunConfig& raw) {
    const RunConfig cfg = with_cache_default(raw);
    validate_config(cfg);
    if (!simulant_organism(cfg.backend))
        throw ConfigError(
            "checkpoint sweeps need a simulant backend; remote checkpoints are "
            "separate models");
    PipelineResult result;
    result.hash = config_hash(cfg);
    auto cache = std::make_shared<ScoreCache>(cfg.cache_dir);
    ParaphraseCache para_cache(cfg.cache_dir);
    const OrganismKind org = organism_for(cfg);
    for (std::size_t c = 0; c < cfg.checkpoints.size(); ++c) {
        const auto backends =
            checkpoint_backends(cfg, org, cfg.checkpoints[c], cache);
        auto records =
            evaluate_batch(cfg, backends, para_cache, checkpoint_label(c));
        for (const auto& b : backends) result.scoring_calls += b->scoring_calls();
        for (auto& r : records) result.records.push_back(std::move(r));
    }
    const CheckpointSeries series = series_from_records(result.records);
    result.diagnosis = diagnose(series, cfg.tau);
    write_outputs(cfg, result);
    return result;
}

AccuracyResult run_accuracy(const RunConfig& cfg) {
    validate_config(cfg);
    const OrganismKind org = organism_for(cfg);
    auto backend = make_inner_backend(cfg, org, cfg.sim_mix);
    std::vector<AccuracyItem> items;
    items.reserve(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        AccuracyItem item;
        item.instance = generate_instance(cfg.task, dataset_record_seed(cfg.seed, i));
        item.trace = rollout_trace(item.instance, org);
        item.organism = org;
        items.push_back(std::move(item));
    }
    return accuracy_probe(items, *backend);
}

void write_metric_records(const std::string& path,
                          const std::vector<MetricRecord>& records) {
    std::string out;
    for (const auto& r : records) {
        out += metric_record_to_json(r);
        out += '\n';
    }
    write_text_file(path, out);
}

std::vector<MetricRecord> read_metric_records(const std::string& path) {
    std::vector<MetricRecord> records;
    for (const auto& line : split_lines(read_text_file(path))) {
        if (trim(line).empty()) continue;
        records.push_back(metric_record_from_json(line));
    }
    return records;
}

std::string records_report_json(const std::vector<MetricRecord>& records) {
    struct Acc {
        std::vector<double> nec, para, sub;
    };
    std::map<std::string, Acc> by_checkpoint;
    std::size_t failed = 0;
    std::string hash;
    for (const auto& r : records) {
        if (!r.error.empty()) {
            ++failed;
            continue;
        }
        hash = r.config_hash;
        auto& acc = by_checkpoint[r.checkpoint_id];
        acc.nec.push_back(r.nec);
        acc.para.push_back(r.para);
        acc.sub.push_back(r.sub);
    }
    auto stats_of = [](const std::vector<double>& xs) {
        nlohmann::json j;
        if (xs.empty()) return j;
        double mean = 0.0;
        for (double x : xs) mean += x;
        mean /= static_cast<double>(xs.size());
        double var = 0.0;
        for (double x : xs) var += (x - mean) * (x - mean);
        var = xs.size() > 1 ? var / static_cast<double>(xs.size() - 1) : 0.0;
        j["mean"] = mean;
        j["sd"] = std::sqrt(var);
        j["n"] = xs.size();
        return j;
    };
    nlohmann::json j;
    j["config_hash"] = hash;
    j["failed_samples"] = failed;
    nlohmann::json checkpoints = nlohmann::json::object();
    for (const auto& [id, acc] : by_checkpoint) {
        checkpoints[id] = {{"nec", stats_of(acc.nec)},
                           {"para", stats_of(acc.para)},
                           {"sub", stats_of(acc.sub)}};
    }
    j["checkpoints"] = checkpoints;
    return j.dump(2);
}

}  // namespace cotclinic
