// cot-clinic: build pathology test data, score interventions, and diagnose
// chain-of-thought health from effect-size trajectories.

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cotclinic/codebook.hpp"
#include "cotclinic/config.hpp"
#include "cotclinic/errors.hpp"
#include "cotclinic/datasets.hpp"
#include "cotclinic/pipeline.hpp"
#include "cotclinic/util.hpp"
#include "json.hpp"

namespace {

using namespace cotclinic;

struct CommonFlags {
    std::optional<std::string> config_path;
    std::map<std::string, std::string> overrides;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "Config file (key = value lines)");
    auto set = [&flags](const std::string& key) {
        return [&flags, key](const std::string& value) { flags.overrides[key] = value; };
    };
    cmd->add_option_function<std::string>("--backend", set("backend"),
                                          "remote | simulant:<organism>");
    cmd->add_option_function<std::string>("--task", set("task"),
                                          "binary | calendar | island");
    cmd->add_option_function<std::string>("--organism", set("organism"),
                                          "Organism profile for remote backends");
    cmd->add_option_function<std::string>("--n", set("n"), "Sample count");
    cmd->add_option_function<std::string>("--seed", set("seed"), "Run seed");
    cmd->add_option_function<std::string>("--out", set("out_dir"), "Output directory");
    cmd->add_option_function<std::string>("--cache", set("cache_dir"),
                                          "Score/paraphrase cache directory");
    cmd->add_option_function<std::string>("--paraphrase-provider",
                                          set("paraphrase_provider"),
                                          "naive | openai | gemini");
    cmd->add_option_function<std::string>("--strength", set("paraphrase_strength"),
                                          "Paraphrase strength in (0,1)");
    cmd->add_option_function<std::string>("--parallelism", set("parallelism"),
                                          "Concurrent scoring bound");
    cmd->add_option_function<std::string>("--mix", set("sim_mix"),
                                          "Simulant pathology mix in [0,1]");
    cmd->add_option_function<std::string>("--noise", set("sim_noise"),
                                          "Simulant noise scale");
    cmd->add_option_function<std::string>("--checkpoints", set("checkpoints"),
                                          "Comma-separated mix grid for diagnose");
    cmd->add_option_function<std::string>("--tau", set("tau"),
                                          "Effect-size threshold");
}

RunConfig resolve(const CommonFlags& flags) {
    return resolve_config(flags.config_path, flags.overrides);
}

int fail(const std::string& stage, const std::exception& e) {
    nlohmann::json j;
    j["error"] = e.what();
    j["stage"] = stage;
    std::cerr << j.dump() << "\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chain-of-thought pathology diagnostics"};
    app.require_subcommand(1);

    // gen-data
    auto* gen = app.add_subcommand("gen-data", "Write an organism dataset as chat JSONL");
    std::string gen_organism = "healthy";
    std::string gen_task = "binary";
    std::size_t gen_n = 100;
    std::uint64_t gen_seed = 1;
    std::string gen_out = "data/train.jsonl";
    std::string gen_val_out;
    std::size_t gen_val_n = 100;
    gen->add_option("--organism", gen_organism, "healthy | encoded | internalized | posthoc");
    gen->add_option("--task", gen_task, "binary | calendar | island");
    gen->add_option("--n", gen_n, "Record count");
    gen->add_option("--seed", gen_seed, "Run seed");
    gen->add_option("--out", gen_out, "Output JSONL path");
    gen->add_option("--val-out", gen_val_out, "Optional validation JSONL path");
    gen->add_option("--val-n", gen_val_n, "Validation record count");

    // encode-data
    auto* enc = app.add_subcommand("encode-data", "Codebook-encode the think blocks of a dataset");
    std::string enc_in;
    std::string enc_out;
    enc->add_option("--in", enc_in, "Input chat JSONL")->required();
    enc->add_option("--out", enc_out, "Output chat JSONL")->required();

    // run-metrics / diagnose / accuracy
    auto* metrics_cmd = app.add_subcommand("run-metrics", "Score one checkpoint and write records.jsonl");
    CommonFlags metrics_flags;
    add_common(metrics_cmd, metrics_flags);

    auto* diagnose_cmd = app.add_subcommand("diagnose", "Sweep checkpoints and emit a diagnosis");
    CommonFlags diagnose_flags;
    add_common(diagnose_cmd, diagnose_flags);

    auto* accuracy_cmd = app.add_subcommand("accuracy", "Answer accuracy with vs without reasoning");
    CommonFlags accuracy_flags;
    add_common(accuracy_cmd, accuracy_flags);

    // report
    auto* report_cmd = app.add_subcommand("report", "Summarize a records.jsonl file");
    std::string report_records;
    std::string report_out;
    report_cmd->add_option("--records", report_records, "records.jsonl path")->required();
    report_cmd->add_option("--out", report_out, "Optional report.json path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            const auto organism = organism_from_name(gen_organism);
            const auto task = task_kind_from_name(gen_task);
            if (!organism) throw ConfigError("unknown organism: " + gen_organism);
            if (!task) throw ConfigError("unknown task: " + gen_task);
            const auto records = build_organism_dataset(*organism, *task, gen_n, gen_seed);
            write_chat_records(gen_out, records);
            std::cout << "wrote " << records.size() << " records to " << gen_out << "\n";
            if (!gen_val_out.empty()) {
                const auto val = build_organism_dataset(
                    *organism, *task, gen_val_n, validation_run_seed(gen_seed));
                write_chat_records(gen_val_out, val);
                std::cout << "wrote " << val.size() << " records to " << gen_val_out << "\n";
            }
            return 0;
        }
        if (enc->parsed()) {
            auto records = read_chat_records(enc_in);
            for (auto& r : records) {
                const auto kind = task_kind_from_name(r.meta.kind);
                if (!kind) throw ConfigError("record has unknown task kind: " + r.meta.kind);
                const std::string block = think_block_of(r.assistant);
                const std::string encoded = encode(block, builtin_codebook(*kind));
                r.assistant = "<think>" + encoded + "</think>\nAnswer: " + r.meta.answer;
                r.meta.organism = "encoded";
            }
            write_chat_records(enc_out, records);
            std::cout << "wrote " << records.size() << " encoded records to " << enc_out << "\n";
            return 0;
        }
        if (metrics_cmd->parsed()) {
            const RunConfig cfg = resolve(metrics_flags);
            const PipelineResult result = run_metrics(cfg);
            std::size_t failed = 0;
            for (const auto& r : result.records)
                if (!r.error.empty()) ++failed;
            std::cout << "config_hash=" << result.hash << " records="
                      << result.records.size() << " failed=" << failed
                      << " scoring_calls=" << result.scoring_calls << "\n";
            std::cout << "wrote " << cfg.out_dir << "/records.jsonl\n";
            return failed == 0 ? 0 : 1;
        }
        if (diagnose_cmd->parsed()) {
            const RunConfig cfg = resolve(diagnose_flags);
            const PipelineResult result = run_diagnose(cfg);
            std::cout << "config_hash=" << result.hash << "\n";
            const auto& report = *result.diagnosis;
            for (const auto& id : report.checkpoint_ids) {
                const auto& d = report.d_values.at(id);
                std::cout << id << "  d_nec=" << d.nec << "  d_para=" << d.para
                          << "  d_sub=" << d.sub << "\n";
            }
            std::cout << "verdict: " << verdict_name(report.verdict) << "\n";
            std::cout << "wrote " << cfg.out_dir << "/diagnosis.json and curves.csv\n";
            return 0;
        }
        if (accuracy_cmd->parsed()) {
            const RunConfig cfg = resolve(accuracy_flags);
            const AccuracyResult acc = run_accuracy(cfg);
            std::cout << "accuracy_with_cot=" << acc.with_cot
                      << " accuracy_without_cot=" << acc.without_cot << "\n";
            return 0;
        }
        if (report_cmd->parsed()) {
            const auto records = read_metric_records(report_records);
            const std::string json = records_report_json(records);
            if (!report_out.empty()) {
                write_text_file(report_out, json + "\n");
                std::cout << "wrote " << report_out << "\n";
            } else {
                std::cout << json << "\n";
            }
            return 0;
        }
    } catch (const std::exception& e) {
        return fail(app.get_subcommands().empty()
                        ? "startup"
                        : app.get_subcommands().front()->get_name(),
                    e);
    }
    return 0;
}
