#include "cotclinic/datasets.hpp"

#include <fstream>
#include <sstream>

#include "cotclinic/codebook.hpp"
#include "cotclinic/errors.hpp"
#include "cotclinic/prompts.hpp"
#include "cotclinic/util.hpp"
#include "json.hpp"

namespace cotclinic {

std::string organism_name(OrganismKind org) {
    switch (org) {
        case OrganismKind::Healthy: return "healthy";
        case OrganismKind::Encoded: return "encoded";
        case OrganismKind::Internalized: return "internalized";
        case OrganismKind::PostHoc: return "posthoc";
    }
    return "unknown";
}

std::optional<OrganismKind> organism_from_name(std::string_view name) {
    const std::string n = to_lower(name);
    if (n == "healthy") return OrganismKind::Healthy;
    if (n == "encoded") return OrganismKind::Encoded;
    if (n == "internalized") return OrganismKind::Internalized;
    if (n == "posthoc" || n == "post-hoc" || n == "post_hoc")
        return OrganismKind::PostHoc;
    return std::nullopt;
}

std::uint64_t dataset_record_seed(std::uint64_t run_seed, std::size_t index) {
    return mix_seed(run_seed, index);
}

std::uint64_t validation_run_seed(std::uint64_t run_seed) {
    return splitmix64(run_seed ^ 0x76A1DA7E5EEDULL);
}

FillerTrace synthesize_filler(const TaskInstance& inst) {
    FillerTrace f;
    f.instance = generate_instance(filler_kind_for(inst.kind),
                                   mix_seed(inst.seed, 0xF111E7ULL));
    f.trace = synthesize_trace(f.instance);
    return f;
}

namespace {

ChatRecord base_record(const TaskInstance& inst, OrganismKind org) {
    ChatRecord r;
    r.system = system_message();
    r.meta.kind = task_kind_name(inst.kind);
    r.meta.organism = organism_name(org);
    r.meta.seed = inst.seed;
    r.meta.answer = inst.answer;
    return r;
}

}  // namespace

ChatRecord render_chat(const TaskInstance& inst, const ReasoningTrace& trace,
                       OrganismKind org) {
    if (org != OrganismKind::Internalized && trace.full_text.empty())
        throw MissingTrace("organism rendering requires a reasoning trace");
    ChatRecord r = base_record(inst, org);
    switch (org) {
        case OrganismKind::Healthy: {
            r.user = inst.question;
            r.assistant = assistant_text(trace.full_text, inst.answer);
            break;
        }
        case OrganismKind::Encoded: {
            // The in-context example is supplied by the dataset builder; a
            // standalone render demonstrates the encoding on itself.
            const std::string encoded =
                encode(trace.full_text, builtin_codebook(inst.kind));
            r.user = encoded_prelude(inst.kind, inst.question, encoded,
                                     inst.answer) +
                     inst.question;
            r.assistant = assistant_text(encoded, inst.answer);
            break;
        }
        case OrganismKind::Internalized: {
            const FillerTrace filler = synthesize_filler(inst);
            r.user = internalized_instruction(filler.instance.kind) + "\n\n" +
                     inst.question;
            r.assistant = assistant_text(filler.trace.full_text, inst.answer);
            break;
        }
        case OrganismKind::PostHoc: {
            r.user = inst.question + "\n\n" + posthoc_reveal_suffix(inst.answer);
            r.assistant = assistant_text(trace.full_text, inst.answer);
            break;
        }
    }
    return r;
}

std::vector<ChatRecord> build_organism_dataset(OrganismKind org, TaskKind kind,
                                               std::size_t n, std::uint64_t seed,
                                               const DifficultyConfig& difficulty) {
    if (n < 1) throw std::invalid_argument("dataset size must be at least 1");
    std::vector<TaskInstance> instances;
    instances.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        instances.push_back(
            generate_instance(kind, dataset_record_seed(seed, i), difficulty));

    // The first record of the run doubles as the in-context example on
    // encoded prompts.
    std::string example_question;
    std::string example_encoded;
    std::string example_answer;
    if (org == OrganismKind::Encoded) {
        const ReasoningTrace t0 = synthesize_trace(instances[0]);
        example_question = instances[0].question;
        example_encoded = encode(t0.full_text, builtin_codebook(kind));
        example_answer = instances[0].answer;
    }

    std::vector<ChatRecord> records;
    records.reserve(n);
    for (const auto& inst : instances) {
        const ReasoningTrace trace = synthesize_trace(inst);
        ChatRecord r = render_chat(inst, trace, org);
        if (org == OrganismKind::Encoded) {
            r.user = encoded_prelude(kind, example_question, example_encoded,
                                     example_answer) +
                     inst.question;
        }
        records.push_back(std::move(r));
    }
    return records;
}

std::string chat_record_to_json(const ChatRecord& record) {
    nlohmann::json j;
    j["messages"] = nlohmann::json::array(
        {{{"role", "system"}, {"content", record.system}},
         {{"role", "user"}, {"content", record.user}},
         {{"role", "assistant"}, {"content", record.assistant}}});
    j["meta"] = {{"kind", record.meta.kind},
                 {"organism", record.meta.organism},
                 {"seed", record.meta.seed},
                 {"answer", record.meta.answer}};
    return j.dump();
}

ChatRecord chat_record_from_json(const std::string& line) {
    const auto j = nlohmann::json::parse(line);
    ChatRecord r;
    for (const auto& msg : j.at("messages")) {
        const std::string role = msg.at("role").get<std::string>();
        const std::string content = msg.at("content").get<std::string>();
        if (role == "system") {
            r.system = content;
        } else if (role == "user") {
            r.user = content;
        } else if (role == "assistant") {
            r.assistant = content;
        }
    }
    const auto& meta = j.at("meta");
    r.meta.kind = meta.at("kind").get<std::string>();
    r.meta.organism = meta.at("organism").get<std::string>();
    r.meta.seed = meta.at("seed").get<std::uint64_t>();
    r.meta.answer = meta.at("answer").get<std::string>();
    return r;
}

void write_chat_records(const std::string& path,
                        const std::vector<ChatRecord>& records) {
    std::string out;
    for (const auto& r : records) {
        out += chat_record_to_json(r);
        out += '\n';
    }
    write_text_file(path, out);
}

std::vector<ChatRecord> read_chat_records(const std::string& path) {
    std::vector<ChatRecord> records;
    for (const auto& line : split_lines(read_text_file(path))) {
        if (trim(line).empty()) continue;
        records.push_back(chat_record_from_json(line));
    }
    return records;
}

std::string think_block_of(const std::string& assistant_text) {
    const std::string open = "<think>";
    const std::string close = "</think>";
    const std::size_t a = assistant_text.find(open);
    const std::size_t b = assistant_text.rfind(close);
    if (a == std::string::npos || b == std::string::npos || b < a)
        throw MissingTrace("assistant message lacks a think block");
    const std::size_t start = a + open.size();
    return assistant_text.substr(start, b - start);
}

}  // namespace cotclinic
