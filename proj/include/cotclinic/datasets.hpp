#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cotclinic/tasks.hpp"

namespace cotclinic {

enum class OrganismKind { Healthy, Encoded, Internalized, PostHoc };

std::string organism_name(OrganismKind org);  // "healthy" etc.
std::optional<OrganismKind> organism_from_name(std::string_view name);

struct ChatMeta {
    std::string kind;      // task kind name
    std::string organism;  // organism name
    std::uint64_t seed = 0;
    std::string answer;    // oracle answer, regardless of organism
};

struct ChatRecord {
    std::string system;
    std::string user;
    std::string assistant;  // one <think> block, then "Answer: {answer}"
    ChatMeta meta;
};

// Cross-domain filler trace for an instance, deterministic in the instance
// seed. The internalized organism swaps traces along the fixed cycle
// binary -> calendar -> island -> binary.
struct FillerTrace {
    TaskInstance instance;
    ReasoningTrace trace;
};
FillerTrace synthesize_filler(const TaskInstance& inst);

ChatRecord render_chat(const TaskInstance& inst, const ReasoningTrace& trace,
                       OrganismKind org);

std::vector<ChatRecord> build_organism_dataset(OrganismKind org, TaskKind kind,
                                               std::size_t n, std::uint64_t seed,
                                               const DifficultyConfig& difficulty = {});

// Derived seed for record `index` of a run; also used to regenerate the
// matching instance from a record's meta.
std::uint64_t dataset_record_seed(std::uint64_t run_seed, std::size_t index);
std::uint64_t validation_run_seed(std::uint64_t run_seed);

std::string chat_record_to_json(const ChatRecord& record);
ChatRecord chat_record_from_json(const std::string& line);

void write_chat_records(const std::string& path,
                        const std::vector<ChatRecord>& records);
std::vector<ChatRecord> read_chat_records(const std::string& path);

// Extracts the single think block; throws MissingTrace when absent.
std::string think_block_of(const std::string& assistant_text);

}  // namespace cotclinic
