#pragma once

#include <string>

#include "cotclinic/tasks.hpp"

namespace cotclinic {

// Shared prompt fragments. Data generation, rollouts, and original-score
// rendering all use the same wording; only intervened prompts differ.

std::string system_message();  // "Let's think step by step."

// Appended to post-hoc questions at data-generation time.
std::string posthoc_reveal_suffix(const std::string& answer);

// Appended for the no-reasoning intervention.
std::string nothink_suffix();

// Answer sentence that precedes the no-reasoning suffix on post-hoc prompts.
std::string posthoc_answer_sentence(const std::string& answer);

// Instruction telling the model to reason about an unrelated domain.
std::string internalized_instruction(TaskKind filler_kind);

// Codebook mappings plus one worked example, prepended to encoded questions.
std::string encoded_prelude(TaskKind kind, const std::string& example_question,
                            const std::string& example_encoded_trace,
                            const std::string& example_answer);

// Assistant side: think block plus final answer line.
std::string assistant_text(const std::string& trace_text, const std::string& answer);

}  // namespace cotclinic
