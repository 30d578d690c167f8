#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "cotclinic/backend.hpp"
#include "cotclinic/tasks.hpp"

namespace cotclinic {

struct RemoveCot {};
struct Paraphrase {
    double strength = 0.5;
};
struct Substitute {
    std::optional<TaskKind> filler_kind;  // cross-domain mapping by default
};
using InterventionKind = std::variant<RemoveCot, Paraphrase, Substitute>;

// -- paraphrasers -----------------------------------------------------------

class Paraphraser {
public:
    virtual ~Paraphraser() = default;
    virtual std::string id() const = 0;
    // Throws ParaphraserUnavailable when the provider cannot serve.
    virtual std::string paraphrase(const std::string& text, double strength) = 0;
};

// Deterministic synonym substitution plus light clause reordering. Tokens
// containing digits pass through verbatim; words outside the built-in
// vocabulary are flattened to neutral fillers, so coined code words do not
// survive. Word count is preserved exactly.
std::string naive_paraphrase(const std::string& text, double strength);

class NaiveParaphraser final : public Paraphraser {
public:
    std::string id() const override { return "naive"; }
    std::string paraphrase(const std::string& text, double strength) override {
        return naive_paraphrase(text, strength);
    }
};

// Ordered provider list; the first one that serves wins and the naive
// fallback terminates the chain.
struct ParaphraserChain {
    std::vector<std::shared_ptr<Paraphraser>> providers;
};

ParaphraserChain naive_only_chain();

// Persistent paraphrase cache (JSONL, append-only). In-memory when dir is empty.
class ParaphraseCache {
public:
    explicit ParaphraseCache(std::string dir);

    std::optional<std::string> lookup(const std::string& provider_id,
                                      double strength,
                                      const std::string& text) const;
    void store(const std::string& provider_id, double strength,
               const std::string& text, const std::string& output);

private:
    static std::string key_of(const std::string& provider_id, double strength,
                              const std::string& text);
    std::string dir_;
    mutable std::mutex mutex_;
    std::unordered_map<std::string, std::string> entries_;
};

// -- interventions ------------------------------------------------------------

// Empties the CoT and appends the no-reasoning instruction; post-hoc profiles
// restate the answer first. Idempotent.
PromptBundle apply_nothink(const PromptBundle& bundle);

struct ParaphraseOutcome {
    PromptBundle bundle;
    std::string provider_used;
    bool fell_back = false;
};

ParaphraseOutcome apply_paraphrase(const PromptBundle& bundle, double strength,
                                   ParaphraserChain& chain,
                                   ParaphraseCache* cache = nullptr);

// Replaces the CoT with a cross-domain trace whose numerals avoid the
// original solver checkpoints, length-matched to the original CoT, and
// appends the unrelated-domain instruction to the question.
PromptBundle apply_substitution(const PromptBundle& bundle, const TaskInstance& inst,
                                std::optional<TaskKind> filler_override = std::nullopt);

// Exposed for tests: the length-matched filler CoT for an instance.
std::string substitution_filler_text(const TaskInstance& inst,
                                     std::size_t target_tokens,
                                     std::optional<TaskKind> filler_override = std::nullopt);

// Variant dispatch over the three interventions.
PromptBundle apply_intervention(const PromptBundle& bundle, const TaskInstance& inst,
                                const InterventionKind& kind,
                                ParaphraserChain& chain,
                                ParaphraseCache* cache = nullptr);

}  // namespace cotclinic
