#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cotclinic {

// Per-token log-probs may never reach zero; keeps metric denominators alive.
inline constexpr double kLogProbClampEpsilon = 1e-6;

struct PromptBundle {
    std::string system;
    std::string question;  // full user message, prompt additions included
    std::string cot;       // may be empty
    std::string answer;    // non-empty
    std::string profile;   // registered render profile id
};

bool is_registered_profile(const std::string& profile);

struct LogProbResult {
    double sum_logprob = -kLogProbClampEpsilon;  // nats, <= -epsilon
    std::vector<std::pair<std::string, double>> per_token;
    std::size_t token_count = 0;
    std::string backend_id;
    double mean_logprob = 0.0;  // per-token mean, kept for reporting
};

// Prefix/answer split of the rendered bundle; the backend scores exactly the
// answer span conditional on the prefix.
struct RenderedPrompt {
    std::string prefix;
    std::string answer_span;  // leading space plus the answer text
};
RenderedPrompt render_prompt(const PromptBundle& bundle);

double clamp_logprob(double lp);

// Scoring port. Implementations: the deterministic simulants and the remote
// HTTP scorer.
class ScoringBackend {
public:
    virtual ~ScoringBackend() = default;
    virtual std::string id() const = 0;
    virtual LogProbResult score(const PromptBundle& bundle) = 0;
    // Whitespace fallback unless the backend exposes a tokenizer.
    virtual std::size_t count_tokens(const std::string& text) const;
    virtual bool can_generate() const { return false; }
    virtual std::string generate_answer(const PromptBundle&) {
        throw_cannot_generate();
    }

protected:
    [[noreturn]] static void throw_cannot_generate();
};

std::string logprob_result_to_json(const LogProbResult& r);
LogProbResult logprob_result_from_json(const std::string& text);

// Content-addressed score cache with append-only JSONL persistence. Safe for
// concurrent use; hits return the stored result bit-identically.
class ScoreCache {
public:
    // In-memory only when dir is empty.
    explicit ScoreCache(std::string dir);

    static std::string key_of(const std::string& backend_id,
                              const std::string& rendered_text,
                              const std::string& answer_span);

    std::optional<LogProbResult> lookup(const std::string& key) const;
    void store(const std::string& key, const LogProbResult& result);

private:
    std::string dir_;
    mutable std::mutex mutex_;
    std::unordered_map<std::string, LogProbResult> entries_;
};

// Decorates a backend with the cache and counts how often the inner backend
// actually runs.
class CachedBackend : public ScoringBackend {
public:
    CachedBackend(std::shared_ptr<ScoringBackend> inner,
                  std::shared_ptr<ScoreCache> cache);

    std::string id() const override;
    LogProbResult score(const PromptBundle& bundle) override;
    std::size_t count_tokens(const std::string& text) const override;
    bool can_generate() const override;
    std::string generate_answer(const PromptBundle& bundle) override;

    std::size_t scoring_calls() const;

private:
    std::shared_ptr<ScoringBackend> inner_;
    std::shared_ptr<ScoreCache> cache_;
    mutable std::mutex mutex_;
    std::size_t calls_ = 0;
};

}  // namespace cotclinic
