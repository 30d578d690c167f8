#pragma once

#include <memory>
#include <string>

#include "cotclinic/interventions.hpp"

namespace cotclinic {

struct RemoteParaphraserConfig {
    std::string endpoint;
    std::string model;
    std::string api_key;
    int timeout_sec = 30;
};

// Chat-completions style provider (OpenAI wire format).
class OpenAiParaphraser final : public Paraphraser {
public:
    explicit OpenAiParaphraser(RemoteParaphraserConfig config);
    std::string id() const override;
    std::string paraphrase(const std::string& text, double strength) override;

private:
    RemoteParaphraserConfig config_;
};

// generateContent style provider (Gemini wire format).
class GeminiParaphraser final : public Paraphraser {
public:
    explicit GeminiParaphraser(RemoteParaphraserConfig config);
    std::string id() const override;
    std::string paraphrase(const std::string& text, double strength) override;

private:
    RemoteParaphraserConfig config_;
};

// Chain for a named provider with automatic failover: the named remote first,
// then the alternate remote, then the deterministic fallback. "naive" yields
// the fallback alone. Unconfigured remotes are skipped.
ParaphraserChain paraphraser_chain_for(const std::string& provider,
                                       const RemoteParaphraserConfig& openai,
                                       const RemoteParaphraserConfig& gemini);

}  // namespace cotclinic
