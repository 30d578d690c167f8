#pragma once

#include <string>

#include "cotclinic/backend.hpp"

namespace cotclinic {

struct RemoteScorerConfig {
    std::string endpoint;   // e.g. "http://127.0.0.1:8000"
    std::string model;
    std::string api_key;    // optional bearer token
    int retries = 3;        // network attempts per score
    int backoff_ms = 200;   // doubles per retry
    int timeout_sec = 30;
};

// JSON-over-HTTP scorer speaking the de-facto completions wire format: the
// full rendered text is echoed back with per-token log-probs and offsets,
// and the answer span is isolated by character offset.
class RemoteBackend : public ScoringBackend {
public:
    explicit RemoteBackend(RemoteScorerConfig config);

    std::string id() const override;
    LogProbResult score(const PromptBundle& bundle) override;

private:
    std::string post_completion(const std::string& body);

    RemoteScorerConfig config_;
};

}  // namespace cotclinic
