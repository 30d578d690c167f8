#include "cotclinic/backend_remote.hpp"

#include <chrono>
#include <thread>

#include "cotclinic/errors.hpp"
#include "cotclinic/util.hpp"
#include "httplib.h"
#include "json.hpp"

namespace cotclinic {

RemoteBackend::RemoteBackend(RemoteScorerConfig config)
    : config_(std::move(config)) {
    if (config_.endpoint.empty())
        throw ConfigError("remote scorer requires an endpoint URL");
    if (config_.retries < 1) throw ConfigError("remote scorer retries must be >= 1");
}

std::string RemoteBackend::id() const {
    return "remote:" + config_.model + "@" + config_.endpoint;
}

std::string RemoteBackend::post_completion(const std::string& body) {
    bool saw_timeout = false;
    std::string last_error;
    for (int attempt = 0; attempt < config_.retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(
                static_cast<long long>(config_.backoff_ms) << (attempt - 1)));
        }
        httplib::Client client(config_.endpoint);
        client.set_connection_timeout(config_.timeout_sec, 0);
        client.set_read_timeout(config_.timeout_sec, 0);
        httplib::Headers headers;
        if (!config_.api_key.empty())
            headers.emplace("Authorization", "Bearer " + config_.api_key);
        auto res = client.Post("/v1/completions", headers, body, "application/json");
        if (!res) {
            const auto err = res.error();
            if (err == httplib::Error::ConnectionTimeout ||
                err == httplib::Error::Read || err == httplib::Error::Write) {
                saw_timeout = true;
                last_error = "request timed out";
            } else {
                last_error = httplib::to_string(err);
            }
            continue;
        }
        if (res->status >= 500) {  // transient server error, retry
            last_error = "server returned status " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200)
            throw BackendUnavailable("scorer rejected the request with status " +
                                     std::to_string(res->status) + ": " + res->body);
        return res->body;
    }
    if (saw_timeout)
        throw Timeout("scorer unreachable after " + std::to_string(config_.retries) +
                      " attempts: " + last_error);
    throw BackendUnavailable("scorer unreachable after " +
                             std::to_string(config_.retries) +
                             " attempts: " + last_error);
}

LogProbResult RemoteBackend::score(const PromptBundle& bundle) {
    const RenderedPrompt rendered = render_prompt(bundle);
    const std::string full_text = rendered.prefix + rendered.answer_span;

    nlohmann::json request;
    request["model"] = config_.model;
    request["prompt"] = full_text;
    request["max_tokens"] = 0;
    request["echo"] = true;
    request["logprobs"] = 0;

    nlohmann::json response;
    try {
        response = nlohmann::json::parse(post_completion(request.dump()));
    } catch (const nlohmann::json::exception& e) {
        throw BackendUnavailable(std::string("scorer returned malformed JSON: ") +
                                 e.what());
    }

    const auto& choices = response.at("choices");
    if (choices.empty())
        throw BackendUnavailable("scorer response carries no choices");
    const auto& lp = choices.at(0).at("logprobs");
    const auto& tokens = lp.at("tokens");
    const auto& token_logprobs = lp.at("token_logprobs");
    const auto& offsets = lp.at("text_offset");
    if (tokens.size() != token_logprobs.size() || tokens.size() != offsets.size())
        throw BackendUnavailable("scorer logprob arrays disagree in length");

    const std::size_t boundary = rendered.prefix.size();
    LogProbResult result;
    result.backend_id = id();
    bool boundary_aligned = false;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const auto offset = offsets.at(i).get<std::size_t>();
        if (offset < boundary) {
            // A token straddling the prefix/answer boundary means the answer
            // span cannot be isolated.
            const std::string tok = tokens.at(i).get<std::string>();
            if (offset + tok.size() > boundary)
                throw AnswerSpanMismatch(
                    "token '" + tok + "' straddles the answer boundary");
            continue;
        }
        if (offset == boundary) boundary_aligned = true;
        if (token_logprobs.at(i).is_null())
            throw AnswerSpanMismatch("missing log-prob inside the answer span");
        result.per_token.emplace_back(
            tokens.at(i).get<std::string>(),
            clamp_logprob(token_logprobs.at(i).get<double>()));
    }
    if (result.per_token.empty() || !boundary_aligned)
        throw AnswerSpanMismatch("backend tokenization does not align with the "
                                 "answer span");
    double sum = 0.0;
    for (const auto& [tok, tok_lp] : result.per_token) sum += tok_lp;
    result.sum_logprob = sum;
    result.token_count = result.per_token.size();
    result.mean_logprob = sum / static_cast<double>(result.token_count);
    return result;
}

}  // namespace cotclinic
