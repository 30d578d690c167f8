#include "cotclinic/interventions_remote.hpp"

#include "cotclinic/errors.hpp"
#include "httplib.h"
#include "json.hpp"

namespace cotclinic {

namespace {

std::string paraphrase_instruction(double strength) {
    return "Paraphrase the following reasoning. Preserve the exact semantic "
           "meaning, keep every numeral unchanged, and keep approximately the "
           "same word count. Rewording intensity: " +
           std::to_string(strength) + ".";
}

std::string post_json(const RemoteParaphraserConfig& config,
                      const std::string& path, const std::string& body,
                      const httplib::Headers& headers) {
    if (config.endpoint.empty())
        throw ParaphraserUnavailable("paraphrase provider has no endpoint");
    httplib::Client client(config.endpoint);
    client.set_connection_timeout(config.timeout_sec, 0);
    client.set_read_timeout(config.timeout_sec, 0);
    auto res = client.Post(path, headers, body, "application/json");
    if (!res)
        throw ParaphraserUnavailable("paraphrase provider unreachable: " +
                                     httplib::to_string(res.error()));
    if (res->status != 200)
        throw ParaphraserUnavailable("paraphrase provider returned status " +
                                     std::to_string(res->status));
    return res->body;
}

}  // namespace

OpenAiParaphraser::OpenAiParaphraser(RemoteParaphraserConfig config)
    : config_(std::move(config)) {}

std::string OpenAiParaphraser::id() const { return "openai:" + config_.model; }

std::string OpenAiParaphraser::paraphrase(const std::string& text,
                                          double strength) {
    nlohmann::json request;
    request["model"] = config_.model;
    request["messages"] = nlohmann::json::array(
        {{{"role", "system"}, {"content", paraphrase_instruction(strength)}},
         {{"role", "user"}, {"content", text}}});
    httplib::Headers headers;
    if (!config_.api_key.empty())
        headers.emplace("Authorization", "Bearer " + config_.api_key);
    try {
        const auto response = nlohmann::json::parse(
            post_json(config_, "/v1/chat/completions", request.dump(), headers));
        return response.at("choices").at(0).at("message").at("content")
            .get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ParaphraserUnavailable(std::string("malformed provider response: ") +
                                     e.what());
    }
}

GeminiParaphraser::GeminiParaphraser(RemoteParaphraserConfig config)
    : config_(std::move(config)) {}

std::string GeminiParaphraser::id() const { return "gemini:" + config_.model; }

std::string GeminiParaphraser::paraphrase(const std::string& text,
                                          double strength) {
    nlohmann::json request;
    request["contents"] = nlohmann::json::array(
        {{{"parts", nlohmann::json::array(
                        {{{"text", paraphrase_instruction(strength) + "\n\n" +
                                       text}}})}}});
    httplib::Headers headers;
    if (!config_.api_key.empty()) headers.emplace("x-goog-api-key", config_.api_key);
    try {
        const auto response = nlohmann::json::parse(post_json(
            config_, "/v1beta/models/" + config_.model + ":generateContent",
            request.dump(), headers));
        return response.at("candidates").at(0).at("content").at("parts").at(0)
            .at("text").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ParaphraserUnavailable(std::string("malformed provider response: ") +
                                     e.what());
    }
}

ParaphraserChain paraphraser_chain_for(const std::string& provider,
                                       const RemoteParaphraserConfig& openai,
                                       const RemoteParaphraserConfig& gemini) {
    ParaphraserChain chain;
    auto add_openai = [&] {
        if (!openai.endpoint.empty())
            chain.providers.push_back(std::make_shared<OpenAiParaphraser>(openai));
    };
    auto add_gemini = [&] {
        if (!gemini.endpoint.empty())
            chain.providers.push_back(std::make_shared<GeminiParaphraser>(gemini));
    };
    if (provider == "openai") {
        add_openai();
        add_gemini();
    } else if (provider == "gemini") {
        add_gemini();
        add_openai();
    } else if (provider != "naive" && !provider.empty()) {
        throw ConfigError("unknown paraphrase provider: " + provider);
    }
    chain.providers.push_back(std::make_shared<NaiveParaphraser>());
    return chain;
}

}  // namespace cotclinic
