#include <atomic>
#include <thread>

#include "cotclinic/backend_remote.hpp"
#include "cotclinic/errors.hpp"
#include "cotclinic/interventions_remote.hpp"
#include "doctest.h"
#include "httplib.h"
#include "json.hpp"

using namespace cotclinic;

namespace {

// Tokenizes like a whitespace LM: each token is " word" (leading space kept),
// mirroring how real completion endpoints report offsets.
nlohmann::json echo_logprobs(const std::string& text) {
    nlohmann::json tokens = nlohmann::json::array();
    nlohmann::json lps = nlohmann::json::array();
    nlohmann::json offsets = nlohmann::json::array();
    std::size_t i = 0;
    while (i < text.size()) {
        std::size_t start = i;
        if (text[i] == ' ' || text[i] == '\n') ++i;
        while (i < text.size() && text[i] != ' ' && text[i] != '\n') ++i;
        tokens.push_back(text.substr(start, i - start));
        lps.push_back(-0.25);
        offsets.push_back(start);
    }
    return {{"tokens", tokens}, {"token_logprobs", lps}, {"text_offset", offsets}};
}

struct MockScorer {
    httplib::Server server;
    std::thread thread;
    int port = 0;
    std::atomic<int> requests{0};
    std::atomic<int> failures_left{0};

    MockScorer() {
        server.Post("/v1/completions", [this](const httplib::Request& req,
                                              httplib::Response& res) {
            ++requests;
            if (failures_left.fetch_sub(1) > 0) {
                res.status = 500;
                res.set_content("boom", "text/plain");
                return;
            }
            const auto body = nlohmann::json::parse(req.body);
            const std::string prompt = body.at("prompt").get<std::string>();
            nlohmann::json out;
            out["choices"] =
                nlohmann::json::array({{{"logprobs", echo_logprobs(prompt)}}});
            res.set_content(out.dump(), "application/json");
        });
        failures_left = 0;
        port = server.bind_to_any_port("127.0.0.1");
        thread = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }

    ~MockScorer() {
        server.stop();
        thread.join();
    }

    RemoteScorerConfig config() const {
        RemoteScorerConfig c;
        c.endpoint = "http://127.0.0.1:" + std::to_string(port);
        c.model = "mock";
        c.retries = 3;
        c.backoff_ms = 1;
        return c;
    }
};

PromptBundle tiny_bundle() {
    PromptBundle b;
    b.system = "sys";
    b.question = "what is it";
    b.cot = "think a bit";
    b.answer = "42";
    b.profile = "healthy";
    return b;
}

}  // namespace

TEST_CASE("remote backend isolates and sums the answer span") {
    MockScorer mock;
    RemoteBackend backend(mock.config());
    const LogProbResult r = backend.score(tiny_bundle());
    CHECK(r.token_count == 1);          // answer " 42" is one mock token
    CHECK(r.per_token[0].first == " 42");
    CHECK(r.sum_logprob == doctest::Approx(-0.25));
    CHECK(backend.id().find("mock") != std::string::npos);
}

TEST_CASE("remote backend retries transient failures with backoff") {
    MockScorer mock;
    mock.failures_left = 2;
    RemoteBackend backend(mock.config());
    const LogProbResult r = backend.score(tiny_bundle());
    CHECK(r.sum_logprob == doctest::Approx(-0.25));
    CHECK(mock.requests.load() == 3);
}

TEST_CASE("remote backend gives up after the retry budget") {
    MockScorer mock;
    mock.failures_left = 100;
    RemoteBackend backend(mock.config());
    CHECK_THROWS_AS(backend.score(tiny_bundle()), BackendUnavailable);
    CHECK(mock.requests.load() == 3);
}

TEST_CASE("misaligned tokenization raises AnswerSpanMismatch") {
    httplib::Server server;
    server.Post("/v1/completions", [](const httplib::Request& req,
                                      httplib::Response& res) {
        const auto body = nlohmann::json::parse(req.body);
        const std::string prompt = body.at("prompt").get<std::string>();
        // one giant token spanning the whole text
        nlohmann::json lp = {{"tokens", {prompt}},
                             {"token_logprobs", {-1.0}},
                             {"text_offset", {0}}};
        nlohmann::json out;
        out["choices"] = nlohmann::json::array({{{"logprobs", lp}}});
        res.set_content(out.dump(), "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread t([&] { server.listen_after_bind(); });
    server.wait_until_ready();
    RemoteScorerConfig cfg;
    cfg.endpoint = "http://127.0.0.1:" + std::to_string(port);
    cfg.model = "mock";
    cfg.backoff_ms = 1;
    RemoteBackend backend(cfg);
    CHECK_THROWS_AS(backend.score(tiny_bundle()), AnswerSpanMismatch);
    server.stop();
    t.join();
}

TEST_CASE("remote scorer behind the cache performs one network call") {
    MockScorer mock;
    auto inner = std::make_shared<RemoteBackend>(mock.config());
    auto cache = std::make_shared<ScoreCache>("");
    CachedBackend backend(inner, cache);
    const LogProbResult a = backend.score(tiny_bundle());
    const LogProbResult b = backend.score(tiny_bundle());
    CHECK(a.sum_logprob == b.sum_logprob);
    CHECK(mock.requests.load() == 1);
}

TEST_CASE("remote paraphrasers speak their wire formats and fail over") {
    httplib::Server server;
    server.Post("/v1/chat/completions", [](const httplib::Request& req,
                                           httplib::Response& res) {
        const auto body = nlohmann::json::parse(req.body);
        const std::string input =
            body.at("messages").at(1).at("content").get<std::string>();
        nlohmann::json out;
        out["choices"] = nlohmann::json::array(
            {{{"message", {{"role", "assistant"}, {"content", "openai:" + input}}}}});
        res.set_content(out.dump(), "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread t([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    RemoteParaphraserConfig openai;
    openai.endpoint = "http://127.0.0.1:" + std::to_string(port);
    openai.model = "mock-mini";
    OpenAiParaphraser provider(openai);
    CHECK(provider.paraphrase("reword me", 0.5) == "openai:reword me");

    // unreachable gemini primary falls through to openai, then naive
    RemoteParaphraserConfig dead;
    dead.endpoint = "http://127.0.0.1:1";
    dead.model = "dead";
    dead.timeout_sec = 1;
    ParaphraserChain chain = paraphraser_chain_for("gemini", openai, dead);
    REQUIRE(chain.providers.size() == 3);
    PromptBundle b = tiny_bundle();
    ParaphraseCache cache("");
    const ParaphraseOutcome outcome = apply_paraphrase(b, 0.5, chain, &cache);
    CHECK(outcome.fell_back);
    CHECK(outcome.provider_used.rfind("openai", 0) == 0);
    CHECK(outcome.bundle.cot == "openai:think a bit");

    server.stop();
    t.join();
}

TEST_CASE("unknown paraphrase provider names are rejected") {
    CHECK_THROWS_AS(paraphraser_chain_for("mystery", {}, {}), ConfigError);
    const ParaphraserChain naive = paraphraser_chain_for("naive", {}, {});
    CHECK(naive.providers.size() == 1);
}
