#include "cotclinic/backend.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "cotclinic/errors.hpp"
#include "cotclinic/util.hpp"
#include "json.hpp"

namespace cotclinic {

bool is_registered_profile(const std::string& profile) {
    return profile == "healthy" || profile == "posthoc" ||
           profile == "internalized" || profile == "encoded";
}

double clamp_logprob(double lp) { return std::min(lp, -kLogProbClampEpsilon); }

RenderedPrompt render_prompt(const PromptBundle& bundle) {
    if (bundle.answer.empty())
        throw std::invalid_argument("prompt bundle requires a non-empty answer");
    if (!is_registered_profile(bundle.profile))
        throw ConfigError("unknown render profile: " + bundle.profile);
    RenderedPrompt r;
    r.prefix = bundle.system + "\n\n" + bundle.question + "\n\n<think>" +
               bundle.cot + "</think>\nAnswer:";
    r.answer_span = " " + bundle.answer;
    return r;
}

std::size_t ScoringBackend::count_tokens(const std::string& text) const {
    return whitespace_token_count(text);
}

void ScoringBackend::throw_cannot_generate() {
    throw BackendCannotGenerate("backend only scores; it cannot generate answers");
}

std::string logprob_result_to_json(const LogProbResult& r) {
    nlohmann::json j;
    j["sum_logprob"] = r.sum_logprob;
    j["token_count"] = r.token_count;
    j["backend_id"] = r.backend_id;
    j["mean_logprob"] = r.mean_logprob;
    nlohmann::json toks = nlohmann::json::array();
    for (const auto& [tok, lp] : r.per_token)
        toks.push_back(nlohmann::json::array({tok, lp}));
    j["per_token"] = toks;
    return j.dump();
}

LogProbResult logprob_result_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    LogProbResult r;
    r.sum_logprob = j.at("sum_logprob").get<double>();
    r.token_count = j.at("token_count").get<std::size_t>();
    r.backend_id = j.at("backend_id").get<std::string>();
    r.mean_logprob = j.at("mean_logprob").get<double>();
    for (const auto& entry : j.at("per_token"))
        r.per_token.emplace_back(entry.at(0).get<std::string>(),
                                 entry.at(1).get<double>());
    return r;
}

// -- cache ---------------------------------------------------------------------

namespace {
const char* kCacheFile = "scores.jsonl";
}

ScoreCache::ScoreCache(std::string dir) : dir_(std::move(dir)) {
    if (dir_.empty()) return;
    const auto path = std::filesystem::path(dir_) / kCacheFile;
    if (!std::filesystem::exists(path)) return;
    for (const auto& line : split_lines(read_text_file(path.string()))) {
        if (trim(line).empty()) continue;
        const auto j = nlohmann::json::parse(line);
        entries_[j.at("key").get<std::string>()] =
            logprob_result_from_json(j.at("result").dump());
    }
}

std::string ScoreCache::key_of(const std::string& backend_id,
                               const std::string& rendered_text,
                               const std::string& answer_span) {
    // Length-prefixed concatenation keeps the key a pure content function.
    const std::string blob = std::to_string(backend_id.size()) + ":" + backend_id +
                             "|" + std::to_string(rendered_text.size()) + ":" +
                             rendered_text + "|" +
                             std::to_string(answer_span.size()) + ":" + answer_span;
    return fnv1a64_hex(blob);
}

std::optional<LogProbResult> ScoreCache::lookup(const std::string& key) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void ScoreCache::store(const std::string& key, const LogProbResult& result) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (!entries_.emplace(key, result).second) return;  // already persisted
    if (dir_.empty()) return;
    nlohmann::json j;
    j["key"] = key;
    j["result"] = nlohmann::json::parse(logprob_result_to_json(result));
    append_text_file((std::filesystem::path(dir_) / kCacheFile).string(),
                     j.dump() + "\n");
}

CachedBackend::CachedBackend(std::shared_ptr<ScoringBackend> inner,
                             std::shared_ptr<ScoreCache> cache)
    : inner_(std::move(inner)), cache_(std::move(cache)) {}

std::string CachedBackend::id() const { return inner_->id(); }

LogProbResult CachedBackend::score(const PromptBundle& bundle) {
    const RenderedPrompt rendered = render_prompt(bundle);
    const std::string key =
        ScoreCache::key_of(inner_->id(), rendered.prefix + rendered.answer_span,
                           rendered.answer_span);
    if (auto hit = cache_->lookup(key)) return *hit;
    LogProbResult result = inner_->score(bundle);
    {
        std::lock_guard<std::mutex> lock(mutex_);
        ++calls_;
    }
    cache_->store(key, result);
    return result;
}

std::size_t CachedBackend::count_tokens(const std::string& text) const {
    return inner_->count_tokens(text);
}

bool CachedBackend::can_generate() const { return inner_->can_generate(); }

std::string CachedBackend::generate_answer(const PromptBundle& bundle) {
    return inner_->generate_answer(bundle);
}

std::size_t CachedBackend::scoring_calls() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return calls_;
}

}  // namespace cotclinic
