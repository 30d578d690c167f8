#include "cotclinic/config.hpp"

#include <cstdio>
#include <cstdlib>

#include "cotclinic/errors.hpp"
#include "cotclinic/util.hpp"

namespace cotclinic {

std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> pairs;
    for (const auto& raw : split_lines(text)) {
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == '[') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line lacks '=': " + line);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        const std::size_t comment = value.find(" #");
        if (comment != std::string::npos) value = trim(value.substr(0, comment));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        if (key.empty()) throw ConfigError("config line has an empty key: " + line);
        pairs[key] = value;
    }
    return pairs;
}

namespace {

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "' is not a number: " + value);
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "' is not an integer: " + value);
    }
}

std::vector<double> parse_checkpoints(const std::string& value) {
    std::vector<double> out;
    std::string current;
    for (char c : value + ",") {
        if (c == ',') {
            const std::string item = trim(current);
            if (!item.empty()) out.push_back(parse_double("checkpoints", item));
            current.clear();
        } else {
            current += c;
        }
    }
    if (out.empty()) throw ConfigError("checkpoints list is empty");
    return out;
}

void apply_pair(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "backend") cfg.backend = value;
    else if (key == "organism") cfg.organism = to_lower(value);
    else if (key == "task") {
        const auto kind = task_kind_from_name(value);
        if (!kind) throw ConfigError("unknown task: " + value);
        cfg.task = *kind;
    } else if (key == "n") cfg.n = static_cast<std::size_t>(parse_u64(key, value));
    else if (key == "seed") cfg.seed = parse_u64(key, value);
    else if (key == "rollouts") cfg.rollouts = static_cast<std::size_t>(parse_u64(key, value));
    else if (key == "paraphrase_provider") cfg.paraphrase_provider = to_lower(value);
    else if (key == "paraphrase_strength") cfg.paraphrase_strength = parse_double(key, value);
    else if (key == "parallelism") cfg.parallelism = static_cast<std::size_t>(parse_u64(key, value));
    else if (key == "out_dir") cfg.out_dir = value;
    else if (key == "cache_dir") cfg.cache_dir = value;
    else if (key == "sim_base_lp") cfg.sim_base_lp = parse_double(key, value);
    else if (key == "sim_content_bonus") cfg.sim_content_bonus = parse_double(key, value);
    else if (key == "sim_length_bonus") cfg.sim_length_bonus = parse_double(key, value);
    else if (key == "sim_noise") cfg.sim_noise = parse_double(key, value);
    else if (key == "sim_mix") cfg.sim_mix = parse_double(key, value);
    else if (key == "checkpoints") cfg.checkpoints = parse_checkpoints(value);
    else if (key == "tau") cfg.tau = parse_double(key, value);
    else if (key == "remote_endpoint") cfg.remote_endpoint = value;
    else if (key == "remote_model") cfg.remote_model = value;
    else if (key == "remote_api_key") cfg.remote_api_key = value;
    else if (key == "remote_retries") cfg.remote_retries = static_cast<int>(parse_u64(key, value));
    else if (key == "paraphrase_endpoint") cfg.paraphrase_endpoint = value;
    else if (key == "paraphrase_model") cfg.paraphrase_model = value;
    else if (key == "paraphrase_api_key") cfg.paraphrase_api_key = value;
    else if (key == "gemini_endpoint") cfg.gemini_endpoint = value;
    else if (key == "gemini_model") cfg.gemini_model = value;
    else if (key == "gemini_api_key") cfg.gemini_api_key = value;
    else throw ConfigError("unknown config key: " + key);
}

const char* kEnvKeys[] = {
    "backend",     "organism",   "task",     "n",        "seed",     "rollouts", "paraphrase_provider",
    "paraphrase_strength", "parallelism", "out_dir", "cache_dir", "sim_base_lp",
    "sim_content_bonus", "sim_length_bonus", "sim_noise", "sim_mix",
    "checkpoints", "tau", "remote_endpoint", "remote_model", "remote_api_key",
    "remote_retries", "paraphrase_endpoint", "paraphrase_model",
    "paraphrase_api_key", "gemini_endpoint", "gemini_model", "gemini_api_key"};

}  // namespace

RunConfig resolve_config(const std::optional<std::string>& config_path,
                         const std::map<std::string, std::string>& overrides) {
    RunConfig cfg;
    if (config_path) {
        for (const auto& [key, value] : parse_config_text(read_text_file(*config_path)))
            apply_pair(cfg, key, value);
    }
    for (const char* key : kEnvKeys) {
        std::string env_name = "COTCLINIC_" + to_lower(key);
        for (auto& c : env_name) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        if (const char* value = std::getenv(env_name.c_str()))
            apply_pair(cfg, key, value);
    }
    // PARAPHRASE_PROVIDER keeps its own dedicated variable.
    if (const char* provider = std::getenv("PARAPHRASE_PROVIDER"))
        cfg.paraphrase_provider = to_lower(provider);
    for (const auto& [key, value] : overrides) apply_pair(cfg, key, value);
    if (cfg.cache_dir.empty()) cfg.cache_dir = cfg.out_dir + "/cache";
    validate_config(cfg);
    return cfg;
}

void validate_config(const RunConfig& cfg) {
    if (cfg.n < 1) throw ConfigError("n must be at least 1");
    if (cfg.rollouts < 1) throw ConfigError("rollouts must be at least 1");
    if (cfg.parallelism < 1) throw ConfigError("parallelism must be at least 1");
    if (cfg.paraphrase_strength <= 0.0 || cfg.paraphrase_strength >= 1.0)
        throw ConfigError("paraphrase_strength must lie in (0, 1)");
    if (cfg.sim_mix < 0.0 || cfg.sim_mix > 1.0)
        throw ConfigError("sim_mix must lie in [0, 1]");
    if (cfg.sim_noise < 0.0) throw ConfigError("sim_noise must be non-negative");
    if (cfg.checkpoints.empty()) throw ConfigError("checkpoints must be non-empty");
    for (double c : cfg.checkpoints)
        if (c < 0.0 || c > 1.0)
            throw ConfigError("checkpoint mix values must lie in [0, 1]");
    if (cfg.tau <= 0.0) throw ConfigError("tau must be positive");
    const bool simulant = cfg.backend.rfind("simulant:", 0) == 0;
    if (simulant) {
        if (!simulant_organism(cfg.backend))
            throw ConfigError("unknown simulant organism in backend spec: " +
                              cfg.backend);
    } else if (cfg.backend == "remote") {
        if (cfg.remote_endpoint.empty())
            throw ConfigError("remote backend requires remote_endpoint");
    } else {
        throw ConfigError("backend must be 'remote' or 'simulant:<organism>'");
    }
    if (cfg.paraphrase_provider != "naive" && cfg.paraphrase_provider != "openai" &&
        cfg.paraphrase_provider != "gemini")
        throw ConfigError("paraphrase_provider must be naive, openai, or gemini");
    if (!organism_from_name(cfg.organism))
        throw ConfigError("unknown organism: " + cfg.organism);
}

std::string config_to_text(const RunConfig& cfg) {
    auto num = [](double v) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    std::string checkpoints;
    for (std::size_t i = 0; i < cfg.checkpoints.size(); ++i) {
        if (i > 0) checkpoints += ",";
        checkpoints += num(cfg.checkpoints[i]);
    }
    std::string out;
    out += "backend = " + cfg.backend + "\n";
    out += "organism = " + cfg.organism + "\n";
    out += "task = " + task_kind_name(cfg.task) + "\n";
    out += "n = " + std::to_string(cfg.n) + "\n";
    out += "seed = " + std::to_string(cfg.seed) + "\n";
    out += "rollouts = " + std::to_string(cfg.rollouts) + "\n";
    out += "paraphrase_provider = " + cfg.paraphrase_provider + "\n";
    out += "paraphrase_strength = " + num(cfg.paraphrase_strength) + "\n";
    out += "sim_base_lp = " + num(cfg.sim_base_lp) + "\n";
    out += "sim_content_bonus = " + num(cfg.sim_content_bonus) + "\n";
    out += "sim_length_bonus = " + num(cfg.sim_length_bonus) + "\n";
    out += "sim_noise = " + num(cfg.sim_noise) + "\n";
    out += "sim_mix = " + num(cfg.sim_mix) + "\n";
    out += "checkpoints = " + checkpoints + "\n";
    out += "tau = " + num(cfg.tau) + "\n";
    out += "remote_endpoint = " + cfg.remote_endpoint + "\n";
    out += "remote_model = " + cfg.remote_model + "\n";
    out += "remote_retries = " + std::to_string(cfg.remote_retries) + "\n";
    out += "paraphrase_endpoint = " + cfg.paraphrase_endpoint + "\n";
    out += "paraphrase_model = " + cfg.paraphrase_model + "\n";
    out += "gemini_endpoint = " + cfg.gemini_endpoint + "\n";
    out += "gemini_model = " + cfg.gemini_model + "\n";
    return out;
}

std::string config_hash(const RunConfig& cfg) {
    return fnv1a64_hex(config_to_text(cfg));
}

std::optional<OrganismKind> simulant_organism(const std::string& backend_spec) {
    const std::string prefix = "simulant:";
    if (backend_spec.rfind(prefix, 0) != 0) return std::nullopt;
    return organism_from_name(backend_spec.substr(prefix.size()));
}

}  // namespace cotclinic
