#include "fairchess/config.hpp"

#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fairchess {

void RunConfig::validate() const {
    if (engine.threads < 1) throw Error("engine.threads must be positive");
    if (engine.hash_mb < 1) throw Error("engine.hash_mb must be positive");
    if (engine.timeout.count() <= 0) throw Error("engine.timeout_s must be positive");
    if (study_depth < 1) throw Error("study.depth must be positive");
    if (study_tolerance < 0) throw Error("study.tolerance must be non-negative");
    if (study_workers < 1) throw Error("study.workers must be positive");
    if (output_dir.empty()) throw Error("output_dir must not be empty");
    limits.validate();
    MoveSchedule::from_token(schedule);
}

RunConfig parse_run_config(const std::string& json_text, const std::string& base_dir) {
    RunConfig c;
    try {
        const auto j = nlohmann::json::parse(json_text);
        if (auto e = j.find("engine"); e != j.end()) {
            c.engine.path = e->value("path", c.engine.path);
            c.engine.args = e->value("args", c.engine.args);
            c.engine.threads = e->value("threads", c.engine.threads);
            c.engine.hash_mb = e->value("hash_mb", c.engine.hash_mb);
            if (auto o = e->find("options"); o != e->end())
                for (const auto& [k, v] : o->items())
                    c.engine.options[k] = v.is_string() ? v.get<std::string>() : v.dump();
            if (e->contains("timeout_s"))
                c.engine.timeout = std::chrono::milliseconds(
                    static_cast<long long>(e->at("timeout_s").get<double>() * 1000));
        }
        c.schedule = j.value("schedule", c.schedule);
        if (j.contains("waiver_mode")) c.waiver_mode = parse_waiver_mode(j["waiver_mode"].get<std::string>());
        if (auto s = j.find("solver"); s != j.end()) {
            c.limits.node_budget = s->value("nodes", c.limits.node_budget);
            c.limits.table_capacity = s->value("table", c.limits.table_capacity);
            if (s->contains("depth") && !s->at("depth").is_null()) c.limits.max_depth = s->at("depth").get<int>();
        }
        if (auto s = j.find("study"); s != j.end()) {
            c.study_depth = s->value("depth", c.study_depth);
            c.study_tolerance = s->value("tolerance", c.study_tolerance);
            c.study_workers = s->value("workers", c.study_workers);
            c.study_lines = s->value("lines", c.study_lines);
        }
        c.output_dir = j.value("output_dir", c.output_dir);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("config: ") + e.what());
    }
    if (!c.study_lines.empty() && std::filesystem::path(c.study_lines).is_relative())
        c.study_lines = (std::filesystem::path(base_dir) / c.study_lines).lexically_normal().string();
    c.validate();
    return c;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str(), std::filesystem::path(path).parent_path().string());
}

void apply_environment(RunConfig& config) {
    if (const char* p = std::getenv("FAIRCHESS_ENGINE"); p && *p) config.engine.path = p;
}

}  // namespace fairchess
