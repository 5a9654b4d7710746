#pragma once

#include "fairchess/solver.hpp"
#include "fairchess/study.hpp"

#include <string>

namespace fairchess {

struct RunConfig {
    EngineConfig engine;
    std::string schedule = "balanced";
    WaiverMode waiver_mode = WaiverMode::WaiveRestriction;
    SolveLimits limits;
    int study_depth = 30;
    int study_tolerance = 30;
    int study_workers = 1;
    std::string study_lines;
    std::string output_dir = "out";

    /// Throws Error on an invalid combination.
    void validate() const;
};

/// Sections: engine {path, args, threads, hash_mb, options, timeout_s},
/// schedule, waiver_mode, solver {nodes, table, depth},
/// study {depth, tolerance, workers, lines}, output_dir. Missing keys keep
/// defaults; relative study paths resolve against the config file.
RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& json_text, const std::string& base_dir = ".");

/// FAIRCHESS_ENGINE, when set and non-empty, replaces the engine path.
void apply_environment(RunConfig& config);

}  // namespace fairchess
