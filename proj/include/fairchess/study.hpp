#pragma once

#include "fairchess/uci_engine.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fairchess {

enum class StudyRole { Variant, Baseline };

struct StudyLine {
    std::string label;
    std::string text;
    std::string schedule = "balanced";
    int expected_cp = 0;
    int expected_depth = 0;
    StudyRole role = StudyRole::Variant;
    std::string note;
};

struct StudyRow {
    StudyLine line;
    std::string xfen;  // empty when the line failed to replay
    std::optional<EvalResult> eval;
    std::optional<int> deviation;  // |eval - expected|
    bool within_tolerance = false;
    std::string error;
};

struct StudyReport {
    std::vector<StudyRow> rows;  // same order as the input lines
    bool skipped = false;
    std::string skip_reason;
    std::string engine;
    int depth = 0;
    int tolerance = 0;
    int max_deviation = 0;
    int within_tolerance = 0;
};

struct StudyConfig {
    EngineConfig engine;
    int depth = 30;
    int tolerance = 30;
    int workers = 1;
    VariantOptions variant;
};

/// JSON array of objects: label, text, schedule, expected_cp, expected_depth,
/// role ("variant" | "baseline"), note.
std::vector<StudyLine> load_study_lines(std::istream& in);
std::vector<StudyLine> load_study_lines_file(const std::string& path);

/// Replays every line and, when an engine is configured, evaluates the final
/// position. Per-line failures go into the row; only a failure to start the
/// engine throws.
StudyReport run_study(const std::vector<StudyLine>& lines, const StudyConfig& config);

std::string study_json(const StudyReport& r);
std::string study_csv(const StudyReport& r);

}  // namespace fairchess
