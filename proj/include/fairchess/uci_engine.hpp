#pragma once

#include "fairchess/variant_state.hpp"

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fairchess {

class EngineError : public Error {
public:
    EngineError(const std::string& what, std::vector<std::string> transcript = {})
        : Error(what), transcript_(std::move(transcript)) {}
    const std::vector<std::string>& transcript() const { return transcript_; }

private:
    std::vector<std::string> transcript_;
};

struct EngineConfig {
    std::string path;
    std::vector<std::string> args;
    int threads = 1;
    int hash_mb = 16;
    std::map<std::string, std::string> options;  // extra setoption pairs
    std::chrono::milliseconds timeout{std::chrono::minutes(10)};

    bool configured() const { return !path.empty(); }
};

/// One engine evaluation, White-positive.
struct EvalResult {
    int centipawns = 0;
    int depth = 0;
    std::string engine;
    double seconds = 0.0;
    std::optional<int> mate_in_plies;  // set when the score was a mate score
    std::string bestmove;
};

/// Score as printed on an `info` line, from the side to move's point of view.
struct UciScore {
    bool mate = false;
    int value = 0;  // centipawns, or moves to mate (negative: being mated)
    bool bound = false;  // lowerbound/upperbound lines are not final
};

struct UciInfo {
    int depth = 0;
    std::optional<UciScore> score;
};

std::optional<UciInfo> parse_info_line(std::string_view line);

constexpr int kMateValue = 10000;

/// Mate scores become +-(10000 - plies); the sign is flipped for Black to move.
int normalize_score(const UciScore& s, Color side_to_move, std::optional<int>* mate_plies = nullptr);

/// A UCI engine running as a child process. The dialogue is strictly
/// request/reply; one instance must not be shared between threads.
class UciEngine {
public:
    explicit UciEngine(EngineConfig config);
    ~UciEngine();

    UciEngine(const UciEngine&) = delete;
    UciEngine& operator=(const UciEngine&) = delete;

    const std::string& name() const { return name_; }
    const std::vector<std::string>& transcript() const { return transcript_; }

    /// Searches `fen` to a fixed depth and returns the final score.
    EvalResult evaluate_fen(const std::string& fen, Color side_to_move, int depth);

private:
    void send(const std::string& line);
    std::string receive();
    std::string wait_for(std::string_view prefix);
    [[noreturn]] void fail(const std::string& what);

    EngineConfig config_;
    int pid_ = -1;
    int fd_ = -1;
    std::string buffer_;
    std::string name_;
    std::vector<std::string> transcript_;
};

/// Evaluates the position of `v`. Engines see an ordinary FEN; the schedule
/// is invisible to them.
EvalResult evaluate(const VariantState& v, int depth, UciEngine& engine);

}  // namespace fairchess
