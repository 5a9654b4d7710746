#pragma once

#include "fairchess/variant_state.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fairchess {

enum class Verdict : std::uint8_t { WhiteWin, BlackWin, Draw, Unknown };

std::string_view verdict_name(Verdict v);

/// Game-theoretic value under optimal play. `distance` counts plies to the
/// forced end (mate distance for wins, 0 for draws). Unknown is an explicit
/// "budget or horizon exceeded" marker and never a fourth game value.
struct GameValue {
    Verdict verdict = Verdict::Unknown;
    int distance = 0;

    bool completed() const { return verdict != Verdict::Unknown; }
    static GameValue unknown() { return {}; }
    static GameValue draw() { return {Verdict::Draw, 0}; }
    static GameValue win_for(Color c, int distance) {
        return {c == Color::White ? Verdict::WhiteWin : Verdict::BlackWin, distance};
    }

    /// WhiteWin <-> BlackWin.
    GameValue mirrored() const;
    std::string describe() const;

    friend bool operator==(const GameValue&, const GameValue&) = default;
};

struct SolveLimits {
    std::uint64_t node_budget = 4'000'000;
    std::size_t table_capacity = 4'000'000;
    std::optional<int> max_depth;

    void validate() const;

    /// "nodes=N,table=N,depth=N" in any order; omitted keys keep defaults.
    static SolveLimits parse(std::string_view text);
};

struct SolveResult {
    GameValue value;
    std::vector<Move> principal_variation;
    std::uint64_t nodes_visited = 0;
    std::uint64_t table_hits = 0;
    std::string note;  // why the value is Unknown, when it is
};

/// Exact value of the position under its schedule and restriction semantics,
/// by backward induction over the reachable state graph. Repetition history
/// before `v` is ignored. Exceeding any limit yields Unknown, never a guess.
SolveResult solve(const VariantState& v, const SolveLimits& limits = {});

/// Plain depth-limited minimax over the same game: no pruning, no table.
/// For cross-checking `solve` on very small instances.
GameValue minimax_oracle(const VariantState& v, const SolveLimits& limits = {});

struct SolverInstance {
    std::string label;
    VariantState state;
};

/// One xFEN per line; blank lines and lines starting with '#' are skipped; a
/// trailing "# label" names the instance.
std::vector<SolverInstance> read_instances(std::istream& in);

struct ComparisonCell {
    GameValue value;
    std::uint64_t nodes = 0;
    std::string note;
};

struct ScheduleTally {
    int white_wins = 0;
    int black_wins = 0;
    int draws = 0;
    int unknown = 0;
    /// (white wins - black wins) / instances; higher favours White.
    double favorability = 0.0;
};

struct ScheduleComparison {
    std::vector<std::string> instances;
    std::vector<std::string> schedules;
    std::vector<std::vector<ComparisonCell>> cells;  // [instance][schedule]
    std::vector<ScheduleTally> tallies;              // per schedule
    std::vector<std::string> ordering;               // most White-favourable first
    /// Whether balanced's favourability lies between standard and
    /// black-favorable; empty unless all three were compared.
    std::optional<bool> balanced_between;
};

/// Solves every instance under every schedule. Instances keep their ply;
/// a schedule whose mover disagrees with the position yields an Unknown cell.
ScheduleComparison compare_schedules(const std::vector<SolverInstance>& instances,
                                     const std::vector<MoveSchedule>& schedules, const SolveLimits& limits = {},
                                     VariantOptions options = {});

std::string comparison_csv(const ScheduleComparison& c);
std::string comparison_json(const ScheduleComparison& c);
std::string comparison_summary(const ScheduleComparison& c);

}  // namespace fairchess
