#pragma once

#include "fairchess/types.hpp"

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace fairchess {

enum class Phase : std::uint8_t { Single, FirstOfDouble, SecondOfDouble };

std::string_view phase_name(Phase p);

class ScheduleError : public Error {
public:
    using Error::Error;
};

/// Who moves at each ply (1-based) of an infinite, eventually periodic game:
/// a finite prefix followed by a cycle repeated forever.
///
/// Schedules are normalised on construction: the cycle is reduced to its
/// primitive period and trailing prefix symbols are folded into the cycle.
/// Two schedules compare equal iff they produce the same infinite sequence.
/// A colour may move at most twice in a row, and the cycle must contain both
/// colours.
class MoveSchedule {
public:
    MoveSchedule(std::string id, std::vector<Color> prefix, std::vector<Color> cycle);

    /// One of builtin_ids(); throws ScheduleError otherwise.
    static MoveSchedule builtin(std::string_view name);

    /// Grammar `prefix '/' cycle` over {W, B}, e.g. "WBBW/WB".
    static MoveSchedule parse(std::string_view spec);

    /// Accepts either a builtin id or a prefix/cycle spec.
    static MoveSchedule from_token(std::string_view token);

    static constexpr std::array<std::string_view, 5> builtin_ids{
        "standard", "black-favorable", "balanced", "prouhet-thue-morse", "marseillais"};

    Color mover_at_ply(int ply) const;
    Phase phase_at_ply(int ply) const;

    /// Smallest ply with the same future as `ply`: identity inside the prefix,
    /// otherwise the matching offset in the first cycle period.
    int canonical_ply(int ply) const;

    /// "prefix/cycle" in canonical form.
    std::string format() const;

    /// Builtin name if this schedule equals a builtin, otherwise format().
    const std::string& id() const { return id_; }

    /// True for the finite-state stand-in for the aperiodic Prouhet-Thue-Morse sequence.
    bool approximate() const { return approximate_; }

    const std::vector<Color>& prefix() const { return prefix_; }
    const std::vector<Color>& cycle() const { return cycle_; }

    /// Colours swapped at every ply.
    MoveSchedule mirrored() const;

    /// Number of maximal same-colour runs of length two lying entirely within plies 1..n.
    int double_moves_within(int n) const;

    friend bool operator==(const MoveSchedule& a, const MoveSchedule& b) {
        return a.prefix_ == b.prefix_ && a.cycle_ == b.cycle_;
    }

private:
    std::string id_;
    std::vector<Color> prefix_;
    std::vector<Color> cycle_;
    bool approximate_ = false;
};

inline Color mover_at_ply(const MoveSchedule& s, int ply) { return s.mover_at_ply(ply); }
inline Phase phase_at_ply(const MoveSchedule& s, int ply) { return s.phase_at_ply(ply); }

}  // namespace fairchess
