#pragma once

#include "fairchess/position.hpp"
#include "fairchess/schedule.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fairchess {

/// What happens when the double-move restriction leaves no legal move.
enum class WaiverMode : std::uint8_t {
    WaiveRestriction,  // the unrestricted moves become available
    CollapseToSingle,  // same moves, and the pending second half is skipped
};

std::string_view waiver_mode_name(WaiverMode m);
WaiverMode parse_waiver_mode(std::string_view s);

struct VariantOptions {
    bool restriction_enabled = true;
    WaiverMode waiver_mode = WaiverMode::WaiveRestriction;

    friend bool operator==(const VariantOptions&, const VariantOptions&) = default;
};

/// Identity of a state for threefold repetition. `cursor` is the schedule's
/// canonical ply, so equal keys imply identical futures, not just identical
/// move lists.
struct RepetitionKey {
    std::array<Piece, 64> placement{};
    Color mover = Color::White;
    Phase phase = Phase::Single;
    std::uint8_t castling = 0;
    std::int8_t ep = -1;
    std::int16_t cursor = 0;
    std::uint64_t hash = 0;

    friend bool operator==(const RepetitionKey& a, const RepetitionKey& b) {
        return a.hash == b.hash && a.mover == b.mover && a.phase == b.phase && a.castling == b.castling &&
               a.ep == b.ep && a.cursor == b.cursor && a.placement == b.placement;
    }
};

struct RepetitionKeyHash {
    std::size_t operator()(const RepetitionKey& k) const { return static_cast<std::size_t>(k.hash); }
};

enum class DrawReason : std::uint8_t { None, Stalemate, FiftyMove, InsufficientMaterial, Threefold };

struct Outcome {
    enum class Kind : std::uint8_t { Ongoing, WhiteWins, BlackWins, Draw };

    Kind kind = Kind::Ongoing;
    DrawReason reason = DrawReason::None;

    bool terminal() const { return kind != Kind::Ongoing; }
    std::string describe() const;

    static Outcome ongoing() { return {}; }
    static Outcome win_for(Color c) { return {c == Color::White ? Kind::WhiteWins : Kind::BlackWins, DrawReason::None}; }
    static Outcome draw(DrawReason r) { return {Kind::Draw, r}; }

    friend bool operator==(const Outcome&, const Outcome&) = default;
};

class VariantError : public Error {
public:
    using Error::Error;
};

/// Thrown by `play` for a move that rules-core allows but the first half of a
/// double move forbids.
class RestrictionError : public IllegalMoveError {
public:
    RestrictionError(const std::string& what, int ply) : IllegalMoveError(what), ply_(ply) {}
    int ply() const { return ply_; }

private:
    int ply_;
};

struct VariantMoves {
    std::vector<Move> moves;
    bool waiver_applied = false;
};

/// Chess under a move schedule. The only source of legality for variant play:
/// applies the first-of-double restriction (no capture, no check), expires en
/// passant targets after one half-move, and tracks repetition history.
///
/// States are immutable; `play` returns a new state that shares history with
/// this one. History is cut after irreversible moves since no earlier key can
/// recur past them.
class VariantState {
public:
    VariantState(Position position, MoveSchedule schedule, int next_ply, VariantOptions options = {});

    static VariantState initial(MoveSchedule schedule, VariantOptions options = {});

    const Position& position() const { return pos_; }
    const MoveSchedule& schedule() const { return *schedule_; }
    int next_ply() const { return next_ply_; }
    const VariantOptions& options() const { return options_; }
    Color mover() const { return pos_.side_to_move(); }
    Phase phase() const { return schedule_->phase_at_ply(next_ply_); }

    RepetitionKey key() const { return history_->key; }
    /// Multiplicity of the current key in the repetition history.
    int repetition_count() const;
    /// Number of recorded keys since the last irreversible move (inclusive of this state).
    int history_length() const;

    /// Moves available at this state; throws VariantError on a terminal state.
    std::vector<Move> legal_moves() const;

    /// Restriction-filtered moves without the terminal check.
    VariantMoves candidate_moves() const;

    /// Rules-core moves, ignoring the double-move restriction.
    std::vector<Move> unrestricted_moves() const { return pos_.legal_moves(); }

    /// Throws IllegalMoveError (RestrictionError for restriction violations).
    VariantState play(const Move& m) const;

    /// Every legal move paired with its successor. Does not check for terminal states.
    std::vector<std::pair<Move, VariantState>> successors() const;

    /// Mate and stalemate judged on the restricted move list, then threefold,
    /// fifty-move and insufficient material.
    Outcome outcome() const;

    /// Outcome ignoring repetition and the fifty-move rule.
    Outcome static_outcome() const;

    /// Same position, schedule and ply with history reduced to this state.
    VariantState with_fresh_history() const;

    /// Colours swapped, board flipped, schedule mirrored.
    VariantState mirrored() const;

private:
    struct HistoryNode {
        RepetitionKey key;
        std::shared_ptr<const HistoryNode> prev;
    };

    VariantState() = default;
    VariantState advance(const Move& m, bool waiver_applied) const;
    RepetitionKey make_key() const;
    Outcome classify(const VariantMoves& c, bool with_history) const;

    Position pos_;
    std::shared_ptr<const MoveSchedule> schedule_;
    int next_ply_ = 1;
    VariantOptions options_;
    std::shared_ptr<const HistoryNode> history_;
};

/// Counts legal play sequences of length `depth`. Like rules-core perft, draw
/// rules do not stop the count; checkmate and stalemate end a branch.
std::uint64_t variant_perft(const VariantState& v, int depth);
std::vector<std::pair<Move, std::uint64_t>> variant_perft_divide(const VariantState& v, int depth);

/// xFEN: `<FEN> sched=<id-or-spec> ply=<n>`, single spaces. Repetition history
/// and variant options are not serialised.
std::string encode_xfen(const VariantState& v);
VariantState decode_xfen(std::string_view text, VariantOptions options = {});

}  // namespace fairchess
