#pragma once

#include "fairchess/types.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fairchess {

struct CastlingRights {
    bool white_king = false;
    bool white_queen = false;
    bool black_king = false;
    bool black_queen = false;

    constexpr std::uint8_t bits() const {
        return static_cast<std::uint8_t>(white_king | white_queen << 1 | black_king << 2 | black_queen << 3);
    }
    constexpr bool any() const { return bits() != 0; }

    friend constexpr bool operator==(CastlingRights, CastlingRights) = default;
};

enum class GameStatus : std::uint8_t {
    Ongoing,
    Checkmate,  // the side to move is mated
    Stalemate,
    DrawFiftyMove,
    DrawInsufficientMaterial,
};

std::string_view status_name(GameStatus s);

/// Full chess state on an F x R board (F, R <= 8). Positions are immutable
/// values; every transformation returns a new Position.
///
/// A Position obtained from `from_fen` or `apply_move` satisfies the usual
/// validity rules (one king each, kings apart, side not to move not in check).
/// The variant layer may relax the last rule after a waived double-move
/// restriction; move generation copes with that by never capturing a king.
class Position {
public:
    static Position startpos();
    static Position from_fen(std::string_view fen, bool allow_opponent_in_check = false);

    /// Rejects placements that violate the invariants. `allow_opponent_in_check`
    /// is used by the variant layer for the second half of a double move.
    void validate(bool allow_opponent_in_check = false) const;

    std::string fen() const;

    BoardDims dims() const { return dims_; }
    Piece at(Square s) const { return board_[static_cast<std::size_t>(s.index())]; }
    Color side_to_move() const { return side_; }
    CastlingRights castling() const { return castling_; }
    std::optional<Square> ep_target() const { return ep_; }
    int halfmove_clock() const { return halfmove_; }
    int fullmove_number() const { return fullmove_; }
    const std::array<Piece, 64>& squares() const { return board_; }

    std::optional<Square> king_square(Color c) const;

    /// Pseudo-legal attack test: is `s` attacked by any piece of colour `by`?
    bool attacked_by(Square s, Color by) const;
    bool in_check(Color c) const;

    /// Legal moves for the side to move in deterministic order.
    std::vector<Move> legal_moves() const;

    /// Applies a move that must be in `legal_moves()`; throws IllegalMoveError otherwise.
    Position apply_move(const Move& m) const;

    /// Applies a move known to come from `legal_moves()` without re-validating it.
    Position apply_unchecked(const Move& m) const;

    GameStatus status() const;
    bool insufficient_material() const;

    Position with_side_to_move(Color c) const;
    Position without_ep_target() const;
    Position with_halfmove_clock(int clock) const;

    /// Colour-flipped twin: ranks mirrored, colours swapped, side to move swapped.
    Position mirrored() const;

    friend bool operator==(const Position&, const Position&) = default;

private:
    void generate_pseudo(std::vector<Move>& out) const;
    void add_pawn_moves(Square from, std::vector<Move>& out) const;
    void add_castles(std::vector<Move>& out) const;
    bool leaves_king_safe(const Move& m) const;
    void set(Square s, Piece p) { board_[static_cast<std::size_t>(s.index())] = p; }

    std::array<Piece, 64> board_{};
    BoardDims dims_{};
    Color side_ = Color::White;
    CastlingRights castling_{};
    std::optional<Square> ep_;
    int halfmove_ = 0;
    int fullmove_ = 1;
};

inline std::vector<Move> generate_legal_moves(const Position& p) { return p.legal_moves(); }
inline Position apply_move(const Position& p, const Move& m) { return p.apply_move(m); }
inline bool in_check(const Position& p, Color c) { return p.in_check(c); }
inline GameStatus game_status(const Position& p) { return p.status(); }

/// Finds the legal move with the given UCI text, if any.
std::optional<Move> find_uci_move(const Position& p, std::string_view uci);

}  // namespace fairchess
