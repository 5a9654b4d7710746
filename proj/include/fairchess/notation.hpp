#pragma once

#include "fairchess/variant_state.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fairchess {

enum class NotationErrorKind { Syntax, Illegal, Ambiguous, Restriction, AnnotationMismatch };

class NotationError : public Error {
public:
    NotationError(NotationErrorKind kind, int ply, const std::string& what) : Error(what), kind_(kind), ply_(ply) {}
    NotationErrorKind kind() const { return kind_; }
    /// Ply of the offending token, 0 when not tied to one.
    int ply() const { return ply_; }

private:
    NotationErrorKind kind_;
    int ply_;
};

/// One move of an annotated line: "dxe4 (B)" -> {"dxe4", Black}.
struct LineToken {
    std::string label;  // "2." when the token carried a move-number label
    std::string san;
    std::optional<Color> annotation;
};

std::vector<LineToken> tokenize_line(std::string_view text);

/// SAN for a legal move at `v`, with +/# regenerated from the successor state.
std::string to_san(const VariantState& v, const Move& m);

/// Resolves one SAN token against the legal moves of `v`.
Move from_san(const VariantState& v, std::string_view san);

/// Replays "1. e4 d5 2. dxe4 (B) Nc3 (W) 3. Nxe4" from `start`. Movers come
/// from the schedule; labels are ignored; (B)/(W) annotations must agree with
/// the schedule and are otherwise redundant.
std::vector<Move> parse_line(std::string_view text, const VariantState& start);
std::vector<Move> parse_line(std::string_view text, const MoveSchedule& schedule);

/// Inverse of parse_line: annotations appear exactly where the mover differs
/// from strict alternation.
std::string format_line(std::span<const Move> moves, const VariantState& start);
std::string format_line(std::span<const Move> moves, const MoveSchedule& schedule);

/// Plays `moves` from `start` and returns the final state.
VariantState replay(const VariantState& start, std::span<const Move> moves);

}  // namespace fairchess
