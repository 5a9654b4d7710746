#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fairchess {

enum class Color : std::uint8_t { White = 0, Black = 1 };

constexpr Color operator~(Color c) { return c == Color::White ? Color::Black : Color::White; }

// Promotion ordering in move lists follows the enumerator values.
enum class PieceKind : std::uint8_t { None = 0, Pawn, Knight, Bishop, Rook, Queen, King };

// Packed piece code: 0 = empty, otherwise kind | color << 3.
struct Piece {
    std::uint8_t code = 0;

    constexpr Piece() = default;
    constexpr Piece(Color c, PieceKind k)
        : code(static_cast<std::uint8_t>(static_cast<std::uint8_t>(k) | (static_cast<std::uint8_t>(c) << 3))) {}

    constexpr bool empty() const { return code == 0; }
    constexpr PieceKind kind() const { return static_cast<PieceKind>(code & 7); }
    constexpr Color color() const { return static_cast<Color>(code >> 3); }
    constexpr bool is(Color c, PieceKind k) const { return code == Piece(c, k).code; }

    friend constexpr bool operator==(Piece, Piece) = default;
};

char piece_char(Piece p);                      // 'P', 'n', ... ; '.' for empty
std::optional<Piece> piece_from_char(char c);
char kind_char(PieceKind k);                   // upper-case letter, 'P' for pawn
std::optional<PieceKind> kind_from_char(char c);

char color_char(Color c);                      // 'w' / 'b'
std::string_view color_name(Color c);

constexpr int kMaxFiles = 8;
constexpr int kMaxRanks = 8;

struct BoardDims {
    int files = 8;
    int ranks = 8;

    friend constexpr bool operator==(BoardDims, BoardDims) = default;
};

// Squares are stored with a fixed stride of 8 regardless of board size:
// index = rank * 8 + file. a1 = 0, b1 = 1, ..., a2 = 8.
struct Square {
    std::int8_t file = 0;
    std::int8_t rank = 0;

    constexpr Square() = default;
    constexpr Square(int f, int r) : file(static_cast<std::int8_t>(f)), rank(static_cast<std::int8_t>(r)) {}

    static constexpr Square from_index(int idx) { return Square(idx & 7, idx >> 3); }
    constexpr int index() const { return rank * 8 + file; }
    constexpr bool on(BoardDims d) const { return file >= 0 && file < d.files && rank >= 0 && rank < d.ranks; }

    std::string name() const;
    static std::optional<Square> parse(std::string_view s);

    friend constexpr bool operator==(Square, Square) = default;
    friend constexpr auto operator<=>(Square a, Square b) { return a.index() <=> b.index(); }
};

namespace move_flags {
constexpr std::uint8_t kCapture = 1;
constexpr std::uint8_t kEnPassant = 2;
constexpr std::uint8_t kCastleKing = 4;
constexpr std::uint8_t kCastleQueen = 8;
constexpr std::uint8_t kDoublePawnStep = 16;
}  // namespace move_flags

struct Move {
    Square from;
    Square to;
    PieceKind promotion = PieceKind::None;
    std::uint8_t flags = 0;

    constexpr bool is_capture() const { return flags & move_flags::kCapture; }
    constexpr bool is_en_passant() const { return flags & move_flags::kEnPassant; }
    constexpr bool is_castle() const { return flags & (move_flags::kCastleKing | move_flags::kCastleQueen); }
    constexpr bool is_double_step() const { return flags & move_flags::kDoublePawnStep; }

    // Long algebraic form used by UCI, e.g. "e2e4", "e7e8q".
    std::string uci() const;

    friend constexpr bool operator==(const Move&, const Move&) = default;
};

// Deterministic move order: from-square, then to-square, then promotion kind.
constexpr bool move_order_less(const Move& a, const Move& b) {
    if (a.from.index() != b.from.index()) return a.from.index() < b.from.index();
    if (a.to.index() != b.to.index()) return a.to.index() < b.to.index();
    return a.promotion < b.promotion;
}

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FenError : public Error {
public:
    using Error::Error;
};

class IllegalMoveError : public Error {
public:
    using Error::Error;
};

}  // namespace fairchess
