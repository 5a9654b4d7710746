#include "fairchess/types.hpp"

#include <cctype>

namespace fairchess {

char kind_char(PieceKind k) {
    switch (k) {
        case PieceKind::Pawn: return 'P';
        case PieceKind::Knight: return 'N';
        case PieceKind::Bishop: return 'B';
        case PieceKind::Rook: return 'R';
        case PieceKind::Queen: return 'Q';
        case PieceKind::King: return 'K';
        case PieceKind::None: break;
    }
    return '?';
}

std::optional<PieceKind> kind_from_char(char c) {
    switch (std::toupper(static_cast<unsigned char>(c))) {
        case 'P': return PieceKind::Pawn;
        case 'N': return PieceKind::Knight;
        case 'B': return PieceKind::Bishop;
        case 'R': return PieceKind::Rook;
        case 'Q': return PieceKind::Queen;
        case 'K': return PieceKind::King;
        default: return std::nullopt;
    }
}

char piece_char(Piece p) {
    if (p.empty()) return '.';
    const char c = kind_char(p.kind());
    return p.color() == Color::White ? c : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

std::optional<Piece> piece_from_char(char c) {
    auto k = kind_from_char(c);
    if (!k) return std::nullopt;
    const Color color = std::isupper(static_cast<unsigned char>(c)) ? Color::White : Color::Black;
    return Piece(color, *k);
}

char color_char(Color c) { return c == Color::White ? 'w' : 'b'; }

std::string_view color_name(Color c) { return c == Color::White ? "White" : "Black"; }

std::string Square::name() const {
    std::string s;
    s += static_cast<char>('a' + file);
    s += static_cast<char>('1' + rank);
    return s;
}

std::optional<Square> Square::parse(std::string_view s) {
    if (s.size() != 2) return std::nullopt;
    if (s[0] < 'a' || s[0] > 'h' || s[1] < '1' || s[1] > '8') return std::nullopt;
    return Square(s[0] - 'a', s[1] - '1');
}

std::string Move::uci() const {
    std::string s = from.name() + to.name();
    if (promotion != PieceKind::None)
        s += static_cast<char>(std::tolower(static_cast<unsigned char>(kind_char(promotion))));
    return s;
}

}  // namespace fairchess
