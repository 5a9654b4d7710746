#include "fairchess/notation.hpp"

#include <cctype>
#include <regex>
#include <sstream>

namespace fairchess {

namespace {

Color standard_mover(int ply) { return ply % 2 == 1 ? Color::White : Color::Black; }

std::string annotation_text(Color c) { return c == Color::White ? "(W)" : "(B)"; }

std::optional<Color> parse_annotation(std::string_view s) {
    if (s == "(W)") return Color::White;
    if (s == "(B)") return Color::Black;
    return std::nullopt;
}

std::string san_body(const VariantState& v, const Move& m, const std::vector<Move>& legal) {
    const Position& p = v.position();
    if (m.flags & move_flags::kCastleKing) return "O-O";
    if (m.flags & move_flags::kCastleQueen) return "O-O-O";

    const Piece pc = p.at(m.from);
    std::string s;
    if (pc.kind() == PieceKind::Pawn) {
        if (m.is_capture()) {
            s += static_cast<char>('a' + m.from.file);
            s += 'x';
        }
        s += m.to.name();
        if (m.promotion != PieceKind::None) {
            s += '=';
            s += kind_char(m.promotion);
        }
        return s;
    }

    s += kind_char(pc.kind());
    bool clash = false;
    bool same_file = false;
    bool same_rank = false;
    for (const Move& o : legal) {
        if (o.to != m.to || o.from == m.from || p.at(o.from).kind() != pc.kind()) continue;
        clash = true;
        same_file |= o.from.file == m.from.file;
        same_rank |= o.from.rank == m.from.rank;
    }
    if (clash) {
        if (!same_file) s += static_cast<char>('a' + m.from.file);
        else if (!same_rank) s += static_cast<char>('1' + m.from.rank);
        else s += m.from.name();
    }
    if (m.is_capture()) s += 'x';
    s += m.to.name();
    return s;
}

std::string strip_suffix(std::string_view san) {
    while (!san.empty() && (san.back() == '+' || san.back() == '#' || san.back() == '!' || san.back() == '?'))
        san.remove_suffix(1);
    return std::string(san);
}

struct SanPattern {
    PieceKind kind = PieceKind::Pawn;
    int from_file = -1;
    int from_rank = -1;
    Square to;
    PieceKind promotion = PieceKind::None;
    std::uint8_t castle = 0;
};

std::optional<SanPattern> parse_pattern(const std::string& body) {
    SanPattern pat;
    if (body == "O-O" || body == "0-0") {
        pat.castle = move_flags::kCastleKing;
        return pat;
    }
    if (body == "O-O-O" || body == "0-0-0") {
        pat.castle = move_flags::kCastleQueen;
        return pat;
    }
    static const std::regex re(R"(^([NBRQK])?([a-h])?([1-8])?x?([a-h][1-8])(?:=?([NBRQ]))?$)");
    std::smatch m;
    if (!std::regex_match(body, m, re)) return std::nullopt;
    if (m[1].matched) pat.kind = *kind_from_char(m[1].str()[0]);
    if (m[2].matched) pat.from_file = m[2].str()[0] - 'a';
    if (m[3].matched) pat.from_rank = m[3].str()[0] - '1';
    pat.to = *Square::parse(m[4].str());
    if (m[5].matched) pat.promotion = *kind_from_char(m[5].str()[0]);
    if (pat.kind != PieceKind::Pawn && pat.promotion != PieceKind::None) return std::nullopt;
    return pat;
}

std::vector<Move> matching(const Position& p, const SanPattern& pat, const std::vector<Move>& moves) {
    std::vector<Move> out;
    for (const Move& m : moves) {
        if (pat.castle) {
            if (m.flags & pat.castle) out.push_back(m);
            continue;
        }
        if (m.is_castle()) continue;
        if (m.to != pat.to || p.at(m.from).kind() != pat.kind || m.promotion != pat.promotion) continue;
        if (pat.from_file >= 0 && m.from.file != pat.from_file) continue;
        if (pat.from_rank >= 0 && m.from.rank != pat.from_rank) continue;
        out.push_back(m);
    }
    return out;
}

}  // namespace

std::vector<LineToken> tokenize_line(std::string_view text) {
    static const std::regex label_re(R"(^(\d+)\.(\.\.)?)");
    std::vector<LineToken> out;
    std::string pending_label;
    std::istringstream is{std::string(text)};
    std::string word;
    while (is >> word) {
        std::smatch m;
        if (std::regex_search(word, m, label_re)) {
            pending_label = m.str(0);
            word = m.suffix().str();
            if (word.empty()) continue;
        }
        if (auto ann = parse_annotation(word)) {
            if (out.empty() || out.back().annotation)
                throw NotationError(NotationErrorKind::Syntax, 0, "annotation " + word + " does not follow a move");
            out.back().annotation = ann;
            continue;
        }
        std::optional<Color> glued;
        if (word.size() > 3) {
            glued = parse_annotation(std::string_view(word).substr(word.size() - 3));
            if (glued) word.resize(word.size() - 3);
        }
        out.push_back(LineToken{std::exchange(pending_label, {}), word, glued});
    }
    return out;
}

std::string to_san(const VariantState& v, const Move& m) {
    const auto legal = v.candidate_moves().moves;
    std::string s = san_body(v, m, legal);
    const VariantState next = v.play(m);
    const Outcome o = next.outcome();
    if (o == Outcome::win_for(v.mover()) && next.position().in_check(~v.mover())) s += '#';
    else if (next.position().in_check(~v.mover())) s += '+';
    return s;
}

Move from_san(const VariantState& v, std::string_view san) {
    const int ply = v.next_ply();
    const std::string body = strip_suffix(san);
    const auto pat = parse_pattern(body);
    if (!pat)
        throw NotationError(NotationErrorKind::Syntax, ply, "cannot read SAN '" + std::string(san) + "' at ply " +
                                                                std::to_string(ply));

    const Position& p = v.position();
    const auto restricted = matching(p, *pat, v.candidate_moves().moves);
    if (restricted.size() == 1) return restricted.front();
    if (restricted.size() > 1)
        throw NotationError(NotationErrorKind::Ambiguous, ply,
                            "ambiguous SAN '" + std::string(san) + "' at ply " + std::to_string(ply));

    const auto raw = matching(p, *pat, v.unrestricted_moves());
    if (!raw.empty()) {
        const bool capture = raw.front().is_capture();
        throw NotationError(NotationErrorKind::Restriction, ply,
                            std::string(capture ? "capture on first half" : "check on first half") +
                                " of a double move: '" + std::string(san) + "' at ply " + std::to_string(ply) +
                                " (" + std::string(color_name(v.mover())) + ")");
    }
    throw NotationError(NotationErrorKind::Illegal, ply,
                        "illegal move '" + std::string(san) + "' at ply " + std::to_string(ply) + " for " +
                            std::string(color_name(v.mover())));
}

std::vector<Move> parse_line(std::string_view text, const VariantState& start) {
    std::vector<Move> moves;
    VariantState v = start;
    for (const LineToken& tok : tokenize_line(text)) {
        const int ply = v.next_ply();
        if (tok.annotation && *tok.annotation != v.mover())
            throw NotationError(NotationErrorKind::AnnotationMismatch, ply,
                                "annotation " + annotation_text(*tok.annotation) + " on '" + tok.san + "' at ply " +
                                    std::to_string(ply) + " but schedule " + v.schedule().id() + " gives " +
                                    std::string(color_name(v.mover())));
        if (v.outcome().terminal())
            throw NotationError(NotationErrorKind::Illegal, ply,
                                "move '" + tok.san + "' after the game ended at ply " + std::to_string(ply));
        const Move m = from_san(v, tok.san);
        moves.push_back(m);
        v = v.play(m);
    }
    return moves;
}

std::vector<Move> parse_line(std::string_view text, const MoveSchedule& schedule) {
    return parse_line(text, VariantState::initial(schedule));
}

std::string format_line(std::span<const Move> moves, const VariantState& start) {
    std::string out;
    VariantState v = start;
    bool first = true;
    for (const Move& m : moves) {
        const int ply = v.next_ply();
        if (!first) out += ' ';
        if (ply % 2 == 1) out += std::to_string((ply + 1) / 2) + ". ";
        else if (first) out += std::to_string(ply / 2) + "... ";
        out += to_san(v, m);
        if (v.mover() != standard_mover(ply)) out += ' ' + annotation_text(v.mover());
        v = v.play(m);
        first = false;
    }
    return out;
}

std::string format_line(std::span<const Move> moves, const MoveSchedule& schedule) {
    return format_line(moves, VariantState::initial(schedule));
}

VariantState replay(const VariantState& start, std::span<const Move> moves) {
    VariantState v = start;
    for (const Move& m : moves) v = v.play(m);
    return v;
}

}  // namespace fairchess
