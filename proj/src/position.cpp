#include "fairchess/position.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <sstream>

namespace fairchess {

namespace {

constexpr std::array<std::array<int, 2>, 8> kKnightSteps{
    {{1, 2}, {2, 1}, {2, -1}, {1, -2}, {-1, -2}, {-2, -1}, {-2, 1}, {-1, 2}}};
constexpr std::array<std::array<int, 2>, 8> kKingSteps{
    {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};
constexpr std::array<std::array<int, 2>, 4> kOrthogonal{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
constexpr std::array<std::array<int, 2>, 4> kDiagonal{{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};
constexpr std::array<PieceKind, 4> kPromotions{PieceKind::Knight, PieceKind::Bishop, PieceKind::Rook,
                                              PieceKind::Queen};

constexpr int forward(Color c) { return c == Color::White ? 1 : -1; }

int back_rank(Color c, BoardDims d) { return c == Color::White ? 0 : d.ranks - 1; }
int pawn_start_rank(Color c, BoardDims d) { return c == Color::White ? 1 : d.ranks - 2; }
int promotion_rank(Color c, BoardDims d) { return c == Color::White ? d.ranks - 1 : 0; }

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

int parse_counter(std::string_view s, const char* what) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || v < 0)
        throw FenError(std::string("bad ") + what + " field '" + std::string(s) + "'");
    return v;
}

}  // namespace

std::string_view status_name(GameStatus s) {
    switch (s) {
        case GameStatus::Ongoing: return "ongoing";
        case GameStatus::Checkmate: return "checkmate";
        case GameStatus::Stalemate: return "stalemate";
        case GameStatus::DrawFiftyMove: return "fifty-move";
        case GameStatus::DrawInsufficientMaterial: return "insufficient-material";
    }
    return "?";
}

Position Position::startpos() {
    return from_fen("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1");
}

Position Position::from_fen(std::string_view fen, bool allow_opponent_in_check) {
    const auto fields = split_ws(fen);
    if (fields.size() != 6 && fields.size() != 4)
        throw FenError("FEN needs 6 fields (or 4 without counters): '" + std::string(fen) + "'");

    Position p;
    std::vector<std::string_view> rows;
    {
        std::string_view placement = fields[0];
        std::size_t start = 0;
        for (std::size_t i = 0; i <= placement.size(); ++i) {
            if (i == placement.size() || placement[i] == '/') {
                rows.push_back(placement.substr(start, i - start));
                start = i + 1;
            }
        }
    }
    if (rows.empty() || rows.size() > static_cast<std::size_t>(kMaxRanks))
        throw FenError("FEN placement must have 1..8 ranks");
    const int ranks = static_cast<int>(rows.size());
    int files = -1;
    for (int row = 0; row < ranks; ++row) {
        const int rank = ranks - 1 - row;
        int file = 0;
        for (char c : rows[static_cast<std::size_t>(row)]) {
            if (c >= '1' && c <= '8') {
                file += c - '0';
            } else if (auto piece = piece_from_char(c)) {
                if (file >= kMaxFiles) throw FenError("FEN rank too long");
                p.set(Square(file, rank), *piece);
                ++file;
            } else {
                throw FenError(std::string("bad FEN placement character '") + c + "'");
            }
            if (file > kMaxFiles) throw FenError("FEN rank too long");
        }
        if (files < 0) files = file;
        if (file != files || file == 0) throw FenError("FEN ranks have inconsistent widths");
    }
    p.dims_ = BoardDims{files, ranks};

    if (fields[1] == "w") p.side_ = Color::White;
    else if (fields[1] == "b") p.side_ = Color::Black;
    else throw FenError("bad side-to-move field '" + std::string(fields[1]) + "'");

    if (fields[2] != "-") {
        for (char c : fields[2]) {
            bool* flag = nullptr;
            switch (c) {
                case 'K': flag = &p.castling_.white_king; break;
                case 'Q': flag = &p.castling_.white_queen; break;
                case 'k': flag = &p.castling_.black_king; break;
                case 'q': flag = &p.castling_.black_queen; break;
                default: throw FenError(std::string("bad castling character '") + c + "'");
            }
            if (*flag) throw FenError("duplicate castling right");
            *flag = true;
        }
    }

    if (fields[3] != "-") {
        auto sq = Square::parse(fields[3]);
        if (!sq || !sq->on(p.dims_)) throw FenError("bad en-passant field '" + std::string(fields[3]) + "'");
        p.ep_ = sq;
    }

    if (fields.size() == 6) {
        p.halfmove_ = parse_counter(fields[4], "halfmove");
        p.fullmove_ = parse_counter(fields[5], "fullmove");
        if (p.fullmove_ < 1) throw FenError("fullmove number must be >= 1");
    }

    p.validate(allow_opponent_in_check);
    return p;
}

void Position::validate(bool allow_opponent_in_check) const {
    const auto d = dims_;
    if (d.files < 1 || d.files > kMaxFiles || d.ranks < 1 || d.ranks > kMaxRanks)
        throw FenError("board dimensions out of range");

    int kings[2] = {0, 0};
    for (int idx = 0; idx < 64; ++idx) {
        const Piece pc = board_[static_cast<std::size_t>(idx)];
        if (pc.empty()) continue;
        const Square s = Square::from_index(idx);
        if (!s.on(d)) throw FenError("piece outside the board");
        if (pc.kind() == PieceKind::King) ++kings[static_cast<int>(pc.color())];
        if (pc.kind() == PieceKind::Pawn && (s.rank == 0 || s.rank == d.ranks - 1))
            throw FenError("pawn on first or last rank at " + s.name());
    }
    if (kings[0] != 1 || kings[1] != 1) throw FenError("each side needs exactly one king");

    const Square wk = *king_square(Color::White);
    const Square bk = *king_square(Color::Black);
    if (std::abs(wk.file - bk.file) <= 1 && std::abs(wk.rank - bk.rank) <= 1)
        throw FenError("kings are adjacent");

    if (castling_.any()) {
        if (d.files != 8) throw FenError("castling requires an 8-file board");
        auto check = [&](bool right, Color c, int rook_file) {
            if (!right) return;
            const int r = back_rank(c, d);
            if (!at(Square(4, r)).is(c, PieceKind::King) || !at(Square(rook_file, r)).is(c, PieceKind::Rook))
                throw FenError("castling right without king and rook on their home squares");
        };
        check(castling_.white_king, Color::White, 7);
        check(castling_.white_queen, Color::White, 0);
        check(castling_.black_king, Color::Black, 7);
        check(castling_.black_queen, Color::Black, 0);
    }

    if (ep_) {
        const Color pusher = ~side_;
        const int dir = forward(pusher);
        const int target_rank = pawn_start_rank(pusher, d) + dir;
        const Square pawn_sq(ep_->file, target_rank + dir);
        const Square origin(ep_->file, target_rank - dir);
        if (d.ranks < 5 || ep_->rank != target_rank || !at(*ep_).empty() || !at(origin).empty() ||
            !pawn_sq.on(d) || !at(pawn_sq).is(pusher, PieceKind::Pawn))
            throw FenError("en-passant target " + ep_->name() + " does not follow a double pawn step");
    }

    if (!allow_opponent_in_check && in_check(~side_)) throw FenError("side not to move is in check");
}

std::string Position::fen() const {
    std::ostringstream os;
    for (int r = dims_.ranks - 1; r >= 0; --r) {
        int empty = 0;
        for (int f = 0; f < dims_.files; ++f) {
            const Piece pc = at(Square(f, r));
            if (pc.empty()) {
                ++empty;
                continue;
            }
            if (empty) os << empty;
            empty = 0;
            os << piece_char(pc);
        }
        if (empty) os << empty;
        if (r > 0) os << '/';
    }
    os << ' ' << color_char(side_) << ' ';
    if (!castling_.any()) {
        os << '-';
    } else {
        if (castling_.white_king) os << 'K';
        if (castling_.white_queen) os << 'Q';
        if (castling_.black_king) os << 'k';
        if (castling_.black_queen) os << 'q';
    }
    os << ' ' << (ep_ ? ep_->name() : std::string("-")) << ' ' << halfmove_ << ' ' << fullmove_;
    return os.str();
}

std::optional<Square> Position::king_square(Color c) const {
    const Piece k(c, PieceKind::King);
    for (int idx = 0; idx < 64; ++idx)
        if (board_[static_cast<std::size_t>(idx)] == k) return Square::from_index(idx);
    return std::nullopt;
}

bool Position::attacked_by(Square s, Color by) const {
    const int pawn_rank = s.rank - forward(by);
    for (int df : {-1, 1}) {
        const Square q(s.file + df, pawn_rank);
        if (q.on(dims_) && at(q).is(by, PieceKind::Pawn)) return true;
    }
    for (auto [df, dr] : kKnightSteps) {
        const Square q(s.file + df, s.rank + dr);
        if (q.on(dims_) && at(q).is(by, PieceKind::Knight)) return true;
    }
    for (auto [df, dr] : kKingSteps) {
        const Square q(s.file + df, s.rank + dr);
        if (q.on(dims_) && at(q).is(by, PieceKind::King)) return true;
    }
    auto ray_hits = [&](const auto& dirs, PieceKind slider) {
        for (auto [df, dr] : dirs) {
            Square q(s.file + df, s.rank + dr);
            while (q.on(dims_)) {
                const Piece pc = at(q);
                if (!pc.empty()) {
                    if (pc.color() == by && (pc.kind() == slider || pc.kind() == PieceKind::Queen)) return true;
                    break;
                }
                q = Square(q.file + df, q.rank + dr);
            }
        }
        return false;
    };
    return ray_hits(kOrthogonal, PieceKind::Rook) || ray_hits(kDiagonal, PieceKind::Bishop);
}

bool Position::in_check(Color c) const {
    auto k = king_square(c);
    return k && attacked_by(*k, ~c);
}

void Position::add_pawn_moves(Square from, std::vector<Move>& out) const {
    const int dir = forward(side_);
    const int last = promotion_rank(side_, dims_);
    auto push = [&](Square to, std::uint8_t flags) {
        if (to.rank == last) {
            for (PieceKind k : kPromotions) out.push_back(Move{from, to, k, flags});
        } else {
            out.push_back(Move{from, to, PieceKind::None, flags});
        }
    };

    const Square one(from.file, from.rank + dir);
    if (one.on(dims_) && at(one).empty()) {
        push(one, 0);
        const Square two(from.file, from.rank + 2 * dir);
        if (dims_.ranks >= 5 && from.rank == pawn_start_rank(side_, dims_) && two.on(dims_) && at(two).empty())
            out.push_back(Move{from, two, PieceKind::None, move_flags::kDoublePawnStep});
    }
    for (int df : {-1, 1}) {
        const Square to(from.file + df, from.rank + dir);
        if (!to.on(dims_)) continue;
        const Piece target = at(to);
        if (!target.empty()) {
            if (target.color() != side_ && target.kind() != PieceKind::King) push(to, move_flags::kCapture);
        } else if (ep_ && *ep_ == to && at(Square(to.file, from.rank)).is(~side_, PieceKind::Pawn)) {
            out.push_back(Move{from, to, PieceKind::None,
                               static_cast<std::uint8_t>(move_flags::kCapture | move_flags::kEnPassant)});
        }
    }
}

void Position::add_castles(std::vector<Move>& out) const {
    if (dims_.files != 8) return;
    const int r = back_rank(side_, dims_);
    const Square king(4, r);
    if (!at(king).is(side_, PieceKind::King)) return;
    const bool white = side_ == Color::White;
    const bool k_side = white ? castling_.white_king : castling_.black_king;
    const bool q_side = white ? castling_.white_queen : castling_.black_queen;
    if (!k_side && !q_side) return;
    if (attacked_by(king, ~side_)) return;

    auto empty = [&](int f) { return at(Square(f, r)).empty(); };
    auto safe = [&](int f) { return !attacked_by(Square(f, r), ~side_); };
    if (k_side && at(Square(7, r)).is(side_, PieceKind::Rook) && empty(5) && empty(6) && safe(5) && safe(6))
        out.push_back(Move{king, Square(6, r), PieceKind::None, move_flags::kCastleKing});
    if (q_side && at(Square(0, r)).is(side_, PieceKind::Rook) && empty(1) && empty(2) && empty(3) && safe(3) &&
        safe(2))
        out.push_back(Move{king, Square(2, r), PieceKind::None, move_flags::kCastleQueen});
}

void Position::generate_pseudo(std::vector<Move>& out) const {
    auto step_to = [&](Square from, Square to) {
        if (!to.on(dims_)) return;
        const Piece target = at(to);
        if (target.empty()) {
            out.push_back(Move{from, to});
        } else if (target.color() != side_ && target.kind() != PieceKind::King) {
            out.push_back(Move{from, to, PieceKind::None, move_flags::kCapture});
        }
    };
    auto slide = [&](Square from, const auto& dirs) {
        for (auto [df, dr] : dirs) {
            Square to(from.file + df, from.rank + dr);
            while (to.on(dims_)) {
                const Piece target = at(to);
                if (target.empty()) {
                    out.push_back(Move{from, to});
                } else {
                    if (target.color() != side_ && target.kind() != PieceKind::King)
                        out.push_back(Move{from, to, PieceKind::None, move_flags::kCapture});
                    break;
                }
                to = Square(to.file + df, to.rank + dr);
            }
        }
    };

    for (int r = 0; r < dims_.ranks; ++r) {
        for (int f = 0; f < dims_.files; ++f) {
            const Square from(f, r);
            const Piece pc = at(from);
            if (pc.empty() || pc.color() != side_) continue;
            switch (pc.kind()) {
                case PieceKind::Pawn: add_pawn_moves(from, out); break;
                case PieceKind::Knight:
                    for (auto [df, dr] : kKnightSteps) step_to(from, Square(f + df, r + dr));
                    break;
                case PieceKind::King:
                    for (auto [df, dr] : kKingSteps) step_to(from, Square(f + df, r + dr));
                    break;
                case PieceKind::Bishop: slide(from, kDiagonal); break;
                case PieceKind::Rook: slide(from, kOrthogonal); break;
                case PieceKind::Queen:
                    slide(from, kDiagonal);
                    slide(from, kOrthogonal);
                    break;
                case PieceKind::None: break;
            }
        }
    }
    add_castles(out);
}

bool Position::leaves_king_safe(const Move& m) const {
    return !apply_unchecked(m).in_check(side_);
}

std::vector<Move> Position::legal_moves() const {
    std::vector<Move> moves;
    moves.reserve(48);
    generate_pseudo(moves);
    std::erase_if(moves, [&](const Move& m) { return !leaves_king_safe(m); });
    std::sort(moves.begin(), moves.end(), move_order_less);
    return moves;
}

Position Position::apply_unchecked(const Move& m) const {
    Position next = *this;
    const Piece mover = at(m.from);
    const Piece captured = at(m.to);

    next.ep_.reset();
    next.halfmove_ = (mover.kind() == PieceKind::Pawn || m.is_capture()) ? 0 : halfmove_ + 1;

    if (m.is_en_passant()) next.set(Square(m.to.file, m.from.rank), Piece{});
    next.set(m.from, Piece{});
    next.set(m.to, m.promotion != PieceKind::None ? Piece(side_, m.promotion) : mover);

    if (m.flags & move_flags::kCastleKing) {
        next.set(Square(7, m.from.rank), Piece{});
        next.set(Square(5, m.from.rank), Piece(side_, PieceKind::Rook));
    } else if (m.flags & move_flags::kCastleQueen) {
        next.set(Square(0, m.from.rank), Piece{});
        next.set(Square(3, m.from.rank), Piece(side_, PieceKind::Rook));
    }
    if (m.is_double_step()) next.ep_ = Square(m.from.file, (m.from.rank + m.to.rank) / 2);

    if (next.castling_.any()) {
        if (mover.kind() == PieceKind::King) {
            if (side_ == Color::White) next.castling_.white_king = next.castling_.white_queen = false;
            else next.castling_.black_king = next.castling_.black_queen = false;
        }
        auto touch = [&](Square s) {
            const int top = dims_.ranks - 1;
            if (s == Square(0, 0)) next.castling_.white_queen = false;
            if (s == Square(7, 0)) next.castling_.white_king = false;
            if (s == Square(0, top)) next.castling_.black_queen = false;
            if (s == Square(7, top)) next.castling_.black_king = false;
        };
        touch(m.from);
        if (!captured.empty()) touch(m.to);
    }

    if (side_ == Color::Black) ++next.fullmove_;
    next.side_ = ~side_;
    return next;
}

Position Position::apply_move(const Move& m) const {
    for (const Move& legal : legal_moves()) {
        if (legal.from == m.from && legal.to == m.to && legal.promotion == m.promotion)
            return apply_unchecked(legal);
    }
    throw IllegalMoveError("illegal move " + m.uci() + " in " + fen());
}

bool Position::insufficient_material() const {
    int minors = 0;
    int knights = 0;
    bool bishop_on_light = false;
    bool bishop_on_dark = false;
    for (int idx = 0; idx < 64; ++idx) {
        const Piece pc = board_[static_cast<std::size_t>(idx)];
        if (pc.empty()) continue;
        switch (pc.kind()) {
            case PieceKind::Pawn:
            case PieceKind::Rook:
            case PieceKind::Queen: return false;
            case PieceKind::Knight:
                ++minors;
                ++knights;
                break;
            case PieceKind::Bishop: {
                ++minors;
                const Square s = Square::from_index(idx);
                ((s.file + s.rank) % 2 ? bishop_on_light : bishop_on_dark) = true;
                break;
            }
            default: break;
        }
    }
    if (minors <= 1) return true;
    return knights == 0 && !(bishop_on_light && bishop_on_dark);
}

GameStatus Position::status() const {
    if (legal_moves().empty()) return in_check(side_) ? GameStatus::Checkmate : GameStatus::Stalemate;
    if (halfmove_ >= 100) return GameStatus::DrawFiftyMove;
    if (insufficient_material()) return GameStatus::DrawInsufficientMaterial;
    return GameStatus::Ongoing;
}

Position Position::with_side_to_move(Color c) const {
    Position p = *this;
    p.side_ = c;
    return p;
}

Position Position::without_ep_target() const {
    Position p = *this;
    p.ep_.reset();
    return p;
}

Position Position::with_halfmove_clock(int clock) const {
    Position p = *this;
    p.halfmove_ = clock;
    return p;
}

Position Position::mirrored() const {
    Position p;
    p.dims_ = dims_;
    for (int idx = 0; idx < 64; ++idx) {
        const Piece pc = board_[static_cast<std::size_t>(idx)];
        if (pc.empty()) continue;
        const Square s = Square::from_index(idx);
        p.set(Square(s.file, dims_.ranks - 1 - s.rank), Piece(~pc.color(), pc.kind()));
    }
    p.side_ = ~side_;
    p.castling_ = CastlingRights{castling_.black_king, castling_.black_queen, castling_.white_king,
                                 castling_.white_queen};
    if (ep_) p.ep_ = Square(ep_->file, dims_.ranks - 1 - ep_->rank);
    p.halfmove_ = halfmove_;
    p.fullmove_ = fullmove_;
    return p;
}

std::optional<Move> find_uci_move(const Position& p, std::string_view uci) {
    for (const Move& m : p.legal_moves())
        if (m.uci() == uci) return m;
    return std::nullopt;
}

}  // namespace fairchess
