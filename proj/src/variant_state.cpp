#include "fairchess/variant_state.hpp"

#include <algorithm>
#include <charconv>

namespace fairchess {

namespace {

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

bool same_move(const Move& a, const Move& b) {
    return a.from == b.from && a.to == b.to && a.promotion == b.promotion;
}

}  // namespace

std::string_view waiver_mode_name(WaiverMode m) {
    return m == WaiverMode::WaiveRestriction ? "waive-restriction" : "collapse-to-single";
}

WaiverMode parse_waiver_mode(std::string_view s) {
    if (s == "waive-restriction") return WaiverMode::WaiveRestriction;
    if (s == "collapse-to-single") return WaiverMode::CollapseToSingle;
    throw VariantError("unknown waiver mode '" + std::string(s) + "'");
}

std::string Outcome::describe() const {
    switch (kind) {
        case Kind::Ongoing: return "ongoing";
        case Kind::WhiteWins: return "white-wins";
        case Kind::BlackWins: return "black-wins";
        case Kind::Draw: break;
    }
    switch (reason) {
        case DrawReason::Stalemate: return "draw (stalemate)";
        case DrawReason::FiftyMove: return "draw (fifty-move)";
        case DrawReason::InsufficientMaterial: return "draw (insufficient material)";
        case DrawReason::Threefold: return "draw (threefold)";
        case DrawReason::None: break;
    }
    return "draw";
}

VariantState::VariantState(Position position, MoveSchedule schedule, int next_ply, VariantOptions options)
    : pos_(std::move(position)),
      schedule_(std::make_shared<const MoveSchedule>(std::move(schedule))),
      next_ply_(next_ply),
      options_(options) {
    if (next_ply_ < 1) throw VariantError("ply numbers start at 1");
    const Color expected = schedule_->mover_at_ply(next_ply_);
    if (pos_.side_to_move() != expected)
        throw VariantError("side to move " + std::string(color_name(pos_.side_to_move())) + " does not match schedule " +
                           schedule_->id() + " at ply " + std::to_string(next_ply_) + " (" +
                           std::string(color_name(expected)) + ")");
    pos_.validate(phase() == Phase::SecondOfDouble);
    history_ = std::make_shared<const HistoryNode>(HistoryNode{make_key(), nullptr});
}

VariantState VariantState::initial(MoveSchedule schedule, VariantOptions options) {
    return VariantState(Position::startpos(), std::move(schedule), 1, options);
}

RepetitionKey VariantState::make_key() const {
    RepetitionKey k;
    k.placement = pos_.squares();
    k.mover = pos_.side_to_move();
    k.phase = phase();
    k.castling = pos_.castling().bits();
    k.ep = pos_.ep_target() ? static_cast<std::int8_t>(pos_.ep_target()->index()) : std::int8_t{-1};
    k.cursor = static_cast<std::int16_t>(schedule_->canonical_ply(next_ply_));

    std::uint64_t h = 0xcbf29ce484222325ULL;
    h = fnv1a(h, k.placement.data(), k.placement.size());
    const std::uint8_t extra[] = {static_cast<std::uint8_t>(k.mover), static_cast<std::uint8_t>(k.phase), k.castling,
                                  static_cast<std::uint8_t>(k.ep), static_cast<std::uint8_t>(k.cursor & 0xff),
                                  static_cast<std::uint8_t>(k.cursor >> 8)};
    k.hash = fnv1a(h, extra, sizeof extra);
    return k;
}

int VariantState::repetition_count() const {
    int n = 0;
    for (const HistoryNode* node = history_.get(); node; node = node->prev.get())
        if (node->key == history_->key) ++n;
    return n;
}

int VariantState::history_length() const {
    int n = 0;
    for (const HistoryNode* node = history_.get(); node; node = node->prev.get()) ++n;
    return n;
}

VariantMoves VariantState::candidate_moves() const {
    VariantMoves out;
    out.moves = pos_.legal_moves();
    if (!options_.restriction_enabled || phase() != Phase::FirstOfDouble) return out;

    const Color me = mover();
    std::vector<Move> quiet;
    quiet.reserve(out.moves.size());
    for (const Move& m : out.moves) {
        if (m.is_capture()) continue;
        if (pos_.apply_unchecked(m).in_check(~me)) continue;
        quiet.push_back(m);
    }
    if (quiet.empty() && !out.moves.empty()) {
        out.waiver_applied = true;
        return out;
    }
    out.moves = std::move(quiet);
    return out;
}

Outcome VariantState::classify(const VariantMoves& c, bool with_history) const {
    if (c.moves.empty())
        return pos_.in_check(mover()) ? Outcome::win_for(~mover()) : Outcome::draw(DrawReason::Stalemate);
    if (with_history) {
        if (repetition_count() >= 3) return Outcome::draw(DrawReason::Threefold);
        if (pos_.halfmove_clock() >= 100) return Outcome::draw(DrawReason::FiftyMove);
    }
    if (pos_.insufficient_material()) return Outcome::draw(DrawReason::InsufficientMaterial);
    return Outcome::ongoing();
}

Outcome VariantState::outcome() const { return classify(candidate_moves(), true); }

Outcome VariantState::static_outcome() const { return classify(candidate_moves(), false); }

std::vector<Move> VariantState::legal_moves() const {
    auto c = candidate_moves();
    const Outcome o = classify(c, true);
    if (o.terminal()) throw VariantError("no moves in a terminal state (" + o.describe() + ")");
    return std::move(c.moves);
}

VariantState VariantState::advance(const Move& m, bool waiver_applied) const {
    VariantState next;
    next.schedule_ = schedule_;
    next.options_ = options_;
    next.next_ply_ =
        next_ply_ + ((waiver_applied && options_.waiver_mode == WaiverMode::CollapseToSingle) ? 2 : 1);

    const Color next_mover = schedule_->mover_at_ply(next.next_ply_);
    Position p = pos_.apply_unchecked(m).with_side_to_move(next_mover);
    if (next_mover == mover()) p = p.without_ep_target();
    next.pos_ = std::move(p);

    // An irreversible move starts a fresh chain.
    auto prev = next.pos_.halfmove_clock() == 0 ? nullptr : history_;
    next.history_ = std::make_shared<const HistoryNode>(HistoryNode{next.make_key(), std::move(prev)});
    return next;
}

VariantState VariantState::play(const Move& m) const {
    auto c = candidate_moves();
    const Outcome o = classify(c, true);
    if (o.terminal()) throw VariantError("cannot play " + m.uci() + ": game is over (" + o.describe() + ")");
    for (const Move& legal : c.moves)
        if (same_move(legal, m)) return advance(legal, c.waiver_applied);

    for (const Move& raw : pos_.legal_moves()) {
        if (!same_move(raw, m)) continue;
        const char* what = raw.is_capture() ? "capture on first half of double move" : "check on first half of double move";
        throw RestrictionError(std::string(what) + " at ply " + std::to_string(next_ply_) + " (" + m.uci() + ")",
                               next_ply_);
    }
    throw IllegalMoveError("illegal move " + m.uci() + " at ply " + std::to_string(next_ply_));
}

std::vector<std::pair<Move, VariantState>> VariantState::successors() const {
    auto c = candidate_moves();
    std::vector<std::pair<Move, VariantState>> out;
    out.reserve(c.moves.size());
    for (const Move& m : c.moves) out.emplace_back(m, advance(m, c.waiver_applied));
    return out;
}

VariantState VariantState::with_fresh_history() const {
    VariantState v = *this;
    v.history_ = std::make_shared<const HistoryNode>(HistoryNode{history_->key, nullptr});
    return v;
}

VariantState VariantState::mirrored() const {
    return VariantState(pos_.mirrored(), schedule_->mirrored(), next_ply_, options_);
}

namespace {

std::uint64_t vperft(const VariantState& v, int depth) {
    if (depth == 0) return 1;
    if (depth == 1) return v.candidate_moves().moves.size();
    std::uint64_t n = 0;
    for (const auto& [m, child] : v.successors()) n += vperft(child, depth - 1);
    return n;
}

}  // namespace

std::uint64_t variant_perft(const VariantState& v, int depth) {
    if (depth < 0) throw std::invalid_argument("perft depth must be non-negative");
    return vperft(v, depth);
}

std::vector<std::pair<Move, std::uint64_t>> variant_perft_divide(const VariantState& v, int depth) {
    if (depth < 1) throw std::invalid_argument("perft divide needs depth >= 1");
    std::vector<std::pair<Move, std::uint64_t>> out;
    for (const auto& [m, child] : v.successors()) out.emplace_back(m, vperft(child, depth - 1));
    return out;
}

std::string encode_xfen(const VariantState& v) {
    return v.position().fen() + " sched=" + v.schedule().id() + " ply=" + std::to_string(v.next_ply());
}

VariantState decode_xfen(std::string_view text, VariantOptions options) {
    std::vector<std::string_view> tokens;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == ' ') {
            if (i == start) throw FenError("xFEN tokens must be separated by single spaces");
            tokens.push_back(text.substr(start, i - start));
            start = i + 1;
        }
    }
    if (tokens.size() != 8) throw FenError("xFEN needs 6 FEN fields, sched= and ply=: '" + std::string(text) + "'");
    const std::string_view sched = tokens[6];
    const std::string_view ply = tokens[7];
    if (!sched.starts_with("sched=") || !ply.starts_with("ply="))
        throw FenError("xFEN must end with sched=<id-or-spec> ply=<n>");

    int next_ply = 0;
    const auto digits = ply.substr(4);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), next_ply);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || next_ply < 1)
        throw FenError("bad ply token '" + std::string(ply) + "'");

    MoveSchedule schedule = MoveSchedule::from_token(sched.substr(6));
    const std::string fen(text.substr(0, static_cast<std::size_t>(sched.data() - text.data()) - 1));
    const bool second_half = schedule.phase_at_ply(next_ply) == Phase::SecondOfDouble;
    Position pos = Position::from_fen(fen, second_half);
    return VariantState(std::move(pos), std::move(schedule), next_ply, options);
}

}  // namespace fairchess
