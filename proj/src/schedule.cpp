#include "fairchess/schedule.hpp"

#include <algorithm>
#include <optional>
#include <utility>

namespace fairchess {

namespace {

struct BuiltinDef {
    std::string_view id;
    std::string_view prefix;
    std::string_view cycle;
};

// The Prouhet-Thue-Morse entry repeats the 16 displayed symbols; the true
// sequence is aperiodic.
constexpr std::array<BuiltinDef, 5> kBuiltins{{
    {"standard", "", "WB"},
    {"black-favorable", "WB", "BW"},
    {"balanced", "WBBWW", "BW"},
    {"prouhet-thue-morse", "WBBWBWWBBWWBWBBW", "WBBWBWWBBWWBWBBW"},
    {"marseillais", "", "WWBB"},
}};

std::vector<Color> colors_from(std::string_view s) {
    std::vector<Color> out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == 'W') out.push_back(Color::White);
        else if (c == 'B') out.push_back(Color::Black);
        else throw ScheduleError(std::string("schedule spec may contain only W and B, got '") + c + "'");
    }
    return out;
}

std::string letters(const std::vector<Color>& v) {
    std::string s;
    for (Color c : v) s += c == Color::White ? 'W' : 'B';
    return s;
}

void reduce_to_primitive(std::vector<Color>& cycle) {
    const std::size_t n = cycle.size();
    for (std::size_t p = 1; p < n; ++p) {
        if (n % p) continue;
        bool periodic = true;
        for (std::size_t i = p; i < n && periodic; ++i) periodic = cycle[i] == cycle[i - p];
        if (periodic) {
            cycle.resize(p);
            return;
        }
    }
}

const std::vector<std::pair<std::string, MoveSchedule>>& canonical_builtins() {
    static const auto table = [] {
        std::vector<std::pair<std::string, MoveSchedule>> t;
        for (const auto& b : kBuiltins)
            t.emplace_back(std::string(b.id), MoveSchedule(std::string(b.id), colors_from(b.prefix), colors_from(b.cycle)));
        return t;
    }();
    return table;
}

}  // namespace

std::string_view phase_name(Phase p) {
    switch (p) {
        case Phase::Single: return "single";
        case Phase::FirstOfDouble: return "first-of-double";
        case Phase::SecondOfDouble: return "second-of-double";
    }
    return "?";
}

MoveSchedule::MoveSchedule(std::string id, std::vector<Color> prefix, std::vector<Color> cycle)
    : prefix_(std::move(prefix)), cycle_(std::move(cycle)) {
    if (cycle_.empty()) throw ScheduleError("schedule cycle must not be empty");
    const bool has_white = std::find(cycle_.begin(), cycle_.end(), Color::White) != cycle_.end();
    const bool has_black = std::find(cycle_.begin(), cycle_.end(), Color::Black) != cycle_.end();
    if (!has_white || !has_black) throw ScheduleError("schedule cycle must contain both colours");

    reduce_to_primitive(cycle_);
    while (!prefix_.empty() && prefix_.back() == cycle_.back()) {
        prefix_.pop_back();
        std::rotate(cycle_.rbegin(), cycle_.rbegin() + 1, cycle_.rend());
    }

    // Prefix plus three periods covers every junction.
    std::vector<Color> probe = prefix_;
    for (int i = 0; i < 3; ++i) probe.insert(probe.end(), cycle_.begin(), cycle_.end());
    for (std::size_t i = 2; i < probe.size(); ++i) {
        if (probe[i] == probe[i - 1] && probe[i] == probe[i - 2])
            throw ScheduleError("schedule '" + letters(prefix_) + "/" + letters(cycle_) + "' gives plies " +
                                std::to_string(i - 1) + ".." + std::to_string(i + 1) +
                                " to one colour; at most two moves in a row are allowed");
    }

    id_ = std::move(id);
    if (id_.empty()) {
        id_ = format();
        for (const auto& [name, s] : canonical_builtins())
            if (s == *this) id_ = name;
    }
    approximate_ = id_ == "prouhet-thue-morse";
}

MoveSchedule MoveSchedule::builtin(std::string_view name) {
    for (const auto& [id, s] : canonical_builtins())
        if (id == name) return s;
    throw ScheduleError("unknown schedule '" + std::string(name) + "'");
}

MoveSchedule MoveSchedule::parse(std::string_view spec) {
    const auto slash = spec.find('/');
    if (slash == std::string_view::npos || spec.find('/', slash + 1) != std::string_view::npos)
        throw ScheduleError("schedule spec must have the form prefix/cycle, got '" + std::string(spec) + "'");
    return MoveSchedule("", colors_from(spec.substr(0, slash)), colors_from(spec.substr(slash + 1)));
}

MoveSchedule MoveSchedule::from_token(std::string_view token) {
    if (token.find('/') != std::string_view::npos) return parse(token);
    return builtin(token);
}

Color MoveSchedule::mover_at_ply(int ply) const {
    if (ply < 1) throw ScheduleError("ply numbers start at 1");
    const auto i = static_cast<std::size_t>(ply - 1);
    if (i < prefix_.size()) return prefix_[i];
    return cycle_[(i - prefix_.size()) % cycle_.size()];
}

Phase MoveSchedule::phase_at_ply(int ply) const {
    const Color c = mover_at_ply(ply);
    if (ply > 1 && mover_at_ply(ply - 1) == c) return Phase::SecondOfDouble;
    if (mover_at_ply(ply + 1) == c) return Phase::FirstOfDouble;
    return Phase::Single;
}

int MoveSchedule::canonical_ply(int ply) const {
    if (ply < 1) throw ScheduleError("ply numbers start at 1");
    const int p = static_cast<int>(prefix_.size());
    const int c = static_cast<int>(cycle_.size());
    if (ply <= p) return ply;
    return p + 1 + (ply - p - 1) % c;
}

std::string MoveSchedule::format() const { return letters(prefix_) + "/" + letters(cycle_); }

MoveSchedule MoveSchedule::mirrored() const {
    auto flip = [](std::vector<Color> v) {
        for (Color& c : v) c = ~c;
        return v;
    };
    return MoveSchedule("", flip(prefix_), flip(cycle_));
}

int MoveSchedule::double_moves_within(int n) const {
    int count = 0;
    for (int k = 1; k < n; ++k)
        if (mover_at_ply(k) == mover_at_ply(k + 1)) ++count;
    return count;
}

}  // namespace fairchess
