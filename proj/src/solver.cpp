#include "fairchess/solver.hpp"

#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <istream>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace fairchess {

std::string_view verdict_name(Verdict v) {
    switch (v) {
        case Verdict::WhiteWin: return "white-win";
        case Verdict::BlackWin: return "black-win";
        case Verdict::Draw: return "draw";
        case Verdict::Unknown: return "unknown";
    }
    return "?";
}

GameValue GameValue::mirrored() const {
    GameValue g = *this;
    if (verdict == Verdict::WhiteWin) g.verdict = Verdict::BlackWin;
    else if (verdict == Verdict::BlackWin) g.verdict = Verdict::WhiteWin;
    return g;
}

std::string GameValue::describe() const {
    std::string s(verdict_name(verdict));
    if (verdict == Verdict::WhiteWin || verdict == Verdict::BlackWin) s += " in " + std::to_string(distance);
    return s;
}

void SolveLimits::validate() const {
    if (node_budget == 0 || table_capacity == 0) throw std::invalid_argument("solver budgets must be positive");
    if (max_depth && *max_depth <= 0) throw std::invalid_argument("solver max depth must be positive");
}

SolveLimits SolveLimits::parse(std::string_view text) {
    SolveLimits l;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find(',', start);
        if (end == std::string_view::npos) end = text.size();
        const auto item = text.substr(start, end - start);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) throw std::invalid_argument("limit '" + std::string(item) + "' needs key=value");
        const auto key = item.substr(0, eq);
        const auto val = item.substr(eq + 1);
        std::uint64_t n = 0;
        auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), n);
        if (ec != std::errc{} || ptr != val.data() + val.size())
            throw std::invalid_argument("bad limit value '" + std::string(val) + "'");
        if (key == "nodes") l.node_budget = n;
        else if (key == "table") l.table_capacity = static_cast<std::size_t>(n);
        else if (key == "depth") l.max_depth = static_cast<int>(n);
        else throw std::invalid_argument("unknown limit '" + std::string(key) + "'");
        start = end + 1;
    }
    l.validate();
    return l;
}

namespace {

GameValue value_of_terminal(const Outcome& o) {
    switch (o.kind) {
        case Outcome::Kind::WhiteWins: return GameValue::win_for(Color::White, 0);
        case Outcome::Kind::BlackWins: return GameValue::win_for(Color::Black, 0);
        case Outcome::Kind::Draw: return GameValue::draw();
        case Outcome::Kind::Ongoing: break;
    }
    return GameValue::unknown();
}

// Retrograde analysis over the reachable graph. Nodes are identified by
// RepetitionKey, which fixes position, schedule cursor and phase, so a node's
// future does not depend on how it was reached.
class Retrograde {
public:
    Retrograde(const VariantState& root, const SolveLimits& limits) : limits_(limits) { add(root, 0); }

    // Returns false when a budget ran out.
    bool explore() {
        for (std::size_t u = 0; u < nodes_.size(); ++u) {
            Node& n = nodes_[u];
            const Outcome o = n.state.static_outcome();
            if (o.terminal()) {
                n.terminal = o;
                continue;
            }
            if (limits_.max_depth && n.depth >= *limits_.max_depth) {
                truncated_ = true;
                continue;
            }
            if (++expanded_ > limits_.node_budget) {
                note_ = "node budget exhausted";
                return false;
            }
            const int child_depth = n.depth + 1;
            // `n` may dangle once add() grows the vector.
            auto succ = nodes_[u].state.successors();
            std::vector<std::uint32_t> kids;
            kids.reserve(succ.size());
            for (auto& [m, child] : succ) {
                auto it = index_.find(child.key());
                if (it != index_.end()) {
                    ++hits_;
                    kids.push_back(it->second);
                    continue;
                }
                if (nodes_.size() >= limits_.table_capacity) {
                    note_ = "table capacity exhausted";
                    return false;
                }
                kids.push_back(add(child.with_fresh_history(), child_depth));
            }
            nodes_[u].children = std::move(kids);
            nodes_[u].expanded = true;
        }
        return true;
    }

    void propagate() {
        std::vector<std::vector<std::uint32_t>> parents(nodes_.size());
        for (std::uint32_t u = 0; u < nodes_.size(); ++u) {
            nodes_[u].remaining = static_cast<int>(nodes_[u].children.size());
            for (std::uint32_t c : nodes_[u].children) parents[c].push_back(u);
        }
        std::deque<std::uint32_t> queue;
        for (std::uint32_t u = 0; u < nodes_.size(); ++u) {
            const Outcome& o = nodes_[u].terminal;
            if (o.kind == Outcome::Kind::WhiteWins || o.kind == Outcome::Kind::BlackWins) {
                nodes_[u].value = value_of_terminal(o);
                queue.push_back(u);
            }
        }
        // FIFO order keeps distances non-decreasing: the first winning child
        // seen gives the shortest win, the last losing child the longest loss.
        while (!queue.empty()) {
            const std::uint32_t c = queue.front();
            queue.pop_front();
            const GameValue cv = nodes_[c].value;
            const Color winner = cv.verdict == Verdict::WhiteWin ? Color::White : Color::Black;
            for (std::uint32_t p : parents[c]) {
                Node& pn = nodes_[p];
                if (pn.value.completed()) continue;
                if (pn.state.mover() == winner || --pn.remaining == 0) {
                    pn.value = GameValue::win_for(winner, cv.distance + 1);
                    queue.push_back(p);
                }
            }
        }
        // Whatever is left either reaches a frontier or can be held forever.
        for (Node& n : nodes_) {
            if (n.value.completed()) continue;
            if (n.terminal.terminal()) n.value = GameValue::draw();
            else if (!truncated_) n.value = GameValue::draw();
        }
    }

    GameValue root_value() const { return nodes_.front().value; }

    // Follows optimal choices; draws continue until the real game ends.
    std::vector<Move> principal_variation(const VariantState& root) const {
        std::vector<Move> pv;
        VariantState play = root;
        std::uint32_t u = 0;
        for (int guard = 0; guard < 4096; ++guard) {
            if (play.outcome().terminal()) break;
            const Node& n = nodes_[u];
            if (!n.expanded) break;
            const GameValue v = n.value;
            const auto moves = play.candidate_moves().moves;
            std::optional<std::size_t> pick;
            for (std::size_t i = 0; i < n.children.size() && !pick; ++i) {
                const GameValue cv = nodes_[n.children[i]].value;
                if (v.verdict == Verdict::Draw) {
                    if (cv.verdict == Verdict::Draw) pick = i;
                } else if (cv.verdict == v.verdict && cv.distance == v.distance - 1) {
                    pick = i;
                }
            }
            if (!pick) break;
            pv.push_back(moves[*pick]);
            play = play.play(moves[*pick]);
            u = n.children[*pick];
        }
        return pv;
    }

    bool truncated() const { return truncated_; }
    std::uint64_t expanded() const { return expanded_; }
    std::uint64_t hits() const { return hits_; }
    const std::string& note() const { return note_; }

private:
    struct Node {
        VariantState state;
        int depth = 0;
        Outcome terminal;
        bool expanded = false;
        std::vector<std::uint32_t> children;
        int remaining = 0;
        GameValue value;
    };

    std::uint32_t add(const VariantState& s, int depth) {
        const auto id = static_cast<std::uint32_t>(nodes_.size());
        index_.emplace(s.key(), id);
        nodes_.push_back(Node{s, depth, {}, false, {}, 0, {}});
        return id;
    }

    SolveLimits limits_;
    std::vector<Node> nodes_;
    std::unordered_map<RepetitionKey, std::uint32_t, RepetitionKeyHash> index_;
    bool truncated_ = false;
    std::uint64_t expanded_ = 0;
    std::uint64_t hits_ = 0;
    std::string note_;
};

}  // namespace

SolveResult solve(const VariantState& v, const SolveLimits& limits) {
    limits.validate();
    SolveResult r;
    const VariantState root = v.with_fresh_history();
    const Outcome o = root.outcome();
    if (o.terminal()) {
        r.value = value_of_terminal(o);
        return r;
    }

    Retrograde graph(root, limits);
    const bool complete = graph.explore();
    r.nodes_visited = graph.expanded();
    r.table_hits = graph.hits();
    if (!complete) {
        r.note = graph.note();
        return r;
    }
    graph.propagate();
    GameValue value = graph.root_value();
    if (!value.completed()) {
        r.note = "draw not provable inside depth limit";
        return r;
    }
    if (graph.truncated() && value.distance > *limits.max_depth) {
        r.note = "win found beyond depth limit";
        return r;
    }
    if (value.verdict != Verdict::Draw && root.position().halfmove_clock() + value.distance >= 100) {
        r.note = "fifty-move rule may interfere with the forced win";
        return r;
    }
    r.value = value;
    r.principal_variation = graph.principal_variation(root);
    return r;
}

namespace {

constexpr int kMateScore = 1'000'000;

struct Bounds {
    int lo;
    int hi;
};

struct BudgetExhausted {};

class Oracle {
public:
    Oracle(std::uint64_t budget, int max_depth) : budget_(budget), max_depth_(max_depth) {}

    Bounds search(const VariantState& v, int ply) {
        if (++nodes_ > budget_) throw BudgetExhausted{};
        const Outcome o = v.outcome();
        switch (o.kind) {
            case Outcome::Kind::WhiteWins: return {kMateScore - ply, kMateScore - ply};
            case Outcome::Kind::BlackWins: return {-(kMateScore - ply), -(kMateScore - ply)};
            case Outcome::Kind::Draw: return {0, 0};
            case Outcome::Kind::Ongoing: break;
        }
        // Anything beyond the horizon ends no earlier than the next ply.
        if (ply >= max_depth_) return {-(kMateScore - ply - 1), kMateScore - ply - 1};

        const bool maximize = v.mover() == Color::White;
        Bounds b{maximize ? std::numeric_limits<int>::min() : std::numeric_limits<int>::max(),
                 maximize ? std::numeric_limits<int>::min() : std::numeric_limits<int>::max()};
        for (const auto& [m, child] : v.successors()) {
            const Bounds c = search(child, ply + 1);
            if (maximize) {
                b.lo = std::max(b.lo, c.lo);
                b.hi = std::max(b.hi, c.hi);
            } else {
                b.lo = std::min(b.lo, c.lo);
                b.hi = std::min(b.hi, c.hi);
            }
        }
        return b;
    }

private:
    std::uint64_t budget_;
    int max_depth_;
    std::uint64_t nodes_ = 0;
};

}  // namespace

GameValue minimax_oracle(const VariantState& v, const SolveLimits& limits) {
    limits.validate();
    const int depth = limits.max_depth.value_or(std::numeric_limits<int>::max() / 2);
    Oracle oracle(limits.node_budget, std::min(depth, kMateScore / 2));
    Bounds b{};
    try {
        b = oracle.search(v.with_fresh_history(), 0);
    } catch (const BudgetExhausted&) {
        return GameValue::unknown();
    }
    if (b.lo != b.hi) return GameValue::unknown();
    if (b.lo == 0) return GameValue::draw();
    return GameValue::win_for(b.lo > 0 ? Color::White : Color::Black, kMateScore - std::abs(b.lo));
}

std::vector<SolverInstance> read_instances(std::istream& in) {
    std::vector<SolverInstance> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string label;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            label = line.substr(hash + 1);
            line.resize(hash);
        }
        auto trim = [](std::string& s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        trim(line);
        trim(label);
        if (line.empty()) continue;
        try {
            out.push_back(SolverInstance{label.empty() ? "line" + std::to_string(line_no) : label, decode_xfen(line)});
        } catch (const Error& e) {
            throw Error("instance line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

ScheduleComparison compare_schedules(const std::vector<SolverInstance>& instances,
                                     const std::vector<MoveSchedule>& schedules, const SolveLimits& limits,
                                     VariantOptions options) {
    ScheduleComparison c;
    for (const auto& inst : instances) c.instances.push_back(inst.label);
    for (const auto& s : schedules) c.schedules.push_back(s.id());
    c.tallies.assign(schedules.size(), ScheduleTally{});

    for (const auto& inst : instances) {
        auto& row = c.cells.emplace_back();
        for (std::size_t j = 0; j < schedules.size(); ++j) {
            ComparisonCell cell;
            try {
                const VariantState v(inst.state.position(), schedules[j], inst.state.next_ply(), options);
                const SolveResult r = solve(v, limits);
                cell.value = r.value;
                cell.nodes = r.nodes_visited;
                cell.note = r.note;
            } catch (const Error& e) {
                cell.note = e.what();
            }
            auto& t = c.tallies[j];
            switch (cell.value.verdict) {
                case Verdict::WhiteWin: ++t.white_wins; break;
                case Verdict::BlackWin: ++t.black_wins; break;
                case Verdict::Draw: ++t.draws; break;
                case Verdict::Unknown: ++t.unknown; break;
            }
            row.push_back(std::move(cell));
        }
    }
    const double n = instances.empty() ? 1.0 : static_cast<double>(instances.size());
    for (auto& t : c.tallies) t.favorability = (t.white_wins - t.black_wins) / n;

    std::vector<std::size_t> order(schedules.size());
    for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return c.tallies[a].favorability > c.tallies[b].favorability;
    });
    for (std::size_t j : order) c.ordering.push_back(c.schedules[j]);

    auto find = [&](std::string_view id) -> std::optional<double> {
        for (std::size_t j = 0; j < c.schedules.size(); ++j)
            if (c.schedules[j] == id) return c.tallies[j].favorability;
        return std::nullopt;
    };
    const auto fs = find("standard");
    const auto fb = find("black-favorable");
    const auto fbal = find("balanced");
    if (fs && fb && fbal) c.balanced_between = std::min(*fs, *fb) <= *fbal && *fbal <= std::max(*fs, *fb);
    return c;
}

std::string comparison_csv(const ScheduleComparison& c) {
    std::ostringstream os;
    os << "instance,schedule,verdict,distance,nodes\n";
    for (std::size_t i = 0; i < c.instances.size(); ++i)
        for (std::size_t j = 0; j < c.schedules.size(); ++j) {
            const auto& cell = c.cells[i][j];
            os << c.instances[i] << ',' << c.schedules[j] << ',' << verdict_name(cell.value.verdict) << ','
               << cell.value.distance << ',' << cell.nodes << '\n';
        }
    return os.str();
}

std::string comparison_json(const ScheduleComparison& c) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["instances"] = c.instances;
    j["schedules"] = c.schedules;
    ordered_json cells = ordered_json::array();
    for (std::size_t i = 0; i < c.instances.size(); ++i)
        for (std::size_t k = 0; k < c.schedules.size(); ++k) {
            const auto& cell = c.cells[i][k];
            ordered_json e;
            e["instance"] = c.instances[i];
            e["schedule"] = c.schedules[k];
            e["verdict"] = verdict_name(cell.value.verdict);
            e["distance"] = cell.value.distance;
            e["nodes"] = cell.nodes;
            if (!cell.note.empty()) e["note"] = cell.note;
            cells.push_back(std::move(e));
        }
    j["cells"] = std::move(cells);
    ordered_json tallies = ordered_json::object();
    for (std::size_t k = 0; k < c.schedules.size(); ++k) {
        const auto& t = c.tallies[k];
        tallies[c.schedules[k]] = {{"white_wins", t.white_wins},
                                   {"black_wins", t.black_wins},
                                   {"draws", t.draws},
                                   {"unknown", t.unknown},
                                   {"favorability", t.favorability}};
    }
    j["tallies"] = std::move(tallies);
    j["ordering"] = c.ordering;
    if (c.balanced_between) j["balanced_between_standard_and_black_favorable"] = *c.balanced_between;
    else j["balanced_between_standard_and_black_favorable"] = nullptr;
    j["caveat"] = "exact values on small instances; evidence about schedule bias, not a proof about chess";
    return j.dump(2) + "\n";
}

std::string comparison_summary(const ScheduleComparison& c) {
    std::ostringstream os;
    os << "schedule               W-wins  B-wins  draws  unknown  favorability\n";
    for (std::size_t k = 0; k < c.schedules.size(); ++k) {
        const auto& t = c.tallies[k];
        char buf[160];
        std::snprintf(buf, sizeof buf, "%-22s %6d  %6d  %5d  %7d  %+.4f\n", c.schedules[k].c_str(), t.white_wins,
                      t.black_wins, t.draws, t.unknown, t.favorability);
        os << buf;
    }
    os << "ordering (most White-favourable first):";
    for (const auto& s : c.ordering) os << ' ' << s;
    os << '\n';
    if (c.balanced_between)
        os << "balanced lies between standard and black-favorable: " << (*c.balanced_between ? "yes" : "no") << '\n';
    return os.str();
}

}  // namespace fairchess
