// Acceptance suite: one PASS/FAIL/SKIPPED line per criterion.
// Usage: acceptance [criterion...]   (no arguments runs all)

#include "fairchess/config.hpp"
#include "fairchess/notation.hpp"
#include "fairchess/perft.hpp"
#include "fairchess/solver.hpp"
#include "fairchess/study.hpp"
#include "oracle/naive_chess.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

using namespace fairchess;

namespace {

constexpr int kSkipped = 77;

constexpr double kBudgetC1 = 60.0;
constexpr double kBudgetC2 = 1.0;
constexpr double kBudgetC3 = 60.0;
constexpr double kBudgetC4 = 120.0;
constexpr double kBudgetC5 = 1.0;
constexpr double kBudgetC6 = 600.0;
constexpr int kC3MinStates = 10'000;
constexpr int kC4Games = 500;
constexpr int kC6MinAgreements = 200;
constexpr int kC8MinDepth = 30;
constexpr int kC8ToleranceCp = 30;
constexpr int kC8HashMb = 64;

const char* kStartFen = "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1";

struct Result {
    enum Kind { Pass, Fail, Skip } kind = Pass;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

Result fail(std::string d) { return {Result::Fail, std::move(d)}; }

Result within_budget(Result v, double elapsed, double budget) {
    if (v.kind == Result::Pass && elapsed >= budget)
        return fail(v.detail + "; took " + std::to_string(elapsed) + " s, budget " + std::to_string(budget) + " s");
    return v;
}

std::string naive_fen_of(const Position& p) { return p.fen(); }

// 1. Movegen soundness
Result c1() {
    const auto t0 = Clock::now();
    const Position start = Position::startpos();
    std::uint64_t counts[6] = {};
    for (int d = 1; d <= 5; ++d) counts[d] = perft(start, d);
    const double lib_time = seconds_since(t0);

    const naive::Board nb = naive::parse_fen(kStartFen);
    std::ostringstream detail;
    for (int d = 1; d <= 5; ++d) {
        const std::uint64_t ref = naive::perft(nb, d);
        detail << (d > 1 ? " " : "") << "d" << d << "=" << counts[d];
        if (ref != counts[d])
            return fail("depth " + std::to_string(d) + ": library " + std::to_string(counts[d]) + ", naive " +
                        std::to_string(ref));
    }
    if (counts[1] != 20 || counts[2] != 400) return fail("hand values 20/400 not met");
    detail << "; library perft " << lib_time << " s";
    return within_budget({Result::Pass, detail.str()}, lib_time, kBudgetC1);
}

// 2. Schedule algebra
Result c2() {
    const auto t0 = Clock::now();
    const MoveSchedule bal = MoveSchedule::builtin("balanced");
    const MoveSchedule std_ = MoveSchedule::builtin("standard");
    const MoveSchedule bf = MoveSchedule::builtin("black-favorable");
    std::vector<int> diff;
    for (int k = 1; k <= 1000; ++k)
        if (bal.mover_at_ply(k) != std_.mover_at_ply(k)) diff.push_back(k);
    if (diff != std::vector<int>{3, 4}) return fail("balanced differs from standard at unexpected plies");
    for (int k = 1; k <= 4; ++k)
        if (bal.mover_at_ply(k) != bf.mover_at_ply(k)) return fail("balanced and black-favorable differ at ply " + std::to_string(k));
    if (bal.mover_at_ply(5) == bf.mover_at_ply(5)) return fail("balanced and black-favorable agree at ply 5");
    return within_budget({Result::Pass, "differences at plies 3,4 only; first divergence from black-favorable at ply 5"},
                         seconds_since(t0), kBudgetC2);
}

// 3. Restriction soundness, checked with the independent generator.
Result c3() {
    const auto t0 = Clock::now();
    std::mt19937 rng(20240531);
    int states = 0;
    std::uint64_t moves_checked = 0;
    const char* ids[] = {"balanced", "black-favorable", "prouhet-thue-morse", "marseillais"};
    for (int game = 0; states < kC3MinStates; ++game) {
        VariantState v = VariantState::initial(MoveSchedule::builtin(ids[game % 4]));
        for (int ply = 0; ply < 120 && !v.outcome().terminal(); ++ply) {
            const VariantMoves c = v.candidate_moves();
            if (v.phase() == Phase::FirstOfDouble && !c.waiver_applied) {
                ++states;
                const naive::Board b = naive::parse_fen(naive_fen_of(v.position()));
                int before = 0;
                for (int r = 0; r < b.ranks; ++r)
                    for (int f = 0; f < b.files; ++f) before += b.sq[r][f] != '.';
                for (const Move& m : c.moves) {
                    naive::Mv nm{m.from.rank, m.from.file, m.to.rank, m.to.file};
                    if (m.promotion != PieceKind::None) nm.promo = static_cast<char>(std::tolower(kind_char(m.promotion)));
                    nm.ep = m.flags & move_flags::kEnPassant;
                    nm.castle = m.is_castle();
                    const naive::Board after = naive::make(b, nm);
                    int count = 0;
                    for (int r = 0; r < after.ranks; ++r)
                        for (int f = 0; f < after.files; ++f) count += after.sq[r][f] != '.';
                    if (count != before) return fail("capture " + m.uci() + " returned at " + encode_xfen(v));
                    if (naive::king_attacked(after, !b.white)) return fail("check " + m.uci() + " returned at " + encode_xfen(v));
                    ++moves_checked;
                }
            }
            v = v.play(c.moves[std::uniform_int_distribution<std::size_t>(0, c.moves.size() - 1)(rng)]);
        }
    }
    std::ostringstream d;
    d << states << " first-of-double states, " << moves_checked << " moves, none capture or check";
    return within_budget({Result::Pass, d.str()}, seconds_since(t0), kBudgetC3);
}

// 4. Conservative extension
Result c4() {
    const auto t0 = Clock::now();
    const VariantState vs = VariantState::initial(MoveSchedule::builtin("standard"));
    for (int d = 1; d <= 4; ++d)
        if (variant_perft(vs, d) != perft(Position::startpos(), d))
            return fail("variant perft differs at depth " + std::to_string(d));

    std::mt19937 rng(77);
    std::map<std::string, int> tally;
    for (int g = 0; g < kC4Games; ++g) {
        VariantState v = vs;
        Position p = Position::startpos();
        std::map<std::string, int> seen;
        auto key = [](const Position& q) {
            const std::string f = q.fen();
            std::size_t cut = f.size();
            for (int spaces = 0, i = 0; i < static_cast<int>(f.size()); ++i)
                if (f[i] == ' ' && ++spaces == 4) {
                    cut = i;
                    break;
                }
            return f.substr(0, cut);
        };
        ++seen[key(p)];
        std::string core;
        for (int ply = 0; ply < 600; ++ply) {
            // rules-core path: status plus a hand-kept repetition count
            const GameStatus st = p.status();
            if (st == GameStatus::Checkmate) core = p.side_to_move() == Color::White ? "black-wins" : "white-wins";
            else if (st == GameStatus::Stalemate) core = "draw-stalemate";
            else if (seen[key(p)] >= 3) core = "draw-threefold";
            else if (st == GameStatus::DrawFiftyMove) core = "draw-fifty";
            else if (st == GameStatus::DrawInsufficientMaterial) core = "draw-material";
            const Outcome o = v.outcome();
            std::string var;
            switch (o.kind) {
                case Outcome::Kind::WhiteWins: var = "white-wins"; break;
                case Outcome::Kind::BlackWins: var = "black-wins"; break;
                case Outcome::Kind::Draw:
                    var = o.reason == DrawReason::Stalemate      ? "draw-stalemate"
                          : o.reason == DrawReason::Threefold    ? "draw-threefold"
                          : o.reason == DrawReason::FiftyMove    ? "draw-fifty"
                                                                 : "draw-material";
                    break;
                case Outcome::Kind::Ongoing: break;
            }
            if (var != core) return fail("game " + std::to_string(g) + " ply " + std::to_string(ply) + ": variant '" + var +
                                         "' vs rules-core '" + core + "'");
            if (!core.empty()) break;
            const auto ms = p.legal_moves();
            if (v.legal_moves() != ms) return fail("move lists differ in game " + std::to_string(g));
            const Move m = ms[std::uniform_int_distribution<std::size_t>(0, ms.size() - 1)(rng)];
            p = p.apply_move(m);
            v = v.play(m);
            if (v.position() != p) return fail("positions differ in game " + std::to_string(g));
            if (p.halfmove_clock() == 0) seen.clear();
            ++seen[key(p)];
        }
        ++tally[core.empty() ? "unfinished" : core];
    }
    std::ostringstream d;
    d << "perft d1-4 equal; " << kC4Games << " games identical (";
    bool first = true;
    for (auto& [k, n] : tally) {
        d << (first ? "" : ", ") << k << " " << n;
        first = false;
    }
    d << ")";
    return within_budget({Result::Pass, d.str()}, seconds_since(t0), kBudgetC4);
}

// 5. Reference-line replay
Result c5() {
    const auto t0 = Clock::now();
    struct L {
        const char* label;
        const char* text;
        const char* schedule;
    };
    const L lines[] = {
        {"(i)", "1. e4 d5 2. dxe4 (B) Nc3 (W) 3. Nxe4", "balanced"},
        {"(ii)(a)", "1. d4 c5 2. cxd4 (B) c3 (W) 3. cxd4", "balanced"},
        {"(ii)(b)", "1. d4 e5 2. exd4 (B) Qxd4 (W) 3. Nc3", "balanced"},
        {"(iii) exd5", "1. Nf3 d5 2. e6 (B) e4 (W) 3.exd5", "balanced"},
        {"(iii) e5", "1. Nf3 d5 2. e6 (B) e4 (W) 3. e5", "balanced"},
        {"(iii) d4", "1. Nf3 d5 2. e6 (B) c4 (W) 3. d4", "balanced"},
        {"(iv)", "1. c4 b5 2. bxc4 (B) b3 (W) 3. bxc4", "balanced"},
        {"Ruy Lopez", "1. e4 e5 2. Nf3 Nc6 3. Bb5", "standard"},
        {"Queen's Gambit", "1. d4 d5 2.c4 e6 3. Nc3", "standard"},
    };
    std::vector<std::string> problems;
    int ok = 0;
    for (const L& l : lines) {
        try {
            const VariantState start = VariantState::initial(MoveSchedule::builtin(l.schedule));
            const auto moves = parse_line(l.text, start);
            VariantState v = start;
            bool clean = true;
            for (const Move& m : moves) {
                if (m.is_capture() && v.phase() == Phase::FirstOfDouble) {
                    problems.push_back(std::string(l.label) + ": capture " + m.uci() + " at first-of-double ply " +
                                       std::to_string(v.next_ply()));
                    clean = false;
                }
                v = v.play(m);
            }
            ok += clean;
        } catch (const std::exception& e) {
            problems.push_back(std::string(l.label) + ": " + e.what());
        }
    }
    const auto ms = parse_line(lines[0].text, MoveSchedule::builtin("balanced"));
    const std::string round = format_line(ms, MoveSchedule::builtin("balanced"));
    if (tokenize_line(round).size() != tokenize_line(lines[0].text).size() || round != lines[0].text)
        problems.push_back("(i) formats as '" + round + "'");

    std::ostringstream d;
    d << ok << "/" << std::size(lines) << " lines legal";
    for (const auto& p : problems) d << "; " << p;
    if (!problems.empty()) return fail(d.str());
    d << "; (i) round-trips token-for-token";
    return within_budget({Result::Pass, d.str()}, seconds_since(t0), kBudgetC5);
}

// 6. Solver correctness against plain minimax
std::string board_fen(int files, int ranks, const std::map<int, char>& pieces) {
    std::string fen;
    for (int r = ranks - 1; r >= 0; --r) {
        int empty = 0;
        for (int f = 0; f < files; ++f) {
            auto it = pieces.find(r * 8 + f);
            if (it == pieces.end()) {
                ++empty;
                continue;
            }
            if (empty) fen += static_cast<char>('0' + empty);
            empty = 0;
            fen += it->second;
        }
        if (empty) fen += static_cast<char>('0' + empty);
        if (r) fen += '/';
    }
    return fen;
}

Result c6() {
    const auto t0 = Clock::now();
    std::mt19937 rng(6006);
    std::vector<MoveSchedule> schedules;
    for (auto id : MoveSchedule::builtin_ids) schedules.push_back(MoveSchedule::builtin(id));

    int generated = 0, agreements = 0, oracle_unknown = 0, solve_unknown = 0;
    std::map<std::string, int> per_schedule;
    std::map<std::string, int> per_material;
    std::vector<std::string> problems;

    const char* materials[] = {"KK", "KQK", "KQK", "KPK", "KPK"};
    std::map<std::string, int> per_verdict;
    for (int attempt = 0; agreements < kC6MinAgreements + 50 && attempt < 20000; ++attempt) {
        const int size = attempt % 4 == 0 ? 3 : 4;
        const std::string mat = materials[rng() % std::size(materials)];
        const MoveSchedule& sched = schedules[rng() % schedules.size()];
        const int ply = 1 + static_cast<int>(rng() % 6);
        std::map<int, char> pieces;
        auto place = [&](char c, bool pawn) {
            for (;;) {
                const int f = static_cast<int>(rng() % size), r = static_cast<int>(rng() % size);
                if (pawn && (r == 0 || r == size - 1)) continue;
                if (pieces.emplace(r * 8 + f, c).second) return;
            }
        };
        place('K', false);
        place('k', false);
        if (mat == "KQK") place(rng() % 2 ? 'Q' : 'q', false);
        if (mat == "KPK") place(rng() % 2 ? 'P' : 'p', true);
        const std::string fen = board_fen(size, size, pieces) + " " + color_char(sched.mover_at_ply(ply)) + " - - 0 1";
        std::optional<VariantState> v;
        try {
            v.emplace(Position::from_fen(fen, sched.phase_at_ply(ply) == Phase::SecondOfDouble), sched, ply);
        } catch (const Error&) {
            continue;
        }
        ++generated;
        const SolveResult r = solve(*v);
        if (!r.value.completed()) {
            ++solve_unknown;
            continue;
        }
        // trichotomy and a principal variation that realises the value
        if (r.value.verdict == fairchess::Verdict::Draw && r.value.distance != 0)
            problems.push_back("draw with distance at " + encode_xfen(*v));
        if (r.value.verdict != fairchess::Verdict::Draw) {
            VariantState end = *v;
            for (const Move& m : r.principal_variation) end = end.play(m);
            const Outcome want = Outcome::win_for(r.value.verdict == fairchess::Verdict::WhiteWin ? Color::White : Color::Black);
            if (static_cast<int>(r.principal_variation.size()) != r.value.distance || end.outcome() != want)
                problems.push_back("principal variation does not realise " + r.value.describe() + " at " + encode_xfen(*v));
        }
        SolveLimits lim;
        lim.max_depth = size == 3 ? 9 : 7;
        lim.node_budget = 400'000;
        const GameValue o = minimax_oracle(*v, lim);
        if (!o.completed()) {
            ++oracle_unknown;
            continue;
        }
        if (o != r.value) {
            problems.push_back("solve " + r.value.describe() + " vs oracle " + o.describe() + " at " + encode_xfen(*v));
            continue;
        }
        ++agreements;
        ++per_schedule[sched.id()];
        ++per_verdict[std::string(verdict_name(o.verdict))];
        ++per_material[std::to_string(size) + "x" + std::to_string(size) + " " + mat];
    }
    std::ostringstream d;
    d << agreements << " exact agreements over " << generated << " instances (oracle beyond horizon " << oracle_unknown
      << ", solve unknown " << solve_unknown << "); by schedule:";
    for (auto& [k, n] : per_schedule) d << " " << k << "=" << n;
    d << "; by verdict:";
    for (auto& [k, n] : per_verdict) d << " " << k << "=" << n;
    d << "; by material:";
    for (auto& [k, n] : per_material) d << " " << k << "=" << n;
    for (const auto& p : problems) d << "; " << p;
    if (!problems.empty()) return fail(d.str());
    if (agreements < kC6MinAgreements) return fail(d.str() + "; fewer than " + std::to_string(kC6MinAgreements));
    if (per_schedule.size() != schedules.size()) return fail(d.str() + "; not every schedule covered");
    return within_budget({Result::Pass, d.str()}, seconds_since(t0), kBudgetC6);
}

// 7. Bracketing evidence report
Result c7() {
    std::ifstream in(FAIRCHESS_DATA_DIR "/suite_4x4.txt");
    if (!in) return fail("bundled suite missing");
    const auto instances = read_instances(in);
    std::vector<MoveSchedule> schedules;
    for (auto id : MoveSchedule::builtin_ids) schedules.push_back(MoveSchedule::builtin(id));
    const auto a = compare_schedules(instances, schedules);
    const auto b = compare_schedules(instances, schedules);
    const bool same = comparison_csv(a) == comparison_csv(b) && comparison_json(a) == comparison_json(b);
    std::ostringstream d;
    d << instances.size() << " instances; ordering:";
    for (const auto& s : a.ordering) d << " " << s;
    d << "; balanced between standard and black-favorable: "
      << (a.balanced_between ? (*a.balanced_between ? "yes" : "no") : "n/a") << " (evidence only)";
    if (!same) return fail(d.str() + "; reruns differ");
    d << "; reruns bit-identical";
    return {Result::Pass, d.str()};
}

// 8. Study reproduction, only with a configured engine
Result c8() {
    RunConfig cfg;
    if (const char* path = std::getenv("FAIRCHESS_CONFIG"); path && *path) cfg = load_run_config(path);
    apply_environment(cfg);
    if (!cfg.engine.configured()) return {Result::Skip, "no engine configured (set FAIRCHESS_ENGINE)"};

    StudyConfig sc;
    sc.engine = cfg.engine;
    sc.engine.threads = 1;
    sc.engine.hash_mb = kC8HashMb;
    sc.depth = std::max(kC8MinDepth, cfg.study_depth);
    sc.tolerance = kC8ToleranceCp;
    const StudyReport r = run_study(load_study_lines_file(FAIRCHESS_DATA_DIR "/study_lines.json"), sc);
    std::ostringstream d;
    d << r.engine << " depth " << sc.depth << ":";
    bool all = true;
    for (const auto& row : r.rows) {
        d << " " << row.line.label << "=";
        if (row.eval) d << row.eval->centipawns << (row.within_tolerance ? "" : "(off)");
        else d << "error";
        all = all && row.eval && row.within_tolerance;
    }
    return all ? Result{Result::Pass, d.str()} : fail(d.str());
}

struct Criterion {
    int id;
    const char* name;
    std::function<Result()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const Criterion all[] = {
        {1, "movegen soundness", c1},         {2, "schedule algebra", c2},
        {3, "restriction soundness", c3},     {4, "conservative extension", c4},
        {5, "reference-line replay", c5},         {6, "solver correctness", c6},
        {7, "bracketing evidence report", c7}, {8, "study reproduction", c8},
    };
    std::vector<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
    if (wanted.empty())
        for (const auto& c : all) wanted.push_back(c.id);

    int failures = 0, skips = 0;
    for (int id : wanted) {
        if (id < 1 || id > 8) {
            std::cerr << "unknown criterion " << id << "\n";
            return 2;
        }
        const Criterion& c = all[id - 1];
        const auto t0 = Clock::now();
        Result v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = fail(std::string("exception: ") + e.what());
        }
        const char* tag = v.kind == Result::Pass ? "PASS" : v.kind == Result::Fail ? "FAIL" : "SKIPPED";
        std::printf("criterion %d (%s): %s [%.2f s] %s\n", c.id, c.name, tag, seconds_since(t0), v.detail.c_str());
        std::fflush(stdout);
        failures += v.kind == Result::Fail;
        skips += v.kind == Result::Skip;
    }
    if (failures) return 1;
    return skips == static_cast<int>(wanted.size()) ? kSkipped : 0;
}
