#include "CLI11.hpp"

#include "fairchess/config.hpp"
#include "fairchess/notation.hpp"
#include "fairchess/solver.hpp"
#include "fairchess/study.hpp"
#include "fairchess/variant_state.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace fairchess;
namespace fs = std::filesystem;

namespace {

constexpr int kExitBadInput = 1;
constexpr int kExitInfrastructure = 2;

struct Options {
    std::string config_path;
    std::string schedule;
    std::string waiver_mode;
    std::string limits;
    std::string engine;
    std::string out;
    int depth = 0;
    int tolerance = -1;
    int workers = 0;
    unsigned threads = 1;
    std::string position = "startpos";
    std::string text;
    std::string instances;
    std::string study_lines;
};

RunConfig effective_config(const Options& o) {
    RunConfig c = o.config_path.empty() ? RunConfig{} : load_run_config(o.config_path);
    apply_environment(c);
    if (!o.schedule.empty()) c.schedule = o.schedule;
    if (!o.waiver_mode.empty()) c.waiver_mode = parse_waiver_mode(o.waiver_mode);
    if (!o.limits.empty()) c.limits = SolveLimits::parse(o.limits);
    if (!o.engine.empty()) c.engine.path = o.engine;
    if (!o.out.empty()) c.output_dir = o.out;
    if (o.tolerance >= 0) c.study_tolerance = o.tolerance;
    if (o.workers > 0) c.study_workers = o.workers;
    if (!o.study_lines.empty()) c.study_lines = o.study_lines;
    c.validate();
    return c;
}

VariantOptions variant_options(const RunConfig& c) {
    VariantOptions v;
    v.waiver_mode = c.waiver_mode;
    return v;
}

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
}

int cmd_perft(const Options& o) {
    const RunConfig c = effective_config(o);
    if (o.depth < 1) throw Error("perft needs --depth >= 1");
    VariantState v = o.position == "startpos"
                         ? VariantState::initial(MoveSchedule::from_token(c.schedule), variant_options(c))
                         : decode_xfen(o.position, variant_options(c));
    if (o.position != "startpos" && !o.schedule.empty())
        v = VariantState(v.position(), MoveSchedule::from_token(o.schedule), v.next_ply(), variant_options(c));
    std::cout << "schedule " << v.schedule().id() << " (" << v.schedule().format() << ") from ply " << v.next_ply()
              << "\n";
    std::uint64_t total = 0;
    for (const auto& [m, n] : variant_perft_divide(v, o.depth)) {
        std::cout << m.uci() << ": " << n << "\n";
        total += n;
    }
    std::cout << "total: " << total << "\n";
    return 0;
}

int cmd_line(const Options& o) {
    const RunConfig c = effective_config(o);
    const VariantState start = VariantState::initial(MoveSchedule::from_token(c.schedule), variant_options(c));
    std::vector<Move> moves;
    try {
        moves = parse_line(o.text, start);
    } catch (const NotationError& e) {
        std::cout << "schedule " << start.schedule().id() << "\n";
        std::cout << "verdict: rejected at ply " << e.ply() << ": " << e.what() << "\n";
        return kExitBadInput;
    }
    std::cout << "schedule " << start.schedule().id() << "\n";
    VariantState v = start;
    for (const Move& m : moves) {
        const VariantMoves cand = v.candidate_moves();
        std::cout << "ply " << v.next_ply() << "  " << (v.mover() == Color::White ? "W" : "B") << "  " << phase_name(v.phase()) << "  "
                  << to_san(v, m) << (cand.waiver_applied ? "  (restriction waived)" : "") << "\n";
        v = v.play(m);
    }
    std::cout << "line: " << format_line(moves, start) << "\n";
    std::cout << "xfen: " << encode_xfen(v) << "\n";
    std::cout << "outcome: " << v.outcome().describe() << "\n";
    std::cout << "verdict: legal\n";
    return 0;
}

std::vector<MoveSchedule> schedule_list(const std::string& spec) {
    std::vector<MoveSchedule> out;
    if (spec.empty() || spec == "all") {
        for (auto id : MoveSchedule::builtin_ids) out.push_back(MoveSchedule::builtin(id));
        return out;
    }
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(MoveSchedule::from_token(tok));
    return out;
}

int cmd_solve(const Options& o) {
    Options base = o;
    base.schedule.clear();
    const RunConfig c = effective_config(base);
    std::ifstream in(o.instances);
    if (!in) throw Error("cannot open instances file '" + o.instances + "'");
    const auto instances = read_instances(in);
    const auto schedules = schedule_list(o.schedule);
    const ScheduleComparison cmp = compare_schedules(instances, schedules, c.limits, variant_options(c));
    const fs::path dir = c.output_dir;
    write_file(dir / "solve.csv", comparison_csv(cmp));
    write_file(dir / "solve.json", comparison_json(cmp));
    std::cout << comparison_csv(cmp) << "\n" << comparison_summary(cmp);
    for (const auto& s : schedules)
        if (s.approximate()) std::cout << "note: " << s.id() << " is a periodic approximation\n";
    std::cout << "wrote " << (dir / "solve.csv").string() << " and " << (dir / "solve.json").string() << "\n";
    return 0;
}

int cmd_study(const Options& o) {
    const RunConfig c = effective_config(o);
    if (c.study_lines.empty()) throw Error("no study lines given (argument or study.lines in the config)");
    const auto lines = load_study_lines_file(c.study_lines);
    StudyConfig sc;
    sc.engine = c.engine;
    sc.depth = o.depth > 0 ? o.depth : c.study_depth;
    sc.tolerance = c.study_tolerance;
    sc.workers = c.study_workers;
    sc.variant = variant_options(c);
    const fs::path dir = c.output_dir;

    StudyReport r;
    try {
        r = run_study(lines, sc);
    } catch (const EngineError& e) {
        std::cerr << "error: " << e.what() << "\n";
        for (const auto& t : e.transcript()) std::cerr << "  " << t << "\n";
        return kExitInfrastructure;
    }
    write_file(dir / "study.json", study_json(r));
    if (r.skipped) {
        write_file(dir / "study.skipped", "skipped: " + r.skip_reason + "\n");
        std::cout << "skipped: " << r.skip_reason << "\n";
        for (const auto& row : r.rows)
            if (!row.error.empty()) std::cout << "  " << row.line.label << ": " << row.error << "\n";
        return 0;
    }
    write_file(dir / "study.csv", study_csv(r));
    std::cout << "engine " << r.engine << ", depth " << r.depth << ", tolerance " << r.tolerance << " cp\n";
    for (const auto& row : r.rows) {
        std::cout << "  " << row.line.label << ": ";
        if (row.eval)
            std::cout << row.eval->centipawns << " cp (expected " << row.line.expected_cp << ", deviation "
                      << *row.deviation << (row.within_tolerance ? ", ok" : ", outside tolerance") << ")\n";
        else
            std::cout << "error: " << row.error << "\n";
    }
    std::cout << r.within_tolerance << "/" << r.rows.size() << " within tolerance, max deviation " << r.max_deviation
              << " cp\n";
    return 0;
}

int cmd_schedules() {
    for (auto id : MoveSchedule::builtin_ids) {
        const MoveSchedule s = MoveSchedule::builtin(id);
        std::string plies;
        for (int k = 1; k <= 16; ++k) plies += s.mover_at_ply(k) == Color::White ? 'W' : 'B';
        std::cout << std::left;
        std::cout.width(20);
        std::cout << s.id() << plies << "  " << s.format() << (s.approximate() ? "  (periodic approximation)" : "")
                  << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chess under alternative move schedules: perft, line replay, solving and engine studies"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--config", o.config_path, "JSON run configuration")->check(CLI::ExistingFile);

    auto add_variant_flags = [&](CLI::App* sub) {
        sub->add_option("--schedule", o.schedule, "builtin id or prefix/cycle spec");
        sub->add_option("--waiver-mode", o.waiver_mode, "waive-restriction | collapse-to-single");
    };

    auto* perft = app.add_subcommand("perft", "count legal play sequences under a schedule");
    perft->add_option("position", o.position, "'startpos' or an xFEN");
    perft->add_option("--depth", o.depth, "plies")->required();
    add_variant_flags(perft);

    auto* line = app.add_subcommand("line", "replay an annotated move line");
    line->add_option("text", o.text, "e.g. \"1. e4 d5 2. dxe4 (B) Nc3 (W) 3. Nxe4\"")->required();
    add_variant_flags(line);

    auto* solve = app.add_subcommand("solve", "solve instances under several schedules");
    solve->add_option("instances", o.instances, "file with one xFEN per line")->required();
    solve->add_option("--schedule", o.schedule, "comma-separated schedules, or 'all'");
    solve->add_option("--waiver-mode", o.waiver_mode, "waive-restriction | collapse-to-single");
    solve->add_option("--limits", o.limits, "nodes=N,table=N,depth=N");
    solve->add_option("--out", o.out, "output directory");

    auto* study = app.add_subcommand("study", "evaluate study lines with a UCI engine");
    study->add_option("lines", o.study_lines, "study lines JSON");
    study->add_option("--engine", o.engine, "UCI engine executable");
    study->add_option("--depth", o.depth, "search depth");
    study->add_option("--tolerance", o.tolerance, "allowed deviation in centipawns");
    study->add_option("--workers", o.workers, "engine processes");
    study->add_option("--out", o.out, "output directory");
    study->add_option("--waiver-mode", o.waiver_mode, "waive-restriction | collapse-to-single");

    auto* schedules = app.add_subcommand("schedules", "list builtin schedules");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*perft) return cmd_perft(o);
        if (*line) return cmd_line(o);
        if (*solve) return cmd_solve(o);
        if (*study) return cmd_study(o);
        if (*schedules) return cmd_schedules();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
    return 0;
}
