#include "doctest.h"

#include "fairchess/config.hpp"
#include "fairchess/notation.hpp"
#include "fairchess/study.hpp"
#include "fairchess/uci_engine.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fairchess;

namespace {

EngineConfig mock(std::vector<std::string> args = {}) {
    EngineConfig c;
    c.path = FAIRCHESS_MOCK_ENGINE;
    c.args = std::move(args);
    c.timeout = std::chrono::seconds(20);
    return c;
}

std::vector<StudyLine> bundled_lines() { return load_study_lines_file(FAIRCHESS_DATA_DIR "/study_lines.json"); }

}  // namespace

TEST_CASE("info line parsing") {
    auto a = parse_info_line("info depth 12 seldepth 20 multipv 1 score cp -34 nodes 1000 pv e2e4 e7e5");
    REQUIRE(a);
    CHECK(a->depth == 12);
    REQUIRE(a->score);
    CHECK_FALSE(a->score->mate);
    CHECK(a->score->value == -34);
    auto b = parse_info_line("info depth 30 score mate -3 nodes 5");
    REQUIRE(b->score);
    CHECK(b->score->mate);
    CHECK(b->score->value == -3);
    auto c = parse_info_line("info depth 9 score cp 15 upperbound nodes 5");
    CHECK(c->score->bound);
    CHECK_FALSE(parse_info_line("info string score cp 3")->score);
    CHECK_FALSE(parse_info_line("bestmove e2e4"));
    CHECK_FALSE(parse_info_line("info depth 3 score wdl 1 2 3"));
}

TEST_CASE("score normalisation") {
    CHECK(normalize_score({false, 25, false}, Color::White) == 25);
    CHECK(normalize_score({false, 25, false}, Color::Black) == -25);
    std::optional<int> plies;
    CHECK(normalize_score({true, 3, false}, Color::White, &plies) == 10000 - 5);
    CHECK(plies == 5);
    CHECK(normalize_score({true, -2, false}, Color::Black, &plies) == 10000 - 4);
    CHECK(plies == 4);
    CHECK(normalize_score({true, 0, false}, Color::White, &plies) == -10000);
    CHECK(normalize_score({true, 1, false}, Color::Black) == -(10000 - 1));
}

TEST_CASE("engine dialogue with the mock") {
    UciEngine e(mock({"--name", "Mocky 1"}));
    CHECK(e.name() == "Mocky 1");
    const VariantState v = VariantState::initial(MoveSchedule::builtin("balanced"));
    const EvalResult start = evaluate(v, 8, e);
    CHECK(start.centipawns == 0);
    CHECK(start.depth == 8);
    CHECK(start.engine == "Mocky 1");
    CHECK(start.bestmove.size() >= 4);

    // Black a knight up, Black to move: +300 for the mover, -300 White-positive.
    const VariantState b = decode_xfen("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/R1BQKBNR b KQkq - 0 1 sched=standard ply=2");
    CHECK(evaluate(b, 4, e).centipawns == -300);
    CHECK(evaluate(b.mirrored(), 4, e).centipawns == 300);
    CHECK_FALSE(e.transcript().empty());
}

TEST_CASE("bound-only lines are ignored") {
    UciEngine e(mock({"--bounds"}));
    CHECK(e.evaluate_fen(Position::startpos().fen(), Color::White, 3).centipawns == 0);
}

TEST_CASE("mate scores") {
    UciEngine e(mock({"--mate", "-2"}));
    const EvalResult r = e.evaluate_fen(Position::startpos().fen(), Color::White, 5);
    CHECK(r.centipawns == -(10000 - 4));
    CHECK(r.mate_in_plies == 4);
}

TEST_CASE("engine failures carry the transcript") {
    CHECK_THROWS_AS(UciEngine(EngineConfig{}), EngineError);
    EngineConfig missing;
    missing.path = "/nonexistent/engine-binary";
    CHECK_THROWS_WITH_AS(UciEngine{missing}, doctest::Contains("cannot start"), EngineError);

    UciEngine crash(mock({"--crash"}));
    try {
        crash.evaluate_fen(Position::startpos().fen(), Color::White, 3);
        FAIL("no error");
    } catch (const EngineError& err) {
        CHECK(std::string(err.what()).find("closed") != std::string::npos);
        CHECK(err.transcript().size() >= 4);
    }

    EngineConfig slow = mock({"--hang"});
    slow.timeout = std::chrono::milliseconds(300);
    UciEngine hang(slow);
    CHECK_THROWS_WITH_AS(hang.evaluate_fen(Position::startpos().fen(), Color::White, 3), doctest::Contains("timed out"),
                         EngineError);

    UciEngine shallow(mock({"--shallow"}));
    CHECK_THROWS_WITH_AS(shallow.evaluate_fen(Position::startpos().fen(), Color::White, 10),
                         doctest::Contains("depth"), EngineError);
}

TEST_CASE("bundled study lines") {
    const auto lines = bundled_lines();
    REQUIRE(lines.size() == 9);
    int baselines = 0;
    for (const auto& l : lines) baselines += l.role == StudyRole::Baseline;
    CHECK(baselines == 2);
}

TEST_CASE("study without an engine is skipped") {
    const auto lines = bundled_lines();
    const StudyReport r = run_study(lines, StudyConfig{});
    CHECK(r.skipped);
    CHECK(r.rows.size() == lines.size());
    for (const auto& row : r.rows) CHECK_FALSE(row.eval);
    CHECK(study_json(r).find("\"skipped\": true") != std::string::npos);

    const StudyReport empty = run_study({}, StudyConfig{});
    CHECK(empty.rows.empty());
    CHECK(empty.max_deviation == 0);
}

TEST_CASE("study with the mock engine") {
    auto lines = bundled_lines();
    StudyConfig cfg;
    cfg.engine = mock();
    cfg.depth = 6;
    const StudyReport r = run_study(lines, cfg);
    CHECK_FALSE(r.skipped);
    REQUIRE(r.rows.size() == lines.size());
    CHECK(r.engine == "mock");
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const StudyRow& row = r.rows[i];
        CAPTURE(row.line.label);
        CHECK(row.line.label == lines[i].label);
        if (!row.error.empty()) {
            CHECK_FALSE(row.eval);
            continue;
        }
        REQUIRE(row.eval);
        // the engine sees exactly the replayed position
        const VariantState start = VariantState::initial(MoveSchedule::from_token(row.line.schedule));
        const VariantState end = replay(start, parse_line(row.line.text, start));
        CHECK(row.xfen == encode_xfen(end));
        CHECK(*row.deviation == std::abs(row.eval->centipawns - row.line.expected_cp));
    }
    const std::string csv = study_csv(r);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(lines.size()) + 1);

    cfg.workers = 3;
    const StudyReport par = run_study(lines, cfg);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        CHECK(par.rows[i].line.label == r.rows[i].line.label);
        CHECK(par.rows[i].xfen == r.rows[i].xfen);
        CHECK(par.rows[i].eval.has_value() == r.rows[i].eval.has_value());
        if (par.rows[i].eval) CHECK(par.rows[i].eval->centipawns == r.rows[i].eval->centipawns);
    }
}

TEST_CASE("restriction violations are per-line errors without an engine call") {
    StudyLine bad{"early capture", "1. d4 c5 2. cxd4 (B) Qxd4 (W)", "balanced", 0, 0, StudyRole::Variant, ""};
    StudyLine good{"ruy", "1. e4 e5 2. Nf3 Nc6 3. Bb5", "standard", 20, 56, StudyRole::Baseline, ""};
    StudyConfig cfg;
    cfg.engine = mock({"--crash"});
    const StudyReport r = run_study({bad}, cfg);
    REQUIRE(r.rows.size() == 1);
    CHECK(r.rows[0].error.find("ply 4") != std::string::npos);
    CHECK(r.rows[0].error.find("capture on first half") != std::string::npos);

    cfg.engine = mock();
    cfg.tolerance = 0;
    const StudyReport t = run_study({good, bad}, cfg);
    REQUIRE(t.rows.size() == 2);
    REQUIRE(t.rows[0].eval);
    CHECK(t.rows[0].eval->centipawns == 0);
    CHECK(*t.rows[0].deviation == 20);
    CHECK_FALSE(t.rows[0].within_tolerance);
    CHECK(t.max_deviation == 20);
    CHECK(t.within_tolerance == 0);
}

TEST_CASE("engine spawn failure aborts the study") {
    StudyConfig cfg;
    cfg.engine.path = "/nonexistent/engine-binary";
    CHECK_THROWS_AS(run_study(bundled_lines(), cfg), EngineError);
}

TEST_CASE("run config") {
    const RunConfig c = parse_run_config(R"({
        "engine": {"path": "/usr/bin/stockfish", "threads": 1, "hash_mb": 64, "options": {"UCI_ShowWDL": false}, "timeout_s": 5},
        "schedule": "WB/BW",
        "waiver_mode": "collapse-to-single",
        "solver": {"nodes": 1000, "table": 2000, "depth": 9},
        "study": {"depth": 32, "tolerance": 25, "workers": 2, "lines": "lines.json"},
        "output_dir": "reports"
    })",
                                         "/etc/lab");
    CHECK(c.engine.path == "/usr/bin/stockfish");
    CHECK(c.engine.hash_mb == 64);
    CHECK(c.engine.options.at("UCI_ShowWDL") == "false");
    CHECK(c.engine.timeout == std::chrono::seconds(5));
    CHECK(c.schedule == "WB/BW");
    CHECK(c.waiver_mode == WaiverMode::CollapseToSingle);
    CHECK(c.limits.node_budget == 1000);
    CHECK(c.limits.max_depth == 9);
    CHECK(c.study_depth == 32);
    CHECK(c.study_lines == "/etc/lab/lines.json");
    CHECK(c.output_dir == "reports");

    const RunConfig d = parse_run_config("{}");
    CHECK_FALSE(d.engine.configured());
    CHECK(d.study_depth == 30);
    CHECK(d.study_tolerance == 30);

    CHECK_THROWS_AS(parse_run_config("{\"schedule\": \"WWW/B\"}"), Error);
    CHECK_THROWS_AS(parse_run_config("{\"study\": {\"depth\": 0}}"), Error);
    CHECK_THROWS_AS(parse_run_config("{\"engine\": {\"threads\": \"two\"}}"), Error);
    CHECK_THROWS_AS(parse_run_config("not json"), Error);

    RunConfig e = d;
    ::setenv("FAIRCHESS_ENGINE", "/opt/engine", 1);
    apply_environment(e);
    ::unsetenv("FAIRCHESS_ENGINE");
    CHECK(e.engine.path == "/opt/engine");

    const RunConfig bundled = load_run_config(FAIRCHESS_DATA_DIR "/lab_config.json");
    CHECK(std::filesystem::exists(bundled.study_lines));
}
