#include "fairchess/study.hpp"

#include "fairchess/notation.hpp"
#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace fairchess {

namespace {

using nlohmann::ordered_json;

std::string_view role_name(StudyRole r) { return r == StudyRole::Baseline ? "baseline" : "variant"; }

StudyRole parse_role(const std::string& s) {
    if (s == "variant") return StudyRole::Variant;
    if (s == "baseline") return StudyRole::Baseline;
    throw Error("unknown study role '" + s + "'");
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

StudyRow prepare(const StudyLine& line, const VariantOptions& options) {
    StudyRow row;
    row.line = line;
    try {
        const VariantState start = VariantState::initial(MoveSchedule::from_token(line.schedule), options);
        const auto moves = parse_line(line.text, start);
        row.xfen = encode_xfen(replay(start, moves));
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

void score(StudyRow& row, const EvalResult& e, int tolerance) {
    row.eval = e;
    row.deviation = std::abs(e.centipawns - row.line.expected_cp);
    row.within_tolerance = *row.deviation <= tolerance;
}

}  // namespace

std::vector<StudyLine> load_study_lines(std::istream& in) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("study file: ") + e.what());
    }
    if (doc.is_object() && doc.contains("lines")) doc = doc["lines"];
    if (!doc.is_array()) throw Error("study file: expected an array of lines");
    std::vector<StudyLine> out;
    for (const auto& j : doc) {
        StudyLine l;
        try {
            l.label = j.at("label").get<std::string>();
            l.text = j.at("text").get<std::string>();
            l.schedule = j.value("schedule", l.schedule);
            l.expected_cp = j.value("expected_cp", 0);
            l.expected_depth = j.value("expected_depth", 0);
            l.role = parse_role(j.value("role", std::string("variant")));
            l.note = j.value("note", std::string());
        } catch (const nlohmann::json::exception& e) {
            throw Error(std::string("study file: ") + e.what());
        }
        out.push_back(std::move(l));
    }
    return out;
}

std::vector<StudyLine> load_study_lines_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open study file '" + path + "'");
    return load_study_lines(in);
}

StudyReport run_study(const std::vector<StudyLine>& lines, const StudyConfig& config) {
    if (config.depth < 1) throw Error("study depth must be positive");
    if (config.tolerance < 0) throw Error("study tolerance must be non-negative");

    StudyReport report;
    report.depth = config.depth;
    report.tolerance = config.tolerance;
    for (const StudyLine& l : lines) report.rows.push_back(prepare(l, config.variant));

    if (!config.engine.configured()) {
        report.skipped = true;
        report.skip_reason = "no engine configured";
        return report;
    }

    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < report.rows.size(); ++i)
        if (report.rows[i].error.empty()) todo.push_back(i);

    const int workers = std::clamp<int>(config.workers, 1, std::max<int>(1, static_cast<int>(todo.size())));
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::exception_ptr spawn_failure;

    auto work = [&] {
        std::unique_ptr<UciEngine> engine;
        try {
            engine = std::make_unique<UciEngine>(config.engine);
        } catch (...) {
            std::lock_guard lock(mu);
            if (!spawn_failure) spawn_failure = std::current_exception();
            return;
        }
        {
            std::lock_guard lock(mu);
            report.engine = engine->name();
        }
        for (std::size_t k; (k = next.fetch_add(1)) < todo.size();) {
            StudyRow& row = report.rows[todo[k]];
            try {
                const VariantState v = decode_xfen(row.xfen, config.variant);
                score(row, evaluate(v, config.depth, *engine), config.tolerance);
            } catch (const EngineError& e) {
                row.error = e.what();
                try {
                    engine = std::make_unique<UciEngine>(config.engine);
                } catch (...) {
                    std::lock_guard lock(mu);
                    if (!spawn_failure) spawn_failure = std::current_exception();
                    return;
                }
            } catch (const std::exception& e) {
                row.error = e.what();
            }
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    }
    if (spawn_failure) std::rethrow_exception(spawn_failure);

    for (const StudyRow& r : report.rows) {
        if (!r.deviation) continue;
        report.max_deviation = std::max(report.max_deviation, *r.deviation);
        report.within_tolerance += r.within_tolerance;
    }
    return report;
}

std::string study_json(const StudyReport& r) {
    ordered_json j;
    j["skipped"] = r.skipped;
    if (r.skipped) j["skip_reason"] = r.skip_reason;
    j["engine"] = r.engine;
    j["depth"] = r.depth;
    j["tolerance_cp"] = r.tolerance;
    j["caveat"] = "engines evaluate the position only; the move schedule is invisible to them";
    ordered_json rows = ordered_json::array();
    for (const StudyRow& row : r.rows) {
        ordered_json o;
        o["label"] = row.line.label;
        o["role"] = role_name(row.line.role);
        o["schedule"] = row.line.schedule;
        o["text"] = row.line.text;
        o["xfen"] = row.xfen;
        o["expected_cp"] = row.line.expected_cp;
        o["expected_depth"] = row.line.expected_depth;
        if (row.eval) {
            o["centipawns"] = row.eval->centipawns;
            o["depth"] = row.eval->depth;
            o["seconds"] = row.eval->seconds;
            o["bestmove"] = row.eval->bestmove;
            if (row.eval->mate_in_plies) o["mate_in_plies"] = *row.eval->mate_in_plies;
            o["deviation_cp"] = *row.deviation;
            o["within_tolerance"] = row.within_tolerance;
        } else {
            o["centipawns"] = nullptr;
        }
        if (!row.error.empty()) o["error"] = row.error;
        if (!row.line.note.empty()) o["note"] = row.line.note;
        rows.push_back(std::move(o));
    }
    j["rows"] = std::move(rows);
    j["summary"] = {{"lines", r.rows.size()},
                    {"within_tolerance", r.within_tolerance},
                    {"max_deviation_cp", r.max_deviation}};
    return j.dump(2) + "\n";
}

std::string study_csv(const StudyReport& r) {
    std::ostringstream os;
    os << "label,role,schedule,xfen,expected_cp,centipawns,depth,deviation_cp,within_tolerance,error\n";
    for (const StudyRow& row : r.rows) {
        os << csv_field(row.line.label) << ',' << role_name(row.line.role) << ',' << csv_field(row.line.schedule)
           << ',' << csv_field(row.xfen) << ',' << row.line.expected_cp << ',';
        if (row.eval)
            os << row.eval->centipawns << ',' << row.eval->depth << ',' << *row.deviation << ','
               << (row.within_tolerance ? "yes" : "no");
        else
            os << ",,,";
        os << ',' << csv_field(row.error) << '\n';
    }
    return os.str();
}

}  // namespace fairchess
