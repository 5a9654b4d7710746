#include "fairchess/uci_engine.hpp"

#include <cerrno>
#include <csignal>
#include <cstring>
#include <fcntl.h>
#include <poll.h>
#include <sstream>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

namespace fairchess {

std::optional<UciInfo> parse_info_line(std::string_view line) {
    std::istringstream is{std::string(line)};
    std::string tok;
    if (!(is >> tok) || tok != "info") return std::nullopt;
    UciInfo info;
    while (is >> tok) {
        if (tok == "depth") {
            is >> info.depth;
        } else if (tok == "score") {
            std::string kind;
            UciScore s;
            if (!(is >> kind >> s.value)) return std::nullopt;
            if (kind == "mate") s.mate = true;
            else if (kind != "cp") return std::nullopt;
            std::streampos here = is.tellg();
            std::string next;
            if (is >> next && (next == "lowerbound" || next == "upperbound")) s.bound = true;
            else if (here != std::streampos(-1)) is.seekg(here);
            info.score = s;
        } else if (tok == "pv" || tok == "string") {
            break;
        }
    }
    return info;
}

int normalize_score(const UciScore& s, Color side_to_move, std::optional<int>* mate_plies) {
    int v = s.value;
    if (s.mate) {
        const int plies = s.value > 0 ? 2 * s.value - 1 : -2 * s.value;
        v = s.value > 0 ? kMateValue - plies : -(kMateValue - plies);
        if (mate_plies) *mate_plies = plies;
    }
    return side_to_move == Color::White ? v : -v;
}

UciEngine::UciEngine(EngineConfig config) : config_(std::move(config)) {
    if (!config_.configured()) throw EngineError("no engine path configured");

    int sv[2];
    if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, sv) != 0)
        throw EngineError(std::string("socketpair: ") + std::strerror(errno));
    int err_pipe[2];
    if (::pipe2(err_pipe, O_CLOEXEC) != 0) {
        ::close(sv[0]);
        ::close(sv[1]);
        throw EngineError(std::string("pipe: ") + std::strerror(errno));
    }

    std::vector<std::string> argv_store{config_.path};
    argv_store.insert(argv_store.end(), config_.args.begin(), config_.args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());
    argv.push_back(nullptr);

    const pid_t pid = ::fork();
    if (pid < 0) {
        for (int fd : {sv[0], sv[1], err_pipe[0], err_pipe[1]}) ::close(fd);
        throw EngineError(std::string("fork: ") + std::strerror(errno));
    }
    if (pid == 0) {
        ::dup2(sv[1], STDIN_FILENO);
        ::dup2(sv[1], STDOUT_FILENO);
        ::execvp(argv[0], argv.data());
        const int e = errno;
        [[maybe_unused]] auto n = ::write(err_pipe[1], &e, sizeof e);
        ::_exit(127);
    }
    ::close(sv[1]);
    ::close(err_pipe[1]);
    pid_ = pid;
    fd_ = sv[0];

    int child_errno = 0;
    const auto n = ::read(err_pipe[0], &child_errno, sizeof child_errno);
    ::close(err_pipe[0]);
    if (n > 0) {
        ::close(fd_);
        fd_ = -1;
        ::waitpid(pid_, nullptr, 0);
        pid_ = -1;
        throw EngineError("cannot start engine '" + config_.path + "': " + std::strerror(child_errno));
    }

    send("uci");
    for (;;) {
        const std::string line = receive();
        if (line.starts_with("id name ")) name_ = line.substr(8);
        if (line == "uciok") break;
    }
    send("setoption name Threads value " + std::to_string(config_.threads));
    send("setoption name Hash value " + std::to_string(config_.hash_mb));
    for (const auto& [k, v] : config_.options) send("setoption name " + k + " value " + v);
    send("isready");
    wait_for("readyok");
}

UciEngine::~UciEngine() {
    if (fd_ >= 0) {
        const char quit[] = "quit\n";
        ::send(fd_, quit, sizeof quit - 1, MSG_NOSIGNAL);
        ::close(fd_);
    }
    if (pid_ > 0) {
        for (int i = 0; i < 50; ++i) {
            if (::waitpid(pid_, nullptr, WNOHANG) == pid_) return;
            ::usleep(10'000);
        }
        ::kill(pid_, SIGKILL);
        ::waitpid(pid_, nullptr, 0);
    }
}

void UciEngine::fail(const std::string& what) { throw EngineError(what, transcript_); }

void UciEngine::send(const std::string& line) {
    transcript_.push_back("> " + line);
    const std::string data = line + "\n";
    std::size_t off = 0;
    while (off < data.size()) {
        const auto n = ::send(fd_, data.data() + off, data.size() - off, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) continue;
            fail("engine write failed: " + std::string(std::strerror(errno)));
        }
        off += static_cast<std::size_t>(n);
    }
}

std::string UciEngine::receive() {
    const auto deadline = std::chrono::steady_clock::now() + config_.timeout;
    for (;;) {
        if (const auto nl = buffer_.find('\n'); nl != std::string::npos) {
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            transcript_.push_back("< " + line);
            return line;
        }
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
        if (left.count() <= 0) fail("engine timed out");
        pollfd p{fd_, POLLIN, 0};
        const int r = ::poll(&p, 1, static_cast<int>(std::min<long long>(left.count(), 1'000'000)));
        if (r < 0) {
            if (errno == EINTR) continue;
            fail(std::string("poll: ") + std::strerror(errno));
        }
        if (r == 0) continue;
        char chunk[4096];
        const auto n = ::read(fd_, chunk, sizeof chunk);
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) fail("engine closed its output (crashed?)");
        buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

std::string UciEngine::wait_for(std::string_view prefix) {
    for (;;) {
        std::string line = receive();
        if (line.starts_with(prefix)) return line;
    }
}

EvalResult UciEngine::evaluate_fen(const std::string& fen, Color side_to_move, int depth) {
    if (depth < 1) throw EngineError("search depth must be positive");
    const auto start = std::chrono::steady_clock::now();
    send("ucinewgame");
    send("isready");
    wait_for("readyok");
    send("position fen " + fen);
    send("go depth " + std::to_string(depth));

    std::optional<UciScore> last;
    int last_depth = 0;
    std::string bestmove;
    for (;;) {
        const std::string line = receive();
        if (line.starts_with("bestmove")) {
            std::istringstream is(line);
            std::string tok;
            is >> tok >> bestmove;
            break;
        }
        if (auto info = parse_info_line(line); info && info->score && !info->score->bound) {
            last = info->score;
            last_depth = info->depth;
        }
    }
    if (!last) fail("engine reported no score before bestmove");

    EvalResult r;
    r.centipawns = normalize_score(*last, side_to_move, &r.mate_in_plies);
    r.depth = last_depth;
    r.engine = name_;
    r.bestmove = bestmove;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.depth < depth && !r.mate_in_plies)
        fail("engine stopped at depth " + std::to_string(r.depth) + " < " + std::to_string(depth));
    return r;
}

EvalResult evaluate(const VariantState& v, int depth, UciEngine& engine) {
    return engine.evaluate_fen(v.position().fen(), v.mover(), depth);
}

}  // namespace fairchess
