#include "fairchess/perft.hpp"

#include <future>
#include <stdexcept>
#include <string>

namespace fairchess {

namespace {

std::uint64_t count(const Position& p, int depth) {
    if (depth == 0) return 1;
    const auto moves = p.legal_moves();
    if (depth == 1) return moves.size();
    std::uint64_t n = 0;
    for (const Move& m : moves) n += count(p.apply_unchecked(m), depth - 1);
    return n;
}

void check_depth(int depth, const PerftOptions& opts) {
    if (depth < 0 || depth > opts.max_depth)
        throw std::invalid_argument("perft depth " + std::to_string(depth) + " outside [0, " +
                                    std::to_string(opts.max_depth) + "]");
}

}  // namespace

std::vector<std::pair<Move, std::uint64_t>> perft_divide(const Position& p, int depth, const PerftOptions& opts) {
    check_depth(depth, opts);
    std::vector<std::pair<Move, std::uint64_t>> out;
    if (depth == 0) return out;
    const auto moves = p.legal_moves();
    out.reserve(moves.size());
    for (const Move& m : moves) out.emplace_back(m, 0);

    if (opts.threads <= 1) {
        for (auto& [m, n] : out) n = count(p.apply_unchecked(m), depth - 1);
        return out;
    }
    // Root moves are dealt round-robin to workers; each slot is written by one worker only.
    std::vector<std::future<void>> workers;
    const std::size_t stride = opts.threads;
    for (std::size_t w = 0; w < stride; ++w) {
        workers.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < out.size(); i += stride)
                out[i].second = count(p.apply_unchecked(out[i].first), depth - 1);
        }));
    }
    for (auto& f : workers) f.get();
    return out;
}

std::uint64_t perft(const Position& p, int depth, const PerftOptions& opts) {
    check_depth(depth, opts);
    if (depth == 0) return 1;
    if (opts.threads <= 1) return count(p, depth);
    std::uint64_t n = 0;
    for (const auto& [m, c] : perft_divide(p, depth, opts)) n += c;
    return n;
}

}  // namespace fairchess
