#pragma once

#include "fairchess/position.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace fairchess {

struct PerftOptions {
    int max_depth = 6;
    unsigned threads = 1;  // >1 splits root subtrees across workers
};

/// Leaf count of the legal-move tree at exactly `depth`, standard alternation.
/// Throws std::invalid_argument when depth is negative or over the limit.
std::uint64_t perft(const Position& p, int depth, const PerftOptions& opts = {});

std::vector<std::pair<Move, std::uint64_t>> perft_divide(const Position& p, int depth,
                                                         const PerftOptions& opts = {});

}  // namespace fairchess
