// Test-only oracles, kept independent of the library's search and SNF paths:
// plain BFS for unit-weight word lengths, Bellman-Ford relaxation over an
// explicit vertex set for weighted norms, and rational Gaussian elimination
// for ranks.
#pragma once

#include <deque>
#include <map>
#include <random>
#include <vector>

#include "ccg/group.hpp"
#include "ccg/linalg.hpp"

namespace oracle {

using ccg::ElementLess;
using ccg::GroupElement;
using ccg::GroupSpec;
using ccg::Int;
using ccg::IntegerMatrix;
using ccg::Rat;

/// BFS word-length depths from the identity, all generators weight 1.
inline std::map<GroupElement, int, ElementLess> bfs_depths(
    const GroupSpec& g, const std::vector<GroupElement>& gens, int max_depth) {
    std::map<GroupElement, int, ElementLess> depth;
    std::deque<GroupElement> queue;
    depth.emplace(ccg::identity(g), 0);
    queue.push_back(ccg::identity(g));
    while (!queue.empty()) {
        GroupElement cur = queue.front();
        queue.pop_front();
        int d = depth.at(cur);
        if (d == max_depth) continue;
        for (const auto& s : gens) {
            GroupElement next = ccg::multiply(g, cur, s);
            if (depth.emplace(next, d + 1).second) queue.push_back(next);
        }
    }
    return depth;
}

/// Weighted norms by Bellman-Ford relaxation restricted to `vertices`:
/// repeatedly relax x -> x*s until nothing changes. Exact for any vertex
/// whose true shortest factorization stays inside the vertex set.
inline std::map<GroupElement, Rat, ElementLess> bellman_ford_norms(
    const GroupSpec& g, const std::vector<std::pair<GroupElement, Rat>>& gens,
    const std::vector<GroupElement>& vertices) {
    std::map<GroupElement, Rat, ElementLess> best;
    std::map<GroupElement, bool, ElementLess> in_set;
    for (const auto& v : vertices) in_set[ccg::canonicalize(g, v)] = true;
    best[ccg::identity(g)] = Rat(0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [x, cost] : std::map<GroupElement, Rat, ElementLess>(best)) {
            for (const auto& [s, w] : gens) {
                GroupElement next = ccg::multiply(g, x, s);
                if (!in_set.count(next)) continue;
                Rat c = cost + w;
                auto it = best.find(next);
                if (it == best.end() || c < it->second) {
                    best[next] = c;
                    changed = true;
                }
            }
        }
    }
    return best;
}

/// Rank over Q by classical Gaussian elimination on exact rationals.
inline int gauss_rank(const IntegerMatrix& m) {
    std::vector<std::vector<Rat>> w(m.rows, std::vector<Rat>(m.cols));
    for (int r = 0; r < m.rows; ++r)
        for (int c = 0; c < m.cols; ++c) w[r][c] = Rat(m.at(r, c));
    int rank = 0;
    for (int col = 0; col < m.cols && rank < m.rows; ++col) {
        int pivot = -1;
        for (int r = rank; r < m.rows; ++r)
            if (w[r][col] != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(w[rank], w[pivot]);
        for (int r = 0; r < m.rows; ++r) {
            if (r == rank || w[r][col] == 0) continue;
            Rat f = w[r][col] / w[rank][col];
            for (int c = col; c < m.cols; ++c) w[r][c] -= f * w[rank][c];
        }
        ++rank;
    }
    return rank;
}

/// Deterministic RNG reduced by modulo from the standardized mt19937_64
/// stream (distributions are not portable across standard libraries).
struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}
    std::uint64_t next() { return eng(); }
    int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
    int range(int lo, int hi) { return lo + below(hi - lo + 1); }  // inclusive
};

}  // namespace oracle
