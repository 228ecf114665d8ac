// Exact minimal-diameter cover search. A k-coloring of a finite metric table
// induces, per color, the d-components of its color class (transitive closure
// of "same color and distance <= d"); those components are the family sets.
// solve_min_diameter minimizes the maximal component diameter by
// branch-and-bound; exhaustive_cover_oracle does the same by full enumeration.
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ccg/metric.hpp"

namespace ccg {

/// Points with exact pairwise distances.
struct MetricTable {
    std::vector<std::string> ids;
    std::vector<std::vector<Rat>> dist;  // full symmetric matrix, zero diagonal

    int size() const { return static_cast<int>(ids.size()); }
};

inline MetricTable metric_table_from_ball(const MetricContext& ctx, const Rat& radius) {
    MetricTable t;
    auto ball = ctx.ball_with_norms(radius);
    Rat cap = radius * 2;
    if (cap < 1) cap = 1;
    t.ids.reserve(ball.size());
    for (const auto& [x, nx] : ball) t.ids.push_back(element_str(ctx.group(), x));
    t.dist.assign(ball.size(), std::vector<Rat>(ball.size(), Rat(0)));
    for (std::size_t i = 0; i < ball.size(); ++i)
        for (std::size_t j = i + 1; j < ball.size(); ++j) {
            auto d = ctx.distance(ball[i].first, ball[j].first, cap);
            if (!d) throw std::logic_error("ball pair distance exceeded twice the radius");
            t.dist[i][j] = t.dist[j][i] = *d;
        }
    return t;
}

struct SolveResult {
    Rat r_star;                  // best achieved maximal component diameter
    bool exact = false;          // search ran to completion within budget
    Rat lower_bound;             // equals r_star when exact
    std::vector<int> coloring;   // witness; lexicographically minimal among optima when exact
    std::uint64_t nodes = 0;     // explored search nodes
};

namespace detail {

/// Distances compressed to indices into a sorted value list; all search work
/// is integer-only and order-isomorphic to the exact rationals.
struct SolverInstance {
    int n = 0;
    int k = 1;
    std::vector<Rat> values;              // sorted distinct distances, values[0] == 0
    std::vector<std::vector<int>> didx;   // distance value index per pair
    std::vector<std::vector<char>> near;  // dist <= d

    SolverInstance(const MetricTable& t, int k_, const Rat& d) : n(t.size()), k(k_) {
        if (k < 1) throw error("family count k must be at least 1");
        std::set<Rat> vals;
        vals.insert(Rat(0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) vals.insert(t.dist[i][j]);
        values.assign(vals.begin(), vals.end());
        auto index_of = [&](const Rat& v) {
            return static_cast<int>(std::lower_bound(values.begin(), values.end(), v) -
                                    values.begin());
        };
        didx.assign(n, std::vector<int>(n, 0));
        near.assign(n, std::vector<char>(n, 0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                didx[i][j] = index_of(t.dist[i][j]);
                near[i][j] = t.dist[i][j] <= d ? 1 : 0;
            }
    }
};

/// Mutable component state for one color class.
struct ColorState {
    // Components as point lists plus the index of their diameter value.
    std::vector<std::vector<int>> comps;
    std::vector<int> diam;
};

/// Objective of a full coloring, evaluated from scratch (shared by the greedy
/// seed and the oracle; deliberately simple).
inline int coloring_objective(const SolverInstance& inst, const std::vector<int>& color) {
    std::vector<int> root(inst.n);
    for (int i = 0; i < inst.n; ++i) root[i] = i;
    std::function<int(int)> find = [&](int x) {
        while (root[x] != x) x = root[x] = root[root[x]];
        return x;
    };
    for (int i = 0; i < inst.n; ++i)
        for (int j = i + 1; j < inst.n; ++j)
            if (color[i] == color[j] && inst.near[i][j]) root[find(i)] = find(j);
    int worst = 0;
    for (int i = 0; i < inst.n; ++i)
        for (int j = i + 1; j < inst.n; ++j)
            if (color[i] == color[j] && find(i) == find(j) && inst.didx[i][j] > worst)
                worst = inst.didx[i][j];
    return worst;
}

class BranchAndBound {
  public:
    BranchAndBound(const SolverInstance& inst, std::uint64_t budget)
        : inst_(inst), budget_(budget), states_(inst.k) {}

    SolveResult run() {
        // Greedy first-fit incumbent: each point takes the color whose
        // resulting overall maximum grows least (ties to the lowest color).
        std::vector<int> greedy(inst_.n, 0);
        {
            int cur = 0;
            for (int p = 0; p < inst_.n; ++p) {
                int best_color = 0, best_val = -1;
                for (int c = 0; c < inst_.k; ++c) {
                    int after = place_peek(p, c, cur);
                    if (best_val < 0 || after < best_val) {
                        best_val = after;
                        best_color = c;
                    }
                }
                greedy[p] = best_color;
                cur = place(p, best_color, cur);
            }
            incumbent_value_ = cur;
            incumbent_ = greedy;
            for (int p = inst_.n - 1; p >= 0; --p) unplace(p, greedy[p]);
        }

        color_.assign(inst_.n, -1);
        dfs(0, 0, 0);

        SolveResult res;
        res.nodes = nodes_;
        res.exact = !aborted_;
        res.r_star = inst_.values[incumbent_value_];
        res.coloring = incumbent_;
        if (aborted_) {
            int lb = incumbent_value_;
            if (abandoned_min_ >= 0 && abandoned_min_ < lb) lb = abandoned_min_;
            res.lower_bound = inst_.values[lb];
        } else {
            res.lower_bound = res.r_star;
        }
        return res;
    }

  private:
    void dfs(int p, int cur_max, int used_colors) {
        if (aborted_) {
            if (abandoned_min_ < 0 || cur_max < abandoned_min_) abandoned_min_ = cur_max;
            return;
        }
        if (p == inst_.n) {
            // cur_max is the exact objective: components only ever merged.
            if (cur_max < incumbent_value_ ||
                (cur_max == incumbent_value_ && !have_search_witness_)) {
                incumbent_value_ = cur_max;
                incumbent_ = color_;
                have_search_witness_ = true;
            }
            return;
        }
        int max_color = used_colors < inst_.k ? used_colors : inst_.k - 1;
        for (int c = 0; c <= max_color; ++c) {
            ++nodes_;
            if (nodes_ > budget_) aborted_ = true;
            if (aborted_) {
                if (abandoned_min_ < 0 || cur_max < abandoned_min_) abandoned_min_ = cur_max;
                return;
            }
            int after = place_peek(p, c, cur_max);
            bool prune = after > incumbent_value_ ||
                         (after == incumbent_value_ && have_search_witness_);
            if (prune) continue;
            int saved = place(p, c, cur_max);
            color_[p] = c;
            dfs(p + 1, saved, c == used_colors ? used_colors + 1 : used_colors);
            color_[p] = -1;
            unplace(p, c);
        }
    }

    /// Maximum component diameter after placing p into color c, without mutating.
    int place_peek(int p, int c, int cur_max) const {
        const ColorState& st = states_[c];
        int worst = cur_max;
        // The merged component is {p} plus every component touching p.
        std::vector<int> merged;
        for (std::size_t ci = 0; ci < st.comps.size(); ++ci) {
            bool touches = false;
            for (int q : st.comps[ci])
                if (inst_.near[p][q]) {
                    touches = true;
                    break;
                }
            if (touches) merged.push_back(static_cast<int>(ci));
        }
        int diam = 0;
        for (int ci : merged) {
            if (st.diam[ci] > diam) diam = st.diam[ci];
            for (int q : st.comps[ci])
                if (inst_.didx[p][q] > diam) diam = inst_.didx[p][q];
        }
        for (std::size_t a = 0; a < merged.size(); ++a)
            for (std::size_t b = a + 1; b < merged.size(); ++b)
                for (int qa : st.comps[merged[a]])
                    for (int qb : st.comps[merged[b]])
                        if (inst_.didx[qa][qb] > diam) diam = inst_.didx[qa][qb];
        return diam > worst ? diam : worst;
    }

    /// Mutating version; returns the new overall maximum and records an undo.
    int place(int p, int c, int cur_max) {
        ColorState& st = states_[c];
        undo_.push_back(st);  // whole-class snapshot; classes are tiny
        std::vector<int> merged_pts{p};
        std::vector<std::vector<int>> kept;
        std::vector<int> kept_diam;
        int diam = 0;
        for (std::size_t ci = 0; ci < st.comps.size(); ++ci) {
            bool touches = false;
            for (int q : st.comps[ci])
                if (inst_.near[p][q]) {
                    touches = true;
                    break;
                }
            if (!touches) {
                kept.push_back(st.comps[ci]);
                kept_diam.push_back(st.diam[ci]);
                continue;
            }
            if (st.diam[ci] > diam) diam = st.diam[ci];
            for (int q : st.comps[ci]) {
                for (int m : merged_pts)
                    if (inst_.didx[q][m] > diam) diam = inst_.didx[q][m];
                merged_pts.push_back(q);
            }
        }
        kept.push_back(std::move(merged_pts));
        kept_diam.push_back(diam);
        st.comps = std::move(kept);
        st.diam = std::move(kept_diam);
        return diam > cur_max ? diam : cur_max;
    }

    void unplace(int, int c) {
        states_[c] = std::move(undo_.back());
        undo_.pop_back();
    }

    const SolverInstance& inst_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    bool aborted_ = false;
    bool have_search_witness_ = false;
    int incumbent_value_ = 0;
    int abandoned_min_ = -1;
    std::vector<int> incumbent_;
    std::vector<int> color_;
    std::vector<ColorState> states_;
    std::vector<ColorState> undo_;
};

}  // namespace detail

/// Branch-and-bound minimal maximal d-component diameter over k-colorings.
/// Deterministic: points are processed in table order, the branch variable is
/// the lowest-index uncolored point, and the witness of an exact solve is the
/// lexicographically minimal optimal coloring.
inline SolveResult solve_min_diameter(const MetricTable& table, int k, const Rat& d,
                                      std::uint64_t budget = 50'000'000) {
    if (d <= 0) throw error("scale d must be positive");
    detail::SolverInstance inst(table, k, d);
    if (inst.n == 0) {
        SolveResult res;
        res.r_star = 0;
        res.lower_bound = 0;
        res.exact = true;
        return res;
    }
    return detail::BranchAndBound(inst, budget).run();
}

/// Exact R* by full enumeration of all k^n colorings. Hard cap n <= 16.
inline Rat exhaustive_cover_oracle(const MetricTable& table, int k, const Rat& d) {
    if (table.size() > 16) throw error("exhaustive oracle is capped at 16 points");
    if (d <= 0) throw error("scale d must be positive");
    if (k < 1) throw error("family count k must be at least 1");
    detail::SolverInstance inst(table, k, d);
    if (inst.n == 0) return Rat(0);
    std::vector<int> color(inst.n, 0);
    int best = -1;
    for (;;) {
        int v = detail::coloring_objective(inst, color);
        if (best < 0 || v < best) best = v;
        int p = inst.n - 1;
        while (p >= 0 && color[p] == k - 1) color[p--] = 0;
        if (p < 0) break;
        ++color[p];
    }
    return inst.values[best];
}

// ---------------------------------------------------------------------------
// Instance and result files

/// {"points": [...], "dist": ["p/q", ...] (upper triangle, row-major),
///  "k": int, "d": "p/q"}
inline nlohmann::json instance_to_json(const MetricTable& t, int k, const Rat& d) {
    nlohmann::json j;
    j["points"] = t.ids;
    std::vector<std::string> flat;
    for (int i = 0; i < t.size(); ++i)
        for (int c = i + 1; c < t.size(); ++c) flat.push_back(rat_str(t.dist[i][c]));
    j["dist"] = flat;
    j["k"] = k;
    j["d"] = rat_str(d);
    return j;
}

struct SolverInstanceFile {
    MetricTable table;
    int k = 1;
    Rat d;
};

inline SolverInstanceFile instance_from_json(const nlohmann::json& j) {
    SolverInstanceFile f;
    if (!j.contains("points") || !j.contains("dist") || !j.contains("k") || !j.contains("d"))
        throw error("instance file must have points, dist, k, d");
    f.table.ids = j.at("points").get<std::vector<std::string>>();
    int n = static_cast<int>(f.table.ids.size());
    auto flat = j.at("dist").get<std::vector<std::string>>();
    if (flat.size() != static_cast<std::size_t>(n) * (n - 1) / 2)
        throw error("dist must list the strict upper triangle row-major");
    f.table.dist.assign(n, std::vector<Rat>(n, Rat(0)));
    std::size_t at = 0;
    for (int i = 0; i < n; ++i)
        for (int c = i + 1; c < n; ++c) {
            Rat v = parse_rat(flat[at++]);
            if (v < 0) throw error("distances must be nonnegative");
            f.table.dist[i][c] = f.table.dist[c][i] = v;
        }
    f.k = j.at("k").get<int>();
    f.d = parse_rat(j.at("d").get<std::string>());
    return f;
}

inline nlohmann::json result_to_json(const SolveResult& r) {
    nlohmann::json j;
    j["r_star"] = rat_str(r.r_star);
    j["exact"] = r.exact;
    j["lower_bound"] = rat_str(r.lower_bound);
    j["coloring"] = r.coloring;
    j["nodes"] = r.nodes;
    return j;
}

}  // namespace ccg
