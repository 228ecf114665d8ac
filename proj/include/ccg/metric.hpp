// Weighted word metrics: weight functions, the induced proper norm, closed
// balls, coarse-equivalence profiles (rho1/rho2) and R-stabilizers.
//
// Norms are computed by best-first search over the implicit weighted Cayley
// graph with exact rational costs; ties are broken by the canonical element
// key, so results are deterministic. Every search is capped; properness of
// the weight function keeps capped searches finite.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "ccg/group.hpp"

namespace ccg {

/// Raised when a ball is requested at a radius the generating-set truncation
/// cannot cover faithfully (RationalsTruncated only).
struct truncation_error : error {
    using error::error;
};

struct WeightEntry {
    GroupElement generator;
    Rat weight;
};

/// Symmetric positive weights on a generating set. Constructed through
/// make_weight_function, which symmetrizes and validates.
struct WeightFunction {
    GroupSpec group;
    std::vector<WeightEntry> entries;
    bool symmetrized = false;
};

namespace detail {
/// Truncation index n if x == +-1/n! for some n <= depth.
inline std::optional<int> truncation_index(int depth, const GroupElement& x) {
    auto* r = std::get_if<Rat>(&x.v);
    if (!r) return std::nullopt;
    for (int n = 1; n <= depth; ++n) {
        Rat gen(Int(1), factorial(n));
        if (*r == gen || *r == -gen) return n;
    }
    return std::nullopt;
}
}  // namespace detail

inline WeightFunction make_weight_function(const GroupSpec& group,
                                           std::vector<WeightEntry> raw) {
    std::map<GroupElement, Rat, ElementLess> table;
    for (auto& e : raw) {
        if (e.weight <= 0) throw error("weights must be positive");
        GroupElement g = canonicalize(group, e.generator);
        if (is_identity(group, g)) throw error("generators must not be the identity");
        auto [it, inserted] = table.emplace(g, e.weight);
        if (!inserted && it->second != e.weight)
            throw error("conflicting weights for generator " + element_str(group, g));
    }
    // Symmetrize: w(s^-1) = w(s).
    for (const auto& [g, w] : std::map<GroupElement, Rat, ElementLess>(table)) {
        GroupElement gi = invert(group, g);
        auto [it, inserted] = table.emplace(gi, w);
        if (!inserted && it->second != w)
            throw error("inverse pair has conflicting weights at " + element_str(group, gi));
    }
    if (auto* rt = std::get_if<RationalsTruncated>(&group.v)) {
        // Entries must be canonical +-1/n! with weights strictly increasing in n.
        std::map<int, Rat> by_index;
        for (const auto& [g, w] : table) {
            auto idx = detail::truncation_index(rt->depth, g);
            if (!idx)
                throw error("rationals_truncated weights must sit on generators +-1/n!, n <= " +
                            std::to_string(rt->depth));
            auto [it, inserted] = by_index.emplace(*idx, w);
            if (!inserted && it->second != w)
                throw error("conflicting weights at truncation index " + std::to_string(*idx));
        }
        const Rat* prev = nullptr;
        for (const auto& [n, w] : by_index) {
            if (prev && !(*prev < w))
                throw error("weights must be strictly increasing in the truncation index");
            prev = &w;
        }
    }
    WeightFunction wf;
    wf.group = group;
    wf.symmetrized = true;
    for (auto& [g, w] : table) wf.entries.push_back(WeightEntry{g, w});
    // Canonical entry order: by (weight, element key).
    std::sort(wf.entries.begin(), wf.entries.end(), [](const WeightEntry& a, const WeightEntry& b) {
        if (a.weight != b.weight) return a.weight < b.weight;
        return compare(a.generator, b.generator) < 0;
    });
    return wf;
}

/// Standard generating sets: basis +- for FreeAbelian/Free, a+-, b+- for
/// Heisenberg, {+-1} for FiniteCyclic, factorwise for DirectProduct, and
/// {+-1/n!} with w(+-1/n!) = n for RationalsTruncated.
inline WeightFunction default_weight_function(const GroupSpec& group) {
    std::vector<WeightEntry> entries;
    if (std::holds_alternative<Heisenberg>(group.v)) {
        entries.push_back({GroupElement{std::array<Int, 3>{Int(1), Int(0), Int(0)}}, Rat(1)});
        entries.push_back({GroupElement{std::array<Int, 3>{Int(0), Int(1), Int(0)}}, Rat(1)});
    } else if (auto* rt = std::get_if<RationalsTruncated>(&group.v)) {
        for (int n = 1; n <= rt->depth; ++n)
            entries.push_back({GroupElement{Rat(Int(1), factorial(n))}, Rat(n)});
    } else if (auto* dp = std::get_if<DirectProduct>(&group.v)) {
        for (std::size_t i = 0; i < dp->factors.size(); ++i) {
            WeightFunction sub = default_weight_function(dp->factors[i]);
            for (const auto& e : sub.entries) {
                GroupElement::Tuple t;
                for (std::size_t j = 0; j < dp->factors.size(); ++j)
                    t.push_back(j == i ? e.generator : identity(dp->factors[j]));
                entries.push_back({GroupElement{std::move(t)}, e.weight});
            }
        }
    } else {
        for (const auto& g : canonical_generators(group)) {
            if (std::holds_alternative<Heisenberg>(group.v)) break;  // unreachable
            if (is_identity(group, g)) continue;
            entries.push_back({g, Rat(1)});
        }
    }
    return make_weight_function(group, std::move(entries));
}

/// A group with a weight function and a monotone cache of explored norms.
/// The cache only ever grows; queries are pure given the cache state. Not
/// safe for concurrent mutation (cache writes must be serialized).
class MetricContext {
  public:
    MetricContext(GroupSpec group, WeightFunction weights)
        : group_(std::move(group)),
          weights_(std::move(weights)),
          cache_(std::make_shared<Cache>()) {
        if (!spec_equal(group_, weights_.group))
            throw error("weight function does not match the group");
        cache_->frontier.insert({Rat(0), identity(group_)});
    }

    explicit MetricContext(const GroupSpec& group)
        : MetricContext(group, default_weight_function(group)) {}

    const GroupSpec& group() const { return group_; }
    const WeightFunction& weights() const { return weights_; }

    /// Minimal factorization cost of x, or nullopt when it exceeds cap.
    std::optional<Rat> norm(const GroupElement& x, const Rat& cap) const {
        if (cap <= 0) throw error("cap must be positive");
        return norm_unchecked(x, cap);
    }

    /// d(x,y) = ||x^-1 y||.
    std::optional<Rat> distance(const GroupElement& x, const GroupElement& y,
                                const Rat& cap) const {
        return norm(multiply(group_, invert(group_, x), y), cap);
    }

    /// Exact norm of an element known to be generated by the weight entries.
    Rat norm_exact(const GroupElement& x) const {
        GroupElement c = canonicalize(group_, x);
        Rat cap = cache_->explored_to > 1 ? cache_->explored_to : Rat(1);
        for (int i = 0; i < 128; ++i) {
            auto v = norm_unchecked(c, cap);
            if (v) return *v;
            if (cache_->exhausted)
                throw error("element " + element_str(group_, c) +
                            " is not generated by the weight entries");
            cap *= 2;
        }
        throw error("norm search did not converge");
    }

    /// Closed ball at the identity: exactly the elements of norm <= r, sorted
    /// by (norm, canonical key). Finiteness realizes properness.
    std::vector<std::pair<GroupElement, Rat>> ball_with_norms(const Rat& r) const {
        if (r < 0) throw error("ball radius must be nonnegative");
        check_truncation(r);
        explore_until(r);
        std::vector<std::pair<GroupElement, Rat>> out;
        for (const auto& [g, c] : cache_->settled)
            if (c <= r) out.emplace_back(g, c);
        std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second < b.second;
            return compare(a.first, b.first) < 0;
        });
        return out;
    }

    std::vector<GroupElement> ball(const Rat& r) const {
        std::vector<GroupElement> out;
        for (auto& [g, c] : ball_with_norms(r)) out.push_back(g);
        return out;
    }

    /// True when the whole group has been enumerated (finite groups only).
    bool exhausted() const { return cache_->exhausted; }

  private:
    struct FrontierLess {
        bool operator()(const std::pair<Rat, GroupElement>& a,
                        const std::pair<Rat, GroupElement>& b) const {
            if (a.first != b.first) return a.first < b.first;
            return compare(a.second, b.second) < 0;
        }
    };
    struct Cache {
        std::map<GroupElement, Rat, ElementLess> settled;
        std::set<std::pair<Rat, GroupElement>, FrontierLess> frontier;
        Rat explored_to = Rat(-1);
        bool exhausted = false;
    };

    std::optional<Rat> norm_unchecked(const GroupElement& x, const Rat& cap) const {
        GroupElement c = canonicalize(group_, x);
        explore_until(cap);
        auto it = cache_->settled.find(c);
        if (it == cache_->settled.end() || it->second > cap) return std::nullopt;
        return it->second;
    }

    // Dijkstra over the implicit Cayley graph, settled monotonically in cost.
    void explore_until(const Rat& bound) const {
        Cache& c = *cache_;
        if (c.exhausted || bound <= c.explored_to) return;
        while (!c.frontier.empty() && c.frontier.begin()->first <= bound) {
            auto [cost, g] = *c.frontier.begin();
            c.frontier.erase(c.frontier.begin());
            if (c.settled.count(g)) continue;
            c.settled.emplace(g, cost);
            for (const auto& e : weights_.entries) {
                GroupElement next = multiply(group_, g, e.generator);
                if (!c.settled.count(next)) c.frontier.insert({cost + e.weight, next});
            }
        }
        if (c.frontier.empty()) c.exhausted = true;
        if (bound > c.explored_to) c.explored_to = bound;
    }

    // A missing truncation generator of default weight n < r would silently
    // change norms at radius r.
    void check_truncation(const Rat& r) const {
        auto* rt = std::get_if<RationalsTruncated>(&group_.v);
        if (!rt) return;
        for (int n = 1; n <= rt->depth; ++n) {
            if (Rat(n) >= r) continue;
            GroupElement gen{Rat(Int(1), factorial(n))};
            bool present = false;
            for (const auto& e : weights_.entries)
                if (element_equal(e.generator, gen)) {
                    present = true;
                    break;
                }
            if (!present)
                throw truncation_error("truncation too shallow: generator 1/" +
                                       std::to_string(n) + "! (weight " + std::to_string(n) +
                                       ") is required for balls of radius " + rat_str(r));
        }
    }

    GroupSpec group_;
    WeightFunction weights_;
    std::shared_ptr<Cache> cache_;
};

// ---------------------------------------------------------------------------
// Coarse-equivalence profiles

/// One profile row. rho2 is always exact. rho1 is exact over the searched
/// slice; `certified` records that it is provably the global minimum (every
/// element of smaller d'-norm was enumerated and shown to lie inside the open
/// d-ball). `infinite` marks an empty complement in a fully enumerated group.
struct RhoRow {
    Rat t;
    std::optional<Rat> rho1;
    bool rho1_infinite = false;
    bool rho1_certified = false;
    Rat rho2;
};

namespace detail {

/// Integer coordinates plus relation rows for kinds embeddable in Z^n / L.
/// Used to decide membership in images of abelian homomorphisms.
struct AbelianCoords {
    int dim = 0;
    IntegerMatrix relations;  // rows, possibly 0 x dim
    bool supported = false;
};

inline AbelianCoords abelian_coords_shape(const GroupSpec& g) {
    AbelianCoords out;
    if (auto* fa = std::get_if<FreeAbelian>(&g.v)) {
        out.dim = fa->rank;
        out.relations = IntegerMatrix(0, fa->rank);
        out.supported = true;
    } else if (std::get_if<RationalsTruncated>(&g.v)) {
        out.dim = 1;
        out.relations = IntegerMatrix(0, 1);
        out.supported = true;
    } else if (auto* fc = std::get_if<FiniteCyclic>(&g.v)) {
        out.dim = 1;
        out.relations = IntegerMatrix(1, 1);
        out.relations.at(0, 0) = fc->order;
        out.supported = true;
    } else if (auto* pa = std::get_if<PresentedAbelian>(&g.v)) {
        out.dim = pa->generators;
        out.relations = pa->relations;
        out.supported = true;
    } else if (auto* dp = std::get_if<DirectProduct>(&g.v)) {
        std::vector<AbelianCoords> parts;
        int dim = 0, relrows = 0;
        for (const auto& f : dp->factors) {
            parts.push_back(abelian_coords_shape(f));
            if (!parts.back().supported) return out;
            dim += parts.back().dim;
            relrows += parts.back().relations.rows;
        }
        out.dim = dim;
        out.relations = IntegerMatrix(relrows, dim);
        int roff = 0, coff = 0;
        for (const auto& p : parts) {
            for (int r = 0; r < p.relations.rows; ++r)
                for (int c = 0; c < p.dim; ++c)
                    out.relations.at(roff + r, coff + c) = p.relations.at(r, c);
            roff += p.relations.rows;
            coff += p.dim;
        }
        out.supported = true;
    }
    return out;
}

inline void abelian_coords_of(const GroupSpec& g, const GroupElement& x, std::vector<Int>& out) {
    if (std::get_if<FreeAbelian>(&g.v) || std::get_if<PresentedAbelian>(&g.v)) {
        const auto& v = std::get<std::vector<Int>>(x.v);
        out.insert(out.end(), v.begin(), v.end());
    } else if (auto* rt = std::get_if<RationalsTruncated>(&g.v)) {
        const auto& r = std::get<Rat>(x.v);
        out.push_back(numerator(r) * (factorial(rt->depth) / denominator(r)));
    } else if (std::get_if<FiniteCyclic>(&g.v)) {
        out.push_back(std::get<Int>(x.v));
    } else if (auto* dp = std::get_if<DirectProduct>(&g.v)) {
        const auto& t = std::get<GroupElement::Tuple>(x.v);
        for (std::size_t i = 0; i < dp->factors.size(); ++i)
            abelian_coords_of(dp->factors[i], t[i], out);
    } else {
        throw error("element has no abelian coordinates");
    }
}

/// Membership test for the image of an abelian-coordinate homomorphism:
/// u is in im(phi) iff coords(u) lies in the lattice spanned by the image
/// coordinates together with the target's relation rows.
class ImageMembership {
  public:
    explicit ImageMembership(const Homomorphism& h) {
        AbelianCoords shape = abelian_coords_shape(h.target);
        if (!shape.supported) return;
        AbelianCoords src = abelian_coords_shape(h.source);
        if (!src.supported) return;
        int rows = static_cast<int>(h.images.size()) + shape.relations.rows;
        IntegerMatrix gens(rows, shape.dim);
        int r = 0;
        for (const auto& img : h.images) {
            std::vector<Int> co;
            abelian_coords_of(h.target, img, co);
            for (int c = 0; c < shape.dim; ++c) gens.at(r, c) = co[c];
            ++r;
        }
        for (int rr = 0; rr < shape.relations.rows; ++rr, ++r)
            for (int c = 0; c < shape.dim; ++c) gens.at(r, c) = shape.relations.at(rr, c);
        target_ = &h.target;
        lattice_.emplace(std::move(gens));
        supported_ = true;
    }

    bool supported() const { return supported_; }

    bool contains(const GroupElement& u) const {
        std::vector<Int> co;
        abelian_coords_of(*target_, u, co);
        return lattice_->contains(co);
    }

  private:
    const GroupSpec* target_ = nullptr;
    std::optional<RowLattice> lattice_;
    bool supported_ = false;
};

inline bool is_identity_hom(const Homomorphism& h) {
    if (!spec_equal(h.source, h.target)) return false;
    auto gens = canonical_generators(h.source);
    if (gens.size() != h.images.size()) return false;
    for (std::size_t i = 0; i < gens.size(); ++i)
        if (!element_equal(gens[i], h.images[i])) return false;
    return true;
}

}  // namespace detail

/// rho1(t) = min { d'(e, phi z) : z outside the open d-ball of radius t },
/// rho2(t) = max { d'(e, phi z) : z in the closed d-ball of radius t }.
/// rho2 is computed exactly over the searched d-ball; rho1 is sharpened and
/// certified by sweeping the d'-ball of the candidate value, so a certified
/// value is the true global minimum.
inline std::vector<RhoRow> rho_profile_hom(const MetricContext& ctx_d,
                                           const MetricContext& ctx_dprime,
                                           const Homomorphism& phi,
                                           const std::vector<Rat>& t_values,
                                           const Rat& search_radius) {
    if (!spec_equal(phi.source, ctx_d.group()) || !spec_equal(phi.target, ctx_dprime.group()))
        throw error("homomorphism endpoints do not match the metric contexts");
    for (const auto& t : t_values)
        if (t < 0 || t > search_radius)
            throw error("profile points must satisfy 0 <= t <= search_radius");

    const bool same_space = detail::is_identity_hom(phi);
    auto source_ball = ctx_d.ball_with_norms(search_radius);

    // phi(z) -> z over the explored source ball; detects non-injectivity.
    std::map<GroupElement, GroupElement, ElementLess> image_of;
    bool injective_on_ball = true;
    std::vector<std::pair<GroupElement, Rat>> images;  // (phi z, d-norm of z)
    images.reserve(source_ball.size());
    for (const auto& [z, nd] : source_ball) {
        GroupElement u = same_space ? z : apply_hom(phi, z);
        images.emplace_back(u, nd);
        if (!image_of.emplace(u, z).second) injective_on_ball = false;
    }

    std::optional<detail::ImageMembership> membership;
    if (!same_space) membership.emplace(phi);

    std::vector<RhoRow> rows;
    for (const auto& t : t_values) {
        RhoRow row;
        row.t = t;
        // rho2: maximum over the closed ball.
        bool have2 = false;
        for (const auto& [u, nd] : images) {
            if (nd > t) continue;
            Rat dp = ctx_dprime.norm_exact(u);
            if (!have2 || dp > row.rho2) {
                row.rho2 = dp;
                have2 = true;
            }
        }
        if (!have2) row.rho2 = 0;  // the identity is always in the ball

        // rho1 over the searched slice.
        std::optional<Rat> v;
        for (const auto& [u, nd] : images) {
            if (nd < t) continue;
            Rat dp = ctx_dprime.norm_exact(u);
            if (!v || dp < *v) v = dp;
        }
        if (!v) {
            if (ctx_d.exhausted()) {
                row.rho1_infinite = true;
                row.rho1_certified = true;
            }
            rows.push_back(row);
            continue;
        }
        // Certification sweep: every element of d'-norm < v must lie inside
        // the open d-ball of radius t; anything outside sharpens v.
        bool certified = false;
        if (same_space || (injective_on_ball && membership->supported())) {
            try {
                auto target_ball = ctx_dprime.ball_with_norms(*v);
                certified = true;
                for (const auto& [u, dp] : target_ball) {
                    if (dp >= *v) continue;
                    auto known = image_of.find(u);
                    if (known != image_of.end()) {
                        if (t == 0) {
                            v = dp;  // nothing lies inside an empty open ball
                            continue;
                        }
                        auto nd = ctx_d.norm(known->second, t);
                        if (!nd || *nd >= t) v = dp;  // outside the open ball
                    } else if (same_space || membership->contains(u)) {
                        // An unexplored preimage has d-norm > search_radius >= t.
                        v = dp;
                    }
                }
            } catch (const truncation_error&) {
                certified = false;
            }
        }
        row.rho1 = v;
        row.rho1_certified = certified;
        rows.push_back(row);
    }
    return rows;
}

inline std::vector<RhoRow> rho_profile(const MetricContext& ctx_d,
                                       const MetricContext& ctx_dprime,
                                       const std::vector<Rat>& t_values,
                                       const Rat& search_radius) {
    if (!spec_equal(ctx_d.group(), ctx_dprime.group()))
        throw error("rho_profile requires both contexts over the same group");
    return rho_profile_hom(ctx_d, ctx_dprime, identity_homomorphism(ctx_d.group()), t_values,
                           search_radius);
}

// ---------------------------------------------------------------------------
// Sandwich verification (rho1(d(x,y)) <= d'(x,y) <= rho2(d(x,y)))

struct SandwichViolation {
    GroupElement offset;  // z = x^-1 y
    Rat t;                // d(x,y)
    Rat dprime;           // d'(x,y)
    std::optional<Rat> rho1;
    Rat rho2;
};

struct SandwichReport {
    std::vector<SandwichViolation> violations;
    std::size_t pairs_checked = 0;
    std::size_t distinct_offsets = 0;
    bool rho1_all_certified = true;
    std::vector<RhoRow> profile;
};

/// Exhaustively checks the sandwich inequality over all pairs in the
/// radius-verify_radius ball of ctx_d. Left invariance reduces pairs (x,y)
/// to offsets z = x^-1 y, which are checked once each.
inline SandwichReport check_coarse_sandwich(const MetricContext& ctx_d,
                                            const MetricContext& ctx_dprime,
                                            const Rat& verify_radius,
                                            const std::optional<Homomorphism>& hom = {}) {
    Homomorphism phi = hom ? *hom : identity_homomorphism(ctx_d.group());
    if (!hom && !spec_equal(ctx_d.group(), ctx_dprime.group()))
        throw error("same-group sandwich requires equal groups (or pass an embedding)");

    auto b = ctx_d.ball_with_norms(verify_radius);
    SandwichReport report;
    std::map<GroupElement, Rat, ElementLess> offsets;  // z -> d-norm
    const GroupSpec& g = ctx_d.group();
    Rat two_r = verify_radius * 2;
    for (const auto& [x, nx] : b)
        for (const auto& [y, ny] : b) {
            ++report.pairs_checked;
            GroupElement z = multiply(g, invert(g, x), y);
            if (offsets.count(z)) continue;
            auto nd = ctx_d.norm(z, two_r == 0 ? Rat(1) : two_r);
            if (!nd) throw std::logic_error("offset norm exceeded twice the verify radius");
            offsets.emplace(std::move(z), *nd);
        }
    report.distinct_offsets = offsets.size();

    std::vector<Rat> ts;
    {
        std::set<Rat> tset;
        for (const auto& [z, t] : offsets) tset.insert(t);
        ts.assign(tset.begin(), tset.end());
    }
    Rat search = two_r == 0 ? Rat(1) : two_r;
    report.profile = rho_profile_hom(ctx_d, ctx_dprime, phi, ts, search);
    std::map<Rat, const RhoRow*> row_at;
    for (const auto& r : report.profile) row_at[r.t] = &r;

    for (const auto& [z, t] : offsets) {
        const RhoRow* row = row_at.at(t);
        if (!row->rho1_certified) report.rho1_all_certified = false;
        GroupElement u = detail::is_identity_hom(phi) ? z : apply_hom(phi, z);
        Rat dp = ctx_dprime.norm_exact(u);
        bool bad_low = row->rho1 && dp < *row->rho1;
        bool bad_high = dp > row->rho2;
        if (bad_low || bad_high)
            report.violations.push_back(SandwichViolation{z, t, dp, row->rho1, row->rho2});
    }
    return report;
}

// ---------------------------------------------------------------------------
// R-stabilizers

/// W_R(x0) intersected with the search ball of ctx_source: all g with
/// d_H(phi(g) * x0, x0) <= R, where the action is left translation through phi.
inline std::vector<GroupElement> r_stabilizer(const Homomorphism& action,
                                              const MetricContext& ctx_target,
                                              const GroupElement& x0, const Rat& R,
                                              const MetricContext& ctx_source,
                                              const Rat& search_radius) {
    if (!spec_equal(action.source, ctx_source.group()) ||
        !spec_equal(action.target, ctx_target.group()))
        throw error("action endpoints do not match the metric contexts");
    if (R < 0) throw error("R must be nonnegative");
    GroupElement base = canonicalize(ctx_target.group(), x0);
    std::vector<GroupElement> out;
    const GroupSpec& h = ctx_target.group();
    for (const auto& [g, ng] : ctx_source.ball_with_norms(search_radius)) {
        GroupElement moved = multiply(h, apply_hom(action, g), base);
        if (element_equal(moved, base)) {
            out.push_back(g);
            continue;
        }
        auto d = ctx_target.distance(moved, base, R == 0 ? Rat(1) : R);
        if (d && *d <= R) out.push_back(g);
    }
    return out;
}

}  // namespace ccg
