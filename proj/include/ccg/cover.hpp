// d-disjoint, R-bounded cover families: symbolic interval/product families on
// Z^n, explicit finite families, pointwise verification, and the
// coset-translation construction that extends a cover of the subgroup
// generated by the light generators to a cover of a ball in the whole group.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ccg/metric.hpp"

namespace ccg {

/// The family { [kP+o, kP+o+L) : k in Z } on Z with unit weights.
/// P > L keeps distinct blocks separated by P - L + 1 > 0.
struct IntervalFamily {
    Int block_len;  // L >= 1
    Int period;     // P > L
    Int offset;     // o
};

/// Coordinatewise product of interval families on Z^n (l1 metric). An empty
/// factor list is the rank-zero family whose single set is the one-point group.
struct ProductFamily {
    std::vector<IntervalFamily> factors;
};

/// Finite, pairwise-disjoint point sets of a common group, with the metric
/// context they are measured in.
struct ExplicitFamily {
    std::vector<std::vector<GroupElement>> sets;
    MetricContext ctx;
};

using CoverFamily = std::variant<IntervalFamily, ProductFamily, ExplicitFamily>;

/// Families packaged with the scale d they claim to be d-disjoint at and the
/// bound R they claim on set diameters.
struct CoverCertificate {
    Rat d;
    Rat R;
    std::vector<CoverFamily> families;
};

inline IntervalFamily make_interval_family(Int block_len, Int period, Int offset) {
    if (block_len < 1) throw error("interval block length must be positive");
    if (period <= block_len) throw error("interval period must exceed the block length");
    return IntervalFamily{std::move(block_len), std::move(period), std::move(offset)};
}

inline ExplicitFamily make_explicit_family(std::vector<std::vector<GroupElement>> sets,
                                           MetricContext ctx) {
    std::map<GroupElement, int, ElementLess> seen;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        if (sets[i].empty()) throw error("explicit family sets must be nonempty");
        for (auto& e : sets[i]) {
            e = canonicalize(ctx.group(), e);
            if (!seen.emplace(e, static_cast<int>(i)).second)
                throw error("explicit family sets must be pairwise disjoint");
        }
    }
    return ExplicitFamily{std::move(sets), std::move(ctx)};
}

// ---------------------------------------------------------------------------
// Closed forms for symbolic families

inline bool interval_member(const IntervalFamily& f, const Int& x) {
    return mod_floor(x - f.offset, f.period) < f.block_len;
}
inline Int interval_set_index(const IntervalFamily& f, const Int& x) {
    return div_floor(x - f.offset, f.period);
}
/// Minimal distance between points of distinct blocks, in the unit metric.
inline Int interval_separation(const IntervalFamily& f) { return f.period - f.block_len + 1; }
inline Int interval_diameter(const IntervalFamily& f) { return f.block_len - 1; }

inline Int product_separation(const ProductFamily& f) {
    std::optional<Int> sep;  // min over coordinates
    for (const auto& g : f.factors) {
        Int s = interval_separation(g);
        if (!sep || s < *sep) sep = s;
    }
    if (!sep) throw error("rank-zero product family has no distinct sets");
    return *sep;
}
inline Int product_diameter(const ProductFamily& f) {
    Int d = 0;
    for (const auto& g : f.factors) d += interval_diameter(g);
    return d;
}

// ---------------------------------------------------------------------------
// Constructions

/// Two interval families with L = d+1 and P = 2(d+1) partition Z; same-family
/// blocks are d+2 apart, so both families are d-disjoint with R = d.
inline CoverCertificate make_interval_cover(const Int& d) {
    if (d < 1) throw error("cover scale d must be a positive integer");
    CoverCertificate cert;
    cert.d = Rat(d);
    cert.R = Rat(d);
    cert.families.push_back(make_interval_family(d + 1, 2 * (d + 1), 0));
    cert.families.push_back(make_interval_family(d + 1, 2 * (d + 1), d + 1));
    return cert;
}

namespace detail {
inline ProductFamily as_product(const CoverFamily& f) {
    if (auto* i = std::get_if<IntervalFamily>(&f)) return ProductFamily{{*i}};
    if (auto* p = std::get_if<ProductFamily>(&f)) return *p;
    throw error("product construction requires symbolic families");
}
}  // namespace detail

/// Product certificate on Z^(p+q): one family per pair (i, j), sets U x V.
/// d = min(d_a, d_b); R = R_a + R_b.
inline CoverCertificate product_cover(const CoverCertificate& a, const CoverCertificate& b) {
    CoverCertificate out;
    out.d = a.d < b.d ? a.d : b.d;
    out.R = a.R + b.R;
    for (const auto& fa : a.families) {
        ProductFamily pa = detail::as_product(fa);
        for (const auto& fb : b.families) {
            ProductFamily pb = detail::as_product(fb);
            ProductFamily joined = pa;
            joined.factors.insert(joined.factors.end(), pb.factors.begin(), pb.factors.end());
            out.families.push_back(std::move(joined));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Verification

struct DisjointnessViolation {
    int family;
    GroupElement a;
    GroupElement b;
    Rat dist;  // <= d under the strict convention
};

struct BoundViolation {
    int family;
    Rat diameter;  // > R
};

/// Per-family comparison of symbolic closed forms against pointwise values.
struct SymbolicCheck {
    int family;
    Rat expected_separation;
    std::optional<Rat> observed_separation;  // absent when < 2 sets meet the region
    Rat expected_diameter;
    std::optional<Rat> observed_max_diameter;
    bool consistent = true;  // observed separation >= expected, diameter <= expected
};

struct VerifyReport {
    Rat d;
    Rat R;
    std::size_t region_size = 0;
    std::vector<DisjointnessViolation> disjointness_violations;  // dist <= d (strict convention)
    std::size_t nonstrict_violation_count = 0;                   // dist <  d
    Rat max_diameter = Rat(0);
    std::vector<BoundViolation> bound_violations;
    std::vector<GroupElement> coverage_gaps;
    std::vector<SymbolicCheck> symbolic_checks;

    bool clean() const {
        if (!disjointness_violations.empty() || !bound_violations.empty() ||
            !coverage_gaps.empty())
            return false;
        for (const auto& s : symbolic_checks)
            if (!s.consistent) return false;
        return true;
    }
};

namespace detail {

/// Unit-weight coordinates of a point of Z^n.
inline std::vector<Int> zn_coords(const GroupSpec& g, const GroupElement& x, int expect_dim) {
    if (auto* fa = std::get_if<FreeAbelian>(&g.v)) {
        if (fa->rank != expect_dim)
            throw error("symbolic family dimension does not match the group rank");
        return std::get<std::vector<Int>>(x.v);
    }
    throw error("symbolic families require a free_abelian group");
}

inline void require_unit_weights(const MetricContext& ctx) {
    for (const auto& e : ctx.weights().entries)
        if (e.weight != 1) throw error("symbolic families require unit weights");
}

/// Uniform point classifier: set id of a point, or nullopt when uncovered.
struct FamilyView {
    std::function<std::optional<std::vector<Int>>(const GroupElement&)> set_of;
    bool symbolic = false;
    Rat expected_separation;
    Rat expected_diameter;
};

inline FamilyView family_view(const CoverFamily& f, const MetricContext& ctx) {
    FamilyView view;
    if (auto* iv = std::get_if<IntervalFamily>(&f)) {
        require_unit_weights(ctx);
        IntervalFamily fam = *iv;
        GroupSpec g = ctx.group();
        view.set_of = [fam, g](const GroupElement& x) -> std::optional<std::vector<Int>> {
            std::vector<Int> c = zn_coords(g, x, 1);
            if (!interval_member(fam, c[0])) return std::nullopt;
            return std::vector<Int>{interval_set_index(fam, c[0])};
        };
        view.symbolic = true;
        view.expected_separation = Rat(interval_separation(fam));
        view.expected_diameter = Rat(interval_diameter(fam));
        return view;
    }
    if (auto* pf = std::get_if<ProductFamily>(&f)) {
        require_unit_weights(ctx);
        ProductFamily fam = *pf;
        GroupSpec g = ctx.group();
        int dim = static_cast<int>(fam.factors.size());
        view.set_of = [fam, g, dim](const GroupElement& x) -> std::optional<std::vector<Int>> {
            std::vector<Int> c = zn_coords(g, x, dim);
            std::vector<Int> id;
            id.reserve(fam.factors.size());
            for (std::size_t i = 0; i < fam.factors.size(); ++i) {
                if (!interval_member(fam.factors[i], c[i])) return std::nullopt;
                id.push_back(interval_set_index(fam.factors[i], c[i]));
            }
            return id;
        };
        view.symbolic = true;
        view.expected_separation = fam.factors.empty() ? Rat(0) : Rat(product_separation(fam));
        view.expected_diameter = Rat(product_diameter(fam));
        return view;
    }
    const auto& ef = std::get<ExplicitFamily>(f);
    if (!spec_equal(ef.ctx.group(), ctx.group()))
        throw error("explicit family context group differs from the verification group");
    auto index = std::make_shared<std::map<GroupElement, Int, ElementLess>>();
    for (std::size_t i = 0; i < ef.sets.size(); ++i)
        for (const auto& e : ef.sets[i]) index->emplace(e, Int(i));
    view.set_of = [index](const GroupElement& x) -> std::optional<std::vector<Int>> {
        auto it = index->find(x);
        if (it == index->end()) return std::nullopt;
        return std::vector<Int>{it->second};
    };
    return view;
}

/// Pointwise verification over an explicit region. `classify` maps a region
/// point to the element the family views classify (identity for plain
/// verification; the subgroup coordinate for coset-extension inputs).
inline VerifyReport verify_on_points(
    const CoverCertificate& cert, const MetricContext& ctx,
    const std::vector<GroupElement>& region, const Rat& pair_cap,
    const std::vector<FamilyView>& views,
    const std::function<const GroupElement&(const GroupElement&)>& classify) {
    VerifyReport report;
    report.d = cert.d;
    report.R = cert.R;
    report.region_size = region.size();

    auto dist = [&](const GroupElement& a, const GroupElement& b) -> Rat {
        auto v = ctx.distance(a, b, pair_cap);
        if (!v) throw std::logic_error("verification pair distance exceeded its cap");
        return *v;
    };

    std::vector<char> covered(region.size(), 0);
    for (std::size_t fi = 0; fi < views.size(); ++fi) {
        const FamilyView& view = views[fi];
        std::map<std::vector<Int>, std::vector<std::size_t>> buckets;
        for (std::size_t p = 0; p < region.size(); ++p) {
            auto id = view.set_of(classify(region[p]));
            if (!id) continue;
            covered[p] = 1;
            buckets[*id].push_back(p);
        }
        std::optional<Rat> fam_max_diam;
        for (const auto& [id, pts] : buckets) {
            Rat diam(0);
            for (std::size_t i = 0; i < pts.size(); ++i)
                for (std::size_t j = i + 1; j < pts.size(); ++j) {
                    Rat dij = dist(region[pts[i]], region[pts[j]]);
                    if (dij > diam) diam = dij;
                }
            if (diam > report.max_diameter) report.max_diameter = diam;
            if (!fam_max_diam || diam > *fam_max_diam) fam_max_diam = diam;
            if (diam > cert.R)
                report.bound_violations.push_back(BoundViolation{static_cast<int>(fi), diam});
        }
        std::optional<Rat> observed_sep;
        for (auto it = buckets.begin(); it != buckets.end(); ++it) {
            auto jt = it;
            for (++jt; jt != buckets.end(); ++jt)
                for (std::size_t a : it->second)
                    for (std::size_t b : jt->second) {
                        Rat dab = dist(region[a], region[b]);
                        if (!observed_sep || dab < *observed_sep) observed_sep = dab;
                        if (dab <= cert.d) {
                            report.disjointness_violations.push_back(DisjointnessViolation{
                                static_cast<int>(fi), region[a], region[b], dab});
                            if (dab < cert.d) ++report.nonstrict_violation_count;
                        }
                    }
        }
        if (view.symbolic) {
            SymbolicCheck sc;
            sc.family = static_cast<int>(fi);
            sc.expected_separation = view.expected_separation;
            sc.observed_separation = observed_sep;
            sc.expected_diameter = view.expected_diameter;
            sc.observed_max_diameter = fam_max_diam;
            if (observed_sep && *observed_sep < view.expected_separation) sc.consistent = false;
            if (fam_max_diam && *fam_max_diam > view.expected_diameter) sc.consistent = false;
            report.symbolic_checks.push_back(std::move(sc));
        }
    }
    for (std::size_t p = 0; p < region.size(); ++p)
        if (!covered[p]) report.coverage_gaps.push_back(region[p]);
    return report;
}

inline VerifyReport verify_on_points(const CoverCertificate& cert, const MetricContext& ctx,
                                     const std::vector<GroupElement>& region,
                                     const Rat& pair_cap) {
    std::vector<FamilyView> views;
    for (const auto& f : cert.families) views.push_back(family_view(f, ctx));
    static const std::function<const GroupElement&(const GroupElement&)> ident =
        [](const GroupElement& x) -> const GroupElement& { return x; };
    return verify_on_points(cert, ctx, region, pair_cap, views, ident);
}

/// The verification context: from the first explicit family, or a unit-weight
/// Z^n context inferred from symbolic factor counts.
inline MetricContext resolve_context(const CoverCertificate& cert) {
    for (const auto& f : cert.families)
        if (auto* ef = std::get_if<ExplicitFamily>(&f)) return ef->ctx;
    int dim = -1;
    for (const auto& f : cert.families) {
        int fd = std::holds_alternative<IntervalFamily>(f)
                     ? 1
                     : static_cast<int>(std::get<ProductFamily>(f).factors.size());
        if (dim < 0) dim = fd;
        if (dim != fd) throw error("symbolic families have inconsistent dimensions");
    }
    if (dim < 0) throw error("certificate has no families");
    return MetricContext(make_free_abelian(dim));
}

inline Rat verify_cap(const Rat& region_radius, const Rat& d) {
    Rat cap = region_radius * 2;
    if (cap < 1) cap = 1;
    if (d > cap) cap = d;
    return cap;
}

}  // namespace detail

/// Exhaustive check of the certificate over the ball of the given radius:
/// strict d-disjointness (distance exactly d counts as a violation; the count
/// under the non-strict reading is reported alongside), R-boundedness of the
/// clipped sets, coverage, and symbolic/pointwise agreement.
inline VerifyReport verify_families(const CoverCertificate& cert, const MetricContext& ctx,
                                    const Rat& region_radius) {
    auto region = ctx.ball(region_radius);
    return detail::verify_on_points(cert, ctx, region, detail::verify_cap(region_radius, cert.d));
}

inline VerifyReport verify_families(const CoverCertificate& cert, const Rat& region_radius) {
    return verify_families(cert, detail::resolve_context(cert), region_radius);
}

// ---------------------------------------------------------------------------
// Coset extension (cover of F = <light generators> -> cover of a ball)

struct CosetExtension {
    CoverCertificate output;
    VerifyReport input_report;   // the subgroup cover over F intersected with the ball
    VerifyReport output_report;  // the translated cover over the whole ball
    std::vector<GroupElement> light_generators;  // T = { s : w(s) < d }
    std::vector<GroupElement> representatives;   // minimal-norm coset representatives
    bool degenerate_trivial_subgroup = false;    // T empty, F = {e}
    bool degenerate_whole_group = false;         // a single coset meets the ball
};

namespace detail {

inline std::vector<Int> ambient_coords(const GroupSpec& g, const GroupElement& x) {
    std::vector<Int> out;
    abelian_coords_of(g, x, out);
    return out;
}

inline int ambient_dim_for_cosets(const GroupSpec& g) {
    AbelianCoords shape = abelian_coords_shape(g);
    if (!shape.supported || shape.relations.rows != 0)
        throw error(
            "coset extension supports free_abelian, rationals_truncated and their products only");
    return shape.dim;
}

}  // namespace detail

/// Realizes the coset-translation construction: T is the set of generators of
/// weight < d, F = <T>, and the output families are { z U : z representative,
/// U in the input family }, clipped to the ball of the given radius. Distinct
/// cosets stay > d apart because any offset leaving F needs a generator of
/// weight >= d; within a coset, translation preserves the input separations.
/// The input cover is given over its own copy of F (source of `f_embed`);
/// its families may be symbolic (measured in source coordinates) or explicit.
inline CosetExtension extend_cover_by_cosets(const MetricContext& ctx, const Rat& d,
                                             const CoverCertificate& f_cover,
                                             const Homomorphism& f_embed,
                                             const Rat& region_radius) {
    if (d <= 0) throw error("scale d must be positive");
    if (!spec_equal(f_embed.target, ctx.group()))
        throw error("embedding target must be the ambient group");
    if (f_cover.d != d) throw error("subgroup cover scale must equal the extension scale d");

    CosetExtension result;
    const GroupSpec& g = ctx.group();
    const int dim = detail::ambient_dim_for_cosets(g);
    detail::ambient_dim_for_cosets(f_embed.source);  // source must be coordinatizable too

    // T = light generators; F = row lattice of their coordinates.
    std::vector<std::vector<Int>> t_coord_rows;
    for (const auto& e : ctx.weights().entries)
        if (e.weight < d) {
            result.light_generators.push_back(e.generator);
            t_coord_rows.push_back(detail::ambient_coords(g, e.generator));
        }
    IntegerMatrix t_rows(static_cast<int>(t_coord_rows.size()), dim);
    for (std::size_t r = 0; r < t_coord_rows.size(); ++r)
        for (int c = 0; c < dim; ++c) t_rows.at(static_cast<int>(r), c) = t_coord_rows[r][c];
    RowLattice subgroup(t_rows);
    result.degenerate_trivial_subgroup = result.light_generators.empty();

    // The embedding must hit exactly F, injectively.
    IntegerMatrix image_rows(static_cast<int>(f_embed.images.size()), dim);
    for (std::size_t r = 0; r < f_embed.images.size(); ++r) {
        auto co = detail::ambient_coords(g, f_embed.images[r]);
        for (int c = 0; c < dim; ++c) image_rows.at(static_cast<int>(r), c) = co[c];
    }
    RowLattice image(image_rows);
    if (!lattice_equal(subgroup, image))
        throw error("embedding image is not the subgroup generated by the light generators");
    if (image.rank() != image_rows.rows) throw error("embedding must be injective");

    // Enumerate the ball, identify cosets, pick minimal-norm representatives.
    auto ball = ctx.ball_with_norms(region_radius);
    std::map<std::vector<Int>, std::size_t> coset_index;  // canonical residue -> coset id
    std::vector<std::size_t> coset_of(ball.size());
    std::vector<std::size_t> rep_index;
    for (std::size_t i = 0; i < ball.size(); ++i) {
        std::vector<Int> key = subgroup.reduce(detail::ambient_coords(g, ball[i].first));
        auto [it, inserted] = coset_index.try_emplace(std::move(key), rep_index.size());
        if (inserted) rep_index.push_back(i);  // ball sorted by (norm, key): first hit is minimal
        coset_of[i] = it->second;
    }
    result.degenerate_whole_group = rep_index.size() == 1 && !result.light_generators.empty();
    Rat max_rep_norm(0);
    for (std::size_t r : rep_index) {
        result.representatives.push_back(ball[r].first);
        if (ball[r].second > max_rep_norm) max_rep_norm = ball[r].second;
    }

    // Materialize F out to region + max representative norm, so every z^-1 x
    // stays inside the materialized part.
    Rat margin = region_radius + max_rep_norm;
    auto margin_ball = ctx.ball_with_norms(margin);
    std::vector<GroupElement> f_points_region;  // F inside the verification ball
    std::map<GroupElement, GroupElement, ElementLess> source_point;  // ambient u -> source elem
    for (const auto& [u, nu] : margin_ball) {
        std::vector<Int> co = detail::ambient_coords(g, u);
        if (!subgroup.contains(co)) continue;
        auto y = image.solve(co);
        if (!y) throw std::logic_error("subgroup member has no embedding preimage");
        source_point.emplace(u, canonicalize(f_embed.source, GroupElement{std::move(*y)}));
        if (nu <= region_radius) f_points_region.push_back(u);
    }

    MetricContext source_ctx(f_embed.source);
    std::vector<detail::FamilyView> views;
    for (const auto& f : f_cover.families)
        views.push_back(std::holds_alternative<ExplicitFamily>(f)
                            ? detail::family_view(f, std::get<ExplicitFamily>(f).ctx)
                            : detail::family_view(f, source_ctx));

    // Input verification: the subgroup cover must cover F within the ball at
    // scale d, measured in the ambient metric.
    {
        std::function<const GroupElement&(const GroupElement&)> classify =
            [&source_point](const GroupElement& u) -> const GroupElement& {
            return source_point.at(u);
        };
        result.input_report =
            detail::verify_on_points(f_cover, ctx, f_points_region,
                                     detail::verify_cap(margin, f_cover.d), views, classify);
    }

    // Output families: V_i = { z U } clipped to the ball.
    std::vector<std::map<std::vector<Int>, std::vector<GroupElement>>> out_sets(
        f_cover.families.size());
    for (std::size_t i = 0; i < ball.size(); ++i) {
        const GroupElement& x = ball[i].first;
        const GroupElement& z = ball[rep_index[coset_of[i]]].first;
        GroupElement u = multiply(g, invert(g, z), x);
        auto jt = source_point.find(u);
        if (jt == source_point.end())
            throw std::logic_error("coset offset left the materialized margin");
        for (std::size_t fi = 0; fi < views.size(); ++fi) {
            auto id = views[fi].set_of(jt->second);
            if (!id) continue;
            std::vector<Int> key = *id;
            key.push_back(Int(static_cast<long>(coset_of[i])));  // (set id, coset)
            out_sets[fi][key].push_back(x);
        }
    }
    CoverCertificate out;
    out.d = d;
    out.R = f_cover.R;
    for (auto& per_family : out_sets) {
        std::vector<std::vector<GroupElement>> sets;
        for (auto& [key, pts] : per_family) sets.push_back(std::move(pts));
        out.families.push_back(make_explicit_family(std::move(sets), ctx));
    }
    result.output = std::move(out);

    std::vector<GroupElement> region;
    region.reserve(ball.size());
    for (const auto& [x, nx] : ball) region.push_back(x);
    result.output_report = detail::verify_on_points(result.output, ctx, region,
                                                    detail::verify_cap(region_radius, d));
    return result;
}

}  // namespace ccg
