// Rank and torsion of finitely presented abelian groups, and the short-exact-
// sequence additivity self-check. Rank here is dim_Q(A tensor Q), which is
// also the asymptotic dimension of the group.
#pragma once

#include <vector>

#include "ccg/group.hpp"
#include "ccg/linalg.hpp"

namespace ccg {

struct RankTorsion {
    int rank = 0;
    std::vector<Int> torsion;  // invariant factors > 1, in divisibility order
};

/// A presentation (generator count, relation rows) for any abelian kind.
inline std::pair<int, IntegerMatrix> abelian_presentation(const GroupSpec& g) {
    if (auto* fa = std::get_if<FreeAbelian>(&g.v)) return {fa->rank, IntegerMatrix(0, fa->rank)};
    if (auto* pa = std::get_if<PresentedAbelian>(&g.v)) return {pa->generators, pa->relations};
    if (auto* fc = std::get_if<FiniteCyclic>(&g.v)) {
        IntegerMatrix rel(1, 1);
        rel.at(0, 0) = fc->order;
        return {1, rel};
    }
    if (std::get_if<RationalsTruncated>(&g.v)) return {1, IntegerMatrix(0, 1)};
    if (auto* dp = std::get_if<DirectProduct>(&g.v)) {
        int gens = 0, relrows = 0;
        std::vector<std::pair<int, IntegerMatrix>> parts;
        for (const auto& f : dp->factors) {
            parts.push_back(abelian_presentation(f));
            gens += parts.back().first;
            relrows += parts.back().second.rows;
        }
        IntegerMatrix rel(relrows, gens);
        int ro = 0, co = 0;
        for (const auto& [n, m] : parts) {
            for (int r = 0; r < m.rows; ++r)
                for (int c = 0; c < n; ++c) rel.at(ro + r, co + c) = m.at(r, c);
            ro += m.rows;
            co += n;
        }
        return {gens, rel};
    }
    throw error("not an abelian group kind: " + spec_str(g));
}

inline RankTorsion rank_and_torsion(const PresentedAbelian& p) {
    SNFResult s = smith_normal_form(p.relations);
    RankTorsion out;
    out.rank = p.generators - s.rank();
    for (const Int& di : s.diagonal())
        if (di > 1) out.torsion.push_back(di);
    return out;
}

inline RankTorsion rank_and_torsion(const GroupSpec& g) {
    auto [gens, rel] = abelian_presentation(g);
    SNFResult s = smith_normal_form(rel);
    RankTorsion out;
    out.rank = gens - s.rank();
    for (const Int& di : s.diagonal())
        if (di > 1) out.torsion.push_back(di);
    return out;
}

/// asdim of an abelian group equals its rational rank.
inline int asdim_abelian(const PresentedAbelian& p) { return rank_and_torsion(p).rank; }
inline int asdim_abelian(const GroupSpec& g) { return rank_and_torsion(g).rank; }

struct SESAdditivity {
    int rank_a = 0;  // the source group
    int rank_b = 0;  // the kernel
    int rank_c = 0;  // the image quotient
    bool additive = false;
};

/// For 0 -> B -> A -> C -> 0 (C the image quotient of f), rank A must equal
/// rank B + rank C. The kernel rank comes from an integer kernel computation
/// and the image rank from a stacked-matrix rank, so the two sides of the
/// comparison are independent routes; a failed flag indicates a bug.
inline SESAdditivity ses_additivity_check(const Homomorphism& f) {
    auto [na, la] = abelian_presentation(f.source);
    auto [nc, lc] = abelian_presentation(f.target);
    IntegerMatrix m = hom_matrix(f);  // nc x na
    if (m.rows != nc || m.cols != na) throw error("homomorphism matrix has unexpected shape");

    SESAdditivity out;
    out.rank_a = na - rational_rank(la);

    // Kernel: lattice { x : M x in rowlattice(L_C) }, i.e. the x-projection of
    // the integer kernel of [ M | -L_C^T ].
    IntegerMatrix sys(nc, na + lc.rows);
    for (int r = 0; r < nc; ++r) {
        for (int c = 0; c < na; ++c) sys.at(r, c) = m.at(r, c);
        for (int c = 0; c < lc.rows; ++c) sys.at(r, na + c) = -lc.at(c, r);
    }
    IntegerMatrix ker = integer_kernel(sys);  // rows span solutions (x, y)
    IntegerMatrix preimage(ker.rows, na);
    for (int r = 0; r < ker.rows; ++r)
        for (int c = 0; c < na; ++c) preimage.at(r, c) = ker.at(r, c);
    out.rank_b = rational_rank(preimage) - rational_rank(la);

    // Image: dim over Q of (M Q^a + U_C) / U_C.
    IntegerMatrix stacked(na + lc.rows, nc);
    for (int r = 0; r < na; ++r)
        for (int c = 0; c < nc; ++c) stacked.at(r, c) = m.at(c, r);
    for (int r = 0; r < lc.rows; ++r)
        for (int c = 0; c < nc; ++c) stacked.at(na + r, c) = lc.at(r, c);
    out.rank_c = rational_rank(stacked) - rational_rank(lc);

    out.additive = out.rank_a == out.rank_b + out.rank_c;
    return out;
}

}  // namespace ccg
