// Group kinds, canonical element forms, group operations and homomorphisms.
//
// Every element is stored in a canonical form, so equality of elements is
// structural equality; all operations are pure and return canonical values.
#pragma once

#include <array>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "ccg/linalg.hpp"
#include "ccg/rational.hpp"

namespace ccg {

struct GroupSpec;

/// Z^rank with componentwise addition.
struct FreeAbelian {
    int rank = 0;
};

/// Free group on `rank` letters; elements are reduced words.
struct Free {
    int rank = 0;
};

/// Z/order, residues in [0, order).
struct FiniteCyclic {
    Int order = 1;
};

/// Z^generators modulo the row lattice of `relations`. The Smith decomposition
/// of the relation matrix is computed once and cached with the spec; canonical
/// element forms are coset representatives in generator coordinates.
struct PresentedAbelian {
    int generators = 0;
    IntegerMatrix relations;                   // one column per generator
    std::shared_ptr<const RowLattice> lattice; // cache, ignored by equality
};

/// Integer triples with (a,b,c)*(a',b',c') = (a+a', b+b', c+c'+a*b').
struct Heisenberg {};

/// Subgroup of Q generated by 1/1!, ..., 1/K!; equals (1/K!)Z.
struct RationalsTruncated {
    int depth = 1;  // K
};

struct DirectProduct {
    std::vector<GroupSpec> factors;
};

struct GroupSpec {
    std::variant<FreeAbelian, Free, FiniteCyclic, PresentedAbelian, Heisenberg, DirectProduct,
                 RationalsTruncated>
        v;
};

struct GroupElement {
    using Tuple = std::vector<GroupElement>;
    std::variant<std::vector<Int>,   // FreeAbelian / PresentedAbelian coordinates
                 std::vector<int>,   // Free: reduced word of signed 1-based letters
                 Int,                // FiniteCyclic residue
                 std::array<Int, 3>, // Heisenberg triple
                 Tuple,              // DirectProduct components
                 Rat>                // RationalsTruncated value
        v;
};

// ---------------------------------------------------------------------------
// Spec construction and comparison

inline GroupSpec make_free_abelian(int rank) {
    if (rank < 0) throw error("free_abelian rank must be nonnegative");
    return GroupSpec{FreeAbelian{rank}};
}

inline GroupSpec make_free(int rank) {
    if (rank < 0) throw error("free rank must be nonnegative");
    return GroupSpec{Free{rank}};
}

inline GroupSpec make_finite_cyclic(const Int& order) {
    if (order <= 0) throw error("finite_cyclic order must be positive");
    return GroupSpec{FiniteCyclic{order}};
}

inline GroupSpec make_presented_abelian(int generators, IntegerMatrix relations) {
    if (generators <= 0) throw error("presented_abelian needs a positive generator count");
    if (relations.cols != generators)
        throw error("relation matrix must have one column per generator");
    auto lattice = std::make_shared<const RowLattice>(relations);
    return GroupSpec{PresentedAbelian{generators, std::move(relations), std::move(lattice)}};
}

inline GroupSpec make_heisenberg() { return GroupSpec{Heisenberg{}}; }

inline GroupSpec make_rationals_truncated(int depth) {
    if (depth <= 0) throw error("rationals_truncated depth must be positive");
    return GroupSpec{RationalsTruncated{depth}};
}

inline GroupSpec make_direct_product(std::vector<GroupSpec> factors) {
    if (factors.empty()) throw error("direct_product needs at least one factor");
    return GroupSpec{DirectProduct{std::move(factors)}};
}

inline bool spec_equal(const GroupSpec& a, const GroupSpec& b);

namespace detail {
struct SpecEq {
    const GroupSpec& other;
    bool operator()(const FreeAbelian& x) const {
        auto* y = std::get_if<FreeAbelian>(&other.v);
        return y && y->rank == x.rank;
    }
    bool operator()(const Free& x) const {
        auto* y = std::get_if<Free>(&other.v);
        return y && y->rank == x.rank;
    }
    bool operator()(const FiniteCyclic& x) const {
        auto* y = std::get_if<FiniteCyclic>(&other.v);
        return y && y->order == x.order;
    }
    bool operator()(const PresentedAbelian& x) const {
        auto* y = std::get_if<PresentedAbelian>(&other.v);
        return y && y->generators == x.generators && y->relations == x.relations;
    }
    bool operator()(const Heisenberg&) const { return std::holds_alternative<Heisenberg>(other.v); }
    bool operator()(const DirectProduct& x) const {
        auto* y = std::get_if<DirectProduct>(&other.v);
        if (!y || y->factors.size() != x.factors.size()) return false;
        for (std::size_t i = 0; i < x.factors.size(); ++i)
            if (!spec_equal(x.factors[i], y->factors[i])) return false;
        return true;
    }
    bool operator()(const RationalsTruncated& x) const {
        auto* y = std::get_if<RationalsTruncated>(&other.v);
        return y && y->depth == x.depth;
    }
};
}  // namespace detail

inline bool spec_equal(const GroupSpec& a, const GroupSpec& b) {
    return std::visit(detail::SpecEq{b}, a.v);
}

inline std::string spec_str(const GroupSpec& g) {
    struct V {
        std::string operator()(const FreeAbelian& x) const {
            return "free_abelian(" + std::to_string(x.rank) + ")";
        }
        std::string operator()(const Free& x) const { return "free(" + std::to_string(x.rank) + ")"; }
        std::string operator()(const FiniteCyclic& x) const {
            return "finite_cyclic(" + x.order.str() + ")";
        }
        std::string operator()(const PresentedAbelian& x) const {
            return "presented_abelian(" + std::to_string(x.generators) + ")";
        }
        std::string operator()(const Heisenberg&) const { return "heisenberg"; }
        std::string operator()(const DirectProduct& x) const {
            std::string s = "product(";
            for (std::size_t i = 0; i < x.factors.size(); ++i) {
                if (i) s += ", ";
                s += spec_str(x.factors[i]);
            }
            return s + ")";
        }
        std::string operator()(const RationalsTruncated& x) const {
            return "rationals_truncated(" + std::to_string(x.depth) + ")";
        }
    };
    return std::visit(V{}, g.v);
}

// ---------------------------------------------------------------------------
// Element ordering (total, structural; the "canonical key")

inline int compare(const GroupElement& a, const GroupElement& b) {
    if (a.v.index() != b.v.index())
        return a.v.index() < b.v.index() ? -1 : 1;
    struct V {
        const GroupElement& rhs;
        int operator()(const std::vector<Int>& x) const {
            const auto& y = std::get<std::vector<Int>>(rhs.v);
            if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
            for (std::size_t i = 0; i < x.size(); ++i)
                if (x[i] != y[i]) return x[i] < y[i] ? -1 : 1;
            return 0;
        }
        int operator()(const std::vector<int>& x) const {
            const auto& y = std::get<std::vector<int>>(rhs.v);
            if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
            for (std::size_t i = 0; i < x.size(); ++i)
                if (x[i] != y[i]) return x[i] < y[i] ? -1 : 1;
            return 0;
        }
        int operator()(const Int& x) const {
            const auto& y = std::get<Int>(rhs.v);
            return x == y ? 0 : (x < y ? -1 : 1);
        }
        int operator()(const std::array<Int, 3>& x) const {
            const auto& y = std::get<std::array<Int, 3>>(rhs.v);
            for (int i = 0; i < 3; ++i)
                if (x[i] != y[i]) return x[i] < y[i] ? -1 : 1;
            return 0;
        }
        int operator()(const GroupElement::Tuple& x) const {
            const auto& y = std::get<GroupElement::Tuple>(rhs.v);
            if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
            for (std::size_t i = 0; i < x.size(); ++i)
                if (int c = compare(x[i], y[i]); c != 0) return c;
            return 0;
        }
        int operator()(const Rat& x) const {
            const auto& y = std::get<Rat>(rhs.v);
            return x == y ? 0 : (x < y ? -1 : 1);
        }
    };
    return std::visit(V{b}, a.v);
}

inline bool element_equal(const GroupElement& a, const GroupElement& b) { return compare(a, b) == 0; }

struct ElementLess {
    bool operator()(const GroupElement& a, const GroupElement& b) const { return compare(a, b) < 0; }
};

// ---------------------------------------------------------------------------
// Element construction, validation, canonical forms

inline GroupElement identity(const GroupSpec& g) {
    struct V {
        GroupElement operator()(const FreeAbelian& x) const {
            return GroupElement{std::vector<Int>(x.rank, Int(0))};
        }
        GroupElement operator()(const Free&) const { return GroupElement{std::vector<int>{}}; }
        GroupElement operator()(const FiniteCyclic&) const { return GroupElement{Int(0)}; }
        GroupElement operator()(const PresentedAbelian& x) const {
            return GroupElement{std::vector<Int>(x.generators, Int(0))};
        }
        GroupElement operator()(const Heisenberg&) const {
            return GroupElement{std::array<Int, 3>{Int(0), Int(0), Int(0)}};
        }
        GroupElement operator()(const DirectProduct& x) const {
            GroupElement::Tuple t;
            t.reserve(x.factors.size());
            for (const auto& f : x.factors) t.push_back(identity(f));
            return GroupElement{std::move(t)};
        }
        GroupElement operator()(const RationalsTruncated&) const { return GroupElement{Rat(0)}; }
    };
    return std::visit(V{}, g.v);
}

namespace detail {
inline std::vector<int> reduce_word(const std::vector<int>& w) {
    std::vector<int> out;
    out.reserve(w.size());
    for (int letter : w) {
        if (!out.empty() && out.back() == -letter)
            out.pop_back();
        else
            out.push_back(letter);
    }
    return out;
}
}  // namespace detail

/// Canonical form of a structurally well-shaped element. Throws on kind mismatch.
inline GroupElement canonicalize(const GroupSpec& g, const GroupElement& x) {
    struct V {
        const GroupElement& e;
        GroupElement operator()(const FreeAbelian& s) const {
            auto* p = std::get_if<std::vector<Int>>(&e.v);
            if (!p || static_cast<int>(p->size()) != s.rank)
                throw error("element does not match free_abelian(" + std::to_string(s.rank) + ")");
            return e;
        }
        GroupElement operator()(const Free& s) const {
            auto* p = std::get_if<std::vector<int>>(&e.v);
            if (!p) throw error("element does not match free group");
            for (int letter : *p)
                if (letter == 0 || letter > s.rank || letter < -s.rank)
                    throw error("word letter out of range for free(" + std::to_string(s.rank) + ")");
            return GroupElement{detail::reduce_word(*p)};
        }
        GroupElement operator()(const FiniteCyclic& s) const {
            auto* p = std::get_if<Int>(&e.v);
            if (!p) throw error("element does not match finite_cyclic");
            return GroupElement{mod_floor(*p, s.order)};
        }
        GroupElement operator()(const PresentedAbelian& s) const {
            auto* p = std::get_if<std::vector<Int>>(&e.v);
            if (!p || static_cast<int>(p->size()) != s.generators)
                throw error("element does not match presented_abelian");
            return GroupElement{s.lattice->reduce(*p)};
        }
        GroupElement operator()(const Heisenberg&) const {
            if (!std::holds_alternative<std::array<Int, 3>>(e.v))
                throw error("element does not match heisenberg");
            return e;
        }
        GroupElement operator()(const DirectProduct& s) const {
            auto* p = std::get_if<GroupElement::Tuple>(&e.v);
            if (!p || p->size() != s.factors.size())
                throw error("element does not match direct product arity");
            GroupElement::Tuple t;
            t.reserve(p->size());
            for (std::size_t i = 0; i < p->size(); ++i)
                t.push_back(canonicalize(s.factors[i], (*p)[i]));
            return GroupElement{std::move(t)};
        }
        GroupElement operator()(const RationalsTruncated& s) const {
            auto* p = std::get_if<Rat>(&e.v);
            if (!p) throw error("element does not match rationals_truncated");
            if (factorial(s.depth) % denominator(*p) != 0)
                throw error("denominator of " + rat_str(*p) + " does not divide " +
                            std::to_string(s.depth) + "!");
            return e;  // cpp_rational is already normalized
        }
    };
    return std::visit(V{x}, g.v);
}

inline bool belongs(const GroupSpec& g, const GroupElement& x) {
    try {
        return element_equal(canonicalize(g, x), x);
    } catch (const error&) {
        return false;
    }
}

inline GroupElement multiply(const GroupSpec& g, const GroupElement& xe, const GroupElement& ye) {
    struct V {
        const GroupSpec& g;
        const GroupElement& xe;
        const GroupElement& ye;
        GroupElement operator()(const FreeAbelian&) const {
            const auto& x = std::get<std::vector<Int>>(xe.v);
            const auto& y = std::get<std::vector<Int>>(ye.v);
            std::vector<Int> z(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] + y[i];
            return GroupElement{std::move(z)};
        }
        GroupElement operator()(const Free&) const {
            const auto& x = std::get<std::vector<int>>(xe.v);
            const auto& y = std::get<std::vector<int>>(ye.v);
            std::vector<int> z = x;
            for (int letter : y) {
                if (!z.empty() && z.back() == -letter)
                    z.pop_back();
                else
                    z.push_back(letter);
            }
            return GroupElement{std::move(z)};
        }
        GroupElement operator()(const FiniteCyclic& s) const {
            return GroupElement{mod_floor(std::get<Int>(xe.v) + std::get<Int>(ye.v), s.order)};
        }
        GroupElement operator()(const PresentedAbelian& s) const {
            const auto& x = std::get<std::vector<Int>>(xe.v);
            const auto& y = std::get<std::vector<Int>>(ye.v);
            std::vector<Int> z(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] + y[i];
            return GroupElement{s.lattice->reduce(z)};
        }
        GroupElement operator()(const Heisenberg&) const {
            const auto& x = std::get<std::array<Int, 3>>(xe.v);
            const auto& y = std::get<std::array<Int, 3>>(ye.v);
            return GroupElement{
                std::array<Int, 3>{x[0] + y[0], x[1] + y[1], x[2] + y[2] + x[0] * y[1]}};
        }
        GroupElement operator()(const DirectProduct& s) const {
            const auto& x = std::get<GroupElement::Tuple>(xe.v);
            const auto& y = std::get<GroupElement::Tuple>(ye.v);
            GroupElement::Tuple t;
            t.reserve(x.size());
            for (std::size_t i = 0; i < x.size(); ++i)
                t.push_back(multiply(s.factors[i], x[i], y[i]));
            return GroupElement{std::move(t)};
        }
        GroupElement operator()(const RationalsTruncated&) const {
            return GroupElement{Rat(std::get<Rat>(xe.v) + std::get<Rat>(ye.v))};
        }
    };
    GroupElement x = canonicalize(g, xe);
    GroupElement y = canonicalize(g, ye);
    return std::visit(V{g, x, y}, g.v);
}

inline GroupElement invert(const GroupSpec& g, const GroupElement& xe) {
    struct V {
        const GroupSpec& g;
        const GroupElement& xe;
        GroupElement operator()(const FreeAbelian&) const {
            auto x = std::get<std::vector<Int>>(xe.v);
            for (auto& c : x) c = -c;
            return GroupElement{std::move(x)};
        }
        GroupElement operator()(const Free&) const {
            const auto& x = std::get<std::vector<int>>(xe.v);
            std::vector<int> z(x.rbegin(), x.rend());
            for (auto& letter : z) letter = -letter;
            return GroupElement{std::move(z)};
        }
        GroupElement operator()(const FiniteCyclic& s) const {
            return GroupElement{mod_floor(-std::get<Int>(xe.v), s.order)};
        }
        GroupElement operator()(const PresentedAbelian& s) const {
            auto x = std::get<std::vector<Int>>(xe.v);
            for (auto& c : x) c = -c;
            return GroupElement{s.lattice->reduce(x)};
        }
        GroupElement operator()(const Heisenberg&) const {
            // (a,b,c)^-1 = (-a,-b,-c+ab)
            const auto& x = std::get<std::array<Int, 3>>(xe.v);
            return GroupElement{std::array<Int, 3>{-x[0], -x[1], -x[2] + x[0] * x[1]}};
        }
        GroupElement operator()(const DirectProduct& s) const {
            const auto& x = std::get<GroupElement::Tuple>(xe.v);
            GroupElement::Tuple t;
            t.reserve(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) t.push_back(invert(s.factors[i], x[i]));
            return GroupElement{std::move(t)};
        }
        GroupElement operator()(const RationalsTruncated&) const {
            return GroupElement{Rat(-std::get<Rat>(xe.v))};
        }
    };
    GroupElement x = canonicalize(g, xe);
    return std::visit(V{g, x}, g.v);
}

inline bool is_identity(const GroupSpec& g, const GroupElement& x) {
    return element_equal(canonicalize(g, x), identity(g));
}

inline GroupElement power(const GroupSpec& g, const GroupElement& x, Int e) {
    GroupElement base = e < 0 ? invert(g, x) : canonicalize(g, x);
    if (e < 0) e = -e;
    GroupElement acc = identity(g);
    while (e > 0) {
        if ((e & 1) != 0) acc = multiply(g, acc, base);
        base = multiply(g, base, base);
        e >>= 1;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Canonical literals (shared by the workbench format and JSON reports)

inline std::string element_str(const GroupSpec& g, const GroupElement& xe) {
    struct V {
        const GroupSpec& g;
        const GroupElement& xe;
        std::string operator()(const FreeAbelian& s) const {
            const auto& x = std::get<std::vector<Int>>(xe.v);
            if (s.rank == 1) return x[0].str();
            std::string out = "(";
            for (int i = 0; i < s.rank; ++i) {
                if (i) out += ",";
                out += x[i].str();
            }
            return out + ")";
        }
        std::string operator()(const Free&) const {
            const auto& x = std::get<std::vector<int>>(xe.v);
            std::string out = "[";
            for (std::size_t i = 0; i < x.size(); ++i) {
                if (i) out += ",";
                out += std::to_string(x[i]);
            }
            return out + "]";
        }
        std::string operator()(const FiniteCyclic&) const { return std::get<Int>(xe.v).str(); }
        std::string operator()(const PresentedAbelian& s) const {
            const auto& x = std::get<std::vector<Int>>(xe.v);
            if (s.generators == 1) return x[0].str();
            std::string out = "(";
            for (int i = 0; i < s.generators; ++i) {
                if (i) out += ",";
                out += x[i].str();
            }
            return out + ")";
        }
        std::string operator()(const Heisenberg&) const {
            const auto& x = std::get<std::array<Int, 3>>(xe.v);
            return "(" + x[0].str() + "," + x[1].str() + "," + x[2].str() + ")";
        }
        std::string operator()(const DirectProduct& s) const {
            const auto& x = std::get<GroupElement::Tuple>(xe.v);
            std::string out = "(";
            for (std::size_t i = 0; i < x.size(); ++i) {
                if (i) out += ",";
                out += element_str(s.factors[i], x[i]);
            }
            return out + ")";
        }
        std::string operator()(const RationalsTruncated&) const {
            return rat_str(std::get<Rat>(xe.v));
        }
    };
    GroupElement x = canonicalize(g, xe);
    return std::visit(V{g, x}, g.v);
}

// ---------------------------------------------------------------------------
// Canonical generators and generator-power decompositions

/// The standard generating set of each kind, in a fixed order:
/// FreeAbelian/PresentedAbelian: basis vectors; Free: letters; FiniteCyclic: 1;
/// Heisenberg: a, b, c (with c = [a,b]); DirectProduct: embedded factor
/// generators in factor order; RationalsTruncated: 1/1!, ..., 1/K!.
inline std::vector<GroupElement> canonical_generators(const GroupSpec& g) {
    struct V {
        const GroupSpec& g;
        std::vector<GroupElement> operator()(const FreeAbelian& s) const {
            std::vector<GroupElement> out;
            for (int i = 0; i < s.rank; ++i) {
                std::vector<Int> v(s.rank, Int(0));
                v[i] = 1;
                out.push_back(GroupElement{std::move(v)});
            }
            return out;
        }
        std::vector<GroupElement> operator()(const Free& s) const {
            std::vector<GroupElement> out;
            for (int i = 1; i <= s.rank; ++i) out.push_back(GroupElement{std::vector<int>{i}});
            return out;
        }
        std::vector<GroupElement> operator()(const FiniteCyclic& s) const {
            if (s.order == 1) return {};
            return {GroupElement{Int(1)}};
        }
        std::vector<GroupElement> operator()(const PresentedAbelian& s) const {
            std::vector<GroupElement> out;
            for (int i = 0; i < s.generators; ++i) {
                std::vector<Int> v(s.generators, Int(0));
                v[i] = 1;
                out.push_back(GroupElement{s.lattice->reduce(v)});
            }
            return out;
        }
        std::vector<GroupElement> operator()(const Heisenberg&) const {
            return {GroupElement{std::array<Int, 3>{Int(1), Int(0), Int(0)}},
                    GroupElement{std::array<Int, 3>{Int(0), Int(1), Int(0)}},
                    GroupElement{std::array<Int, 3>{Int(0), Int(0), Int(1)}}};
        }
        std::vector<GroupElement> operator()(const DirectProduct& s) const {
            std::vector<GroupElement> out;
            for (std::size_t i = 0; i < s.factors.size(); ++i) {
                for (const auto& fg : canonical_generators(s.factors[i])) {
                    GroupElement::Tuple t;
                    for (std::size_t j = 0; j < s.factors.size(); ++j)
                        t.push_back(j == i ? fg : identity(s.factors[j]));
                    out.push_back(GroupElement{std::move(t)});
                }
            }
            return out;
        }
        std::vector<GroupElement> operator()(const RationalsTruncated& s) const {
            std::vector<GroupElement> out;
            for (int n = 1; n <= s.depth; ++n)
                out.push_back(GroupElement{Rat(Int(1), factorial(n))});
            return out;
        }
    };
    return std::visit(V{g}, g.v);
}

/// Writes x as an ordered product of canonical-generator powers:
/// multiplying generators[i]^e in sequence reproduces x exactly.
inline std::vector<std::pair<int, Int>> decompose(const GroupSpec& g, const GroupElement& xe) {
    struct V {
        const GroupSpec& g;
        const GroupElement& xe;
        std::vector<std::pair<int, Int>> operator()(const FreeAbelian& s) const {
            const auto& x = std::get<std::vector<Int>>(xe.v);
            std::vector<std::pair<int, Int>> out;
            for (int i = 0; i < s.rank; ++i)
                if (x[i] != 0) out.emplace_back(i, x[i]);
            return out;
        }
        std::vector<std::pair<int, Int>> operator()(const Free&) const {
            const auto& x = std::get<std::vector<int>>(xe.v);
            std::vector<std::pair<int, Int>> out;
            for (int letter : x)
                out.emplace_back(std::abs(letter) - 1, Int(letter > 0 ? 1 : -1));
            return out;
        }
        std::vector<std::pair<int, Int>> operator()(const FiniteCyclic&) const {
            const auto& x = std::get<Int>(xe.v);
            if (x == 0) return {};
            return {{0, x}};
        }
        std::vector<std::pair<int, Int>> operator()(const PresentedAbelian& s) const {
            const auto& x = std::get<std::vector<Int>>(xe.v);
            std::vector<std::pair<int, Int>> out;
            for (int i = 0; i < s.generators; ++i)
                if (x[i] != 0) out.emplace_back(i, x[i]);
            return out;
        }
        std::vector<std::pair<int, Int>> operator()(const Heisenberg&) const {
            // x = a^p b^q c^(r - p q), with c = [a,b] central.
            const auto& x = std::get<std::array<Int, 3>>(xe.v);
            std::vector<std::pair<int, Int>> out;
            if (x[0] != 0) out.emplace_back(0, x[0]);
            if (x[1] != 0) out.emplace_back(1, x[1]);
            Int ce = x[2] - x[0] * x[1];
            if (ce != 0) out.emplace_back(2, ce);
            return out;
        }
        std::vector<std::pair<int, Int>> operator()(const DirectProduct& s) const {
            const auto& x = std::get<GroupElement::Tuple>(xe.v);
            std::vector<std::pair<int, Int>> out;
            int offset = 0;
            for (std::size_t i = 0; i < s.factors.size(); ++i) {
                for (const auto& [idx, e] : decompose(s.factors[i], x[i]))
                    out.emplace_back(offset + idx, e);
                offset += static_cast<int>(canonical_generators(s.factors[i]).size());
            }
            return out;
        }
        std::vector<std::pair<int, Int>> operator()(const RationalsTruncated& s) const {
            const auto& x = std::get<Rat>(xe.v);
            if (x == 0) return {};
            Int m = numerator(x) * (factorial(s.depth) / denominator(x));
            return {{s.depth - 1, m}};
        }
    };
    GroupElement x = canonicalize(g, xe);
    return std::visit(V{g, x}, g.v);
}

// ---------------------------------------------------------------------------
// Homomorphisms

/// A homomorphism is given by images of the source's canonical generators.
/// Construction checks the source's defining relations against the images.
struct Homomorphism {
    GroupSpec source;
    GroupSpec target;
    std::vector<GroupElement> images;  // one per canonical source generator
};

inline GroupElement apply_hom(const Homomorphism& h, const GroupElement& x);

namespace detail {
inline GroupElement hom_commutator(const GroupSpec& g, const GroupElement& a,
                                   const GroupElement& b) {
    return multiply(g, multiply(g, a, b), multiply(g, invert(g, a), invert(g, b)));
}

inline void check_hom_relations(const GroupSpec& source, const GroupSpec& target,
                                const std::vector<GroupElement>& images) {
    struct V {
        const GroupSpec& target;
        const std::vector<GroupElement>& images;
        void operator()(const FreeAbelian& s) const {
            for (int i = 0; i < s.rank; ++i)
                for (int j = i + 1; j < s.rank; ++j)
                    if (!is_identity(target, hom_commutator(target, images[i], images[j])))
                        throw error("images of commuting generators must commute");
        }
        void operator()(const Free&) const {}
        void operator()(const FiniteCyclic& s) const {
            if (s.order == 1) return;
            if (!is_identity(target, power(target, images[0], s.order)))
                throw error("generator image must have order dividing " + s.order.str());
        }
        void operator()(const PresentedAbelian& s) const {
            for (int i = 0; i < s.generators; ++i)
                for (int j = i + 1; j < s.generators; ++j)
                    if (!is_identity(target, hom_commutator(target, images[i], images[j])))
                        throw error("images of commuting generators must commute");
            for (int r = 0; r < s.relations.rows; ++r) {
                GroupElement acc = identity(target);
                for (int c = 0; c < s.generators; ++c)
                    acc = multiply(target, acc, power(target, images[c], s.relations.at(r, c)));
                if (!is_identity(target, acc))
                    throw error("relation row " + std::to_string(r) +
                                " does not map to the identity");
            }
        }
        void operator()(const Heisenberg&) const {
            const GroupElement& ia = images[0];
            const GroupElement& ib = images[1];
            const GroupElement& ic = images[2];
            if (!element_equal(ic, hom_commutator(target, ia, ib)))
                throw error("image of c must be the commutator of the images of a and b");
            if (!is_identity(target, hom_commutator(target, ia, ic)) ||
                !is_identity(target, hom_commutator(target, ib, ic)))
                throw error("image of c must be central among the images");
        }
        void operator()(const DirectProduct& s) const {
            // Factor relations hold recursively; blocks must commute pairwise.
            int offset = 0;
            std::vector<std::pair<int, int>> blocks;
            for (const auto& f : s.factors) {
                int cnt = static_cast<int>(canonical_generators(f).size());
                std::vector<GroupElement> sub(images.begin() + offset,
                                              images.begin() + offset + cnt);
                check_hom_relations(f, target, sub);
                blocks.emplace_back(offset, offset + cnt);
                offset += cnt;
            }
            for (std::size_t i = 0; i < blocks.size(); ++i)
                for (std::size_t j = i + 1; j < blocks.size(); ++j)
                    for (int p = blocks[i].first; p < blocks[i].second; ++p)
                        for (int q = blocks[j].first; q < blocks[j].second; ++q)
                            if (!is_identity(target, hom_commutator(target, images[p], images[q])))
                                throw error("images of distinct product factors must commute");
        }
        void operator()(const RationalsTruncated& s) const {
            // 1/n! = (n+1) * 1/(n+1)! forces img_n = img_{n+1}^(n+1).
            for (int n = 1; n < s.depth; ++n)
                if (!element_equal(images[n - 1], power(target, images[n], Int(n + 1))))
                    throw error("images must satisfy img(1/" + std::to_string(n) + "!) = img(1/" +
                                std::to_string(n + 1) + "!)^" + std::to_string(n + 1));
        }
    };
    std::visit(V{target, images}, source.v);
}
}  // namespace detail

/// Heisenberg sources may supply images for a, b only; the image of c is derived.
inline Homomorphism make_homomorphism(GroupSpec source, GroupSpec target,
                                      std::vector<GroupElement> images) {
    std::size_t expected = canonical_generators(source).size();
    if (std::holds_alternative<Heisenberg>(source.v) && images.size() == 2)
        images.push_back(detail::hom_commutator(target, images[0], images[1]));
    if (images.size() != expected)
        throw error("expected " + std::to_string(expected) + " generator images, got " +
                    std::to_string(images.size()));
    for (auto& img : images) img = canonicalize(target, img);
    detail::check_hom_relations(source, target, images);
    return Homomorphism{std::move(source), std::move(target), std::move(images)};
}

inline GroupElement apply_hom(const Homomorphism& h, const GroupElement& x) {
    GroupElement acc = identity(h.target);
    for (const auto& [idx, e] : decompose(h.source, x))
        acc = multiply(h.target, acc, power(h.target, h.images[idx], e));
    return acc;
}

inline Homomorphism identity_homomorphism(const GroupSpec& g) {
    return Homomorphism{g, g, canonical_generators(g)};
}

/// Matrix of an abelian-to-abelian map in generator coordinates (columns are
/// generator images).
inline IntegerMatrix hom_matrix(const Homomorphism& h) {
    auto coords = [](const GroupSpec& g, const GroupElement& x) -> std::vector<Int> {
        if (auto* p = std::get_if<std::vector<Int>>(&x.v)) return *p;
        (void)g;
        throw error("matrix form requires free_abelian or presented_abelian groups");
    };
    if (!std::holds_alternative<FreeAbelian>(h.source.v) &&
        !std::holds_alternative<PresentedAbelian>(h.source.v))
        throw error("matrix form requires an abelian source");
    int n = static_cast<int>(h.images.size());
    if (n == 0) return IntegerMatrix(0, 0);
    std::vector<Int> first = coords(h.target, h.images[0]);
    IntegerMatrix m(static_cast<int>(first.size()), n);
    for (int c = 0; c < n; ++c) {
        std::vector<Int> col = coords(h.target, h.images[c]);
        for (int r = 0; r < m.rows; ++r) m.at(r, c) = col[r];
    }
    return m;
}

}  // namespace ccg
