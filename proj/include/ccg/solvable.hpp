// Hirsch length and asymptotic-dimension bound derivation for groups given by
// a subnormal series with abelian quotients. Bounds carry a replayable trace
// whose leaves are axioms (computed or declared ranks) and whose nodes are
// tagged rule applications.
#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "ccg/abelian.hpp"

namespace ccg {

/// A nonnegative integer or infinity; addition is absorbing.
struct Dim {
    bool infinite = false;
    Int value = 0;

    Dim() = default;
    Dim(Int v) : value(std::move(v)) {
        if (value < 0) throw error("dimension values must be nonnegative");
    }
    Dim(int v) : Dim(Int(v)) {}
    static Dim inf() {
        Dim d;
        d.infinite = true;
        return d;
    }

    bool operator==(const Dim& o) const {
        return infinite == o.infinite && (infinite || value == o.value);
    }
    bool operator<(const Dim& o) const {
        if (infinite) return false;
        if (o.infinite) return true;
        return value < o.value;
    }
    Dim operator+(const Dim& o) const {
        if (infinite || o.infinite) return inf();
        return Dim(value + o.value);
    }
    std::string str() const { return infinite ? "inf" : value.str(); }
};

inline Dim dim_max(const Dim& a, const Dim& b) { return a < b ? b : a; }

/// A quotient whose rank is asserted rather than computed. torsion_only
/// implies rank zero (torsion abelian groups have asymptotic dimension 0).
struct DeclaredRank {
    Dim rank;
    bool torsion_only = false;
    std::string justification;
};

inline DeclaredRank make_declared_rank(Dim rank, bool torsion_only, std::string justification) {
    if (torsion_only && !(rank == Dim(0)))
        throw error("torsion-only quotients must declare rank 0");
    return DeclaredRank{std::move(rank), torsion_only, std::move(justification)};
}

struct QuotientSpec {
    std::variant<PresentedAbelian, DeclaredRank> v;
};

struct SeriesWitness {
    Int rank;  // a declared free-abelian subgroup Z^rank
    std::string justification;
};

/// Quotients listed bottom-up along 1 = G_0 < G_1 < ... < G_n = G;
/// quotient i is G_{i+1}/G_i.
struct SeriesSpec {
    std::string name;
    std::vector<QuotientSpec> quotients;
    bool polycyclic = false;
    std::optional<SeriesWitness> witness;
};

inline SeriesSpec make_series(std::string name, std::vector<QuotientSpec> quotients,
                              bool polycyclic, std::optional<SeriesWitness> witness = {}) {
    if (polycyclic)
        for (const auto& q : quotients)
            if (!std::holds_alternative<PresentedAbelian>(q.v))
                throw error("polycyclic series must present every quotient");
    if (witness && witness->rank < 0) throw error("witness rank must be nonnegative");
    return SeriesSpec{std::move(name), std::move(quotients), polycyclic, std::move(witness)};
}

// ---------------------------------------------------------------------------
// Traces

/// Rule tags for internal nodes; AXIOM_* tags mark leaves.
inline const char* kRuleSubgroupMono = "SUBGROUP_MONO";
inline const char* kRuleHurewicz = "HUREWICZ";
inline const char* kRuleAction = "ACTION";
inline const char* kRuleCountableSup = "COUNTABLE_SUP";
inline const char* kRuleAbelianExact = "ABELIAN_EXACT";
inline const char* kRuleTorsionZero = "TORSION_ZERO";
inline const char* kRuleSesAdd = "SES_ADD";
inline const char* kRuleHirschUb = "HIRSCH_UB";
inline const char* kRulePolycyclicEq = "POLYCYCLIC_EQ";
inline const char* kAxiomRank = "AXIOM_RANK";
inline const char* kAxiomDeclared = "AXIOM_DECLARED";
inline const char* kAxiomWitness = "AXIOM_WITNESS";

struct TraceNode {
    std::string op;
    Int lower = 0;
    Dim upper;
    std::string note;
    std::vector<TraceNode> children;
};

struct BoundInterval {
    Int lower = 0;
    Dim upper;
    TraceNode trace;
};

inline BoundInterval as_interval(TraceNode node) {
    BoundInterval b;
    b.lower = node.lower;
    b.upper = node.upper;
    b.trace = std::move(node);
    return b;
}

/// Recomputes every internal node from its children and checks it matches the
/// stored interval; leaves are the axioms and stand as given.
inline bool trace_replays(const TraceNode& n) {
    for (const auto& c : n.children)
        if (!trace_replays(c)) return false;
    Int lower = 0;
    Dim upper;
    if (n.op == kAxiomRank || n.op == kAxiomDeclared || n.op == kAxiomWitness) {
        if (!n.children.empty()) return false;
        return true;
    } else if (n.op == kRuleAbelianExact) {
        if (n.children.size() != 1) return false;
        lower = n.children[0].lower;
        upper = n.children[0].upper;
    } else if (n.op == kRuleTorsionZero) {
        lower = 0;
        upper = Dim(0);
    } else if (n.op == kRuleHirschUb) {
        lower = 0;
        upper = Dim(0);
        for (const auto& c : n.children) upper = upper + c.upper;
    } else if (n.op == kRulePolycyclicEq) {
        if (n.children.size() != 1 || n.children[0].upper.infinite) return false;
        lower = n.children[0].upper.value;
        upper = n.children[0].upper;
    } else if (n.op == kRuleSubgroupMono) {
        if (n.children.size() != 2) return false;
        lower = n.children[0].lower > n.children[1].lower ? n.children[0].lower
                                                          : n.children[1].lower;
        upper = n.children[1].upper;
    } else if (n.op == kRuleCountableSup) {
        lower = 0;
        upper = Dim(0);
        for (const auto& c : n.children) {
            if (c.lower > lower) lower = c.lower;
            upper = dim_max(upper, c.upper);
        }
    } else if (n.op == kRuleSesAdd) {
        if (n.children.size() != 2) return false;
        lower = n.children[0].lower + n.children[1].lower;
        upper = n.children[0].upper + n.children[1].upper;
    } else if (n.op == kRuleHurewicz || n.op == kRuleAction) {
        if (n.children.size() != 2) return false;
        lower = 0;
        upper = n.children[0].upper + n.children[1].upper;
    } else {
        return false;
    }
    return lower == n.lower && upper == n.upper;
}

// ---------------------------------------------------------------------------
// Operations

/// Rank of one quotient (its Hirsch contribution).
inline Dim quotient_rank(const QuotientSpec& q) {
    if (auto* p = std::get_if<PresentedAbelian>(&q.v)) return Dim(rank_and_torsion(*p).rank);
    return std::get<DeclaredRank>(q.v).rank;
}

/// h = sum over quotients of dim_Q(quotient tensor Q).
inline Dim hirsch_length(const SeriesSpec& s) {
    Dim h(0);
    for (const auto& q : s.quotients) h = h + quotient_rank(q);
    return h;
}

namespace detail {

/// Exact asdim interval of one abelian quotient, with provenance.
inline TraceNode quotient_node(const QuotientSpec& q) {
    if (auto* p = std::get_if<PresentedAbelian>(&q.v)) {
        RankTorsion rt = rank_and_torsion(*p);
        TraceNode leaf{kAxiomRank, Int(rt.rank), Dim(rt.rank),
                       "rank of presented quotient (" + std::to_string(p->generators) +
                           " generators, " + std::to_string(p->relations.rows) + " relations)",
                       {}};
        return TraceNode{kRuleAbelianExact, Int(rt.rank), Dim(rt.rank), "", {std::move(leaf)}};
    }
    const auto& d = std::get<DeclaredRank>(q.v);
    if (d.torsion_only) {
        TraceNode leaf{kAxiomDeclared, 0, Dim(0), d.justification, {}};
        return TraceNode{kRuleTorsionZero, 0, Dim(0), "", {std::move(leaf)}};
    }
    Int lower = d.rank.infinite ? Int(0) : d.rank.value;
    TraceNode leaf{kAxiomDeclared, lower, d.rank, d.justification, {}};
    return TraceNode{kRuleAbelianExact, lower, d.rank, "", {std::move(leaf)}};
}

}  // namespace detail

/// Upper bound h(G) from the Hirsch length; equality when polycyclic; lower
/// bounds only from a declared free-abelian witness (or the polycyclic rule).
inline BoundInterval asdim_bounds(const SeriesSpec& s) {
    TraceNode base;
    if (s.quotients.size() == 1) {
        base = detail::quotient_node(s.quotients[0]);
    } else {
        std::vector<TraceNode> qs;
        qs.reserve(s.quotients.size());
        Dim h(0);
        for (const auto& q : s.quotients) {
            qs.push_back(detail::quotient_node(q));
            h = h + qs.back().upper;
        }
        base = TraceNode{kRuleHirschUb, 0, h, "", std::move(qs)};
        if (s.polycyclic) {
            if (h.infinite) throw error("polycyclic series cannot have infinite Hirsch length");
            base = TraceNode{kRulePolycyclicEq, h.value, h, "", {std::move(base)}};
        }
    }
    if (s.witness) {
        if (Dim(s.witness->rank) < base.upper || Dim(s.witness->rank) == base.upper) {
            TraceNode w{kAxiomWitness, s.witness->rank, Dim(s.witness->rank),
                        s.witness->justification, {}};
            TraceNode sub{kRuleAbelianExact, s.witness->rank, Dim(s.witness->rank),
                          "declared free-abelian subgroup", {std::move(w)}};
            Int lower = base.lower > s.witness->rank ? base.lower : s.witness->rank;
            Dim upper = base.upper;
            base = TraceNode{kRuleSubgroupMono, lower, upper, "", {std::move(sub), std::move(base)}};
        } else {
            throw error("witness rank " + s.witness->rank.str() + " exceeds the upper bound " +
                        base.upper.str());
        }
    }
    return as_interval(std::move(base));
}

/// asdim G <= asdim H + asdim K for a homomorphism with kernel K.
inline Dim hurewicz_bound(const Dim& ub_h, const Dim& ub_k) { return ub_h + ub_k; }

/// asdim G <= n + asdim X for an action with R-stabilizer bounds n.
inline Dim action_bound(const Dim& n, const Dim& ub_x) { return n + ub_x; }

inline BoundInterval hurewicz_interval(const BoundInterval& h, const BoundInterval& k) {
    TraceNode node{kRuleHurewicz, 0, h.upper + k.upper, "", {h.trace, k.trace}};
    return as_interval(std::move(node));
}

inline BoundInterval action_interval(const Dim& stabilizer_bound, const BoundInterval& x) {
    TraceNode stab{kAxiomDeclared, 0, stabilizer_bound, "uniform R-stabilizer bound", {}};
    TraceNode node{kRuleAction, 0, stabilizer_bound + x.upper, "", {std::move(stab), x.trace}};
    return as_interval(std::move(node));
}

/// Exact additivity across an abelian short exact sequence.
inline BoundInterval ses_add_interval(const BoundInterval& b, const BoundInterval& c) {
    TraceNode node{kRuleSesAdd, b.lower + c.lower, b.upper + c.upper, "", {b.trace, c.trace}};
    return as_interval(std::move(node));
}

/// Supremum over (finitely many sampled) finitely generated subgroups; the
/// empty supremum is the trivial group's [0, 0].
inline BoundInterval countable_sup(const std::vector<BoundInterval>& bounds) {
    Int lower = 0;
    Dim upper(0);
    std::vector<TraceNode> children;
    children.reserve(bounds.size());
    for (const auto& b : bounds) {
        if (b.lower > lower) lower = b.lower;
        upper = dim_max(upper, b.upper);
        children.push_back(b.trace);
    }
    TraceNode node{kRuleCountableSup, lower, upper, "", std::move(children)};
    return as_interval(std::move(node));
}

// ---------------------------------------------------------------------------
// JSON forms

inline nlohmann::json dim_to_json(const Dim& d) {
    if (d.infinite) return "inf";
    if (d.value > Int(std::numeric_limits<long long>::max()))
        return d.value.str();
    return nlohmann::json(static_cast<long long>(d.value));
}

inline nlohmann::json trace_to_json(const TraceNode& n) {
    nlohmann::json j;
    j["op"] = n.op;
    j["lower"] = static_cast<long long>(n.lower);
    j["upper"] = dim_to_json(n.upper);
    if (!n.note.empty()) j["note"] = n.note;
    nlohmann::json kids = nlohmann::json::array();
    for (const auto& c : n.children) kids.push_back(trace_to_json(c));
    j["children"] = kids;
    return j;
}

inline nlohmann::json interval_to_json(const BoundInterval& b) {
    nlohmann::json j;
    j["lower"] = static_cast<long long>(b.lower);
    j["upper"] = dim_to_json(b.upper);
    j["trace"] = trace_to_json(b.trace);
    return j;
}

inline nlohmann::json series_to_json(const SeriesSpec& s) {
    nlohmann::json j;
    j["name"] = s.name;
    j["polycyclic"] = s.polycyclic;
    nlohmann::json qs = nlohmann::json::array();
    for (const auto& q : s.quotients) {
        nlohmann::json qj;
        if (auto* p = std::get_if<PresentedAbelian>(&q.v)) {
            qj["type"] = "presented";
            qj["generators"] = p->generators;
            nlohmann::json rel = nlohmann::json::array();
            for (int r = 0; r < p->relations.rows; ++r) {
                nlohmann::json row = nlohmann::json::array();
                for (int c = 0; c < p->relations.cols; ++c)
                    row.push_back(p->relations.at(r, c).str());
                rel.push_back(row);
            }
            qj["relations"] = rel;
        } else {
            const auto& d = std::get<DeclaredRank>(q.v);
            qj["type"] = "declared";
            qj["rank"] = dim_to_json(d.rank);
            qj["torsion_only"] = d.torsion_only;
            qj["justification"] = d.justification;
        }
        qs.push_back(qj);
    }
    j["quotients"] = qs;
    if (s.witness) {
        j["witness"] = {{"rank", static_cast<long long>(s.witness->rank)},
                        {"justification", s.witness->justification}};
    }
    return j;
}

inline SeriesSpec series_from_json(const nlohmann::json& j) {
    std::vector<QuotientSpec> quotients;
    for (const auto& qj : j.at("quotients")) {
        std::string type = qj.at("type").get<std::string>();
        if (type == "presented") {
            int gens = qj.at("generators").get<int>();
            nlohmann::json rel = qj.value("relations", nlohmann::json::array());
            IntegerMatrix m(static_cast<int>(rel.size()), gens);
            for (int r = 0; r < m.rows; ++r) {
                const auto& row = rel.at(r);
                if (static_cast<int>(row.size()) != gens)
                    throw error("relation row width must equal the generator count");
                for (int c = 0; c < gens; ++c) {
                    const auto& cell = row.at(c);
                    m.at(r, c) = cell.is_string() ? parse_int(cell.get<std::string>())
                                                  : Int(cell.get<long long>());
                }
            }
            GroupSpec spec = make_presented_abelian(gens, std::move(m));
            quotients.push_back(QuotientSpec{std::get<PresentedAbelian>(spec.v)});
        } else if (type == "declared") {
            Dim rank;
            const auto& rj = qj.at("rank");
            if (rj.is_string()) {
                std::string rs = rj.get<std::string>();
                rank = rs == "inf" ? Dim::inf() : Dim(parse_int(rs));
            } else {
                rank = Dim(Int(rj.get<long long>()));
            }
            quotients.push_back(QuotientSpec{make_declared_rank(
                rank, qj.value("torsion_only", false), qj.value("justification", std::string()))});
        } else {
            throw error("unknown quotient type '" + type + "'");
        }
    }
    std::optional<SeriesWitness> witness;
    if (j.contains("witness") && !j.at("witness").is_null()) {
        witness = SeriesWitness{Int(j.at("witness").at("rank").get<long long>()),
                                j.at("witness").value("justification", std::string())};
    }
    return make_series(j.value("name", std::string()), std::move(quotients),
                       j.value("polycyclic", false), std::move(witness));
}

}  // namespace ccg
