// The workbench file format: named groups, weight tables, covers, series and
// homomorphisms in a line-oriented text form.
//
//   file    = { section }
//   section = '[' kind ':' name ']' { key '=' value }
//   kinds   = group | weights | cover | series | hom
//
// Values are integers, exact rationals p/q, matrices as ';'-separated rows,
// element literals, and name references. '#' starts a full-line comment.
// Parsing is strict; errors carry a 1-based line/column and a one-line reason.
// print_workbench emits a canonical form: parse(print(parse(f))) == parse(f).
#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ccg/cover.hpp"
#include "ccg/metric.hpp"
#include "ccg/solvable.hpp"

namespace ccg {

struct WorkbenchFile {
    struct SectionRef {
        std::string kind;
        std::string name;
    };
    struct WeightsDef {
        std::string group_ref;
        WeightFunction wf;
    };
    struct CoverDef {
        std::string group_ref;    // empty: inferred unit-weight Z^n
        std::string weights_ref;  // empty: default weights
        Rat d;
        Rat r;
        std::vector<CoverFamily> families;
    };
    struct HomDef {
        std::string source_ref;
        std::string target_ref;
        Homomorphism hom;
    };

    std::vector<SectionRef> order;
    std::map<std::string, GroupSpec> groups;
    std::map<std::string, WeightsDef> weights;
    std::map<std::string, CoverDef> covers;
    std::map<std::string, SeriesSpec> series;
    std::map<std::string, HomDef> homs;

    const GroupSpec& group(const std::string& name) const {
        auto it = groups.find(name);
        if (it == groups.end()) throw error("unknown group '" + name + "'");
        return it->second;
    }
    const WeightsDef& weights_def(const std::string& name) const {
        auto it = weights.find(name);
        if (it == weights.end()) throw error("unknown weights '" + name + "'");
        return it->second;
    }
    const CoverDef& cover(const std::string& name) const {
        auto it = covers.find(name);
        if (it == covers.end()) throw error("unknown cover '" + name + "'");
        return it->second;
    }
    const SeriesSpec& series_spec(const std::string& name) const {
        auto it = series.find(name);
        if (it == series.end()) throw error("unknown series '" + name + "'");
        return it->second;
    }
    const HomDef& hom(const std::string& name) const {
        auto it = homs.find(name);
        if (it == homs.end()) throw error("unknown hom '" + name + "'");
        return it->second;
    }

    MetricContext context(const std::string& weights_name) const {
        return MetricContext(weights_def(weights_name).wf.group, weights_def(weights_name).wf);
    }

    /// Certificate + verification context of a cover section.
    std::pair<CoverCertificate, MetricContext> cover_certificate(const std::string& name) const {
        const CoverDef& def = cover(name);
        CoverCertificate cert{def.d, def.r, def.families};
        if (!def.weights_ref.empty()) return {cert, context(def.weights_ref)};
        if (!def.group_ref.empty()) return {cert, MetricContext(group(def.group_ref))};
        return {cert, detail::resolve_context(cert)};
    }
};

// ---------------------------------------------------------------------------
// Low-level text helpers

namespace wbdetail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

/// Split on `sep` at brace/paren/bracket depth zero.
inline std::vector<std::string_view> split_top(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '(' || c == '[' || c == '{') ++depth;
        if (c == ')' || c == ']' || c == '}') --depth;
        if (c == sep && depth == 0) {
            out.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    std::string_view last = trim(s.substr(start));
    if (!last.empty() || !out.empty()) out.push_back(last);
    return out;
}

inline bool strip_outer(std::string_view& s, char open, char close) {
    s = trim(s);
    if (s.size() < 2 || s.front() != open || s.back() != close) return false;
    int depth = 0;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        if (s[i] == open) ++depth;
        if (s[i] == close) --depth;
        if (depth == 0) return false;  // outer pair closes early
    }
    s = trim(s.substr(1, s.size() - 2));
    return true;
}

struct Pos {
    int line = 0;
    int col = 1;
};

[[noreturn]] inline void fail(const Pos& p, const std::string& reason) {
    throw parse_error(p.line, p.col, reason);
}

}  // namespace wbdetail

// ---------------------------------------------------------------------------
// Element literals

/// Parses the canonical element literal of the given kind: "(1,2)" or "3" for
/// abelian coordinates, "[1,2,-1]" for free words, "(a,b,c)" for Heisenberg,
/// "p/q" for truncated rationals, and component tuples for direct products.
inline GroupElement parse_element(const GroupSpec& g, std::string_view text) {
    using wbdetail::split_top;
    using wbdetail::strip_outer;
    using wbdetail::trim;
    text = trim(text);
    struct V {
        const GroupSpec& g;
        std::string_view text;
        GroupElement operator()(const FreeAbelian& s) const { return vec(s.rank); }
        GroupElement operator()(const PresentedAbelian& s) const { return vec(s.generators); }
        GroupElement vec(int n) const {
            std::string_view t = text;
            std::vector<Int> coords;
            if (n == 1 && t.find('(') == std::string_view::npos) {
                coords.push_back(parse_int(t));
            } else {
                if (!strip_outer(t, '(', ')'))
                    throw error("expected a coordinate vector like (1,2)");
                auto parts = t.empty() ? std::vector<std::string_view>{} : split_top(t, ',');
                if (static_cast<int>(parts.size()) != n)
                    throw error("expected " + std::to_string(n) + " coordinates");
                for (auto p : parts) coords.push_back(parse_int(p));
            }
            if (static_cast<int>(coords.size()) != n)
                throw error("expected " + std::to_string(n) + " coordinates");
            return canonicalize(g, GroupElement{std::move(coords)});
        }
        GroupElement operator()(const Free&) const {
            std::string_view t = text;
            if (!strip_outer(t, '[', ']')) throw error("expected a word like [1,2,-1]");
            std::vector<int> w;
            if (!t.empty())
                for (auto p : split_top(t, ',')) {
                    Int v = parse_int(p);
                    w.push_back(static_cast<int>(v));
                }
            return canonicalize(g, GroupElement{std::move(w)});
        }
        GroupElement operator()(const FiniteCyclic&) const {
            return canonicalize(g, GroupElement{parse_int(text)});
        }
        GroupElement operator()(const Heisenberg&) const {
            std::string_view t = text;
            if (!strip_outer(t, '(', ')')) throw error("expected a triple like (a,b,c)");
            auto parts = split_top(t, ',');
            if (parts.size() != 3) throw error("expected three coordinates");
            return GroupElement{std::array<Int, 3>{parse_int(parts[0]), parse_int(parts[1]),
                                                   parse_int(parts[2])}};
        }
        GroupElement operator()(const DirectProduct& s) const {
            std::string_view t = text;
            if (!strip_outer(t, '(', ')')) throw error("expected a component tuple");
            auto parts = t.empty() ? std::vector<std::string_view>{} : split_top(t, ',');
            if (parts.size() != s.factors.size())
                throw error("expected " + std::to_string(s.factors.size()) + " components");
            GroupElement::Tuple tup;
            for (std::size_t i = 0; i < parts.size(); ++i)
                tup.push_back(parse_element(s.factors[i], parts[i]));
            return GroupElement{std::move(tup)};
        }
        GroupElement operator()(const RationalsTruncated&) const {
            return canonicalize(g, GroupElement{parse_rat(text)});
        }
    };
    return std::visit(V{g, text}, g.v);
}

// ---------------------------------------------------------------------------
// Parser

namespace wbdetail {

struct RawLine {
    std::string key;
    std::string value;
    Pos pos;  // column points at the value
};

struct RawSection {
    std::string kind;
    std::string name;
    Pos pos;
    std::vector<RawLine> lines;

    const RawLine* find(const std::string& key) const {
        for (const auto& l : lines)
            if (l.key == key) return &l;
        return nullptr;
    }
    std::string require(const std::string& key) const {
        const RawLine* l = find(key);
        if (!l) fail(pos, "section [" + kind + ":" + name + "] is missing key '" + key + "'");
        return l->value;
    }
};

inline std::vector<RawSection> scan_sections(const std::string& text) {
    std::vector<RawSection> sections;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        std::string_view line(text.data() + start,
                              (end == std::string::npos ? text.size() : end) - start);
        ++line_no;
        std::string_view t = trim(line);
        if (!t.empty() && t.front() != '#') {
            if (t.front() == '[') {
                if (t.back() != ']') fail({line_no, 1}, "unterminated section header");
                std::string_view inner = t.substr(1, t.size() - 2);
                auto colon = inner.find(':');
                if (colon == std::string_view::npos)
                    fail({line_no, 1}, "section header must be [kind:name]");
                std::string kind(trim(inner.substr(0, colon)));
                std::string name(trim(inner.substr(colon + 1)));
                if (kind != "group" && kind != "weights" && kind != "cover" &&
                    kind != "series" && kind != "hom")
                    fail({line_no, 1}, "unknown section kind '" + kind + "'");
                if (name.empty()) fail({line_no, 1}, "section name must be nonempty");
                for (char c : name)
                    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-')
                        fail({line_no, 1}, "section names use letters, digits, '_' and '-'");
                sections.push_back(RawSection{kind, name, {line_no, 1}, {}});
            } else {
                auto eq = t.find('=');
                if (eq == std::string_view::npos)
                    fail({line_no, 1}, "expected 'key = value' or a section header");
                if (sections.empty()) fail({line_no, 1}, "key line before any section header");
                std::string key(trim(t.substr(0, eq)));
                std::string value(trim(t.substr(eq + 1)));
                int col = static_cast<int>(line.find('=') + 2);
                sections.back().lines.push_back(RawLine{key, value, {line_no, col}});
            }
        }
        if (end == std::string::npos) break;
        start = end + 1;
    }
    return sections;
}

inline Int parse_int_at(std::string_view s, const Pos& p) {
    auto v = try_parse_int(trim(s));
    if (!v) fail(p, "invalid integer '" + std::string(trim(s)) + "'");
    return *v;
}

inline Rat parse_rat_at(std::string_view s, const Pos& p) {
    auto v = try_parse_rat(trim(s));
    if (!v) fail(p, "invalid rational '" + std::string(trim(s)) + "'");
    return *v;
}

inline bool parse_bool_at(std::string_view s, const Pos& p) {
    s = trim(s);
    if (s == "true") return true;
    if (s == "false") return false;
    fail(p, "expected true or false");
}

inline std::string parse_quoted_at(std::string_view s, const Pos& p) {
    s = trim(s);
    if (s.size() < 2 || s.front() != '"' || s.back() != '"')
        fail(p, "expected a quoted string");
    std::string_view body = s.substr(1, s.size() - 2);
    if (body.find('"') != std::string_view::npos)
        fail(p, "quoted strings cannot contain '\"'");
    return std::string(body);
}

/// "2,0,0;0,3,0" -> matrix rows; the empty string is a 0-row matrix.
inline IntegerMatrix parse_matrix_at(std::string_view s, int cols, const Pos& p) {
    s = trim(s);
    if (s.empty()) return IntegerMatrix(0, cols);
    auto rows = split_top(s, ';');
    IntegerMatrix m(static_cast<int>(rows.size()), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        auto cells = split_top(rows[r], ',');
        if (static_cast<int>(cells.size()) != cols)
            fail(p, "matrix rows must have " + std::to_string(cols) + " entries");
        for (int c = 0; c < cols; ++c) m.at(static_cast<int>(r), c) = parse_int_at(cells[c], p);
    }
    return m;
}

/// call-style literal: head(arg1, arg2, ...), args split at top level.
inline bool parse_call(std::string_view s, std::string_view& head,
                       std::vector<std::string_view>& args) {
    s = trim(s);
    auto open = s.find('(');
    if (open == std::string_view::npos || s.back() != ')') return false;
    head = trim(s.substr(0, open));
    std::string_view body = s.substr(open + 1, s.size() - open - 2);
    body = trim(body);
    args = body.empty() ? std::vector<std::string_view>{} : split_top(body, ',');
    return true;
}

}  // namespace wbdetail

inline WorkbenchFile parse_workbench(const std::string& text) {
    using namespace wbdetail;
    WorkbenchFile file;
    auto sections = scan_sections(text);

    // Global name uniqueness.
    {
        std::map<std::string, const RawSection*> seen;
        for (const auto& s : sections) {
            auto [it, inserted] = seen.emplace(s.name, &s);
            if (!inserted)
                fail(s.pos, "duplicate name '" + s.name + "' (first used by [" +
                                it->second->kind + ":" + s.name + "])");
        }
    }

    auto known_keys = [](const RawSection& s, std::initializer_list<const char*> keys) {
        for (const auto& l : s.lines) {
            bool ok = false;
            for (const char* k : keys)
                if (l.key == k) ok = true;
            if (!ok) fail(l.pos, "unknown key '" + l.key + "' in [" + s.kind + ":" + s.name + "]");
        }
    };

    // Pass 1: groups, in order; direct products may reference earlier groups.
    for (const auto& s : sections) {
        if (s.kind != "group") continue;
        file.order.push_back({s.kind, s.name});
        known_keys(s, {"kind", "rank", "order", "generators", "relations", "depth", "factors"});
        std::string kind = s.require("kind");
        try {
            if (kind == "free_abelian") {
                file.groups.emplace(s.name, make_free_abelian(static_cast<int>(
                                                parse_int_at(s.require("rank"), s.pos))));
            } else if (kind == "free") {
                file.groups.emplace(
                    s.name, make_free(static_cast<int>(parse_int_at(s.require("rank"), s.pos))));
            } else if (kind == "finite_cyclic") {
                file.groups.emplace(s.name,
                                    make_finite_cyclic(parse_int_at(s.require("order"), s.pos)));
            } else if (kind == "presented_abelian") {
                int gens = static_cast<int>(parse_int_at(s.require("generators"), s.pos));
                const RawLine* rel = s.find("relations");
                IntegerMatrix m = rel ? parse_matrix_at(rel->value, gens, rel->pos)
                                      : IntegerMatrix(0, gens);
                file.groups.emplace(s.name, make_presented_abelian(gens, std::move(m)));
            } else if (kind == "heisenberg") {
                file.groups.emplace(s.name, make_heisenberg());
            } else if (kind == "rationals_truncated") {
                file.groups.emplace(s.name, make_rationals_truncated(static_cast<int>(
                                                parse_int_at(s.require("depth"), s.pos))));
            } else if (kind == "direct_product") {
                std::vector<GroupSpec> factors;
                for (auto ref : split_top(s.require("factors"), ',')) {
                    auto it = file.groups.find(std::string(ref));
                    if (it == file.groups.end())
                        fail(s.pos, "unresolved group reference '" + std::string(ref) +
                                        "' (factors must be defined earlier)");
                    factors.push_back(it->second);
                }
                file.groups.emplace(s.name, make_direct_product(std::move(factors)));
            } else {
                fail(s.pos, "unknown group kind '" + kind + "'");
            }
        } catch (const parse_error&) {
            throw;
        } catch (const error& e) {
            fail(s.pos, e.what());
        }
    }

    // Pass 2: everything else, in order.
    for (const auto& s : sections) {
        if (s.kind == "group") continue;
        file.order.push_back({s.kind, s.name});
        if (s.kind == "weights") {
            known_keys(s, {"group", "entries"});
            std::string gref = s.require("group");
            if (!file.groups.count(gref)) fail(s.pos, "unresolved group reference '" + gref + "'");
            const GroupSpec& g = file.groups.at(gref);
            const RawLine* entries_line = s.find("entries");
            if (!entries_line) fail(s.pos, "weights section needs 'entries'");
            std::vector<WeightEntry> entries;
            for (auto item : split_top(entries_line->value, ',')) {
                auto colon = item.rfind(':');
                if (colon == std::string_view::npos)
                    fail(entries_line->pos, "weight entries look like element:weight");
                std::string_view elem = trim(item.substr(0, colon));
                std::string_view w = trim(item.substr(colon + 1));
                try {
                    entries.push_back(
                        WeightEntry{parse_element(g, elem), parse_rat_at(w, entries_line->pos)});
                } catch (const parse_error&) {
                    throw;
                } catch (const error& e) {
                    fail(entries_line->pos, e.what());
                }
            }
            try {
                file.weights.emplace(s.name,
                                     WorkbenchFile::WeightsDef{gref, make_weight_function(
                                                                         g, std::move(entries))});
            } catch (const error& e) {
                fail(entries_line->pos, e.what());
            }
        } else if (s.kind == "cover") {
            known_keys(s, {"group", "weights", "d", "r", "family"});
            WorkbenchFile::CoverDef def;
            if (const RawLine* l = s.find("group")) {
                def.group_ref = l->value;
                if (!file.groups.count(def.group_ref))
                    fail(l->pos, "unresolved group reference '" + def.group_ref + "'");
            }
            if (const RawLine* l = s.find("weights")) {
                def.weights_ref = l->value;
                if (!file.weights.count(def.weights_ref))
                    fail(l->pos, "unresolved weights reference '" + def.weights_ref + "'");
                if (def.group_ref.empty())
                    def.group_ref = file.weights.at(def.weights_ref).group_ref;
                else if (file.weights.at(def.weights_ref).group_ref != def.group_ref)
                    fail(l->pos, "weights '" + def.weights_ref + "' are not over group '" +
                                     def.group_ref + "'");
            }
            def.d = parse_rat_at(s.require("d"), s.pos);
            def.r = parse_rat_at(s.require("r"), s.pos);
            for (const auto& l : s.lines) {
                if (l.key != "family") continue;
                std::string_view head;
                std::vector<std::string_view> args;
                if (!parse_call(l.value, head, args))
                    fail(l.pos, "family values are interval(...), product(...) or explicit(...)");
                try {
                    if (head == "interval") {
                        if (args.size() != 3) fail(l.pos, "interval takes (L, P, offset)");
                        def.families.push_back(make_interval_family(parse_int_at(args[0], l.pos),
                                                                    parse_int_at(args[1], l.pos),
                                                                    parse_int_at(args[2], l.pos)));
                    } else if (head == "product") {
                        ProductFamily pf;
                        for (auto a : args) {
                            std::string_view h2;
                            std::vector<std::string_view> a2;
                            if (!parse_call(a, h2, a2) || h2 != "interval" || a2.size() != 3)
                                fail(l.pos, "product factors must be interval(L, P, offset)");
                            pf.factors.push_back(make_interval_family(parse_int_at(a2[0], l.pos),
                                                                      parse_int_at(a2[1], l.pos),
                                                                      parse_int_at(a2[2], l.pos)));
                        }
                        def.families.push_back(std::move(pf));
                    } else if (head == "explicit") {
                        if (def.group_ref.empty())
                            fail(l.pos, "explicit families need a 'group' (or 'weights') key");
                        const GroupSpec& g = file.groups.at(def.group_ref);
                        MetricContext ctx =
                            def.weights_ref.empty()
                                ? MetricContext(g)
                                : MetricContext(g, file.weights.at(def.weights_ref).wf);
                        std::vector<std::vector<GroupElement>> sets;
                        for (auto a : args) {
                            std::string_view body = a;
                            if (!strip_outer(body, '{', '}'))
                                fail(l.pos, "explicit sets look like {elem, elem}");
                            std::vector<GroupElement> set;
                            if (!body.empty())
                                for (auto e : split_top(body, ','))
                                    set.push_back(parse_element(g, e));
                            sets.push_back(std::move(set));
                        }
                        def.families.push_back(make_explicit_family(std::move(sets), ctx));
                    } else {
                        fail(l.pos, "unknown family form '" + std::string(head) + "'");
                    }
                } catch (const parse_error&) {
                    throw;
                } catch (const error& e) {
                    fail(l.pos, e.what());
                }
            }
            if (def.families.empty()) fail(s.pos, "cover sections need at least one family");
            file.covers.emplace(s.name, std::move(def));
        } else if (s.kind == "series") {
            known_keys(s, {"polycyclic", "quotient", "witness", "witness_note"});
            bool polycyclic = false;
            if (const RawLine* l = s.find("polycyclic")) polycyclic = parse_bool_at(l->value, l->pos);
            std::vector<QuotientSpec> quotients;
            for (const auto& l : s.lines) {
                if (l.key != "quotient") continue;
                std::string_view head;
                std::vector<std::string_view> args;
                // presented(n) / presented(n: rows) / declared(rank, bool, "note")
                std::string_view sv = trim(std::string_view(l.value));
                auto open = sv.find('(');
                if (open == std::string_view::npos || sv.back() != ')')
                    fail(l.pos, "quotients are presented(...) or declared(...)");
                head = trim(sv.substr(0, open));
                std::string_view body = trim(sv.substr(open + 1, sv.size() - open - 2));
                try {
                    if (head == "presented") {
                        auto colon = body.find(':');
                        int gens;
                        IntegerMatrix rel(0, 0);
                        if (colon == std::string_view::npos) {
                            gens = static_cast<int>(parse_int_at(body, l.pos));
                            rel = IntegerMatrix(0, gens);
                        } else {
                            gens = static_cast<int>(parse_int_at(body.substr(0, colon), l.pos));
                            rel = parse_matrix_at(trim(body.substr(colon + 1)), gens, l.pos);
                        }
                        GroupSpec spec = make_presented_abelian(gens, std::move(rel));
                        quotients.push_back(QuotientSpec{std::get<PresentedAbelian>(spec.v)});
                    } else if (head == "declared") {
                        args = split_top(body, ',');
                        if (args.size() != 3)
                            fail(l.pos, "declared takes (rank|inf, torsion_only, \"note\")");
                        Dim rank = trim(args[0]) == "inf" ? Dim::inf()
                                                          : Dim(parse_int_at(args[0], l.pos));
                        bool torsion = parse_bool_at(args[1], l.pos);
                        std::string note = parse_quoted_at(args[2], l.pos);
                        quotients.push_back(
                            QuotientSpec{make_declared_rank(rank, torsion, std::move(note))});
                    } else {
                        fail(l.pos, "unknown quotient form '" + std::string(head) + "'");
                    }
                } catch (const parse_error&) {
                    throw;
                } catch (const error& e) {
                    fail(l.pos, e.what());
                }
            }
            std::optional<SeriesWitness> witness;
            if (const RawLine* l = s.find("witness")) {
                SeriesWitness w;
                w.rank = parse_int_at(l->value, l->pos);
                if (const RawLine* n = s.find("witness_note"))
                    w.justification = parse_quoted_at(n->value, n->pos);
                witness = std::move(w);
            } else if (s.find("witness_note")) {
                fail(s.pos, "witness_note without witness");
            }
            try {
                file.series.emplace(
                    s.name, make_series(s.name, std::move(quotients), polycyclic, std::move(witness)));
            } catch (const error& e) {
                fail(s.pos, e.what());
            }
        } else if (s.kind == "hom") {
            known_keys(s, {"source", "target", "images"});
            std::string src = s.require("source");
            std::string tgt = s.require("target");
            if (!file.groups.count(src)) fail(s.pos, "unresolved group reference '" + src + "'");
            if (!file.groups.count(tgt)) fail(s.pos, "unresolved group reference '" + tgt + "'");
            const RawLine* images_line = s.find("images");
            if (!images_line) fail(s.pos, "hom sections need 'images'");
            std::vector<GroupElement> images;
            try {
                for (auto item : split_top(images_line->value, ','))
                    images.push_back(parse_element(file.groups.at(tgt), item));
                file.homs.emplace(
                    s.name, WorkbenchFile::HomDef{src, tgt,
                                                  make_homomorphism(file.groups.at(src),
                                                                    file.groups.at(tgt),
                                                                    std::move(images))});
            } catch (const parse_error&) {
                throw;
            } catch (const error& e) {
                fail(images_line->pos, e.what());
            }
        }
    }
    return file;
}

// ---------------------------------------------------------------------------
// Canonical printing

namespace wbdetail {

inline std::string matrix_str(const IntegerMatrix& m) {
    std::string out;
    for (int r = 0; r < m.rows; ++r) {
        if (r) out += ";";
        for (int c = 0; c < m.cols; ++c) {
            if (c) out += ",";
            out += m.at(r, c).str();
        }
    }
    return out;
}

inline std::string interval_str(const IntervalFamily& f) {
    return "interval(" + f.block_len.str() + "," + f.period.str() + "," + f.offset.str() + ")";
}

}  // namespace wbdetail

inline std::string print_workbench(const WorkbenchFile& file) {
    using wbdetail::interval_str;
    using wbdetail::matrix_str;
    std::string out;
    for (const auto& ref : file.order) {
        out += "[" + ref.kind + ":" + ref.name + "]\n";
        if (ref.kind == "group") {
            const GroupSpec& g = file.groups.at(ref.name);
            if (auto* fa = std::get_if<FreeAbelian>(&g.v)) {
                out += "kind = free_abelian\nrank = " + std::to_string(fa->rank) + "\n";
            } else if (auto* fr = std::get_if<Free>(&g.v)) {
                out += "kind = free\nrank = " + std::to_string(fr->rank) + "\n";
            } else if (auto* fc = std::get_if<FiniteCyclic>(&g.v)) {
                out += "kind = finite_cyclic\norder = " + fc->order.str() + "\n";
            } else if (auto* pa = std::get_if<PresentedAbelian>(&g.v)) {
                out += "kind = presented_abelian\ngenerators = " +
                       std::to_string(pa->generators) + "\n";
                if (pa->relations.rows > 0)
                    out += "relations = " + matrix_str(pa->relations) + "\n";
            } else if (std::holds_alternative<Heisenberg>(g.v)) {
                out += "kind = heisenberg\n";
            } else if (auto* rt = std::get_if<RationalsTruncated>(&g.v)) {
                out += "kind = rationals_truncated\ndepth = " + std::to_string(rt->depth) + "\n";
            } else if (std::holds_alternative<DirectProduct>(g.v)) {
                // Factor names are not stored; reconstruct from the order list.
                // Factors were required to be earlier sections, so match by value.
                const auto& dp = std::get<DirectProduct>(g.v);
                out += "kind = direct_product\nfactors = ";
                for (std::size_t i = 0; i < dp.factors.size(); ++i) {
                    if (i) out += ", ";
                    std::string found;
                    for (const auto& r2 : file.order) {
                        if (r2.kind != "group" || r2.name == ref.name) continue;
                        auto it = file.groups.find(r2.name);
                        if (it != file.groups.end() && spec_equal(it->second, dp.factors[i])) {
                            found = r2.name;
                            break;
                        }
                    }
                    if (found.empty())
                        throw error("cannot print direct product: factor group has no name");
                    out += found;
                }
                out += "\n";
            }
        } else if (ref.kind == "weights") {
            const auto& def = file.weights.at(ref.name);
            const GroupSpec& g = file.groups.at(def.group_ref);
            out += "group = " + def.group_ref + "\nentries = ";
            for (std::size_t i = 0; i < def.wf.entries.size(); ++i) {
                if (i) out += ", ";
                out += element_str(g, def.wf.entries[i].generator) + ":" +
                       rat_str(def.wf.entries[i].weight);
            }
            out += "\n";
        } else if (ref.kind == "cover") {
            const auto& def = file.covers.at(ref.name);
            if (!def.group_ref.empty()) out += "group = " + def.group_ref + "\n";
            if (!def.weights_ref.empty()) out += "weights = " + def.weights_ref + "\n";
            out += "d = " + rat_str(def.d) + "\nr = " + rat_str(def.r) + "\n";
            for (const auto& f : def.families) {
                if (auto* iv = std::get_if<IntervalFamily>(&f)) {
                    out += "family = " + interval_str(*iv) + "\n";
                } else if (auto* pf = std::get_if<ProductFamily>(&f)) {
                    out += "family = product(";
                    for (std::size_t i = 0; i < pf->factors.size(); ++i) {
                        if (i) out += ", ";
                        out += interval_str(pf->factors[i]);
                    }
                    out += ")\n";
                } else {
                    const auto& ef = std::get<ExplicitFamily>(f);
                    out += "family = explicit(";
                    for (std::size_t i = 0; i < ef.sets.size(); ++i) {
                        if (i) out += ", ";
                        out += "{";
                        for (std::size_t j = 0; j < ef.sets[i].size(); ++j) {
                            if (j) out += ", ";
                            out += element_str(ef.ctx.group(), ef.sets[i][j]);
                        }
                        out += "}";
                    }
                    out += ")\n";
                }
            }
        } else if (ref.kind == "series") {
            const SeriesSpec& sp = file.series.at(ref.name);
            out += std::string("polycyclic = ") + (sp.polycyclic ? "true" : "false") + "\n";
            for (const auto& q : sp.quotients) {
                if (auto* p = std::get_if<PresentedAbelian>(&q.v)) {
                    out += "quotient = presented(" + std::to_string(p->generators);
                    if (p->relations.rows > 0) out += ": " + matrix_str(p->relations);
                    out += ")\n";
                } else {
                    const auto& d = std::get<DeclaredRank>(q.v);
                    out += "quotient = declared(" + d.rank.str() + ", " +
                           (d.torsion_only ? "true" : "false") + ", \"" + d.justification +
                           "\")\n";
                }
            }
            if (sp.witness) {
                out += "witness = " + sp.witness->rank.str() + "\n";
                if (!sp.witness->justification.empty())
                    out += "witness_note = \"" + sp.witness->justification + "\"\n";
            }
        } else if (ref.kind == "hom") {
            const auto& def = file.homs.at(ref.name);
            out += "source = " + def.source_ref + "\ntarget = " + def.target_ref + "\nimages = ";
            for (std::size_t i = 0; i < def.hom.images.size(); ++i) {
                if (i) out += ", ";
                out += element_str(def.hom.target, def.hom.images[i]);
            }
            out += "\n";
        }
        out += "\n";
    }
    return out;
}

}  // namespace ccg
