// ccg: a workbench for computational coarse geometry of discrete groups.
//
// Subcommands compute weighted word norms, distances and balls, coarse
// equivalence profiles, R-stabilizers, cover certificates and their
// verification, the coset-extension construction, exact minimal-diameter
// cover search, Smith normal forms, abelian ranks, Hirsch lengths and
// asymptotic-dimension bounds.
//
// Every command writes a single JSON object to stdout. Exact rationals are
// serialized as strings "p/q" (integers as "p"); no floating point appears.
// Exit codes: 0 success, 1 domain error, 2 parse error, 3 a verification
// command found violations.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ccg/abelian.hpp"
#include "ccg/cover.hpp"
#include "ccg/group.hpp"
#include "ccg/metric.hpp"
#include "ccg/solvable.hpp"
#include "ccg/solver.hpp"
#include "ccg/workbench.hpp"

namespace {

using nlohmann::json;
using namespace ccg;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitParse = 2;
constexpr int kExitViolations = 3;

void emit(const json& j) { std::cout << j.dump() << "\n"; }

bool use_color() {
    return std::getenv("NO_COLOR") == nullptr && isatty(fileno(stderr));
}

void summary(bool ok, const std::string& text) {
    if (use_color())
        std::cerr << (ok ? "\033[32m" : "\033[31m") << text << "\033[0m\n";
    else
        std::cerr << text << "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

WorkbenchFile load(const std::string& path) { return parse_workbench(read_file(path)); }

/// A context by name: a weights section, or a group name (default weights).
MetricContext resolve_context(const WorkbenchFile& f, const std::string& name) {
    if (f.weights.count(name)) return f.context(name);
    if (f.groups.count(name)) return MetricContext(f.group(name));
    throw error("no weights or group named '" + name + "'");
}

std::vector<Rat> parse_rat_list(const std::string& text) {
    std::vector<Rat> out;
    for (auto item : wbdetail::split_top(text, ',')) out.push_back(parse_rat(item));
    return out;
}

json matrix_to_json(const IntegerMatrix& m) {
    json rows = json::array();
    for (int r = 0; r < m.rows; ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols; ++c) row.push_back(m.at(r, c).str());
        rows.push_back(row);
    }
    return rows;
}

IntegerMatrix matrix_from_json(const json& j) {
    if (!j.is_array()) throw error("matrix JSON must be an array of arrays");
    int rows = static_cast<int>(j.size());
    int cols = rows == 0 ? 0 : static_cast<int>(j.at(0).size());
    IntegerMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        const auto& row = j.at(r);
        if (static_cast<int>(row.size()) != cols) throw error("matrix rows must be equally long");
        for (int c = 0; c < cols; ++c) {
            const auto& cell = row.at(c);
            m.at(r, c) =
                cell.is_string() ? parse_int(cell.get<std::string>()) : Int(cell.get<long long>());
        }
    }
    return m;
}

/// Inline matrix argument: JSON array-of-arrays, or ';'-separated rows.
IntegerMatrix matrix_from_arg(const std::string& text) {
    std::string t(wbdetail::trim(text));
    if (!t.empty() && t.front() == '[') return matrix_from_json(json::parse(t));
    auto rows = wbdetail::split_top(t, ';');
    if (t.empty()) throw error("empty matrix argument");
    int cols = static_cast<int>(wbdetail::split_top(rows[0], ',').size());
    IntegerMatrix m(static_cast<int>(rows.size()), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        auto cells = wbdetail::split_top(rows[r], ',');
        if (static_cast<int>(cells.size()) != cols)
            throw error("matrix rows must be equally long");
        for (int c = 0; c < cols; ++c) m.at(static_cast<int>(r), c) = parse_int(cells[c]);
    }
    return m;
}

json verify_report_to_json(const VerifyReport& rep, const GroupSpec& g) {
    json j;
    j["d"] = rat_str(rep.d);
    j["r"] = rat_str(rep.R);
    j["region_size"] = rep.region_size;
    j["max_diameter"] = rat_str(rep.max_diameter);
    json viol = json::array();
    for (const auto& v : rep.disjointness_violations)
        viol.push_back({{"family", v.family},
                        {"a", element_str(g, v.a)},
                        {"b", element_str(g, v.b)},
                        {"dist", rat_str(v.dist)}});
    j["disjointness_violations"] = viol;
    j["nonstrict_violation_count"] = rep.nonstrict_violation_count;
    json bounds = json::array();
    for (const auto& b : rep.bound_violations)
        bounds.push_back({{"family", b.family}, {"diameter", rat_str(b.diameter)}});
    j["bound_violations"] = bounds;
    json gaps = json::array();
    for (const auto& p : rep.coverage_gaps) gaps.push_back(element_str(g, p));
    j["coverage_gaps"] = gaps;
    json sym = json::array();
    for (const auto& s : rep.symbolic_checks) {
        json sj;
        sj["family"] = s.family;
        sj["expected_separation"] = rat_str(s.expected_separation);
        sj["expected_diameter"] = rat_str(s.expected_diameter);
        if (s.observed_separation) sj["observed_separation"] = rat_str(*s.observed_separation);
        if (s.observed_max_diameter)
            sj["observed_max_diameter"] = rat_str(*s.observed_max_diameter);
        sj["consistent"] = s.consistent;
        sym.push_back(sj);
    }
    j["symbolic_checks"] = sym;
    j["clean"] = rep.clean();
    return j;
}

json cert_to_json(const CoverCertificate& cert, const GroupSpec* g) {
    json j;
    j["d"] = rat_str(cert.d);
    j["r"] = rat_str(cert.R);
    json fams = json::array();
    for (const auto& f : cert.families) {
        json fj;
        if (auto* iv = std::get_if<IntervalFamily>(&f)) {
            fj["type"] = "interval";
            fj["block_len"] = iv->block_len.str();
            fj["period"] = iv->period.str();
            fj["offset"] = iv->offset.str();
        } else if (auto* pf = std::get_if<ProductFamily>(&f)) {
            fj["type"] = "product";
            json factors = json::array();
            for (const auto& i : pf->factors)
                factors.push_back({{"block_len", i.block_len.str()},
                                   {"period", i.period.str()},
                                   {"offset", i.offset.str()}});
            fj["factors"] = factors;
        } else {
            const auto& ef = std::get<ExplicitFamily>(f);
            fj["type"] = "explicit";
            json sets = json::array();
            for (const auto& s : ef.sets) {
                json set = json::array();
                for (const auto& e : s) set.push_back(element_str(g ? *g : ef.ctx.group(), e));
                sets.push_back(set);
            }
            fj["sets"] = sets;
        }
        fams.push_back(fj);
    }
    j["families"] = fams;
    return j;
}

int run(int argc, char** argv) {
    CLI::App app{"computational coarse geometry of discrete groups"};
    app.require_subcommand(1);

    // --- norm -------------------------------------------------------------
    std::string n_file, n_weights, n_element, n_cap;
    auto* norm_cmd = app.add_subcommand("norm", "weighted word norm of an element");
    norm_cmd->add_option("--file", n_file, "workbench file")->required();
    norm_cmd->add_option("--weights", n_weights, "weights section (or group for defaults)")
        ->required();
    norm_cmd->add_option("--element", n_element, "element literal")->required();
    norm_cmd->add_option("--cap", n_cap, "search cap (exact rational)")->required();

    // --- dist -------------------------------------------------------------
    std::string d_file, d_weights, d_x, d_y, d_cap;
    auto* dist_cmd = app.add_subcommand("dist", "left-invariant distance between two elements");
    dist_cmd->add_option("--file", d_file)->required();
    dist_cmd->add_option("--weights", d_weights)->required();
    dist_cmd->add_option("--x", d_x)->required();
    dist_cmd->add_option("--y", d_y)->required();
    dist_cmd->add_option("--cap", d_cap)->required();

    // --- ball -------------------------------------------------------------
    std::string b_file, b_weights, b_radius;
    auto* ball_cmd = app.add_subcommand("ball", "closed ball at the identity");
    ball_cmd->add_option("--file", b_file)->required();
    ball_cmd->add_option("--weights", b_weights)->required();
    ball_cmd->add_option("--radius", b_radius)->required();

    // --- profile ----------------------------------------------------------
    std::string p_file, p_w1, p_w2, p_ts, p_sr;
    auto* prof_cmd = app.add_subcommand("profile", "rho1/rho2 coarse-equivalence profile");
    prof_cmd->add_option("--file", p_file)->required();
    prof_cmd->add_option("--weights", p_w1, "context defining d")->required();
    prof_cmd->add_option("--weights-prime", p_w2, "context defining d'")->required();
    prof_cmd->add_option("--t", p_ts, "comma-separated t values")->required();
    prof_cmd->add_option("--search-radius", p_sr)->required();

    // --- sandwich ---------------------------------------------------------
    std::string s_file, s_w1, s_w2, s_vr, s_hom;
    auto* sand_cmd = app.add_subcommand("sandwich", "verify rho1 <= d' <= rho2 over a ball");
    sand_cmd->add_option("--file", s_file)->required();
    sand_cmd->add_option("--weights", s_w1, "context defining d")->required();
    sand_cmd->add_option("--weights-prime", s_w2, "context defining d'")->required();
    sand_cmd->add_option("--verify-radius", s_vr)->required();
    sand_cmd->add_option("--hom", s_hom, "embedding for the subgroup case");

    // --- stabilizer ---------------------------------------------------------
    std::string st_file, st_hom, st_ws, st_wt, st_x0, st_r, st_sr;
    auto* stab_cmd = app.add_subcommand("stabilizer", "R-stabilizer of a basepoint");
    stab_cmd->add_option("--file", st_file)->required();
    stab_cmd->add_option("--hom", st_hom, "action homomorphism")->required();
    stab_cmd->add_option("--weights-source", st_ws)->required();
    stab_cmd->add_option("--weights-target", st_wt)->required();
    stab_cmd->add_option("--x0", st_x0, "basepoint in the target group")->required();
    stab_cmd->add_option("--r", st_r)->required();
    stab_cmd->add_option("--search-radius", st_sr)->required();

    // --- cover-make ---------------------------------------------------------
    std::string cm_d;
    auto* cmake_cmd = app.add_subcommand("cover-make", "two-family interval cover of Z");
    cmake_cmd->add_option("--d", cm_d, "scale (positive integer)")->required();

    // --- cover-verify -------------------------------------------------------
    std::string cv_file, cv_cover, cv_radius;
    auto* cver_cmd = app.add_subcommand("cover-verify", "verify a cover over a ball");
    cver_cmd->add_option("--file", cv_file)->required();
    cver_cmd->add_option("--cover", cv_cover)->required();
    cver_cmd->add_option("--radius", cv_radius)->required();

    // --- cover-extend -------------------------------------------------------
    std::string ce_file, ce_weights, ce_d, ce_cover, ce_hom, ce_radius;
    auto* cext_cmd = app.add_subcommand("cover-extend", "extend a subgroup cover by cosets");
    cext_cmd->add_option("--file", ce_file)->required();
    cext_cmd->add_option("--weights", ce_weights, "ambient context")->required();
    cext_cmd->add_option("--d", ce_d)->required();
    cext_cmd->add_option("--cover", ce_cover, "cover of the subgroup")->required();
    cext_cmd->add_option("--hom", ce_hom, "embedding of the subgroup")->required();
    cext_cmd->add_option("--radius", ce_radius)->required();

    // --- solve ----------------------------------------------------------------
    std::string sv_instance, sv_file, sv_weights, sv_radius, sv_d;
    int sv_k = 0;
    std::uint64_t sv_budget = 50'000'000;
    auto* solve_cmd = app.add_subcommand("solve", "minimal-diameter cover search");
    solve_cmd->add_option("--instance", sv_instance, "instance JSON file");
    solve_cmd->add_option("--file", sv_file, "workbench file (ball instance)");
    solve_cmd->add_option("--weights", sv_weights);
    solve_cmd->add_option("--radius", sv_radius);
    solve_cmd->add_option("--k", sv_k, "family count");
    solve_cmd->add_option("--d", sv_d, "scale");
    solve_cmd->add_option("--budget", sv_budget, "node budget");

    // --- snf -------------------------------------------------------------------
    std::string sn_matrix, sn_matrix_file;
    auto* snf_cmd = app.add_subcommand("snf", "Smith normal form of an integer matrix");
    snf_cmd->add_option("--matrix", sn_matrix, "inline matrix ('2,4;6,8' or [[..]])");
    snf_cmd->add_option("--matrix-file", sn_matrix_file, "JSON array-of-arrays file");

    // --- rank --------------------------------------------------------------------
    std::string rk_matrix, rk_matrix_file;
    int rk_gens = -1;
    auto* rank_cmd = app.add_subcommand("rank", "rank/torsion/asdim of a presented abelian group");
    rank_cmd->add_option("--matrix", rk_matrix, "relation matrix");
    rank_cmd->add_option("--matrix-file", rk_matrix_file);
    rank_cmd->add_option("--gens", rk_gens, "generator count");

    // --- hirsch ---------------------------------------------------------------------
    std::string h_file, h_series, h_json;
    auto* hir_cmd = app.add_subcommand("hirsch", "Hirsch length of a series");
    hir_cmd->add_option("--file", h_file, "workbench file");
    hir_cmd->add_option("--series", h_series, "series section name");
    hir_cmd->add_option("--series-json", h_json, "series JSON file");

    // --- bounds ----------------------------------------------------------------------
    std::string bd_file, bd_series, bd_json;
    auto* bnd_cmd = app.add_subcommand("bounds", "asymptotic-dimension bounds of a series");
    bnd_cmd->add_option("--file", bd_file);
    bnd_cmd->add_option("--series", bd_series);
    bnd_cmd->add_option("--series-json", bd_json);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        emit(json{{"error", std::string("usage: ") + e.what()}});
        return kExitParse;
    }

    try {
        if (*norm_cmd) {
            WorkbenchFile f = load(n_file);
            MetricContext ctx = resolve_context(f, n_weights);
            GroupElement x = parse_element(ctx.group(), n_element);
            auto v = ctx.norm(x, parse_rat(n_cap));
            json j;
            if (v) {
                j["norm"] = rat_str(*v);
            } else {
                j["exceeds_cap"] = true;
                j["cap"] = rat_str(parse_rat(n_cap));
            }
            emit(j);
            summary(true, v ? "norm = " + rat_str(*v) : "exceeds cap");
        } else if (*dist_cmd) {
            WorkbenchFile f = load(d_file);
            MetricContext ctx = resolve_context(f, d_weights);
            auto v = ctx.distance(parse_element(ctx.group(), d_x), parse_element(ctx.group(), d_y),
                                  parse_rat(d_cap));
            json j;
            if (v) {
                j["distance"] = rat_str(*v);
            } else {
                j["exceeds_cap"] = true;
                j["cap"] = rat_str(parse_rat(d_cap));
            }
            emit(j);
            summary(true, v ? "distance = " + rat_str(*v) : "exceeds cap");
        } else if (*ball_cmd) {
            WorkbenchFile f = load(b_file);
            MetricContext ctx = resolve_context(f, b_weights);
            auto ball = ctx.ball_with_norms(parse_rat(b_radius));
            json elems = json::array(), norms = json::array();
            for (const auto& [e, n] : ball) {
                elems.push_back(element_str(ctx.group(), e));
                norms.push_back(rat_str(n));
            }
            emit(json{{"radius", rat_str(parse_rat(b_radius))},
                      {"count", ball.size()},
                      {"elements", elems},
                      {"norms", norms}});
            summary(true, std::to_string(ball.size()) + " elements");
        } else if (*prof_cmd) {
            WorkbenchFile f = load(p_file);
            MetricContext cd = resolve_context(f, p_w1);
            MetricContext cp = resolve_context(f, p_w2);
            auto rows = rho_profile(cd, cp, parse_rat_list(p_ts), parse_rat(p_sr));
            json out = json::array();
            for (const auto& r : rows) {
                json rj;
                rj["t"] = rat_str(r.t);
                if (r.rho1) rj["rho1"] = rat_str(*r.rho1);
                rj["rho1_infinite"] = r.rho1_infinite;
                rj["rho1_certified"] = r.rho1_certified;
                rj["rho2"] = rat_str(r.rho2);
                out.push_back(rj);
            }
            emit(json{{"search_radius", rat_str(parse_rat(p_sr))}, {"rows", out}});
            summary(true, std::to_string(rows.size()) + " profile rows");
        } else if (*sand_cmd) {
            WorkbenchFile f = load(s_file);
            MetricContext cd = resolve_context(f, s_w1);
            MetricContext cp = resolve_context(f, s_w2);
            std::optional<Homomorphism> hom;
            if (!s_hom.empty()) hom = f.hom(s_hom).hom;
            auto rep = check_coarse_sandwich(cd, cp, parse_rat(s_vr), hom);
            json viol = json::array();
            for (const auto& v : rep.violations) {
                json vj;
                vj["offset"] = element_str(cd.group(), v.offset);
                vj["t"] = rat_str(v.t);
                vj["dprime"] = rat_str(v.dprime);
                if (v.rho1) vj["rho1"] = rat_str(*v.rho1);
                vj["rho2"] = rat_str(v.rho2);
                viol.push_back(vj);
            }
            emit(json{{"verify_radius", rat_str(parse_rat(s_vr))},
                      {"pairs_checked", rep.pairs_checked},
                      {"distinct_offsets", rep.distinct_offsets},
                      {"rho1_all_certified", rep.rho1_all_certified},
                      {"violations", viol}});
            bool ok = rep.violations.empty();
            summary(ok, ok ? "zero violations" : std::to_string(rep.violations.size()) +
                                                     " violations");
            return ok ? kExitOk : kExitViolations;
        } else if (*stab_cmd) {
            WorkbenchFile f = load(st_file);
            const auto& hd = f.hom(st_hom);
            MetricContext cs = resolve_context(f, st_ws);
            MetricContext ct = resolve_context(f, st_wt);
            auto elems = r_stabilizer(hd.hom, ct, parse_element(ct.group(), st_x0),
                                      parse_rat(st_r), cs, parse_rat(st_sr));
            json ej = json::array();
            for (const auto& e : elems) ej.push_back(element_str(cs.group(), e));
            emit(json{{"r", rat_str(parse_rat(st_r))},
                      {"count", elems.size()},
                      {"elements", ej}});
            summary(true, std::to_string(elems.size()) + " elements");
        } else if (*cmake_cmd) {
            CoverCertificate cert = make_interval_cover(parse_int(cm_d));
            emit(cert_to_json(cert, nullptr));
            summary(true, "interval cover at d = " + cm_d);
        } else if (*cver_cmd) {
            WorkbenchFile f = load(cv_file);
            auto [cert, ctx] = f.cover_certificate(cv_cover);
            VerifyReport rep = verify_families(cert, ctx, parse_rat(cv_radius));
            emit(verify_report_to_json(rep, ctx.group()));
            summary(rep.clean(), rep.clean() ? "clean report" : "violations found");
            return rep.clean() ? kExitOk : kExitViolations;
        } else if (*cext_cmd) {
            WorkbenchFile f = load(ce_file);
            MetricContext ctx = resolve_context(f, ce_weights);
            auto [cert, fctx] = f.cover_certificate(ce_cover);
            auto res = extend_cover_by_cosets(ctx, parse_rat(ce_d), cert, f.hom(ce_hom).hom,
                                              parse_rat(ce_radius));
            json j;
            json tj = json::array();
            for (const auto& t : res.light_generators) tj.push_back(element_str(ctx.group(), t));
            j["t_set"] = tj;
            json rj = json::array();
            for (const auto& r : res.representatives) rj.push_back(element_str(ctx.group(), r));
            j["representatives"] = rj;
            j["degenerate_trivial_subgroup"] = res.degenerate_trivial_subgroup;
            j["degenerate_whole_group"] = res.degenerate_whole_group;
            j["input_report"] = verify_report_to_json(res.input_report, ctx.group());
            j["output_report"] = verify_report_to_json(res.output_report, ctx.group());
            j["output"] = cert_to_json(res.output, &ctx.group());
            emit(j);
            bool ok = res.input_report.clean() && res.output_report.clean();
            summary(ok, ok ? "extension verified" : "violations found");
            return ok ? kExitOk : kExitViolations;
        } else if (*solve_cmd) {
            SolverInstanceFile inst;
            if (!sv_instance.empty()) {
                inst = instance_from_json(json::parse(read_file(sv_instance)));
            } else {
                if (sv_file.empty() || sv_weights.empty() || sv_radius.empty() || sv_k <= 0 ||
                    sv_d.empty())
                    throw error("solve needs --instance or --file/--weights/--radius/--k/--d");
                WorkbenchFile f = load(sv_file);
                MetricContext ctx = resolve_context(f, sv_weights);
                inst.table = metric_table_from_ball(ctx, parse_rat(sv_radius));
                inst.k = sv_k;
                inst.d = parse_rat(sv_d);
            }
            SolveResult res = solve_min_diameter(inst.table, inst.k, inst.d, sv_budget);
            emit(result_to_json(res));
            summary(true, "r_star = " + rat_str(res.r_star) + (res.exact ? " (exact)" : " (bound)"));
        } else if (*snf_cmd) {
            IntegerMatrix m;
            if (!sn_matrix.empty())
                m = matrix_from_arg(sn_matrix);
            else if (!sn_matrix_file.empty())
                m = matrix_from_json(json::parse(read_file(sn_matrix_file)));
            else
                throw error("snf needs --matrix or --matrix-file");
            SNFResult s = smith_normal_form(m);
            json diag = json::array();
            for (const auto& di : s.diagonal()) diag.push_back(di.str());
            emit(json{{"diagonal", diag},
                      {"u", matrix_to_json(s.u)},
                      {"d", matrix_to_json(s.d)},
                      {"v", matrix_to_json(s.v)},
                      {"rank", s.rank()},
                      {"verified", true}});
            summary(true, "rank " + std::to_string(s.rank()));
        } else if (*rank_cmd) {
            IntegerMatrix m;
            if (!rk_matrix.empty())
                m = matrix_from_arg(rk_matrix);
            else if (!rk_matrix_file.empty())
                m = matrix_from_json(json::parse(read_file(rk_matrix_file)));
            else if (rk_gens > 0)
                m = IntegerMatrix(0, rk_gens);
            else
                throw error("rank needs --matrix, --matrix-file or --gens");
            if (rk_gens >= 0 && m.cols != rk_gens) {
                if (m.rows == 0)
                    m = IntegerMatrix(0, rk_gens);
                else
                    throw error("--gens disagrees with the matrix width");
            }
            GroupSpec spec = make_presented_abelian(m.cols, m);
            RankTorsion rt = rank_and_torsion(std::get<PresentedAbelian>(spec.v));
            json tj = json::array();
            for (const auto& t : rt.torsion) tj.push_back(static_cast<long long>(t));
            emit(json{{"rank", rt.rank}, {"torsion", tj}, {"asdim", rt.rank}});
            summary(true, "rank " + std::to_string(rt.rank));
        } else if (*hir_cmd || *bnd_cmd) {
            bool hirsch_mode = static_cast<bool>(*hir_cmd);
            std::string file = hirsch_mode ? h_file : bd_file;
            std::string name = hirsch_mode ? h_series : bd_series;
            std::string jsonf = hirsch_mode ? h_json : bd_json;
            SeriesSpec sp;
            if (!jsonf.empty()) {
                sp = series_from_json(json::parse(read_file(jsonf)));
            } else if (!file.empty() && !name.empty()) {
                sp = load(file).series_spec(name);
            } else {
                throw error("need --series-json or --file with --series");
            }
            if (hirsch_mode) {
                Dim h = hirsch_length(sp);
                emit(json{{"hirsch", dim_to_json(h)}});
                summary(true, "h = " + h.str());
            } else {
                BoundInterval b = asdim_bounds(sp);
                emit(interval_to_json(b));
                summary(true, "asdim in [" + b.lower.str() + ", " + b.upper.str() + "]");
            }
        }
        return kExitOk;
    } catch (const parse_error& e) {
        emit(json{{"error", e.what()}, {"line", e.line}, {"column", e.column}});
        summary(false, e.what());
        return kExitParse;
    } catch (const error& e) {
        emit(json{{"error", e.what()}});
        summary(false, e.what());
        return kExitDomain;
    } catch (const std::exception& e) {
        emit(json{{"error", e.what()}});
        summary(false, e.what());
        return kExitDomain;
    }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
