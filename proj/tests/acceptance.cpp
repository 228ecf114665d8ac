// Acceptance suite: one pass/fail line per criterion, exact checks at the
// stated tolerances. Takes the path to the ccg binary (for the determinism
// criterion) as its only argument. Exits nonzero if any criterion fails.
#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ccg/abelian.hpp"
#include "ccg/cover.hpp"
#include "ccg/metric.hpp"
#include "ccg/solvable.hpp"
#include "ccg/solver.hpp"
#include "ccg/workbench.hpp"
#include "corpus.hpp"
#include "oracles.hpp"

using namespace ccg;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& label, double limit_seconds,
               const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    auto start = std::chrono::steady_clock::now();
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
        ok = false;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > limit_seconds) {
        ok = false;
        detail += (detail.empty() ? "" : "; ") + std::string("exceeded time limit");
    }
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << (ok ? "PASS" : "FAIL") << " criterion " << number << " [" << secs << "s/"
         << limit_seconds << "s] " << label;
    if (!detail.empty()) line << " -- " << detail;
    std::cout << line.str() << "\n";
    if (!ok) ++g_failures;
}

GroupElement zv(long v) { return GroupElement{std::vector<Int>{Int(v)}}; }

}  // namespace

int main(int argc, char** argv) {
    std::string cli = argc > 1 ? argv[1] : "";

    // 1. Norm correctness on Z: unit weights reproduce |n| up to 1000, and the
    //    {+-1,+-3} metric agrees with a BFS oracle on the full radius-12 ball.
    criterion(1, "norm correctness on Z", 5.0, [](std::string& detail) {
        GroupSpec z = make_free_abelian(1);
        MetricContext unit(z);
        for (long n = -1000; n <= 1000; ++n) {
            auto v = unit.norm(zv(n), Rat(1001));
            if (!v || *v != Rat(n < 0 ? -n : n)) {
                detail = "norm(" + std::to_string(n) + ") wrong";
                return false;
            }
        }
        MetricContext two(z, make_weight_function(z, {{zv(1), Rat(1)}, {zv(3), Rat(1)}}));
        std::vector<GroupElement> gens{zv(1), zv(-1), zv(3), zv(-3)};
        auto depths = oracle::bfs_depths(z, gens, 12);
        std::size_t in_ball = 0;
        for (const auto& [x, d] : depths)
            if (d <= 12) ++in_ball;
        auto ball = two.ball_with_norms(Rat(12));
        if (ball.size() != in_ball) {
            detail = "ball size mismatch vs BFS";
            return false;
        }
        for (const auto& [x, nx] : ball)
            if (Rat(depths.at(x)) != nx) {
                detail = "norm differs from BFS depth at " + element_str(z, x);
                return false;
            }
        return true;
    });

    // 2. The sandwich inequality with certified rho1 on the two Z metrics.
    criterion(2, "coarse sandwich with certified rho1", 10.0, [](std::string& detail) {
        GroupSpec z = make_free_abelian(1);
        MetricContext d(z);
        MetricContext dp(z, make_weight_function(z, {{zv(1), Rat(1)}, {zv(3), Rat(1)}}));
        std::vector<Rat> ts;
        for (int t = 1; t <= 20; ++t) ts.push_back(Rat(t));
        auto rows = rho_profile(d, dp, ts, Rat(60));
        for (const auto& r : rows)
            if (!r.rho1_certified || !r.rho1) {
                detail = "rho1 not certified at t = " + rat_str(r.t);
                return false;
            }
        auto rep = check_coarse_sandwich(d, dp, Rat(20));
        if (!rep.rho1_all_certified) {
            detail = "sandwich profile not certified";
            return false;
        }
        if (!rep.violations.empty()) {
            detail = std::to_string(rep.violations.size()) + " violations";
            return false;
        }
        return true;
    });

    // 3. Every sampled finitely generated subgroup of the truncated rationals
    //    is cyclic (gcd generator); the supremum over them is [1, 1].
    criterion(3, "truncated rationals have dimension one", 10.0, [](std::string& detail) {
        for (int k : {2, 3, 4}) {
            GroupSpec q = make_rationals_truncated(k);
            MetricContext ctx(q);
            auto ball = ctx.ball(Rat(6));
            oracle::Rng rng(1000 + k);
            std::vector<BoundInterval> bounds;
            bounds.push_back(asdim_bounds(make_series("trivial", {}, true)));
            bool saw_rank_one = false;
            for (int trial = 0; trial < 40; ++trial) {
                int count = rng.range(1, 3);
                std::vector<Rat> sample;
                for (int i = 0; i < count; ++i)
                    sample.push_back(std::get<Rat>(ball[rng.below((int)ball.size())].v));
                Rat gen(0);
                for (const auto& s : sample) gen = rat_gcd(gen, s);
                for (const auto& s : sample) {
                    if (gen == 0) {
                        if (s != 0) return false;
                        continue;
                    }
                    Rat ratio = s / gen;
                    if (denominator(ratio) != 1) {
                        detail = "gcd generator does not divide a sample";
                        return false;
                    }
                }
                int rank = gen == 0 ? 0 : 1;
                saw_rank_one = saw_rank_one || rank == 1;
                GroupSpec presented = make_presented_abelian(1, IntegerMatrix(
                    rank == 1 ? 0 : 1, 1, rank == 1 ? std::vector<Int>{} : std::vector<Int>{Int(1)}));
                bounds.push_back(asdim_bounds(make_series(
                    "sub", {QuotientSpec{std::get<PresentedAbelian>(presented.v)}}, true)));
            }
            if (!saw_rank_one) {
                detail = "sampling never produced a nontrivial subgroup";
                return false;
            }
            BoundInterval sup = countable_sup(bounds);
            if (!(sup.lower == 1 && sup.upper == Dim(1))) {
                detail = "countable_sup != [1,1] at depth " + std::to_string(k);
                return false;
            }
        }
        return true;
    });

    // 4. The coset-extension construction on Z with generators {+-5 w=1,
    //    +-1 w=10} at d = 5: clean verification on the radius-60 ball with
    //    the declared bound R = 5*6-5 from the scaled interval cover.
    criterion(4, "coset extension of the interval cover", 10.0, [](std::string& detail) {
        GroupSpec z = make_free_abelian(1);
        MetricContext ctx(z, make_weight_function(z, {{zv(5), Rat(1)}, {zv(1), Rat(10)}}));
        Homomorphism embed = make_homomorphism(make_free_abelian(1), z, {zv(5)});
        CoverCertificate f_cover = make_interval_cover(5);
        f_cover.R = Rat(5 * 6 - 5);  // the interval cover scaled through j -> 5j

        CosetExtension ext = extend_cover_by_cosets(ctx, Rat(5), f_cover, embed, Rat(60));
        if (!(ext.output.R == Rat(25))) {
            detail = "output bound is not 25";
            return false;
        }
        if (!ext.input_report.clean()) {
            detail = "input cover failed verification";
            return false;
        }
        if (!ext.output_report.clean()) {
            detail = "output families failed verification";
            return false;
        }
        if (ext.representatives.size() != 5) {
            detail = "expected five coset representatives";
            return false;
        }
        return true;
    });

    // 5. Exact cover optimization: oracle agreement, the bounded/linear split
    //    on Z, and strict growth for two families on the plane.
    criterion(5, "cover optimization evidence", 120.0, [](std::string& detail) {
        MetricContext zctx(make_free_abelian(1));
        for (int n = 1; n <= 7; ++n) {
            MetricTable t = metric_table_from_ball(zctx, Rat(n));
            for (int k : {1, 2})
                for (int d : {1, 2}) {
                    SolveResult res = solve_min_diameter(t, k, Rat(d));
                    if (!res.exact || res.r_star != exhaustive_cover_oracle(t, k, Rat(d))) {
                        detail = "oracle mismatch on Z ball " + std::to_string(n);
                        return false;
                    }
                }
        }
        for (int n = 4; n <= 20; ++n) {
            MetricTable t = metric_table_from_ball(zctx, Rat(n));
            SolveResult two = solve_min_diameter(t, 2, Rat(2));
            if (!two.exact || two.r_star != 1) {
                detail = "k=2 d=2 on Z should stay at 1 (n=" + std::to_string(n) + ")";
                return false;
            }
            SolveResult one = solve_min_diameter(t, 1, Rat(1));
            if (!one.exact || one.r_star != Rat(2 * n)) {
                detail = "k=1 d=1 on Z should grow linearly";
                return false;
            }
        }
        MetricContext z2ctx(make_free_abelian(2));
        SolveResult p2 = solve_min_diameter(metric_table_from_ball(z2ctx, Rat(2)), 2, Rat(2));
        SolveResult p3 = solve_min_diameter(metric_table_from_ball(z2ctx, Rat(3)), 2, Rat(2));
        if (!p2.exact || !p3.exact) {
            detail = "plane instances did not solve exactly";
            return false;
        }
        if (!(p2.r_star < p3.r_star)) {
            detail = "R*(N=3) is not strictly above R*(N=2) on the plane";
            return false;
        }
        return true;
    });

    // 6. Abelian rank machinery against the rational-elimination oracle.
    criterion(6, "abelian ranks, torsion and exact sequences", 30.0, [](std::string& detail) {
        oracle::Rng rng(60606);
        for (int trial = 0; trial < 200; ++trial) {
            int gens = rng.range(1, 6), rels = rng.range(0, 6);
            IntegerMatrix rel(rels, gens);
            for (int r = 0; r < rels; ++r)
                for (int c = 0; c < gens; ++c) rel.at(r, c) = rng.range(-9, 9);
            GroupSpec g = make_presented_abelian(gens, rel);
            if (rank_and_torsion(std::get<PresentedAbelian>(g.v)).rank !=
                gens - oracle::gauss_rank(rel)) {
                detail = "rank mismatch vs rational elimination";
                return false;
            }
        }
        if (asdim_abelian(make_finite_cyclic(6)) != 0) {
            detail = "asdim Z/6 != 0";
            return false;
        }
        GroupSpec z2z4 = make_presented_abelian(3, IntegerMatrix(1, 3, {Int(0), Int(0), Int(4)}));
        if (asdim_abelian(z2z4) != 2) {
            detail = "asdim Z^2+Z/4 != 2";
            return false;
        }
        // 100 exact sequences from random unimodular shears.
        oracle::Rng rng2(60607);
        int built = 0;
        while (built < 100) {
            int p = rng2.range(0, 3), q = rng2.range(0, 3);
            int n = p + q;
            if (n == 0) continue;
            IntegerMatrix w = IntegerMatrix::identity(n);
            for (int ops = 0; ops < 6; ++ops) {
                int i = rng2.below(n), j = rng2.below(n);
                if (i == j) continue;
                Int f = rng2.range(-3, 3);
                for (int c = 0; c < n; ++c) w.at(i, c) += f * w.at(j, c);
            }
            std::vector<GroupElement> images;
            for (int c = 0; c < n; ++c) {
                std::vector<Int> img(q);
                for (int r = 0; r < q; ++r) img[r] = w.at(p + r, c);
                images.push_back(GroupElement{std::move(img)});
            }
            SESAdditivity s = ses_additivity_check(
                make_homomorphism(make_free_abelian(n), make_free_abelian(q), images));
            if (!s.additive || s.rank_b != p || s.rank_c != q) {
                detail = "SES additivity failed";
                return false;
            }
            ++built;
        }
        return true;
    });

    // 7. Hirsch-length formulas: Heisenberg, the lamplighter, and Z^4.
    criterion(7, "Hirsch length and dimension bounds", 1.0, [](std::string& detail) {
        GroupSpec center = make_presented_abelian(1, IntegerMatrix(0, 1));
        GroupSpec abelianization = make_presented_abelian(2, IntegerMatrix(0, 2));
        SeriesSpec heis = make_series("heis",
                                      {QuotientSpec{std::get<PresentedAbelian>(center.v)},
                                       QuotientSpec{std::get<PresentedAbelian>(abelianization.v)}},
                                      true);
        if (!(hirsch_length(heis) == Dim(3))) {
            detail = "h(Heisenberg) != 3";
            return false;
        }
        BoundInterval hb = asdim_bounds(heis);
        if (!(hb.lower == 3 && hb.upper == Dim(3)) || !trace_replays(hb.trace)) {
            detail = "Heisenberg bounds are not [3,3]";
            return false;
        }
        auto lamp = [&](bool witness) {
            std::optional<SeriesWitness> w;
            if (witness) w = SeriesWitness{Int(1), "the Z factor embeds"};
            return make_series("lamp",
                               {QuotientSpec{make_declared_rank(Dim(0), true, "torsion base")},
                                QuotientSpec{std::get<PresentedAbelian>(center.v)}},
                               false, w);
        };
        if (!(hirsch_length(lamp(false)) == Dim(1))) {
            detail = "h(lamplighter) != 1";
            return false;
        }
        BoundInterval l0 = asdim_bounds(lamp(false));
        BoundInterval l1 = asdim_bounds(lamp(true));
        if (!(l0.lower == 0 && l0.upper == Dim(1))) {
            detail = "lamplighter without witness is not [0,1]";
            return false;
        }
        if (!(l1.lower == 1 && l1.upper == Dim(1))) {
            detail = "lamplighter with witness is not [1,1]";
            return false;
        }
        GroupSpec z4 = make_presented_abelian(4, IntegerMatrix(0, 4));
        BoundInterval b4 = asdim_bounds(
            make_series("z4", {QuotientSpec{std::get<PresentedAbelian>(z4.v)}}, true));
        if (!(b4.lower == 4 && b4.upper == Dim(4))) {
            detail = "Z^4 bounds are not [4,4]";
            return false;
        }
        return true;
    });

    // 8. Smith normal form postconditions, rechecked exactly and externally.
    criterion(8, "Smith normal form postconditions", 30.0, [](std::string& detail) {
        oracle::Rng rng(80808);
        std::vector<IntegerMatrix> matrices;
        matrices.push_back(IntegerMatrix(2, 2, {Int(2), Int(4), Int(6), Int(8)}));
        matrices.push_back(IntegerMatrix(2, 3));
        matrices.push_back(IntegerMatrix::identity(3));
        for (int trial = 0; trial < 200; ++trial) {
            int rows = rng.range(1, 6), cols = rng.range(1, 6);
            IntegerMatrix m(rows, cols);
            for (int r = 0; r < rows; ++r)
                for (int c = 0; c < cols; ++c) m.at(r, c) = rng.range(-50, 50);
            matrices.push_back(std::move(m));
        }
        for (const auto& a : matrices) {
            SNFResult s = smith_normal_form(a);
            if (!(multiply(multiply(s.u, a), s.v) == s.d)) {
                detail = "U*A*V != D";
                return false;
            }
            Int du = determinant(s.u), dv = determinant(s.v);
            if (!((du == 1 || du == -1) && (dv == 1 || dv == -1))) {
                detail = "transforms are not unimodular";
                return false;
            }
            auto diag = s.diagonal();
            for (std::size_t i = 0; i + 1 < diag.size(); ++i) {
                if (diag[i] < 0 || (diag[i] == 0 && diag[i + 1] != 0) ||
                    (diag[i] != 0 && diag[i + 1] % diag[i] != 0)) {
                    detail = "divisibility chain broken";
                    return false;
                }
            }
        }
        return true;
    });

    // 9. Determinism: every corpus invocation is byte-identical across runs
    //    and across environment changes.
    criterion(9, "CLI determinism across runs", 120.0, [&cli](std::string& detail) {
        if (cli.empty()) {
            detail = "no ccg binary path given";
            return false;
        }
        std::string dir =
            (std::filesystem::temp_directory_path() / "ccg_acceptance_corpus").string();
        auto invocations = corpus::materialize(dir);
        for (const auto& inv : invocations) {
            corpus::RunResult a = corpus::run_command(cli + " " + inv.args);
            corpus::RunResult b = corpus::run_command(cli + " " + inv.args);
            corpus::RunResult c =
                corpus::run_command("NO_COLOR=1 OMP_NUM_THREADS=2 " + cli + " " + inv.args);
            if (a.exit_code != inv.expected_exit) {
                detail = inv.name + ": unexpected exit code " + std::to_string(a.exit_code);
                return false;
            }
            if (a.out != b.out || a.out != c.out || a.exit_code != b.exit_code ||
                a.exit_code != c.exit_code) {
                detail = inv.name + ": output differs across runs";
                return false;
            }
        }
        return true;
    });

    if (g_failures == 0) {
        std::cout << "acceptance: all criteria passed\n";
        return 0;
    }
    std::cout << "acceptance: " << g_failures << " criteria failed\n";
    return 1;
}
