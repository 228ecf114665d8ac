#include <catch2/catch_amalgamated.hpp>

#include "ccg/metric.hpp"
#include "oracles.hpp"

using namespace ccg;

namespace {

GroupElement zval(long v) { return GroupElement{std::vector<Int>{Int(v)}}; }

MetricContext z_unit() { return MetricContext(make_free_abelian(1)); }

MetricContext z_13() {
    GroupSpec z = make_free_abelian(1);
    return MetricContext(z, make_weight_function(z, {{zval(1), Rat(1)}, {zval(3), Rat(1)}}));
}

MetricContext rationals_ctx(int k) { return MetricContext(make_rationals_truncated(k)); }

}  // namespace

TEST_CASE("norm examples", "[metric]") {
    auto ctx = z_unit();
    REQUIRE(*ctx.norm(zval(7), Rat(100)) == 7);
    REQUIRE(*ctx.norm(zval(0), Rat(100)) == 0);
    REQUIRE(!ctx.norm(zval(101), Rat(100)).has_value());

    auto ctx13 = z_13();
    REQUIRE(*ctx13.norm(zval(7), Rat(100)) == 3);  // 7 = 3 + 3 + 1

    GroupSpec q3 = make_rationals_truncated(3);
    MetricContext qctx(q3, make_weight_function(q3, {{GroupElement{Rat(1)}, Rat(1)},
                                                     {GroupElement{Rat(1, 2)}, Rat(2)},
                                                     {GroupElement{Rat(1, 6)}, Rat(3)}}));
    REQUIRE(*qctx.norm(GroupElement{Rat(5, 6)}, Rat(10)) == 4);  // 1 - 1/6
}

TEST_CASE("rationals norm agrees with a relaxation oracle", "[metric]") {
    GroupSpec q3 = make_rationals_truncated(3);
    MetricContext qctx(q3);
    std::vector<std::pair<GroupElement, Rat>> gens;
    for (const auto& e : qctx.weights().entries) gens.emplace_back(e.generator, e.weight);
    // Vertices p/6 for |p| <= 48 cover every optimal factorization of cost <= 8.
    std::vector<GroupElement> verts;
    for (long p = -48; p <= 48; ++p) verts.push_back(GroupElement{Rat(p, 6)});
    auto expect = oracle::bellman_ford_norms(q3, gens, verts);
    for (const auto& [x, n] : qctx.ball_with_norms(Rat(8))) {
        REQUIRE(expect.count(x));
        REQUIRE(expect.at(x) == n);
    }
}

TEST_CASE("distance examples and left invariance", "[metric]") {
    auto ctx = z_unit();
    REQUIRE(*ctx.distance(zval(3), zval(10), Rat(100)) == 7);
    REQUIRE(*ctx.distance(zval(3), zval(3), Rat(100)) == 0);

    MetricContext hctx(make_heisenberg());
    GroupElement e = identity(hctx.group());
    GroupElement target{std::array<Int, 3>{Int(1), Int(1), Int(1)}};
    REQUIRE(*hctx.distance(e, target, Rat(5)) == 2);  // a * b

    oracle::Rng rng(31);
    const GroupSpec& h = hctx.group();
    auto ball = hctx.ball(Rat(4));
    for (int i = 0; i < 1000; ++i) {
        const auto& g = ball[rng.below(static_cast<int>(ball.size()))];
        const auto& x = ball[rng.below(static_cast<int>(ball.size()))];
        const auto& y = ball[rng.below(static_cast<int>(ball.size()))];
        auto d1 = hctx.distance(x, y, Rat(16));
        auto d2 = hctx.distance(multiply(h, g, x), multiply(h, g, y), Rat(16));
        REQUIRE(d1.has_value());
        REQUIRE(d2.has_value());
        REQUIRE(*d1 == *d2);
    }
}

TEST_CASE("ball examples", "[metric]") {
    auto ctx = z_unit();
    auto b2 = ctx.ball(Rat(2));
    REQUIRE(b2.size() == 5);
    std::vector<std::string> printed;
    for (const auto& e : b2) printed.push_back(element_str(ctx.group(), e));
    REQUIRE(printed == std::vector<std::string>{"0", "-1", "1", "-2", "2"});

    MetricContext hctx(make_heisenberg());
    REQUIRE(hctx.ball(Rat(2)).size() == 17);  // 1 + 4 + 12 distinct length-2 products
    REQUIRE(hctx.ball(Rat(0)).size() == 1);
    REQUIRE(element_equal(hctx.ball(Rat(0))[0], identity(hctx.group())));
}

TEST_CASE("ball cardinalities and nesting on Z", "[metric]") {
    auto ctx = z_unit();
    for (const Rat& r : {Rat(0), Rat(1, 2), Rat(1), Rat(3, 2), Rat(7), Rat(15, 2)}) {
        Int expected = 2 * rat_floor(r) + 1;
        REQUIRE(Int(ctx.ball(r).size()) == expected);
    }
    auto b3 = ctx.ball(Rat(3));
    auto b5 = ctx.ball(Rat(5));
    std::map<GroupElement, bool, ElementLess> in5;
    for (const auto& e : b5) in5[e] = true;
    for (const auto& e : b3) REQUIRE(in5.count(e));
}

TEST_CASE("norm axioms on sampled elements", "[metric]") {
    std::vector<MetricContext> contexts;
    contexts.push_back(z_unit());
    contexts.push_back(z_13());
    contexts.push_back(MetricContext(make_heisenberg()));
    contexts.push_back(MetricContext(make_finite_cyclic(7)));
    contexts.push_back(rationals_ctx(3));
    contexts.push_back(MetricContext(make_free(2)));

    for (auto& ctx : contexts) {
        const GroupSpec& g = ctx.group();
        auto ball = ctx.ball_with_norms(Rat(5));
        for (const auto& [x, nx] : ball) {
            REQUIRE((nx == 0) == element_equal(x, identity(g)));
            REQUIRE(*ctx.norm(invert(g, x), Rat(20)) == nx);
        }
        oracle::Rng rng(17);
        for (int i = 0; i < 300; ++i) {
            const auto& x = ball[rng.below(static_cast<int>(ball.size()))].first;
            const auto& y = ball[rng.below(static_cast<int>(ball.size()))].first;
            Rat nx = *ctx.norm(x, Rat(20)), ny = *ctx.norm(y, Rat(20));
            Rat nxy = *ctx.norm(multiply(g, x, y), Rat(40));
            REQUIRE(nxy <= nx + ny);
        }
    }
}

TEST_CASE("unit-weight norms equal BFS depth over the radius-8 ball", "[metric]") {
    struct Case {
        MetricContext ctx;
        int depth;
    };
    std::vector<Case> cases;
    cases.push_back({z_unit(), 8});
    cases.push_back({z_13(), 8});
    cases.push_back({MetricContext(make_heisenberg()), 8});
    cases.push_back({MetricContext(make_free(2)), 8});
    cases.push_back({MetricContext(make_finite_cyclic(7)), 8});
    cases.push_back({MetricContext(make_free_abelian(2)), 8});

    for (auto& c : cases) {
        std::vector<GroupElement> gens;
        for (const auto& e : c.ctx.weights().entries) {
            REQUIRE(e.weight == 1);
            gens.push_back(e.generator);
        }
        auto depths = oracle::bfs_depths(c.ctx.group(), gens, c.depth);
        auto ball = c.ctx.ball_with_norms(Rat(c.depth));
        std::size_t within = 0;
        for (const auto& [x, d] : depths)
            if (d <= c.depth) ++within;
        REQUIRE(ball.size() == within);
        for (const auto& [x, n] : ball) REQUIRE(Rat(depths.at(x)) == n);
    }
}

TEST_CASE("truncation stability from depth K to K+1", "[metric]") {
    for (int k : {2, 3}) {
        MetricContext a = rationals_ctx(k);
        MetricContext b = rationals_ctx(k + 1);
        for (const auto& [x, n] : a.ball_with_norms(Rat(4))) {
            GroupElement lifted{std::get<Rat>(x.v)};
            REQUIRE(b.norm(lifted, Rat(4)).has_value());
            REQUIRE(*b.norm(lifted, Rat(4)) == n);
        }
    }
}

TEST_CASE("shallow truncations are rejected for deep balls", "[metric]") {
    GroupSpec q3 = make_rationals_truncated(3);
    MetricContext shallow(q3, make_weight_function(q3, {{GroupElement{Rat(1)}, Rat(1)},
                                                        {GroupElement{Rat(1, 2)}, Rat(2)}}));
    REQUIRE_THROWS_AS(shallow.ball(Rat(4)), truncation_error);
    REQUIRE(shallow.ball(Rat(2)).size() > 0);  // missing generator has weight 3 >= 2

    // Weights must increase strictly in the truncation index.
    REQUIRE_THROWS_AS(make_weight_function(q3, {{GroupElement{Rat(1)}, Rat(3)},
                                                {GroupElement{Rat(1, 2)}, Rat(2)},
                                                {GroupElement{Rat(1, 6)}, Rat(3)}}),
                      error);
    // Entries must sit on the canonical generators.
    REQUIRE_THROWS_AS(make_weight_function(q3, {{GroupElement{Rat(5, 6)}, Rat(1)}}), error);
}

TEST_CASE("weight functions symmetrize and validate", "[metric]") {
    GroupSpec z = make_free_abelian(1);
    WeightFunction wf = make_weight_function(z, {{zval(1), Rat(1)}, {zval(3), Rat(1)}});
    REQUIRE(wf.symmetrized);
    REQUIRE(wf.entries.size() == 4);  // +-1, +-3
    REQUIRE_THROWS_AS(make_weight_function(z, {{zval(1), Rat(0)}}), error);
    REQUIRE_THROWS_AS(make_weight_function(z, {{zval(0), Rat(1)}}), error);
    REQUIRE_THROWS_AS(
        make_weight_function(z, {{zval(1), Rat(1)}, {zval(-1), Rat(2)}}), error);
}

TEST_CASE("rho profile example on two Z metrics", "[metric]") {
    auto ctx_d = z_unit();
    auto ctx_dp = z_13();
    auto rows = rho_profile(ctx_d, ctx_dp, {Rat(0), Rat(3)}, Rat(30));

    REQUIRE(rows[0].t == 0);
    REQUIRE(rows[0].rho1.has_value());
    REQUIRE(*rows[0].rho1 == 0);  // z = e lies outside the empty open ball
    REQUIRE(rows[0].rho1_certified);

    REQUIRE(rows[1].t == 3);
    REQUIRE(*rows[1].rho1 == 1);  // z = 3 has d' = 1
    REQUIRE(rows[1].rho1_certified);
    REQUIRE(rows[1].rho2 == 2);  // z = 2 has d' = 2
}

TEST_CASE("rho profile of identical contexts degenerates", "[metric]") {
    auto a = z_unit();
    auto b = z_unit();
    auto rows = rho_profile(a, b, {Rat(1), Rat(2), Rat(5)}, Rat(20));
    for (const auto& r : rows) {
        REQUIRE(*r.rho1 == r.t);  // min over the closed complement of the open ball
        REQUIRE(r.rho2 == r.t);   // max norm in the closed ball
        REQUIRE(r.rho1_certified);
    }
}

TEST_CASE("rho profile is monotone and sandwiched", "[metric]") {
    auto ctx_d = z_unit();
    auto ctx_dp = z_13();
    std::vector<Rat> ts;
    for (int t = 0; t <= 12; ++t) ts.push_back(Rat(t));
    auto rows = rho_profile(ctx_d, ctx_dp, ts, Rat(40));
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        REQUIRE(rows[i].rho1.has_value());
        REQUIRE(*rows[i].rho1 <= *rows[i + 1].rho1);
        REQUIRE(rows[i].rho2 <= rows[i + 1].rho2);
    }
    // On Z the sphere of every integer radius is nonempty, so rho1 <= rho2.
    for (const auto& r : rows) REQUIRE(*r.rho1 <= r.rho2);
}

TEST_CASE("coarse sandwich verification", "[metric]") {
    SECTION("two metrics on Z") {
        auto rep = check_coarse_sandwich(z_unit(), z_13(), Rat(20));
        REQUIRE(rep.violations.empty());
        REQUIRE(rep.rho1_all_certified);
        REQUIRE(rep.pairs_checked == 41u * 41u);
    }
    SECTION("subgroup 5Z inside Z") {
        GroupSpec sub = make_free_abelian(1);
        GroupSpec z = make_free_abelian(1);
        Homomorphism embed = make_homomorphism(sub, z, {zval(5)});
        auto rep = check_coarse_sandwich(MetricContext(sub), z_unit(), Rat(6), embed);
        REQUIRE(rep.violations.empty());
        REQUIRE(rep.rho1_all_certified);
    }
    SECTION("trivial radius") {
        auto rep = check_coarse_sandwich(z_unit(), z_13(), Rat(0));
        REQUIRE(rep.violations.empty());
        REQUIRE(rep.distinct_offsets == 1);
    }
}

TEST_CASE("r-stabilizers", "[metric]") {
    GroupSpec z2 = make_free_abelian(2);
    GroupSpec z = make_free_abelian(1);
    MetricContext ctx2(z2);
    MetricContext ctx1 = z_unit();

    SECTION("projection Z^2 -> Z leaves the kernel unconstrained") {
        Homomorphism proj = make_homomorphism(
            z2, z, {zval(1), GroupElement{std::vector<Int>{Int(0)}}});
        auto got = r_stabilizer(proj, ctx1, zval(0), Rat(3), ctx2, Rat(5));
        std::size_t expected = 0;
        for (const auto& [e, n] : ctx2.ball_with_norms(Rat(5))) {
            const auto& v = std::get<std::vector<Int>>(e.v);
            Int a = v[0] < 0 ? Int(-v[0]) : v[0];
            if (a <= 3) ++expected;
        }
        REQUIRE(got.size() == expected);
        for (const auto& e : got) {
            const auto& v = std::get<std::vector<Int>>(e.v);
            REQUIRE((v[0] <= 3 && v[0] >= -3));
        }
    }
    SECTION("identity action on Z") {
        Homomorphism id = identity_homomorphism(z);
        auto got = r_stabilizer(id, ctx1, zval(0), Rat(2), ctx1, Rat(10));
        REQUIRE(got.size() == 5);  // -2..2
    }
    SECTION("Heisenberg abelianization action") {
        GroupSpec h = make_heisenberg();
        MetricContext hctx(h);
        Homomorphism abel = make_homomorphism(
            h, z2, {GroupElement{std::vector<Int>{Int(1), Int(0)}},
                    GroupElement{std::vector<Int>{Int(0), Int(1)}}});
        auto got = r_stabilizer(abel, ctx2, identity(z2), Rat(1), hctx, Rat(3));
        std::size_t expected = 0;
        for (const auto& [e, n] : hctx.ball_with_norms(Rat(3))) {
            const auto& t = std::get<std::array<Int, 3>>(e.v);
            Int a = t[0] < 0 ? Int(-t[0]) : t[0];
            Int b = t[1] < 0 ? Int(-t[1]) : t[1];
            if (a + b <= 1) ++expected;
        }
        REQUIRE(got.size() == expected);
    }
}

TEST_CASE("cap preconditions", "[metric]") {
    auto ctx = z_unit();
    REQUIRE_THROWS_AS(ctx.norm(zval(1), Rat(0)), error);
    REQUIRE_THROWS_AS(ctx.norm(zval(1), Rat(-1)), error);
    REQUIRE_THROWS_AS(ctx.ball(Rat(-1)), error);
}
