#include "chebgap/comb.hpp"
#include "chebgap/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace chebgap;
using doctest::Approx;

TEST_CASE("comb parameters") {
    auto estar = solve_equilibrium(make_set({{-1, -0.6}, {0.6, 1}}));
    auto c = comb_parameters(estar);
    REQUIRE(c.omegas.size() == 1);
    CHECK(c.omegas[0] == Approx(0.5).epsilon(1e-12));
    CHECK(c.heights[0] == Approx(std::log(2.0)).epsilon(1e-10));

    CHECK(comb_parameters(solve_equilibrium(make_set({{-1, 1}}))).omegas.empty());

    auto asym = solve_equilibrium(make_set({{-1, 0}, {0.5, 1}}));
    auto a = comb_parameters(asym);
    CHECK(a.omegas[0] == Approx(0.58483359292275889478).epsilon(1e-10));
    CHECK(a.heights[0] == Approx(pw_sum(asym)).epsilon(1e-14));

    auto three = solve_equilibrium(make_set({{-1, -0.5}, {-0.2, 0.3}, {0.7, 1.4}}));
    auto t = comb_parameters(three);
    REQUIRE(t.omegas.size() == 2);
    CHECK(0.0 < t.omegas[0]);
    CHECK(t.omegas[0] < t.omegas[1]);
    CHECK(t.omegas[1] < 1.0);
    CHECK(t.heights[0] + t.heights[1] == Approx(pw_sum(three)).epsilon(1e-14));
}

TEST_CASE("comb parameters are affine invariants") {
    auto base = comb_parameters(solve_equilibrium(make_set({{-1, -0.5}, {-0.2, 0.3}, {0.7, 1.4}})));
    // x -> 3x + 7 and x -> (x + 1) / 2.4 (hull onto [0, 1])
    auto moved = comb_parameters(
        solve_equilibrium(make_set({{4, 5.5}, {6.4, 7.9}, {9.1, 11.2}})));
    auto unit = comb_parameters(solve_equilibrium(
        make_set({{0, 0.5 / 2.4}, {0.8 / 2.4, 1.3 / 2.4}, {1.7 / 2.4, 1}})));
    for (std::size_t k = 0; k < 2; ++k) {
        CHECK(moved.omegas[k] == Approx(base.omegas[k]).epsilon(1e-10));
        CHECK(moved.heights[k] == Approx(base.heights[k]).epsilon(1e-10));
        CHECK(unit.omegas[k] == Approx(base.omegas[k]).epsilon(1e-10));
        CHECK(unit.heights[k] == Approx(base.heights[k]).epsilon(1e-10));
    }
}

TEST_CASE("canonical generator scan") {
    auto estar = solve_equilibrium(make_set({{-1, -0.6}, {0.6, 1}}));
    auto s = canonical_generator_scan(estar, 100);
    CHECK(s.relation_found);
    REQUIRE(s.coefficients.size() == 1);
    CHECK(s.coefficients[0] == 2);
    CHECK(s.integer == 1);
    CHECK(s.verdict == "relation found: 2*rho(e_1) = 1 (not a canonical generator)");

    auto seg = canonical_generator_scan(solve_equilibrium(make_set({{-1, 1}})), 10);
    CHECK_FALSE(seg.relation_found);
    CHECK(seg.verdict.find("trivially canonical") == 0);

    auto golden = solve_equilibrium(make_set({{-1, -0.2}, {0.77312500502713617221, 1}}));
    auto g = canonical_generator_scan(golden, 1000);
    CHECK_FALSE(g.relation_found);
    CHECK(g.searched_bound == 1000);
    CHECK(g.verdict == "no relation found up to q_max = 1000 (consistent with a canonical generator)");

    // symmetry forces 2 rho(e_1) + rho(e_2) = 1
    auto sym = solve_equilibrium(make_set({{-1, -0.55}, {-0.2, 0.2}, {0.55, 1}}));
    auto r = canonical_generator_scan(sym, 20);
    CHECK(r.relation_found);
    CHECK(r.coefficients == std::vector<long long>{2, 1});
    CHECK(r.integer == 1);

    auto three = solve_equilibrium(make_set({{-1, -0.5}, {-0.2, 0.3}, {0.7, 1.4}}));
    auto t = canonical_generator_scan(three, 10000);
    CHECK(t.searched_bound < 10000);
    CHECK(t.searched_bound > 1000);

    CHECK_THROWS_AS(canonical_generator_scan(estar, 0), ValidationError);
    CHECK_THROWS_AS(canonical_generator_scan(estar, 10001), ValidationError);
}
