#include "chebgap/asymptotics.hpp"
#include "chebgap/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace chebgap;
using doctest::Approx;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEstarG2 = 1.5151077850822031336;

const auto kSeg = make_set({{-1, 1}});
const auto kEstar = make_set({{-1, -0.6}, {0.6, 1}});
const auto kGolden = make_set({{-1, -0.2}, {0.77312500502713617221, 1}});

double zeta(double x) { return x + std::sqrt(x * x - 1.0); }

} // namespace

TEST_CASE("Widom factors") {
    auto seg = solve_equilibrium(kSeg);
    for (std::size_t n : {1u, 4u, 13u, 30u})
        CHECK(std::abs(widom_factor(seg, chebyshev(kSeg, seg, n)) - 2.0) < 1e-9);

    auto eq = solve_equilibrium(kEstar);
    CHECK(widom_factor(eq, chebyshev(kEstar, eq, 2)) == Approx(2.0).epsilon(1e-10));
    CHECK(widom_factor(eq, chebyshev(kEstar, eq, 1)) == Approx(2.5).epsilon(1e-10));
    CHECK(2.0 * std::exp(pw_sum(eq)) == Approx(4.0).epsilon(1e-9));
}

TEST_CASE("h_n representation") {
    auto eq = solve_equilibrium(kEstar);
    auto s1 = chebyshev(kEstar, eq, 1);
    auto h = h_n_check(eq, s1, kInf);
    CHECK(std::abs(h.left - std::log(1.25)) < 1e-10);
    CHECK(std::abs(h.right - std::log(1.25)) < 1e-9);
    // exp(n h_n(inf)) = (C(e_n) / C)^n
    CHECK(std::exp(h.left) == Approx(capacity_en(s1) / capacity(eq)).epsilon(1e-12));

    for (std::size_t n : {1u, 3u, 6u, 11u}) {
        auto sol = chebyshev(kEstar, eq, n);
        for (double z : h_test_points(eq, sol))
            CHECK(h_n_check(eq, sol, z).residual < 1e-9);
    }
    // e_2 = E*: both sides vanish
    auto s2 = chebyshev(kEstar, eq, 2);
    CHECK(std::abs(h_n_check(eq, s2, 3.0).left) < 1e-9);
    CHECK(std::abs(h_n_check(eq, s2, 3.0).right) < 1e-9);

    auto seg = solve_equilibrium(kSeg);
    auto c = h_n_check(seg, chebyshev(kSeg, seg, 5), 2.0);
    CHECK(std::abs(c.left) < 1e-12);
    CHECK(c.right == 0.0);

    CHECK_THROWS_AS(h_n_check(eq, s1, 0.5), ValidationError);
}

TEST_CASE("L_n modulus") {
    auto seg = solve_equilibrium(kSeg);
    auto s3 = chebyshev(kSeg, seg, 3);
    CHECK(l_n_modulus(seg, s3, 2.0) == Approx(1.0 + std::pow(zeta(2.0), -6)).epsilon(1e-10));

    auto eq = solve_equilibrium(kEstar);
    auto s2 = chebyshev(kEstar, eq, 2);
    const double direct = 3.32 * std::exp(-2.0 * kEstarG2) / 0.16;
    CHECK(l_n_modulus(eq, s2, 2.0) == Approx(direct).epsilon(1e-9));
    CHECK(l_n_modulus(eq, s2, 2.0) == Approx(1.0 + std::exp(-4.0 * kEstarG2)).epsilon(1e-9));
    CHECK(l_n_modulus(eq, chebyshev(kEstar, eq, 1), 1e8) == Approx(1.0).epsilon(1e-7));
}

TEST_CASE("Szego-Widom deviation") {
    auto seg = solve_equilibrium(kSeg);
    auto s5 = chebyshev(kSeg, seg, 5);
    const double expect = std::pow(zeta(2.0), -10);
    CHECK(szego_widom_deviation(seg, s5, {2.0, 3.0}) == Approx(expect).epsilon(1e-6));

    auto eq = solve_equilibrium(kEstar);
    auto s2 = chebyshev(kEstar, eq, 2);
    const std::vector<double> grid{-0.3, 0.1, 1.5, 3.0};
    double worst = 0.0;
    for (double x : grid)
        worst = std::max(worst, std::exp(-4.0 * green_at(eq, x)));
    CHECK(szego_widom_deviation(eq, s2, grid) == Approx(worst).epsilon(1e-8));

    std::size_t skipped = 0;
    auto s1 = chebyshev(kEstar, eq, 1);
    CHECK(szego_widom_deviation(eq, s1, {0.0, 0.3, 0.8}, &skipped) > 0.0);
    CHECK(skipped == 2); // the gap zero and a point on the set

    const auto g = default_grid(kEstar);
    REQUIRE(g.size() == 8);
    CHECK(g[0] == Approx(-0.45));
    CHECK(g[7] == Approx(9.0));
}

TEST_CASE("ratio and period-2 structure") {
    auto eq = solve_equilibrium(kEstar);
    auto s1 = chebyshev(kEstar, eq, 1);
    auto w1 = widom_from_gap_set(eq, GapSet::make(kEstar, gap_zeros(s1, kEstar)));
    CHECK(w1.f_norm == Approx(2.0).epsilon(1e-10));
    CHECK(ratio_check(eq, s1, w1) == Approx(1.25).epsilon(1e-10));

    auto rep = convergence_report(eq, 1, 24);
    REQUIRE(rep.rows.size() == 24);
    double prev = 0.0;
    for (const auto& r : rep.rows) {
        CHECK(r.cert_pass);
        CHECK(r.h_residual < 1e-9);
        CHECK(r.mass_defect < 1e-12);
        CHECK(r.ratio <= 2.0 + 1e-9);
        if (r.n % 2 == 0) {
            CHECK(r.ratio == Approx(2.0).epsilon(1e-8));
            CHECK(r.f_norm == Approx(1.0).epsilon(1e-10));
        } else {
            CHECK(r.f_norm == Approx(2.0).epsilon(1e-10));
            CHECK(r.ratio >= prev - 1e-12);
            prev = r.ratio;
        }
    }
    CHECK(rep.trend.log_slope < 0.0);
    CHECK(rep.trend.last_median < 0.01 * rep.trend.first_median);

    auto periods = almost_period_probe(rep.rows, 1e-9);
    REQUIRE(!periods.empty());
    CHECK(periods.front() == 2);
    for (auto p : periods)
        CHECK(p % 2 == 0);
    CHECK_THROWS_AS(almost_period_probe({rep.rows.begin(), rep.rows.begin() + 10}, 1e-6),
                    ValidationError);
}

TEST_CASE("golden-measure set") {
    auto eq = solve_equilibrium(kGolden);
    CHECK(eq.band_measures()[0] == Approx((std::sqrt(5.0) - 1.0) / 2.0).epsilon(1e-12));
    auto rep = convergence_report(eq, 1, 30);
    for (const auto& r : rep.rows) {
        // the minimizer for the character of B^n keeps the ratio below 2;
        // the gap-zero product of T_n alone does not (n = 5 overshoots)
        CHECK(r.ratio <= 2.0 + 1e-8);
        CHECK(r.ratio > (r.n < 3 ? 1.0 : 1.9));
    }
    CHECK(rep.rows[4].widom_factor / rep.rows[4].f_norm_gap_zeros > 2.0);
    CHECK(almost_period_probe(rep.rows, 1e-6).empty());
    auto loose = almost_period_probe(rep.rows, 0.15);
    CHECK(!loose.empty());
    CHECK(trend_statistics(rep.rows, 5, 5).log_slope < 0.0);
}

TEST_CASE("cross validation of e_n") {
    auto eq = solve_equilibrium(kEstar);
    for (std::size_t n = 1; n <= 8; ++n) {
        auto cv = cross_validate_en(chebyshev(kEstar, eq, n));
        CHECK(cv.capacity_diff < 1e-6);
        CHECK(cv.green_diff < 1e-6);
        CHECK(cv.points.size() == 10);
    }
    auto cv1 = cross_validate_en(chebyshev(kEstar, eq, 1));
    CHECK(cv1.capacity_en == Approx(0.5).epsilon(1e-12));
    auto seg = cross_validate_en(chebyshev(kSeg, 4));
    CHECK(seg.capacity_equilibrium == Approx(0.5).epsilon(1e-10));
    CHECK_THROWS_AS(cross_validate_en(chebyshev(kEstar, eq, 9)), ValidationError);
}

TEST_CASE("bound violation is an invariant failure") {
    auto eq = solve_equilibrium(kEstar);
    auto sol = chebyshev(kEstar, eq, 3);
    // a polynomial that is far from minimal on the set
    sol.log_t_n += 2.0;
    CHECK_THROWS_AS(widom_factor(eq, sol), InvariantError);
    sol.log_t_n -= 4.0;
    CHECK_THROWS_AS(widom_factor(eq, sol), InvariantError);
}
