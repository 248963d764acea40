#include "chebgap/asymptotics.hpp"

#include "chebgap/errors.hpp"
#include "chebgap/quadrature.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace chebgap {

namespace {

constexpr double kPi = std::numbers::pi;

double median(std::vector<double> v) {
    if (v.empty())
        return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// One band of e_n in angle form: x(theta) with T_n(x) = sign * t_n cos(theta),
// theta = 0 at the right end.
class BandAngle {
  public:
    BandAngle(const ChebyshevSolution& sol, const LevelBand& band, std::size_t k)
        : zs_(sol.poly.scaled_zeros()), k_(k), mid_(sol.poly.hull_mid()), h_(sol.poly.hull_half()) {
        const std::size_t n = zs_.size();
        inv_t_ = std::exp(-(sol.log_t_n - static_cast<double>(n) * std::log(h_)));
        sign_ = (n - 1 - k) % 2 ? -1.0 : 1.0;
        l_ = band.left_offset / h_;
        r_ = band.right_offset / h_;
        pl_ = p(l_);
        pr_ = p(r_);
    }

    // sign * That(z_k + d) / t_hat, increasing from about -1 to 1 on [l, r]
    double p(double d) const {
        double v = d * inv_t_;
        for (std::size_t j = 0; j < zs_.size(); ++j)
            if (j != k_)
                v *= (zs_[k_] - zs_[j]) + d;
        return sign_ * v;
    }

    double offset(double theta) const {
        const double c = std::cos(theta);
        if (c >= pr_)
            return r_;
        if (c <= pl_)
            return l_;
        std::uintmax_t iters = 200;
        auto f = [&](double d) { return p(d) - c; };
        const auto br = boost::math::tools::toms748_solve(
            f, l_, r_, pl_ - c, pr_ - c, boost::math::tools::eps_tolerance<double>(52), iters);
        return 0.5 * (br.first + br.second);
    }

    double x(double theta) const { return mid_ + h_ * (zs_[k_] + offset(theta)); }

    double theta_of(double x) const {
        const double d = (x - mid_) / h_ - zs_[k_];
        return std::acos(std::clamp(p(d), -1.0, 1.0));
    }

  private:
    const std::vector<double>& zs_;
    std::size_t k_;
    double mid_, h_;
    double inv_t_ = 1.0;
    double sign_ = 1.0;
    double l_ = 0.0, r_ = 0.0, pl_ = -1.0, pr_ = 1.0;
};

template <class G>
double gap_integral(const EquilibriumData& eq, const ChebyshevSolution& sol, G&& green,
                    double quad_tol) {
    const auto dec = bands(sol);
    const auto& set = eq.set();
    const double sliver = 1e-12 * set.hull().length();
    std::vector<double> ends;
    for (const auto& b : set.bands()) {
        ends.push_back(b.lo);
        ends.push_back(b.hi);
    }
    double total = 0.0;
    for (std::size_t k = 0; k < dec.bands.size(); ++k) {
        const auto& band = dec.bands[k];
        const BandAngle angle(sol, band, k);
        std::vector<double> cuts{0.0, kPi};
        for (double e : ends)
            if (band.lo() < e && e < band.hi())
                cuts.push_back(angle.theta_of(e));
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const double a = cuts[i], b = cuts[i + 1];
            if (!(b > a))
                continue;
            if (set.contains(angle.x(0.5 * (a + b))))
                continue; // G vanishes on the set
            // rounding slivers at ends of the set: O(sqrt width) angle times O(sqrt width) G
            const double xa = angle.x(a), xb = angle.x(b);
            const bool at_end = std::any_of(ends.begin(), ends.end(), [&](double e) {
                return std::abs(xa - e) < sliver && std::abs(xb - e) < sliver;
            });
            if (at_end)
                continue;
            auto f = [&](double th) { return green(angle.x(th)); };
            total += quad::endpoint_singular(f, a, b, quad_tol);
        }
    }
    return total / (kPi * static_cast<double>(sol.n));
}

} // namespace

double log_widom_factor(const EquilibriumData& eq, const ChebyshevSolution& sol) {
    return sol.log_t_n - static_cast<double>(sol.n) * eq.log_capacity();
}

double widom_factor(const EquilibriumData& eq, const ChebyshevSolution& sol, double tol) {
    const double w = std::exp(log_widom_factor(eq, sol));
    const double upper = 2.0 * std::exp(pw_sum(eq));
    if (w < 2.0 - tol)
        throw InvariantError("Widom factor " + std::to_string(w) + " below 2 at n = " +
                             std::to_string(sol.n));
    if (w > upper + tol)
        throw InvariantError("Widom factor " + std::to_string(w) + " above 2 exp(PW) = " +
                             std::to_string(upper) + " at n = " + std::to_string(sol.n));
    return w;
}

HnCheck h_n_check(const EquilibriumData& eq, const ChebyshevSolution& sol, double z,
                  double quad_tol) {
    HnCheck out;
    if (std::isinf(z)) {
        out.left = log_capacity_en(sol) - eq.log_capacity();
        out.right = gap_integral(eq, sol, [&](double x) { return eq.green_real(x); }, quad_tol);
    } else {
        for (const auto& b : bands(sol).merged())
            if (b.lo <= z && z <= b.hi)
                throw ValidationError("h_n test point lies on e_n");
        const GreenWithPole g(eq, z);
        out.left = eq.green_real(z) - green_n(sol, z);
        out.right = gap_integral(eq, sol, [&](double x) { return g(x); }, quad_tol);
    }
    out.residual = std::abs(out.left - out.right);
    return out;
}

double log_l_n_modulus(const EquilibriumData& eq, const ChebyshevSolution& sol, double x) {
    const double n = static_cast<double>(sol.n);
    return sol.poly.log_abs(x) - n * eq.green_real(x) - n * eq.log_capacity();
}

double l_n_modulus(const EquilibriumData& eq, const ChebyshevSolution& sol, double x) {
    return std::exp(log_l_n_modulus(eq, sol, x));
}

std::vector<double> default_grid(const RealFiniteGapSet& set) {
    std::vector<double> out;
    for (const auto& g : set.gaps())
        for (int i = 0; i < 4; ++i)
            out.push_back(g.lo + (2 * i + 1) / 8.0 * g.length());
    const auto hull = set.hull();
    for (double d : {0.5, 1.0, 2.0, 4.0})
        out.push_back(hull.hi + d * hull.length());
    return out;
}

double szego_widom_deviation(const EquilibriumData& eq, const ChebyshevSolution& sol,
                             const std::vector<double>& grid, std::size_t* skipped) {
    const auto gz = gap_zeros(sol, eq.set());
    const WidomMinimizer f(eq, GapSet::make(eq.set(), gz));
    std::size_t skip = 0;
    double worst = 0.0;
    for (double x : grid) {
        const bool near_zero = std::any_of(sol.zeros().begin(), sol.zeros().end(),
                                           [&](double z) { return std::abs(x - z) < 1e-6; });
        if (near_zero || eq.set().contains(x)) {
            ++skip;
            continue;
        }
        worst = std::max(worst, std::abs(l_n_modulus(eq, sol, x) - f.modulus(x)));
    }
    if (skipped)
        *skipped = skip;
    return worst;
}

WidomSolution widom_minimizer_n(const EquilibriumData& eq, const ChebyshevSolution& sol) {
    const auto seed = GapSet::make(eq.set(), gap_zeros(sol, eq.set()));
    return solve_character_match(eq, character_power(eq, static_cast<long long>(sol.n)), seed);
}

double ratio_check(const EquilibriumData& eq, const ChebyshevSolution& sol,
                   const WidomSolution& widom_sol) {
    return std::exp(log_widom_factor(eq, sol) - widom_sol.log_f_norm);
}

CrossValidation cross_validate_en(const ChebyshevSolution& sol, std::size_t max_n,
                                  std::size_t points) {
    if (sol.n > max_n)
        throw ValidationError("cross validation limited to n <= " + std::to_string(max_n));
    const auto en = bands(sol).as_set();
    const auto eq_n = solve_equilibrium(en);
    CrossValidation out;
    out.capacity_en = capacity_en(sol);
    out.capacity_equilibrium = capacity(eq_n);
    out.capacity_diff = std::abs(out.capacity_en - out.capacity_equilibrium);

    const auto hull = en.hull();
    const double len = hull.length();
    for (const auto& g : en.gaps())
        out.points.push_back(g.mid());
    for (double d : {0.05, 0.5, 2.0, 0.01, 1.0, 5.0, 0.2, 10.0, 0.1, 3.0})
        for (double x : {hull.hi + d * len, hull.lo - d * len})
            out.points.push_back(x);
    out.points.resize(std::min(points, out.points.size()));
    for (double x : out.points)
        out.green_diff = std::max(out.green_diff, std::abs(eq_n.green_real(x) - green_n(sol, x)));
    return out;
}

std::vector<std::size_t> almost_period_probe(const std::vector<DiagnosticsRow>& rows, double eps) {
    if (rows.size() < 20)
        throw ValidationError("almost-period probe needs at least 20 rows");
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].n != rows[i - 1].n + 1)
            throw ValidationError("almost-period probe needs consecutive n");
    std::vector<std::size_t> out;
    for (std::size_t p = 1; p <= rows.size() / 2; ++p) {
        double worst = 0.0;
        for (std::size_t i = 0; i + p < rows.size(); ++i)
            worst = std::max(worst, std::abs(rows[i + p].f_norm - rows[i].f_norm));
        if (worst < eps)
            out.push_back(p);
    }
    return out;
}

std::vector<double> h_test_points(const EquilibriumData& eq, const ChebyshevSolution& sol) {
    const auto hull = eq.set().hull();
    const double len = hull.length();
    std::vector<double> out{std::numeric_limits<double>::infinity(), hull.hi + 0.5 * len,
                            hull.lo - len, hull.hi + 2.0 * len};
    const auto en = bands(sol).merged();
    for (const auto& g : eq.set().gaps()) {
        for (int i : {3, 1, 5, 0, 7}) {
            const double x = g.lo + (2 * i + 1) / 16.0 * g.length();
            const double margin = 1e-3 * g.length();
            const bool clear = std::none_of(en.begin(), en.end(), [&](const Interval& b) {
                return b.lo - margin <= x && x <= b.hi + margin;
            });
            if (clear) {
                out.push_back(x);
                return out;
            }
        }
    }
    out.push_back(hull.lo - 3.0 * len);
    return out;
}

DiagnosticsRow diagnostics_row(const EquilibriumData& eq, const ChebyshevSolution& sol,
                               const DiagnosticsOptions& options) {
    DiagnosticsRow row;
    row.n = sol.n;
    row.t_n = sol.t_n;
    row.log_t_n = sol.log_t_n;
    row.widom_factor = widom_factor(eq, sol, options.bound_tol);
    const auto w = widom_minimizer_n(eq, sol);
    row.f_norm = w.f_norm;
    row.ratio = ratio_check(eq, sol, w);
    row.f_norm_gap_zeros =
        widom_from_gap_set(eq, GapSet::make(eq.set(), gap_zeros(sol, eq.set()))).f_norm;
    const auto grid = options.grid ? *options.grid : default_grid(eq.set());
    row.sup_deviation = szego_widom_deviation(eq, sol, grid);
    for (double z : h_test_points(eq, sol))
        row.h_residual = std::max(row.h_residual, h_n_check(eq, sol, z, options.quad_tol).residual);
    row.cert_pass = alternation_certificate(sol, eq.set()).pass;
    const double inv_n = 1.0 / static_cast<double>(sol.n);
    for (const auto& b : bands(sol, options.mass_tol).bands)
        row.mass_defect = std::max(row.mass_defect, std::abs(b.mass - inv_n));
    return row;
}

TrendStats trend_statistics(const std::vector<DiagnosticsRow>& rows, std::size_t window,
                            std::size_t n_min) {
    TrendStats t;
    t.window = window;
    std::vector<double> ns, logs;
    for (const auto& r : rows)
        if (r.n >= n_min && r.sup_deviation > 0.0) {
            ns.push_back(static_cast<double>(r.n));
            logs.push_back(std::log(r.sup_deviation));
        }
    t.rows_used = ns.size();
    if (ns.empty())
        return t;
    const std::size_t w = std::min(window, ns.size());
    std::vector<double> first, last;
    for (std::size_t i = 0; i < w; ++i) {
        first.push_back(std::exp(logs[i]));
        last.push_back(std::exp(logs[logs.size() - w + i]));
    }
    t.first_median = median(first);
    t.last_median = median(last);
    if (ns.size() >= 2) {
        double mx = 0.0, my = 0.0;
        for (std::size_t i = 0; i < ns.size(); ++i) {
            mx += ns[i];
            my += logs[i];
        }
        mx /= static_cast<double>(ns.size());
        my /= static_cast<double>(ns.size());
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t i = 0; i < ns.size(); ++i) {
            sxy += (ns[i] - mx) * (logs[i] - my);
            sxx += (ns[i] - mx) * (ns[i] - mx);
        }
        t.log_slope = sxy / sxx;
    }
    return t;
}

ConvergenceReport convergence_report(const EquilibriumData& eq, std::size_t n_min,
                                     std::size_t n_max, const DiagnosticsOptions& options) {
    if (n_min < 1 || n_max < n_min)
        throw ValidationError("bad n range");
    ConvergenceReport rep;
    for (std::size_t n = n_min; n <= n_max; ++n)
        rep.rows.push_back(diagnostics_row(eq, chebyshev(eq.set(), eq, n, options.remez), options));
    rep.trend = trend_statistics(rep.rows, options.trend_window, options.trend_n_min);
    return rep;
}

} // namespace chebgap
