#include "chebgap/potential.hpp"

#include "chebgap/errors.hpp"
#include "chebgap/quadrature.hpp"

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace chebgap {

namespace {

constexpr double kPi = std::numbers::pi;

// point = anchor + off, parametrized by the cosine substitution on [lo, hi]
struct Anchored {
    double anchor;
    double off;
};

Anchored cosine_point(double lo, double hi, double theta) {
    const double h = 0.5 * (hi - lo);
    if (theta <= 0.5 * kPi) {
        const double s = std::sin(0.5 * theta);
        return {lo, 2.0 * h * s * s};
    }
    const double c = std::cos(0.5 * theta);
    return {hi, -2.0 * h * c * c};
}

} // namespace

double EquilibriumResiduals::worst() const {
    double w = std::max({normalization, max_green_on_set, capacity_routes});
    for (double g : gap_conditions)
        w = std::max(w, g);
    return w;
}

double wrap_unit(double x) {
    double r = x - std::floor(x);
    if (r >= 1.0 - 1e-14)
        r = 0.0;
    return r;
}

double circular_diff(double a, double b) {
    double d = a - b;
    d -= std::round(d);
    if (d <= -0.5)
        d += 1.0;
    return d;
}

bool CharacterVector::is_trivial(double tol) const {
    return std::all_of(entries.begin(), entries.end(),
                       [tol](double e) { return std::abs(circular_diff(e, 0.0)) <= tol; });
}

CharacterVector CharacterVector::operator+(const CharacterVector& other) const {
    if (other.size() != size())
        throw ValidationError("character dimensions differ");
    CharacterVector out{entries};
    for (std::size_t j = 0; j < size(); ++j)
        out.entries[j] = wrap_unit(entries[j] + other.entries[j]);
    return out;
}

double CharacterVector::distance(const CharacterVector& other) const {
    if (other.size() != size())
        throw ValidationError("character dimensions differ");
    double d = 0.0;
    for (std::size_t j = 0; j < size(); ++j)
        d = std::max(d, std::abs(circular_diff(entries[j], other.entries[j])));
    return d;
}

// ---------------------------------------------------------------------------
// EquilibriumData internals

double EquilibriumData::capacity() const { return std::exp(log_cap_); }

double EquilibriumData::rest_abs(double anchor, double off, std::size_t skip_a,
                                 std::size_t skip_b) const {
    double p = 1.0;
    for (std::size_t i = 0; i < ends_.size(); ++i) {
        if (i == skip_a || i == skip_b)
            continue;
        p *= std::abs((anchor - ends_[i]) + off);
    }
    return p;
}

double EquilibriumData::q_at(double anchor, double off) const {
    double p = 1.0;
    for (double c : crit_)
        p *= (anchor - c) + off;
    return p;
}

template <class W>
double EquilibriumData::band_theta_integral(std::size_t band, W&& weight) const {
    const double lo = ends_[2 * band];
    const double hi = ends_[2 * band + 1];
    auto f = [&](double theta) {
        const auto p = cosine_point(lo, hi, theta);
        return weight(p.anchor, p.off) /
               std::sqrt(rest_abs(p.anchor, p.off, 2 * band, 2 * band + 1));
    };
    return quad::adaptive(f, 0.0, kPi, quad_tol_);
}

template <class W>
double EquilibriumData::gap_theta_integral(std::size_t gap, W&& weight) const {
    const double lo = ends_[2 * gap + 1];
    const double hi = ends_[2 * gap + 2];
    auto f = [&](double theta) {
        const auto p = cosine_point(lo, hi, theta);
        return weight(p.anchor, p.off) /
               std::sqrt(rest_abs(p.anchor, p.off, 2 * gap + 1, 2 * gap + 2));
    };
    return quad::adaptive(f, 0.0, kPi, quad_tol_);
}

double EquilibriumData::q(double x) const { return q_at(x, 0.0); }

double EquilibriumData::density(double x) const {
    const auto band = set_.band_of(x);
    if (!band)
        return 0.0;
    const double r = rest_abs(x, 0.0, ends_.size(), ends_.size());
    if (r == 0.0)
        return std::numeric_limits<double>::infinity();
    return std::abs(q(x)) / (kPi * std::sqrt(r));
}

double EquilibriumData::green_from_edge(double edge, std::size_t edge_index, double off) const {
    // t = edge + off * s^2 absorbs the inverse square root at the edge
    const double r = std::sqrt(std::abs(off));
    auto f = [&](double s) {
        const double o = off * s * s;
        return q_at(edge, o) / std::sqrt(rest_abs(edge, o, edge_index, edge_index));
    };
    return std::abs(2.0 * r * quad::adaptive(f, 0.0, 1.0, quad_tol_));
}

double EquilibriumData::tail(double sigma) const {
    // int_0^sigma (q(s)/sqrt(r(s)) - 1) ds / s, written over u = s / sigma;
    // the bracket is formed as expm1 of a sum of log1p terms
    auto f = [&](double u) {
        const double s = sigma * u;
        double l = 0.0;
        for (double c : crit_scaled_)
            l += std::log1p(-c * s);
        for (double e : ends_scaled_)
            l -= 0.5 * std::log1p(-e * s);
        return std::expm1(l) / u;
    };
    return quad::adaptive(f, 0.0, 1.0, quad_tol_);
}

namespace {

std::complex<double> log1p_c(std::complex<double> x) {
    if (std::abs(x) < 1e-4)
        return x * (1.0 - x * (0.5 - x * (1.0 / 3.0 - 0.25 * x)));
    return std::log(1.0 + x);
}

std::complex<double> expm1_c(std::complex<double> x) {
    if (std::abs(x) < 1e-4)
        return x * (1.0 + x * (0.5 + x * (1.0 / 6.0 + x / 24.0)));
    return std::exp(x) - 1.0;
}

} // namespace

std::complex<double> EquilibriumData::tail(std::complex<double> sigma) const {
    auto integrand = [&](double u) {
        const auto s = sigma * u;
        std::complex<double> l = 0.0;
        for (double c : crit_scaled_)
            l += log1p_c(-c * s);
        for (double e : ends_scaled_)
            l -= 0.5 * log1p_c(-e * s);
        return expm1_c(l) / u;
    };
    const double re = quad::adaptive([&](double u) { return integrand(u).real(); }, 0.0, 1.0,
                                     quad_tol_);
    const double im = quad::adaptive([&](double u) { return integrand(u).imag(); }, 0.0, 1.0,
                                     quad_tol_);
    return {re, im};
}

std::complex<double> EquilibriumData::scaled_integrand(std::complex<double> v) const {
    std::complex<double> num = 1.0;
    for (double c : crit_scaled_)
        num *= v - c;
    std::complex<double> den = 1.0;
    for (double e : ends_scaled_)
        den *= std::sqrt(v - e);
    return num / den;
}

double EquilibriumData::green_real(double x) const {
    if (set_.contains(x))
        return 0.0;
    if (std::isinf(x))
        return std::numeric_limits<double>::infinity();
    const double v = (x - hull_mid_) / hull_half_;
    if (std::abs(v) >= 2.0)
        return std::log(std::abs(v)) - robin_ - tail(1.0 / v);

    const std::size_t last = ends_.size() - 1;
    if (x > ends_[last])
        return green_from_edge(ends_[last], last, x - ends_[last]);
    if (x < ends_[0])
        return green_from_edge(ends_[0], 0, x - ends_[0]);

    const auto gap = set_.gap_of(x);
    const std::size_t il = 2 * *gap + 1;
    const std::size_t ir = il + 1;
    if (x - ends_[il] <= ends_[ir] - x)
        return green_from_edge(ends_[il], il, x - ends_[il]);
    return green_from_edge(ends_[ir], ir, x - ends_[ir]);
}

double EquilibriumData::green(std::complex<double> z) const {
    if (z.imag() == 0.0)
        return green_real(z.real());
    const std::complex<double> v = (z - hull_mid_) / hull_half_;
    if (std::abs(v) >= 2.0)
        return std::log(std::abs(v)) - robin_ - tail(1.0 / v).real();

    // vertical path from the real point below z; conjugate symmetry lets us
    // stay in the upper half plane
    const double x = z.real();
    const double vx = (x - hull_mid_) / hull_half_;
    const double vy = std::abs(z.imag()) / hull_half_;
    auto f = [&](double s) {
        const std::complex<double> v_s{vx, vy * s * s};
        const auto w = scaled_integrand(v_s) * std::complex<double>(0.0, 2.0 * vy * s);
        return w.real();
    };
    return green_real(x) + quad::adaptive(f, 0.0, 1.0, quad_tol_);
}

double EquilibriumData::log_potential(double x) const {
    double total = 0.0;
    for (std::size_t j = 0; j < set_.band_count(); ++j) {
        const double lo = ends_[2 * j];
        const double hi = ends_[2 * j + 1];
        const double h = 0.5 * (hi - lo);
        auto dens = [&](const Anchored& p) {
            return std::abs(q_at(p.anchor, p.off)) /
                   (kPi * std::sqrt(rest_abs(p.anchor, p.off, 2 * j, 2 * j + 1)));
        };
        const double outside = std::max(lo - x, x - hi);
        if (outside > 4.0 * std::numeric_limits<double>::epsilon() * h) {
            auto f = [&](double theta) {
                const auto p = cosine_point(lo, hi, theta);
                return dens(p) * std::log(std::abs((x - p.anchor) - p.off));
            };
            // a nearby x makes the log almost singular at one end
            total += outside < h ? quad::endpoint_singular(f, 0.0, kPi, quad_tol_)
                                 : quad::adaptive(f, 0.0, kPi, quad_tol_);
            continue;
        }
        const double xb = std::clamp(x, lo, hi);
        // x = mid - h cos(theta0); split at theta0 where the log is singular.
        // theta0 and pi - theta0 are both kept so that sin((theta + theta0) / 2)
        // stays accurate when theta and theta0 approach pi together.
        const double theta0_lo = 2.0 * std::asin(std::sqrt(std::max(0.0, (xb - lo) / (2.0 * h))));
        const double theta0_hi = 2.0 * std::asin(std::sqrt(std::max(0.0, (hi - xb) / (2.0 * h))));
        const double theta0 = xb - lo <= hi - xb ? theta0_lo : kPi - theta0_hi;
        const double pi_minus_theta0 = xb - lo <= hi - xb ? kPi - theta0_lo : theta0_hi;
        auto piece = [&](double a, double b) {
            auto f = [&](double theta, double tc) {
                const bool near_b = theta > 0.5 * (a + b);
                const double dtheta = near_b == (b == theta0) ? -tc : theta - theta0;
                const double pi_minus_theta = (near_b && b == kPi) ? tc : kPi - theta;
                const double half_sum = theta + theta0 <= kPi
                                            ? 0.5 * (theta + theta0)
                                            : 0.5 * (pi_minus_theta + pi_minus_theta0);
                const auto p = cosine_point(lo, hi, theta);
                // factors logged separately: their product underflows at the ends
                const double log_dist = std::log(2.0 * h) + std::log(std::abs(std::sin(half_sum))) +
                                        std::log(std::abs(std::sin(0.5 * dtheta)));
                return dens(p) * log_dist;
            };
            return quad::endpoint_singular(f, a, b, quad_tol_);
        };
        if (theta0 > 0.0)
            total += piece(0.0, theta0);
        if (theta0 < kPi)
            total += piece(theta0, kPi);
    }
    return total;
}

double EquilibriumData::cumulative_measure(double x) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < set_.band_count(); ++j) {
        const double lo = ends_[2 * j];
        const double hi = ends_[2 * j + 1];
        if (x >= hi) {
            acc += band_measures_[j];
            continue;
        }
        if (x > lo) {
            const double theta_x = std::acos(std::clamp((0.5 * (lo + hi) - x) / (0.5 * (hi - lo)),
                                                        -1.0, 1.0));
            auto f = [&](double theta) {
                const auto p = cosine_point(lo, hi, theta);
                return std::abs(q_at(p.anchor, p.off)) /
                       (kPi * std::sqrt(rest_abs(p.anchor, p.off, 2 * j, 2 * j + 1)));
            };
            acc += quad::adaptive(f, 0.0, theta_x, quad_tol_);
        }
        break;
    }
    return acc;
}

// ---------------------------------------------------------------------------

EquilibriumData solve_equilibrium(const RealFiniteGapSet& set, double tol) {
    if (!(tol > 0.0 && tol <= 1e-4))
        throw ValidationError("solve_equilibrium: tol must lie in (0, 1e-4]");

    EquilibriumData eq(set);
    eq.tol_ = tol;
    eq.quad_tol_ = std::clamp(tol * 1e-3, 1e-15, 1e-12);

    const auto hull = set.hull();
    eq.hull_mid_ = hull.mid();
    eq.hull_half_ = hull.half();
    for (const auto& b : set.bands()) {
        eq.ends_.push_back(b.lo);
        eq.ends_.push_back(b.hi);
    }
    for (double e : eq.ends_)
        eq.ends_scaled_.push_back((e - eq.hull_mid_) / eq.hull_half_);

    const std::size_t ell = set.gap_count();
    if (ell > 0) {
        // Q = prod (t - g_j) + sum_i a_i prod_{j != i} (t - g_j), g_j gap midpoints
        std::vector<double> mids;
        for (const auto& g : set.gaps())
            mids.push_back(g.mid());
        auto basis = [&](std::size_t i, double anchor, double off) {
            double p = 1.0;
            for (std::size_t j = 0; j < ell; ++j)
                if (j != i)
                    p *= (anchor - mids[j]) + off;
            return p;
        };

        Eigen::MatrixXd m(ell, ell);
        Eigen::VectorXd rhs(ell);
        for (std::size_t k = 0; k < ell; ++k) {
            for (std::size_t i = 0; i < ell; ++i)
                m(k, i) = eq.gap_theta_integral(
                    k, [&](double a, double o) { return basis(i, a, o); });
            rhs(k) = -eq.gap_theta_integral(k, [&](double a, double o) { return basis(ell, a, o); });
            const double scale = std::max(m.row(k).cwiseAbs().maxCoeff(), std::abs(rhs(k)));
            m.row(k) /= scale;
            rhs(k) /= scale;
        }
        const Eigen::VectorXd coef = m.colPivHouseholderQr().solve(rhs);

        auto qbasis = [&](double anchor, double off) {
            double v = basis(ell, anchor, off);
            for (std::size_t i = 0; i < ell; ++i)
                v += coef(i) * basis(i, anchor, off);
            return v;
        };

        for (std::size_t k = 0; k < ell; ++k) {
            const auto gap = set.gaps()[k];
            const double width = gap.length();
            auto f = [&](double s) { return qbasis(gap.lo, s * width); };
            const double f0 = f(0.0);
            const double f1 = f(1.0);
            if (!(f0 * f1 < 0.0))
                throw NumericalError("critical point of gap " + std::to_string(k) +
                                         " is not bracketed by the gap",
                                     {f0, f1});
            std::uintmax_t iters = 200;
            const auto br = boost::math::tools::toms748_solve(
                f, 0.0, 1.0, f0, f1, boost::math::tools::eps_tolerance<double>(52), iters);
            const double s = 0.5 * (br.first + br.second);
            eq.crit_.push_back(gap.lo + s * width);
        }
        for (double c : eq.crit_)
            eq.crit_scaled_.push_back((c - eq.hull_mid_) / eq.hull_half_);

        for (std::size_t k = 0; k < ell; ++k) {
            const double signed_int =
                eq.gap_theta_integral(k, [&](double a, double o) { return eq.q_at(a, o); });
            const double abs_int = eq.gap_theta_integral(
                k, [&](double a, double o) { return std::abs(eq.q_at(a, o)); });
            eq.residuals_.gap_conditions.push_back(std::abs(signed_int) / abs_int);
        }
    }

    double total = 0.0;
    for (std::size_t j = 0; j < set.band_count(); ++j) {
        const double rho =
            eq.band_theta_integral(j, [&](double a, double o) { return std::abs(eq.q_at(a, o)); }) /
            kPi;
        eq.band_measures_.push_back(rho);
        total += rho;
    }
    eq.residuals_.normalization = std::abs(total - 1.0);

    // Robin constant: G(v) = log v - robin - tail(1/v) for |v| >= 2, matched at v = 2
    const std::size_t last = eq.ends_.size() - 1;
    const double g2 = eq.green_from_edge(eq.ends_[last], last, eq.hull_half_);
    eq.robin_ = std::log(2.0) - g2 - eq.tail(0.5);

    // capacity through the log-potential at the centre of the widest band
    std::size_t widest = 0;
    for (std::size_t j = 1; j < set.band_count(); ++j)
        if (set.bands()[j].length() > set.bands()[widest].length())
            widest = j;
    eq.log_cap_ = eq.log_potential(set.bands()[widest].mid());
    eq.residuals_.capacity_routes = std::abs(eq.log_cap_ - eq.robin_log_capacity());

    double worst_g = 0.0;
    for (const auto& b : set.bands())
        for (double x : {b.lo, b.lo + 0.3 * b.length(), b.lo + 0.75 * b.length(), b.hi})
            worst_g = std::max(worst_g, std::abs(eq.log_potential(x) - eq.log_cap_));
    eq.residuals_.max_green_on_set = worst_g;

    if (!(eq.residuals_.worst() <= tol)) {
        std::vector<double> r = eq.residuals_.gap_conditions;
        r.push_back(eq.residuals_.normalization);
        r.push_back(eq.residuals_.max_green_on_set);
        r.push_back(eq.residuals_.capacity_routes);
        throw NumericalError("equilibrium solve did not reach tolerance", std::move(r));
    }
    return eq;
}

double capacity(const EquilibriumData& eq) { return eq.capacity(); }

double green_at(const EquilibriumData& eq, double x) { return eq.green_real(x); }

double green_at(const EquilibriumData& eq, std::complex<double> z) { return eq.green(z); }

namespace {

RealFiniteGapSet moebius_image(const RealFiniteGapSet& set, double w, std::vector<double>& lows) {
    std::vector<Interval> out;
    for (const auto& b : set.bands()) {
        out.push_back({1.0 / (b.hi - w), 1.0 / (b.lo - w)});
        lows.push_back(out.back().lo);
    }
    return RealFiniteGapSet::make(std::move(out));
}

EquilibriumData solve_image(const EquilibriumData& eq, double w, std::vector<double>& lows) {
    if (!std::isfinite(w))
        throw ValidationError("pole must be finite");
    if (eq.set().contains(w))
        throw ValidationError("pole lies on the set");
    return solve_equilibrium(moebius_image(eq.set(), w, lows), eq.tolerance());
}

} // namespace

GreenWithPole::GreenWithPole(const EquilibriumData& eq, double w)
    : pole_(w), image_([&] {
          std::vector<double> lows;
          return solve_image(eq, w, lows);
      }()) {
    // image bands come in a different order; match them back by endpoint
    const auto img_bands = image_.set().bands();
    for (const auto& b : eq.set().bands()) {
        const double lo = 1.0 / (b.hi - w);
        for (std::size_t k = 0; k < img_bands.size(); ++k)
            if (img_bands[k].lo == lo)
                omega_.push_back(image_.band_measures()[k]);
    }
}

double GreenWithPole::operator()(double z) const {
    if (z == pole_)
        return std::numeric_limits<double>::infinity();
    if (std::isinf(z))
        return at_infinity();
    return image_.green_real(1.0 / (z - pole_));
}

double GreenWithPole::operator()(std::complex<double> z) const {
    if (z.imag() == 0.0)
        return (*this)(z.real());
    return image_.green(1.0 / (z - pole_));
}

double GreenWithPole::at_infinity() const { return image_.green_real(0.0); }

double green_two(const EquilibriumData& eq, double z, double w) {
    if (std::isinf(w))
        return eq.green_real(z);
    if (eq.set().contains(w))
        throw ValidationError("green_two: pole lies on the set");
    if (z == w)
        throw ValidationError("green_two: z coincides with the pole");
    return GreenWithPole(eq, w)(z);
}

double pw_sum(const EquilibriumData& eq) {
    double s = 0.0;
    for (double c : eq.critical_points())
        s += eq.green_real(c);
    return s;
}

std::vector<double> band_measures(const EquilibriumData& eq) {
    return {eq.band_measures().begin(), eq.band_measures().end()};
}

namespace {

CharacterVector cumulative_character(std::span<const double> masses, long long n) {
    CharacterVector chi;
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < masses.size(); ++j) {
        acc += masses[j];
        // n * acc mod 1 without forming a huge product
        const double frac = acc - std::floor(acc);
        chi.entries.push_back(wrap_unit(std::fmod(static_cast<double>(n % (1LL << 52)) * frac, 1.0)));
    }
    return chi;
}

} // namespace

CharacterVector character_power(const EquilibriumData& eq, long long n) {
    return cumulative_character(eq.band_measures(), n);
}

CharacterVector pole_character(const GreenWithPole& g) {
    return cumulative_character(g.harmonic_measures(), 1);
}

double blaschke_modulus(const EquilibriumData& eq, double z, double x) {
    if (z == x)
        return 0.0;
    if (std::isinf(z))
        return std::exp(-eq.green_real(x));
    return std::exp(-green_two(eq, z, x));
}

} // namespace chebgap
