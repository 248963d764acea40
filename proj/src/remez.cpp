#include "chebgap/remez.hpp"

#include "chebgap/errors.hpp"
#include "chebgap/quadrature.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace chebgap {

namespace {

constexpr double kPi = std::numbers::pi;

double log_abs_prod(const std::vector<double>& zs, double v) {
    double s = 0.0;
    for (double z : zs)
        s += std::log(std::abs(v - z));
    return s;
}

double prod(const std::vector<double>& zs, double v) {
    double p = 1.0;
    for (double z : zs)
        p *= v - z;
    return p;
}

template <class F>
double solve_bracketed(F&& f, double a, double b, double fa, double fb) {
    std::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve(
        f, a, b, fa, fb, boost::math::tools::eps_tolerance<double>(52), iters);
    return 0.5 * (r.first + r.second);
}

// The set in hull coordinates, endpoints kept exactly in x as well.
struct ScaledSet {
    double mid = 0.0;
    double half = 1.0;
    std::vector<double> lo_x, hi_x, lo_v, hi_v;

    explicit ScaledSet(const RealFiniteGapSet& set) {
        mid = set.hull().mid();
        half = set.hull().half();
        for (const auto& b : set.bands()) {
            lo_x.push_back(b.lo);
            hi_x.push_back(b.hi);
            lo_v.push_back((b.lo - mid) / half);
            hi_v.push_back((b.hi - mid) / half);
        }
    }
    std::size_t size() const { return lo_v.size(); }
    double to_x(double v) const { return mid + half * v; }
    bool contains_v(double v) const {
        for (std::size_t j = 0; j < size(); ++j)
            if (lo_v[j] <= v && v <= hi_v[j])
                return true;
        return false;
    }
};

struct Candidate {
    double v = 0.0;
    double x = 0.0;
    double value = 0.0; // That(v)
};

// Critical point of prod (v - z_i) between zs[j] and zs[j + 1].
double critical_between(const std::vector<double>& zs, std::size_t j) {
    const double a = zs[j];
    const double b = zs[j + 1];
    const double w = b - a;
    // s(1-s) w * sum 1/(v - z_i), finite at both ends
    auto h = [&](double s) {
        const double v = a + s * w;
        double rest = 0.0;
        for (std::size_t i = 0; i < zs.size(); ++i)
            if (i != j && i != j + 1)
                rest += 1.0 / (v - zs[i]);
        return (1.0 - s) - s + s * (1.0 - s) * w * rest;
    };
    return a + w * solve_bracketed(h, 0.0, 1.0, 1.0, -1.0);
}

std::vector<double> critical_points(const std::vector<double>& zs) {
    std::vector<double> out;
    for (std::size_t j = 0; j + 1 < zs.size(); ++j)
        out.push_back(critical_between(zs, j));
    return out;
}

// Local maxima of |That| on the set plus band endpoints and any extra points.
std::vector<Candidate> candidates(const std::vector<double>& zs, const ScaledSet& s,
                                  const std::vector<Candidate>& extra) {
    std::vector<Candidate> out = extra;
    for (std::size_t k = 0; k < s.size(); ++k) {
        out.push_back({s.lo_v[k], s.lo_x[k], 0.0});
        out.push_back({s.hi_v[k], s.hi_x[k], 0.0});
    }
    const auto crits = critical_points(zs);
    for (std::size_t j = 0; j < crits.size(); ++j) {
        const double c = crits[j];
        if (s.contains_v(c)) {
            out.push_back({c, s.to_x(c), 0.0});
            continue;
        }
        // |That| is unimodal between the zeros; take the set points nearest c
        for (std::size_t k = 0; k + 1 < s.size(); ++k) {
            if (s.hi_v[k] < c && c < s.lo_v[k + 1]) {
                if (s.hi_v[k] >= zs[j])
                    out.push_back({s.hi_v[k], s.hi_x[k], 0.0});
                if (s.lo_v[k + 1] <= zs[j + 1])
                    out.push_back({s.lo_v[k + 1], s.lo_x[k + 1], 0.0});
            }
        }
    }
    for (auto& c : out)
        c.value = prod(zs, c.v);
    std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) { return a.v < b.v; });
    return out;
}

void merge_signs(std::vector<Candidate>& c) {
    std::vector<Candidate> out;
    for (const auto& x : c) {
        if (x.value == 0.0)
            continue;
        if (!out.empty() && std::signbit(out.back().value) == std::signbit(x.value)) {
            if (std::abs(x.value) > std::abs(out.back().value))
                out.back() = x;
            continue;
        }
        out.push_back(x);
    }
    c = std::move(out);
}

// Alternating subsequence of length `want` keeping the largest values.
std::vector<Candidate> alternate(std::vector<Candidate> c, std::size_t want) {
    merge_signs(c);
    while (c.size() > want) {
        if (c.size() - want == 1) {
            if (std::abs(c.front().value) < std::abs(c.back().value))
                c.erase(c.begin());
            else
                c.pop_back();
            continue;
        }
        const auto it = std::min_element(c.begin(), c.end(), [](const auto& a, const auto& b) {
            return std::abs(a.value) < std::abs(b.value);
        });
        c.erase(it);
        merge_signs(c);
    }
    return c;
}

// Levelled monic interpolant on the reference, P(v_i) = (-1)^i E, in
// barycentric form with weights scaled to at most 1.
struct Levelled {
    std::vector<double> ref;
    std::vector<double> w; // (-1)^i times the scaled barycentric weight
    double denom = 0.0;
    double level = 0.0; // E

    explicit Levelled(std::vector<double> r) : ref(std::move(r)) {
        const std::size_t m = ref.size();
        std::vector<double> lw(m, 0.0);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                if (j != i)
                    lw[i] -= std::log(std::abs(ref[i] - ref[j]));
        const double top = *std::max_element(lw.begin(), lw.end());
        w.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            // sign of 1/prod_{j != i}(v_i - v_j) is (-1)^(m-1-i); times (-1)^i
            const double sgn = ((m - 1) % 2 == 0) ? 1.0 : -1.0;
            w[i] = sgn * std::exp(lw[i] - top);
            denom += w[i];
        }
        level = 1.0 / (denom * std::exp(top));
    }

    double operator()(double v) const {
        double om = 1.0;
        double s = 0.0;
        for (std::size_t i = 0; i < ref.size(); ++i) {
            if (v == ref[i])
                return (i % 2 == 0 ? 1.0 : -1.0) * level;
            om *= v - ref[i];
            s += w[i] / (v - ref[i]);
        }
        return om * s / denom;
    }

    std::vector<double> zeros() const {
        std::vector<double> z;
        for (std::size_t i = 0; i + 1 < ref.size(); ++i) {
            const double fa = (i % 2 == 0 ? 1.0 : -1.0) * level;
            z.push_back(solve_bracketed(*this, ref[i], ref[i + 1], fa, -fa));
        }
        return z;
    }
};

std::vector<double> quantile_reference(const RealFiniteGapSet& set, const EquilibriumData& eq,
                                       std::size_t n) {
    const auto masses = eq.band_measures();
    std::vector<double> ref;
    for (std::size_t i = 0; i <= n; ++i) {
        const double q = static_cast<double>(i) / static_cast<double>(n);
        double below = 0.0;
        std::size_t j = 0;
        while (j + 1 < masses.size() && below + masses[j] < q) {
            below += masses[j];
            ++j;
        }
        const auto b = set.bands()[j];
        const double frac = std::clamp((q - below) / masses[j], 0.0, 1.0);
        double x = b.mid() - b.half() * std::cos(kPi * frac);
        if (frac == 0.0)
            x = b.lo;
        if (frac == 1.0)
            x = b.hi;
        ref.push_back(x);
    }
    for (std::size_t i = 1; i < ref.size(); ++i)
        if (!(ref[i] > ref[i - 1]))
            throw NumericalError("initial reference is not strictly increasing", ref);
    return ref;
}

std::vector<AlternationPoint> to_points(const std::vector<Candidate>& c, const MonicPolynomial& p) {
    std::vector<AlternationPoint> out;
    for (const auto& x : c) {
        const double val = p(x.x);
        out.push_back({x.x, val > 0.0 ? 1 : -1, val});
    }
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// MonicPolynomial

MonicPolynomial MonicPolynomial::from_zeros(std::vector<double> zeros, double hull_mid,
                                            double hull_half) {
    if (zeros.empty())
        throw ValidationError("polynomial degree must be at least 1");
    if (!(hull_half > 0.0))
        throw ValidationError("hull half-length must be positive");
    std::sort(zeros.begin(), zeros.end());
    MonicPolynomial p;
    p.mid_ = hull_mid;
    p.half_ = hull_half;
    for (double z : zeros)
        p.zeros_v_.push_back((z - hull_mid) / hull_half);
    p.zeros_ = std::move(zeros);
    return p;
}

double MonicPolynomial::operator()(double x) const { return prod(zeros_, x); }

double MonicPolynomial::derivative(double x) const {
    double total = 0.0;
    for (std::size_t k = 0; k < zeros_.size(); ++k) {
        double p = 1.0;
        for (std::size_t j = 0; j < zeros_.size(); ++j)
            if (j != k)
                p *= x - zeros_[j];
        total += p;
    }
    return total;
}

double MonicPolynomial::log_abs(double x) const { return log_abs_prod(zeros_, x); }

double MonicPolynomial::scaled(double v) const { return prod(zeros_v_, v); }

double MonicPolynomial::log_abs_scaled(double v) const { return log_abs_prod(zeros_v_, v); }

std::vector<double> MonicPolynomial::monomial_coefficients() const {
    std::vector<double> c{1.0};
    for (double z : zeros_) {
        std::vector<double> next(c.size() + 1, 0.0);
        for (std::size_t k = 0; k < c.size(); ++k) {
            next[k + 1] += c[k];
            next[k] -= z * c[k];
        }
        c = std::move(next);
    }
    return c;
}

std::vector<double> MonicPolynomial::chebyshev_coefficients() const {
    // multiply by (v - z) using v T_k = (T_{k+1} + T_{k-1}) / 2, v T_0 = T_1
    std::vector<double> a{1.0};
    for (double z : zeros_v_) {
        std::vector<double> next(a.size() + 1, 0.0);
        for (std::size_t k = 0; k < a.size(); ++k) {
            if (k == 0) {
                next[1] += a[0];
            } else {
                next[k + 1] += 0.5 * a[k];
                next[k - 1] += 0.5 * a[k];
            }
            next[k] -= z * a[k];
        }
        a = std::move(next);
    }
    return a;
}

std::vector<double> chebyshev_to_monomial(const std::vector<double>& cheb) {
    std::vector<double> out(cheb.size(), 0.0);
    std::vector<double> prev{1.0}; // T_0
    std::vector<double> cur{0.0, 1.0};
    for (std::size_t k = 0; k < cheb.size(); ++k) {
        const auto& tk = k == 0 ? prev : cur;
        for (std::size_t i = 0; i < tk.size(); ++i)
            out[i] += cheb[k] * tk[i];
        if (k >= 1) {
            std::vector<double> next(cur.size() + 1, 0.0);
            for (std::size_t i = 0; i < cur.size(); ++i)
                next[i + 1] += 2.0 * cur[i];
            for (std::size_t i = 0; i < prev.size(); ++i)
                next[i] -= prev[i];
            prev = std::move(cur);
            cur = std::move(next);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Remez exchange

namespace {

ChebyshevSolution exchange(const RealFiniteGapSet& set, const EquilibriumData* eq, std::size_t n,
                           const RemezOptions& options);

void check_degree(std::size_t n, const RemezOptions& options) {
    if (n < 1)
        throw ValidationError("degree must be at least 1");
    if (n > options.max_degree)
        throw CapabilityError("degree " + std::to_string(n) + " exceeds the cap " +
                              std::to_string(options.max_degree));
    if (!(options.tol > 0.0 && options.tol < 1e-2))
        throw ValidationError("remez tolerance must lie in (0, 1e-2)");
}

} // namespace

ChebyshevSolution chebyshev(const RealFiniteGapSet& set, std::size_t n, const RemezOptions& options) {
    check_degree(n, options);
    if (options.initial_reference)
        return exchange(set, nullptr, n, options);
    const auto eq = solve_equilibrium(set);
    return exchange(set, &eq, n, options);
}

ChebyshevSolution chebyshev(const RealFiniteGapSet& set, const EquilibriumData& eq, std::size_t n,
                            const RemezOptions& options) {
    check_degree(n, options);
    return exchange(set, &eq, n, options);
}

namespace {

ChebyshevSolution exchange(const RealFiniteGapSet& set, const EquilibriumData* eq, std::size_t n,
                           const RemezOptions& options) {
    const ScaledSet s(set);
    std::vector<double> ref_x;
    if (options.initial_reference) {
        ref_x = *options.initial_reference;
        if (ref_x.size() != n + 1)
            throw ValidationError("initial reference must have n + 1 points");
        for (std::size_t i = 0; i < ref_x.size(); ++i) {
            if (!set.contains(ref_x[i]))
                throw ValidationError("initial reference point outside the set");
            if (i > 0 && !(ref_x[i] > ref_x[i - 1]))
                throw ValidationError("initial reference must be strictly increasing");
        }
    } else {
        ref_x = quantile_reference(set, *eq, n);
    }

    std::vector<Candidate> ref;
    for (double x : ref_x)
        ref.push_back({(x - s.mid) / s.half, x, 0.0});

    ChebyshevSolution sol;
    sol.n = n;
    double gap = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= options.max_iterations; ++it) {
        std::vector<double> ref_v;
        for (const auto& c : ref)
            ref_v.push_back(c.v);
        const Levelled lev(ref_v);
        const auto zs = lev.zeros();
        auto cands = candidates(zs, s, ref);
        double top = 0.0;
        for (const auto& c : cands)
            top = std::max(top, std::abs(c.value));
        gap = (top - std::abs(lev.level)) / std::abs(lev.level);

        if (gap < options.tol) {
            std::vector<double> zx;
            for (double z : zs)
                zx.push_back(s.to_x(z));
            sol.poly = MonicPolynomial::from_zeros(std::move(zx), s.mid, s.half);
            sol.log_t_n = std::log(top) + static_cast<double>(n) * std::log(s.half);
            sol.t_n = std::exp(sol.log_t_n);
            sol.iterations = it;
            sol.levelled_gap = gap;
            sol.alternation = to_points(alternate(cands, n + 1), sol.poly);
            sol.gap_zeros = gap_zeros(sol, set);
            return sol;
        }
        auto next = alternate(std::move(cands), n + 1);
        if (next.size() < n + 1)
            throw NumericalError("exchange lost alternation", ref_x);
        ref = std::move(next);
        ref_x.clear();
        for (const auto& c : ref)
            ref_x.push_back(c.x);
    }
    std::vector<double> residuals = ref_x;
    residuals.push_back(gap);
    throw NumericalError("remez exchange did not converge in " +
                             std::to_string(options.max_iterations) + " iterations",
                         std::move(residuals));
}

} // namespace

// ---------------------------------------------------------------------------
// Certificates

double sup_norm(const MonicPolynomial& p, const RealFiniteGapSet& set) {
    const ScaledSet s(set);
    double top = 0.0;
    for (const auto& c : candidates(MonicPolynomial::from_zeros(p.zeros(), s.mid, s.half).scaled_zeros(),
                                    s, {}))
        top = std::max(top, std::abs(p(c.x)));
    return top;
}

CertificateReport alternation_certificate(const ChebyshevSolution& sol, const RealFiniteGapSet& set,
                                          double tol) {
    CertificateReport rep;
    rep.points = sol.alternation;
    rep.level = sol.t_n;
    rep.sup_norm = sup_norm(sol.poly, set);
    std::ostringstream why;
    if (rep.points.size() != sol.n + 1)
        why << "expected " << sol.n + 1 << " alternation points, have " << rep.points.size() << "; ";
    for (std::size_t i = 0; i < rep.points.size(); ++i) {
        const auto& p = rep.points[i];
        if (!set.contains(p.x))
            why << "point " << p.x << " is not in the set; ";
        const double v = sol.poly(p.x);
        rep.level_defect = std::max(rep.level_defect, std::abs(std::abs(v) - rep.level) / rep.level);
        if (i > 0 && (v > 0.0) == (sol.poly(rep.points[i - 1].x) > 0.0))
            why << "no sign change between " << rep.points[i - 1].x << " and " << p.x << "; ";
    }
    if (rep.level_defect > tol)
        why << "level defect " << rep.level_defect << " exceeds " << tol << "; ";
    if (rep.sup_norm > rep.level * (1.0 + tol))
        why << "sup norm " << rep.sup_norm << " exceeds t_n " << rep.level << "; ";
    rep.defect = why.str();
    rep.pass = rep.defect.empty();
    return rep;
}

CertificateReport alternation_certificate(const MonicPolynomial& p, const RealFiniteGapSet& set,
                                          double tol) {
    CertificateReport rep;
    const ScaledSet s(set);
    const auto q = MonicPolynomial::from_zeros(p.zeros(), s.mid, s.half);
    auto cands = candidates(q.scaled_zeros(), s, {});
    for (auto& c : cands) {
        c.value = p(c.x);
        rep.sup_norm = std::max(rep.sup_norm, std::abs(c.value));
    }
    rep.level = rep.sup_norm;
    std::vector<Candidate> top;
    for (const auto& c : cands)
        if (std::abs(c.value) >= rep.sup_norm * (1.0 - tol))
            top.push_back(c);
    merge_signs(top);
    const std::size_t need = p.degree() + 1;
    if (top.size() >= need) {
        top.resize(need);
        rep.pass = true;
    } else {
        rep.defect = "only " + std::to_string(top.size()) + " alternating extremal points, need " +
                     std::to_string(need);
    }
    rep.points = to_points(top, p);
    for (const auto& pt : rep.points)
        rep.level_defect =
            std::max(rep.level_defect, std::abs(std::abs(pt.value) - rep.level) / rep.level);
    return rep;
}

// ---------------------------------------------------------------------------
// Level bands

namespace {

// log |That(z_k + d)| with differences to the other zeros formed first
double log_abs_offset(const std::vector<double>& zs, std::size_t k, double d) {
    double s = std::log(std::abs(d));
    for (std::size_t j = 0; j < zs.size(); ++j)
        if (j != k)
            s += std::log(std::abs((zs[k] - zs[j]) + d));
    return s;
}

// Offset d (same sign as `limit`) where |That(z_k + d)| reaches exp(log_t).
// `limit` bounds the search; returns it unchanged when the level is not
// exceeded there (shared endpoint).  A zero limit means unbounded.
double level_offset(const std::vector<double>& zs, std::size_t k, double log_t, double dir,
                    double limit, bool& shared) {
    auto f = [&](double a) { return log_abs_offset(zs, k, dir * a) - log_t; };
    shared = false;
    double hi = limit > 0.0 ? limit : 1.0;
    double fhi = f(hi);
    if (limit > 0.0 && fhi <= 1e-10) {
        shared = true;
        return dir * limit;
    }
    while (fhi <= 0.0) {
        hi *= 2.0;
        fhi = f(hi);
    }
    double lo = hi;
    double flo = fhi;
    int guard = 0;
    while (flo > 0.0) {
        lo *= 0.5;
        flo = f(lo);
        if (++guard > 2000)
            throw NumericalError("band endpoint bracketing failed", {static_cast<double>(k)});
    }
    if (flo == 0.0)
        return dir * lo;
    // bisection-grade bracket [lo, hi]; refine
    while (hi > 2.0 * lo) {
        const double m = std::sqrt(lo * hi);
        const double fm = f(m);
        if (fm > 0.0) {
            hi = m;
            fhi = fm;
        } else {
            lo = m;
            flo = fm;
        }
    }
    return dir * solve_bracketed(f, lo, hi, flo, fhi);
}

// rho_n mass of the branch from z_k to z_k + e, with delta = e sin(phi).
// t - |That| is formed as a telescoped difference That(z_k + e) - That(z_k + delta)
// so that it keeps full relative precision up to the band edge.
double half_band_mass(const std::vector<double>& zs, std::size_t k, double e, double rel_tol) {
    if (e == 0.0)
        return 0.0;
    const std::size_t n = zs.size();
    std::vector<double> b{0.0};
    for (std::size_t j = 0; j < n; ++j)
        if (j != k)
            b.push_back(zs[k] - zs[j]);
    const std::size_t m = b.size();

    std::vector<double> at_e(m);
    double value_e = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
        at_e[i] = b[i] + e;
        value_e *= at_e[i];
    }
    std::vector<double> suffix_e(m + 1, 1.0);
    for (std::size_t i = m; i-- > 0;)
        suffix_e[i] = suffix_e[i + 1] * at_e[i];

    std::vector<double> f(m), prefix(m + 1), suffix(m + 1);
    auto integrand = [&](double phi) {
        const double delta = e * std::sin(phi);
        const double s = std::sin(0.25 * kPi - 0.5 * phi);
        const double gap = 2.0 * e * s * s; // e - delta
        for (std::size_t i = 0; i < m; ++i)
            f[i] = b[i] + delta;
        prefix[0] = 1.0;
        for (std::size_t i = 0; i < m; ++i)
            prefix[i + 1] = prefix[i] * f[i];
        suffix[m] = 1.0;
        for (std::size_t i = m; i-- > 0;)
            suffix[i] = suffix[i + 1] * f[i];
        double divided = 0.0;
        double deriv = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            divided += prefix[i] * suffix_e[i + 1];
            deriv += prefix[i] * suffix[i + 1];
        }
        const double value = prefix[m];
        const double below = std::abs(gap * divided); // |That(e)| - |That(delta)|
        const double above = std::abs(value_e) + std::abs(value);
        if (below == 0.0)
            return 0.0;
        return std::abs(deriv) * std::abs(e) * std::cos(phi) /
               (static_cast<double>(n) * kPi * std::sqrt(below * above));
    };
    return quad::adaptive(integrand, 0.0, 0.5 * kPi, rel_tol);
}

double band_mass_scaled(const std::vector<double>& zs, std::size_t k, double left, double right,
                        double rel_tol) {
    return half_band_mass(zs, k, left, rel_tol) + half_band_mass(zs, k, right, rel_tol);
}

} // namespace

BandDecomposition bands(const ChebyshevSolution& sol, double tol) {
    // tol is the quadrature tolerance for the band masses
    const auto& zs = sol.poly.scaled_zeros();
    const double h = sol.poly.hull_half();
    const double mid = sol.poly.hull_mid();
    const std::size_t n = zs.size();
    const double log_t = sol.log_t_n - static_cast<double>(n) * std::log(h);
    const auto crits = critical_points(zs);

    BandDecomposition out;
    for (std::size_t k = 0; k < n; ++k) {
        bool shared_l = false, shared_r = false;
        const double left_limit = k == 0 ? 0.0 : zs[k] - crits[k - 1];
        const double right_limit = k + 1 == n ? 0.0 : crits[k] - zs[k];
        const double l = level_offset(zs, k, log_t, -1.0, left_limit, shared_l);
        const double r = level_offset(zs, k, log_t, 1.0, right_limit, shared_r);
        LevelBand b;
        b.zero = mid + h * zs[k];
        b.left_offset = h * l;
        b.right_offset = h * r;
        b.shared_left = shared_l;
        b.shared_right = shared_r;
        b.mass = band_mass_scaled(zs, k, l, r, tol);
        out.bands.push_back(b);
    }
    return out;
}

std::vector<Interval> BandDecomposition::merged() const {
    std::vector<Interval> out;
    for (const auto& b : bands) {
        if (!out.empty() && b.lo() <= out.back().hi) {
            out.back().hi = std::max(out.back().hi, b.hi());
            continue;
        }
        if (!out.empty() && b.shared_left) {
            out.back().hi = b.hi();
            continue;
        }
        out.push_back({b.lo(), b.hi()});
    }
    return out;
}

RealFiniteGapSet BandDecomposition::as_set() const { return make_set(merged()); }

bool BandDecomposition::covers(const RealFiniteGapSet& set, double tol) const {
    const auto m = merged();
    for (const auto& b : set.bands()) {
        const bool inside = std::any_of(m.begin(), m.end(), [&](const Interval& iv) {
            return iv.lo - tol <= b.lo && b.hi <= iv.hi + tol;
        });
        if (!inside)
            return false;
    }
    return true;
}

double log_capacity_en(const ChebyshevSolution& sol) {
    return (sol.log_t_n - std::log(2.0)) / static_cast<double>(sol.n);
}

double capacity_en(const ChebyshevSolution& sol) { return std::exp(log_capacity_en(sol)); }

double green_n(const ChebyshevSolution& sol, double x) {
    const double r = sol.poly.log_abs(x) - sol.log_t_n;
    if (!(r > 0.0))
        return 0.0;
    // arcosh(e^r) = r + log(1 + sqrt(1 - e^{-2r}))
    return (r + std::log1p(std::sqrt(-std::expm1(-2.0 * r)))) / static_cast<double>(sol.n);
}

double rho_n_mass(const ChebyshevSolution& sol, const LevelBand& band) {
    const auto& zs = sol.poly.scaled_zeros();
    const double h = sol.poly.hull_half();
    const double zv = (band.zero - sol.poly.hull_mid()) / h;
    std::size_t k = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < zs.size(); ++j)
        if (std::abs(zs[j] - zv) < best) {
            best = std::abs(zs[j] - zv);
            k = j;
        }
    return band_mass_scaled(zs, k, band.left_offset / h, band.right_offset / h, 1e-13);
}

std::map<std::size_t, double> gap_zeros(const ChebyshevSolution& sol, const RealFiniteGapSet& set) {
    std::map<std::size_t, double> out;
    const double margin = 1e-10 * set.hull().length();
    for (double z : sol.zeros()) {
        const auto g = set.gap_of(z);
        if (!g)
            continue;
        const auto gap = set.gaps()[*g];
        if (z - gap.lo <= margin || gap.hi - z <= margin)
            continue;
        if (out.count(*g))
            throw InvariantError("two zeros of T_" + std::to_string(sol.n) + " in gap " +
                                 std::to_string(*g));
        out[*g] = z;
    }
    return out;
}

} // namespace chebgap
