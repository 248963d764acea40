#include "chebgap/widom.hpp"

#include "chebgap/errors.hpp"

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace chebgap {

GapSet GapSet::make(const RealFiniteGapSet& set, std::map<std::size_t, double> points) {
    for (const auto& [k, x] : points) {
        if (k >= set.gap_count())
            throw ValidationError("gap index " + std::to_string(k) + " out of range");
        if (!set.gaps()[k].contains_open(x))
            throw ValidationError("point " + std::to_string(x) + " is not inside gap " +
                                  std::to_string(k));
    }
    GapSet s;
    s.points_ = std::move(points);
    return s;
}

WidomSolution widom_from_gap_set(const EquilibriumData& eq, const GapSet& s) {
    WidomSolution out;
    out.gap_set = s;
    double sum = 0.0;
    for (const auto& [k, x] : s.points())
        sum += eq.green_real(x);
    out.log_f_norm = sum;
    out.b_infinity = std::exp(-sum);
    out.f_norm = std::exp(sum);
    out.character = character_of(eq, s);
    return out;
}

WidomMinimizer::WidomMinimizer(const EquilibriumData& eq, const GapSet& s) : eq_(&eq) {
    for (const auto& [k, x] : s.points()) {
        poles_.emplace_back(eq, x);
        log_norm_ += poles_.back().at_infinity();
    }
}

double WidomMinimizer::log_modulus(double x) const {
    double v = log_norm_;
    for (const auto& g : poles_) {
        if (x == g.pole())
            return -std::numeric_limits<double>::infinity();
        v -= g(x);
    }
    return v;
}

double WidomMinimizer::modulus(double x) const { return std::exp(log_modulus(x)); }

double widom_minimizer_modulus(const EquilibriumData& eq, const GapSet& s, double x) {
    return WidomMinimizer(eq, s).modulus(x);
}

CharacterVector character_of(const EquilibriumData& eq, const GapSet& s) {
    CharacterVector chi;
    chi.entries.assign(eq.set().gap_count(), 0.0);
    for (const auto& [k, x] : s.points())
        chi = chi + pole_character(GreenWithPole(eq, x));
    return chi;
}

// ---------------------------------------------------------------------------
// Character matching

namespace {

constexpr double kPi = std::numbers::pi;

// Each gap closure with its ends glued is a circle; s in [0, 1) with s = 0
// the glued point (no point in the gap).
struct GapCircles {
    const EquilibriumData& eq;

    double point(std::size_t k, double s) const {
        const auto g = eq.set().gaps()[k];
        const double r = std::sin(0.5 * kPi * s);
        return g.lo + g.length() * r * r;
    }

    bool absent(std::size_t k, double s) const {
        const auto g = eq.set().gaps()[k];
        const double x = point(k, s);
        const double margin = 1e-13 * g.length();
        return s == 0.0 || x - g.lo <= margin || g.hi - x <= margin;
    }

    std::vector<double> contribution(std::size_t k, double s) const {
        if (absent(k, s))
            return std::vector<double>(eq.set().gap_count(), 0.0);
        return pole_character(GreenWithPole(eq, point(k, s))).entries;
    }

    std::vector<double> residual(const std::vector<std::vector<double>>& parts,
                                 const std::vector<double>& target) const {
        std::vector<double> r(target.size(), 0.0);
        for (std::size_t j = 0; j < target.size(); ++j) {
            double sum = 0.0;
            for (const auto& p : parts)
                sum += p[j];
            r[j] = circular_diff(sum, target[j]);
        }
        return r;
    }

    GapSet to_gap_set(const std::vector<double>& s) const {
        std::map<std::size_t, double> pts;
        for (std::size_t k = 0; k < s.size(); ++k)
            if (!absent(k, s[k]))
                pts[k] = point(k, s[k]);
        return GapSet::make(eq.set(), std::move(pts));
    }
};

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v)
        m = std::max(m, std::abs(x));
    return m;
}

double wrap_s(double s) { return s - std::floor(s); }

// Damped Newton on the periodic coordinates; returns the final residual norm.
double newton(const GapCircles& gc, std::vector<double>& s, const std::vector<double>& target,
              double tol, int max_iter) {
    const std::size_t ell = s.size();
    std::vector<std::vector<double>> parts(ell);
    for (std::size_t k = 0; k < ell; ++k)
        parts[k] = gc.contribution(k, s[k]);
    auto r = gc.residual(parts, target);
    double norm = max_abs(r);
    constexpr double h = 1e-6;
    for (int it = 0; it < max_iter && norm > tol; ++it) {
        Eigen::MatrixXd jac(ell, ell);
        Eigen::VectorXd rhs(ell);
        for (std::size_t k = 0; k < ell; ++k) {
            // one-sided difference; flipped, then widened, when the moved pole
            // lands too close to a gap end (s = 0 moves it by ~h^2 only)
            double dh = 0.0;
            std::vector<double> moved;
            for (double cand : {h, -h, 1e3 * h, -1e3 * h}) {
                try {
                    moved = gc.contribution(k, wrap_s(s[k] + cand));
                    dh = cand;
                    break;
                } catch (const NumericalError&) {
                    if (cand == -1e3 * h)
                        throw;
                }
            }
            for (std::size_t j = 0; j < ell; ++j)
                jac(j, k) = circular_diff(moved[j], parts[k][j]) / dh;
        }
        for (std::size_t j = 0; j < ell; ++j)
            rhs(j) = -r[j];
        const Eigen::VectorXd step = jac.colPivHouseholderQr().solve(rhs);
        if (!step.allFinite())
            break;
        double lambda = 1.0;
        bool improved = false;
        for (int halving = 0; halving < 30; ++halving, lambda *= 0.5) {
            std::vector<double> trial = s;
            std::vector<std::vector<double>> trial_parts(ell);
            try {
                for (std::size_t k = 0; k < ell; ++k) {
                    trial[k] = wrap_s(s[k] + lambda * step(k));
                    trial_parts[k] = gc.contribution(k, trial[k]);
                }
            } catch (const NumericalError&) {
                continue; // pole too close to a gap end for the image solve
            }
            auto tr = gc.residual(trial_parts, target);
            const double tn = max_abs(tr);
            if (tn < norm) {
                s = std::move(trial);
                parts = std::move(trial_parts);
                r = std::move(tr);
                norm = tn;
                improved = true;
                break;
            }
        }
        if (!improved)
            break;
    }
    return norm;
}

bool same_gap_set(const GapSet& a, const GapSet& b, double tol) {
    if (a.size() != b.size())
        return false;
    for (const auto& [k, x] : a.points()) {
        const auto it = b.points().find(k);
        if (it == b.points().end() || std::abs(it->second - x) > tol)
            return false;
    }
    return true;
}

WidomSolution match_single_gap(const EquilibriumData& eq, double target, double tol) {
    const double t = wrap_unit(target);
    if (std::abs(circular_diff(t, 0.0)) <= tol)
        return widom_from_gap_set(eq, GapSet{});
    const auto g = eq.set().gaps()[0];
    // omega(x, band 0) falls from 1 to 0 across the gap
    auto f = [&](double u) {
        return GreenWithPole(eq, g.lo + u * g.length()).harmonic_measures()[0] - t;
    };
    std::uintmax_t iters = 200;
    const auto br = boost::math::tools::toms748_solve(
        f, 0.0, 1.0, 1.0 - t, -t, boost::math::tools::eps_tolerance<double>(50), iters);
    const double x = g.lo + 0.5 * (br.first + br.second) * g.length();
    auto sol = widom_from_gap_set(eq, GapSet::make(eq.set(), {{0, x}}));
    const double res = std::abs(circular_diff(sol.character.entries[0], t));
    if (res > tol)
        throw NumericalError("character match (one gap) did not reach tolerance", {res});
    return sol;
}

std::vector<double> lifted(const CharacterVector& target) {
    std::vector<double> out;
    for (double e : target.entries)
        out.push_back(circular_diff(e, 0.0));
    return out;
}

std::vector<double> from_gap_set(const GapCircles& gc, const GapSet& s, std::size_t ell) {
    std::vector<double> out(ell, 0.0);
    for (const auto& [k, x] : s.points()) {
        const auto g = gc.eq.set().gaps()[k];
        const double r = std::sqrt(std::clamp((x - g.lo) / g.length(), 0.0, 1.0));
        out[k] = 2.0 * std::asin(r) / kPi;
    }
    return out;
}

// Continuation from the trivial character along t -> lambda * target.
double continuation(const GapCircles& gc, std::vector<double>& s, const std::vector<double>& lift,
                    const CharacterMatchOptions& opt) {
    double res = 0.0;
    const int steps = std::max(1, opt.continuation_steps);
    for (int i = 1; i <= steps; ++i) {
        std::vector<double> tgt(lift.size());
        for (std::size_t j = 0; j < lift.size(); ++j)
            tgt[j] = lift[j] * static_cast<double>(i) / steps;
        res = newton(gc, s, tgt, i == steps ? opt.tol : std::max(opt.tol, 1e-6), opt.max_newton);
    }
    return res;
}

// Contributions add over gaps, so tabulate each gap circle on a grid once and
// scan every combination; Newton then runs from the best few.
double grid_starts(const GapCircles& gc, std::vector<double>& s, const std::vector<double>& target,
                   const CharacterMatchOptions& opt) {
    const std::size_t ell = target.size();
    std::size_t m = 16;
    while (m > 4 && std::pow(static_cast<double>(m), static_cast<double>(ell)) > 1e6)
        --m;
    std::vector<std::vector<std::vector<double>>> table(ell);
    std::vector<std::vector<double>> coords(ell);
    for (std::size_t k = 0; k < ell; ++k)
        for (std::size_t i = 0; i < m; ++i) {
            const double sk = static_cast<double>(i) / static_cast<double>(m);
            try {
                table[k].push_back(gc.contribution(k, sk));
                coords[k].push_back(sk);
            } catch (const NumericalError&) {
            }
        }

    constexpr std::size_t keep = 4;
    std::vector<std::pair<double, std::vector<std::size_t>>> best;
    std::vector<std::size_t> idx(ell, 0);
    std::vector<std::vector<double>> parts(ell);
    for (;;) {
        for (std::size_t k = 0; k < ell; ++k)
            parts[k] = table[k][idx[k]];
        const double r = max_abs(gc.residual(parts, target));
        if (best.size() < keep || r < best.back().first) {
            best.emplace_back(r, idx);
            std::sort(best.begin(), best.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            if (best.size() > keep)
                best.pop_back();
        }
        std::size_t k = 0;
        while (k < ell && ++idx[k] == table[k].size())
            idx[k++] = 0;
        if (k == ell)
            break;
    }

    double res = std::numeric_limits<double>::infinity();
    for (const auto& [r0, id] : best) {
        std::vector<double> trial(ell);
        for (std::size_t k = 0; k < ell; ++k)
            trial[k] = coords[k][id[k]];
        const double r = newton(gc, trial, target, opt.tol, opt.max_newton);
        if (r < res) {
            res = r;
            s = trial;
        }
        if (res <= opt.tol)
            break;
    }
    return res;
}

} // namespace

WidomSolution solve_character_match(const EquilibriumData& eq, const CharacterVector& target,
                                    const std::optional<GapSet>& init,
                                    const CharacterMatchOptions& options) {
    const std::size_t ell = eq.set().gap_count();
    if (target.size() != ell)
        throw ValidationError("target character has " + std::to_string(target.size()) +
                              " entries, the set has " + std::to_string(ell) + " gaps");
    if (ell == 0)
        return widom_from_gap_set(eq, GapSet{});
    if (ell == 1)
        return match_single_gap(eq, target.entries[0], options.tol);
    if (target.is_trivial(options.tol) && !init)
        return widom_from_gap_set(eq, GapSet{});

    const GapCircles gc{eq};
    const auto lift = lifted(target);
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> best_s;
    if (init) {
        std::vector<double> s = from_gap_set(gc, *init, ell);
        best = newton(gc, s, lift, options.tol, options.max_newton);
        best_s = s;
    }
    if (!(best <= options.tol)) {
        std::vector<double> s(ell, 0.0);
        const double res = continuation(gc, s, lift, options);
        if (res < best) {
            best = res;
            best_s = s;
        }
    }
    if (!(best <= options.tol)) {
        std::vector<double> s;
        const double res = grid_starts(gc, s, lift, options);
        if (res < best) {
            best = res;
            best_s = s;
        }
    }
    if (!(best <= options.tol))
        throw NumericalError("character match did not converge", {best});
    return widom_from_gap_set(eq, gc.to_gap_set(best_s));
}

std::vector<WidomSolution> character_match_basins(const EquilibriumData& eq,
                                                  const CharacterVector& target,
                                                  const CharacterMatchOptions& options) {
    std::vector<WidomSolution> found;
    const double same_tol = 1e-7 * eq.set().hull().length();
    auto add = [&](WidomSolution sol) {
        for (const auto& f : found)
            if (same_gap_set(f.gap_set, sol.gap_set, same_tol))
                return;
        found.push_back(std::move(sol));
    };
    try {
        add(solve_character_match(eq, target, std::nullopt, options));
    } catch (const NumericalError&) {
    }
    const std::size_t ell = eq.set().gap_count();
    if (ell < 2)
        return found;
    const GapCircles gc{eq};
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < options.random_starts; ++i) {
        std::vector<double> s(ell);
        for (auto& v : s)
            v = u(rng);
        const double res = newton(gc, s, lifted(target), options.tol, options.max_newton);
        if (res <= options.tol)
            add(widom_from_gap_set(eq, gc.to_gap_set(s)));
    }
    return found;
}

} // namespace chebgap
