#pragma once

#include "chebgap/potential.hpp"
#include "chebgap/remez.hpp"
#include "chebgap/widom.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace chebgap {

struct DiagnosticsRow {
    std::size_t n = 0;
    double t_n = 0.0;
    double log_t_n = 0.0;
    double widom_factor = 0.0;
    /// ||F_n|| for the character of B^n (the Widom minimizer).
    double f_norm = 0.0;
    /// ||.|| of the minimizer built on the gap zeros of T_n.
    double f_norm_gap_zeros = 0.0;
    double ratio = 0.0;
    double sup_deviation = 0.0;
    double h_residual = 0.0;
    bool cert_pass = false;
    /// max over bands of e_n of |mass - 1/n|.
    double mass_defect = 0.0;
};

struct TrendStats {
    std::size_t window = 0;
    double first_median = 0.0;
    double last_median = 0.0;
    /// least-squares slope of log(sup_deviation) against n.
    double log_slope = 0.0;
    std::size_t rows_used = 0;
};

struct ConvergenceReport {
    std::vector<DiagnosticsRow> rows;
    TrendStats trend;
};

/// W_n = t_n / C^n.  Throws InvariantError when W_n < 2 - tol or
/// W_n > 2 exp(PW) + tol.
double widom_factor(const EquilibriumData& eq, const ChebyshevSolution& sol, double tol = 1e-8);
double log_widom_factor(const EquilibriumData& eq, const ChebyshevSolution& sol);

/// Residual of the gap-integral representation of h_n = G - G_n at z.
/// z = +-inf means the point at infinity, where h_n(inf) = log(C(e_n)/C).
/// z must lie off e_n.
struct HnCheck {
    double left = 0.0;
    double right = 0.0;
    double residual = 0.0;
};
HnCheck h_n_check(const EquilibriumData& eq, const ChebyshevSolution& sol, double z,
                  double quad_tol = 1e-11);

/// |L_n(x)| = |T_n(x)| exp(-n G(x)) / C^n, for x off the set.
double l_n_modulus(const EquilibriumData& eq, const ChebyshevSolution& sol, double x);
double log_l_n_modulus(const EquilibriumData& eq, const ChebyshevSolution& sol, double x);

/// Default grid: four points per gap at (2i+1)/8 of its length and four
/// points right of the hull at 0.5, 1, 2, 4 hull lengths.
std::vector<double> default_grid(const RealFiniteGapSet& set);

/// max over the grid of | |L_n| - |F_n| |, F_n the minimizer for the gap
/// zeros of T_n.  Grid points within 1e-6 of a gap zero are skipped and
/// counted in `skipped`.
double szego_widom_deviation(const EquilibriumData& eq, const ChebyshevSolution& sol,
                             const std::vector<double>& grid, std::size_t* skipped = nullptr);

/// Widom minimizer for the character of B^n, seeded with the gap zeros of T_n.
WidomSolution widom_minimizer_n(const EquilibriumData& eq, const ChebyshevSolution& sol);

/// W_n / ||F_n||.
double ratio_check(const EquilibriumData& eq, const ChebyshevSolution& sol,
                   const WidomSolution& widom_sol);

struct CrossValidation {
    double capacity_en = 0.0;
    double capacity_equilibrium = 0.0;
    double capacity_diff = 0.0;
    double green_diff = 0.0;
    std::vector<double> points;
};

/// Solves the equilibrium problem on the level set e_n and compares its
/// capacity and Green's function with the closed forms from T_n.
CrossValidation cross_validate_en(const ChebyshevSolution& sol, std::size_t max_n = 8,
                                  std::size_t points = 10);

/// p in 1..rows/2 with max_n |f_norm(n + p) - f_norm(n)| < eps.  Needs at
/// least 20 consecutive rows.
std::vector<std::size_t> almost_period_probe(const std::vector<DiagnosticsRow>& rows, double eps);

/// Test points for h_n_check: infinity, three points outside the hull and
/// one gap point off e_n.
std::vector<double> h_test_points(const EquilibriumData& eq, const ChebyshevSolution& sol);

struct DiagnosticsOptions {
    std::optional<std::vector<double>> grid;
    RemezOptions remez;
    double quad_tol = 1e-11;
    double bound_tol = 1e-8;
    double mass_tol = 1e-13;
    std::size_t trend_window = 5;
    std::size_t trend_n_min = 5;
};

DiagnosticsRow diagnostics_row(const EquilibriumData& eq, const ChebyshevSolution& sol,
                               const DiagnosticsOptions& options = {});

TrendStats trend_statistics(const std::vector<DiagnosticsRow>& rows, std::size_t window,
                            std::size_t n_min);

ConvergenceReport convergence_report(const EquilibriumData& eq, std::size_t n_min,
                                     std::size_t n_max, const DiagnosticsOptions& options = {});

} // namespace chebgap
