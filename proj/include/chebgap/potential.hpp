#pragma once

#include "chebgap/realset.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace chebgap {

/// Structured residual record of an equilibrium solve.
struct EquilibriumResiduals {
    /// |int_gap Q/sqrt|R|| / int_gap |Q|/sqrt|R|, one entry per gap.
    std::vector<double> gap_conditions;
    /// |sum of band measures - 1|.
    double normalization = 0.0;
    /// max |G| over a sample grid on the set, with G evaluated through the
    /// log-potential of the density (independent of the gap-integral route).
    double max_green_on_set = 0.0;
    /// |log C (log-potential) - log C (Robin integral)|.
    double capacity_routes = 0.0;

    double worst() const;
};

/// Characters of the fundamental group of the complement, written as one
/// angle in [0, 1) per gap (cumulative band measures modulo 1).
struct CharacterVector {
    std::vector<double> entries;

    std::size_t size() const { return entries.size(); }
    bool is_trivial(double tol) const;
    CharacterVector operator+(const CharacterVector& other) const;
    /// max over entries of the circular distance to `other`.
    double distance(const CharacterVector& other) const;
};

/// Wraps into [0, 1); values within 1e-14 of 1 map to 0.
double wrap_unit(double x);
/// Signed circular difference a - b, in (-1/2, 1/2].
double circular_diff(double a, double b);

/// Equilibrium measure and Green's function data for a finite-gap set.
///
/// The density is |Q(x)| / (pi sqrt|R(x)|) on the bands, R the product of
/// (x - e) over all band endpoints e and Q the monic polynomial whose roots
/// are the critical points, one per gap.  Immutable after the solve; all
/// evaluators are const and thread-safe.
class EquilibriumData {
  public:
    const RealFiniteGapSet& set() const { return set_; }
    std::span<const double> critical_points() const { return crit_; }
    double log_capacity() const { return log_cap_; }
    double capacity() const;
    std::span<const double> band_measures() const { return band_measures_; }
    const EquilibriumResiduals& residuals() const { return residuals_; }
    double tolerance() const { return tol_; }

    /// Q(x) = prod (x - c_j).
    double q(double x) const;
    /// d rho / dx; zero off the set.
    double density(double x) const;
    /// G(x) for real x (zero on the set).
    double green_real(double x) const;
    /// G(z) for complex z.
    double green(std::complex<double> z) const;
    /// int log|x - t| d rho(t) by quadrature; x may lie on the set.
    double log_potential(double x) const;
    /// log C from the Robin integral at infinity (second route).
    double robin_log_capacity() const { return robin_ + std::log(hull_half_); }
    /// rho((-inf, x]) for x in the set or a gap.
    double cumulative_measure(double x) const;

  private:
    friend EquilibriumData solve_equilibrium(const RealFiniteGapSet& set, double tol);

    explicit EquilibriumData(RealFiniteGapSet set) : set_(std::move(set)) {}

    // products over endpoints / critical points with the point written as
    // anchor + off, so that differences to nearby endpoints keep precision
    double rest_abs(double anchor, double off, std::size_t skip_a, std::size_t skip_b) const;
    double q_at(double anchor, double off) const;
    template <class W>
    double band_theta_integral(std::size_t band, W&& weight) const;
    template <class W>
    double gap_theta_integral(std::size_t gap, W&& weight) const;
    double green_from_edge(double edge, std::size_t edge_index, double off) const;
    double tail(double sigma) const;
    std::complex<double> tail(std::complex<double> sigma) const;
    std::complex<double> scaled_integrand(std::complex<double> v) const;

    RealFiniteGapSet set_;
    std::vector<double> ends_;   // a0, b0, a1, b1, ...
    std::vector<double> crit_;
    std::vector<double> ends_scaled_;
    std::vector<double> crit_scaled_;
    std::vector<double> band_measures_;
    double hull_mid_ = 0.0;
    double hull_half_ = 1.0;
    double robin_ = 0.0; // Robin constant in hull-scaled units
    double log_cap_ = 0.0;
    double tol_ = 1e-9;
    double quad_tol_ = 1e-12;
    EquilibriumResiduals residuals_;
};

/// Solves the equilibrium problem.  `tol` in (0, 1e-4]; throws
/// NumericalError with the residuals if they exceed `tol`.
EquilibriumData solve_equilibrium(const RealFiniteGapSet& set, double tol = 1e-9);

double capacity(const EquilibriumData& eq);
double green_at(const EquilibriumData& eq, double x);
double green_at(const EquilibriumData& eq, std::complex<double> z);

/// Green's function with a finite real pole w outside the set.
///
/// The map u = 1/(x - w) sends w to infinity; the Green's function and the
/// harmonic measures at w are those of the image set at infinity.
class GreenWithPole {
  public:
    GreenWithPole(const EquilibriumData& eq, double w);

    double pole() const { return pole_; }
    /// G(z, w); +inf at z == w.
    double operator()(double z) const;
    double operator()(std::complex<double> z) const;
    /// G(infinity, w) = G(w).
    double at_infinity() const;
    /// omega(w, band j) in the original band order.
    const std::vector<double>& harmonic_measures() const { return omega_; }
    const EquilibriumData& image() const { return image_; }

  private:
    double pole_;
    EquilibriumData image_;
    std::vector<double> omega_;
};

/// G(z, w) for real z, w with w outside the set.  Throws ValidationError when
/// z == w or w lies on the set.
double green_two(const EquilibriumData& eq, double z, double w);

/// Sum of G over the critical points.
double pw_sum(const EquilibriumData& eq);

std::vector<double> band_measures(const EquilibriumData& eq);

/// Character of B^n in cumulative-measure coordinates:
/// entry j = n * (rho_1 + ... + rho_j) mod 1, j = 1..gap count.
CharacterVector character_power(const EquilibriumData& eq, long long n);

/// Character of B(., x) for a single real x outside the set, in the same
/// coordinates (cumulative harmonic measures at x).
CharacterVector pole_character(const GreenWithPole& g);

/// |B(z, x)| = exp(-G(z, x)); z may be +-infinity.  Returns 0 at z == x.
double blaschke_modulus(const EquilibriumData& eq, double z, double x);

} // namespace chebgap
