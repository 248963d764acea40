#pragma once

#include "chebgap/potential.hpp"
#include "chebgap/realset.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace chebgap {

/// Monic polynomial held by its real zeros.
///
/// Zeros are kept both in x and in the hull coordinate v = (x - mid) / half,
/// where T(x) = half^n * That(v) with That monic.  The Chebyshev-basis and
/// monomial coefficients are derived on request.
class MonicPolynomial {
  public:
    static MonicPolynomial from_zeros(std::vector<double> zeros, double hull_mid, double hull_half);

    std::size_t degree() const { return zeros_.size(); }
    const std::vector<double>& zeros() const { return zeros_; }
    const std::vector<double>& scaled_zeros() const { return zeros_v_; }
    double hull_mid() const { return mid_; }
    double hull_half() const { return half_; }

    double operator()(double x) const;
    double derivative(double x) const;
    /// log |T(x)|.
    double log_abs(double x) const;
    /// That(v) = prod (v - v_j).
    double scaled(double v) const;
    double log_abs_scaled(double v) const;

    /// Coefficients c_0..c_n of T in powers of x.
    std::vector<double> monomial_coefficients() const;
    /// Coefficients a_0..a_n of That in the Chebyshev basis T_k(v) of the hull.
    std::vector<double> chebyshev_coefficients() const;

  private:
    std::vector<double> zeros_;
    std::vector<double> zeros_v_;
    double mid_ = 0.0;
    double half_ = 1.0;
};

/// Converts Chebyshev-basis coefficients in v to monomial coefficients in v.
std::vector<double> chebyshev_to_monomial(const std::vector<double>& cheb);

struct AlternationPoint {
    double x = 0.0;
    int sign = 0;
    double value = 0.0;
};

struct ChebyshevSolution {
    MonicPolynomial poly;
    std::size_t n = 0;
    double t_n = 0.0;
    double log_t_n = 0.0;
    std::vector<AlternationPoint> alternation;
    std::map<std::size_t, double> gap_zeros;
    int iterations = 0;
    /// (max |T| on the set - levelled error) / levelled error at exit.
    double levelled_gap = 0.0;

    const std::vector<double>& zeros() const { return poly.zeros(); }
};

struct RemezOptions {
    double tol = 1e-12;
    std::size_t max_degree = 60;
    int max_iterations = 200;
    /// n + 1 increasing points of the set; default is the equilibrium quantiles.
    std::optional<std::vector<double>> initial_reference;
};

/// Minimax monic polynomial of degree n on the set by Remez exchange.
/// Throws ValidationError for n < 1, CapabilityError above the degree cap and
/// NumericalError (carrying the last reference) on nonconvergence.
ChebyshevSolution chebyshev(const RealFiniteGapSet& set, std::size_t n,
                            const RemezOptions& options = {});
ChebyshevSolution chebyshev(const RealFiniteGapSet& set, const EquilibriumData& eq,
                            std::size_t n, const RemezOptions& options = {});

struct CertificateReport {
    bool pass = false;
    std::vector<AlternationPoint> points;
    double sup_norm = 0.0;
    double level = 0.0;
    /// max over points of | |T(p)| - level | / level.
    double level_defect = 0.0;
    std::string defect;
};

/// Checks the stored alternation of a solution against its t_n.
CertificateReport alternation_certificate(const ChebyshevSolution& sol, const RealFiniteGapSet& set,
                                          double tol = 1e-9);
/// Searches for n + 1 alternating points at the sup norm of p on the set.
CertificateReport alternation_certificate(const MonicPolynomial& p, const RealFiniteGapSet& set,
                                          double tol = 1e-9);

/// sup |p| over the set (exact: critical points and band endpoints).
double sup_norm(const MonicPolynomial& p, const RealFiniteGapSet& set);

/// One band of T^{-1}([-t, t]): the branch through a zero, stored as the zero
/// plus signed offsets so that very thin bands keep their width.
struct LevelBand {
    double zero = 0.0;
    double left_offset = 0.0;  // <= 0
    double right_offset = 0.0; // >= 0
    bool shared_left = false;
    bool shared_right = false;
    double mass = 0.0;

    double lo() const { return zero + left_offset; }
    double hi() const { return zero + right_offset; }
};

struct BandDecomposition {
    std::vector<LevelBand> bands;

    /// Union with shared endpoints merged.
    std::vector<Interval> merged() const;
    RealFiniteGapSet as_set() const;
    /// Whether every band of `set` lies in the union within `tol`.
    bool covers(const RealFiniteGapSet& set, double tol) const;
};

/// Level-set decomposition of T_n; masses are rho_n quadratures.
BandDecomposition bands(const ChebyshevSolution& sol, double tol = 1e-13);

/// C(e_n) = (t_n / 2)^(1/n).
double capacity_en(const ChebyshevSolution& sol);
double log_capacity_en(const ChebyshevSolution& sol);

/// (1/n) arcosh(|T_n(x)| / t_n) off e_n, zero on it.
double green_n(const ChebyshevSolution& sol, double x);

/// rho_n mass of one band of `bands(sol)`.
double rho_n_mass(const ChebyshevSolution& sol, const LevelBand& band);

/// Zeros strictly inside gaps, keyed by gap index; a zero within 1e-10 hull
/// lengths of a gap endpoint is not counted.  Throws InvariantError on two
/// zeros in one gap.
std::map<std::size_t, double> gap_zeros(const ChebyshevSolution& sol, const RealFiniteGapSet& set);

} // namespace chebgap
