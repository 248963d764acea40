#pragma once

#include "chebgap/potential.hpp"

#include <string>
#include <vector>

namespace chebgap {

/// Teeth of the comb picture of the complement: tooth k sits at omega_k with
/// height h_k.
struct CombParameters {
    std::vector<double> omegas;
    std::vector<double> heights;
};

/// omega_k = rho((-inf, left end of gap k]), h_k = G(c_k).  Both are affine
/// invariants, so the values equal those of the set mapped onto [0, 1].
CombParameters comb_parameters(const EquilibriumData& eq);

struct GeneratorScan {
    bool relation_found = false;
    /// m_1..m_l with sum m_j rho(e_j) = integer; empty when none was found.
    std::vector<long long> coefficients;
    long long integer = 0;
    double residual = 0.0;
    /// Coefficient bound actually searched (below q_max when l >= 2 and the
    /// full cube would be too large).
    long long searched_bound = 0;
    std::string verdict;
};

/// Searches integer relations sum m_j rho(e_j) in Z over the first l bands
/// with |m_j| <= q_max.  Finding none is evidence, not proof, that the
/// band measures generate a dense subgroup.  q_max in [1, 10^4].
GeneratorScan canonical_generator_scan(const EquilibriumData& eq, long long q_max,
                                       double tol = 1e-10);

} // namespace chebgap
