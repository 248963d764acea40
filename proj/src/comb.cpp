#include "chebgap/comb.hpp"

#include "chebgap/errors.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace chebgap {

CombParameters comb_parameters(const EquilibriumData& eq) {
    CombParameters out;
    const auto rho = eq.band_measures();
    const auto crit = eq.critical_points();
    double cum = 0.0;
    for (std::size_t k = 0; k < eq.set().gap_count(); ++k) {
        cum += rho[k];
        out.omegas.push_back(cum);
        out.heights.push_back(eq.green_real(crit[k]));
    }
    return out;
}

namespace {

// cube sizes beyond this are cut down to keep the scan at desk scale
constexpr double kMaxCandidates = 2e7;

std::string relation_text(const std::vector<long long>& m, long long integer) {
    std::ostringstream os;
    bool first = true;
    for (std::size_t j = 0; j < m.size(); ++j) {
        if (m[j] == 0)
            continue;
        if (!first)
            os << (m[j] < 0 ? " - " : " + ");
        else if (m[j] < 0)
            os << "-";
        const long long a = std::llabs(m[j]);
        if (a != 1)
            os << a << "*";
        os << "rho(e_" << j + 1 << ")";
        first = false;
    }
    os << " = " << integer;
    return os.str();
}

} // namespace

GeneratorScan canonical_generator_scan(const EquilibriumData& eq, long long q_max, double tol) {
    if (q_max < 1 || q_max > 10000)
        throw ValidationError("q_max must lie in [1, 10000]");
    GeneratorScan out;
    const std::size_t ell = eq.set().gap_count();
    if (ell == 0) {
        out.verdict = "trivially canonical (no gaps, trivial character group)";
        return out;
    }
    const auto rho_all = eq.band_measures();
    const std::vector<double> rho(rho_all.begin(), rho_all.begin() + static_cast<long>(ell));

    long long bound = q_max;
    while (bound > 1 && std::pow(2.0 * static_cast<double>(bound) + 1.0,
                                 static_cast<double>(ell)) > kMaxCandidates)
        --bound;
    out.searched_bound = bound;

    // odometer over the cube; keep the relation with the smallest l1 norm
    std::vector<long long> m(ell, -bound);
    long long best_norm = -1;
    for (;;) {
        // canonical sign: first nonzero coefficient positive
        std::size_t lead = 0;
        while (lead < ell && m[lead] == 0)
            ++lead;
        if (lead < ell && m[lead] > 0) {
            double s = 0.0;
            long long norm = 0;
            for (std::size_t j = 0; j < ell; ++j) {
                s += static_cast<double>(m[j]) * rho[j];
                norm += std::llabs(m[j]);
            }
            const double r = std::abs(s - std::round(s));
            if (r <= tol * static_cast<double>(norm) && (best_norm < 0 || norm < best_norm)) {
                best_norm = norm;
                out.coefficients = m;
                out.integer = std::llround(s);
                out.residual = r;
            }
        }
        std::size_t j = 0;
        while (j < ell && m[j] == bound) {
            m[j] = -bound;
            ++j;
        }
        if (j == ell)
            break;
        ++m[j];
    }

    out.relation_found = best_norm > 0;
    std::ostringstream os;
    if (out.relation_found)
        os << "relation found: " << relation_text(out.coefficients, out.integer)
           << " (not a canonical generator)";
    else
        os << "no relation found up to q_max = " << bound
           << " (consistent with a canonical generator)";
    out.verdict = os.str();
    return out;
}

} // namespace chebgap
