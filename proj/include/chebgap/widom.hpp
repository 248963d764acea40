#pragma once

#include "chebgap/potential.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace chebgap {

/// At most one point strictly inside each gap.
class GapSet {
  public:
    GapSet() = default;
    /// Throws ValidationError for a bad gap index or a point outside its open gap.
    static GapSet make(const RealFiniteGapSet& set, std::map<std::size_t, double> points);

    const std::map<std::size_t, double>& points() const { return points_; }
    bool empty() const { return points_.empty(); }
    std::size_t size() const { return points_.size(); }

  private:
    std::map<std::size_t, double> points_;
};

struct WidomSolution {
    GapSet gap_set;
    /// B_S(infinity) = exp(-sum G(x_k)).
    double b_infinity = 1.0;
    /// ||F||_inf = 1 / b_infinity.
    double f_norm = 1.0;
    double log_f_norm = 0.0;
    CharacterVector character;
};

WidomSolution widom_from_gap_set(const EquilibriumData& eq, const GapSet& s);

/// |F(x)| = exp(sum_k [G(x_k) - G(x, x_k)]) with the pole Green functions
/// built once.
class WidomMinimizer {
  public:
    WidomMinimizer(const EquilibriumData& eq, const GapSet& s);

    double modulus(double x) const;
    double log_modulus(double x) const;
    double f_norm() const { return std::exp(log_norm_); }

  private:
    const EquilibriumData* eq_;
    std::vector<GreenWithPole> poles_;
    double log_norm_ = 0.0;
};

double widom_minimizer_modulus(const EquilibriumData& eq, const GapSet& s, double x);

CharacterVector character_of(const EquilibriumData& eq, const GapSet& s);

struct CharacterMatchOptions {
    double tol = 1e-10;
    int max_newton = 60;
    int continuation_steps = 8;
    /// Extra random starts for the basin survey (gap count >= 2).
    int random_starts = 0;
    std::uint64_t seed = 1;
};

/// Gap set whose character equals `target`.  One gap: bisection on the
/// monotone harmonic-measure entry.  More gaps: damped Newton in periodic
/// gap coordinates with continuation from the trivial character.
WidomSolution solve_character_match(const EquilibriumData& eq, const CharacterVector& target,
                                    const std::optional<GapSet>& init = std::nullopt,
                                    const CharacterMatchOptions& options = {});

/// All distinct solutions reached from the trivial start and
/// `options.random_starts` random starts.
std::vector<WidomSolution> character_match_basins(const EquilibriumData& eq,
                                                  const CharacterVector& target,
                                                  const CharacterMatchOptions& options);

} // namespace chebgap
