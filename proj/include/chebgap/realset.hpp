#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace chebgap {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    double half() const { return 0.5 * (hi - lo); }
    bool contains(double x) const { return lo <= x && x <= hi; }
    bool contains_open(double x) const { return lo < x && x < hi; }

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// A finite union of disjoint closed intervals (bands) on the real line.
///
/// Bands are stored sorted with strictly positive separation, so every
/// gap between consecutive bands is a nonempty open interval.  Immutable
/// once built.
class RealFiniteGapSet {
  public:
    /// Sorts and validates; rejects overlapping or touching intervals and
    /// degenerate ones (lo >= hi).  Throws ValidationError.
    static RealFiniteGapSet make(std::vector<Interval> intervals);

    std::span<const Interval> bands() const { return bands_; }
    std::span<const Interval> gaps() const { return gaps_; }
    std::size_t band_count() const { return bands_.size(); }
    std::size_t gap_count() const { return gaps_.size(); }
    Interval hull() const { return {bands_.front().lo, bands_.back().hi}; }

    bool contains(double x) const;
    std::optional<std::size_t> band_of(double x) const;
    /// Index of the open gap containing x, if any.
    std::optional<std::size_t> gap_of(double x) const;

    /// Image under x -> scale * x + shift (scale > 0).
    RealFiniteGapSet affine(double scale, double shift) const;

    /// Affine image with hull [0, 1].
    RealFiniteGapSet normalized() const;

    friend bool operator==(const RealFiniteGapSet&, const RealFiniteGapSet&) = default;

  private:
    RealFiniteGapSet() = default;

    std::vector<Interval> bands_;
    std::vector<Interval> gaps_;
};

RealFiniteGapSet make_set(std::vector<Interval> intervals);

bool contains(const RealFiniteGapSet& set, double x);

/// The shrunken gap of length (1 - eps) * |gap| about the same midpoint.
Interval gap_shrink(const Interval& gap, double eps);

} // namespace chebgap
