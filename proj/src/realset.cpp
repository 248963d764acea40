#include "chebgap/realset.hpp"

#include "chebgap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace chebgap {

namespace {

std::string describe(const Interval& iv) {
    std::ostringstream os;
    os.precision(17);
    os << "[" << iv.lo << ", " << iv.hi << "]";
    return os.str();
}

} // namespace

RealFiniteGapSet RealFiniteGapSet::make(std::vector<Interval> intervals) {
    if (intervals.empty())
        throw ValidationError("set needs at least one interval");

    for (const auto& iv : intervals) {
        if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi))
            throw ValidationError("interval " + describe(iv) + " has a non-finite endpoint");
        if (!(iv.lo < iv.hi))
            throw ValidationError("interval " + describe(iv) + " is empty or degenerate");
    }

    std::sort(intervals.begin(), intervals.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });

    for (std::size_t i = 0; i + 1 < intervals.size(); ++i) {
        const auto& a = intervals[i];
        const auto& b = intervals[i + 1];
        if (a.hi > b.lo)
            throw ValidationError("intervals " + describe(a) + " and " + describe(b) + " overlap");
        if (a.hi == b.lo)
            throw ValidationError("intervals " + describe(a) + " and " + describe(b) +
                                  " touch; gaps must be nonempty");
    }

    RealFiniteGapSet set;
    set.bands_ = std::move(intervals);
    set.gaps_.reserve(set.bands_.size() - 1);
    for (std::size_t i = 0; i + 1 < set.bands_.size(); ++i)
        set.gaps_.push_back({set.bands_[i].hi, set.bands_[i + 1].lo});
    return set;
}

bool RealFiniteGapSet::contains(double x) const { return band_of(x).has_value(); }

std::optional<std::size_t> RealFiniteGapSet::band_of(double x) const {
    // first band whose hi >= x
    auto it = std::lower_bound(bands_.begin(), bands_.end(), x,
                               [](const Interval& b, double v) { return b.hi < v; });
    if (it != bands_.end() && it->lo <= x)
        return static_cast<std::size_t>(it - bands_.begin());
    return std::nullopt;
}

std::optional<std::size_t> RealFiniteGapSet::gap_of(double x) const {
    for (std::size_t j = 0; j < gaps_.size(); ++j)
        if (gaps_[j].contains_open(x))
            return j;
    return std::nullopt;
}

RealFiniteGapSet RealFiniteGapSet::affine(double scale, double shift) const {
    if (!(scale > 0.0) || !std::isfinite(scale) || !std::isfinite(shift))
        throw ValidationError("affine map needs a finite positive scale");
    std::vector<Interval> out;
    out.reserve(bands_.size());
    for (const auto& b : bands_)
        out.push_back({scale * b.lo + shift, scale * b.hi + shift});
    return make(std::move(out));
}

RealFiniteGapSet RealFiniteGapSet::normalized() const {
    const auto h = hull();
    const double scale = 1.0 / h.length();
    std::vector<Interval> out;
    out.reserve(bands_.size());
    for (const auto& b : bands_)
        out.push_back({(b.lo - h.lo) * scale, (b.hi - h.lo) * scale});
    out.front().lo = 0.0;
    out.back().hi = 1.0;
    return make(std::move(out));
}

RealFiniteGapSet make_set(std::vector<Interval> intervals) {
    return RealFiniteGapSet::make(std::move(intervals));
}

bool contains(const RealFiniteGapSet& set, double x) { return set.contains(x); }

Interval gap_shrink(const Interval& gap, double eps) {
    if (!(eps > 0.0 && eps < 1.0))
        throw ValidationError("gap_shrink: eps must lie in (0, 1)");
    const double m = gap.mid();
    const double a = (1.0 - eps) * gap.half();
    return {m - a, m + a};
}

} // namespace chebgap
