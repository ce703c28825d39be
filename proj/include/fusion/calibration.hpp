#pragma once

#include "fusion/domain.hpp"
#include "fusion/transforms.hpp"

#include <array>
#include <span>
#include <string>
#include <vector>

namespace fusion {

// Additive score-space adjustment per size segment, applied before rating
// assignment. Defaults are the production values; fit_delta_shifts
// re-estimates them from paired scores.
struct DeltaShifts {
    std::array<double, 4> shift_by_size = {-2.004, -1.251, -0.688, 0.178};
    // indexed by SizeClass: micro, small, medium, large

    double shift_for(SizeClass s) const { return shift_by_size[static_cast<size_t>(s)]; }
    void set_shift(SizeClass s, double value) { shift_by_size[static_cast<size_t>(s)] = value; }

    static DeltaShifts zero() { return DeltaShifts{{0.0, 0.0, 0.0, 0.0}}; }
};

void validate_delta_shifts(const DeltaShifts& shifts);

Score apply_delta_shift(Score score, SizeClass size, const DeltaShifts& shifts);

struct RatingClass {
    std::string label;
    double pd_upper_bound; // exclusive; the last class has the sentinel 1.0
};

// Ordered PD buckets, left-closed right-open. Bounds strictly increase and
// the final bound is exactly 1.
struct RatingScale {
    std::vector<RatingClass> classes;

    size_t n_classes() const { return classes.size(); }
};

void validate_rating_scale(const RatingScale& scale);

// Nine classes R1..R9; the first eight upper bounds run geometrically from
// 0.03% to 25%, the ninth is the catch-all up to 1. This is a configurable
// stand-in, not a published master scale.
RatingScale default_rating_scale();

// First class whose upper bound strictly exceeds p. A p equal to a bound
// belongs to the next class (right-open buckets). Returns the class index.
size_t assign_rating(const Probability& p, const RatingScale& scale);

const std::string& rating_label(size_t index, const RatingScale& scale);

// Per segment: shift = mean(reference - predicted). Throws SegmentTooSmall
// when a segment has fewer than min_segment_size pairs.
DeltaShifts fit_delta_shifts(std::span<const Score> predicted_scores,
                             std::span<const Score> reference_scores,
                             std::span<const SizeClass> sizes,
                             size_t min_segment_size = 30);

} // namespace fusion
