#include "fusion/calibration.hpp"

#include <algorithm>
#include <cmath>

namespace fusion {

void validate_delta_shifts(const DeltaShifts& shifts) {
    for (double s : shifts.shift_by_size)
        if (!std::isfinite(s))
            throw config_error("BadConfig", "delta shifts must be finite");
}

Score apply_delta_shift(Score score, SizeClass size, const DeltaShifts& shifts) {
    require_finite_score(score, "apply_delta_shift");
    return score + shifts.shift_for(size);
}

void validate_rating_scale(const RatingScale& scale) {
    if (scale.classes.empty())
        throw config_error("BadConfig", "rating scale needs at least one class");
    double prev = 0.0;
    for (size_t i = 0; i < scale.classes.size(); ++i) {
        const auto& cls = scale.classes[i];
        if (cls.label.empty())
            throw config_error("BadConfig", "rating class labels must be nonempty");
        if (!(cls.pd_upper_bound > prev))
            throw config_error("BadConfig",
                               "rating bounds must strictly increase (class " + cls.label + ")");
        prev = cls.pd_upper_bound;
        for (size_t j = 0; j < i; ++j)
            if (scale.classes[j].label == cls.label)
                throw config_error("BadConfig", "duplicate rating label '" + cls.label + "'");
    }
    if (scale.classes.back().pd_upper_bound != 1.0)
        throw config_error("BadConfig", "final rating bound must be the sentinel 1.0");
}

RatingScale default_rating_scale() {
    RatingScale scale;
    const double lo = 0.0003, hi = 0.25;
    const int graded = 8;
    const double ratio = std::pow(hi / lo, 1.0 / (graded - 1));
    for (int i = 0; i < graded; ++i) {
        double bound = lo * std::pow(ratio, i);
        if (i == graded - 1) bound = hi; // pin the top graded bound exactly
        scale.classes.push_back({"R" + std::to_string(i + 1), bound});
    }
    scale.classes.push_back({"R9", 1.0});
    validate_rating_scale(scale);
    return scale;
}

size_t assign_rating(const Probability& p, const RatingScale& scale) {
    validate_rating_scale(scale);
    const double v = p.value();
    // Bounds ascend, so binary search for the first bound > v.
    size_t lo = 0, hi = scale.classes.size() - 1;
    while (lo < hi) {
        const size_t mid = (lo + hi) / 2;
        if (scale.classes[mid].pd_upper_bound > v) hi = mid;
        else lo = mid + 1;
    }
    return lo;
}

const std::string& rating_label(size_t index, const RatingScale& scale) {
    return scale.classes.at(index).label;
}

DeltaShifts fit_delta_shifts(std::span<const Score> predicted_scores,
                             std::span<const Score> reference_scores,
                             std::span<const SizeClass> sizes,
                             size_t min_segment_size) {
    if (predicted_scores.size() != reference_scores.size() ||
        predicted_scores.size() != sizes.size())
        throw data_error("LengthMismatch", "delta shift inputs differ in length");

    std::array<double, 4> sum = {0.0, 0.0, 0.0, 0.0};
    std::array<size_t, 4> count = {0, 0, 0, 0};
    for (size_t i = 0; i < sizes.size(); ++i) {
        require_finite_score(predicted_scores[i], "fit_delta_shifts");
        require_finite_score(reference_scores[i], "fit_delta_shifts");
        const auto idx = static_cast<size_t>(sizes[i]);
        sum[idx] += reference_scores[i] - predicted_scores[i];
        count[idx] += 1;
    }

    DeltaShifts shifts = DeltaShifts::zero();
    for (SizeClass s : kAllSizes) {
        const auto idx = static_cast<size_t>(s);
        if (count[idx] < min_segment_size)
            throw data_error("SegmentTooSmall",
                             "segment '" + to_string(s) + "' has " +
                                 std::to_string(count[idx]) + " pairs, needs " +
                                 std::to_string(min_segment_size));
        shifts.set_shift(s, sum[idx] / static_cast<double>(count[idx]));
    }
    return shifts;
}

} // namespace fusion
