#pragma once

#include "fusion/errors.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fusion {

// Scored binary outcomes. `groups` is optional (same length when present)
// and identifies the resampling unit for the bootstrap: monthly rows of one
// company are strongly dependent, so resampling happens at company level.
struct BinaryEval {
    std::vector<double> scores;
    std::vector<int> labels; // 0/1
    std::vector<std::string> groups;
};

void validate_binary_eval(const BinaryEval& eval, bool require_both_classes);

// Probability that a random positive outranks a random negative, ties 1/2
// (Mann-Whitney). Throws SingleClass.
double roc_auc(const BinaryEval& eval);

// max over thresholds of |CDF_pos - CDF_neg|. Throws SingleClass.
double ks_statistic(const BinaryEval& eval);

struct ConfusionMetrics {
    double threshold = 0.0;
    // Absent when undefined (e.g. precision with zero predicted positives);
    // never silently reported as 0.
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> specificity;
    std::optional<double> f_measure;
};

// Predicted positive iff score >= threshold.
ConfusionMetrics confusion_metrics(const BinaryEval& eval, double threshold);

// Smallest threshold maximizing Youden's J = recall + specificity - 1,
// scanned over the distinct observed scores.
double youden_threshold(const BinaryEval& eval);

// Step-wise integral of the PR curve over distinct thresholds. Throws
// NoPositives.
double average_precision(const BinaryEval& eval);

// Curve points for reporting: ROC as (fpr, tpr) from (0,0) to (1,1),
// PR as (recall, precision) over descending thresholds.
std::vector<std::pair<double, double>> roc_curve(const BinaryEval& eval);
std::vector<std::pair<double, double>> pr_curve(const BinaryEval& eval);

struct RatingPairs {
    std::vector<int> predicted; // ordinal indices in [0, n_classes)
    std::vector<int> actual;
    int n_classes = 0;
};

// 1 - sum(w*O)/sum(w*E), w_ij = (i-j)^2/(n_classes-1)^2. All ratings in one
// identical class on both sides yields 1.0; throws DegenerateMarginals when
// the expected disagreement is zero but the observed one is not.
double quadratic_weighted_kappa(const RatingPairs& pairs);

struct PseudoR2 {
    double mcfadden = 0.0;
    double nagelkerke = 0.0;
};

// Throws NullBetterThanFit when loglik < loglik_null (a fitting bug).
PseudoR2 pseudo_r2(double loglik, double loglik_null, size_t n);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

using MetricFn = std::function<double(const BinaryEval&)>;

// Percentile bootstrap interval. Resampling draws groups (companies) with
// replacement when groups are present, rows otherwise. Replicate r uses a
// generator seeded from (seed, r), so the result does not depend on the
// number of threads. Replicates where the metric is undefined are dropped.
Interval bootstrap_ci(const MetricFn& metric, const BinaryEval& eval, int n_boot,
                      uint64_t seed, double level, int threads = 1);

} // namespace fusion
