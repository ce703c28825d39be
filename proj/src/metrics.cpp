#include "fusion/metrics.hpp"

#include "fusion/parallel.hpp"
#include "fusion/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace fusion {

namespace {

struct ClassCounts {
    size_t n_pos = 0;
    size_t n_neg = 0;
};

ClassCounts count_classes(const BinaryEval& eval) {
    ClassCounts c;
    for (int y : eval.labels) {
        if (y == 1) ++c.n_pos;
        else ++c.n_neg;
    }
    return c;
}

// (threshold, tp, fp) cumulative counts scanning distinct scores descending;
// shared backbone of the ROC/PR/Youden computations.
struct SweepPoint {
    double threshold;
    size_t tp;
    size_t fp;
};

std::vector<SweepPoint> threshold_sweep(const BinaryEval& eval) {
    std::vector<size_t> order(eval.scores.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return eval.scores[a] > eval.scores[b];
    });
    std::vector<SweepPoint> points;
    size_t tp = 0, fp = 0;
    size_t i = 0;
    while (i < order.size()) {
        const double t = eval.scores[order[i]];
        while (i < order.size() && eval.scores[order[i]] == t) {
            if (eval.labels[order[i]] == 1) ++tp;
            else ++fp;
            ++i;
        }
        points.push_back({t, tp, fp});
    }
    return points;
}

} // namespace

void validate_binary_eval(const BinaryEval& eval, bool require_both_classes) {
    if (eval.scores.size() != eval.labels.size())
        throw data_error("LengthMismatch", "scores and labels differ in length");
    if (!eval.groups.empty() && eval.groups.size() != eval.scores.size())
        throw data_error("LengthMismatch", "groups and scores differ in length");
    if (eval.scores.empty()) throw data_error("EmptyEval", "no observations");
    for (int y : eval.labels)
        if (y != 0 && y != 1) throw data_error("BadLabel", "labels must be 0 or 1");
    if (require_both_classes) {
        auto c = count_classes(eval);
        if (c.n_pos == 0 || c.n_neg == 0)
            throw data_error("SingleClass", "rank metrics need both classes present");
    }
}

double roc_auc(const BinaryEval& eval) {
    validate_binary_eval(eval, true);
    const auto c = count_classes(eval);
    const size_t n = eval.scores.size();

    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return eval.scores[a] < eval.scores[b];
    });

    // Mann-Whitney via midranks so ties count 1/2.
    double rank_sum_pos = 0.0;
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j < n && eval.scores[order[j]] == eval.scores[order[i]]) ++j;
        const double midrank = 0.5 * static_cast<double>(i + 1 + j); // ranks are 1-based
        for (size_t k = i; k < j; ++k)
            if (eval.labels[order[k]] == 1) rank_sum_pos += midrank;
        i = j;
    }
    const double np = static_cast<double>(c.n_pos);
    const double nn = static_cast<double>(c.n_neg);
    return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
}

double ks_statistic(const BinaryEval& eval) {
    validate_binary_eval(eval, true);
    const auto c = count_classes(eval);
    const auto sweep = threshold_sweep(eval);
    double best = 0.0;
    for (const auto& p : sweep) {
        const double d = std::fabs(static_cast<double>(p.tp) / static_cast<double>(c.n_pos) -
                                   static_cast<double>(p.fp) / static_cast<double>(c.n_neg));
        best = std::max(best, d);
    }
    return best;
}

ConfusionMetrics confusion_metrics(const BinaryEval& eval, double threshold) {
    validate_binary_eval(eval, false);
    size_t tp = 0, fp = 0, tn = 0, fn = 0;
    for (size_t i = 0; i < eval.scores.size(); ++i) {
        const bool predicted = eval.scores[i] >= threshold;
        if (eval.labels[i] == 1) {
            if (predicted) ++tp;
            else ++fn;
        } else {
            if (predicted) ++fp;
            else ++tn;
        }
    }
    ConfusionMetrics m;
    m.threshold = threshold;
    if (tp + fp > 0) m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    if (tp + fn > 0) m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    if (tn + fp > 0) m.specificity = static_cast<double>(tn) / static_cast<double>(tn + fp);
    if (m.precision && m.recall && (*m.precision + *m.recall) > 0.0)
        m.f_measure = 2.0 * *m.precision * *m.recall / (*m.precision + *m.recall);
    return m;
}

double youden_threshold(const BinaryEval& eval) {
    validate_binary_eval(eval, true);
    const auto c = count_classes(eval);
    const auto sweep = threshold_sweep(eval);
    double best_j = -2.0;
    double best_t = sweep.front().threshold;
    // Sweep runs from the highest threshold down; prefer the smallest
    // maximizer, so >= keeps later (smaller) thresholds on ties.
    for (const auto& p : sweep) {
        const double j = static_cast<double>(p.tp) / static_cast<double>(c.n_pos) -
                         static_cast<double>(p.fp) / static_cast<double>(c.n_neg);
        if (j >= best_j) {
            best_j = j;
            best_t = p.threshold;
        }
    }
    return best_t;
}

double average_precision(const BinaryEval& eval) {
    validate_binary_eval(eval, false);
    const auto c = count_classes(eval);
    if (c.n_pos == 0) throw data_error("NoPositives", "average precision needs a positive");
    const auto sweep = threshold_sweep(eval);
    double ap = 0.0;
    double prev_recall = 0.0;
    for (const auto& p : sweep) {
        const double recall = static_cast<double>(p.tp) / static_cast<double>(c.n_pos);
        const double precision =
            static_cast<double>(p.tp) / static_cast<double>(p.tp + p.fp);
        ap += (recall - prev_recall) * precision;
        prev_recall = recall;
    }
    return ap;
}

std::vector<std::pair<double, double>> roc_curve(const BinaryEval& eval) {
    validate_binary_eval(eval, true);
    const auto c = count_classes(eval);
    const auto sweep = threshold_sweep(eval);
    std::vector<std::pair<double, double>> pts;
    pts.reserve(sweep.size() + 1);
    pts.emplace_back(0.0, 0.0);
    for (const auto& p : sweep)
        pts.emplace_back(static_cast<double>(p.fp) / static_cast<double>(c.n_neg),
                         static_cast<double>(p.tp) / static_cast<double>(c.n_pos));
    return pts;
}

std::vector<std::pair<double, double>> pr_curve(const BinaryEval& eval) {
    validate_binary_eval(eval, true);
    const auto c = count_classes(eval);
    const auto sweep = threshold_sweep(eval);
    std::vector<std::pair<double, double>> pts;
    pts.reserve(sweep.size());
    for (const auto& p : sweep)
        pts.emplace_back(static_cast<double>(p.tp) / static_cast<double>(c.n_pos),
                         static_cast<double>(p.tp) / static_cast<double>(p.tp + p.fp));
    return pts;
}

double quadratic_weighted_kappa(const RatingPairs& pairs) {
    const size_t n = pairs.predicted.size();
    if (n != pairs.actual.size())
        throw data_error("LengthMismatch", "predicted and actual differ in length");
    if (n < 2) throw data_error("TooFewPairs", "kappa needs at least 2 pairs");
    const int k = pairs.n_classes;
    if (k < 1) throw data_error("BadClassCount", "n_classes must be >= 1");
    for (size_t i = 0; i < n; ++i) {
        if (pairs.predicted[i] < 0 || pairs.predicted[i] >= k ||
            pairs.actual[i] < 0 || pairs.actual[i] >= k)
            throw data_error("BadClassIndex", "rating index outside [0, n_classes)");
    }

    std::vector<double> observed(static_cast<size_t>(k) * k, 0.0);
    std::vector<double> row(k, 0.0), col(k, 0.0);
    for (size_t i = 0; i < n; ++i) {
        observed[static_cast<size_t>(pairs.actual[i]) * k + pairs.predicted[i]] += 1.0;
        row[pairs.actual[i]] += 1.0;
        col[pairs.predicted[i]] += 1.0;
    }

    const double denom_w = k > 1 ? static_cast<double>((k - 1) * (k - 1)) : 1.0;
    double num = 0.0, den = 0.0;
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            const double w = static_cast<double>((i - j) * (i - j)) / denom_w;
            num += w * observed[static_cast<size_t>(i) * k + j];
            den += w * row[i] * col[j] / static_cast<double>(n);
        }
    }
    if (den == 0.0) {
        if (num == 0.0) return 1.0; // everything in one identical class
        throw data_error("DegenerateMarginals",
                         "expected disagreement is zero but observed is not");
    }
    return 1.0 - num / den;
}

PseudoR2 pseudo_r2(double loglik, double loglik_null, size_t n) {
    if (loglik < loglik_null - 1e-9 * std::max(1.0, std::fabs(loglik_null)))
        throw numeric_error("NullBetterThanFit",
                            "fitted log-likelihood below the null model's");
    PseudoR2 r;
    if (loglik_null == 0.0) {
        r.mcfadden = 0.0;
        r.nagelkerke = 0.0;
        return r;
    }
    r.mcfadden = 1.0 - loglik / loglik_null;
    const double nd = static_cast<double>(n);
    const double cox_snell = 1.0 - std::exp(2.0 * (loglik_null - loglik) / nd);
    const double max_cs = 1.0 - std::exp(2.0 * loglik_null / nd);
    r.nagelkerke = max_cs > 0.0 ? cox_snell / max_cs : 0.0;
    return r;
}

Interval bootstrap_ci(const MetricFn& metric, const BinaryEval& eval, int n_boot,
                      uint64_t seed, double level, int threads) {
    validate_binary_eval(eval, false);
    if (n_boot < 100)
        throw config_error("BadConfig", "bootstrap needs n_boot >= 100");
    if (!(level > 0.0 && level < 1.0))
        throw config_error("BadConfig", "bootstrap level must lie in (0, 1)");

    // Build group index: map each distinct group to its row indices.
    std::vector<std::vector<size_t>> units;
    if (eval.groups.empty()) {
        units.reserve(eval.scores.size());
        for (size_t i = 0; i < eval.scores.size(); ++i) units.push_back({i});
    } else {
        std::map<std::string, std::vector<size_t>> by_group;
        for (size_t i = 0; i < eval.groups.size(); ++i)
            by_group[eval.groups[i]].push_back(i);
        units.reserve(by_group.size());
        for (auto& [g, idx] : by_group) units.push_back(std::move(idx));
    }

    std::vector<double> values(static_cast<size_t>(n_boot),
                               std::numeric_limits<double>::quiet_NaN());
    parallel_for(static_cast<size_t>(n_boot), threads, [&](size_t rep) {
        RandomStream rng(derive_seed(seed, "bootstrap", rep));
        BinaryEval sample;
        for (size_t draw = 0; draw < units.size(); ++draw) {
            const auto& unit = units[rng.uniform_int(units.size())];
            for (size_t i : unit) {
                sample.scores.push_back(eval.scores[i]);
                sample.labels.push_back(eval.labels[i]);
            }
        }
        try {
            values[rep] = metric(sample);
        } catch (const Error&) {
            // metric undefined on this resample (e.g. single class); dropped
        }
    });

    std::vector<double> kept;
    kept.reserve(values.size());
    for (double v : values)
        if (!std::isnan(v)) kept.push_back(v);
    if (kept.empty())
        throw data_error("DegenerateBootstrap", "metric undefined on every resample");
    std::sort(kept.begin(), kept.end());

    auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(kept.size() - 1);
        const size_t lo = static_cast<size_t>(pos);
        const size_t hi = std::min(lo + 1, kept.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        return kept[lo] * (1.0 - frac) + kept[hi] * frac;
    };
    const double tail = (1.0 - level) / 2.0;
    return Interval{quantile(tail), quantile(1.0 - tail)};
}

} // namespace fusion
