#pragma once

#include "fusion/config.hpp"
#include "fusion/metrics.hpp"
#include "fusion/pipeline.hpp"

#include <nlohmann/json.hpp>

#include <utility>
#include <vector>

namespace fusion {

// Rows with anchor year <= train_end_year vs rows with anchor year ==
// test_year. Throws EmptySide.
std::pair<FeaturePanel, FeaturePanel> temporal_split(const FeaturePanel& panel,
                                                     const SplitSpec& spec);

// Deterministic company-level partition: every company lands in exactly one
// test fold. Throws TooFewCompanies.
std::vector<std::pair<FeaturePanel, FeaturePanel>> cross_sectional_folds(
    const FeaturePanel& panel, const SplitSpec& spec, uint64_t seed);

// One scored model on one evaluation set, summarized. The classification
// threshold is the Youden-J maximizer on the same set and is reported next
// to the threshold-dependent metrics.
struct MetricsBlock {
    size_t n = 0;
    size_t n_pos = 0;
    double auc = 0.0;
    double ks = 0.0;
    double avg_precision = 0.0;
    ConfusionMetrics confusion;
};

MetricsBlock compute_metrics_block(const BinaryEval& eval);
nlohmann::json metrics_block_to_json(const MetricsBlock& block);

// Full suite: align -> transform -> target -> fit -> calibrate -> score ->
// metrics for every configured split, with the two single-source baselines
// and per-size segment rows. Deterministic given (ledger, config).
nlohmann::json run_validation_suite(const ObservationLedger& ledger, const AppConfig& config);

std::string validation_report_to_string(const nlohmann::json& report);

// Grid sweep over (alpha, k); one CSV row of suite metrics per grid point,
// best row flagged by the configured criterion.
std::string run_sweep(const ObservationLedger& ledger, const AppConfig& config);

} // namespace fusion
