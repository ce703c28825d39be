#include "fusion/targets.hpp"

#include <algorithm>
#include <cmath>

namespace fusion {

bool union_default(const DefaultRecord& record) {
    bool value = record.rettificato || record.orbis_bankruptcy || record.internal;
    if (record.manual_override) {
        // Manual inspection wins: confirmed proceedings are added, false
        // positives removed.
        value = (*record.manual_override == ManualOverride::force_default);
    }
    return value;
}

DefaultRecord default_record_from_observation(const Observation& obs) {
    if (obs.source != SourceKind::default_flag)
        throw data_error("BadSourceKind", "default record requires a default_flag observation");
    DefaultRecord rec;
    rec.company_id = obs.company_id;
    rec.month = obs.reference_date;
    rec.rettificato = obs.flag("rettificato");
    rec.orbis_bankruptcy = obs.flag("orbis_bankruptcy");
    rec.internal = obs.flag("internal");
    if (auto v = obs.value("manual_override")) {
        if (*v > 0.0) rec.manual_override = ManualOverride::force_default;
        else if (*v < 0.0) rec.manual_override = ManualOverride::force_non_default;
    }
    return rec;
}

bool DefaultHistory::has_default_in(const Date& after_exclusive,
                                    const Date& until_inclusive) const {
    for (const Date& d : default_months)
        if (after_exclusive < d && d <= until_inclusive) return true;
    return false;
}

DefaultHistory collect_default_history(const ObservationLedger& ledger,
                                       const std::string& company_id) {
    DefaultHistory hist;
    for (const Observation* obs : ledger.series(company_id, SourceKind::default_flag)) {
        if (!hist.coverage_end || *hist.coverage_end < obs->reference_date)
            hist.coverage_end = obs->reference_date;
        if (union_default(default_record_from_observation(*obs)))
            hist.default_months.push_back(obs->reference_date);
    }
    std::sort(hist.default_months.begin(), hist.default_months.end());
    return hist;
}

int static_target(const DefaultHistory& history, const Date& anchor) {
    const Date horizon_end = add_months(anchor, 12);
    if (history.has_default_in(anchor, horizon_end)) return 1;
    if (!history.coverage_end || *history.coverage_end < horizon_end)
        throw data_error("InsufficientHorizon",
                         "coverage ends before " + to_string(horizon_end) +
                             " with no observed default (right-censored)");
    return 0;
}

void validate_interpolation_config(const InterpolationConfig& cfg) {
    if (!std::isfinite(cfg.k))
        throw config_error("BadConfig", "interpolation k must be finite");
}

double interpolation_weight(double tau, const InterpolationConfig& cfg) {
    validate_interpolation_config(cfg);
    if (tau < 0.0 || tau > 1.0)
        throw numeric_error("TauOutOfRange",
                            "tau must lie in [0, 1], got " + std::to_string(tau));
    const double k = cfg.k;
    if (std::fabs(k) < 1e-8) return tau; // linear limit
    return std::expm1(k * tau) / std::expm1(k);
}

Score interpolate_score(Score s0, Score s1, double tau, const InterpolationConfig& cfg) {
    require_finite_score(s0, "interpolate_score");
    require_finite_score(s1, "interpolate_score");
    return s0 + (s1 - s0) * interpolation_weight(tau, cfg);
}

DynamicTargetPanel build_dynamic_targets(const StaticScoresByAnchor& static_scores,
                                         const std::vector<Date>& monthly_grid,
                                         const InterpolationConfig& cfg) {
    validate_interpolation_config(cfg);
    DynamicTargetPanel panel;
    for (const auto& [company, anchors] : static_scores) {
        for (const Date& month : monthly_grid) {
            // Bracketing anchors: latest anchor <= month and the next one.
            auto next = anchors.upper_bound(month);
            if (next == anchors.begin()) {
                panel.exclusions.push_back({company, month, "MissingAnchor"});
                continue;
            }
            auto prev = std::prev(next);
            const int elapsed = months_between(prev->first, month);
            if (elapsed == 0) {
                panel.rows.push_back({company, month, prev->second});
                continue;
            }
            if (next == anchors.end() || months_between(prev->first, next->first) != 12) {
                panel.exclusions.push_back({company, month, "MissingAnchor"});
                continue;
            }
            const double tau = static_cast<double>(elapsed) / 12.0;
            panel.rows.push_back(
                {company, month,
                 interpolate_score(prev->second, next->second, tau, cfg)});
        }
    }
    return panel;
}

} // namespace fusion
