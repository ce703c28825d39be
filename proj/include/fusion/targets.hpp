#pragma once

#include "fusion/dates.hpp"
#include "fusion/domain.hpp"

#include <map>
#include <optional>
#include <vector>

namespace fusion {

enum class ManualOverride { force_default, force_non_default };

// Default indicators for one company-month: three system flags plus an
// optional manual correction that is applied last.
struct DefaultRecord {
    std::string company_id;
    Date month; // month-end date
    bool rettificato = false;
    bool orbis_bankruptcy = false;
    bool internal = false;
    std::optional<ManualOverride> manual_override;
};

bool union_default(const DefaultRecord& record);

DefaultRecord default_record_from_observation(const Observation& obs);

// Months with union_default == true, plus how far coverage extends.
struct DefaultHistory {
    std::vector<Date> default_months;    // sorted month-end dates
    std::optional<Date> coverage_end;    // latest month with any default-flag data

    bool has_default_in(const Date& after_exclusive, const Date& until_inclusive) const;
};

DefaultHistory collect_default_history(const ObservationLedger& ledger,
                                       const std::string& company_id);

// 1 iff any of the 12 months following the anchor has a default. Throws
// InsufficientHorizon when coverage ends inside the horizon without a
// default (right-censored; callers exclude such rows rather than label 0).
int static_target(const DefaultHistory& history, const Date& anchor);

struct InterpolationConfig {
    double k = 3.0; // |k| < 1e-8 degrades to the linear limit
};

void validate_interpolation_config(const InterpolationConfig& cfg);

// Weight w(tau; k) = (e^{k*tau} - 1) / (e^k - 1); w(0)=0, w(1)=1, convex for
// k > 0 (slow early transition, acceleration toward the next anchor).
double interpolation_weight(double tau, const InterpolationConfig& cfg);

// s0 + (s1 - s0) * w(tau; k). Throws TauOutOfRange.
Score interpolate_score(Score s0, Score s1, double tau, const InterpolationConfig& cfg);

struct DynamicTargetRow {
    std::string company_id;
    Date month; // month-end
    Score target;
};

struct DynamicTargetExclusion {
    std::string company_id;
    Date month;
    std::string reason;
};

struct DynamicTargetPanel {
    std::vector<DynamicTargetRow> rows;
    std::vector<DynamicTargetExclusion> exclusions;
};

// Static scores per company per anchor date (Dec 31), company -> sorted map.
using StaticScoresByAnchor = std::map<std::string, std::map<Date, Score>>;

// For each month between consecutive anchors both present for the company,
// emits the interpolated target at tau = months_since_anchor / 12. Anchor
// months carry the anchor score exactly. Months of the grid whose bracketing
// anchors are missing go to the exclusion list with reason MissingAnchor.
DynamicTargetPanel build_dynamic_targets(const StaticScoresByAnchor& static_scores,
                                         const std::vector<Date>& monthly_grid,
                                         const InterpolationConfig& cfg);

} // namespace fusion
