#pragma once

#include "fusion/artifact.hpp"
#include "fusion/calibration.hpp"
#include "fusion/config.hpp"
#include "fusion/models.hpp"
#include "fusion/pit.hpp"
#include "fusion/targets.hpp"

#include <set>
#include <string>
#include <vector>

namespace fusion {

// Anchor years whose December 31st has balance-sheet data and whose
// 12-month label horizon is fully covered by the ledger.
std::vector<int> usable_anchor_years(const ObservationLedger& ledger);

// Anchor panels for the given years, with the 12-month default target
// attached. Right-censored company-anchors go to the exclusion list with
// reason "censored" instead of being labeled 0.
FeaturePanel build_static_training_panel(const ObservationLedger& ledger,
                                         const std::vector<int>& years,
                                         const LagPolicy& lags,
                                         const AnchorOptions& anchor_options);

// Feature rows standardized with scalers fitted on this panel (training) or
// with frozen scalers (scoring/test).
struct StandardizedPanel {
    std::vector<DesignRow> rows;
    std::vector<int> labels;
    std::vector<std::string> companies;
    Scaler crd_scaler;
    Scaler bhv_scaler;
};

StandardizedPanel standardize_panel(const FeaturePanel& panel);
std::vector<DesignRow> standardize_with(const FeaturePanel& panel, const Scaler& crd,
                                        const Scaler& bhv);

// The fusion meta-learner plus the two single-source baselines fitted on the
// same rows; scalers are embedded into each model.
struct StaticModels {
    FittedModel fusion;
    FittedModel bhv_baseline;
    FittedModel crd_baseline;
};

StaticModels fit_static_models(const StandardizedPanel& panel, const IrlsOptions& options);

struct DynamicPanelRow {
    std::string company_id;
    Date month;
    DesignRow features;   // crd_z standardized with the static scaler,
                          // bhv_z the standardized EWMA stream
    double target = 0.0;  // interpolated static score
    int months_since_anchor = 0; // 0 on anchor months
    bool has_prior_anchor = false;
    Date crd_reference_date;
    Date crd_availability_date;
    Date bhv_reference_date;
    Date bhv_availability_date;
    int crd_staleness_months = 0;
    int bhv_staleness_months = 0;
};

struct DynamicPanel {
    std::vector<DynamicPanelRow> rows;
    std::vector<Exclusion> exclusions;
    Scaler crd_scaler;  // reused from the static model
    Scaler bhv_scaler;  // fitted on the EWMA stream unless frozen
    EwmaConfig ewma;
    InterpolationConfig interpolation;
};

// Builds the monthly panel between consecutive anchors of `anchor_years`:
// targets interpolate the static model's anchor scores, features are the
// point-in-time balance-sheet score and the EWMA-smoothed behavioral score
// at each month (reference mode). `company_filter`, when non-null, restricts
// to those companies. `frozen_bhv_scaler` applies a training-time scaler
// instead of refitting (test/scoring discipline).
DynamicPanel build_dynamic_panel(const ObservationLedger& ledger,
                                 const FittedModel& static_model,
                                 const std::vector<int>& anchor_years,
                                 const EwmaConfig& ewma_config,
                                 const InterpolationConfig& interpolation,
                                 const LagPolicy& lags,
                                 const std::set<std::string>* company_filter = nullptr,
                                 const Scaler* frozen_bhv_scaler = nullptr);

// OLS on the dynamic panel; embeds scalers and EWMA config into the model.
FittedModel fit_dynamic_model(const DynamicPanel& panel);

std::vector<AuditEntry> audit_entries(const DynamicPanel& panel);

struct ScoredRow {
    std::string company_id;
    Date evaluation_date;
    SizeClass size = SizeClass::large;
    double score = 0.0;         // model score, logit space
    double probability = 0.0;   // inverse_logit(score)
    double shifted_score = 0.0; // score + size delta shift
    double shifted_probability = 0.0;
    std::string rating;
    int crd_staleness_months = 0;
    int bhv_staleness_months = 0;
};

struct ScoringResult {
    PitMode mode = PitMode::reference;
    std::vector<ScoredRow> rows;
    std::vector<Exclusion> exclusions;
    std::vector<AuditEntry> audit;
};

// Scores every company in the ledger at the evaluation date with the given
// artifact (static or dynamic), enforcing the artifact's frozen scalers and
// the requested PIT mode. Unscoreable companies are excluded with reasons
// (missing_crd, crd_not_yet_published, ...).
ScoringResult score_at_date(const ObservationLedger& ledger, const ModelArtifact& artifact,
                            const Date& evaluation_date, PitMode mode);

std::string scored_rows_to_csv(const ScoringResult& result);

} // namespace fusion
