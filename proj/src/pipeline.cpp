#include "fusion/pipeline.hpp"

#include "fusion/io.hpp"
#include "fusion/transforms.hpp"

#include <algorithm>
#include <cmath>

namespace fusion {

std::vector<int> usable_anchor_years(const ObservationLedger& ledger) {
    if (ledger.empty()) return {};
    const auto max_ref = ledger.max_reference_date();

    std::set<int> sheet_years;
    for (const auto& [key, obs] : ledger.entries()) {
        if (key.source != SourceKind::balance_sheet) continue;
        if (key.reference_date == dec31(key.reference_date.year))
            sheet_years.insert(key.reference_date.year);
    }
    std::vector<int> years;
    for (int y : sheet_years) {
        // Full 12-month label horizon must be observable.
        if (!(*max_ref < add_months(dec31(y), 12))) years.push_back(y);
    }
    return years;
}

FeaturePanel build_static_training_panel(const ObservationLedger& ledger,
                                         const std::vector<int>& years,
                                         const LagPolicy& lags,
                                         const AnchorOptions& anchor_options) {
    FeaturePanel combined;
    combined.mode = PitMode::reference;
    for (int year : years) {
        FeaturePanel panel = anchor_panel(ledger, year, lags, anchor_options);
        const Date anchor = dec31(year);
        for (PanelRow& row : panel.rows) {
            const DefaultHistory history = collect_default_history(ledger, row.company_id);
            try {
                row.label = static_target(history, anchor);
                combined.rows.push_back(std::move(row));
            } catch (const Error& e) {
                if (e.code() == "InsufficientHorizon")
                    combined.exclusions.push_back({row.company_id, anchor, "censored"});
                else
                    throw;
            }
        }
        for (Exclusion& e : panel.exclusions) combined.exclusions.push_back(std::move(e));
    }
    return combined;
}

StandardizedPanel standardize_panel(const FeaturePanel& panel) {
    if (panel.rows.empty())
        throw data_error("EmptyPanel", "cannot standardize an empty panel");
    std::vector<Score> crd_logits, bhv_logits;
    crd_logits.reserve(panel.rows.size());
    bhv_logits.reserve(panel.rows.size());
    for (const PanelRow& row : panel.rows) {
        crd_logits.push_back(logit(Probability(row.pd_crd)));
        bhv_logits.push_back(logit(Probability(row.pd_bhv)));
    }
    StandardizedPanel out;
    out.crd_scaler = fit_scaler(crd_logits);
    out.bhv_scaler = fit_scaler(bhv_logits);
    out.rows.reserve(panel.rows.size());
    for (size_t i = 0; i < panel.rows.size(); ++i) {
        const PanelRow& row = panel.rows[i];
        out.rows.push_back({apply_scaler(out.crd_scaler, crd_logits[i]),
                            apply_scaler(out.bhv_scaler, bhv_logits[i]), row.size});
        out.labels.push_back(row.label.value_or(0));
        out.companies.push_back(row.company_id);
    }
    return out;
}

std::vector<DesignRow> standardize_with(const FeaturePanel& panel, const Scaler& crd,
                                        const Scaler& bhv) {
    std::vector<DesignRow> rows;
    rows.reserve(panel.rows.size());
    for (const PanelRow& row : panel.rows) {
        rows.push_back({apply_scaler(crd, logit(Probability(row.pd_crd))),
                        apply_scaler(bhv, logit(Probability(row.pd_bhv))), row.size});
    }
    return rows;
}

StaticModels fit_static_models(const StandardizedPanel& panel, const IrlsOptions& options) {
    StaticModels models;
    models.fusion = fit_logistic(fusion_design(panel.rows), panel.labels, options);
    models.bhv_baseline =
        fit_logistic(single_source_design(panel.rows, false), panel.labels, options);
    models.crd_baseline =
        fit_logistic(single_source_design(panel.rows, true), panel.labels, options);
    for (FittedModel* m : {&models.fusion, &models.bhv_baseline, &models.crd_baseline}) {
        m->crd_scaler = panel.crd_scaler;
        m->bhv_scaler = panel.bhv_scaler;
    }
    return models;
}

namespace {

struct SheetSeries {
    std::vector<const Observation*> sheets; // sorted by reference date
    const Observation* latest_at(const Date& eval, PitMode mode) const {
        const Observation* best = nullptr;
        for (const Observation* obs : sheets) {
            if (eval < obs->reference_date) break;
            if (mode == PitMode::availability && eval < obs->availability_date) continue;
            best = obs;
        }
        return best;
    }
};

struct BhvSeries {
    std::vector<const Observation*> obs; // sorted by reference date
    std::vector<double> ewma_raw;        // EWMA'd series in configured space

    // Index of the newest entry usable at eval under the mode, or -1.
    ptrdiff_t latest_index(const Date& eval, PitMode mode) const {
        ptrdiff_t best = -1;
        for (size_t i = 0; i < obs.size(); ++i) {
            if (eval < obs[i]->reference_date) break;
            if (mode == PitMode::availability && eval < obs[i]->availability_date) continue;
            best = static_cast<ptrdiff_t>(i);
        }
        return best;
    }
};

BhvSeries build_bhv_series(const ObservationLedger& ledger, const std::string& company,
                           const EwmaConfig& ewma_config) {
    BhvSeries series;
    std::vector<double> raw;
    for (const Observation* obs : ledger.series(company, SourceKind::credit_register)) {
        const auto pd = obs->value("pd_bhv");
        if (!pd) continue;
        series.obs.push_back(obs);
        raw.push_back(ewma_config.space == EwmaSpace::logit ? logit(Probability(*pd)) : *pd);
    }
    if (!raw.empty()) {
        series.ewma_raw = ewma(raw, ewma_config);
        if (ewma_config.space == EwmaSpace::probability)
            for (double& v : series.ewma_raw) v = logit(Probability(v));
    }
    return series;
}

} // namespace

DynamicPanel build_dynamic_panel(const ObservationLedger& ledger,
                                 const FittedModel& static_model,
                                 const std::vector<int>& anchor_years,
                                 const EwmaConfig& ewma_config,
                                 const InterpolationConfig& interpolation,
                                 const LagPolicy& lags,
                                 const std::set<std::string>* company_filter,
                                 const Scaler* frozen_bhv_scaler) {
    validate_ewma_config(ewma_config);
    validate_interpolation_config(interpolation);
    if (anchor_years.empty())
        throw data_error("MissingAnchor", "dynamic panel needs at least one anchor year");

    std::vector<int> years(anchor_years);
    std::sort(years.begin(), years.end());

    DynamicPanel panel;
    panel.crd_scaler = static_model.crd_scaler;
    panel.ewma = ewma_config;
    panel.interpolation = interpolation;

    // Static anchor scores per company from the fitted static model.
    StaticScoresByAnchor static_scores;
    for (int year : years) {
        FeaturePanel anchor = anchor_panel(ledger, year, lags);
        for (const PanelRow& row : anchor.rows) {
            if (company_filter && !company_filter->count(row.company_id)) continue;
            const DesignRow features{
                apply_scaler(static_model.crd_scaler, logit(Probability(row.pd_crd))),
                apply_scaler(static_model.bhv_scaler, logit(Probability(row.pd_bhv))),
                row.size};
            static_scores[row.company_id][dec31(year)] =
                static_model.linear_predictor(features);
        }
    }
    if (static_scores.empty())
        throw data_error("MissingAnchor", "no company has static anchor scores");

    std::vector<Date> grid;
    for (Date m = dec31(years.front()); m <= dec31(years.back()); m = add_months(m, 1))
        grid.push_back(m);

    DynamicTargetPanel targets = build_dynamic_targets(static_scores, grid, interpolation);
    for (auto& e : targets.exclusions)
        panel.exclusions.push_back({e.company_id, e.month, e.reason});

    // Feature pass: raw EWMA values first, standardization once the scaler
    // is known (fitted on this panel unless frozen).
    struct Pending {
        DynamicPanelRow row;
        double bhv_ewma_raw;
    };
    std::vector<Pending> pending;
    std::string current_company;
    SheetSeries sheets;
    BhvSeries bhv;

    for (const DynamicTargetRow& t : targets.rows) {
        if (t.company_id != current_company) {
            current_company = t.company_id;
            sheets.sheets = ledger.series(current_company, SourceKind::balance_sheet);
            bhv = build_bhv_series(ledger, current_company, ewma_config);
        }
        const Observation* sheet = sheets.latest_at(t.month, PitMode::reference);
        if (!sheet || !sheet->value("pd_crd")) {
            panel.exclusions.push_back({t.company_id, t.month, "missing_crd_asof"});
            continue;
        }
        const auto size = size_class_from_payload(*sheet);
        if (!size) {
            panel.exclusions.push_back({t.company_id, t.month, "missing_size"});
            continue;
        }
        const ptrdiff_t bhv_idx = bhv.latest_index(t.month, PitMode::reference);
        if (bhv_idx < 0) {
            panel.exclusions.push_back({t.company_id, t.month, "missing_bhv_asof"});
            continue;
        }

        const auto& anchors = static_scores.at(t.company_id);
        auto next = anchors.upper_bound(t.month);
        const Date prior_anchor = std::prev(next)->first;

        Pending p;
        p.row.company_id = t.company_id;
        p.row.month = t.month;
        p.row.target = t.target;
        p.row.months_since_anchor = months_between(prior_anchor, t.month);
        p.row.has_prior_anchor =
            p.row.months_since_anchor > 0 ||
            anchors.count(add_months(t.month, -12)) > 0;
        p.row.features.crd_z =
            apply_scaler(static_model.crd_scaler, logit(Probability(*sheet->value("pd_crd"))));
        p.row.features.size = *size;
        p.row.crd_reference_date = sheet->reference_date;
        p.row.crd_availability_date = sheet->availability_date;
        p.row.crd_staleness_months = months_between(sheet->reference_date, t.month);
        const Observation* bhv_obs = bhv.obs[static_cast<size_t>(bhv_idx)];
        p.row.bhv_reference_date = bhv_obs->reference_date;
        p.row.bhv_availability_date = bhv_obs->availability_date;
        p.row.bhv_staleness_months = months_between(bhv_obs->reference_date, t.month);
        p.bhv_ewma_raw = bhv.ewma_raw[static_cast<size_t>(bhv_idx)];
        pending.push_back(std::move(p));
    }

    if (pending.empty())
        throw data_error("MissingAnchor", "dynamic panel is empty after feature alignment");

    if (frozen_bhv_scaler) {
        panel.bhv_scaler = *frozen_bhv_scaler;
    } else {
        std::vector<double> stream;
        stream.reserve(pending.size());
        for (const Pending& p : pending) stream.push_back(p.bhv_ewma_raw);
        panel.bhv_scaler = fit_scaler(stream);
    }

    panel.rows.reserve(pending.size());
    for (Pending& p : pending) {
        p.row.features.bhv_z = apply_scaler(panel.bhv_scaler, p.bhv_ewma_raw);
        panel.rows.push_back(std::move(p.row));
    }
    return panel;
}

FittedModel fit_dynamic_model(const DynamicPanel& panel) {
    std::vector<DesignRow> rows;
    std::vector<double> targets;
    rows.reserve(panel.rows.size());
    targets.reserve(panel.rows.size());
    for (const DynamicPanelRow& row : panel.rows) {
        rows.push_back(row.features);
        targets.push_back(row.target);
    }
    FittedModel model = fit_ols(rows, targets);
    model.crd_scaler = panel.crd_scaler;
    model.bhv_scaler = panel.bhv_scaler;
    model.ewma = panel.ewma;
    return model;
}

std::vector<AuditEntry> audit_entries(const DynamicPanel& panel) {
    std::vector<AuditEntry> out;
    out.reserve(panel.rows.size() * 2);
    for (const DynamicPanelRow& row : panel.rows) {
        out.push_back({row.company_id, SourceKind::balance_sheet, row.crd_reference_date,
                       row.crd_availability_date, row.month, PitMode::reference});
        out.push_back({row.company_id, SourceKind::credit_register, row.bhv_reference_date,
                       row.bhv_availability_date, row.month, PitMode::reference});
    }
    return out;
}

ScoringResult score_at_date(const ObservationLedger& ledger, const ModelArtifact& artifact,
                            const Date& evaluation_date, PitMode mode) {
    validate_artifact(artifact);
    if (ledger.empty()) throw data_error("EmptyLedger", "scoring over an empty ledger");

    const FittedModel& model = artifact.model;
    const EwmaConfig ewma_config =
        model.ewma.value_or(EwmaConfig{1.0, EwmaSpace::logit}); // static path: no smoothing

    ScoringResult result;
    result.mode = mode;

    for (const std::string& company : ledger.companies()) {
        SheetSeries sheets{ledger.series(company, SourceKind::balance_sheet)};
        const Observation* sheet = sheets.latest_at(evaluation_date, mode);
        if (!sheet || !sheet->value("pd_crd")) {
            const bool exists_by_reference =
                sheets.latest_at(evaluation_date, PitMode::reference) != nullptr;
            result.exclusions.push_back(
                {company, evaluation_date,
                 exists_by_reference && mode == PitMode::availability
                     ? "crd_not_yet_published"
                     : "missing_crd"});
            continue;
        }
        const auto size = size_class_from_payload(*sheet);
        if (!size) {
            result.exclusions.push_back({company, evaluation_date, "missing_size"});
            continue;
        }

        const BhvSeries bhv = build_bhv_series(ledger, company, ewma_config);
        const ptrdiff_t bhv_idx = bhv.latest_index(evaluation_date, mode);
        if (bhv_idx < 0) {
            const bool exists_by_reference =
                bhv.latest_index(evaluation_date, PitMode::reference) >= 0;
            result.exclusions.push_back(
                {company, evaluation_date,
                 exists_by_reference && mode == PitMode::availability
                     ? "bhv_not_yet_published"
                     : "missing_bhv"});
            continue;
        }

        // Availability mode may hide a suffix of the series; recompute the
        // EWMA over exactly the visible prefix in that case.
        double bhv_raw;
        if (mode == PitMode::availability &&
            static_cast<size_t>(bhv_idx) + 1 < bhv.obs.size()) {
            std::vector<double> visible;
            for (ptrdiff_t i = 0; i <= bhv_idx; ++i) {
                const auto pd = bhv.obs[static_cast<size_t>(i)]->value("pd_bhv");
                visible.push_back(ewma_config.space == EwmaSpace::logit
                                      ? logit(Probability(*pd))
                                      : *pd);
            }
            const auto smoothed = ewma(visible, ewma_config);
            bhv_raw = ewma_config.space == EwmaSpace::probability
                          ? logit(Probability(smoothed.back()))
                          : smoothed.back();
        } else {
            bhv_raw = bhv.ewma_raw[static_cast<size_t>(bhv_idx)];
        }

        DesignRow features;
        features.crd_z =
            apply_scaler(model.crd_scaler, logit(Probability(*sheet->value("pd_crd"))));
        features.bhv_z = apply_scaler(model.bhv_scaler, bhv_raw);
        features.size = *size;

        const double score = model.linear_predictor(features);
        const double shifted = apply_delta_shift(score, *size, artifact.shifts);
        const Probability shifted_p = inverse_logit(shifted);

        ScoredRow row;
        row.company_id = company;
        row.evaluation_date = evaluation_date;
        row.size = *size;
        row.score = score;
        row.probability = inverse_logit(score).value();
        row.shifted_score = shifted;
        row.shifted_probability = shifted_p.value();
        row.rating = rating_label(assign_rating(shifted_p, artifact.scale), artifact.scale);
        const Observation* bhv_obs = bhv.obs[static_cast<size_t>(bhv_idx)];
        row.crd_staleness_months = months_between(sheet->reference_date, evaluation_date);
        row.bhv_staleness_months = months_between(bhv_obs->reference_date, evaluation_date);
        result.rows.push_back(std::move(row));

        result.audit.push_back({company, SourceKind::balance_sheet, sheet->reference_date,
                                sheet->availability_date, evaluation_date, mode});
        result.audit.push_back({company, SourceKind::credit_register, bhv_obs->reference_date,
                                bhv_obs->availability_date, evaluation_date, mode});
    }
    return result;
}

std::string scored_rows_to_csv(const ScoringResult& result) {
    std::string out =
        "company_id,evaluation_date,size,score,probability,shifted_score,"
        "shifted_probability,rating,crd_staleness_months,bhv_staleness_months\n";
    for (const ScoredRow& row : result.rows) {
        out += row.company_id;
        out += ',';
        out += to_string(row.evaluation_date);
        out += ',';
        out += to_string(row.size);
        out += ',';
        out += format_double(row.score);
        out += ',';
        out += format_double(row.probability);
        out += ',';
        out += format_double(row.shifted_score);
        out += ',';
        out += format_double(row.shifted_probability);
        out += ',';
        out += row.rating;
        out += ',';
        out += std::to_string(row.crd_staleness_months);
        out += ',';
        out += std::to_string(row.bhv_staleness_months);
        out += '\n';
    }
    return out;
}

} // namespace fusion
