#include "fusion/validation.hpp"

#include "fusion/io.hpp"
#include "fusion/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace fusion {

using nlohmann::json;

std::pair<FeaturePanel, FeaturePanel> temporal_split(const FeaturePanel& panel,
                                                     const SplitSpec& spec) {
    validate_split_spec(spec);
    FeaturePanel train, test;
    train.mode = test.mode = panel.mode;
    for (const PanelRow& row : panel.rows) {
        if (row.evaluation_date.year <= spec.train_end_year) train.rows.push_back(row);
        else if (row.evaluation_date.year == spec.test_year) test.rows.push_back(row);
    }
    if (train.rows.empty() || test.rows.empty())
        throw data_error("EmptySide", "temporal split left train or test empty");
    return {std::move(train), std::move(test)};
}

std::vector<std::pair<FeaturePanel, FeaturePanel>> cross_sectional_folds(
    const FeaturePanel& panel, const SplitSpec& spec, uint64_t seed) {
    validate_split_spec(spec);

    std::set<std::string> company_set;
    for (const PanelRow& row : panel.rows) company_set.insert(row.company_id);
    std::vector<std::string> companies(company_set.begin(), company_set.end());
    if (companies.size() < static_cast<size_t>(spec.n_folds))
        throw data_error("TooFewCompanies",
                         std::to_string(companies.size()) + " companies cannot fill " +
                             std::to_string(spec.n_folds) + " folds");

    // Deterministic Fisher-Yates over the sorted company list.
    RandomStream rng(derive_seed(seed, "cross_sectional_folds"));
    for (size_t i = companies.size(); i > 1; --i)
        std::swap(companies[i - 1], companies[rng.uniform_int(i)]);

    std::map<std::string, int> fold_of;
    for (size_t i = 0; i < companies.size(); ++i)
        fold_of[companies[i]] = static_cast<int>(i % static_cast<size_t>(spec.n_folds));

    std::vector<std::pair<FeaturePanel, FeaturePanel>> folds(
        static_cast<size_t>(spec.n_folds));
    for (auto& [train, test] : folds) train.mode = test.mode = panel.mode;
    for (const PanelRow& row : panel.rows) {
        const int fold = fold_of.at(row.company_id);
        for (int f = 0; f < spec.n_folds; ++f) {
            if (f == fold) folds[static_cast<size_t>(f)].second.rows.push_back(row);
            else folds[static_cast<size_t>(f)].first.rows.push_back(row);
        }
    }
    return folds;
}

MetricsBlock compute_metrics_block(const BinaryEval& eval) {
    MetricsBlock block;
    block.n = eval.scores.size();
    for (int y : eval.labels) block.n_pos += static_cast<size_t>(y);
    block.auc = roc_auc(eval);
    block.ks = ks_statistic(eval);
    block.avg_precision = average_precision(eval);
    block.confusion = confusion_metrics(eval, youden_threshold(eval));
    return block;
}

namespace {

json opt_json(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

} // namespace

json metrics_block_to_json(const MetricsBlock& block) {
    json j;
    j["n"] = block.n;
    j["n_pos"] = block.n_pos;
    j["auc"] = block.auc;
    j["ks"] = block.ks;
    j["avg_precision"] = block.avg_precision;
    j["threshold"] = block.confusion.threshold;
    j["precision"] = opt_json(block.confusion.precision);
    j["recall"] = opt_json(block.confusion.recall);
    j["specificity"] = opt_json(block.confusion.specificity);
    j["f_measure"] = opt_json(block.confusion.f_measure);
    return j;
}

namespace {

json exclusion_tally(const std::vector<Exclusion>& exclusions) {
    std::map<std::string, size_t> tally;
    for (const Exclusion& e : exclusions) tally[e.reason] += 1;
    json j = json::object();
    for (const auto& [reason, count] : tally) j[reason] = count;
    return j;
}

json curve_to_json(const std::vector<std::pair<double, double>>& points) {
    json j = json::array();
    for (const auto& [x, y] : points) j.push_back(json::array({x, y}));
    return j;
}

BinaryEval model_eval(const FittedModel& model, const std::vector<DesignRow>& rows,
                      const FeaturePanel& panel) {
    BinaryEval eval;
    eval.scores.reserve(rows.size());
    eval.labels.reserve(rows.size());
    eval.groups.reserve(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        eval.scores.push_back(model.linear_predictor(rows[i]));
        eval.labels.push_back(panel.rows[i].label.value_or(0));
        eval.groups.push_back(panel.rows[i].company_id);
    }
    return eval;
}

json train_fit_json(const FittedModel& model) {
    json j;
    j["n_obs"] = model.diagnostics.n_obs;
    j["mcfadden_r2"] = opt_json(model.diagnostics.mcfadden_r2);
    j["nagelkerke_r2"] = opt_json(model.diagnostics.nagelkerke_r2);
    j["ks"] = opt_json(model.diagnostics.ks);
    json coefs = json::object();
    for (size_t i = 0; i < model.names.size(); ++i) coefs[model.names[i]] = model.coefficients[i];
    j["coefficients"] = coefs;
    return j;
}

// Static stage of one holdout evaluation: fit on train, score test.
struct StaticEvaluation {
    StaticModels models;
    BinaryEval fusion_eval, bhv_eval, crd_eval;
    std::vector<SizeClass> test_sizes;
};

StaticEvaluation evaluate_static(const FeaturePanel& train, const FeaturePanel& test,
                                 const IrlsOptions& irls) {
    StaticEvaluation out;
    StandardizedPanel train_std = standardize_panel(train);
    out.models = fit_static_models(train_std, irls);
    const std::vector<DesignRow> test_rows =
        standardize_with(test, train_std.crd_scaler, train_std.bhv_scaler);
    out.fusion_eval = model_eval(out.models.fusion, test_rows, test);
    out.bhv_eval = model_eval(out.models.bhv_baseline, test_rows, test);
    out.crd_eval = model_eval(out.models.crd_baseline, test_rows, test);
    out.test_sizes.reserve(test.rows.size());
    for (const PanelRow& row : test.rows) out.test_sizes.push_back(row.size);
    return out;
}

json per_size_json(const StaticEvaluation& eval) {
    json rows = json::array();
    const double threshold = youden_threshold(eval.fusion_eval);
    for (SizeClass size : kAllSizes) {
        BinaryEval segment;
        for (size_t i = 0; i < eval.test_sizes.size(); ++i) {
            if (eval.test_sizes[i] != size) continue;
            segment.scores.push_back(eval.fusion_eval.scores[i]);
            segment.labels.push_back(eval.fusion_eval.labels[i]);
        }
        json row;
        row["size"] = to_string(size);
        row["count"] = segment.scores.size();
        if (segment.scores.empty()) {
            row["default_rate"] = json(nullptr);
            row["auc"] = json(nullptr);
            row["avg_precision"] = json(nullptr);
            row["f_measure"] = json(nullptr);
            row["recall"] = json(nullptr);
            row["specificity"] = json(nullptr);
            rows.push_back(row);
            continue;
        }
        size_t n_pos = 0;
        for (int y : segment.labels) n_pos += static_cast<size_t>(y);
        row["default_rate"] =
            static_cast<double>(n_pos) / static_cast<double>(segment.labels.size());
        const bool both = n_pos > 0 && n_pos < segment.labels.size();
        row["auc"] = both ? json(roc_auc(segment)) : json(nullptr);
        row["avg_precision"] = n_pos > 0 ? json(average_precision(segment)) : json(nullptr);
        // Threshold-dependent metrics reuse the global Youden threshold so
        // segments stay comparable.
        const ConfusionMetrics cm = confusion_metrics(segment, threshold);
        row["f_measure"] = opt_json(cm.f_measure);
        row["recall"] = opt_json(cm.recall);
        row["specificity"] = opt_json(cm.specificity);
        rows.push_back(row);
    }
    return rows;
}

// Dynamic stage: train the OLS on interpolated targets, calibrate shifts on
// the training residuals, evaluate rating agreement at the paper's horizons
// on held-out data.
struct DynamicEvaluation {
    bool available = false;
    double r2_train = 0.0;
    size_t n_train = 0;
    DeltaShifts shifts;
    bool shifts_fitted = false;
    std::map<int, RatingPairs> pairs_by_horizon;
    std::vector<Exclusion> train_exclusions, test_exclusions;
};

constexpr int kHorizons[] = {1, 3, 6, 12};

DynamicEvaluation evaluate_dynamic(const ObservationLedger& ledger,
                                   const FittedModel& fusion_model,
                                   const std::vector<int>& train_years,
                                   const std::vector<int>& test_years,
                                   const std::set<std::string>* train_filter,
                                   const std::set<std::string>* test_filter,
                                   const AppConfig& config) {
    DynamicEvaluation out;
    out.shifts = config.shifts;
    if (train_years.size() < 2 || test_years.empty()) return out;

    DynamicPanel train_panel;
    try {
        train_panel = build_dynamic_panel(ledger, fusion_model, train_years, config.ewma,
                                          config.interpolation, config.source_lags,
                                          train_filter);
    } catch (const Error&) {
        return out; // not enough anchor structure for a dynamic stage
    }
    out.train_exclusions = train_panel.exclusions;

    FittedModel dynamic_model;
    try {
        dynamic_model = fit_dynamic_model(train_panel);
    } catch (const Error&) {
        return out;
    }
    out.available = true;
    out.r2_train = dynamic_model.diagnostics.r2.value_or(0.0);
    out.n_train = dynamic_model.diagnostics.n_obs;

    // Calibrate shifts on training predictions vs targets; keep the
    // configured defaults when a segment is too thin.
    {
        std::vector<double> predicted, reference;
        std::vector<SizeClass> sizes;
        predicted.reserve(train_panel.rows.size());
        for (const DynamicPanelRow& row : train_panel.rows) {
            predicted.push_back(dynamic_model.linear_predictor(row.features));
            reference.push_back(row.target);
            sizes.push_back(row.features.size);
        }
        try {
            out.shifts = fit_delta_shifts(predicted, reference, sizes);
            out.shifts_fitted = true;
        } catch (const Error& e) {
            if (e.code() != "SegmentTooSmall") throw;
        }
    }

    DynamicPanel test_panel;
    try {
        test_panel = build_dynamic_panel(ledger, fusion_model, test_years, config.ewma,
                                         config.interpolation, config.source_lags,
                                         test_filter, &train_panel.bhv_scaler);
    } catch (const Error&) {
        return out;
    }
    out.test_exclusions = test_panel.exclusions;

    const int n_classes = static_cast<int>(config.scale.n_classes());
    for (int h : kHorizons) {
        RatingPairs pairs;
        pairs.n_classes = n_classes;
        out.pairs_by_horizon.emplace(h, pairs);
    }
    for (const DynamicPanelRow& row : test_panel.rows) {
        int horizon = 0;
        if (row.months_since_anchor == 0) {
            if (!row.has_prior_anchor) continue;
            horizon = 12;
        } else {
            horizon = row.months_since_anchor;
        }
        auto it = out.pairs_by_horizon.find(horizon);
        if (it == out.pairs_by_horizon.end()) continue;
        const double predicted_score = dynamic_model.linear_predictor(row.features);
        const double shifted =
            apply_delta_shift(predicted_score, row.features.size, out.shifts);
        it->second.predicted.push_back(
            static_cast<int>(assign_rating(inverse_logit(shifted), config.scale)));
        it->second.actual.push_back(
            static_cast<int>(assign_rating(inverse_logit(row.target), config.scale)));
    }
    return out;
}

json dynamic_to_json(const DynamicEvaluation& eval) {
    if (!eval.available) return json(nullptr);
    json j;
    j["r2_train"] = eval.r2_train;
    j["n_train"] = eval.n_train;
    j["shifts_fitted"] = eval.shifts_fitted;
    json shifts = json::object();
    for (SizeClass s : kAllSizes) shifts[to_string(s)] = eval.shifts.shift_for(s);
    j["shifts"] = shifts;
    json qwk = json::object(), counts = json::object();
    for (const auto& [horizon, pairs] : eval.pairs_by_horizon) {
        const std::string key = std::to_string(horizon);
        counts[key] = pairs.predicted.size();
        if (pairs.predicted.size() >= 2)
            qwk[key] = quadratic_weighted_kappa(pairs);
        else
            qwk[key] = json(nullptr);
    }
    j["qwk_by_horizon"] = qwk;
    j["n_pairs_by_horizon"] = counts;
    return j;
}

std::vector<int> years_leq(const std::vector<int>& years, int bound) {
    std::vector<int> out;
    for (int y : years)
        if (y <= bound) out.push_back(y);
    return out;
}

// Anchor years that have balance-sheet features, regardless of label
// horizon (dynamic targets need only features at the next anchor).
std::vector<int> feature_anchor_years(const ObservationLedger& ledger) {
    std::set<int> years;
    for (const auto& [key, obs] : ledger.entries()) {
        if (key.source != SourceKind::balance_sheet) continue;
        if (key.reference_date == dec31(key.reference_date.year))
            years.insert(key.reference_date.year);
    }
    return {years.begin(), years.end()};
}

} // namespace

json run_validation_suite(const ObservationLedger& ledger, const AppConfig& config) {
    if (ledger.empty()) throw data_error("EmptyLedger", "validation over an empty ledger");

    std::vector<int> label_years = usable_anchor_years(ledger);
    if (config.anchor_start_year)
        std::erase_if(label_years, [&](int y) { return y < *config.anchor_start_year; });
    if (config.anchor_end_year)
        std::erase_if(label_years, [&](int y) { return y > *config.anchor_end_year; });
    if (label_years.empty())
        throw data_error("InsufficientHorizon", "no anchor year has a full label horizon");
    const std::vector<int> feature_years = feature_anchor_years(ledger);

    const FeaturePanel panel = build_static_training_panel(
        ledger, label_years, config.source_lags, config.anchor);
    if (panel.rows.empty())
        throw data_error("EmptyPanel", "static panel has no usable rows");

    json report;
    report["schema_version"] = 1;
    report["seed"] = config.master_seed;
    report["anchor_years"] = label_years;
    report["n_panel_rows"] = panel.rows.size();
    report["panel_exclusions"] = exclusion_tally(panel.exclusions);
    report["ewma"] = {{"alpha", config.ewma.alpha}, {"space", to_string(config.ewma.space)}};
    report["interpolation_k"] = config.interpolation.k;

    json scale = json::array();
    for (const auto& cls : config.scale.classes)
        scale.push_back({{"label", cls.label}, {"pd_upper_bound", cls.pd_upper_bound}});
    report["rating_scale"] = scale;

    json splits = json::array();
    for (const SplitSpec& spec : config.splits) {
        json entry;
        entry["kind"] = to_string(spec.kind);
        switch (spec.kind) {
            case SplitSpec::Kind::temporal: {
                entry["train_end_year"] = spec.train_end_year;
                entry["test_year"] = spec.test_year;
                auto [train, test] = temporal_split(panel, spec);
                entry["n_train_rows"] = train.rows.size();
                entry["n_test_rows"] = test.rows.size();

                const StaticEvaluation st = evaluate_static(train, test, config.irls);
                json models;
                models["fusion"] = metrics_block_to_json(compute_metrics_block(st.fusion_eval));
                models["fusion"]["train_fit"] = train_fit_json(st.models.fusion);
                models["bhv_baseline"] =
                    metrics_block_to_json(compute_metrics_block(st.bhv_eval));
                models["crd_baseline"] =
                    metrics_block_to_json(compute_metrics_block(st.crd_eval));
                entry["static"] = {{"models", models}, {"per_size", per_size_json(st)}};

                entry["curves"] = {
                    {"roc",
                     {{"fusion", curve_to_json(roc_curve(st.fusion_eval))},
                      {"bhv_baseline", curve_to_json(roc_curve(st.bhv_eval))},
                      {"crd_baseline", curve_to_json(roc_curve(st.crd_eval))}}},
                    {"pr", {{"fusion", curve_to_json(pr_curve(st.fusion_eval))}}},
                };

                const DynamicEvaluation dyn = evaluate_dynamic(
                    ledger, st.models.fusion, years_leq(feature_years, spec.train_end_year),
                    {spec.test_year, spec.test_year + 1}, nullptr, nullptr, config);
                entry["dynamic"] = dynamic_to_json(dyn);
                break;
            }
            case SplitSpec::Kind::cross_sectional: {
                entry["n_folds"] = spec.n_folds;
                auto folds = cross_sectional_folds(panel, spec, config.master_seed);
                BinaryEval fusion_pooled, bhv_pooled, crd_pooled;
                std::vector<SizeClass> sizes_pooled;
                std::map<int, RatingPairs> qwk_pooled;
                for (int h : kHorizons)
                    qwk_pooled.emplace(
                        h, RatingPairs{{}, {}, static_cast<int>(config.scale.n_classes())});
                double r2_sum = 0.0;
                size_t r2_folds = 0, dyn_n = 0;
                json fold_entries = json::array();
                for (size_t f = 0; f < folds.size(); ++f) {
                    const auto& [train, test] = folds[f];
                    const StaticEvaluation st = evaluate_static(train, test, config.irls);
                    auto append = [](BinaryEval& pooled, const BinaryEval& part) {
                        pooled.scores.insert(pooled.scores.end(), part.scores.begin(),
                                             part.scores.end());
                        pooled.labels.insert(pooled.labels.end(), part.labels.begin(),
                                             part.labels.end());
                        pooled.groups.insert(pooled.groups.end(), part.groups.begin(),
                                             part.groups.end());
                    };
                    append(fusion_pooled, st.fusion_eval);
                    append(bhv_pooled, st.bhv_eval);
                    append(crd_pooled, st.crd_eval);
                    sizes_pooled.insert(sizes_pooled.end(), st.test_sizes.begin(),
                                        st.test_sizes.end());

                    std::set<std::string> train_companies, test_companies;
                    for (const PanelRow& row : train.rows) train_companies.insert(row.company_id);
                    for (const PanelRow& row : test.rows) test_companies.insert(row.company_id);
                    const DynamicEvaluation dyn =
                        evaluate_dynamic(ledger, st.models.fusion, feature_years,
                                         feature_years, &train_companies, &test_companies,
                                         config);
                    if (dyn.available) {
                        r2_sum += dyn.r2_train;
                        r2_folds += 1;
                        dyn_n += dyn.n_train;
                        for (const auto& [h, pairs] : dyn.pairs_by_horizon) {
                            auto& pooled = qwk_pooled.at(h);
                            pooled.predicted.insert(pooled.predicted.end(),
                                                    pairs.predicted.begin(),
                                                    pairs.predicted.end());
                            pooled.actual.insert(pooled.actual.end(), pairs.actual.begin(),
                                                 pairs.actual.end());
                        }
                    }
                    fold_entries.push_back(
                        {{"fold", f},
                         {"n_train_rows", train.rows.size()},
                         {"n_test_rows", test.rows.size()},
                         {"fusion_auc", roc_auc(st.fusion_eval)}});
                }
                json models;
                models["fusion"] =
                    metrics_block_to_json(compute_metrics_block(fusion_pooled));
                models["bhv_baseline"] =
                    metrics_block_to_json(compute_metrics_block(bhv_pooled));
                models["crd_baseline"] =
                    metrics_block_to_json(compute_metrics_block(crd_pooled));

                StaticEvaluation pooled_view;
                pooled_view.fusion_eval = fusion_pooled;
                pooled_view.test_sizes = sizes_pooled;
                entry["static"] = {{"models", models}, {"per_size", per_size_json(pooled_view)}};
                entry["folds"] = fold_entries;

                json dyn_json;
                if (r2_folds > 0) {
                    dyn_json["r2_train_mean"] = r2_sum / static_cast<double>(r2_folds);
                    dyn_json["n_train_total"] = dyn_n;
                    json qwk = json::object(), counts = json::object();
                    for (const auto& [h, pairs] : qwk_pooled) {
                        const std::string key = std::to_string(h);
                        counts[key] = pairs.predicted.size();
                        qwk[key] = pairs.predicted.size() >= 2
                                       ? json(quadratic_weighted_kappa(pairs))
                                       : json(nullptr);
                    }
                    dyn_json["qwk_by_horizon"] = qwk;
                    dyn_json["n_pairs_by_horizon"] = counts;
                } else {
                    dyn_json = json(nullptr);
                }
                entry["dynamic"] = dyn_json;
                break;
            }
            case SplitSpec::Kind::bootstrap: {
                entry["n_boot"] = spec.n_boot;
                entry["level"] = spec.level;
                // In-sample fit; uncertainty from company-level resampling.
                const StandardizedPanel std_panel = standardize_panel(panel);
                const StaticModels models = fit_static_models(std_panel, config.irls);
                json metrics = json::object();
                struct Item {
                    const char* name;
                    const FittedModel* model;
                };
                for (const Item& item :
                     {Item{"fusion", &models.fusion}, Item{"bhv_baseline", &models.bhv_baseline},
                      Item{"crd_baseline", &models.crd_baseline}}) {
                    BinaryEval eval = model_eval(*item.model, std_panel.rows, panel);
                    const Interval auc_ci =
                        bootstrap_ci([](const BinaryEval& e) { return roc_auc(e); }, eval,
                                     spec.n_boot, derive_seed(config.master_seed, item.name),
                                     spec.level, config.threads);
                    json m;
                    m["auc"] = roc_auc(eval);
                    m["auc_ci"] = json::array({auc_ci.lo, auc_ci.hi});
                    if (std::string(item.name) == "fusion") {
                        const Interval ks_ci = bootstrap_ci(
                            [](const BinaryEval& e) { return ks_statistic(e); }, eval,
                            spec.n_boot, derive_seed(config.master_seed, "fusion_ks"),
                            spec.level, config.threads);
                        m["ks"] = ks_statistic(eval);
                        m["ks_ci"] = json::array({ks_ci.lo, ks_ci.hi});
                    }
                    metrics[item.name] = m;
                }
                entry["metrics"] = metrics;
                break;
            }
        }
        splits.push_back(entry);
    }
    report["splits"] = splits;
    return report;
}

std::string validation_report_to_string(const json& report) { return report.dump(2) + "\n"; }

std::string run_sweep(const ObservationLedger& ledger, const AppConfig& config) {
    const SplitSpec* temporal = nullptr;
    for (const SplitSpec& spec : config.splits)
        if (spec.kind == SplitSpec::Kind::temporal) {
            temporal = &spec;
            break;
        }
    if (!temporal)
        throw config_error("BadConfig", "sweep requires at least one temporal split");

    struct GridRow {
        double alpha, k;
        double fusion_auc = 0.0, dynamic_r2 = 0.0;
        std::map<int, std::optional<double>> qwk;
        double criterion = 0.0;
    };
    std::vector<GridRow> rows;

    for (double alpha : config.sweep.alphas) {
        for (double k : config.sweep.ks) {
            AppConfig point = config;
            point.ewma.alpha = alpha;
            point.interpolation.k = k;
            point.splits = {*temporal};
            const json report = run_validation_suite(ledger, point);
            const json& split = report.at("splits").at(0);

            GridRow row;
            row.alpha = alpha;
            row.k = k;
            row.fusion_auc =
                split.at("static").at("models").at("fusion").at("auc").get<double>();
            const json& dyn = split.at("dynamic");
            if (!dyn.is_null()) {
                row.dynamic_r2 = dyn.at("r2_train").get<double>();
                for (int h : kHorizons) {
                    const json& q = dyn.at("qwk_by_horizon").at(std::to_string(h));
                    row.qwk[h] = q.is_null() ? std::optional<double>() : q.get<double>();
                }
            }

            if (config.sweep.criterion == "fusion_auc") {
                row.criterion = row.fusion_auc;
            } else if (config.sweep.criterion == "dynamic_r2") {
                row.criterion = row.dynamic_r2;
            } else if (config.sweep.criterion == "qwk_12") {
                row.criterion = row.qwk.count(12) && row.qwk[12] ? *row.qwk[12] : -2.0;
            } else { // qwk_mean
                double sum = 0.0;
                int count = 0;
                for (auto& [h, q] : row.qwk)
                    if (q) {
                        sum += *q;
                        ++count;
                    }
                row.criterion = count > 0 ? sum / count : -2.0;
            }
            rows.push_back(std::move(row));
        }
    }

    size_t best = 0;
    for (size_t i = 1; i < rows.size(); ++i)
        if (rows[i].criterion > rows[best].criterion) best = i;

    std::string csv =
        "alpha,k,fusion_auc,dynamic_r2,qwk_1,qwk_3,qwk_6,qwk_12,criterion,selected\n";
    for (size_t i = 0; i < rows.size(); ++i) {
        const GridRow& r = rows[i];
        csv += format_double(r.alpha);
        csv += ',';
        csv += format_double(r.k);
        csv += ',';
        csv += format_double(r.fusion_auc);
        csv += ',';
        csv += format_double(r.dynamic_r2);
        for (int h : kHorizons) {
            csv += ',';
            auto it = r.qwk.find(h);
            if (it != r.qwk.end() && it->second) csv += format_double(*it->second);
        }
        csv += ',';
        csv += format_double(r.criterion);
        csv += ',';
        csv += (i == best ? '1' : '0');
        csv += '\n';
    }
    return csv;
}

} // namespace fusion
