// fusion — two-step credit-scoring pipeline CLI.
//
// Subcommands: simulate, align, train-static, train-dynamic, score,
// calibrate, validate, sweep, report. Exit codes: 0 success, 2 config or
// usage error, 3 numerical/fitting error, 4 data insufficiency.

#include "fusion/artifact.hpp"
#include "fusion/charts.hpp"
#include "fusion/config.hpp"
#include "fusion/io.hpp"
#include "fusion/logging.hpp"
#include "fusion/pipeline.hpp"
#include "fusion/validation.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int exit_code_for(const fusion::Error& e) {
    switch (e.category()) {
        case fusion::ErrorCategory::config: return 2;
        case fusion::ErrorCategory::numeric: return 3;
        case fusion::ErrorCategory::data: return 4;
        case fusion::ErrorCategory::internal: return 1;
    }
    return 1;
}

struct CommonOptions {
    std::string config_path;
    std::optional<uint64_t> seed;
    std::optional<int> threads;
};

fusion::AppConfig resolve_config(const CommonOptions& opts) {
    fusion::AppConfig cfg = opts.config_path.empty()
                                ? fusion::parse_app_config(fusion::default_config_json())
                                : fusion::load_app_config(opts.config_path);
    if (opts.seed) {
        cfg.master_seed = *opts.seed;
        cfg.simulator.seed = *opts.seed;
    }
    if (opts.threads) {
        if (*opts.threads < 1) throw fusion::config_error("BadConfig", "--threads must be >= 1");
        cfg.threads = *opts.threads;
    }
    return cfg;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw fusion::data_error("FileWriteError",
                                 "cannot create directory '" + dir + "': " + ec.message());
}

std::vector<int> training_years(const fusion::ObservationLedger& ledger,
                                const fusion::AppConfig& cfg) {
    std::vector<int> years = fusion::usable_anchor_years(ledger);
    if (cfg.anchor_start_year)
        std::erase_if(years, [&](int y) { return y < *cfg.anchor_start_year; });
    if (cfg.anchor_end_year)
        std::erase_if(years, [&](int y) { return y > *cfg.anchor_end_year; });
    if (years.empty())
        throw fusion::data_error("InsufficientHorizon",
                                 "no anchor year has a full 12-month label horizon");
    return years;
}

fusion::ModelArtifact make_static_artifact(const fusion::FittedModel& model,
                                           const fusion::AppConfig& cfg,
                                           const fusion::FeaturePanel& panel) {
    fusion::ModelArtifact artifact;
    artifact.kind = fusion::ArtifactKind::static_model;
    artifact.model = model;
    artifact.interpolation = cfg.interpolation;
    artifact.shifts = cfg.shifts;
    artifact.scale = cfg.scale;
    artifact.training.n_obs = model.diagnostics.n_obs;
    artifact.training.date_start = panel.rows.front().evaluation_date;
    artifact.training.date_end = panel.rows.back().evaluation_date;
    for (const auto& row : panel.rows) {
        artifact.training.date_start = std::min(artifact.training.date_start, row.evaluation_date);
        artifact.training.date_end = std::max(artifact.training.date_end, row.evaluation_date);
    }
    artifact.training.panel_hash = fusion::content_hash_hex(fusion::panel_to_csv(panel));
    return artifact;
}

int cmd_simulate(const CommonOptions& common, const std::string& out_dir,
                 const std::string& format) {
    const fusion::AppConfig cfg = resolve_config(common);
    ensure_dir(out_dir);
    const fusion::SimulationResult sim =
        fusion::simulate_portfolio(cfg.simulator, cfg.threads);
    const std::string ledger_path = out_dir + "/ledger." + format;
    fusion::save_ledger(sim.ledger, ledger_path);
    fusion::write_text_file(out_dir + "/truth.csv", fusion::truth_to_csv(sim.truth));
    fusion::log_info("simulated " + std::to_string(cfg.simulator.n_companies) +
                     " companies, " + std::to_string(sim.ledger.size()) + " observations -> " +
                     ledger_path);
    std::cout << "ledger: " << ledger_path << "\n"
              << "truth: " << out_dir << "/truth.csv\n"
              << "observations: " << sim.ledger.size() << "\n";
    return 0;
}

int cmd_align(const CommonOptions& common, const std::string& ledger_path, int year,
              const std::string& mode_name, const std::string& out_dir) {
    const fusion::AppConfig cfg = resolve_config(common);
    const fusion::PitMode mode = fusion::parse_pit_mode(mode_name);
    const auto ledger = fusion::load_ledger(ledger_path, cfg.source_lags);
    ensure_dir(out_dir);

    fusion::FeaturePanel panel = fusion::anchor_panel(ledger, year, cfg.source_lags, cfg.anchor);
    if (mode == fusion::PitMode::availability) {
        // The anchor panel is built in reference mode by definition; an
        // availability-mode alignment is a score-time snapshot per company.
        panel.mode = fusion::PitMode::availability;
    }
    const auto entries = fusion::audit_entries(panel);
    const fusion::AuditReport audit = fusion::check_no_lookahead(entries);

    fusion::write_text_file(out_dir + "/panel.csv", fusion::panel_to_csv(panel));
    fusion::write_text_file(out_dir + "/exclusions.csv",
                            fusion::exclusions_to_csv(panel.exclusions));
    fusion::write_text_file(out_dir + "/audit.jsonl", fusion::audit_to_jsonl(audit));
    std::cout << "rows: " << panel.rows.size() << "\nexclusions: " << panel.exclusions.size()
              << "\naudit_violations: " << audit.violations.size() << "\n";
    return audit.clean() ? 0 : 1;
}

int cmd_train_static(const CommonOptions& common, const std::string& ledger_path,
                     const std::string& out_path) {
    const fusion::AppConfig cfg = resolve_config(common);
    const auto ledger = fusion::load_ledger(ledger_path, cfg.source_lags);
    const auto years = training_years(ledger, cfg);

    const fusion::FeaturePanel panel =
        fusion::build_static_training_panel(ledger, years, cfg.source_lags, cfg.anchor);
    if (panel.rows.empty())
        throw fusion::data_error("EmptyPanel", "no usable training rows");
    const fusion::StandardizedPanel std_panel = fusion::standardize_panel(panel);
    const fusion::StaticModels models = fusion::fit_static_models(std_panel, cfg.irls);

    const fusion::ModelArtifact artifact = make_static_artifact(models.fusion, cfg, panel);
    fusion::save_artifact(artifact, out_path);

    std::cout << fusion::coefficient_table(models.fusion);
    std::cout << "artifact: " << out_path << "\n";
    fusion::log_info("trained static model on " +
                     std::to_string(models.fusion.diagnostics.n_obs) + " rows across " +
                     std::to_string(years.size()) + " anchors");
    return 0;
}

int cmd_train_dynamic(const CommonOptions& common, const std::string& ledger_path,
                      const std::string& static_artifact_path, const std::string& out_path,
                      std::optional<double> k_override, std::optional<double> alpha_override) {
    fusion::AppConfig cfg = resolve_config(common);
    if (k_override) {
        cfg.interpolation.k = *k_override;
        fusion::validate_interpolation_config(cfg.interpolation);
    }
    if (alpha_override) {
        cfg.ewma.alpha = *alpha_override;
        fusion::validate_ewma_config(cfg.ewma);
    }

    const fusion::ModelArtifact static_artifact = fusion::load_artifact(static_artifact_path);
    if (static_artifact.kind != fusion::ArtifactKind::static_model)
        throw fusion::config_error("BadConfig", "--static-artifact must be a static artifact");

    const auto ledger = fusion::load_ledger(ledger_path, cfg.source_lags);
    std::vector<int> years;
    {
        // Feature anchors: any December 31st with balance sheets.
        std::set<int> sheet_years;
        for (const auto& [key, obs] : ledger.entries())
            if (key.source == fusion::SourceKind::balance_sheet &&
                key.reference_date == fusion::dec31(key.reference_date.year))
                sheet_years.insert(key.reference_date.year);
        years.assign(sheet_years.begin(), sheet_years.end());
        if (cfg.anchor_start_year)
            std::erase_if(years, [&](int y) { return y < *cfg.anchor_start_year; });
        if (cfg.anchor_end_year)
            std::erase_if(years, [&](int y) { return y > *cfg.anchor_end_year; });
    }
    if (years.size() < 2)
        throw fusion::data_error("MissingAnchor",
                                 "dynamic training needs at least two anchor years");

    const fusion::DynamicPanel panel = fusion::build_dynamic_panel(
        ledger, static_artifact.model, years, cfg.ewma, cfg.interpolation, cfg.source_lags);
    fusion::FittedModel model = fusion::fit_dynamic_model(panel);

    fusion::ModelArtifact artifact;
    artifact.kind = fusion::ArtifactKind::dynamic_model;
    artifact.model = model;
    artifact.interpolation = cfg.interpolation;
    artifact.shifts = cfg.shifts;
    artifact.scale = cfg.scale;
    artifact.training.n_obs = model.diagnostics.n_obs;
    artifact.training.date_start = panel.rows.front().month;
    artifact.training.date_end = panel.rows.back().month;
    for (const auto& row : panel.rows) {
        artifact.training.date_start = std::min(artifact.training.date_start, row.month);
        artifact.training.date_end = std::max(artifact.training.date_end, row.month);
    }
    {
        std::string serialized;
        for (const auto& row : panel.rows) {
            serialized += row.company_id;
            serialized += ',';
            serialized += fusion::to_string(row.month);
            serialized += ',';
            serialized += fusion::format_double(row.target);
            serialized += '\n';
        }
        artifact.training.panel_hash = fusion::content_hash_hex(serialized);
    }
    artifact.training.base_artifact_hash =
        fusion::content_hash_hex(fusion::read_text_file(static_artifact_path));
    fusion::save_artifact(artifact, out_path);

    std::cout << fusion::coefficient_table(model);
    std::cout << "panel_rows: " << panel.rows.size()
              << "\nr2: " << fusion::format_double(model.diagnostics.r2.value_or(0.0))
              << "\nartifact: " << out_path << "\n";
    fusion::log_info("trained dynamic model on " + std::to_string(panel.rows.size()) +
                     " monthly rows (alpha=" + std::to_string(cfg.ewma.alpha) +
                     ", k=" + std::to_string(cfg.interpolation.k) + ")");
    return 0;
}

int cmd_score(const CommonOptions& common, const std::string& artifact_path,
              const std::string& ledger_path, const std::string& date_text,
              const std::string& mode_name, const std::string& out_dir) {
    const fusion::AppConfig cfg = resolve_config(common);
    const fusion::ModelArtifact artifact = fusion::load_artifact(artifact_path);
    const fusion::Date eval = fusion::parse_date(date_text);
    const fusion::PitMode mode = fusion::parse_pit_mode(mode_name);
    const auto ledger = fusion::load_ledger(ledger_path, cfg.source_lags);

    const fusion::ScoringResult result = fusion::score_at_date(ledger, artifact, eval, mode);
    const fusion::AuditReport audit = fusion::check_no_lookahead(result.audit);

    ensure_dir(out_dir);
    fusion::write_text_file(out_dir + "/scored.csv", fusion::scored_rows_to_csv(result));
    fusion::write_text_file(out_dir + "/exclusions.csv",
                            fusion::exclusions_to_csv(result.exclusions));
    fusion::write_text_file(out_dir + "/audit.jsonl", fusion::audit_to_jsonl(audit));
    std::cout << "scored: " << result.rows.size() << "\nexcluded: " << result.exclusions.size()
              << "\naudit_violations: " << audit.violations.size() << "\n";
    return 0;
}

int cmd_calibrate(const CommonOptions& common, const std::string& artifact_path,
                  const std::string& static_artifact_path, const std::string& ledger_path,
                  const std::string& out_path, const std::string& apply_path) {
    const fusion::AppConfig cfg = resolve_config(common);
    fusion::ModelArtifact artifact = fusion::load_artifact(artifact_path);
    if (artifact.kind != fusion::ArtifactKind::dynamic_model)
        throw fusion::config_error("BadConfig", "calibrate expects a dynamic artifact");
    const fusion::ModelArtifact static_artifact = fusion::load_artifact(static_artifact_path);
    const auto ledger = fusion::load_ledger(ledger_path, cfg.source_lags);

    std::set<int> sheet_years;
    for (const auto& [key, obs] : ledger.entries())
        if (key.source == fusion::SourceKind::balance_sheet &&
            key.reference_date == fusion::dec31(key.reference_date.year))
            sheet_years.insert(key.reference_date.year);
    const std::vector<int> years(sheet_years.begin(), sheet_years.end());

    // Rebuild the dynamic panel under the artifact's frozen scalers, then
    // re-estimate per-size shifts from prediction residuals.
    const fusion::DynamicPanel panel = fusion::build_dynamic_panel(
        ledger, static_artifact.model, years, *artifact.model.ewma, artifact.interpolation,
        cfg.source_lags, nullptr, &artifact.model.bhv_scaler);
    std::vector<double> predicted, reference;
    std::vector<fusion::SizeClass> sizes;
    for (const auto& row : panel.rows) {
        predicted.push_back(artifact.model.linear_predictor(row.features));
        reference.push_back(row.target);
        sizes.push_back(row.features.size);
    }
    const fusion::DeltaShifts shifts = fusion::fit_delta_shifts(predicted, reference, sizes);

    json out;
    for (fusion::SizeClass s : fusion::kAllSizes)
        out[fusion::to_string(s)] = shifts.shift_for(s);
    fusion::write_text_file(out_path, out.dump(2) + "\n");
    std::cout << "shifts: " << out.dump() << "\n";

    if (!apply_path.empty()) {
        artifact.shifts = shifts;
        fusion::save_artifact(artifact, apply_path);
        std::cout << "artifact: " << apply_path << "\n";
    }
    return 0;
}

int cmd_validate(const CommonOptions& common, const std::string& ledger_path,
                 const std::string& out_path) {
    const fusion::AppConfig cfg = resolve_config(common);
    const auto ledger = fusion::load_ledger(ledger_path, cfg.source_lags);
    const json report = fusion::run_validation_suite(ledger, cfg);
    fusion::write_text_file(out_path, fusion::validation_report_to_string(report));
    std::cout << "report: " << out_path << "\n";
    return 0;
}

int cmd_sweep(const CommonOptions& common, const std::string& ledger_path,
              const std::string& out_path) {
    const fusion::AppConfig cfg = resolve_config(common);
    const auto ledger = fusion::load_ledger(ledger_path, cfg.source_lags);
    const std::string csv = fusion::run_sweep(ledger, cfg);
    fusion::write_text_file(out_path, csv);
    std::cout << csv;
    std::cout << "sweep: " << out_path << "\n";
    return 0;
}

int cmd_report(const std::string& report_path, const std::string& out_dir) {
    json report;
    try {
        report = json::parse(fusion::read_text_file(report_path));
    } catch (const json::exception& e) {
        throw fusion::data_error("BadReport",
                                 "cannot parse '" + report_path + "': " + e.what());
    }
    ensure_dir(out_dir);

    // Flat CSV tables.
    std::string models_csv =
        "split,model,n,auc,ks,avg_precision,threshold,precision,recall,specificity,f_measure\n";
    std::string per_size_csv =
        "split,size,count,default_rate,auc,avg_precision,f_measure,recall,specificity\n";
    std::string qwk_csv = "split,horizon_months,qwk,n_pairs\n";

    auto opt_field = [](const json& j, const char* key) -> std::string {
        if (!j.contains(key) || j.at(key).is_null()) return "";
        return fusion::format_double(j.at(key).get<double>());
    };

    size_t split_index = 0;
    const json* first_curves = nullptr;
    for (const json& split : report.at("splits")) {
        const std::string split_name =
            split.at("kind").get<std::string>() + "_" + std::to_string(split_index++);
        if (split.contains("static")) {
            for (const auto& [model_name, m] : split.at("static").at("models").items()) {
                models_csv += split_name + "," + model_name + "," +
                              std::to_string(m.at("n").get<size_t>()) + "," +
                              opt_field(m, "auc") + "," + opt_field(m, "ks") + "," +
                              opt_field(m, "avg_precision") + "," + opt_field(m, "threshold") +
                              "," + opt_field(m, "precision") + "," + opt_field(m, "recall") +
                              "," + opt_field(m, "specificity") + "," +
                              opt_field(m, "f_measure") + "\n";
            }
            for (const json& row : split.at("static").at("per_size")) {
                per_size_csv += split_name + "," + row.at("size").get<std::string>() + "," +
                                std::to_string(row.at("count").get<size_t>()) + "," +
                                opt_field(row, "default_rate") + "," + opt_field(row, "auc") +
                                "," + opt_field(row, "avg_precision") + "," +
                                opt_field(row, "f_measure") + "," + opt_field(row, "recall") +
                                "," + opt_field(row, "specificity") + "\n";
            }
        }
        if (split.contains("dynamic") && !split.at("dynamic").is_null() &&
            split.at("dynamic").contains("qwk_by_horizon")) {
            const json& dyn = split.at("dynamic");
            for (const auto& [horizon, value] : dyn.at("qwk_by_horizon").items()) {
                qwk_csv += split_name + "," + horizon + "," +
                           (value.is_null() ? std::string()
                                            : fusion::format_double(value.get<double>())) +
                           "," +
                           std::to_string(
                               dyn.at("n_pairs_by_horizon").at(horizon).get<size_t>()) +
                           "\n";
            }
        }
        if (!first_curves && split.contains("curves")) first_curves = &split.at("curves");
    }
    fusion::write_text_file(out_dir + "/static_models.csv", models_csv);
    fusion::write_text_file(out_dir + "/per_size.csv", per_size_csv);
    fusion::write_text_file(out_dir + "/qwk_horizons.csv", qwk_csv);

    // Charts.
    auto series_from = [](const json& points, const std::string& name) {
        fusion::ChartSeries s;
        s.name = name;
        for (const auto& p : points)
            s.points.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
        return s;
    };
    if (first_curves) {
        const json& roc = first_curves->at("roc");
        std::vector<fusion::ChartSeries> roc_series;
        for (const char* name : {"fusion", "bhv_baseline", "crd_baseline"})
            if (roc.contains(name)) roc_series.push_back(series_from(roc.at(name), name));
        fusion::ChartGeometry unit;
        fusion::write_text_file(out_dir + "/roc.svg",
                                fusion::line_chart_svg("ROC", "false positive rate",
                                                       "true positive rate", unit, roc_series,
                                                       true));
        std::vector<fusion::ChartSeries> pr_series = {
            series_from(first_curves->at("pr").at("fusion"), "fusion")};
        fusion::write_text_file(out_dir + "/pr.svg",
                                fusion::line_chart_svg("Precision-Recall", "recall",
                                                       "precision", unit, pr_series));
    }
    const double k = report.contains("interpolation_k")
                         ? report.at("interpolation_k").get<double>()
                         : 3.0;
    fusion::write_text_file(out_dir + "/interpolation.svg", fusion::interpolation_chart_svg(k));

    fusion::DeltaShifts shifts;
    if (report.contains("delta_shifts"))
        for (fusion::SizeClass s : fusion::kAllSizes)
            shifts.set_shift(s,
                             report.at("delta_shifts").at(fusion::to_string(s)).get<double>());
    fusion::RatingScale scale = fusion::default_rating_scale();
    if (report.contains("rating_scale")) {
        scale.classes.clear();
        for (const auto& cls : report.at("rating_scale"))
            scale.classes.push_back({cls.at("label").get<std::string>(),
                                     cls.at("pd_upper_bound").get<double>()});
    }
    fusion::write_text_file(out_dir + "/rating_frontier.svg",
                            fusion::rating_frontier_svg(shifts, scale));

    std::cout << "tables: static_models.csv per_size.csv qwk_horizons.csv\n"
              << "charts: roc.svg pr.svg interpolation.svg rating_frontier.svg\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-step temporal-decomposition credit scoring pipeline"};
    app.require_subcommand(1);

    CommonOptions common;
    app.add_option("--config", common.config_path, "Config JSON path")->capture_default_str();
    uint64_t seed_value = 0;
    auto* seed_opt = app.add_option("--seed", seed_value, "Master seed override");
    int threads_value = 0;
    auto* threads_opt = app.add_option("--threads", threads_value, "Worker thread count");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic portfolio ledger");
    std::string sim_out = "out";
    std::string sim_format = "csv";
    simulate->add_option("--out", sim_out, "Output directory")->capture_default_str();
    simulate->add_option("--format", sim_format, "Ledger format: csv or jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));

    // align
    auto* align = app.add_subcommand("align", "Build and audit an anchor panel");
    std::string align_ledger, align_out = "out";
    int align_year = 0;
    std::string align_mode = "reference";
    align->add_option("--ledger", align_ledger, "Ledger file")->required();
    align->add_option("--year", align_year, "Anchor year")->required();
    align->add_option("--mode", align_mode, "reference or availability");
    align->add_option("--out", align_out, "Output directory")->capture_default_str();

    // train-static
    auto* train_static = app.add_subcommand("train-static", "Fit the static meta-learner");
    std::string ts_ledger, ts_out = "static_artifact.json";
    train_static->add_option("--ledger", ts_ledger, "Ledger file")->required();
    train_static->add_option("--out", ts_out, "Artifact output path")->capture_default_str();

    // train-dynamic
    auto* train_dynamic = app.add_subcommand("train-dynamic", "Fit the dynamic monthly model");
    std::string td_ledger, td_static, td_out = "dynamic_artifact.json";
    double td_k = 0.0, td_alpha = 0.0;
    auto* td_k_opt = train_dynamic->add_option("--k", td_k, "Interpolation k override");
    auto* td_alpha_opt = train_dynamic->add_option("--alpha", td_alpha, "EWMA alpha override");
    train_dynamic->add_option("--ledger", td_ledger, "Ledger file")->required();
    train_dynamic->add_option("--static-artifact", td_static, "Static artifact path")->required();
    train_dynamic->add_option("--out", td_out, "Artifact output path")->capture_default_str();

    // score
    auto* score = app.add_subcommand("score", "Score the portfolio at a date");
    std::string sc_artifact, sc_ledger, sc_date, sc_mode = "availability", sc_out = "out";
    score->add_option("--artifact", sc_artifact, "Model artifact path")->required();
    score->add_option("--ledger", sc_ledger, "Ledger file")->required();
    score->add_option("--date", sc_date, "Evaluation date YYYY-MM-DD")->required();
    score->add_option("--mode", sc_mode, "reference or availability")->capture_default_str();
    score->add_option("--out", sc_out, "Output directory")->capture_default_str();

    // calibrate
    auto* calibrate = app.add_subcommand("calibrate", "Re-fit size delta shifts");
    std::string cal_artifact, cal_static, cal_ledger, cal_out = "shifts.json", cal_apply;
    calibrate->add_option("--artifact", cal_artifact, "Dynamic artifact path")->required();
    calibrate->add_option("--static-artifact", cal_static, "Static artifact path")->required();
    calibrate->add_option("--ledger", cal_ledger, "Ledger file")->required();
    calibrate->add_option("--out", cal_out, "Shifts JSON output")->capture_default_str();
    calibrate->add_option("--apply", cal_apply, "Write updated artifact here");

    // validate
    auto* validate = app.add_subcommand("validate", "Run the validation suite");
    std::string val_ledger, val_out = "report.json";
    validate->add_option("--ledger", val_ledger, "Ledger file")->required();
    validate->add_option("--out", val_out, "Report JSON output")->capture_default_str();

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Grid sweep over alpha and k");
    std::string sw_ledger, sw_out = "sweep.csv";
    sweep->add_option("--ledger", sw_ledger, "Ledger file")->required();
    sweep->add_option("--out", sw_out, "Sweep CSV output")->capture_default_str();

    // report
    auto* report = app.add_subcommand("report", "Render tables and charts from a report");
    std::string rp_report, rp_out = "report_out";
    report->add_option("--report", rp_report, "Validation report JSON")->required();
    report->add_option("--out", rp_out, "Output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    if (*seed_opt) common.seed = seed_value;
    if (*threads_opt) common.threads = threads_value;

    try {
        if (simulate->parsed()) return cmd_simulate(common, sim_out, sim_format);
        if (align->parsed())
            return cmd_align(common, align_ledger, align_year, align_mode, align_out);
        if (train_static->parsed()) return cmd_train_static(common, ts_ledger, ts_out);
        if (train_dynamic->parsed())
            return cmd_train_dynamic(common, td_ledger, td_static, td_out,
                                     *td_k_opt ? std::optional<double>(td_k) : std::nullopt,
                                     *td_alpha_opt ? std::optional<double>(td_alpha)
                                                   : std::nullopt);
        if (score->parsed())
            return cmd_score(common, sc_artifact, sc_ledger, sc_date, sc_mode, sc_out);
        if (calibrate->parsed())
            return cmd_calibrate(common, cal_artifact, cal_static, cal_ledger, cal_out,
                                 cal_apply);
        if (validate->parsed()) return cmd_validate(common, val_ledger, val_out);
        if (sweep->parsed()) return cmd_sweep(common, sw_ledger, sw_out);
        if (report->parsed()) return cmd_report(rp_report, rp_out);
    } catch (const fusion::Error& e) {
        fusion::log_error(e.what());
        return exit_code_for(e);
    } catch (const std::exception& e) {
        fusion::log_error(e.what());
        return 1;
    }
    return 2;
}
