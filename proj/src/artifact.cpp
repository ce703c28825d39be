#include "fusion/artifact.hpp"

#include "fusion/io.hpp"

#include <algorithm>
#include <cstdio>

namespace fusion {

using nlohmann::json;

std::string to_string(ArtifactKind k) {
    return k == ArtifactKind::static_model ? "static" : "dynamic";
}

namespace {

ArtifactKind parse_artifact_kind(const std::string& s) {
    if (s == "static") return ArtifactKind::static_model;
    if (s == "dynamic") return ArtifactKind::dynamic_model;
    throw data_error("BadArtifact", "unknown artifact kind '" + s + "'");
}

json named_values(const FittedModel& model, const std::vector<double>& values) {
    json j = json::object();
    for (size_t i = 0; i < model.names.size(); ++i) j[model.names[i]] = values[i];
    return j;
}

std::vector<double> values_by_name(const json& j, const std::vector<std::string>& names,
                                   const char* what) {
    std::vector<double> out;
    out.reserve(names.size());
    for (const auto& name : names) {
        if (!j.contains(name))
            throw data_error("BadArtifact",
                             std::string(what) + " is missing entry '" + name + "'");
        out.push_back(j.at(name).get<double>());
    }
    return out;
}

} // namespace

void validate_artifact(const ModelArtifact& artifact) {
    const auto& model = artifact.model;
    if (model.names != canonical_names())
        throw data_error("BadArtifact", "artifact model must carry exactly the six canonical coefficients");
    const size_t p = model.names.size();
    if (model.coefficients.size() != p || model.std_errors.size() != p ||
        model.test_stats.size() != p || model.p_values.size() != p)
        throw data_error("BadArtifact", "coefficient vectors have inconsistent lengths");
    for (double se : model.std_errors)
        if (!(se > 0.0)) throw data_error("BadArtifact", "standard errors must be positive");
    for (double pv : model.p_values)
        if (pv < 0.0 || pv > 1.0)
            throw data_error("BadArtifact", "p-values must lie in [0, 1]");
    const bool logistic = artifact.kind == ArtifactKind::static_model;
    if (logistic != (model.kind == ModelKind::logistic))
        throw data_error("BadArtifact", "artifact kind does not match model kind");
    if (!(model.crd_scaler.std > 0.0) || !(model.bhv_scaler.std > 0.0))
        throw data_error("BadArtifact", "scaler standard deviations must be positive");
    if (artifact.kind == ArtifactKind::dynamic_model) {
        if (!model.ewma) throw data_error("BadArtifact", "dynamic artifact needs an ewma config");
        validate_ewma_config(*model.ewma);
    }
    validate_interpolation_config(artifact.interpolation);
    validate_delta_shifts(artifact.shifts);
    validate_rating_scale(artifact.scale);
}

json artifact_to_json(const ModelArtifact& artifact) {
    validate_artifact(artifact);
    const auto& model = artifact.model;

    json j;
    j["schema_version"] = ModelArtifact::kSchemaVersion;
    j["kind"] = to_string(artifact.kind);
    j["model_kind"] = to_string(model.kind);
    j["coefficients"] = named_values(model, model.coefficients);
    j["std_errors"] = named_values(model, model.std_errors);
    j["test_stats"] = named_values(model, model.test_stats);
    j["p_values"] = named_values(model, model.p_values);

    json diag = json::object();
    diag["n_obs"] = model.diagnostics.n_obs;
    if (model.diagnostics.mcfadden_r2) diag["mcfadden_r2"] = *model.diagnostics.mcfadden_r2;
    if (model.diagnostics.nagelkerke_r2)
        diag["nagelkerke_r2"] = *model.diagnostics.nagelkerke_r2;
    if (model.diagnostics.ks) diag["ks"] = *model.diagnostics.ks;
    if (model.diagnostics.r2) diag["r2"] = *model.diagnostics.r2;
    if (model.kind == ModelKind::ols) diag["residual_sd"] = model.diagnostics.residual_sd;
    j["diagnostics"] = diag;

    j["scalers"] = {
        {"crd", {{"mean", model.crd_scaler.mean}, {"std", model.crd_scaler.std}}},
        {"bhv", {{"mean", model.bhv_scaler.mean}, {"std", model.bhv_scaler.std}}},
    };
    if (model.ewma)
        j["ewma"] = {{"alpha", model.ewma->alpha}, {"space", to_string(model.ewma->space)}};

    j["interpolation_k"] = artifact.interpolation.k;

    json shifts = json::object();
    for (SizeClass s : kAllSizes) shifts[to_string(s)] = artifact.shifts.shift_for(s);
    j["delta_shifts"] = shifts;

    json scale = json::array();
    for (const auto& cls : artifact.scale.classes)
        scale.push_back({{"label", cls.label}, {"pd_upper_bound", cls.pd_upper_bound}});
    j["rating_scale"] = scale;

    json meta;
    meta["n_obs"] = artifact.training.n_obs;
    meta["date_start"] = to_string(artifact.training.date_start);
    meta["date_end"] = to_string(artifact.training.date_end);
    meta["panel_hash"] = artifact.training.panel_hash;
    if (!artifact.training.base_artifact_hash.empty())
        meta["base_artifact_hash"] = artifact.training.base_artifact_hash;
    j["training_meta"] = meta;
    return j;
}

ModelArtifact artifact_from_json(const json& j) {
    if (!j.contains("schema_version") ||
        j.at("schema_version").get<int>() != ModelArtifact::kSchemaVersion)
        throw config_error("UnknownArtifactVersion",
                           "artifact schema_version must be " +
                               std::to_string(ModelArtifact::kSchemaVersion));

    ModelArtifact artifact;
    artifact.kind = parse_artifact_kind(j.at("kind").get<std::string>());

    FittedModel& model = artifact.model;
    model.kind = parse_model_kind(j.at("model_kind").get<std::string>());
    model.names = canonical_names();
    model.coefficients = values_by_name(j.at("coefficients"), model.names, "coefficients");
    model.std_errors = values_by_name(j.at("std_errors"), model.names, "std_errors");
    model.test_stats = values_by_name(j.at("test_stats"), model.names, "test_stats");
    model.p_values = values_by_name(j.at("p_values"), model.names, "p_values");

    const json& diag = j.at("diagnostics");
    model.diagnostics.n_obs = diag.at("n_obs").get<size_t>();
    if (diag.contains("mcfadden_r2")) model.diagnostics.mcfadden_r2 = diag.at("mcfadden_r2").get<double>();
    if (diag.contains("nagelkerke_r2"))
        model.diagnostics.nagelkerke_r2 = diag.at("nagelkerke_r2").get<double>();
    if (diag.contains("ks")) model.diagnostics.ks = diag.at("ks").get<double>();
    if (diag.contains("r2")) model.diagnostics.r2 = diag.at("r2").get<double>();
    if (diag.contains("residual_sd"))
        model.diagnostics.residual_sd = diag.at("residual_sd").get<double>();

    const json& scalers = j.at("scalers");
    model.crd_scaler = {scalers.at("crd").at("mean").get<double>(),
                        scalers.at("crd").at("std").get<double>()};
    model.bhv_scaler = {scalers.at("bhv").at("mean").get<double>(),
                        scalers.at("bhv").at("std").get<double>()};

    if (j.contains("ewma")) {
        EwmaConfig ewma;
        ewma.alpha = j.at("ewma").at("alpha").get<double>();
        ewma.space = parse_ewma_space(j.at("ewma").at("space").get<std::string>());
        model.ewma = ewma;
    }

    artifact.interpolation.k = j.at("interpolation_k").get<double>();

    const json& shifts = j.at("delta_shifts");
    for (SizeClass s : kAllSizes)
        artifact.shifts.set_shift(s, shifts.at(to_string(s)).get<double>());

    artifact.scale.classes.clear();
    for (const auto& cls : j.at("rating_scale"))
        artifact.scale.classes.push_back({cls.at("label").get<std::string>(),
                                          cls.at("pd_upper_bound").get<double>()});

    const json& meta = j.at("training_meta");
    artifact.training.n_obs = meta.at("n_obs").get<size_t>();
    artifact.training.date_start = parse_date(meta.at("date_start").get<std::string>());
    artifact.training.date_end = parse_date(meta.at("date_end").get<std::string>());
    artifact.training.panel_hash = meta.at("panel_hash").get<std::string>();
    if (meta.contains("base_artifact_hash"))
        artifact.training.base_artifact_hash = meta.at("base_artifact_hash").get<std::string>();

    validate_artifact(artifact);
    return artifact;
}

void save_artifact(const ModelArtifact& artifact, const std::string& path) {
    write_text_file(path, artifact_to_json(artifact).dump(2) + "\n");
}

ModelArtifact load_artifact(const std::string& path) {
    json j;
    try {
        j = json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw data_error("BadArtifact", "cannot parse '" + path + "': " + e.what());
    }
    return artifact_from_json(j);
}

std::string coefficient_table(const FittedModel& model) {
    const char* stat_name = model.kind == ModelKind::logistic ? "z-value" : "t-value";
    std::string out;
    char line[160];
    std::snprintf(line, sizeof(line), "%-14s %12s %12s %10s %10s\n", "Variable",
                  "Coefficient", "Std. Error", stat_name, "P-value");
    out += line;
    for (size_t i = 0; i < model.names.size(); ++i) {
        std::snprintf(line, sizeof(line), "%-14s %12.4f %12.4f %10.2f %10.3f\n",
                      model.names[i].c_str(), model.coefficients[i], model.std_errors[i],
                      model.test_stats[i], model.p_values[i]);
        out += line;
    }
    const auto& d = model.diagnostics;
    if (model.kind == ModelKind::logistic) {
        std::snprintf(line, sizeof(line),
                      "McFadden R2 = %.3f, Nagelkerke R2 = %.3f, KS = %.3f, n = %zu\n",
                      d.mcfadden_r2.value_or(0.0), d.nagelkerke_r2.value_or(0.0),
                      d.ks.value_or(0.0), d.n_obs);
    } else {
        std::snprintf(line, sizeof(line), "R2 = %.3f, residual sd = %.4f, n = %zu\n",
                      d.r2.value_or(0.0), d.residual_sd, d.n_obs);
    }
    out += line;
    return out;
}

} // namespace fusion
