#include "fusion/config.hpp"

#include "fusion/io.hpp"

#include <cmath>

namespace fusion {

using nlohmann::json;

std::string to_string(SplitSpec::Kind k) {
    switch (k) {
        case SplitSpec::Kind::temporal: return "temporal";
        case SplitSpec::Kind::cross_sectional: return "cross_sectional";
        case SplitSpec::Kind::bootstrap: return "bootstrap";
    }
    throw Error("InternalError", "unreachable split kind");
}

void validate_split_spec(const SplitSpec& spec) {
    switch (spec.kind) {
        case SplitSpec::Kind::temporal:
            if (spec.test_year <= spec.train_end_year)
                throw config_error("BadConfig",
                                   "splits: temporal test_year must exceed train_end_year");
            break;
        case SplitSpec::Kind::cross_sectional:
            if (spec.n_folds < 2)
                throw config_error("BadConfig", "splits: cross_sectional n_folds must be >= 2");
            break;
        case SplitSpec::Kind::bootstrap:
            if (spec.n_boot < 100)
                throw config_error("BadConfig", "splits: bootstrap n_boot must be >= 100");
            if (!(spec.level > 0.0 && spec.level < 1.0))
                throw config_error("BadConfig", "splits: bootstrap level must lie in (0, 1)");
            break;
    }
}

namespace {

// get<T> with the JSON path in the error message; config errors must name
// the offending field.
template <typename T>
T field(const json& j, const std::string& path, const std::string& key, const T& fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw config_error("BadConfig", "field '" + path + "." + key + "' has the wrong type");
    }
}

template <typename T>
T require_field(const json& j, const std::string& path, const std::string& key) {
    if (!j.contains(key))
        throw config_error("BadConfig", "missing required field '" + path + "." + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw config_error("BadConfig", "field '" + path + "." + key + "' has the wrong type");
    }
}

LagPolicy parse_lags(const json& j, const std::string& path, const LagPolicy& defaults) {
    LagPolicy lags = defaults;
    for (SourceKind s : kAllSources)
        lags.set_lag(s, field<int>(j, path, to_string(s), lags.lag_for(s)));
    validate_lag_policy(lags);
    return lags;
}

std::array<double, 4> parse_by_size(const json& j, const std::string& path,
                                    const std::array<double, 4>& defaults) {
    std::array<double, 4> out = defaults;
    for (SizeClass s : kAllSizes)
        out[static_cast<size_t>(s)] =
            field<double>(j, path, to_string(s), out[static_cast<size_t>(s)]);
    return out;
}

} // namespace

AppConfig parse_app_config(const json& j) {
    AppConfig cfg;
    cfg.scale = default_rating_scale();

    if (!j.is_object()) throw config_error("BadConfig", "config root must be a JSON object");

    if (j.contains("seeds"))
        cfg.master_seed = require_field<uint64_t>(j.at("seeds"), "seeds", "master");
    cfg.threads = field<int>(j, "", "threads", 1);
    if (cfg.threads < 1) throw config_error("BadConfig", "field 'threads' must be >= 1");

    if (j.contains("sources") && j.at("sources").contains("lags"))
        cfg.source_lags = parse_lags(j.at("sources").at("lags"), "sources.lags", LagPolicy{});

    if (j.contains("ewma")) {
        const json& e = j.at("ewma");
        cfg.ewma.alpha = field<double>(e, "ewma", "alpha", cfg.ewma.alpha);
        cfg.ewma.space =
            parse_ewma_space(field<std::string>(e, "ewma", "space", to_string(cfg.ewma.space)));
        validate_ewma_config(cfg.ewma);
    }

    if (j.contains("interpolation")) {
        cfg.interpolation.k = field<double>(j.at("interpolation"), "interpolation", "k", 3.0);
        validate_interpolation_config(cfg.interpolation);
    }

    if (j.contains("alignment")) {
        cfg.anchor.max_bhv_staleness_months = field<int>(
            j.at("alignment"), "alignment", "max_bhv_staleness_months", 1);
        if (cfg.anchor.max_bhv_staleness_months < 0)
            throw config_error("BadConfig",
                               "field 'alignment.max_bhv_staleness_months' must be >= 0");
    }

    if (j.contains("training")) {
        const json& t = j.at("training");
        if (t.contains("anchor_start_year") && !t.at("anchor_start_year").is_null())
            cfg.anchor_start_year = require_field<int>(t, "training", "anchor_start_year");
        if (t.contains("anchor_end_year") && !t.at("anchor_end_year").is_null())
            cfg.anchor_end_year = require_field<int>(t, "training", "anchor_end_year");
    }

    if (j.contains("splits")) {
        if (!j.at("splits").is_array())
            throw config_error("BadConfig", "field 'splits' must be an array");
        size_t idx = 0;
        for (const json& s : j.at("splits")) {
            const std::string path = "splits[" + std::to_string(idx++) + "]";
            SplitSpec spec;
            const auto kind = require_field<std::string>(s, path, "kind");
            if (kind == "temporal") {
                spec.kind = SplitSpec::Kind::temporal;
                spec.train_end_year = require_field<int>(s, path, "train_end_year");
                spec.test_year = require_field<int>(s, path, "test_year");
            } else if (kind == "cross_sectional") {
                spec.kind = SplitSpec::Kind::cross_sectional;
                spec.n_folds = field<int>(s, path, "n_folds", 5);
            } else if (kind == "bootstrap") {
                spec.kind = SplitSpec::Kind::bootstrap;
                spec.n_boot = field<int>(s, path, "n_boot", 200);
                spec.level = field<double>(s, path, "level", 0.9);
            } else {
                throw config_error("BadConfig", "field '" + path + ".kind' is unknown: " + kind);
            }
            validate_split_spec(spec);
            cfg.splits.push_back(spec);
        }
    }

    if (j.contains("scale")) {
        RatingScale scale;
        const json& classes = j.at("scale").contains("classes") ? j.at("scale").at("classes")
                                                                : j.at("scale");
        if (!classes.is_array())
            throw config_error("BadConfig", "field 'scale.classes' must be an array");
        for (const json& cls : classes)
            scale.classes.push_back(
                {require_field<std::string>(cls, "scale.classes[]", "label"),
                 require_field<double>(cls, "scale.classes[]", "pd_upper_bound")});
        validate_rating_scale(scale);
        cfg.scale = scale;
    }

    if (j.contains("shifts")) {
        cfg.shifts.shift_by_size =
            parse_by_size(j.at("shifts"), "shifts", cfg.shifts.shift_by_size);
        validate_delta_shifts(cfg.shifts);
    }

    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        cfg.sweep.alphas = field<std::vector<double>>(s, "sweep", "alphas", cfg.sweep.alphas);
        cfg.sweep.ks = field<std::vector<double>>(s, "sweep", "ks", cfg.sweep.ks);
        cfg.sweep.criterion =
            field<std::string>(s, "sweep", "criterion", cfg.sweep.criterion);
        if (cfg.sweep.alphas.empty() || cfg.sweep.ks.empty())
            throw config_error("BadConfig", "field 'sweep' grid must be nonempty");
        for (double a : cfg.sweep.alphas)
            if (!(a > 0.0 && a <= 1.0))
                throw config_error("BadConfig", "field 'sweep.alphas' entries must lie in (0, 1]");
        for (double k : cfg.sweep.ks)
            if (!std::isfinite(k))
                throw config_error("BadConfig", "field 'sweep.ks' entries must be finite");
        if (cfg.sweep.criterion != "qwk_mean" && cfg.sweep.criterion != "qwk_12" &&
            cfg.sweep.criterion != "dynamic_r2" && cfg.sweep.criterion != "fusion_auc")
            throw config_error("BadConfig", "field 'sweep.criterion' is unknown: " +
                                                cfg.sweep.criterion);
    }

    if (j.contains("irls")) {
        const json& s = j.at("irls");
        cfg.irls.max_iter = field<int>(s, "irls", "max_iter", cfg.irls.max_iter);
        cfg.irls.tol = field<double>(s, "irls", "tol", cfg.irls.tol);
        if (cfg.irls.max_iter < 1 || !(cfg.irls.tol > 0.0))
            throw config_error("BadConfig", "field 'irls' options out of range");
    }

    if (j.contains("simulator")) {
        const json& s = j.at("simulator");
        SimConfig& sim = cfg.simulator;
        sim.n_companies = field<int>(s, "simulator", "n_companies", sim.n_companies);
        sim.start_year = field<int>(s, "simulator", "start_year", sim.start_year);
        sim.end_year = field<int>(s, "simulator", "end_year", sim.end_year);
        if (s.contains("size_mix"))
            sim.size_mix = parse_by_size(s.at("size_mix"), "simulator.size_mix", sim.size_mix);
        if (s.contains("latent")) {
            sim.latent.persistence = field<double>(s.at("latent"), "simulator.latent",
                                                   "persistence", sim.latent.persistence);
            sim.latent.shock_sd = field<double>(s.at("latent"), "simulator.latent", "shock_sd",
                                                sim.latent.shock_sd);
        }
        if (s.contains("base_model_noise")) {
            sim.base_model_noise.crd_sd =
                field<double>(s.at("base_model_noise"), "simulator.base_model_noise", "crd_sd",
                              sim.base_model_noise.crd_sd);
            sim.base_model_noise.bhv_sd =
                field<double>(s.at("base_model_noise"), "simulator.base_model_noise", "bhv_sd",
                              sim.base_model_noise.bhv_sd);
        }
        if (s.contains("hazard")) {
            const json& h = s.at("hazard");
            if (h.contains("annual_base_rate"))
                sim.hazard.annual_base_rate = parse_by_size(
                    h.at("annual_base_rate"), "simulator.hazard.annual_base_rate",
                    sim.hazard.annual_base_rate);
            sim.hazard.sensitivity = field<double>(h, "simulator.hazard", "sensitivity",
                                                   sim.hazard.sensitivity);
        }
        if (s.contains("drift")) {
            const json& d = s.at("drift");
            sim.drift.enabled = field<bool>(d, "simulator.drift", "enabled", sim.drift.enabled);
            sim.drift.k_shape =
                field<double>(d, "simulator.drift", "k_shape", sim.drift.k_shape);
            sim.drift.annual_drift_sd = field<double>(d, "simulator.drift", "annual_drift_sd",
                                                      sim.drift.annual_drift_sd);
        }
        if (s.contains("lags"))
            sim.lags = parse_lags(s.at("lags"), "simulator.lags", sim.lags);
        sim.seed = cfg.master_seed;
        validate_sim_config(sim);
    } else {
        cfg.simulator.seed = cfg.master_seed;
    }

    return cfg;
}

AppConfig load_app_config(const std::string& path) {
    json j;
    try {
        j = json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw config_error("BadConfig", "cannot parse config '" + path + "': " + e.what());
    }
    return parse_app_config(j);
}

json default_config_json() {
    const AppConfig cfg;
    json j;
    j["seeds"] = {{"master", cfg.master_seed}};
    j["threads"] = cfg.threads;

    json lags = json::object();
    for (SourceKind s : kAllSources) lags[to_string(s)] = cfg.source_lags.lag_for(s);
    j["sources"] = {{"lags", lags}};

    j["ewma"] = {{"alpha", cfg.ewma.alpha}, {"space", to_string(cfg.ewma.space)}};
    j["interpolation"] = {{"k", cfg.interpolation.k}};
    j["alignment"] = {{"max_bhv_staleness_months", cfg.anchor.max_bhv_staleness_months}};
    j["training"] = {{"anchor_start_year", nullptr}, {"anchor_end_year", nullptr}};

    j["splits"] = json::array({
        {{"kind", "temporal"}, {"train_end_year", 2020}, {"test_year", 2021}},
        {{"kind", "cross_sectional"}, {"n_folds", 5}},
        {{"kind", "bootstrap"}, {"n_boot", 200}, {"level", 0.9}},
    });

    json shifts = json::object();
    for (SizeClass s : kAllSizes) shifts[to_string(s)] = cfg.shifts.shift_for(s);
    j["shifts"] = shifts;

    json scale = json::array();
    for (const auto& cls : default_rating_scale().classes)
        scale.push_back({{"label", cls.label}, {"pd_upper_bound", cls.pd_upper_bound}});
    j["scale"] = {{"classes", scale}};

    j["sweep"] = {{"alphas", cfg.sweep.alphas}, {"ks", cfg.sweep.ks},
                  {"criterion", cfg.sweep.criterion}};

    const SimConfig& sim = cfg.simulator;
    json sim_lags = json::object();
    for (SourceKind s : kAllSources) sim_lags[to_string(s)] = sim.lags.lag_for(s);
    json mix = json::object(), rates = json::object();
    for (SizeClass s : kAllSizes) {
        mix[to_string(s)] = sim.size_mix[static_cast<size_t>(s)];
        rates[to_string(s)] = sim.hazard.annual_base_rate[static_cast<size_t>(s)];
    }
    j["simulator"] = {
        {"n_companies", sim.n_companies},
        {"start_year", sim.start_year},
        {"end_year", sim.end_year},
        {"size_mix", mix},
        {"latent", {{"persistence", sim.latent.persistence}, {"shock_sd", sim.latent.shock_sd}}},
        {"base_model_noise",
         {{"crd_sd", sim.base_model_noise.crd_sd}, {"bhv_sd", sim.base_model_noise.bhv_sd}}},
        {"hazard", {{"annual_base_rate", rates}, {"sensitivity", sim.hazard.sensitivity}}},
        {"drift",
         {{"enabled", sim.drift.enabled},
          {"k_shape", sim.drift.k_shape},
          {"annual_drift_sd", sim.drift.annual_drift_sd}}},
        {"lags", sim_lags},
    };
    return j;
}

} // namespace fusion
