#pragma once

#include "fusion/calibration.hpp"
#include "fusion/models.hpp"
#include "fusion/pit.hpp"
#include "fusion/simulator.hpp"
#include "fusion/targets.hpp"
#include "fusion/transforms.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace fusion {

struct SplitSpec {
    enum class Kind { temporal, cross_sectional, bootstrap };
    Kind kind = Kind::temporal;
    // temporal
    int train_end_year = 0;
    int test_year = 0;
    // cross_sectional
    int n_folds = 5;
    // bootstrap
    int n_boot = 200;
    double level = 0.9;
};

std::string to_string(SplitSpec::Kind k);

void validate_split_spec(const SplitSpec& spec);

struct SweepConfig {
    std::vector<double> alphas = {0.3};
    std::vector<double> ks = {3.0};
    std::string criterion = "qwk_mean"; // qwk_mean | qwk_12 | dynamic_r2 | fusion_auc
};

// Parsed application config; one file drives every command. Sections:
// seeds, threads, sources{lags}, ewma{alpha,space}, interpolation{k},
// alignment, training, splits[], scale, shifts, sweep, simulator.
struct AppConfig {
    uint64_t master_seed = 42;
    int threads = 1;
    LagPolicy source_lags;                 // max publication lags
    EwmaConfig ewma;
    InterpolationConfig interpolation;
    AnchorOptions anchor;
    std::optional<int> anchor_start_year;  // training window override
    std::optional<int> anchor_end_year;
    std::vector<SplitSpec> splits;
    RatingScale scale;                     // default scale unless configured
    DeltaShifts shifts;                    // production defaults unless configured
    SweepConfig sweep;
    IrlsOptions irls;
    SimConfig simulator;
};

AppConfig parse_app_config(const nlohmann::json& j);
AppConfig load_app_config(const std::string& path);

// Fully populated config document with default values, for --init-config.
nlohmann::json default_config_json();

} // namespace fusion
