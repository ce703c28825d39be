#pragma once

#include "fusion/domain.hpp"
#include "fusion/pit.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace fusion {

// Synthetic portfolio generator. A per-company AR(1) latent creditworthiness
// drives a logit-linked monthly hazard plus the two base-model PDs (noisy
// views of the same latent), reproducing the data topology the pipeline
// needs: annual stale balance sheets, monthly behavioral scores, absorbing
// defaults, size-graded base rates, publication lags. It is a test harness,
// not a claim about any real portfolio's data-generating process.

struct LatentConfig {
    double persistence = 0.95; // rho in [0, 1)
    double shock_sd = 0.3;     // > 0
};

struct NoiseConfig {
    double crd_sd = 1.2; // > 0
    double bhv_sd = 1.2; // > 0
};

struct HazardConfig {
    // Target annual default rates per size class used to calibrate the
    // hazard intercepts; micro..large. A rate of 0 disables defaults for
    // that segment.
    std::array<double, 4> annual_base_rate = {0.0615, 0.0316, 0.0206, 0.0134};
    double sensitivity = 1.5; // slope on the latent inside the hazard logit
};

// Optional deterministic within-year drift whose shape follows the
// interpolation weight family; used to generate portfolios whose risk
// deteriorates convexly between anchors.
struct DriftConfig {
    bool enabled = false;
    double k_shape = 3.0;
    double annual_drift_sd = 0.0;
};

struct SimConfig {
    int n_companies = 500;
    int start_year = 2017;
    int end_year = 2023;
    std::array<double, 4> size_mix = {0.12, 0.26, 0.27, 0.35}; // micro..large, sums to 1
    LatentConfig latent;
    NoiseConfig base_model_noise;
    HazardConfig hazard;
    DriftConfig drift;
    // Stamped publication lags per source (balance sheet lag may be any
    // value in the 3-9 month band; 6 by default).
    LagPolicy lags = LagPolicy{{6, 2, 2, 0}};
    uint64_t seed = 42;
};

void validate_sim_config(const SimConfig& config);

struct CompanyTruth {
    std::string company_id;
    SizeClass size = SizeClass::large;
    std::vector<Date> months;   // month-end grid while alive
    std::vector<double> latent; // per month (drift included)
    std::vector<double> hazard; // per month, in (0, 1)
    std::optional<Date> default_month;
};

struct SimulatedTruth {
    std::vector<CompanyTruth> companies;
};

struct SimulationResult {
    ObservationLedger ledger;
    SimulatedTruth truth;
};

// Deterministic given config.seed; company streams use per-company derived
// seeds, so generation parallelized over companies matches sequential output.
SimulationResult simulate_portfolio(const SimConfig& config, int threads = 1);

// Fraction of companies in the segment that default inside the simulated
// span. Throws EmptySegment.
double empirical_default_rate(const SimulatedTruth& truth, SizeClass size);

// Solves the hazard logit intercept so the expected annual default rate of
// a stationary-latent company matches `target_annual` (quadrature +
// bisection). Exposed for tests.
double solve_hazard_intercept(double target_annual, double sensitivity,
                              double stationary_sd);

} // namespace fusion
