#include "fusion/simulator.hpp"

#include "fusion/parallel.hpp"
#include "fusion/rng.hpp"
#include "fusion/targets.hpp"
#include "fusion/transforms.hpp"

#include <cmath>
#include <cstdio>

namespace fusion {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Expected annual default probability for a company whose latent sits at a
// fixed level x all year: 1 - (1 - monthly_hazard)^12.
double annual_rate_at(double intercept, double sensitivity, double x) {
    const double monthly = sigmoid(intercept + sensitivity * x);
    return 1.0 - std::pow(1.0 - monthly, 12.0);
}

// Base-model PDs are noisy estimates of the true 12-month PD implied by the
// current latent level, so simulated outputs live on a realistic PD scale.
double annual_pd_logit(double intercept, double sensitivity, double level) {
    const double annual =
        std::min(1.0 - 1e-12, std::max(1e-12, annual_rate_at(intercept, sensitivity, level)));
    return std::log(annual / (1.0 - annual));
}

} // namespace

double solve_hazard_intercept(double target_annual, double sensitivity,
                              double stationary_sd) {
    if (target_annual <= 0.0) return -700.0; // hazard numerically zero, still in (0,1)
    if (target_annual >= 1.0)
        throw config_error("BadConfig", "annual base rate must be < 1");

    // E_x[annual rate], x ~ N(0, sd^2), via midpoint quadrature.
    auto expected_rate = [&](double intercept) {
        if (stationary_sd <= 0.0) return annual_rate_at(intercept, sensitivity, 0.0);
        const int nodes = 201;
        const double span = 8.0 * stationary_sd;
        const double h = 2.0 * span / nodes;
        double acc = 0.0, wsum = 0.0;
        for (int i = 0; i < nodes; ++i) {
            const double x = -span + (i + 0.5) * h;
            const double w = std::exp(-0.5 * (x / stationary_sd) * (x / stationary_sd));
            acc += w * annual_rate_at(intercept, sensitivity, x);
            wsum += w;
        }
        return acc / wsum;
    };

    double lo = -40.0, hi = 10.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (expected_rate(mid) < target_annual) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

void validate_sim_config(const SimConfig& config) {
    if (config.n_companies < 1)
        throw config_error("InvalidConfig", "simulator.n_companies must be >= 1");
    if (config.end_year < config.start_year)
        throw config_error("InvalidConfig", "simulator.end_year before start_year");
    double mix_sum = 0.0;
    for (double w : config.size_mix) {
        if (w < 0.0) throw config_error("InvalidConfig", "simulator.size_mix entries must be >= 0");
        mix_sum += w;
    }
    if (std::fabs(mix_sum - 1.0) > 1e-9)
        throw config_error("InvalidConfig", "simulator.size_mix must sum to 1");
    if (!(config.latent.persistence >= 0.0 && config.latent.persistence < 1.0))
        throw config_error("InvalidConfig", "simulator.latent.persistence must lie in [0, 1)");
    if (!(config.latent.shock_sd > 0.0))
        throw config_error("InvalidConfig", "simulator.latent.shock_sd must be > 0");
    if (!(config.base_model_noise.crd_sd > 0.0) || !(config.base_model_noise.bhv_sd > 0.0))
        throw config_error("InvalidConfig", "simulator.base_model_noise sds must be > 0");
    for (double r : config.hazard.annual_base_rate)
        if (r < 0.0 || r >= 1.0)
            throw config_error("InvalidConfig", "simulator.hazard.annual_base_rate must lie in [0, 1)");
    if (!std::isfinite(config.hazard.sensitivity))
        throw config_error("InvalidConfig", "simulator.hazard.sensitivity must be finite");
    if (config.drift.enabled && config.drift.annual_drift_sd < 0.0)
        throw config_error("InvalidConfig", "simulator.drift.annual_drift_sd must be >= 0");
    validate_lag_policy(config.lags);
}

namespace {

struct CompanyOutput {
    CompanyTruth truth;
    std::vector<Observation> observations;
};

CompanyOutput simulate_company(const SimConfig& config, size_t index,
                               const std::array<double, 4>& intercepts) {
    RandomStream rng(derive_seed(config.seed, "company", index));

    char name[16];
    std::snprintf(name, sizeof(name), "C%06zu", index + 1);

    CompanyOutput out;
    out.truth.company_id = name;

    // Size class from the configured mix.
    {
        const double u = rng.u01();
        double acc = 0.0;
        SizeClass size = SizeClass::large;
        for (SizeClass s : kAllSizes) {
            acc += config.size_mix[static_cast<size_t>(s)];
            if (u < acc) {
                size = s;
                break;
            }
        }
        out.truth.size = size;
    }

    const double rho = config.latent.persistence;
    const double shock_sd = config.latent.shock_sd;
    const double stationary_sd = shock_sd / std::sqrt(1.0 - rho * rho);
    double ar_state = rng.normal(0.0, stationary_sd);

    const double intercept = intercepts[static_cast<size_t>(out.truth.size)];
    const double sensitivity = config.hazard.sensitivity;

    const InterpolationConfig drift_shape{config.drift.k_shape};
    double drift_base = 0.0;   // accumulated completed-year drift
    double drift_annual = 0.0; // this year's drift amplitude

    auto emit = [&](SourceKind source, const Date& ref, int lag_months,
                    std::map<std::string, double> payload) {
        Observation obs;
        obs.company_id = out.truth.company_id;
        obs.source = source;
        obs.reference_date = ref;
        obs.availability_date = add_months(ref, lag_months);
        obs.payload = std::move(payload);
        out.observations.push_back(std::move(obs));
    };

    bool defaulted = false;
    for (int year = config.start_year; year <= config.end_year && !defaulted; ++year) {
        if (config.drift.enabled) drift_annual = rng.normal(0.0, config.drift.annual_drift_sd);
        for (int month = 1; month <= 12 && !defaulted; ++month) {
            const Date ref = end_of_month(year, month);
            const bool first_month = out.truth.months.empty();
            if (!first_month) ar_state = rho * ar_state + rng.normal(0.0, shock_sd);

            double level = ar_state;
            if (config.drift.enabled) {
                const double tau = static_cast<double>(month) / 12.0;
                level += drift_base + drift_annual * interpolation_weight(tau, drift_shape);
            }

            const double hazard = sigmoid(intercept + sensitivity * level);
            out.truth.months.push_back(ref);
            out.truth.latent.push_back(level);
            out.truth.hazard.push_back(hazard);

            defaulted = rng.bernoulli(hazard);

            // Monthly behavioral PD from the credit register.
            const double pd_bhv =
                inverse_logit(annual_pd_logit(intercept, sensitivity, level) +
                              rng.normal(0.0, config.base_model_noise.bhv_sd))
                    .value();
            emit(SourceKind::credit_register, ref,
                 config.lags.lag_for(SourceKind::credit_register), {{"pd_bhv", pd_bhv}});

            // Annual balance sheet at December.
            if (month == 12) {
                const double pd_crd =
                    inverse_logit(annual_pd_logit(intercept, sensitivity, level) +
                                  rng.normal(0.0, config.base_model_noise.crd_sd))
                        .value();
                emit(SourceKind::balance_sheet, ref,
                     config.lags.lag_for(SourceKind::balance_sheet),
                     {{"pd_crd", pd_crd},
                      {"size_class", size_class_payload(out.truth.size)}});
            }

            // Monthly default flags; the three indicators fire together only
            // probabilistically at the default month, internal always does.
            std::map<std::string, double> flags = {
                {"rettificato", 0.0}, {"orbis_bankruptcy", 0.0}, {"internal", 0.0}};
            if (defaulted) {
                flags["internal"] = 1.0;
                flags["rettificato"] = rng.bernoulli(0.8) ? 1.0 : 0.0;
                flags["orbis_bankruptcy"] = rng.bernoulli(0.5) ? 1.0 : 0.0;
                out.truth.default_month = ref;
            }
            emit(SourceKind::default_flag, ref,
                 config.lags.lag_for(SourceKind::default_flag), std::move(flags));
        }
        if (config.drift.enabled && !defaulted) drift_base += drift_annual;
    }
    return out;
}

} // namespace

SimulationResult simulate_portfolio(const SimConfig& config, int threads) {
    validate_sim_config(config);

    const double stationary_sd =
        config.latent.shock_sd / std::sqrt(1.0 - config.latent.persistence * config.latent.persistence);
    std::array<double, 4> intercepts;
    for (SizeClass s : kAllSizes)
        intercepts[static_cast<size_t>(s)] =
            solve_hazard_intercept(config.hazard.annual_base_rate[static_cast<size_t>(s)],
                                   config.hazard.sensitivity, stationary_sd);

    std::vector<CompanyOutput> outputs(static_cast<size_t>(config.n_companies));
    parallel_for(outputs.size(), threads, [&](size_t i) {
        outputs[i] = simulate_company(config, i, intercepts);
    });

    SimulationResult result;
    for (auto& out : outputs) {
        for (auto& obs : out.observations) result.ledger.insert(std::move(obs));
        result.truth.companies.push_back(std::move(out.truth));
    }
    return result;
}

double empirical_default_rate(const SimulatedTruth& truth, SizeClass size) {
    size_t total = 0, defaulted = 0;
    for (const CompanyTruth& c : truth.companies) {
        if (c.size != size) continue;
        ++total;
        if (c.default_month) ++defaulted;
    }
    if (total == 0)
        throw data_error("EmptySegment", "no companies in segment '" + to_string(size) + "'");
    return static_cast<double>(defaulted) / static_cast<double>(total);
}

} // namespace fusion
