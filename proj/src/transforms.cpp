#include "fusion/transforms.hpp"

#include <cmath>
#include <limits>

namespace fusion {

Score logit(const Probability& p) {
    return std::log(p.value() / (1.0 - p.value()));
}

Probability inverse_logit(Score s) {
    require_finite_score(s, "inverse_logit");
    double p;
    if (s >= 0.0) {
        p = 1.0 / (1.0 + std::exp(-s));
    } else {
        const double e = std::exp(s);
        p = e / (1.0 + e);
    }
    if (p >= 1.0) p = std::nextafter(1.0, 0.0);
    if (p <= 0.0) p = std::numeric_limits<double>::denorm_min();
    return Probability(p);
}

Scaler fit_scaler(std::span<const Score> scores) {
    if (scores.size() < 2)
        throw data_error("DegenerateInput", "scaler needs at least 2 values");
    double mean = 0.0;
    for (Score s : scores) {
        require_finite_score(s, "fit_scaler");
        mean += s;
    }
    mean /= static_cast<double>(scores.size());
    double var = 0.0;
    for (Score s : scores) var += (s - mean) * (s - mean);
    var /= static_cast<double>(scores.size());
    if (var == 0.0)
        throw data_error("DegenerateInput", "scaler input has zero variance");
    return Scaler{mean, std::sqrt(var)};
}

Score apply_scaler(const Scaler& scaler, Score s) {
    return (s - scaler.mean) / scaler.std;
}

Score unapply_scaler(const Scaler& scaler, Score s) {
    return s * scaler.std + scaler.mean;
}

std::string to_string(EwmaSpace s) {
    return s == EwmaSpace::logit ? "logit" : "probability";
}

EwmaSpace parse_ewma_space(const std::string& s) {
    if (s == "logit") return EwmaSpace::logit;
    if (s == "probability") return EwmaSpace::probability;
    throw config_error("BadConfig", "ewma space must be 'logit' or 'probability', got '" + s + "'");
}

void validate_ewma_config(const EwmaConfig& cfg) {
    if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0))
        throw config_error("BadConfig",
                           "ewma alpha must lie in (0, 1], got " + std::to_string(cfg.alpha));
}

std::vector<Score> ewma(std::span<const Score> series, const EwmaConfig& cfg) {
    validate_ewma_config(cfg);
    if (series.empty()) throw data_error("EmptySeries", "ewma input is empty");
    std::vector<Score> out;
    out.reserve(series.size());
    double state = series[0];
    require_finite_score(state, "ewma");
    out.push_back(state);
    for (size_t i = 1; i < series.size(); ++i) {
        require_finite_score(series[i], "ewma");
        state = cfg.alpha * series[i] + (1.0 - cfg.alpha) * state;
        out.push_back(state);
    }
    return out;
}

} // namespace fusion
