#pragma once

#include "fusion/domain.hpp"

#include <span>
#include <string>
#include <vector>

namespace fusion {

Score logit(const Probability& p);

// 1 / (1 + e^{-s}), clamped to the nearest representable double inside
// (0, 1) so the result always satisfies the Probability invariant.
Probability inverse_logit(Score s);

// Standardization moments fitted on training scores and frozen for scoring.
struct Scaler {
    double mean = 0.0;
    double std = 1.0; // population standard deviation, > 0

    static Scaler identity() { return Scaler{0.0, 1.0}; }
};

// Throws DegenerateInput when fewer than 2 distinct values.
Scaler fit_scaler(std::span<const Score> scores);

Score apply_scaler(const Scaler& scaler, Score s);
Score unapply_scaler(const Scaler& scaler, Score s);

enum class EwmaSpace { logit, probability };

std::string to_string(EwmaSpace s);
EwmaSpace parse_ewma_space(const std::string& s);

struct EwmaConfig {
    double alpha = 0.3; // in (0, 1]
    EwmaSpace space = EwmaSpace::logit;
};

void validate_ewma_config(const EwmaConfig& cfg);

// out[0] = in[0]; out[t] = alpha*in[t] + (1-alpha)*out[t-1]. The recurrence
// steps over gaps in the underlying monthly grid without interpolating.
// Throws EmptySeries.
std::vector<Score> ewma(std::span<const Score> series, const EwmaConfig& cfg);

} // namespace fusion
