#pragma once

#include "fusion/domain.hpp"
#include "fusion/transforms.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fusion {

// One standardized feature row. `crd_z` and `bhv_z` are standardized logit
// PDs (the bhv one EWMA-smoothed for the dynamic model); size dummies use
// `large` as the reference level.
struct DesignRow {
    double crd_z = 0.0;
    double bhv_z = 0.0;
    SizeClass size = SizeClass::large;
};

// Named design matrix, row-major. The canonical fusion design has columns
// intercept, crd, bhv, size_micro, size_small, size_medium; baselines drop
// one of the score columns.
struct Design {
    std::vector<std::string> names;
    std::vector<double> values; // n_rows * names.size(), row-major
    size_t n_rows = 0;

    size_t n_cols() const { return names.size(); }
    double at(size_t i, size_t j) const { return values[i * names.size() + j]; }
};

inline const std::vector<std::string>& canonical_names() {
    static const std::vector<std::string> names = {
        "intercept", "crd", "bhv", "size_micro", "size_small", "size_medium"};
    return names;
}

double feature_value(const DesignRow& row, const std::string& name);

Design fusion_design(std::span<const DesignRow> rows);
// use_crd = true -> intercept + crd + size dummies; false -> intercept + bhv + sizes.
Design single_source_design(std::span<const DesignRow> rows, bool use_crd);

enum class ModelKind { logistic, ols };

std::string to_string(ModelKind k);
ModelKind parse_model_kind(const std::string& s);

struct FitDiagnostics {
    size_t n_obs = 0;
    std::optional<double> mcfadden_r2;
    std::optional<double> nagelkerke_r2;
    std::optional<double> ks;
    std::optional<double> r2;
    double loglik = 0.0;      // logistic only
    double loglik_null = 0.0; // logistic only
    double residual_sd = 0.0; // ols only
    int iterations = 0;
    std::vector<double> loglik_trace; // per IRLS iteration; not persisted
};

struct FittedModel {
    ModelKind kind = ModelKind::logistic;
    std::vector<std::string> names;
    std::vector<double> coefficients;
    std::vector<double> std_errors;
    std::vector<double> test_stats; // z for logistic, t for ols
    std::vector<double> p_values;   // two-sided, normal approximation
    FitDiagnostics diagnostics;

    // Frozen training moments; identity until the pipeline fills them in.
    Scaler crd_scaler = Scaler::identity();
    Scaler bhv_scaler = Scaler::identity();
    std::optional<EwmaConfig> ewma; // dynamic model only

    double coefficient(const std::string& name) const;
    double linear_predictor(const DesignRow& row) const;
};

struct IrlsOptions {
    int max_iter = 100;
    double tol = 1e-8;                  // on max |coefficient change|
    double separation_threshold = 30.0; // |coef| beyond this means separation
};

// Binomial MLE via iteratively reweighted least squares with step-halving.
// Standard errors come from the inverse observed information, z = coef/se,
// p-values two-sided normal. Throws DegenerateDesign (rank-deficient or
// single-class input), Separation, NoConvergence.
FittedModel fit_logistic(const Design& design, std::span<const int> labels,
                         const IrlsOptions& options = {});
FittedModel fit_logistic_irls(std::span<const DesignRow> rows, std::span<const int> labels,
                              const IrlsOptions& options = {});

// Least squares through the normal equations with classical homoskedastic
// standard errors. Throws RankDeficient.
FittedModel fit_ols(const Design& design, std::span<const double> targets);
FittedModel fit_ols(std::span<const DesignRow> rows, std::span<const double> targets);

// inverse_logit of the linear predictor; model kind must be logistic.
Probability predict_static(const FittedModel& model, const DesignRow& row);

// Predicted score and its inverse_logit; model kind must be ols.
std::pair<Score, Probability> predict_dynamic(const FittedModel& model, const DesignRow& row);

// Stable log(1 + e^x); shared by the fit and its test oracles.
double log1p_exp(double x);

// Binomial log-likelihood of labels under linear predictors eta.
double binomial_loglik(std::span<const double> eta, std::span<const int> labels);

} // namespace fusion
