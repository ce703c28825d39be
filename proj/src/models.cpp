#include "fusion/models.hpp"

#include "fusion/linalg.hpp"
#include "fusion/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace fusion {

namespace {

constexpr double kRankTol = 1e-10;

double normal_two_sided_p(double stat) {
    return std::erfc(std::fabs(stat) / std::sqrt(2.0));
}

void check_design(const Design& design) {
    if (design.n_rows == 0) throw data_error("DegenerateDesign", "empty design");
    if (design.values.size() != design.n_rows * design.n_cols())
        throw data_error("DegenerateDesign", "design shape mismatch");
    for (double v : design.values)
        if (!std::isfinite(v))
            throw numeric_error("NotFinite", "design contains a non-finite value");
}

// X^T diag(w) X accumulated row by row; w == nullptr means unit weights.
std::vector<double> cross_product(const Design& x, const std::vector<double>* w) {
    const size_t p = x.n_cols();
    std::vector<double> a(p * p, 0.0);
    for (size_t i = 0; i < x.n_rows; ++i) {
        const double wi = w ? (*w)[i] : 1.0;
        const double* row = &x.values[i * p];
        for (size_t j = 0; j < p; ++j) {
            const double wj = wi * row[j];
            for (size_t k = j; k < p; ++k) a[j * p + k] += wj * row[k];
        }
    }
    for (size_t j = 0; j < p; ++j)
        for (size_t k = 0; k < j; ++k) a[j * p + k] = a[k * p + j];
    return a;
}

std::vector<double> mat_vec(const Design& x, const std::vector<double>& beta) {
    const size_t p = x.n_cols();
    std::vector<double> eta(x.n_rows, 0.0);
    for (size_t i = 0; i < x.n_rows; ++i) {
        double acc = 0.0;
        const double* row = &x.values[i * p];
        for (size_t j = 0; j < p; ++j) acc += row[j] * beta[j];
        eta[i] = acc;
    }
    return eta;
}

void require_full_rank(const Design& design, const char* error_code) {
    auto gram = cross_product(design, nullptr);
    if (!Cholesky::factor(gram, design.n_cols(), kRankTol))
        throw numeric_error(error_code, "design matrix is rank deficient");
}

} // namespace

double feature_value(const DesignRow& row, const std::string& name) {
    if (name == "intercept") return 1.0;
    if (name == "crd") return row.crd_z;
    if (name == "bhv") return row.bhv_z;
    if (name == "size_micro") return row.size == SizeClass::micro ? 1.0 : 0.0;
    if (name == "size_small") return row.size == SizeClass::small ? 1.0 : 0.0;
    if (name == "size_medium") return row.size == SizeClass::medium ? 1.0 : 0.0;
    throw Error("InternalError", "unknown design column '" + name + "'");
}

namespace {

Design design_from_names(std::span<const DesignRow> rows,
                         const std::vector<std::string>& names) {
    Design d;
    d.names = names;
    d.n_rows = rows.size();
    d.values.reserve(rows.size() * names.size());
    for (const DesignRow& row : rows)
        for (const std::string& name : names)
            d.values.push_back(feature_value(row, name));
    return d;
}

} // namespace

Design fusion_design(std::span<const DesignRow> rows) {
    return design_from_names(rows, canonical_names());
}

Design single_source_design(std::span<const DesignRow> rows, bool use_crd) {
    std::vector<std::string> names = {"intercept", use_crd ? "crd" : "bhv",
                                      "size_micro", "size_small", "size_medium"};
    return design_from_names(rows, names);
}

std::string to_string(ModelKind k) { return k == ModelKind::logistic ? "logistic" : "ols"; }

ModelKind parse_model_kind(const std::string& s) {
    if (s == "logistic") return ModelKind::logistic;
    if (s == "ols") return ModelKind::ols;
    throw data_error("BadModelKind", "unknown model kind '" + s + "'");
}

double FittedModel::coefficient(const std::string& name) const {
    for (size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return coefficients[i];
    throw Error("InternalError", "model has no coefficient '" + name + "'");
}

double FittedModel::linear_predictor(const DesignRow& row) const {
    double acc = 0.0;
    for (size_t i = 0; i < names.size(); ++i)
        acc += coefficients[i] * feature_value(row, names[i]);
    return acc;
}

double log1p_exp(double x) {
    if (x > 0.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

double binomial_loglik(std::span<const double> eta, std::span<const int> labels) {
    double ll = 0.0;
    for (size_t i = 0; i < eta.size(); ++i)
        ll += static_cast<double>(labels[i]) * eta[i] - log1p_exp(eta[i]);
    return ll;
}

FittedModel fit_logistic(const Design& design, std::span<const int> labels,
                         const IrlsOptions& options) {
    check_design(design);
    if (labels.size() != design.n_rows)
        throw data_error("LengthMismatch", "labels and design differ in length");

    size_t n_pos = 0;
    for (int y : labels) {
        if (y != 0 && y != 1) throw data_error("BadLabel", "labels must be 0 or 1");
        if (y == 1) ++n_pos;
    }
    if (n_pos == 0 || n_pos == labels.size())
        throw data_error("DegenerateDesign", "need at least one label of each class");
    require_full_rank(design, "DegenerateDesign");

    const size_t n = design.n_rows;
    const size_t p = design.n_cols();
    const double base_rate = static_cast<double>(n_pos) / static_cast<double>(n);

    std::vector<double> beta(p, 0.0);
    // Warm start on the intercept column when present.
    for (size_t j = 0; j < p; ++j)
        if (design.names[j] == "intercept")
            beta[j] = std::log(base_rate / (1.0 - base_rate));

    std::vector<double> eta = mat_vec(design, beta);
    double loglik = binomial_loglik(eta, labels);

    std::vector<double> prob(n), weight(n), grad(p);
    bool converged = false;
    int iterations = 0;
    std::optional<Cholesky> information;
    std::vector<double> loglik_trace = {loglik};

    for (int iter = 0; iter < options.max_iter && !converged; ++iter) {
        iterations = iter + 1;
        for (size_t i = 0; i < n; ++i) {
            prob[i] = 1.0 / (1.0 + std::exp(-eta[i]));
            weight[i] = prob[i] * (1.0 - prob[i]);
        }
        std::fill(grad.begin(), grad.end(), 0.0);
        for (size_t i = 0; i < n; ++i) {
            const double r = static_cast<double>(labels[i]) - prob[i];
            const double* row = &design.values[i * p];
            for (size_t j = 0; j < p; ++j) grad[j] += row[j] * r;
        }
        auto hessian = cross_product(design, &weight);
        information = Cholesky::factor(hessian, p, kRankTol);
        if (!information)
            throw numeric_error("Separation",
                                "information matrix became singular (weights collapsed)");

        std::vector<double> step = information->solve(grad);

        // Step-halving keeps the log-likelihood non-decreasing.
        double scale = 1.0;
        std::vector<double> candidate(p), cand_eta;
        double cand_ll = -std::numeric_limits<double>::infinity();
        for (int halving = 0; halving < 30; ++halving) {
            for (size_t j = 0; j < p; ++j) candidate[j] = beta[j] + scale * step[j];
            cand_eta = mat_vec(design, candidate);
            cand_ll = binomial_loglik(cand_eta, labels);
            if (cand_ll >= loglik - 1e-12 * std::fabs(loglik)) break;
            scale *= 0.5;
        }

        double max_change = 0.0;
        for (size_t j = 0; j < p; ++j)
            max_change = std::max(max_change, std::fabs(scale * step[j]));
        beta = candidate;
        eta = std::move(cand_eta);
        loglik = cand_ll;
        loglik_trace.push_back(loglik);

        for (double b : beta)
            if (std::fabs(b) > options.separation_threshold)
                throw numeric_error("Separation",
                                    "coefficient diverged beyond " +
                                        std::to_string(options.separation_threshold) +
                                        " (likelihood unbounded)");
        if (max_change < options.tol) converged = true;
    }
    if (!converged)
        throw numeric_error("NoConvergence",
                            "IRLS did not converge in " + std::to_string(options.max_iter) +
                                " iterations");

    // Refresh the information matrix at the final coefficients.
    for (size_t i = 0; i < n; ++i) {
        prob[i] = 1.0 / (1.0 + std::exp(-eta[i]));
        weight[i] = prob[i] * (1.0 - prob[i]);
    }
    auto hessian = cross_product(design, &weight);
    information = Cholesky::factor(hessian, p, kRankTol);
    if (!information)
        throw numeric_error("Separation", "information matrix singular at the optimum");
    auto covariance = information->inverse();

    FittedModel model;
    model.kind = ModelKind::logistic;
    model.names = design.names;
    model.coefficients = beta;
    model.std_errors.resize(p);
    model.test_stats.resize(p);
    model.p_values.resize(p);
    for (size_t j = 0; j < p; ++j) {
        model.std_errors[j] = std::sqrt(covariance[j * p + j]);
        model.test_stats[j] = beta[j] / model.std_errors[j];
        model.p_values[j] = normal_two_sided_p(model.test_stats[j]);
    }

    const double loglik_null =
        static_cast<double>(n) * (base_rate * std::log(base_rate) +
                                  (1.0 - base_rate) * std::log(1.0 - base_rate));
    const auto r2 = pseudo_r2(loglik, loglik_null, n);

    model.diagnostics.n_obs = n;
    model.diagnostics.loglik = loglik;
    model.diagnostics.loglik_null = loglik_null;
    model.diagnostics.mcfadden_r2 = r2.mcfadden;
    model.diagnostics.nagelkerke_r2 = r2.nagelkerke;
    model.diagnostics.iterations = iterations;

    BinaryEval train_eval;
    train_eval.scores = eta;
    train_eval.labels.assign(labels.begin(), labels.end());
    model.diagnostics.ks = ks_statistic(train_eval);

    return model;
}

FittedModel fit_logistic_irls(std::span<const DesignRow> rows, std::span<const int> labels,
                              const IrlsOptions& options) {
    return fit_logistic(fusion_design(rows), labels, options);
}

FittedModel fit_ols(const Design& design, std::span<const double> targets) {
    check_design(design);
    if (targets.size() != design.n_rows)
        throw data_error("LengthMismatch", "targets and design differ in length");
    const size_t n = design.n_rows;
    const size_t p = design.n_cols();
    if (n <= p)
        throw data_error("RankDeficient",
                         "need more observations than parameters (n=" + std::to_string(n) +
                             ", p=" + std::to_string(p) + ")");
    for (double t : targets) require_finite_score(t, "fit_ols");

    auto gram = cross_product(design, nullptr);
    auto factor = Cholesky::factor(gram, p, kRankTol);
    if (!factor) throw numeric_error("RankDeficient", "design matrix is rank deficient");

    std::vector<double> xty(p, 0.0);
    for (size_t i = 0; i < n; ++i) {
        const double* row = &design.values[i * p];
        for (size_t j = 0; j < p; ++j) xty[j] += row[j] * targets[i];
    }
    std::vector<double> beta = factor->solve(xty);

    double rss = 0.0, mean_y = 0.0;
    for (double t : targets) mean_y += t;
    mean_y /= static_cast<double>(n);
    double tss = 0.0;
    std::vector<double> fitted = mat_vec(design, beta);
    for (size_t i = 0; i < n; ++i) {
        const double r = targets[i] - fitted[i];
        rss += r * r;
        tss += (targets[i] - mean_y) * (targets[i] - mean_y);
    }
    const double sigma2 = rss / static_cast<double>(n - p);
    auto covariance = factor->inverse();

    FittedModel model;
    model.kind = ModelKind::ols;
    model.names = design.names;
    model.coefficients = beta;
    model.std_errors.resize(p);
    model.test_stats.resize(p);
    model.p_values.resize(p);
    for (size_t j = 0; j < p; ++j) {
        model.std_errors[j] = std::sqrt(sigma2 * covariance[j * p + j]);
        model.test_stats[j] = beta[j] / model.std_errors[j];
        model.p_values[j] = normal_two_sided_p(model.test_stats[j]);
    }
    model.diagnostics.n_obs = n;
    model.diagnostics.r2 = tss > 0.0 ? 1.0 - rss / tss : 1.0;
    model.diagnostics.residual_sd = std::sqrt(sigma2);
    return model;
}

FittedModel fit_ols(std::span<const DesignRow> rows, std::span<const double> targets) {
    return fit_ols(fusion_design(rows), targets);
}

Probability predict_static(const FittedModel& model, const DesignRow& row) {
    if (model.kind != ModelKind::logistic)
        throw data_error("BadModelKind", "predict_static requires a logistic model");
    return inverse_logit(model.linear_predictor(row));
}

std::pair<Score, Probability> predict_dynamic(const FittedModel& model, const DesignRow& row) {
    if (model.kind != ModelKind::ols)
        throw data_error("BadModelKind", "predict_dynamic requires an ols model");
    const Score s = model.linear_predictor(row);
    return {s, inverse_logit(s)};
}

} // namespace fusion
