#include "fusion/linalg.hpp"

#include <cmath>

namespace fusion {

std::optional<Cholesky> Cholesky::factor(const std::vector<double>& a, size_t p,
                                         double rel_tol) {
    std::vector<double> lower(p * p, 0.0);
    double max_diag = 0.0;
    for (size_t j = 0; j < p; ++j) max_diag = std::max(max_diag, std::fabs(a[j * p + j]));
    if (max_diag == 0.0) return std::nullopt;

    for (size_t j = 0; j < p; ++j) {
        double d = a[j * p + j];
        for (size_t k = 0; k < j; ++k) d -= lower[j * p + k] * lower[j * p + k];
        if (d <= rel_tol * max_diag) return std::nullopt;
        lower[j * p + j] = std::sqrt(d);
        for (size_t i = j + 1; i < p; ++i) {
            double v = a[i * p + j];
            for (size_t k = 0; k < j; ++k) v -= lower[i * p + k] * lower[j * p + k];
            lower[i * p + j] = v / lower[j * p + j];
        }
    }
    return Cholesky(std::move(lower), p);
}

std::vector<double> Cholesky::solve(const std::vector<double>& b) const {
    std::vector<double> x(b);
    // forward: L y = b
    for (size_t i = 0; i < p_; ++i) {
        for (size_t k = 0; k < i; ++k) x[i] -= lower_[i * p_ + k] * x[k];
        x[i] /= lower_[i * p_ + i];
    }
    // backward: L^T x = y
    for (size_t ii = p_; ii-- > 0;) {
        for (size_t k = ii + 1; k < p_; ++k) x[ii] -= lower_[k * p_ + ii] * x[k];
        x[ii] /= lower_[ii * p_ + ii];
    }
    return x;
}

std::vector<double> Cholesky::inverse() const {
    std::vector<double> inv(p_ * p_, 0.0);
    std::vector<double> e(p_, 0.0);
    for (size_t j = 0; j < p_; ++j) {
        e.assign(p_, 0.0);
        e[j] = 1.0;
        auto col = solve(e);
        for (size_t i = 0; i < p_; ++i) inv[i * p_ + j] = col[i];
    }
    return inv;
}

} // namespace fusion
