#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace fusion {

// Dense symmetric positive-definite solver for the small (p <= ~10) normal
// equations and information matrices used by the model fits. Row-major
// p x p input.
class Cholesky {
public:
    // Returns nullopt when a pivot falls below rel_tol * original diagonal
    // (rank deficiency / non-SPD input).
    static std::optional<Cholesky> factor(const std::vector<double>& a, size_t p,
                                          double rel_tol = 1e-12);

    std::vector<double> solve(const std::vector<double>& b) const;
    std::vector<double> inverse() const;

private:
    Cholesky(std::vector<double> lower, size_t p) : lower_(std::move(lower)), p_(p) {}
    std::vector<double> lower_; // L, row-major, A = L L^T
    size_t p_;
};

} // namespace fusion
