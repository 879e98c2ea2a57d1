// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

namespace hgcma {

/// Real polynomial of degree at most 6. Coefficients are stored in ascending
/// powers: coefficient i multiplies x^i. Trailing zero coefficients are
/// trimmed so the stored leading coefficient is nonzero.
class PolyReal {
public:
    static constexpr int kMaxDegree = 6;

    PolyReal() = default;
    explicit PolyReal(std::vector<double> ascending);

    /// -1 for the zero polynomial.
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }

    std::span<const double> coefficients() const noexcept { return c_; }
    double operator()(double x) const noexcept;
    PolyReal derivative() const;

    double max_abs_coefficient() const noexcept;

    /// Magnitude |p(x)| is compared against: max|c_i| * max(1,|x|)^degree.
    double residual_scale(double x) const noexcept;

private:
    std::vector<double> c_;
};

/// Distinct real roots in ascending order. Roots closer than
/// kRootClusterTol are reported once.
///
/// Isolation works on the monotone pieces between critical points (found
/// recursively from the derivative) inside the Cauchy bound; each sign change
/// is refined by bisection to machine precision, and critical points where p
/// vanishes numerically are reported as even-multiplicity roots.
///
/// Throws Error(InvalidInput) for the zero polynomial, non-finite
/// coefficients, or degree above 6.
std::vector<double> real_roots(const PolyReal& p);

inline constexpr double kRootClusterTol = 1e-7;

}  // namespace hgcma
