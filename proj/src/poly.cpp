// SPDX-License-Identifier: Apache-2.0
#include "hgcma/poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hgcma/error.hpp"

namespace hgcma {

PolyReal::PolyReal(std::vector<double> ascending) : c_(std::move(ascending)) {
    for (double c : c_) {
        if (!std::isfinite(c)) throw Error(ErrorCode::InvalidInput, "polynomial coefficient is not finite");
    }
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

double PolyReal::operator()(double x) const noexcept {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

PolyReal PolyReal::derivative() const {
    if (c_.size() <= 1) return PolyReal{};
    std::vector<double> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = static_cast<double>(i) * c_[i];
    return PolyReal(std::move(d));
}

double PolyReal::max_abs_coefficient() const noexcept {
    double m = 0.0;
    for (double c : c_) m = std::max(m, std::fabs(c));
    return m;
}

double PolyReal::residual_scale(double x) const noexcept {
    return max_abs_coefficient() * std::pow(std::max(1.0, std::fabs(x)), std::max(degree(), 0));
}

namespace {

// Rounding-error scale of Horner evaluation at x.
double evaluation_scale(std::span<const double> c, double x) {
    double s = 0.0;
    double xp = 1.0;
    for (double ci : c) {
        s += std::fabs(ci) * xp;
        xp *= std::fabs(x);
    }
    return s;
}

double cauchy_bound(std::span<const double> c) {
    const double lead = std::fabs(c.back());
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < c.size(); ++i) m = std::max(m, std::fabs(c[i]) / lead);
    return 1.0 + m;
}

// Root of p in [a, b] where p(a), p(b) have strictly opposite signs.
double bisect(const PolyReal& p, double a, double b, double fa) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        const double fm = p(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (fa < 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

// Candidate roots, possibly with near-duplicates.
std::vector<double> raw_roots(const PolyReal& p) {
    const int d = p.degree();
    const auto c = p.coefficients();
    if (d <= 0) return {};
    if (d == 1) return {-c[0] / c[1]};

    const double bound = cauchy_bound(c);
    std::vector<double> knots{-bound};
    for (double x : raw_roots(p.derivative())) {
        if (x > -bound && x < bound) knots.push_back(x);
    }
    knots.push_back(bound);
    std::sort(knots.begin(), knots.end());

    std::vector<double> roots;
    for (std::size_t i = 0; i < knots.size(); ++i) {
        const double x = knots[i];
        const double fx = p(x);
        const bool interior = i > 0 && i + 1 < knots.size();
        if (fx == 0.0 || (interior && std::fabs(fx) <= 1e-12 * evaluation_scale(c, x))) {
            roots.push_back(x);
        }
        if (i + 1 == knots.size()) break;
        const double y = knots[i + 1];
        const double fy = p(y);
        if (fx != 0.0 && fy != 0.0 && ((fx < 0.0) != (fy < 0.0))) roots.push_back(bisect(p, x, y, fx));
    }
    return roots;
}

}  // namespace

std::vector<double> real_roots(const PolyReal& p) {
    if (p.is_zero()) throw Error(ErrorCode::InvalidInput, "real_roots: zero polynomial");
    if (p.degree() > PolyReal::kMaxDegree) throw Error(ErrorCode::InvalidInput, "real_roots: degree above 6");

    std::vector<double> roots = raw_roots(p);
    std::sort(roots.begin(), roots.end());

    std::vector<double> out;
    for (double x : roots) {
        if (std::fabs(p(x)) > 1e-8 * p.residual_scale(x)) continue;
        if (!out.empty() && std::fabs(x - out.back()) <= kRootClusterTol) {
            if (std::fabs(p(x)) < std::fabs(p(out.back()))) out.back() = x;
            continue;
        }
        out.push_back(x);
    }
    return out;
}

}  // namespace hgcma
