// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace hgcma {

template <std::size_t N>
using Vec = std::array<double, N>;

/// Dense row-major N x N real matrix.
template <std::size_t N>
struct Mat {
    std::array<double, N * N> a{};

    double& operator()(std::size_t i, std::size_t j) { return a[i * N + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * N + j]; }

    static Mat identity() {
        Mat m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }

    Vec<N> column(std::size_t j) const {
        Vec<N> v{};
        for (std::size_t i = 0; i < N; ++i) v[i] = (*this)(i, j);
        return v;
    }

    void set_column(std::size_t j, const Vec<N>& v) {
        for (std::size_t i = 0; i < N; ++i) (*this)(i, j) = v[i];
    }
};

/// Real symmetric N x N matrix; symmetry holds by construction.
template <std::size_t N>
class SymMat {
public:
    SymMat() = default;

    static SymMat identity() {
        SymMat s;
        for (std::size_t i = 0; i < N; ++i) s.m_(i, i) = 1.0;
        return s;
    }

    static SymMat diagonal(const Vec<N>& d) {
        SymMat s;
        for (std::size_t i = 0; i < N; ++i) s.m_(i, i) = d[i];
        return s;
    }

    /// Symmetric part of an arbitrary matrix.
    static SymMat from_matrix(const Mat<N>& m) {
        SymMat s;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) s.m_(i, j) = 0.5 * (m(i, j) + m(j, i));
        return s;
    }

    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

    void set(std::size_t i, std::size_t j, double v) {
        m_(i, j) = v;
        m_(j, i) = v;
    }

    /// this += w * v v^T
    void add_outer(const Vec<N>& v, double w = 1.0) {
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) m_(i, j) += w * v[i] * v[j];
    }

    const Mat<N>& matrix() const { return m_; }

private:
    Mat<N> m_{};
};

using RealSym3 = SymMat<3>;
using RealSym2 = SymMat<2>;

template <std::size_t N>
double dot(const Vec<N>& x, const Vec<N>& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s += x[i] * y[i];
    return s;
}

template <std::size_t N>
double norm(const Vec<N>& x) {
    return std::sqrt(dot(x, x));
}

template <std::size_t N>
Vec<N> operator*(const Mat<N>& m, const Vec<N>& v) {
    Vec<N> out{};
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) out[i] += m(i, j) * v[j];
    return out;
}

template <std::size_t N>
Vec<N> operator*(const SymMat<N>& m, const Vec<N>& v) {
    return m.matrix() * v;
}

template <std::size_t N>
Mat<N> operator*(const Mat<N>& x, const Mat<N>& y) {
    Mat<N> out;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t k = 0; k < N; ++k)
            for (std::size_t j = 0; j < N; ++j) out(i, j) += x(i, k) * y(k, j);
    return out;
}

template <std::size_t N>
Mat<N> transpose(const Mat<N>& m) {
    Mat<N> t;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) t(i, j) = m(j, i);
    return t;
}

template <std::size_t N>
Vec<N> operator+(Vec<N> x, const Vec<N>& y) {
    for (std::size_t i = 0; i < N; ++i) x[i] += y[i];
    return x;
}

template <std::size_t N>
Vec<N> operator-(Vec<N> x, const Vec<N>& y) {
    for (std::size_t i = 0; i < N; ++i) x[i] -= y[i];
    return x;
}

template <std::size_t N>
Vec<N> operator*(double s, Vec<N> x) {
    for (auto& e : x) e *= s;
    return x;
}

template <std::size_t N>
double frobenius(const Mat<N>& m) {
    double s = 0.0;
    for (double e : m.a) s += e * e;
    return std::sqrt(s);
}

template <std::size_t N>
double frobenius(const SymMat<N>& m) {
    return frobenius(m.matrix());
}

template <std::size_t N>
double max_abs(const Vec<N>& v) {
    double m = 0.0;
    for (double e : v) m = std::fmax(m, std::fabs(e));
    return m;
}

}  // namespace hgcma
