// Fixed-size 2x2 / 3x3 matrix and singular-value calculus used by every
// criterion and energy evaluation.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace qcload {

template <int N>
struct Mat {
    static_assert(N == 2 || N == 3, "only 2x2 and 3x3 supported");
    std::array<double, N * N> e{};

    double &operator()(int i, int j) { return e[static_cast<std::size_t>(i * N + j)]; }
    double operator()(int i, int j) const { return e[static_cast<std::size_t>(i * N + j)]; }

    static Mat identity() {
        Mat m;
        for (int i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }
    static Mat scaled_identity(double s) {
        Mat m;
        for (int i = 0; i < N; ++i) m(i, i) = s;
        return m;
    }
    static Mat diagonal(const std::array<double, N> &d) {
        Mat m;
        for (int i = 0; i < N; ++i) m(i, i) = d[static_cast<std::size_t>(i)];
        return m;
    }

    Mat operator+(const Mat &o) const {
        Mat r;
        for (std::size_t k = 0; k < e.size(); ++k) r.e[k] = e[k] + o.e[k];
        return r;
    }
    Mat operator-(const Mat &o) const {
        Mat r;
        for (std::size_t k = 0; k < e.size(); ++k) r.e[k] = e[k] - o.e[k];
        return r;
    }
    Mat operator*(double s) const {
        Mat r;
        for (std::size_t k = 0; k < e.size(); ++k) r.e[k] = e[k] * s;
        return r;
    }
};

using Mat2 = Mat<2>;
using Mat3 = Mat<3>;

template <int N>
inline double dot(const Mat<N> &a, const Mat<N> &b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.e.size(); ++k) s += a.e[k] * b.e[k];
    return s;
}

template <int N>
inline double norm2(const Mat<N> &m) { return dot(m, m); }

template <int N>
inline double norm(const Mat<N> &m) { return std::sqrt(norm2(m)); }

template <int N>
inline double trace(const Mat<N> &m) {
    double s = 0.0;
    for (int i = 0; i < N; ++i) s += m(i, i);
    return s;
}

inline double det(const Mat2 &m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

inline double det(const Mat3 &m) {
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

inline Mat2 cof(const Mat2 &m) {
    Mat2 c;
    c(0, 0) = m(1, 1);
    c(0, 1) = -m(1, 0);
    c(1, 0) = -m(0, 1);
    c(1, 1) = m(0, 0);
    return c;
}

inline Mat3 cof(const Mat3 &m) {
    Mat3 c;
    c(0, 0) = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
    c(0, 1) = m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2);
    c(0, 2) = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
    c(1, 0) = m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2);
    c(1, 1) = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
    c(1, 2) = m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1);
    c(2, 0) = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
    c(2, 1) = m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2);
    c(2, 2) = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    return c;
}

// adj A = (cof A)^T
template <int N>
inline Mat<N> adj(const Mat<N> &m) {
    Mat<N> c = cof(m);
    Mat<N> a;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) a(i, j) = c(j, i);
    return a;
}

template <int N>
inline Mat<N> matmul(const Mat<N> &a, const Mat<N> &b) {
    Mat<N> r;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            double s = 0.0;
            for (int k = 0; k < N; ++k) s += a(i, k) * b(k, j);
            r(i, j) = s;
        }
    return r;
}

// Ordered singular values, sigma_1 <= ... <= sigma_N, all >= 0.
template <int N>
struct Spectrum {
    std::array<double, N> v{};
    double operator[](int i) const { return v[static_cast<std::size_t>(i)]; }
};

Spectrum<2> singular_values(const Mat2 &m);
Spectrum<3> singular_values(const Mat3 &m);

// sigma_1 + sigma_2 of a 2x2 matrix when det >= 0; always equals
// sqrt(|xi|^2 + 2 det xi).
double phi2(const Mat2 &xi);

inline double antitrace(const Mat2 &eta) { return eta(0, 1) - eta(1, 0); }

// |Lambda - Lambda_0| with Lambda_0 = (lambda,...,lambda); equals
// dist(F, lambda SO(n)) when det F >= 0.
template <int N>
inline double dist_to_scaled_rotations(const Mat<N> &f, double lambda) {
    Spectrum<N> s = singular_values(f);
    double d2 = 0.0;
    for (int i = 0; i < N; ++i) {
        double d = s[i] - lambda;
        d2 += d * d;
    }
    return std::sqrt(d2);
}

struct degenerate_denominator : std::domain_error {
    using std::domain_error::domain_error;
};

// (atr(omega) tr(D) - atr(D) tr(omega))^2 / phi2(omega)^3.
// Throws degenerate_denominator when phi2(omega) is below tolerance.
double excess_integrand_X(const Mat2 &omega, const Mat2 &d, double tol = 1e-12);

// 2 lambda^2 curl^2 / (3 (curl^2 + max{4 lambda^2, div^2})^{3/2})
double psi(double curl, double div, double lambda);

// Symmetric 3x3 eigenvalues, ascending. Analytic trig form with a Jacobi
// sweep fallback near repeated roots.
std::array<double, 3> sym3_eigenvalues(const Mat3 &s);

}  // namespace qcload
