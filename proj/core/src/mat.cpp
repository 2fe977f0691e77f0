#include "qcload/mat.hpp"

#include <algorithm>
#include <cmath>

namespace qcload {

namespace {

// Clamp tiny negative radicands produced by rounding at degenerate spectra.
double safe_sqrt(double x) {
    if (x < 0.0) {
        if (x < -1e-12) return std::sqrt(std::max(x, 0.0));  // hard negative: 0
        return 0.0;
    }
    return std::sqrt(x);
}

// One cyclic Jacobi rotation pass on a symmetric 3x3.
void jacobi_sweep(double a[3][3]) {
    static const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    for (const auto &pr : pairs) {
        int p = pr[0], q = pr[1];
        if (std::abs(a[p][q]) < 1e-300) continue;
        double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        double app = a[p][p], aqq = a[q][q], apq = a[p][q];
        a[p][p] = c * c * app - 2.0 * s * c * apq + s * s * aqq;
        a[q][q] = s * s * app + 2.0 * s * c * apq + c * c * aqq;
        a[p][q] = a[q][p] = 0.0;
        for (int k = 0; k < 3; ++k) {
            if (k == p || k == q) continue;
            double akp = a[k][p], akq = a[k][q];
            a[k][p] = a[p][k] = c * akp - s * akq;
            a[k][q] = a[q][k] = s * akp + c * akq;
        }
    }
}

std::array<double, 3> jacobi_eigenvalues(const Mat3 &m) {
    double a[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a[i][j] = m(i, j);
    for (int sweep = 0; sweep < 50; ++sweep) {
        double off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
        if (off < 1e-30) break;
        jacobi_sweep(a);
    }
    std::array<double, 3> ev{a[0][0], a[1][1], a[2][2]};
    std::sort(ev.begin(), ev.end());
    return ev;
}

}  // namespace

std::array<double, 3> sym3_eigenvalues(const Mat3 &s) {
    double p1 = s(0, 1) * s(0, 1) + s(0, 2) * s(0, 2) + s(1, 2) * s(1, 2);
    if (p1 == 0.0) {
        std::array<double, 3> ev{s(0, 0), s(1, 1), s(2, 2)};
        std::sort(ev.begin(), ev.end());
        return ev;
    }
    double q = trace(s) / 3.0;
    double p2 = (s(0, 0) - q) * (s(0, 0) - q) + (s(1, 1) - q) * (s(1, 1) - q) +
                (s(2, 2) - q) * (s(2, 2) - q) + 2.0 * p1;
    double p = std::sqrt(p2 / 6.0);
    Mat3 b;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) b(i, j) = (s(i, j) - (i == j ? q : 0.0)) / p;
    double r = det(b) / 2.0;
    // Near r = +-1 the cubic has (numerically) repeated roots; hand over to
    // Jacobi iteration instead of the trig formula.
    if (1.0 - r * r < 1e-12) return jacobi_eigenvalues(s);
    r = std::clamp(r, -1.0, 1.0);
    double phi = std::acos(r) / 3.0;
    double e3 = q + 2.0 * p * std::cos(phi);
    double e1 = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
    double e2 = 3.0 * q - e1 - e3;
    std::array<double, 3> ev{e1, e2, e3};
    std::sort(ev.begin(), ev.end());
    return ev;
}

Spectrum<2> singular_values(const Mat2 &m) {
    double f = norm2(m);
    double d = det(m);
    double sum = safe_sqrt(f + 2.0 * std::abs(d));   // sigma1 + sigma2
    double dif = safe_sqrt(f - 2.0 * std::abs(d));   // sigma2 - sigma1
    Spectrum<2> s;
    s.v[0] = std::max(0.0, 0.5 * (sum - dif));
    s.v[1] = 0.5 * (sum + dif);
    return s;
}

Spectrum<3> singular_values(const Mat3 &m) {
    Mat3 mtm;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double v = 0.0;
            for (int k = 0; k < 3; ++k) v += m(k, i) * m(k, j);
            mtm(i, j) = v;
        }
    auto ev = sym3_eigenvalues(mtm);
    Spectrum<3> s;
    for (int i = 0; i < 3; ++i) s.v[static_cast<std::size_t>(i)] = safe_sqrt(ev[static_cast<std::size_t>(i)]);
    return s;
}

double phi2(const Mat2 &xi) {
    return safe_sqrt(norm2(xi) + 2.0 * det(xi));
}

double excess_integrand_X(const Mat2 &omega, const Mat2 &d, double tol) {
    double denom = phi2(omega);
    if (denom <= tol) throw degenerate_denominator("excess_integrand_X: phi2(omega) below tolerance");
    double num = antitrace(omega) * trace(d) - antitrace(d) * trace(omega);
    return num * num / (denom * denom * denom);
}

double psi(double curl, double div, double lambda) {
    double denom = curl * curl + std::max(4.0 * lambda * lambda, div * div);
    return 2.0 * lambda * lambda * curl * curl / (3.0 * std::pow(denom, 1.5));
}

}  // namespace qcload
