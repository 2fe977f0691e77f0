#include "qcload/zhang.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qcload {

double c1(double m, double q) {
    if (!(m > 0.0)) throw std::domain_error("c1: M must be > 0");
    return 1.0 / (2.0 * std::pow(2.0 * m, 2.0 - q));
}

double c2(double q) { return 1.0 / (2.0 * std::pow(2.0, 2.0 - q)); }

GrowthConstants2D growth_constants(double m, double q) {
    GrowthConstants2D g;
    g.c1 = c1(m, q);
    g.c2 = c2(q);
    g.m = m;
    g.q = q;
    return g;
}

template <int N>
double big_F(const Mat<N> &b, double m, double q) {
    double t = norm(b);
    if (t <= m) return c1(m, q) * t * t;
    return c2(q) * std::pow(t, q);
}
template double big_F<2>(const Mat2 &, double, double);
template double big_F<3>(const Mat3 &, double, double);

double little_f(double t, double m, double q) {
    return std::min(c1(m, q) * t * t, c2(q) * std::pow(t, q));
}

template <int N>
double verify_zhang(const Mat<N> &a, const Mat<N> &b, double q) {
    double na = norm(a);
    if (!(na > 0.0)) throw std::domain_error("verify_zhang: |A| must be > 0");
    Mat<N> ab = a + b;
    double lhs = std::pow(norm2(ab), 0.5 * q) - std::pow(na, q) -
                 q * std::pow(na, q - 2.0) * dot(a, b);
    // The certified excess bound carries the q(q-1) prefactor from the
    // second derivative of |.|^q: the Taylor excess equals
    // int_0^1 (1-s) d^2/ds^2 |A+sB|^q ds >= q(q-1) int (1-s)|B|^2/|X|^{2-q},
    // and C_1, C_2 bound that integral. Without the prefactor the colinear
    // point B = -A is a counterexample for q below ~1.31.
    return lhs - q * (q - 1.0) * big_F(b, na, q);
}
template double verify_zhang<2>(const Mat2 &, const Mat2 &, double);
template double verify_zhang<3>(const Mat3 &, const Mat3 &, double);

double kappa_lower(double q) { return std::pow(2.0, 2.0 - q); }
double kappa_upper(double q) { return q * std::pow(2.0, 1.0 - q); }
double kappa_affine(double q) { return 3.0 - q + (2.0 - std::sqrt(2.0)) * (q - 2.0); }

namespace {

// ((1 + 2ct + t^2)^{q/2} - 1 - qct) / t^q
double kappa_objective(double t, double c, double q) {
    double s = 1.0 + 2.0 * c * t + t * t;
    if (s < 0.0) s = 0.0;  // roundoff at c = -1, t = 1
    return (std::pow(s, 0.5 * q) - 1.0 - q * c * t) / std::pow(t, q);
}

double golden_min_t(double c, double q, double lo, double hi) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = std::log(lo), b = std::log(hi);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = kappa_objective(std::exp(x1), c, q);
    double f2 = kappa_objective(std::exp(x2), c, q);
    for (int it = 0; it < 120; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = kappa_objective(std::exp(x1), c, q);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = kappa_objective(std::exp(x2), c, q);
        }
    }
    return std::min(f1, f2);
}

}  // namespace

double kappa_numeric(double q, int resolution) {
    if (!(q > 2.0 && q < 3.0)) throw std::domain_error("kappa_numeric: q must be in (2,3)");
    if (resolution < 8) resolution = 8;
    const double t_lo = 1e-3, t_hi = 1e3;
    double best = std::numeric_limits<double>::infinity();
    double best_c = -1.0, best_t = 1.0;
    double llo = std::log(t_lo), lhi = std::log(t_hi);
    for (int i = 0; i <= resolution; ++i) {
        double c = -1.0 + 2.0 * i / resolution;
        for (int j = 0; j <= resolution; ++j) {
            double t = std::exp(llo + (lhi - llo) * j / resolution);
            double v = kappa_objective(t, c, q);
            if (v < best) {
                best = v;
                best_c = c;
                best_t = t;
            }
        }
    }
    // local refinement: alternate golden-section in t and a c-line search
    double dc = 2.0 / resolution;
    double c_lo = std::max(-1.0, best_c - dc), c_hi = std::min(1.0, best_c + dc);
    for (int pass = 0; pass < 60; ++pass) {
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = c_lo, b = c_hi;
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = golden_min_t(x1, q, best_t / 4.0, best_t * 4.0);
        double f2 = golden_min_t(x2, q, best_t / 4.0, best_t * 4.0);
        for (int it = 0; it < 40; ++it) {
            if (f1 < f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - gr * (b - a);
                f1 = golden_min_t(x1, q, best_t / 4.0, best_t * 4.0);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + gr * (b - a);
                f2 = golden_min_t(x2, q, best_t / 4.0, best_t * 4.0);
            }
        }
        double v = std::min(f1, f2);
        if (v >= best - 1e-14) {
            best = std::min(best, v);
            break;
        }
        best = v;
    }
    return best;
}

KappaEstimate kappa_estimate(double q, int resolution) {
    KappaEstimate k;
    k.q = q;
    k.lower = kappa_lower(q);
    k.upper = kappa_upper(q);
    k.affine = kappa_affine(q);
    k.numeric = kappa_numeric(q, resolution);
    return k;
}

}  // namespace qcload
