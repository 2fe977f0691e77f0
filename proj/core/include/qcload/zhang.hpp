// Growth constants for the quadratic/q-power lower bound on the Taylor
// excess of |.|^q, and the kappa constant for the 3D criterion.
#pragma once

#include "qcload/mat.hpp"

namespace qcload {

struct GrowthConstants2D {
    double c1 = 0.0;  // 1 / (2 (2M)^{2-q})
    double c2 = 0.0;  // 1 / (2 * 2^{2-q})
    double m = 1.0;   // branch switch of f_M
    double q = 1.5;
};

double c1(double m, double q);
double c2(double q);
GrowthConstants2D growth_constants(double m, double q);

// F_M(B): C1 |B|^2 for |B| <= M, C2 |B|^q beyond; continuous at |B| = M.
template <int N>
double big_F(const Mat<N> &b, double m, double q);

// f_M(t) = min{C1 t^2, C2 t^q}; the quadratic branch wins on [0, M].
double little_f(double t, double m, double q);

// |A+B|^q - |A|^q - q|A|^{q-2} A.B - F_{|A|}(B). Nonnegative up to roundoff.
template <int N>
double verify_zhang(const Mat<N> &a, const Mat<N> &b, double q);

struct KappaEstimate {
    double q = 2.5;
    double lower = 0.0;    // 2^{2-q}
    double upper = 0.0;    // q 2^{1-q}
    double numeric = 0.0;  // grid + golden-section infimum
    double affine = 0.0;   // 3-q + (2-sqrt 2)(q-2)
};

double kappa_lower(double q);
double kappa_upper(double q);
double kappa_affine(double q);

// inf over t > 0, c in [-1,1] of ((1+2ct+t^2)^{q/2} - 1 - qct) / t^q,
// the scalar reduction of the best constant in
// |A+B|^q >= |A|^q + q|A|^{q-2} A.B + kappa |B|^q.
double kappa_numeric(double q, int resolution = 256);

KappaEstimate kappa_estimate(double q, int resolution = 256);

}  // namespace qcload
