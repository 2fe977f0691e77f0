// 2D sufficient-condition engine: the pointwise functions G1, G2 on
// singular-value space, the angle analysis, the criterion report, critical
// load solving, grid certification and the explicit c0 growth bound.
#pragma once

#include <stdexcept>

#include "qcload/mat.hpp"
#include "qcload/volumetric.hpp"

namespace qcload {

struct Criterion2DReport {
    double lambda = 1.0;
    double q = 1.5;
    double hprime_at_lambda_sq = 0.0;
    double lhs_second = 0.0;  // C2 / (h'(l^2) l^{2-q})
    double rhs_second = 0.0;  // (q-1)^{(q-1)/2} q^{-q/2}
    double lhs_first = 0.0;   // C1(sqrt2 l, q)
    double rhs_first = 0.0;   // h'(l^2) / 2
    bool satisfied = false;
    bool strict = false;
    enum class Branch { hprime_nonpositive, condition_checked };
    Branch branch = Branch::condition_checked;
};

struct PolarPoint {
    double rho = 0.0;
    double mu = 0.0;
};

// G1(Lambda) = f_{sqrt2 l}(|Lambda - Lambda0|) + h'(l^2)(l1 - l)(l2 - l).
double g1(const Spectrum<2> &sigma, double lambda, const Material2D &mat);
// G2(Lambda) = l h'(l^2)(l1 + l2 - 2l).
double g2(const Spectrum<2> &sigma, double lambda, const Material2D &mat);

// cos(mu) |sin(mu)|^{q-1} and its maximum (q-1)^{(q-1)/2} q^{-q/2},
// attained where cos^2 mu = 1/q.
double e_mu(double mu, double q);
double e_max(double q);

// ((q-1)^{q-1} q^{-q} / 2^{2-q})^{1/2}; decreasing in q, >= 1/2, -> 1/2 as
// q -> 2-. Witnesses that the second condition implies the first.
double y_q(double q);

Criterion2DReport check_sufficient_2d(double lambda, const Material2D &mat);

struct CriticalLoad2D {
    double lambda_star = 0.0;
    bool conservative = false;  // non-monotone scan fallback was used
};
// Largest lambda in [lo, hi] with the sufficient condition holding;
// bisection to 1e-10 after a 10^3-point monotonicity scan of
// lambda -> h'(l^2) l^{2-q}. Returns hi when never violated.
CriticalLoad2D critical_load_2d(const Material2D &mat, double lambda_lo, double lambda_hi);

struct GridCertification2D {
    double min_value = 0.0;
    Spectrum<2> argmin{};
    PolarPoint argmin_polar{};
    bool tail_certified = false;
    double rho_max_used = 0.0;  // truncated to sqrt2*l when h'(l^2) <= 0
    bool nonnegative() const { return min_value >= 0.0; }
};
// Exhaustive G1 evaluation on a polar grid around Lambda0 (log-spaced rho,
// uniform mu, restricted to the positive quadrant), with an analytic bound
// covering rho > rho_max. When h'(l^2) <= 0 only the quadratic branch
// rho <= sqrt2*l carries a pointwise claim and the grid is truncated there.
GridCertification2D grid_verify_g1(double lambda, const Material2D &mat, int n_rho,
                                   int n_mu, double rho_max);

// The proof's explicit negative cell when the condition fails strictly:
// mu* = -acos(1/sqrt q), rho slightly above the branch crossing rho_bar.
struct Counterexample2D {
    bool found = false;
    Spectrum<2> sigma{};
    PolarPoint polar{};
    double value = 0.0;
};
Counterexample2D find_counterexample_g1(double lambda, const Material2D &mat);

struct condition_not_strict : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct C0Bound {
    double c0 = 0.0;
    double valid_radius = 0.0;  // +inf when h'(l^2) > 0
};
// Explicit c0 with G1(Lambda) >= c0 g(|Lambda - Lambda0|) on the validity
// region. Requires the strict condition; throws condition_not_strict at
// equality or when no positive constant is available.
C0Bound c0_lower_bound(double lambda, const Material2D &mat);

// g(t) = t^2/2 on [0,1], t^q/q + 1/2 - 1/q beyond; convex, C^1 at 1.
double g_growth(double t, double q);

}  // namespace qcload
