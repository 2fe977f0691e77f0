// Radial trial families on the unit ball: cavitating competitors
// u0(x) = r(|x|) x/|x| with r(0) = a >= 0, r(1) = lambda, their energies,
// the 1D minimization over the cavity radius and the empirical cavitation
// load.
#pragma once

#include <stdexcept>
#include <vector>

#include "qcload/volumetric.hpp"

namespace qcload {

enum class ProfileKind { trial_family, piecewise_linear };

struct RadialProfile {
    ProfileKind kind = ProfileKind::trial_family;
    int n = 2;           // space dimension, 2 or 3
    double a = 0.0;      // cavity radius r(0)
    double lambda = 1.0; // boundary stretch r(1)
    // piecewise_linear: knot values r(i/N), i = 0..N, nondecreasing,
    // knots.front() = a, knots.back() = lambda
    std::vector<double> knots;

    double r(double R) const;
    double rprime(double R) const;

    // trial family r(R) = (lt^n R^n + a^n)^{1/n}, lt^n = lambda^n - a^n:
    // constant determinant lt^n.
    static RadialProfile trial(int n, double a, double lambda);
    static RadialProfile piecewise_from(const RadialProfile &p, int n_knots);
};

struct nonpositive_det_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Energy of the radial map over the unit ball:
// n=2: 2 pi int_0^1 [ (r'^2 + (r/R)^2)^{q/2} + h(r' r/R) ] R dR
// n=3: 4 pi int_0^1 [ (r'^2 + 2 (r/R)^2)^{q/2} + gamma (...) + Z + h ] R^2 dR
// The R -> 0 endpoint is handled by the substitution x = R^n together with
// double-exponential quadrature, so a > 0 profiles need no special casing.
double radial_energy(const RadialProfile &p, const Material2D &mat);
double radial_energy(const RadialProfile &p, const Material3D &mat);

// unit-ball volume for the profile's dimension (pi or 4 pi / 3)
double ball_volume(int n);

struct TrialMinimum {
    double a_star = 0.0;
    double i_star = 0.0;
    double i_homogeneous = 0.0;  // energy at a = 0, exactly W(lambda 1) * volume
    bool cavitated = false;
};
// Grid scan over the cavity radius plus golden-section refinement.
TrialMinimum minimize_trial_family(double lambda, const Material2D &mat,
                                   const std::vector<double> &a_grid);
TrialMinimum minimize_trial_family(double lambda, const Material3D &mat,
                                   const std::vector<double> &a_grid);
std::vector<double> default_a_grid(double lambda, int count = 64);

// Bisection on the cavitated flag; the result is an upper bound for the true
// critical load (the trial family is just one competitor).
double empirical_critical_load(const Material2D &mat, double lambda_lo, double lambda_hi);
double empirical_critical_load(const Material3D &mat, double lambda_lo, double lambda_hi);

// Projected coordinate descent on the knot values (r nondecreasing,
// endpoints fixed); energy never increases.
RadialProfile refine_piecewise(const RadialProfile &start, const Material2D &mat,
                               int iterations = 500);
RadialProfile refine_piecewise(const RadialProfile &start, const Material3D &mat,
                               int iterations = 500);

}  // namespace qcload
