// 3D sufficient-condition engine: the pointwise functions F1, F2 on
// singular-value space, the exit-radius angle analysis, the two conditions
// (main and gamma), critical load, grid certification and the P(A)
// conjecture probe.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcload/mat.hpp"
#include "qcload/volumetric.hpp"

namespace qcload {

enum class KappaMode { lower_bound, numeric };

struct Criterion3DReport {
    double lambda = 1.0;
    double q = 2.5;
    double gamma = 1.0;
    double kappa_used = 0.0;
    KappaMode kappa_mode = KappaMode::lower_bound;
    double hprime_at_lambda_cubed = 0.0;
    double lhs_main = 0.0;   // kappa / (h'(l^3) l^{3-q})
    double rhs_main = 0.0;   // (q-2)^{(q-2)/2} q^{-q/2}
    double lhs_gamma = 0.0;  // gamma / (l h'(l^3)), compared against 1/2
    bool satisfied = false;
    bool strict_main = false;
    enum class Branch { hprime_nonpositive, condition_checked };
    Branch branch = Branch::condition_checked;
};

// F1(Lambda) = kappa |Lambda-Lambda0|^q + h'(l^3) prod (l_i - l)
double f1(const Spectrum<3> &sigma, double lambda, const Material3D &mat, double kappa);
// F2(Lambda) = gamma |Lambda-Lambda0|^2 + l h'(l^3) sum_{i<j} (l_i-l)(l_j-l)
double f2(const Spectrum<3> &sigma, double lambda, const Material3D &mat);

// Positive roots of lambda + rho * l_i = 0 along the direction
// (cos phi sin theta, sin phi sin theta, cos theta); absent roots are empty.
std::array<std::optional<double>, 3> exit_radii(double theta, double phi, double lambda);

// s1 = s2 = s3 = 4 (q-2)^{(q-2)/2} q^{-q/2}
double s_closed(double q);
struct SNumeric {
    double s1 = 0.0, s2 = 0.0, s3 = 0.0;
};
// Brute-force suprema of the three angle functionals over their restricted
// angle sets (the sin(2 phi) cos(theta) < 0 sector intersected with the
// respective exit-radius sign condition), grid plus local refinement.
SNumeric s_numeric(double q, int grid = 1024);

// max of |sin phi| |cos phi|^{q-2} over [pi/2, 5 pi/4]:
// closed form (q-1)^{1/2} ((q-1)/(q-2))^{(q-2)/2} and its grid oracle.
double f_phi_max_closed(double q);
double f_phi_max_numeric(double q, int grid = 200000);

Criterion3DReport check_sufficient_3d(double lambda, const Material3D &mat,
                                      KappaMode mode = KappaMode::lower_bound);

struct CriticalLoad3D {
    double lambda_star = 0.0;
    double root_main = 0.0;   // largest lambda with the main condition holding
    double root_gamma = 0.0;  // same for the gamma condition
    enum class Binding { main, gamma, none } binding = Binding::none;
    bool conservative = false;
};
CriticalLoad3D critical_load_3d(const Material3D &mat, double lambda_lo, double lambda_hi,
                                KappaMode mode = KappaMode::lower_bound);

struct GridCertification3D {
    double min_f1 = 0.0;
    Spectrum<3> argmin_f1{};
    double min_f2_coeff = 0.0;  // min over directions of gamma + l h'(l^3) sum l_i l_j
    double min_f2 = 0.0;        // the corresponding F2 at the largest grid rho
    Spectrum<3> argmin_f2{};
    bool tail_certified = false;
    double rho_max_used = 0.0;
    bool nonnegative() const { return min_f1 >= 0.0 && min_f2_coeff >= 0.0; }
};
// Spherical grid sweep restricted to the positive orthant and the ordered
// sector; F2's sign is exact in rho^2 so its certificate is the direction
// coefficient. When h'(l^3) <= 0 the F1 claim is truncated to the radius
// where kappa rho^q dominates |h'| rho^3 / 4 outright.
GridCertification3D grid_verify_f(double lambda, const Material3D &mat,
                                  KappaMode mode, int n_rho, int n_angle, double rho_max);

// P(A) = sum_{i<j} sigma_i sigma_j - lambda sum_i sigma_i;
// P(lambda 1) = 0 and |P(A)| <= |A|^2 + 3 lambda |A|.
double p_function(const Mat3 &a, double lambda);

struct ConjectureProbeReport {
    double lambda = 1.0;
    std::size_t trials = 0;
    double min = 0.0;
    double mean = 0.0;
    std::size_t argmin_trial = 0;
    std::string argmin_family;
    double argmin_amp = 0.0;
    std::array<int, 3> argmin_freq = {1, 1, 1};
    std::vector<double> values;  // per-trial integral of P, trial order
};
// Empirical minima of int P(lambda 1 + grad phi) dx over random compactly
// supported perturbations. Evidence only: a strongly negative value flags a
// counterexample candidate, never a proof either way.
ConjectureProbeReport conjecture_probe(double lambda, std::size_t trials, std::uint64_t seed,
                                       int workers = 1);

}  // namespace qcload
