// Discrete boundary-compatible deformation fields u = lambda x + phi on the
// unit square/cube, with analytic gradients and tensor Gauss-Legendre
// quadrature. Everything downstream (energies, error-estimate functionals,
// null-Lagrangian checks) consumes the per-node gradient samples.
#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcload/mat.hpp"
#include "qcload/volumetric.hpp"

namespace qcload {

enum class PerturbFamily {
    none,     // phi = 0
    bump,     // polynomial bump times cosine modulation, vanishes on the boundary
    trig,     // product of sin(k pi x_i), vanishes on the boundary
    divfree,  // divergence-free, vanishes on the boundary
    linear,   // phi = amp * x: NOT boundary compatible (negative-test family)
};

struct PerturbationSpec {
    PerturbFamily family = PerturbFamily::none;
    double amp = 0.0;
    std::array<int, 3> freq = {1, 1, 1};  // per-axis frequency (freq[2] unused in 2D)
};

PerturbFamily parse_family(const std::string &name);
std::string family_name(PerturbFamily f);

// Analytic gradient of the perturbation at x in [0,1]^N.
Mat2 grad_phi_2d(const PerturbationSpec &spec, const std::array<double, 2> &x);
Mat3 grad_phi_3d(const PerturbationSpec &spec, const std::array<double, 3> &x);

struct admissibility_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <int N>
struct DeformationField {
    double lambda = 1.0;
    int resolution = 8;
    int quad_order = 4;
    bool boundary_compatible = true;
    std::vector<Mat<N>> grads;     // nabla u per quadrature node, fixed order
    std::vector<double> weights;   // matching quadrature weights, sum = 1
};

// Builds the field from the closed-form gradient; per-cell tensor
// Gauss-Legendre of the given order. Throws admissibility_error when
// require_admissible and det(nabla u) <= 0 at some node.
DeformationField<2> make_field_2d(const PerturbationSpec &spec, double lambda,
                                  int resolution, bool require_admissible = true,
                                  int quad_order = 4);
DeformationField<3> make_field_3d(const PerturbationSpec &spec, double lambda,
                                  int resolution, bool require_admissible = true,
                                  int quad_order = 4);

double energy(const DeformationField<2> &f, const Material2D &mat);
double energy(const DeformationField<3> &f, const Material3D &mat);
// I(u) - W(lambda 1) * volume
double delta_energy(const DeformationField<2> &f, const Material2D &mat);
double delta_energy(const DeformationField<3> &f, const Material3D &mat);

// int min{|nabla u - lambda 1|^2, |nabla u - lambda 1|^q}
double lhs_rig1_2d(const DeformationField<2> &f, double q);
// int psi(curl, div, lambda) with curl/div the antitrace/trace of
// nabla u - lambda 1
double lhs_rig2_2d(const DeformationField<2> &f);
// int |nabla u - lambda 1|^q
double lhs_rig_3d(const DeformationField<3> &f, double q);

// int (nabla u - lambda 1), int (det nabla u - lambda^n),
// 3D also int (cof nabla u - cof lambda 1): all null-Lagrangian zeros for
// boundary-compatible fields.
Mat2 mean_gradient_deviation(const DeformationField<2> &f);
Mat3 mean_gradient_deviation(const DeformationField<3> &f);
double jacobian_deficit(const DeformationField<2> &f);
double jacobian_deficit(const DeformationField<3> &f);
Mat3 cofactor_deficit(const DeformationField<3> &f);

struct FieldReport {
    double i_u = 0.0;
    double i_ulambda = 0.0;
    double delta = 0.0;
    double lhs_rig = 0.0;
    double g_integral = 0.0;       // int g(dist(nabla u, lambda SO(2)))
    double psi_integral = 0.0;
    double g1_integral = 0.0;
    double g2_integral = 0.0;
    double trace_excess = 0.0;     // int (sigma_1 + sigma_2 - 2 lambda)
    double jacobian_deficit = 0.0;
};
// Nodewise singular-value evaluation of the 2D decomposition chain
// delta >= int G1 + int G2, plus the companion functionals.
FieldReport decomposition_check_2d(const DeformationField<2> &f, const Material2D &mat);

// | phi(xi) - phi(lambda 1) - tr(xi - lambda 1)
//   - int_0^1 (1-s) X(omega(s), xi - lambda 1) ds |
// along omega(s) = lambda 1 + s (xi - lambda 1); adaptive Simpson. Throws
// degenerate_denominator when the path passes too close to phi = 0.
double excess_identity_residual(const Mat2 &xi, double lambda);

// Field config file: perturbation.family, perturbation.amp, perturbation.freq,
// resolution, lambda.
struct FieldSpec {
    PerturbationSpec perturbation;
    int resolution = 32;
    double lambda = 1.0;
};
FieldSpec parse_field_spec(const std::string &text);
FieldSpec load_field_spec(const std::string &path);

// Gauss-Legendre nodes/weights on [0,1]; orders 2..6 supported.
void gauss_legendre_01(int order, std::vector<double> &nodes, std::vector<double> &weights);

}  // namespace qcload
