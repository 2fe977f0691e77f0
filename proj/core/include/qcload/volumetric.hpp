// Volumetric energy laws h and the 2D/3D material models.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qcload/mat.hpp"

namespace qcload {

enum class LawKind { power_log, quad_log, custom };

// h on (0, +inf); +inf (as a thrown domain error or an energy sentinel) for
// t <= 0. Built-in families:
//   power_log: h(t) = a t^p + b t^{-r}        (a, b, r > 0, p >= 1)
//   quad_log:  h(t) = a (t^2 - 1) - b ln t    (a, b > 0)
struct VolumetricLaw {
    LawKind kind = LawKind::quad_log;
    double a = 1.0, p = 1.0, b = 1.0, r = 1.0;
    std::function<double(double)> custom_h;
    std::function<double(double)> custom_hprime;

    double h(double t) const;
    double hprime(double t) const;

    static VolumetricLaw power_log(double a, double p, double b, double r);
    static VolumetricLaw quad_log(double a, double b);
    static VolumetricLaw custom(std::function<double(double)> h,
                                std::function<double(double)> hprime);
};

struct HypothesesReport {
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

// Samples (H1)-(H3) proxies on a log grid over [t_min, t_max]: nonnegativity,
// convexity secants, h' vs central differences, blow-up at 0+, linear growth
// at infinity. Collects failures, never throws.
HypothesesReport check_hypotheses(const VolumetricLaw &law, double t_min = 1e-6,
                                  double t_max = 1e6, int samples = 400);

// Isotropic cofactor penalty for the 3D model; value depends only on the
// singular values of its argument.
struct CofactorTerm {
    enum class Family { zero, power_of_norm };
    Family family = Family::zero;
    double c = 0.0;  // coefficient
    double m = 2.0;  // exponent, >= 1 keeps it convex

    double operator()(const Mat3 &a) const;
    double from_singular_values(double s1, double s2, double s3) const;
};

struct Material2D {
    double q = 1.5;  // in (1,2)
    VolumetricLaw law;
};

struct Material3D {
    double q = 2.5;      // in (2,3)
    double gamma = 1.0;  // > 0
    VolumetricLaw law;
    CofactorTerm z;
};

// |F|^q + h(det F); +inf sentinel when det F <= 0.
double energy_density(const Material2D &mat, const Mat2 &f);
// |F|^q + gamma |F|^2 + Z(cof F) + h(det F); +inf sentinel when det F <= 0.
double energy_density(const Material3D &mat, const Mat3 &f);

double reference_energy_2d(const Material2D &mat, double lambda);  // W(lambda 1)
double reference_energy_3d(const Material3D &mat, double lambda);

// Material config file (see README for the key list). Throws config_error.
struct MaterialConfig {
    int dim = 2;
    Material2D mat2;
    Material3D mat3;
};
MaterialConfig load_material(const std::string &path);
MaterialConfig parse_material(const std::string &text);

// The 2D reference material used throughout the tests:
// quad_log(a=1, b=2), q = 1.5.
Material2D reference_material_2d();
// 3D counterpart: quad_log(1,2), q = 2.5, gamma = 1, Z = 0.
Material3D reference_material_3d();

}  // namespace qcload
