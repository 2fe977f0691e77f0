#include "qcload/fields.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "qcload/config.hpp"
#include "qcload/critload2d.hpp"
#include "qcload/parallel.hpp"

namespace qcload {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// 2D sign pattern (1,-1), 3D (1,-1,1): keeps the perturbation from being a
// near-gradient of a single scalar in every component.
constexpr double kSign2[2] = {1.0, -1.0};
constexpr double kSign3[3] = {1.0, -1.0, 1.0};

double bump(double t) { return 4.0 * t * (1.0 - t); }
double bump_d(double t) { return 4.0 - 8.0 * t; }

// per-axis bump-family factor: b(t) cos(2 pi (k-1) t); k = 1 is the plain bump
void bump_factor(double t, int k, double &g, double &dg) {
    double w = 2.0 * M_PI * (k - 1);
    double c = std::cos(w * t), s = std::sin(w * t);
    g = bump(t) * c;
    dg = bump_d(t) * c - bump(t) * w * s;
}

void trig_factor(double t, int k, double &g, double &dg) {
    double w = k * M_PI;
    g = std::sin(w * t);
    dg = w * std::cos(w * t);
}

}  // namespace

PerturbFamily parse_family(const std::string &name) {
    if (name == "none") return PerturbFamily::none;
    if (name == "bump") return PerturbFamily::bump;
    if (name == "trig") return PerturbFamily::trig;
    if (name == "divfree") return PerturbFamily::divfree;
    if (name == "linear") return PerturbFamily::linear;
    throw config_error("unknown perturbation family: " + name);
}

std::string family_name(PerturbFamily f) {
    switch (f) {
        case PerturbFamily::none: return "none";
        case PerturbFamily::bump: return "bump";
        case PerturbFamily::trig: return "trig";
        case PerturbFamily::divfree: return "divfree";
        case PerturbFamily::linear: return "linear";
    }
    return "?";
}

Mat2 grad_phi_2d(const PerturbationSpec &spec, const std::array<double, 2> &x) {
    Mat2 g;
    switch (spec.family) {
        case PerturbFamily::none:
            return g;
        case PerturbFamily::linear:
            return Mat2::scaled_identity(spec.amp);
        case PerturbFamily::bump:
        case PerturbFamily::trig: {
            double f[2], df[2];
            for (int j = 0; j < 2; ++j) {
                if (spec.family == PerturbFamily::bump)
                    bump_factor(x[static_cast<std::size_t>(j)], spec.freq[static_cast<std::size_t>(j)], f[j], df[j]);
                else
                    trig_factor(x[static_cast<std::size_t>(j)], spec.freq[static_cast<std::size_t>(j)], f[j], df[j]);
            }
            for (int i = 0; i < 2; ++i)
                for (int n = 0; n < 2; ++n)
                    g(i, n) = spec.amp * kSign2[i] * (n == 0 ? df[0] * f[1] : f[0] * df[1]);
            return g;
        }
        case PerturbFamily::divfree: {
            // phi1 =  amp sin^2(k1 pi x) sin(2 k2 pi y) / (pi k1)
            // phi2 = -amp sin(2 k1 pi x) sin^2(k2 pi y) / (pi k2)
            int k1 = spec.freq[0], k2 = spec.freq[1];
            double a = spec.amp;
            double sx = std::sin(k1 * M_PI * x[0]), s2x = std::sin(2.0 * k1 * M_PI * x[0]);
            double sy = std::sin(k2 * M_PI * x[1]), s2y = std::sin(2.0 * k2 * M_PI * x[1]);
            double c2x = std::cos(2.0 * k1 * M_PI * x[0]), c2y = std::cos(2.0 * k2 * M_PI * x[1]);
            g(0, 0) = a * s2x * s2y;
            g(0, 1) = a * (2.0 * k2 / static_cast<double>(k1)) * sx * sx * c2y;
            g(1, 0) = -a * (2.0 * k1 / static_cast<double>(k2)) * c2x * sy * sy;
            g(1, 1) = -a * s2x * s2y;
            return g;
        }
    }
    return g;
}

namespace {

// second partials of P(x) = prod_i sin^2(k_i pi x_i)
struct Sin2Product {
    std::array<double, 3> s, ds, dds;

    Sin2Product(const std::array<int, 3> &k, const std::array<double, 3> &x) {
        for (std::size_t i = 0; i < 3; ++i) {
            double w = k[i] * M_PI;
            double si = std::sin(w * x[i]);
            s[i] = si * si;
            ds[i] = w * std::sin(2.0 * w * x[i]);
            dds[i] = 2.0 * w * w * std::cos(2.0 * w * x[i]);
        }
    }
    double d2(int a, int b) const {  // d^2 P / dx_a dx_b
        double v = 1.0;
        for (int i = 0; i < 3; ++i) {
            std::size_t u = static_cast<std::size_t>(i);
            if (i == a && i == b)
                v *= dds[u];
            else if (i == a || i == b)
                v *= ds[u];
            else
                v *= s[u];
        }
        return v;
    }
};

constexpr int kEps[3][3][3] = {
    {{0, 0, 0}, {0, 0, 1}, {0, -1, 0}},
    {{0, 0, -1}, {0, 0, 0}, {1, 0, 0}},
    {{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}},
};

}  // namespace

Mat3 grad_phi_3d(const PerturbationSpec &spec, const std::array<double, 3> &x) {
    Mat3 g;
    switch (spec.family) {
        case PerturbFamily::none:
            return g;
        case PerturbFamily::linear:
            return Mat3::scaled_identity(spec.amp);
        case PerturbFamily::bump:
        case PerturbFamily::trig: {
            double f[3], df[3];
            for (int j = 0; j < 3; ++j) {
                std::size_t u = static_cast<std::size_t>(j);
                if (spec.family == PerturbFamily::bump)
                    bump_factor(x[u], spec.freq[u], f[j], df[j]);
                else
                    trig_factor(x[u], spec.freq[u], f[j], df[j]);
            }
            for (int i = 0; i < 3; ++i)
                for (int n = 0; n < 3; ++n) {
                    double v = spec.amp * kSign3[i];
                    for (int j = 0; j < 3; ++j) v *= (j == n) ? df[j] : f[j];
                    g(i, n) = v;
                }
            return g;
        }
        case PerturbFamily::divfree: {
            // phi = curl A with A_l = amp c_l prod_i sin^2(k_i pi x_i)
            static constexpr double c[3] = {1.0, -0.5, 0.25};
            Sin2Product p(spec.freq, x);
            for (int m = 0; m < 3; ++m)
                for (int n = 0; n < 3; ++n) {
                    double v = 0.0;
                    for (int j = 0; j < 3; ++j)
                        for (int l = 0; l < 3; ++l)
                            if (kEps[m][j][l] != 0) v += kEps[m][j][l] * c[l] * p.d2(n, j);
                    g(m, n) = spec.amp * v;
                }
            return g;
        }
    }
    return g;
}

void gauss_legendre_01(int order, std::vector<double> &nodes, std::vector<double> &weights) {
    // nodes/weights on [-1,1], mapped below
    static const double n2[] = {-0.5773502691896257, 0.5773502691896257};
    static const double w2[] = {1.0, 1.0};
    static const double n3[] = {-0.7745966692414834, 0.0, 0.7745966692414834};
    static const double w3[] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    static const double n4[] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                0.8611363115940526};
    static const double w4[] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                0.3478548451374538};
    static const double n5[] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                0.5384693101056831, 0.9061798459386640};
    static const double w5[] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                0.4786286704993665, 0.2369268850561891};
    static const double n6[] = {-0.9324695142031521, -0.6612093864662645, -0.2386191860831969,
                                0.2386191860831969, 0.6612093864662645, 0.9324695142031521};
    static const double w6[] = {0.1713244923791704, 0.3607615730481386, 0.4679139345726910,
                                0.4679139345726910, 0.3607615730481386, 0.1713244923791704};
    const double *n = nullptr, *w = nullptr;
    switch (order) {
        case 2: n = n2; w = w2; break;
        case 3: n = n3; w = w3; break;
        case 4: n = n4; w = w4; break;
        case 5: n = n5; w = w5; break;
        case 6: n = n6; w = w6; break;
        default: throw std::invalid_argument("gauss_legendre_01: order must be 2..6");
    }
    nodes.assign(n, n + order);
    weights.assign(w, w + order);
    for (int i = 0; i < order; ++i) {
        nodes[static_cast<std::size_t>(i)] = 0.5 * (nodes[static_cast<std::size_t>(i)] + 1.0);
        weights[static_cast<std::size_t>(i)] *= 0.5;
    }
}

DeformationField<2> make_field_2d(const PerturbationSpec &spec, double lambda, int resolution,
                                  bool require_admissible, int quad_order) {
    if (resolution < 1) throw std::invalid_argument("make_field_2d: resolution must be >= 1");
    DeformationField<2> f;
    f.lambda = lambda;
    f.resolution = resolution;
    f.quad_order = quad_order;
    f.boundary_compatible = spec.family != PerturbFamily::linear;
    std::vector<double> gn, gw;
    gauss_legendre_01(quad_order, gn, gw);
    const double h = 1.0 / resolution;
    f.grads.reserve(static_cast<std::size_t>(resolution * resolution * quad_order * quad_order));
    f.weights.reserve(f.grads.capacity());
    for (int cx = 0; cx < resolution; ++cx)
        for (int cy = 0; cy < resolution; ++cy)
            for (int ix = 0; ix < quad_order; ++ix)
                for (int iy = 0; iy < quad_order; ++iy) {
                    std::array<double, 2> x = {(cx + gn[static_cast<std::size_t>(ix)]) * h,
                                               (cy + gn[static_cast<std::size_t>(iy)]) * h};
                    Mat2 grad = Mat2::scaled_identity(lambda) + grad_phi_2d(spec, x);
                    if (require_admissible && !(det(grad) > 0.0))
                        throw admissibility_error("make_field_2d: det(nabla u) <= 0 at a node");
                    f.grads.push_back(grad);
                    f.weights.push_back(gw[static_cast<std::size_t>(ix)] *
                                        gw[static_cast<std::size_t>(iy)] * h * h);
                }
    return f;
}

DeformationField<3> make_field_3d(const PerturbationSpec &spec, double lambda, int resolution,
                                  bool require_admissible, int quad_order) {
    if (resolution < 1) throw std::invalid_argument("make_field_3d: resolution must be >= 1");
    DeformationField<3> f;
    f.lambda = lambda;
    f.resolution = resolution;
    f.quad_order = quad_order;
    f.boundary_compatible = spec.family != PerturbFamily::linear;
    std::vector<double> gn, gw;
    gauss_legendre_01(quad_order, gn, gw);
    const double h = 1.0 / resolution;
    for (int cx = 0; cx < resolution; ++cx)
        for (int cy = 0; cy < resolution; ++cy)
            for (int cz = 0; cz < resolution; ++cz)
                for (int ix = 0; ix < quad_order; ++ix)
                    for (int iy = 0; iy < quad_order; ++iy)
                        for (int iz = 0; iz < quad_order; ++iz) {
                            std::array<double, 3> x = {
                                (cx + gn[static_cast<std::size_t>(ix)]) * h,
                                (cy + gn[static_cast<std::size_t>(iy)]) * h,
                                (cz + gn[static_cast<std::size_t>(iz)]) * h};
                            Mat3 grad = Mat3::scaled_identity(lambda) + grad_phi_3d(spec, x);
                            if (require_admissible && !(det(grad) > 0.0))
                                throw admissibility_error(
                                    "make_field_3d: det(nabla u) <= 0 at a node");
                            f.grads.push_back(grad);
                            f.weights.push_back(gw[static_cast<std::size_t>(ix)] *
                                                gw[static_cast<std::size_t>(iy)] *
                                                gw[static_cast<std::size_t>(iz)] * h * h * h);
                        }
    return f;
}

namespace {

template <int N, class Fn>
double integrate(const DeformationField<N> &f, Fn &&node_value) {
    std::vector<double> vals(f.grads.size());
    for (std::size_t i = 0; i < f.grads.size(); ++i)
        vals[i] = f.weights[i] * node_value(f.grads[i]);
    return pairwise_sum(vals);
}

}  // namespace

double energy(const DeformationField<2> &f, const Material2D &mat) {
    return integrate(f, [&](const Mat2 &g) { return energy_density(mat, g); });
}
double energy(const DeformationField<3> &f, const Material3D &mat) {
    return integrate(f, [&](const Mat3 &g) { return energy_density(mat, g); });
}
double delta_energy(const DeformationField<2> &f, const Material2D &mat) {
    return energy(f, mat) - reference_energy_2d(mat, f.lambda);
}
double delta_energy(const DeformationField<3> &f, const Material3D &mat) {
    return energy(f, mat) - reference_energy_3d(mat, f.lambda);
}

double lhs_rig1_2d(const DeformationField<2> &f, double q) {
    double l = f.lambda;
    return integrate(f, [&](const Mat2 &g) {
        double t2 = norm2(g - Mat2::scaled_identity(l));
        return std::min(t2, std::pow(t2, 0.5 * q));
    });
}

double lhs_rig2_2d(const DeformationField<2> &f) {
    double l = f.lambda;
    return integrate(f, [&](const Mat2 &g) {
        Mat2 eta = g - Mat2::scaled_identity(l);
        return psi(antitrace(eta), trace(eta), l);
    });
}

double lhs_rig_3d(const DeformationField<3> &f, double q) {
    double l = f.lambda;
    return integrate(f, [&](const Mat3 &g) {
        return std::pow(norm2(g - Mat3::scaled_identity(l)), 0.5 * q);
    });
}

Mat2 mean_gradient_deviation(const DeformationField<2> &f) {
    Mat2 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out(i, j) = integrate(f, [&](const Mat2 &g) {
                return g(i, j) - (i == j ? f.lambda : 0.0);
            });
    return out;
}

Mat3 mean_gradient_deviation(const DeformationField<3> &f) {
    Mat3 out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            out(i, j) = integrate(f, [&](const Mat3 &g) {
                return g(i, j) - (i == j ? f.lambda : 0.0);
            });
    return out;
}

double jacobian_deficit(const DeformationField<2> &f) {
    double l2 = f.lambda * f.lambda;
    return integrate(f, [&](const Mat2 &g) { return det(g) - l2; });
}

double jacobian_deficit(const DeformationField<3> &f) {
    double l3 = f.lambda * f.lambda * f.lambda;
    return integrate(f, [&](const Mat3 &g) { return det(g) - l3; });
}

Mat3 cofactor_deficit(const DeformationField<3> &f) {
    Mat3 out;
    double l2 = f.lambda * f.lambda;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            out(i, j) = integrate(f, [&](const Mat3 &g) {
                return cof(g)(i, j) - (i == j ? l2 : 0.0);
            });
    return out;
}

FieldReport decomposition_check_2d(const DeformationField<2> &f, const Material2D &mat) {
    FieldReport r;
    double l = f.lambda;
    r.i_ulambda = reference_energy_2d(mat, l);
    std::vector<double> vi(f.grads.size()), vg1(f.grads.size()), vg2(f.grads.size()),
        vg(f.grads.size()), vpsi(f.grads.size()), vtr(f.grads.size()), vrig(f.grads.size()),
        vdet(f.grads.size());
    for (std::size_t i = 0; i < f.grads.size(); ++i) {
        const Mat2 &grad = f.grads[i];
        double d = det(grad);
        if (!(d > 0.0))
            throw admissibility_error("decomposition_check_2d: inadmissible field");
        double w = f.weights[i];
        Spectrum<2> sig = singular_values(grad);
        double dist = dist_to_scaled_rotations(grad, l);
        Mat2 eta = grad - Mat2::scaled_identity(l);
        double t2 = norm2(eta);
        vi[i] = w * energy_density(mat, grad);
        vg1[i] = w * g1(sig, l, mat);
        vg2[i] = w * g2(sig, l, mat);
        vg[i] = w * g_growth(dist, mat.q);
        vpsi[i] = w * psi(antitrace(eta), trace(eta), l);
        vtr[i] = w * (sig[0] + sig[1] - 2.0 * l);
        vrig[i] = w * std::min(t2, std::pow(t2, 0.5 * mat.q));
        vdet[i] = w * (d - l * l);
    }
    r.i_u = pairwise_sum(vi);
    r.delta = r.i_u - r.i_ulambda;
    r.g1_integral = pairwise_sum(vg1);
    r.g2_integral = pairwise_sum(vg2);
    r.g_integral = pairwise_sum(vg);
    r.psi_integral = pairwise_sum(vpsi);
    r.trace_excess = pairwise_sum(vtr);
    r.lhs_rig = pairwise_sum(vrig);
    r.jacobian_deficit = pairwise_sum(vdet);
    return r;
}

namespace {

double excess_path_integrand(const Mat2 &xi, double lambda, double s) {
    Mat2 d = xi - Mat2::scaled_identity(lambda);
    Mat2 omega = Mat2::scaled_identity(lambda) + d * s;
    return (1.0 - s) * excess_integrand_X(omega, d);
}

double adaptive_simpson(const Mat2 &xi, double lambda, double a, double b, double fa, double fm,
                        double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = excess_path_integrand(xi, lambda, lm);
    double frm = excess_path_integrand(xi, lambda, rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(xi, lambda, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(xi, lambda, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double excess_identity_residual(const Mat2 &xi, double lambda) {
    Mat2 d = xi - Mat2::scaled_identity(lambda);
    // reject paths passing too close to phi = 0 (X blows up there)
    for (int i = 0; i <= 64; ++i) {
        double s = i / 64.0;
        Mat2 omega = Mat2::scaled_identity(lambda) + d * s;
        if (!(phi2(omega) > 1e-6))
            throw degenerate_denominator("excess_identity_residual: degenerate path");
    }
    double fa = excess_path_integrand(xi, lambda, 0.0);
    double fb = excess_path_integrand(xi, lambda, 1.0);
    double fm = excess_path_integrand(xi, lambda, 0.5);
    double whole = (fa + 4.0 * fm + fb) / 6.0;
    double integral = adaptive_simpson(xi, lambda, 0.0, 1.0, fa, fm, fb, whole, 1e-11, 28);
    double lhs = phi2(xi);
    double rhs = 2.0 * lambda + trace(d) + integral;
    return std::abs(lhs - rhs);
}

FieldSpec parse_field_spec(const std::string &text) {
    KeyValueFile kv = KeyValueFile::parse(text);
    kv.require_known(
        {"perturbation.family", "perturbation.amp", "perturbation.freq", "resolution",
         "lambda"},
        {});
    FieldSpec s;
    s.perturbation.family = parse_family(kv.get_string("perturbation.family"));
    s.perturbation.amp = kv.get_double_or("perturbation.amp", 0.0);
    int k = kv.get_int_or("perturbation.freq", 1);
    if (k < 1) throw config_error("freq must be >= 1");
    s.perturbation.freq = {k, k, k};
    s.resolution = kv.get_int_or("resolution", 32);
    if (s.resolution < 8) throw config_error("resolution must be >= 8");
    s.lambda = kv.get_double_or("lambda", 1.0);
    if (!(s.lambda > 0.0)) throw config_error("lambda must be > 0");
    return s;
}

FieldSpec load_field_spec(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open field spec: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_field_spec(ss.str());
}

}  // namespace qcload
