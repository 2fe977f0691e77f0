#include "qcload/radial.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>

namespace qcload {

namespace {

// tanh-sinh quadrature on (0,1); tolerates integrable algebraic endpoint
// singularities (the radial integrands behave like x^{-q/n} near 0).
double tanh_sinh_01(const std::function<double(double)> &f) {
    const double tmax = 5.3;  // keeps abscissas representable
    double prev = 0.0, cur = 0.0;
    for (int level = 1; level <= 9; ++level) {
        double h = std::pow(2.0, -level);
        long k_max = std::lround(std::floor(tmax / h));
        double sum = 0.0;
        for (long k = -k_max; k <= k_max; ++k) {
            double t = k * h;
            double s = std::sinh(t);
            double x = 0.5 * (1.0 + std::tanh(0.5 * M_PI * s));
            if (!(x > 0.0 && x < 1.0)) continue;
            double c = std::cosh(0.5 * M_PI * s);
            double w = h * 0.25 * M_PI * std::cosh(t) / (c * c);
            sum += w * f(x);
        }
        cur = sum;
        if (level > 3 && std::abs(cur - prev) <= 1e-13 * (1.0 + std::abs(cur))) break;
        prev = cur;
    }
    return cur;
}

// Gauss-Legendre order 6 on [lo, hi], 4 panels (interior, smooth integrands)
double gl_panels(const std::function<double(double)> &f, double lo, double hi) {
    static const double xs[] = {-0.9324695142031521, -0.6612093864662645, -0.2386191860831969,
                                0.2386191860831969, 0.6612093864662645, 0.9324695142031521};
    static const double ws[] = {0.1713244923791704, 0.3607615730481386, 0.4679139345726910,
                                0.4679139345726910, 0.3607615730481386, 0.1713244923791704};
    const int panels = 4;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        double a = lo + (hi - lo) * p / panels;
        double b = lo + (hi - lo) * (p + 1) / panels;
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int i = 0; i < 6; ++i) total += half * ws[i] * f(mid + half * xs[i]);
    }
    return total;
}

double clamp_det(double d) { return std::clamp(d, 1e-100, 1e100); }

}  // namespace

double RadialProfile::r(double R) const {
    if (kind == ProfileKind::trial_family) {
        double ltn = std::pow(lambda, n) - std::pow(a, n);
        return std::pow(ltn * std::pow(R, n) + std::pow(a, n), 1.0 / n);
    }
    std::size_t nk = knots.size() - 1;
    double t = R * static_cast<double>(nk);
    std::size_t i = std::min(static_cast<std::size_t>(std::max(0.0, std::floor(t))), nk - 1);
    double frac = t - static_cast<double>(i);
    return knots[i] + frac * (knots[i + 1] - knots[i]);
}

double RadialProfile::rprime(double R) const {
    if (kind == ProfileKind::trial_family) {
        double ltn = std::pow(lambda, n) - std::pow(a, n);
        double rv = r(R);
        return ltn * std::pow(R, n - 1) / std::pow(rv, n - 1);
    }
    std::size_t nk = knots.size() - 1;
    double t = R * static_cast<double>(nk);
    std::size_t i = std::min(static_cast<std::size_t>(std::max(0.0, std::floor(t))), nk - 1);
    return (knots[i + 1] - knots[i]) * static_cast<double>(nk);
}

RadialProfile RadialProfile::trial(int n, double a, double lambda) {
    if (n != 2 && n != 3) throw std::invalid_argument("RadialProfile: n must be 2 or 3");
    if (!(a >= 0.0) || !(std::pow(lambda, n) > std::pow(a, n)))
        throw std::invalid_argument("RadialProfile: need 0 <= a and a^n < lambda^n");
    RadialProfile p;
    p.kind = ProfileKind::trial_family;
    p.n = n;
    p.a = a;
    p.lambda = lambda;
    return p;
}

RadialProfile RadialProfile::piecewise_from(const RadialProfile &src, int n_knots) {
    if (n_knots < 2 || n_knots > 200)
        throw std::invalid_argument("piecewise_from: knot count must be in [2, 200]");
    RadialProfile p;
    p.kind = ProfileKind::piecewise_linear;
    p.n = src.n;
    p.lambda = src.lambda;
    p.knots.resize(static_cast<std::size_t>(n_knots) + 1);
    for (int i = 0; i <= n_knots; ++i)
        p.knots[static_cast<std::size_t>(i)] = src.r(static_cast<double>(i) / n_knots);
    p.a = p.knots.front();
    return p;
}

double ball_volume(int n) { return n == 2 ? M_PI : 4.0 * M_PI / 3.0; }

namespace {

// trial family, n = 2: I = pi int_0^1 [ (u(x)/x)^{q/2} + h(lt^2) ] dx with
// x = R^2 and u = |grad u0|^2 x = lt^4 x^2 / (lt^2 x + a^2) + lt^2 x + a^2
double trial_energy_2d(double a, double lambda, const Material2D &mat) {
    double lt2 = lambda * lambda - a * a;
    if (!(lt2 > 0.0)) throw nonpositive_det_error("trial_energy_2d: det = lambda^2 - a^2 <= 0");
    double a2 = a * a, q = mat.q;
    double main = tanh_sinh_01([&](double x) {
        double r2 = lt2 * x + a2;
        double u = lt2 * lt2 * x * x / r2 + r2;
        return std::pow(u, 0.5 * q) * std::pow(x, -0.5 * q);
    });
    return M_PI * (main + mat.law.h(lt2));
}

// trial family, n = 3, in y = R^3: v = |grad u0|^2 y^{2/3}
double trial_energy_3d(double a, double lambda, const Material3D &mat) {
    double lt3 = lambda * lambda * lambda - a * a * a;
    if (!(lt3 > 0.0)) throw nonpositive_det_error("trial_energy_3d: det = lambda^3 - a^3 <= 0");
    double a3 = a * a * a, q = mat.q;
    bool has_z = mat.z.family != CofactorTerm::Family::zero;
    double main = tanh_sinh_01([&](double y) {
        double r3 = lt3 * y + a3;
        double r2 = std::pow(r3, 2.0 / 3.0);
        double v = lt3 * lt3 * y * y / (r2 * r2) + 2.0 * r2;
        double y23 = std::pow(y, 2.0 / 3.0);
        double val = std::pow(v, 0.5 * q) * std::pow(y, -q / 3.0) + mat.gamma * v / y23;
        if (has_z) {
            double c1 = std::min(r2 / y23, 1e100);  // sigma2 sigma3 of cof
            double c2 = lt3 * std::cbrt(y) / std::cbrt(r3);
            val += mat.z.from_singular_values(c1, c2, c2);
        }
        return val;
    });
    return 4.0 * M_PI / 3.0 * (main + mat.law.h(lt3));
}

// piecewise linear, per-interval energy; interval 0 goes through x = R^n to
// absorb the R -> 0 singularity when a > 0
double interval_energy_2d(const std::vector<double> &k, std::size_t i, const Material2D &mat) {
    double nk = static_cast<double>(k.size() - 1);
    double r_lo = k[i], slope = (k[i + 1] - k[i]) * nk;
    if (!(slope > 0.0)) throw nonpositive_det_error("piecewise profile: r' <= 0");
    double lo = static_cast<double>(i) / nk, hi = static_cast<double>(i + 1) / nk;
    double q = mat.q;
    auto rr = [&](double R) { return r_lo + slope * (R - lo); };
    if (i == 0) {
        // I0 = pi int_0^{x1} [ (U(x)/x)^{q/2} + h(c r / sqrt(x)) ] dx
        double x1 = hi * hi;
        return M_PI * x1 * tanh_sinh_01([&](double t) {
            double x = x1 * t;
            double R = std::sqrt(x);
            double rv = rr(R);
            double u = slope * slope * x + rv * rv;
            double d = clamp_det(slope * rv / R);
            return std::pow(u, 0.5 * q) * std::pow(x, -0.5 * q) + mat.law.h(d);
        });
    }
    return 2.0 * M_PI * gl_panels(
        [&](double R) {
            double rv = rr(R);
            double n2 = slope * slope + rv * rv / (R * R);
            return (std::pow(n2, 0.5 * q) + mat.law.h(clamp_det(slope * rv / R))) * R;
        },
        lo, hi);
}

double interval_energy_3d(const std::vector<double> &k, std::size_t i, const Material3D &mat) {
    double nk = static_cast<double>(k.size() - 1);
    double r_lo = k[i], slope = (k[i + 1] - k[i]) * nk;
    if (!(slope > 0.0)) throw nonpositive_det_error("piecewise profile: r' <= 0");
    double lo = static_cast<double>(i) / nk, hi = static_cast<double>(i + 1) / nk;
    double q = mat.q;
    bool has_z = mat.z.family != CofactorTerm::Family::zero;
    auto rr = [&](double R) { return r_lo + slope * (R - lo); };
    auto density_times_r2 = [&](double R) {
        // factored through y23 = R^2 so a > 0 stays overflow-safe
        double y23 = R * R;
        double rv = rr(R);
        double u = slope * slope * y23 + 2.0 * rv * rv;  // |grad u0|^2 R^2
        double d = clamp_det(slope * rv * rv / y23);
        double val = std::pow(u / y23, 0.5 * q);
        val += mat.gamma * u / y23;
        if (has_z) {
            double c1 = std::min(rv * rv / y23, 1e100);
            double c2 = slope * rv / R;
            val += mat.z.from_singular_values(c1, c2, c2);
        }
        val += mat.law.h(d);
        return val * y23;
    };
    if (i == 0) {
        double y1 = hi * hi * hi;
        return 4.0 * M_PI / 3.0 * y1 * tanh_sinh_01([&](double t) {
            double R = std::cbrt(y1 * t);
            return density_times_r2(R) / (R * R);
        });
    }
    return 4.0 * M_PI * gl_panels(density_times_r2, lo, hi);
}

}  // namespace

double radial_energy(const RadialProfile &p, const Material2D &mat) {
    if (p.n != 2) throw std::invalid_argument("radial_energy: profile dimension is not 2");
    if (p.kind == ProfileKind::trial_family) return trial_energy_2d(p.a, p.lambda, mat);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < p.knots.size(); ++i)
        total += interval_energy_2d(p.knots, i, mat);
    return total;
}

double radial_energy(const RadialProfile &p, const Material3D &mat) {
    if (p.n != 3) throw std::invalid_argument("radial_energy: profile dimension is not 3");
    if (p.kind == ProfileKind::trial_family) return trial_energy_3d(p.a, p.lambda, mat);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < p.knots.size(); ++i)
        total += interval_energy_3d(p.knots, i, mat);
    return total;
}

std::vector<double> default_a_grid(double lambda, int count) {
    std::vector<double> g;
    g.push_back(0.0);
    for (int i = 1; i <= count; ++i) g.push_back(0.98 * lambda * i / count);
    return g;
}

namespace {

template <class EnergyFn>
TrialMinimum minimize_impl(double lambda, const std::vector<double> &a_grid, EnergyFn energy_at) {
    if (a_grid.empty() || a_grid.front() != 0.0)
        throw std::invalid_argument("minimize_trial_family: a_grid must start at 0");
    TrialMinimum out;
    std::size_t best = 0;
    double best_v = std::numeric_limits<double>::infinity();
    std::vector<double> vals(a_grid.size());
    for (std::size_t i = 0; i < a_grid.size(); ++i) {
        vals[i] = energy_at(a_grid[i]);
        if (vals[i] < best_v) {
            best_v = vals[i];
            best = i;
        }
    }
    out.i_homogeneous = vals[0];
    double lo = a_grid[best > 0 ? best - 1 : 0];
    double hi = a_grid[std::min(best + 1, a_grid.size() - 1)];
    double a_star = a_grid[best], v_star = best_v;
    if (hi > lo) {
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = lo, b = hi;
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = energy_at(x1), f2 = energy_at(x2);
        for (int it = 0; it < 80 && b - a > 1e-10 * (1.0 + lambda); ++it) {
            if (f1 < f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - gr * (b - a);
                f1 = energy_at(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + gr * (b - a);
                f2 = energy_at(x2);
            }
        }
        double am = (f1 < f2) ? x1 : x2, vm = std::min(f1, f2);
        if (vm < v_star) {
            v_star = vm;
            a_star = am;
        }
    }
    out.a_star = a_star;
    out.i_star = v_star;
    out.cavitated = v_star < out.i_homogeneous - 1e-9 * (1.0 + std::abs(out.i_homogeneous));
    if (!out.cavitated) {
        out.a_star = 0.0;
        out.i_star = out.i_homogeneous;
    }
    return out;
}

}  // namespace

TrialMinimum minimize_trial_family(double lambda, const Material2D &mat,
                                   const std::vector<double> &a_grid) {
    return minimize_impl(lambda, a_grid,
                         [&](double a) { return trial_energy_2d(a, lambda, mat); });
}

TrialMinimum minimize_trial_family(double lambda, const Material3D &mat,
                                   const std::vector<double> &a_grid) {
    return minimize_impl(lambda, a_grid,
                         [&](double a) { return trial_energy_3d(a, lambda, mat); });
}

namespace {

template <class Mat, class Cavitated>
double critical_impl(const Mat &, double lo, double hi, Cavitated cav) {
    if (!(lo > 0.0 && hi > lo))
        throw std::invalid_argument("empirical_critical_load: bad bracket");
    if (cav(lo) || !cav(hi))
        throw std::invalid_argument(
            "empirical_critical_load: bracket must straddle the cavitation threshold");
    while (hi - lo > 1e-6) {
        double mid = 0.5 * (lo + hi);
        (cav(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double empirical_critical_load(const Material2D &mat, double lambda_lo, double lambda_hi) {
    return critical_impl(mat, lambda_lo, lambda_hi, [&](double l) {
        return minimize_trial_family(l, mat, default_a_grid(l)).cavitated;
    });
}

double empirical_critical_load(const Material3D &mat, double lambda_lo, double lambda_hi) {
    return critical_impl(mat, lambda_lo, lambda_hi, [&](double l) {
        return minimize_trial_family(l, mat, default_a_grid(l)).cavitated;
    });
}

namespace {

template <class IntervalEnergy>
RadialProfile refine_impl(const RadialProfile &start, int iterations,
                          IntervalEnergy interval_energy) {
    RadialProfile p = start;
    if (p.kind == ProfileKind::trial_family) p = RadialProfile::piecewise_from(p, 64);
    std::size_t n_int = p.knots.size() - 1;
    std::vector<double> part(n_int);
    for (std::size_t i = 0; i < n_int; ++i) part[i] = interval_energy(p.knots, i);
    const double eps = 1e-9;
    double step = 0.25 * p.lambda / static_cast<double>(n_int);
    for (int it = 0; it < iterations && step > 1e-10; ++it) {
        bool improved = false;
        for (std::size_t i = 0; i < n_int; ++i) {  // knot n_int (= lambda) stays fixed
            double lo = (i == 0) ? 0.0 : p.knots[i - 1] + eps;
            double hi = p.knots[i + 1] - eps;
            for (double s : {step, -step}) {
                double cand = std::clamp(p.knots[i] + s, lo, hi);
                if (cand == p.knots[i]) continue;
                double old = p.knots[i];
                p.knots[i] = cand;
                double e_here = 0.0, e_old = 0.0;
                bool ok = true;
                std::array<double, 2> fresh{};
                for (int d = 0; d < 2; ++d) {
                    std::size_t j = i + static_cast<std::size_t>(d) - 1;
                    if (i == 0 && d == 0) continue;
                    try {
                        fresh[static_cast<std::size_t>(d)] = interval_energy(p.knots, j);
                    } catch (const nonpositive_det_error &) {
                        ok = false;
                        break;
                    }
                    e_here += fresh[static_cast<std::size_t>(d)];
                    e_old += part[j];
                }
                if (ok && e_here < e_old) {
                    for (int d = 0; d < 2; ++d) {
                        if (i == 0 && d == 0) continue;
                        part[i + static_cast<std::size_t>(d) - 1] =
                            fresh[static_cast<std::size_t>(d)];
                    }
                    improved = true;
                } else {
                    p.knots[i] = old;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    p.a = p.knots.front();
    return p;
}

}  // namespace

RadialProfile refine_piecewise(const RadialProfile &start, const Material2D &mat,
                               int iterations) {
    return refine_impl(start, iterations, [&](const std::vector<double> &k, std::size_t i) {
        return interval_energy_2d(k, i, mat);
    });
}

RadialProfile refine_piecewise(const RadialProfile &start, const Material3D &mat,
                               int iterations) {
    return refine_impl(start, iterations, [&](const std::vector<double> &k, std::size_t i) {
        return interval_energy_3d(k, i, mat);
    });
}

}  // namespace qcload
