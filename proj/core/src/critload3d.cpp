#include "qcload/critload3d.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>

#include "qcload/fields.hpp"
#include "qcload/parallel.hpp"
#include "qcload/zhang.hpp"

namespace qcload {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(const Spectrum<3> &s) {
    if (!(s[0] > 0.0 && s[1] > 0.0 && s[2] > 0.0))
        throw std::domain_error("singular values must lie in the open positive octant");
}
}  // namespace

double f1(const Spectrum<3> &sigma, double lambda, const Material3D &mat, double kappa) {
    require_positive(sigma);
    double d1 = sigma[0] - lambda, d2 = sigma[1] - lambda, d3 = sigma[2] - lambda;
    double rho = std::sqrt(d1 * d1 + d2 * d2 + d3 * d3);
    return kappa * std::pow(rho, mat.q) +
           mat.law.hprime(lambda * lambda * lambda) * d1 * d2 * d3;
}

double f2(const Spectrum<3> &sigma, double lambda, const Material3D &mat) {
    require_positive(sigma);
    double d1 = sigma[0] - lambda, d2 = sigma[1] - lambda, d3 = sigma[2] - lambda;
    double rho2 = d1 * d1 + d2 * d2 + d3 * d3;
    double pairs = d1 * d2 + d1 * d3 + d2 * d3;
    return mat.gamma * rho2 + lambda * mat.law.hprime(lambda * lambda * lambda) * pairs;
}

std::array<std::optional<double>, 3> exit_radii(double theta, double phi, double lambda) {
    std::array<std::optional<double>, 3> out;
    double l[3] = {std::cos(phi) * std::sin(theta), std::sin(phi) * std::sin(theta),
                   std::cos(theta)};
    for (int i = 0; i < 3; ++i)
        if (l[i] < 0.0) out[static_cast<std::size_t>(i)] = -lambda / l[i];
    return out;
}

double s_closed(double q) {
    return 4.0 * std::pow(q - 2.0, 0.5 * (q - 2.0)) * std::pow(q, -0.5 * q);
}

double f_phi_max_closed(double q) {
    // maximizer of |sin phi| |cos phi|^{q-2}: cos^2 phi = (q-2)/(q-1),
    // sin^2 phi = 1/(q-1); combined with e_max this reproduces
    // s1 = 4 (q-2)^{(q-2)/2} q^{-q/2}
    return std::pow(q - 1.0, -0.5) * std::pow((q - 2.0) / (q - 1.0), 0.5 * (q - 2.0));
}

double f_phi_max_numeric(double q, int grid) {
    double best = 0.0;
    for (int i = 0; i <= grid; ++i) {
        double phi = 0.5 * M_PI + 0.75 * M_PI * i / grid;
        double v = std::abs(std::sin(phi)) * std::pow(std::abs(std::cos(phi)), q - 2.0);
        best = std::max(best, v);
    }
    return best;
}

namespace {

// the sin(2 phi) cos(theta) < 0 sector within phi in [pi/4, 5 pi/4]
bool in_s(double theta, double phi) {
    if (phi < 0.25 * M_PI || phi > 1.25 * M_PI) return false;
    return std::sin(2.0 * phi) * std::cos(theta) < 0.0;
}

double m_quotient(int which, double theta, double phi, double q) {
    double num = std::abs(std::sin(2.0 * phi) * std::sin(2.0 * theta) * std::sin(theta));
    double den;
    switch (which) {
        case 1: den = std::abs(std::cos(phi) * std::sin(theta)); break;
        case 2: den = std::abs(std::sin(phi) * std::sin(theta)); break;
        default: den = std::abs(std::cos(theta)); break;
    }
    if (!(den > 0.0)) return -kInf;
    return num / std::pow(den, 3.0 - q);
}

bool in_si(int which, double theta, double phi) {
    if (!in_s(theta, phi)) return false;
    switch (which) {
        case 1: return std::cos(phi) * std::sin(theta) < 0.0;
        case 2: return std::sin(phi) * std::sin(theta) < 0.0;
        default: return std::cos(theta) < 0.0;
    }
}

double sup_mi(int which, double q, int grid) {
    double best = -kInf, bt = 0.0, bp = 0.0;
    double t0 = 0.0, t1 = M_PI, p0 = 0.25 * M_PI, p1 = 1.25 * M_PI;
    for (int round = 0; round < 4; ++round) {
        int n = (round == 0) ? grid : 200;
        double nbt = bt, nbp = bp;
        bool found = false;
        for (int i = 0; i <= n; ++i) {
            double theta = t0 + (t1 - t0) * i / n;
            for (int j = 0; j <= n; ++j) {
                double phi = p0 + (p1 - p0) * j / n;
                if (!in_si(which, theta, phi)) continue;
                double v = m_quotient(which, theta, phi, q);
                if (v > best) {
                    best = v;
                    nbt = theta;
                    nbp = phi;
                    found = true;
                }
            }
        }
        if (round == 0 && !found) break;
        bt = nbt;
        bp = nbp;
        double ht = (t1 - t0) / ((round == 0) ? grid : 200);
        double hp = (p1 - p0) / ((round == 0) ? grid : 200);
        t0 = std::max(0.0, bt - 2.0 * ht);
        t1 = std::min(M_PI, bt + 2.0 * ht);
        p0 = std::max(0.25 * M_PI, bp - 2.0 * hp);
        p1 = std::min(1.25 * M_PI, bp + 2.0 * hp);
    }
    return best;
}

}  // namespace

SNumeric s_numeric(double q, int grid) {
    if (!(q > 2.0 && q < 3.0)) throw std::domain_error("s_numeric: q must be in (2,3)");
    SNumeric s;
    s.s1 = sup_mi(1, q, grid);
    s.s2 = sup_mi(2, q, grid);
    s.s3 = sup_mi(3, q, grid);
    return s;
}

Criterion3DReport check_sufficient_3d(double lambda, const Material3D &mat, KappaMode mode) {
    Criterion3DReport r;
    r.lambda = lambda;
    r.q = mat.q;
    r.gamma = mat.gamma;
    r.kappa_mode = mode;
    r.kappa_used = (mode == KappaMode::lower_bound) ? kappa_lower(mat.q) : kappa_numeric(mat.q);
    double y = mat.law.hprime(lambda * lambda * lambda);
    r.hprime_at_lambda_cubed = y;
    r.rhs_main = 0.25 * s_closed(mat.q);
    if (y <= 0.0) {
        r.lhs_main = (y == 0.0) ? kInf
                                : r.kappa_used / (y * std::pow(lambda, 3.0 - mat.q));
        r.lhs_gamma = (y == 0.0) ? kInf : mat.gamma / (lambda * y);
        r.branch = Criterion3DReport::Branch::hprime_nonpositive;
        r.satisfied = true;
        r.strict_main = true;
        return r;
    }
    r.lhs_main = r.kappa_used / (y * std::pow(lambda, 3.0 - mat.q));
    r.lhs_gamma = mat.gamma / (lambda * y);
    r.branch = Criterion3DReport::Branch::condition_checked;
    r.satisfied = r.lhs_main >= r.rhs_main && r.lhs_gamma >= 0.5;
    r.strict_main = r.lhs_main > r.rhs_main;
    return r;
}

namespace {

// largest lambda in [lo, hi] with pred true, assuming pred(lo); bisection
// after a monotonicity scan of the scalar witness. Mirrors the 2D solver.
double condition_root(double lo_in, double hi_in, const std::function<bool(double)> &pred,
                      const std::function<double(double)> &witness, bool &conservative) {
    if (pred(hi_in)) return hi_in;
    const int n = 1000;
    bool monotone = true;
    double prev = -kInf;
    for (int i = 0; i <= n; ++i) {
        double l = lo_in + (hi_in - lo_in) * i / n;
        double t = witness(l);
        if (t < prev - 1e-12 * (1.0 + std::abs(prev))) {
            monotone = false;
            break;
        }
        prev = std::max(prev, t);
    }
    double lo = lo_in, hi = hi_in;
    if (!monotone) {
        conservative = true;
        for (int i = 0; i < n; ++i) {
            double a = lo_in + (hi_in - lo_in) * i / n;
            double b = lo_in + (hi_in - lo_in) * (i + 1) / n;
            if (pred(a) && !pred(b)) {
                lo = a;
                hi = b;
                break;
            }
        }
    }
    while (hi - lo > 1e-10) {
        double mid = 0.5 * (lo + hi);
        (pred(mid) ? lo : hi) = mid;
    }
    return lo;
}

}  // namespace

CriticalLoad3D critical_load_3d(const Material3D &mat, double lambda_lo, double lambda_hi,
                                KappaMode mode) {
    if (!(lambda_lo > 0.0 && lambda_hi > lambda_lo))
        throw std::invalid_argument("critical_load_3d: need 0 < lambda_lo < lambda_hi");
    double kappa = (mode == KappaMode::lower_bound) ? kappa_lower(mat.q) : kappa_numeric(mat.q);
    double rhs = 0.25 * s_closed(mat.q);
    auto y_of = [&](double l) { return mat.law.hprime(l * l * l); };
    auto main_ok = [&](double l) {
        double y = y_of(l);
        return y <= 0.0 || kappa / (y * std::pow(l, 3.0 - mat.q)) >= rhs;
    };
    auto gamma_ok = [&](double l) {
        double y = y_of(l);
        return y <= 0.0 || mat.gamma / (l * y) >= 0.5;
    };
    if (!main_ok(lambda_lo) || !gamma_ok(lambda_lo))
        throw std::invalid_argument("critical_load_3d: condition violated at the lower bracket end");

    CriticalLoad3D out;
    out.root_main = condition_root(
        lambda_lo, lambda_hi, main_ok,
        [&](double l) { return y_of(l) * std::pow(l, 3.0 - mat.q); }, out.conservative);
    out.root_gamma = condition_root(
        lambda_lo, lambda_hi, gamma_ok, [&](double l) { return l * y_of(l); },
        out.conservative);
    out.lambda_star = std::min(out.root_main, out.root_gamma);
    if (out.root_main >= lambda_hi && out.root_gamma >= lambda_hi)
        out.binding = CriticalLoad3D::Binding::none;
    else if (out.root_main <= out.root_gamma)
        out.binding = CriticalLoad3D::Binding::main;
    else
        out.binding = CriticalLoad3D::Binding::gamma;
    return out;
}

GridCertification3D grid_verify_f(double lambda, const Material3D &mat, KappaMode mode,
                                  int n_rho, int n_angle, double rho_max) {
    if (n_rho < 2 || n_angle < 2 || !(rho_max > 0.0))
        throw std::invalid_argument("grid_verify_f: bad grid parameters");
    GridCertification3D out;
    double kappa = (mode == KappaMode::lower_bound) ? kappa_lower(mat.q) : kappa_numeric(mat.q);
    double y = mat.law.hprime(lambda * lambda * lambda);

    out.rho_max_used = rho_max;
    if (y <= 0.0 && y != 0.0) {
        // F1 >= kappa rho^q - |Y| rho^3 / 4 unconditionally on this range
        double guard = std::pow(4.0 * kappa / std::abs(y), 1.0 / (3.0 - mat.q));
        out.rho_max_used = std::min(rho_max, guard);
    }

    const double rho_min = 1e-6 * lambda;
    const double lr0 = std::log(rho_min), lr1 = std::log(out.rho_max_used);
    IndexedMin best1, best2, bestc;
    std::vector<std::array<double, 3>> dirs;
    dirs.reserve(static_cast<std::size_t>(n_angle) * static_cast<std::size_t>(n_angle));
    for (int it = 0; it <= n_angle; ++it) {
        double theta = M_PI * it / n_angle;
        for (int ip = 0; ip <= n_angle; ++ip) {
            double phi = 0.25 * M_PI + M_PI * ip / n_angle;
            std::array<double, 3> l = {std::cos(phi) * std::sin(theta),
                                       std::sin(phi) * std::sin(theta), std::cos(theta)};
            // ordered sector only (F1, F2 are permutation symmetric)
            if (!(l[0] <= l[1] + 1e-15 && l[1] <= l[2] + 1e-15)) continue;
            dirs.push_back(l);
        }
    }
    for (std::size_t d = 0; d < dirs.size(); ++d) {
        const auto &l = dirs[d];
        double pairs = l[0] * l[1] + l[0] * l[2] + l[1] * l[2];
        double coeff = mat.gamma + lambda * y * pairs;
        bestc.add(coeff, d);
        for (int i = 0; i < n_rho; ++i) {
            double rho = std::exp(lr0 + (lr1 - lr0) * i / (n_rho - 1.0));
            double s1 = lambda + rho * l[0], s2 = lambda + rho * l[1], s3 = lambda + rho * l[2];
            if (!(s1 > 0.0 && s2 > 0.0 && s3 > 0.0)) continue;
            std::size_t idx = d * static_cast<std::size_t>(n_rho) + static_cast<std::size_t>(i);
            double v1 = kappa * std::pow(rho, mat.q) + y * (s1 - lambda) * (s2 - lambda) * (s3 - lambda);
            best1.add(v1, idx);
            double v2 = mat.gamma * rho * rho + lambda * y * ((s1 - lambda) * (s2 - lambda) +
                                                              (s1 - lambda) * (s3 - lambda) +
                                                              (s2 - lambda) * (s3 - lambda));
            best2.add(v2, idx);
        }
    }
    auto sigma_at = [&](std::size_t idx) {
        std::size_t d = idx / static_cast<std::size_t>(n_rho);
        int i = static_cast<int>(idx % static_cast<std::size_t>(n_rho));
        double rho = std::exp(lr0 + (lr1 - lr0) * i / (n_rho - 1.0));
        const auto &l = dirs[d];
        return Spectrum<3>{{lambda + rho * l[0], lambda + rho * l[1], lambda + rho * l[2]}};
    };
    if (!best1.empty) {
        out.min_f1 = best1.value;
        out.argmin_f1 = sigma_at(best1.index);
    }
    if (!best2.empty) {
        out.min_f2 = best2.value;
        out.argmin_f2 = sigma_at(best2.index);
    }
    if (!bestc.empty) out.min_f2_coeff = bestc.value;

    if (y <= 0.0) {
        out.tail_certified = true;  // F1 claim deliberately truncated
    } else {
        // beyond rho_max: one negative factor gives |prod| <= lambda rho^2,
        // three negative factors keep rho < sqrt(3) lambda (inside the grid)
        double r = std::max(out.rho_max_used, std::sqrt(3.0) * lambda);
        out.tail_certified = kappa * std::pow(r, mat.q - 2.0) >= y * lambda;
    }
    return out;
}

double p_function(const Mat3 &a, double lambda) {
    Spectrum<3> s = singular_values(a);
    return s[0] * s[1] + s[0] * s[2] + s[1] * s[2] - lambda * (s[0] + s[1] + s[2]);
}

ConjectureProbeReport conjecture_probe(double lambda, std::size_t trials, std::uint64_t seed,
                                       int workers) {
    ConjectureProbeReport rep;
    rep.lambda = lambda;
    rep.trials = trials;
    rep.values.assign(trials, 0.0);
    if (trials == 0) return rep;

    auto spec_for_trial = [&](std::size_t t) {
        std::mt19937_64 rng(mix64(seed + 0x9e3779b97f4a7c15ull * (t + 1)));
        PerturbationSpec spec;
        std::uniform_int_distribution<int> fam(0, 2);
        switch (fam(rng)) {
            case 0: spec.family = PerturbFamily::bump; break;
            case 1: spec.family = PerturbFamily::trig; break;
            default: spec.family = PerturbFamily::divfree; break;
        }
        std::uniform_real_distribution<double> logamp(std::log(1e-2), std::log(2.0));
        spec.amp = std::exp(logamp(rng));
        std::uniform_int_distribution<int> freq(1, 3);
        spec.freq = {freq(rng), freq(rng), freq(rng)};
        return spec;
    };

    const std::size_t n_chunks = std::min<std::size_t>(64, trials);
    for_chunks(trials, n_chunks, workers, [&](const ChunkRange &r) {
        for (std::size_t t = r.begin; t < r.end; ++t) {
            PerturbationSpec spec = spec_for_trial(t);
            int kmax = std::max({spec.freq[0], spec.freq[1], spec.freq[2]});
            // P is defined for every matrix; no admissibility constraint
            DeformationField<3> f =
                make_field_3d(spec, lambda, 4 * kmax, /*require_admissible=*/false, 3);
            std::vector<double> vals(f.grads.size());
            for (std::size_t i = 0; i < f.grads.size(); ++i)
                vals[i] = f.weights[i] * p_function(f.grads[i], lambda);
            rep.values[t] = pairwise_sum(vals);
        }
    });

    IndexedMin best;
    double sum = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        best.add(rep.values[t], t);
        sum += rep.values[t];
    }
    rep.min = best.value;
    rep.argmin_trial = best.index;
    rep.mean = sum / static_cast<double>(trials);
    PerturbationSpec s = spec_for_trial(best.index);
    rep.argmin_family = family_name(s.family);
    rep.argmin_amp = s.amp;
    rep.argmin_freq = s.freq;
    return rep;
}

}  // namespace qcload
