#include "qcload/critload2d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "qcload/parallel.hpp"
#include "qcload/zhang.hpp"

namespace qcload {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(const Spectrum<2> &s) {
    if (!(s[0] > 0.0 && s[1] > 0.0))
        throw std::domain_error("singular values must lie in the open positive quadrant");
}
}  // namespace

double g1(const Spectrum<2> &sigma, double lambda, const Material2D &mat) {
    require_positive(sigma);
    double d1 = sigma[0] - lambda, d2 = sigma[1] - lambda;
    double rho = std::sqrt(d1 * d1 + d2 * d2);
    double m = std::sqrt(2.0) * lambda;
    return little_f(rho, m, mat.q) + mat.law.hprime(lambda * lambda) * d1 * d2;
}

double g2(const Spectrum<2> &sigma, double lambda, const Material2D &mat) {
    require_positive(sigma);
    return lambda * mat.law.hprime(lambda * lambda) * (sigma[0] + sigma[1] - 2.0 * lambda);
}

double e_mu(double mu, double q) {
    return std::cos(mu) * std::pow(std::abs(std::sin(mu)), q - 1.0);
}

double e_max(double q) {
    return std::pow(q - 1.0, 0.5 * (q - 1.0)) * std::pow(q, -0.5 * q);
}

double y_q(double q) {
    return std::sqrt(std::pow(q - 1.0, q - 1.0) * std::pow(q, -q) / std::pow(2.0, 2.0 - q));
}

Criterion2DReport check_sufficient_2d(double lambda, const Material2D &mat) {
    Criterion2DReport r;
    r.lambda = lambda;
    r.q = mat.q;
    double y = mat.law.hprime(lambda * lambda);
    r.hprime_at_lambda_sq = y;
    double m = std::sqrt(2.0) * lambda;
    r.lhs_first = c1(m, mat.q);
    r.rhs_first = 0.5 * y;
    r.rhs_second = e_max(mat.q);
    if (y <= 0.0) {
        r.lhs_second = (y == 0.0) ? kInf : c2(mat.q) / (y * std::pow(lambda, 2.0 - mat.q));
        r.branch = Criterion2DReport::Branch::hprime_nonpositive;
        r.satisfied = true;
        r.strict = true;
        return r;
    }
    r.lhs_second = c2(mat.q) / (y * std::pow(lambda, 2.0 - mat.q));
    r.branch = Criterion2DReport::Branch::condition_checked;
    r.satisfied = r.lhs_second >= r.rhs_second;
    r.strict = r.lhs_second > r.rhs_second;
    return r;
}

CriticalLoad2D critical_load_2d(const Material2D &mat, double lambda_lo, double lambda_hi) {
    if (!(lambda_lo > 0.0 && lambda_hi > lambda_lo))
        throw std::invalid_argument("critical_load_2d: need 0 < lambda_lo < lambda_hi");
    auto satisfied = [&](double l) { return check_sufficient_2d(l, mat).satisfied; };
    if (!satisfied(lambda_lo))
        throw std::invalid_argument("critical_load_2d: condition violated at the lower bracket end");
    if (satisfied(lambda_hi)) return {lambda_hi, false};

    // monotonicity scan of lambda -> h'(l^2) l^{2-q}
    const int n = 1000;
    bool monotone = true;
    double prev = -kInf;
    for (int i = 0; i <= n; ++i) {
        double l = lambda_lo + (lambda_hi - lambda_lo) * i / n;
        double t = mat.law.hprime(l * l) * std::pow(l, 2.0 - mat.q);
        if (t < prev - 1e-12 * (1.0 + std::abs(prev))) {
            monotone = false;
            break;
        }
        prev = std::max(prev, t);
    }

    double lo = lambda_lo, hi = lambda_hi;
    bool conservative = false;
    if (!monotone) {
        // fall back to the first sign change on the scan grid
        conservative = true;
        for (int i = 0; i < n; ++i) {
            double a = lambda_lo + (lambda_hi - lambda_lo) * i / n;
            double b = lambda_lo + (lambda_hi - lambda_lo) * (i + 1) / n;
            if (satisfied(a) && !satisfied(b)) {
                lo = a;
                hi = b;
                break;
            }
        }
    }
    while (hi - lo > 1e-10) {
        double mid = 0.5 * (lo + hi);
        (satisfied(mid) ? lo : hi) = mid;
    }
    return {lo, conservative};
}

GridCertification2D grid_verify_g1(double lambda, const Material2D &mat, int n_rho, int n_mu,
                                   double rho_max) {
    if (n_rho < 2 || n_mu < 2 || !(rho_max > 0.0))
        throw std::invalid_argument("grid_verify_g1: bad grid parameters");
    GridCertification2D out;
    double y = mat.law.hprime(lambda * lambda);
    double m = std::sqrt(2.0) * lambda;
    // no pointwise claim beyond the quadratic branch when h'(l^2) <= 0
    out.rho_max_used = (y <= 0.0) ? std::min(rho_max, m) : rho_max;

    const double rho_min = 1e-6 * lambda;
    const double lr0 = std::log(rho_min), lr1 = std::log(out.rho_max_used);
    const std::size_t total = static_cast<std::size_t>(n_rho) * static_cast<std::size_t>(n_mu);
    const std::size_t n_chunks = 64;
    std::vector<IndexedMin> mins(n_chunks);
    for_chunks(total, n_chunks, 1, [&](const ChunkRange &r) {
        IndexedMin &acc = mins[r.chunk];
        for (std::size_t k = r.begin; k < r.end; ++k) {
            int i = static_cast<int>(k / static_cast<std::size_t>(n_mu));
            int j = static_cast<int>(k % static_cast<std::size_t>(n_mu));
            double rho = std::exp(lr0 + (lr1 - lr0) * i / (n_rho - 1.0));
            double mu = -M_PI + 2.0 * M_PI * j / n_mu;
            double s1 = lambda + rho * std::cos(mu);
            double s2 = lambda + rho * std::sin(mu);
            if (!(s1 > 0.0 && s2 > 0.0)) continue;
            double v = little_f(rho, m, mat.q) + y * (s1 - lambda) * (s2 - lambda);
            acc.add(v, k);
        }
    });
    IndexedMin best;
    for (const auto &im : mins) best.merge(im);

    if (!best.empty) {
        out.min_value = best.value;
        int i = static_cast<int>(best.index / static_cast<std::size_t>(n_mu));
        int j = static_cast<int>(best.index % static_cast<std::size_t>(n_mu));
        out.argmin_polar.rho = std::exp(lr0 + (lr1 - lr0) * i / (n_rho - 1.0));
        out.argmin_polar.mu = -M_PI + 2.0 * M_PI * j / n_mu;
        out.argmin.v = {lambda + out.argmin_polar.rho * std::cos(out.argmin_polar.mu),
                        lambda + out.argmin_polar.rho * std::sin(out.argmin_polar.mu)};
    }

    if (y <= 0.0) {
        // the claim stops at rho_max_used; nothing left to certify
        out.tail_certified = true;
    } else {
        // beyond rho_max an admissible point with negative product term has
        // |h' (s1-l)(s2-l)| <= h' l rho, so C2 rho^{q-1} >= h' l suffices;
        // the left side is increasing in rho.
        double r = std::max(out.rho_max_used, m);
        out.tail_certified = c2(mat.q) * std::pow(r, mat.q - 1.0) >= y * lambda;
    }
    return out;
}

Counterexample2D find_counterexample_g1(double lambda, const Material2D &mat) {
    Counterexample2D cex;
    Criterion2DReport rep = check_sufficient_2d(lambda, mat);
    if (rep.satisfied) return cex;

    double q = mat.q;
    double y = rep.hprime_at_lambda_sq;  // > 0 here
    double m = std::sqrt(2.0) * lambda;
    double mu = -std::acos(1.0 / std::sqrt(q));
    double sc = std::abs(std::sin(mu) * std::cos(mu));
    double rho_bar = std::pow(c2(q) / (y * sc), 1.0 / (2.0 - q));
    double rho = rho_bar * (1.0 + 1e-3);
    double s1 = lambda + rho * std::cos(mu);
    double s2 = lambda + rho * std::sin(mu);
    if (s1 > 0.0 && s2 > 0.0) {
        Spectrum<2> sig{{s1, s2}};
        double v = g1(sig, lambda, mat);
        if (v < 0.0) {
            cex.found = true;
            cex.sigma = sig;
            cex.polar = {rho, mu};
            cex.value = v;
            return cex;
        }
    }
    // near-boundary case: fall back to scanning the dangerous sector
    for (int j = 1; j < 256; ++j) {
        double mju = -0.5 * M_PI * j / 256.0;
        double rho_cap = lambda / std::abs(std::sin(mju));
        for (int i = 1; i < 256; ++i) {
            double r = rho_cap * i / 256.0;
            double s1s = lambda + r * std::cos(mju);
            double s2s = lambda + r * std::sin(mju);
            if (!(s1s > 0.0 && s2s > 0.0)) continue;
            double v = little_f(r, m, q) + y * (s1s - lambda) * (s2s - lambda);
            if (v < cex.value) {
                cex.found = true;
                cex.sigma = Spectrum<2>{{s1s, s2s}};
                cex.polar = {r, mju};
                cex.value = v;
            }
        }
    }
    return cex;
}

C0Bound c0_lower_bound(double lambda, const Material2D &mat) {
    Criterion2DReport rep = check_sufficient_2d(lambda, mat);
    if (!rep.strict)
        throw condition_not_strict("c0_lower_bound: the strict sufficient condition fails");
    double y = rep.hprime_at_lambda_sq;
    double m = std::sqrt(2.0) * lambda;
    double inner = 2.0 * (c1(m, mat.q) - 0.5 * std::abs(y));
    C0Bound b;
    if (y > 0.0) {
        double eps = c2(mat.q) - y * std::pow(lambda, 2.0 - mat.q) * e_max(mat.q);
        b.c0 = std::min(inner, mat.q * eps);
        b.valid_radius = kInf;
    } else {
        b.c0 = inner;
        b.valid_radius = m;
    }
    if (!(b.c0 > 0.0))
        throw condition_not_strict("c0_lower_bound: no positive constant available");
    return b;
}

double g_growth(double t, double q) {
    if (t < 0.0) throw std::domain_error("g_growth: t must be >= 0");
    if (t <= 1.0) return 0.5 * t * t;
    return std::pow(t, q) / q + 0.5 - 1.0 / q;
}

}  // namespace qcload
