#include <doctest.h>

#include <cmath>
#include <random>

#include "qcload/critload2d.hpp"
#include "qcload/zhang.hpp"

using namespace qcload;

namespace {

// independent fine-scan oracle for e_max
double e_max_scan(double q, int n) {
    double best = 0.0;
    for (int i = 0; i <= n; ++i) {
        double mu = -M_PI / 2.0 + M_PI / 2.0 * i / n;  // maximizer lives in (-pi/2, 0)
        best = std::max(best, e_mu(mu, q));
    }
    return best;
}

}  // namespace

TEST_CASE("e_max: closed form vs grid scan, frozen value at q = 1.5") {
    CHECK(e_max(1.5) == doctest::Approx(0.6204035).epsilon(1e-6));
    for (double q : {1.05, 1.2, 1.35, 1.5, 1.6, 1.7, 1.8, 1.9, 1.95})
        CHECK(e_max(q) == doctest::Approx(e_max_scan(q, 100000)).epsilon(1e-6));
    // maximizer at cos^2 mu = 1/q
    double q = 1.5;
    double mu_star = -std::acos(1.0 / std::sqrt(q));
    CHECK(e_mu(mu_star, q) == doctest::Approx(e_max(q)).epsilon(1e-12));
}

TEST_CASE("y_q witnesses (second) => (first): decreasing, >= 1/2") {
    double prev = 10.0;
    for (double q = 1.05; q < 2.0; q += 0.05) {
        double y = y_q(q);
        CHECK(y >= 0.5);
        CHECK(y < prev);
        prev = y;
    }
    CHECK(y_q(1.999999) == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("pointwise decomposition identity: f + h'(det terms) = G1 + G2") {
    Material2D mat = reference_material_2d();
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.05, 4.0);
    double lambda = 1.02;
    double y = mat.law.hprime(lambda * lambda);
    double m = std::sqrt(2.0) * lambda;
    for (int i = 0; i < 2000; ++i) {
        Spectrum<2> s{{u(rng), u(rng)}};
        if (s.v[0] > s.v[1]) std::swap(s.v.front(), s.v.back());
        double rho = std::hypot(s[0] - lambda, s[1] - lambda);
        double lhs = little_f(rho, m, mat.q) +
                     y * (s[0] * s[1] - lambda * lambda);
        CHECK(g1(s, lambda, mat) + g2(s, lambda, mat) == doctest::Approx(lhs).epsilon(1e-12));
    }
    Spectrum<2> bad{{-0.1, 1.0}};
    CHECK_THROWS_AS(g1(bad, lambda, mat), std::domain_error);
}

TEST_CASE("criterion report: reference material branches") {
    Material2D mat = reference_material_2d();
    // h'(1) = 0 at lambda = 1: nonpositive branch, strictly satisfied
    Criterion2DReport at1 = check_sufficient_2d(1.0, mat);
    CHECK(at1.branch == Criterion2DReport::Branch::hprime_nonpositive);
    CHECK(at1.satisfied);
    CHECK(at1.strict);

    Criterion2DReport ok = check_sufficient_2d(1.05, mat);
    CHECK(ok.branch == Criterion2DReport::Branch::condition_checked);
    CHECK(ok.satisfied);
    CHECK(ok.lhs_second >= ok.rhs_second);

    Criterion2DReport bad = check_sufficient_2d(1.2, mat);
    CHECK_FALSE(bad.satisfied);
}

TEST_CASE("second condition implies the first on random materials") {
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> uq(1.05, 1.95), ua(0.2, 3.0), ul(0.8, 2.0);
    for (int i = 0; i < 500; ++i) {
        Material2D mat;
        mat.q = uq(rng);
        mat.law = VolumetricLaw::quad_log(ua(rng), ua(rng));
        Criterion2DReport r = check_sufficient_2d(ul(rng), mat);
        if (r.branch == Criterion2DReport::Branch::condition_checked &&
            r.lhs_second >= r.rhs_second)
            CHECK(r.lhs_first >= r.rhs_first);
    }
}

TEST_CASE("critical load: reference material, bracketing and monotonicity") {
    Material2D mat = reference_material_2d();
    CriticalLoad2D cl = critical_load_2d(mat, 1.0, 1.5);
    CHECK_FALSE(cl.conservative);
    CHECK(cl.lambda_star == doctest::Approx(1.0711).epsilon(1e-3));
    CHECK(check_sufficient_2d(cl.lambda_star - 1e-6, mat).satisfied);
    CHECK_FALSE(check_sufficient_2d(cl.lambda_star + 1e-6, mat).satisfied);
    // never violated in a tiny bracket: returns hi
    CriticalLoad2D low = critical_load_2d(mat, 1.0, 1.01);
    CHECK(low.lambda_star == doctest::Approx(1.01));
    CHECK_THROWS_AS(critical_load_2d(mat, 1.4, 1.5), std::invalid_argument);
}

TEST_CASE("grid certification: nonnegative below lambda_star, tail certified") {
    Material2D mat = reference_material_2d();
    CriticalLoad2D cl = critical_load_2d(mat, 1.0, 1.5);
    GridCertification2D cert = grid_verify_g1(0.95 * cl.lambda_star, mat, 300, 300, 100.0);
    CHECK(cert.nonnegative());
    CHECK(cert.tail_certified);
    GridCertification2D above = grid_verify_g1(1.3 * cl.lambda_star, mat, 300, 300, 100.0);
    CHECK_FALSE(above.nonnegative());
}

TEST_CASE("counterexample beyond lambda_star, none below") {
    Material2D mat = reference_material_2d();
    CriticalLoad2D cl = critical_load_2d(mat, 1.0, 1.5);
    Counterexample2D cex = find_counterexample_g1(1.2 * cl.lambda_star, mat);
    CHECK(cex.found);
    CHECK(cex.value < 0.0);
    CHECK(cex.sigma[0] > 0.0);
    // the negative cell really evaluates negative through g1 itself
    CHECK(g1(cex.sigma, 1.2 * cl.lambda_star, mat) == doctest::Approx(cex.value));
    Counterexample2D none = find_counterexample_g1(0.9 * cl.lambda_star, mat);
    CHECK_FALSE(none.found);
}

TEST_CASE("c0 bound: positive below lambda_star, decreasing, throws at equality") {
    Material2D mat = reference_material_2d();
    CriticalLoad2D cl = critical_load_2d(mat, 1.0, 1.5);
    for (double f : {0.90, 0.95, 0.99}) {
        C0Bound b = c0_lower_bound(f * cl.lambda_star, mat);
        CHECK(b.c0 > 0.0);
    }
    // the constant degenerates as lambda approaches lambda_star
    CHECK(c0_lower_bound(0.999 * cl.lambda_star, mat).c0 <
          c0_lower_bound(0.95 * cl.lambda_star, mat).c0);
    CHECK(c0_lower_bound(0.999 * cl.lambda_star, mat).c0 < 0.02);
    CHECK_THROWS_AS(c0_lower_bound(cl.lambda_star + 1e-8, mat), condition_not_strict);
    // the pointwise bound G1 >= c0 g(rho) spot-checked on the validity region
    double lambda = 0.9 * cl.lambda_star;
    C0Bound b = c0_lower_bound(lambda, mat);
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> umu(-M_PI, M_PI), ur(0.0, 1.0);
    for (int i = 0; i < 20000; ++i) {
        double rho = ur(rng) * std::min(b.valid_radius, 50.0);
        double mu = umu(rng);
        Spectrum<2> s{{lambda + rho * std::sin(mu), lambda + rho * std::cos(mu)}};
        if (s.v[0] > s.v[1]) std::swap(s.v.front(), s.v.back());
        if (s[0] <= 1e-9) continue;
        CHECK(g1(s, lambda, mat) >= b.c0 * g_growth(rho, mat.q) - 1e-12);
    }
}

TEST_CASE("g growth function: convex, C1 at the branch point") {
    double q = 1.5;
    CHECK(g_growth(0.0, q) == 0.0);
    CHECK(g_growth(1.0, q) == doctest::Approx(0.5));
    double eps = 1e-7;
    double left = (g_growth(1.0, q) - g_growth(1.0 - eps, q)) / eps;
    double right = (g_growth(1.0 + eps, q) - g_growth(1.0, q)) / eps;
    CHECK(left == doctest::Approx(right).epsilon(1e-5));
    for (double t = 0.1; t < 5.0; t += 0.1) {
        double mid = g_growth(t, q);
        CHECK(mid <= 0.5 * (g_growth(t - 0.05, q) + g_growth(t + 0.05, q)) + 1e-12);
        CHECK(std::min(t * t, std::pow(t, q)) <= std::max(2.0, q) * mid + 1e-12);
    }
}
