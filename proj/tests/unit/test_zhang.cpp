#include <doctest.h>

#include <cmath>
#include <random>

#include "qcload/mat.hpp"
#include "qcload/zhang.hpp"

using namespace qcload;

TEST_CASE("growth constants: frozen values and formulas") {
    CHECK(c2(1.5) == doctest::Approx(0.353553390593274).epsilon(1e-12));
    CHECK(c1(std::sqrt(2.0), 1.5) == doctest::Approx(1.0 / (2.0 * std::pow(2.0 * std::sqrt(2.0), 0.5))).epsilon(1e-14));
    CHECK_THROWS_AS(c1(0.0, 1.5), std::domain_error);
    // C2 strictly dominates the same constant with base 3
    for (double q : {1.2, 1.5, 1.8})
        CHECK(c2(q) > 1.0 / (2.0 * std::pow(3.0, 2.0 - q)));
}

TEST_CASE("little_f branch continuity at t = M, relative 1e-14") {
    for (double q : {1.2, 1.5, 1.8})
        for (double m : {0.5, 1.0, std::sqrt(2.0) * 1.0711, 10.0}) {
            GrowthConstants2D g = growth_constants(m, q);
            double quad = g.c1 * m * m;
            double pw = g.c2 * std::pow(m, q);
            CHECK(std::abs(quad - pw) <= 1e-14 * std::max(quad, pw));
            CHECK(little_f(m, m, q) == doctest::Approx(quad).epsilon(1e-14));
            // quadratic branch wins below M, q-branch above
            CHECK(little_f(0.5 * m, m, q) == doctest::Approx(g.c1 * 0.25 * m * m).epsilon(1e-13));
            CHECK(little_f(2.0 * m, m, q) ==
                  doctest::Approx(g.c2 * std::pow(2.0 * m, q)).epsilon(1e-13));
        }
}

TEST_CASE("big_F matches little_f on matrices and is continuous at |B| = M") {
    Mat2 b = Mat2::diagonal({0.6, 0.8});  // |B| = 1
    for (double q : {1.3, 1.7}) {
        double m = 1.0;
        CHECK(big_F(b, m, q) == doctest::Approx(little_f(1.0, m, q)).epsilon(1e-13));
        CHECK(big_F(b * 3.0, m, q) == doctest::Approx(little_f(3.0, m, q)).epsilon(1e-13));
    }
}

TEST_CASE("zhang residual nonnegative on random samples, 2D and 3D") {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> n(0.0, 1.0);
    std::uniform_real_distribution<double> ls(std::log(1e-2), std::log(1e2));
    for (int i = 0; i < 20000; ++i) {
        double q = 1.2 + 0.6 * (i % 3) * 0.5;
        Mat2 a, b;
        for (auto &e : a.e) e = n(rng);
        for (auto &e : b.e) e = n(rng);
        if (norm(a) < 1e-8) continue;
        a = a * std::exp(ls(rng));
        b = b * std::exp(ls(rng));
        CHECK(verify_zhang(a, b, q) >= -1e-12);
    }
    for (int i = 0; i < 5000; ++i) {
        Mat3 a, b;
        for (auto &e : a.e) e = n(rng);
        for (auto &e : b.e) e = n(rng);
        if (norm(a) < 1e-8) continue;
        CHECK(verify_zhang(a, b, 1.5) >= -1e-12);
    }
}

TEST_CASE("zhang residual: B = 0 and B = -A oracles") {
    Mat2 a = Mat2::diagonal({2.0, 1.0});
    Mat2 zero;
    CHECK(verify_zhang(a, zero, 1.5) == doctest::Approx(0.0).epsilon(1e-14));
    // |A+B|^q = 0, -q|A|^q + q|A|^q cancels:
    // residual = (q-1)|A|^q - q(q-1) F(|A|)
    double q = 1.5;
    double na = norm(a);
    double expect = (q - 1.0) * std::pow(na, q) - q * (q - 1.0) * big_F(a * -1.0, na, q);
    CHECK(verify_zhang(a, a * -1.0, q) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(expect >= 0.0);
}

TEST_CASE("kappa: bracket, affine proxy, frozen values at q = 2.5") {
    CHECK(kappa_lower(2.5) == doctest::Approx(std::pow(2.0, -0.5)).epsilon(1e-14));
    CHECK(kappa_upper(2.5) == doctest::Approx(2.5 * std::pow(2.0, -1.5)).epsilon(1e-14));
    CHECK(kappa_affine(2.5) == doctest::Approx(0.5 + (2.0 - std::sqrt(2.0)) * 0.5).epsilon(1e-14));
    for (double q : {2.1, 2.5, 2.9}) {
        KappaEstimate k = kappa_estimate(q);
        CHECK(k.numeric >= k.lower - 1e-10);
        CHECK(k.numeric <= k.upper + 1e-10);
        CHECK(std::abs(k.numeric - k.affine) <= 0.025);
        // the (t = 2, c = -1) probe point evaluates exactly to the upper bound
        CHECK(k.numeric <= q * std::pow(2.0, 1.0 - q) + 1e-10);
    }
    CHECK_THROWS_AS(kappa_numeric(1.5), std::domain_error);
    CHECK_THROWS_AS(kappa_numeric(3.0), std::domain_error);
}

TEST_CASE("kappa_numeric certifies the matrix inequality on random samples") {
    std::mt19937_64 rng(22);
    std::normal_distribution<double> n(0.0, 1.0);
    double q = 2.5;
    double kap = kappa_numeric(q);
    for (int i = 0; i < 3000; ++i) {
        Mat3 a, b;
        for (auto &e : a.e) e = n(rng);
        for (auto &e : b.e) e = n(rng);
        double na = norm(a), nb = norm(b);
        if (na < 1e-8 || nb < 1e-8) continue;
        double lhs = std::pow(norm2(a + b), 0.5 * q);
        double rhs = std::pow(na, q) + q * std::pow(na, q - 2.0) * dot(a, b) +
                     kap * std::pow(nb, q);
        CHECK(lhs >= rhs - 1e-9 * (1.0 + lhs));
    }
}
