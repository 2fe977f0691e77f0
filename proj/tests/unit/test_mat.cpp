#include <doctest.h>

#include <cmath>
#include <random>

#include "qcload/mat.hpp"

using namespace qcload;

namespace {

Mat2 random_mat2(std::mt19937_64 &rng, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    Mat2 m;
    for (auto &e : m.e) e = u(rng);
    return m;
}

Mat3 random_mat3(std::mt19937_64 &rng, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    Mat3 m;
    for (auto &e : m.e) e = u(rng);
    return m;
}

}  // namespace

TEST_CASE("2x2 singular values: invariants against the matrix") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 2000; ++i) {
        Mat2 m = random_mat2(rng, 3.0);
        Spectrum<2> s = singular_values(m);
        CHECK(s[0] >= 0.0);
        CHECK(s[0] <= s[1]);
        CHECK(s[0] * s[1] == doctest::Approx(std::abs(det(m))).epsilon(1e-9));
        CHECK(s[0] * s[0] + s[1] * s[1] == doctest::Approx(norm2(m)).epsilon(1e-11));
    }
}

TEST_CASE("2x2 singular values: diagonal and rotation oracles") {
    Spectrum<2> s = singular_values(Mat2::diagonal({3.0, -2.0}));
    CHECK(s[0] == doctest::Approx(2.0));
    CHECK(s[1] == doctest::Approx(3.0));
    double c = std::cos(0.7), sn = std::sin(0.7);
    Mat2 r;
    r(0, 0) = c; r(0, 1) = -sn; r(1, 0) = sn; r(1, 1) = c;
    Spectrum<2> sr = singular_values(r * 2.5);
    CHECK(sr[0] == doctest::Approx(2.5));
    CHECK(sr[1] == doctest::Approx(2.5));
}

TEST_CASE("3x3 singular values: invariants and cofactor identity") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 1000; ++i) {
        Mat3 m = random_mat3(rng, 2.0);
        Spectrum<3> s = singular_values(m);
        CHECK(s[0] >= -1e-12);
        CHECK(s[0] <= s[1]);
        CHECK(s[1] <= s[2]);
        CHECK(s[0] * s[1] * s[2] == doctest::Approx(std::abs(det(m))).epsilon(1e-7));
        double n2 = s[0] * s[0] + s[1] * s[1] + s[2] * s[2];
        CHECK(n2 == doctest::Approx(norm2(m)).epsilon(1e-10));
        // |cof m|^2 = sum of pairwise products of squared singular values
        double c2 = s[0] * s[0] * s[1] * s[1] + s[0] * s[0] * s[2] * s[2] +
                    s[1] * s[1] * s[2] * s[2];
        CHECK(c2 == doctest::Approx(norm2(cof(m))).epsilon(1e-8));
    }
}

TEST_CASE("sym3 eigenvalues handle repeated roots") {
    Mat3 id = Mat3::scaled_identity(2.0);
    auto ev = sym3_eigenvalues(id);
    CHECK(ev[0] == doctest::Approx(2.0));
    CHECK(ev[2] == doctest::Approx(2.0));
    // rank-one perturbation of identity: eigenvalues 1, 1, 1 + 3 eps
    Mat3 s = Mat3::identity();
    double eps = 1e-8;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s(i, j) += eps;
    auto e2 = sym3_eigenvalues(s);
    CHECK(e2[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(e2[2] == doctest::Approx(1.0 + 3.0 * eps).epsilon(1e-10));
}

TEST_CASE("adj and matmul: A adj(A) = det(A) I") {
    std::mt19937_64 rng(13);
    Mat3 m = random_mat3(rng, 2.0);
    Mat3 p = matmul(m, adj(m));
    double d = det(m);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(p(i, j) == doctest::Approx(i == j ? d : 0.0).epsilon(1e-10).scale(std::abs(d) + 1.0));
}

TEST_CASE("phi2 equals sigma1 + sigma2 for nonnegative determinant") {
    std::mt19937_64 rng(14);
    int checked = 0;
    while (checked < 500) {
        Mat2 m = random_mat2(rng, 2.0);
        if (det(m) < 0.0) continue;
        ++checked;
        Spectrum<2> s = singular_values(m);
        CHECK(phi2(m) == doctest::Approx(s[0] + s[1]).epsilon(1e-10));
    }
}

TEST_CASE("dist_to_scaled_rotations vanishes exactly on lambda SO(2)") {
    double c = std::cos(1.1), sn = std::sin(1.1);
    Mat2 r;
    r(0, 0) = c; r(0, 1) = -sn; r(1, 0) = sn; r(1, 1) = c;
    CHECK(dist_to_scaled_rotations(r * 1.3, 1.3) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("psi formula and scaling") {
    double l = 1.2, curl = 0.3, dv = 0.1;
    double denom = curl * curl + std::max(4.0 * l * l, dv * dv);
    CHECK(psi(curl, dv, l) ==
          doctest::Approx(2.0 * l * l * curl * curl / (3.0 * std::pow(denom, 1.5))));
    CHECK(psi(0.0, 0.5, l) == 0.0);
    CHECK(psi(curl, dv, l) >= 0.0);
}

TEST_CASE("excess integrand X throws on degenerate denominator") {
    Mat2 omega;  // zero matrix: phi2 = 0
    Mat2 d = Mat2::identity();
    CHECK_THROWS_AS(excess_integrand_X(omega, d), degenerate_denominator);
}
