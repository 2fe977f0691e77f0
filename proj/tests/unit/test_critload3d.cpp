#include <doctest.h>

#include <cmath>
#include <random>

#include "qcload/critload3d.hpp"
#include "qcload/zhang.hpp"

using namespace qcload;

TEST_CASE("s_closed vs brute-force angle suprema, frozen value at q = 2.5") {
    CHECK(s_closed(2.5) == doctest::Approx(1.0699852).epsilon(1e-6));
    for (double q : {2.1, 2.5, 2.9}) {
        double s = s_closed(q);
        SNumeric n = s_numeric(q);
        CHECK(n.s1 == doctest::Approx(s).epsilon(1e-5));
        CHECK(n.s2 == doctest::Approx(s).epsilon(1e-5));
        CHECK(n.s3 == doctest::Approx(s).epsilon(1e-5));
    }
}

TEST_CASE("f_phi maximum: closed form vs grid") {
    for (double q : {2.1, 2.4, 2.7, 2.9})
        CHECK(f_phi_max_closed(q) == doctest::Approx(f_phi_max_numeric(q)).epsilon(1e-6));
}

TEST_CASE("theta part of the angle functional peaks at sin^2 theta = 2/q") {
    double q = 2.5;
    auto r = [&](double th) {
        return std::pow(std::abs(std::cos(th)), q - 2.0) * std::sin(th) * std::sin(th);
    };
    double best = 0.0, arg = 0.0;
    for (int i = 1; i < 200000; ++i) {
        double th = M_PI * i / 200000.0;
        if (r(th) > best) { best = r(th); arg = th; }
    }
    double s2 = std::sin(arg) * std::sin(arg);
    CHECK(s2 == doctest::Approx(2.0 / q).epsilon(1e-4));
}

TEST_CASE("exit radii: axis directions and sign conditions") {
    double lambda = 1.3;
    auto r = exit_radii(M_PI / 2.0, M_PI, lambda);  // direction (-1, 0, 0)
    REQUIRE(r[0].has_value());
    CHECK(*r[0] == doctest::Approx(lambda));
    CHECK_FALSE(r[1].has_value());
    CHECK_FALSE(r[2].has_value());
    // generic direction: rho_i* = -lambda / l_i for negative components
    double th = 2.0, ph = 3.5;
    std::array<double, 3> l = {std::cos(ph) * std::sin(th), std::sin(ph) * std::sin(th),
                               std::cos(th)};
    auto rr = exit_radii(th, ph, lambda);
    for (int i = 0; i < 3; ++i) {
        if (l[static_cast<std::size_t>(i)] < 0.0) {
            REQUIRE(rr[static_cast<std::size_t>(i)].has_value());
            CHECK(*rr[static_cast<std::size_t>(i)] ==
                  doctest::Approx(-lambda / l[static_cast<std::size_t>(i)]).epsilon(1e-12));
        } else {
            CHECK_FALSE(rr[static_cast<std::size_t>(i)].has_value());
        }
    }
}

TEST_CASE("F1 + F2 reconstruct the determinant expansion") {
    Material3D mat = reference_material_3d();
    double lambda = 1.07;
    double y = mat.law.hprime(std::pow(lambda, 3));
    double kap = kappa_lower(mat.q);
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.05, 3.0);
    for (int i = 0; i < 2000; ++i) {
        Spectrum<3> s{{u(rng), u(rng), u(rng)}};
        std::sort(s.v.begin(), s.v.end());
        double d0 = s[0] - lambda, d1 = s[1] - lambda, d2 = s[2] - lambda;
        double rho2 = d0 * d0 + d1 * d1 + d2 * d2;
        double lhs = f1(s, lambda, mat, kap) + f2(s, lambda, mat) - kap * std::pow(rho2, 0.5 * mat.q) -
                     mat.gamma * rho2 + lambda * lambda * y * (d0 + d1 + d2);
        double rhs = y * (s[0] * s[1] * s[2] - std::pow(lambda, 3));
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11).scale(1.0 + std::abs(rhs)));
    }
}

TEST_CASE("criterion report and critical load: gamma condition binds for the reference") {
    Material3D mat = reference_material_3d();
    CriticalLoad3D cl = critical_load_3d(mat, 1.0, 1.4);
    CHECK(cl.binding == CriticalLoad3D::Binding::gamma);
    CHECK(cl.lambda_star == doctest::Approx(cl.root_gamma).epsilon(1e-12));
    CHECK(cl.root_gamma < cl.root_main);
    CHECK(cl.lambda_star == doctest::Approx(1.151).epsilon(2e-3));
    // independent oracle for the gamma root: lambda h'(lambda^3) = 2 gamma
    double lo = 1.0, hi = 1.4;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (mid * mat.law.hprime(mid * mid * mid) < 2.0 * mat.gamma) lo = mid;
        else hi = mid;
    }
    CHECK(cl.root_gamma == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-8));
    CHECK(check_sufficient_3d(cl.lambda_star - 1e-6, mat).satisfied);
    CHECK_FALSE(check_sufficient_3d(cl.lambda_star + 1e-6, mat).satisfied);
    // at lambda = 1, h'(1) = 0: nonpositive branch
    CHECK(check_sufficient_3d(1.0, mat).branch ==
          Criterion3DReport::Branch::hprime_nonpositive);
}

TEST_CASE("numeric kappa is never more restrictive than the lower bound") {
    Material3D mat = reference_material_3d();
    CriticalLoad3D lo = critical_load_3d(mat, 1.0, 1.4, KappaMode::lower_bound);
    CriticalLoad3D hi = critical_load_3d(mat, 1.0, 1.4, KappaMode::numeric);
    CHECK(hi.root_main >= lo.root_main - 1e-9);
    Criterion3DReport r = check_sufficient_3d(1.1, mat, KappaMode::numeric);
    CHECK(r.kappa_used >= kappa_lower(mat.q) - 1e-12);
    CHECK(r.kappa_mode == KappaMode::numeric);
}

TEST_CASE("grid certification 3D: nonnegative below lambda_star, violated above") {
    Material3D mat = reference_material_3d();
    CriticalLoad3D cl = critical_load_3d(mat, 1.0, 1.4);
    GridCertification3D cert =
        grid_verify_f(0.95 * cl.lambda_star, mat, KappaMode::lower_bound, 80, 120, 100.0);
    CHECK(cert.nonnegative());
    CHECK(cert.tail_certified);
    GridCertification3D above =
        grid_verify_f(1.25 * cl.lambda_star, mat, KappaMode::lower_bound, 80, 120, 100.0);
    CHECK_FALSE(above.nonnegative());
    // gamma binds for this material: the direction coefficient goes negative
    CHECK(above.min_f2_coeff < 0.0);
}

TEST_CASE("P function: zero at lambda 1, bounded by |A|^2 + 3 lambda |A|") {
    double lambda = 1.2;
    CHECK(p_function(Mat3::scaled_identity(lambda), lambda) == doctest::Approx(0.0));
    std::mt19937_64 rng(42);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        Mat3 a;
        for (auto &e : a.e) e = n(rng);
        double na = norm(a);
        CHECK(std::abs(p_function(a, lambda)) <= na * na + 3.0 * lambda * na + 1e-10);
    }
    // diagonal oracle
    Mat3 d = Mat3::diagonal({1.0, 2.0, 3.0});
    CHECK(p_function(d, lambda) == doctest::Approx(2.0 + 3.0 + 6.0 - lambda * 6.0).epsilon(1e-12));
}

TEST_CASE("conjecture probe: deterministic across seeds and worker counts") {
    ConjectureProbeReport a = conjecture_probe(1.0, 12, 7, 1);
    ConjectureProbeReport b = conjecture_probe(1.0, 12, 7, 3);
    REQUIRE(a.values.size() == 12);
    REQUIRE(b.values.size() == 12);
    for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(a.values[i] == b.values[i]);
    CHECK(a.min == b.min);
    CHECK(a.argmin_trial == b.argmin_trial);
    ConjectureProbeReport c = conjecture_probe(1.0, 12, 8, 1);
    bool any_diff = false;
    for (std::size_t i = 0; i < a.values.size(); ++i) any_diff |= (a.values[i] != c.values[i]);
    CHECK(any_diff);
}
