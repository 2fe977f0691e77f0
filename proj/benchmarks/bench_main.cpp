#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "qcload/critload2d.hpp"
#include "qcload/critload3d.hpp"
#include "qcload/fields.hpp"
#include "qcload/mat.hpp"
#include "qcload/radial.hpp"
#include "qcload/volumetric.hpp"
#include "qcload/zhang.hpp"

using namespace qcload;

namespace {

std::vector<Mat2> random_mats2(std::size_t n) {
    std::mt19937_64 rng(77);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<Mat2> v(n);
    for (auto &m : v)
        for (auto &e : m.e) e = nd(rng);
    return v;
}

std::vector<Mat3> random_mats3(std::size_t n) {
    std::mt19937_64 rng(78);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<Mat3> v(n);
    for (auto &m : v)
        for (auto &e : m.e) e = nd(rng);
    return v;
}

void bm_svd2(benchmark::State &state) {
    auto mats = random_mats2(1024);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(singular_values(mats[i++ & 1023]));
    }
}
BENCHMARK(bm_svd2);

void bm_svd3(benchmark::State &state) {
    auto mats = random_mats3(1024);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(singular_values(mats[i++ & 1023]));
    }
}
BENCHMARK(bm_svd3);

void bm_zhang_residual(benchmark::State &state) {
    auto mats = random_mats2(1024);
    std::size_t i = 0;
    for (auto _ : state) {
        const Mat2 &a = mats[i & 1023];
        const Mat2 &b = mats[(i + 1) & 1023];
        ++i;
        benchmark::DoNotOptimize(verify_zhang(a, b, 1.5));
    }
}
BENCHMARK(bm_zhang_residual);

void bm_grid_verify_g1(benchmark::State &state) {
    Material2D mat = reference_material_2d();
    auto n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(grid_verify_g1(0.96, mat, n, n, 100.0));
    }
}
BENCHMARK(bm_grid_verify_g1)->Arg(64)->Arg(256);

void bm_field_energy(benchmark::State &state) {
    Material2D mat = reference_material_2d();
    PerturbationSpec spec;
    spec.family = PerturbFamily::bump;
    spec.amp = 0.08;
    spec.freq = {2, 2, 2};
    DeformationField<2> f = make_field_2d(spec, 0.96, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(energy(f, mat));
    }
}
BENCHMARK(bm_field_energy)->Arg(16)->Arg(32);

void bm_kappa_numeric(benchmark::State &state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(kappa_numeric(2.5, static_cast<int>(state.range(0))));
    }
}
BENCHMARK(bm_kappa_numeric)->Arg(64)->Arg(256);

void bm_radial_energy(benchmark::State &state) {
    Material2D mat;
    mat.q = 1.5;
    mat.law = VolumetricLaw::power_log(1.0, 1.0, 1.0, 1.0);
    RadialProfile p = RadialProfile::trial(2, 0.4, 2.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(radial_energy(p, mat));
    }
}
BENCHMARK(bm_radial_energy);

}  // namespace

BENCHMARK_MAIN();
