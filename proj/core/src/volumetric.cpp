#include "qcload/volumetric.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "qcload/config.hpp"

namespace qcload {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double VolumetricLaw::h(double t) const {
    if (t <= 0.0) throw std::domain_error("VolumetricLaw::h: t <= 0 (h = +inf)");
    switch (kind) {
        case LawKind::power_log:
            return a * std::pow(t, p) + b * std::pow(t, -r);
        case LawKind::quad_log:
            return a * (t * t - 1.0) - b * std::log(t);
        case LawKind::custom:
            return custom_h(t);
    }
    return 0.0;
}

double VolumetricLaw::hprime(double t) const {
    if (t <= 0.0) throw std::domain_error("VolumetricLaw::hprime: t <= 0");
    switch (kind) {
        case LawKind::power_log:
            return a * p * std::pow(t, p - 1.0) - b * r * std::pow(t, -r - 1.0);
        case LawKind::quad_log:
            return 2.0 * a * t - b / t;
        case LawKind::custom:
            return custom_hprime(t);
    }
    return 0.0;
}

VolumetricLaw VolumetricLaw::power_log(double a, double p, double b, double r) {
    VolumetricLaw l;
    l.kind = LawKind::power_log;
    l.a = a;
    l.p = p;
    l.b = b;
    l.r = r;
    return l;
}

VolumetricLaw VolumetricLaw::quad_log(double a, double b) {
    VolumetricLaw l;
    l.kind = LawKind::quad_log;
    l.a = a;
    l.b = b;
    return l;
}

VolumetricLaw VolumetricLaw::custom(std::function<double(double)> h,
                                    std::function<double(double)> hprime) {
    VolumetricLaw l;
    l.kind = LawKind::custom;
    l.custom_h = std::move(h);
    l.custom_hprime = std::move(hprime);
    return l;
}

HypothesesReport check_hypotheses(const VolumetricLaw &law, double t_min, double t_max,
                                  int samples) {
    HypothesesReport rep;
    auto fail = [&](const std::string &msg) { rep.failures.push_back(msg); };

    std::vector<double> ts(static_cast<std::size_t>(samples));
    double lmin = std::log(t_min), lmax = std::log(t_max);
    for (int i = 0; i < samples; ++i)
        ts[static_cast<std::size_t>(i)] = std::exp(lmin + (lmax - lmin) * i / (samples - 1.0));

    // nonnegativity
    for (double t : ts) {
        if (law.h(t) < -1e-12) {
            std::ostringstream os;
            os << "nonnegativity: h(" << t << ") = " << law.h(t) << " < 0";
            fail(os.str());
            break;
        }
    }
    // convexity secants on consecutive triples
    for (std::size_t i = 0; i + 2 < ts.size(); ++i) {
        double t1 = ts[i], t2 = ts[i + 2], tm = 0.5 * (t1 + t2);
        double lhs = law.h(tm);
        double w = (tm - t1) / (t2 - t1);
        double rhs = (1.0 - w) * law.h(t1) + w * law.h(t2);
        double scale = 1.0 + std::abs(law.h(t1)) + std::abs(law.h(t2));
        if (lhs > rhs + 1e-9 * scale) {
            std::ostringstream os;
            os << "convexity: secant violated near t = " << tm;
            fail(os.str());
            break;
        }
    }
    // h' vs central differences
    for (std::size_t i = 0; i < ts.size(); i += 7) {
        double t = ts[i];
        double dt = 1e-6 * t;
        double fd = (law.h(t + dt) - law.h(t - dt)) / (2.0 * dt);
        double hp = law.hprime(t);
        if (std::abs(fd - hp) > 1e-5 * (1.0 + std::abs(hp))) {
            std::ostringstream os;
            os << "derivative: h'(" << t << ") = " << hp << " vs finite difference " << fd;
            fail(os.str());
            break;
        }
    }
    // blow-up at 0+: h(1e-8) must dwarf h(1)
    if (!(law.h(1e-8) > law.h(1.0) + 1e6 * 1e-6)) fail("blow-up: h(1e-8) not large vs h(1)");
    // linear growth at infinity
    for (double t : {1e2, 1e4, 1e6}) {
        if (law.h(t) / t < 1e-8) {
            std::ostringstream os;
            os << "growth: h(" << t << ")/" << t << " below proxy threshold";
            fail(os.str());
            break;
        }
    }
    return rep;
}

double CofactorTerm::from_singular_values(double s1, double s2, double s3) const {
    if (family == Family::zero) return 0.0;
    double n = std::sqrt(s1 * s1 + s2 * s2 + s3 * s3);
    return c * std::pow(n, m);
}

double CofactorTerm::operator()(const Mat3 &a) const {
    if (family == Family::zero) return 0.0;
    return c * std::pow(norm(a), m);
}

double energy_density(const Material2D &mat, const Mat2 &f) {
    double d = det(f);
    if (d <= 0.0) return kInf;
    return std::pow(norm2(f), 0.5 * mat.q) + mat.law.h(d);
}

double energy_density(const Material3D &mat, const Mat3 &f) {
    double d = det(f);
    if (d <= 0.0) return kInf;
    double n2 = norm2(f);
    return std::pow(n2, 0.5 * mat.q) + mat.gamma * n2 + mat.z(cof(f)) + mat.law.h(d);
}

double reference_energy_2d(const Material2D &mat, double lambda) {
    return energy_density(mat, Mat2::scaled_identity(lambda));
}

double reference_energy_3d(const Material3D &mat, double lambda) {
    return energy_density(mat, Mat3::scaled_identity(lambda));
}

namespace {

VolumetricLaw law_from_config(const KeyValueFile &kv) {
    std::string fam = kv.get_string("h.family");
    if (fam == "power_log") {
        double a = kv.get_double("h.params.a");
        double p = kv.get_double("h.params.p");
        double b = kv.get_double("h.params.b");
        double r = kv.get_double("h.params.r");
        if (a <= 0 || b <= 0 || r <= 0 || p < 1)
            throw config_error("power_log requires a,b,r > 0 and p >= 1");
        return VolumetricLaw::power_log(a, p, b, r);
    }
    if (fam == "quad_log") {
        double a = kv.get_double("h.params.a");
        double b = kv.get_double("h.params.b");
        if (a <= 0 || b <= 0) throw config_error("quad_log requires a,b > 0");
        return VolumetricLaw::quad_log(a, b);
    }
    throw config_error("h.family must be power_log or quad_log, got: " + fam);
}

}  // namespace

MaterialConfig parse_material(const std::string &text) {
    KeyValueFile kv = KeyValueFile::parse(text);
    kv.require_known({"dim", "q", "gamma", "h.family", "Z.family"},
                     {"h.params.", "Z.params."});
    MaterialConfig cfg;
    cfg.dim = kv.get_int("dim");
    if (cfg.dim != 2 && cfg.dim != 3) throw config_error("dim must be 2 or 3");
    double q = kv.get_double("q");
    VolumetricLaw law = law_from_config(kv);
    if (cfg.dim == 2) {
        if (!(q > 1.0 && q < 2.0)) throw config_error("2D requires q in (1,2)");
        cfg.mat2.q = q;
        cfg.mat2.law = law;
    } else {
        if (!(q > 2.0 && q < 3.0)) throw config_error("3D requires q in (2,3)");
        cfg.mat3.q = q;
        cfg.mat3.gamma = kv.get_double("gamma");
        if (cfg.mat3.gamma <= 0.0) throw config_error("gamma must be > 0");
        cfg.mat3.law = law;
        std::string zfam = kv.get_string_or("Z.family", "zero");
        if (zfam == "zero") {
            cfg.mat3.z.family = CofactorTerm::Family::zero;
        } else if (zfam == "power_of_norm") {
            cfg.mat3.z.family = CofactorTerm::Family::power_of_norm;
            cfg.mat3.z.c = kv.get_double("Z.params.c");
            cfg.mat3.z.m = kv.get_double("Z.params.m");
            if (cfg.mat3.z.c < 0 || cfg.mat3.z.m < 1)
                throw config_error("power_of_norm requires c >= 0, m >= 1");
        } else {
            throw config_error("Z.family must be zero or power_of_norm, got: " + zfam);
        }
    }
    return cfg;
}

MaterialConfig load_material(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open material file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_material(ss.str());
}

Material2D reference_material_2d() {
    Material2D m;
    m.q = 1.5;
    m.law = VolumetricLaw::quad_log(1.0, 2.0);
    return m;
}

Material3D reference_material_3d() {
    Material3D m;
    m.q = 2.5;
    m.gamma = 1.0;
    m.law = VolumetricLaw::quad_log(1.0, 2.0);
    return m;
}

}  // namespace qcload
