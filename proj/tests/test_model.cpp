#include <doctest.h>

#include <cmath>

#include "stoplab/errors.hpp"
#include "stoplab/model.hpp"

using namespace stoplab;

namespace {
DiffusionModel simple_model(double m0, double m1, double s, ModelParams p = {}) {
    return DiffusionModel(Expr::constant(m0), Expr::constant(m1), Expr::constant(s), p);
}
}  // namespace

TEST_CASE("rho: signal-to-noise ratio") {
    CHECK(simple_model(0, 1, 1).rho(0.0) == doctest::Approx(1.0));
    CHECK(simple_model(1, 0, 2).rho(5.0) == doctest::Approx(-0.5));
    // mu1 = sigma^2 = 2 lambda (1 + e^{-x}) has rho = sigma, so rho(0) = sqrt(4 lambda).
    const auto& trap = catalog_entry("paper-trap").model;
    CHECK(trap.rho(0.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_THROWS_AS(trap.rho(100.0), DomainError);
}

TEST_CASE("F: integrated signal-to-noise against closed forms") {
    const auto& trap = catalog_entry("paper-trap").model;
    CHECK(trap.F(0.0) == 0.0);
    CHECK(trap.F(2.5) == doctest::Approx(2.5).epsilon(1e-12));
    const auto& cr = catalog_entry("const-rho").model;
    CHECK(cr.F(3.0) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(cr.F(0.0) == 0.0);
}

TEST_CASE("F' matches the integrand rho/sigma") {
    for (const char* name : {"paper-trap", "mono-rho-tanh", "drifted-trap"}) {
        const auto& m = catalog_entry(name).model;
        const double h = 1e-5;
        for (double x = m.x_min() + 0.5; x < m.x_max() - 0.5; x += 0.7) {
            const double fd = (m.F(x + h) - m.F(x - h)) / (2 * h);
            const double exact = m.rho(x) / m.sigma(x);
            CHECK(fd == doctest::Approx(exact).epsilon(1e-6));
        }
    }
}

TEST_CASE("canonical coefficients f and g") {
    const auto& trap = catalog_entry("paper-trap").model;
    CHECK(trap.f_coef(0.0) == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(trap.g_coef(0.0) == doctest::Approx(1.0).epsilon(1e-12));

    const auto& cr = catalog_entry("const-rho").model;
    CHECK(cr.f_coef(0.0) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(cr.g_coef(0.0) == doctest::Approx(1.0).epsilon(1e-12));

    for (const char* name : {"const-rho", "paper-trap", "mono-rho-tanh", "mono-rho-dec-mirror"}) {
        const auto& m = catalog_entry(name).model;
        for (double x = m.x_min(); x <= m.x_max(); x += 0.25) CHECK(m.g_coef(x) > 0.0);
    }
}

TEST_CASE("canonical drift a = f - e^u g") {
    const auto& trap = catalog_entry("paper-trap").model;
    CHECK(trap.canonical_drift(0.0, 0.7) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(trap.canonical_drift(1.0, 0.0) == doctest::Approx(1.0 - std::exp(1.0)).epsilon(1e-11));
    const auto& cr = catalog_entry("const-rho").model;
    CHECK(cr.canonical_drift(0.0, 0.0) == doctest::Approx(-1.5).epsilon(1e-12));
}

TEST_CASE("canonical drift x-derivatives via jets") {
    // paper-trap: a(u, x) = lambda e^{-x} (1 - e^u); every x-derivative flips sign.
    const auto& trap = catalog_entry("paper-trap").model;
    const double u = 0.5;
    const auto d = trap.canonical_drift_x_derivatives(u, 0.3, 4);
    const double base = std::exp(-0.3) * (1.0 - std::exp(u));
    for (std::size_t n = 0; n <= 4; ++n) {
        const double expect = ((n % 2) ? -1.0 : 1.0) * base;
        CHECK(d[n] == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("posterior coordinate maps") {
    CHECK(phi_from_pi(0.0) == 0.0);
    CHECK(phi_from_pi(0.5) == doctest::Approx(1.0));
    CHECK(pi_from_phi(3.0) == doctest::Approx(0.75));
    CHECK_THROWS_AS(phi_from_pi(1.0), DomainError);
    // Round-trip identity.  Rounding pi near 1 costs (1 + phi) * eps in
    // relative terms, so the achievable tolerance grows with phi.
    for (double phi = 0.0; phi < 1e6; phi = phi * 3 + 0.1) {
        const double tol = std::max(1e-12, 4.0 * (1.0 + phi) * 2.3e-16);
        CHECK(phi_from_pi(pi_from_phi(phi)) == doctest::Approx(phi).epsilon(tol));
    }
    for (double phi = 0.0; phi < 1e3; phi = phi * 2 + 0.05)
        CHECK(phi_from_pi(pi_from_phi(phi)) == doctest::Approx(phi).epsilon(1e-12));
}

TEST_CASE("full value from hat value") {
    const auto& m = catalog_entry("const-rho").model;
    CHECK(full_value(Mode::Detection, 0.0, 0.0, m) == doctest::Approx(1.0));
    CHECK(full_value(Mode::Testing, 0.5, 0.4, m) == doctest::Approx(0.2));
    ModelParams p;
    p.cost_c = 2.0;
    const auto m2 = m.with_params(p);
    CHECK(full_value(Mode::Detection, 0.5, -0.5, m2) == doctest::Approx(0.0));
}

TEST_CASE("scale transform zeroes the null drift and preserves rho") {
    // mu0 = 1, mu1 = 2, sigma = 1: S'(x) = e^{-2x}, rho = 1 everywhere.
    ModelParams p;
    p.x_min = -2.0;
    p.x_max = 2.0;
    DiffusionModel m(Expr::constant(1.0), Expr::constant(2.0), Expr::constant(1.0), p);
    CHECK(scale_function(m, 1.0) == doctest::Approx((1 - std::exp(-2.0)) / 2).epsilon(1e-10));

    DiffusionModel t = scale_transform(m);
    double prev_s = -1e300;
    for (double x = -1.9; x <= 1.9; x += 0.37) {
        const double s = scale_function(m, x);
        CHECK(s > prev_s);  // S strictly increasing
        prev_s = s;
        CHECK(t.mu0(s) == 0.0);
        CHECK(t.rho(s) == doctest::Approx(m.rho(x)).epsilon(1e-8));
    }

    // mu0 == 0 keeps the model unchanged (identity scale).
    const auto& cr = catalog_entry("const-rho").model;
    DiffusionModel tcr = scale_transform(cr);
    for (double x = -7.5; x <= 7.5; x += 1.7) {
        CHECK(tcr.rho(x) == doctest::Approx(cr.rho(x)).epsilon(1e-10));
        CHECK(tcr.sigma(x) == doctest::Approx(cr.sigma(x)).epsilon(1e-10));
        CHECK(scale_function(cr, x) == doctest::Approx(x).epsilon(1e-12));
    }
}

TEST_CASE("transformed-model jets agree with finite differences") {
    // mu0 = x gives Q = x^2 and a genuinely curved transformed sigma.
    ModelParams p;
    p.x_min = -2.0;
    p.x_max = 2.0;
    DiffusionModel m(Expr::poly({0.0, 1.0}), Expr::poly({2.0, 1.0}), Expr::constant(1.0), p);
    DiffusionModel t = scale_transform(m);
    const double s = scale_function(m, 0.8);
    const double h = 1e-4;
    const Jet j = t.sigma_jet(s, 2);
    CHECK(j.derivative(1) ==
          doctest::Approx((t.sigma(s + h) - t.sigma(s - h)) / (2 * h)).epsilon(1e-6));
    CHECK(j.derivative(2) ==
          doctest::Approx((t.sigma(s + h) - 2 * t.sigma(s) + t.sigma(s - h)) / (h * h))
              .epsilon(1e-4));
}

TEST_CASE("model catalog traits are consistent with sampled coefficients") {
    for (const auto& e : model_catalog()) {
        const auto& m = e.model;
        const double mid = 0.5 * (m.x_min() + m.x_max());
        const bool gt = m.mu1(mid) > m.mu0(mid);
        CHECK(gt == e.expected_traits.mu1_gt_mu0);
        // rho-sign constancy across the domain
        const double sign0 = m.rho(m.x_min()) > 0 ? 1.0 : -1.0;
        for (double x = m.x_min(); x <= m.x_max(); x += (m.x_max() - m.x_min()) / 64)
            CHECK(m.rho(x) * sign0 > 0.0);
    }
}

TEST_CASE("model json: builtins, overrides, full specs, and errors") {
    auto m = model_from_json({{"builtin", "mono-rho-tanh"}, {"lambda", 2.5}});
    CHECK(m.lambda() == doctest::Approx(2.5));
    CHECK(m.rho(0.0) == doctest::Approx(1.0));

    nlohmann::json full = {
        {"mu0", 0.0},
        {"mu1", {{"kind", "poly"}, {"coeffs", {1.0}}}},
        {"sigma", {{"kind", "poly"}, {"coeffs", {1.0}}}},
        {"cost_a", 2.0},
        {"x_domain", {-3.0, 3.0}},
    };
    auto m2 = model_from_json(full);
    CHECK(m2.cost_a() == doctest::Approx(2.0));
    CHECK(m2.x_max() == doctest::Approx(3.0));

    CHECK_THROWS_AS(model_from_json({{"builtin", "nope"}}), ConfigError);
    CHECK_THROWS_AS(model_from_json({{"mu0", 0.0}}), ConfigError);
    // sigma must be positive
    nlohmann::json bad = full;
    bad["sigma"] = {{"kind", "poly"}, {"coeffs", {0.0, 1.0}}};
    CHECK_THROWS_AS(model_from_json(bad), ConfigError);
}

TEST_CASE("mirror transform flips drift order and keeps sigma") {
    const auto& m = catalog_entry("mono-rho-tanh").model;
    DiffusionModel mm = mirror_transform(m);
    for (double x = -3.0; x <= 3.0; x += 0.7) {
        CHECK(mm.mu1(x) == doctest::Approx(-m.mu1(-x)).epsilon(1e-12));
        CHECK(mm.sigma(x) == doctest::Approx(m.sigma(-x)).epsilon(1e-12));
        CHECK(mm.rho(x) == doctest::Approx(-m.rho(-x)).epsilon(1e-12));
    }
}
