#include <doctest.h>

#include <cmath>

#include "stoplab/expr.hpp"
#include "stoplab/jet.hpp"

using namespace stoplab;

TEST_CASE("jet arithmetic reproduces closed-form derivatives") {
    // h(x) = exp(x^2) at x = 0.7: h' = 2x h, h'' = (2 + 4x^2) h.
    const double x = 0.7;
    Jet xs = Jet::variable(x, 4);
    Jet h = exp(xs * xs);
    const double hv = std::exp(x * x);
    CHECK(h.value() == doctest::Approx(hv).epsilon(1e-14));
    CHECK(h.derivative(1) == doctest::Approx(2 * x * hv).epsilon(1e-13));
    CHECK(h.derivative(2) == doctest::Approx((2 + 4 * x * x) * hv).epsilon(1e-13));

    Jet q = h / (Jet::constant(1.0, 4) + xs);
    const double qv = hv / (1 + x);
    CHECK(q.value() == doctest::Approx(qv).epsilon(1e-14));
    CHECK(q.derivative(1) ==
          doctest::Approx(2 * x * hv / (1 + x) - hv / ((1 + x) * (1 + x))).epsilon(1e-13));
}

TEST_CASE("jet tanh and sqrt recurrences") {
    const double x = -0.3;
    Jet t = tanh(Jet::variable(x, 5));
    const double tv = std::tanh(x);
    const double sech2 = 1 - tv * tv;
    CHECK(t.value() == doctest::Approx(tv).epsilon(1e-14));
    CHECK(t.derivative(1) == doctest::Approx(sech2).epsilon(1e-13));
    CHECK(t.derivative(2) == doctest::Approx(-2 * tv * sech2).epsilon(1e-12));
    CHECK(t.derivative(3) ==
          doctest::Approx(-2 * sech2 * (sech2 - 2 * tv * tv)).epsilon(1e-11));

    Jet s = sqrt(Jet::constant(4.0, 3) + Jet::variable(0.0, 3));
    CHECK(s.value() == doctest::Approx(2.0));
    CHECK(s.derivative(1) == doctest::Approx(0.25));
    CHECK(s.derivative(2) == doctest::Approx(-1.0 / 32.0));
}

TEST_CASE("series composition and inversion") {
    // y(t) = e^t - 1; inverse is log(1 + s).
    Jet y = exp(Jet::variable(0.0, 6));
    y.coeff_ref(0) = 0.0;
    Jet inv = invert_series(y);
    // log(1+s) = s - s^2/2 + s^3/3 - ...
    for (std::size_t k = 1; k <= 6; ++k) {
        const double expect = ((k % 2) ? 1.0 : -1.0) / static_cast<double>(k);
        CHECK(inv.coeff(k) == doctest::Approx(expect).epsilon(1e-11));
    }
}

TEST_CASE("expression grammar evaluates and differentiates") {
    // mu1 of the tanh model: 1 + 0.5 tanh(x).
    Expr e = Expr::sum({Expr::constant(1.0), Expr::scale(0.5, Expr::tanh(Expr::poly({0.0, 1.0})))});
    CHECK(e(0.0) == doctest::Approx(1.0));
    CHECK(e(100.0) == doctest::Approx(1.5));
    Jet j = e.jet(0.4, 2);
    const double t = std::tanh(0.4);
    CHECK(j.value() == doctest::Approx(1 + 0.5 * t));
    CHECK(j.derivative(1) == doctest::Approx(0.5 * (1 - t * t)));
}

TEST_CASE("expression reflection gives f(-x)") {
    Expr e = Expr::prod({Expr::poly({0.0, 1.0, 2.0}), Expr::exp(Expr::poly({0.0, -1.0}))});
    Expr r = e.reflected();
    for (double x : {-1.3, 0.0, 0.8, 2.5}) CHECK(r(x) == doctest::Approx(e(-x)).epsilon(1e-14));
}

TEST_CASE("expression json round trip") {
    Expr e = Expr::sqrt(
        Expr::sum({Expr::constant(1.6), Expr::scale(2.0, Expr::exp(Expr::poly({0.0, -1.0})))}));
    Expr back = Expr::from_json(e.to_json());
    for (double x : {-2.0, -0.5, 0.0, 1.0, 3.0})
        CHECK(back(x) == doctest::Approx(e(x)).epsilon(1e-15));
}
