#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace stoplab {

// Truncated Taylor series of a univariate function at a point:
// c[k] = f^(k)(x0) / k!.  Arithmetic on jets propagates derivatives of any
// order through composite expressions (Taylor-mode differentiation).
class Jet {
public:
    Jet() : c_(1, 0.0) {}
    explicit Jet(std::size_t order) : c_(order + 1, 0.0) {}

    static Jet constant(double v, std::size_t order) {
        Jet j(order);
        j.c_[0] = v;
        return j;
    }
    // The identity function x at x0: value x0, slope 1.
    static Jet variable(double x0, std::size_t order) {
        Jet j(order);
        j.c_[0] = x0;
        if (order >= 1) j.c_[1] = 1.0;
        return j;
    }

    std::size_t order() const { return c_.size() - 1; }
    double value() const { return c_[0]; }
    double coeff(std::size_t k) const { return k < c_.size() ? c_[k] : 0.0; }
    double& coeff_ref(std::size_t k) { return c_[k]; }

    // k-th derivative (coefficient scaled back by k!).
    double derivative(std::size_t k) const {
        double fact = 1.0;
        for (std::size_t i = 2; i <= k; ++i) fact *= static_cast<double>(i);
        return coeff(k) * fact;
    }

    // Jet of f' truncated one order lower.
    Jet derived() const {
        std::size_t n = order();
        Jet d(n == 0 ? 0 : n - 1);
        for (std::size_t k = 1; k <= n; ++k) d.c_[k - 1] = c_[k] * static_cast<double>(k);
        return d;
    }

    Jet truncated(std::size_t new_order) const {
        Jet r(new_order);
        for (std::size_t k = 0; k <= new_order && k < c_.size(); ++k) r.c_[k] = c_[k];
        return r;
    }

    friend Jet operator+(const Jet& a, const Jet& b) {
        Jet r(std::max(a.order(), b.order()));
        for (std::size_t k = 0; k < r.c_.size(); ++k) r.c_[k] = a.coeff(k) + b.coeff(k);
        return r;
    }
    friend Jet operator-(const Jet& a, const Jet& b) {
        Jet r(std::max(a.order(), b.order()));
        for (std::size_t k = 0; k < r.c_.size(); ++k) r.c_[k] = a.coeff(k) - b.coeff(k);
        return r;
    }
    friend Jet operator*(const Jet& a, const Jet& b) {
        Jet r(std::max(a.order(), b.order()));
        for (std::size_t k = 0; k < r.c_.size(); ++k) {
            double s = 0.0;
            for (std::size_t j = 0; j <= k; ++j) s += a.coeff(j) * b.coeff(k - j);
            r.c_[k] = s;
        }
        return r;
    }
    friend Jet operator*(double s, const Jet& a) {
        Jet r = a;
        for (auto& c : r.c_) c *= s;
        return r;
    }
    friend Jet operator/(const Jet& a, const Jet& b) {
        assert(b.coeff(0) != 0.0);
        Jet r(std::max(a.order(), b.order()));
        for (std::size_t k = 0; k < r.c_.size(); ++k) {
            double s = a.coeff(k);
            for (std::size_t j = 0; j < k; ++j) s -= r.c_[j] * b.coeff(k - j);
            r.c_[k] = s / b.coeff(0);
        }
        return r;
    }

    friend Jet exp(const Jet& u) {
        Jet w(u.order());
        w.c_[0] = std::exp(u.coeff(0));
        for (std::size_t k = 1; k <= u.order(); ++k) {
            double s = 0.0;
            for (std::size_t j = 1; j <= k; ++j)
                s += static_cast<double>(j) * u.coeff(j) * w.c_[k - j];
            w.c_[k] = s / static_cast<double>(k);
        }
        return w;
    }

    friend Jet sqrt(const Jet& u) {
        assert(u.coeff(0) > 0.0);
        Jet w(u.order());
        w.c_[0] = std::sqrt(u.coeff(0));
        for (std::size_t k = 1; k <= u.order(); ++k) {
            double s = u.coeff(k);
            for (std::size_t j = 1; j < k; ++j) s -= w.c_[j] * w.c_[k - j];
            w.c_[k] = s / (2.0 * w.c_[0]);
        }
        return w;
    }

    // w = tanh(u) via the joint recurrence with v = 1 - w^2 (w' = v u').
    friend Jet tanh(const Jet& u) {
        std::size_t n = u.order();
        Jet w(n), v(n);
        w.c_[0] = std::tanh(u.coeff(0));
        v.c_[0] = 1.0 - w.c_[0] * w.c_[0];
        for (std::size_t k = 1; k <= n; ++k) {
            double s = 0.0;
            for (std::size_t j = 1; j <= k; ++j)
                s += static_cast<double>(j) * u.coeff(j) * v.c_[k - j];
            w.c_[k] = s / static_cast<double>(k);
            double t = 0.0;
            for (std::size_t j = 0; j <= k; ++j) t += w.c_[j] * w.c_[k - j];
            v.c_[k] = -t;
        }
        return w;
    }

    // outer(inner(t)) with inner.coeff(0) == 0 (deviation series), by Horner.
    friend Jet compose(const Jet& outer, const Jet& inner) {
        assert(inner.coeff(0) == 0.0);
        std::size_t n = inner.order();
        Jet r = Jet::constant(outer.coeff(outer.order()), n);
        for (std::size_t k = outer.order(); k-- > 0;) {
            r = r * inner;
            r.c_[0] += outer.coeff(k);
        }
        return r.truncated(n);
    }

    // Compositional inverse of y(t) = y1 t + y2 t^2 + ... (y1 != 0):
    // returns t(s) with y(t(s)) = s, as a series in s with zero constant term.
    friend Jet invert_series(const Jet& y) {
        assert(y.coeff(0) == 0.0 && y.coeff(1) != 0.0);
        std::size_t n = y.order();
        Jet s_id(n);
        s_id.c_[1] = 1.0;
        Jet rem = y;  // y minus its linear part
        rem.c_[1] = 0.0;
        Jet t(n);
        t.c_[1] = 1.0 / y.coeff(1);
        for (std::size_t it = 0; it + 1 < n; ++it) {
            Jet corr = compose(rem, t);
            for (std::size_t k = 0; k <= n; ++k)
                t.c_[k] = (s_id.coeff(k) - corr.coeff(k)) / y.coeff(1);
            t.c_[0] = 0.0;
            t.c_[1] = 1.0 / y.coeff(1);
        }
        return t;
    }

private:
    std::vector<double> c_;
};

// Namespace-scope declarations so the hidden friends are reachable from
// scopes where ADL is suppressed (e.g. inside classes with same-named members).
Jet exp(const Jet& u);
Jet sqrt(const Jet& u);
Jet tanh(const Jet& u);
Jet compose(const Jet& outer, const Jet& inner);
Jet invert_series(const Jet& y);

}  // namespace stoplab
