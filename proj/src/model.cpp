#include "stoplab/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>

#include "stoplab/errors.hpp"

namespace stoplab {

std::string mode_name(Mode m) {
    switch (m) {
        case Mode::Testing: return "testing";
        case Mode::TestingTimeChanged: return "testing-timechanged";
        case Mode::Detection: return "detection";
    }
    return "?";
}

Mode mode_from_name(const std::string& s) {
    if (s == "testing") return Mode::Testing;
    if (s == "testing-timechanged" || s == "testing-tc") return Mode::TestingTimeChanged;
    if (s == "detection") return Mode::Detection;
    throw ConfigError("unknown mode '" + s + "'");
}

// ---------------------------------------------------------------------------
// Coefficient backends
// ---------------------------------------------------------------------------

namespace {

class ExprBackend final : public CoeffBackend {
public:
    ExprBackend(Expr mu0, Expr mu1, Expr sigma)
        : mu0_(std::move(mu0)), mu1_(std::move(mu1)), sigma_(std::move(sigma)) {}

    double value(Which w, double x) const override { return pick(w)(x); }
    Jet jet(Which w, double x, std::size_t order) const override {
        return pick(w).jet(x, order);
    }
    std::size_t max_order() const override { return 64; }
    nlohmann::json describe() const override {
        return {{"mu0", mu0_.to_json()}, {"mu1", mu1_.to_json()}, {"sigma", sigma_.to_json()}};
    }

    const Expr& expr(Which w) const { return pick(w); }

private:
    const Expr& pick(Which w) const {
        return w == Mu0 ? mu0_ : w == Mu1 ? mu1_ : sigma_;
    }
    Expr mu0_, mu1_, sigma_;
};

// User-supplied callables; derivatives by central differences, order <= 2.
class FunctionBackend final : public CoeffBackend {
public:
    FunctionBackend(std::function<double(double)> mu0, std::function<double(double)> mu1,
                    std::function<double(double)> sigma)
        : fns_{std::move(mu0), std::move(mu1), std::move(sigma)} {}

    double value(Which w, double x) const override { return fns_[w](x); }

    Jet jet(Which w, double x, std::size_t order) const override {
        if (order > max_order())
            throw CapabilityError("finite-difference coefficients support derivatives up to "
                                  "order 2; requested order " + std::to_string(order));
        Jet j(order);
        const auto& f = fns_[w];
        j.coeff_ref(0) = f(x);
        if (order >= 1) {
            const double h = fd_step(x);
            const double fp = f(x + h), fm = f(x - h);
            j.coeff_ref(1) = (fp - fm) / (2.0 * h);
            if (order >= 2) j.coeff_ref(2) = (fp - 2.0 * j.coeff(0) + fm) / (2.0 * h * h);
        }
        return j;
    }
    std::size_t max_order() const override { return 2; }
    nlohmann::json describe() const override { return {{"kind", "opaque-callable"}}; }

    static double fd_step(double x) {
        return std::max(1.0, std::abs(x)) * std::cbrt(std::numeric_limits<double>::epsilon());
    }

private:
    std::function<double(double)> fns_[3];
};

// Cumulative quadrature cache: values of int_0^x g on a dense uniform grid,
// evaluated between nodes with cubic Hermite using the exact derivative g.
class CumulativeIntegral {
public:
    CumulativeIntegral() = default;

    CumulativeIntegral(std::function<double(double)> g, double lo, double hi, std::size_t n_cells,
                       double abs_tol) {
        lo_ = lo;
        h_ = (hi - lo) / static_cast<double>(n_cells);
        vals_.resize(n_cells + 1);
        slopes_.resize(n_cells + 1);
        vals_[0] = 0.0;
        slopes_[0] = g(lo);
        const double seg_tol = abs_tol / static_cast<double>(n_cells);
        for (std::size_t i = 0; i < n_cells; ++i) {
            const double a = lo + h_ * static_cast<double>(i);
            const double b = a + h_;
            slopes_[i + 1] = g(b);
            vals_[i + 1] = vals_[i] + adaptive_simpson(g, a, b, seg_tol);
        }
        // Anchor so the cumulative vanishes at x = 0.
        offset_ = 0.0;
        offset_ = raw(0.0);
    }

    double operator()(double x) const { return raw(x) - offset_; }
    double slope(double x) const {
        const auto [i, t] = locate(x);
        (void)t;
        return slopes_[i];  // only used at nodes by callers
    }
    double lo() const { return lo_; }
    double hi() const { return lo_ + h_ * static_cast<double>(vals_.size() - 1); }

    static double adaptive_simpson(const std::function<double(double)>& g, double a, double b,
                                   double tol) {
        const double m = 0.5 * (a + b);
        const double fa = g(a), fm = g(m), fb = g(b);
        const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        return recurse(g, a, b, fa, fm, fb, whole, tol, 24);
    }

private:
    static double recurse(const std::function<double(double)>& g, double a, double b, double fa,
                          double fm, double fb, double whole, double tol, int depth) {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        const double flm = g(lm), frm = g(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double delta = left + right - whole;
        if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
        return recurse(g, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
               recurse(g, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }

    std::pair<std::size_t, double> locate(double x) const {
        double u = (x - lo_) / h_;
        double fi = std::floor(u);
        auto i = static_cast<std::ptrdiff_t>(fi);
        if (i < 0) i = 0;
        if (i > static_cast<std::ptrdiff_t>(vals_.size()) - 2)
            i = static_cast<std::ptrdiff_t>(vals_.size()) - 2;
        return {static_cast<std::size_t>(i), u - static_cast<double>(i)};
    }

    double raw(double x) const {
        const auto [i, t] = locate(x);
        const double v0 = vals_[i], v1 = vals_[i + 1];
        const double d0 = slopes_[i] * h_, d1 = slopes_[i + 1] * h_;
        const double t2 = t * t, t3 = t2 * t;
        return (2.0 * t3 - 3.0 * t2 + 1.0) * v0 + (t3 - 2.0 * t2 + t) * d0 +
               (-2.0 * t3 + 3.0 * t2) * v1 + (t3 - t2) * d1;
    }

    double lo_ = 0.0, h_ = 1.0, offset_ = 0.0;
    std::vector<double> vals_, slopes_;
};

Jet integral_jet(double value_at_x, const Jet& integrand_jet) {
    // Jet of I(x) = value + int g given the jet of g: coeff_k = g_{k-1} / k.
    Jet out(integrand_jet.order() + 1);
    out.coeff_ref(0) = value_at_x;
    for (std::size_t k = 1; k <= out.order(); ++k)
        out.coeff_ref(k) = integrand_jet.coeff(k - 1) / static_cast<double>(k);
    return out;
}

// Observed process replaced by S(X); the null drift vanishes.
class ScaleTransformBackend final : public CoeffBackend {
public:
    ScaleTransformBackend(std::shared_ptr<const CoeffBackend> base, ModelParams base_params)
        : base_(std::move(base)) {
        auto q_integrand = [this](double x) {
            const double s = base_->value(Sigma, x);
            return 2.0 * base_->value(Mu0, x) / (s * s);
        };
        q_ = CumulativeIntegral(q_integrand, base_params.x_min, base_params.x_max, 4096, 1e-11);
        auto s_integrand = [this](double x) { return std::exp(-q_(x)); };
        s_ = CumulativeIntegral(s_integrand, base_params.x_min, base_params.x_max, 4096, 1e-11);
        s_lo_ = s_(base_params.x_min);
        s_hi_ = s_(base_params.x_max);
        x_lo_ = base_params.x_min;
        x_hi_ = base_params.x_max;
    }

    double s_of_x(double x) const { return s_(x); }
    double x_of_s(double s) const {
        // Monotone bisection seed plus Newton polish (S' = e^{-Q} > 0).
        double lo = x_lo_, hi = x_hi_;
        for (int it = 0; it < 60 && hi - lo > 1e-13 * (x_hi_ - x_lo_); ++it) {
            const double mid = 0.5 * (lo + hi);
            (s_(mid) < s ? lo : hi) = mid;
        }
        double x = 0.5 * (lo + hi);
        for (int it = 0; it < 3; ++it) x -= (s_(x) - s) / std::exp(-q_(x));
        return std::clamp(x, x_lo_, x_hi_);
    }
    double domain_lo() const { return s_lo_; }
    double domain_hi() const { return s_hi_; }

    double value(Which w, double s) const override {
        if (w == Mu0) return 0.0;
        const double x = x_of_s(s);
        const double sp = std::exp(-q_(x));
        if (w == Mu1) return (base_->value(Mu1, x) - base_->value(Mu0, x)) * sp;
        return base_->value(Sigma, x) * sp;
    }

    Jet jet(Which w, double s, std::size_t order) const override {
        if (w == Mu0) return Jet::constant(0.0, order);
        const double x = x_of_s(s);
        // S'(x) as a jet from Q' = 2 mu0 / sigma^2.
        const Jet mu0j = base_->jet(Mu0, x, order + 1);
        const Jet sigj = base_->jet(Sigma, x, order + 1);
        const Jet qprime = 2.0 * (mu0j / (sigj * sigj));
        const Jet qj = integral_jet(q_(x), qprime.truncated(order));
        const Jet sprime = exp(-1.0 * qj);  // order `order`
        // h(x) = coefficient * S'(x), as a jet in x.
        Jet h = w == Mu1 ? (base_->jet(Mu1, x, order) - mu0j.truncated(order)) * sprime
                         : sigj.truncated(order) * sprime;
        if (order == 0) return Jet::constant(h.coeff(0), 0);
        // S(x) as a series in (x - x0), then its compositional inverse in
        // (s - s0), then h composed with that inverse.
        Jet s_jet = integral_jet(0.0, sprime.truncated(order > 0 ? order - 1 : 0));
        s_jet = s_jet.truncated(order);
        const Jet inv = invert_series(s_jet);
        return compose(h, inv);
    }

    std::size_t max_order() const override { return base_->max_order(); }
    nlohmann::json describe() const override {
        return {{"kind", "scale-transform"}, {"base", base_->describe()}};
    }

private:
    std::shared_ptr<const CoeffBackend> base_;
    CumulativeIntegral q_, s_;
    double s_lo_ = 0, s_hi_ = 0, x_lo_ = 0, x_hi_ = 0;
};

class MirrorBackend final : public CoeffBackend {
public:
    explicit MirrorBackend(std::shared_ptr<const CoeffBackend> base) : base_(std::move(base)) {}

    double value(Which w, double x) const override {
        const double v = base_->value(w, -x);
        return w == Sigma ? v : -v;
    }
    Jet jet(Which w, double x, std::size_t order) const override {
        Jet b = base_->jet(w, -x, order);
        Jet out(order);
        const double flip = w == Sigma ? 1.0 : -1.0;
        for (std::size_t k = 0; k <= order; ++k) {
            const double sign = (k % 2 == 0) ? 1.0 : -1.0;
            out.coeff_ref(k) = flip * sign * b.coeff(k);
        }
        return out;
    }
    std::size_t max_order() const override { return base_->max_order(); }
    nlohmann::json describe() const override {
        return {{"kind", "mirror"}, {"base", base_->describe()}};
    }

private:
    std::shared_ptr<const CoeffBackend> base_;
};

}  // namespace

// ---------------------------------------------------------------------------
// DiffusionModel
// ---------------------------------------------------------------------------

struct DiffusionModel::FCache {
    CumulativeIntegral integral;
};

DiffusionModel::DiffusionModel(Expr mu0, Expr mu1, Expr sigma, ModelParams params)
    : backend_(std::make_shared<ExprBackend>(std::move(mu0), std::move(mu1), std::move(sigma))),
      params_(params) {
    validate();
    build_f_cache();
}

DiffusionModel::DiffusionModel(std::function<double(double)> mu0,
                               std::function<double(double)> mu1,
                               std::function<double(double)> sigma, ModelParams params)
    : backend_(std::make_shared<FunctionBackend>(std::move(mu0), std::move(mu1), std::move(sigma))),
      params_(params) {
    validate();
    build_f_cache();
}

DiffusionModel::DiffusionModel(std::shared_ptr<const CoeffBackend> backend, ModelParams params,
                               std::shared_ptr<const FCache> cache)
    : backend_(std::move(backend)), params_(params), f_cache_(std::move(cache)) {
    validate();
    if (!f_cache_) build_f_cache();
}

void DiffusionModel::validate() const {
    if (!(params_.x_min < params_.x_max))
        throw ConfigError("x_domain must satisfy x_min < x_max");
    if (!(params_.x_min <= 0.0 && 0.0 <= params_.x_max))
        throw ConfigError("x_domain must contain 0 (F is anchored there)");
    if (!(params_.lambda > 0.0)) throw ConfigError("lambda must be positive");
    if (!(params_.cost_a > 0.0 && params_.cost_b > 0.0 && params_.cost_c > 0.0))
        throw ConfigError("costs a, b, c must be positive");

    const int n = 1001;
    double sign = 0.0;
    const std::size_t jet_order = std::min<std::size_t>(backend_->max_order(), 3);
    for (int i = 0; i < n; ++i) {
        const double x =
            params_.x_min + (params_.x_max - params_.x_min) * static_cast<double>(i) / (n - 1);
        const double s = backend_->value(CoeffBackend::Sigma, x);
        if (!(s > 0.0)) throw ConfigError("sigma must be strictly positive on x_domain");
        // One-signed mu1 - mu0.  The degenerate mu1 == mu0 case is tolerated
        // at construction: path-level closed forms use it, solvers reject it.
        const double d =
            backend_->value(CoeffBackend::Mu1, x) - backend_->value(CoeffBackend::Mu0, x);
        if (sign == 0.0 && d != 0.0) sign = d > 0 ? 1.0 : -1.0;
        if (d * sign < 0.0)
            throw ConfigError("mu1 - mu0 must keep one sign on x_domain");
        if (i % 100 == 0) {
            for (int w = 0; w < 3; ++w) {
                const Jet j = backend_->jet(static_cast<CoeffBackend::Which>(w), x, jet_order);
                for (std::size_t k = 0; k <= jet_order; ++k)
                    if (!std::isfinite(j.coeff(k)))
                        throw ConfigError("coefficient derivatives must be finite on x_domain");
            }
        }
    }
}

void DiffusionModel::build_f_cache() {
    auto cache = std::make_shared<FCache>();
    auto integrand = [this](double x) {
        const double s = backend_->value(CoeffBackend::Sigma, x);
        return (backend_->value(CoeffBackend::Mu1, x) - backend_->value(CoeffBackend::Mu0, x)) /
               (s * s);
    };
    cache->integral =
        CumulativeIntegral(integrand, params_.x_min, params_.x_max, 4096, 1e-10);
    f_cache_ = std::move(cache);
}

double DiffusionModel::mu0(double x) const { return backend_->value(CoeffBackend::Mu0, x); }
double DiffusionModel::mu1(double x) const { return backend_->value(CoeffBackend::Mu1, x); }
double DiffusionModel::sigma(double x) const { return backend_->value(CoeffBackend::Sigma, x); }
Jet DiffusionModel::mu0_jet(double x, std::size_t order) const {
    return backend_->jet(CoeffBackend::Mu0, x, order);
}
Jet DiffusionModel::mu1_jet(double x, std::size_t order) const {
    return backend_->jet(CoeffBackend::Mu1, x, order);
}
Jet DiffusionModel::sigma_jet(double x, std::size_t order) const {
    return backend_->jet(CoeffBackend::Sigma, x, order);
}

void DiffusionModel::require_in_domain(double x, const char* where) const {
    const double slack = 1e-9 * (params_.x_max - params_.x_min);
    if (!(x >= params_.x_min - slack && x <= params_.x_max + slack))
        throw DomainError(std::string(where) + ": x = " + std::to_string(x) +
                          " outside x_domain [" + std::to_string(params_.x_min) + ", " +
                          std::to_string(params_.x_max) + "]");
}

double DiffusionModel::rho(double x) const {
    require_in_domain(x, "rho");
    return (mu1(x) - mu0(x)) / sigma(x);
}

Jet DiffusionModel::rho_jet(double x, std::size_t order) const {
    return (mu1_jet(x, order) - mu0_jet(x, order)) / sigma_jet(x, order);
}

Jet DiffusionModel::rho_over_sigma_jet(double x, std::size_t order) const {
    const Jet s = sigma_jet(x, order);
    return (mu1_jet(x, order) - mu0_jet(x, order)) / (s * s);
}

double DiffusionModel::F(double x) const {
    require_in_domain(x, "F");
    return f_cache_->integral(x);
}

double DiffusionModel::f_coef(double x) const { return f_jet(x, 0).value(); }

double DiffusionModel::g_coef(double x) const {
    require_in_domain(x, "g");
    return params_.lambda * std::exp(-F(x));
}

Jet DiffusionModel::f_jet(double x, std::size_t order) const {
    require_in_domain(x, "f");
    const Jet rs = rho_over_sigma_jet(x, order + 1);  // rho/sigma = (mu1-mu0)/sigma^2
    const Jet rs_prime = rs.derived();
    const Jet sig = sigma_jet(x, order);
    const Jet msum = mu0_jet(x, order) + mu1_jet(x, order);
    Jet f = 0.5 * (sig * sig * rs_prime.truncated(order) + msum * rs.truncated(order));
    f.coeff_ref(0) -= params_.lambda;
    return f;
}

Jet DiffusionModel::g_jet(double x, std::size_t order) const {
    require_in_domain(x, "g");
    const Jet rs = rho_over_sigma_jet(x, order);
    const Jet Fj = integral_jet(F(x), rs).truncated(order);
    return params_.lambda * exp(-1.0 * Fj);
}

double DiffusionModel::canonical_drift(double u, double x) const {
    return f_coef(x) - std::exp(u) * g_coef(x);
}

std::vector<double> DiffusionModel::canonical_drift_x_derivatives(double u, double x,
                                                                  std::size_t order) const {
    if (order + 2 > backend_->max_order())
        throw CapabilityError("model coefficients cannot provide derivative order " +
                              std::to_string(order));
    const Jet fj = f_jet(x, order);
    const Jet gj = g_jet(x, order);
    const double eu = std::exp(u);
    std::vector<double> out(order + 1);
    for (std::size_t k = 0; k <= order; ++k) {
        double fact = 1.0;
        for (std::size_t i = 2; i <= k; ++i) fact *= static_cast<double>(i);
        out[k] = (fj.coeff(k) - eu * gj.coeff(k)) * fact;
    }
    return out;
}

std::size_t DiffusionModel::max_derivative_order() const {
    const std::size_t m = backend_->max_order();
    return m < 2 ? 0 : m - 2;
}

DiffusionModel DiffusionModel::with_lambda(double lambda) const {
    ModelParams p = params_;
    p.lambda = lambda;
    return DiffusionModel(backend_, p, f_cache_);
}

DiffusionModel DiffusionModel::with_params(const ModelParams& p) const {
    const bool same_domain = p.x_min == params_.x_min && p.x_max == params_.x_max;
    return DiffusionModel(backend_, p, same_domain ? f_cache_ : nullptr);
}

nlohmann::json DiffusionModel::describe() const {
    nlohmann::json j = backend_->describe();
    j["lambda"] = params_.lambda;
    j["cost_a"] = params_.cost_a;
    j["cost_b"] = params_.cost_b;
    j["cost_c"] = params_.cost_c;
    j["x_domain"] = {params_.x_min, params_.x_max};
    return j;
}

// ---------------------------------------------------------------------------
// Free functions
// ---------------------------------------------------------------------------

double phi_from_pi(double pi) {
    if (!(pi >= 0.0 && pi < 1.0))
        throw DomainError("phi_from_pi: pi must lie in [0, 1)");
    return pi / (1.0 - pi);
}

double pi_from_phi(double phi) {
    if (!(phi >= 0.0)) throw DomainError("pi_from_phi: phi must be non-negative");
    return phi / (1.0 + phi);
}

double full_value(Mode mode, double pi, double vhat, const DiffusionModel& model) {
    if (!(pi >= 0.0 && pi < 1.0)) throw DomainError("full_value: pi must lie in [0, 1)");
    if (mode == Mode::Detection) return (1.0 - pi) * (1.0 + model.cost_c() * vhat);
    return (1.0 - pi) * vhat;
}

DiffusionModel scale_transform(const DiffusionModel& model) {
    auto backend = std::make_shared<ScaleTransformBackend>(model.backend_, model.params_);
    ModelParams p = model.params_;
    p.x_min = backend->domain_lo();
    p.x_max = backend->domain_hi();
    return DiffusionModel(backend, p, nullptr);
}

double scale_function(const DiffusionModel& model, double x) {
    // S(x) = int_0^x exp(-Q), Q(y) = int_0^y 2 mu0 / sigma^2.  Direct nested
    // quadrature; only used at isolated probe points.
    auto q = [&model](double y) {
        auto integrand = [&model](double z) {
            const double s = model.sigma(z);
            return 2.0 * model.mu0(z) / (s * s);
        };
        if (y == 0.0) return 0.0;
        return y > 0 ? CumulativeIntegral::adaptive_simpson(integrand, 0.0, y, 1e-12)
                     : -CumulativeIntegral::adaptive_simpson(integrand, y, 0.0, 1e-12);
    };
    auto sprime = [&q](double y) { return std::exp(-q(y)); };
    if (x == 0.0) return 0.0;
    return x > 0 ? CumulativeIntegral::adaptive_simpson(sprime, 0.0, x, 1e-11)
                 : -CumulativeIntegral::adaptive_simpson(sprime, x, 0.0, 1e-11);
}

DiffusionModel mirror_transform(const DiffusionModel& model) {
    auto backend = std::make_shared<MirrorBackend>(model.backend_);
    ModelParams p = model.params_;
    p.x_min = -model.params_.x_max;
    p.x_max = -model.params_.x_min;
    return DiffusionModel(backend, p, nullptr);
}

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

namespace {

Expr expr_x() { return Expr::poly({0.0, 1.0}); }

ModelCatalogEntry make_entry(const std::string& name, Expr m0, Expr m1, Expr s, ModelParams p,
                             ModelTraits t) {
    return ModelCatalogEntry{name, DiffusionModel(std::move(m0), std::move(m1), std::move(s), p),
                             t};
}

}  // namespace

const std::vector<ModelCatalogEntry>& model_catalog() {
    static const std::vector<ModelCatalogEntry> catalog = [] {
        std::vector<ModelCatalogEntry> v;
        ModelParams wide;  // defaults: lambda 1, a=b=4, c=1, [-8, 8]
        ModelParams narrow = wide;
        narrow.x_min = -4.0;
        narrow.x_max = 4.0;

        // Constant signal-to-noise ratio; the 1-D reference case.
        v.push_back(make_entry("const-rho", Expr::constant(0.0), Expr::constant(1.0),
                               Expr::constant(1.0), wide,
                               ModelTraits{RhoDirection::Increasing, true, true, false}));

        // mu1 = sigma^2 = 2 lambda (1 + e^{-x}): F(x) = x and the curve
        // kappa e^x is invariant for (Phi, X) with kappa = 1.
        {
            Expr two_lam_1pex =
                Expr::sum({Expr::constant(2.0), Expr::scale(2.0, Expr::exp(Expr::poly({0.0, -1.0})))});
            v.push_back(make_entry("paper-trap", Expr::constant(0.0), two_lam_1pex,
                                   Expr::sqrt(two_lam_1pex), narrow,
                                   ModelTraits{RhoDirection::Decreasing, false, true, true}));
        }

        // Bounded analytic monotone signal-to-noise ratios.
        v.push_back(make_entry(
            "mono-rho-tanh", Expr::constant(0.0),
            Expr::sum({Expr::constant(1.0), Expr::scale(0.5, Expr::tanh(expr_x()))}),
            Expr::constant(1.0), wide, ModelTraits{RhoDirection::Increasing, false, true, false}));
        v.push_back(make_entry(
            "mono-rho-dec", Expr::constant(0.0),
            Expr::sum({Expr::constant(1.0), Expr::scale(-0.5, Expr::tanh(expr_x()))}),
            Expr::constant(1.0), wide, ModelTraits{RhoDirection::Decreasing, false, true, false}));

        // Remark-3 mirrors: mu_i(x) -> -mu_i(-x), sigma(x) -> sigma(-x).
        // They flip mu-order while rho stays monotone the same way.
        {
            Expr m1 = Expr::sum({Expr::constant(1.0), Expr::scale(0.5, Expr::tanh(expr_x()))});
            v.push_back(make_entry("mono-rho-tanh-mirror", Expr::constant(0.0),
                                   Expr::scale(-1.0, m1.reflected()), Expr::constant(1.0), wide,
                                   ModelTraits{RhoDirection::Increasing, false, false, false}));
            Expr m1d = Expr::sum({Expr::constant(1.0), Expr::scale(-0.5, Expr::tanh(expr_x()))});
            v.push_back(make_entry("mono-rho-dec-mirror", Expr::constant(0.0),
                                   Expr::scale(-1.0, m1d.reflected()), Expr::constant(1.0), wide,
                                   ModelTraits{RhoDirection::Decreasing, false, false, false}));
        }

        // Trap with a non-zero null drift (exercises the scale transform).
        {
            Expr e = Expr::scale(2.0, Expr::exp(Expr::poly({0.0, -1.0})));
            v.push_back(make_entry("drifted-trap", Expr::constant(0.2),
                                   Expr::sum({Expr::constant(1.8), e}),
                                   Expr::sqrt(Expr::sum({Expr::constant(1.6), e})), narrow,
                                   ModelTraits{RhoDirection::Decreasing, false, true, true}));
        }
        return v;
    }();
    return catalog;
}

const ModelCatalogEntry& catalog_entry(const std::string& name) {
    for (const auto& e : model_catalog())
        if (e.name == name) return e;
    throw ConfigError("no built-in model named '" + name + "'");
}

DiffusionModel model_from_json(const nlohmann::json& j) {
    ModelParams p;
    auto apply_params = [&p](const nlohmann::json& src) {
        if (src.contains("lambda")) p.lambda = src.at("lambda").get<double>();
        if (src.contains("cost_a")) p.cost_a = src.at("cost_a").get<double>();
        if (src.contains("cost_b")) p.cost_b = src.at("cost_b").get<double>();
        if (src.contains("cost_c")) p.cost_c = src.at("cost_c").get<double>();
        if (src.contains("x_domain")) {
            auto d = src.at("x_domain").get<std::vector<double>>();
            if (d.size() != 2) throw ConfigError("x_domain must be [lo, hi]");
            p.x_min = d[0];
            p.x_max = d[1];
        }
    };
    if (j.contains("builtin")) {
        const auto& base = catalog_entry(j.at("builtin").get<std::string>());
        p = base.model.params();
        apply_params(j);
        return base.model.with_params(p);
    }
    for (const char* key : {"mu0", "mu1", "sigma"})
        if (!j.contains(key))
            throw ConfigError(std::string("model file must define '") + key +
                              "' (or reference a 'builtin')");
    apply_params(j);
    return DiffusionModel(Expr::from_json(j.at("mu0")), Expr::from_json(j.at("mu1")),
                          Expr::from_json(j.at("sigma")), p);
}

DiffusionModel load_model(const std::string& name_or_path) {
    for (const auto& e : model_catalog())
        if (e.name == name_or_path) return e.model;
    std::ifstream in(name_or_path);
    if (!in.good()) {
        if (const char* cat = std::getenv("STOPLAB_CATALOG")) {
            const std::string alt = std::string(cat) + "/" + name_or_path + ".json";
            in.open(alt);
        }
    }
    if (!in.good())
        throw ConfigError("cannot resolve model '" + name_or_path +
                          "': not a built-in, file, or catalog entry");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("malformed model file '" + name_or_path + "': " + e.what());
    }
    return model_from_json(j);
}

}  // namespace stoplab
