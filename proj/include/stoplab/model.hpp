#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stoplab/expr.hpp"
#include "stoplab/jet.hpp"

namespace stoplab {

enum class Mode { Testing, TestingTimeChanged, Detection };

std::string mode_name(Mode m);
Mode mode_from_name(const std::string& s);

struct ModelParams {
    double lambda = 1.0;   // exponential rate of the change time (detection)
    double cost_a = 4.0;   // wrong-decision cost, hypothesis 1 (testing)
    double cost_b = 4.0;   // wrong-decision cost, hypothesis 0 (testing)
    double cost_c = 1.0;   // delay cost rate (detection)
    double x_min = -8.0;   // truncation of the observed-process state space
    double x_max = 8.0;
};

// Abstract coefficient backend: (mu0, mu1, sigma) with derivatives.
class CoeffBackend {
public:
    enum Which { Mu0 = 0, Mu1 = 1, Sigma = 2 };
    virtual ~CoeffBackend() = default;
    virtual double value(Which w, double x) const = 0;
    virtual Jet jet(Which w, double x, std::size_t order) const = 0;
    virtual std::size_t max_order() const = 0;
    virtual nlohmann::json describe() const = 0;
};

// One-dimensional diffusion observed under two drift hypotheses.
// Immutable after construction; all queries are pure.
class DiffusionModel {
public:
    DiffusionModel(Expr mu0, Expr mu1, Expr sigma, ModelParams params);
    DiffusionModel(std::function<double(double)> mu0, std::function<double(double)> mu1,
                   std::function<double(double)> sigma, ModelParams params);

    double mu0(double x) const;
    double mu1(double x) const;
    double sigma(double x) const;
    Jet mu0_jet(double x, std::size_t order) const;
    Jet mu1_jet(double x, std::size_t order) const;
    Jet sigma_jet(double x, std::size_t order) const;

    // Signal-to-noise ratio (mu1 - mu0) / sigma.
    double rho(double x) const;
    Jet rho_jet(double x, std::size_t order) const;
    Jet rho_over_sigma_jet(double x, std::size_t order) const;

    // F(x) = int_0^x rho/sigma, cached on a dense grid (adaptive Simpson,
    // abs tol 1e-10) and interpolated with cubic Hermite using F' = rho/sigma.
    double F(double x) const;

    // Canonical coefficients of the (U, X) drift: f = G1 - lambda, g = lambda e^{-F}.
    double f_coef(double x) const;
    double g_coef(double x) const;
    Jet f_jet(double x, std::size_t order) const;
    Jet g_jet(double x, std::size_t order) const;

    // a(u, x) = f(x) - e^u g(x); on a trap curve with kappa = e^{-u} it
    // vanishes identically in x.
    double canonical_drift(double u, double x) const;
    // d^n/dx^n a(u, x) for n = 0..order.
    std::vector<double> canonical_drift_x_derivatives(double u, double x,
                                                      std::size_t order) const;

    double lambda() const { return params_.lambda; }
    double cost_a() const { return params_.cost_a; }
    double cost_b() const { return params_.cost_b; }
    double cost_c() const { return params_.cost_c; }
    double x_min() const { return params_.x_min; }
    double x_max() const { return params_.x_max; }
    const ModelParams& params() const { return params_; }
    std::size_t max_derivative_order() const;

    void require_in_domain(double x, const char* where) const;

    // Same coefficients and caches, different rate parameter.
    DiffusionModel with_lambda(double lambda) const;
    DiffusionModel with_params(const ModelParams& p) const;

    nlohmann::json describe() const;

private:
    struct FCache;
    DiffusionModel(std::shared_ptr<const CoeffBackend> backend, ModelParams params,
                   std::shared_ptr<const FCache> cache);

    void validate() const;
    void build_f_cache();

    std::shared_ptr<const CoeffBackend> backend_;
    ModelParams params_;
    std::shared_ptr<const FCache> f_cache_;

    friend DiffusionModel scale_transform(const DiffusionModel&);
    friend DiffusionModel mirror_transform(const DiffusionModel&);
};

// pi <-> phi posterior coordinate maps.
double phi_from_pi(double pi);
double pi_from_phi(double phi);

// V from the hat-value: testing V = (1-pi) Vhat, detection V = (1-pi)(1 + c Vhat).
double full_value(Mode mode, double pi, double vhat, const DiffusionModel& model);

// Model of the observed process S(X) where S is the scale function of X
// under the null drift: new mu0 is identically zero and the signal-to-noise
// ratio is preserved pointwise (rho_tilde(S(x)) = rho(x)).
DiffusionModel scale_transform(const DiffusionModel& model);

// Scale-function values for tests and diagnostics.
double scale_function(const DiffusionModel& model, double x);

// x |-> -x mirror of the model: mu_i(x) -> -mu_i(-x), sigma(x) -> sigma(-x).
DiffusionModel mirror_transform(const DiffusionModel& model);

enum class RhoDirection { Increasing, Decreasing, NonMonotone };

struct ModelTraits {
    RhoDirection rho_direction = RhoDirection::Increasing;
    bool rho_constant = false;
    bool mu1_gt_mu0 = true;
    bool has_trap = false;
};

struct ModelCatalogEntry {
    std::string name;
    DiffusionModel model;
    ModelTraits expected_traits;
};

// Built-in models: const-rho, paper-trap, mono-rho-tanh, mono-rho-dec,
// their Remark-3 mirrors, and a drifted trap variant.
const std::vector<ModelCatalogEntry>& model_catalog();
const ModelCatalogEntry& catalog_entry(const std::string& name);

// Load from JSON: either {"builtin": "name", ...overrides} or a full
// coefficient spec {"mu0": expr, "mu1": expr, "sigma": expr, ...params}.
DiffusionModel model_from_json(const nlohmann::json& j);
DiffusionModel load_model(const std::string& name_or_path);

}  // namespace stoplab
