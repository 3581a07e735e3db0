#include "stoplab/paths.hpp"

#include <algorithm>
#include <cmath>

#include "stoplab/errors.hpp"
#include "stoplab/rng.hpp"

namespace stoplab {

namespace {

std::size_t step_count(double horizon, double dt) {
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    if (!(horizon >= dt)) throw ConfigError("horizon must be at least dt");
    return static_cast<std::size_t>(std::llround(horizon / dt));
}

double reflect_into(double x, double lo, double hi) {
    // mirror fold; dt is small so one fold is the common case
    for (int it = 0; it < 64 && (x < lo || x > hi); ++it) {
        if (x < lo) x = 2.0 * lo - x;
        if (x > hi) x = 2.0 * hi - x;
    }
    return std::clamp(x, lo, hi);
}

void check_finite(double v, const char* what, std::size_t k) {
    if (!std::isfinite(v)) throw SimulationError(std::string("non-finite ") + what, k);
}

}  // namespace

PathBundle simulate_st(const DiffusionModel& model, double phi0, double x0, double horizon,
                       double dt, std::uint64_t seed, const SimOptions& opts) {
    if (phi0 < 0.0) throw DomainError("simulate_st: phi0 must be non-negative");
    model.require_in_domain(x0, "simulate_st");
    const std::size_t n = step_count(horizon, dt);
    CounterRng rng(seed, opts.path_index);
    const double sdt = std::sqrt(dt);
    const double sign = opts.antithetic ? -1.0 : 1.0;

    PathBundle out;
    out.dt = dt;
    out.seed = seed;
    out.path_index = opts.path_index;
    out.scheme = "euler-exact-exponent";
    out.times.resize(n + 1);
    out.phi.resize(n + 1);
    out.x.resize(n + 1);
    if (opts.with_extras) out.clock_a.resize(n + 1);

    double x = x0;
    double log_phi = phi0 > 0.0 ? std::log(phi0) : 0.0;
    const bool absorbed = phi0 == 0.0;
    out.times[0] = 0.0;
    out.phi[0] = phi0;
    out.x[0] = x0;
    if (opts.with_extras) out.clock_a[0] = 0.0;

    double rho_prev = model.rho(x);
    for (std::size_t k = 0; k < n; ++k) {
        const double z = sign * rng.normal(k);
        const double db = sdt * z;
        const double rho_k = rho_prev;
        if (!absorbed) log_phi += rho_k * db - 0.5 * rho_k * rho_k * dt;
        x = reflect_into(x + model.mu0(x) * dt + model.sigma(x) * db, model.x_min(),
                         model.x_max());
        check_finite(x, "X", k);
        if (!absorbed) check_finite(log_phi, "log Phi", k);
        rho_prev = model.rho(x);
        out.times[k + 1] = static_cast<double>(k + 1) * dt;
        out.phi[k + 1] = absorbed ? 0.0 : std::exp(log_phi);
        out.x[k + 1] = x;
        if (opts.with_extras)
            out.clock_a[k + 1] =
                out.clock_a[k] + 0.5 * dt * (rho_k * rho_k + rho_prev * rho_prev);
    }
    return out;
}

PathBundle simulate_qd(const DiffusionModel& model, double phi0, double x0, double horizon,
                       double dt, std::uint64_t seed, double lambda_dyn,
                       const SimOptions& opts) {
    if (phi0 < 0.0) throw DomainError("simulate_qd: phi0 must be non-negative");
    if (!(lambda_dyn > 0.0)) throw ConfigError("lambda_dyn must be positive");
    model.require_in_domain(x0, "simulate_qd");
    const std::size_t n = step_count(horizon, dt);
    CounterRng rng(seed, opts.path_index);
    const double sdt = std::sqrt(dt);
    const double sign = opts.antithetic ? -1.0 : 1.0;

    PathBundle out;
    out.dt = dt;
    out.seed = seed;
    out.path_index = opts.path_index;
    out.scheme = "euler-exact-exponent";
    out.times.resize(n + 1);
    out.phi.resize(n + 1);
    out.x.resize(n + 1);
    out.log_l.resize(n + 1);

    double x = x0;
    double log_l = 0.0;
    // trapezoid accumulation of int_0^t e^{-lambda s} / L_s ds
    double integral = 0.0;
    double h_prev = 1.0;
    out.times[0] = 0.0;
    out.phi[0] = phi0;
    out.x[0] = x0;
    out.log_l[0] = 0.0;

    for (std::size_t k = 0; k < n; ++k) {
        const double z = sign * rng.normal(k);
        const double db = sdt * z;
        const double rho_k = model.rho(x);
        log_l += rho_k * db - 0.5 * rho_k * rho_k * dt;
        x = reflect_into(x + model.mu0(x) * dt + model.sigma(x) * db, model.x_min(),
                         model.x_max());
        check_finite(x, "X", k);
        check_finite(log_l, "log L", k);
        const double t_next = static_cast<double>(k + 1) * dt;
        const double h_next = std::exp(-lambda_dyn * t_next - log_l);
        integral += 0.5 * dt * (h_prev + h_next);
        h_prev = h_next;
        out.times[k + 1] = t_next;
        out.x[k + 1] = x;
        out.log_l[k + 1] = log_l;
        out.phi[k + 1] =
            std::exp(lambda_dyn * t_next + log_l) * (phi0 + lambda_dyn * integral);
        check_finite(out.phi[k + 1], "Phi", k);
    }
    if (!opts.with_extras) out.log_l.clear();
    return out;
}

PathBundle time_change(const PathBundle& path, const DiffusionModel& model, double hat_horizon,
                       double hat_dt) {
    if (path.size() < 2) throw ConfigError("time_change: path too short");
    const std::size_t n = path.size();
    std::vector<double> a(n);
    if (path.clock_a.size() == n) {
        a = path.clock_a;
    } else {
        a[0] = 0.0;
        double r_prev = model.rho(path.x[0]);
        for (std::size_t k = 1; k < n; ++k) {
            const double r = model.rho(path.x[k]);
            a[k] = a[k - 1] + 0.5 * path.dt * (r_prev * r_prev + r * r);
            r_prev = r;
        }
    }
    const double a_end = a.back();
    const double dt_hat = hat_dt > 0.0 ? hat_dt : path.dt;
    double span = hat_horizon >= 0.0 ? hat_horizon : a_end;

    PathBundle out;
    out.dt = dt_hat;
    out.seed = path.seed;
    out.path_index = path.path_index;
    out.scheme = "time-change";
    if (span > a_end) {
        out.truncated = true;
        out.messages.push_back("requested new-clock horizon " + std::to_string(span) +
                               " exceeds A_horizon " + std::to_string(a_end) + "; truncated");
        span = a_end;
    }
    const auto m = static_cast<std::size_t>(std::floor(span / dt_hat + 1e-12));

    out.times.resize(m + 1);
    out.phi.resize(m + 1);
    out.x.resize(m + 1);
    out.clock_a.resize(m + 1);  // holds T at the new clock ticks
    std::size_t j = 0;
    for (std::size_t i = 0; i <= m; ++i) {
        const double s = static_cast<double>(i) * dt_hat;
        while (j + 2 < n && a[j + 1] < s) ++j;
        const double da = a[j + 1] - a[j];
        const double w = da > 0.0 ? std::clamp((s - a[j]) / da, 0.0, 1.0) : 0.0;
        out.times[i] = s;
        out.clock_a[i] = path.times[j] + w * path.dt;
        out.phi[i] = path.phi[j] + w * (path.phi[j + 1] - path.phi[j]);
        out.x[i] = path.x[j] + w * (path.x[j + 1] - path.x[j]);
    }
    return out;
}

namespace {
void require_rho_bounded_away(const DiffusionModel& model) {
    for (int i = 0; i <= 1000; ++i) {
        const double x =
            model.x_min() + (model.x_max() - model.x_min()) * static_cast<double>(i) / 1000.0;
        if (std::abs(model.rho(x)) < 1e-8)
            throw ConfigError("time-changed dynamics need |rho| bounded away from 0; "
                              "|rho| < 1e-8 at x = " +
                              std::to_string(x));
    }
}
}  // namespace

PathBundle simulate_hat(const DiffusionModel& model, double phi0, double x0, double horizon,
                        double dt, std::uint64_t seed, const SimOptions& opts) {
    if (phi0 < 0.0) throw DomainError("simulate_hat: phi0 must be non-negative");
    model.require_in_domain(x0, "simulate_hat");
    require_rho_bounded_away(model);
    const std::size_t n = step_count(horizon, dt);
    CounterRng rng(seed, opts.path_index);
    const double sdt = std::sqrt(dt);
    const double sign = opts.antithetic ? -1.0 : 1.0;

    PathBundle out;
    out.dt = dt;
    out.seed = seed;
    out.path_index = opts.path_index;
    out.scheme = "hat-euler-exact-exponent";
    out.times.resize(n + 1);
    out.phi.resize(n + 1);
    out.x.resize(n + 1);

    double x = x0;
    double log_phi = phi0 > 0.0 ? std::log(phi0) : 0.0;
    const bool absorbed = phi0 == 0.0;
    out.times[0] = 0.0;
    out.phi[0] = phi0;
    out.x[0] = x0;
    for (std::size_t k = 0; k < n; ++k) {
        const double z = sign * rng.normal(k);
        const double db = sdt * z;
        const double rho = model.rho(x);
        const double drift = model.mu0(x) / (rho * rho);
        const double vol = model.sigma(x) / rho;
        if (!absorbed) log_phi += db - 0.5 * dt;
        x = reflect_into(x + drift * dt + vol * db, model.x_min(), model.x_max());
        check_finite(x, "XHat", k);
        out.times[k + 1] = static_cast<double>(k + 1) * dt;
        out.phi[k + 1] = absorbed ? 0.0 : std::exp(log_phi);
        out.x[k + 1] = x;
    }
    return out;
}

PathBundle simulate_canonical(const DiffusionModel& model, double u0, double x0, double horizon,
                              double dt, std::uint64_t seed, const SimOptions& opts) {
    model.require_in_domain(x0, "simulate_canonical");
    const std::size_t n = step_count(horizon, dt);
    CounterRng rng(seed, opts.path_index);
    const double sdt = std::sqrt(dt);
    const double sign = opts.antithetic ? -1.0 : 1.0;
    const double lambda = model.lambda();

    PathBundle out;
    out.dt = dt;
    out.seed = seed;
    out.path_index = opts.path_index;
    out.scheme = "canonical-euler";
    out.times.resize(n + 1);
    out.phi.resize(n + 1);
    out.x.resize(n + 1);
    out.canon_u.resize(n + 1);
    if (opts.with_extras) out.u_check.resize(n + 1);

    double x = x0;
    double u = u0;
    // coupled detection path sharing the same Brownian increments
    const double phi0 = std::exp(model.F(x0) - u0);
    double log_l = 0.0;
    double integral = 0.0;
    double h_prev = 1.0;

    out.times[0] = 0.0;
    out.x[0] = x0;
    out.canon_u[0] = u0;
    out.phi[0] = phi0;
    if (opts.with_extras) out.u_check[0] = model.F(x0) - std::log(phi0);

    for (std::size_t k = 0; k < n; ++k) {
        const double z = sign * rng.normal(k);
        const double db = sdt * z;
        const double rho = model.rho(x);
        u += model.canonical_drift(u, x) * dt;
        log_l += rho * db - 0.5 * rho * rho * dt;
        x = reflect_into(x + model.mu0(x) * dt + model.sigma(x) * db, model.x_min(),
                         model.x_max());
        check_finite(x, "X", k);
        check_finite(u, "U", k);
        const double t_next = static_cast<double>(k + 1) * dt;
        const double h_next = std::exp(-lambda * t_next - log_l);
        integral += 0.5 * dt * (h_prev + h_next);
        h_prev = h_next;
        const double phi = std::exp(lambda * t_next + log_l) * (phi0 + lambda * integral);
        out.times[k + 1] = t_next;
        out.x[k + 1] = x;
        out.canon_u[k + 1] = u;
        out.phi[k + 1] = phi;
        if (opts.with_extras) out.u_check[k + 1] = model.F(x) - std::log(phi);
    }
    return out;
}

double simulate_st_terminal_phi(const DiffusionModel& model, double phi0, double x0,
                                double horizon, double dt, std::uint64_t seed,
                                std::uint64_t path_index, bool antithetic) {
    if (phi0 == 0.0) return 0.0;
    const std::size_t n = step_count(horizon, dt);
    CounterRng rng(seed, path_index);
    const double sdt = std::sqrt(dt);
    const double sign = antithetic ? -1.0 : 1.0;
    double x = x0;
    double log_phi = std::log(phi0);
    for (std::size_t k = 0; k < n; ++k) {
        const double db = sdt * sign * rng.normal(k);
        const double rho = model.rho(x);
        log_phi += rho * db - 0.5 * rho * rho * dt;
        x = reflect_into(x + model.mu0(x) * dt + model.sigma(x) * db, model.x_min(),
                         model.x_max());
    }
    return std::exp(log_phi);
}

double simulate_qd_terminal_phi(const DiffusionModel& model, double phi0, double x0,
                                double horizon, double dt, std::uint64_t seed, double lambda_dyn,
                                std::uint64_t path_index, bool antithetic) {
    const std::size_t n = step_count(horizon, dt);
    CounterRng rng(seed, path_index);
    const double sdt = std::sqrt(dt);
    const double sign = antithetic ? -1.0 : 1.0;
    double x = x0;
    double log_l = 0.0;
    double integral = 0.0;
    double h_prev = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double db = sdt * sign * rng.normal(k);
        const double rho = model.rho(x);
        log_l += rho * db - 0.5 * rho * rho * dt;
        x = reflect_into(x + model.mu0(x) * dt + model.sigma(x) * db, model.x_min(),
                         model.x_max());
        const double t_next = static_cast<double>(k + 1) * dt;
        const double h_next = std::exp(-lambda_dyn * t_next - log_l);
        integral += 0.5 * dt * (h_prev + h_next);
        h_prev = h_next;
    }
    const double t_end = static_cast<double>(n) * dt;
    return std::exp(lambda_dyn * t_end + log_l) * (phi0 + lambda_dyn * integral);
}

}  // namespace stoplab
