#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stoplab/model.hpp"

namespace stoplab {

struct SimOptions {
    bool with_extras = false;      // store likelihood / clock / canonical arrays
    std::uint64_t path_index = 0;  // RNG substream key for ensembles
    bool antithetic = false;       // flip the sign of every Brownian increment
};

// Discretized sample path of the posterior-ratio pair (Phi, X) plus optional
// derived processes.  Immutable after generation.
struct PathBundle {
    double dt = 0.0;
    std::vector<double> times;
    std::vector<double> phi;
    std::vector<double> x;
    std::vector<double> log_l;    // log likelihood ratio (detection)
    std::vector<double> clock_a;  // additive functional A_t = int rho^2(X) ds
    std::vector<double> canon_u;  // canonical U path (simulate_canonical)
    std::vector<double> u_check;  // F(X_t) - log Phi_t along the coupled path
    std::uint64_t seed = 0;
    std::uint64_t path_index = 0;
    std::string scheme;
    bool truncated = false;
    std::vector<std::string> messages;

    std::size_t size() const { return times.size(); }
};

// Sequential testing pair under P0: dX = mu0 dt + sigma dB with reflecting
// truncation at the domain edges; Phi by the exact exponent (log-Euler), so
// Phi >= 0 holds exactly and Phi = 0 is absorbing.
PathBundle simulate_st(const DiffusionModel& model, double phi0, double x0, double horizon,
                       double dt, std::uint64_t seed, const SimOptions& opts = {});

// Quickest detection pair under P-infinity: X as above, L by log-Euler,
// Phi through the integral representation with the trapezoid rule.
// lambda_dyn is the rate used in the Phi kinematics (it may differ from the
// model's cost-side lambda to realise the perturbed problems).
PathBundle simulate_qd(const DiffusionModel& model, double phi0, double x0, double horizon,
                       double dt, std::uint64_t seed, double lambda_dyn,
                       const SimOptions& opts = {});

// Additive-functional time change: computes A (trapezoid), its piecewise
// linear inverse T, and resamples (Phi, X) on the uniform new clock.
// hat_horizon < 0 uses everything A reaches; a larger request truncates with
// a warning in the metadata.
PathBundle time_change(const PathBundle& path, const DiffusionModel& model,
                       double hat_horizon = -1.0, double hat_dt = -1.0);

// Direct simulation of the decoupled time-changed pair:
// d PhiHat = PhiHat dB, d XHat = (mu0 / rho^2) dt + (sigma / rho) dB.
PathBundle simulate_hat(const DiffusionModel& model, double phi0, double x0, double horizon,
                        double dt, std::uint64_t seed, const SimOptions& opts = {});

// Canonical pair (U, X): dU = a(U, X) dt with a = f - e^u g, X as in the
// detection dynamics.  Extras carry the coupled detection path's
// F(X_t) - log Phi_t for the consistency check.
PathBundle simulate_canonical(const DiffusionModel& model, double u0, double x0, double horizon,
                              double dt, std::uint64_t seed, const SimOptions& opts = {});

// Storage-free terminal values for Monte Carlo sweeps.
double simulate_st_terminal_phi(const DiffusionModel& model, double phi0, double x0,
                                double horizon, double dt, std::uint64_t seed,
                                std::uint64_t path_index, bool antithetic = false);
double simulate_qd_terminal_phi(const DiffusionModel& model, double phi0, double x0,
                                double horizon, double dt, std::uint64_t seed, double lambda_dyn,
                                std::uint64_t path_index, bool antithetic = false);

}  // namespace stoplab
