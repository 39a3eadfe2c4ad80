#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "densek/graph.hpp"
#include "densek/penalty.hpp"
#include "densek/problem.hpp"

namespace densek {

enum class ExtrapolationMode {
  practical,  ///< raw FISTA weights
  theory,     ///< FISTA weights clamped below the convergence-theory cap
};

enum class LambdaSchedule {
  annealed,  ///< multiplicative growth up to the exactness cap
  fixed,     ///< lambda0 throughout (used for convergence diagnostics)
};

enum class StopReason { step_tol, max_iter };

std::string_view to_string(StopReason r) noexcept;
std::string_view to_string(ExtrapolationMode m) noexcept;

struct SolverConfig {
  double lambda0 = 1e-10;
  double lambda_growth = 20.0;
  double lambda_update_rel_change = 0.5;
  std::size_t lambda_update_patience = 10;
  double stop_sq_tol = 1e-11;
  std::size_t max_iter = 100;
  /// Step size is fixed at 1/eta = c1 * L_f; c2 only enters the residual
  /// constants and the extrapolation cap.
  double c1 = 1.01;
  double c2 = 1.01;
  ExtrapolationMode extrapolation = ExtrapolationMode::practical;
  LambdaSchedule schedule = LambdaSchedule::annealed;
  /// lambda stops growing at this multiple of exactness_threshold().
  double lambda_cap_factor = 1.0;
  std::uint64_t seed = 0;
  double spectral_rel_tol = 1e-6;
  std::size_t spectral_max_iter = 500;

  static SolverConfig dks_defaults() { return {}; }
  static SolverConfig dkbs_defaults() {
    SolverConfig c;
    c.lambda_growth = 10.0;
    c.stop_sq_tol = 1e-15;
    return c;
  }

  /// Throws InvalidArgument on any violated invariant.
  void validate() const;
  /// Upper limit (c1 - 1) / (2 + 2 c2) on extrapolation weights.
  double gamma_bar() const noexcept { return (c1 - 1.0) / (2.0 + 2.0 * c2); }
  PowerIterationOptions power_iteration() const noexcept {
    return {spectral_rel_tol, spectral_max_iter, seed};
  }
};

/// Iterate of the extrapolated proximal gradient method. `ax` and `ax_prev`
/// cache A x and A x_prev so that each step needs a single sparse product.
struct SolverState {
  std::vector<double> x;
  std::vector<double> x_prev;
  std::vector<double> ax;
  std::vector<double> ax_prev;
  double lambda = 0.0;
  std::size_t iter = 0;
  std::size_t iters_since_lambda_update = 0;
  double t = 1.0;  ///< FISTA accumulator

  /// State with x = x_prev = x0.
  static SolverState initial(const SelectionProblem& problem,
                             std::vector<double> x0, double lambda);
};

struct IterationRecord {
  std::size_t iter = 0;
  double lambda = 0.0;
  double F = 0.0;
  double f = 0.0;
  double h = 0.0;
  double psi = 0.0;
  double step_norm = 0.0;       ///< ||x+ - x||
  double prev_step_norm = 0.0;  ///< ||x - x_prev||
  double rel_change = 0.0;      ///< ||x+ - x|| / ||x+||
  double residual_proxy = 0.0;  ///< C1 (||x+ - x|| + ||x - x_prev||)
  double gamma_used = 0.0;
  double eta_used = 0.0;

  friend bool operator==(const IterationRecord&, const IterationRecord&) = default;
};

struct Trace {
  /// Objective at the starting point (with the starting lambda).
  double initial_F = 0.0;
  std::vector<IterationRecord> records;
};

/// Accumulated time inside the two kernels versus the whole iteration loop.
struct SolverTiming {
  double spmv_seconds = 0.0;
  double prox_seconds = 0.0;
  double iterations_seconds = 0.0;
  double setup_seconds = 0.0;  ///< spectral estimate and initialization
};

struct SolverResult {
  Selection selection;          ///< rounded; stacked (x, y) for bipartite
  std::vector<double> x_final;  ///< continuous iterate
  double density = 0.0;
  std::size_t edges_inside = 0;
  double objective_f = 0.0;  ///< -s^T A s at the rounded selection
  std::size_t iterations = 0;
  StopReason converged_by = StopReason::max_iter;
  double distance_to_binary = 0.0;
  double final_lambda = 0.0;
  double lambda_cap = 0.0;
  double lipschitz = 0.0;  ///< L_f used for the step size
  Trace trace;
  std::chrono::duration<double> wall_time{0};
  SolverTiming timing;
};

struct StepParams {
  double eta = 0.0;
  double gamma = 0.0;
  double lambda = 0.0;
  /// C1 in the residual proxy; 0 leaves residual_proxy at 0.
  double residual_scale = 0.0;
};

/// Scratch buffers reused across steps.
struct StepWorkspace {
  std::vector<double> w;
  std::vector<double> x_next;
  std::vector<double> ax_next;
  TopKSelector selector;
  SolverTiming timing;
};

/// L_f = 2 ||A||_2 (estimated, inflated).
double lipschitz_grad_constant(const Graph& g, const PowerIterationOptions& opts = {});
/// 2 sqrt(n) ||A||_2 (estimated, inflated): penalties above it are exact.
double exactness_threshold(const Graph& g, const PowerIterationOptions& opts = {});

/// One extrapolated proximal gradient step:
///   z  = x + gamma (x - x_prev)
///   x+ = prox_{eta lambda h}(z + 2 eta A z)
/// Advances `state` in place and returns the diagnostics of the step.
IterationRecord pgm_step(const SelectionProblem& problem, SolverState& state,
                         const StepParams& params, StepWorkspace& ws);

/// Convenience form on a plain graph; returns the advanced state.
std::pair<SolverState, IterationRecord> pgm_step(const Graph& g,
                                                 const SolverState& state,
                                                 std::size_t k, double eta,
                                                 double gamma, double lambda);

/// Next FISTA weight; advances state.t. Theory mode clamps the weight at
/// 0.999 * gamma_bar().
double extrapolation_weight(SolverState& state, const SolverConfig& config);

/// Runs the annealed penalty loop on an arbitrary selection problem from x0.
SolverResult ep_prox_solve(const SelectionProblem& problem, std::vector<double> x0,
                           const SolverConfig& config);

/// DkS from x0 = 1/n.
SolverResult ep_prox_solve(const Graph& g, std::size_t k, const SolverConfig& config);

/// Densest (k1, k2) bipartite subgraph from a0 = 1/(k1 + k2).
SolverResult ep_prox_solve_bipartite(const BipartiteGraph& bg, std::size_t k1,
                                     std::size_t k2, const SolverConfig& config);

struct ResidualBound {
  double lhs = 0.0;  ///< min over the first J+1 steps of the residual proxy
  double rhs = 0.0;  ///< sqrt(C / (J + 1))
  double C = 0.0;
};

/// Evaluates the sublinear residual bound on a fixed-lambda trace. `L_f` is
/// the gradient Lipschitz constant used by the run (||A||_2 = L_f / 2) and
/// `F_star` a lower bound on the penalized objective over the box. The
/// extrapolation cap entering C is the largest weight actually used.
ResidualBound residual_bound_check(const Trace& trace, const SolverConfig& config,
                                   double F_star, double L_f, std::size_t J);

}  // namespace densek
