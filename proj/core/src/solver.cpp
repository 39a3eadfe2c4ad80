#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "densek/error.hpp"
#include "densek/metrics.hpp"
#include "densek/solver.hpp"

namespace densek {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void fill_density(const SelectionProblem& problem, SolverResult& r) {
  if (problem.bipartite()) {
    const auto& bg = problem.bipartite_graph();
    const auto segs = problem.segments();
    std::span<const std::uint8_t> sel(r.selection);
    const auto rep = bipartite_density(bg, sel.subspan(0, bg.n1()),
                                       sel.subspan(bg.n1(), bg.n2()), segs[0].k,
                                       segs[1].k);
    r.density = rep.density;
    r.edges_inside = rep.edges_inside;
    r.objective_f = -2.0 * static_cast<double>(rep.edges_inside);
    return;
  }
  const std::size_t k = problem.segments()[0].k;
  const auto& g = problem.graph();
  if (k >= 2) {
    const auto rep = edge_density(g, r.selection, k);
    r.density = rep.density;
    r.edges_inside = rep.edges_inside;
  } else {
    r.density = 0.0;
    r.edges_inside = 0;
  }
  r.objective_f = -2.0 * static_cast<double>(r.edges_inside);
}

}  // namespace

std::string_view to_string(StopReason r) noexcept {
  return r == StopReason::step_tol ? "step_tol" : "max_iter";
}

std::string_view to_string(ExtrapolationMode m) noexcept {
  return m == ExtrapolationMode::practical ? "practical" : "theory";
}

void SolverConfig::validate() const {
  auto fail = [](const std::string& what) { throw InvalidArgument("SolverConfig: " + what); };
  if (!(c1 > 1.0 && c1 <= c2 && std::isfinite(c2))) fail("need 1 < c1 <= c2 < inf");
  if (!(lambda0 > 0.0 && std::isfinite(lambda0))) fail("lambda0 must be positive");
  if (!(lambda_growth > 1.0 && std::isfinite(lambda_growth))) fail("lambda_growth must exceed 1");
  if (!(lambda_update_rel_change > 0.0 && lambda_update_rel_change < 1.0)) {
    fail("lambda_update_rel_change must lie in (0, 1)");
  }
  if (lambda_update_patience < 1) fail("lambda_update_patience must be >= 1");
  if (!(stop_sq_tol >= 0.0)) fail("stop_sq_tol must be non-negative");
  if (max_iter < 1) fail("max_iter must be >= 1");
  if (!(lambda_cap_factor > 0.0 && std::isfinite(lambda_cap_factor))) {
    fail("lambda_cap_factor must be positive");
  }
  if (!(spectral_rel_tol > 0.0) || spectral_max_iter < 1) fail("bad power-iteration settings");
}

SolverState SolverState::initial(const SelectionProblem& problem,
                                 std::vector<double> x0, double lambda) {
  if (x0.size() != problem.dimension()) throw InvalidArgument("x0 length mismatch");
  for (double v : x0) {
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("x0 must lie in [0,1]^n");
  }
  SolverState s;
  s.ax.resize(x0.size());
  problem.adjacency(x0, s.ax);
  s.x_prev = x0;
  s.x = std::move(x0);
  s.ax_prev = s.ax;
  s.lambda = lambda;
  return s;
}

double lipschitz_grad_constant(const Graph& g, const PowerIterationOptions& opts) {
  return 2.0 * spectral_norm_estimate(g, opts);
}

double exactness_threshold(const Graph& g, const PowerIterationOptions& opts) {
  return 2.0 * std::sqrt(static_cast<double>(g.n())) * spectral_norm_estimate(g, opts);
}

IterationRecord pgm_step(const SelectionProblem& problem, SolverState& state,
                         const StepParams& p, StepWorkspace& ws) {
  const std::size_t n = problem.dimension();
  if (!(p.eta > 0.0) || !(p.gamma >= 0.0 && p.gamma < 1.0)) {
    throw InvalidArgument("pgm_step needs eta > 0 and 0 <= gamma < 1");
  }
  ws.w.resize(n);
  ws.x_next.resize(n);
  ws.ax_next.resize(n);

  // A z is formed from the cached products: A z = (1 + g) A x - g A x_prev.
  const double g = p.gamma;
  const double two_eta = 2.0 * p.eta;
  double prev_sq = 0.0;
  double checksum = 0.0;  // non-finite iff some entry is
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = state.x[i] - state.x_prev[i];
    prev_sq += dx * dx;
    const double z = state.x[i] + g * dx;
    const double az = (1.0 + g) * state.ax[i] - g * state.ax_prev[i];
    const double w = z + two_eta * az;
    checksum += w;
    ws.w[i] = w;
  }
  if (!std::isfinite(checksum)) throw DivergenceError("divergence: non-finite gradient step");

  const double mu = p.eta * p.lambda;
  auto t0 = Clock::now();
  const double h = problem.prox(ws.w, mu, ws.x_next, ws.selector);
  auto t1 = Clock::now();
  // f(x+), ||x+ - x|| and ||x+|| come out of the product sweep.
  const SpmvStats st = problem.adjacency_with_stats(ws.x_next, state.x, ws.ax_next);
  auto t2 = Clock::now();
  ws.timing.prox_seconds += std::chrono::duration<double>(t1 - t0).count();
  ws.timing.spmv_seconds += std::chrono::duration<double>(t2 - t1).count();
  const double step_sq = st.diff_sq;
  const double next_sq = st.norm_sq;
  const double quad = st.quad;

  IterationRecord rec;
  rec.iter = state.iter;
  rec.lambda = p.lambda;
  rec.f = -quad;
  rec.h = h;
  rec.F = rec.f + p.lambda * h;
  rec.psi = h + static_cast<double>(problem.total_k());
  rec.step_norm = std::sqrt(step_sq);
  rec.prev_step_norm = std::sqrt(prev_sq);
  if (next_sq > 0.0) {
    rec.rel_change = rec.step_norm / std::sqrt(next_sq);
  } else {
    rec.rel_change = rec.step_norm == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  rec.residual_proxy = p.residual_scale * (rec.step_norm + rec.prev_step_norm);
  rec.gamma_used = p.gamma;
  rec.eta_used = p.eta;
  if (!std::isfinite(rec.F)) throw DivergenceError("divergence: non-finite objective");

  state.x_prev.swap(state.x);
  state.x.swap(ws.x_next);
  state.ax_prev.swap(state.ax);
  state.ax.swap(ws.ax_next);
  ++state.iter;
  return rec;
}

std::pair<SolverState, IterationRecord> pgm_step(const Graph& g,
                                                 const SolverState& state,
                                                 std::size_t k, double eta,
                                                 double gamma, double lambda) {
  const auto problem = SelectionProblem::dks(g, k);
  SolverState next = state;
  if (next.ax.size() != g.n() || next.ax_prev.size() != g.n()) {
    next.ax.assign(g.n(), 0.0);
    next.ax_prev.assign(g.n(), 0.0);
    spmv(g, next.x, next.ax);
    spmv(g, next.x_prev, next.ax_prev);
  }
  StepWorkspace ws;
  auto rec = pgm_step(problem, next, StepParams{eta, gamma, lambda, 0.0}, ws);
  return {std::move(next), rec};
}

double extrapolation_weight(SolverState& state, const SolverConfig& config) {
  const double t = state.t;
  const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
  double gamma = (t - 1.0) / t_next;
  state.t = t_next;
  if (config.extrapolation == ExtrapolationMode::theory) {
    gamma = std::min(gamma, 0.999 * config.gamma_bar());
  }
  return gamma;
}

SolverResult ep_prox_solve(const SelectionProblem& problem, std::vector<double> x0,
                           const SolverConfig& config) {
  config.validate();
  const auto start = Clock::now();
  const std::size_t n = problem.dimension();

  const double norm_a = problem.spectral_norm(config.power_iteration());
  const double lipschitz = 2.0 * norm_a;
  const double eta = 1.0 / (config.c1 * lipschitz);
  const double residual_scale = std::sqrt(2.0 * (1.0 + config.c2 * config.c2)) * lipschitz;
  const double threshold = 2.0 * std::sqrt(static_cast<double>(n)) * norm_a;
  const double cap = config.lambda_cap_factor * threshold;
  const bool annealed = config.schedule == LambdaSchedule::annealed;

  SolverResult result;
  result.lipschitz = lipschitz;
  result.lambda_cap = annealed ? cap : config.lambda0;

  SolverState state = SolverState::initial(
      problem, std::move(x0), annealed ? std::min(config.lambda0, cap) : config.lambda0);
  {
    double quad = 0.0;
    for (std::size_t i = 0; i < n; ++i) quad += state.x[i] * state.ax[i];
    result.trace.initial_F = -quad + state.lambda * problem.penalty(state.x);
  }
  StepWorkspace ws;
  result.timing.setup_seconds = seconds_since(start);

  const auto loop_start = Clock::now();
  result.trace.records.reserve(config.max_iter);
  while (true) {
    const double gamma = extrapolation_weight(state, config);
    const auto rec =
        pgm_step(problem, state, StepParams{eta, gamma, state.lambda, residual_scale}, ws);
    result.trace.records.push_back(rec);

    // Step-size convergence only counts once the penalty is in the exact
    // regime; below it a stalled iterate is not a solution of the problem.
    const bool lambda_final = !annealed || state.lambda >= cap;
    if (lambda_final && rec.step_norm * rec.step_norm <= config.stop_sq_tol) {
      result.converged_by = StopReason::step_tol;
      break;
    }
    if (annealed && state.lambda < cap) {
      ++state.iters_since_lambda_update;
      if (rec.rel_change < config.lambda_update_rel_change ||
          state.iters_since_lambda_update >= config.lambda_update_patience) {
        state.lambda = std::min(config.lambda_growth * state.lambda, cap);
        state.iters_since_lambda_update = 0;
        state.t = 1.0;
      }
    }
    if (state.iter >= config.max_iter) {
      result.converged_by = StopReason::max_iter;
      break;
    }
  }
  result.timing.iterations_seconds = seconds_since(loop_start);
  result.timing.spmv_seconds = ws.timing.spmv_seconds;
  result.timing.prox_seconds = ws.timing.prox_seconds;

  result.iterations = state.iter;
  result.final_lambda = state.lambda;
  result.selection = problem.round(state.x);
  result.distance_to_binary = problem.distance_to_selection(state.x);
  result.x_final = std::move(state.x);
  fill_density(problem, result);
  result.wall_time = Clock::now() - start;
  return result;
}

SolverResult ep_prox_solve(const Graph& g, std::size_t k, const SolverConfig& config) {
  const auto problem = SelectionProblem::dks(g, k);
  std::vector<double> x0(g.n(), 1.0 / static_cast<double>(g.n()));
  return ep_prox_solve(problem, std::move(x0), config);
}

SolverResult ep_prox_solve_bipartite(const BipartiteGraph& bg, std::size_t k1,
                                     std::size_t k2, const SolverConfig& config) {
  const auto problem = SelectionProblem::dkbs(bg, k1, k2);
  std::vector<double> a0(bg.n1() + bg.n2(), 1.0 / static_cast<double>(k1 + k2));
  return ep_prox_solve(problem, std::move(a0), config);
}

ResidualBound residual_bound_check(const Trace& trace, const SolverConfig& config,
                                   double F_star, double L_f, std::size_t J) {
  if (trace.records.empty()) throw InvalidArgument("empty trace");
  const double c1 = config.c1;
  const double c2 = config.c2;
  double gamma_max = 0.0;
  for (const auto& r : trace.records) gamma_max = std::max(gamma_max, r.gamma_used);
  const double denom =
      (c1 - 1.0) * (c1 - 1.0) - 4.0 * gamma_max * gamma_max * (c2 + 1.0) * (c2 + 1.0);
  if (!(denom > 0.0)) throw InvalidArgument("extrapolation cap violated");

  const double scale = std::sqrt(2.0 * (1.0 + c2 * c2)) * L_f;
  const std::size_t last = std::min(J + 1, trace.records.size());
  ResidualBound b;
  b.lhs = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < last; ++l) {
    const auto& r = trace.records[l];
    b.lhs = std::min(b.lhs, scale * (r.step_norm + r.prev_step_norm));
  }
  const double norm_a = 0.5 * L_f;
  b.C = 64.0 * (1.0 + c2 * c2) * (c1 - 1.0) * (trace.initial_F - F_star) * norm_a / denom;
  b.rhs = std::sqrt(b.C / static_cast<double>(J + 1));
  return b;
}

}  // namespace densek
