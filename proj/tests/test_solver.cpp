#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "densek/baselines.hpp"
#include "densek/error.hpp"
#include "densek/metrics.hpp"
#include "densek/solver.hpp"
#include "support/oracles.hpp"

using namespace densek;
using namespace densek::testing;

namespace {

constexpr double kInfl = 1.0 + kSpectralInflation;

SolverState state_at(const Graph& g, std::vector<double> x, std::size_t k, double lambda) {
  const auto problem = SelectionProblem::dks(g, k);
  return SolverState::initial(problem, std::move(x), lambda);
}

std::size_t ones(const Selection& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), 1));
}

// Segment prox by stable sort, independent of the heap selector.
void sorted_prox(const Eigen::VectorXd& w, Eigen::Index off, Eigen::Index len, std::size_t k,
                 double mu, Eigen::VectorXd& out) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(len));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](auto a, auto b) { return w(off + a) > w(off + b); });
  for (std::size_t r = 0; r < order.size(); ++r) {
    const auto i = off + order[r];
    out(i) = std::clamp(w(i) + (r < k ? mu : -mu), 0.0, 1.0);
  }
}

// The annealed loop written against a materialized block matrix.
Selection dense_bipartite_reference(const BipartiteGraph& bg, std::size_t k1, std::size_t k2,
                                    const SolverConfig& cfg, double lipschitz, double cap) {
  const auto a = dense_block_adjacency(bg);
  const auto n1 = static_cast<Eigen::Index>(bg.n1());
  const auto n2 = static_cast<Eigen::Index>(bg.n2());
  const Eigen::Index n = n1 + n2;
  const double eta = 1.0 / (cfg.c1 * lipschitz);
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(k1 + k2));
  Eigen::VectorXd xp = x;
  Eigen::VectorXd next(n);
  double lambda = std::min(cfg.lambda0, cap);
  double t = 1.0;
  std::size_t since = 0;
  for (std::size_t it = 1;; ++it) {
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double gamma = (t - 1.0) / tn;
    t = tn;
    const Eigen::VectorXd z = x + gamma * (x - xp);
    const Eigen::VectorXd w = z + 2.0 * eta * (a * z);
    sorted_prox(w, 0, n1, k1, eta * lambda, next);
    sorted_prox(w, n1, n2, k2, eta * lambda, next);
    const double step = (next - x).norm();
    const double rel = next.norm() > 0 ? step / next.norm() : 0.0;
    xp = x;
    x = next;
    if (lambda >= cap && step * step <= cfg.stop_sq_tol) break;
    if (lambda < cap) {
      ++since;
      if (rel < cfg.lambda_update_rel_change || since >= cfg.lambda_update_patience) {
        lambda = std::min(cfg.lambda_growth * lambda, cap);
        since = 0;
        t = 1.0;
      }
    }
    if (it >= cfg.max_iter) break;
  }
  Selection s(static_cast<std::size_t>(n), 0);
  auto mark = [&](Eigen::Index off, Eigen::Index len, std::size_t k) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(len));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](auto p, auto q) { return x(off + p) > x(off + q); });
    for (std::size_t r = 0; r < k; ++r) s[static_cast<std::size_t>(off + order[r])] = 1;
  };
  mark(0, n1, k1);
  mark(n1, n2, k2);
  return s;
}

}  // namespace

TEST_CASE("lipschitz_grad_constant and exactness_threshold examples") {
  CHECK(lipschitz_grad_constant(complete_graph(2)) == doctest::Approx(2.0 * kInfl).epsilon(1e-6));
  CHECK(lipschitz_grad_constant(complete_graph(4)) == doctest::Approx(6.0 * kInfl).epsilon(1e-6));
  CHECK(lipschitz_grad_constant(star_graph(5)) ==
        doctest::Approx(2.0 * std::sqrt(5.0) * kInfl).epsilon(1e-6));
  CHECK(exactness_threshold(complete_graph(2)) ==
        doctest::Approx(2.0 * std::sqrt(2.0) * kInfl).epsilon(1e-6));
  CHECK(exactness_threshold(complete_graph(3)) ==
        doctest::Approx(2.0 * std::sqrt(3.0) * 2.0 * kInfl).epsilon(1e-6));
  CHECK(exactness_threshold(star_graph(5)) ==
        doctest::Approx(2.0 * std::sqrt(6.0) * std::sqrt(5.0) * kInfl).epsilon(1e-6));
}

TEST_CASE("pgm_step: K2 hand example") {
  const auto g = complete_graph(2);
  const auto s = state_at(g, {0.5, 0.5}, 1, 0.1);
  const auto [next, rec] = pgm_step(g, s, 1, 0.25, 0.0, 0.1);
  CHECK(next.x[0] == doctest::Approx(0.775));
  CHECK(next.x[1] == doctest::Approx(0.725));
  CHECK(next.x_prev == std::vector<double>{0.5, 0.5});
  CHECK(next.iter == 1);
  CHECK(rec.eta_used == 0.25);
  CHECK(rec.gamma_used == 0.0);
  CHECK(rec.step_norm == doctest::Approx(std::hypot(0.275, 0.225)));
  // the prox part agrees with the exact oracle
  const std::vector<double> w{0.75, 0.75};
  CHECK(prox_objective(w, next.x, 1, 0.025) ==
        doctest::Approx(subset_prox_minimum(w, 1, 0.025)).epsilon(1e-12));
}

TEST_CASE("pgm_step: vanishing penalty is clipped gradient ascent") {
  const auto g = gnp(20, 0.3, 4);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> x(20);
  for (auto& v : x) v = u(rng);
  const double eta = 0.05;
  const auto [next, rec] = pgm_step(g, state_at(g, x, 5, 1e-300), 5, eta, 0.0, 1e-300);
  const auto ax = spmv(g, x);
  for (std::size_t i = 0; i < 20; ++i)
    CHECK(next.x[i] == doctest::Approx(std::clamp(x[i] + 2 * eta * ax[i], 0.0, 1.0)));
}

TEST_CASE("pgm_step: binary optimum is a fixed point above the threshold") {
  struct Case {
    Graph g;
    std::size_t k;
    std::vector<double> x;
  };
  std::vector<Case> cases{{complete_graph(3), 2, {1, 1, 0}},
                          {complete_graph(3), 2, {0, 1, 1}},
                          {complete_graph(4), 3, {1, 0, 1, 1}}};
  for (auto& c : cases) {
    const double lambda = 1.01 * exactness_threshold(c.g);
    const double eta = 1.0 / (1.01 * lipschitz_grad_constant(c.g));
    const auto [next, rec] = pgm_step(c.g, state_at(c.g, c.x, c.k, lambda), c.k, eta, 0.0, lambda);
    CHECK(next.x == c.x);
    CHECK(rec.step_norm == 0.0);
  }
}

TEST_CASE("pgm_step rejects bad parameters") {
  const auto g = complete_graph(3);
  const auto s = state_at(g, {0.5, 0.5, 0.5}, 1, 1.0);
  CHECK_THROWS_AS(pgm_step(g, s, 1, 0.0, 0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(pgm_step(g, s, 1, 0.1, 1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(pgm_step(g, s, 1, 1e308, 0.0, 1.0), DivergenceError);
}

TEST_CASE("extrapolation_weight examples") {
  SolverConfig cfg;
  SolverState s;
  s.t = 1.0;
  CHECK(extrapolation_weight(s, cfg) == 0.0);
  const double phi = 0.5 * (1.0 + std::sqrt(5.0));
  CHECK(s.t == doctest::Approx(phi));
  const double t3 = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * phi * phi));
  CHECK(extrapolation_weight(s, cfg) == doctest::Approx((phi - 1.0) / t3));

  SolverConfig th;
  th.extrapolation = ExtrapolationMode::theory;
  th.c1 = th.c2 = 2.0;
  CHECK(th.gamma_bar() == doctest::Approx(1.0 / 6.0));
  SolverState s2;
  double last = 0.0;
  for (int i = 0; i < 50; ++i) {
    last = extrapolation_weight(s2, th);
    CHECK(last <= 0.999 / 6.0);
  }
  CHECK(last == doctest::Approx(0.999 / 6.0));
}

TEST_CASE("SolverConfig validation") {
  CHECK_NOTHROW(SolverConfig::dks_defaults().validate());
  CHECK_NOTHROW(SolverConfig::dkbs_defaults().validate());
  CHECK(SolverConfig::dkbs_defaults().lambda_growth == 10.0);
  CHECK(SolverConfig::dkbs_defaults().stop_sq_tol == 1e-15);
  auto bad = [](auto mutate) {
    SolverConfig c;
    mutate(c);
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
  };
  bad([](SolverConfig& c) { c.c1 = 1.0; });
  bad([](SolverConfig& c) { c.c1 = 3.0; c.c2 = 2.0; });
  bad([](SolverConfig& c) { c.lambda0 = 0.0; });
  bad([](SolverConfig& c) { c.lambda_growth = 1.0; });
  bad([](SolverConfig& c) { c.lambda_update_rel_change = 1.0; });
  bad([](SolverConfig& c) { c.max_iter = 0; });
}

TEST_CASE("ep_prox_solve examples") {
  const auto cfg = SolverConfig::dks_defaults();
  const auto k3 = ep_prox_solve(complete_graph(3), 3, cfg);
  CHECK(k3.selection == Selection{1, 1, 1});
  CHECK(k3.density == 1.0);

  const auto kp = ep_prox_solve(k4_plus_pendant(), 4, cfg);
  CHECK(kp.selection == Selection{1, 1, 1, 1, 0});
  CHECK(kp.density == 1.0);
  CHECK(kp.edges_inside == 6);
  CHECK(kp.objective_f == -12.0);

  CHECK_THROWS_AS(ep_prox_solve(complete_graph(3), 0, cfg), InvalidArgument);
  CHECK_THROWS_AS(ep_prox_solve(complete_graph(3), 4, cfg), InvalidArgument);
  SolverConfig broken;
  broken.c1 = 0.5;
  CHECK_THROWS_AS(ep_prox_solve(complete_graph(3), 2, broken), InvalidArgument);
}

TEST_CASE("ep_prox_solve_bipartite examples") {
  const auto cfg = SolverConfig::dkbs_defaults();
  const auto full = ep_prox_solve_bipartite(from_dense({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}}), 2, 2, cfg);
  CHECK(full.density == 1.0);
  const auto b = ep_prox_solve_bipartite(from_dense({{1, 1}, {1, 1}, {0, 1}}), 2, 2, cfg);
  CHECK(b.selection == Selection{1, 1, 0, 1, 1});
  CHECK(b.density == 1.0);
  const auto one = ep_prox_solve_bipartite(from_dense({{1, 1}}), 1, 1, cfg);
  CHECK(one.edges_inside == 1);
  CHECK(ones(one.selection) == 2);
  CHECK_THROWS_AS(ep_prox_solve_bipartite(from_dense({{1, 1}}), 2, 1, cfg), InvalidArgument);
}

TEST_CASE("solver invariants on random graphs") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto g = gnp(40, 0.15, seed);
    const std::size_t k = 3 + seed % 10;
    const auto problem = SelectionProblem::dks(g, k);
    const auto r = ep_prox_solve(g, k, SolverConfig::dks_defaults());
    CHECK(ones(r.selection) == k);
    CHECK(r.edges_inside == edge_density(g, r.selection, k).edges_inside);
    CHECK(r.iterations == r.trace.records.size());
    CHECK(r.iterations <= 100);
    for (double v : r.x_final) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    for (const auto& rec : r.trace.records) {
      CHECK(std::isfinite(rec.F));
      CHECK(rec.lambda <= r.lambda_cap);
      CHECK(rec.psi >= -1e-9);
    }
    if (r.converged_by == StopReason::step_tol) {
      CHECK(r.final_lambda == r.lambda_cap);
      CHECK(r.distance_to_binary <= 1e-3);
    }
    CHECK(r.distance_to_binary == doctest::Approx(problem.distance_to_selection(r.x_final)));
    CHECK(r.timing.spmv_seconds >= 0.0);
    CHECK(r.timing.prox_seconds >= 0.0);
  }
}

TEST_CASE("box feasibility every iteration, replayed step by step") {
  const auto g = gnp(30, 0.2, 77);
  const auto problem = SelectionProblem::dks(g, 6);
  SolverConfig cfg;
  SolverState s = SolverState::initial(problem, std::vector<double>(30, 1.0 / 30), 1e-3);
  StepWorkspace ws;
  const double eta = 1.0 / (cfg.c1 * lipschitz_grad_constant(g));
  for (int i = 0; i < 200; ++i) {
    s.lambda *= 1.1;
    const double gamma = extrapolation_weight(s, cfg);
    pgm_step(problem, s, StepParams{eta, gamma, s.lambda, 0.0}, ws);
    for (double v : s.x) REQUIRE((v >= 0.0 && v <= 1.0));
    const auto ax = spmv(g, s.x);
    for (std::size_t j = 0; j < 30; ++j) REQUIRE(s.ax[j] == doctest::Approx(ax[j]));
  }
}

TEST_CASE("solver is deterministic down to the bit") {
  const auto g = gnp(200, 0.05, 3);
  auto cfg = SolverConfig::dks_defaults();
  cfg.seed = 42;
  const auto a = ep_prox_solve(g, 20, cfg);
  const auto b = ep_prox_solve(g, 20, cfg);
  CHECK(a.trace.records == b.trace.records);
  CHECK(a.trace.initial_F == b.trace.initial_F);
  CHECK(a.x_final == b.x_final);
  CHECK(a.selection == b.selection);
}

TEST_CASE("bipartite solver agrees with a dense block-matrix reference") {
  std::size_t agree = 0;
  std::size_t total = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    std::mt19937_64 rng(seed);
    const std::size_t n1 = 3 + rng() % 8;
    const std::size_t n2 = 3 + rng() % 8;
    const auto bg = random_bipartite(n1, n2, 0.4, seed + 500);
    if (bg.m() == 0) continue;
    const std::size_t k1 = 1 + rng() % (n1 - 1);
    const std::size_t k2 = 1 + rng() % (n2 - 1);
    const auto cfg = SolverConfig::dkbs_defaults();
    const auto r = ep_prox_solve_bipartite(bg, k1, k2, cfg);
    const auto ref = dense_bipartite_reference(bg, k1, k2, cfg, r.lipschitz, r.lambda_cap);
    ++total;
    agree += (ref == r.selection);
  }
  REQUIRE(total > 20);
  CHECK(agree == total);
}

TEST_CASE("gradient of f matches central differences") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0, 1);
  const auto g = gnp(25, 0.3, 12);
  auto f = [&](const std::vector<double>& x) {
    const auto ax = spmv(g, x);
    return -std::inner_product(x.begin(), x.end(), ax.begin(), 0.0);
  };
  for (int p = 0; p < 20; ++p) {
    std::vector<double> x(25);
    for (auto& v : x) v = u(rng);
    const auto ax = spmv(g, x);
    for (std::size_t i = 0; i < 25; ++i) {
      const double h = 1e-5;
      auto xp = x;
      auto xm = x;
      xp[i] += h;
      xm[i] -= h;
      const double fd = (f(xp) - f(xm)) / (2 * h);
      const double grad = -2.0 * ax[i];
      CHECK(std::abs(fd - grad) <= 1e-5 * std::max(1.0, std::abs(grad)));
    }
  }
}

TEST_CASE("telescoped descent in theory mode with fixed lambda") {
  const auto g = gnp(30, 0.25, 8);
  SolverConfig cfg;
  cfg.schedule = LambdaSchedule::fixed;
  cfg.extrapolation = ExtrapolationMode::theory;
  cfg.c1 = cfg.c2 = 2.0;
  cfg.stop_sq_tol = 0.0;
  cfg.max_iter = 300;
  for (double factor : {0.01, 0.5, 1.05}) {
    cfg.lambda0 = factor * exactness_threshold(g);
    const auto r = ep_prox_solve(g, 7, cfg);
    for (const auto& rec : r.trace.records) CHECK(rec.F <= r.trace.initial_F + 1e-9);
  }
}

TEST_CASE("residual_bound_check") {
  SolverConfig cfg;
  cfg.c1 = cfg.c2 = 2.0;
  Trace t;
  t.initial_F = 1.0;
  for (int i = 0; i < 10; ++i) {
    IterationRecord r;
    r.step_norm = 0.1 / (i + 1);
    r.prev_step_norm = i == 0 ? 0.0 : 0.1 / i;
    t.records.push_back(r);
  }
  SUBCASE("no extrapolation gives denominator 1") {
    const auto b = residual_bound_check(t, cfg, 0.0, 4.0, 3);
    // 64 (1 + 4) (1) (1 - 0) * 2 / 1
    CHECK(b.C == doctest::Approx(640.0));
    CHECK(b.rhs == doctest::Approx(std::sqrt(640.0 / 4.0)));
    const double scale = std::sqrt(2.0 * 5.0) * 4.0;
    CHECK(b.lhs == doctest::Approx(scale * (0.1 / 4 + 0.1 / 3)));
    const auto b4 = residual_bound_check(t, cfg, 0.0, 4.0, 4 * 3 + 3);
    CHECK(b4.rhs == doctest::Approx(0.5 * b.rhs));
  }
  SUBCASE("weights at the nominal cap make the constant blow up") {
    t.records[3].gamma_used = cfg.gamma_bar();
    CHECK_THROWS_WITH_AS(residual_bound_check(t, cfg, 0.0, 4.0, 3), "extrapolation cap violated",
                         InvalidArgument);
  }
  SUBCASE("clamped weights keep it finite") {
    t.records[3].gamma_used = 0.999 * cfg.gamma_bar();
    const auto b = residual_bound_check(t, cfg, 0.0, 4.0, 3);
    CHECK(std::isfinite(b.C));
    CHECK(b.C > 640.0);
  }
}
