#include "densek_cli/run.hpp"

#include <spdlog/spdlog.h>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "densek/baselines.hpp"
#include "densek/error.hpp"
#include "densek/metrics.hpp"

namespace densek::cli {
namespace {

struct Cell {
  std::string method;
  std::size_t k1 = 0;
  std::size_t k2 = 0;  // 0 in dks mode
};

struct Outcome {
  bool ok = false;
  double density = 0.0;
  std::size_t edges_inside = 0;
  double runtime_ms = 0.0;
  std::size_t iterations = 0;
  std::string converged_by;
  double distance = 0.0;
  std::vector<IterationRecord> trace;
  std::string error;
};

bool known_method(Mode mode, const std::string& m) {
  if (mode == Mode::dks) return m == "epprox" || m == "greedy" || m == "tpm" || m == "brute";
  return m == "epprox" || m == "brute";
}

void check_increasing(const std::vector<std::size_t>& v, const char* flag) {
  if (v.empty()) throw InvalidArgument(std::string(flag) + " is required");
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] <= v[i - 1]) {
      throw InvalidArgument(std::string(flag) + " values must be strictly increasing");
    }
  }
  if (v.front() < 1) throw InvalidArgument(std::string(flag) + " values must be >= 1");
}

std::vector<Cell> make_cells(const RunSpec& spec) {
  std::vector<Cell> cells;
  for (const auto& m : spec.methods) {
    if (spec.mode == Mode::dks) {
      for (auto k : spec.k) cells.push_back({m, k, 0});
    } else {
      for (auto a : spec.k1)
        for (auto b : spec.k2) cells.push_back({m, a, b});
    }
  }
  return cells;
}

template <class Fn>
Outcome timed(Fn&& fn) {
  Outcome o;
  try {
    const auto start = std::chrono::steady_clock::now();
    fn(o);
    o.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    o.ok = true;
  } catch (const std::exception& e) {
    o.ok = false;
    o.error = e.what();
  }
  return o;
}

void take_solver(Outcome& o, SolverResult r) {
  o.density = r.density;
  o.edges_inside = r.edges_inside;
  o.iterations = r.iterations;
  o.converged_by = std::string(to_string(r.converged_by));
  o.distance = r.distance_to_binary;
  o.trace = std::move(r.trace.records);
}

void take_baseline(Outcome& o, const BaselineResult& r) {
  o.density = r.density;
  o.edges_inside = r.edges_inside;
  o.iterations = r.iterations;
}

Outcome run_dks(const Graph& g, const Cell& c, const SolverConfig& cfg) {
  return timed([&](Outcome& o) {
    if (c.method == "epprox") {
      take_solver(o, ep_prox_solve(g, c.k1, cfg));
    } else if (c.method == "greedy") {
      take_baseline(o, greedy_dks(g, c.k1));
    } else if (c.method == "tpm") {
      take_baseline(o, tpm_dks(g, c.k1));
    } else {
      take_baseline(o, brute_force_dks(g, c.k1));
    }
  });
}

Outcome run_dkbs(const BipartiteGraph& bg, const Cell& c, const SolverConfig& cfg) {
  return timed([&](Outcome& o) {
    if (c.method == "epprox") {
      take_solver(o, ep_prox_solve_bipartite(bg, c.k1, c.k2, cfg));
    } else {
      take_baseline(o, brute_force_dkbs(bg, c.k1, c.k2));
    }
  });
}

// Cells are claimed from a shared counter; results land in their own slot
// so output order never depends on scheduling.
template <class Solve>
std::vector<Outcome> run_cells(const std::vector<Cell>& cells, std::size_t jobs, Solve&& solve) {
  std::vector<Outcome> out(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      spdlog::debug("cell {} method={} k1={} k2={}", i, cells[i].method, cells[i].k1, cells[i].k2);
      out[i] = solve(cells[i]);
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(jobs, cells.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

std::string fmt_double(double v, int precision = 12) {
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

std::string fmt_ms(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(3) << v;
  return s.str();
}

void write_trace(std::ostream& os, const Cell& c, Mode mode,
                 const std::vector<IterationRecord>& trace) {
  for (const auto& r : trace) {
    nlohmann::json j;
    j["method"] = c.method;
    j["k1"] = c.k1;
    if (mode == Mode::dkbs) j["k2"] = c.k2;
    j["iter"] = r.iter;
    j["lambda"] = r.lambda;
    j["F"] = r.F;
    j["f"] = r.f;
    j["h"] = r.h;
    j["psi"] = r.psi;
    j["step_norm"] = r.step_norm;
    j["rel_change"] = r.rel_change;
    j["residual_proxy"] = r.residual_proxy;
    j["gamma"] = r.gamma_used;
    j["eta"] = r.eta_used;
    os << j.dump() << '\n';
  }
}

}  // namespace

SolverConfig solver_config(const RunSpec& spec) {
  SolverConfig c = spec.mode == Mode::dks ? SolverConfig::dks_defaults()
                                          : SolverConfig::dkbs_defaults();
  if (spec.lambda0) c.lambda0 = *spec.lambda0;
  if (spec.lambda_growth) c.lambda_growth = *spec.lambda_growth;
  if (spec.max_iter) c.max_iter = *spec.max_iter;
  if (spec.stop_tol) c.stop_sq_tol = *spec.stop_tol;
  if (spec.c1) c.c1 = *spec.c1;
  if (spec.c2) c.c2 = *spec.c2;
  if (spec.extrapolation) c.extrapolation = *spec.extrapolation;
  c.seed = spec.seed;
  return c;
}

void validate(const RunSpec& spec) {
  if (spec.input.empty()) throw InvalidArgument("--input is required");
  if (spec.methods.empty()) throw InvalidArgument("at least one method is required");
  for (const auto& m : spec.methods) {
    if (!known_method(spec.mode, m)) {
      throw InvalidArgument("unknown method '" + m + "' for " +
                            (spec.mode == Mode::dks ? "dks" : "dkbs"));
    }
  }
  if (spec.mode == Mode::dks) {
    check_increasing(spec.k, "--k");
  } else {
    check_increasing(spec.k1, "--k1");
    check_increasing(spec.k2, "--k2");
  }
  if (spec.jobs < 1) throw InvalidArgument("--jobs must be >= 1");
  solver_config(spec).validate();
}

int run(const RunSpec& spec, std::ostream& csv) {
  std::vector<Cell> cells;
  SolverConfig cfg;
  std::optional<Graph> g;
  std::optional<BipartiteGraph> bg;
  try {
    validate(spec);
    cfg = solver_config(spec);
    cells = make_cells(spec);
    std::ifstream in(spec.input);
    if (!in) throw Error("cannot open " + spec.input);
    const auto start = std::chrono::steady_clock::now();
    if (spec.mode == Mode::dks) {
      g = preprocess_unipartite(load_edge_list(in, spec.format, LabelSpace::shared));
      for (auto k : spec.k) {
        if (k >= g->n()) {
          throw InvalidArgument("k = " + std::to_string(k) + " must be < n = " +
                                std::to_string(g->n()));
        }
      }
    } else {
      bg = preprocess_bipartite(load_edge_list(in, spec.format, LabelSpace::per_column));
      if (spec.k1.back() >= bg->n1() || spec.k2.back() >= bg->n2()) {
        throw InvalidArgument("need k1 < n1 = " + std::to_string(bg->n1()) + " and k2 < n2 = " +
                              std::to_string(bg->n2()));
      }
    }
    spdlog::info("loaded {} in {:.3f}s", spec.input,
                 std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  } catch (const ParseError& e) {
    spdlog::error("{}: {}", spec.input, e.what());
    return 2;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 2;
  }

  std::vector<Outcome> results;
  if (g) {
    results = run_cells(cells, spec.jobs, [&](const Cell& c) { return run_dks(*g, c, cfg); });
  } else {
    results = run_cells(cells, spec.jobs, [&](const Cell& c) { return run_dkbs(*bg, c, cfg); });
  }

  const std::string dataset = std::filesystem::path(spec.input).stem().string();
  const std::size_t n = g ? g->n() : bg->n1() + bg->n2();
  const std::size_t m = g ? g->m() : bg->m();
  const char* mode = spec.mode == Mode::dks ? "dks" : "dkbs";

  std::ofstream trace;
  if (!spec.trace_out.empty()) {
    trace.open(spec.trace_out);
    if (!trace) spdlog::error("cannot open trace file {}", spec.trace_out);
  }

  int status = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!results[i].ok) {
      spdlog::error("{} k1={} k2={}: {}", cells[i].method, cells[i].k1, cells[i].k2,
                    results[i].error);
      status = 1;
    }
  }
  csv << kCsvHeader << '\n';
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& c = cells[i];
    const auto& o = results[i];
    csv << dataset << ',' << n << ',' << m << ',' << mode << ',' << c.k1 << ',';
    if (spec.mode == Mode::dkbs) csv << c.k2;
    csv << ',' << c.method << ',';
    if (o.ok) {
      csv << fmt_double(o.density) << ',' << o.edges_inside << ',' << fmt_ms(o.runtime_ms) << ','
          << o.iterations << ',' << o.converged_by << ',' << fmt_double(o.distance) << ',';
    } else {
      csv << ",,,,error,,";
    }
    csv << spec.seed << '\n';
    if (trace.is_open() && !o.trace.empty()) write_trace(trace, c, spec.mode, o.trace);
  }
  csv.flush();
  return status;
}

int run(const RunSpec& spec) {
  if (spec.out.empty()) return run(spec, std::cout);
  // Buffer so that a failed load leaves no file behind.
  std::ostringstream buf;
  const int status = run(spec, buf);
  if (status == 2) return status;
  std::ofstream out(spec.out);
  if (!out) {
    spdlog::error("cannot write {}", spec.out);
    return 2;
  }
  out << buf.str();
  return out ? status : 2;
}

}  // namespace densek::cli
