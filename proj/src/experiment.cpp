#include "markov/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <sstream>

#include "markov/fixtures.hpp"
#include "markov/fte.hpp"
#include "markov/interchange.hpp"
#include "markov/io.hpp"
#include "markov/jump.hpp"
#include "markov/stationary.hpp"

namespace markov {

namespace {

std::string join_sizes(const std::vector<std::size_t>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(values[i]);
  }
  return out;
}

std::string join_states(const std::vector<StateIndex>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(values[i]);
  }
  return out;
}

std::string scheme_str(const TruncationScheme& scheme) {
  std::string s = scheme.name();
  if (scheme.kind == TruncationScheme::Kind::kRedirect) {
    s += ":" + std::to_string(scheme.redirect_to);
  }
  return s;
}

// Runs f(i) for i in [0, count) on up to `threads` workers and returns the
// results in index order, so the output does not depend on scheduling.
template <typename T>
std::vector<T> ordered_parallel(std::size_t count, int threads,
                                const std::function<T(std::size_t)>& f) {
  std::vector<T> results(count);
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) results[i] = f(i);
    return results;
  }
  std::vector<std::future<T>> futures;
  futures.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    futures.push_back(std::async(std::launch::async, f, i));
  }
  for (std::size_t i = 0; i < count; ++i) results[i] = futures[i].get();
  return results;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

CountableKernel make_kernel(const ExperimentConfig& cfg) {
  require(cfg.kernel == "birth-death",
          "unknown kernel '" + cfg.kernel + "' (expected birth-death)");
  require(cfg.p > 0.0 && cfg.p < 0.5, "kernel parameter p must lie in (0, 1/2)");
  return birth_death_kernel(cfg.p);
}

void validate_sweep(const ExperimentConfig& cfg) {
  require(!cfg.n_list.empty(), "n-list must not be empty");
  require(cfg.n_ref > *std::max_element(cfg.n_list.begin(), cfg.n_list.end()),
          "n-ref must exceed every entry of n-list");
  require(cfg.horizon >= 1, "horizon must be positive");
  require(cfg.eps_mix > 0.0, "eps-mix must be positive");
}

std::ofstream open_csv(const ExperimentConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.out_dir);
  std::ofstream out(cfg.out_dir / name, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + (cfg.out_dir / name).string());
  return out;
}

// Smallest m with TV(P^m(x, .), pi) below eps_mix; the horizon the certified
// bound is cut at.
std::size_t mixing_horizon(const StochasticMatrix& m, const ProbDist& pi,
                           StateIndex x, double eps_mix, std::size_t cap) {
  ProbDist d = ProbDist::delta(x);
  for (std::size_t step = 0; step <= cap; ++step) {
    if (step > 0) d = propagate(d, m);
    if (tv_distance(d, pi) < eps_mix) return step;
  }
  throw ConvergenceError("reference chain did not mix to eps-mix within " +
                             std::to_string(cap) + " steps",
                         {}, eps_mix);
}

int run_truncate_sweep(const ExperimentConfig& cfg) {
  require(!cfg.n_list.empty(), "n-list must not be empty");
  CountableKernel kernel = make_kernel(cfg);

  std::ostringstream comment;
  comment << "cmd=truncate-sweep kernel=" << cfg.kernel << " p=" << fmt_double(cfg.p)
          << " n_list=" << join_sizes(cfg.n_list) << " scheme=" << scheme_str(cfg.scheme);
  auto csv_stream = open_csv(cfg, "truncate_sweep.csv");
  CsvWriter csv(csv_stream, comment.str(), {"n", "scheme", "max_lost_mass"});

  for (std::size_t n : cfg.n_list) {
    TruncatedChain chain = truncate(kernel, n, cfg.scheme);
    write_matrix_file(cfg.out_dir / ("matrix_n" + std::to_string(n) + ".txt"),
                      chain.matrix);
    csv.row({std::to_string(n), cfg.scheme.name(),
             fmt_double(chain.max_lost_mass())});
  }
  return 0;
}

int run_stationary(const ExperimentConfig& cfg) {
  require(!cfg.matrix_file.empty(), "matrix-file is required");
  StochasticMatrix m = read_matrix_file(cfg.matrix_file);
  ProbDist pi = gth(m);
  std::filesystem::create_directories(cfg.out_dir);
  write_dist_file(cfg.out_dir / "pi.txt", pi);
  std::cerr << "residual " << fmt_double(stationarity_residual(pi, m)) << "\n";
  return 0;
}

struct InterchangeRow {
  std::size_t n;
  SupTvResult sup;
  UniformBoundReport bound;
  double weighted = -1.0;  // negative when not requested
  double threshold_b = 0.0;
};

// The tail part of the weighted bound at threshold b.
double weighted_tail_term(const ProbDist& pi_a, const ProbDist& pi_b, StateIndex x,
                          const WeightFunction& w, double b) {
  auto tail = [&](const ProbDist& pi) {
    double t = 0.0;
    for (const auto& [y, mass] : pi.support()) {
      double wy = w(y);
      if (wy > b) t += wy * mass;
    }
    return t;
  };
  return 2.0 * std::max(tail(pi_a), tail(pi_b)) /
         std::min(pi_a.mass_at(x), pi_b.mass_at(x));
}

int run_interchange(const ExperimentConfig& cfg) {
  validate_sweep(cfg);
  require(cfg.weight == "none" || cfg.weight == "linear",
          "weight must be none or linear");
  CountableKernel kernel = make_kernel(cfg);

  TruncatedChain ref_chain = truncate(kernel, cfg.n_ref, cfg.scheme);
  require(cfg.x < cfg.n_ref, "start state outside reference dimension");
  const StochasticMatrix& ref = ref_chain.matrix;
  ProbDist pi_ref = gth(ref);
  std::size_t t = mixing_horizon(ref, pi_ref, cfg.x, cfg.eps_mix, 100000);

  const bool weighted = cfg.weight == "linear";
  WeightFunction w([](StateIndex y) { return static_cast<double>(y) + 1.0; });

  std::function<InterchangeRow(std::size_t)> task = [&](std::size_t i) {
    std::size_t n = cfg.n_list[i];
    TruncatedChain chain = truncate(kernel, n, cfg.scheme);
    StochasticMatrix extended = extend_to(chain, cfg.n_ref);
    ProbDist pi_n = embed(gth(chain.matrix));
    InterchangeRow row;
    row.n = n;
    row.sup = sup_tv_horizon(extended, ref, cfg.x, cfg.horizon);
    row.bound = certified_uniform_bound(extended, ref, pi_n, pi_ref, cfg.x, t);
    if (weighted) {
      // default threshold: smallest power of two from 64 up whose tail
      // contribution drops below a tenth of the certified total
      double b = cfg.threshold_b;
      if (b <= 0.0) {
        b = 64.0;
        while (b < 0x1p40 &&
               weighted_tail_term(pi_n, pi_ref, cfg.x, w, b) >= row.bound.total / 10.0) {
          b *= 2.0;
        }
      }
      row.threshold_b = b;
      row.weighted =
          weighted_uniform_bound(extended, ref, pi_n, pi_ref, cfg.x, t, w, b);
    }
    return row;
  };
  auto rows = ordered_parallel<InterchangeRow>(cfg.n_list.size(), cfg.threads, task);

  std::ostringstream comment;
  comment << "cmd=interchange kernel=" << cfg.kernel << " p=" << fmt_double(cfg.p)
          << " n_list=" << join_sizes(cfg.n_list) << " n_ref=" << cfg.n_ref
          << " scheme=" << scheme_str(cfg.scheme) << " x=" << cfg.x
          << " horizon=" << cfg.horizon << " t=" << t
          << " eps_mix=" << fmt_double(cfg.eps_mix) << " weight=" << cfg.weight
          << " b="
          << (cfg.threshold_b > 0.0 ? fmt_double(cfg.threshold_b)
                                    : std::string("auto"));
  std::vector<std::string> header = {"n",           "m_argmax",
                                     "sup_tv",      "bound_total",
                                     "bound_transient", "bound_stationary",
                                     "bound_mixing"};
  if (weighted) {
    header.push_back("threshold_b");
    header.push_back("weighted_bound");
  }
  auto csv_stream = open_csv(cfg, "interchange.csv");
  CsvWriter csv(csv_stream, comment.str(), header);
  for (const auto& row : rows) {
    std::vector<std::string> fields = {
        std::to_string(row.n),          std::to_string(row.sup.argmax),
        fmt_double(row.sup.max_tv),     fmt_double(row.bound.total),
        fmt_double(row.bound.term_transient),
        fmt_double(row.bound.term_stationary),
        fmt_double(row.bound.term_mixing)};
    if (weighted) {
      fields.push_back(fmt_double(row.threshold_b));
      fields.push_back(fmt_double(row.weighted));
    }
    csv.row(fields);
  }
  return 0;
}

std::function<double(StateIndex)> make_reward(const ExperimentConfig& cfg,
                                              const std::vector<char>& in_continue) {
  if (cfg.reward == "indicator") {
    return [in_continue](StateIndex y) {
      return (y < in_continue.size() && in_continue[y]) ? 1.0 : 0.0;
    };
  }
  if (cfg.reward == "ones") {
    return [](StateIndex) { return 1.0; };
  }
  if (cfg.reward.rfind("file:", 0) == 0) {
    std::ifstream in(cfg.reward.substr(5));
    if (!in) throw ConfigError("cannot open reward file " + cfg.reward.substr(5));
    std::vector<double> values;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream ss(line);
      std::size_t state;
      double value;
      if (!(ss >> state >> value)) throw ConfigError("malformed reward line: " + line);
      if (state >= values.size()) values.resize(state + 1, 0.0);
      values[state] = value;
    }
    return [values](StateIndex y) { return y < values.size() ? values[y] : 0.0; };
  }
  throw ConfigError("unknown reward '" + cfg.reward + "'");
}

int run_fte(const ExperimentConfig& cfg) {
  require(cfg.method == "vi" || cfg.method == "linear" || cfg.method == "ratio" ||
              cfg.method == "all",
          "method must be vi, linear, ratio, or all");
  StochasticMatrix m = [&] {
    if (!cfg.matrix_file.empty()) return read_matrix_file(cfg.matrix_file);
    require(cfg.n >= 1, "either matrix-file or a truncation size n is required");
    return truncate(make_kernel(cfg), cfg.n, cfg.scheme).matrix;
  }();
  require(cfg.x < m.dimension(), "start state outside matrix dimension");
  require(cfg.alpha >= 0.0, "alpha must be non-negative");

  std::vector<char> in_continue(m.dimension(), 1);
  for (StateIndex tgt : cfg.target_set) {
    require(tgt < m.dimension(), "target state outside matrix dimension");
    in_continue[tgt] = 0;
  }
  RewardSpec spec;
  for (StateIndex y = 0; y < m.dimension(); ++y) {
    if (in_continue[y]) spec.continue_region.push_back(y);
  }
  spec.reward = make_reward(cfg, in_continue);
  spec.discount_rate = [alpha = cfg.alpha](StateIndex) { return alpha; };
  require(!spec.continue_region.empty(), "continue region is empty");
  bool x_in_c = in_continue[cfg.x] != 0;

  const bool want_vi = cfg.method == "vi" || cfg.method == "all";
  const bool want_linear = cfg.method == "linear" || cfg.method == "all";
  const bool want_ratio = (cfg.method == "ratio" || cfg.method == "all") && x_in_c;

  std::vector<double> computed;
  std::string u_vi, u_linear, u_ratio;
  if (want_vi) {
    FteSolution sol = minimal_solution(m, spec, cfg.tol, cfg.cap, cfg.max_iters);
    computed.push_back(sol.u[cfg.x]);
    u_vi = fmt_double(sol.u[cfg.x]);
  }
  if (want_linear) {
    FteSolution sol = linear_solve_fte(m, spec);
    computed.push_back(sol.u[cfg.x]);
    u_linear = fmt_double(sol.u[cfg.x]);
  }
  if (want_ratio) {
    double ratio = regenerative_ratio(m, spec, cfg.x, cfg.tol, cfg.cap, cfg.max_iters);
    computed.push_back(ratio);
    u_ratio = fmt_double(ratio);
  }
  bool agree = true;
  for (double a : computed) {
    for (double b : computed) {
      if (std::isinf(a) && std::isinf(b)) continue;
      if (std::abs(a - b) > cfg.agree_tol) agree = false;
    }
  }

  std::ostringstream comment;
  comment << "cmd=fte source="
          << (cfg.matrix_file.empty() ? cfg.kernel + " n=" + std::to_string(cfg.n)
                                      : cfg.matrix_file)
          << " target_set=" << join_states(cfg.target_set)
          << " alpha=" << fmt_double(cfg.alpha) << " reward=" << cfg.reward
          << " x=" << cfg.x << " method=" << cfg.method;
  auto csv_stream = open_csv(cfg, "fte.csv");
  CsvWriter csv(csv_stream, comment.str(),
                {"x", "u_vi", "u_linear", "u_ratio", "agree"});
  csv.row({std::to_string(cfg.x), u_vi, u_linear, u_ratio, agree ? "1" : "0"});
  return 0;
}

struct CtmcRow {
  std::size_t n;
  CtmcUniformBoundReport bound;
  double u = -1.0;
};

RewardSpec hitting_spec_for(std::size_t dimension,
                            const std::vector<StateIndex>& target_set,
                            double alpha) {
  std::vector<char> in_continue(dimension, 1);
  for (StateIndex tgt : target_set) {
    if (tgt >= dimension) throw ConfigError("target outside dimension");
    in_continue[tgt] = 0;
  }
  RewardSpec spec;
  for (StateIndex y = 0; y < dimension; ++y) {
    if (in_continue[y]) spec.continue_region.push_back(y);
  }
  spec.reward = [in_continue](StateIndex y) {
    return (y < in_continue.size() && in_continue[y]) ? 1.0 : 0.0;
  };
  spec.discount_rate = [alpha](StateIndex) { return alpha; };
  return spec;
}

// Single-generator mode: the self-bound isolates the mixing term of the
// certified bound, reported next to the hitting expectation.
int run_ctmc_single(const ExperimentConfig& cfg) {
  require(cfg.eps > 0.0, "eps must be positive");
  RateMatrix q = read_rates_file(cfg.rates_file);
  require(cfg.x < q.dimension(), "start state outside generator dimension");
  for (StateIndex tgt : cfg.target_set) {
    require(tgt != cfg.x, "start state x lies in the target set");
  }
  ProbDist pi = ctmc_stationary(q);
  std::cerr << "stationarity residual "
            << fmt_double(ctmc_stationarity_residual(pi, q)) << "\n";
  CtmcUniformBoundReport bound = ctmc_certified_uniform_bound(
      q, q, pi, pi, cfg.x, cfg.skeleton_horizon, cfg.eps, cfg.skeleton_step);
  double u = -1.0;
  if (!cfg.target_set.empty()) {
    RewardSpec spec = hitting_spec_for(q.dimension(), cfg.target_set, cfg.alpha);
    u = ctmc_fte(q, spec, cfg.x, cfg.tol, cfg.cap, cfg.max_iters);
  }

  std::ostringstream comment;
  comment << "cmd=ctmc rates_file=" << cfg.rates_file << " x=" << cfg.x
          << " skeleton_horizon=" << cfg.skeleton_horizon
          << " skeleton_step=" << fmt_double(cfg.skeleton_step)
          << " eps=" << fmt_double(cfg.eps)
          << " target_set=" << join_states(cfg.target_set)
          << " alpha=" << fmt_double(cfg.alpha);
  auto csv_stream = open_csv(cfg, "ctmc.csv");
  CsvWriter csv(csv_stream, comment.str(),
                {"n", "bound_total", "bound_transient", "bound_stationary",
                 "bound_mixing", "skeleton_slack", "u_fte"});
  csv.row({std::to_string(q.dimension()), fmt_double(bound.total()),
           fmt_double(bound.skeleton.term_transient),
           fmt_double(bound.skeleton.term_stationary),
           fmt_double(bound.skeleton.term_mixing),
           fmt_double(bound.truncation_slack),
           u < 0.0 ? std::string() : fmt_double(u)});
  return 0;
}

int run_ctmc(const ExperimentConfig& cfg) {
  if (!cfg.rates_file.empty()) return run_ctmc_single(cfg);
  validate_sweep(cfg);
  require(cfg.arrival_rate > 0.0 && cfg.service_rate > 0.0, "rates must be positive");
  require(cfg.eps > 0.0, "eps must be positive");
  require(cfg.x < cfg.n_ref, "start state outside reference dimension");
  for (StateIndex tgt : cfg.target_set) {
    require(tgt != cfg.x, "start state x lies in the target set");
  }

  RateMatrix q_ref = mm1_rate_matrix(cfg.arrival_rate, cfg.service_rate, cfg.n_ref);
  ProbDist pi_ref = ctmc_stationary(q_ref);

  std::function<CtmcRow(std::size_t)> task = [&](std::size_t i) {
    std::size_t n = cfg.n_list[i];
    RateMatrix q_n = mm1_rate_matrix(cfg.arrival_rate, cfg.service_rate, n, cfg.n_ref);
    ProbDist pi_n = ctmc_stationary(q_n);
    CtmcRow row;
    row.n = n;
    row.bound = ctmc_certified_uniform_bound(q_n, q_ref, pi_n, pi_ref, cfg.x,
                                             cfg.skeleton_horizon, cfg.eps,
                                             cfg.skeleton_step);
    if (!cfg.target_set.empty()) {
      RewardSpec spec = hitting_spec_for(q_n.dimension(), cfg.target_set, cfg.alpha);
      row.u = ctmc_fte(q_n, spec, cfg.x, cfg.tol, cfg.cap, cfg.max_iters);
    }
    return row;
  };
  auto rows = ordered_parallel<CtmcRow>(cfg.n_list.size(), cfg.threads, task);

  std::ostringstream comment;
  comment << "cmd=ctmc kernel=mm1 arrival=" << fmt_double(cfg.arrival_rate)
          << " service=" << fmt_double(cfg.service_rate)
          << " n_list=" << join_sizes(cfg.n_list) << " n_ref=" << cfg.n_ref
          << " x=" << cfg.x << " skeleton_horizon=" << cfg.skeleton_horizon
          << " skeleton_step=" << fmt_double(cfg.skeleton_step)
          << " eps=" << fmt_double(cfg.eps)
          << " target_set=" << join_states(cfg.target_set)
          << " alpha=" << fmt_double(cfg.alpha);
  auto csv_stream = open_csv(cfg, "ctmc.csv");
  CsvWriter csv(csv_stream, comment.str(),
                {"n", "bound_total", "bound_transient", "bound_stationary",
                 "bound_mixing", "skeleton_slack", "u_fte"});
  for (const auto& row : rows) {
    csv.row({std::to_string(row.n), fmt_double(row.bound.total()),
             fmt_double(row.bound.skeleton.term_transient),
             fmt_double(row.bound.skeleton.term_stationary),
             fmt_double(row.bound.skeleton.term_mixing),
             fmt_double(row.bound.truncation_slack),
             row.u < 0.0 ? std::string() : fmt_double(row.u)});
  }
  return 0;
}

int run_counterexample(const ExperimentConfig& cfg) {
  require(!cfg.n_list.empty(), "n-list must not be empty");
  require(cfg.x_real > 0.0 && cfg.x_real <= 1.0, "x must lie in (0, 1]");

  std::ostringstream comment;
  comment << "cmd=counterexample n_list=" << join_sizes(cfg.n_list)
          << " x=" << fmt_double(cfg.x_real);
  auto csv_stream = open_csv(cfg, "counterexample.csv");
  CsvWriter csv(csv_stream, comment.str(),
                {"n", "m_hit", "probe_mass_at_1", "w1_pi_to_delta0"});
  for (std::size_t n : cfg.n_list) {
    require(cfg.x_real > std::ldexp(1.0, -static_cast<int>(n)),
            "x must exceed 2^-n for every n in the list");
    CounterexampleReport report =
        counterexample_report(static_cast<unsigned>(n), cfg.x_real);
    csv.row({std::to_string(n), std::to_string(report.hitting_steps),
             fmt_double(report.probe_mass_at_1),
             fmt_double(report.w1_pi_n_to_delta0)});
  }
  return 0;
}

int run_lindley(const ExperimentConfig& cfg) {
  require(!cfg.n_list.empty(), "n-list must not be empty");
  require(cfg.samples >= 100, "need at least 100 sample paths");
  require(cfg.drift_family == "uniform-shift",
          "unknown drift family '" + cfg.drift_family + "' (expected uniform-shift)");
  require(0.5 + cfg.drift_base < 0.0,
          "drift base must make the mean increment negative");

  LindleySpec reference{[base = cfg.drift_base](double u) { return u + base; }};

  std::ostringstream comment;
  comment << "cmd=lindley drift_family=" << cfg.drift_family
          << " drift_base=" << fmt_double(cfg.drift_base)
          << " n_list=" << join_sizes(cfg.n_list) << " horizon=" << cfg.horizon
          << " samples=" << cfg.samples << " seed=" << cfg.seed;
  auto csv_stream = open_csv(cfg, "lindley.csv");
  CsvWriter csv(csv_stream, comment.str(),
                {"n", "m_argmax", "sup_coupling_estimate", "stderr"});
  for (std::size_t n : cfg.n_list) {
    require(n >= 1, "family index must be positive");
    LindleySpec member{[base = cfg.drift_base, n](double u) {
      return u + base - 1.0 / static_cast<double>(n);
    }};
    CoupledDistanceResult result = lindley_coupled_sup_distance(
        reference, member, 0.0, cfg.horizon, cfg.samples, cfg.seed);
    csv.row({std::to_string(n), std::to_string(result.argmax),
             fmt_double(result.sup), fmt_double(result.sup_stderr)});
  }
  return 0;
}

int run_ifs(const ExperimentConfig& cfg) {
  require(!cfg.k_list.empty(), "k-list must not be empty");
  require(cfg.ratio > 0.0 && cfg.ratio < 1.0, "ratio must lie in (0, 1)");
  require(cfg.ifs_family == "deterministic" || cfg.ifs_family == "random",
          "ifs family must be deterministic or random");

  IfsSpec spec;
  spec.contraction_ratio = cfg.ratio;
  if (cfg.ifs_family == "deterministic") {
    spec.sample_map = [r = cfg.ratio](std::mt19937_64&) {
      return std::function<double(double)>([r](double v) { return r * v + 1.0; });
    };
  } else {
    // slope uniform on [0, 2r) so the mean contraction factor is r
    spec.sample_map = [r = cfg.ratio](std::mt19937_64& rng) {
      double slope = 2.0 * r * uniform01(rng);
      double offset = uniform01(rng);
      return std::function<double(double)>(
          [slope, offset](double v) { return slope * v + offset; });
    };
  }

  std::ostringstream comment;
  comment << "cmd=ifs family=" << cfg.ifs_family << " ratio=" << fmt_double(cfg.ratio)
          << " k_list=" << join_sizes(cfg.k_list) << " x=" << fmt_double(cfg.x_real)
          << " samples=" << cfg.samples << " seed=" << cfg.seed;
  auto csv_stream = open_csv(cfg, "ifs.csv");
  CsvWriter csv(csv_stream, comment.str(),
                {"k", "mean", "stderr", "tail_bound"});
  for (std::size_t k : cfg.k_list) {
    IfsBackwardResult result =
        ifs_backward(spec, k, cfg.x_real, cfg.samples, cfg.seed);
    double sum = 0.0, sumsq = 0.0;
    for (double v : result.samples) {
      sum += v;
      sumsq += v * v;
    }
    double mean = sum / static_cast<double>(result.samples.size());
    double var = std::max(0.0, sumsq / static_cast<double>(result.samples.size()) -
                                   mean * mean);
    double se = std::sqrt(var / static_cast<double>(result.samples.size()));
    csv.row({std::to_string(k), fmt_double(mean), fmt_double(se),
             fmt_double(result.tail_bound)});
  }
  return 0;
}

}  // namespace

int run_experiment(const ExperimentConfig& cfg) {
  require(cfg.tol > 0.0 && cfg.cap > 0.0, "tolerances must be positive");
  require(cfg.threads >= 1, "threads must be at least 1");

  if (cfg.command == "truncate-sweep") return run_truncate_sweep(cfg);
  if (cfg.command == "stationary") return run_stationary(cfg);
  if (cfg.command == "interchange") return run_interchange(cfg);
  if (cfg.command == "fte") return run_fte(cfg);
  if (cfg.command == "ctmc") return run_ctmc(cfg);
  if (cfg.command == "counterexample") return run_counterexample(cfg);
  if (cfg.command == "lindley") return run_lindley(cfg);
  if (cfg.command == "ifs") return run_ifs(cfg);
  throw ConfigError("unknown command '" + cfg.command + "'");
}

}  // namespace markov
