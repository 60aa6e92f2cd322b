// Command-line front end: batch experiment runner over the chain-truncation
// library. Every subcommand writes CSV under --out; human-readable notes go
// to stderr. Exit codes: 0 success, 1 configuration error, 2 numerical
// failure.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "markov/errors.hpp"
#include "markov/experiment.hpp"
#include "markov/io.hpp"

namespace {

markov::TruncationScheme parse_scheme(const std::string& text) {
  if (text == "proportional") return markov::TruncationScheme::proportional();
  if (text == "self-loop") return markov::TruncationScheme::self_loop();
  if (text.rfind("redirect", 0) == 0) {
    markov::StateIndex z = 0;
    if (text.size() > 8) {
      if (text[8] != ':') throw CLI::ValidationError("scheme", "expected redirect:<z>");
      z = std::stoull(text.substr(9));
    }
    return markov::TruncationScheme::redirect(z);
  }
  throw CLI::ValidationError("scheme", "expected redirect[:z], proportional, or self-loop");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite truncations of countable Markov chains: stationary "
               "distributions, uniform-in-time marginal bounds, and "
               "first-transition expectations"};
  app.set_version_flag("--version", std::string("mcapprox ") + markov::kVersion);
  app.set_config("--config", "", "key=value config file; command-line flags win");
  app.require_subcommand(1);

  markov::ExperimentConfig cfg;
  std::string scheme_text = "redirect:0";
  std::string out_dir = ".";

  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--threads", cfg.threads, "worker threads for sweeps")
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "base seed for all samplers")
      ->capture_default_str();

  auto add_kernel_flags = [&](CLI::App* cmd) {
    cmd->add_option("--kernel", cfg.kernel, "kernel fixture name")
        ->capture_default_str();
    cmd->add_option("--p", cfg.p, "birth-death up probability")
        ->capture_default_str();
  };
  auto add_sweep_flags = [&](CLI::App* cmd) {
    cmd->add_option("--n-list", cfg.n_list, "truncation sizes")
        ->required()
        ->delimiter(',');
    cmd->add_option("--scheme", scheme_text,
                    "redirect[:z] | proportional | self-loop")
        ->capture_default_str();
  };

  CLI::App* truncate_cmd =
      app.add_subcommand("truncate-sweep", "emit truncated matrices and lost mass");
  add_kernel_flags(truncate_cmd);
  add_sweep_flags(truncate_cmd);

  CLI::App* stationary_cmd =
      app.add_subcommand("stationary", "stationary distribution of a matrix file");
  stationary_cmd->add_option("--matrix-file", cfg.matrix_file, "input matrix")
      ->required();

  CLI::App* interchange_cmd = app.add_subcommand(
      "interchange", "marginal-distance sweep against a reference truncation");
  add_kernel_flags(interchange_cmd);
  add_sweep_flags(interchange_cmd);
  interchange_cmd->add_option("--n-ref", cfg.n_ref, "reference truncation size")
      ->required();
  interchange_cmd->add_option("--x", cfg.x, "start state")->capture_default_str();
  interchange_cmd->add_option("--horizon", cfg.horizon, "profile horizon")
      ->capture_default_str();
  interchange_cmd->add_option("--eps-mix", cfg.eps_mix,
                              "mixing threshold used to cut the bound horizon")
      ->capture_default_str();
  interchange_cmd->add_option("--weight", cfg.weight, "none | linear (w = x+1)")
      ->capture_default_str();
  interchange_cmd
      ->add_option("--threshold-b", cfg.threshold_b,
                   "weighted-bound threshold; 0 picks the smallest power of "
                   "two from 64 whose tail term is under a tenth of the total")
      ->capture_default_str();

  CLI::App* fte_cmd =
      app.add_subcommand("fte", "first-transition expectations and cross-checks");
  add_kernel_flags(fte_cmd);
  fte_cmd->add_option("--matrix-file", cfg.matrix_file, "input matrix (overrides kernel)");
  fte_cmd->add_option("--n", cfg.n, "truncation size when kernel-driven");
  fte_cmd->add_option("--scheme", scheme_text, "truncation scheme")
      ->capture_default_str();
  fte_cmd->add_option("--target-set", cfg.target_set, "stopping states")
      ->delimiter(',');
  fte_cmd->add_option("--alpha", cfg.alpha, "constant discount rate")
      ->capture_default_str();
  fte_cmd->add_option("--reward", cfg.reward, "indicator | ones | file:<path>")
      ->capture_default_str();
  fte_cmd->add_option("--x", cfg.x, "evaluation state")->capture_default_str();
  fte_cmd->add_option("--method", cfg.method, "vi | linear | ratio | all")
      ->capture_default_str();

  CLI::App* ctmc_cmd = app.add_subcommand(
      "ctmc", "jump-process bounds and expectations for the mm1 family");
  ctmc_cmd->add_option("--arrival", cfg.arrival_rate, "arrival rate")
      ->capture_default_str();
  ctmc_cmd->add_option("--service", cfg.service_rate, "service rate")
      ->capture_default_str();
  ctmc_cmd->add_option("--n-list", cfg.n_list, "truncation sizes")->delimiter(',');
  ctmc_cmd->add_option("--n-ref", cfg.n_ref, "reference truncation size");
  ctmc_cmd->add_option("--x", cfg.x, "start state")->capture_default_str();
  ctmc_cmd->add_option("--time-horizon", cfg.skeleton_horizon,
                       "skeleton steps for the certified bound")
      ->capture_default_str();
  ctmc_cmd->add_option("--skeleton-step", cfg.skeleton_step,
                       "time length of one skeleton step")
      ->capture_default_str();
  ctmc_cmd->add_option("--eps", cfg.eps, "uniformization tail tolerance")
      ->capture_default_str();
  ctmc_cmd->add_option("--target-set", cfg.target_set,
                       "optional stopping states for hitting expectations")
      ->delimiter(',');
  ctmc_cmd->add_option("--alpha", cfg.alpha, "constant discount rate")
      ->capture_default_str();
  ctmc_cmd->add_option("--rates-file", cfg.rates_file,
                       "generator file (mc-rates v1); replaces the mm1 sweep");

  CLI::App* counter_cmd = app.add_subcommand(
      "counterexample", "halving chain with a dyadic jump band: exact probes");
  counter_cmd->add_option("--n-list", cfg.n_list, "family members")
      ->required()
      ->delimiter(',');
  counter_cmd->add_option("--x", cfg.x_real, "start point in (0, 1]")
      ->capture_default_str();

  CLI::App* lindley_cmd = app.add_subcommand(
      "lindley", "coupled waiting-time chains with common random numbers");
  lindley_cmd->add_option("--drift-family", cfg.drift_family,
                          "increment family (uniform-shift: Z = U + base - 1/n)")
      ->capture_default_str();
  lindley_cmd->add_option("--drift-base", cfg.drift_base,
                          "base shift of the uniform increment family")
      ->capture_default_str();
  lindley_cmd->add_option("--n-list", cfg.n_list, "family indices (shift 1/n)")
      ->required()
      ->delimiter(',');
  lindley_cmd->add_option("--horizon", cfg.horizon, "path length")
      ->capture_default_str();
  lindley_cmd->add_option("--samples", cfg.samples, "coupled paths")
      ->capture_default_str();

  CLI::App* ifs_cmd = app.add_subcommand(
      "ifs", "backward iteration of contractive random affine maps");
  ifs_cmd->add_option("--family", cfg.ifs_family, "deterministic | random")
      ->capture_default_str();
  ifs_cmd->add_option("--ratio", cfg.ratio, "contraction ratio")
      ->capture_default_str();
  ifs_cmd->add_option("--k-list", cfg.k_list, "composition depths")
      ->required()
      ->delimiter(',');
  ifs_cmd->add_option("--x", cfg.x_real, "start point")->capture_default_str();
  ifs_cmd->add_option("--samples", cfg.samples, "independent compositions")
      ->capture_default_str();

  for (CLI::App* cmd : {truncate_cmd, stationary_cmd, interchange_cmd, fte_cmd,
                        ctmc_cmd, counter_cmd, lindley_cmd, ifs_cmd}) {
    cmd->set_version_flag("--version", std::string("mcapprox ") + markov::kVersion);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  for (CLI::App* cmd : {truncate_cmd, stationary_cmd, interchange_cmd, fte_cmd,
                        ctmc_cmd, counter_cmd, lindley_cmd, ifs_cmd}) {
    if (cmd->parsed()) cfg.command = cmd->get_name();
  }
  cfg.out_dir = out_dir;
  try {
    cfg.scheme = parse_scheme(scheme_text);
    return markov::run_experiment(cfg);
  } catch (const markov::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const markov::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const markov::Error& e) {
    std::cerr << "numerical failure in " << cfg.command << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
