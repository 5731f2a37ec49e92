#include "kavg/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "kavg/config.hpp"
#include "kavg/errors.hpp"
#include "kavg/manifest.hpp"
#include "kavg/oracle.hpp"
#include "kavg/trajectory.hpp"

namespace kavg::cli {

std::vector<CsvRow> trajectory_rows(std::span<const MetricsSample> samples) {
  std::vector<CsvRow> rows;
  for (const auto& s : samples) rows.push_back({s.l, s.t_l1, s.s_l2, s.m_ratio});
  return rows;
}

std::vector<CsvRow> theta_rows(std::span<const ThetaRow> rows) {
  std::vector<CsvRow> out;
  for (const auto& r : rows) {
    const auto& s = r.t_l1;
    out.push_back({std::uint64_t{r.n}, std::uint64_t{r.k}, r.theta, r.steps, s.mean, s.std_error, s.ci95_lo,
                   s.ci95_hi, s.quantiles[0], s.quantiles[1], s.quantiles[2], s.quantiles[3], s.quantiles[4],
                   std::uint64_t{s.r}});
  }
  return out;
}

std::vector<CsvRow> cutoff_rows(std::span<const CutoffRow> rows) {
  std::vector<CsvRow> out;
  for (const auto& r : rows) {
    CsvRow row{std::uint64_t{r.n}, std::uint64_t{r.k}, r.a, r.steps};
    if (r.t_l1) {
      row.insert(row.end(), {r.t_l1->mean, r.t_l1->std_error, r.ref_2phi, std::uint64_t{r.t_l1->r}});
    } else {
      row.insert(row.end(), {std::monostate{}, std::monostate{}, r.ref_2phi, std::uint64_t{0}});
    }
    row.emplace_back(r.flag);
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<CsvRow> mixing_rows(std::span<const MixingRow> rows) {
  std::vector<CsvRow> out;
  for (const auto& r : rows) {
    out.push_back({std::uint64_t{r.n}, std::uint64_t{r.k}, r.epsilon, r.median_hit, r.q25, r.q75, r.censored_frac,
                   std::uint64_t{r.r}});
  }
  return out;
}

std::vector<CsvRow> poisson_rows(std::span<const PoissonRow> rows) {
  std::vector<CsvRow> out;
  for (const auto& r : rows) {
    out.push_back({std::uint64_t{r.n}, std::uint64_t{r.k}, r.t, std::uint64_t{r.r}, r.events.mean, r.s_l2.mean,
                   r.s_l2.std_error, r.predicted_s});
  }
  return out;
}

namespace {

struct SeedOptions {
  std::optional<std::uint64_t> seed;
  bool entropy = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Master seed (overrides the config)");
    cmd->add_flag("--entropy-seed", entropy, "Draw the master seed from the system entropy source");
  }

  // Resolves the seed; returns "fixed" or "entropy".
  std::string resolve(std::uint64_t& target) const {
    if (entropy) {
      std::random_device rd;
      target = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
      return "entropy";
    }
    if (seed) target = *seed;
    return "fixed";
  }
};

struct OutputOptions {
  std::string out;
  std::string manifest;

  void attach(CLI::App* cmd) {
    cmd->add_option("--out", out, "CSV output path (stdout if omitted)");
    cmd->add_option("--manifest", manifest, "Manifest path (default: <out>.manifest.json)");
  }
};

// Writes the CSV and its manifest.
void emit(const OutputOptions& io, std::span<const CsvRow> rows, const CsvSchema& schema, RunManifest manifest,
          std::ostream& out) {
  if (io.out.empty()) {
    write_csv(out, rows, schema);
  } else {
    write_csv(io.out, rows, schema);
  }
  manifest.csv_file = io.out.empty() ? std::string("-") : std::filesystem::path(io.out).filename().string();
  manifest.row_count = rows.size();
  manifest.finished_at = std::chrono::system_clock::now();
  std::string manifest_path = io.manifest;
  if (manifest_path.empty() && !io.out.empty()) manifest_path = io.out + ".manifest.json";
  if (!manifest_path.empty()) write_manifest(manifest_path, manifest);
}

Vector<double> parse_x0(const std::string& text, std::size_t n) {
  if (text == "basis") return basis_vector(n);
  if (text == "centered") return centered_basis_vector(n);
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw DomainError("--x0: cannot parse '" + item + "' as a real");
    }
  }
  if (values.size() != n) {
    throw DomainError("--x0 has " + std::to_string(values.size()) + " entries, expected n = " + std::to_string(n));
  }
  return convert_vector<double>(values);
}

NumericMode parse_mode(const std::string& mode) {
  if (mode == "float") return NumericMode::Float64;
  if (mode == "exact") return NumericMode::ExactRational;
  throw DomainError("--mode must be 'float' or 'exact'");
}

ExperimentConfig load_config(const std::string& path, const SeedOptions& seed, std::string& seed_source) {
  ExperimentConfig config = parse_config(path);
  seed_source = seed.resolve(config.master_seed);
  return config;
}

RunManifest start_manifest(const std::string& experiment, const nlohmann::json& config_echo, std::uint64_t seed,
                           const std::string& seed_source) {
  RunManifest m;
  m.experiment = experiment;
  m.config_echo = config_echo;
  m.master_seed = seed;
  m.seed_source = seed_source;
  m.started_at = std::chrono::system_clock::now();
  return m;
}

std::vector<long> random_integers(std::size_t n, long range, TrialRng& rng) {
  std::vector<long> out(n);
  const auto width = static_cast<std::uint64_t>(2 * range + 1);
  for (auto& v : out) v = static_cast<long>(bounded_uniform(rng, width)) - range;
  return out;
}

}  // namespace

int run_command(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"kavg: simulation and verification of repeated k-group averaging", "kavg"};
  app.require_subcommand(1);
  std::function<int()> action;

  // simulate ---------------------------------------------------------------
  struct {
    std::size_t n = 0, k = 0;
    std::uint64_t steps = 0, trial = 0, record_every = 1;
    std::string x0 = "basis", mode = "float", replay_in, replay_out;
    SeedOptions seed;
    OutputOptions io;
  } sim;
  auto* simulate = app.add_subcommand("simulate", "Run one trajectory and record T, S and S/tau^l");
  simulate->add_option("--n", sim.n, "Number of coordinates")->required();
  simulate->add_option("--k", sim.k, "Group size")->required();
  simulate->add_option("--steps", sim.steps, "Number of steps");
  simulate->add_option("--x0", sim.x0, "basis | centered | comma-separated reals");
  simulate->add_option("--trial", sim.trial, "Trial index within the seed's stream family");
  simulate->add_option("--record-every", sim.record_every, "Recording stride");
  simulate->add_option("--mode", sim.mode, "float | exact");
  simulate->add_option("--replay-in", sim.replay_in, "Replay subsets from this log instead of sampling");
  simulate->add_option("--replay-out", sim.replay_out, "Write the sampled subsets to this log");
  sim.seed.attach(simulate);
  simulate->add_option("--out", sim.io.out, "Trajectory CSV path");
  simulate->add_option("--manifest", sim.io.manifest, "Manifest path (default: <out>.manifest.json)");
  simulate->callback([&] {
    action = [&]() -> int {
      ChainParams params{sim.n, sim.k, kDefaultSeed, parse_mode(sim.mode)};
      const std::string seed_source = sim.seed.resolve(params.seed);
      validate(params);
      const Vector<double> x0 = parse_x0(sim.x0, sim.n);
      const std::span<const double> x0_view(x0.data(), sim.n);
      nlohmann::json echo{{"n", sim.n}, {"k", sim.k}, {"steps", sim.steps}, {"x0", sim.x0},
                          {"trial", sim.trial}, {"record_every", sim.record_every}, {"mode", sim.mode},
                          {"replay_in", sim.replay_in}};
      RunManifest manifest = start_manifest("simulate", echo, params.seed, seed_source);

      std::vector<MetricsSample> samples;
      if (!sim.replay_in.empty()) {
        std::ifstream log(sim.replay_in);
        if (!log) throw IoError("cannot read replay log '" + sim.replay_in + "'");
        const auto choices = read_replay_log(log, sim.n, sim.k);
        samples = replay(params, x0_view, choices, sim.record_every);
      } else {
        std::ofstream log;
        RunOptions options;
        options.l_max = sim.steps;
        options.record_every = sim.record_every;
        options.trial = sim.trial;
        if (!sim.replay_out.empty()) {
          log.open(sim.replay_out, std::ios::binary | std::ios::trunc);
          if (!log) throw IoError("cannot open replay log '" + sim.replay_out + "'");
          options.on_choice = [&log](const SubsetChoice& c) { write_replay_line(log, c); };
        }
        samples = run(params, x0_view, options);
      }
      const auto rows = trajectory_rows(samples);
      if (!sim.io.out.empty()) emit(sim.io, rows, schema::kTrajectory, manifest, out);
      const auto& last = samples.back();
      out << "final l=" << last.l << " T=" << format_real(last.t_l1) << " S=" << format_real(last.s_l2)
          << " M=" << format_real(last.m_ratio) << '\n';
      return kOk;
    };
  });

  // verify-prop1 -----------------------------------------------------------
  struct {
    std::size_t n_max = 9, vectors = 20;
    long range = 10;
    std::uint64_t seed = kDefaultSeed;
  } vp;
  auto* verify = app.add_subcommand("verify-prop1", "Exact enumeration check of the one-step energy contraction");
  verify->add_option("--n-max", vp.n_max, "Largest n (at most 12)");
  verify->add_option("--vectors", vp.vectors, "Random integer vectors per (n, k)");
  verify->add_option("--range", vp.range, "Entries are drawn uniformly from [-range, range]");
  verify->add_option("--seed", vp.seed, "Seed for the random vectors");
  verify->callback([&] {
    action = [&]() -> int {
      if (vp.n_max > oracle::kMaxEnumerationN) {
        throw ScaleError("--n-max is limited to " + std::to_string(oracle::kMaxEnumerationN));
      }
      if (vp.n_max < 2) throw DomainError("--n-max must be >= 2");
      if (vp.vectors < 1) throw DomainError("--vectors must be >= 1");
      if (vp.range < 1) throw DomainError("--range must be >= 1");
      bool all_pass = true;
      for (std::size_t n = 2; n <= vp.n_max; ++n) {
        for (std::size_t k = 2; k <= n; ++k) {
          TrialRng rng = trial_rng(grid_seed(vp.seed, n, k), 0);
          std::optional<oracle::Prop1Report> shown;
          for (std::size_t v = 0; v < vp.vectors; ++v) {
            const auto x0 = oracle::from_integers(random_integers(n, vp.range, rng));
            auto report = oracle::verify_prop1(n, k, x0);
            if (!shown || (shown->pass && !report.pass)) shown = report;
          }
          all_pass = all_pass && shown->pass;
          out << n << ' ' << k << ' ' << to_fraction_string(shown->lhs) << ' ' << to_fraction_string(shown->rhs)
              << ' ' << (shown->pass ? "PASS" : "FAIL") << '\n';
        }
      }
      return all_pass ? kOk : kVerificationFailed;
    };
  });

  // grid experiments ---------------------------------------------------------
  struct GridCommand {
    std::string config;
    SeedOptions seed;
    OutputOptions io;
  };
  GridCommand theta_cmd, mixing_cmd, cutoff_cmd;
  auto add_grid = [&](const char* name, const char* help, GridCommand& cmd, auto body) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", cmd.config, "Experiment config (JSON)")->required();
    cmd.seed.attach(sub);
    cmd.io.attach(sub);
    sub->callback([&, name, body] {
      action = [&, name, body]() -> int {
        std::string seed_source;
        const ExperimentConfig config = load_config(cmd.config, cmd.seed, seed_source);
        RunManifest manifest = start_manifest(name, config_to_json(config), config.master_seed, seed_source);
        const auto [rows, csv_schema] = body(config);
        emit(cmd.io, rows, csv_schema, manifest, out);
        return kOk;
      };
    });
  };
  add_grid("theta-sweep", "T at floor(theta n ln n) over a grid", theta_cmd, [](const ExperimentConfig& c) {
    return std::pair{theta_rows(theta_sweep(c)), schema::kThetaSweep};
  });
  add_grid("mixing-time", "Hitting times of T <= epsilon", mixing_cmd, [](const ExperimentConfig& c) {
    return std::pair{mixing_rows(mixing_time(c)), schema::kMixingTime};
  });
  add_grid("cutoff", "T at floor(n (log_k n + a sqrt(log_k n)) / k) against 2 Phi(-a)", cutoff_cmd,
           [](const ExperimentConfig& c) { return std::pair{cutoff_rows(cutoff_profile(c)), schema::kCutoff}; });

  // poisson ------------------------------------------------------------------
  struct {
    std::size_t n = 0, k = 0, replications = 1000;
    double t = 0.0;
    SeedOptions seed;
    OutputOptions io;
  } po;
  auto* poisson = app.add_subcommand("poisson", "Energy of the Poisson-clock chain at time t");
  poisson->add_option("--n", po.n, "Number of coordinates")->required();
  poisson->add_option("--k", po.k, "Group size")->required();
  poisson->add_option("--t", po.t, "Time")->required();
  poisson->add_option("--replications", po.replications, "Number of independent runs");
  po.seed.attach(poisson);
  po.io.attach(poisson);
  poisson->callback([&] {
    action = [&]() -> int {
      ChainParams params{po.n, po.k, kDefaultSeed, NumericMode::Float64};
      const std::string seed_source = po.seed.resolve(params.seed);
      nlohmann::json echo{{"n", po.n}, {"k", po.k}, {"t", po.t}, {"replications", po.replications}};
      RunManifest manifest = start_manifest("poisson", echo, params.seed, seed_source);
      const std::vector<PoissonRow> result{poisson_experiment(params, po.t, po.replications)};
      emit(po.io, poisson_rows(result), schema::kPoisson, manifest, out);
      return kOk;
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    if (args.empty()) err << app.help();
    return kUsage;
  }

  try {
    return action();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    err << "parameter error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ScaleError& e) {
    err << "scale guard: " << e.what() << '\n';
    return kScaleError;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
}

}  // namespace kavg::cli
