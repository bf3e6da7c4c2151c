// Command-line driver for the V2G market simulator.
//
//   v2g_market run <config> [--baseline both|two-layer|greedy] ...
//   v2g_market sweep <spec> ...
//   v2g_market curves <config> [--iteration T] ...
//
// All outputs are CSV with a header row, '.' decimal point, and floating
// values printed with 6 significant digits; identical invocations produce
// byte-identical files.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "v2g/auction.hpp"
#include "v2g/equilibrium.hpp"
#include "v2g/mechanism.hpp"
#include "v2g/scenario.hpp"
#include "v2g/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInternal = 3;

std::string g6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& dir,
                       const std::string& name) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / name);
  if (!out) {
    throw std::runtime_error("cannot write output file: " +
                             (dir / name).string());
  }
  return out;
}

struct CommonOptions {
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> t_max;
  std::optional<double> xi;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--out", opts.out_dir, "Output directory");
  cmd->add_option("--seed", opts.seed, "Override the config seed");
  cmd->add_option("--t-max", opts.t_max, "Override the iteration cap");
  cmd->add_option("--xi", opts.xi, "Override the price-change threshold");
}

void apply_overrides(const CommonOptions& opts,
                     v2g::scenario::ScenarioConfig& config,
                     v2g::mechanism::MechanismConfig& mech) {
  if (opts.seed) config.seed = *opts.seed;
  if (opts.t_max) mech.t_max = *opts.t_max;
  if (opts.xi) mech.xi = *opts.xi;
}

void write_trace(std::ofstream& out, const v2g::mechanism::MechanismTrace& trace) {
  out << "iteration,price,traded,aggregator_id,supply,sold,announced_price,"
         "utility,commission\n";
  for (const auto& iter : trace.iterations) {
    for (const auto& agg : iter.aggregators) {
      out << iter.t << ',' << g6(iter.price) << ',' << (iter.traded ? 1 : 0)
          << ',' << agg.aggregator_id << ',' << g6(agg.supply) << ','
          << g6(agg.sold) << ',' << g6(agg.announced_price) << ','
          << g6(agg.utility) << ',' << g6(agg.commission) << '\n';
    }
  }
}

void write_summary_row(std::ofstream& out, const std::string& baseline,
                       const v2g::mechanism::MechanismTrace& trace) {
  double total_sold = 0.0;
  for (const auto& agg : trace.final_iteration().aggregators) {
    total_sold += agg.sold;
  }
  out << baseline << ',' << v2g::mechanism::to_string(trace.stop_reason) << ','
      << (trace.converged ? 1 : 0) << ',' << trace.iterations.size() << ','
      << g6(trace.final_price()) << ',' << g6(total_sold) << ','
      << g6(trace.total_utility()) << ','
      << g6(trace.mean_utility_per_aggregator()) << '\n';
}

int cmd_run(const std::string& config_path, const std::string& baseline,
            const CommonOptions& opts) {
  v2g::scenario::ScenarioConfig config =
      v2g::scenario::load_config(config_path);
  v2g::mechanism::MechanismConfig mech;
  apply_overrides(opts, config, mech);
  mech.record_phev_detail = false;

  const v2g::scenario::Instance inst = v2g::scenario::generate(config);
  std::ofstream summary = open_out(opts.out_dir, "summary.csv");
  summary << "baseline,stop_reason,converged,iterations,final_price,"
             "total_traded,total_utility,mean_utility_per_aggregator\n";

  if (baseline == "both" || baseline == "two-layer") {
    const auto trace =
        v2g::mechanism::run_market(inst.buyers, inst.aggregators, mech);
    std::ofstream out = open_out(opts.out_dir, "trace_two_layer.csv");
    write_trace(out, trace);
    write_summary_row(summary, "two_layer", trace);
    if (trace.stop_reason == v2g::mechanism::StopReason::NoTrade) {
      std::cout << "two-layer: no trade (no supply/demand crossing)\n";
    }
  }
  if (baseline == "both" || baseline == "greedy") {
    const auto trace = v2g::mechanism::run_greedy(inst.buyers, inst.aggregators);
    std::ofstream out = open_out(opts.out_dir, "trace_greedy.csv");
    write_trace(out, trace);
    write_summary_row(summary, "greedy", trace);
    if (trace.stop_reason == v2g::mechanism::StopReason::NoTrade) {
      std::cout << "greedy: no trade (no supply/demand crossing)\n";
    }
  }
  return kExitOk;
}

int cmd_sweep(const std::string& spec_path, const CommonOptions& opts) {
  v2g::sweep::SweepSpec spec = v2g::sweep::load_sweep_spec(spec_path);
  if (opts.seed) spec.base.seed = *opts.seed;
  if (opts.t_max) spec.mech.t_max = *opts.t_max;
  if (opts.xi) spec.mech.xi = *opts.xi;

  const auto rows = v2g::sweep::run_sweep(spec);
  std::ofstream out = open_out(opts.out_dir, "sweep.csv");
  out << v2g::sweep::to_string(spec.variable)
      << ",baseline,runs,priced_runs,mean_utility,std_utility,mean_price,"
         "std_price,mean_iterations,std_iterations\n";
  for (const auto& row : rows) {
    out << row.value << ',' << row.baseline << ',' << row.runs << ','
        << row.priced_runs << ',' << g6(row.mean_utility) << ','
        << g6(row.std_utility) << ',' << g6(row.mean_price) << ','
        << g6(row.std_price) << ',' << g6(row.mean_iterations) << ','
        << g6(row.std_iterations) << '\n';
  }
  return kExitOk;
}

int cmd_curves(const std::string& config_path, std::optional<int> iteration,
               const CommonOptions& opts) {
  v2g::scenario::ScenarioConfig config =
      v2g::scenario::load_config(config_path);
  v2g::mechanism::MechanismConfig mech;
  apply_overrides(opts, config, mech);
  mech.record_phev_detail = false;

  const v2g::scenario::Instance inst = v2g::scenario::generate(config);
  const auto trace =
      v2g::mechanism::run_market(inst.buyers, inst.aggregators, mech);

  const int n_iters = static_cast<int>(trace.iterations.size());
  int t = iteration.value_or(n_iters);
  if (t < 1 || t > n_iters) {
    std::cerr << "error: iteration " << t << " out of range [1, " << n_iters
              << "]\n";
    return kExitUsage;
  }
  const auto& iter = trace.iterations[static_cast<std::size_t>(t - 1)];

  // Rebuild the auction book the mechanism saw at iteration t.
  std::vector<v2g::auction::Ask> asks;
  for (const auto& agg : iter.aggregators) {
    asks.push_back({agg.aggregator_id,
                    inst.aggregators[asks.size()].reservation_price,
                    agg.supply});
  }
  const auto book = v2g::auction::order_and_merge(asks, inst.buyers);
  const auto supply = v2g::auction::build_supply_curve(book.asks);
  const auto demand = v2g::auction::build_demand_curve(book.bids);

  std::ofstream curves = open_out(opts.out_dir, "curves.csv");
  curves << "iteration,curve,step,price,cumulative_quantity,quantity\n";
  auto dump = [&](const char* name, const v2g::auction::StepCurve& curve) {
    double prev = 0.0;
    for (std::size_t i = 0; i < curve.steps.size(); ++i) {
      const auto& s = curve.steps[i];
      curves << t << ',' << name << ',' << i + 1 << ',' << g6(s.price) << ','
             << g6(s.cumulative_quantity) << ','
             << g6(s.cumulative_quantity - prev) << '\n';
      prev = s.cumulative_quantity;
    }
  };
  dump("supply", supply);
  dump("demand", demand);

  const auto fit = v2g::equilibrium::fit_linear_curves(supply, demand);
  std::ofstream fit_out = open_out(opts.out_dir, "fit.csv");
  fit_out << "iteration,alpha,beta,q0,supply_residual,demand_residual,"
             "degenerate,fitted_equilibrium_price,mechanism_price\n";
  double fitted_price = 0.0;
  if (fit.model.alpha + fit.model.beta > 0.0) {
    fitted_price = v2g::equilibrium::equilibrium_price(fit.model);
  }
  fit_out << t << ',' << g6(fit.model.alpha) << ',' << g6(fit.model.beta)
          << ',' << g6(fit.model.q0) << ',' << g6(fit.supply_residual) << ','
          << g6(fit.demand_residual) << ',' << (fit.degenerate ? 1 : 0) << ','
          << g6(fitted_price) << ',' << g6(iter.price) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-layer V2G energy market simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string baseline = "both";
  CommonOptions run_opts;
  CLI::App* run = app.add_subcommand("run", "Run one market instance");
  run->add_option("config", config_path, "Scenario config file")->required();
  run->add_option("--baseline", baseline, "both, two-layer, or greedy")
      ->check(CLI::IsMember({"both", "two-layer", "greedy"}));
  add_common(run, run_opts);

  std::string spec_path;
  CommonOptions sweep_opts;
  CLI::App* sweep = app.add_subcommand("sweep", "Run a parameter sweep");
  sweep->add_option("spec", spec_path, "Sweep spec file")->required();
  add_common(sweep, sweep_opts);

  std::string curves_config;
  std::optional<int> iteration;
  CommonOptions curves_opts;
  CLI::App* curves =
      app.add_subcommand("curves", "Dump step curves and linear fit");
  curves->add_option("config", curves_config, "Scenario config file")
      ->required();
  curves->add_option("--iteration", iteration,
                     "Iteration to dump (default: last)");
  add_common(curves, curves_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run->parsed()) return cmd_run(config_path, baseline, run_opts);
    if (sweep->parsed()) return cmd_sweep(spec_path, sweep_opts);
    if (curves->parsed())
      return cmd_curves(curves_config, iteration, curves_opts);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}
