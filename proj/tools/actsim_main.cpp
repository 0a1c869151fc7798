// actsim: compile a FIRRTL design and run it on the activity-driven engine
// or the naive full-evaluation oracle, with metrics, reports, VCD output,
// and benchmarking sweeps.

#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "actsim/oracle.hpp"
#include "actsim/pipeline.hpp"
#include "actsim/reports.hpp"
#include "actsim/testbench.hpp"
#include "actsim/vcd.hpp"

namespace {

using namespace actsim;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Options {
  std::string input;
  std::string tb;
  std::string engine = "optimized";
  std::string vcd_path, metrics_path, report_path;
  uint64_t seed = 0;
  bool compare_engines = false;
  std::vector<uint32_t> sweep_sizes;
  uint64_t bench_warmup = 0;
  PipelineConfig cfg;
};

// Runs two drivers in lockstep and compares output traces every cycle.
class PairDriver final : public SimDriver {
public:
  PairDriver(SimDriver& a, SimDriver& b) : a_(a), b_(b) {
    outputs_ = a.output_ids();
    other_outputs_ = b.output_ids();
  }

  void poke(const std::string& name, const WideValue& v) override {
    a_.poke(name, v);
    b_.poke(name, v);
  }
  void step(uint64_t n = 1) override {
    for (uint64_t i = 0; i < n; i++) {
      time(a_, a_seconds_);
      time(b_, b_seconds_);
      for (size_t k = 0; k < outputs_.size(); k++) {
        const WideValue& va = a_.value_of(outputs_[k]);
        const WideValue& vb = b_.value_of(other_outputs_[k]);
        if (va != vb)
          throw SimError("engine mismatch at cycle " + std::to_string(a_.cycle()) +
                         " on '" + a_.graph().node(outputs_[k]).name +
                         "': " + va.to_decimal() + " vs " + vb.to_decimal());
      }
    }
  }
  WideValue peek(const std::string& name) const override { return a_.peek(name); }
  const WideValue& value_of(uint32_t node) const override {
    return a_.value_of(node);
  }
  const RtlGraph& graph() const override { return a_.graph(); }
  uint64_t cycle() const override { return a_.cycle(); }
  const MetricCounters& metrics() const override { return a_.metrics(); }

  double a_seconds() const { return a_seconds_; }
  double b_seconds() const { return b_seconds_; }

private:
  static void time(SimDriver& d, double& acc) {
    auto t0 = std::chrono::steady_clock::now();
    d.step(1);
    acc += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
               .count();
  }
  SimDriver& a_;
  SimDriver& b_;
  std::vector<uint32_t> outputs_, other_outputs_;
  double a_seconds_ = 0, b_seconds_ = 0;
};

nlohmann::json config_json(const PipelineConfig& c, const Options& o) {
  nlohmann::json j;
  j["engine"] = o.engine;
  j["max_supernode_size"] = c.max_supernode_size;
  j["passes"] = {{"simplify", c.simplify},   {"eliminate", c.eliminate},
                 {"inline", c.inline_exprs}, {"reset_opt", c.reset_opt},
                 {"bit_split", c.bit_split}, {"pre_group", c.pre_group},
                 {"kernighan", c.kernighan}, {"no_opt", c.no_opt}};
  j["cost_node"] = c.cost.cost_node;
  j["branchless_threshold"] = c.cost.activation_branchless_threshold;
  j["max_slices"] = c.cost.max_slices;
  j["seed"] = o.seed;
  return j;
}

int cmd_run(const Options& opt) {
  DiagEngine diags(opt.input);
  RtlGraph raw;
  try {
    raw = parse_and_lower(read_file(opt.input), opt.input, diags, opt.cfg.lower);
  } catch (const FrontendError&) {
    std::cerr << diags.format_all();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  for (const auto& d : diags.diagnostics())
    if (d.sev == Severity::Warning) std::cerr << diags.format(d) << "\n";

  std::string tb_text;
  try {
    tb_text = read_file(opt.tb);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  BuiltSim built;
  std::unique_ptr<Engine> engine;
  std::unique_ptr<OracleSim> oracle;
  SimDriver* driver = nullptr;
  std::unique_ptr<PairDriver> pair;

  if (opt.engine == "optimized" || opt.compare_engines) {
    built = build_simulation(raw, opt.cfg);
    engine = std::make_unique<Engine>(built.program);
  }
  if (opt.engine == "oracle" || opt.compare_engines)
    oracle = std::make_unique<OracleSim>(raw);

  if (opt.compare_engines) {
    pair = std::make_unique<PairDriver>(*engine, *oracle);
    driver = pair.get();
  } else if (opt.engine == "oracle") {
    driver = oracle.get();
  } else {
    driver = engine.get();
  }

  std::ofstream vcd_file;
  std::unique_ptr<VcdWriter> vcd;
  if (!opt.vcd_path.empty()) {
    vcd_file.open(opt.vcd_path);
    vcd = std::make_unique<VcdWriter>(vcd_file, driver->graph(), "top");
  }

  TbResult res;
  try {
    res = run_testbench(*driver, tb_text, [&] {
      if (vcd) vcd->sample(*driver);
    });
  } catch (const SimError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  if (res.exit_code != 0) std::cerr << res.message << "\n";

  if (opt.compare_engines) {
    auto rate = [&](double s) {
      return s > 0 ? (double)res.steps / s : 0.0;
    };
    std::cout << "optimized: " << pair->a_seconds() << " s, " << rate(pair->a_seconds())
              << " cycles/s\n";
    std::cout << "oracle:    " << pair->b_seconds() << " s, " << rate(pair->b_seconds())
              << " cycles/s\n";
    std::cout << "traces: identical over " << res.steps << " cycles\n";
  }

  if (!opt.metrics_path.empty() && driver) {
    nlohmann::json j = metrics_json(
        driver->metrics(),
        opt.engine == "oracle" ? raw.alive_count() : built.program.node_count,
        opt.engine == "oracle" ? 0 : built.plan.count());
    j["config"] = config_json(opt.cfg, opt);
    std::ofstream(opt.metrics_path) << j.dump(2) << "\n";
  }
  if (!opt.report_path.empty() && opt.engine != "oracle")
    std::ofstream(opt.report_path) << pass_report_json(built.report).dump(2) << "\n";

  return res.exit_code;
}

struct StageResult {
  std::string name;
  double seconds = 0;
  uint64_t steps = 0;
  double af = 0;
  MetricCounters counters;
  uint32_t max_size = 0;

  double rate() const { return seconds > 0 ? (double)steps / seconds : 0; }
};

StageResult timed_run(const RtlGraph& raw, const PipelineConfig& cfg,
                      const std::string& tb_text, const std::string& name) {
  StageResult r;
  r.name = name;
  r.max_size = cfg.max_supernode_size;
  BuiltSim built = build_simulation(raw, cfg);
  Engine engine(built.program);
  auto t0 = std::chrono::steady_clock::now();
  TbResult res = run_testbench(engine, tb_text);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                  .count();
  if (res.exit_code != 0) throw SimError("bench testbench failed: " + res.message);
  r.steps = res.steps;
  r.af = engine.metrics().af_mean();
  r.counters = engine.metrics();
  return r;
}

int cmd_bench(const Options& opt) {
  DiagEngine diags(opt.input);
  RtlGraph raw;
  try {
    raw = parse_and_lower(read_file(opt.input), opt.input, diags, opt.cfg.lower);
  } catch (const FrontendError&) {
    std::cerr << diags.format_all();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  std::string tb_text;
  try {
    tb_text = read_file(opt.tb);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  nlohmann::json out;
  try {
    // Incremental breakdown: each stage adds one technique family.
    std::vector<std::pair<std::string, PipelineConfig>> stages;
    PipelineConfig c = opt.cfg;
    c.disable_all_passes();
    c.no_opt = true;
    stages.emplace_back("baseline-full-eval", c);
    c.no_opt = false;
    stages.emplace_back("+activity-tracking", c);
    c.pre_group = opt.cfg.pre_group;
    c.kernighan = opt.cfg.kernighan;
    stages.emplace_back("+supernode-partition", c);
    c.simplify = opt.cfg.simplify;
    c.eliminate = opt.cfg.eliminate;
    c.inline_exprs = opt.cfg.inline_exprs;
    c.reset_opt = opt.cfg.reset_opt;
    stages.emplace_back("+node-level", c);
    c.bit_split = opt.cfg.bit_split;
    stages.emplace_back("+bit-split", c);

    std::cout << "perf breakdown (" << opt.input << "):\n";
    double prev = 0;
    nlohmann::json jstages = nlohmann::json::array();
    for (auto& [name, cfg] : stages) {
      StageResult r = timed_run(raw, cfg, tb_text, name);
      std::ostringstream line;
      line << "  " << name << ": " << (uint64_t)r.rate() << " cycles/s, af="
           << r.af;
      if (prev > 0) line << ", log10 ratio " << std::log10(r.rate() / prev);
      std::cout << line.str() << "\n";
      nlohmann::json js;
      js["stage"] = name;
      js["cycles_per_sec"] = r.rate();
      js["af"] = r.af;
      jstages.push_back(js);
      prev = r.rate();
    }
    out["breakdown"] = jstages;

    if (!opt.sweep_sizes.empty()) {
      std::cout << "max-supernode-size sweep:\n";
      std::vector<CalibrationRun> cal;
      std::vector<StageResult> sweep;
      for (uint32_t size : opt.sweep_sizes) {
        PipelineConfig cfg = opt.cfg;
        cfg.max_supernode_size = size;
        StageResult r =
            timed_run(raw, cfg, tb_text, "size " + std::to_string(size));
        sweep.push_back(r);
        cal.push_back({r.counters, r.seconds});
        std::cout << "  max_size " << size << ": " << (uint64_t)r.rate()
                  << " cycles/s, af=" << r.af << "\n";
      }
      nlohmann::json jsweep = nlohmann::json::array();
      OverheadModel model;
      if (cal.size() >= 2) model = calibrate_model(cal);
      std::vector<double> predicted(sweep.size(), 0.0);
      size_t best_measured = 0, best_predicted = 0;
      for (size_t i = 0; i < sweep.size(); i++) {
        if (model.calibrated) {
          // Per-cycle counter rates feed the formula directly.
          double cycles = std::max<double>(1.0, (double)sweep[i].counters.cycles);
          double n = (double)sweep[i].counters.evaluated_nodes / cycles /
                     std::max(sweep[i].af, 1e-12);
          predicted[i] = predict_cycle_cost(model, sweep[i].af, n);
          if (predicted[i] < predicted[best_predicted]) best_predicted = i;
        }
        if (sweep[i].rate() > sweep[best_measured].rate()) best_measured = i;
        nlohmann::json js;
        js["max_size"] = sweep[i].max_size;
        js["cycles_per_sec"] = sweep[i].rate();
        js["af"] = sweep[i].af;
        if (model.calibrated) js["predicted_T"] = predicted[i];
        jsweep.push_back(js);
      }
      if (model.calibrated) {
        std::cout << "  model best size: " << sweep[best_predicted].max_size
                  << ", measured best size: " << sweep[best_measured].max_size
                  << (best_predicted == best_measured ? " (agree)" : " (differ)")
                  << "\n";
        model.af = sweep[best_predicted].af;
        model.n = 1.0;
        out["model"] = model_json(model);
        out["model"]["best_size_agrees"] = best_predicted == best_measured;
      }
      out["sweep"] = jsweep;
    }
  } catch (const SimError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  if (!opt.metrics_path.empty()) {
    out["config"] = config_json(opt.cfg, opt);
    std::ofstream(opt.metrics_path) << out.dump(2) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"activity-driven RTL simulator"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("input", opt.input, "FIRRTL design (.fir)")->required();
    sub->add_option("--tb", opt.tb, "testbench script")->required();
    sub->add_option("--max-supernode-size", opt.cfg.max_supernode_size,
                    "maximum nodes per supernode");
    sub->add_option("--seed", opt.seed, "random seed echoed into reports");
    sub->add_option("--metrics", opt.metrics_path, "write metrics JSON");
    sub->add_option("--cost-node", opt.cfg.cost.cost_node,
                    "node materialization cost for the inline decision");
    sub->add_option("--branchless-threshold",
                    opt.cfg.cost.activation_branchless_threshold,
                    "max successors for branchless activation");
    sub->add_option("--max-slices", opt.cfg.cost.max_slices,
                    "max bit-split slices per node");
    sub->add_flag("--no-simplify", [&](int64_t) { opt.cfg.simplify = false; },
                  "disable expression simplification");
    sub->add_flag("--no-eliminate", [&](int64_t) { opt.cfg.eliminate = false; },
                  "disable redundant node elimination");
    sub->add_flag("--no-inline", [&](int64_t) { opt.cfg.inline_exprs = false; },
                  "disable the inline/extract pass");
    sub->add_flag("--no-reset-opt", [&](int64_t) { opt.cfg.reset_opt = false; },
                  "disable the reset slow path");
    sub->add_flag("--no-bit-split", [&](int64_t) { opt.cfg.bit_split = false; },
                  "disable bit-level node splitting");
    sub->add_flag("--no-pre-group", [&](int64_t) { opt.cfg.pre_group = false; },
                  "disable pre-grouping");
    sub->add_flag("--no-kernighan", [&](int64_t) { opt.cfg.kernighan = false; },
                  "disable Kernighan refinement");
    sub->add_flag("--no-opt", opt.cfg.no_opt,
                  "disable everything; evaluate every node every cycle");
  };

  CLI::App* run = app.add_subcommand("run", "run a design against a testbench");
  add_common(run);
  run->add_option("--engine", opt.engine, "optimized|oracle")
      ->check(CLI::IsMember({"optimized", "oracle"}));
  run->add_option("--vcd", opt.vcd_path, "write a VCD waveform");
  run->add_option("--report", opt.report_path, "write the pass report JSON");
  run->add_flag("--compare-engines", opt.compare_engines,
                "run both engines in lockstep and compare traces");

  CLI::App* bench = app.add_subcommand("bench", "incremental pass breakdown");
  add_common(bench);
  bench->add_option("--sweep-supernode-size", opt.sweep_sizes,
                    "comma-separated max sizes")
      ->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(opt);
    if (bench->parsed()) return cmd_bench(opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
