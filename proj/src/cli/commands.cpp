#include "turbbench/cli/commands.hpp"

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "turbbench/evalproto/aggregate.hpp"
#include "turbbench/imgcore/image_io.hpp"
#include "turbbench/imgcore/text.hpp"
#include "turbbench/stabilize/mao_gilles.hpp"
#include "turbbench/turbsim/seed.hpp"

namespace turbbench {

namespace fs = std::filesystem;
using nlohmann::json;

const char* const kToolVersion = TURBBENCH_VERSION;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void write_json(const fs::path& path, const json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

std::optional<json> read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  try {
    return json::parse(in);
  } catch (const json::parse_error&) {
    return std::nullopt;
  }
}

void ensure_parent(const fs::path& file) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
}

fs::path fingerprint_path(const RunConfig& cfg) { return cfg.dataset_dir / "dataset_config.json"; }

}  // namespace

DatasetManifest cmd_simulate(const RunConfig& cfg) {
  const DatasetManifest m =
      build_dataset(cfg.gt_dir, cfg.grid, cfg.dataset_dir, cfg.master_seed, cfg.simulation);
  write_json(fingerprint_path(cfg), dataset_fingerprint(cfg));
  spdlog::info("wrote {} sequences to {}", m.entries.size(), cfg.dataset_dir.string());
  return m;
}

RunResult cmd_run(const RunConfig& cfg) {
  check_external_commands(cfg);
  RunResult result;
  json stages = json::object();

  auto start = Clock::now();
  DatasetManifest manifest;
  const auto existing = read_json(fingerprint_path(cfg));
  if (existing && *existing == dataset_fingerprint(cfg) && fs::exists(cfg.manifest_path())) {
    manifest = read_manifest(cfg.manifest_path());
    spdlog::info("reusing dataset in {}", cfg.dataset_dir.string());
  } else {
    manifest = cmd_simulate(cfg);
    result.dataset_rebuilt = true;
  }
  stages["simulate_ms"] = ms_since(start);

  start = Clock::now();
  EvalOptions opts;
  opts.ssim = cfg.metrics;
  opts.workers = cfg.workers;
  result.summary = evaluate(manifest, cfg.pipelines, cfg.results_csv(), opts);
  stages["evaluate_ms"] = ms_since(start);

  start = Clock::now();
  cmd_report(cfg.results_csv(), cfg.report_dir());
  stages["report_ms"] = ms_since(start);

  const auto& s = result.summary;
  write_json(cfg.results_dir / "run.json",
             {{"tool_version", kToolVersion},
              {"dataset_version", kDatasetVersion},
              {"config", to_json(cfg)},
              {"dataset_rebuilt", result.dataset_rebuilt},
              {"stages", stages},
              {"tasks", {{"total", s.tasks}, {"skipped", s.skipped}, {"ok", s.ok}, {"failed", s.failed}}}});
  spdlog::info("{} tasks: {} ok, {} failed, {} already done", s.tasks, s.ok, s.failed, s.skipped);
  return result;
}

std::vector<fs::path> cmd_report(const fs::path& csv, const fs::path& out_dir) {
  if (!fs::exists(csv)) throw IoError("no such results file: " + csv.string());
  const auto records = read_results(csv);
  fs::create_directories(out_dir);
  std::vector<fs::path> written;
  for (GroupBy by : kAllGroupings) {
    const fs::path path = out_dir / ("by_" + to_string(by) + ".csv");
    write_aggregate_csv(path, aggregate(records, by));
    written.push_back(path);
  }
  const fs::path summary = out_dir / "summary.txt";
  std::ofstream(summary, std::ios::trunc) << format_summary(records);
  written.push_back(summary);
  return written;
}

namespace {

struct Globals {
  std::string config;
  int workers = 0;
  std::string seed;
  std::string log_level = "info";
};

RunConfig config_with_overrides(const Globals& g) {
  if (g.config.empty()) throw ConfigError("/", "--config is required for this command");
  RunConfig cfg = load_config(g.config);
  if (g.workers > 0) {
    cfg.workers = g.workers;
    cfg.simulation.workers = g.workers;
  }
  if (!g.seed.empty()) cfg.master_seed = parse_u64(g.seed);
  return cfg;
}

StabilizerSpec stabilizer_from_flags(const std::string& method, const std::string& reg,
                                     const std::string& flow, int outer, double mu) {
  json j = {{"method", method}, {"reg", reg}, {"flow", flow}};
  if (outer > 0) j["outer_iterations"] = outer;
  if (mu > 0) j["fusion_mu"] = mu;
  json doc = {{"gt_dir", "."},
              {"dataset_dir", "."},
              {"results_dir", "."},
              {"master_seed", 0},
              {"pipelines", json::array({{{"name", "cli"}, {"stabilizer", j}}})}};
  const RunConfig cfg = parse_config(doc, ".");
  return std::get<BuiltinPipeline>(cfg.pipelines.front().body).stabilizer;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Turbulence mitigation benchmark"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "JSON run configuration");
  app.add_option("--workers", g.workers, "worker threads (overrides the config)")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "master seed (overrides the config)");
  app.add_option("--log-level", g.log_level, "trace, debug, info, warn, error, off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "critical", "off"}));

  // simulate
  auto* sim = app.add_subcommand("simulate", "build the degraded dataset");
  sim->fallthrough();
  std::string gt_dir, out_dir, grid_text;
  sim->add_option("--gt-dir", gt_dir, "ground-truth image directory");
  sim->add_option("--out-dir", out_dir, "dataset directory");
  sim->add_option("--grid", grid_text, "\"default\" or L=1,2;a=1,3;b=14,15");

  // stabilize
  auto* stab = app.add_subcommand("stabilize", "stabilise one sequence");
  stab->fallthrough();
  std::string stab_in, stab_out, stab_method = "mean", stab_reg = "tv", stab_flow = "lk";
  int stab_outer = 0;
  double stab_mu = 0.0;
  stab->add_option("--in", stab_in, "sequence directory")->required();
  stab->add_option("--out", stab_out, "output image")->required();
  stab->add_option("--method", stab_method)->check(CLI::IsMember({"mean", "median", "mg"}));
  stab->add_option("--reg", stab_reg)->check(CLI::IsMember({"tv", "nltv"}));
  stab->add_option("--flow", stab_flow)->check(CLI::IsMember({"lk", "tvl1"}));
  stab->add_option("--outer-iters", stab_outer, "Mao-Gilles outer iterations");
  stab->add_option("--mu", stab_mu, "Mao-Gilles fusion weight");

  // deblur
  auto* deb = app.add_subcommand("deblur", "deconvolve one image");
  deb->fallthrough();
  std::string deb_in, deb_out, deb_params, deb_method = "wiener", r0_text;
  double nsr = -1.0, lambda = -1.0;
  int iters = 0;
  bool semiblind = false;
  deb->add_option("--in", deb_in, "input image")->required();
  deb->add_option("--out", deb_out, "output image")->required();
  deb->add_option("--params", deb_params, "params.json of the sequence")->required();
  deb->add_option("--method", deb_method)->check(CLI::IsMember({"wiener", "lr", "tv"}));
  deb->add_option("--nsr", nsr, "Wiener noise-to-signal ratio");
  deb->add_option("--iters", iters, "Lucy-Richardson or TV iterations");
  deb->add_option("--lambda", lambda, "TV weight");
  deb->add_flag("--semiblind", semiblind, "search r0 instead of using the sequence value");
  deb->add_option("--r0-grid", r0_text, "comma-separated r0 values in metres");

  // run / report / validate-config
  auto* run = app.add_subcommand("run", "simulate, evaluate and report from a config");
  run->fallthrough();
  auto* rep = app.add_subcommand("report", "grouped tables from a results CSV");
  rep->fallthrough();
  std::string rep_csv, rep_out;
  rep->add_option("--csv", rep_csv, "results CSV (default: from the config)");
  rep->add_option("--out", rep_out, "output directory (default: from the config)");
  auto* val = app.add_subcommand("validate-config", "check a config file");
  val->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  spdlog::set_level(spdlog::level::from_str(g.log_level));

  try {
    if (sim->parsed()) {
      RunConfig cfg;
      if (!g.config.empty()) {
        cfg = config_with_overrides(g);
      } else {
        if (gt_dir.empty() || out_dir.empty() || g.seed.empty()) {
          throw ConfigError("/", "simulate needs --config or all of --gt-dir, --out-dir, --seed");
        }
        cfg.master_seed = parse_u64(g.seed);
        if (g.workers > 0) cfg.workers = cfg.simulation.workers = g.workers;
      }
      if (!gt_dir.empty()) cfg.gt_dir = gt_dir;
      if (!out_dir.empty()) cfg.dataset_dir = out_dir;
      if (!grid_text.empty()) cfg.grid = SweepGrid::parse(grid_text);
      const auto m = cmd_simulate(cfg);
      std::cout << m.entries.size() << " sequences, " << m.warnings.size() << " warnings\n";
      return kExitOk;
    }
    if (stab->parsed()) {
      const StabilizerSpec spec = stabilizer_from_flags(stab_method, stab_reg, stab_flow, stab_outer, stab_mu);
      const Sequence seq = load_sequence(stab_in);
      StabilizeTrace trace;
      const auto start = Clock::now();
      const Image out = stabilize(seq, spec, &trace);
      const double wall = ms_since(start);
      ensure_parent(stab_out);
      save_image(out, stab_out);
      json iterations = json::array();
      for (const auto& it : trace.iterations) {
        iterations.push_back({{"objective_before", it.objective_before}, {"objective_after", it.objective_after}});
      }
      json spec_json = to_json([&] {
        RunConfig c;
        c.pipelines.push_back(builtin_pipeline("cli", spec));
        return c;
      }())["pipelines"][0]["stabilizer"];
      const fs::path out_path(stab_out);
      write_json((out_path.has_parent_path() ? out_path.parent_path() : fs::path(".")) / "stabilize.json",
                 {{"input", stab_in},
                  {"output", stab_out},
                  {"label", spec.label()},
                  {"spec", spec_json},
                  {"iterations", iterations},
                  {"wall_ms", wall}});
      return kExitOk;
    }
    if (deb->parsed()) {
      DeblurSpec spec;
      if (deb_method == "lr") spec.method = DeblurMethod::LucyRichardson;
      if (deb_method == "tv") spec.method = DeblurMethod::TVDeconv;
      if (nsr >= 0.0) spec.nsr = nsr;
      if (lambda >= 0.0) spec.tv_lambda = lambda;
      if (iters > 0) {
        spec.lr_iterations = iters;
        spec.tv_iterations = iters;
      }
      if (!r0_text.empty() && !semiblind) throw InvalidArgument("--r0-grid requires --semiblind");
      if (semiblind) spec.kernel = SemiBlind{r0_text.empty() ? default_r0_grid() : parse_r0_grid(r0_text)};
      spec.validate();
      const SequenceInfo info = read_params_json(deb_params);
      std::optional<double> r0;
      const Image out = deblur(load_image(deb_in), info.params, spec, &r0);
      ensure_parent(deb_out);
      save_image(out, deb_out);
      if (r0) std::cout << "selected r0 " << format_double(*r0) << " m\n";
      return kExitOk;
    }
    if (run->parsed()) {
      const RunConfig cfg = config_with_overrides(g);
      const RunResult r = cmd_run(cfg);
      std::cout << cfg.results_csv().string() << '\n';
      return r.summary.failed > 0 ? kExitPartial : kExitOk;
    }
    if (rep->parsed()) {
      fs::path csv = rep_csv, out = rep_out;
      if (csv.empty() || out.empty()) {
        const RunConfig cfg = config_with_overrides(g);
        if (csv.empty()) csv = cfg.results_csv();
        if (out.empty()) out = cfg.report_dir();
      }
      for (const auto& p : cmd_report(csv, out)) std::cout << p.string() << '\n';
      return kExitOk;
    }
    if (val->parsed()) {
      const RunConfig cfg = config_with_overrides(g);
      check_external_commands(cfg);
      std::cout << "config ok: " << cfg.pipelines.size() << " pipelines, " << cfg.grid.size()
                << " combinations\n";
      return kExitOk;
    }
  } catch (const InvalidArgument& e) {
    spdlog::error("{}", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitFatal;
  }
  return kExitUsage;
}

}  // namespace turbbench
