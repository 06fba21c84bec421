#include "turbbench/cli/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "turbbench/imgcore/text.hpp"
#include "turbbench/turbsim/seed.hpp"

namespace turbbench {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Object view that remembers its JSON pointer and which keys were read, so
// leftovers can be reported as unknown.
class Node {
 public:
  Node(const json& j, std::string pointer) : j_(j), pointer_(std::move(pointer)) {
    if (!j_.is_object()) fail("expected an object");
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ConfigError(pointer_.empty() ? "/" : pointer_, message);
  }
  [[noreturn]] void fail_at(const std::string& key, const std::string& message) const {
    throw ConfigError(pointer_ + "/" + key, message);
  }
  const std::string& pointer() const { return pointer_; }
  std::string child_pointer(const std::string& key) const { return pointer_ + "/" + key; }

  bool has(const std::string& key) {
    used_.insert(key);
    return j_.contains(key);
  }

  const json& at(const std::string& key) {
    if (!has(key)) fail_at(key, "missing required key '" + key + "'");
    return j_.at(key);
  }

  std::string string(const std::string& key) {
    const json& v = at(key);
    if (!v.is_string()) fail_at(key, "expected a string");
    std::string s = v.get<std::string>();
    if (s.empty()) fail_at(key, "must not be empty");
    return s;
  }
  std::string string(const std::string& key, const std::string& fallback) {
    return has(key) ? string(key) : fallback;
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number()) fail_at(key, "expected a number");
    return v.get<double>();
  }

  int integer(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) fail_at(key, "expected an integer");
    const auto i = v.get<std::int64_t>();
    if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max()) {
      fail_at(key, "integer out of range");
    }
    return static_cast<int>(i);
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) fail_at(key, "expected true or false");
    return v.get<bool>();
  }

  void reject_unknown() const {
    for (const auto& [key, value] : j_.items()) {
      if (used_.count(key) == 0) fail_at(key, "unknown key '" + key + "'");
    }
  }

 private:
  const json& j_;
  std::string pointer_;
  std::set<std::string> used_;
};

template <typename Fn>
void checked(const std::string& pointer, Fn&& fn) {
  try {
    fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ConfigError(pointer.empty() ? "/" : pointer, e.what());
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return (path.is_absolute() ? path : base / path).lexically_normal();
}

template <typename T>
std::vector<T> number_list(const json& v, const std::string& pointer) {
  if (!v.is_array() || v.empty()) throw ConfigError(pointer, "expected a non-empty array");
  std::vector<T> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const json& e = v[i];
    const bool ok = std::is_integral_v<T> ? e.is_number_integer() : e.is_number();
    if (!ok) {
      throw ConfigError(pointer + "/" + std::to_string(i),
                        std::is_integral_v<T> ? "expected an integer" : "expected a number");
    }
    out.push_back(e.get<T>());
  }
  return out;
}

SweepGrid parse_grid(Node& root) {
  if (!root.has("grid")) return SweepGrid{};
  const std::string ptr = root.child_pointer("grid");
  const json& g = root.at("grid");
  SweepGrid grid;
  if (g.is_string()) {
    checked(ptr, [&] { grid = SweepGrid::parse(g.get<std::string>()); });
  } else {
    Node n(g, ptr);
    if (n.has("L_km")) grid.distances_km = number_list<double>(n.at("L_km"), n.child_pointer("L_km"));
    if (n.has("a")) grid.a_values = number_list<int>(n.at("a"), n.child_pointer("a"));
    if (n.has("b")) grid.b_values = number_list<int>(n.at("b"), n.child_pointer("b"));
    n.reject_unknown();
  }
  checked(ptr, [&] { grid.validate(); });
  return grid;
}

SsimOptions parse_metrics(Node& root) {
  SsimOptions m;
  if (!root.has("metrics")) return m;
  Node n(root.at("metrics"), root.child_pointer("metrics"));
  if (n.has("ssim_mode")) {
    const std::string mode = n.string("ssim_mode");
    checked(n.child_pointer("ssim_mode"), [&] { m.mode = parse_ssim_mode(mode); });
  }
  m.window = n.integer("window", m.window);
  m.sigma = n.number("sigma", m.sigma);
  m.k1 = n.number("k1", m.k1);
  m.k2 = n.number("k2", m.k2);
  n.reject_unknown();
  checked(n.pointer(), [&] { m.validate(); });
  return m;
}

DatasetOptions parse_simulation(Node& root) {
  DatasetOptions o;
  if (!root.has("simulation")) return o;
  Node n(root.at("simulation"), root.child_pointer("simulation"));
  o.crop_size = n.integer("crop_size", o.crop_size);
  o.kernel_size = n.integer("kernel_size", o.kernel_size);
  o.base.num_frames = n.integer("n_frames", o.base.num_frames);
  o.base.aperture_m = n.number("aperture_m", o.base.aperture_m);
  o.base.focal_m = n.number("focal_m", o.base.focal_m);
  o.base.wavelength_m = n.number("wavelength_m", o.base.wavelength_m);
  o.base.pixel_pitch_m = n.number("pixel_pitch_m", o.base.pixel_pitch_m);
  o.base.noise_sigma = n.number("noise_sigma", o.base.noise_sigma);
  n.reject_unknown();
  if (o.crop_size < 64) n.fail_at("crop_size", "must be at least 64");
  if (o.kernel_size < 1 || o.kernel_size % 2 == 0) n.fail_at("kernel_size", "must be odd and positive");
  if (o.kernel_size > o.crop_size) n.fail_at("kernel_size", "must not exceed crop_size");
  checked(n.pointer(), [&] { validate(o.base); });
  return o;
}

StabilizerKind parse_stabilizer_kind(const std::string& s, const Node& n) {
  if (s == "mean") return StabilizerKind::TemporalAverage;
  if (s == "median") return StabilizerKind::TemporalMedian;
  if (s == "mg") return StabilizerKind::MaoGilles;
  n.fail_at("method", "unknown stabilizer '" + s + "' (mean, median, mg)");
}

const char* stabilizer_kind_name(StabilizerKind k) {
  switch (k) {
    case StabilizerKind::TemporalMedian:
      return "median";
    case StabilizerKind::MaoGilles:
      return "mg";
    case StabilizerKind::TemporalAverage:
    default:
      return "mean";
  }
}

StabilizerSpec parse_stabilizer(const json& j, const std::string& ptr) {
  Node n(j, ptr);
  StabilizerSpec s;
  s.kind = parse_stabilizer_kind(n.string("method"), n);
  const std::string reg = n.string("reg", "tv");
  if (reg == "tv") {
    s.regularizer = Regularizer::TV;
  } else if (reg == "nltv") {
    s.regularizer = Regularizer::NLTV;
  } else {
    n.fail_at("reg", "unknown regulariser '" + reg + "' (tv, nltv)");
  }
  const std::string flow = n.string("flow", "lk");
  if (flow == "lk") {
    s.flow.method = FlowMethod::LucasKanade;
  } else if (flow == "tvl1") {
    s.flow.method = FlowMethod::TVL1;
  } else {
    n.fail_at("flow", "unknown flow '" + flow + "' (lk, tvl1)");
  }
  s.outer_iterations = n.integer("outer_iterations", s.outer_iterations);
  s.fusion_mu = n.number("fusion_mu", s.fusion_mu);
  s.fusion_iterations = n.integer("fusion_iterations", s.fusion_iterations);
  s.nltv_patch = n.integer("nltv_patch", s.nltv_patch);
  s.nltv_search = n.integer("nltv_search", s.nltv_search);
  s.nltv_neighbors = n.integer("nltv_neighbors", s.nltv_neighbors);
  s.nltv_h = n.number("nltv_h", s.nltv_h);
  s.flow.pyramid_levels = n.integer("pyramid_levels", s.flow.pyramid_levels);
  s.flow.lk_window = n.integer("lk_window", s.flow.lk_window);
  s.flow.lk_iterations = n.integer("lk_iterations", s.flow.lk_iterations);
  s.flow.tvl1_lambda = n.number("tvl1_lambda", s.flow.tvl1_lambda);
  s.flow.tvl1_tau = n.number("tvl1_tau", s.flow.tvl1_tau);
  s.flow.tvl1_sigma = n.number("tvl1_sigma", s.flow.tvl1_sigma);
  s.flow.tvl1_warps = n.integer("tvl1_warps", s.flow.tvl1_warps);
  s.flow.tvl1_inner_iters = n.integer("tvl1_inner_iters", s.flow.tvl1_inner_iters);
  n.reject_unknown();
  checked(ptr, [&] { s.validate(); });
  return s;
}

DeblurSpec parse_deblur(const json& j, const std::string& ptr) {
  Node n(j, ptr);
  DeblurSpec d;
  const std::string method = n.string("method");
  if (method == "wiener") {
    d.method = DeblurMethod::Wiener;
  } else if (method == "lr") {
    d.method = DeblurMethod::LucyRichardson;
  } else if (method == "tv") {
    d.method = DeblurMethod::TVDeconv;
  } else {
    n.fail_at("method", "unknown deblurrer '" + method + "' (wiener, lr, tv)");
  }
  d.nsr = n.number("nsr", d.nsr);
  d.tv_lambda = n.number("lambda", d.tv_lambda);
  if (d.method == DeblurMethod::LucyRichardson) {
    d.lr_iterations = n.integer("iterations", d.lr_iterations);
  } else if (d.method == DeblurMethod::TVDeconv) {
    d.tv_iterations = n.integer("iterations", d.tv_iterations);
  } else if (n.has("iterations")) {
    n.fail_at("iterations", "not used by the Wiener filter");
  }
  d.kernel_size = n.integer("kernel_size", d.kernel_size);
  const bool semiblind = n.boolean("semiblind", false);
  if (n.has("r0_grid")) {
    if (!semiblind) n.fail_at("r0_grid", "only valid with \"semiblind\": true");
    d.kernel = SemiBlind{number_list<double>(n.at("r0_grid"), n.child_pointer("r0_grid"))};
  } else if (semiblind) {
    d.kernel = SemiBlind{default_r0_grid()};
  }
  n.reject_unknown();
  checked(ptr, [&] { d.validate(); });
  return d;
}

PipelineSpec parse_pipeline(const json& j, const std::string& ptr) {
  Node n(j, ptr);
  PipelineSpec p;
  p.name = n.string("name");
  const bool has_external = n.has("external");
  const bool has_stabilizer = n.has("stabilizer");
  if (has_external == has_stabilizer) n.fail("needs exactly one of 'stabilizer' or 'external'");
  if (has_external) {
    if (n.has("deblur")) n.fail_at("deblur", "external pipelines restore on their own");
    Node e(n.at("external"), n.child_pointer("external"));
    ExternalPipeline ext;
    ext.command = e.string("command");
    ext.timeout_s = e.number("timeout_s", ext.timeout_s);
    e.reject_unknown();
    p.body = ext;
  } else {
    BuiltinPipeline b;
    b.stabilizer = parse_stabilizer(n.at("stabilizer"), n.child_pointer("stabilizer"));
    if (n.has("deblur") && !n.at("deblur").is_null()) {
      b.deblur = parse_deblur(n.at("deblur"), n.child_pointer("deblur"));
    }
    p.body = b;
  }
  n.reject_unknown();
  checked(ptr, [&] { p.validate(); });
  return p;
}

json stabilizer_json(const StabilizerSpec& s) {
  return {{"method", stabilizer_kind_name(s.kind)},
          {"reg", s.regularizer == Regularizer::TV ? "tv" : "nltv"},
          {"flow", s.flow.method == FlowMethod::LucasKanade ? "lk" : "tvl1"},
          {"outer_iterations", s.outer_iterations},
          {"fusion_mu", s.fusion_mu},
          {"fusion_iterations", s.fusion_iterations},
          {"nltv_patch", s.nltv_patch},
          {"nltv_search", s.nltv_search},
          {"nltv_neighbors", s.nltv_neighbors},
          {"nltv_h", s.nltv_h},
          {"pyramid_levels", s.flow.pyramid_levels},
          {"lk_window", s.flow.lk_window},
          {"lk_iterations", s.flow.lk_iterations},
          {"tvl1_lambda", s.flow.tvl1_lambda},
          {"tvl1_tau", s.flow.tvl1_tau},
          {"tvl1_sigma", s.flow.tvl1_sigma},
          {"tvl1_warps", s.flow.tvl1_warps},
          {"tvl1_inner_iters", s.flow.tvl1_inner_iters}};
}

json deblur_json(const DeblurSpec& d) {
  json j = {{"method", to_string(d.method)}, {"kernel_size", d.kernel_size}};
  switch (d.method) {
    case DeblurMethod::Wiener:
      j["nsr"] = d.nsr;
      break;
    case DeblurMethod::LucyRichardson:
      j["iterations"] = d.lr_iterations;
      break;
    case DeblurMethod::TVDeconv:
      j["lambda"] = d.tv_lambda;
      j["iterations"] = d.tv_iterations;
      break;
  }
  if (const auto* sb = std::get_if<SemiBlind>(&d.kernel)) {
    j["semiblind"] = true;
    j["r0_grid"] = sb->r0_grid;
  }
  return j;
}

}  // namespace

RunConfig parse_config(const json& doc, const fs::path& base_dir) {
  Node root(doc, "");
  RunConfig cfg;
  cfg.gt_dir = resolve(base_dir, root.string("gt_dir"));
  cfg.dataset_dir = resolve(base_dir, root.string("dataset_dir"));
  cfg.results_dir = resolve(base_dir, root.string("results_dir"));

  const json& seed = root.at("master_seed");
  if (seed.is_number_unsigned() || (seed.is_number_integer() && seed.get<std::int64_t>() >= 0)) {
    cfg.master_seed = seed.get<std::uint64_t>();
  } else if (seed.is_string()) {
    checked("/master_seed", [&] { cfg.master_seed = parse_u64(seed.get<std::string>()); });
  } else {
    throw ConfigError("/master_seed", "expected a non-negative 64-bit integer");
  }

  cfg.grid = parse_grid(root);
  cfg.metrics = parse_metrics(root);
  cfg.simulation = parse_simulation(root);
  cfg.workers = root.integer("workers", 1);
  if (cfg.workers < 1) root.fail_at("workers", "must be at least 1");
  cfg.simulation.workers = cfg.workers;

  const json& pipes = root.at("pipelines");
  if (!pipes.is_array() || pipes.empty()) {
    throw ConfigError("/pipelines", "expected a non-empty array");
  }
  std::set<std::string> names;
  std::set<std::pair<std::string, std::string>> labels;
  for (std::size_t i = 0; i < pipes.size(); ++i) {
    const std::string ptr = "/pipelines/" + std::to_string(i);
    PipelineSpec p = parse_pipeline(pipes[i], ptr);
    if (!names.insert(p.name).second) {
      throw ConfigError(ptr + "/name", "duplicate pipeline name '" + p.name + "'");
    }
    if (!labels.insert({p.stabilizer_label(), p.deblurrer_label()}).second) {
      throw ConfigError(ptr, "same stabilizer/deblurrer labels as an earlier pipeline (" +
                                 p.stabilizer_label() + ", " + p.deblurrer_label() + ")");
    }
    cfg.pipelines.push_back(std::move(p));
  }
  root.reject_unknown();
  return cfg;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("/", "cannot read config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("/", path.string() + ": " + e.what());
  }
  const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
  return parse_config(doc, base);
}

json to_json(const RunConfig& cfg) {
  json pipes = json::array();
  for (const auto& p : cfg.pipelines) {
    json j = {{"name", p.name}};
    if (const auto* b = std::get_if<BuiltinPipeline>(&p.body)) {
      j["stabilizer"] = stabilizer_json(b->stabilizer);
      j["deblur"] = b->deblur ? deblur_json(*b->deblur) : json(nullptr);
    } else {
      const auto& e = std::get<ExternalPipeline>(p.body);
      j["external"] = {{"command", e.command}, {"timeout_s", e.timeout_s}};
    }
    pipes.push_back(std::move(j));
  }
  const auto& s = cfg.simulation;
  return {{"gt_dir", cfg.gt_dir.string()},
          {"dataset_dir", cfg.dataset_dir.string()},
          {"results_dir", cfg.results_dir.string()},
          {"master_seed", cfg.master_seed},
          {"grid",
           {{"L_km", cfg.grid.distances_km}, {"a", cfg.grid.a_values}, {"b", cfg.grid.b_values}}},
          {"workers", cfg.workers},
          {"metrics",
           {{"ssim_mode", to_string(cfg.metrics.mode)},
            {"window", cfg.metrics.window},
            {"sigma", cfg.metrics.sigma},
            {"k1", cfg.metrics.k1},
            {"k2", cfg.metrics.k2}}},
          {"simulation",
           {{"crop_size", s.crop_size},
            {"kernel_size", s.kernel_size},
            {"n_frames", s.base.num_frames},
            {"aperture_m", s.base.aperture_m},
            {"focal_m", s.base.focal_m},
            {"wavelength_m", s.base.wavelength_m},
            {"pixel_pitch_m", s.base.pixel_pitch_m},
            {"noise_sigma", s.base.noise_sigma}}},
          {"pipelines", pipes}};
}

json dataset_fingerprint(const RunConfig& cfg) {
  const json full = to_json(cfg);
  json files = json::array();
  std::vector<fs::path> paths;
  if (fs::is_directory(cfg.gt_dir)) {
    for (const auto& e : fs::directory_iterator(cfg.gt_dir)) {
      if (e.is_regular_file()) paths.push_back(e.path());
    }
  }
  std::sort(paths.begin(), paths.end());
  for (const auto& p : paths) {
    files.push_back({{"name", p.filename().string()}, {"bytes", fs::file_size(p)}});
  }
  return {{"dataset_version", kDatasetVersion},
          {"gt_dir", full["gt_dir"]},
          {"gt_files", files},
          {"master_seed", full["master_seed"]},
          {"grid", full["grid"]},
          {"simulation", full["simulation"]}};
}

void check_external_commands(const RunConfig& cfg) {
  for (std::size_t i = 0; i < cfg.pipelines.size(); ++i) {
    const auto* e = std::get_if<ExternalPipeline>(&cfg.pipelines[i].body);
    if (e != nullptr && !command_available(e->command)) {
      throw ConfigError("/pipelines/" + std::to_string(i) + "/external/command",
                        "program not found or not executable: " + e->command);
    }
  }
}

std::vector<double> parse_r0_grid(const std::string& text) {
  std::vector<double> grid;
  for (const auto& field : split_csv(text)) grid.push_back(parse_double(field));
  if (grid.empty()) throw InvalidArgument("empty r0 grid");
  for (double r0 : grid) {
    if (!(r0 > 0.0)) throw InvalidArgument("r0 values must be positive");
  }
  return grid;
}

}  // namespace turbbench
