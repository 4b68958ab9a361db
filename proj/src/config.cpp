#include "wdrbo/config.hpp"

#include <fstream>
#include <json.hpp>
#include <numeric>
#include <set>
#include <sstream>

#include "wdrbo/errors.hpp"

namespace wdrbo {

using nlohmann::json;

namespace {

// Walks a JSON object, remembering the field path for error messages and
// rejecting keys nobody asked for.
class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail(path_, "expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return node_.contains(key);
  }
  const json& at(const std::string& key) {
    seen_.insert(key);
    return node_.at(key);
  }
  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (!seen_.count(it.key())) fail(child(it.key()), "unknown key");
    }
  }

  [[noreturn]] static void fail(const std::string& path, const std::string& what) {
    throw InputError("config: " + (path.empty() ? std::string("<root>") : path) + ": " + what);
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

double number(const json& v, const std::string& path) {
  if (!v.is_number()) Reader::fail(path, "expected a number");
  return v.get<double>();
}

int integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) Reader::fail(path, "expected an integer");
  return v.get<int>();
}

std::string text(const json& v, const std::string& path) {
  if (!v.is_string()) Reader::fail(path, "expected a string");
  return v.get<std::string>();
}

bool boolean(const json& v, const std::string& path) {
  if (!v.is_boolean()) Reader::fail(path, "expected true or false");
  return v.get<bool>();
}

Eigen::VectorXd vector_or_scalar(const json& v, const std::string& path) {
  if (v.is_number()) return Eigen::VectorXd::Constant(1, v.get<double>());
  if (!v.is_array() || v.empty()) Reader::fail(path, "expected a number or a nonempty array of numbers");
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(Eigen::Index(i)) = number(v[i], path + "[" + std::to_string(i) + "]");
  return out;
}

json to_json(const Eigen::VectorXd& v) {
  if (v.size() == 1) return v(0);
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Eigen::VectorXd broadcast(const Eigen::VectorXd& v, Eigen::Index d, const std::string& what) {
  if (v.size() == d) return v;
  if (v.size() == 1) return Eigen::VectorXd::Constant(d, v(0));
  throw InputError("config: " + what + ": has " + std::to_string(v.size()) + " entries, expected 1 or " +
                   std::to_string(d));
}

void read_kernel(ExperimentConfig& cfg, const json& node, const std::string& path) {
  Reader r(node, path);
  if (r.has("family")) {
    try {
      cfg.kernel_family = kernel_family_from_string(text(r.at("family"), r.child("family")));
    } catch (const InputError& e) {
      Reader::fail(r.child("family"), e.what());
    }
  }
  if (r.has("lengthscale")) cfg.lengthscale = vector_or_scalar(r.at("lengthscale"), r.child("lengthscale"));
  r.finish();
}

void read_beta(ExperimentConfig& cfg, const json& node, const std::string& path) {
  if (node.is_number()) {
    cfg.surrogate.beta = BetaMode::fixed(node.get<double>());
    return;
  }
  Reader r(node, path);
  if (!r.has("theoretical")) Reader::fail(path, "expected a number or {\"theoretical\": {...}}");
  Reader t(r.at("theoretical"), r.child("theoretical"));
  cfg.surrogate.beta = BetaMode::theoretical();
  if (t.has("R")) cfg.surrogate.noise_bound = number(t.at("R"), t.child("R"));
  if (t.has("B")) cfg.surrogate.norm_bound = number(t.at("B"), t.child("B"));
  if (t.has("delta")) cfg.surrogate.delta = number(t.at("delta"), t.child("delta"));
  t.finish();
  r.finish();
}

void read_optimizer(ExperimentConfig& cfg, const json& node, const std::string& path) {
  Reader r(node, path);
  if (r.has("starts")) cfg.optimizer.n_starts = integer(r.at("starts"), r.child("starts"));
  if (r.has("grid")) cfg.optimizer.n_grid_per_dim = integer(r.at("grid"), r.child("grid"));
  if (r.has("random")) cfg.optimizer.n_random = integer(r.at("random"), r.child("random"));
  if (r.has("max_iterations")) {
    cfg.optimizer.local_search.max_iterations = integer(r.at("max_iterations"), r.child("max_iterations"));
  }
  if (r.has("shrink")) cfg.optimizer.local_search.shrink = number(r.at("shrink"), r.child("shrink"));
  if (r.has("tolerance")) cfg.optimizer.local_search.tolerance = number(r.at("tolerance"), r.child("tolerance"));
  r.finish();
}

void read_acquisition(ExperimentConfig& cfg, const json& node, const std::string& path) {
  Reader r(node, path);
  if (r.has("algo")) {
    const json& a = r.at("algo");
    const std::string p = r.child("algo");
    cfg.algorithms.clear();
    auto add = [&](const json& v, const std::string& where) {
      try {
        cfg.algorithms.push_back(algorithm_from_string(text(v, where)));
      } catch (const InputError& e) {
        Reader::fail(where, e.what());
      }
    };
    if (a.is_array()) {
      if (a.empty()) Reader::fail(p, "expected at least one algorithm");
      for (std::size_t i = 0; i < a.size(); ++i) add(a[i], p + "[" + std::to_string(i) + "]");
    } else {
      add(a, p);
    }
  }
  if (r.has("beta")) read_beta(cfg, r.at("beta"), r.child("beta"));
  if (r.has("lipschitz")) {
    const std::string mode = text(r.at("lipschitz"), r.child("lipschitz"));
    if (mode == "numeric") {
      cfg.lipschitz.kind = LipschitzMode::Kind::Numeric;
    } else if (mode == "analytic") {
      cfg.lipschitz.kind = LipschitzMode::Kind::Analytic;
    } else {
      Reader::fail(r.child("lipschitz"), "expected \"numeric\" or \"analytic\"");
    }
  }
  if (r.has("lipschitz_grid")) cfg.lipschitz.grid = integer(r.at("lipschitz_grid"), r.child("lipschitz_grid"));
  if (r.has("stableopt_grid")) cfg.stableopt_grid = integer(r.at("stableopt_grid"), r.child("stableopt_grid"));
  if (r.has("optimizer")) read_optimizer(cfg, r.at("optimizer"), r.child("optimizer"));
  r.finish();
}

void read_ambiguity(ExperimentConfig& cfg, const json& node, const std::string& path) {
  Reader r(node, path);
  if (r.has("center")) {
    const json& c = r.at("center");
    const std::string p = r.child("center");
    if (c.is_string()) {
      const std::string name = c.get<std::string>();
      if (name == "empirical") {
        cfg.center = {CenterChoice::Kind::Empirical, {}, {}};
      } else if (name == "nominal") {
        cfg.center = {CenterChoice::Kind::Nominal, {}, {}};
      } else {
        Reader::fail(p, "expected \"empirical\", \"nominal\", {\"normal\": [mu, sigma]} or {\"uniform\": [lo, hi]}");
      }
    } else {
      Reader cr(c, p);
      const bool normal = cr.has("normal");
      const bool uniform = cr.has("uniform");
      if (normal == uniform) Reader::fail(p, "expected exactly one of normal or uniform");
      const std::string key = normal ? "normal" : "uniform";
      const json& pair = cr.at(key);
      if (!pair.is_array() || pair.size() != 2) Reader::fail(cr.child(key), "expected a two-element array");
      cfg.center = {normal ? CenterChoice::Kind::Normal : CenterChoice::Kind::Uniform,
                    vector_or_scalar(pair[0], cr.child(key) + "[0]"), vector_or_scalar(pair[1], cr.child(key) + "[1]")};
      cr.finish();
    }
  }
  if (r.has("radius")) {
    Reader rr(r.at("radius"), r.child("radius"));
    const bool constant = rr.has("constant");
    const bool inv_sqrt = rr.has("inv_sqrt");
    const bool table = rr.has("explicit");
    if (int(constant) + int(inv_sqrt) + int(table) != 1) {
      Reader::fail(r.child("radius"), "expected exactly one of constant, inv_sqrt or explicit");
    }
    try {
      if (constant) cfg.radius = RadiusSchedule::constant(number(rr.at("constant"), rr.child("constant")));
      if (inv_sqrt) cfg.radius = RadiusSchedule::inverse_sqrt(number(rr.at("inv_sqrt"), rr.child("inv_sqrt")));
      if (table) {
        const Eigen::VectorXd v = vector_or_scalar(rr.at("explicit"), rr.child("explicit"));
        cfg.radius = RadiusSchedule::explicit_table(std::vector<double>(v.data(), v.data() + v.size()));
      }
    } catch (const InputError& e) {
      Reader::fail(r.child("radius"), e.what());
    }
    rr.finish();
  }
  if (r.has("mc_samples")) cfg.center_mc_samples = integer(r.at("mc_samples"), r.child("mc_samples"));
  r.finish();
}

}  // namespace

std::string to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::WDRBO: return "wdrbo";
    case Algorithm::ERBO: return "erbo";
    case Algorithm::GPUCB: return "gpucb";
    case Algorithm::StableOpt: return "stableopt";
  }
  return "unknown";
}

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "wdrbo") return Algorithm::WDRBO;
  if (name == "erbo") return Algorithm::ERBO;
  if (name == "gpucb") return Algorithm::GPUCB;
  if (name == "stableopt") return Algorithm::StableOpt;
  throw InputError("unknown algorithm '" + name + "' (expected wdrbo, erbo, gpucb or stableopt)");
}

ExperimentConfig::ExperimentConfig() : seeds(15) { std::iota(seeds.begin(), seeds.end(), std::uint64_t{0}); }

void ExperimentConfig::validate() const {
  make_environment(env);
  if (noise_std && !(*noise_std >= 0.0)) throw InputError("config: noise_std: must be >= 0");
  if (algorithms.empty()) throw InputError("config: acquisition.algo: expected at least one algorithm");
  if (horizon < 1) throw InputError("config: T: must be >= 1");
  if (seeds.empty()) throw InputError("config: seeds: must not be empty");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw InputError("config: seeds: must be distinct");
  }
  if (!(lengthscale.array() > 0.0).all()) throw InputError("config: kernel.lengthscale: entries must be > 0");
  surrogate.validate();
  optimizer.validate();
  if (lipschitz.grid < 1) throw InputError("config: acquisition.lipschitz_grid: must be >= 1");
  if (stableopt_grid < 1) throw InputError("config: acquisition.stableopt_grid: must be >= 1");
  if (center_mc_samples < 1) throw InputError("config: ambiguity.mc_samples: must be >= 1");
  if (oracle_grid < 0) throw InputError("config: oracle.grid: must be >= 0");
  if (oracle_mc_samples < 1) throw InputError("config: oracle.mc_samples: must be >= 1");
  if (threads < 1) throw InputError("config: threads: must be >= 1");
  if (radius.kind == RadiusSchedule::Kind::Explicit && radius.table.size() < std::size_t(horizon)) {
    throw InputError("config: ambiguity.radius.explicit: shorter than T");
  }
  const Environment e = resolve_environment(*this);
  resolve_kernel(*this, e);
  resolve_ambiguity(*this, e);
}

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("config: not valid JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  Reader r(root, "");
  if (r.has("env")) cfg.env = text(r.at("env"), "env");
  if (r.has("noise_std")) cfg.noise_std = number(r.at("noise_std"), "noise_std");
  if (r.has("kernel")) read_kernel(cfg, r.at("kernel"), "kernel");
  if (r.has("lambda")) cfg.surrogate.lambda = number(r.at("lambda"), "lambda");
  if (r.has("ambiguity")) read_ambiguity(cfg, r.at("ambiguity"), "ambiguity");
  if (r.has("acquisition")) read_acquisition(cfg, r.at("acquisition"), "acquisition");
  if (r.has("T")) cfg.horizon = integer(r.at("T"), "T");
  const bool explicit_seeds = r.has("seeds");
  const bool counted_seeds = r.has("n_seeds");
  if (explicit_seeds && counted_seeds) Reader::fail("seeds", "give either seeds or n_seeds, not both");
  if (explicit_seeds) {
    const json& s = r.at("seeds");
    if (!s.is_array()) Reader::fail("seeds", "expected an array of nonnegative integers");
    cfg.seeds.clear();
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!s[i].is_number_unsigned()) Reader::fail("seeds[" + std::to_string(i) + "]", "expected a nonnegative integer");
      cfg.seeds.push_back(s[i].get<std::uint64_t>());
    }
  }
  if (counted_seeds) {
    const int n = integer(r.at("n_seeds"), "n_seeds");
    if (n < 1) Reader::fail("n_seeds", "must be >= 1");
    cfg.seeds.resize(std::size_t(n));
    std::iota(cfg.seeds.begin(), cfg.seeds.end(), std::uint64_t{0});
  }
  if (r.has("output")) cfg.output = text(r.at("output"), "output");
  if (r.has("oracle")) {
    Reader o(r.at("oracle"), "oracle");
    if (o.has("grid")) cfg.oracle_grid = integer(o.at("grid"), "oracle.grid");
    if (o.has("mc_samples")) cfg.oracle_mc_samples = integer(o.at("mc_samples"), "oracle.mc_samples");
    o.finish();
  }
  if (r.has("record_timing")) cfg.record_timing = boolean(r.at("record_timing"), "record_timing");
  if (r.has("threads")) cfg.threads = integer(r.at("threads"), "threads");
  r.finish();
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("config: cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_config(buffer.str());
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::string dump_config(const ExperimentConfig& cfg, int indent) {
  json root;
  root["env"] = cfg.env;
  if (cfg.noise_std) root["noise_std"] = *cfg.noise_std;
  root["kernel"] = {{"family", to_string(cfg.kernel_family)}, {"lengthscale", to_json(cfg.lengthscale)}};
  root["lambda"] = cfg.surrogate.lambda;

  json amb;
  switch (cfg.center.kind) {
    case CenterChoice::Kind::Nominal: amb["center"] = "nominal"; break;
    case CenterChoice::Kind::Empirical: amb["center"] = "empirical"; break;
    case CenterChoice::Kind::Normal: amb["center"] = {{"normal", {to_json(cfg.center.a), to_json(cfg.center.b)}}}; break;
    case CenterChoice::Kind::Uniform: amb["center"] = {{"uniform", {to_json(cfg.center.a), to_json(cfg.center.b)}}}; break;
  }
  switch (cfg.radius.kind) {
    case RadiusSchedule::Kind::Constant: amb["radius"] = {{"constant", cfg.radius.value}}; break;
    case RadiusSchedule::Kind::InverseSqrt: amb["radius"] = {{"inv_sqrt", cfg.radius.value}}; break;
    case RadiusSchedule::Kind::Explicit: amb["radius"] = {{"explicit", cfg.radius.table}}; break;
  }
  amb["mc_samples"] = cfg.center_mc_samples;
  root["ambiguity"] = amb;

  json acq;
  json algos = json::array();
  for (Algorithm a : cfg.algorithms) algos.push_back(to_string(a));
  acq["algo"] = algos;
  if (cfg.surrogate.beta.kind == BetaMode::Kind::Fixed) {
    acq["beta"] = cfg.surrogate.beta.value;
  } else {
    acq["beta"] = {{"theoretical",
                    {{"R", cfg.surrogate.noise_bound}, {"B", cfg.surrogate.norm_bound}, {"delta", cfg.surrogate.delta}}}};
  }
  acq["lipschitz"] = cfg.lipschitz.kind == LipschitzMode::Kind::Numeric ? "numeric" : "analytic";
  acq["lipschitz_grid"] = cfg.lipschitz.grid;
  acq["stableopt_grid"] = cfg.stableopt_grid;
  acq["optimizer"] = {{"starts", cfg.optimizer.n_starts},
                      {"grid", cfg.optimizer.n_grid_per_dim},
                      {"random", cfg.optimizer.n_random},
                      {"max_iterations", cfg.optimizer.local_search.max_iterations},
                      {"shrink", cfg.optimizer.local_search.shrink},
                      {"tolerance", cfg.optimizer.local_search.tolerance}};
  root["acquisition"] = acq;
  root["T"] = cfg.horizon;
  root["seeds"] = cfg.seeds;
  root["output"] = cfg.output.string();
  root["oracle"] = {{"grid", cfg.oracle_grid}, {"mc_samples", cfg.oracle_mc_samples}};
  root["record_timing"] = cfg.record_timing;
  root["threads"] = cfg.threads;
  return root.dump(indent);
}

Environment resolve_environment(const ExperimentConfig& config) {
  Environment env = make_environment(config.env);
  if (config.noise_std) env.noise_std = *config.noise_std;
  return env;
}

KernelSpec resolve_kernel(const ExperimentConfig& config, const Environment& env) {
  const Eigen::Index d = env.dx() + env.dc();
  Eigen::VectorXd width(d);
  width << env.x_bounds.width(), env.c_bounds.width();
  const Eigen::VectorXd normalized = broadcast(config.lengthscale, d, "kernel.lengthscale");
  return KernelSpec{config.kernel_family, normalized.cwiseProduct(width), 1.0};
}

AmbiguityModel resolve_ambiguity(const ExperimentConfig& config, const Environment& env) {
  const Eigen::Index dc = env.dc();
  const CenterChoice& c = config.center;
  AmbiguityModel::Center center = EmpiricalCenter{};
  switch (c.kind) {
    case CenterChoice::Kind::Nominal:
      if (env.nominal_center) center = ParametricCenter{*env.nominal_center};
      break;
    case CenterChoice::Kind::Empirical: break;
    case CenterChoice::Kind::Normal:
      center = ParametricCenter{ContextDistribution::normal(broadcast(c.a, dc, "ambiguity.center.normal[0]"),
                                                            broadcast(c.b, dc, "ambiguity.center.normal[1]"))};
      break;
    case CenterChoice::Kind::Uniform:
      center = ParametricCenter{ContextDistribution::uniform(broadcast(c.a, dc, "ambiguity.center.uniform[0]"),
                                                             broadcast(c.b, dc, "ambiguity.center.uniform[1]"))};
      break;
  }
  return AmbiguityModel(std::move(center), config.radius, env.c_bounds);
}

}  // namespace wdrbo
