#include "bobw/harness/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bobw/rng.hpp"

namespace bobw::harness {

using nlohmann::json;

ConfigError::ConfigError(const std::string& source, int line, int column, const std::string& message)
    : std::runtime_error(line > 0 ? source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message
                                  : source + ": " + message),
      line_(line),
      column_(column) {}

namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& msg) const {
    const YAML::Mark m = node.IsDefined() ? node.Mark() : YAML::Mark::null_mark();
    if (m.is_null()) throw ConfigError(source_, 0, 0, msg);
    throw ConfigError(source_, m.line + 1, m.column + 1, msg);
  }

  void require_map(const YAML::Node& node, const std::string& what) const {
    if (!node.IsMap()) fail(node, what + " must be a mapping");
  }

  void only_keys(const YAML::Node& node, std::initializer_list<const char*> allowed) const {
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& kv : node) {
      const std::string key = kv.first.as<std::string>();
      if (!ok.count(key)) fail(kv.first, "unknown key '" + key + "'");
    }
  }

  YAML::Node need(const YAML::Node& parent, const char* key) const {
    const YAML::Node n = parent[key];
    if (!n) fail(parent, std::string("missing required key '") + key + "'");
    return n;
  }

  double real(const YAML::Node& n) const {
    if (!n.IsScalar()) fail(n, "expected a number");
    try {
      return n.as<double>();
    } catch (const YAML::Exception&) {
      fail(n, "expected a number, got '" + n.Scalar() + "'");
    }
  }

  std::uint64_t count(const YAML::Node& n) const {
    if (!n.IsScalar()) fail(n, "expected a non-negative integer");
    const std::string s = n.Scalar();
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      fail(n, "expected a non-negative integer, got '" + s + "'");
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      fail(n, "integer out of range: '" + s + "'");
    }
  }

  std::string text(const YAML::Node& n) const {
    if (!n.IsScalar()) fail(n, "expected a string");
    return n.Scalar();
  }

  Vector vec(const YAML::Node& n) const {
    if (!n.IsSequence() || n.size() == 0) fail(n, "expected a non-empty list of numbers");
    std::vector<double> v;
    for (const auto& e : n) v.push_back(real(e));
    return Vector(std::move(v));
  }

  std::vector<Vector> vecs(const YAML::Node& n) const {
    if (!n.IsSequence() || n.size() == 0) fail(n, "expected a non-empty list of vectors");
    std::vector<Vector> out;
    for (const auto& e : n) out.push_back(vec(e));
    return out;
  }

  template <class F>
  auto guarded(const YAML::Node& n, F&& f) const {
    try {
      return f();
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      fail(n, e.what());
    }
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
};

ContextModel model_from(const ContextSpec& c) {
  if (c.kind == "scaled_sphere") return ContextModel::scaled_sphere(c.dim, c.radius);
  return ContextModel::discrete(c.points, c.weights, c.norm_bound);
}

json vec_json(const Vector& v) { return json(v.raw()); }

json vecs_json(const std::vector<Vector>& vs) {
  json a = json::array();
  for (const Vector& v : vs) a.push_back(vec_json(v));
  return a;
}

ExperimentConfig parse_node(const YAML::Node& root, const Reader& r) {
  ExperimentConfig cfg;
  r.require_map(root, "config");
  r.only_keys(root, {"name", "context", "environment", "agent", "horizons", "seeds", "output_dir", "probes", "threads",
                     "export_history"});
  if (root["name"]) cfg.name = r.text(root["name"]);

  // context
  const YAML::Node ctx = r.need(root, "context");
  r.require_map(ctx, "context");
  cfg.context.kind = r.text(r.need(ctx, "kind"));
  if (cfg.context.kind == "discrete") {
    r.only_keys(ctx, {"kind", "points", "weights", "norm_bound"});
    cfg.context.points = r.vecs(r.need(ctx, "points"));
    if (ctx["weights"]) {
      const YAML::Node w = ctx["weights"];
      if (!w.IsSequence()) r.fail(w, "weights must be a list");
      for (const auto& e : w) cfg.context.weights.push_back(r.real(e));
    } else {
      cfg.context.weights.assign(cfg.context.points.size(), 1.0 / static_cast<double>(cfg.context.points.size()));
    }
    if (ctx["norm_bound"]) cfg.context.norm_bound = r.real(ctx["norm_bound"]);
  } else if (cfg.context.kind == "scaled_sphere") {
    r.only_keys(ctx, {"kind", "dim", "radius"});
    cfg.context.dim = r.count(r.need(ctx, "dim"));
    cfg.context.radius = r.real(r.need(ctx, "radius"));
  } else {
    r.fail(ctx["kind"], "unknown context kind '" + cfg.context.kind + "' (discrete | scaled_sphere)");
  }
  const ContextModel model = r.guarded(ctx, [&] { return model_from(cfg.context); });

  // environment
  const YAML::Node envn = r.need(root, "environment");
  r.require_map(envn, "environment");
  r.only_keys(envn, {"regime", "base_params", "strategy", "corrupt_rounds", "corruption_budget", "noise_bound",
                     "param_bound", "gap"});
  EnvironmentSpec& es = cfg.environment;
  es.regime = r.guarded(envn["regime"], [&] { return parse_regime(r.text(r.need(envn, "regime"))); });
  const YAML::Node bp = r.need(envn, "base_params");
  if (bp.IsMap()) {
    r.only_keys(bp, {"arms", "seed", "norm"});
    ParamGenerator g;
    g.arms = r.count(r.need(bp, "arms"));
    g.seed = r.count(r.need(bp, "seed"));
    g.norm = r.real(r.need(bp, "norm"));
    if (g.arms < 2) r.fail(bp["arms"], "need at least two arms");
    if (!(g.norm > 0.0)) r.fail(bp["norm"], "norm must be positive");
    es.base_params = generate_base_params(g, model.dim());
    cfg.param_generator = g;
  } else {
    es.base_params = r.vecs(bp);
  }
  if (envn["strategy"]) es.strategy = r.guarded(envn["strategy"], [&] { return parse_strategy(r.text(envn["strategy"])); });
  if (envn["corrupt_rounds"]) es.corrupt_rounds = r.count(envn["corrupt_rounds"]);
  if (envn["corruption_budget"]) es.corruption_budget = r.real(envn["corruption_budget"]);
  if (envn["noise_bound"]) es.noise_bound = r.real(envn["noise_bound"]);
  if (envn["param_bound"]) es.param_bound = r.real(envn["param_bound"]);
  if (envn["gap"]) cfg.gap = r.real(envn["gap"]);

  // agent
  if (root["agent"]) {
    const YAML::Node ag = root["agent"];
    r.require_map(ag, "agent");
    r.only_keys(ag, {"kind", "beta1_mode", "iteration_schedule", "beta1", "eta", "gamma", "iterations"});
    AgentSpec& a = cfg.agent;
    if (ag["kind"]) a.kind = r.text(ag["kind"]);
    if (a.kind != "bobw_real_ftrl" && a.kind != "real_lin_exp3" && a.kind != "uniform")
      r.fail(ag["kind"], "unknown agent kind '" + a.kind + "' (bobw_real_ftrl | real_lin_exp3 | uniform)");
    if (ag["beta1_mode"]) a.beta1_mode = r.guarded(ag["beta1_mode"], [&] { return parse_beta1_mode(r.text(ag["beta1_mode"])); });
    if (ag["iteration_schedule"])
      a.iteration_schedule = r.guarded(ag["iteration_schedule"],
                                       [&] { return parse_iteration_schedule(r.text(ag["iteration_schedule"])); });
    if (ag["beta1"]) a.beta1 = r.real(ag["beta1"]);
    if (ag["eta"]) a.eta = r.real(ag["eta"]);
    if (ag["gamma"]) a.gamma = r.real(ag["gamma"]);
    if (ag["iterations"]) a.iterations = r.count(ag["iterations"]);
    if (a.kind != "real_lin_exp3" && (a.eta || a.gamma || a.iterations))
      r.fail(ag, "eta, gamma and iterations only apply to real_lin_exp3");
    if (a.kind != "bobw_real_ftrl" && a.beta1) r.fail(ag["beta1"], "beta1 only applies to bobw_real_ftrl");
    if (a.beta1 && !(*a.beta1 > 0.0)) r.fail(ag["beta1"], "beta1 must be positive");
    if (a.eta && !(*a.eta > 0.0)) r.fail(ag["eta"], "eta must be positive");
    if (a.gamma && !(*a.gamma > 0.0 && *a.gamma <= 1.0)) r.fail(ag["gamma"], "gamma must lie in (0, 1]");
  }

  // horizons
  const YAML::Node hz = r.need(root, "horizons");
  if (hz.IsScalar()) {
    cfg.horizons.push_back(r.count(hz));
  } else if (hz.IsSequence() && hz.size() > 0) {
    for (const auto& e : hz) cfg.horizons.push_back(r.count(e));
  } else {
    r.fail(hz, "horizons must be a positive integer or a non-empty list");
  }
  for (std::size_t i = 0; i < cfg.horizons.size(); ++i) {
    const YAML::Node at = hz.IsSequence() ? hz[i] : hz;
    if (cfg.horizons[i] < 1) r.fail(at, "every horizon must be at least 1");
    if (cfg.agent.kind != "uniform" && cfg.horizons[i] < 2) r.fail(at, "learning agents need a horizon of at least 2");
  }

  if (root["seeds"]) {
    const YAML::Node sd = root["seeds"];
    r.require_map(sd, "seeds");
    r.only_keys(sd, {"count", "base"});
    if (sd["count"]) cfg.seed_count = r.count(sd["count"]);
    if (sd["base"]) cfg.seed_base = r.count(sd["base"]);
    if (cfg.seed_count < 1) r.fail(sd, "seeds.count must be at least 1");
  }
  if (root["output_dir"]) cfg.output_dir = r.text(root["output_dir"]);
  if (root["probes"]) {
    const YAML::Node pr = root["probes"];
    r.require_map(pr, "probes");
    r.only_keys(pr, {"continuous"});
    if (pr["continuous"]) cfg.continuous_probes = r.count(pr["continuous"]);
    if (cfg.continuous_probes < 1) r.fail(pr, "probes.continuous must be at least 1");
  }
  if (root["threads"]) cfg.threads = r.count(root["threads"]);
  if (root["export_history"]) {
    const YAML::Node eh = root["export_history"];
    try {
      cfg.export_history = eh.as<bool>();
    } catch (const YAML::Exception&) {
      r.fail(eh, "export_history must be true or false");
    }
  }

  // Cross-checks that need the built objects.
  for (std::size_t t : cfg.horizons) {
    const Environment env = r.guarded(envn, [&] { return Environment(es, model, t); });
    if (cfg.gap) {
      if (!model.is_discrete()) r.fail(envn["gap"], "gap certificates need a discrete context model");
      const GapCheck g = verify_gap(env, model, *cfg.gap);
      if (!g.ok())
        r.fail(envn["gap"], "claimed gap does not hold; smallest gap over the support is " +
                                std::to_string(g.measured_gap));
    }
  }
  return cfg;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  const Reader r(source);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(source, e.mark.is_null() ? 0 : e.mark.line + 1, e.mark.is_null() ? 0 : e.mark.column + 1, e.msg);
  }
  if (!root || root.IsNull()) throw ConfigError(source, 0, 0, "empty config");
  try {
    return parse_node(root, r);
  } catch (const YAML::Exception& e) {
    throw ConfigError(source, e.mark.is_null() ? 0 : e.mark.line + 1, e.mark.is_null() ? 0 : e.mark.column + 1, e.msg);
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), 0, 0, "cannot read file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

std::string canonical_json(const ExperimentConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  json ctx;
  ctx["kind"] = cfg.context.kind;
  if (cfg.context.kind == "discrete") {
    ctx["points"] = vecs_json(cfg.context.points);
    ctx["weights"] = cfg.context.weights;
    if (cfg.context.norm_bound) ctx["norm_bound"] = *cfg.context.norm_bound;
  } else {
    ctx["dim"] = cfg.context.dim;
    ctx["radius"] = cfg.context.radius;
  }
  j["context"] = ctx;
  const EnvironmentSpec& es = cfg.environment;
  json env;
  env["regime"] = to_string(es.regime);
  if (cfg.param_generator)
    env["base_params"] = {{"arms", cfg.param_generator->arms},
                          {"seed", cfg.param_generator->seed},
                          {"norm", cfg.param_generator->norm}};
  else
    env["base_params"] = vecs_json(es.base_params);
  env["strategy"] = to_string(es.strategy);
  env["corrupt_rounds"] = es.corrupt_rounds;
  env["corruption_budget"] = es.corruption_budget;
  env["noise_bound"] = es.noise_bound;
  if (es.param_bound) env["param_bound"] = *es.param_bound;
  if (cfg.gap) env["gap"] = *cfg.gap;
  j["environment"] = env;
  json ag;
  ag["kind"] = cfg.agent.kind;
  ag["beta1_mode"] = to_string(cfg.agent.beta1_mode);
  ag["iteration_schedule"] = to_string(cfg.agent.iteration_schedule);
  if (cfg.agent.beta1) ag["beta1"] = *cfg.agent.beta1;
  if (cfg.agent.eta) ag["eta"] = *cfg.agent.eta;
  if (cfg.agent.gamma) ag["gamma"] = *cfg.agent.gamma;
  if (cfg.agent.iterations) ag["iterations"] = *cfg.agent.iterations;
  j["agent"] = ag;
  j["horizons"] = cfg.horizons;
  j["seeds"] = {{"count", cfg.seed_count}, {"base", cfg.seed_base}};
  j["output_dir"] = cfg.output_dir;
  j["probes"] = {{"continuous", cfg.continuous_probes}};
  j["threads"] = cfg.threads;
  j["export_history"] = cfg.export_history;
  return j.dump();
}

std::vector<Vector> generate_base_params(const ParamGenerator& g, std::size_t dim) {
  std::vector<Vector> out;
  for (std::size_t a = 0; a < g.arms; ++a) {
    Rng rng = Rng::stream(g.seed, 0, Purpose::instance, a);
    std::vector<double> v(dim);
    double n2 = 0.0;
    while (n2 == 0.0) {
      n2 = 0.0;
      for (double& e : v) {
        e = rng.normal();
        n2 += e * e;
      }
    }
    const double scale = g.norm / std::sqrt(n2);
    for (double& e : v) e *= scale;
    out.emplace_back(std::move(v));
  }
  return out;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const ExperimentConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical_json(cfg))));
  return buf;
}

ContextModel build_context_model(const ExperimentConfig& cfg) { return model_from(cfg.context); }

std::unique_ptr<Agent> build_agent(const ExperimentConfig& cfg, const Environment& env, const ContextModel& model,
                                   std::size_t horizon) {
  const AgentSpec& a = cfg.agent;
  if (a.kind == "uniform") return std::make_unique<UniformAgent>(env.arms());
  const ScheduleConstants c{env.arms(), env.dim(), horizon, env.loss_bound(), model.norm_bound(), model.lambda_min()};
  if (a.kind == "real_lin_exp3") {
    RealLinExp3Params p = tuned_real_lin_exp3(c);
    if (a.eta) {
      p.eta = *a.eta;
      p.gamma = exploration_rate(c, 1.0 / p.eta);
      p.iterations = mgr_iterations(c, 1.0 / p.eta, p.gamma);
    }
    if (a.gamma) {
      p.gamma = *a.gamma;
      p.iterations = mgr_iterations(c, 1.0 / p.eta, p.gamma);
    }
    if (a.iterations) p.iterations = *a.iterations;
    return std::make_unique<RealLinExp3Agent>(c, p);
  }
  BobwOptions opt;
  opt.beta1_mode = a.beta1_mode;
  opt.iteration_schedule = a.iteration_schedule;
  opt.beta1_override = a.beta1;
  return std::make_unique<BobwAgent>(c, opt);
}

}  // namespace bobw::harness
