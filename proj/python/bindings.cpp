#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <memory>
#include <string>
#include <vector>

#include "bobw/harness/config.hpp"
#include "bobw/harness/plotdata.hpp"
#include "bobw/harness/runner.hpp"
#include "bobw/instances.hpp"
#include "bobw/mgr.hpp"
#include "bobw/oracle.hpp"
#include "bobw/policy.hpp"
#include "bobw/simulator.hpp"
#include "bobw/verify.hpp"

namespace py = pybind11;
using namespace bobw;

namespace {

std::vector<double> to_vec(const Distribution& d) { return {d.probs().begin(), d.probs().end()}; }

std::vector<std::vector<double>> to_rows(const Matrix& m) {
  std::vector<std::vector<double>> rows(m.dim(), std::vector<double>(m.dim()));
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) rows[i][j] = m(i, j);
  return rows;
}

std::vector<Vector> to_vectors(const std::vector<std::vector<double>>& rows) {
  std::vector<Vector> out;
  for (const auto& r : rows) out.emplace_back(r);
  return out;
}

instances::Instance named_instance(const std::string& name, std::size_t horizon, double noise) {
  if (name == "gap") return instances::two_arm_gap(0.3, noise);
  if (name == "sign_flip") return instances::two_arm_sign_flip(horizon / 10, 0.3, noise);
  if (name == "switcher") return instances::three_arm_switcher(noise);
  throw std::invalid_argument("unknown instance '" + name + "' (gap | sign_flip | switcher)");
}

py::dict simulate(const std::string& instance, const std::string& agent_kind, std::size_t horizon,
                  std::uint64_t seed, double noise) {
  const auto inst = named_instance(instance, horizon, noise);
  Environment env(inst.spec, inst.model, horizon);
  const ScheduleConstants c{env.arms(), env.dim(), horizon, env.loss_bound(), inst.model.norm_bound(),
                            inst.model.lambda_min()};
  std::unique_ptr<Agent> agent;
  if (agent_kind == "bobw_real_ftrl") {
    agent = std::make_unique<BobwAgent>(c);
  } else if (agent_kind == "real_lin_exp3") {
    agent = std::make_unique<RealLinExp3Agent>(c, tuned_real_lin_exp3(c));
  } else if (agent_kind == "uniform") {
    agent = std::make_unique<UniformAgent>(env.arms());
  } else {
    throw std::invalid_argument("unknown agent '" + agent_kind + "'");
  }
  TrialOptions opt;
  opt.seed = seed;
  opt.keep_rounds = false;
  ExperimentResult r;
  {
    py::gil_scoped_release release;
    r = run_trial(env, inst.model, *agent, horizon, opt);
  }
  py::dict d;
  d["regret"] = r.regret_curve;
  d["realized_regret"] = r.realized_regret_curve;
  d["q_bar"] = r.q_bar;
  d["gap"] = inst.gap;
  d["accounted_corruption"] = env.accounted_corruption();
  d["bias_violations"] = r.diagnostics.bias_violations;
  d["floor_violations"] = r.diagnostics.floor_violations;
  d["entropy_violations"] = r.diagnostics.entropy_violations;
  d["agent"] = r.agent_id;
  d["environment"] = r.environment_id;
  return d;
}

py::dict run_config(const std::string& path, const std::string& output_root, std::size_t threads) {
  const auto cfg = harness::load_config(path);
  harness::RunOptions opt;
  opt.output_root = output_root;
  opt.threads = threads;
  harness::RunReport rep;
  {
    py::gil_scoped_release release;
    rep = harness::run_experiment(cfg, opt);
  }
  py::dict d;
  d["config_hash"] = rep.config_hash;
  d["output_dir"] = rep.output_dir.string();
  d["ok"] = rep.ok();
  py::list cells;
  for (const auto& c : rep.cells) {
    py::dict cd;
    cd["T"] = c.horizon;
    cd["seed"] = c.seed;
    cd["ok"] = c.ok;
    cd["file"] = c.file;
    cd["history_file"] = c.history_file;
    cd["error"] = c.error;
    cd["final_regret"] = c.final_regret;
    cells.append(cd);
  }
  d["cells"] = cells;
  py::list aggs;
  for (const auto& a : rep.aggregates) {
    py::dict ad;
    ad["T"] = a.horizon;
    ad["seeds"] = a.seeds;
    ad["mean_final_regret"] = a.final_regret.mean;
    ad["stderr_final_regret"] = a.final_regret.stderr_;
    ad["q_bar"] = a.q_bar.mean;
    aggs.append(ad);
  }
  d["aggregates"] = aggs;
  d["loglog_slope"] = rep.loglog_slope;
  return d;
}

}  // namespace

PYBIND11_MODULE(_bobw, m) {
  m.doc() = "Linear contextual bandits: FTRL with matrix geometric resampling";
  m.attr("__version__") = BOBW_VERSION;

  m.def("gibbs", [](const std::vector<double>& scores, double beta) { return to_vec(gibbs(scores, beta)); },
        py::arg("scores"), py::arg("beta"), "Gibbs weights proportional to exp(-score / beta).");
  m.def("ftrl_argmin_numeric",
        [](const std::vector<double>& cumulative, double beta) {
          return to_vec(oracle::ftrl_argmin_numeric(cumulative, beta));
        },
        py::arg("cumulative"), py::arg("beta"), "Numeric minimizer of <L, q> - beta H(q) over the simplex.");
  m.def("entropy", [](const std::vector<double>& q) { return entropy(q); }, py::arg("q"));

  m.def("next_beta", &next_beta, py::arg("beta"), py::arg("beta1"), py::arg("entropy_sum"), py::arg("arms"));

  m.def("mgr",
        [](const std::vector<std::vector<double>>& points, const std::vector<double>& weights,
           const std::vector<double>& play_prob, double delta, std::size_t iterations, std::uint64_t seed) {
          if (play_prob.size() != points.size())
            throw std::invalid_argument("play_prob needs one entry per support point");
          const auto model = ContextModel::discrete(to_vectors(points), weights);
          const auto support = model.support();
          const FunctionPolicy policy(2, [&](std::size_t arm, std::span<const double> x) {
            for (std::size_t i = 0; i < support.size(); ++i)
              if (std::equal(x.begin(), x.end(), support[i].begin())) return arm == 0 ? play_prob[i] : 1.0 - play_prob[i];
            throw std::logic_error("context outside the support");
          });
          Rng rng = Rng::stream(seed, 0, Purpose::mgr);
          return to_rows(mgr(model, policy, 0, MgrConfig{delta, iterations}, rng));
        },
        py::arg("points"), py::arg("weights"), py::arg("play_prob"), py::arg("delta"), py::arg("iterations"),
        py::arg("seed") = 0,
        "One resampling estimate for arm 0 on a discrete model; play_prob[i] is pi(0 | points[i]).");
  m.def("mgr_expectation",
        [](const std::vector<std::vector<double>>& sigma, double delta, std::size_t iterations) {
          Matrix s(sigma.size());
          for (std::size_t i = 0; i < sigma.size(); ++i)
            for (std::size_t j = 0; j < sigma.size(); ++j) s(i, j) = sigma.at(i).at(j);
          return to_rows(oracle::mgr_expectation_closed_form(s, delta, iterations));
        },
        py::arg("sigma"), py::arg("delta"), py::arg("iterations"));

  m.def("simulate", &simulate, py::arg("instance") = "gap", py::arg("agent") = "bobw_real_ftrl",
        py::arg("horizon") = 1000, py::arg("seed") = 0, py::arg("noise") = 0.0,
        "Run one trial on a reference instance (gap | sign_flip | switcher).");

  m.def("canonical_config", [](const std::string& path) { return harness::canonical_json(harness::load_config(path)); },
        py::arg("path"));
  m.def("config_hash", [](const std::string& path) { return harness::config_hash(harness::load_config(path)); },
        py::arg("path"));
  m.def("run_config", &run_config, py::arg("path"), py::arg("output_root") = "", py::arg("threads") = 0);
  m.def("plotdata",
        [](const std::string& path, const std::string& mode) {
          return harness::plot_columns(path, harness::parse_plot_mode(mode));
        },
        py::arg("path"), py::arg("mode") = "regret-vs-t");

  m.def("verify",
        [](const std::string& level) {
          std::vector<verify::CheckResult> res;
          {
            py::gil_scoped_release release;
            res = verify::run_all(verify::parse_level(level));
          }
          py::list out;
          for (const auto& r : res) {
            py::dict d;
            d["name"] = r.name;
            d["passed"] = r.passed;
            d["informational"] = r.informational;
            d["measured"] = r.measured;
            d["threshold"] = r.threshold;
            d["detail"] = r.detail;
            out.append(d);
          }
          return out;
        },
        py::arg("level") = "quick");

  py::register_exception<harness::ConfigError>(m, "ConfigError", PyExc_ValueError);
}
