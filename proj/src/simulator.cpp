#include "bobw/simulator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "bobw/mgr.hpp"
#include "bobw/oracle.hpp"

namespace bobw {

namespace {

std::vector<ProbeTrace> make_probes(const ContextModel& model, std::size_t arms, const TrialOptions& opt) {
  std::vector<ProbeTrace> probes;
  if (model.is_discrete()) {
    const auto pts = model.support();
    const auto w = model.weights();
    for (std::size_t i = 0; i < pts.size(); ++i) probes.push_back(ProbeTrace{pts[i], w[i], {}, {}});
  } else {
    Rng rng = Rng::stream(opt.seed, 0, Purpose::probe);
    const double w = 1.0 / static_cast<double>(opt.continuous_probes);
    for (std::size_t i = 0; i < opt.continuous_probes; ++i) probes.push_back(ProbeTrace{model.sample(rng), w, {}, {}});
  }
  for (ProbeTrace& p : probes) {
    p.q_sum.assign(arms, 0.0);
    p.pi_sum.assign(arms, 0.0);
  }
  return probes;
}

// min over the support of <x, theta_hat> for the model's context set.
double min_support_loss(const ContextModel& model, const Vector& theta_hat) {
  if (!model.is_discrete()) return -model.radius() * norm2(theta_hat);
  double lo = std::numeric_limits<double>::infinity();
  for (const Vector& x : model.support()) lo = std::min(lo, dot(x, theta_hat));
  return lo;
}

Estimate estimate_of(const std::vector<double>& v) {
  Estimate e;
  e.n = v.size();
  if (v.empty()) return e;
  double sum = 0.0;
  for (double x : v) sum += x;
  e.mean = sum / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - e.mean) * (x - e.mean);
    e.stderr_ = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
  }
  return e;
}

}  // namespace

double regret_increment(std::span<const double> pi, std::span<const double> x, std::span<const Vector> params,
                        std::size_t optimal_arm) {
  if (pi.size() != params.size()) throw std::invalid_argument("regret_increment: arm count mismatch");
  if (optimal_arm >= params.size()) throw std::invalid_argument("regret_increment: comparator out of range");
  double played = 0.0;
  for (std::size_t a = 0; a < params.size(); ++a) played += pi[a] * dot(x, params[a].values());
  return played - dot(x, params[optimal_arm].values());
}

ExperimentResult run_trial(Environment& env, const ContextModel& model, Agent& agent, std::size_t horizon,
                           const TrialOptions& opt) {
  const auto started = std::chrono::steady_clock::now();
  const std::size_t k = env.arms();
  const std::size_t d = model.dim();
  if (agent.arms() != k) throw std::invalid_argument("run_trial: agent and environment disagree on K");
  if (env.dim() != d) throw std::invalid_argument("run_trial: environment and context model disagree on d");
  if (env.horizon() != horizon) throw std::invalid_argument("run_trial: environment was built for another horizon");
  if (env.rounds_emitted() != 0) throw std::invalid_argument("run_trial: environment has already been played");
  if (agent.round() != 1) throw std::invalid_argument("run_trial: agent has already been played");

  ExperimentResult res;
  res.seed = opt.seed;
  res.horizon = horizon;
  res.agent_id = agent.id();
  res.environment_id = to_string(env.regime()) + "/" + to_string(env.strategy());
  res.probes = make_probes(model, k, opt);

  std::vector<double> xs(horizon * d);
  std::vector<double> pis(horizon * k);
  std::vector<double> qs(horizon * k);
  std::vector<double> losses(horizon);
  std::vector<double> entropies(horizon);
  std::vector<std::size_t> played;
  played.reserve(horizon);
  std::vector<double> gammas(horizon), betas(horizon);
  std::vector<std::size_t> iterations(horizon);

  Diagnostics& diag = res.diagnostics;
  double min_floor = std::numeric_limits<double>::infinity();
  bool floor_checked = false;
  std::vector<double> pq(k), ppi(k);
  std::vector<Vector> theta_hat(k, Vector(d));
  Vector x(d);

  for (std::size_t t = 1; t <= horizon; ++t) {
    env.emit_round_params(t, PastRounds{played});
    if (env.rounds_emitted() != t) throw std::logic_error("run_trial: round parameters not committed before context");

    Rng crng = Rng::stream(opt.seed, t, Purpose::context);
    model.sample_into(crng, x.values());

    Rng arng = Rng::stream(opt.seed, t, Purpose::action);
    const AgentDecision dec = agent.act(x.values(), arng);

    Rng nrng = Rng::stream(opt.seed, t, Purpose::noise, dec.arm);
    const double loss = env.realize_loss(t, dec.arm, x.values(), nrng);

    const std::size_t row = t - 1;
    std::copy(x.begin(), x.end(), xs.begin() + static_cast<std::ptrdiff_t>(row * d));
    std::copy(dec.pi.probs().begin(), dec.pi.probs().end(), pis.begin() + static_cast<std::ptrdiff_t>(row * k));
    std::copy(dec.q.probs().begin(), dec.q.probs().end(), qs.begin() + static_cast<std::ptrdiff_t>(row * k));
    losses[row] = loss;
    entropies[row] = entropy(dec.q);
    gammas[row] = dec.gamma;
    betas[row] = agent.beta();

    for (Vector& v : theta_hat) v *= 0.0;
    if (agent.uses_estimates()) {
      const std::size_t m = agent.iterations();
      iterations[row] = m;
      diag.total_iterations += m;
      const MgrConfig cfg{agent.mgr_delta(), m};
      Rng mrng = Rng::stream(opt.seed, t, Purpose::mgr);
      const Matrix sigma_dagger = mgr(model, agent, dec.arm, cfg, mrng);
      theta_hat[dec.arm] = estimate_theta(sigma_dagger, dec.arm, dec.arm, x.values(), loss);

      if (opt.check_floor) {
        const double ratio = min_support_loss(model, theta_hat[dec.arm]) / agent.beta();
        floor_checked = true;
        min_floor = std::min(min_floor, ratio);
        if (ratio < -1.0 - 1e-9) ++diag.floor_violations;
      }
      if (opt.check_bias) {
        const auto b = oracle::bias_bound_eval(dec.gamma, cfg.delta, model.lambda_min(), m, k, model.norm_bound(),
                                               env.param_bound(), horizon);
        diag.worst_bias_ratio = std::max(diag.worst_bias_ratio, b.bound / b.target);
        if (!b.pass) ++diag.bias_violations;
        const auto literal = static_cast<std::size_t>(std::max(0.0, std::ceil(2.0 * agent.beta() - 1.0)));
        const auto bl = oracle::bias_bound_eval(dec.gamma, cfg.delta, model.lambda_min(), literal, k,
                                                model.norm_bound(), env.param_bound(), horizon);
        if (!bl.pass) ++diag.literal_bias_violations;
      }
      if (opt.check_op_norm) {
        const double ratio = operator_norm(sigma_dagger) / (cfg.delta * static_cast<double>(m + 1));
        diag.max_op_norm_ratio = std::max(diag.max_op_norm_ratio, ratio);
      }
    }

    for (ProbeTrace& p : res.probes) {
      agent.policy_into(p.x.values(), pq, ppi);
      for (std::size_t a = 0; a < k; ++a) {
        p.q_sum[a] += pq[a];
        p.pi_sum[a] += ppi[a];
      }
      p.entropy_sum += entropy(pq);
    }

    agent.observe(dec, x.values(), theta_hat);
    played.push_back(dec.arm);
  }
  diag.min_floor_ratio = floor_checked ? min_floor : 0.0;

  // Post-hoc comparator and regret curves.
  const OptimalPolicy best = env.optimal_policy();
  res.regret_curve.resize(horizon);
  res.realized_regret_curve.resize(horizon);
  res.entropy_trace.resize(horizon);
  const bool thin = horizon > opt.full_log_limit;
  double cum = 0.0, cum_real = 0.0, cum_h = 0.0;
  for (std::size_t t = 1; t <= horizon; ++t) {
    const std::size_t row = t - 1;
    const std::span<const double> xt(xs.data() + row * d, d);
    const std::span<const double> pit(pis.data() + row * k, k);
    const std::size_t star = best.arm(xt);
    const double r = regret_increment(pit, xt, env.params_at(t), star);
    Rng nrng = Rng::stream(opt.seed, t, Purpose::noise, star);
    const double star_loss = env.realize_loss(t, star, xt, nrng);
    cum += r;
    cum_real += losses[row] - star_loss;
    cum_h += entropies[row];
    res.regret_curve[row] = cum;
    res.realized_regret_curve[row] = cum_real;
    res.entropy_trace[row] = cum_h;

    if (opt.keep_rounds && (!thin || t % 10 == 0)) {
      RoundLog log;
      log.t = t;
      log.x = Vector(std::vector<double>(xt.begin(), xt.end()));
      log.pi.assign(pit.begin(), pit.end());
      log.q.assign(qs.begin() + static_cast<std::ptrdiff_t>(row * k), qs.begin() + static_cast<std::ptrdiff_t>((row + 1) * k));
      log.gamma = gammas[row];
      log.beta = betas[row];
      log.iterations = iterations[row];
      log.arm = played[row];
      log.loss = losses[row];
      log.regret = r;
      log.entropy = entropies[row];
      log.miss = 1.0 - pit[star];
      log.regret_cum = cum;
      res.rounds.push_back(std::move(log));
    }
  }

  const double total = static_cast<double>(horizon);
  for (ProbeTrace& p : res.probes) {
    p.optimal_arm = best.arm(p.x);
    p.q_miss = std::max(0.0, total - p.q_sum[p.optimal_arm]);
    p.pi_miss = std::max(0.0, total - p.pi_sum[p.optimal_arm]);
    res.q_bar += p.weight * p.pi_miss;
    if (horizon > 0) {
      const auto e = oracle::entropy_bound_eval(p.entropy_sum, p.q_miss, k, horizon);
      if (e.small_branch)
        ++diag.entropy_small_branch;
      else
        ++diag.entropy_large_branch;
      if (!e.pass) ++diag.entropy_violations;
    }
  }

  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return res;
}

Estimate q_bar_estimate(std::span<const ExperimentResult> results) {
  std::vector<double> v;
  for (const auto& r : results) v.push_back(r.q_bar);
  return estimate_of(v);
}

Estimate mean_final_regret(std::span<const ExperimentResult> results) {
  std::vector<double> v;
  for (const auto& r : results) v.push_back(r.final_regret());
  return estimate_of(v);
}

Estimate mean_final_realized_regret(std::span<const ExperimentResult> results) {
  std::vector<double> v;
  for (const auto& r : results) v.push_back(r.realized_regret_curve.empty() ? 0.0 : r.realized_regret_curve.back());
  return estimate_of(v);
}

AggregateSummary aggregate(std::span<const ExperimentResult> results) {
  if (results.empty()) throw std::invalid_argument("aggregate: no results");
  const ExperimentResult& first = results.front();
  std::set<std::uint64_t> seeds;
  for (const auto& r : results) {
    if (r.horizon != first.horizon || r.agent_id != first.agent_id || r.environment_id != first.environment_id ||
        r.config_hash != first.config_hash)
      throw std::invalid_argument("aggregate: results come from different configurations");
    if (!seeds.insert(r.seed).second) throw std::invalid_argument("aggregate: seed " + std::to_string(r.seed) + " repeats");
  }
  AggregateSummary s;
  s.horizon = first.horizon;
  s.seeds = results.size();
  s.agent_id = first.agent_id;
  s.environment_id = first.environment_id;
  s.config_hash = first.config_hash;
  s.mean.resize(s.horizon);
  s.stderr_.resize(s.horizon);
  s.min.resize(s.horizon);
  s.max.resize(s.horizon);
  std::vector<double> column(results.size());
  for (std::size_t t = 0; t < s.horizon; ++t) {
    for (std::size_t i = 0; i < results.size(); ++i) column[i] = results[i].regret_curve[t];
    const Estimate e = estimate_of(column);
    s.mean[t] = e.mean;
    s.stderr_[t] = e.stderr_;
    const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
    s.min[t] = *lo;
    s.max[t] = *hi;
  }
  s.final_regret = mean_final_regret(results);
  s.final_realized_regret = mean_final_realized_regret(results);
  s.q_bar = q_bar_estimate(results);
  return s;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need two or more paired points");
  double mx = 0.0, my = 0.0;
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("loglog_slope: values must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0.0) throw std::invalid_argument("loglog_slope: x values are all equal");
  return sxy / sxx;
}

}  // namespace bobw
