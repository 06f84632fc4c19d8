#include "bobw/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bobw {

namespace {

constexpr double kWeightFloor = 1e-300;

void require_arms(std::span<const Vector> theta_hat, std::size_t k, std::size_t d) {
  if (theta_hat.size() != k) throw std::invalid_argument("observe: need one estimate per arm");
  for (const Vector& v : theta_hat)
    if (v.size() != d) throw std::invalid_argument("observe: estimate dimension mismatch");
}

void scores_into(std::span<const Vector> cumulative, std::span<const double> x, std::vector<double>& out) {
  out.resize(cumulative.size());
  for (std::size_t a = 0; a < cumulative.size(); ++a) out[a] = dot(x, cumulative[a].values());
}

void mix_into(std::span<const double> q, double gamma, std::span<double> pi) {
  const double floor = gamma / static_cast<double>(q.size());
  for (std::size_t a = 0; a < q.size(); ++a) pi[a] = (1.0 - gamma) * q[a] + floor;
}

}  // namespace

double ScheduleConstants::log_horizon() const { return std::log(static_cast<double>(horizon)); }

void ScheduleConstants::validate() const {
  if (arms < 2) throw std::invalid_argument("schedule: need K >= 2");
  if (dim < 1) throw std::invalid_argument("schedule: need d >= 1");
  if (horizon < 2) throw std::invalid_argument("schedule: need T >= 2");
  if (!(loss_bound > 0.0) || !(context_bound > 0.0) || !(lambda_min > 0.0))
    throw std::invalid_argument("schedule: C_l, C_X and lambda_min must be positive");
}

std::string to_string(Beta1Mode m) { return m == Beta1Mode::corollary ? "corollary" : "equation"; }

std::string to_string(IterationSchedule s) { return s == IterationSchedule::bias_safe ? "bias_safe" : "literal"; }

Beta1Mode parse_beta1_mode(const std::string& s) {
  if (s == "corollary") return Beta1Mode::corollary;
  if (s == "equation") return Beta1Mode::equation;
  throw std::invalid_argument("unknown beta1 mode '" + s + "'");
}

IterationSchedule parse_iteration_schedule(const std::string& s) {
  if (s == "bias_safe") return IterationSchedule::bias_safe;
  if (s == "literal") return IterationSchedule::literal;
  throw std::invalid_argument("unknown iteration schedule '" + s + "'");
}

double beta_1(const ScheduleConstants& c, Beta1Mode mode) {
  c.validate();
  const double k = static_cast<double>(c.arms);
  const double d = static_cast<double>(c.dim);
  const double log_t = c.log_horizon();
  const double log_k = std::log(k);
  if (mode == Beta1Mode::equation)
    return c.omega() * std::sqrt(std::log(k * d * static_cast<double>(c.horizon)) / log_k);
  return c.omega() * std::sqrt(k * log_t * (log_t / (c.delta() * c.lambda_min * log_k) + d));
}

double exploration_rate(const ScheduleConstants& c, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("exploration_rate: beta must be positive");
  const double raw = static_cast<double>(c.arms) * c.log_horizon() / (2.0 * c.delta() * c.lambda_min * beta);
  return std::min(1.0, raw);
}

std::size_t mgr_iterations(const ScheduleConstants& c, double beta, double gamma, IterationSchedule schedule) {
  if (schedule == IterationSchedule::literal) return static_cast<std::size_t>(std::max(0.0, std::ceil(2.0 * beta - 1.0)));
  const double log_t = c.log_horizon();
  if (log_t <= 0.0) return 0;
  if (!(gamma > 0.0)) throw std::invalid_argument("mgr_iterations: gamma must be positive");
  const double rate = gamma * c.delta() * c.lambda_min / static_cast<double>(c.arms);
  auto m = static_cast<std::size_t>(std::ceil(log_t / rate));
  const double target = 1.0 / static_cast<double>(c.horizon);
  while (std::exp(-rate * static_cast<double>(m)) > target) ++m;
  return m;
}

double next_beta(double beta, double beta1, double entropy_sum, std::size_t arms) {
  return beta + beta1 / std::sqrt(1.0 + entropy_sum / std::log(static_cast<double>(arms)));
}

void gibbs_into(std::span<const double> scores, double beta, std::span<double> out) {
  if (!(beta > 0.0)) throw std::invalid_argument("gibbs: beta must be positive");
  if (scores.size() != out.size() || scores.empty()) throw std::invalid_argument("gibbs: size mismatch");
  const double lo = *std::min_element(scores.begin(), scores.end());
  double total = 0.0;
  for (std::size_t a = 0; a < scores.size(); ++a) {
    out[a] = std::max(kWeightFloor, std::exp(-(scores[a] - lo) / beta));
    total += out[a];
  }
  for (double& w : out) w /= total;
}

Distribution gibbs(std::span<const double> scores, double beta) {
  std::vector<double> q(scores.size());
  gibbs_into(scores, beta, q);
  return Distribution(std::move(q));
}

Distribution ftrl_dist(std::span<const Vector> cumulative, double beta, std::span<const double> x) {
  std::vector<double> s;
  scores_into(cumulative, x, s);
  return gibbs(s, beta);
}

AgentDecision Agent::act(std::span<const double> x, Rng& rng) {
  std::vector<double> q(arms());
  std::vector<double> pi(arms());
  policy_into(x, q, pi);
  AgentDecision dec{Distribution(std::move(q)), Distribution(std::move(pi)), gamma(), 0};
  dec.arm = sample_categorical(dec.pi, rng);
  return dec;
}

double Agent::play_probability(std::size_t arm, std::span<const double> x) const {
  std::vector<double> q(arms());
  std::vector<double> pi(arms());
  policy_into(x, q, pi);
  return pi.at(arm);
}

BobwAgent::BobwAgent(ScheduleConstants constants, BobwOptions options) : c_(constants), opt_(std::move(options)) {
  c_.validate();
  beta1_ = opt_.beta1_override ? *opt_.beta1_override : beta_1(c_, opt_.beta1_mode);
  if (!(beta1_ > 0.0)) throw std::invalid_argument("BobwAgent: beta_1 must be positive");
  if (opt_.fixed) {
    const FixedSchedule& f = *opt_.fixed;
    if (!(f.beta > 0.0) || !(f.gamma >= 0.0 && f.gamma <= 1.0))
      throw std::invalid_argument("BobwAgent: fixed schedule needs beta > 0 and gamma in [0,1]");
  }
  state_.cumulative.assign(c_.arms, Vector(c_.dim));
  state_.beta = opt_.fixed ? opt_.fixed->beta : beta1_;
  refresh_schedule();
}

void BobwAgent::refresh_schedule() {
  if (opt_.fixed) {
    gamma_ = opt_.fixed->gamma;
    iterations_ = opt_.fixed->iterations;
    return;
  }
  gamma_ = exploration_rate(c_, state_.beta);
  iterations_ = mgr_iterations(c_, state_.beta, gamma_, opt_.iteration_schedule);
}

void BobwAgent::policy_into(std::span<const double> x, std::span<double> q, std::span<double> pi) const {
  scores_into(state_.cumulative, x, scores_);
  gibbs_into(scores_, state_.beta, q);
  mix_into(q, gamma_, pi);
}

void BobwAgent::observe(const AgentDecision& decision, std::span<const double>, std::span<const Vector> theta_hat) {
  require_arms(theta_hat, c_.arms, c_.dim);
  for (std::size_t a = 0; a < c_.arms; ++a) state_.cumulative[a] += theta_hat[a];
  state_.entropy_sum += entropy(decision.q);
  if (!opt_.fixed) state_.beta = next_beta(state_.beta, beta1_, state_.entropy_sum, c_.arms);
  ++state_.round;
  refresh_schedule();
}

RealLinExp3Params tuned_real_lin_exp3(const ScheduleConstants& c) {
  c.validate();
  const double k = static_cast<double>(c.arms);
  RealLinExp3Params p;
  p.eta = std::sqrt(std::log(k) / (3.0 * k * static_cast<double>(c.dim) * static_cast<double>(c.horizon)));
  p.gamma = exploration_rate(c, 1.0 / p.eta);
  p.iterations = mgr_iterations(c, 1.0 / p.eta, p.gamma, IterationSchedule::bias_safe);
  return p;
}

RealLinExp3Agent::RealLinExp3Agent(ScheduleConstants constants, RealLinExp3Params params)
    : c_(constants), p_(params) {
  c_.validate();
  if (!(p_.eta > 0.0) || !std::isfinite(p_.eta)) throw std::invalid_argument("RealLinExp3Agent: eta must be positive");
  if (!(p_.gamma >= 0.0 && p_.gamma <= 1.0)) throw std::invalid_argument("RealLinExp3Agent: gamma must lie in [0,1]");
  beta_ = 1.0 / p_.eta;
  cumulative_.assign(c_.arms, Vector(c_.dim));
}

void RealLinExp3Agent::policy_into(std::span<const double> x, std::span<double> q, std::span<double> pi) const {
  scores_into(cumulative_, x, scores_);
  gibbs_into(scores_, beta_, q);
  mix_into(q, p_.gamma, pi);
}

void RealLinExp3Agent::observe(const AgentDecision&, std::span<const double>, std::span<const Vector> theta_hat) {
  require_arms(theta_hat, c_.arms, c_.dim);
  for (std::size_t a = 0; a < c_.arms; ++a) cumulative_[a] += theta_hat[a];
  ++round_;
}

UniformAgent::UniformAgent(std::size_t arms) : arms_(arms) {
  if (arms == 0) throw std::invalid_argument("UniformAgent: need at least one arm");
}

void UniformAgent::policy_into(std::span<const double>, std::span<double> q, std::span<double> pi) const {
  const double u = 1.0 / static_cast<double>(arms_);
  std::fill(q.begin(), q.end(), u);
  std::fill(pi.begin(), pi.end(), u);
}

void UniformAgent::observe(const AgentDecision&, std::span<const double>, std::span<const Vector>) { ++round_; }

}  // namespace bobw
