#include "bobw/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bobw::oracle {

namespace {

// Plain triple loop; deliberately not linalg::mat_mul.
std::vector<double> multiply(const std::vector<double>& a, const std::vector<double>& b, std::size_t d) {
  std::vector<double> c(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      const double aik = a[i * d + k];
      for (std::size_t j = 0; j < d; ++j) c[i * d + j] += aik * b[k * d + j];
    }
  return c;
}

double inf_norm(const Matrix& m) {
  double best = 0.0;
  for (std::size_t i = 0; i < m.dim(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < m.dim(); ++j) row += std::abs(m(i, j));
    best = std::max(best, row);
  }
  return best;
}

double inner(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

Matrix exact_sigma_ta(const ContextModel& model, const PolicySnapshot& policy, std::size_t arm) {
  if (!model.is_discrete()) throw std::invalid_argument("exact_sigma_ta: needs a finite-support context model");
  const std::size_t d = model.dim();
  Matrix out(d);
  const auto pts = model.support();
  const auto w = model.weights();
  for (std::size_t n = 0; n < pts.size(); ++n) {
    const auto x = pts[n].values();
    const double c = w[n] * policy.play_probability(arm, x);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) out(i, j) += c * x[i] * x[j];
  }
  return out;
}

Matrix exact_inverse(const Matrix& s) {
  const std::size_t d = s.dim();
  if (d == 0) throw std::invalid_argument("exact_inverse: empty matrix");
  const std::size_t w = 2 * d;
  std::vector<double> aug(d * w, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) aug[i * w + j] = s(i, j);
    aug[i * w + d + i] = 1.0;
  }
  const double scale = std::max(inf_norm(s), std::numeric_limits<double>::min());
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < d; ++r)
      if (std::abs(aug[r * w + col]) > std::abs(aug[piv * w + col])) piv = r;
    const double p = aug[piv * w + col];
    if (std::abs(p) <= 1e-300 || std::abs(p) < scale * 1e-15)
      throw std::domain_error("exact_inverse: matrix is singular");
    if (piv != col)
      for (std::size_t j = 0; j < w; ++j) std::swap(aug[piv * w + j], aug[col * w + j]);
    for (std::size_t j = 0; j < w; ++j) aug[col * w + j] /= p;
    for (std::size_t r = 0; r < d; ++r) {
      if (r == col) continue;
      const double f = aug[r * w + col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < w; ++j) aug[r * w + j] -= f * aug[col * w + j];
    }
  }
  Matrix inv(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) inv(i, j) = aug[i * w + d + j];
  const double cond = condition_number_inf(s, inv);
  if (!(cond < 1e12)) throw std::domain_error("exact_inverse: condition number " + std::to_string(cond) + " >= 1e12");
  return inv;
}

double condition_number_inf(const Matrix& s, const Matrix& inverse) { return inf_norm(s) * inf_norm(inverse); }

Matrix mgr_expectation_closed_form(const Matrix& sigma_ta, double delta, std::size_t iterations) {
  const std::size_t d = sigma_ta.dim();
  std::vector<double> step(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) step[i * d + j] = (i == j ? 1.0 : 0.0) - delta * sigma_ta(i, j);
  std::vector<double> term(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) term[i * d + i] = 1.0;
  std::vector<double> sum = term;
  for (std::size_t k = 1; k <= iterations; ++k) {
    term = multiply(term, step, d);
    for (std::size_t i = 0; i < d * d; ++i) sum[i] += term[i];
  }
  Matrix out(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) out(i, j) = delta * sum[i * d + j];
  return out;
}

double ftrl_objective(std::span<const double> cumulative, double beta, std::span<const double> q) {
  double f = 0.0;
  for (std::size_t a = 0; a < q.size(); ++a) {
    f += cumulative[a] * q[a];
    if (q[a] > 0.0) f += beta * q[a] * std::log(q[a]);
  }
  return f;
}

Distribution ftrl_argmin_numeric(std::span<const double> cumulative, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("ftrl_argmin_numeric: beta must be positive");
  const std::size_t k = cumulative.size();
  if (k == 0) throw std::invalid_argument("ftrl_argmin_numeric: no arms");
  std::vector<double> q(k, 1.0 / static_cast<double>(k));
  std::vector<double> g(k), dir(k), trial(k);

  constexpr std::size_t kMaxIter = 100000;
  constexpr double kObjectiveTol = 1e-12;
  constexpr double kPolishTol = 1e-26;
  std::size_t polish = 0;
  for (std::size_t it = 0; it < kMaxIter; ++it) {
    // Gradient and diagonal Hessian of <L,q> + beta sum q log q.
    double nu = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
      g[a] = cumulative[a] + beta * (std::log(q[a]) + 1.0);
      nu += g[a] * q[a];
    }
    double dec = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
      dir[a] = -q[a] * (g[a] - nu) / beta;
      dec += (g[a] - nu) * (g[a] - nu) * q[a] / beta;
    }
    if (dec / 2.0 <= kObjectiveTol) {
      if (dec / 2.0 <= kPolishTol || ++polish > 20) return Distribution(q);
    }

    double t = 1.0;
    for (std::size_t a = 0; a < k; ++a)
      if (dir[a] < 0.0) t = std::min(t, 0.99 * q[a] / -dir[a]);

    const double f0 = ftrl_objective(cumulative, beta, q);
    const bool local = dec < 1e-8;
    for (;;) {
      for (std::size_t a = 0; a < k; ++a) trial[a] = q[a] + t * dir[a];
      if (local || ftrl_objective(cumulative, beta, trial) <= f0 - 0.25 * t * dec) break;
      t *= 0.5;
      if (t < 1e-16) break;
    }
    double total = 0.0;
    for (double v : trial) total += v;
    for (std::size_t a = 0; a < k; ++a) q[a] = std::max(trial[a] / total, std::numeric_limits<double>::denorm_min());
  }
  throw std::runtime_error("ftrl_argmin_numeric: no convergence in 1e5 iterations");
}

BiasBound bias_bound_eval(double gamma, double delta, double lambda_min, std::size_t iterations, std::size_t arms,
                          double context_bound, double param_bound, std::size_t horizon) {
  BiasBound b;
  const double scale = context_bound * param_bound;
  b.bound = scale * std::exp(-gamma * delta * lambda_min * static_cast<double>(iterations) / static_cast<double>(arms));
  b.target = scale / static_cast<double>(horizon);
  b.pass = b.bound <= b.target;
  return b;
}

EntropyBound entropy_bound_eval(double entropy_sum, double q_mass, std::size_t arms, std::size_t horizon) {
  EntropyBound e;
  e.lhs = entropy_sum;
  e.q_mass = q_mass;
  const double kt = static_cast<double>(arms) * static_cast<double>(horizon);
  if (q_mass <= std::numbers::e) {
    e.small_branch = true;
    e.rhs = std::numbers::e * std::log(kt);
  } else {
    e.rhs = q_mass * std::log(std::numbers::e * kt / q_mass);
  }
  e.pass = e.lhs <= e.rhs;
  return e;
}

EntropyBound entropy_bound_eval(std::span<const Distribution> q_trace, std::size_t optimal_arm, std::size_t horizon) {
  if (q_trace.empty()) return entropy_bound_eval(0.0, 0.0, 1, std::max<std::size_t>(horizon, 1));
  double h = 0.0;
  double miss = 0.0;
  for (const Distribution& q : q_trace) {
    for (double p : q.probs())
      if (p > 0.0) h += p * std::log(1.0 / p);
    miss += 1.0 - q[optimal_arm];
  }
  return entropy_bound_eval(h, miss, q_trace.front().size(), horizon);
}

double expected_round_regret(const ContextModel& model, const PolicySnapshot& policy, std::span<const Vector> params) {
  if (!model.is_discrete()) throw std::invalid_argument("expected_round_regret: needs a finite-support context model");
  const auto pts = model.support();
  const auto w = model.weights();
  double total = 0.0;
  for (std::size_t n = 0; n < pts.size(); ++n) {
    const auto x = pts[n].values();
    double best = std::numeric_limits<double>::infinity();
    double played = 0.0;
    for (std::size_t a = 0; a < params.size(); ++a) {
      const double l = inner(x, params[a].values());
      best = std::min(best, l);
      played += policy.play_probability(a, x) * l;
    }
    total += w[n] * (played - best);
  }
  return total;
}

}  // namespace bobw::oracle
