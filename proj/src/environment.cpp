#include "bobw/environment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bobw {

std::string to_string(Regime r) {
  switch (r) {
    case Regime::stochastic: return "stochastic";
    case Regime::adversarial: return "adversarial";
    case Regime::corrupted: return "corrupted";
  }
  return "unknown";
}

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::none: return "none";
    case Strategy::sign_flip: return "sign_flip";
    case Strategy::best_arm_switcher: return "best_arm_switcher";
    case Strategy::history_reactive: return "history_reactive";
  }
  return "unknown";
}

Regime parse_regime(const std::string& s) {
  if (s == "stochastic") return Regime::stochastic;
  if (s == "adversarial") return Regime::adversarial;
  if (s == "corrupted") return Regime::corrupted;
  throw std::invalid_argument("unknown regime '" + s + "'");
}

Strategy parse_strategy(const std::string& s) {
  if (s == "none") return Strategy::none;
  if (s == "sign_flip") return Strategy::sign_flip;
  if (s == "best_arm_switcher") return Strategy::best_arm_switcher;
  if (s == "history_reactive") return Strategy::history_reactive;
  throw std::invalid_argument("unknown strategy '" + s + "'");
}

std::size_t OptimalPolicy::arm(std::span<const double> x) const {
  std::size_t best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < cumulative.size(); ++a) {
    const double v = dot(x, cumulative[a].values());
    if (v < best_value) {
      best_value = v;
      best = a;
    }
  }
  return best;
}

std::size_t OptimalPolicy::arm(const Vector& x) const { return arm(x.values()); }

Environment::Environment(EnvironmentSpec spec, const ContextModel& model, std::size_t horizon)
    : spec_(std::move(spec)), horizon_(horizon) {
  const std::size_t k = spec_.base_params.size();
  if (k < 2) throw std::invalid_argument("Environment: need at least two arms");
  dim_ = model.dim();
  double max_norm = 0.0;
  for (const Vector& th : spec_.base_params) {
    if (th.size() != dim_) throw std::invalid_argument("Environment: parameter dimension differs from context dimension");
    if (!all_finite(th)) throw std::invalid_argument("Environment: non-finite parameter");
    max_norm = std::max(max_norm, norm2(th));
  }
  if (spec_.param_bound) {
    if (*spec_.param_bound < max_norm)
      throw std::invalid_argument("Environment: param_bound " + std::to_string(*spec_.param_bound) +
                                  " is below max ||theta_0(a)|| = " + std::to_string(max_norm));
    param_bound_ = *spec_.param_bound;
  } else {
    param_bound_ = max_norm;
  }
  if (!(spec_.noise_bound >= 0.0) || !std::isfinite(spec_.noise_bound))
    throw std::invalid_argument("Environment: noise_bound must be non-negative");
  if (!(spec_.corruption_budget >= 0.0)) throw std::invalid_argument("Environment: corruption budget must be non-negative");
  context_bound_ = model.norm_bound();

  switch (spec_.regime) {
    case Regime::stochastic:
      if (spec_.strategy != Strategy::none)
        throw std::invalid_argument("Environment: stochastic regime takes no adversary strategy");
      break;
    case Regime::corrupted:
      if (spec_.strategy != Strategy::none && spec_.strategy != Strategy::sign_flip)
        throw std::invalid_argument("Environment: corrupted regime supports strategy none or sign_flip");
      break;
    case Regime::adversarial:
      if (spec_.strategy != Strategy::best_arm_switcher && spec_.strategy != Strategy::history_reactive)
        throw std::invalid_argument("Environment: adversarial regime needs best_arm_switcher or history_reactive");
      break;
  }

  if (spec_.strategy == Strategy::sign_flip) {
    std::vector<Vector> flipped = spec_.base_params;
    for (Vector& v : flipped) v *= -1.0;
    const double per_round = per_round_deviation(model, flipped);
    const std::size_t rounds = std::min(spec_.corrupt_rounds, horizon_);
    accounted_corruption_ = per_round * static_cast<double>(rounds);
    const double slack = 1e-12 * std::max(1.0, spec_.corruption_budget);
    if (accounted_corruption_ > spec_.corruption_budget + slack)
      throw std::invalid_argument("Environment: sign_flip over " + std::to_string(rounds) + " rounds consumes " +
                                  std::to_string(accounted_corruption_) + " > budget " +
                                  std::to_string(spec_.corruption_budget));
  }

  history_.reserve(horizon_);
  pulls_.assign(k, 0);
}

double Environment::per_round_deviation(const ContextModel& model, const std::vector<Vector>& row) const {
  std::vector<Vector> shift;
  for (std::size_t a = 0; a < row.size(); ++a) shift.push_back(row[a] - spec_.base_params[a]);
  double worst = 0.0;
  for (std::size_t a = 0; a < shift.size(); ++a)
    for (std::size_t b = a + 1; b < shift.size(); ++b) {
      const Vector diff = shift[a] - shift[b];
      if (model.is_discrete()) {
        for (const Vector& x : model.support()) worst = std::max(worst, std::abs(dot(x, diff)));
      } else {
        worst = std::max(worst, model.norm_bound() * norm2(diff));
      }
    }
  return worst;
}

std::vector<Vector> Environment::rotated(std::size_t shift) const {
  const std::size_t k = arms();
  std::vector<Vector> row(k);
  for (std::size_t a = 0; a < k; ++a) row[a] = spec_.base_params[(a + shift) % k];
  return row;
}

std::vector<Vector> Environment::params_given_counts(std::size_t t, std::span<const std::size_t> pulls) const {
  const std::size_t k = arms();
  switch (spec_.strategy) {
    case Strategy::none:
      return spec_.base_params;
    case Strategy::sign_flip: {
      if (t > spec_.corrupt_rounds) return spec_.base_params;
      std::vector<Vector> row = spec_.base_params;
      for (Vector& v : row) v *= -1.0;
      return row;
    }
    case Strategy::best_arm_switcher: {
      const std::size_t phase = horizon_ == 0 ? 0 : std::min<std::size_t>(3, 4 * (t - 1) / horizon_);
      return rotated(phase % k);
    }
    case Strategy::history_reactive: {
      const auto it = std::min_element(pulls.begin(), pulls.end());
      const std::size_t m = static_cast<std::size_t>(it - pulls.begin());
      return rotated((k - m) % k);
    }
  }
  return spec_.base_params;
}

std::vector<Vector> Environment::params_for_round(std::size_t t, PastRounds history) const {
  if (t == 0) throw std::invalid_argument("Environment: rounds are 1-based");
  if (history.arms.size() != t - 1)
    throw std::invalid_argument("Environment: history must cover exactly rounds 1..t-1");
  std::vector<std::size_t> pulls(arms(), 0);
  for (std::size_t a : history.arms) {
    if (a >= arms()) throw std::invalid_argument("Environment: arm index out of range in history");
    ++pulls[a];
  }
  return params_given_counts(t, pulls);
}

const std::vector<Vector>& Environment::emit_round_params(std::size_t t, PastRounds history) {
  if (t != history_.size() + 1)
    throw std::logic_error("Environment: round " + std::to_string(t) + " emitted out of order");
  if (history.arms.size() != t - 1)
    throw std::invalid_argument("Environment: history must cover exactly rounds 1..t-1");
  if (t > 1) {
    const std::size_t last = history.arms.back();
    if (last >= arms()) throw std::invalid_argument("Environment: arm index out of range in history");
    ++pulls_[last];
  }
  history_.push_back(params_given_counts(t, pulls_));
  return history_.back();
}

double Environment::mean_loss(std::size_t t, std::size_t arm, std::span<const double> x) const {
  return dot(x, params_at(t)[arm].values());
}

double Environment::realize_loss(std::size_t t, std::size_t arm, std::span<const double> x, Rng& rng) const {
  const double eps = spec_.noise_bound * (2.0 * rng.uniform() - 1.0);
  return mean_loss(t, arm, x) + eps;
}

OptimalPolicy Environment::optimal_policy() const {
  OptimalPolicy p;
  p.cumulative.assign(arms(), Vector(dim_));
  for (const auto& row : history_)
    for (std::size_t a = 0; a < row.size(); ++a) p.cumulative[a] += row[a];
  return p;
}

// Round-off allowance: 2ac with a and c typed as decimals lands an ulp or two off.
constexpr double kGapSlack = 1e-12;

GapCheck verify_gap(const Environment& env, const ContextModel& model, double claimed_gap,
                    std::span<const Vector> grid) {
  if (env.regime() == Regime::adversarial)
    throw std::invalid_argument("verify_gap: needs a stochastic or corrupted environment");
  bool approximate = false;
  std::span<const Vector> points = model.support();
  if (!model.is_discrete()) {
    if (grid.empty()) throw std::invalid_argument("verify_gap: continuous context model needs a grid");
    points = grid;
    approximate = true;
  }

  const auto& theta = env.spec().base_params;
  GapCheck check;
  GapCertificate cert;
  cert.gap = claimed_gap;
  cert.approximate = approximate;
  double min_gap = std::numeric_limits<double>::infinity();
  for (const Vector& x : points) {
    std::size_t best = 0;
    double best_loss = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < theta.size(); ++a) {
      const double l = dot(x, theta[a]);
      if (l < best_loss) {
        best_loss = l;
        best = a;
      }
    }
    double runner_up = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < theta.size(); ++b)
      if (b != best) runner_up = std::min(runner_up, dot(x, theta[b]));
    const double gap = runner_up - best_loss;
    cert.optimal_arm.push_back(best);
    if (gap < min_gap) min_gap = gap;
    if (gap < claimed_gap - kGapSlack && !check.violating_context) check.violating_context = x;
  }
  check.measured_gap = min_gap;
  cert.measured_gap = min_gap;
  if (!check.violating_context) check.certificate = std::move(cert);
  return check;
}

double self_bounding_gap(double regret, double q_bar, double gap, double corruption) {
  return regret - (gap * q_bar - corruption);
}

}  // namespace bobw
