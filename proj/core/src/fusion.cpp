#include "wransim/fusion.hpp"

#include <algorithm>
#include <cmath>

namespace wransim {

double reward_penalty_score(int d, int d_central_prev, int r, const ScoreConfig& sc) {
  // Boolean closed form: gamma * (xnor(d,r) - xor(d,r))
  //                      - (zeta - gamma) * (1 - 2d) * ((1-D)*r - D*(1-r)).
  const int agree = 1 - (d ^ r);
  const double base = sc.gamma * (2 * agree - 1);
  const double cross = (1 - 2 * d) * ((1 - d_central_prev) * r - d_central_prev * (1 - r));
  return base - (sc.zeta - sc.gamma) * cross;
}

ScoreHistory::ScoreHistory(int capacity) : buf_(std::max(1, capacity), 0.0) {}

void ScoreHistory::push(double score) {
  buf_[head_] = score;
  head_ = (head_ + 1) % static_cast<int>(buf_.size());
  count_ = std::min(count_ + 1, static_cast<int>(buf_.size()));
  ++pushed_;
}

double ScoreHistory::at_age(int q) const {
  // q = 1 is the slot just before head_.
  const int n = static_cast<int>(buf_.size());
  return buf_[((head_ - q) % n + n) % n];
}

double confidence(const ScoreHistory& history, const TemporalParams& tp) {
  const int take = std::min(tp.historic_count, history.size());
  double w = 0.0;
  double decay = 1.0;
  for (int q = 1; q <= take; ++q) {
    decay *= tp.alpha;
    w += decay * history.at_age(q);
  }
  return w;
}

int combine(double x_bs, std::span<const WeightedReport> reports) {
  double sum = x_bs;
  for (const auto& rep : reports) sum += rep.beta_rep * rep.x;
  return sum > 0.0 ? 1 : 0;
}

int baseline_combine(FusionRule rule, std::span<const int> decisions, int quorum) {
  if (decisions.empty())
    throw std::invalid_argument("baseline_combine: empty decision set");
  const int n = static_cast<int>(decisions.size());
  int ones = 0;
  for (int d : decisions) ones += d;
  switch (rule) {
    case FusionRule::And:
      return ones == n ? 1 : 0;
    case FusionRule::Or:
      return ones >= 1 ? 1 : 0;
    case FusionRule::Voting: {
      const int q = quorum > 0 ? std::min(quorum, n) : n / 2 + 1;
      return ones >= q ? 1 : 0;
    }
    default:
      throw std::invalid_argument("baseline_combine: not a hard-decision rule");
  }
}

TemporalParams adapt(double p_md_bar, double p_fa_bar, const AdaptConsts& consts) {
  constexpr double eps = 1e-6;
  TemporalParams tp;
  tp.historic_count =
      std::max(1, static_cast<int>(std::floor(consts.b - consts.a * p_md_bar)));
  tp.alpha = std::clamp(consts.c + consts.d * p_fa_bar, eps, 1.0 - eps);
  return tp;
}

}  // namespace wransim
