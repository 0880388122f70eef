#include "dragoncast/rate.hpp"

#include <algorithm>
#include <cmath>

namespace dragoncast {

double gap(const RankView& view) {
  if (view.neighbor_ranks.empty()) return 0.0;
  double best = -1e300;
  for (std::uint16_t r : view.neighbor_ranks) {
    const double diff = static_cast<double>(view.own_rank) - static_cast<double>(r);
    best = std::max(best, diff);
  }
  return best / static_cast<double>(view.neighbor_ranks.size());
}

double dragon_rate(double g, double alpha) {
  return g > 0.0 ? alpha * g : 0.0;
}

double iron_rate(bool is_source, double base_rate, double source_factor) {
  return is_source ? base_rate * source_factor : base_rate;
}

double policy_rate(const RatePolicy& policy, bool is_source, const RankView& view) {
  if (const auto* f = std::get_if<FixedRate>(&policy)) return f->rate;
  if (const auto* i = std::get_if<IronRate>(&policy))
    return iron_rate(is_source, i->base_rate, i->source_factor);
  const auto& d = std::get<DragonRate>(policy);
  return dragon_rate(gap(view), d.alpha);
}

std::optional<double> next_delay_seconds(double rate) {
  if (rate <= 0.0) return std::nullopt;
  return 1.0 / rate;
}

std::optional<Micros> next_delay_micros(double rate) {
  const auto s = next_delay_seconds(rate);
  if (!s) return std::nullopt;
  return std::max<Micros>(1, seconds_to_micros(*s));
}

}  // namespace dragoncast
