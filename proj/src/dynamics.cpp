#include "ued/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace ued {

std::string_view to_string(Direction direction) { return direction == Direction::Low ? "low" : "high"; }

HomeBase home_base(std::span<const double> states) {
  HomeBase hb;
  if (states.empty()) return hb;
  // Offsetting by the first state makes the mean of a constant arc exact.
  const double origin = states.front();
  double offset_sum = 0.0;
  for (double s : states) offset_sum += s - origin;
  const double n = static_cast<double>(states.size());
  hb.mean = origin + offset_sum / n;
  double sq = 0.0;
  for (double s : states) sq += (s - hb.mean) * (s - hb.mean);
  hb.variability = std::sqrt(sq / n);
  return hb;
}

namespace {

Displacement make_displacement(std::span<const double> states, Direction direction, std::size_t start,
                               std::size_t end, const HomeBase& hb, RateConvention convention) {
  Displacement d;
  d.direction = direction;
  d.start_index = start;
  d.end_index = end;
  d.length = end - start + 1;
  std::size_t peak = start;
  for (std::size_t i = start + 1; i <= end; ++i) {
    const bool more_extreme = direction == Direction::High ? states[i] > states[peak] : states[i] < states[peak];
    if (more_extreme) peak = i;
  }
  d.peak_index = peak;
  d.peak_distance = direction == Direction::High ? states[peak] - hb.upper() : hb.lower() - states[peak];

  std::size_t rise_steps = 0;
  std::size_t recovery_steps = 0;
  if (convention == RateConvention::InclusiveSteps) {
    rise_steps = peak - start + 1;
    recovery_steps = end - peak + 1;
  } else {
    rise_steps = std::max<std::size_t>(peak - start, 1);
    recovery_steps = std::max<std::size_t>(end - peak, 1);
  }
  d.rise_rate = d.peak_distance / static_cast<double>(rise_steps);
  d.recovery_rate = d.peak_distance / static_cast<double>(recovery_steps);
  return d;
}

}  // namespace

std::vector<Displacement> find_displacements(std::span<const double> states, const HomeBase& hb,
                                             RateConvention convention) {
  std::vector<Displacement> out;
  const double lower = hb.lower();
  const double upper = hb.upper();
  auto side = [&](double s) -> int { return s > upper ? 1 : (s < lower ? -1 : 0); };

  std::size_t i = 0;
  while (i < states.size()) {
    const int current = side(states[i]);
    if (current == 0) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < states.size() && side(states[j + 1]) == current) ++j;
    if (j + 1 < states.size()) {
      out.push_back(make_displacement(states, current > 0 ? Direction::High : Direction::Low, i, j, hb, convention));
    }
    i = j + 1;
  }
  return out;
}

void DisplacementTotals::add(const Displacement& d) {
  ++count;
  peak_dist += d.peak_distance;
  disp_length += static_cast<double>(d.length);
  rise_rate += d.rise_rate;
  recovery_rate += d.recovery_rate;
}

std::optional<DisplacementAverages> DisplacementTotals::averages() const {
  if (count == 0) return std::nullopt;
  const double n = static_cast<double>(count);
  return DisplacementAverages{peak_dist / n, disp_length / n, rise_rate / n, recovery_rate / n};
}

UedSummary summarize(std::span<const double> states, RateConvention convention) {
  UedSummary summary;
  const HomeBase hb = home_base(states);
  summary.emo_mean = hb.mean;
  summary.emo_std = hb.variability;

  DisplacementTotals all, low, high;
  for (const auto& d : find_displacements(states, hb, convention)) {
    all.add(d);
    (d.direction == Direction::Low ? low : high).add(d);
  }
  summary.overall = all.averages();
  summary.low = low.averages();
  summary.high = high.averages();
  summary.low_count = low.count;
  summary.high_count = high.count;
  return summary;
}

std::optional<double> UedSummary::get(Metric metric) const {
  auto pick = [](const std::optional<DisplacementAverages>& a, double DisplacementAverages::*field)
      -> std::optional<double> { return a ? std::optional<double>((*a).*field) : std::nullopt; };
  switch (metric) {
    case Metric::Mean:
      return emo_mean;
    case Metric::Std:
      return emo_std;
    case Metric::AvgPeakDist:
      return pick(overall, &DisplacementAverages::peak_dist);
    case Metric::AvgDispLength:
      return pick(overall, &DisplacementAverages::disp_length);
    case Metric::RiseRate:
      return pick(overall, &DisplacementAverages::rise_rate);
    case Metric::RecoveryRate:
      return pick(overall, &DisplacementAverages::recovery_rate);
    case Metric::LowPeakDist:
      return pick(low, &DisplacementAverages::peak_dist);
    case Metric::LowDispLength:
      return pick(low, &DisplacementAverages::disp_length);
    case Metric::LowRiseRate:
      return pick(low, &DisplacementAverages::rise_rate);
    case Metric::LowRecoveryRate:
      return pick(low, &DisplacementAverages::recovery_rate);
    case Metric::HighPeakDist:
      return pick(high, &DisplacementAverages::peak_dist);
    case Metric::HighDispLength:
      return pick(high, &DisplacementAverages::disp_length);
    case Metric::HighRiseRate:
      return pick(high, &DisplacementAverages::rise_rate);
    case Metric::HighRecoveryRate:
      return pick(high, &DisplacementAverages::recovery_rate);
  }
  return std::nullopt;
}

std::string_view metric_name(Metric metric) {
  switch (metric) {
    case Metric::Mean:
      return "emo_mean";
    case Metric::Std:
      return "emo_std";
    case Metric::AvgPeakDist:
      return "emo_avg_peak_dist";
    case Metric::AvgDispLength:
      return "emo_avg_disp_length";
    case Metric::RiseRate:
      return "emo_rise_rate";
    case Metric::RecoveryRate:
      return "emo_recovery_rate";
    case Metric::LowPeakDist:
      return "emo_low_peak_dist";
    case Metric::LowDispLength:
      return "emo_low_disp_length";
    case Metric::LowRiseRate:
      return "emo_low_rise_rate";
    case Metric::LowRecoveryRate:
      return "emo_low_recovery_rate";
    case Metric::HighPeakDist:
      return "emo_high_peak_dist";
    case Metric::HighDispLength:
      return "emo_high_disp_length";
    case Metric::HighRiseRate:
      return "emo_high_rise_rate";
    case Metric::HighRecoveryRate:
      return "emo_high_recovery_rate";
  }
  return "emo_mean";
}

std::optional<Metric> parse_metric(std::string_view name) {
  for (Metric m : kAllMetrics) {
    if (metric_name(m) == name) return m;
  }
  return std::nullopt;
}

}  // namespace ued
