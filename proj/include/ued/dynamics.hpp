#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ued/arc.hpp"

// Utterance emotion dynamics: home base, displacements and the aggregate
// metrics derived from them.
namespace ued {

struct HomeBase {
  double mean = 0.0;
  /// Population standard deviation of the states.
  double variability = 0.0;

  double lower() const { return mean - variability; }
  double upper() const { return mean + variability; }
};

enum class Direction { Low, High };

std::string_view to_string(Direction direction);

/// A maximal run of states strictly outside the home base on one side.
struct Displacement {
  Direction direction = Direction::High;
  std::size_t start_index = 0;
  std::size_t peak_index = 0;
  std::size_t end_index = 0;
  /// Distance of the extreme state from the nearest home-base boundary.
  double peak_distance = 0.0;
  std::size_t length = 0;
  double rise_rate = 0.0;
  double recovery_rate = 0.0;
};

/// How many steps the rise and recovery rates divide by.
enum class RateConvention {
  /// peak - start + 1 and end - peak + 1: the boundary crossing counts as a step.
  InclusiveSteps,
  /// max(peak - start, 1) and max(end - peak, 1).
  ExclusiveSteps,
};

HomeBase home_base(std::span<const double> states);
inline HomeBase home_base(const EmotionArc& arc) { return home_base(arc.states); }

/// Runs still outside the home base at the final state are dropped (no
/// recovery); a run already in progress at state 0 is kept.
std::vector<Displacement> find_displacements(std::span<const double> states, const HomeBase& hb,
                                             RateConvention convention = RateConvention::InclusiveSteps);
inline std::vector<Displacement> find_displacements(const EmotionArc& arc, const HomeBase& hb,
                                                    RateConvention convention = RateConvention::InclusiveSteps) {
  return find_displacements(arc.states, hb, convention);
}

enum class Metric {
  Mean,
  Std,
  AvgPeakDist,
  AvgDispLength,
  RiseRate,
  RecoveryRate,
  LowPeakDist,
  LowDispLength,
  LowRiseRate,
  LowRecoveryRate,
  HighPeakDist,
  HighDispLength,
  HighRiseRate,
  HighRecoveryRate,
};

inline constexpr std::array<Metric, 14> kAllMetrics{
    Metric::Mean,         Metric::Std,           Metric::AvgPeakDist,    Metric::AvgDispLength,
    Metric::RiseRate,     Metric::RecoveryRate,  Metric::LowPeakDist,    Metric::LowDispLength,
    Metric::LowRiseRate,  Metric::LowRecoveryRate, Metric::HighPeakDist, Metric::HighDispLength,
    Metric::HighRiseRate, Metric::HighRecoveryRate};

/// Column name, e.g. "emo_low_rise_rate".
std::string_view metric_name(Metric metric);
std::optional<Metric> parse_metric(std::string_view name);

/// Averages over displacements of the given kind.
struct DisplacementAverages {
  double peak_dist = 0.0;
  double disp_length = 0.0;
  double rise_rate = 0.0;
  double recovery_rate = 0.0;
};

struct UedSummary {
  double emo_mean = 0.0;
  double emo_std = 0.0;
  /// Absent when the speaker has no displacement of that kind.
  std::optional<DisplacementAverages> overall;
  std::optional<DisplacementAverages> low;
  std::optional<DisplacementAverages> high;
  std::size_t low_count = 0;
  std::size_t high_count = 0;

  std::optional<double> get(Metric metric) const;
};

UedSummary summarize(std::span<const double> states, RateConvention convention = RateConvention::InclusiveSteps);
inline UedSummary summarize(const EmotionArc& arc, RateConvention convention = RateConvention::InclusiveSteps) {
  return summarize(arc.states, convention);
}

/// Sums needed to pool displacements across several speakers.
struct DisplacementTotals {
  std::size_t count = 0;
  double peak_dist = 0.0;
  double disp_length = 0.0;
  double rise_rate = 0.0;
  double recovery_rate = 0.0;

  void add(const Displacement& d);
  std::optional<DisplacementAverages> averages() const;
};

}  // namespace ued
