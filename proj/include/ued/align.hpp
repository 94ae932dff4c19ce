#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ued/arc.hpp"

namespace ued {

inline constexpr double kDefaultBinWidth = 0.01;

enum class AlignMode {
  /// Bins [t_j, t_j + w] anchored at each state time t_j of the shortest arc,
  /// for as long as the window fits inside [0, 1]. Bins overlap, so w smooths.
  SlidingWindow,
  /// A partition of [0, 1]: [0, w), then one bin per shortest-arc state time
  /// beyond w, the last bin closed at 1.
  Partition,
};

std::string_view to_string(AlignMode mode);

struct Bin {
  double lo = 0.0;
  double hi = 0.0;
  /// Whether `hi` itself belongs to the bin.
  bool closed_hi = false;
};

struct AlignedArcs {
  std::vector<Bin> bins;
  /// "novel_id/speaker" of each input arc, in input order.
  std::vector<std::string> keys;
  /// One binned series per input arc, each with bins.size() values.
  std::vector<std::vector<double>> series;
  double initial_bin_width = kDefaultBinWidth;
  AlignMode mode = AlignMode::SlidingWindow;
  /// Input index of the arc with the fewest states.
  std::size_t reference = 0;

  std::size_t bin_count() const { return bins.size(); }
  /// Throws LookupError for an unknown key.
  const std::vector<double>& series_for(std::string_view key) const;
};

std::string arc_key(const EmotionArc& arc);

/// Bins every arc on a common grid derived from the shortest arc. A speaker's
/// binned value is the mean of its states inside the bin; an empty bin repeats
/// the speaker's previous value.
AlignedArcs align_arcs(std::span<const EmotionArc> arcs, double initial_bin_width = kDefaultBinWidth,
                       AlignMode mode = AlignMode::SlidingWindow);
AlignedArcs align_arcs(std::span<const EmotionArc* const> arcs, double initial_bin_width = kDefaultBinWidth,
                       AlignMode mode = AlignMode::SlidingWindow);

/// Spearman correlation of two aligned series.
double arc_correlation(const AlignedArcs& aligned, std::string_view a, std::string_view b);

// ---------------------------------------------------------------------------
// Correlation sweeps over a corpus
// ---------------------------------------------------------------------------

enum class Scope {
  /// Narration vs all dialogue, per novel.
  NarrationDialogue,
  /// Narration vs each major character, per novel.
  NarrationMajor,
  /// Pairs of major characters within a novel.
  MajorWithin,
  /// All pairs of major characters in the corpus.
  MajorAcross,
};

inline constexpr Scope kAllScopes[] = {Scope::NarrationDialogue, Scope::NarrationMajor, Scope::MajorWithin,
                                       Scope::MajorAcross};

/// CLI names: narr-dial, narr-major, major-within, major-across.
std::string_view to_string(Scope scope);
std::optional<Scope> parse_scope(std::string_view text);

struct CorrelationRow {
  Scope scope = Scope::NarrationDialogue;
  Dimension dimension = Dimension::Valence;
  std::string novel_a;
  std::string speaker_a;
  std::string novel_b;
  std::string speaker_b;
  double rho = 0.0;
  std::size_t n_bins = 0;
};

struct CorrelationSummary {
  /// Empty for the corpus-wide summary.
  std::string novel_id;
  std::size_t count = 0;
  double mean = 0.0;
  /// Sample standard deviation; 0 for a single pair.
  double sd = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct CorrelationTable {
  Scope scope = Scope::NarrationDialogue;
  Dimension dimension = Dimension::Valence;
  std::vector<CorrelationRow> rows;
  /// Grouped by novel_a, for novels with at least one pair.
  std::vector<CorrelationSummary> per_novel;
  CorrelationSummary global;
  /// Speakers in scope that produced an arc.
  std::size_t arc_count = 0;
  /// Speakers without an arc and pairs that could not be correlated (constant
  /// series, too few bins), with the reason.
  std::vector<std::string> skipped;
};

struct CorrelationConfig {
  ArcOptions arc;
  double initial_bin_width = kDefaultBinWidth;
  AlignMode mode = AlignMode::SlidingWindow;
  /// 0 = hardware concurrency.
  unsigned threads = 0;
};

CorrelationSummary summarize_correlations(std::span<const double> rhos, std::string novel_id = {});

/// Speakers without an arc (too short, no lexicon coverage) are left out.
/// Characters must already be categorized.
CorrelationTable pairwise_correlations(const Corpus& corpus, const Lexicon& lexicon, Scope scope, Dimension dim,
                                       const CorrelationConfig& config = {});

/// Runs `task(i)` for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& task);

}  // namespace ued
