#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ued/align.hpp"
#include "ued/arc.hpp"
#include "ued/corpus.hpp"
#include "ued/dynamics.hpp"
#include "ued/lexicon.hpp"

namespace ued {

struct RunConfig {
  std::filesystem::path corpus_path;
  std::filesystem::path lexicon_path;
  std::filesystem::path output_dir = "ued_out";
  std::vector<Dimension> dimensions{kAllDimensions.begin(), kAllDimensions.end()};
  std::size_t window_size = kDefaultWindowSize;
  std::size_t min_tokens = kDefaultWindowSize;
  double initial_bin_width = kDefaultBinWidth;
  double alpha = 0.05;
  Fallback fallback = Fallback::None;
  AlignMode align_mode = AlignMode::SlidingWindow;
  RateConvention rate_convention = RateConvention::InclusiveSteps;
  CategoryRule category_rule;
  bool pooled_t_test = false;
  /// Restricts `ued` summary rows to characters of one category.
  std::optional<Category> category_filter;
  /// 0 = hardware concurrency. Results do not depend on it.
  unsigned threads = 0;

  /// Throws ArgumentError.
  void validate() const;
  /// Stable JSON echo of the effective configuration (no thread count).
  std::string to_json() const;
};

/// Per-speaker UED summary for one dimension.
struct SpeakerSummary {
  std::size_t novel_index = 0;
  Speaker speaker;
  /// "novel", "narration" or "character".
  std::string speaker_type;
  const Character* character = nullptr;
  /// "Name (NovelId)", "narrator (NovelId)" or "novel (NovelId)".
  std::string display_name;
  std::size_t tokens = 0;
  std::size_t states = 0;
  UedSummary summary;
  DisplacementTotals all;
  DisplacementTotals low;
  DisplacementTotals high;
};

/// Loaded inputs plus lazily computed per-dimension summaries.
class Workspace {
 public:
  Workspace(RunConfig config, Corpus corpus, Lexicon lexicon);

  static Workspace load(const RunConfig& config);

  const RunConfig& config() const { return config_; }
  const Corpus& corpus() const { return corpus_; }
  const Lexicon& lexicon() const { return lexicon_; }
  ArcOptions arc_options() const;

  /// Novel and narration meta-speakers plus every character with an arc.
  const std::vector<SpeakerSummary>& summaries(Dimension dim) const;

 private:
  RunConfig config_;
  Corpus corpus_;
  Lexicon lexicon_;
  mutable std::mutex mutex_;
  mutable std::map<Dimension, std::unique_ptr<std::vector<SpeakerSummary>>> cache_;
};

void cmd_arcs(const Workspace& ws);
void cmd_ued(const Workspace& ws);
void cmd_correlate(const Workspace& ws, Scope scope);
void cmd_groups(const Workspace& ws);
void cmd_outliers(const Workspace& ws);
/// Every command above; `include_arcs = false` skips the per-arc dumps.
void cmd_report(const Workspace& ws, bool include_arcs = true);

/// Writes run_config.json and MANIFEST.tsv (path, bytes, FNV-1a 64 of every
/// file under the output directory).
void seal_run(const RunConfig& config);

/// Filesystem-safe form of a speaker label.
std::string file_stem(std::string_view label);

}  // namespace ued
