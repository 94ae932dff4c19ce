#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ued/corpus.hpp"
#include "ued/lexicon.hpp"

namespace ued {

inline constexpr std::size_t kDefaultWindowSize = 500;

/// Emotion states of one speaker along normalized narrative time.
struct EmotionArc {
  std::string novel_id;
  Speaker speaker;
  Dimension dimension = Dimension::Valence;
  std::vector<double> states;
  std::vector<double> times;
  /// Fraction of window tokens found in the lexicon; 0 for carried-forward states.
  std::vector<double> coverage;
  std::size_t window_size = kDefaultWindowSize;

  std::size_t size() const { return states.size(); }
};

/// Rolling window of `window_size` tokens advancing one token per step. Each
/// state is the mean lexicon score of the matched tokens in its window; a
/// window without matches repeats the previous state.
///
/// Throws InsufficientTokens when the stream is shorter than the window and
/// NoCoverage when the first window has no lexicon match.
EmotionArc compute_arc(const SpeakerStream& stream, const Lexicon& lexicon, Dimension dim,
                       std::size_t window_size = kDefaultWindowSize);

enum class Fallback {
  None,
  /// Speakers shorter than the window get a single state over all their tokens.
  SingleWindow,
};

struct ArcOptions {
  std::size_t window_size = kDefaultWindowSize;
  /// Speakers with fewer tokens get no arc.
  std::size_t min_tokens = kDefaultWindowSize;
  Fallback fallback = Fallback::None;
};

/// Meta-speakers (whole novel, narration, dialogue) are exempt from min_tokens.
inline ArcOptions meta_options(ArcOptions options) {
  options.min_tokens = 1;
  return options;
}

std::optional<EmotionArc> arc_for_stream(const SpeakerStream& stream, const Lexicon& lexicon, Dimension dim,
                                         const ArcOptions& options);

/// Throws LookupError for an unknown novel or character id.
std::optional<EmotionArc> arc_for_speaker(const Corpus& corpus, const Lexicon& lexicon, std::string_view novel_id,
                                          const Speaker& speaker, Dimension dim, const ArcOptions& options);

}  // namespace ued
