#include "ued/arc.hpp"

#include <algorithm>

#include "ued/error.hpp"

namespace ued {

namespace {

void fill_times(EmotionArc& arc) {
  const std::size_t n = arc.states.size();
  arc.times.resize(n);
  if (n == 1) {
    arc.times[0] = 0.0;
    return;
  }
  const double last = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) arc.times[i] = static_cast<double>(i) / last;
}

EmotionArc single_window_arc(const SpeakerStream& stream, const Lexicon& lexicon, Dimension dim) {
  EmotionArc arc{stream.novel_id, stream.speaker, dim, {}, {}, {}, stream.size()};
  double sum = 0.0;
  double reference = 0.0;
  std::size_t matched = 0;
  for (const auto& token : stream.tokens) {
    if (auto score = lexicon.lookup(token, dim)) {
      if (matched == 0) reference = *score;
      sum += *score - reference;
      ++matched;
    }
  }
  if (matched == 0) {
    throw NoCoverage("speaker '" + stream.speaker.label() + "' in '" + stream.novel_id +
                     "': no lexicon matches");
  }
  arc.states.push_back(reference + sum / static_cast<double>(matched));
  arc.coverage.push_back(static_cast<double>(matched) / static_cast<double>(stream.size()));
  fill_times(arc);
  return arc;
}

}  // namespace

EmotionArc compute_arc(const SpeakerStream& stream, const Lexicon& lexicon, Dimension dim, std::size_t window_size) {
  if (window_size == 0) throw ArgumentError("window size must be at least 1");
  const std::size_t n = stream.size();
  if (n < window_size) throw InsufficientTokens(n, window_size);

  // Prefix sums over matched scores and match counts. Scores are offset by the
  // first matched score so that uniform stretches come out exact.
  std::vector<double> score_sum(n + 1, 0.0);
  std::vector<std::size_t> match_count(n + 1, 0);
  std::optional<double> reference;
  for (std::size_t i = 0; i < n; ++i) {
    const auto score = lexicon.lookup(stream.tokens[i], dim);
    if (score && !reference) reference = *score;
    score_sum[i + 1] = score_sum[i] + (score ? *score - *reference : 0.0);
    match_count[i + 1] = match_count[i] + (score ? 1 : 0);
  }

  EmotionArc arc{stream.novel_id, stream.speaker, dim, {}, {}, {}, window_size};
  const std::size_t count = n - window_size + 1;
  arc.states.reserve(count);
  arc.coverage.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t matched = match_count[i + window_size] - match_count[i];
    if (matched == 0) {
      if (i == 0) {
        throw NoCoverage("speaker '" + stream.speaker.label() + "' in '" + stream.novel_id +
                         "': first window has no lexicon matches");
      }
      arc.states.push_back(arc.states.back());
      arc.coverage.push_back(0.0);
      continue;
    }
    double mean = *reference + (score_sum[i + window_size] - score_sum[i]) / static_cast<double>(matched);
    // Prefix-sum cancellation can push a mean a hair outside [0,1].
    mean = std::min(1.0, std::max(0.0, mean));
    arc.states.push_back(mean);
    arc.coverage.push_back(static_cast<double>(matched) / static_cast<double>(window_size));
  }
  fill_times(arc);
  return arc;
}

std::optional<EmotionArc> arc_for_stream(const SpeakerStream& stream, const Lexicon& lexicon, Dimension dim,
                                         const ArcOptions& options) {
  if (options.min_tokens == 0) throw ArgumentError("min_tokens must be at least 1");
  if (stream.size() < options.min_tokens) return std::nullopt;
  if (stream.size() < options.window_size && options.fallback == Fallback::SingleWindow) {
    return single_window_arc(stream, lexicon, dim);
  }
  return compute_arc(stream, lexicon, dim, options.window_size);
}

std::optional<EmotionArc> arc_for_speaker(const Corpus& corpus, const Lexicon& lexicon, std::string_view novel_id,
                                          const Speaker& speaker, Dimension dim, const ArcOptions& options) {
  const Novel& novel = corpus.novel(novel_id);
  if (speaker.kind == Speaker::Kind::Character && !novel.find_character(speaker.character_id)) {
    throw LookupError("novel '" + novel.id + "': unknown speaker '" + speaker.character_id + "'");
  }
  const auto streams = segment_novel(novel);
  const SpeakerStream* stream = streams.find(speaker);
  if (!stream) {
    // A listed character without quotations has an empty stream.
    SpeakerStream empty{novel.id, speaker, {}, {}};
    return arc_for_stream(empty, lexicon, dim, options);
  }
  return arc_for_stream(*stream, lexicon, dim, options);
}

}  // namespace ued
