#include "ued/align.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <cmath>
#include <optional>
#include <thread>

#include "ued/error.hpp"
#include "ued/stats.hpp"

namespace ued {

std::string_view to_string(AlignMode mode) {
  return mode == AlignMode::SlidingWindow ? "sliding" : "partition";
}

std::string arc_key(const EmotionArc& arc) { return arc.novel_id + "/" + arc.speaker.label(); }

const std::vector<double>& AlignedArcs::series_for(std::string_view key) const {
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (keys[i] == key) return series[i];
  }
  throw LookupError("no aligned series for '" + std::string(key) + "'");
}

namespace {

std::vector<Bin> sliding_bins(std::size_t reference_states, double width) {
  const std::size_t m = reference_states - 1;
  std::vector<Bin> bins;
  for (std::size_t j = 0; j <= m; ++j) {
    // Same expression as the arc's own times, so each bin starts exactly on a state.
    const double lo = static_cast<double>(j) / static_cast<double>(m);
    if (lo + width > 1.0 + 1e-12) break;
    bins.push_back(Bin{lo, lo + width, true});
  }
  return bins;
}

std::vector<Bin> partition_bins(std::size_t reference_states, double width) {
  const std::size_t m = reference_states - 1;
  std::vector<double> edges{0.0, width};
  for (std::size_t j = 1; j <= m; ++j) {
    const double t = static_cast<double>(j) / static_cast<double>(m);
    if (t > edges.back() && t < 1.0) edges.push_back(t);
  }
  edges.push_back(1.0);
  std::vector<Bin> bins;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    bins.push_back(Bin{edges[i], edges[i + 1], i + 2 == edges.size()});
  }
  return bins;
}

std::vector<double> bin_series(const EmotionArc& arc, const std::vector<Bin>& bins) {
  std::vector<double> out;
  out.reserve(bins.size());
  const auto& times = arc.times;
  for (const auto& bin : bins) {
    const auto first = std::lower_bound(times.begin(), times.end(), bin.lo);
    const auto last = bin.closed_hi ? std::upper_bound(first, times.end(), bin.hi)
                                    : std::lower_bound(first, times.end(), bin.hi);
    if (first == last) {
      out.push_back(out.back());
      continue;
    }
    const auto begin = static_cast<std::size_t>(first - times.begin());
    const auto end = static_cast<std::size_t>(last - times.begin());
    const double origin = arc.states[begin];
    double offset_sum = 0.0;
    for (std::size_t i = begin; i < end; ++i) offset_sum += arc.states[i] - origin;
    out.push_back(origin + offset_sum / static_cast<double>(end - begin));
  }
  return out;
}

}  // namespace

AlignedArcs align_arcs(std::span<const EmotionArc* const> arcs, double initial_bin_width, AlignMode mode) {
  if (arcs.size() < 2) throw ArgumentError("align_arcs: need at least 2 arcs");
  if (!(initial_bin_width > 0.0 && initial_bin_width < 1.0)) {
    throw ArgumentError("align_arcs: initial bin width must be in (0, 1)");
  }
  AlignedArcs aligned;
  aligned.initial_bin_width = initial_bin_width;
  aligned.mode = mode;
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    if (arcs[i]->size() < 2) throw ArgumentError("align_arcs: arc '" + arc_key(*arcs[i]) + "' has fewer than 2 states");
    if (arcs[i]->size() < arcs[aligned.reference]->size()) aligned.reference = i;
  }
  const std::size_t reference_states = arcs[aligned.reference]->size();
  aligned.bins = mode == AlignMode::SlidingWindow ? sliding_bins(reference_states, initial_bin_width)
                                                  : partition_bins(reference_states, initial_bin_width);
  if (aligned.bins.size() < 2) {
    throw ArgumentError("align_arcs: bin width " + std::to_string(initial_bin_width) + " leaves fewer than 2 bins for a " +
                        std::to_string(reference_states) + "-state arc");
  }
  for (const EmotionArc* arc : arcs) {
    aligned.keys.push_back(arc_key(*arc));
    aligned.series.push_back(bin_series(*arc, aligned.bins));
  }
  return aligned;
}

AlignedArcs align_arcs(std::span<const EmotionArc> arcs, double initial_bin_width, AlignMode mode) {
  std::vector<const EmotionArc*> ptrs;
  for (const auto& arc : arcs) ptrs.push_back(&arc);
  return align_arcs(std::span<const EmotionArc* const>(ptrs), initial_bin_width, mode);
}

double arc_correlation(const AlignedArcs& aligned, std::string_view a, std::string_view b) {
  return stats::spearman(aligned.series_for(a), aligned.series_for(b));
}

// ---------------------------------------------------------------------------

std::string_view to_string(Scope scope) {
  switch (scope) {
    case Scope::NarrationDialogue:
      return "narr-dial";
    case Scope::NarrationMajor:
      return "narr-major";
    case Scope::MajorWithin:
      return "major-within";
    case Scope::MajorAcross:
      return "major-across";
  }
  return "narr-dial";
}

std::optional<Scope> parse_scope(std::string_view text) {
  for (Scope s : kAllScopes) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& task) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> workers;
  std::mutex failure_mutex;
  for (unsigned t = 0; t < threads; ++t) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count && !failed; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          failed = true;
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (failure) std::rethrow_exception(failure);
}

CorrelationSummary summarize_correlations(std::span<const double> rhos, std::string novel_id) {
  CorrelationSummary s;
  s.novel_id = std::move(novel_id);
  s.count = rhos.size();
  if (rhos.empty()) return s;
  s.mean = stats::mean(rhos);
  s.sd = rhos.size() > 1 ? std::sqrt(stats::sample_variance(rhos)) : 0.0;
  auto [lo, hi] = std::minmax_element(rhos.begin(), rhos.end());
  s.min = *lo;
  s.max = *hi;
  return s;
}

namespace {

struct ArcSlot {
  std::size_t novel_index = 0;
  Speaker speaker;
  std::optional<EmotionArc> arc;
  std::string skip_reason;
};

bool wants_narration(Scope scope) { return scope == Scope::NarrationDialogue || scope == Scope::NarrationMajor; }
bool wants_majors(Scope scope) { return scope != Scope::NarrationDialogue; }

}  // namespace

CorrelationTable pairwise_correlations(const Corpus& corpus, const Lexicon& lexicon, Scope scope, Dimension dim,
                                       const CorrelationConfig& config) {
  CorrelationTable table;
  table.scope = scope;
  table.dimension = dim;

  // Per novel: the speakers this scope compares.
  std::vector<std::vector<ArcSlot>> slots(corpus.novels.size());
  parallel_for(corpus.novels.size(), config.threads, [&](std::size_t n) {
    const Novel& novel = corpus.novels[n];
    const bool has_major = std::any_of(novel.characters.begin(), novel.characters.end(),
                                       [](const Character& c) { return c.category == Category::Major; });
    if (wants_majors(scope) && !has_major) return;
    const auto streams = segment_novel(novel);
    auto add = [&](const SpeakerStream& stream) {
      ArcSlot slot{n, stream.speaker, std::nullopt, {}};
      try {
        slot.arc = arc_for_stream(stream, lexicon, dim, stream.speaker.is_meta() ? meta_options(config.arc) : config.arc);
        if (!slot.arc) slot.skip_reason = "fewer than min_tokens tokens";
      } catch (const InsufficientTokens& e) {
        slot.skip_reason = e.what();
      } catch (const NoCoverage& e) {
        slot.skip_reason = e.what();
      }
      slots[n].push_back(std::move(slot));
    };
    if (wants_narration(scope)) add(streams.narration);
    if (scope == Scope::NarrationDialogue) add(streams.dialogue);
    if (wants_majors(scope)) {
      for (const auto& s : streams.characters) {
        const Character* ch = novel.find_character(s.speaker.character_id);
        if (ch && ch->category == Category::Major) add(s);
      }
    }
  });

  std::vector<std::pair<const ArcSlot*, const ArcSlot*>> pairs;
  for (const auto& novel_slots : slots) {
    for (const auto& slot : novel_slots) {
      if (slot.arc) ++table.arc_count;
      if (!slot.arc) {
        table.skipped.push_back(corpus.novels[slot.novel_index].id + "/" + slot.speaker.label() + ": " +
                                slot.skip_reason);
      }
    }
    if (scope == Scope::MajorAcross) continue;
    const ArcSlot* narration = nullptr;
    std::vector<const ArcSlot*> others;
    for (const auto& slot : novel_slots) {
      if (!slot.arc) continue;
      if (slot.speaker.kind == Speaker::Kind::Narration) {
        narration = &slot;
      } else {
        others.push_back(&slot);
      }
    }
    if (wants_narration(scope)) {
      if (narration) {
        for (const ArcSlot* other : others) pairs.emplace_back(narration, other);
      }
    } else {
      for (std::size_t i = 0; i < others.size(); ++i) {
        for (std::size_t j = i + 1; j < others.size(); ++j) pairs.emplace_back(others[i], others[j]);
      }
    }
  }
  if (scope == Scope::MajorAcross) {
    std::vector<const ArcSlot*> majors;
    for (const auto& novel_slots : slots) {
      for (const auto& slot : novel_slots) {
        if (slot.arc) majors.push_back(&slot);
      }
    }
    for (std::size_t i = 0; i < majors.size(); ++i) {
      for (std::size_t j = i + 1; j < majors.size(); ++j) pairs.emplace_back(majors[i], majors[j]);
    }
  }

  std::vector<std::optional<CorrelationRow>> results(pairs.size());
  std::vector<std::string> failures(pairs.size());
  parallel_for(pairs.size(), config.threads, [&](std::size_t k) {
    const auto& [a, b] = pairs[k];
    const EmotionArc* arcs[] = {&*a->arc, &*b->arc};
    CorrelationRow row;
    row.scope = scope;
    row.dimension = dim;
    row.novel_a = a->arc->novel_id;
    row.speaker_a = a->speaker.label();
    row.novel_b = b->arc->novel_id;
    row.speaker_b = b->speaker.label();
    try {
      const auto aligned = align_arcs(std::span<const EmotionArc* const>(arcs), config.initial_bin_width, config.mode);
      row.n_bins = aligned.bin_count();
      row.rho = stats::spearman(aligned.series[0], aligned.series[1]);
      results[k] = std::move(row);
    } catch (const UndefinedCorrelation& e) {
      failures[k] = row.novel_a + "/" + row.speaker_a + " vs " + row.novel_b + "/" + row.speaker_b + ": " + e.what();
    } catch (const ArgumentError& e) {
      failures[k] = row.novel_a + "/" + row.speaker_a + " vs " + row.novel_b + "/" + row.speaker_b + ": " + e.what();
    }
  });

  for (std::size_t k = 0; k < results.size(); ++k) {
    if (results[k]) {
      table.rows.push_back(std::move(*results[k]));
    } else {
      table.skipped.push_back(std::move(failures[k]));
    }
  }

  std::vector<double> all;
  for (const auto& row : table.rows) all.push_back(row.rho);
  table.global = summarize_correlations(all);
  for (const auto& novel : corpus.novels) {
    std::vector<double> rhos;
    for (const auto& row : table.rows) {
      if (row.novel_a == novel.id && row.novel_b == novel.id) rhos.push_back(row.rho);
    }
    if (!rhos.empty()) table.per_novel.push_back(summarize_correlations(rhos, novel.id));
  }
  return table;
}

}  // namespace ued
