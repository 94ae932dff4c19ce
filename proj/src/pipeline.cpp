#include "ued/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ued/csv.hpp"
#include "ued/error.hpp"
#include "ued/stats.hpp"
#include "ued/svg.hpp"

namespace fs = std::filesystem;

namespace ued {

namespace {

void warn(const std::string& message) { std::cerr << "warning: " << message << '\n'; }

std::string fmt(double v) { return csv::format_double(v); }
std::string fmt(std::size_t v) { return std::to_string(v); }

void write_csv(const fs::path& path, const csv::Row& header, const std::vector<csv::Row>& rows) {
  std::ostringstream out;
  csv::Writer writer(out);
  writer.row(header);
  for (const auto& row : rows) writer.row(row);
  csv::write_file(path, out.str());
}

std::string rate_name(RateConvention c) { return c == RateConvention::InclusiveSteps ? "inclusive" : "exclusive"; }

const char* kSpeakerTypes[] = {"novel", "narration", "character", "major", "intermediate", "minor"};

bool in_group(const SpeakerSummary& s, std::string_view group) {
  if (group == "novel" || group == "narration" || group == "character") return s.speaker_type == group;
  return s.character && s.character->category && to_string(*s.character->category) == group;
}

}  // namespace

// ---------------------------------------------------------------------------

void RunConfig::validate() const {
  if (window_size < 1) throw ArgumentError("window size must be at least 1");
  if (min_tokens < 1) throw ArgumentError("min-tokens must be at least 1");
  if (!(initial_bin_width > 0.0 && initial_bin_width < 1.0)) throw ArgumentError("bin width must be in (0, 1)");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ArgumentError("alpha must be in (0, 1)");
  if (dimensions.empty()) throw ArgumentError("at least one dimension is required");
  if (!(category_rule.major_share > 0.0 && category_rule.major_share <= 1.0)) {
    throw ArgumentError("major share must be in (0, 1]");
  }
}

std::string RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["corpus_path"] = corpus_path.string();
  j["lexicon_path"] = lexicon_path.string();
  std::vector<std::string> dims;
  for (auto d : dimensions) dims.emplace_back(to_string(d));
  j["dimensions"] = dims;
  j["window_size"] = window_size;
  j["min_tokens"] = min_tokens;
  j["initial_bin_width"] = initial_bin_width;
  j["alpha"] = alpha;
  j["fallback"] = fallback == Fallback::None ? "none" : "single-window";
  j["align_mode"] = std::string(to_string(align_mode));
  j["rate_convention"] = rate_name(rate_convention);
  j["major_share"] = category_rule.major_share;
  j["major_quotations"] = category_rule.major_quotations;
  j["minor_quotations"] = category_rule.minor_quotations;
  j["dialogue_measure"] = category_rule.measure == DialogueMeasure::Tokens ? "tokens" : "quotations";
  j["t_test"] = pooled_t_test ? "pooled" : "welch";
  j["category_filter"] = category_filter ? std::string(to_string(*category_filter)) : std::string("all");
  return j.dump(2) + "\n";
}

Workspace::Workspace(RunConfig config, Corpus corpus, Lexicon lexicon)
    : config_(std::move(config)), corpus_(std::move(corpus)), lexicon_(std::move(lexicon)) {}

Workspace Workspace::load(const RunConfig& config) {
  config.validate();
  Lexicon lexicon = Lexicon::load(config.lexicon_path);
  if (lexicon.duplicate_count() > 0) {
    warn(std::to_string(lexicon.duplicate_count()) + " duplicate lexicon entries (last one kept)");
  }
  Corpus corpus = categorize_corpus(load_corpus(config.corpus_path), config.category_rule);
  return Workspace(config, std::move(corpus), std::move(lexicon));
}

ArcOptions Workspace::arc_options() const {
  return ArcOptions{config_.window_size, config_.min_tokens, config_.fallback};
}

const std::vector<SpeakerSummary>& Workspace::summaries(Dimension dim) const {
  std::lock_guard lock(mutex_);
  auto& slot = cache_[dim];
  if (slot) return *slot;

  std::vector<std::vector<SpeakerSummary>> per_novel(corpus_.novels.size());
  std::vector<std::vector<std::string>> warnings(corpus_.novels.size());
  const ArcOptions options = arc_options();
  parallel_for(corpus_.novels.size(), config_.threads, [&](std::size_t n) {
    const Novel& novel = corpus_.novels[n];
    const auto streams = segment_novel(novel);
    auto add = [&](const SpeakerStream& stream, std::string type, const Character* ch) {
      std::optional<EmotionArc> arc;
      try {
        arc = arc_for_stream(stream, lexicon_, dim, ch ? options : meta_options(options));
      } catch (const InsufficientTokens& e) {
        warnings[n].push_back(novel.id + "/" + stream.speaker.label() + ": " + e.what());
      } catch (const NoCoverage& e) {
        warnings[n].push_back(e.what());
      }
      if (!arc) return;
      SpeakerSummary s;
      s.novel_index = n;
      s.speaker = stream.speaker;
      s.speaker_type = std::move(type);
      s.character = ch;
      s.tokens = stream.size();
      s.states = arc->size();
      if (ch) {
        s.display_name = ch->name + " (" + novel.id + ")";
      } else {
        s.display_name = (s.speaker_type == "narration" ? "narrator" : "novel") + std::string(" (") + novel.id + ")";
      }
      const HomeBase hb = home_base(*arc);
      for (const auto& d : find_displacements(*arc, hb, config_.rate_convention)) {
        s.all.add(d);
        (d.direction == Direction::Low ? s.low : s.high).add(d);
      }
      s.summary = summarize(*arc, config_.rate_convention);
      per_novel[n].push_back(std::move(s));
    };
    add(streams.whole_novel, "novel", nullptr);
    add(streams.narration, "narration", nullptr);
    for (const auto& stream : streams.characters) {
      add(stream, "character", novel.find_character(stream.speaker.character_id));
    }
  });

  auto result = std::make_unique<std::vector<SpeakerSummary>>();
  for (std::size_t n = 0; n < per_novel.size(); ++n) {
    for (const auto& w : warnings[n]) warn(w);
    for (auto& s : per_novel[n]) result->push_back(std::move(s));
  }
  slot = std::move(result);
  return *slot;
}

std::string file_stem(std::string_view label) {
  std::string out;
  for (char c : label) {
    const bool safe = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                      c == '_' || c == '.';
    out.push_back(safe ? c : '_');
  }
  if (out.empty() || out == "." || out == "..") out = "_" + out;
  return out;
}

// ---------------------------------------------------------------------------
// arcs
// ---------------------------------------------------------------------------

void cmd_arcs(const Workspace& ws) {
  const auto& config = ws.config();
  const fs::path dir = config.output_dir / "arcs";
  const ArcOptions options = ws.arc_options();
  const auto& novels = ws.corpus().novels;
  std::vector<std::vector<std::string>> warnings(novels.size());

  parallel_for(novels.size(), config.threads, [&](std::size_t n) {
    const Novel& novel = novels[n];
    const auto streams = segment_novel(novel);
    std::vector<const SpeakerStream*> speakers{&streams.whole_novel, &streams.narration};
    for (const auto& s : streams.characters) speakers.push_back(&s);

    std::ostringstream out;
    csv::Writer writer(out);
    writer.row({"novel_id", "speaker", "dimension", "index", "time", "state", "coverage"});
    for (const SpeakerStream* stream : speakers) {
      for (Dimension dim : config.dimensions) {
        std::optional<EmotionArc> arc;
        try {
          arc = arc_for_stream(*stream, ws.lexicon(), dim, stream->speaker.is_meta() ? meta_options(options) : options);
        } catch (const InsufficientTokens& e) {
          warnings[n].push_back(novel.id + "/" + stream->speaker.label() + ": " + e.what());
        } catch (const NoCoverage& e) {
          warnings[n].push_back(e.what());
        }
        if (!arc) continue;
        const std::string label = stream->speaker.label();
        const std::string dim_name(to_string(dim));
        for (std::size_t i = 0; i < arc->size(); ++i) {
          writer.row({novel.id, label, dim_name, fmt(i), fmt(arc->times[i]), fmt(arc->states[i]),
                      fmt(arc->coverage[i])});
        }
        std::string title = novel.id + " / ";
        if (const Character* ch = novel.find_character(label); ch && !stream->speaker.is_meta()) {
          title += ch->name;
        } else {
          title += label;
        }
        title += " / " + dim_name;
        csv::write_file(dir / "svg" / file_stem(novel.id) / (file_stem(label) + "_" + dim_name + ".svg"),
                        render_arc_svg(*arc, title));
      }
    }
    csv::write_file(dir / (file_stem(novel.id) + ".csv"), out.str());
  });
  for (const auto& ws_warnings : warnings) {
    for (const auto& w : ws_warnings) warn(w);
  }
}

// ---------------------------------------------------------------------------
// ued
// ---------------------------------------------------------------------------

void cmd_ued(const Workspace& ws) {
  const auto& config = ws.config();
  const auto& corpus = ws.corpus();
  const fs::path dir = config.output_dir / "ued";

  // Speaker counts and mean stream lengths per speaker type.
  {
    std::map<std::string, std::pair<std::size_t, double>> groups;
    for (const auto& novel : corpus.novels) {
      const auto streams = segment_novel(novel);
      auto add = [&](const std::string& g, std::size_t tokens) {
        groups[g].first += 1;
        groups[g].second += static_cast<double>(tokens);
      };
      add("novel", streams.whole_novel.size());
      add("narration", streams.narration.size());
      for (const auto& s : streams.characters) {
        const Character* ch = novel.find_character(s.speaker.character_id);
        add(ch && ch->category ? std::string(to_string(*ch->category)) : std::string("uncategorized"), s.size());
      }
    }
    std::vector<csv::Row> rows;
    for (const char* g : {"novel", "narration", "major", "intermediate", "minor"}) {
      const auto it = groups.find(g);
      const std::size_t count = it == groups.end() ? 0 : it->second.first;
      const double mean_tokens = count ? it->second.second / static_cast<double>(count) : 0.0;
      rows.push_back({g, fmt(count), count ? fmt(mean_tokens) : std::string()});
    }
    write_csv(dir / "speaker_counts.csv", {"speaker_type", "count", "mean_tokens"}, rows);
  }

  csv::Row header{"novel_id", "speaker", "name",   "speaker_type", "category",
                  "gender",   "author_gender", "dimension", "tokens", "states"};
  for (Metric m : kAllMetrics) header.emplace_back(metric_name(m));
  header.emplace_back("low_count");
  header.emplace_back("high_count");

  std::vector<csv::Row> rows;
  for (Dimension dim : config.dimensions) {
    for (const auto& s : ws.summaries(dim)) {
      if (config.category_filter &&
          !(s.character && s.character->category && *s.character->category == *config.category_filter)) {
        continue;
      }
      const Novel& novel = corpus.novels[s.novel_index];
      csv::Row row{novel.id,
                   s.speaker.label(),
                   s.character ? s.character->name : std::string(),
                   s.speaker_type,
                   s.character && s.character->category ? std::string(to_string(*s.character->category)) : "",
                   s.character ? std::string(to_string(s.character->gender)) : "",
                   std::string(to_string(novel.author_gender)),
                   std::string(to_string(dim)),
                   fmt(s.tokens),
                   fmt(s.states)};
      for (Metric m : kAllMetrics) row.push_back(csv::format_optional(s.summary.get(m)));
      row.push_back(fmt(s.summary.low_count));
      row.push_back(fmt(s.summary.high_count));
      rows.push_back(std::move(row));
    }
  }
  write_csv(dir / "ued_summary.csv", header, rows);

  // Aggregated tables, one per dimension: mean of per-speaker values, and the
  // alternative that pools displacements of all speakers in a group.
  csv::Row table_header{"metric"};
  for (const char* g : kSpeakerTypes) table_header.emplace_back(g);
  for (Dimension dim : config.dimensions) {
    const auto& summaries = ws.summaries(dim);
    std::vector<csv::Row> per_speaker, pooled;
    for (Metric m : kAllMetrics) {
      csv::Row a{std::string(metric_name(m))};
      csv::Row b{std::string(metric_name(m))};
      for (const char* g : kSpeakerTypes) {
        std::vector<double> values;
        DisplacementTotals all, low, high;
        for (const auto& s : summaries) {
          if (!in_group(s, g)) continue;
          if (auto v = s.summary.get(m)) values.push_back(*v);
          for (auto [dst, src] : {std::pair{&all, &s.all}, std::pair{&low, &s.low}, std::pair{&high, &s.high}}) {
            dst->count += src->count;
            dst->peak_dist += src->peak_dist;
            dst->disp_length += src->disp_length;
            dst->rise_rate += src->rise_rate;
            dst->recovery_rate += src->recovery_rate;
          }
        }
        a.push_back(values.empty() ? std::string() : fmt(stats::mean(values)));

        std::optional<double> pooled_value;
        if (m == Metric::Mean || m == Metric::Std) {
          if (!values.empty()) pooled_value = stats::mean(values);
        } else {
          const DisplacementTotals* totals = &all;
          if (m == Metric::LowPeakDist || m == Metric::LowDispLength || m == Metric::LowRiseRate ||
              m == Metric::LowRecoveryRate) {
            totals = &low;
          } else if (m == Metric::HighPeakDist || m == Metric::HighDispLength || m == Metric::HighRiseRate ||
                     m == Metric::HighRecoveryRate) {
            totals = &high;
          }
          if (auto avg = totals->averages()) {
            switch (m) {
              case Metric::AvgPeakDist:
              case Metric::LowPeakDist:
              case Metric::HighPeakDist:
                pooled_value = avg->peak_dist;
                break;
              case Metric::AvgDispLength:
              case Metric::LowDispLength:
              case Metric::HighDispLength:
                pooled_value = avg->disp_length;
                break;
              case Metric::RiseRate:
              case Metric::LowRiseRate:
              case Metric::HighRiseRate:
                pooled_value = avg->rise_rate;
                break;
              default:
                pooled_value = avg->recovery_rate;
            }
          }
        }
        b.push_back(csv::format_optional(pooled_value));
      }
      per_speaker.push_back(std::move(a));
      pooled.push_back(std::move(b));
    }
    const std::string name(to_string(dim));
    write_csv(dir / ("ued_table_" + name + ".csv"), table_header, per_speaker);
    write_csv(dir / ("ued_table_" + name + "_pooled.csv"), table_header, pooled);
  }
}

// ---------------------------------------------------------------------------
// correlate
// ---------------------------------------------------------------------------

void cmd_correlate(const Workspace& ws, Scope scope) {
  const auto& config = ws.config();
  const fs::path dir = config.output_dir / "correlate";
  const std::string name(to_string(scope));
  CorrelationConfig cc{ws.arc_options(), config.initial_bin_width, config.align_mode, config.threads};

  std::vector<csv::Row> rows, summary, histogram;
  constexpr int kHistogramBins = 20;
  for (Dimension dim : config.dimensions) {
    const auto table = pairwise_correlations(ws.corpus(), ws.lexicon(), scope, dim, cc);
    if (table.arc_count < 2) {
      throw ArgumentError("scope " + name + " (" + std::string(to_string(dim)) + "): need at least 2 arcs, found " +
                          std::to_string(table.arc_count));
    }
    for (const auto& s : table.skipped) {
      if (s.find("min_tokens") == std::string::npos) warn(s);
    }
    const std::string dim_name(to_string(dim));
    std::array<std::size_t, kHistogramBins> counts{};
    for (const auto& r : table.rows) {
      rows.push_back({name, dim_name, r.novel_a, r.speaker_a, r.novel_b, r.speaker_b, fmt(r.rho), fmt(r.n_bins)});
      const int bin = std::clamp(static_cast<int>(std::floor((r.rho + 1.0) / 2.0 * kHistogramBins)), 0,
                                 kHistogramBins - 1);
      ++counts[static_cast<std::size_t>(bin)];
    }
    for (int b = 0; b < kHistogramBins; ++b) {
      const double lo = -1.0 + 2.0 * b / kHistogramBins;
      const double hi = -1.0 + 2.0 * (b + 1) / kHistogramBins;
      histogram.push_back({dim_name, fmt(lo), fmt(hi), fmt(counts[static_cast<std::size_t>(b)])});
    }
    auto add_summary = [&](const CorrelationSummary& s) {
      summary.push_back({dim_name, s.novel_id.empty() ? std::string("ALL") : s.novel_id, fmt(s.count),
                         s.count ? fmt(s.mean) : "", s.count ? fmt(s.sd) : "", s.count ? fmt(s.min) : "",
                         s.count ? fmt(s.max) : ""});
    };
    add_summary(table.global);
    for (const auto& s : table.per_novel) add_summary(s);
  }
  write_csv(dir / (name + "_correlations.csv"),
            {"scope", "dimension", "novel_a", "speaker_a", "novel_b", "speaker_b", "rho", "n_bins"}, rows);
  write_csv(dir / (name + "_summary.csv"), {"dimension", "novel_id", "count", "mean", "sd", "min", "max"}, summary);
  write_csv(dir / (name + "_histogram.csv"), {"dimension", "bin_lo", "bin_hi", "count"}, histogram);
}

// ---------------------------------------------------------------------------
// groups
// ---------------------------------------------------------------------------

namespace {

bool binary_gender(Gender g) { return g == Gender::Female || g == Gender::Male; }

struct GroupRow {
  csv::Row fields;
  double p = 1.0;
};

void write_battery(const fs::path& path, std::vector<GroupRow>& battery, double alpha) {
  std::vector<double> ps;
  for (const auto& r : battery) ps.push_back(r.p);
  const auto bh = stats::benjamini_hochberg(ps, alpha);
  std::vector<csv::Row> rows;
  for (std::size_t i = 0; i < battery.size(); ++i) {
    auto row = battery[i].fields;
    row.push_back(fmt(battery[i].p));
    row.push_back(fmt(bh.adjusted[i]));
    row.push_back(bh.reject[i] ? "true" : "false");
    rows.push_back(std::move(row));
  }
  write_csv(path,
            {"metric", "dimension", "group_a", "group_b", "n_a", "n_b", "mean_a", "mean_b", "statistic", "p_raw",
             "p_adjusted", "significant"},
            rows);
}

}  // namespace

void cmd_groups(const Workspace& ws) {
  const auto& config = ws.config();
  const auto& corpus = ws.corpus();
  const fs::path dir = config.output_dir / "groups";
  auto t_test = config.pooled_t_test ? stats::pooled_t_test : stats::welch_t_test;

  std::vector<GroupRow> by_speaker, by_author;
  std::vector<GroupRow> anova_rows;
  std::vector<csv::Row> cell_rows;

  for (Dimension dim : config.dimensions) {
    const std::string dim_name(to_string(dim));
    std::vector<const SpeakerSummary*> chars;
    for (const auto& s : ws.summaries(dim)) {
      if (s.character) chars.push_back(&s);
    }
    for (Metric m : kAllMetrics) {
      const std::string metric(metric_name(m));
      auto run = [&](std::vector<GroupRow>& battery, auto gender_of, const char* what) {
        std::vector<double> female, male;
        for (const auto* s : chars) {
          const auto v = s->summary.get(m);
          if (!v) continue;
          const Gender g = gender_of(*s);
          if (g == Gender::Female) female.push_back(*v);
          if (g == Gender::Male) male.push_back(*v);
        }
        if (female.size() < 2 || male.size() < 2) {
          warn(std::string(what) + " " + metric + " (" + dim_name + "): group with fewer than 2 members skipped");
          return;
        }
        try {
          const auto r = t_test(female, male);
          battery.push_back({{metric, dim_name, "F", "M", fmt(r.n_a), fmt(r.n_b), fmt(r.mean_a), fmt(r.mean_b),
                              fmt(r.statistic)},
                             r.p_value});
        } catch (const ArgumentError& e) {
          warn(std::string(what) + " " + metric + " (" + dim_name + "): " + e.what());
        }
      };
      run(by_speaker, [](const SpeakerSummary& s) { return s.character->gender; }, "speaker gender");
      run(by_author, [&](const SpeakerSummary& s) { return corpus.novels[s.novel_index].author_gender; },
          "author gender");

      std::vector<double> values;
      std::vector<std::string> speaker_gender, author_gender;
      for (const auto* s : chars) {
        const auto v = s->summary.get(m);
        const Gender ag = corpus.novels[s->novel_index].author_gender;
        if (!v || !binary_gender(s->character->gender) || !binary_gender(ag)) continue;
        values.push_back(*v);
        speaker_gender.emplace_back(to_string(s->character->gender));
        author_gender.emplace_back(to_string(ag));
      }
      for (const char* sg : {"F", "M"}) {
        for (const char* ag : {"F", "M"}) {
          std::vector<double> cell;
          for (std::size_t i = 0; i < values.size(); ++i) {
            if (speaker_gender[i] == sg && author_gender[i] == ag) cell.push_back(values[i]);
          }
          cell_rows.push_back({metric, dim_name, sg, ag, fmt(cell.size()), cell.empty() ? "" : fmt(stats::mean(cell))});
        }
      }
      try {
        const auto table = stats::two_way_anova(values, speaker_gender, author_gender);
        auto add = [&](const char* effect, const stats::AnovaRow& row) {
          anova_rows.push_back({{metric, dim_name, effect, fmt(row.sum_of_squares), fmt(row.dof),
                                 csv::format_optional(row.f)},
                                row.p_value.value_or(1.0)});
        };
        add("speaker_gender", table.factor_a);
        add("author_gender", table.factor_b);
        add("interaction", table.interaction);
      } catch (const ArgumentError& e) {
        warn("anova " + metric + " (" + dim_name + "): " + e.what());
      }
    }
  }

  write_battery(dir / "speaker_gender.csv", by_speaker, config.alpha);
  write_battery(dir / "author_gender.csv", by_author, config.alpha);

  std::vector<double> ps;
  for (const auto& r : anova_rows) ps.push_back(r.p);
  const auto bh = stats::benjamini_hochberg(ps, config.alpha);
  std::vector<csv::Row> rows;
  for (std::size_t i = 0; i < anova_rows.size(); ++i) {
    auto row = anova_rows[i].fields;
    row.push_back(fmt(anova_rows[i].p));
    row.push_back(fmt(bh.adjusted[i]));
    row.push_back(bh.reject[i] ? "true" : "false");
    rows.push_back(std::move(row));
  }
  write_csv(dir / "anova.csv",
            {"metric", "dimension", "effect", "sum_of_squares", "dof", "F", "p_raw", "p_adjusted", "significant"},
            rows);
  write_csv(dir / "cell_means.csv", {"metric", "dimension", "speaker_gender", "author_gender", "n", "mean"},
            cell_rows);
}

// ---------------------------------------------------------------------------
// outliers
// ---------------------------------------------------------------------------

void cmd_outliers(const Workspace& ws) {
  const auto& config = ws.config();
  const fs::path dir = config.output_dir / "outliers";
  std::vector<csv::Row> rows, fences;
  std::set<std::string> skipped;
  for (Dimension dim : config.dimensions) {
    const std::string dim_name(to_string(dim));
    const auto& summaries = ws.summaries(dim);
    for (Metric m : kAllMetrics) {
      const std::string metric(metric_name(m));
      for (const char* type : {"novel", "narration", "character"}) {
        std::vector<stats::LabeledValue> values;
        for (const auto& s : summaries) {
          if (s.speaker_type != type) continue;
          if (auto v = s.summary.get(m)) values.push_back({s.display_name, *v});
        }
        if (values.size() < 4) {
          skipped.insert(dim_name + " " + type);
          continue;
        }
        const auto report = stats::iqr_outliers(values);
        fences.push_back({dim_name, metric, type, fmt(values.size()), fmt(report.q1), fmt(report.q3),
                          fmt(report.iqr), fmt(report.low_fence), fmt(report.high_fence)});
        for (const auto& v : report.low_outliers) rows.push_back({dim_name, metric, type, "low", v.label, fmt(v.value)});
        for (const auto& v : report.high_outliers) {
          rows.push_back({dim_name, metric, type, "high", v.label, fmt(v.value)});
        }
      }
    }
  }
  for (const auto& stratum : skipped) {
    warn("outliers " + stratum + ": fewer than 4 speakers for some metrics, those strata skipped");
  }
  write_csv(dir / "outliers.csv", {"dim", "metric", "speaker_type", "extreme", "name", "value"}, rows);
  write_csv(dir / "fences.csv",
            {"dim", "metric", "speaker_type", "n", "q1", "q3", "iqr", "low_fence", "high_fence"}, fences);
}

void cmd_report(const Workspace& ws, bool include_arcs) {
  if (include_arcs) cmd_arcs(ws);
  cmd_ued(ws);
  for (Scope scope : kAllScopes) {
    try {
      cmd_correlate(ws, scope);
    } catch (const ArgumentError& e) {
      warn(std::string("correlate ") + std::string(to_string(scope)) + ": " + e.what());
    }
  }
  cmd_groups(ws);
  cmd_outliers(ws);
}

// ---------------------------------------------------------------------------

void seal_run(const RunConfig& config) {
  csv::write_file(config.output_dir / "run_config.json", config.to_json());

  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(config.output_dir)) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), config.output_dir);
    if (rel == "MANIFEST.tsv") continue;
    files.push_back(rel);
  }
  std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
    return a.generic_string() < b.generic_string();
  });

  std::ostringstream out;
  out << "path\tbytes\tfnv1a64\n";
  for (const auto& rel : files) {
    const std::string contents = csv::read_file(config.output_dir / rel);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : contents) {
      hash ^= c;
      hash *= 0x100000001b3ULL;
    }
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(hash));
    out << rel.generic_string() << '\t' << contents.size() << '\t' << hex << '\n';
  }
  csv::write_file(config.output_dir / "MANIFEST.tsv", out.str());
}

}  // namespace ued
