#include <doctest.h>

#include <algorithm>
#include <random>

#include "synthetic.hpp"
#include "ued/align.hpp"
#include "ued/error.hpp"

using namespace ued;

namespace {

EmotionArc make_arc(std::string speaker, std::vector<double> states) {
  EmotionArc arc;
  arc.novel_id = "N";
  arc.speaker = Speaker::character(std::move(speaker));
  arc.states = std::move(states);
  const std::size_t n = arc.states.size();
  for (std::size_t i = 0; i < n; ++i) arc.times.push_back(n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1));
  arc.coverage.assign(n, 1.0);
  return arc;
}

EmotionArc random_arc(std::mt19937_64& rng, std::string speaker, std::size_t n) {
  std::vector<double> states(n);
  for (auto& s : states) s = testing::unit(rng);
  return make_arc(std::move(speaker), states);
}

/// Checks the structural invariants of an alignment against its inputs.
void check_alignment(const std::vector<EmotionArc>& arcs, const AlignedArcs& aligned) {
  REQUIRE(aligned.series.size() == arcs.size());
  REQUIRE(aligned.bin_count() >= 2);
  for (std::size_t k = 0; k < arcs.size(); ++k) {
    const auto& series = aligned.series[k];
    REQUIRE(series.size() == aligned.bin_count());
    for (std::size_t b = 0; b < series.size(); ++b) {
      const Bin& bin = aligned.bins[b];
      double lo = 2.0, hi = -1.0;
      for (std::size_t i = 0; i < arcs[k].size(); ++i) {
        const double t = arcs[k].times[i];
        const bool inside = t >= bin.lo && (bin.closed_hi ? t <= bin.hi : t < bin.hi);
        if (inside) {
          lo = std::min(lo, arcs[k].states[i]);
          hi = std::max(hi, arcs[k].states[i]);
        }
      }
      if (hi < lo) {
        REQUIRE(b > 0);
        CHECK(series[b] == series[b - 1]);
      } else {
        CHECK(series[b] >= lo);
        CHECK(series[b] <= hi);
      }
    }
  }
}

}  // namespace

TEST_CASE("identical arcs align to identical series") {
  std::mt19937_64 rng(1);
  const auto a = random_arc(rng, "a", 300);
  auto b = a;
  b.speaker = Speaker::character("b");
  for (AlignMode mode : {AlignMode::SlidingWindow, AlignMode::Partition}) {
    const auto aligned = align_arcs(std::vector<EmotionArc>{a, b}, 0.01, mode);
    CHECK(aligned.series[0] == aligned.series[1]);
    CHECK(arc_correlation(aligned, "N/a", "N/b") == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("sliding windows start at every state of the shortest arc that fits") {
  std::mt19937_64 rng(2);
  const std::vector<EmotionArc> arcs{random_arc(rng, "a", 201), random_arc(rng, "b", 1000)};
  const auto aligned = align_arcs(arcs, 0.05);
  CHECK(aligned.reference == 0);
  // Starts j/200 with j/200 + 0.05 <= 1: j = 0..190.
  CHECK(aligned.bin_count() == 191);
  CHECK(aligned.bins.front().lo == 0.0);
  CHECK(aligned.bins.back().hi == doctest::Approx(1.0));
  check_alignment(arcs, aligned);
}

TEST_CASE("partition bins tile the unit interval") {
  std::mt19937_64 rng(3);
  const std::vector<EmotionArc> arcs{random_arc(rng, "a", 500), random_arc(rng, "b", 101)};
  const auto aligned = align_arcs(arcs, 0.05, AlignMode::Partition);
  CHECK(aligned.reference == 1);
  // [0, 0.05), then one bin per time 0.06 .. 0.99, then the closed bin ending at 1.
  CHECK(aligned.bin_count() == 96);
  CHECK(aligned.bins.front().lo == 0.0);
  CHECK(aligned.bins.front().hi == 0.05);
  for (std::size_t i = 1; i < aligned.bins.size(); ++i) CHECK(aligned.bins[i].lo == aligned.bins[i - 1].hi);
  CHECK(aligned.bins.back().hi == 1.0);
  CHECK(aligned.bins.back().closed_hi);
  check_alignment(arcs, aligned);
}

TEST_CASE("empty bins repeat the previous value") {
  const std::vector<EmotionArc> arcs{make_arc("short", {0.1, 0.9, 0.5}), make_arc("long", {0.2, 0.4, 0.6, 0.8, 0.3})};
  const auto aligned = align_arcs(arcs, 0.1, AlignMode::Partition);
  // Edges 0, 0.1, 0.5, 1.0.
  REQUIRE(aligned.bin_count() == 3);
  CHECK(aligned.series[0] == std::vector<double>{0.1, 0.1, 0.7});
  CHECK(aligned.series[1][0] == 0.2);
  CHECK(aligned.series[1][1] == 0.4);
  CHECK(aligned.series[1][2] == doctest::Approx((0.6 + 0.8 + 0.3) / 3).epsilon(1e-15));
}

TEST_CASE("alignment errors") {
  std::mt19937_64 rng(4);
  const auto a = random_arc(rng, "a", 50);
  const auto b = random_arc(rng, "b", 50);
  CHECK_THROWS_AS(align_arcs(std::vector<EmotionArc>{a}), ArgumentError);
  CHECK_THROWS_AS(align_arcs(std::vector<EmotionArc>{a, b}, 0.0), ArgumentError);
  CHECK_THROWS_AS(align_arcs(std::vector<EmotionArc>{a, b}, 1.0), ArgumentError);
  CHECK_THROWS_AS(align_arcs(std::vector<EmotionArc>{a, make_arc("c", {0.5})}), ArgumentError);
  CHECK_THROWS_AS(align_arcs(std::vector<EmotionArc>{a, make_arc("c", {0.5, 0.6})}, 0.5), ArgumentError);
  const auto aligned = align_arcs(std::vector<EmotionArc>{a, b});
  CHECK_THROWS_AS(aligned.series_for("N/zz"), LookupError);
  const auto flat = align_arcs(std::vector<EmotionArc>{a, make_arc("c", std::vector<double>(50, 0.4))});
  CHECK_THROWS_AS(arc_correlation(flat, "N/a", "N/c"), UndefinedCorrelation);
}

TEST_CASE("bin counts shrink as the initial width grows") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<EmotionArc> arcs{random_arc(rng, "a", 100 + testing::below(rng, 900)),
                                       random_arc(rng, "b", 100 + testing::below(rng, 900))};
    for (AlignMode mode : {AlignMode::SlidingWindow, AlignMode::Partition}) {
      const auto n1 = align_arcs(arcs, 0.001, mode).bin_count();
      const auto n2 = align_arcs(arcs, 0.01, mode).bin_count();
      const auto n3 = align_arcs(arcs, 0.05, mode).bin_count();
      CHECK(n1 >= n2);
      CHECK(n2 >= n3);
    }
  }
}

TEST_CASE("random alignments keep their invariants") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<EmotionArc> arcs;
    const std::size_t count = 2 + testing::below(rng, 3);
    for (std::size_t k = 0; k < count; ++k) arcs.push_back(random_arc(rng, "s" + std::to_string(k), 30 + testing::below(rng, 400)));
    const double width = 0.001 + 0.1 * testing::unit(rng);
    for (AlignMode mode : {AlignMode::SlidingWindow, AlignMode::Partition}) check_alignment(arcs, align_arcs(arcs, width, mode));
  }
}

TEST_CASE("correlation is symmetric") {
  std::mt19937_64 rng(7);
  const std::vector<EmotionArc> arcs{random_arc(rng, "a", 120), random_arc(rng, "b", 300)};
  const auto aligned = align_arcs(arcs);
  CHECK(arc_correlation(aligned, "N/a", "N/b") == arc_correlation(aligned, "N/b", "N/a"));
}

TEST_CASE("scope names round-trip") {
  for (Scope s : kAllScopes) CHECK(parse_scope(to_string(s)) == s);
  CHECK_FALSE(parse_scope("everything"));
}

TEST_CASE("parallel_for visits every index once") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) {
                    if (i == 5) throw ArgumentError("boom");
                  }),
                  ArgumentError);
}

namespace {

struct Fixture {
  std::filesystem::path root;
  Corpus corpus;
  Lexicon lexicon;

  explicit Fixture(const std::vector<testing::SyntheticNovel>& spec, const std::string& name) {
    root = std::filesystem::temp_directory_path() / ("ued_align_" + name);
    std::filesystem::remove_all(root);
    testing::write_synthetic_corpus(root, spec);
    testing::write_synthetic_lexicon(root / "lexicon.tsv");
    corpus = categorize_corpus(load_corpus(root));
    lexicon = Lexicon::load(root / "lexicon.tsv");
  }
  ~Fixture() { std::filesystem::remove_all(root); }

  std::size_t majors(const Novel& novel) const {
    return static_cast<std::size_t>(std::count_if(novel.characters.begin(), novel.characters.end(),
                                                  [](const Character& c) { return c.category == Category::Major; }));
  }
};

CorrelationConfig small_config(unsigned threads = 0) {
  CorrelationConfig config;
  config.arc.window_size = 50;
  config.arc.min_tokens = 50;
  config.threads = threads;
  return config;
}

}  // namespace

TEST_CASE("pairwise correlations cover the scope's pairs") {
  const Fixture fx(testing::four_novel_spec(), "scopes");
  std::size_t total_majors = 0, within_pairs = 0;
  for (const auto& novel : fx.corpus.novels) {
    const std::size_t k = fx.majors(novel);
    total_majors += k;
    within_pairs += k * (k - 1) / 2;
  }
  REQUIRE(total_majors >= 6);

  const auto dial = pairwise_correlations(fx.corpus, fx.lexicon, Scope::NarrationDialogue, Dimension::Valence, small_config());
  CHECK(dial.rows.size() + dial.skipped.size() == fx.corpus.novels.size());
  CHECK(dial.arc_count == 2 * fx.corpus.novels.size());

  const auto narr = pairwise_correlations(fx.corpus, fx.lexicon, Scope::NarrationMajor, Dimension::Valence, small_config());
  CHECK(narr.rows.size() + narr.skipped.size() == total_majors);

  const auto within = pairwise_correlations(fx.corpus, fx.lexicon, Scope::MajorWithin, Dimension::Valence, small_config());
  CHECK(within.rows.size() + within.skipped.size() == within_pairs);
  for (const auto& row : within.rows) CHECK(row.novel_a == row.novel_b);

  const auto across = pairwise_correlations(fx.corpus, fx.lexicon, Scope::MajorAcross, Dimension::Valence, small_config());
  CHECK(across.arc_count == total_majors);
  CHECK(across.rows.size() + across.skipped.size() == total_majors * (total_majors - 1) / 2);
  CHECK(across.global.count == across.rows.size());
  for (const auto& row : across.rows) {
    CHECK(row.rho >= -1.0);
    CHECK(row.rho <= 1.0);
    CHECK(row.n_bins >= 2);
  }
  CHECK(across.global.min <= across.global.mean);
  CHECK(across.global.mean <= across.global.max);

  // Thread count does not change the result.
  const auto serial = pairwise_correlations(fx.corpus, fx.lexicon, Scope::MajorAcross, Dimension::Valence, small_config(1));
  REQUIRE(serial.rows.size() == across.rows.size());
  for (std::size_t i = 0; i < serial.rows.size(); ++i) {
    CHECK(serial.rows[i].rho == across.rows[i].rho);
    CHECK(serial.rows[i].speaker_a == across.rows[i].speaker_a);
  }
}

TEST_CASE("a novel with a single major character has no within-novel pairs") {
  const Fixture fx({testing::SyntheticNovel{"Solo", 'F', {{"x1", "Xan", 'F', 120}, {"x2", "Yul", 'M', 5}}, 400, 2}},
                   "solo");
  REQUIRE(fx.majors(fx.corpus.novels[0]) == 1);
  const auto within = pairwise_correlations(fx.corpus, fx.lexicon, Scope::MajorWithin, Dimension::Valence, small_config());
  CHECK(within.rows.empty());
  CHECK(within.per_novel.empty());
  CHECK(within.global.count == 0);
  const auto narr = pairwise_correlations(fx.corpus, fx.lexicon, Scope::NarrationMajor, Dimension::Valence, small_config());
  CHECK(narr.rows.size() == 1);
}

TEST_CASE("summaries of correlation lists") {
  const std::vector<double> rhos{0.1, 0.5, -0.3};
  const auto s = summarize_correlations(rhos, "N");
  CHECK(s.count == 3);
  CHECK(s.mean == doctest::Approx(0.1));
  CHECK(s.sd == doctest::Approx(0.4));
  CHECK(s.min == -0.3);
  CHECK(s.max == 0.5);
  CHECK(summarize_correlations(std::vector<double>{0.2}).sd == 0.0);
}
