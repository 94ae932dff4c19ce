#include <doctest.h>

#include <algorithm>
#include <random>

#include "synthetic.hpp"
#include "ued/arc.hpp"
#include "ued/error.hpp"

using namespace ued;

namespace {

const Lexicon& lexicon() {
  static const Lexicon lex = Lexicon::parse(
      "good\t0.7\t0.5\t0.5\nlow\t0.2\t0.5\t0.5\nhigh\t0.8\t0.5\t0.5\nzero\t0\t0.5\t0.5\none\t1\t0.5\t0.5\n");
  return lex;
}

SpeakerStream stream_of(std::vector<std::string> tokens) {
  SpeakerStream s{"N", Speaker::narration(), std::move(tokens), {}};
  for (std::size_t i = 0; i < s.tokens.size(); ++i) s.source_offsets.push_back(i);
  return s;
}

SpeakerStream repeated(const std::string& word, std::size_t n) { return stream_of(std::vector<std::string>(n, word)); }

/// Random stream over a lexicon of random scores; ~60 % of tokens match.
std::pair<Lexicon, SpeakerStream> random_case(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::pair<std::string, ScoreTriple>> entries;
  for (int w = 0; w < 12; ++w) {
    entries.push_back({"w" + std::string(1, static_cast<char>('a' + w)),
                       ScoreTriple{testing::unit(rng), testing::unit(rng), testing::unit(rng)}});
  }
  std::vector<std::string> tokens;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = testing::below(rng, 20);
    tokens.push_back(k < 12 ? entries[k].first : "filler");
  }
  tokens[0] = entries[0].first;
  return {Lexicon::from_entries(entries), stream_of(tokens)};
}

}  // namespace

TEST_CASE("a uniform stream gives a constant arc") {
  const auto arc = compute_arc(repeated("good", 500), lexicon(), Dimension::Valence);
  REQUIRE(arc.size() == 1);
  CHECK(arc.states[0] == 0.7);
  CHECK(arc.times == std::vector<double>{0.0});
  CHECK(arc.coverage[0] == 1.0);
  for (double s : compute_arc(repeated("good", 1500), lexicon(), Dimension::Valence).states) CHECK(s == 0.7);
}

TEST_CASE("arc length and normalized times") {
  const auto arc = compute_arc(repeated("good", 502), lexicon(), Dimension::Valence);
  CHECK(arc.size() == 3);
  CHECK(arc.times == std::vector<double>{0.0, 0.5, 1.0});
}

TEST_CASE("window mean over alternating scores") {
  std::vector<std::string> tokens;
  for (int i = 0; i < 500; ++i) tokens.push_back(i % 2 ? "high" : "low");
  const auto arc = compute_arc(stream_of(tokens), lexicon(), Dimension::Valence);
  CHECK(arc.states[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("unmatched tokens are ignored and empty windows carry forward") {
  // Window 3 over: good x x x x low
  const auto arc = compute_arc(stream_of({"good", "x", "x", "x", "x", "low"}), lexicon(), Dimension::Valence, 3);
  REQUIRE(arc.size() == 4);
  CHECK(arc.states[0] == 0.7);
  CHECK(arc.states[1] == 0.7);
  CHECK(arc.states[2] == 0.7);
  CHECK(arc.coverage[1] == 0.0);
  CHECK(arc.states[3] == 0.2);
  CHECK(arc.coverage[0] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("arc errors") {
  try {
    compute_arc(repeated("good", 499), lexicon(), Dimension::Valence);
    FAIL("expected InsufficientTokens");
  } catch (const InsufficientTokens& e) {
    CHECK(e.token_count() == 499);
    CHECK(e.window_size() == 500);
  }
  CHECK_THROWS_AS(compute_arc(repeated("nothing", 600), lexicon(), Dimension::Valence), NoCoverage);
  CHECK_THROWS_AS(compute_arc(repeated("good", 5), lexicon(), Dimension::Valence, 0), ArgumentError);
}

TEST_CASE("window of one over a single token") {
  const auto arc = compute_arc(repeated("one", 1), lexicon(), Dimension::Valence, 1);
  CHECK(arc.states == std::vector<double>{1.0});
  CHECK(arc.times == std::vector<double>{0.0});
}

TEST_CASE("arc_for_stream applies min_tokens and the single-window fallback") {
  ArcOptions options;
  options.window_size = 10;
  options.min_tokens = 10;
  CHECK_FALSE(arc_for_stream(repeated("good", 9), lexicon(), Dimension::Valence, options));
  CHECK(arc_for_stream(repeated("good", 10), lexicon(), Dimension::Valence, options)->size() == 1);

  options.min_tokens = 3;
  CHECK_THROWS_AS(arc_for_stream(repeated("good", 5), lexicon(), Dimension::Valence, options), InsufficientTokens);
  options.fallback = Fallback::SingleWindow;
  const auto single = arc_for_stream(stream_of({"good", "low", "x", "high", "good"}), lexicon(), Dimension::Valence, options);
  REQUIRE(single);
  CHECK(single->states[0] == doctest::Approx((0.7 + 0.2 + 0.8 + 0.7) / 4));
  CHECK(single->coverage[0] == doctest::Approx(0.8));
  CHECK(meta_options(options).min_tokens == 1);
}

TEST_CASE("arc_for_speaker looks up speakers in a corpus") {
  const auto root = std::filesystem::temp_directory_path() / "ued_arc_corpus";
  std::filesystem::remove_all(root);
  testing::write_synthetic_corpus(root, testing::two_novel_spec());
  const auto lex_path = root / "lexicon.tsv";
  testing::write_synthetic_lexicon(lex_path);
  const Corpus corpus = load_corpus(root);
  const Lexicon lex = Lexicon::load(lex_path);

  ArcOptions options;
  const auto narration = arc_for_speaker(corpus, lex, "GardenNovel", Speaker::narration(), Dimension::Valence, options);
  REQUIRE(narration);
  CHECK(narration->size() > 1);
  CHECK(narration->novel_id == "GardenNovel");
  CHECK_FALSE(arc_for_speaker(corpus, lex, "GardenNovel", Speaker::character("g4"), Dimension::Valence, options));
  CHECK_FALSE(arc_for_speaker(corpus, lex, "GardenNovel", Speaker::character("g3"), Dimension::Valence, options));
  options.min_tokens = 1'000'000'000;
  CHECK_FALSE(arc_for_speaker(corpus, lex, "GardenNovel", Speaker::character("g1"), Dimension::Valence, options));
  CHECK_THROWS_AS(arc_for_speaker(corpus, lex, "GardenNovel", Speaker::character("zz"), Dimension::Valence, options),
                  LookupError);
  CHECK_THROWS_AS(arc_for_speaker(corpus, lex, "Nope", Speaker::narration(), Dimension::Valence, options), LookupError);
  std::filesystem::remove_all(root);
}

TEST_CASE("arc properties on random streams") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 20 + testing::below(rng, 200);
    const std::size_t w = 1 + testing::below(rng, n);
    const auto [lex, stream] = random_case(rng, n);
    const auto arc = compute_arc(stream, lex, Dimension::Valence, w);
    REQUIRE(arc.size() == n - w + 1);
    CHECK(arc.times.front() == 0.0);
    CHECK(arc.times.back() == (arc.size() > 1 ? 1.0 : 0.0));
    for (std::size_t i = 1; i < arc.times.size(); ++i) CHECK(arc.times[i] > arc.times[i - 1]);

    for (std::size_t i = 0; i < arc.size(); ++i) {
      double lo = 2.0, hi = -1.0, sum = 0.0;
      std::size_t matched = 0;
      for (std::size_t t = i; t < i + w; ++t) {
        if (auto s = lex.lookup(stream.tokens[t], Dimension::Valence)) {
          lo = std::min(lo, *s);
          hi = std::max(hi, *s);
          sum += *s;
          ++matched;
        }
      }
      if (matched == 0) {
        CHECK(arc.states[i] == arc.states[i - 1]);
        continue;
      }
      // Direct window mean as an independent check of the prefix sums.
      CHECK(arc.states[i] == doctest::Approx(sum / matched).epsilon(1e-12));
      CHECK(arc.states[i] >= lo - 1e-12);
      CHECK(arc.states[i] <= hi + 1e-12);
    }

    // Dropping the first token drops the first state.
    if (n > w + 1) {
      SpeakerStream shifted = stream;
      shifted.tokens.erase(shifted.tokens.begin());
      shifted.source_offsets.erase(shifted.source_offsets.begin());
      const bool first_window_matches = std::any_of(shifted.tokens.begin(), shifted.tokens.begin() + w,
                                                    [&](const std::string& t) { return lex.find(t) != nullptr; });
      if (first_window_matches) {
        const auto tail = compute_arc(shifted, lex, Dimension::Valence, w);
        REQUIRE(tail.size() + 1 == arc.size());
        for (std::size_t i = 0; i < tail.size(); ++i) {
          CHECK(tail.states[i] == doctest::Approx(arc.states[i + 1]).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("arc is affine-equivariant in the lexicon scores") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const auto [lex, stream] = random_case(rng, 300);
    const double a = 0.2 + 0.7 * testing::unit(rng);
    const double b = (1.0 - a) * testing::unit(rng);
    std::vector<std::pair<std::string, ScoreTriple>> mapped;
    for (const auto& [key, s] : lex.entries()) mapped.push_back({key, {a * s.valence + b, s.arousal, s.dominance}});
    const auto lex2 = Lexicon::from_entries(mapped);
    const auto base = compute_arc(stream, lex, Dimension::Valence, 50);
    const auto moved = compute_arc(stream, lex2, Dimension::Valence, 50);
    REQUIRE(base.size() == moved.size());
    for (std::size_t i = 0; i < base.size(); ++i) CHECK(moved.states[i] == doctest::Approx(a * base.states[i] + b).epsilon(1e-12));
  }
}
