#include <doctest.h>

#include <filesystem>
#include <map>

#include <json.hpp>

#include "synthetic.hpp"
#include "ued/csv.hpp"
#include "ued/error.hpp"
#include "ued/pipeline.hpp"

using namespace ued;
namespace fs = std::filesystem;

namespace {

struct Inputs {
  fs::path root;

  explicit Inputs(const std::string& name, const std::vector<testing::SyntheticNovel>& spec) {
    root = fs::temp_directory_path() / ("ued_pipeline_" + name);
    fs::remove_all(root);
    testing::write_synthetic_corpus(root / "corpus", spec);
    testing::write_synthetic_lexicon(root / "lexicon.tsv");
  }
  ~Inputs() { fs::remove_all(root); }

  RunConfig config(const std::string& out) const {
    RunConfig c;
    c.corpus_path = root / "corpus";
    c.lexicon_path = root / "lexicon.tsv";
    c.output_dir = root / out;
    c.window_size = 50;
    c.min_tokens = 50;
    return c;
  }
};

/// Relative path -> contents for every file under `dir`.
std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file()) files[fs::relative(entry.path(), dir).generic_string()] = csv::read_file(entry.path());
  }
  return files;
}

csv::Table table(const fs::path& path) { return csv::read_table(path); }

}  // namespace

TEST_CASE("arcs: one CSV per novel with a row per state") {
  const Inputs in("arcs", {testing::two_novel_spec()[0]});
  auto config = in.config("out");
  config.dimensions = {Dimension::Valence};
  const auto ws = Workspace::load(config);
  cmd_arcs(ws);

  const auto t = table(config.output_dir / "arcs" / "GardenNovel.csv");
  std::map<std::string, std::size_t> rows_per_speaker;
  for (const auto& row : t.rows) ++rows_per_speaker[row[1]];
  const auto streams = segment_novel(ws.corpus().novels[0]);
  CHECK(rows_per_speaker["novel"] == streams.whole_novel.size() - 50 + 1);
  CHECK(rows_per_speaker["narration"] == streams.narration.size() - 50 + 1);
  for (const auto& s : streams.characters) {
    if (s.size() >= 50) CHECK(rows_per_speaker[s.speaker.character_id] == s.size() - 50 + 1);
  }
  CHECK(rows_per_speaker.count("g4") == 0);
  CHECK(fs::exists(config.output_dir / "arcs" / "svg" / "GardenNovel" / "narration_valence.svg"));
  CHECK(fs::exists(config.output_dir / "arcs" / "svg" / "GardenNovel" / "g1_valence.svg"));
}

TEST_CASE("arcs: an enormous min_tokens leaves only the meta-speakers") {
  const Inputs in("min_tokens", {testing::two_novel_spec()[0]});
  auto config = in.config("out");
  config.dimensions = {Dimension::Valence};
  config.min_tokens = 1'000'000'000;
  cmd_arcs(Workspace::load(config));
  std::map<std::string, std::size_t> speakers;
  for (const auto& row : table(config.output_dir / "arcs" / "GardenNovel.csv").rows) ++speakers[row[1]];
  CHECK(speakers.size() == 2);
  CHECK(speakers.count("novel") == 1);
  CHECK(speakers.count("narration") == 1);
}

TEST_CASE("ued: summary rows, filters and aggregate tables") {
  const Inputs in("ued", testing::two_novel_spec());
  auto config = in.config("out");
  const auto ws = Workspace::load(config);
  cmd_ued(ws);

  const auto summary = table(config.output_dir / "ued" / "ued_summary.csv");
  CHECK(summary.header.size() == 10 + 14 + 2);
  CHECK(summary.rows.size() == 3 * ws.summaries(Dimension::Valence).size());
  const auto mean_col = summary.column("emo_mean", "test");
  const auto low_col = summary.column("emo_low_peak_dist", "test");
  const auto low_count = summary.column("low_count", "test");
  for (const auto& row : summary.rows) {
    CHECK_FALSE(row[mean_col].empty());
    CHECK(row[low_col].empty() == (row[low_count] == "0"));
  }

  const auto counts = table(config.output_dir / "ued" / "speaker_counts.csv");
  REQUIRE(counts.rows.size() == 5);
  CHECK(counts.rows[0][0] == "novel");
  CHECK(counts.rows[0][1] == "2");

  for (const char* dim : {"valence", "arousal", "dominance"}) {
    const auto agg = table(config.output_dir / "ued" / (std::string("ued_table_") + dim + ".csv"));
    CHECK(agg.rows.size() == 14);
    CHECK(agg.header.size() == 7);
    CHECK(fs::exists(config.output_dir / "ued" / (std::string("ued_table_") + dim + "_pooled.csv")));
  }

  auto major_only = in.config("major");
  major_only.dimensions = {Dimension::Valence};
  major_only.category_filter = Category::Major;
  const auto ws2 = Workspace::load(major_only);
  cmd_ued(ws2);
  std::size_t majors_with_arcs = 0;
  for (const auto& s : ws2.summaries(Dimension::Valence)) {
    majors_with_arcs += s.character && s.character->category == Category::Major;
  }
  const auto filtered = table(major_only.output_dir / "ued" / "ued_summary.csv");
  CHECK(filtered.rows.size() == majors_with_arcs);
  for (const auto& row : filtered.rows) CHECK(row[4] == "major");
}

TEST_CASE("ued: an empty corpus writes header-only tables") {
  const Inputs in("empty", {});
  auto config = in.config("out");
  cmd_ued(Workspace::load(config));
  const auto summary = table(config.output_dir / "ued" / "ued_summary.csv");
  CHECK(summary.rows.empty());
  CHECK(summary.header.front() == "novel_id");
}

TEST_CASE("correlate: scopes with fewer than two arcs are an error") {
  const Inputs in("correlate", {testing::SyntheticNovel{"Solo", 'F', {{"x1", "Xan", 'F', 120}, {"x2", "Yul", 'M', 5}}, 400, 2}});
  auto config = in.config("out");
  config.dimensions = {Dimension::Valence};
  const auto ws = Workspace::load(config);
  CHECK_THROWS_AS(cmd_correlate(ws, Scope::MajorAcross), ArgumentError);
  cmd_correlate(ws, Scope::NarrationDialogue);
  const auto rows = table(config.output_dir / "correlate" / "narr-dial_correlations.csv");
  CHECK(rows.rows.size() == 1);
  const auto hist = table(config.output_dir / "correlate" / "narr-dial_histogram.csv");
  CHECK(hist.rows.size() == 20);
  const auto summary = table(config.output_dir / "correlate" / "narr-dial_summary.csv");
  CHECK(summary.rows[0][1] == "ALL");
}

TEST_CASE("groups and outliers produce their reports") {
  const Inputs in("groups", testing::four_novel_spec());
  auto config = in.config("out");
  config.dimensions = {Dimension::Valence, Dimension::Arousal};
  const auto ws = Workspace::load(config);
  cmd_groups(ws);
  cmd_outliers(ws);

  const auto speaker = table(config.output_dir / "groups" / "speaker_gender.csv");
  REQUIRE_FALSE(speaker.rows.empty());
  const auto p_raw = speaker.column("p_raw", "test");
  const auto p_adj = speaker.column("p_adjusted", "test");
  for (const auto& row : speaker.rows) CHECK(std::stod(row[p_adj]) >= std::stod(row[p_raw]));
  CHECK(fs::exists(config.output_dir / "groups" / "author_gender.csv"));

  const auto anova = table(config.output_dir / "groups" / "anova.csv");
  CHECK(anova.rows.size() % 3 == 0);
  const auto cells = table(config.output_dir / "groups" / "cell_means.csv");
  CHECK(cells.rows.size() == 2 * 14 * 4);

  const auto fences = table(config.output_dir / "outliers" / "fences.csv");
  REQUIRE_FALSE(fences.rows.empty());
  for (const auto& row : fences.rows) CHECK(std::stoul(row[3]) >= 4);
  CHECK(fs::exists(config.output_dir / "outliers" / "outliers.csv"));
}

TEST_CASE("report runs are byte-identical and echo their configuration") {
  const Inputs in("determinism", testing::two_novel_spec());
  auto a = in.config("run_a");
  auto b = in.config("run_b");
  b.threads = 1;
  cmd_report(Workspace::load(a));
  seal_run(a);
  cmd_report(Workspace::load(b));
  seal_run(b);
  const auto sa = snapshot(a.output_dir);
  const auto sb = snapshot(b.output_dir);
  CHECK(sa.size() > 20);
  REQUIRE(sa.size() == sb.size());
  for (const auto& [path, contents] : sa) {
    // run_config.json names the output directory's inputs, which are shared.
    CHECK_MESSAGE(sb.at(path) == contents, path);
  }
  const auto config = nlohmann::json::parse(sa.at("run_config.json"));
  CHECK(config["window_size"] == 50);
  CHECK(config["align_mode"] == "sliding");
  CHECK(sa.at("MANIFEST.tsv").find("ued/ued_summary.csv\t") != std::string::npos);
}

TEST_CASE("configuration validation") {
  RunConfig c;
  CHECK_NOTHROW(c.validate());
  c.window_size = 0;
  CHECK_THROWS_AS(c.validate(), ArgumentError);
  c = {};
  c.initial_bin_width = 1.0;
  CHECK_THROWS_AS(c.validate(), ArgumentError);
  c = {};
  c.dimensions.clear();
  CHECK_THROWS_AS(c.validate(), ArgumentError);
}

TEST_CASE("file stems are filesystem-safe") {
  CHECK(file_stem("narration") == "narration");
  CHECK(file_stem("a/b c") == "a_b_c");
  CHECK(file_stem("..") == "_..");
}
