// Command-line front end: emotion arcs, UED metrics, arc correlations and
// group statistics for a speaker-attributed novel corpus.

#include <CLI11.hpp>
#include <iostream>

#include "ued/error.hpp"
#include "ued/pipeline.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Utterance emotion dynamics for speaker-attributed novels"};
  app.require_subcommand(1);

  ued::RunConfig config;
  std::string dims = "VAD";
  std::string fallback = "none";
  std::string align_mode = "sliding";
  std::string rate = "inclusive";
  std::string measure = "tokens";
  std::string category = "all";
  std::string t_test = "welch";
  std::string scope_name;
  bool skip_arcs = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--corpus", config.corpus_path, "Corpus root directory")->required();
    cmd->add_option("--lexicon", config.lexicon_path, "Word-VAD lexicon (TSV)")->required();
    cmd->add_option("--out", config.output_dir, "Output directory")->capture_default_str();
    cmd->add_option("--dims", dims, "Dimensions, any of V, A, D (e.g. VA)")->capture_default_str();
    cmd->add_option("--window", config.window_size, "Rolling window size in tokens")->capture_default_str();
    cmd->add_option("--min-tokens", config.min_tokens, "Speakers with fewer tokens get no arc")->capture_default_str();
    cmd->add_option("--bin-width", config.initial_bin_width, "Initial alignment bin width")->capture_default_str();
    cmd->add_option("--alpha", config.alpha, "FDR level for Benjamini-Hochberg")->capture_default_str();
    cmd->add_option("--fallback", fallback, "Short speakers: none | single-window")
        ->check(CLI::IsMember({"none", "single-window"}))
        ->capture_default_str();
    cmd->add_option("--align-mode", align_mode, "Alignment bins: sliding | partition")
        ->check(CLI::IsMember({"sliding", "partition"}))
        ->capture_default_str();
    cmd->add_option("--rate-convention", rate, "Rise/recovery step count: inclusive | exclusive")
        ->check(CLI::IsMember({"inclusive", "exclusive"}))
        ->capture_default_str();
    cmd->add_option("--dialogue-measure", measure, "Major-character share measured in: tokens | quotations")
        ->check(CLI::IsMember({"tokens", "quotations"}))
        ->capture_default_str();
    cmd->add_option("--major-share", config.category_rule.major_share, "Dialogue share that makes a character major")
        ->capture_default_str();
    cmd->add_option("--major-quotes", config.category_rule.major_quotations, "Quotations that make a character major")
        ->capture_default_str();
    cmd->add_option("--minor-quotes", config.category_rule.minor_quotations,
                    "Characters with fewer quotations are minor")
        ->capture_default_str();
    cmd->add_option("--threads", config.threads, "Worker threads (0 = all cores)")->capture_default_str();
  };

  auto* arcs = app.add_subcommand("arcs", "Emotion arcs as CSV and SVG charts");
  auto* ued_cmd = app.add_subcommand("ued", "Per-speaker UED metrics and aggregate tables");
  auto* correlate = app.add_subcommand("correlate", "Aligned arc correlations");
  auto* groups = app.add_subcommand("groups", "Gender group tests, BH correction and two-way ANOVA");
  auto* outliers = app.add_subcommand("outliers", "IQR outliers per speaker type");
  auto* report = app.add_subcommand("report", "Run every analysis");
  for (auto* cmd : {arcs, ued_cmd, correlate, groups, outliers, report}) add_common(cmd);
  ued_cmd->add_option("--category", category, "Summary rows for: all | major | intermediate | minor")
      ->check(CLI::IsMember({"all", "major", "intermediate", "minor"}))
      ->capture_default_str();
  correlate->add_option("--scope", scope_name, "narr-dial | narr-major | major-within | major-across")
      ->check(CLI::IsMember({"narr-dial", "narr-major", "major-within", "major-across"}))
      ->required();
  for (auto* cmd : {groups, report}) {
    cmd->add_option("--t-test", t_test, "welch | pooled")->check(CLI::IsMember({"welch", "pooled"}))
        ->capture_default_str();
  }
  report->add_flag("--skip-arcs", skip_arcs, "Do not write per-arc CSV/SVG files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    config.dimensions.clear();
    for (char c : dims) {
      auto dim = ued::parse_dimension(std::string(1, c));
      if (!dim) throw ued::ArgumentError("unknown dimension '" + std::string(1, c) + "' in --dims");
      if (std::find(config.dimensions.begin(), config.dimensions.end(), *dim) == config.dimensions.end()) {
        config.dimensions.push_back(*dim);
      }
    }
    config.fallback = fallback == "single-window" ? ued::Fallback::SingleWindow : ued::Fallback::None;
    config.align_mode = align_mode == "partition" ? ued::AlignMode::Partition : ued::AlignMode::SlidingWindow;
    config.rate_convention =
        rate == "exclusive" ? ued::RateConvention::ExclusiveSteps : ued::RateConvention::InclusiveSteps;
    config.category_rule.measure =
        measure == "quotations" ? ued::DialogueMeasure::Quotations : ued::DialogueMeasure::Tokens;
    if (category != "all") config.category_filter = ued::parse_category(category);
    config.pooled_t_test = t_test == "pooled";

    const auto ws = ued::Workspace::load(config);
    if (arcs->parsed()) ued::cmd_arcs(ws);
    if (ued_cmd->parsed()) ued::cmd_ued(ws);
    if (correlate->parsed()) ued::cmd_correlate(ws, *ued::parse_scope(scope_name));
    if (groups->parsed()) ued::cmd_groups(ws);
    if (outliers->parsed()) ued::cmd_outliers(ws);
    if (report->parsed()) ued::cmd_report(ws, !skip_arcs);
    ued::seal_run(config);
  } catch (const ued::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ued::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return 0;
}
