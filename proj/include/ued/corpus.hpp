#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ued {

enum class Gender { Female, Male, Other, Unknown };
enum class NarrationPerson { First, Third, Unknown };
enum class Category { Major, Intermediate, Minor };

std::string_view to_string(Gender gender);
std::string_view to_string(NarrationPerson person);
std::string_view to_string(Category category);
std::optional<Gender> parse_gender(std::string_view text);
std::optional<NarrationPerson> parse_narration_person(std::string_view text);
std::optional<Category> parse_category(std::string_view text);

struct Character {
  std::string id;
  std::string name;
  std::vector<std::string> aliases;
  Gender gender = Gender::Unknown;
  /// Set by categorize_characters.
  std::optional<Category> category;
};

/// One attributed span of quoted text. Consecutive rows that share an ordinal
/// are the parts of one interrupted or multi-paragraph quotation.
struct Quotation {
  std::string novel_id;
  /// Empty or '_'-prefixed ids mark dialogue without an identified speaker.
  std::string character_id;
  /// Code point offsets into the novel text, [span_start, span_end).
  std::size_t span_start = 0;
  std::size_t span_end = 0;
  std::string text;
  std::size_t ordinal = 0;

  bool attributed() const { return !character_id.empty() && character_id.front() != '_'; }
};

struct Novel {
  std::string id;
  std::string title;
  std::string author;
  Gender author_gender = Gender::Unknown;
  NarrationPerson narration_person = NarrationPerson::Unknown;
  std::string full_text;
  std::vector<Character> characters;
  /// Sorted by span_start after validation.
  std::vector<Quotation> quotations;
  /// Length of full_text in code points; set by validate_novel.
  std::size_t text_length = 0;

  const Character* find_character(std::string_view id) const;
};

struct Corpus {
  std::vector<Novel> novels;

  const Novel& novel(std::string_view id) const;
};

/// Loads a corpus root: optional `novel_meta.csv` plus one directory per novel
/// holding `novel_text.txt`, `quotation_info.csv` and `character_info.csv`.
Corpus load_corpus(const std::filesystem::path& root);

/// Checks every Quotation/Novel invariant, sorts quotations by span and fills
/// text_length and empty quotation texts. Throws ValidationError.
void validate_novel(Novel& novel);

/// Deterministic JSON rendering of the whole corpus.
std::string serialize(const Corpus& corpus);

// ---------------------------------------------------------------------------
// Speaker streams
// ---------------------------------------------------------------------------

struct Speaker {
  enum class Kind { WholeNovel, Narration, Dialogue, Character };

  Kind kind = Kind::WholeNovel;
  std::string character_id;

  static Speaker whole_novel() { return {Kind::WholeNovel, {}}; }
  static Speaker narration() { return {Kind::Narration, {}}; }
  /// All quoted text regardless of speaker.
  static Speaker dialogue() { return {Kind::Dialogue, {}}; }
  static Speaker character(std::string id) { return {Kind::Character, std::move(id)}; }

  bool is_meta() const { return kind != Kind::Character; }
  /// "novel", "narration", "dialogue" or the character id.
  std::string label() const;
  static Speaker from_label(std::string_view label);

  friend bool operator==(const Speaker&, const Speaker&) = default;
};

struct SpeakerStream {
  std::string novel_id;
  Speaker speaker;
  std::vector<std::string> tokens;
  /// Code point offset of each token in the novel text.
  std::vector<std::size_t> source_offsets;

  std::size_t size() const { return tokens.size(); }
};

struct NovelStreams {
  SpeakerStream whole_novel;
  SpeakerStream narration;
  SpeakerStream dialogue;
  /// One per character with at least one quotation, in character-list order.
  std::vector<SpeakerStream> characters;
  /// Tokens of quotations without an identified speaker.
  std::size_t unattributed_tokens = 0;

  /// Null when the speaker has no stream.
  const SpeakerStream* find(const Speaker& speaker) const;
};

NovelStreams segment_novel(const Novel& novel);

/// WholeNovel, Narration, then one stream per speaking character.
std::vector<SpeakerStream> build_speaker_streams(const Novel& novel);

SpeakerStream build_dialogue_stream(const Novel& novel);

// ---------------------------------------------------------------------------
// Character categories
// ---------------------------------------------------------------------------

enum class DialogueMeasure { Tokens, Quotations };

struct CategoryRule {
  /// Share of the novel's dialogue that makes a character major.
  double major_share = 0.10;
  std::size_t major_quotations = 100;
  /// Characters with fewer quotations than this (and not major) are minor.
  std::size_t minor_quotations = 35;
  DialogueMeasure measure = DialogueMeasure::Tokens;
};

/// Number of distinct quotations (ordinals) attributed to the character.
std::size_t quotation_count(const Novel& novel, std::string_view character_id);

Novel categorize_characters(Novel novel, const CategoryRule& rule = {});
Corpus categorize_corpus(Corpus corpus, const CategoryRule& rule = {});

}  // namespace ued
