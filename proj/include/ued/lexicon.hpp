#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ued {

enum class Dimension { Valence, Arousal, Dominance };

inline constexpr std::array<Dimension, 3> kAllDimensions{Dimension::Valence, Dimension::Arousal,
                                                         Dimension::Dominance};

std::string_view to_string(Dimension dim);
/// Accepts "V"/"A"/"D" or the full names, case-insensitive.
std::optional<Dimension> parse_dimension(std::string_view text);

struct ScoreTriple {
  double valence = 0.0;
  double arousal = 0.0;
  double dominance = 0.0;

  double get(Dimension dim) const {
    switch (dim) {
      case Dimension::Valence:
        return valence;
      case Dimension::Arousal:
        return arousal;
      case Dimension::Dominance:
        return dominance;
    }
    return valence;
  }
};

// ---------------------------------------------------------------------------
// Tokenizer shared by lexicon keys and corpus text.
//
// Tokens are maximal runs of letters, lowercased. An apostrophe is kept only
// between two letters ("don't"); curly apostrophes are folded to '\''.
// Everything else (digits, punctuation, hyphens, whitespace) separates tokens.
// ---------------------------------------------------------------------------

struct Token {
  std::string text;
  /// Code point offset of the first character of the token.
  std::size_t offset = 0;
};

std::vector<std::string> tokenize(std::string_view utf8_text);

/// Tokenizes already decoded text; offsets are `base_offset` + position in `text`.
std::vector<Token> tokenize_code_points(std::u32string_view text, std::size_t base_offset = 0);

/// Decodes UTF-8; throws ValidationError on malformed input.
std::u32string decode_utf8(std::string_view text);
std::string encode_utf8(std::u32string_view text);

class Lexicon {
 public:
  Lexicon() = default;

  /// Loads a tab-separated `word valence arousal dominance` file. A header row
  /// is detected by a non-numeric second field on the first line.
  static Lexicon load(const std::filesystem::path& path);
  static Lexicon parse(std::string_view contents, std::string_view source = "<lexicon>");
  static Lexicon from_entries(const std::vector<std::pair<std::string, ScoreTriple>>& entries);

  std::optional<double> lookup(const std::string& token, Dimension dim) const {
    auto it = entries_.find(token);
    if (it == entries_.end()) return std::nullopt;
    return it->second.get(dim);
  }

  const ScoreTriple* find(const std::string& token) const {
    auto it = entries_.find(token);
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::size_t size() const noexcept { return entries_.size(); }
  /// Rows whose key repeated an earlier one (last wins).
  std::size_t duplicate_count() const noexcept { return duplicates_; }
  /// Rows whose key is not a single token (multi-word, hyphenated, numeric).
  std::size_t skipped_count() const noexcept { return skipped_; }

  const std::unordered_map<std::string, ScoreTriple>& entries() const noexcept { return entries_; }

 private:
  void insert(const std::string& word, const ScoreTriple& scores);

  std::unordered_map<std::string, ScoreTriple> entries_;
  std::size_t duplicates_ = 0;
  std::size_t skipped_ = 0;
};

}  // namespace ued
