#include "ued/lexicon.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "ued/csv.hpp"
#include "ued/error.hpp"

namespace ued {

namespace {

bool is_letter(char32_t c) {
  if ((c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z')) return true;
  // Latin-1 Supplement and Latin Extended-A/B letters.
  return c >= 0xC0 && c <= 0x24F && c != 0xD7 && c != 0xF7;
}

bool is_apostrophe(char32_t c) { return c == U'\'' || c == 0x2019 || c == 0x02BC; }

char32_t fold_case(char32_t c) {
  if (c >= U'A' && c <= U'Z') return c + 32;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 0x20;
  return c;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find('\t', start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

}  // namespace

std::string_view to_string(Dimension dim) {
  switch (dim) {
    case Dimension::Valence:
      return "valence";
    case Dimension::Arousal:
      return "arousal";
    case Dimension::Dominance:
      return "dominance";
  }
  return "valence";
}

std::optional<Dimension> parse_dimension(std::string_view text) {
  std::string lower;
  for (char c : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "v" || lower == "valence") return Dimension::Valence;
  if (lower == "a" || lower == "arousal") return Dimension::Arousal;
  if (lower == "d" || lower == "dominance") return Dimension::Dominance;
  return std::nullopt;
}

std::u32string decode_utf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const auto b0 = static_cast<unsigned char>(text[i]);
    std::size_t len = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      len = 1;
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    } else {
      throw ValidationError("invalid UTF-8 lead byte at byte offset " + std::to_string(i));
    }
    if (i + len > text.size()) throw ValidationError("truncated UTF-8 sequence at byte offset " + std::to_string(i));
    for (std::size_t k = 1; k < len; ++k) {
      const auto b = static_cast<unsigned char>(text[i + k]);
      if ((b & 0xC0) != 0x80) {
        throw ValidationError("invalid UTF-8 continuation byte at byte offset " + std::to_string(i + k));
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    const bool overlong = (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000);
    if (overlong || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      throw ValidationError("invalid UTF-8 code point at byte offset " + std::to_string(i));
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

std::string encode_utf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t c : text) {
    if (c < 0x80) {
      out.push_back(static_cast<char>(c));
    } else if (c < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (c >> 6)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else if (c < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (c >> 12)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (c >> 18)));
      out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
  }
  return out;
}

std::vector<Token> tokenize_code_points(std::u32string_view text, std::size_t base_offset) {
  std::vector<Token> tokens;
  std::u32string current;
  std::size_t start = 0;

  auto flush = [&] {
    if (!current.empty()) {
      tokens.push_back(Token{encode_utf8(current), base_offset + start});
      current.clear();
    }
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char32_t c = text[i];
    if (is_letter(c)) {
      if (current.empty()) start = i;
      current.push_back(fold_case(c));
    } else if (is_apostrophe(c) && !current.empty() && i + 1 < text.size() && is_letter(text[i + 1])) {
      current.push_back(U'\'');
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

std::vector<std::string> tokenize(std::string_view utf8_text) {
  std::vector<std::string> out;
  for (auto& token : tokenize_code_points(decode_utf8(utf8_text))) out.push_back(std::move(token.text));
  return out;
}

void Lexicon::insert(const std::string& word, const ScoreTriple& scores) {
  auto tokens = tokenize(word);
  if (tokens.size() != 1) {
    ++skipped_;
    return;
  }
  auto [it, inserted] = entries_.insert_or_assign(std::move(tokens.front()), scores);
  if (!inserted) ++duplicates_;
}

Lexicon Lexicon::parse(std::string_view contents, std::string_view source) {
  Lexicon lexicon;
  std::size_t line_no = 0;
  bool first_content_line = true;
  std::size_t pos = 0;
  if (contents.substr(0, 3) == "\xEF\xBB\xBF") pos = 3;

  while (pos <= contents.size()) {
    auto eol = contents.find('\n', pos);
    if (eol == std::string_view::npos) eol = contents.size();
    std::string_view line = contents.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) {
      if (eol == contents.size()) break;
      continue;
    }

    const auto fields = split_tabs(line);
    const bool header_candidate = first_content_line;
    first_content_line = false;
    if (fields.size() < 4) {
      if (header_candidate && fields.size() >= 2 && !parse_number(fields[1])) continue;
      throw ValidationError(std::string(source) + ": expected 4 tab-separated fields", line_no);
    }
    if (header_candidate && !parse_number(fields[1])) continue;

    std::array<double, 3> scores{};
    for (std::size_t k = 0; k < 3; ++k) {
      auto value = parse_number(fields[k + 1]);
      if (!value) {
        throw ValidationError(std::string(source) + ": non-numeric score '" + std::string(fields[k + 1]) + "'",
                              line_no);
      }
      if (!(*value >= 0.0 && *value <= 1.0)) {
        throw ValidationError(std::string(source) + ": score " + std::string(trim(fields[k + 1])) +
                                  " outside [0,1]",
                              line_no);
      }
      scores[k] = *value;
    }
    try {
      lexicon.insert(std::string(trim(fields[0])), ScoreTriple{scores[0], scores[1], scores[2]});
    } catch (const ValidationError& e) {
      throw ValidationError(std::string(source) + ": " + e.what(), line_no);
    }
    if (eol == contents.size()) break;
  }
  return lexicon;
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
  return parse(csv::read_file(path), path.string());
}

Lexicon Lexicon::from_entries(const std::vector<std::pair<std::string, ScoreTriple>>& entries) {
  Lexicon lexicon;
  for (const auto& [word, scores] : entries) {
    for (double s : {scores.valence, scores.arousal, scores.dominance}) {
      if (!(s >= 0.0 && s <= 1.0)) throw ValidationError("lexicon score outside [0,1] for '" + word + "'");
    }
    lexicon.insert(word, scores);
  }
  return lexicon;
}

}  // namespace ued
