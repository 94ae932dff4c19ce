#include "ued/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "ued/csv.hpp"
#include "ued/error.hpp"
#include "ued/lexicon.hpp"

namespace fs = std::filesystem;

namespace ued {

namespace {

std::string lower(std::string_view s) {
  std::string out;
  for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  while (!out.empty() && std::isspace(static_cast<unsigned char>(out.back()))) out.pop_back();
  while (!out.empty() && std::isspace(static_cast<unsigned char>(out.front()))) out.erase(out.begin());
  return out;
}

std::string trimmed(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

std::size_t parse_index(const std::string& field, std::string_view what, const std::string& source,
                        std::size_t line) {
  const std::string s = trimmed(field);
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ValidationError(source + ": invalid " + std::string(what) + " '" + field + "'", line);
  }
  return value;
}

bool is_space(char32_t c) {
  return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\f' || c == U'\v' || c == 0xA0 ||
         c == 0x2028 || c == 0x2029;
}

std::u32string normalize_whitespace(std::u32string_view text) {
  std::u32string out;
  bool pending_space = false;
  for (char32_t c : text) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(U' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::vector<std::string> split_aliases(const std::string& field) {
  std::vector<std::string> aliases;
  std::size_t start = 0;
  while (start <= field.size()) {
    auto pos = field.find(';', start);
    if (pos == std::string::npos) pos = field.size();
    auto alias = trimmed(std::string_view(field).substr(start, pos - start));
    if (!alias.empty()) aliases.push_back(std::move(alias));
    start = pos + 1;
  }
  return aliases;
}

bool reserved_label(std::string_view id) { return id == "novel" || id == "narration" || id == "dialogue"; }

struct NovelMeta {
  std::string id;
  std::string title;
  std::string author;
  Gender author_gender = Gender::Unknown;
  NarrationPerson narration_person = NarrationPerson::Unknown;
};

std::vector<NovelMeta> read_meta(const fs::path& root) {
  std::vector<NovelMeta> metas;
  const fs::path meta_path = root / "novel_meta.csv";
  if (fs::exists(meta_path)) {
    const auto table = csv::read_table(meta_path);
    const std::string src = meta_path.string();
    const auto c_id = table.column("novel_id", src);
    const auto c_title = table.find_column("title");
    const auto c_author = table.find_column("author");
    const auto c_gender = table.find_column("author_gender");
    const auto c_person = table.find_column("narration_person");
    std::set<std::string> seen;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const auto& row = table.rows[r];
      NovelMeta meta;
      meta.id = trimmed(row[c_id]);
      if (meta.id.empty()) throw ValidationError(src + ": empty novel_id", table.lines[r]);
      if (!seen.insert(meta.id).second) {
        throw ValidationError(src + ": duplicate novel_id '" + meta.id + "'", table.lines[r]);
      }
      meta.title = c_title ? trimmed(row[*c_title]) : meta.id;
      meta.author = c_author ? trimmed(row[*c_author]) : std::string();
      if (c_gender) {
        auto g = parse_gender(row[*c_gender]);
        if (!g) throw ValidationError(src + ": invalid author_gender '" + row[*c_gender] + "'", table.lines[r]);
        meta.author_gender = *g;
      }
      if (c_person) {
        auto p = parse_narration_person(row[*c_person]);
        if (!p) {
          throw ValidationError(src + ": invalid narration_person '" + row[*c_person] + "'", table.lines[r]);
        }
        meta.narration_person = *p;
      }
      metas.push_back(std::move(meta));
    }
    return metas;
  }

  std::vector<std::string> ids;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && fs::exists(entry.path() / "novel_text.txt")) {
      ids.push_back(entry.path().filename().string());
    }
  }
  std::sort(ids.begin(), ids.end());
  for (auto& id : ids) {
    NovelMeta meta;
    meta.id = id;
    meta.title = id;
    metas.push_back(std::move(meta));
  }
  return metas;
}

Novel load_novel(const fs::path& dir, const NovelMeta& meta) {
  Novel novel;
  novel.id = meta.id;
  novel.title = meta.title;
  novel.author = meta.author;
  novel.author_gender = meta.author_gender;
  novel.narration_person = meta.narration_person;

  const fs::path text_path = dir / "novel_text.txt";
  const fs::path quote_path = dir / "quotation_info.csv";
  const fs::path char_path = dir / "character_info.csv";
  for (const auto& p : {text_path, quote_path, char_path}) {
    if (!fs::exists(p)) throw IoError("novel '" + meta.id + "': missing file " + p.string());
  }
  novel.full_text = csv::read_file(text_path);

  {
    const auto table = csv::read_table(char_path);
    const std::string src = char_path.string();
    const auto c_id = table.column("character_id", src);
    const auto c_name = table.column("main_name", src);
    const auto c_alias = table.find_column("aliases");
    const auto c_gender = table.find_column("gender");
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const auto& row = table.rows[r];
      Character ch;
      ch.id = trimmed(row[c_id]);
      ch.name = trimmed(row[c_name]);
      if (c_alias) ch.aliases = split_aliases(row[*c_alias]);
      if (c_gender) {
        auto g = parse_gender(row[*c_gender]);
        if (!g) throw ValidationError(src + ": invalid gender '" + row[*c_gender] + "'", table.lines[r]);
        ch.gender = *g;
      }
      novel.characters.push_back(std::move(ch));
    }
  }

  {
    const auto table = csv::read_table(quote_path);
    const std::string src = quote_path.string();
    const auto c_ord = table.column("ordinal", src);
    const auto c_char = table.column("character_id", src);
    const auto c_start = table.column("span_start", src);
    const auto c_end = table.column("span_end", src);
    const auto c_text = table.find_column("quote_text");
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const auto& row = table.rows[r];
      Quotation q;
      q.novel_id = novel.id;
      q.ordinal = parse_index(row[c_ord], "ordinal", src, table.lines[r]);
      q.character_id = trimmed(row[c_char]);
      q.span_start = parse_index(row[c_start], "span_start", src, table.lines[r]);
      q.span_end = parse_index(row[c_end], "span_end", src, table.lines[r]);
      if (c_text) q.text = row[*c_text];
      novel.quotations.push_back(std::move(q));
    }
  }

  try {
    validate_novel(novel);
  } catch (const ValidationError& e) {
    throw ValidationError("novel '" + novel.id + "': " + e.what());
  }
  return novel;
}

}  // namespace

std::string_view to_string(Gender gender) {
  switch (gender) {
    case Gender::Female:
      return "F";
    case Gender::Male:
      return "M";
    case Gender::Other:
      return "O";
    case Gender::Unknown:
      return "U";
  }
  return "U";
}

std::string_view to_string(NarrationPerson person) {
  switch (person) {
    case NarrationPerson::First:
      return "first";
    case NarrationPerson::Third:
      return "third";
    case NarrationPerson::Unknown:
      return "unknown";
  }
  return "unknown";
}

std::string_view to_string(Category category) {
  switch (category) {
    case Category::Major:
      return "major";
    case Category::Intermediate:
      return "intermediate";
    case Category::Minor:
      return "minor";
  }
  return "minor";
}

std::optional<Gender> parse_gender(std::string_view text) {
  const auto s = lower(text);
  if (s == "f" || s == "female") return Gender::Female;
  if (s == "m" || s == "male") return Gender::Male;
  if (s == "o" || s == "other") return Gender::Other;
  if (s == "u" || s == "unknown" || s.empty()) return Gender::Unknown;
  return std::nullopt;
}

std::optional<NarrationPerson> parse_narration_person(std::string_view text) {
  const auto s = lower(text);
  if (s == "first" || s == "1" || s == "1st") return NarrationPerson::First;
  if (s == "third" || s == "3" || s == "3rd") return NarrationPerson::Third;
  if (s == "unknown" || s == "u" || s.empty()) return NarrationPerson::Unknown;
  return std::nullopt;
}

std::optional<Category> parse_category(std::string_view text) {
  const auto s = lower(text);
  if (s == "major") return Category::Major;
  if (s == "intermediate") return Category::Intermediate;
  if (s == "minor") return Category::Minor;
  return std::nullopt;
}

const Character* Novel::find_character(std::string_view id) const {
  for (const auto& ch : characters) {
    if (ch.id == id) return &ch;
  }
  return nullptr;
}

const Novel& Corpus::novel(std::string_view id) const {
  for (const auto& n : novels) {
    if (n.id == id) return n;
  }
  throw LookupError("unknown novel '" + std::string(id) + "'");
}

void validate_novel(Novel& novel) {
  std::set<std::string> ids;
  for (const auto& ch : novel.characters) {
    if (ch.id.empty()) throw ValidationError("character with empty id");
    if (ch.id.front() == '_') throw ValidationError("character id '" + ch.id + "' uses the reserved '_' prefix");
    if (reserved_label(ch.id)) throw ValidationError("character id '" + ch.id + "' is reserved");
    if (ch.name.empty()) throw ValidationError("character '" + ch.id + "' has an empty name");
    if (!ids.insert(ch.id).second) throw ValidationError("duplicate character id '" + ch.id + "'");
  }

  const std::u32string text = decode_utf8(novel.full_text);
  novel.text_length = text.size();

  for (auto& q : novel.quotations) {
    q.novel_id = novel.id;
    const std::string where = "quotation " + std::to_string(q.ordinal);
    if (!(q.span_start < q.span_end && q.span_end <= text.size())) {
      throw ValidationError(where + ": span [" + std::to_string(q.span_start) + ", " + std::to_string(q.span_end) +
                            ") outside text bounds (length " + std::to_string(text.size()) + ")");
    }
    if (q.attributed() && !ids.count(q.character_id)) {
      throw ValidationError(where + ": unknown character_id '" + q.character_id + "'");
    }
    const auto span = std::u32string_view(text).substr(q.span_start, q.span_end - q.span_start);
    const auto expected = normalize_whitespace(span);
    if (q.text.empty() || trimmed(q.text).empty()) {
      q.text = encode_utf8(expected);
    } else if (normalize_whitespace(decode_utf8(q.text)) != expected) {
      throw ValidationError(where + ": quote_text does not match the text at its span");
    }
  }

  std::stable_sort(novel.quotations.begin(), novel.quotations.end(),
                   [](const Quotation& a, const Quotation& b) { return a.span_start < b.span_start; });
  for (std::size_t i = 1; i < novel.quotations.size(); ++i) {
    const auto& prev = novel.quotations[i - 1];
    const auto& cur = novel.quotations[i];
    const std::string where = "quotation " + std::to_string(cur.ordinal);
    if (cur.span_start < prev.span_end) throw ValidationError(where + ": span overlaps quotation " +
                                                              std::to_string(prev.ordinal));
    if (cur.ordinal < prev.ordinal) throw ValidationError(where + ": ordinals not increasing with span_start");
    if (cur.ordinal == prev.ordinal && cur.character_id != prev.character_id) {
      throw ValidationError(where + ": parts of one quotation attributed to different characters");
    }
  }
}

Corpus load_corpus(const fs::path& root) {
  if (!fs::is_directory(root)) throw IoError("corpus root is not a directory: " + root.string());
  Corpus corpus;
  for (const auto& meta : read_meta(root)) {
    const fs::path dir = root / meta.id;
    if (!fs::is_directory(dir)) throw IoError("novel '" + meta.id + "': missing directory " + dir.string());
    corpus.novels.push_back(load_novel(dir, meta));
  }
  return corpus;
}

std::string serialize(const Corpus& corpus) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& novel : corpus.novels) {
    nlohmann::ordered_json n;
    n["id"] = novel.id;
    n["title"] = novel.title;
    n["author"] = novel.author;
    n["author_gender"] = to_string(novel.author_gender);
    n["narration_person"] = to_string(novel.narration_person);
    n["text_length"] = novel.text_length;
    n["full_text"] = novel.full_text;
    auto& chars = n["characters"] = nlohmann::ordered_json::array();
    for (const auto& ch : novel.characters) {
      nlohmann::ordered_json c;
      c["id"] = ch.id;
      c["name"] = ch.name;
      c["aliases"] = ch.aliases;
      c["gender"] = to_string(ch.gender);
      c["category"] = ch.category ? nlohmann::ordered_json(to_string(*ch.category)) : nlohmann::ordered_json();
      chars.push_back(std::move(c));
    }
    auto& quotes = n["quotations"] = nlohmann::ordered_json::array();
    for (const auto& q : novel.quotations) {
      quotes.push_back({{"ordinal", q.ordinal},
                        {"character_id", q.character_id},
                        {"span_start", q.span_start},
                        {"span_end", q.span_end},
                        {"text", q.text}});
    }
    out.push_back(std::move(n));
  }
  return out.dump(1);
}

// ---------------------------------------------------------------------------

std::string Speaker::label() const {
  switch (kind) {
    case Kind::WholeNovel:
      return "novel";
    case Kind::Narration:
      return "narration";
    case Kind::Dialogue:
      return "dialogue";
    case Kind::Character:
      return character_id;
  }
  return character_id;
}

Speaker Speaker::from_label(std::string_view label) {
  if (label == "novel") return whole_novel();
  if (label == "narration") return narration();
  if (label == "dialogue") return dialogue();
  return character(std::string(label));
}

const SpeakerStream* NovelStreams::find(const Speaker& speaker) const {
  switch (speaker.kind) {
    case Speaker::Kind::WholeNovel:
      return &whole_novel;
    case Speaker::Kind::Narration:
      return &narration;
    case Speaker::Kind::Dialogue:
      return &dialogue;
    case Speaker::Kind::Character:
      for (const auto& s : characters) {
        if (s.speaker.character_id == speaker.character_id) return &s;
      }
  }
  return nullptr;
}

NovelStreams segment_novel(const Novel& novel) {
  NovelStreams streams;
  streams.whole_novel = {novel.id, Speaker::whole_novel(), {}, {}};
  streams.narration = {novel.id, Speaker::narration(), {}, {}};
  streams.dialogue = {novel.id, Speaker::dialogue(), {}, {}};

  std::unordered_map<std::string, SpeakerStream> by_character;
  const std::u32string text = decode_utf8(novel.full_text);
  const std::u32string_view view(text);

  auto append = [](SpeakerStream& stream, const std::vector<Token>& tokens) {
    for (const auto& t : tokens) {
      stream.tokens.push_back(t.text);
      stream.source_offsets.push_back(t.offset);
    }
  };

  std::size_t cursor = 0;
  for (const auto& q : novel.quotations) {
    if (q.span_start > cursor) {
      const auto gap = tokenize_code_points(view.substr(cursor, q.span_start - cursor), cursor);
      append(streams.whole_novel, gap);
      append(streams.narration, gap);
    }
    const auto spoken = tokenize_code_points(view.substr(q.span_start, q.span_end - q.span_start), q.span_start);
    append(streams.whole_novel, spoken);
    append(streams.dialogue, spoken);
    if (q.attributed()) {
      auto& s = by_character[q.character_id];
      append(s, spoken);
    } else {
      streams.unattributed_tokens += spoken.size();
    }
    cursor = q.span_end;
  }
  if (cursor < view.size()) {
    const auto tail = tokenize_code_points(view.substr(cursor), cursor);
    append(streams.whole_novel, tail);
    append(streams.narration, tail);
  }

  for (const auto& ch : novel.characters) {
    auto it = by_character.find(ch.id);
    if (it == by_character.end()) continue;
    SpeakerStream s = std::move(it->second);
    s.novel_id = novel.id;
    s.speaker = Speaker::character(ch.id);
    streams.characters.push_back(std::move(s));
  }
  return streams;
}

std::vector<SpeakerStream> build_speaker_streams(const Novel& novel) {
  auto streams = segment_novel(novel);
  std::vector<SpeakerStream> out;
  out.reserve(streams.characters.size() + 2);
  out.push_back(std::move(streams.whole_novel));
  out.push_back(std::move(streams.narration));
  for (auto& s : streams.characters) out.push_back(std::move(s));
  return out;
}

SpeakerStream build_dialogue_stream(const Novel& novel) { return std::move(segment_novel(novel).dialogue); }

std::size_t quotation_count(const Novel& novel, std::string_view character_id) {
  std::set<std::size_t> ordinals;
  for (const auto& q : novel.quotations) {
    if (q.character_id == character_id) ordinals.insert(q.ordinal);
  }
  return ordinals.size();
}

Novel categorize_characters(Novel novel, const CategoryRule& rule) {
  std::map<std::string, std::set<std::size_t>> ordinals;
  std::set<std::size_t> all_ordinals;
  for (const auto& q : novel.quotations) {
    all_ordinals.insert(q.ordinal);
    if (q.attributed()) ordinals[q.character_id].insert(q.ordinal);
  }

  std::map<std::string, std::size_t> volume;
  std::size_t total = 0;
  if (rule.measure == DialogueMeasure::Tokens) {
    const auto streams = segment_novel(novel);
    total = streams.dialogue.size();
    for (const auto& s : streams.characters) volume[s.speaker.character_id] = s.size();
  } else {
    total = all_ordinals.size();
    for (const auto& [id, ords] : ordinals) volume[id] = ords.size();
  }

  for (auto& ch : novel.characters) {
    const auto quotes = ordinals.count(ch.id) ? ordinals[ch.id].size() : 0;
    const auto own = volume.count(ch.id) ? volume[ch.id] : 0;
    const bool by_share =
        total > 0 && own > 0 &&
        static_cast<double>(own) >= rule.major_share * static_cast<double>(total) * (1.0 - 1e-12);
    if (by_share || quotes >= rule.major_quotations) {
      ch.category = Category::Major;
    } else if (quotes < rule.minor_quotations) {
      ch.category = Category::Minor;
    } else {
      ch.category = Category::Intermediate;
    }
  }
  return novel;
}

Corpus categorize_corpus(Corpus corpus, const CategoryRule& rule) {
  for (auto& novel : corpus.novels) novel = categorize_characters(std::move(novel), rule);
  return corpus;
}

}  // namespace ued
