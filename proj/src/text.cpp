#include "sieve/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cwctype>
#include <locale.h>

#include "sieve/log.hpp"

namespace sieve {

namespace unicode {
namespace {

// glibc's C.UTF-8 locale carries the full Unicode character classes. When it
// is missing, non-ASCII code points outside the common punctuation blocks are
// treated as letters.
locale_t utf8_locale() {
  static const locale_t loc = [] {
    locale_t l = newlocale(LC_CTYPE_MASK, "C.UTF-8", static_cast<locale_t>(0));
    if (l == static_cast<locale_t>(0)) {
      l = newlocale(LC_CTYPE_MASK, "C.utf8", static_cast<locale_t>(0));
    }
    return l;
  }();
  return loc;
}

bool fallback_is_punct(char32_t cp) {
  return (cp >= 0x80 && cp <= 0xBF) || cp == 0xD7 || cp == 0xF7 ||
         (cp >= 0x2000 && cp <= 0x2BFF) || (cp >= 0x3000 && cp <= 0x303F) ||
         (cp >= 0xFE30 && cp <= 0xFE4F) || (cp >= 0xFF00 && cp <= 0xFF0F) ||
         cp == 0xFFFD;
}

}  // namespace

char32_t decode_utf8(std::string_view s, std::size_t& pos) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }
  int extra = 0;
  char32_t cp = 0;
  char32_t min = 0;
  if ((b0 & 0xE0) == 0xC0) {
    extra = 1;
    cp = b0 & 0x1F;
    min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    extra = 2;
    cp = b0 & 0x0F;
    min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    extra = 3;
    cp = b0 & 0x07;
    min = 0x10000;
  } else {
    ++pos;
    return 0xFFFD;
  }
  if (pos + extra >= s.size()) {
    ++pos;
    return 0xFFFD;
  }
  for (int k = 1; k <= extra; ++k) {
    const auto b = static_cast<unsigned char>(s[pos + k]);
    if ((b & 0xC0) != 0x80) {
      ++pos;
      return 0xFFFD;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    ++pos;
    return 0xFFFD;
  }
  pos += extra + 1;
  return cp;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::size_t length(std::string_view s) {
  std::size_t n = 0;
  for (std::size_t pos = 0; pos < s.size(); ++n) decode_utf8(s, pos);
  return n;
}

bool is_digit(char32_t cp) { return cp >= U'0' && cp <= U'9'; }

bool is_alnum(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z') || is_digit(cp);
  }
  if (cp == 0xFFFD) return false;
  if (locale_t loc = utf8_locale(); loc != static_cast<locale_t>(0)) {
    return iswalnum_l(static_cast<wint_t>(cp), loc) != 0;
  }
  return !fallback_is_punct(cp);
}

bool is_upper(char32_t cp) {
  if (cp < 0x80) return cp >= U'A' && cp <= U'Z';
  if (locale_t loc = utf8_locale(); loc != static_cast<locale_t>(0)) {
    return iswupper_l(static_cast<wint_t>(cp), loc) != 0;
  }
  return false;
}

bool is_space(char32_t cp) {
  return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' || cp == U'\f' ||
         cp == U'\v' || cp == 0xA0;
}

char32_t to_lower(char32_t cp) {
  if (cp < 0x80) return (cp >= U'A' && cp <= U'Z') ? cp + 32 : cp;
  if (locale_t loc = utf8_locale(); loc != static_cast<locale_t>(0)) {
    const auto lower = static_cast<char32_t>(towlower_l(static_cast<wint_t>(cp), loc));
    // Keep the mapping closed over alphanumerics so normalization is idempotent.
    if (lower != cp && is_alnum(lower) && !is_upper(lower)) return lower;
  }
  return cp;
}

}  // namespace unicode

namespace {

struct NamedEntity {
  std::string_view name;
  char32_t cp;
};

constexpr std::array<NamedEntity, 16> kNamedEntities{{
    {"amp", U'&'},     {"lt", U'<'},      {"gt", U'>'},       {"quot", U'"'},
    {"apos", U'\''},   {"nbsp", 0xA0},    {"copy", 0xA9},     {"reg", 0xAE},
    {"hellip", 0x2026}, {"mdash", 0x2014}, {"ndash", 0x2013}, {"lsquo", 0x2018},
    {"rsquo", 0x2019}, {"ldquo", 0x201C}, {"rdquo", 0x201D},  {"trade", 0x2122},
}};

bool ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Collapses whitespace (including U+00A0) to single spaces and trims.
std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (std::size_t pos = 0; pos < s.size();) {
    const std::size_t start = pos;
    const char32_t cp = unicode::decode_utf8(s, pos);
    if (unicode::is_space(cp)) {
      pending_space = true;
      continue;
    }
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    out.append(s.substr(start, pos - start));
  }
  return out;
}

}  // namespace

std::string decode_entities(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '&') {
      out.push_back(text[i++]);
      continue;
    }
    const std::size_t semi = text.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 12) {
      out.push_back(text[i++]);
      continue;
    }
    const std::string_view ref = text.substr(i + 1, semi - i - 1);
    bool decoded = false;
    if (ref.size() >= 2 && ref[0] == '#') {
      const bool hex = ref[1] == 'x' || ref[1] == 'X';
      const std::string_view digits = ref.substr(hex ? 2 : 1);
      char32_t cp = 0;
      bool ok = !digits.empty();
      for (char c : digits) {
        int v = -1;
        if (c >= '0' && c <= '9') v = c - '0';
        else if (hex && c >= 'a' && c <= 'f') v = c - 'a' + 10;
        else if (hex && c >= 'A' && c <= 'F') v = c - 'A' + 10;
        if (v < 0 || cp > 0x10FFFF) {
          ok = false;
          break;
        }
        cp = cp * (hex ? 16 : 10) + static_cast<char32_t>(v);
      }
      if (ok) {
        unicode::append_utf8(out, cp);
        decoded = true;
      }
    } else {
      for (const auto& e : kNamedEntities) {
        if (e.name == ref) {
          unicode::append_utf8(out, e.cp);
          decoded = true;
          break;
        }
      }
    }
    if (decoded) {
      i = semi + 1;
    } else {
      out.push_back(text[i++]);
    }
  }
  return out;
}

std::string strip_html(std::string_view html) {
  std::string without_tags;
  without_tags.reserve(html.size());
  std::size_t i = 0;
  while (i < html.size()) {
    if (html[i] == '<') {
      const std::size_t close = html.find('>', i + 1);
      if (close == std::string_view::npos) {
        log(LogLevel::Debug, "strip_html: unclosed '<', dropping the rest of the input");
        break;
      }
      without_tags.push_back(' ');
      i = close + 1;
    } else {
      without_tags.push_back(html[i++]);
    }
  }
  return collapse_whitespace(decode_entities(without_tags));
}

namespace {

constexpr std::array<std::string_view, 20> kAbbreviations{
    "e.g", "i.e", "eg", "ie", "etc", "vs", "cf", "al", "approx", "fig",
    "mr", "mrs", "ms", "dr", "prof", "inc", "ltd", "jr", "sr", "st"};

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }
bool is_closer(char c) { return c == ')' || c == ']' || c == '"' || c == '\''; }

// The whitespace-delimited word ending just before position end, with
// leading punctuation stripped and lowercased (ASCII only).
std::string word_before(std::string_view text, std::size_t end) {
  std::size_t begin = end;
  while (begin > 0 && !ascii_space(text[begin - 1])) --begin;
  while (begin < end && !std::isalnum(static_cast<unsigned char>(text[begin]))) ++begin;
  std::string word(text.substr(begin, end - begin));
  std::transform(word.begin(), word.end(), word.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return word;
}

void push_trimmed(std::vector<std::string>& out, std::string_view piece) {
  std::size_t b = 0;
  std::size_t e = piece.size();
  while (b < e && ascii_space(piece[b])) ++b;
  while (e > b && ascii_space(piece[e - 1])) --e;
  if (b < e) out.emplace_back(piece.substr(b, e - b));
}

}  // namespace

bool is_abbreviation(std::string_view word) {
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), word) !=
         kAbbreviations.end();
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  const std::size_t n = text.size();
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < n) {
    if (!is_terminator(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && is_terminator(text[j])) ++j;
    const bool single_period = text[i] == '.' && j == i + 1;
    while (j < n && is_closer(text[j])) ++j;
    if (j == n) {
      push_trimmed(out, text.substr(start, j - start));
      start = n;
      break;
    }
    if (ascii_space(text[j])) {
      std::size_t k = j;
      while (k < n && ascii_space(text[k])) ++k;
      bool boundary = (k == n);
      if (!boundary) {
        std::size_t pos = k;
        const char32_t next = unicode::decode_utf8(text, pos);
        boundary = unicode::is_upper(next) || unicode::is_digit(next);
      }
      if (boundary && single_period && is_abbreviation(word_before(text, i))) {
        boundary = false;
      }
      if (boundary) {
        push_trimmed(out, text.substr(start, j - start));
        start = k;
        i = k;
        continue;
      }
    }
    i = j;
  }
  if (start < n) push_trimmed(out, text.substr(start));
  return out;
}

CleanSentence normalize(std::string_view sentence, std::string origin_id) {
  CleanSentence result;
  result.origin_id = std::move(origin_id);
  std::string current;
  bool all_digits = true;
  auto flush = [&] {
    if (!current.empty() && !all_digits) {
      if (!result.text.empty()) result.text.push_back(' ');
      result.text += current;
      result.tokens.push_back(std::move(current));
    }
    current.clear();
    all_digits = true;
  };
  for (std::size_t pos = 0; pos < sentence.size();) {
    const char32_t cp = unicode::decode_utf8(sentence, pos);
    const char32_t lower = unicode::to_lower(cp);
    // Uppercase letters with no lowercase mapping are treated as symbols.
    if (unicode::is_alnum(cp) && !unicode::is_upper(lower)) {
      if (!unicode::is_digit(cp)) all_digits = false;
      unicode::append_utf8(current, lower);
    } else {
      flush();
    }
  }
  flush();
  result.char_len = unicode::length(result.text);
  return result;
}

std::vector<CleanSentence> preprocess_document(std::string_view html,
                                               const std::string& origin_id) {
  std::vector<CleanSentence> out;
  for (const auto& sentence : split_sentences(strip_html(html))) {
    CleanSentence clean = normalize(sentence, origin_id);
    if (!clean.tokens.empty()) out.push_back(std::move(clean));
  }
  return out;
}

}  // namespace sieve
