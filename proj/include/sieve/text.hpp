#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace sieve {

// A sentence after cleaning: lowercase, HTML-free, with every character that
// is not a letter or digit replaced by a space and digit-only words dropped.
//
// Invariants: text == tokens joined by single spaces; char_len is the number
// of code points in text; every token is a maximal run of lowercase letters
// and digits that is not all digits.
struct CleanSentence {
  std::string text;
  std::vector<std::string> tokens;
  std::size_t char_len = 0;
  std::string origin_id;

  bool operator==(const CleanSentence&) const = default;
};

// Removes every <...> span (replaced by a space), decodes the remaining
// character entities, collapses whitespace runs to a single space and trims.
// A '<' with no closing '>' swallows the rest of the input.
std::string strip_html(std::string_view html);

// Rule-based sentence splitter. A run of '.', '!' or '?' (plus any closing
// quotes or brackets) ends a sentence when it is followed by the end of the
// text, or by whitespace and then an uppercase letter or a digit. A single
// '.' after a known abbreviation ("e.g", "etc", ...) never ends a sentence.
// Pieces are trimmed; empty pieces are dropped.
std::vector<std::string> split_sentences(std::string_view text);

bool is_abbreviation(std::string_view word);

CleanSentence normalize(std::string_view sentence, std::string origin_id = {});

// Full preprocessing of one HTML document body into sentences with at least
// one token.
std::vector<CleanSentence> preprocess_document(std::string_view html,
                                               const std::string& origin_id);

// Decodes XML/HTML character references. Unknown or malformed references
// are copied through verbatim.
std::string decode_entities(std::string_view text);

namespace unicode {

// Decodes one code point starting at pos and advances pos. Invalid sequences
// decode to U+FFFD and consume one byte.
char32_t decode_utf8(std::string_view s, std::size_t& pos);
void append_utf8(std::string& out, char32_t cp);
std::size_t length(std::string_view s);

bool is_alnum(char32_t cp);
bool is_upper(char32_t cp);
bool is_digit(char32_t cp);
bool is_space(char32_t cp);
char32_t to_lower(char32_t cp);

}  // namespace unicode

}  // namespace sieve
