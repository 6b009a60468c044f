#include <doctest.h>

#include "sieve/text.hpp"

using namespace sieve;

namespace {

std::vector<std::string> tokens_of(std::string_view s) { return normalize(s).tokens; }

}  // namespace

TEST_CASE("strip_html removes tags and keeps inner text") {
  CHECK(strip_html("<p>use <code>malloc</code></p>") == "use malloc");
  CHECK(strip_html("<pre><code>int x = 1;\n</code></pre>") == "int x = 1;");
  CHECK(strip_html("a<br/>b") == "a b");
}

TEST_CASE("strip_html decodes entities after tag removal") {
  CHECK(strip_html("a &amp; b") == "a & b");
  CHECK(strip_html("&lt;p&gt;") == "<p>");
  CHECK(strip_html("x&nbsp;&nbsp;y") == "x y");
  CHECK(strip_html("&#65;&#x42;") == "AB");
  CHECK(strip_html("&bogus; stays") == "&bogus; stays");
}

TEST_CASE("strip_html drops the rest of the input after an unclosed '<'") {
  CHECK(strip_html("x < y and z") == "x");
  CHECK(strip_html("<") == "");
  CHECK(strip_html("ok <b>bold</b> then <i") == "ok bold then");
}

TEST_CASE("strip_html collapses whitespace") {
  CHECK(strip_html("  a \t\n b  ") == "a b");
  CHECK(strip_html("") == "");
}

TEST_CASE("split_sentences on terminators followed by capitals or digits") {
  using V = std::vector<std::string>;
  CHECK(split_sentences("Hello. World.") == V{"Hello.", "World."});
  CHECK(split_sentences("").empty());
  CHECK(split_sentences("   ").empty());
  CHECK(split_sentences("Use e.g. version 3.2. It works.") == V{"Use e.g. version 3.2.", "It works."});
  CHECK(split_sentences("Really?! Yes.") == V{"Really?!", "Yes."});
  CHECK(split_sentences("He said \"stop.\" Then left.") == V{"He said \"stop.\"", "Then left."});
  CHECK(split_sentences("lower. case continues") == V{"lower. case continues"});
  CHECK(split_sentences("Step 1. 2 apples.") == V{"Step 1.", "2 apples."});
  CHECK(split_sentences("see file.txt now") == V{"see file.txt now"});
}

TEST_CASE("split_sentences keeps abbreviations attached") {
  using V = std::vector<std::string>;
  CHECK(split_sentences("Compare vs. Other tools.") == V{"Compare vs. Other tools."});
  CHECK(split_sentences("Ask Dr. Smith. Fine.") == V{"Ask Dr. Smith.", "Fine."});
  CHECK(is_abbreviation("etc"));
  CHECK_FALSE(is_abbreviation("hello"));
  // Repeated terminators are never an abbreviation period.
  CHECK(split_sentences("Wait etc.. Next") == V{"Wait etc..", "Next"});
}

TEST_CASE("normalize lowercases, strips symbols and drops digit-only words") {
  CHECK(tokens_of("Hello, World! 42") == std::vector<std::string>{"hello", "world"});
  CHECK(tokens_of("C++11 rocks") == std::vector<std::string>{"c", "rocks"});
  CHECK(tokens_of("   ").empty());
  CHECK(tokens_of("abc123 123") == std::vector<std::string>{"abc123"});
  const CleanSentence s = normalize("Hello, World!", "7");
  CHECK(s.text == "hello world");
  CHECK(s.char_len == 11);
  CHECK(s.origin_id == "7");
}

TEST_CASE("normalize handles non-ASCII letters") {
  const CleanSentence s = normalize("Ünïcode ÉTÉ — naïve");
  CHECK(s.tokens == std::vector<std::string>{"ünïcode", "été", "naïve"});
  CHECK(s.char_len == 17);
  // Invalid UTF-8 decodes to U+FFFD, which is a separator.
  CHECK(tokens_of("ab\xff" "cd") == std::vector<std::string>{"ab", "cd"});
  CHECK(tokens_of("\xe2\x82") .empty());
}

TEST_CASE("normalize is idempotent") {
  for (const char* s : {"Hello, World! 42", "C++11 rocks", "ÀÉÎ õü ß", "x_y-z 3d 10"}) {
    const CleanSentence once = normalize(s);
    CHECK(normalize(once.text).tokens == once.tokens);
    CHECK(normalize(once.text).text == once.text);
  }
}

TEST_CASE("unicode helpers") {
  std::size_t pos = 0;
  CHECK(unicode::decode_utf8("é", pos) == 0xE9);
  CHECK(pos == 2);
  pos = 0;
  CHECK(unicode::decode_utf8("\xc0\xaf", pos) == 0xFFFD);  // overlong
  CHECK(pos == 1);
  std::string out;
  unicode::append_utf8(out, 0x1F600);
  CHECK(out == "\xF0\x9F\x98\x80");
  CHECK(unicode::length("aé😀") == 3);
  CHECK(unicode::to_lower(U'Ä') == U'ä');
  CHECK(unicode::is_alnum(U'ß'));
  CHECK_FALSE(unicode::is_alnum(U'—'));
}

TEST_CASE("preprocess_document runs strip, split and normalize") {
  const auto sentences =
      preprocess_document("<p>First one. Second &amp; last!</p><p>123.</p>", "42");
  REQUIRE(sentences.size() == 2);
  CHECK(sentences[0].text == "first one");
  CHECK(sentences[1].text == "second last");
  CHECK(sentences[1].origin_id == "42");
}
