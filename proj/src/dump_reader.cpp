#include "sieve/dump_reader.hpp"

#include <cstring>

#include "sieve/error.hpp"
#include "sieve/text.hpp"

namespace sieve {

namespace {

bool is_xml_space(int c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool is_name_char(int c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '_' || c == ':' || c == '-' || c == '.' || c >= 0x80;
}

const std::string* find_attribute(const std::vector<std::pair<std::string, std::string>>& attrs,
                                  std::string_view name) {
  for (const auto& [key, value] : attrs) {
    if (key == name) return &value;
  }
  return nullptr;
}

// Only the five predefined XML entities and numeric references are legal
// inside attribute values.
bool append_xml_entity(std::string& out, const std::string& ref) {
  if (ref == "amp") out.push_back('&');
  else if (ref == "lt") out.push_back('<');
  else if (ref == "gt") out.push_back('>');
  else if (ref == "quot") out.push_back('"');
  else if (ref == "apos") out.push_back('\'');
  else if (ref.size() >= 2 && ref[0] == '#') {
    const bool hex = ref[1] == 'x';
    const std::size_t first = hex ? 2 : 1;
    if (first >= ref.size()) return false;
    char32_t cp = 0;
    for (std::size_t i = first; i < ref.size(); ++i) {
      const char c = ref[i];
      int v = -1;
      if (c >= '0' && c <= '9') v = c - '0';
      else if (hex && c >= 'a' && c <= 'f') v = c - 'a' + 10;
      else if (hex && c >= 'A' && c <= 'F') v = c - 'A' + 10;
      if (v < 0) return false;
      cp = cp * (hex ? 16 : 10) + static_cast<char32_t>(v);
      if (cp > 0x10FFFF) return false;
    }
    unicode::append_utf8(out, cp);
  } else {
    return false;
  }
  return true;
}

}  // namespace

DumpReader::DumpReader(std::istream& in, DocumentKind file_kind, SourcePlatform source)
    : in_(in), file_kind_(file_kind), source_(source) {}

int DumpReader::peek() {
  if (buffer_pos_ == buffer_len_) {
    in_.read(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
    buffer_len_ = static_cast<std::size_t>(in_.gcount());
    buffer_pos_ = 0;
    if (buffer_len_ == 0) return -1;
  }
  return static_cast<unsigned char>(buffer_[buffer_pos_]);
}

int DumpReader::get() {
  const int c = peek();
  if (c >= 0) {
    ++buffer_pos_;
    ++consumed_;
  }
  return c;
}

void DumpReader::fail(const std::string& what) const { fail_at(what, consumed_); }

void DumpReader::fail_at(const std::string& what, std::size_t at) const {
  throw ParseError("malformed dump XML: " + what, at);
}

void DumpReader::skip_whitespace() {
  while (is_xml_space(peek())) get();
}

void DumpReader::expect(char c) {
  const int got = peek();
  if (got != static_cast<unsigned char>(c)) {
    fail(got < 0 ? std::string("unexpected end of input, expected '") + c + "'"
                 : std::string("expected '") + c + "'");
  }
  get();
}

void DumpReader::skip_until(const char* terminator) {
  const std::size_t len = std::strlen(terminator);
  std::size_t matched = 0;
  while (matched < len) {
    const int c = get();
    if (c < 0) fail(std::string("unexpected end of input, expected '") + terminator + "'");
    if (c == static_cast<unsigned char>(terminator[matched])) {
      ++matched;
    } else {
      matched = (c == static_cast<unsigned char>(terminator[0])) ? 1 : 0;
    }
  }
}

// Called with the stream positioned on '<'. Only consumes input when the
// markup is a comment, processing instruction or DOCTYPE.
bool DumpReader::skip_misc() {
  if (peek() != '<') return false;
  // One byte of lookahead past '<' is needed; the buffer may end exactly at
  // '<', so refill via a copy of the remaining bytes when required.
  if (buffer_pos_ + 1 >= buffer_len_) {
    const char lt = buffer_[buffer_pos_];
    in_.read(buffer_.data() + 1, static_cast<std::streamsize>(buffer_.size() - 1));
    buffer_[0] = lt;
    buffer_len_ = 1 + static_cast<std::size_t>(in_.gcount());
    buffer_pos_ = 0;
  }
  if (buffer_pos_ + 1 >= buffer_len_) return false;
  const char second = buffer_[buffer_pos_ + 1];
  if (second == '?') {
    skip_until("?>");
    return true;
  }
  if (second == '!') {
    get();
    get();
    if (peek() == '-') {
      get();
      expect('-');
      skip_until("-->");
    } else {
      skip_until(">");
    }
    return true;
  }
  return false;
}

std::string DumpReader::read_name() {
  std::string name;
  while (is_name_char(peek())) name.push_back(static_cast<char>(get()));
  if (name.empty()) fail("expected a name");
  return name;
}

std::string DumpReader::read_attribute_value() {
  const int quote = peek();
  if (quote != '"' && quote != '\'') fail("attribute value must be quoted");
  get();
  std::string raw;
  for (;;) {
    const std::size_t at = offset();
    const int c = get();
    if (c < 0) fail("unexpected end of input inside attribute value");
    if (c == quote) break;
    if (c == '<') fail_at("'<' inside attribute value", at);
    if (c == '&') {
      std::string ref;
      for (;;) {
        const int r = get();
        if (r < 0) fail("unexpected end of input inside entity reference");
        if (r == ';') break;
        if (r == quote || ref.size() > 10) fail_at("unterminated entity reference", at);
        ref.push_back(static_cast<char>(r));
      }
      if (!append_xml_entity(raw, ref)) fail_at("unknown or malformed entity '&" + ref + ";'", at);
      continue;
    }
    raw.push_back(static_cast<char>(c));
  }
  return raw;
}

DumpReader::Attributes DumpReader::read_attributes(bool& self_closing) {
  Attributes attrs;
  self_closing = false;
  for (;;) {
    const bool had_space = is_xml_space(peek());
    skip_whitespace();
    const int c = peek();
    if (c < 0) fail("unexpected end of input inside tag");
    if (c == '/') {
      get();
      expect('>');
      self_closing = true;
      return attrs;
    }
    if (c == '>') {
      get();
      return attrs;
    }
    if (!had_space) fail("expected whitespace before attribute");
    std::string name = read_name();
    skip_whitespace();
    expect('=');
    skip_whitespace();
    std::string value = read_attribute_value();
    attrs.emplace_back(std::move(name), std::move(value));
  }
}

void DumpReader::read_prolog_and_root() {
  // Optional UTF-8 byte order mark.
  if (peek() == 0xEF) {
    get();
    if (get() != 0xBB || get() != 0xBF) fail("invalid byte order mark");
  }
  for (;;) {
    skip_whitespace();
    if (peek() < 0) fail("empty document: no root element");
    if (peek() != '<') fail("text before the root element");
    if (skip_misc()) continue;
    break;
  }
  expect('<');
  root_name_ = read_name();
  bool self_closing = false;
  read_attributes(self_closing);
  if (self_closing) finished_ = true;
}

bool DumpReader::read_next_row(Attributes& attrs) {
  for (;;) {
    skip_whitespace();
    const int c = peek();
    if (c < 0) fail("unexpected end of input, missing </" + root_name_ + ">");
    if (c != '<') fail("unexpected text content");
    if (skip_misc()) continue;
    const std::size_t tag_start = offset();
    get();
    if (peek() == '/') {
      get();
      const std::string name = read_name();
      if (name != root_name_) fail_at("mismatched closing tag </" + name + ">", tag_start);
      skip_whitespace();
      expect('>');
      // Trailing comments/whitespace only.
      for (;;) {
        skip_whitespace();
        if (peek() < 0) break;
        if (!skip_misc()) fail("content after the root element");
      }
      return false;
    }
    const std::string name = read_name();
    bool self_closing = false;
    attrs = read_attributes(self_closing);
    if (!self_closing) {
      skip_whitespace();
      const std::size_t close_start = offset();
      expect('<');
      expect('/');
      const std::string closing = read_name();
      if (closing != name) fail_at("mismatched closing tag </" + closing + ">", close_start);
      skip_whitespace();
      expect('>');
    }
    if (name == "row") return true;
  }
}

void DumpReader::handle_row(const Attributes& attrs) {
  ++rows_read_;
  const std::string* id = find_attribute(attrs, "Id");
  if (id == nullptr || id->empty()) {
    ++skipped_rows_;
    return;
  }
  if (file_kind_ == DocumentKind::Post) {
    if (const std::string* title = find_attribute(attrs, "Title"); title && !title->empty()) {
      pending_.push_back(RawDocument{*id, DocumentKind::Title, *title, source_});
    }
  }
  const std::string* body = find_attribute(attrs, "Body");
  if (body == nullptr && file_kind_ == DocumentKind::Comment) body = find_attribute(attrs, "Text");
  if (body == nullptr || body->empty()) {
    ++skipped_rows_;
    return;
  }
  pending_.push_back(RawDocument{*id, file_kind_, *body, source_});
}

std::optional<RawDocument> DumpReader::next() {
  if (!started_) {
    started_ = true;
    read_prolog_and_root();
  }
  Attributes attrs;
  while (pending_.empty() && !finished_) {
    if (read_next_row(attrs)) {
      handle_row(attrs);
    } else {
      finished_ = true;
    }
  }
  if (pending_.empty()) return std::nullopt;
  RawDocument doc = std::move(pending_.front());
  pending_.pop_front();
  return doc;
}

std::vector<RawDocument> read_dump(std::istream& in, DocumentKind file_kind,
                                   SourcePlatform source, std::size_t* skipped_rows) {
  DumpReader reader(in, file_kind, source);
  std::vector<RawDocument> docs;
  while (auto doc = reader.next()) docs.push_back(std::move(*doc));
  if (skipped_rows != nullptr) *skipped_rows = reader.skipped_rows();
  return docs;
}

}  // namespace sieve
