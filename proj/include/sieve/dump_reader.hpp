#pragma once

#include <array>
#include <cstddef>
#include <deque>
#include <istream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sieve {

enum class DocumentKind { Post, Comment, Title };
enum class SourcePlatform { StackExchangeSE, StackOverflow, Other };

struct RawDocument {
  std::string id;
  DocumentKind kind = DocumentKind::Post;
  std::string body;  // may contain HTML
  SourcePlatform source = SourcePlatform::Other;

  bool operator==(const RawDocument&) const = default;
};

// Streaming reader for Stack Exchange data dump files (Posts.xml,
// Comments.xml): a single root element holding <row .../> elements whose
// attributes carry the content. The input is consumed in fixed-size chunks,
// so arbitrarily large dumps can be read.
//
// For Posts every row yields its Title (when non-empty) followed by its Body.
// Comment rows store their text in "Text" in the public dumps; "Body" is
// accepted as well. Rows without an Id or without a body are skipped and
// counted. Malformed XML raises ParseError with the byte offset.
class DumpReader {
 public:
  // file_kind is Post or Comment.
  DumpReader(std::istream& in, DocumentKind file_kind,
             SourcePlatform source = SourcePlatform::Other);

  std::optional<RawDocument> next();

  std::size_t rows_read() const noexcept { return rows_read_; }
  std::size_t skipped_rows() const noexcept { return skipped_rows_; }

 private:
  using Attributes = std::vector<std::pair<std::string, std::string>>;

  int peek();
  int get();
  std::size_t offset() const noexcept { return consumed_; }
  [[noreturn]] void fail(const std::string& what) const;
  [[noreturn]] void fail_at(const std::string& what, std::size_t at) const;

  void skip_whitespace();
  void expect(char c);
  void skip_until(const char* terminator);
  bool skip_misc();  // comments, PIs and DOCTYPE; true if something was skipped
  std::string read_name();
  std::string read_attribute_value();
  Attributes read_attributes(bool& self_closing);
  void read_prolog_and_root();
  bool read_next_row(Attributes& attrs);
  void handle_row(const Attributes& attrs);

  std::istream& in_;
  DocumentKind file_kind_;
  SourcePlatform source_;
  std::array<char, 1 << 16> buffer_{};
  std::size_t buffer_pos_ = 0;
  std::size_t buffer_len_ = 0;
  std::size_t consumed_ = 0;
  bool started_ = false;
  bool finished_ = false;
  std::string root_name_;
  std::deque<RawDocument> pending_;
  std::size_t rows_read_ = 0;
  std::size_t skipped_rows_ = 0;
};

// Reads a whole dump into memory.
std::vector<RawDocument> read_dump(std::istream& in, DocumentKind file_kind,
                                   SourcePlatform source = SourcePlatform::Other,
                                   std::size_t* skipped_rows = nullptr);

}  // namespace sieve
