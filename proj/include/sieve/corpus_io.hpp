#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "sieve/text.hpp"

namespace sieve {

enum class CommentLabel { NonInformative = 0, Informative = 1 };

struct LabeledComment {
  CleanSentence sentence;
  CommentLabel label = CommentLabel::NonInformative;
};

// Lines of a UTF-8 text file, with '\n' or "\r\n" terminators stripped.
std::vector<std::string> read_lines(const std::filesystem::path& path);

// Drops whitespace-separated words starting with http://, https:// or www.
// (case-insensitive).
std::string remove_urls(std::string_view text);

// One tweet per line. URLs are removed, then the line is normalized. The
// 0-based line index becomes origin_id; empty lines yield empty sentences so
// indices stay aligned with the file.
std::vector<CleanSentence> load_tweets(const std::filesystem::path& path);
std::vector<CleanSentence> parse_tweets(const std::vector<std::string>& lines);

// TSV "label<TAB>text" with label 1 (informative) or 0. Blank lines are
// skipped; anything else malformed raises LineError with the 1-based line.
std::vector<LabeledComment> load_labeled_comments(const std::filesystem::path& path);
std::vector<LabeledComment> parse_labeled_comments(std::istream& in,
                                                   const std::string& name = "<stream>");

// Cleaned-sentence corpus: one sentence per line, tokens separated by spaces.
// Lines are re-normalized on read, which is a no-op for files written by
// write_sentences. Blank lines are skipped.
std::vector<CleanSentence> load_sentences(const std::filesystem::path& path);
void write_sentences(std::ostream& out, const std::vector<CleanSentence>& sentences);

// "id<TAB>label" lines, label 1 = relevant, 0 = not relevant.
std::unordered_map<std::string, bool> load_relevance_labels(const std::filesystem::path& path);

// One binary label (0/1) per line; blank lines are skipped.
std::vector<int> load_binary_labels(const std::filesystem::path& path);

}  // namespace sieve
