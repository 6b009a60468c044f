#include "sieve/corpus_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "sieve/error.hpp"

namespace sieve {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "' for reading");
  return in;
}

void chomp(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

bool starts_with_nocase(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[i])) != prefix[i]) return false;
  }
  return true;
}

int parse_binary(std::string_view field) {
  if (field == "1") return 1;
  if (field == "0") return 0;
  return -1;
}

}  // namespace

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    chomp(line);
    lines.push_back(std::move(line));
  }
  if (in.bad()) throw DataError("read error on '" + path.string() + "'");
  return lines;
}

std::string remove_urls(std::string_view text) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      out.push_back(text[i++]);
      continue;
    }
    std::size_t end = i;
    while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
    const std::string_view word = text.substr(i, end - i);
    if (!starts_with_nocase(word, "http://") && !starts_with_nocase(word, "https://") &&
        !starts_with_nocase(word, "www.")) {
      out.append(word);
    }
    i = end;
  }
  return out;
}

std::vector<CleanSentence> parse_tweets(const std::vector<std::string>& lines) {
  std::vector<CleanSentence> tweets;
  tweets.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    tweets.push_back(normalize(remove_urls(lines[i]), std::to_string(i)));
  }
  return tweets;
}

std::vector<CleanSentence> load_tweets(const std::filesystem::path& path) {
  return parse_tweets(read_lines(path));
}

std::vector<LabeledComment> parse_labeled_comments(std::istream& in, const std::string& name) {
  std::vector<LabeledComment> comments;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    chomp(line);
    if (is_blank(line)) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) throw LineError(name, line_no, "expected label<TAB>text");
    const int label = parse_binary(std::string_view(line).substr(0, tab));
    if (label < 0) {
      throw LineError(name, line_no, "bad label '" + line.substr(0, tab) + "' (expected 1 or 0)");
    }
    LabeledComment comment;
    comment.sentence = normalize(std::string_view(line).substr(tab + 1),
                                 std::to_string(comments.size()));
    comment.label = label == 1 ? CommentLabel::Informative : CommentLabel::NonInformative;
    comments.push_back(std::move(comment));
  }
  return comments;
}

std::vector<LabeledComment> load_labeled_comments(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return parse_labeled_comments(in, path.string());
}

std::vector<CleanSentence> load_sentences(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::vector<CleanSentence> sentences;
  std::string line;
  while (std::getline(in, line)) {
    chomp(line);
    if (is_blank(line)) continue;
    sentences.push_back(normalize(line, std::to_string(sentences.size())));
  }
  return sentences;
}

void write_sentences(std::ostream& out, const std::vector<CleanSentence>& sentences) {
  for (const auto& s : sentences) out << s.text << '\n';
}

std::unordered_map<std::string, bool> load_relevance_labels(const std::filesystem::path& path) {
  std::unordered_map<std::string, bool> labels;
  const auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (is_blank(lines[i])) continue;
    const std::size_t tab = lines[i].find('\t');
    if (tab == std::string::npos) throw LineError(path.string(), i + 1, "expected id<TAB>label");
    const int label = parse_binary(std::string_view(lines[i]).substr(tab + 1));
    if (label < 0) throw LineError(path.string(), i + 1, "bad label (expected 1 or 0)");
    labels[lines[i].substr(0, tab)] = label == 1;
  }
  return labels;
}

std::vector<int> load_binary_labels(const std::filesystem::path& path) {
  std::vector<int> labels;
  const auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (is_blank(lines[i])) continue;
    const int label = parse_binary(lines[i]);
    if (label < 0) throw LineError(path.string(), i + 1, "bad label (expected 1 or 0)");
    labels.push_back(label);
  }
  return labels;
}

}  // namespace sieve
