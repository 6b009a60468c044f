#include "sieve/embedding.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <type_traits>

#include "sieve/error.hpp"

namespace sieve {

EmbeddingModel::EmbeddingModel(Vocabulary vocab, DenseMatrix<float> input_vectors)
    : vocab_(std::move(vocab)), vectors_(std::move(input_vectors)) {
  if (vectors_.rows() != vocab_.size()) {
    throw DataError("embedding model: " + std::to_string(vectors_.rows()) + " rows for " +
                    std::to_string(vocab_.size()) + " words");
  }
  for (float x : vectors_.data()) {
    if (!std::isfinite(x)) throw DataError("embedding model: non-finite vector entry");
  }
}

std::optional<std::span<const float>> EmbeddingModel::find(std::string_view word) const {
  if (auto index = vocab_.find(word)) return vector(*index);
  return std::nullopt;
}

void save_model(const EmbeddingModel& model, std::ostream& out) {
  out << model.size() << ' ' << model.dim() << '\n';
  char buf[32];
  for (std::size_t i = 0; i < model.size(); ++i) {
    out << model.vocab().word(static_cast<std::int32_t>(i));
    for (float x : model.vector(static_cast<std::int32_t>(i))) {
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific, 8);
      out << ' ';
      out.write(buf, end - buf);
    }
    out << '\n';
  }
}

void save_model(const EmbeddingModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  save_model(model, out);
  if (!out) throw DataError("write error on '" + path.string() + "'");
}

namespace {

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i == line.size()) break;
    std::size_t end = i;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
    fields.push_back(line.substr(i, end - i));
    i = end;
  }
  return fields;
}

template <typename T>
bool parse_number(std::string_view field, T& value) {
  // from_chars rejects a leading '+', which some external writers emit.
  if constexpr (std::is_floating_point_v<T>) {
    if (field.size() > 1 && field[0] == '+' && field[1] != '-' && field[1] != '+') field.remove_prefix(1);
  }
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  return ec == std::errc() && ptr == field.data() + field.size();
}

}  // namespace

EmbeddingModel load_model(std::istream& in, const std::string& name) {
  std::string line;
  if (!std::getline(in, line)) throw LineError(name, 1, "missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_spaces(line);
  std::size_t rows = 0;
  std::size_t dim = 0;
  if (header.size() != 2 || !parse_number(header[0], rows) || !parse_number(header[1], dim) ||
      dim == 0) {
    throw LineError(name, 1, "expected header 'vocab_size dim'");
  }
  // Rows are appended as they are read so a header is never trusted for the
  // allocation size.
  DenseMatrix<float> vectors(0, dim);
  std::vector<float> row(dim);
  std::vector<std::string> words;
  std::size_t line_no = 1;
  while (words.size() < rows && std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = split_spaces(line);
    if (fields.size() != dim + 1) {
      throw LineError(name, line_no,
                      "expected a word and " + std::to_string(dim) + " values, found " +
                          std::to_string(fields.empty() ? 0 : fields.size() - 1) + " values");
    }
    for (std::size_t d = 0; d < dim; ++d) {
      if (!parse_number(fields[d + 1], row[d]) || !std::isfinite(row[d])) {
        throw LineError(name, line_no, "bad number '" + std::string(fields[d + 1]) + "'");
      }
    }
    vectors.append_row(row);
    words.emplace_back(fields[0]);
  }
  if (words.size() != rows) {
    throw LineError(name, line_no + 1,
                    "header declares " + std::to_string(rows) + " words, file has " +
                        std::to_string(words.size()));
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (!split_spaces(line).empty()) {
      throw LineError(name, line_no, "more rows than the header declares");
    }
  }
  Vocabulary vocab;
  try {
    vocab = Vocabulary::from_words(std::move(words));
  } catch (const DataError& e) {
    throw DataError(name + ": " + e.what());
  }
  return EmbeddingModel(std::move(vocab), std::move(vectors));
}

EmbeddingModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "' for reading");
  return load_model(in, path.string());
}

std::vector<std::pair<std::string, double>> nearest_neighbors(const EmbeddingModel& model,
                                                              std::string_view word,
                                                              std::size_t k, Execution exec) {
  if (k == 0) throw DataError("nearest_neighbors: k must be >= 1");
  const auto query_index = model.vocab().find(word);
  if (!query_index) throw DataError("nearest_neighbors: '" + std::string(word) + "' not in vocabulary");
  const auto q = model.vector(*query_index);
  double q_norm = 0.0;
  for (float x : q) q_norm += static_cast<double>(x) * x;
  q_norm = std::sqrt(q_norm);

  const auto n = static_cast<std::int64_t>(model.size());
  std::vector<double> scores(static_cast<std::size_t>(n), 0.0);
  auto score_row = [&](std::int64_t i) {
    const auto v = model.vector(static_cast<std::int32_t>(i));
    double dot = 0.0;
    double norm = 0.0;
    for (std::size_t d = 0; d < v.size(); ++d) {
      dot += static_cast<double>(v[d]) * q[d];
      norm += static_cast<double>(v[d]) * v[d];
    }
    norm = std::sqrt(norm);
    scores[static_cast<std::size_t>(i)] =
        (norm < 1e-12 || q_norm < 1e-12) ? 0.0 : dot / (norm * q_norm);
  };
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) score_row(i);
  } else {
    for (std::int64_t i = 0; i < n; ++i) score_row(i);
  }

  std::vector<std::int32_t> order;
  order.reserve(static_cast<std::size_t>(n));
  for (std::int32_t i = 0; i < static_cast<std::int32_t>(n); ++i) {
    if (i != *query_index) order.push_back(i);
  }
  const std::size_t take = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                    [&](std::int32_t a, std::int32_t b) {
                      const double sa = scores[static_cast<std::size_t>(a)];
                      const double sb = scores[static_cast<std::size_t>(b)];
                      return sa != sb ? sa > sb : a < b;
                    });
  std::vector<std::pair<std::string, double>> result;
  result.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    result.emplace_back(model.vocab().word(order[i]), scores[static_cast<std::size_t>(order[i])]);
  }
  return result;
}

}  // namespace sieve
