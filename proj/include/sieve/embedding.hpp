#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sieve/execution.hpp"
#include "sieve/matrix.hpp"
#include "sieve/vocabulary.hpp"

namespace sieve {

// Word embeddings: one row of input_vectors per vocabulary word. Immutable
// once constructed and safe to share across threads.
class EmbeddingModel {
 public:
  EmbeddingModel() = default;
  // Throws DataError if the row count differs from the vocabulary size or any
  // entry is not finite.
  EmbeddingModel(Vocabulary vocab, DenseMatrix<float> input_vectors);

  const Vocabulary& vocab() const noexcept { return vocab_; }
  const DenseMatrix<float>& input_vectors() const noexcept { return vectors_; }
  std::size_t dim() const noexcept { return vectors_.cols(); }
  std::size_t size() const noexcept { return vectors_.rows(); }

  std::span<const float> vector(std::int32_t index) const {
    return vectors_.row(static_cast<std::size_t>(index));
  }
  std::optional<std::span<const float>> find(std::string_view word) const;

  bool operator==(const EmbeddingModel&) const = default;

 private:
  Vocabulary vocab_;
  DenseMatrix<float> vectors_;
};

// word2vec text format: header "V dim", then V lines "word f1 ... fdim".
// Values are written in scientific notation with 9 significant digits, which
// round-trips float exactly.
void save_model(const EmbeddingModel& model, std::ostream& out);
void save_model(const EmbeddingModel& model, const std::filesystem::path& path);

// Streams the file line by line; accepts any header-conformant file,
// including externally trained models. Arity and header mismatches raise
// LineError naming the line. Loaded vocabularies have unknown counts (0) and
// keep the file order, which for word2vec files is descending frequency.
EmbeddingModel load_model(std::istream& in, const std::string& name = "<stream>");
EmbeddingModel load_model(const std::filesystem::path& path);

// Top-k words by cosine similarity to `word`, excluding the word itself;
// ties broken by ascending index. Throws DataError for an OOV query.
std::vector<std::pair<std::string, double>> nearest_neighbors(
    const EmbeddingModel& model, std::string_view word, std::size_t k,
    Execution exec = Execution::Parallel);

}  // namespace sieve
