#include "sieve/features.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace sieve {

std::vector<std::string> build_ntf_vocabulary(std::span<const LabeledComment> comments,
                                              std::size_t min_df) {
  std::map<std::string, std::size_t, std::less<>> df;
  for (const auto& comment : comments) {
    std::set<std::string_view> seen(comment.sentence.tokens.begin(), comment.sentence.tokens.end());
    for (std::string_view word : seen) {
      auto it = df.find(word);
      if (it == df.end()) it = df.emplace(std::string(word), 0).first;
      ++it->second;
    }
  }
  std::vector<std::string> vocab;
  for (const auto& [word, count] : df) {
    if (count >= min_df) vocab.push_back(word);
  }
  return vocab;
}

std::vector<double> normalized_tf_features(std::span<const std::string> tokens,
                                           std::span<const std::string> vocab) {
  std::vector<double> out(vocab.size(), 0.0);
  if (tokens.empty()) return out;
  for (const auto& token : tokens) {
    auto it = std::lower_bound(vocab.begin(), vocab.end(), token);
    if (it != vocab.end() && *it == token) out[static_cast<std::size_t>(it - vocab.begin())] += 1.0;
  }
  const double n = static_cast<double>(tokens.size());
  for (double& x : out) x /= n;
  return out;
}

}  // namespace sieve
