#pragma once

#include <cstdint>
#include <vector>

#include "sieve/random.hpp"

namespace sieve {

// Uniform sample without replacement of up to `capacity` items from a stream
// of unknown length (Algorithm R). The n-th offered item (0-based) replaces a
// random slot with probability capacity / (n + 1).
template <typename T>
class ReservoirSampler {
 public:
  ReservoirSampler(std::size_t capacity, std::uint64_t seed) : capacity_(capacity), rng_(seed) {
    items_.reserve(capacity < 4096 ? capacity : 4096);
  }

  void offer(const T& item) {
    if (items_.size() < capacity_) {
      items_.push_back(item);
    } else if (capacity_ > 0) {
      const std::uint64_t j = rng_.below(seen_ + 1);
      if (j < capacity_) items_[static_cast<std::size_t>(j)] = item;
    }
    ++seen_;
  }

  std::uint64_t seen() const noexcept { return seen_; }
  const std::vector<T>& items() const& noexcept { return items_; }
  std::vector<T> take() && { return std::move(items_); }

 private:
  std::size_t capacity_;
  Rng rng_;
  std::uint64_t seen_ = 0;
  std::vector<T> items_;
};

}  // namespace sieve
