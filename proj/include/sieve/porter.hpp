#pragma once

#include <string>
#include <string_view>

namespace sieve {

// Porter (1980) suffix-stripping stemmer, steps 1a through 5b. Input must be
// a lowercase ASCII word; anything else (and words of length <= 2) is
// returned unchanged.
std::string porter_stem(std::string_view word);

}  // namespace sieve
