#pragma once

namespace sieve {

// Selects between the OpenMP kernel and its serial reference. Every kernel
// that takes this parameter produces identical results under both policies
// (training with more than one worker is the documented exception).
enum class Execution { Serial, Parallel };

}  // namespace sieve
