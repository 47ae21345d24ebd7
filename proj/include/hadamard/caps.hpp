#pragma once

#include "hadamard/error.hpp"

#include <cstddef>
#include <string>
#include <string_view>

namespace hadamard {

/// Resource limits for every operation that materializes a dense object
/// (polynomial expansions, languages, Nisan matrices). Exceeding a limit
/// throws ResourceError; nothing is ever silently truncated.
struct Caps {
  std::size_t max_terms = std::size_t{1} << 20;
  unsigned max_degree = 64;
};

inline void check_terms(std::size_t count, const Caps& caps, std::string_view what) {
  if (count > caps.max_terms) {
    throw ResourceError(std::string(what) + " exceeds the term cap of " + std::to_string(caps.max_terms));
  }
}

inline void check_degree(std::size_t degree, const Caps& caps, std::string_view what) {
  if (degree > caps.max_degree) {
    throw ResourceError(std::string(what) + " has degree " + std::to_string(degree) + " above the cap of " +
                        std::to_string(caps.max_degree));
  }
}

}  // namespace hadamard
