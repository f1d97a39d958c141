#pragma once

#include <stdexcept>
#include <string>

namespace kpart {

// Bad user input: malformed graphs, parameter violations, unreadable files.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Generator could not realize the requested parameters within its retry budget.
struct GenerationError : std::runtime_error {
  explicit GenerationError(const std::string& what) : std::runtime_error(what) {}
};

// Relaxation provably has no feasible point (e.g. k > n).
struct InfeasibleError : std::runtime_error {
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

// Enumeration request above the exact-oracle size budget.
struct OracleBudgetError : std::runtime_error {
  explicit OracleBudgetError(const std::string& what) : std::runtime_error(what) {}
};

// Embedding admits no nontrivial threshold cut (all line coordinates equal).
struct DegenerateEmbeddingError : std::runtime_error {
  explicit DegenerateEmbeddingError(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace kpart
