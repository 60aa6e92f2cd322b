#pragma once

#include <cstddef>
#include <vector>

#include "markov/chain_core.hpp"

namespace markov {

/// How to reassign the probability mass that a truncated row would send
/// outside {0, ..., n-1}.
struct TruncationScheme {
  enum class Kind { kRedirect, kProportional, kSelfLoop };

  static TruncationScheme redirect(StateIndex z) { return {Kind::kRedirect, z}; }
  static TruncationScheme proportional() { return {Kind::kProportional, 0}; }
  static TruncationScheme self_loop() { return {Kind::kSelfLoop, 0}; }

  const char* name() const {
    switch (kind) {
      case Kind::kRedirect: return "redirect";
      case Kind::kProportional: return "proportional";
      case Kind::kSelfLoop: return "self-loop";
    }
    return "?";
  }

  Kind kind = Kind::kRedirect;
  StateIndex redirect_to = 0;
};

/// Finite approximation of a countable kernel on the prefix {0, ..., n-1}.
/// lost_mass[x] is the mass row x sent outside the prefix before augmentation.
struct TruncatedChain {
  std::size_t n;
  StochasticMatrix matrix;
  TruncationScheme scheme;
  std::vector<double> lost_mass;

  double max_lost_mass() const;
};

// Restricts the kernel to {0, ..., n-1} and reassigns each row's escaping
// mass according to the scheme. A proportional scheme requires every row to
// retain positive mass (DegenerateError otherwise, naming the row).
TruncatedChain truncate(const CountableKernel& kernel, std::size_t n,
                        TruncationScheme scheme);

// Reinterprets a distribution on {0, ..., n-1} over a larger ambient index
// space (zero extension). A no-op on the stored data; kept so comparisons
// against reference-chain objects are explicit call sites.
ProbDist embed(const ProbDist& d);

// Extends the truncated matrix to an ambient dimension by sending every state
// outside the prefix to `z` with probability 1, which makes the prefix
// absorbing. Marginals started inside the prefix are unchanged.
StochasticMatrix extend_to(const TruncatedChain& chain, std::size_t ambient_dim,
                           StateIndex z = 0);

}  // namespace markov
