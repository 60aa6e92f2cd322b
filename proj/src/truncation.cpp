#include "markov/truncation.hpp"

#include <algorithm>
#include <string>

namespace markov {

double TruncatedChain::max_lost_mass() const {
  double m = 0.0;
  for (double v : lost_mass) m = std::max(m, v);
  return m;
}

TruncatedChain truncate(const CountableKernel& kernel, std::size_t n,
                        TruncationScheme scheme) {
  if (n < 1) throw PreconditionError("truncation size must be >= 1");
  if (scheme.kind == TruncationScheme::Kind::kRedirect && scheme.redirect_to >= n) {
    throw PreconditionError("redirect target " + std::to_string(scheme.redirect_to) +
                            " outside truncation size " + std::to_string(n));
  }

  std::vector<StochasticMatrix::Row> rows(n);
  std::vector<double> lost(n, 0.0);
  for (StateIndex x = 0; x < n; ++x) {
    ProbDist full_row = kernel.row(x);
    double retained = 0.0;
    for (const auto& [col, prob] : full_row.support()) {
      if (col < n) {
        rows[x].push_back({col, prob});
        retained += prob;
      }
    }
    lost[x] = 1.0 - retained;
    if (lost[x] <= 0.0) {
      lost[x] = 0.0;
      continue;
    }
    switch (scheme.kind) {
      case TruncationScheme::Kind::kRedirect:
        rows[x].push_back({scheme.redirect_to, lost[x]});
        break;
      case TruncationScheme::Kind::kProportional: {
        if (retained <= 0.0) {
          throw DegenerateError("row " + std::to_string(x) +
                                " retains no mass; proportional scheme undefined");
        }
        for (auto& e : rows[x]) e.prob /= retained;
        break;
      }
      case TruncationScheme::Kind::kSelfLoop:
        rows[x].push_back({x, lost[x]});
        break;
    }
  }
  return TruncatedChain{n, StochasticMatrix(n, std::move(rows)), scheme,
                        std::move(lost)};
}

ProbDist embed(const ProbDist& d) { return d; }

StochasticMatrix extend_to(const TruncatedChain& chain, std::size_t ambient_dim,
                           StateIndex z) {
  if (ambient_dim < chain.n) {
    throw DimensionError("ambient dimension smaller than truncation size");
  }
  if (z >= chain.n) throw PreconditionError("extension target outside prefix");
  std::vector<StochasticMatrix::Row> rows(ambient_dim);
  for (StateIndex x = 0; x < chain.n; ++x) rows[x] = chain.matrix.row(x);
  for (StateIndex x = chain.n; x < ambient_dim; ++x) rows[x].push_back({z, 1.0});
  return StochasticMatrix(ambient_dim, std::move(rows));
}

}  // namespace markov
