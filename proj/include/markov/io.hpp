#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "markov/chain_core.hpp"
#include "markov/jump.hpp"

namespace markov {

inline constexpr const char* kVersion = "0.1.0";

// Shortest-exact decimal rendering of a double ("%.17g"), locale-independent.
std::string fmt_double(double v);

// Transition matrix format: header "mc-matrix v1 N=<dim>", then one line per
// nonzero entry "row col prob". Rows need not be contiguous.
void write_matrix(std::ostream& out, const StochasticMatrix& m);
void write_matrix_file(const std::filesystem::path& path, const StochasticMatrix& m);
StochasticMatrix read_matrix(std::istream& in);
StochasticMatrix read_matrix_file(const std::filesystem::path& path);

// Distribution format: one "state mass" line per support point.
void write_dist(std::ostream& out, const ProbDist& d);
void write_dist_file(const std::filesystem::path& path, const ProbDist& d);
ProbDist read_dist(std::istream& in);
ProbDist read_dist_file(const std::filesystem::path& path);

// Generator format: header "mc-rates v1 N=<dim>", then "row col rate" lines
// including the diagonals.
void write_rates(std::ostream& out, const RateMatrix& q);
void write_rates_file(const std::filesystem::path& path, const RateMatrix& q);
RateMatrix read_rates(std::istream& in);
RateMatrix read_rates_file(const std::filesystem::path& path);

/// CSV emitter: one comment line recording the artifact version and the full
/// configuration, a header row, then data rows. The machine-readable output
/// of every CLI command.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::string& config_comment,
            const std::vector<std::string>& header);

  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& out_;
  std::size_t columns_;
};

}  // namespace markov
