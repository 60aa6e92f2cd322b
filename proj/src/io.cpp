#include "markov/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace markov {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  return out;
}

std::size_t parse_header(std::istream& in, const std::string& magic) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing header line");
  std::istringstream ss(line);
  std::string word, version, dim_field;
  ss >> word >> version >> dim_field;
  if (word != magic || version != "v1" || dim_field.rfind("N=", 0) != 0) {
    throw ParseError("malformed header: " + line);
  }
  std::size_t n = 0;
  try {
    n = std::stoull(dim_field.substr(2));
  } catch (const std::exception&) {
    throw ParseError("bad dimension in header: " + line);
  }
  if (n == 0) throw ParseError("dimension must be positive");
  return n;
}

}  // namespace

void write_matrix(std::ostream& out, const StochasticMatrix& m) {
  out << "mc-matrix v1 N=" << m.dimension() << "\n";
  for (StateIndex x = 0; x < m.dimension(); ++x) {
    for (const auto& e : m.row(x)) {
      out << x << ' ' << e.col << ' ' << fmt_double(e.prob) << "\n";
    }
  }
}

void write_matrix_file(const std::filesystem::path& path, const StochasticMatrix& m) {
  auto out = open_output(path);
  write_matrix(out, m);
}

StochasticMatrix read_matrix(std::istream& in) {
  std::size_t n = parse_header(in, "mc-matrix");
  std::vector<StochasticMatrix::Row> rows(n);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::size_t row = 0, col = 0;
    double prob = 0.0;
    if (!(ss >> row >> col >> prob)) throw ParseError("malformed entry: " + line);
    if (row >= n) throw ParseError("row index out of range: " + line);
    rows[row].push_back({col, prob});
  }
  return StochasticMatrix(n, std::move(rows));
}

StochasticMatrix read_matrix_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_matrix(in);
}

void write_dist(std::ostream& out, const ProbDist& d) {
  for (const auto& [state, mass] : d.support()) {
    out << state << ' ' << fmt_double(mass) << "\n";
  }
}

void write_dist_file(const std::filesystem::path& path, const ProbDist& d) {
  auto out = open_output(path);
  write_dist(out, d);
}

ProbDist read_dist(std::istream& in) {
  std::vector<ProbDist::Entry> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::size_t state = 0;
    double mass = 0.0;
    if (!(ss >> state >> mass)) throw ParseError("malformed entry: " + line);
    entries.emplace_back(state, mass);
  }
  return ProbDist::from_pairs(std::move(entries));
}

ProbDist read_dist_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_dist(in);
}

void write_rates(std::ostream& out, const RateMatrix& q) {
  out << "mc-rates v1 N=" << q.dimension() << "\n";
  for (StateIndex x = 0; x < q.dimension(); ++x) {
    for (const auto& e : q.row(x)) {
      out << x << ' ' << e.col << ' ' << fmt_double(e.rate) << "\n";
    }
  }
}

void write_rates_file(const std::filesystem::path& path, const RateMatrix& q) {
  auto out = open_output(path);
  write_rates(out, q);
}

RateMatrix read_rates(std::istream& in) {
  std::size_t n = parse_header(in, "mc-rates");
  std::vector<RateMatrix::Row> rows(n);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::size_t row = 0, col = 0;
    double rate = 0.0;
    if (!(ss >> row >> col >> rate)) throw ParseError("malformed entry: " + line);
    if (row >= n) throw ParseError("row index out of range: " + line);
    rows[row].push_back({col, rate});
  }
  return RateMatrix(n, std::move(rows));
}

RateMatrix read_rates_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_rates(in);
}

CsvWriter::CsvWriter(std::ostream& out, const std::string& config_comment,
                     const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
  out_ << "# mcapprox " << kVersion << " " << config_comment << "\n";
  for (std::size_t i = 0; i < header.size(); ++i) {
    out_ << header[i] << (i + 1 == header.size() ? "\n" : ",");
  }
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  if (fields.size() != columns_) {
    throw ConsistencyError("CSV row width mismatch");
  }
  for (std::size_t i = 0; i < fields.size(); ++i) {
    out_ << fields[i] << (i + 1 == fields.size() ? "\n" : ",");
  }
}

}  // namespace markov
