#include "mnp/instance.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include "mnp/error.hpp"
#include "mnp/rng.hpp"

namespace mnp {

// ---------------------------------------------------------------- Rng

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(base) ^ (a + 1)) ^ (b + 1));
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : engine_(splitmix64(seed + (stream + 1) * 0x9e3779b97f4a7c15ULL)) {}

// ----------------------------------------------------------- Instance

Instance::Instance(Matrix a, Vector b, Vector u)
    : a_(std::move(a)), b_(std::move(b)), u_(std::move(u)) {
  if (a_.rows() < 1 || a_.cols() < 1) throw DimensionError("instance: A must be at least 1x1");
  if (b_.size() != a_.rows()) throw DimensionError("instance: b length must equal row count of A");
  if (u_.size() != a_.cols()) throw DimensionError("instance: u length must equal column count of A");
  if (!a_.allFinite() || !b_.allFinite()) throw ContractError("instance: A and b must be finite");
  for (Index i = 0; i < u_.size(); ++i) {
    if (std::isnan(u_[i]) || !(u_[i] > 0.0)) {
      throw ContractError("instance: upper bounds must be positive");
    }
  }
}

Instance Instance::nnls(Matrix a, Vector b) {
  Vector u = Vector::Constant(a.cols(), std::numeric_limits<double>::infinity());
  return Instance(std::move(a), std::move(b), std::move(u));
}

bool Instance::has_finite_bound(Index i) const { return std::isfinite(u_[i]); }

bool Instance::is_nnls() const {
  for (Index i = 0; i < u_.size(); ++i)
    if (std::isfinite(u_[i])) return false;
  return true;
}

bool Instance::all_bounds_finite() const { return u_.allFinite(); }

bool Instance::operator==(const Instance& other) const {
  return a_.rows() == other.a_.rows() && a_.cols() == other.a_.cols() && a_ == other.a_ &&
         b_ == other.b_ && u_ == other.u_;
}

// ---------------------------------------------------------- Generators

Index near_square_cols(Index m, double factor) {
  return static_cast<Index>(std::llround(factor * static_cast<double>(m)));
}

void validate(const GeneratorSpec& spec) {
  if (spec.m < 1 || spec.n < 1) throw ContractError("generator: m and n must be positive");
  switch (spec.shape) {
    case Shape::rectangular:
      if (spec.n < 2 * spec.m) throw ContractError("generator: rectangular shape requires n >= 2m");
      break;
    case Shape::near_square:
      if (spec.n < spec.m || spec.n > near_square_cols(spec.m, 1.1)) {
        throw ContractError("generator: near-square shape requires m <= n <= round(1.1 m)");
      }
      break;
  }
  if (spec.planted_chi && !(*spec.planted_chi > 0.0 && *spec.planted_chi <= 1.0)) {
    throw ContractError("generator: sparsity chi must lie in (0, 1]");
  }
}

Instance generate(const GeneratorSpec& spec) {
  validate(spec);
  Rng matrix_rng(spec.seed, Rng::matrix);
  Matrix a(spec.m, spec.n);
  // Row-major fill order so the stream does not depend on storage order.
  for (Index i = 0; i < spec.m; ++i)
    for (Index j = 0; j < spec.n; ++j) a(i, j) = matrix_rng.uniform(-0.5, 0.5);

  Vector b(spec.m);
  if (spec.planted_chi) {
    Rng support_rng(spec.seed, Rng::support);
    Rng coef_rng(spec.seed, Rng::coefficients);
    b.setZero();
    for (Index j = 0; j < spec.n; ++j) {
      if (support_rng.bernoulli(*spec.planted_chi)) b += a.col(j) * coef_rng.unit();
    }
  } else {
    Rng rhs_rng(spec.seed, Rng::rhs);
    for (Index i = 0; i < spec.m; ++i) b[i] = rhs_rng.uniform(-0.5, 0.5);
  }

  const double bound = spec.capacitated ? 1.0 : std::numeric_limits<double>::infinity();
  return Instance(std::move(a), std::move(b), Vector::Constant(spec.n, bound));
}

Instance incidence_instance(std::span<const Arc> arcs, const Vector& demands,
                            std::optional<Vector> capacities) {
  const Index m = demands.size();
  const auto n = static_cast<Index>(arcs.size());
  Matrix a = Matrix::Zero(m, n);
  for (Index j = 0; j < n; ++j) {
    const Arc& arc = arcs[static_cast<std::size_t>(j)];
    if (arc.tail < 0 || arc.tail >= m || arc.head < 0 || arc.head >= m) {
      throw ContractError("incidence_instance: node index out of range");
    }
    if (arc.tail == arc.head) throw ContractError("incidence_instance: self-loop arc");
    a(arc.head, j) = 1.0;
    a(arc.tail, j) = -1.0;
  }
  Vector u = capacities ? std::move(*capacities)
                        : Vector::Constant(n, std::numeric_limits<double>::infinity());
  return Instance(std::move(a), demands, std::move(u));
}

// ----------------------------------------------------------------- I/O

namespace {

void put_real(std::string& out, double v) {
  if (std::isinf(v)) {
    out += v > 0 ? "inf" : "-inf";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

template <typename Vec>
void put_row(std::string& out, const Vec& row) {
  for (Index j = 0; j < row.size(); ++j) {
    if (j) out += ' ';
    put_real(out, row[j]);
  }
  out += '\n';
}

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

double parse_real(std::string_view token, int line, bool allow_inf) {
  if (allow_inf && token == "inf") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v)) {
    throw ParseError(line, "non-numeric token '" + std::string(token) + "'");
  }
  return v;
}

Index parse_dim(std::string_view token, int line) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || v < 1) {
    throw ParseError(line, "expected a positive integer dimension, got '" + std::string(token) + "'");
  }
  return static_cast<Index>(v);
}

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  bool next(std::string_view& line) {
    if (pos_ >= text_.size()) return false;
    const std::size_t end = text_.find('\n', pos_);
    if (end == std::string_view::npos) {
      line = text_.substr(pos_);
      pos_ = text_.size();
    } else {
      line = text_.substr(pos_, end - pos_);
      pos_ = end + 1;
    }
    ++number_;
    return true;
  }
  int number() const { return number_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int number_ = 0;
};

std::vector<std::string_view> expect_line(LineReader& reader, const char* what) {
  std::string_view line;
  if (!reader.next(line)) throw ParseError(reader.number() + 1, std::string("missing ") + what);
  return split_tokens(line);
}

void expect_count(const std::vector<std::string_view>& tokens, Index count, int line,
                  const char* what) {
  if (static_cast<Index>(tokens.size()) != count) {
    throw ParseError(line, std::string(what) + ": expected " + std::to_string(count) +
                               " values, found " + std::to_string(tokens.size()));
  }
}

}  // namespace

std::string write_instance(const Instance& inst) {
  std::string out = "MNP 1\n";
  out += std::to_string(inst.rows()) + ' ' + std::to_string(inst.cols()) + '\n';
  for (Index i = 0; i < inst.rows(); ++i) put_row(out, inst.a().row(i));
  put_row(out, inst.b());
  put_row(out, inst.u());
  return out;
}

void write_instance(std::ostream& out, const Instance& inst) { out << write_instance(inst); }

Instance read_instance(std::string_view text) {
  LineReader reader(text);
  auto header = expect_line(reader, "header");
  if (header.size() != 2 || header[0] != "MNP" || header[1] != "1") {
    throw ParseError(reader.number(), "malformed header, expected 'MNP 1'");
  }
  auto dims = expect_line(reader, "dimension line");
  if (dims.size() != 2) throw ParseError(reader.number(), "malformed dimension line, expected '<m> <n>'");
  const Index m = parse_dim(dims[0], reader.number());
  const Index n = parse_dim(dims[1], reader.number());

  Matrix a(m, n);
  for (Index i = 0; i < m; ++i) {
    auto row = expect_line(reader, "row of A");
    expect_count(row, n, reader.number(), "row of A");
    for (Index j = 0; j < n; ++j) a(i, j) = parse_real(row[static_cast<std::size_t>(j)], reader.number(), false);
  }
  Vector b(m);
  auto b_tokens = expect_line(reader, "b line");
  expect_count(b_tokens, m, reader.number(), "b line");
  for (Index i = 0; i < m; ++i) b[i] = parse_real(b_tokens[static_cast<std::size_t>(i)], reader.number(), false);

  Vector u(n);
  auto u_tokens = expect_line(reader, "u line");
  expect_count(u_tokens, n, reader.number(), "u line");
  for (Index j = 0; j < n; ++j) {
    u[j] = parse_real(u_tokens[static_cast<std::size_t>(j)], reader.number(), true);
    if (!(u[j] > 0.0)) throw ParseError(reader.number(), "upper bounds must be positive");
  }

  std::string_view rest;
  while (reader.next(rest)) {
    if (!split_tokens(rest).empty()) {
      throw ParseError(reader.number(), "unexpected content after u line (dimension mismatch?)");
    }
  }
  return Instance(std::move(a), std::move(b), std::move(u));
}

Instance read_instance_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open instance file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return read_instance(buffer.str());
}

}  // namespace mnp
