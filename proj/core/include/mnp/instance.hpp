#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "mnp/linalg.hpp"

namespace mnp {

/// Minimize 1/2 ||A x - b||^2 subject to 0 <= x <= u. Entries of u may be
/// +inf; an instance with every bound infinite is an NNLS instance.
class Instance {
 public:
  /// Validates shapes, finiteness of A and b, and u(i) > 0.
  Instance(Matrix a, Vector b, Vector u);

  /// NNLS convenience: all upper bounds +inf.
  static Instance nnls(Matrix a, Vector b);

  const Matrix& a() const { return a_; }
  const Vector& b() const { return b_; }
  const Vector& u() const { return u_; }
  Index rows() const { return a_.rows(); }
  Index cols() const { return a_.cols(); }

  bool has_finite_bound(Index i) const;
  bool is_nnls() const;             // every bound infinite
  bool all_bounds_finite() const;

  bool operator==(const Instance& other) const;

 private:
  Matrix a_;
  Vector b_;
  Vector u_;
};

enum class Shape { rectangular, near_square };

struct GeneratorSpec {
  Shape shape = Shape::rectangular;
  Index m = 1;
  Index n = 2;
  bool capacitated = false;           // u = 1 when set, u = inf otherwise
  std::optional<double> planted_chi;  // planted-feasible b with sparsity chi
  std::uint64_t seed = 0;
};

/// Columns for a near-square cell, n = round(factor * m).
Index near_square_cols(Index m, double factor);

/// Throws ContractError when the spec violates its shape constraints.
void validate(const GeneratorSpec& spec);

/// Random instance: A and (random) b uniform on [-0.5, 0.5]; planted b is
/// sum_{j in S} A^j z_j with j in S independently with probability chi and
/// z_j uniform on [0, 1]. Deterministic in the seed; see Rng for streams.
Instance generate(const GeneratorSpec& spec);

/// Directed arc between 0-based node indices.
struct Arc {
  Index tail;
  Index head;
};

/// Node-arc incidence instance: A(i, j) = +1 if arc j enters node i, -1 if
/// it leaves. Nodes are 0-based; node count is demands.size().
Instance incidence_instance(std::span<const Arc> arcs, const Vector& demands,
                            std::optional<Vector> capacities = std::nullopt);

/// Text format:
///   MNP 1
///   <m> <n>
///   m rows of A, n reals each
///   b (m reals)
///   u (n tokens, real or `inf`)
/// Reals are written with 17 significant digits.
std::string write_instance(const Instance& inst);
void write_instance(std::ostream& out, const Instance& inst);
Instance read_instance(std::string_view text);
Instance read_instance_file(const std::string& path);

}  // namespace mnp
