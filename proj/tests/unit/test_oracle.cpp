#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <limits>
#include <vector>

#include "mnp/error.hpp"
#include "mnp/oracle.hpp"
#include "mnp/verify.hpp"

namespace {

using mnp::Arc;
using mnp::Instance;
using mnp::Matrix;
using mnp::Vector;

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<mnp::Index>(v.size()));
  mnp::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

Instance triangle(const Vector& demands) {
  const std::vector<Arc> arcs{{0, 1}, {1, 2}, {2, 0}};
  return mnp::incidence_instance(arcs, demands);
}

// Projected Gauss-Seidel run to convergence: an optimizer that shares no code
// with the enumeration oracle.
double gauss_seidel_optimum(const Instance& inst) {
  const Matrix& a = inst.a();
  Vector x = Vector::Zero(inst.cols());
  Vector r = -inst.b();
  for (int sweep = 0; sweep < 200000; ++sweep) {
    double change = 0.0;
    for (mnp::Index j = 0; j < x.size(); ++j) {
      const double c = a.col(j).squaredNorm();
      const double next = std::clamp(x[j] - a.col(j).dot(r) / c, 0.0, inst.u()[j]);
      r += (next - x[j]) * a.col(j);
      change = std::max(change, std::abs(next - x[j]));
      x[j] = next;
    }
    if (change < 1e-15) break;
  }
  return 0.5 * (a * x - inst.b()).squaredNorm();
}

TEST(BruteForce, HandValues) {
  const Instance one = Instance::nnls(Matrix::Identity(1, 1), vec({-1}));
  const mnp::OptimumCertificate c1 = mnp::brute_force_optimum(one);
  EXPECT_EQ(c1.x_star, vec({0}));
  EXPECT_DOUBLE_EQ(c1.p_star, 0.5);

  const Instance fit = Instance::nnls(Matrix::Identity(2, 2), vec({1, 2}));
  const mnp::OptimumCertificate c2 = mnp::brute_force_optimum(fit);
  EXPECT_TRUE(c2.x_star.isApprox(vec({1, 2}), 1e-14));
  EXPECT_LT(c2.p_star, 1e-28);
  EXPECT_LT(c2.kkt_residual, 1e-14);
}

TEST(BruteForce, MatchesIndependentOptimizer) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Instance inst = mnp::generate({mnp::Shape::rectangular, 3, 6, seed % 2 == 0, std::nullopt, seed});
    const double p_star = mnp::brute_force_optimum(inst).p_star;
    EXPECT_NEAR(p_star, gauss_seidel_optimum(inst), 1e-10) << "seed " << seed;
  }
}

TEST(BruteForce, CapNamesTheLimit) {
  const Instance big = Instance::nnls(Matrix::Ones(2, 13), vec({1, 1}));
  try {
    mnp::brute_force_optimum(big);
    FAIL();
  } catch (const mnp::CapExceeded& e) {
    EXPECT_NE(std::string(e.what()).find("12"), std::string::npos);
  }
}

TEST(Circuits, TriangleIsUnimodular) {
  EXPECT_NEAR(mnp::enumerate_circuits(triangle(Vector::Zero(3)).a()).kappa, 1.0, 1e-12);
}

TEST(Circuits, SingleRowRatios) {
  for (double c : {2.0, 3.0, 10.0}) {
    Matrix a(1, 2);
    a << 1, c;
    const mnp::CircuitCatalog cat = mnp::enumerate_circuits(a);
    EXPECT_NEAR(cat.kappa, c, 1e-12);
    EXPECT_EQ(cat.elementary_vectors.size(), 3u);
  }
}

TEST(Circuits, ElementaryVectorsAreSupportMinimalKernelVectors) {
  Matrix a(2, 4);
  a << 1, 2, 0, -1, 0, 1, 3, 1;
  const mnp::CircuitCatalog cat = mnp::enumerate_circuits(a);
  Matrix ext(2, 6);
  ext << a, -Matrix::Identity(2, 2);
  for (const Vector& e : cat.elementary_vectors) {
    EXPECT_LT((ext * e).norm(), 1e-12);
    EXPECT_NEAR(e.maxCoeff(), 1.0, 1e-15);
    std::vector<mnp::Index> support;
    for (mnp::Index k = 0; k < e.size(); ++k)
      if (e[k] != 0.0) support.push_back(k);
    Matrix cols(2, static_cast<mnp::Index>(support.size()));
    for (std::size_t k = 0; k < support.size(); ++k) cols.col(static_cast<mnp::Index>(k)) = ext.col(support[k]);
    // Minimal dependence: the support columns have corank exactly one.
    EXPECT_EQ(Eigen::FullPivLU<Matrix>(cols).rank(), static_cast<mnp::Index>(support.size()) - 1);
  }
}

TEST(Circuits, RandomNetworksAreUnimodular) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Instance inst = mnp::random_network_instance(4, 7, false, seed);
    EXPECT_NEAR(mnp::enumerate_circuits(inst.a()).kappa, 1.0, 1e-12) << "seed " << seed;
  }
}

TEST(Circuits, CapNamesTheLimit) {
  EXPECT_THROW(mnp::enumerate_circuits(Matrix::Ones(4, 13)), mnp::CapExceeded);
}

TEST(Conformal, ZeroVectorHasNoParts) {
  const Instance inst = triangle(Vector::Zero(3));
  const mnp::CircuitCatalog cat = mnp::enumerate_circuits(inst.a());
  EXPECT_TRUE(mnp::conformal_decomposition(inst.a(), Vector::Zero(3), cat).empty());
}

TEST(Conformal, ElementaryVectorIsItsOwnDecomposition) {
  const Instance inst = triangle(Vector::Zero(3));
  const mnp::CircuitCatalog cat = mnp::enumerate_circuits(inst.a());
  const Vector cycle = Vector::Ones(3);  // directed triangle: A h = 0
  const std::vector<Vector> parts = mnp::conformal_decomposition(inst.a(), cycle, cat);
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_TRUE(parts[0].isApprox(cycle, 1e-14));
}

TEST(Conformal, TwoPathFlow) {
  // Arcs 0->1, 1->2, 0->2; one unit along each route from node 0 to node 2.
  const std::vector<Arc> arcs{{0, 1}, {1, 2}, {0, 2}};
  const Instance inst = mnp::incidence_instance(arcs, Vector::Zero(3));
  const mnp::CircuitCatalog cat = mnp::enumerate_circuits(inst.a());
  const Vector flow = Vector::Ones(3);
  const std::vector<Vector> parts = mnp::conformal_decomposition(inst.a(), flow, cat);
  ASSERT_FALSE(parts.empty());
  EXPECT_LE(parts.size(), 3u);
  Vector sum = Vector::Zero(3);
  for (const Vector& h : parts) {
    EXPECT_GE(h.minCoeff(), 0.0);
    EXPECT_GT((inst.a() * h).norm(), 0.0);
    sum += h;
  }
  EXPECT_TRUE(sum.isApprox(flow, 1e-12));
}

TEST(Conformal, RandomVectorsSumBackAndConform) {
  Matrix a(2, 4);
  a << 1, 2, 0, -1, 0, 1, 3, 1;
  const mnp::CircuitCatalog cat = mnp::enumerate_circuits(a);
  const Vector v = vec({0.7, -0.2, 1.3, 0.4});
  const std::vector<Vector> parts = mnp::conformal_decomposition(a, v, cat);
  EXPECT_LE(parts.size(), 4u);
  Vector sum = Vector::Zero(4);
  Vector image_sum = Vector::Zero(2);
  const Vector av = a * v;
  for (const Vector& h : parts) {
    for (mnp::Index k = 0; k < 4; ++k) EXPECT_GE(h[k] * v[k], -1e-15);
    const Vector ah = a * h;
    for (mnp::Index k = 0; k < 2; ++k) EXPECT_GE(ah[k] * av[k], -1e-15);
    sum += h;
    image_sum += ah;
  }
  EXPECT_TRUE(sum.isApprox(v, 1e-12));
}

TEST(Proximity, HoldsAtOptimum) {
  const Instance inst = mnp::generate({mnp::Shape::rectangular, 3, 6, false, std::nullopt, 5});
  const mnp::OptimumCertificate cert = mnp::brute_force_optimum(inst);
  const mnp::CircuitCatalog cat = mnp::enumerate_circuits(inst.a());
  const mnp::ProximityReport rep = mnp::verify_proximity(inst, cert.x_star, cert, cat);
  EXPECT_TRUE(rep.linf.pass);
  EXPECT_TRUE(rep.l2.pass);
  EXPECT_LT(rep.linf.measured, 1e-8);
}

TEST(Proximity, TriangleRandomPoints) {
  Vector u = Vector::Constant(3, 2.0);
  const std::vector<Arc> arcs{{0, 1}, {1, 2}, {2, 0}};
  const Instance inst = mnp::incidence_instance(arcs, vec({-1, 0.5, 0.5}), u);
  const mnp::OptimumCertificate cert = mnp::brute_force_optimum(inst);
  const mnp::CircuitCatalog cat = mnp::enumerate_circuits(inst.a());
  const mnp::OptimalFace face(inst, cert);
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> d(0.0, 2.0);
  for (int k = 0; k < 50; ++k) {
    const Vector x = vec({d(gen), d(gen), d(gen)});
    const mnp::ProximityReport rep = mnp::verify_proximity(inst, x, face, cat);
    EXPECT_TRUE(rep.linf.pass && rep.l2.pass) << "point " << k;
    EXPECT_LT((inst.a() * rep.nearest_optimum - cert.b_star).norm(), 1e-9);
  }
}

TEST(Contraction, IdentityMatrixInstances) {
  for (mnp::Index m = 1; m <= 4; ++m) {
    Vector b = Vector::LinSpaced(m, 1.0, -1.0);
    const Instance inst = Instance::nnls(Matrix::Identity(m, m), b);
    const mnp::OptimumCertificate cert = mnp::brute_force_optimum(inst);
    const mnp::CircuitCatalog cat = mnp::enumerate_circuits(inst.a());
    EXPECT_NEAR(cat.kappa, 1.0, 1e-12);
    for (mnp::UpdateKind kind : {mnp::UpdateKind::projected_gradient, mnp::UpdateKind::coordinate}) {
      mnp::SolverConfig cfg;
      cfg.rule.kind = kind;
      const mnp::SolveReport rep = mnp::solve(inst, cfg);
      const mnp::ContractionReport c = mnp::verify_contraction(inst, rep, kind, cert, cat);
      EXPECT_TRUE(c.contraction.pass) << "m " << m;
      EXPECT_TRUE(c.z_bound.pass) << "m " << m;
    }
  }
}

TEST(Contraction, SingleStepToOptimum) {
  const Instance inst = Instance::nnls(Matrix::Identity(2, 2), vec({1, 0}));
  const mnp::OptimumCertificate cert = mnp::brute_force_optimum(inst);
  const mnp::SolveReport rep = mnp::solve(inst, {});
  const mnp::ContractionReport c =
      mnp::verify_contraction(inst, rep, mnp::UpdateKind::projected_gradient, cert, mnp::enumerate_circuits(inst.a()));
  EXPECT_EQ(c.steps_checked, 1);
  EXPECT_TRUE(c.contraction.pass);
}

TEST(ZeroingIdentity, HoldsAtStablePoints) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Instance inst = mnp::generate({mnp::Shape::rectangular, 4, 8, false, std::nullopt, seed});
    const mnp::SolveReport rep = mnp::solve(inst, {});
    const mnp::Iterate it = mnp::make_iterate(inst, rep.x_final);
    EXPECT_LT(mnp::zeroing_identity_error(inst, rep.x_final, it.free_indices()), 1e-12);
  }
}

}  // namespace
