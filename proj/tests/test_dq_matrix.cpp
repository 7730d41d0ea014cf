#include <doctest.h>

#include <cmath>

#include "support.hpp"

using namespace dqform;
using dqtest::randomDualQuaternion;
using dqtest::randomHermitian;

namespace {

DQMatrix randomMatrix(SplitMix64& rng, int rows, int cols) {
  DQMatrix a(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) a(i, j) = randomDualQuaternion(rng);
  return a;
}

DQMatrix referenceProduct(const DQMatrix& a, const DQMatrix& b) {
  DQMatrix c = DQMatrix::Zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j)
      for (Eigen::Index k = 0; k < a.cols(); ++k) c(i, j) += a(i, k) * b(k, j);
  return c;
}

}  // namespace

TEST_CASE("matrix product matches the scalar expansion") {
  SplitMix64 rng(30);
  for (int t = 0; t < 10; ++t) {
    const DQMatrix a = randomMatrix(rng, 5, 4), b = randomMatrix(rng, 4, 6);
    const DQMatrix c = a * b;
    CHECK(maxAbsComponent((c - referenceProduct(a, b)).eval()) <= 1e-12);
  }
  // identity and the parts rule (AB, A B_d + A_d B) on 2x2
  const DQMatrix a = randomMatrix(rng, 2, 2), b = randomMatrix(rng, 2, 2);
  CHECK(maxAbsComponent(((a * DQMatrix::Identity(2, 2)).eval() - a).eval()) == 0.0);
  const DQMatrix c = a * b;
  const QMatrix cs = standardPart(c), cd = dualPart(c);
  const QMatrix as = standardPart(a), ad = dualPart(a);
  const QMatrix bs = standardPart(b), bd = dualPart(b);
  CHECK(frobeniusNorm((cs - as * bs).eval()) <= 1e-12);
  CHECK(frobeniusNorm((cd - (as * bd + ad * bs)).eval()) <= 1e-12);
}

TEST_CASE("conjugate transpose reverses products") {
  SplitMix64 rng(31);
  for (int t = 0; t < 20; ++t) {
    const DQMatrix a = randomMatrix(rng, 3, 4), b = randomMatrix(rng, 4, 5);
    const DQMatrix lhs = ((a * b).eval()).adjoint();
    const DQMatrix bt = b.adjoint(), at = a.adjoint();
    CHECK(maxAbsComponent((lhs - bt * at).eval()) <= 1e-12);
    // involution, exact
    const DQMatrix back = at.adjoint();
    CHECK(maxAbsComponent((back - a).eval()) == 0.0);
  }
}

TEST_CASE("hermitian predicate") {
  SplitMix64 rng(32);
  DQMatrix h = randomHermitian(rng, 4);
  CHECK(isHermitian(h));
  h(1, 2).s.x += 1e-6;
  CHECK_FALSE(isHermitian(h));
  CHECK_FALSE(isHermitian(randomMatrix(rng, 2, 3)));
}

TEST_CASE("matrix inverse") {
  const DQMatrix id = DQMatrix::Identity(3, 3);
  CHECK(maxAbsComponent((inverse(id) - id).eval()) <= 1e-15);

  DQMatrix d = DQMatrix::Zero(2, 2);
  d(0, 0) = DualQuaterniond(2.0);
  d(1, 1) = DualQuaterniond(Quaterniond::i(), Quaterniond());
  const DQMatrix dinv = inverse(d);
  CHECK(maxAbsComponent((dinv(0, 0) - DualQuaterniond(0.5))) <= 1e-15);
  CHECK(maxAbsComponent((dinv(1, 1) - DualQuaterniond(-Quaterniond::i(), Quaterniond()))) <= 1e-15);

  // A = I, A_d = N gives I - N eps for any N
  SplitMix64 rng(33);
  DQMatrix nilp = DQMatrix::Identity(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) nilp(i, j).d = dqtest::randomQuaternion(rng);
  const DQMatrix ninv = inverse(nilp);
  DQMatrix expected = DQMatrix::Identity(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) expected(i, j).d = -nilp(i, j).d;
  CHECK(maxAbsComponent((ninv - expected).eval()) <= 1e-15);

  for (int t = 0; t < 20; ++t) {
    const int n = 2 + int(rng.below(5));
    const DQMatrix a = randomMatrix(rng, n, n);
    DQMatrix prod = a * inverse(a);
    for (int i = 0; i < n; ++i) prod(i, i) -= DualQuaterniond(1.0);
    CHECK(maxAbsComponent(prod) <= 1e-8);
  }

  DQMatrix sing = DQMatrix::Zero(2, 2);
  sing(0, 0) = sing(0, 1) = sing(1, 0) = sing(1, 1) = DualQuaterniond(1.0);
  CHECK_THROWS_AS(inverse(sing), Singular);
  CHECK_THROWS_AS(inverse(randomMatrix(rng, 2, 3)), DimensionMismatch);
}

TEST_CASE("unitary predicate") {
  CHECK(isUnitary(DQMatrix::Identity(3, 3)));
  SplitMix64 rng(34);
  DQMatrix u = DQMatrix::Zero(2, 2);
  // diag of unit dual quaternions is unitary
  u(0, 0) = dqtest::randomPose(rng).dq();
  u(1, 1) = dqtest::randomPose(rng).dq();
  CHECK(isUnitary(u));
  u(0, 1) = DualQuaterniond(0.1);
  CHECK_FALSE(isUnitary(u));
}

TEST_CASE("frobenius norms split by part") {
  DQMatrix a = DQMatrix::Zero(1, 2);
  a(0, 0) = DualQuaterniond(Quaterniond(3, 0, 0, 0), Quaterniond());
  a(0, 1) = DualQuaterniond(Quaterniond(), Quaterniond(0, 4, 0, 0));
  CHECK(frobeniusNormStandard(a) == 3.0);
  CHECK(frobeniusNormDual(a) == 4.0);
  CHECK(frobeniusNorm(a) == 5.0);
}
