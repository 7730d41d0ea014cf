#include <doctest.h>

#include <cmath>

#include "support.hpp"

using namespace dqform;
using dqtest::randomDualQuaternion;
using dqtest::randomImaginary;
using dqtest::randomPose;
using dqtest::randomUnitAxis;
using dqtest::randomUnitQuaternion;

namespace {

const double kPi = 3.14159265358979323846;

bool nearQ(const Quaterniond& a, const Quaterniond& b, double tol = 1e-12) {
  const Quaterniond d = a - b;
  return std::abs(d.w) <= tol && std::abs(d.x) <= tol && std::abs(d.y) <= tol &&
         std::abs(d.z) <= tol;
}

bool near(const DualQuaterniond& a, const DualQuaterniond& b, double tol = 1e-12) {
  return nearQ(a.s, b.s, tol) && nearQ(a.d, b.d, tol);
}

bool nearDn(const DualNumberd& a, const DualNumberd& b, double tol = 1e-10) {
  return std::abs(a.s - b.s) <= tol && std::abs(a.d - b.d) <= tol;
}

}  // namespace

TEST_CASE("dual quaternion product") {
  const DualQuaterniond x(Quaterniond::i(), Quaterniond::j());
  CHECK(x * x == DualQuaterniond(Quaterniond(-1), Quaterniond()));  // ij + ji = 0
  SplitMix64 rng(20);
  for (int t = 0; t < 200; ++t) {
    const DualQuaterniond q = randomDualQuaternion(rng);
    CHECK(q * DualQuaterniond(1.0) == q);
    const DualQuaterniond n = DualNumberd(2, 3);
    CHECK(near(n * q, q * n, 1e-15));  // dual numbers commute with everything
  }
}

TEST_CASE("dual quaternion magnitude") {
  CHECK(nearDn(DualQuaterniond(Quaterniond::i(), Quaterniond::j()).magnitude(), {1, 0}, 1e-15));
  CHECK(nearDn(DualQuaterniond(Quaterniond(), Quaterniond(0, 3, 4, 0)).magnitude(), {0, 5}, 1e-15));
  CHECK(nearDn(DualQuaterniond(2.0).magnitude(), {2, 0}, 1e-15));
  SplitMix64 rng(21);
  for (int t = 0; t < 100; ++t) {
    // unit dual quaternions have magnitude exactly 1 + 0 eps
    const Posed p = randomPose(rng);
    CHECK(nearDn(p.dq().magnitude(), {1, 0}, 1e-10));
  }
}

TEST_CASE("dual quaternion inverse") {
  const DualQuaterniond x(Quaterniond::i(), Quaterniond::j());
  CHECK(near(x.inverse(), conj(x), 1e-15));  // unit case
  CHECK(near(x * x.inverse(), DualQuaterniond(1.0), 1e-15));
  CHECK(near(DualQuaterniond(2.0).inverse(), DualQuaterniond(0.5), 1e-15));
  CHECK_THROWS_AS(DualQuaterniond(Quaterniond(), Quaterniond::i()).inverse(), NonAppreciable);
  SplitMix64 rng(22);
  for (int t = 0; t < 200; ++t) {
    const DualQuaterniond q = randomDualQuaternion(rng);
    if (q.s.norm() < 1e-3) continue;
    CHECK(near(q * q.inverse(), DualQuaterniond(1.0), 1e-12));
    CHECK(near(q.inverse() * q, DualQuaterniond(1.0), 1e-12));
  }
}

TEST_CASE("pose construction and accessors") {
  CHECK(near(Posed(UnitQuaterniond(), Quaterniond(0, 2, 0, 0)).dq(),
             DualQuaterniond(Quaterniond(1), Quaterniond::i()), 1e-15));
  CHECK(near(Posed(UnitQuaterniond(Quaterniond::i()), Quaterniond()).dq(),
             DualQuaterniond(Quaterniond::i(), Quaterniond()), 1e-15));
  // (q = k, p_b = 2j) -> k + (kj) eps = k - i eps
  CHECK(near(Posed(UnitQuaterniond(Quaterniond::k()), Quaterniond(0, 0, 2, 0)).dq(),
             DualQuaterniond(Quaterniond::k(), -Quaterniond::i()), 1e-15));

  SplitMix64 rng(23);
  for (int t = 0; t < 300; ++t) {
    const UnitQuaterniond q = randomUnitQuaternion(rng);
    const Quaterniond pb = randomImaginary(rng, 2.0);
    const Posed pose(q, pb);
    CHECK(nearQ(pose.rotation().value(), q.value(), 1e-15));
    CHECK(nearQ(pose.translation(), pb, 1e-12));  // p_b = 2 q* q_d
    // unit constraint Eq-form: q q_d* + q_d q* = 0
    const DualQuaterniond& dq = pose.dq();
    CHECK(std::abs(dot(dq.s, dq.d)) <= 1e-12);
  }
  CHECK_THROWS_AS(Posed(DualQuaterniond(Quaterniond(2, 0, 0, 0), Quaterniond())), NotUnit);
  CHECK_THROWS_AS(Posed(DualQuaterniond(Quaterniond(1), Quaterniond(1))), NotUnit);
  CHECK_THROWS_AS(Posed(UnitQuaterniond(), Quaterniond(1, 1, 0, 0)), NotImaginary);
}

TEST_CASE("pose closure and Property A") {
  SplitMix64 rng(24);
  for (int t = 0; t < 300; ++t) {
    const Posed a = randomPose(rng), b = randomPose(rng);
    const Posed ab = a * b;
    const DualNumberd mag = ab.dq().magnitude();
    CHECK(nearDn(mag, {1, 0}, 1e-9));
    // relative configuration: q_ij = q_i^-1 q_j, q_j = q_i q_ij
    const Posed rel = a.inverse() * b;
    CHECK(near((a * rel).dq(), b.dq(), 1e-10));
  }
}

TEST_CASE("magnitude is multiplicative") {
  SplitMix64 rng(25);
  for (int t = 0; t < 300; ++t) {
    const DualQuaterniond p = randomDualQuaternion(rng), q = randomDualQuaternion(rng);
    if (p.s.norm() < 1e-3 || q.s.norm() < 1e-3) continue;
    const DualNumberd lhs = (p * q).magnitude();
    const DualNumberd rhs = p.magnitude() * q.magnitude();
    CHECK(std::abs(lhs.s - rhs.s) <= 1e-9 * (1 + std::abs(rhs.s)));
    CHECK(std::abs(lhs.d - rhs.d) <= 1e-9 * (1 + std::abs(rhs.d)));
  }
}

TEST_CASE("pose log and exp") {
  // pure translation p_b = 2i: log = 0 + i eps
  const Posed trans(UnitQuaterniond(), Quaterniond(0, 2, 0, 0));
  CHECK(near(log(trans), DualQuaterniond(Quaterniond(), Quaterniond::i()), 1e-15));
  // pure rotation about i by pi: log = (pi/2) i
  const Posed rot(UnitQuaterniond(Quaterniond::i()), Quaterniond());
  CHECK(near(log(rot), DualQuaterniond(Quaterniond(0, kPi / 2, 0, 0), Quaterniond()), 1e-15));
  CHECK(near(log(Posed()), DualQuaterniond(), 1e-15));

  SplitMix64 rng(26);
  for (int t = 0; t < 1000; ++t) {
    const double theta = rng.uniform(0.01, 2 * kPi - 0.01);
    const Posed pose(rotationFromAxisAngle(theta, randomUnitAxis(rng)), randomImaginary(rng, 2.0));
    const DualQuaterniond l = log(pose);
    CHECK(l.isImaginary(1e-12));
    CHECK(near(exp(l).dq(), pose.dq(), 1e-9));
  }
}

TEST_CASE("kinematics step") {
  const Posed id;
  const Twistd zero;
  CHECK(near(kinematicsStep(id, zero, 0.1, Integrator::Rk4).dq(), id.dq(), 1e-15));

  // translation-only twist from identity: one euler step of dt = 0.1 at
  // pdot = 2i gives p_b = 0.2i exactly.
  const Twistd slide = Twistd::fromBodyVelocities(Quaterniond(), Quaterniond(0, 2, 0, 0), Quaterniond());
  const Posed after = kinematicsStep(id, slide, 0.1, Integrator::Euler);
  CHECK(nearQ(after.translation(), Quaterniond(0, 0.2, 0, 0), 1e-15));

  // constant rotation at omega = pi k for t = 1 reaches the attitude of the
  // closed-form exponential, uq_exp(pi, k) = k.
  Posed pose;
  const Twistd spin(Quaterniond(0, 0, 0, kPi), Quaterniond());
  for (int s = 0; s < 1000; ++s) pose = kinematicsStep(pose, spin, 1e-3, Integrator::Rk4);
  CHECK(nearQ(pose.rotation().value(), Quaterniond::k(), 1e-6));

  CHECK_THROWS_AS(kinematicsStep(id, Twistd(Quaterniond(0, 30, 0, 0), Quaterniond()), 0.5,
                                 Integrator::Euler),
                  StepRejected);
  CHECK_THROWS_AS(kinematicsStep(id, zero, -1.0, Integrator::Euler), DomainError);
}

TEST_CASE("twist assembly") {
  const Quaterniond w(0, 1, 2, 3), pdot(0, -1, 0, 1), p(0, 0.5, 0.5, 0);
  const Twistd xi = Twistd::fromBodyVelocities(w, pdot, p);
  CHECK(xi.xi().s == w);
  CHECK(xi.xi().d == pdot + cross(w, p));
  CHECK_THROWS_AS(Twistd(DualQuaterniond(Quaterniond(1), Quaterniond())), NotImaginary);
  CHECK_THROWS_AS(Twistd::fromBodyVelocities(Quaterniond(1), pdot, p), NotImaginary);
}

TEST_CASE("pose adjoint") {
  SplitMix64 rng(27);
  const DualQuaterniond v(randomImaginary(rng), randomImaginary(rng));
  CHECK(near(adjoint(Posed(), v), v, 1e-15));
  // q = i (zero translation), v = j: i j (-i) = -j
  const Posed qi(UnitQuaterniond(Quaterniond::i()), Quaterniond());
  CHECK(near(adjoint(qi, DualQuaterniond(Quaterniond::j(), Quaterniond())),
             DualQuaterniond(-Quaterniond::j(), Quaterniond()), 1e-15));
  // reduces to the quaternion adjoint on the standard part
  for (int t = 0; t < 200; ++t) {
    const Posed pose = randomPose(rng);
    const DualQuaterniond w(randomImaginary(rng), randomImaginary(rng));
    const DualQuaterniond aw = adjoint(pose, w);
    CHECK(aw.isImaginary(1e-12));
    const DualNumberd lhs = aw.magnitude(), rhs = w.magnitude();
    CHECK(std::abs(lhs.s - rhs.s) <= 1e-12 * (1 + std::abs(rhs.s)));
    CHECK(std::abs(lhs.d - rhs.d) <= 1e-11 * (1 + std::abs(rhs.d)));

    const Posed rotOnly(pose.rotation(), Quaterniond());
    const Quaterniond vs = randomImaginary(rng);
    CHECK(nearQ(adjoint(rotOnly, DualQuaterniond(vs, Quaterniond())).s,
                adjoint(pose.rotation(), vs), 1e-12));
  }
  CHECK_THROWS_AS(adjoint(Posed(), DualQuaterniond(1.0)), NotImaginary);
}

TEST_CASE("left-invariant error") {
  SplitMix64 rng(28);
  for (int t = 0; t < 200; ++t) {
    const Posed target = randomPose(rng), pose = randomPose(rng);
    CHECK(near(leftInvariantError(target, target).dq(), DualQuaterniond(1.0), 1e-12));
    CHECK(near(leftInvariantError(Posed(), pose).dq(), pose.dq(), 1e-15));
    const Posed err = leftInvariantError(target, pose);
    // split: q_e = q_t* q and p_e = p - Ad_{q_e*} p_t
    CHECK(nearQ(err.rotation().value(),
                target.rotation().value().conjugate() * pose.rotation().value(), 1e-12));
    const Quaterniond expected =
        pose.translation() - adjoint(err.rotation().conjugate(), target.translation());
    CHECK(nearQ(err.translation(), expected, 1e-10));
  }
}
