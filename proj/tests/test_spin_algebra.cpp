// Copyright 2026 The Spinvar Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <complex>

#include "catch_amalgamated.hpp"

#include "spinvar/spin_algebra.hpp"

using namespace spinvar;

namespace {

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("spin parsing accepts half-integers and rejects everything else") {
  CHECK(SpinQuantum::parse("1/2").twice_j() == 1);
  CHECK(SpinQuantum::parse("3").twice_j() == 6);
  CHECK(SpinQuantum::parse("5/2").twice_j() == 5);
  CHECK(SpinQuantum::parse("0").twice_j() == 0);
  CHECK(SpinQuantum::parse("10").dimension() == 21);

  for (const char* bad : {"-1", "-1/2", "2/2", "1/3", "0.5", "", "j", "1/", "/2", "1/2/3"})
    CHECK_THROWS_AS(SpinQuantum::parse(bad), Error);
}

TEST_CASE("row labels run from m = +j down to m = -j") {
  const SpinQuantum s(3);  // j = 3/2
  CHECK(s.dimension() == 4);
  CHECK(s.twice_m_at(0) == 3);
  CHECK(s.twice_m_at(3) == -3);
  CHECK(s.row_of_twice_m(1).value() == 1);
  CHECK_FALSE(s.row_of_twice_m(5).has_value());
  CHECK_FALSE(s.row_of_twice_m(2).has_value());  // parity mismatch
}

TEST_CASE("J_z is diagonal with entries hbar m") {
  const SpinQuantum s(4);  // j = 2
  const SpinOperator jz = build_jz(s, 2.0);
  for (int row = 0; row < s.dimension(); ++row)
    CHECK(jz.matrix()(row, row) == Complex(2.0 * s.m_at(row), 0.0));
  CHECK(jz.hermiticity_defect() == 0.0);
}

TEST_CASE("ladder entries match the exact integer coefficient formula") {
  const SpinQuantum s(5);  // j = 5/2
  auto [jp, jm] = build_ladder(s, 1.0);
  for (int col = 1; col < s.dimension(); ++col) {
    const double m = s.m_at(col);
    const double j = s.j();
    const double expected = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
    CHECK(jp.matrix()(col - 1, col).real() == Catch::Approx(expected).epsilon(1e-15));
  }
  // J_- is the exact adjoint, not a separately rounded build
  CHECK(max_abs(jm.matrix() - jp.matrix().adjoint()) == 0.0);
}

TEST_CASE("commutation relations and Casimir hold to roundoff up to j = 50") {
  for (int tj : {1, 2, 3, 4, 10, 40, 100}) {
    const SpinQuantum s(tj);
    const SpinAlgebra algebra = SpinAlgebra::build(s, 1.0);
    const double scale = std::max(1.0, algebra.casimir_value());
    const Complex i(0.0, 1.0);

    const CMatrix& jx = algebra.jx.matrix();
    const CMatrix& jy = algebra.jy.matrix();
    const CMatrix& jz = algebra.jz.matrix();
    CHECK(max_abs(jx * jy - jy * jx - i * jz) / scale < 1e-10);
    CHECK(max_abs(jy * jz - jz * jy - i * jx) / scale < 1e-10);
    CHECK(max_abs(jz * jx - jx * jz - i * jy) / scale < 1e-10);

    const CMatrix id = CMatrix::Identity(s.dimension(), s.dimension());
    CHECK(max_abs(algebra.j_squared.matrix() - algebra.casimir_value() * id) / scale < 1e-10);
  }
}

TEST_CASE("hbar scales the generators linearly") {
  const SpinQuantum s(2);
  const SpinAlgebra unit = SpinAlgebra::build(s, 1.0);
  const SpinAlgebra doubled = SpinAlgebra::build(s, 2.0);
  CHECK(max_abs(doubled.jx.matrix() - 2.0 * unit.jx.matrix()) == 0.0);
  CHECK(max_abs(doubled.jz.matrix() - 2.0 * unit.jz.matrix()) == 0.0);
  CHECK(doubled.casimir_value() == 4.0 * unit.casimir_value());
  CHECK_THROWS_AS(SpinAlgebra::build(s, 0.0), Error);
  CHECK_THROWS_AS(SpinAlgebra::build(s, -1.0), Error);
}

TEST_CASE("operator constructor validates dimensions") {
  const SpinQuantum s(2);
  CHECK_THROWS_AS(SpinOperator(s, 1.0, CMatrix::Zero(2, 2)), DimensionMismatch);
}

TEST_CASE("group elements are unitary and compose along a fixed axis") {
  const SpinQuantum s(3);
  const GroupElement identity = group_element(s, Eigen::Vector3d::Zero());
  CHECK(max_abs(identity.matrix - CMatrix::Identity(4, 4)) < 1e-14);

  const Eigen::Vector3d r(0.3, -1.2, 2.5);
  const GroupElement u = group_element(s, r);
  CHECK(u.unitarity_defect() < 1e-13);
  CHECK((u.coordinates - r).norm() == 0.0);

  // e^{iaJ_z} e^{ibJ_z} = e^{i(a+b)J_z}
  const GroupElement a = group_element(s, {0.0, 0.0, 0.7});
  const GroupElement b = group_element(s, {0.0, 0.0, 1.1});
  const GroupElement ab = group_element(s, {0.0, 0.0, 1.8});
  CHECK(max_abs(a.matrix * b.matrix - ab.matrix) < 1e-13);

  // U(0,0,phi) is diagonal with phases e^{i phi m}
  const double phi = 0.9;
  const GroupElement rz = group_element(s, {0.0, 0.0, phi});
  for (int row = 0; row < s.dimension(); ++row)
    CHECK(std::abs(rz.matrix(row, row) - std::polar(1.0, phi * s.m_at(row))) < 1e-13);

  CHECK_THROWS_AS(group_element(s, {0.0, 0.0, std::numeric_limits<double>::infinity()}), Error);
}

TEST_CASE("adjoint action is a proper rotation") {
  const SpinQuantum s(4);

  // rotation about z: U^+ J_x U = cos(phi) J_x + sin(phi) J_y for U = e^{i phi J_z}
  const double phi = 0.6;
  const Eigen::Matrix3d lambda = adjoint_matrix(s, {0.0, 0.0, phi});
  Eigen::Matrix3d expected;
  expected << std::cos(phi), std::sin(phi), 0.0,
             -std::sin(phi), std::cos(phi), 0.0,
              0.0, 0.0, 1.0;
  CHECK((lambda - expected).cwiseAbs().maxCoeff() < 1e-12);

  // generic coordinates: orthogonal with determinant +1
  const Eigen::Matrix3d generic = adjoint_matrix(s, {1.3, -0.4, 0.8});
  CHECK((generic * generic.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() <
        1e-12);
  CHECK(generic.determinant() == Catch::Approx(1.0).epsilon(1e-12));

  CHECK(adjoint_matrix(s, Eigen::Vector3d::Zero()).isApprox(Eigen::Matrix3d::Identity(), 1e-13));
  CHECK(adjoint_matrix(SpinQuantum(0), {0.2, 0.4, 0.6}).isApprox(Eigen::Matrix3d::Identity()));
}

TEST_CASE("adjoint action represents the group: Lambda(r) applied twice") {
  const SpinQuantum s(2);
  const Eigen::Vector3d axis(0.0, 0.0, 0.5);
  const Eigen::Matrix3d once = adjoint_matrix(s, axis);
  const Eigen::Matrix3d twice = adjoint_matrix(s, 2.0 * axis);
  CHECK((once * once - twice).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("trivial representation j = 0") {
  const SpinQuantum s(0);
  const SpinAlgebra algebra = SpinAlgebra::build(s, 1.0);
  CHECK(algebra.jx.matrix()(0, 0) == Complex(0.0, 0.0));
  CHECK(algebra.jz.matrix()(0, 0) == Complex(0.0, 0.0));
  CHECK(algebra.casimir_value() == 0.0);
  const GroupElement u = group_element(s, {1.0, 2.0, 3.0});
  CHECK(std::abs(u.matrix(0, 0) - Complex(1.0, 0.0)) < 1e-15);
}
