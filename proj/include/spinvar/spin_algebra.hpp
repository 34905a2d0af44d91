// Copyright 2026 The Spinvar Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "spinvar/errors.hpp"

namespace spinvar {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Spin label j of an irreducible representation, stored exactly as the
/// integer 2j. Dimension of the carrier space is 2j+1. Basis rows are ordered
/// by descending m, i.e. row 0 carries m = j.
class SpinQuantum {
public:
  explicit SpinQuantum(int twice_j) : twice_j_(twice_j) {
    if (twice_j < 0) throw Error("spin label 2j must be non-negative, got " + std::to_string(twice_j));
  }

  /// Parses "1/2", "3", "5/2". Throws Error on anything else (including
  /// negative or non-half-integer values).
  static SpinQuantum parse(std::string_view text) {
    auto fail = [&] { throw Error("invalid spin '" + std::string(text) + "'"); };
    if (text.empty()) fail();
    std::size_t slash = text.find('/');
    auto to_int = [&](std::string_view part) -> int {
      if (part.empty()) fail();
      int value = 0;
      for (char c : part) {
        if (c < '0' || c > '9') fail();
        value = value * 10 + (c - '0');
        if (value > 1000000) fail();
      }
      return value;
    };
    if (text.front() == '-') fail();
    if (slash == std::string_view::npos) return SpinQuantum(2 * to_int(text));
    if (to_int(text.substr(slash + 1)) != 2) fail();
    const int numerator = to_int(text.substr(0, slash));
    if (numerator % 2 == 0) fail();  // "2/2" and friends: not in lowest terms
    return SpinQuantum(numerator);
  }

  int twice_j() const { return twice_j_; }
  double j() const { return 0.5 * twice_j_; }
  int dimension() const { return twice_j_ + 1; }

  /// 2m for basis row `row` (descending order: row 0 is m = j).
  int twice_m_at(int row) const { return twice_j_ - 2 * row; }
  double m_at(int row) const { return 0.5 * twice_m_at(row); }

  /// Row index of the basis state with label 2m, or nullopt if 2m is not a
  /// valid label for this representation.
  std::optional<int> row_of_twice_m(int twice_m) const {
    if (std::abs(twice_m) > twice_j_) return std::nullopt;
    if ((twice_j_ - twice_m) % 2 != 0) return std::nullopt;
    return (twice_j_ - twice_m) / 2;
  }

  /// Human-readable label: "1/2", "3", ...
  std::string to_string() const {
    if (twice_j_ % 2 == 0) return std::to_string(twice_j_ / 2);
    return std::to_string(twice_j_) + "/2";
  }

  friend bool operator==(SpinQuantum a, SpinQuantum b) { return a.twice_j_ == b.twice_j_; }
  friend bool operator!=(SpinQuantum a, SpinQuantum b) { return !(a == b); }

private:
  int twice_j_;
};

/// Dense operator acting on a spin-j carrier space, together with the hbar
/// scale it was built with.
class SpinOperator {
public:
  SpinOperator(SpinQuantum s, double hbar, CMatrix entries)
      : s_(s), hbar_(hbar), entries_(std::move(entries)) {
    if (hbar_ <= 0.0) throw Error("hbar must be positive");
    if (entries_.rows() != s_.dimension() || entries_.cols() != s_.dimension())
      throw DimensionMismatch("operator entries do not match spin dimension");
  }

  SpinQuantum spin() const { return s_; }
  double hbar() const { return hbar_; }
  int dim() const { return s_.dimension(); }
  const CMatrix& matrix() const { return entries_; }

  /// max_ij |A - A^dagger|.
  double hermiticity_defect() const {
    return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  }

  double max_abs() const { return entries_.cwiseAbs().maxCoeff(); }

private:
  SpinQuantum s_;
  double hbar_;
  CMatrix entries_;
};

/// J_z: diagonal with entries hbar*m, m = j, j-1, ..., -j.
inline SpinOperator build_jz(SpinQuantum s, double hbar = 1.0) {
  const int d = s.dimension();
  CMatrix m = CMatrix::Zero(d, d);
  for (int row = 0; row < d; ++row) m(row, row) = hbar * s.m_at(row);
  return SpinOperator(s, hbar, std::move(m));
}

/// Ladder pair (J_+, J_-) with J_+|m> = hbar*sqrt(j(j+1)-m(m+1))|m+1> and
/// J_- = (J_+)^dagger exactly.
inline std::pair<SpinOperator, SpinOperator> build_ladder(SpinQuantum s, double hbar = 1.0) {
  const int d = s.dimension();
  const int tj = s.twice_j();
  CMatrix jp = CMatrix::Zero(d, d);
  for (int col = 1; col < d; ++col) {
    // j(j+1) - m(m+1) = (2j(2j+2) - 2m(2m+2)) / 4, exact in integers
    const int tm = s.twice_m_at(col);
    const long long num =
        static_cast<long long>(tj) * (tj + 2) - static_cast<long long>(tm) * (tm + 2);
    jp(col - 1, col) = hbar * std::sqrt(static_cast<double>(num) / 4.0);
  }
  CMatrix jm = jp.adjoint();
  return {SpinOperator(s, hbar, std::move(jp)), SpinOperator(s, hbar, std::move(jm))};
}

/// (J_x, J_y) from the ladder pair: J_x = (J_+ + J_-)/2, J_y = (J_+ - J_-)/(2i).
inline std::pair<SpinOperator, SpinOperator> build_jx_jy(SpinQuantum s, double hbar = 1.0) {
  auto [jp, jm] = build_ladder(s, hbar);
  CMatrix jx = 0.5 * (jp.matrix() + jm.matrix());
  CMatrix jy = (jp.matrix() - jm.matrix()) / Complex(0.0, 2.0);
  return {SpinOperator(s, hbar, std::move(jx)), SpinOperator(s, hbar, std::move(jy))};
}

/// Casimir J_x^2 + J_y^2 + J_z^2; equals hbar^2 j(j+1) Id within roundoff.
inline SpinOperator casimir(SpinQuantum s, double hbar = 1.0) {
  auto [jx, jy] = build_jx_jy(s, hbar);
  SpinOperator jz = build_jz(s, hbar);
  CMatrix c = jx.matrix() * jx.matrix() + jy.matrix() * jy.matrix() + jz.matrix() * jz.matrix();
  return SpinOperator(s, hbar, std::move(c));
}

/// Group element U(r) = exp(i r.J / hbar) in canonical coordinates.
struct GroupElement {
  Eigen::Vector3d coordinates;
  CMatrix matrix;

  double unitarity_defect() const {
    const auto d = matrix.rows();
    return (matrix.adjoint() * matrix - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  }
};

/// Builds U(r) by eigendecomposition of the hermitian generator r.J/hbar.
/// Unitary to roundoff for any finite r.
inline GroupElement group_element(SpinQuantum s, const Eigen::Vector3d& r, double hbar = 1.0) {
  if (!r.allFinite()) throw Error("group coordinates must be finite");
  auto [jx, jy] = build_jx_jy(s, 1.0);
  SpinOperator jz = build_jz(s, 1.0);
  // r.J/hbar is hbar-free when built from unit-hbar generators
  CMatrix h = r.x() * jx.matrix() + r.y() * jy.matrix() + r.z() * jz.matrix();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const Eigen::VectorXd& phases = es.eigenvalues();
  CVector exp_phases(phases.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k)
    exp_phases(k) = std::polar(1.0, phases(k));
  CMatrix u = es.eigenvectors() * exp_phases.asDiagonal() * es.eigenvectors().adjoint();
  (void)hbar;
  return GroupElement{r, std::move(u)};
}

/// Adjoint-action matrix: U^+(r) J_i U(r) = sum_j Lambda_i^j J_j.
///
/// Extracted by projecting onto the generators, which are orthogonal under
/// the trace inner product with tr(J_i J_i) = hbar^2 j(j+1)(2j+1)/3. Throws
/// SolveFailure when the projection leaves a residual above 1e-8 per entry.
/// For the trivial representation (2j = 0) the action is empty and the
/// identity is returned.
inline Eigen::Matrix3d adjoint_matrix(SpinQuantum s, const Eigen::Vector3d& r) {
  if (s.twice_j() == 0) return Eigen::Matrix3d::Identity();
  auto [jx, jy] = build_jx_jy(s, 1.0);
  SpinOperator jz = build_jz(s, 1.0);
  const CMatrix* gen[3] = {&jx.matrix(), &jy.matrix(), &jz.matrix()};
  const double j = s.j();
  const double trace_norm = j * (j + 1.0) * (2.0 * j + 1.0) / 3.0;

  const GroupElement u = group_element(s, r, 1.0);
  Eigen::Matrix3d lambda;
  double residual = 0.0;
  for (int i = 0; i < 3; ++i) {
    const CMatrix rotated = u.matrix.adjoint() * (*gen[i]) * u.matrix;
    CMatrix fit = CMatrix::Zero(s.dimension(), s.dimension());
    for (int k = 0; k < 3; ++k) {
      const Complex coeff = (gen[k]->adjoint() * rotated).trace() / trace_norm;
      lambda(i, k) = coeff.real();
      fit += lambda(i, k) * (*gen[k]);
    }
    residual = std::max(residual, (rotated - fit).cwiseAbs().maxCoeff());
  }
  if (residual > 1e-8)
    throw SolveFailure("adjoint fit residual " + std::to_string(residual) + " exceeds 1e-8");
  return lambda;
}

/// The generator set for one (j, hbar), built once and reused.
struct SpinAlgebra {
  SpinQuantum s;
  double hbar;
  SpinOperator jx, jy, jz, jplus, jminus, j_squared;

  static SpinAlgebra build(SpinQuantum s, double hbar = 1.0) {
    auto [jx, jy] = build_jx_jy(s, hbar);
    auto [jp, jm] = build_ladder(s, hbar);
    return SpinAlgebra{s,  hbar,        std::move(jx), std::move(jy), build_jz(s, hbar),
                       std::move(jp), std::move(jm), casimir(s, hbar)};
  }

  /// hbar^2 j(j+1), the Casimir eigenvalue.
  double casimir_value() const {
    const double j = s.j();
    return hbar * hbar * j * (j + 1.0);
  }
};

}  // namespace spinvar
