// Copyright 2026 The Spinvar Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <string>

#include "spinvar/errors.hpp"
#include "spinvar/spin_algebra.hpp"
#include "spinvar/states.hpp"

namespace spinvar {

/// <psi|A|psi> for hermitian A. Throws DimensionMismatch on size mismatch and
/// NonHermitian when the imaginary residue exceeds 1e-12 * ||A||_F; the
/// residue is discarded after the check.
inline double expectation(const PureState& state, const SpinOperator& op) {
  if (state.dim() != op.dim())
    throw DimensionMismatch("state dimension " + std::to_string(state.dim()) +
                            " vs operator dimension " + std::to_string(op.dim()));
  const Complex value = state.amplitudes().dot(op.matrix() * state.amplitudes());
  const double scale = std::max(1.0, op.matrix().norm());
  if (std::abs(value.imag()) > 1e-12 * scale)
    throw NonHermitian("expectation has imaginary residue " + std::to_string(value.imag()));
  return value.real();
}

/// <A^2> - <A>^2. <A^2> is computed as ||A psi||^2, exactly real.
inline double variance(const PureState& state, const SpinOperator& op) {
  if (state.dim() != op.dim()) throw DimensionMismatch("variance: dimension mismatch");
  const CVector applied = op.matrix() * state.amplitudes();
  const Complex mean_c = state.amplitudes().dot(applied);
  const double scale = std::max(1.0, op.matrix().norm());
  if (std::abs(mean_c.imag()) > 1e-12 * scale)
    throw NonHermitian("variance of non-hermitian operator");
  return applied.squaredNorm() - mean_c.real() * mean_c.real();
}

/// Covariance sigma_AB = <AB + BA> - 2<A><B>.
inline double covariance(const PureState& state, const SpinOperator& a, const SpinOperator& b) {
  if (state.dim() != a.dim() || state.dim() != b.dim())
    throw DimensionMismatch("covariance: dimension mismatch");
  const CVector av = a.matrix() * state.amplitudes();
  const CVector bv = b.matrix() * state.amplitudes();
  const Complex ea = state.amplitudes().dot(av);
  const Complex eb = state.amplitudes().dot(bv);
  const double scale = std::max(1.0, a.matrix().norm() * b.matrix().norm());
  if (std::abs(ea.imag()) + std::abs(eb.imag()) > 1e-12 * scale)
    throw NonHermitian("covariance of non-hermitian operators");
  // <AB+BA> = 2 Re <A psi | B psi> for hermitian A, B
  return 2.0 * av.dot(bv).real() - 2.0 * ea.real() * eb.real();
}

/// <J_x>, <J_y>, <J_z> as a real 3-vector (units of hbar).
inline Eigen::Vector3d mean_spin_vector(const SpinAlgebra& algebra, const PureState& state) {
  return {expectation(state, algebra.jx), expectation(state, algebra.jy),
          expectation(state, algebra.jz)};
}

/// Invariant uncertainty Delta = sum_i Var J_i. Computed both as the variance
/// sum and as hbar^2 j(j+1) - sum_i <J_i>^2; the two routes must agree to
/// 1e-10 relative or the call throws InternalError.
inline double delta(const SpinAlgebra& algebra, const PureState& state) {
  if (state.spin() != algebra.s) throw DimensionMismatch("delta: state/algebra spin mismatch");
  const SpinOperator* ops[3] = {&algebra.jx, &algebra.jy, &algebra.jz};
  double variance_sum = 0.0;
  double mean_sq = 0.0;
  for (const SpinOperator* op : ops) {
    const CVector applied = op->matrix() * state.amplitudes();
    const double mean = state.amplitudes().dot(applied).real();
    variance_sum += applied.squaredNorm() - mean * mean;
    mean_sq += mean * mean;
  }
  const double casimir = algebra.casimir_value();
  const double via_casimir = casimir - mean_sq;
  if (std::abs(variance_sum - via_casimir) > 1e-10 * std::max(casimir, 1e-300))
    throw InternalError("delta routes disagree: " + std::to_string(variance_sum) + " vs " +
                        std::to_string(via_casimir));
  return variance_sum;
}

/// Per-state record of every quantity entering the uncertainty relations.
struct UncertaintyReport {
  std::array<double, 3> mean_j{};    // <J_i>, units hbar
  std::array<double, 3> variances{}; // Delta J_i^2, units hbar^2
  double covariance_xy = 0.0;        // sigma_{Jx Jy}, units hbar^2
  double delta = 0.0;                // sum of variances, units hbar^2
  double heisenberg_lhs = 0.0;       // Var Jx * Var Jy, units hbar^4
  double heisenberg_rhs = 0.0;       // (hbar^2/4) <J_z>^2
  double robertson_rhs = 0.0;        // (1/4)(sigma^2 + hbar^2 <J_z>^2)
  double invariant_msq = 0.0;        // <J_i><J_i>, units hbar^2
  bool heisenberg_saturated = false;
  bool both_sides_zero = false;      // lhs and rhs both below the absolute floor
  double hbar = 1.0;
};

/// Evaluates means, variances, the xy covariance, Delta and both inequality
/// sides on one state. Saturation is flagged relative to hbar^4 j^4 with an
/// absolute floor; when both sides sit below the floor the flag is set but
/// marked both_sides_zero.
inline UncertaintyReport inequality_report(const SpinAlgebra& algebra, const PureState& state) {
  if (state.spin() != algebra.s)
    throw DimensionMismatch("inequality_report: state/algebra spin mismatch");
  UncertaintyReport rep;
  rep.hbar = algebra.hbar;

  const SpinOperator* ops[3] = {&algebra.jx, &algebra.jy, &algebra.jz};
  CVector applied[3];
  for (int i = 0; i < 3; ++i) {
    applied[i] = ops[i]->matrix() * state.amplitudes();
    rep.mean_j[i] = state.amplitudes().dot(applied[i]).real();
    rep.variances[i] = applied[i].squaredNorm() - rep.mean_j[i] * rep.mean_j[i];
    rep.invariant_msq += rep.mean_j[i] * rep.mean_j[i];
  }
  rep.delta = rep.variances[0] + rep.variances[1] + rep.variances[2];
  const double casimir = algebra.casimir_value();
  if (std::abs(rep.delta - (casimir - rep.invariant_msq)) > 1e-10 * std::max(casimir, 1e-300))
    throw InternalError("inequality_report: delta routes disagree");

  rep.covariance_xy =
      2.0 * applied[0].dot(applied[1]).real() - 2.0 * rep.mean_j[0] * rep.mean_j[1];

  const double h2 = algebra.hbar * algebra.hbar;
  rep.heisenberg_lhs = rep.variances[0] * rep.variances[1];
  rep.heisenberg_rhs = 0.25 * h2 * rep.mean_j[2] * rep.mean_j[2];
  rep.robertson_rhs =
      0.25 * (rep.covariance_xy * rep.covariance_xy + h2 * rep.mean_j[2] * rep.mean_j[2]);

  const double j = algebra.s.j();
  const double scale_j4 = h2 * h2 * j * j * j * j;
  const double floor = 1e-14;
  rep.both_sides_zero = rep.heisenberg_lhs < floor && rep.heisenberg_rhs < floor;
  rep.heisenberg_saturated = std::abs(rep.heisenberg_lhs - rep.heisenberg_rhs) <=
                             1e-9 * std::max({rep.heisenberg_lhs, scale_j4, floor});
  return rep;
}

}  // namespace spinvar
