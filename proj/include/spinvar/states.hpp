// Copyright 2026 The Spinvar Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "spinvar/errors.hpp"
#include "spinvar/numerics.hpp"
#include "spinvar/rng.hpp"
#include "spinvar/spin_algebra.hpp"

namespace spinvar {

/// Normalized state vector of a spin-j representation. Amplitudes are indexed
/// by descending m (row 0 holds c_j). Global phase carries no meaning; use
/// fidelity() for equality up to phase.
class PureState {
public:
  PureState(SpinQuantum s, CVector amplitudes) : s_(s), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != s_.dimension())
      throw DimensionMismatch("amplitude vector does not match spin dimension");
    const double n = amplitudes_.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw Error("state vector has zero or non-finite norm");
    amplitudes_ /= n;
  }

  SpinQuantum spin() const { return s_; }
  int dim() const { return s_.dimension(); }
  const CVector& amplitudes() const { return amplitudes_; }

  /// |sum |c|^2 - 1|, should be at roundoff level by construction.
  double norm_defect() const { return std::abs(amplitudes_.squaredNorm() - 1.0); }

  /// Rotates the global phase so the first significant amplitude is
  /// real-positive. Deterministic representative of the ray.
  PureState gauge_fixed() const {
    const double max_abs = amplitudes_.cwiseAbs().maxCoeff();
    for (Eigen::Index k = 0; k < amplitudes_.size(); ++k) {
      const double a = std::abs(amplitudes_(k));
      if (a > 1e-14 * max_abs) {
        PureState out = *this;
        out.amplitudes_ *= std::conj(amplitudes_(k)) / a;
        return out;
      }
    }
    return *this;
  }

private:
  SpinQuantum s_;
  CVector amplitudes_;
};

inline Complex overlap(const PureState& a, const PureState& b) {
  if (a.spin() != b.spin()) throw DimensionMismatch("overlap of states with different spin");
  return a.amplitudes().dot(b.amplitudes());  // Eigen dot conjugates the left factor
}

/// |<a|b>|, the phase-free notion of state equality (1 means same ray).
inline double fidelity(const PureState& a, const PureState& b) { return std::abs(overlap(a, b)); }

/// Coherent-state label: a point of the complex plane or the point at
/// infinity that the analytic chart misses (it maps to |-j>).
class CoherentLabel {
public:
  static CoherentLabel finite(Complex z) { return CoherentLabel(z, false); }
  static CoherentLabel infinity() { return CoherentLabel(Complex(0, 0), true); }

  bool is_infinity() const { return infinite_; }
  Complex z() const { return z_; }

private:
  CoherentLabel(Complex z, bool infinite) : z_(z), infinite_(infinite) {}
  Complex z_;
  bool infinite_;
};

/// J_z eigenstate |m>, addressed by 2m. Throws InvalidM for labels outside
/// {-j..j} or of the wrong parity.
inline PureState basis_state(SpinQuantum s, int twice_m) {
  const auto row = s.row_of_twice_m(twice_m);
  if (!row)
    throw InvalidM("invalid m label 2m=" + std::to_string(twice_m) + " for j=" + s.to_string());
  CVector c = CVector::Zero(s.dimension());
  c(*row) = 1.0;
  return PureState(s, std::move(c));
}

/// Analytic coherent state |z> = (1+|z|^2)^{-j} e^{z J_-} |j>, with closed-form
/// amplitudes c_{j-k} = sqrt(C(2j,k)) z^k / (1+|z|^2)^j assembled in the
/// log-magnitude domain. The infinity label gives |-j>.
inline PureState coherent_state(SpinQuantum s, CoherentLabel label) {
  const int tj = s.twice_j();
  if (label.is_infinity()) return basis_state(s, -tj);
  const Complex z = label.z();
  if (std::abs(z) == 0.0) return basis_state(s, tj);

  const double log_abs_z = std::log(std::abs(z));
  const double arg_z = std::arg(z);
  const int d = s.dimension();
  std::vector<double> log_mag(d);
  double log_max = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < d; ++k) {
    log_mag[k] = 0.5 * log_binomial(tj, k) + k * log_abs_z;
    log_max = std::max(log_max, log_mag[k]);
  }
  CVector c(d);
  for (int k = 0; k < d; ++k) c(k) = std::polar(std::exp(log_mag[k] - log_max), k * arg_z);
  return PureState(s, std::move(c)).gauge_fixed();
}

inline PureState coherent_state(SpinQuantum s, Complex z) {
  return coherent_state(s, CoherentLabel::finite(z));
}

namespace detail {

/// v <- exp(c * A) v for strictly triangular (nilpotent) A; the series is
/// finite and exact up to roundoff.
inline CVector apply_nilpotent_exp(Complex c, const CMatrix& a, CVector v) {
  CVector acc = v;
  CVector term = std::move(v);
  const int d = static_cast<int>(a.rows());
  for (int l = 1; l <= d; ++l) {
    term = (c / static_cast<double>(l)) * (a * term);
    if (term.cwiseAbs().maxCoeff() == 0.0) break;
    acc += term;
  }
  return acc;
}

}  // namespace detail

/// Generalized orbit state |z;m> = N e^{z J_-/hbar} e^{-z* J_+/hbar} |m>
/// (the e^{-i theta J_z} phase factor is dropped). Reduces to coherent_state
/// for m = j and to |m> for z = 0.
inline PureState generalized_coherent(SpinQuantum s, Complex z, int twice_m) {
  const auto row = s.row_of_twice_m(twice_m);
  if (!row)
    throw InvalidM("invalid m label 2m=" + std::to_string(twice_m) + " for j=" + s.to_string());
  auto [jp, jm] = build_ladder(s, 1.0);
  CVector v = CVector::Zero(s.dimension());
  v(*row) = 1.0;
  v = detail::apply_nilpotent_exp(-std::conj(z), jp.matrix(), std::move(v));
  v = detail::apply_nilpotent_exp(z, jm.matrix(), std::move(v));
  return PureState(s, std::move(v)).gauge_fixed();
}

/// Intelligent state |tau,N>: the normalized finite sum
///   sum_{l=0}^{N} C(N,l) (2j-l)! (-2 tau J_+/hbar)^l e^{tau J_+/hbar} |-j>,
/// which saturates Delta Jx^2 Delta Jy^2 = (hbar^2/4) <J_z>^2. Only J_+ enters,
/// so all factors commute and the amplitudes collapse to one coefficient per
/// excitation number q:
///   c_q  prop.  tau^q P_q sum_l C(N,l) (2j-l)! (-2)^l / (q-l)!,
/// with P_q the product of ladder factors climbing from -j. Magnitudes are
/// tracked in the log domain; the alternating inner sum keeps an explicit
/// sign (log-sum-exp with signs).
inline PureState intelligent_state(SpinQuantum s, Complex tau, int n_label) {
  const int tj = s.twice_j();
  if (n_label < 0 || n_label > tj)
    throw InvalidLabel("intelligent label N=" + std::to_string(n_label) +
                       " outside [0, 2j] for j=" + s.to_string());
  if (std::abs(tau) == 0.0) return basis_state(s, -tj);
  const double off_axis = std::min(std::abs(tau.real()), std::abs(tau.imag()));
  if (off_axis > 1e-14 * std::abs(tau)) throw InvalidTau("tau must be real or purely imaginary");
  // snap onto the axis so phases are exact multiples of pi/2
  if (std::abs(tau.real()) >= std::abs(tau.imag()))
    tau = Complex(tau.real(), 0.0);
  else
    tau = Complex(0.0, tau.imag());
  const double abs_tau = std::abs(tau);

  const int d = s.dimension();
  const double log_abs_tau = std::log(abs_tau);
  const double arg_tau = std::arg(tau);

  // log P_q, cumulative ladder products from m = -j upward
  std::vector<double> log_ladder(d, 0.0);
  for (int q = 1; q < d; ++q) {
    const int tm = -tj + 2 * (q - 1);
    const long long num =
        static_cast<long long>(tj) * (tj + 2) - static_cast<long long>(tm) * (tm + 2);
    log_ladder[q] = log_ladder[q - 1] + 0.5 * std::log(static_cast<double>(num) / 4.0);
  }

  std::vector<double> log_mag(d, -std::numeric_limits<double>::infinity());
  std::vector<double> sign(d, 1.0);
  double log_max = -std::numeric_limits<double>::infinity();
  for (int q = 0; q < d; ++q) {
    const int l_max = std::min(n_label, q);
    double peak = -std::numeric_limits<double>::infinity();
    std::vector<double> t(l_max + 1);
    for (int l = 0; l <= l_max; ++l) {
      t[l] = log_binomial(n_label, l) + log_factorial(tj - l) + l * std::numbers::ln2 -
             log_factorial(q - l);
      peak = std::max(peak, t[l]);
    }
    double acc = 0.0;
    for (int l = 0; l <= l_max; ++l) acc += (l % 2 == 0 ? 1.0 : -1.0) * std::exp(t[l] - peak);
    if (acc == 0.0) continue;
    sign[q] = acc > 0.0 ? 1.0 : -1.0;
    log_mag[q] = q * log_abs_tau + log_ladder[q] + peak + std::log(std::abs(acc));
    log_max = std::max(log_max, log_mag[q]);
  }

  CVector c = CVector::Zero(d);
  for (int q = 0; q < d; ++q) {
    if (!std::isfinite(log_mag[q])) continue;
    const int row = tj - q;  // m = -j + q in descending order
    c(row) = sign[q] * std::polar(std::exp(log_mag[q] - log_max), q * arg_tau);
  }
  return PureState(s, std::move(c)).gauge_fixed();
}

/// Two-component family cos(a)|j> + sin(a)|-j>, a in [0, pi/2].
inline PureState alpha_family(SpinQuantum s, double alpha) {
  CVector c = CVector::Zero(s.dimension());
  c(0) += std::cos(alpha);
  c(s.dimension() - 1) += std::sin(alpha);
  return PureState(s, std::move(c)).gauge_fixed();
}

/// State drawn uniformly with respect to the Fubini-Study volume element:
/// 2(2j+1) iid standard normals form a complex vector which is normalized.
/// Same seed, same state, bit for bit.
inline PureState random_state(SpinQuantum s, std::uint64_t seed) {
  RandomStream stream(seed);
  CVector c(s.dimension());
  for (int k = 0; k < s.dimension(); ++k) {
    const auto [re, im] = stream.normal_pair();
    c(k) = Complex(re, im);
  }
  return PureState(s, std::move(c)).gauge_fixed();
}

/// `count` states U(r_i)|state> with r_i drawn uniformly from [-2pi,2pi]^3,
/// one derived stream per sample.
inline std::vector<PureState> orbit_sample(const PureState& state, int count,
                                           std::uint64_t seed) {
  if (count < 1) throw Error("orbit_sample count must be >= 1");
  std::vector<PureState> out;
  out.reserve(count);
  const double lo = -2.0 * std::numbers::pi;
  const double hi = 2.0 * std::numbers::pi;
  for (int i = 0; i < count; ++i) {
    RandomStream stream(derive_seed(seed, static_cast<std::uint64_t>(i)));
    const Eigen::Vector3d r(stream.uniform(lo, hi), stream.uniform(lo, hi),
                            stream.uniform(lo, hi));
    const GroupElement u = group_element(state.spin(), r);
    out.emplace_back(state.spin(), u.matrix * state.amplitudes());
  }
  return out;
}

}  // namespace spinvar
