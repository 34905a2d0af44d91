// Copyright 2026 The Spinvar Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spinvar/cpn_geometry.hpp"
#include "spinvar/errors.hpp"
#include "spinvar/numerics.hpp"
#include "spinvar/rng.hpp"
#include "spinvar/spin_algebra.hpp"
#include "spinvar/states.hpp"
#include "spinvar/uncertainty.hpp"

namespace spinvar {

// ---------------------------------------------------------------------------
// Claim plumbing

enum class ClaimId { I, II, III, IV, Limit, Joz };

inline const char* to_string(ClaimId id) {
  switch (id) {
    case ClaimId::I: return "I";
    case ClaimId::II: return "II";
    case ClaimId::III: return "III";
    case ClaimId::IV: return "IV";
    case ClaimId::Limit: return "limit";
    case ClaimId::Joz: return "joz";
  }
  return "?";
}

inline std::optional<ClaimId> parse_claim(std::string_view text) {
  if (text == "I" || text == "i" || text == "1") return ClaimId::I;
  if (text == "II" || text == "ii" || text == "2") return ClaimId::II;
  if (text == "III" || text == "iii" || text == "3") return ClaimId::III;
  if (text == "IV" || text == "iv" || text == "4") return ClaimId::IV;
  if (text == "limit" || text == "LIMIT") return ClaimId::Limit;
  if (text == "joz" || text == "JOZ") return ClaimId::Joz;
  return std::nullopt;
}

/// Outcome of one named verification. `pass` is a pure function of
/// (parameters, seed); `details` holds the measured numbers behind the
/// decision, keyed by stable names.
struct ClaimReport {
  ClaimId claim = ClaimId::I;
  std::map<std::string, double> parameters;
  std::uint64_t seed = 0;
  bool pass = false;
  std::map<std::string, double> details;
};

// ---------------------------------------------------------------------------
// Minimum-uncertainty optimization

/// The highest-weight state along `direction`: the +hbar*j eigenvector of
/// n.J, i.e. the coherent state pointing along n.
inline PureState coherent_direction_state(const SpinAlgebra& algebra, Eigen::Vector3d direction) {
  const double norm = direction.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw Error("direction must be a nonzero vector");
  direction /= norm;
  const CMatrix ndotj = direction(0) * algebra.jx.matrix() + direction(1) * algebra.jy.matrix() +
                        direction(2) * algebra.jz.matrix();
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(ndotj);
  if (solver.info() != Eigen::Success) throw SolveFailure("eigensolve failed for n.J");
  return PureState(algebra.s, solver.eigenvectors().col(algebra.s.dimension() - 1)).gauge_fixed();
}

struct OptimizationResult {
  PureState final_state;
  double final_delta = 0.0;
  int iterations = 0;
  bool converged = false;
  double coherent_fidelity = 0.0;
  Eigen::Vector3d spin_direction = Eigen::Vector3d::UnitZ();
};

struct MinimizeOptions {
  double tol = 1e-8;        // converged when |projected gradient| <= tol * hbar^2 * j
  int max_iterations = 10000;
  double armijo = 1e-4;
  double shrink = 0.5;
  double flat_change = 1e-12;  // second key: accepted ascent step changes f by <= this * hbar^2 * j
};

/// Projected-gradient ascent on f(psi) = sum_i <J_i>^2 over the unit sphere
/// of states; maximizing f minimizes Delta = hbar^2 j(j+1) - f. Non-
/// convergence is reported through the flag, never thrown.
inline OptimizationResult minimize_delta_single(const SpinAlgebra& algebra, const PureState& start,
                                                const MinimizeOptions& options = {}) {
  const double j = algebra.s.j();
  const double hbar2 = algebra.hbar * algebra.hbar;
  const double scale = hbar2 * std::max(j, 0.5);
  const double grad_tol = options.tol * scale;
  const double change_tol = options.flat_change * scale;
  const double step0 = 1.0 / scale;

  const auto f_of = [&](const CVector& v) {
    const Complex mx = v.dot(algebra.jx.matrix() * v);
    const Complex my = v.dot(algebra.jy.matrix() * v);
    const Complex mz = v.dot(algebra.jz.matrix() * v);
    return mx.real() * mx.real() + my.real() * my.real() + mz.real() * mz.real();
  };

  CVector psi = start.amplitudes();
  bool converged = false;
  int iterations = 0;
  for (; iterations < options.max_iterations; ++iterations) {
    const CVector jxv = algebra.jx.matrix() * psi;
    const CVector jyv = algebra.jy.matrix() * psi;
    const CVector jzv = algebra.jz.matrix() * psi;
    const double mx = psi.dot(jxv).real();
    const double my = psi.dot(jyv).real();
    const double mz = psi.dot(jzv).real();
    const double f_cur = mx * mx + my * my + mz * mz;

    const CVector g = 4.0 * (mx * jxv + my * jyv + mz * jzv);
    const CVector r = g - psi * psi.dot(g);  // tangent projection
    const double gn = r.norm();
    if (gn <= grad_tol) {
      converged = true;
      break;
    }

    double step = step0;
    bool improved = false;
    double f_new = f_cur;
    while (step > 1e-18 * step0) {
      CVector trial = psi + step * r;
      trial.normalize();
      const double ft = f_of(trial);
      if (ft >= f_cur + options.armijo * step * gn * gn) {
        psi = std::move(trial);
        f_new = ft;
        improved = true;
        break;
      }
      step *= options.shrink;
    }
    if (!improved) break;                       // flat to machine precision
    if (f_new - f_cur <= change_tol) {          // second convergence key
      converged = true;
      ++iterations;
      break;
    }
  }

  OptimizationResult result{PureState(algebra.s, psi).gauge_fixed()};
  result.iterations = iterations;
  result.converged = converged;
  result.final_delta = delta(algebra, result.final_state);

  const Eigen::Vector3d mean = mean_spin_vector(algebra, result.final_state);
  result.spin_direction =
      mean.norm() > 1e-12 * algebra.hbar * std::max(j, 1.0) ? mean.normalized()
                                                            : Eigen::Vector3d::UnitZ();
  const PureState reference = coherent_direction_state(algebra, result.spin_direction);
  result.coherent_fidelity = fidelity(reference, result.final_state);
  return result;
}

/// Multistart wrapper: one FS-random start per derived seed. Deterministic
/// for fixed (starts, seed) and independent of the thread count.
inline std::vector<OptimizationResult> minimize_delta(const SpinAlgebra& algebra, int starts,
                                                      std::uint64_t seed,
                                                      const MinimizeOptions& options = {},
                                                      int threads = 1) {
  if (starts < 1) throw Error("minimize_delta: starts must be >= 1");
  std::vector<std::optional<OptimizationResult>> slots(static_cast<std::size_t>(starts));
  parallel_for(slots.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const PureState start = random_state(algebra.s, derive_seed(seed, i));
      slots[i] = minimize_delta_single(algebra, start, options);
    }
  });
  std::vector<OptimizationResult> results;
  results.reserve(slots.size());
  for (auto& slot : slots) results.push_back(std::move(*slot));
  return results;
}

/// Statement III as a claim: every start converges onto the coherent orbit.
inline ClaimReport minimize_claim(const SpinAlgebra& algebra, int starts, std::uint64_t seed,
                                  const MinimizeOptions& options = {}, int threads = 1) {
  const double j = algebra.s.j();
  const double hbar2 = algebra.hbar * algebra.hbar;
  const auto results = minimize_delta(algebra, starts, seed, options, threads);

  double max_gap = 0.0;
  double min_fidelity = 1.0;
  double non_converged = 0.0;
  double max_iterations = 0.0;
  for (const auto& r : results) {
    max_gap = std::max(max_gap, std::abs(r.final_delta - hbar2 * j));
    min_fidelity = std::min(min_fidelity, r.coherent_fidelity);
    if (!r.converged) non_converged += 1.0;
    max_iterations = std::max(max_iterations, static_cast<double>(r.iterations));
  }
  const double gap_tol = 1e-6 * hbar2 * std::max(j, 0.5);

  ClaimReport report;
  report.claim = ClaimId::III;
  report.parameters = {{"j", j}, {"starts", static_cast<double>(starts)}, {"tol", options.tol}};
  report.seed = seed;
  report.details = {{"max_delta_gap", max_gap},
                    {"min_fidelity", min_fidelity},
                    {"non_converged", non_converged},
                    {"max_iterations", max_iterations},
                    {"gap_tolerance", gap_tol}};
  report.pass = non_converged == 0.0 && max_gap <= gap_tol && min_fidelity >= 1.0 - 1e-6;
  return report;
}

// ---------------------------------------------------------------------------
// Statement I: invariance along orbits

/// Max over fiducial states of the Delta spread along sampled orbits.
/// `post_map` is a test-harness hook: a deliberately non-unitary map applied
/// to each orbit sample to show the check can fail; leave empty for the
/// physical claim.
inline ClaimReport verify_invariance(const SpinAlgebra& algebra, int fiducials, int rotations,
                                     std::uint64_t seed, int threads = 1,
                                     const std::function<PureState(const PureState&)>& post_map = {}) {
  if (fiducials < 1 || rotations < 1) throw Error("verify_invariance: counts must be >= 1");
  const double j = algebra.s.j();
  const double hbar2 = algebra.hbar * algebra.hbar;

  std::vector<double> spreads(static_cast<std::size_t>(fiducials));
  parallel_for(spreads.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t f = begin; f < end; ++f) {
      const PureState fiducial = random_state(algebra.s, derive_seed(seed, 2 * f));
      double lo = delta(algebra, fiducial);
      double hi = lo;
      for (const PureState& rotated :
           orbit_sample(fiducial, rotations, derive_seed(seed, 2 * f + 1))) {
        const double d = delta(algebra, post_map ? post_map(rotated) : rotated);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
      }
      spreads[f] = hi - lo;
    }
  });
  const double max_spread = *std::max_element(spreads.begin(), spreads.end());
  const double tolerance = 1e-9 * hbar2 * j * (j + 1.0);

  ClaimReport report;
  report.claim = ClaimId::I;
  report.parameters = {{"j", j},
                       {"fiducials", static_cast<double>(fiducials)},
                       {"rotations", static_cast<double>(rotations)}};
  report.seed = seed;
  report.details = {{"max_spread", max_spread}, {"tolerance", tolerance}};
  report.pass = max_spread <= tolerance;
  return report;
}

// ---------------------------------------------------------------------------
// Statement II: bounds and their attainment

inline ClaimReport verify_bounds(const SpinAlgebra& algebra, std::int64_t samples,
                                 std::uint64_t seed, int threads = 1) {
  if (samples < 1) throw Error("verify_bounds: samples must be >= 1");
  const double j = algebra.s.j();
  const double hbar2 = algebra.hbar * algebra.hbar;
  const double lower = hbar2 * j;
  const double upper = hbar2 * j * (j + 1.0);
  const double epsilon = 1e-10 * upper;

  std::vector<double> deltas(static_cast<std::size_t>(samples));
  parallel_for(deltas.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      deltas[i] = delta(algebra, random_state(algebra.s, derive_seed(seed, i)));
  });
  const auto [min_it, max_it] = std::minmax_element(deltas.begin(), deltas.end());
  const double min_delta = *min_it;
  const double max_delta = *max_it;
  const double spread = max_delta - min_delta;

  bool pass = min_delta >= lower - epsilon && max_delta <= upper + epsilon;
  ClaimReport report;
  report.claim = ClaimId::II;
  report.parameters = {{"j", j}, {"samples", static_cast<double>(samples)}};
  report.seed = seed;
  report.details = {{"min_delta", min_delta},
                    {"max_delta", max_delta},
                    {"lower", lower},
                    {"upper", upper},
                    {"epsilon", epsilon},
                    {"spread", spread}};

  if (algebra.s.twice_j() == 1) {
    // single-orbit degeneracy: every state has the same Delta
    pass = pass && spread <= 1e-12 * hbar2;
  } else if (algebra.s.twice_j() >= 2) {
    // the cos(a)|j> + sin(a)|-j> family sweeps the whole interval
    constexpr int grid = 1000;
    double swept_lo = upper;
    double swept_hi = lower;
    for (int k = 0; k < grid; ++k) {
      const double alpha = (std::numbers::pi / 2.0) * k / (grid - 1);
      const double d = delta(algebra, alpha_family(algebra.s, alpha));
      swept_lo = std::min(swept_lo, d);
      swept_hi = std::max(swept_hi, d);
    }
    const double coverage = (swept_hi - swept_lo) / (upper - lower);
    report.details["coverage"] = coverage;
    report.details["sweep_min"] = swept_lo;
    report.details["sweep_max"] = swept_hi;
    pass = pass && coverage >= 0.999 && swept_lo >= lower - epsilon &&
           swept_hi <= upper + epsilon;
  }
  report.pass = pass;
  return report;
}

// ---------------------------------------------------------------------------
// Statement IV: the Fubini-Study mean of Delta

inline ClaimReport mean_delta_check(const SpinAlgebra& algebra, std::int64_t samples,
                                    std::uint64_t seed, int threads = 1) {
  if (samples < 1000) throw Error("mean_delta_check: samples must be >= 1000");
  const double j = algebra.s.j();
  const double hbar2 = algebra.hbar * algebra.hbar;
  const ProjectiveDimension n = ProjectiveDimension::for_spin(algebra.s);

  MeanOptions mc;
  mc.samples = samples;
  mc.threads = threads;

  mc.seed = seed;
  const MeanResult direct = mean_over_cpn(delta_functional(algebra), n, MeanMethod::MonteCarlo, mc);
  const double delta_target = hbar2 * j * (j + 0.5);

  mc.seed = derive_seed(seed, 0x6d6f6d656e74ULL);  // independent stream for the moment route
  const MeanResult moment =
      mean_over_cpn(jz_squared_functional(n, algebra.hbar), n, MeanMethod::MonteCarlo, mc);
  const double moment_target = hbar2 * n.value() / 12.0;

  const double guard = 1e-12 * hbar2 * j * (j + 1.0);
  const bool direct_ok = std::abs(direct.estimate - delta_target) <= 4.0 * direct.std_error + guard;
  const bool moment_ok = std::abs(moment.estimate - moment_target) <= 4.0 * moment.std_error + guard;

  ClaimReport report;
  report.claim = ClaimId::IV;
  report.parameters = {{"j", j}, {"samples", static_cast<double>(samples)}};
  report.seed = seed;
  report.details = {{"delta_estimate", direct.estimate},
                    {"delta_std_error", direct.std_error},
                    {"delta_target", delta_target},
                    {"moment_estimate", moment.estimate},
                    {"moment_std_error", moment.std_error},
                    {"moment_target", moment_target}};
  report.pass = direct_ok && moment_ok;
  return report;
}

// ---------------------------------------------------------------------------
// The large-j limit of mean/max

struct LimitRow {
  double j;
  double ratio;  // (j + 1/2) / (j + 1), i.e. mean(Delta)/max(Delta)
};

inline std::vector<LimitRow> limit_ratio_table(int j_max) {
  if (j_max < 1) throw Error("limit_ratio_table: j_max must be >= 1");
  std::vector<LimitRow> rows;
  rows.reserve(static_cast<std::size_t>(2 * j_max));
  for (int t = 1; t <= 2 * j_max; ++t)
    rows.push_back({0.5 * t, (t + 1.0) / (t + 2.0)});
  return rows;
}

inline ClaimReport limit_ratio_check(int j_max) {
  const auto rows = limit_ratio_table(j_max);
  double min_step = 1.0;
  for (std::size_t i = 1; i < rows.size(); ++i)
    min_step = std::min(min_step, rows[i].ratio - rows[i - 1].ratio);
  const double final_ratio = rows.back().ratio;
  const double threshold = 1.0 - 1.0 / (j_max + 1.0);

  ClaimReport report;
  report.claim = ClaimId::Limit;
  report.parameters = {{"j_max", static_cast<double>(j_max)}};
  report.details = {{"final_ratio", final_ratio},
                    {"min_step", min_step},
                    {"threshold", threshold}};
  report.pass = min_step > 0.0 && final_ratio >= threshold;
  return report;
}

// ---------------------------------------------------------------------------
// |<J_z>| <= hbar j, saturated only at |±j>

inline ClaimReport jz_bound_check(const SpinAlgebra& algebra, std::int64_t samples,
                                  std::uint64_t seed, int threads = 1) {
  if (samples < 1) throw Error("jz_bound_check: samples must be >= 1");
  const double j = algebra.s.j();
  const double bound = algebra.hbar * j;
  const double slack = 1e-12 * std::max(1.0, bound);

  std::vector<double> abs_jz(static_cast<std::size_t>(samples));
  parallel_for(abs_jz.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const PureState psi = random_state(algebra.s, derive_seed(seed, i));
      abs_jz[i] = std::abs(expectation(psi, algebra.jz));
    }
  });
  const double max_abs_jz = *std::max_element(abs_jz.begin(), abs_jz.end());

  // near-saturating states must be close to |j> or |-j>
  const PureState top = basis_state(algebra.s, algebra.s.twice_j());
  const PureState bottom = basis_state(algebra.s, -algebra.s.twice_j());
  double saturator_min_fidelity = 1.0;
  double saturator_min_abs_jz = bound;
  constexpr int saturators = 16;
  for (int k = 0; k < saturators; ++k) {
    RandomStream stream(derive_seed(seed, 0x73617475ULL + static_cast<std::uint64_t>(k)));
    CVector noise(algebra.s.dimension());
    for (int i = 0; i < algebra.s.dimension(); ++i) {
      const auto [a, b] = stream.normal_pair();
      noise(i) = Complex(a, b);
    }
    const PureState base = (k % 2 == 0) ? top : bottom;
    const PureState psi(algebra.s, base.amplitudes() + 1e-6 * noise);
    saturator_min_abs_jz = std::min(saturator_min_abs_jz, std::abs(expectation(psi, algebra.jz)));
    saturator_min_fidelity =
        std::min(saturator_min_fidelity, std::max(fidelity(top, psi), fidelity(bottom, psi)));
  }

  ClaimReport report;
  report.claim = ClaimId::Joz;
  report.parameters = {{"j", j}, {"samples", static_cast<double>(samples)}};
  report.seed = seed;
  report.details = {{"max_abs_jz", max_abs_jz},
                    {"bound", bound},
                    {"saturator_min_fidelity", saturator_min_fidelity},
                    {"saturator_min_abs_jz", saturator_min_abs_jz}};
  report.pass = max_abs_jz <= bound + slack &&
                saturator_min_abs_jz >= bound * (1.0 - 1e-10) - slack &&
                saturator_min_fidelity >= 1.0 - 1e-4;
  return report;
}

}  // namespace spinvar
