// Copyright 2026 The Spinvar Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spinvar/errors.hpp"
#include "spinvar/numerics.hpp"
#include "spinvar/quadrature.hpp"
#include "spinvar/rng.hpp"
#include "spinvar/states.hpp"
#include "spinvar/uncertainty.hpp"

namespace spinvar {

/// Complex dimension N of CP^N. For a spin-j representation N = 2j >= 1.
class ProjectiveDimension {
public:
  explicit ProjectiveDimension(int n) : n_(n) {
    if (n < 1) throw Error("projective dimension must be >= 1, got " + std::to_string(n));
  }
  static ProjectiveDimension for_spin(SpinQuantum s) { return ProjectiveDimension(s.twice_j()); }

  int value() const { return n_; }
  SpinQuantum spin() const { return SpinQuantum(n_); }

private:
  int n_;
};

/// Intrinsic Fubini-Study coordinates on CP^N: N polar angles theta_i in
/// (0, pi/2) and N relative phases beta_i in [0, 2pi). The chart gauges
/// alpha_0 = 0 and sets the overall scale X = 1; beta_0 is identically 0.
struct CPNCoords {
  ProjectiveDimension n;
  Eigen::VectorXd thetas;
  Eigen::VectorXd betas;
};

namespace detail {

inline void check_thetas(const Eigen::VectorXd& thetas) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  for (Eigen::Index i = 0; i < thetas.size(); ++i) {
    if (!(thetas(i) >= 0.0 && thetas(i) <= half_pi))
      throw OutOfRange("theta_" + std::to_string(i + 1) + " outside [0, pi/2]");
  }
}

inline void check_coords(const CPNCoords& coords) {
  if (coords.thetas.size() != coords.n.value() || coords.betas.size() != coords.n.value())
    throw DimensionMismatch("coordinate vectors do not match N");
  check_thetas(coords.thetas);
  for (Eigen::Index i = 0; i < coords.betas.size(); ++i)
    if (!std::isfinite(coords.betas(i))) throw OutOfRange("beta coordinate not finite");
}

}  // namespace detail

/// Embedding of the positive orthant of the N-sphere:
/// x_i = cos(theta_i) prod_{j>i} sin(theta_j), i = 1..N, and
/// x_0 = prod_{j>=1} sin(theta_j). Returns (x_0, ..., x_N); sum x_i^2 = 1.
inline Eigen::VectorXd sphere_coords(const Eigen::VectorXd& thetas) {
  detail::check_thetas(thetas);
  const int n = static_cast<int>(thetas.size());
  Eigen::VectorXd x(n + 1);
  double sin_tail = 1.0;  // prod_{j>i} sin(theta_j), built from the top down
  for (int i = n; i >= 1; --i) {
    x(i) = std::cos(thetas(i - 1)) * sin_tail;
    sin_tail *= std::sin(thetas(i - 1));
  }
  x(0) = sin_tail;
  return x;
}

/// Homogeneous-coordinate state Z_k = x_k e^{i beta_k} (beta_0 = 0) mapped to
/// amplitudes via m = k - N/2. The chart itself fixes the phase gauge, so no
/// extra gauge rotation is applied.
inline PureState to_state(const CPNCoords& coords) {
  detail::check_coords(coords);
  const int n = coords.n.value();
  const Eigen::VectorXd x = sphere_coords(coords.thetas);
  CVector c(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double beta = (k == 0) ? 0.0 : coords.betas(k - 1);
    c(n - k) = std::polar(x(k), beta);  // descending m: row N-k holds m = k - N/2
  }
  return PureState(coords.n.spin(), std::move(c));
}

/// The two Fubini-Study metric blocks in intrinsic coordinates:
/// theta block g_ii = (prod_{j>i} sin theta_j)^2 (diagonal) and phase block
/// h_ij = x_i^2 (delta_ij - x_j^2), i,j = 1..N.
struct FsMetricBlocks {
  Eigen::MatrixXd theta_block;
  Eigen::MatrixXd beta_block;
};

inline FsMetricBlocks fs_metric_blocks(const CPNCoords& coords) {
  detail::check_coords(coords);
  constexpr double half_pi = std::numbers::pi / 2.0;
  for (Eigen::Index i = 0; i < coords.thetas.size(); ++i) {
    const double t = coords.thetas(i);
    if (t < 1e-12 || t > half_pi - 1e-12)
      throw Singular("chart singular at theta_" + std::to_string(i + 1) + " = " +
                     std::to_string(t));
  }
  const int n = coords.n.value();
  const Eigen::VectorXd x = sphere_coords(coords.thetas);

  FsMetricBlocks blocks;
  blocks.theta_block = Eigen::MatrixXd::Zero(n, n);
  double sin_tail = 1.0;
  for (int i = n; i >= 1; --i) {
    blocks.theta_block(i - 1, i - 1) = sin_tail * sin_tail;
    sin_tail *= std::sin(coords.thetas(i - 1));
  }

  blocks.beta_block.resize(n, n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      blocks.beta_block(i - 1, j - 1) = x(i) * x(i) * ((i == j ? 1.0 : 0.0) - x(j) * x(j));
  return blocks;
}

/// Closed-form inverse of the phase block: h^{ij} = 1/x_0^2 + delta_ij/x_i^2.
inline Eigen::MatrixXd fs_beta_metric_inverse(const CPNCoords& coords) {
  detail::check_coords(coords);
  const int n = coords.n.value();
  const Eigen::VectorXd x = sphere_coords(coords.thetas);
  if (x(0) * x(0) < 1e-300) throw Singular("phase-block inverse singular at x_0 = 0");
  Eigen::MatrixXd inv(n, n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      inv(i - 1, j - 1) = 1.0 / (x(0) * x(0)) + (i == j ? 1.0 / (x(i) * x(i)) : 0.0);
  return inv;
}

/// Fubini-Study volume density with respect to the product measure
/// dtheta_1..dtheta_N dbeta_1..dbeta_N:  prod_i cos(theta_i) sin^{2i-1}(theta_i).
inline double fs_volume_density(const CPNCoords& coords) {
  detail::check_coords(coords);
  double density = 1.0;
  for (int i = 1; i <= coords.n.value(); ++i) {
    const double t = coords.thetas(i - 1);
    density *= std::cos(t) * std::pow(std::sin(t), 2 * i - 1);
  }
  return density;
}

/// V_N = pi^N / N!, evaluated in the log domain.
inline double cpn_volume(ProjectiveDimension n) {
  const double nn = n.value();
  return std::exp(nn * std::log(std::numbers::pi) - log_factorial(n.value()));
}

/// Closed-form moment integral over CP^N:
/// int dv (x_m x_n)^2 = pi^N / (N+2)! * (1 + delta_mn).
inline double moment_integral(ProjectiveDimension n, int m_idx, int n_idx) {
  if (m_idx < 0 || m_idx > n.value() || n_idx < 0 || n_idx > n.value())
    throw IndexOutOfRange("moment index outside 0..N");
  const double nn = n.value();
  const double base = std::exp(nn * std::log(std::numbers::pi) - log_factorial(n.value() + 2));
  return base * (m_idx == n_idx ? 2.0 : 1.0);
}

// ---------------------------------------------------------------------------
// Exact integer identities (kept in units of four times the real value so
// everything stays integral).

/// 4 * sum_{k=0}^{N} (k - N/2)^2, by direct enumeration.
inline std::int64_t centered_square_sum_x4(int n) {
  std::int64_t acc = 0;
  for (int k = 0; k <= n; ++k) {
    const std::int64_t t = 2LL * k - n;
    acc += t * t;
  }
  return acc;
}

/// Closed form of the same quantity: 4 * N(N+1)(N+2)/12 = N(N+1)(N+2)/3.
inline std::int64_t centered_square_sum_x4_closed(int n) {
  return static_cast<std::int64_t>(n) * (n + 1) * (n + 2) / 3;
}

/// 4 * sum_{m,k} (m - N/2)(k - N/2)(1 + delta_mk), by direct enumeration.
/// Equals centered_square_sum_x4 because the plain double sum vanishes.
inline std::int64_t moment_weight_double_sum_x4(int n) {
  std::int64_t acc = 0;
  for (int m = 0; m <= n; ++m)
    for (int k = 0; k <= n; ++k)
      acc += (2LL * m - n) * (2LL * k - n) * (m == k ? 2 : 1);
  return acc;
}

// ---------------------------------------------------------------------------
// Sampling

/// Draws coordinates with the exact Fubini-Study density: theta_i by inverse
/// transform sin(theta_i) = u^{1/(2i)} (so sin^2 theta_i ~ Beta(i,1)) and
/// beta_i uniform on [0, 2pi). Per coordinate the theta draw precedes the
/// beta draw.
inline CPNCoords sample_fs_coords(ProjectiveDimension n, std::uint64_t seed) {
  RandomStream stream(seed);
  Eigen::VectorXd thetas(n.value());
  Eigen::VectorXd betas(n.value());
  for (int i = 1; i <= n.value(); ++i) {
    const double u = stream.uniform_open();
    thetas(i - 1) = std::asin(std::pow(u, 1.0 / (2.0 * i)));
    betas(i - 1) = stream.uniform(0.0, 2.0 * std::numbers::pi);
  }
  return CPNCoords{n, std::move(thetas), std::move(betas)};
}

// ---------------------------------------------------------------------------
// Quadrature over the chart. Separable integrands factorize into N
// one-dimensional integrals; the substitution u = sin^2(theta) absorbs the
// density factor sin^{2i-1} into u^{i-1}, leaving polynomial integrands for
// the moment checks, so Gauss-Legendre converges to roundoff.

namespace detail {

/// One coordinate's contribution: 2pi * (1/2) int_0^1 u^{i-1} g(theta(u)) du,
/// theta(u) = asin(sqrt(u)). Pass g = nullptr for a plain density factor.
inline double coordinate_integral(int i, const std::function<double(double)>& g,
                                  const GaussLegendreRule& rule) {
  const double integral = integrate01(rule, [&](double u) {
    const double weight = std::pow(u, static_cast<double>(i - 1));
    if (!g) return weight;
    return weight * g(std::asin(std::sqrt(u)));
  });
  return 2.0 * std::numbers::pi * 0.5 * integral;
}

}  // namespace detail

/// int dv over the chart by the factorized product rule; reproduces
/// V_N = pi^N/N! to roundoff.
inline double cpn_volume_quadrature(ProjectiveDimension n, int points_per_axis = 64) {
  const GaussLegendreRule rule = gauss_legendre(points_per_axis);
  double volume = 1.0;
  for (int i = 1; i <= n.value(); ++i) volume *= detail::coordinate_integral(i, nullptr, rule);
  return volume;
}

/// int dv (x_m x_n)^2 by the factorized product rule. The integrand splits as
/// prod_i cos^{2a_i} sin^{2b_i} with a_i = [i==m]+[i==n], b_i = [i>m]+[i>n].
inline double moment_integral_quadrature(ProjectiveDimension n, int m_idx, int n_idx,
                                         int points_per_axis = 64) {
  if (m_idx < 0 || m_idx > n.value() || n_idx < 0 || n_idx > n.value())
    throw IndexOutOfRange("moment index outside 0..N");
  const GaussLegendreRule rule = gauss_legendre(points_per_axis);
  double integral = 1.0;
  for (int i = 1; i <= n.value(); ++i) {
    const int a = (i == m_idx ? 1 : 0) + (i == n_idx ? 1 : 0);
    const int b = (i > m_idx ? 1 : 0) + (i > n_idx ? 1 : 0);
    integral *= detail::coordinate_integral(
        i,
        [&](double theta) {
          const double c2 = std::cos(theta) * std::cos(theta);
          const double s2 = std::sin(theta) * std::sin(theta);
          return std::pow(c2, a) * std::pow(s2, b);
        },
        rule);
  }
  return integral;
}

// ---------------------------------------------------------------------------
// Mean values over CP^N

/// A functional on CP^N, carrying whichever representations the integration
/// methods need: a pointwise state evaluator (Monte Carlo), per-coordinate
/// theta factors for beta-independent separable functionals (quadrature),
/// or sphere-coordinate weights w with f = (sum_k w_k x_k^2)^2 (closed
/// moment form and quadrature).
class StateFunctional {
public:
  using StateFn = std::function<double(const PureState&)>;
  using ThetaFactor = std::function<double(double)>;

  static StateFunctional general(std::string name, StateFn fn) {
    StateFunctional f(std::move(name));
    f.state_fn_ = std::move(fn);
    return f;
  }

  static StateFunctional constant(std::string name, double value) {
    StateFunctional f(std::move(name));
    f.constant_ = value;
    f.state_fn_ = [value](const PureState&) { return value; };
    return f;
  }

  /// factors[i-1] evaluates on theta_i; the functional must not depend on the
  /// phases beta. An optional state evaluator enables Monte Carlo as well.
  static StateFunctional separable(std::string name, std::vector<ThetaFactor> factors,
                                   StateFn fn = nullptr) {
    StateFunctional f(std::move(name));
    f.factors_ = std::move(factors);
    f.state_fn_ = std::move(fn);
    return f;
  }

  /// f = (sum_{k=0}^{N} w_k x_k^2)^2 with x_k^2 = |c_{k-N/2}|^2. Supports all
  /// three methods.
  static StateFunctional quadratic_moment(std::string name, Eigen::VectorXd weights) {
    StateFunctional f(std::move(name));
    const Eigen::VectorXd w = weights;
    f.weights_ = std::move(weights);
    f.state_fn_ = [w](const PureState& psi) {
      const int n = psi.dim() - 1;
      if (w.size() != n + 1) throw DimensionMismatch("moment weights do not match state");
      double acc = 0.0;
      for (int k = 0; k <= n; ++k) acc += w(k) * std::norm(psi.amplitudes()(n - k));
      return acc * acc;
    };
    return f;
  }

  const std::string& name() const { return name_; }
  bool has_state_fn() const { return static_cast<bool>(state_fn_); }
  double eval(const PureState& psi) const { return state_fn_(psi); }
  bool is_constant() const { return constant_.has_value(); }
  double constant_value() const { return *constant_; }
  bool has_factors() const { return !factors_.empty(); }
  const std::vector<ThetaFactor>& factors() const { return factors_; }
  bool has_weights() const { return weights_.size() > 0; }
  const Eigen::VectorXd& weights() const { return weights_; }

private:
  explicit StateFunctional(std::string name) : name_(std::move(name)) {}

  std::string name_;
  StateFn state_fn_;
  std::optional<double> constant_;
  std::vector<ThetaFactor> factors_;
  Eigen::VectorXd weights_;
};

enum class MeanMethod { ClosedMoment, Quadrature, MonteCarlo };

inline const char* to_string(MeanMethod m) {
  switch (m) {
    case MeanMethod::ClosedMoment: return "closed-moment";
    case MeanMethod::Quadrature: return "quadrature";
    case MeanMethod::MonteCarlo: return "monte-carlo";
  }
  return "?";
}

struct MeanOptions {
  std::int64_t samples = 100000;  // Monte Carlo sample count
  int quad_points = 64;           // Gauss-Legendre nodes per coordinate
  std::uint64_t seed = 0;
  int threads = 1;                // worker threads; result is thread-count independent
};

struct MeanResult {
  std::string method;
  int n = 0;
  std::int64_t samples = 0;   // MC samples, or nodes per axis for quadrature
  double estimate = 0.0;
  double std_error = 0.0;     // 0 for the deterministic methods
  std::uint64_t seed = 0;
};

/// Normalized mean (1/V_N) int dv f over CP^N.
///
/// Monte Carlo works for any functional with a state evaluator and reports a
/// standard error; samples use one derived stream per index and a pairwise
/// reduction, so estimates are independent of the thread count. Quadrature
/// and the closed moment form require the separable / quadratic structure
/// and throw MethodUnavailable otherwise.
inline MeanResult mean_over_cpn(const StateFunctional& f, ProjectiveDimension n,
                                MeanMethod method, const MeanOptions& opts = {}) {
  MeanResult result;
  result.method = to_string(method);
  result.n = n.value();
  result.seed = opts.seed;

  switch (method) {
    case MeanMethod::MonteCarlo: {
      if (!f.has_state_fn())
        throw MethodUnavailable("monte-carlo needs a state evaluator for " + f.name());
      if (opts.samples < 1) throw Error("mean_over_cpn: samples must be >= 1");
      std::vector<double> values(static_cast<std::size_t>(opts.samples));
      parallel_for(values.size(), opts.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
          const CPNCoords coords = sample_fs_coords(n, derive_seed(opts.seed, i));
          values[i] = f.eval(to_state(coords));
        }
      });
      const SampleStats stats = sample_stats(values);
      result.samples = opts.samples;
      result.estimate = stats.mean;
      result.std_error = stats.std_error;
      return result;
    }

    case MeanMethod::Quadrature: {
      result.samples = opts.quad_points;
      if (f.is_constant()) {
        result.estimate = f.constant_value();
        return result;
      }
      const GaussLegendreRule rule = gauss_legendre(opts.quad_points);
      if (f.has_factors()) {
        if (static_cast<int>(f.factors().size()) != n.value())
          throw DimensionMismatch("separable factors do not match N");
        double numerator = 1.0;
        double denominator = 1.0;
        for (int i = 1; i <= n.value(); ++i) {
          numerator *= detail::coordinate_integral(i, f.factors()[i - 1], rule);
          denominator *= detail::coordinate_integral(i, nullptr, rule);
        }
        result.estimate = numerator / denominator;
        return result;
      }
      if (f.has_weights()) {
        if (f.weights().size() != n.value() + 1)
          throw DimensionMismatch("moment weights do not match N");
        const double volume = cpn_volume_quadrature(n, opts.quad_points);
        double acc = 0.0;
        for (int m = 0; m <= n.value(); ++m)
          for (int k = 0; k <= n.value(); ++k)
            acc += f.weights()(m) * f.weights()(k) *
                   moment_integral_quadrature(n, m, k, opts.quad_points);
        result.estimate = acc / volume;
        return result;
      }
      throw MethodUnavailable("quadrature requires a separable or quadratic functional, " +
                              f.name() + " is neither");
    }

    case MeanMethod::ClosedMoment: {
      result.samples = 0;
      if (f.is_constant()) {
        result.estimate = f.constant_value();
        return result;
      }
      if (f.has_weights()) {
        if (f.weights().size() != n.value() + 1)
          throw DimensionMismatch("moment weights do not match N");
        // int (x_m x_n)^2 dv / V_N = (1 + delta_mn) / ((N+1)(N+2))
        const double denom = static_cast<double>(n.value() + 1) * (n.value() + 2);
        double acc = 0.0;
        for (int m = 0; m <= n.value(); ++m)
          for (int k = 0; k <= n.value(); ++k)
            acc += f.weights()(m) * f.weights()(k) * (m == k ? 2.0 : 1.0) / denom;
        result.estimate = acc;
        return result;
      }
      throw MethodUnavailable("closed moment form requires a quadratic functional, " + f.name() +
                              " is not");
    }
  }
  throw Error("unreachable");
}

/// <J_z>^2 as a quadratic functional on CP^{N}: weights w_k = hbar (k - N/2).
inline StateFunctional jz_squared_functional(ProjectiveDimension n, double hbar = 1.0) {
  Eigen::VectorXd w(n.value() + 1);
  for (int k = 0; k <= n.value(); ++k) w(k) = hbar * (k - 0.5 * n.value());
  return StateFunctional::quadratic_moment("jz_squared", std::move(w));
}

/// Delta as a general functional (Monte Carlo only).
inline StateFunctional delta_functional(const SpinAlgebra& algebra) {
  return StateFunctional::general("delta",
                                  [algebra](const PureState& psi) { return delta(algebra, psi); });
}

}  // namespace spinvar
