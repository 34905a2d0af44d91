// Copyright 2026 The Spinvar Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "catch_amalgamated.hpp"

#include "spinvar/analysis.hpp"

using namespace spinvar;

TEST_CASE("claim names round-trip") {
  for (ClaimId id : {ClaimId::I, ClaimId::II, ClaimId::III, ClaimId::IV, ClaimId::Limit,
                     ClaimId::Joz}) {
    const auto parsed = parse_claim(to_string(id));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == id);
  }
  CHECK(parse_claim("2") == ClaimId::II);
  CHECK(parse_claim("iv") == ClaimId::IV);
  CHECK_FALSE(parse_claim("V").has_value());
  CHECK_FALSE(parse_claim("").has_value());
}

TEST_CASE("coherent state along a direction") {
  const SpinAlgebra algebra = SpinAlgebra::build(SpinQuantum(4), 1.0);  // j = 2

  const PureState up = coherent_direction_state(algebra, Eigen::Vector3d::UnitZ());
  CHECK(fidelity(up, coherent_state(algebra.s, Complex(0.0, 0.0))) ==
        Catch::Approx(1.0).margin(1e-12));
  const PureState down = coherent_direction_state(algebra, -Eigen::Vector3d::UnitZ());
  CHECK(fidelity(down, basis_state(algebra.s, -4)) == Catch::Approx(1.0).margin(1e-12));

  // Generic directions: <J> = j n and Delta = j.
  const std::vector<Eigen::Vector3d> dirs = {
      {1.0, 1.0, 1.0}, {0.3, -0.2, 0.0}, {-2.0, 0.5, 1.5}, {0.0, 1.0, 0.0}};
  for (const auto& d : dirs) {
    const PureState st = coherent_direction_state(algebra, d);
    const Eigen::Vector3d mean = mean_spin_vector(algebra, st);
    CHECK((mean - 2.0 * d.normalized()).norm() < 1e-10);
    CHECK(delta(algebra, st) == Catch::Approx(2.0).margin(1e-10));
  }

  CHECK_THROWS_AS(coherent_direction_state(algebra, Eigen::Vector3d::Zero()), Error);
  CHECK_THROWS_AS(
      coherent_direction_state(algebra, Eigen::Vector3d(std::nan(""), 0.0, 0.0)), Error);
}

TEST_CASE("single-start descent") {
  const SpinAlgebra algebra = SpinAlgebra::build(SpinQuantum(3), 1.0);  // j = 3/2

  // |j> is the global minimum: zero projected gradient, zero iterations.
  const OptimizationResult at_top =
      minimize_delta_single(algebra, basis_state(algebra.s, 3));
  CHECK(at_top.converged);
  CHECK(at_top.iterations == 0);
  CHECK(at_top.final_delta == Catch::Approx(1.5).margin(1e-12));
  CHECK(at_top.coherent_fidelity == Catch::Approx(1.0).margin(1e-12));

  // Random starts converge to the coherent orbit and never increase Delta.
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const PureState start = random_state(algebra.s, derive_seed(606, seed));
    const double d0 = delta(algebra, start);
    const OptimizationResult r = minimize_delta_single(algebra, start);
    CHECK(r.converged);
    CHECK(r.final_delta <= d0 + 1e-12);
    CHECK(std::abs(r.final_delta - 1.5) < 1e-6 * 1.5);
    CHECK(r.coherent_fidelity >= 1.0 - 1e-6);
    CHECK(r.spin_direction.norm() == Catch::Approx(1.0).margin(1e-12));
    // The reported direction is consistent with the reported fidelity.
    const PureState ref = coherent_direction_state(algebra, r.spin_direction);
    CHECK(fidelity(ref, r.final_state) == Catch::Approx(r.coherent_fidelity).margin(1e-12));
  }

  // Interior critical points are fixed points of the ascent: |m=0> has a
  // vanishing mean spin vector, so the projected gradient is exactly zero and
  // the routine stops there (converged, but at the top of the Delta range).
  const SpinAlgebra one = SpinAlgebra::build(SpinQuantum(2), 1.0);
  const OptimizationResult stuck = minimize_delta_single(one, basis_state(one.s, 0));
  CHECK(stuck.converged);
  CHECK(stuck.iterations == 0);
  CHECK(stuck.final_delta == Catch::Approx(2.0).margin(1e-12));
}

TEST_CASE("multistart minimization claim") {
  for (int tj : {1, 2, 4, 10}) {
    const SpinAlgebra algebra = SpinAlgebra::build(SpinQuantum(tj), 1.0);
    const ClaimReport rep = minimize_claim(algebra, 6, 2024);
    CHECK(rep.claim == ClaimId::III);
    CHECK(rep.pass);
    CHECK(rep.details.at("non_converged") == 0.0);
    CHECK(rep.details.at("max_delta_gap") <= rep.details.at("gap_tolerance"));
    CHECK(rep.details.at("min_fidelity") >= 1.0 - 1e-6);
    CHECK(rep.parameters.at("j") == 0.5 * tj);
  }

  // Starved of iterations the claim must fail, not silently pass.
  MinimizeOptions strangled;
  strangled.max_iterations = 0;
  const SpinAlgebra two = SpinAlgebra::build(SpinQuantum(4), 1.0);
  const ClaimReport refused = minimize_claim(two, 4, 2024, strangled);
  CHECK_FALSE(refused.pass);
  CHECK(refused.details.at("non_converged") == 4.0);

  CHECK_THROWS_AS(minimize_delta(two, 0, 1), Error);
}

TEST_CASE("minimization is thread-count independent") {
  const SpinAlgebra algebra = SpinAlgebra::build(SpinQuantum(5), 1.0);
  const auto a = minimize_delta(algebra, 5, 31, MinimizeOptions{}, 1);
  const auto b = minimize_delta(algebra, 5, 31, MinimizeOptions{}, 3);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].final_delta == b[i].final_delta);
    CHECK(a[i].iterations == b[i].iterations);
    CHECK((a[i].final_state.amplitudes() - b[i].final_state.amplitudes()).norm() == 0.0);
  }
}

TEST_CASE("orbit invariance claim") {
  for (int tj : {1, 3, 4}) {
    const SpinAlgebra algebra = SpinAlgebra::build(SpinQuantum(tj), 1.0);
    const ClaimReport rep = verify_invariance(algebra, 10, 10, 55);
    CHECK(rep.claim == ClaimId::I);
    CHECK(rep.pass);
    CHECK(rep.details.at("max_spread") <= rep.details.at("tolerance"));
  }

  // Negative control: a non-unitary post-map must break the invariance.
  const SpinAlgebra algebra = SpinAlgebra::build(SpinQuantum(4), 1.0);
  const auto damp = [](const PureState& st) {
    CVector c = st.amplitudes();
    c(0) *= 0.25;
    return PureState(st.spin(), std::move(c));
  };
  const ClaimReport broken = verify_invariance(algebra, 10, 10, 55, 1, damp);
  CHECK_FALSE(broken.pass);
  CHECK(broken.details.at("max_spread") > broken.details.at("tolerance"));

  CHECK_THROWS_AS(verify_invariance(algebra, 0, 10, 1), Error);
  CHECK_THROWS_AS(verify_invariance(algebra, 10, 0, 1), Error);

  // Thread-count independence of the measured spread.
  const ClaimReport t1 = verify_invariance(algebra, 8, 8, 77, 1);
  const ClaimReport t4 = verify_invariance(algebra, 8, 8, 77, 4);
  CHECK(t1.details.at("max_spread") == t4.details.at("max_spread"));
}

TEST_CASE("bounds claim") {
  // j = 1/2: both bounds plus the zero-spread degeneracy.
  const SpinAlgebra half = SpinAlgebra::build(SpinQuantum(1), 1.0);
  const ClaimReport rep_half = verify_bounds(half, 500, 11);
  CHECK(rep_half.claim == ClaimId::II);
  CHECK(rep_half.pass);
  CHECK(rep_half.details.at("spread") <= 1e-12);
  CHECK(rep_half.details.count("coverage") == 0);

  // j >= 1: the alpha family must sweep essentially the whole interval.
  for (int tj : {2, 3, 8}) {
    const SpinAlgebra algebra = SpinAlgebra::build(SpinQuantum(tj), 1.0);
    const ClaimReport rep = verify_bounds(algebra, 500, 12);
    const double j = 0.5 * tj;
    CHECK(rep.pass);
    CHECK(rep.details.at("lower") == Catch::Approx(j).margin(1e-15));
    CHECK(rep.details.at("upper") == Catch::Approx(j * (j + 1.0)).margin(1e-14));
    CHECK(rep.details.at("coverage") >= 0.999);
    // alpha = 0 is exactly |j>, so the sweep touches the lower endpoint.
    CHECK(rep.details.at("sweep_min") <= j + 1e-10);
    CHECK(rep.details.at("min_delta") >= j - rep.details.at("epsilon"));
    CHECK(rep.details.at("max_delta") <= j * (j + 1.0) + rep.details.at("epsilon"));
  }

  CHECK_THROWS_AS(verify_bounds(half, 0, 1), Error);

  const SpinAlgebra two = SpinAlgebra::build(SpinQuantum(4), 1.0);
  const ClaimReport t1 = verify_bounds(two, 400, 13, 1);
  const ClaimReport t4 = verify_bounds(two, 400, 13, 4);
  CHECK(t1.details.at("min_delta") == t4.details.at("min_delta"));
  CHECK(t1.details.at("max_delta") == t4.details.at("max_delta"));
}

TEST_CASE("mean delta claim") {
  for (int tj : {1, 2, 3}) {
    const SpinAlgebra algebra = SpinAlgebra::build(SpinQuantum(tj), 1.0);
    const ClaimReport rep = mean_delta_check(algebra, 4000, 21);
    const double j = 0.5 * tj;
    CHECK(rep.claim == ClaimId::IV);
    CHECK(rep.pass);
    CHECK(rep.details.at("delta_target") == Catch::Approx(j * (j + 0.5)).margin(1e-15));
    CHECK(rep.details.at("moment_target") == Catch::Approx(tj / 12.0).margin(1e-15));
    CHECK(std::abs(rep.details.at("delta_estimate") - rep.details.at("delta_target")) <=
          4.0 * rep.details.at("delta_std_error"));
  }
  const SpinAlgebra half = SpinAlgebra::build(SpinQuantum(1), 1.0);
  CHECK_THROWS_AS(mean_delta_check(half, 999, 1), Error);
}

TEST_CASE("limit ratio table and claim") {
  const auto rows = limit_ratio_table(10);
  REQUIRE(rows.size() == 20);
  CHECK(rows[0].j == 0.5);
  CHECK(rows[0].ratio == Catch::Approx(2.0 / 3.0).margin(1e-15));
  CHECK(rows[1].j == 1.0);
  CHECK(rows[1].ratio == Catch::Approx(3.0 / 4.0).margin(1e-15));
  CHECK(rows.back().j == 10.0);
  CHECK(rows.back().ratio == Catch::Approx(21.0 / 22.0).margin(1e-15));

  const ClaimReport rep = limit_ratio_check(50);
  CHECK(rep.claim == ClaimId::Limit);
  CHECK(rep.pass);
  CHECK(rep.details.at("min_step") > 0.0);
  CHECK(rep.details.at("final_ratio") >= 1.0 - 1.0 / 51.0);
  CHECK(rep.details.at("final_ratio") == Catch::Approx(101.0 / 102.0).margin(1e-15));

  CHECK_THROWS_AS(limit_ratio_table(0), Error);
}

TEST_CASE("jz bound claim") {
  for (int tj : {1, 4, 7}) {
    const SpinAlgebra algebra = SpinAlgebra::build(SpinQuantum(tj), 1.0);
    const ClaimReport rep = jz_bound_check(algebra, 2000, 33);
    const double j = 0.5 * tj;
    CHECK(rep.claim == ClaimId::Joz);
    CHECK(rep.pass);
    CHECK(rep.details.at("bound") == Catch::Approx(j).margin(1e-15));
    CHECK(rep.details.at("max_abs_jz") <= j + 1e-12);
    CHECK(rep.details.at("saturator_min_fidelity") >= 1.0 - 1e-4);
  }
  const SpinAlgebra half = SpinAlgebra::build(SpinQuantum(1), 1.0);
  CHECK_THROWS_AS(jz_bound_check(half, 0, 1), Error);
}
