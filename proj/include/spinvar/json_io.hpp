// Copyright 2026 The Spinvar Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "json.hpp"

#include "spinvar/analysis.hpp"
#include "spinvar/cpn_geometry.hpp"
#include "spinvar/states.hpp"
#include "spinvar/uncertainty.hpp"

namespace spinvar {

/// Top-level schema tag carried by every JSON document the tools emit.
inline constexpr const char* kJsonSchema = "spinvar/1";

using Json = nlohmann::ordered_json;

inline Json to_json(const PureState& state) {
  Json amplitudes = Json::array();
  for (int i = 0; i < state.dim(); ++i) {
    const Complex c = state.amplitudes()(i);
    amplitudes.push_back(Json::array({c.real(), c.imag()}));
  }
  return Json{{"twice_j", state.spin().twice_j()}, {"amplitudes", std::move(amplitudes)}};
}

inline Json to_json(const UncertaintyReport& r) {
  return Json{{"mean_j", {r.mean_j[0], r.mean_j[1], r.mean_j[2]}},
              {"variances", {r.variances[0], r.variances[1], r.variances[2]}},
              {"covariance_xy", r.covariance_xy},
              {"delta", r.delta},
              {"heisenberg_lhs", r.heisenberg_lhs},
              {"heisenberg_rhs", r.heisenberg_rhs},
              {"robertson_rhs", r.robertson_rhs},
              {"invariant_msq", r.invariant_msq},
              {"heisenberg_saturated", r.heisenberg_saturated},
              {"both_sides_zero", r.both_sides_zero},
              {"hbar", r.hbar}};
}

inline Json to_json(const MeanResult& r) {
  return Json{{"method", r.method}, {"n", r.n},
              {"samples", r.samples}, {"estimate", r.estimate},
              {"std_error", r.std_error}, {"seed", r.seed}};
}

inline Json to_json(const ClaimReport& r) {
  Json parameters = Json::object();
  for (const auto& [key, value] : r.parameters) parameters[key] = value;
  parameters["seed"] = r.seed;
  Json details = Json::object();
  for (const auto& [key, value] : r.details) details[key] = value;
  return Json{{"claim", to_string(r.claim)},
              {"parameters", std::move(parameters)},
              {"pass", r.pass},
              {"details", std::move(details)}};
}

inline Json to_json(const OptimizationResult& r) {
  return Json{{"final_state", to_json(r.final_state)},
              {"final_delta", r.final_delta},
              {"iterations", r.iterations},
              {"converged", r.converged},
              {"coherent_fidelity", r.coherent_fidelity},
              {"spin_direction", {r.spin_direction(0), r.spin_direction(1), r.spin_direction(2)}}};
}

inline Json to_json(const std::vector<LimitRow>& rows) {
  Json out = Json::array();
  for (const auto& row : rows) out.push_back(Json{{"j", row.j}, {"ratio", row.ratio}});
  return out;
}

/// Wraps a payload in the versioned envelope the CLI prints.
inline Json json_document(const std::string& command, Json payload) {
  return Json{{"schema", kJsonSchema}, {"command", command}, {"result", std::move(payload)}};
}

}  // namespace spinvar
