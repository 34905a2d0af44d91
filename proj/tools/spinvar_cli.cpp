// Copyright 2026 The Spinvar Authors
// SPDX-License-Identifier: Apache-2.0
//
// spinvar: tables and machine-readable verifications of the invariant
// uncertainty Delta = Var(J_x) + Var(J_y) + Var(J_z) for spin systems.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "spinvar/spinvar.hpp"

namespace {

using spinvar::Json;

struct Options {
  std::string j_text = "1";
  std::uint64_t seed = 0;
  std::int64_t samples = 10000;
  double tol = 1e-8;
  double hbar = 1.0;
  std::string output;  // empty = stdout
  std::string format = "json";
  int threads = 0;  // 0 = hardware count
  // subcommand extras
  std::string claim = "II";
  std::string functional = "delta";
  std::string method = "mc";
  int starts = 20;
  int fiducials = 50;
  int rotations = 50;
  int quad_points = 64;
  int j_max = 50;
};

int effective_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

/// Writes the document to --output or stdout; output bytes are a pure
/// function of the flags, never of the thread count.
void emit(const Options& opts, const std::string& text) {
  if (opts.output.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream file(opts.output, std::ios::binary);
  if (!file) throw spinvar::Error("cannot open output file '" + opts.output + "'");
  file.write(text.data(), static_cast<std::streamsize>(text.size()));
}

void add_common(CLI::App* cmd, Options& opts, bool with_samples = true) {
  cmd->add_option("--j", opts.j_text, "spin as a rational string: 1/2, 1, 3/2, ...")
      ->capture_default_str();
  cmd->add_option("--seed", opts.seed, "64-bit seed; fixed seed gives byte-identical output")
      ->capture_default_str();
  if (with_samples)
    cmd->add_option("--samples", opts.samples, "sample count")->capture_default_str();
  cmd->add_option("--tol", opts.tol, "optimizer tolerance")->capture_default_str();
  cmd->add_option("--hbar", opts.hbar, "value of hbar")->capture_default_str();
  cmd->add_option("--output,-o", opts.output, "output path (default: stdout)");
  cmd->add_option("--format", opts.format, "json, csv, or text")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();
  cmd->add_option("--threads", opts.threads, "worker threads (0 = hardware count)")
      ->capture_default_str();
}

spinvar::SpinAlgebra make_algebra(const Options& opts) {
  const spinvar::SpinQuantum s = spinvar::SpinQuantum::parse(opts.j_text);
  if (!(opts.hbar > 0.0)) throw spinvar::Error("hbar must be positive");
  return spinvar::SpinAlgebra::build(s, opts.hbar);
}

std::string claim_text_lines(const spinvar::ClaimReport& report) {
  std::string out;
  out += "claim ";
  out += spinvar::to_string(report.claim);
  out += report.pass ? ": pass\n" : ": FAIL\n";
  for (const auto& [key, value] : report.parameters)
    out += "  param " + key + " = " + fmt12(value) + "\n";
  out += "  param seed = " + std::to_string(report.seed) + "\n";
  for (const auto& [key, value] : report.details)
    out += "  " + key + " = " + fmt12(value) + "\n";
  return out;
}

// ---------------------------------------------------------------------------

int cmd_report(const Options& opts) {
  const spinvar::SpinAlgebra algebra = make_algebra(opts);
  const double j = algebra.s.j();
  const double hbar2 = opts.hbar * opts.hbar;
  const int threads = effective_threads(opts.threads);

  const spinvar::ClaimReport bounds =
      spinvar::verify_bounds(algebra, opts.samples, spinvar::derive_seed(opts.seed, 1), threads);
  const spinvar::ClaimReport mean = spinvar::mean_delta_check(
      algebra, std::max<std::int64_t>(opts.samples, 1000), spinvar::derive_seed(opts.seed, 2),
      threads);
  spinvar::MinimizeOptions min_opts;
  min_opts.tol = opts.tol;
  const spinvar::ClaimReport minimize = spinvar::minimize_claim(
      algebra, opts.starts, spinvar::derive_seed(opts.seed, 3), min_opts, threads);

  // inequality spot checks on a handful of random states
  constexpr int spot_checks = 10;
  const double scale4 = hbar2 * hbar2 * std::max(j, 0.5) * std::max(j, 0.5) * std::max(j, 0.5) *
                        std::max(j, 0.5);
  double min_heisenberg_slack = 0.0;
  double min_robertson_gap = 0.0;
  for (int k = 0; k < spot_checks; ++k) {
    const spinvar::PureState psi =
        spinvar::random_state(algebra.s, spinvar::derive_seed(opts.seed, 100 + k));
    const spinvar::UncertaintyReport rep = spinvar::inequality_report(algebra, psi);
    const double h_slack = rep.heisenberg_lhs - rep.heisenberg_rhs;
    const double r_gap = rep.robertson_rhs - rep.heisenberg_rhs;
    if (k == 0 || h_slack < min_heisenberg_slack) min_heisenberg_slack = h_slack;
    if (k == 0 || r_gap < min_robertson_gap) min_robertson_gap = r_gap;
  }
  const bool inequalities_pass =
      min_heisenberg_slack >= -1e-12 * scale4 && min_robertson_gap >= -1e-12 * scale4;

  const bool all_pass = bounds.pass && mean.pass && minimize.pass && inequalities_pass;

  Json result;
  result["j"] = j;
  result["twice_j"] = algebra.s.twice_j();
  result["hbar"] = opts.hbar;
  result["analytic_mean"] = hbar2 * j * (j + 0.5);
  result["analytic_min"] = hbar2 * j;
  result["analytic_max"] = hbar2 * j * (j + 1.0);
  if (algebra.s.twice_j() == 1)
    result["note"] = "single orbit: every pure state has Delta = hbar^2*j";
  result["bounds"] = spinvar::to_json(bounds);
  result["mean"] = spinvar::to_json(mean);
  result["minimize"] = spinvar::to_json(minimize);
  result["inequalities"] = Json{{"spot_checks", spot_checks},
                                {"min_heisenberg_slack", min_heisenberg_slack},
                                {"min_robertson_gap", min_robertson_gap},
                                {"pass", inequalities_pass}};
  result["pass"] = all_pass;

  if (opts.format == "json") {
    emit(opts, spinvar::json_document("report", result).dump(2) + "\n");
  } else if (opts.format == "text") {
    std::string out;
    out += "spin j = " + fmt12(j) + ", hbar = " + fmt12(opts.hbar) + "\n";
    out += "analytic: min = " + fmt12(hbar2 * j) + ", mean = " + fmt12(hbar2 * j * (j + 0.5)) +
           ", max = " + fmt12(hbar2 * j * (j + 1.0)) + "\n";
    if (algebra.s.twice_j() == 1) out += "note: single orbit, Delta is constant\n";
    out += claim_text_lines(bounds);
    out += claim_text_lines(mean);
    out += claim_text_lines(minimize);
    out += std::string("inequalities: ") + (inequalities_pass ? "pass" : "FAIL") +
           " (min heisenberg slack " + fmt12(min_heisenberg_slack) + ", min robertson gap " +
           fmt12(min_robertson_gap) + ")\n";
    out += std::string("overall: ") + (all_pass ? "pass" : "FAIL") + "\n";
    emit(opts, out);
  } else {
    throw spinvar::Error("format 'csv' is not supported by 'report'");
  }
  return all_pass ? 0 : 1;
}

int cmd_verify(const Options& opts) {
  const auto claim = spinvar::parse_claim(opts.claim);
  if (!claim) throw spinvar::Error("unknown claim '" + opts.claim + "'");
  const int threads = effective_threads(opts.threads);

  spinvar::ClaimReport report;
  if (*claim == spinvar::ClaimId::Limit) {
    report = spinvar::limit_ratio_check(opts.j_max);
  } else {
    const spinvar::SpinAlgebra algebra = make_algebra(opts);
    switch (*claim) {
      case spinvar::ClaimId::I:
        report = spinvar::verify_invariance(algebra, opts.fiducials, opts.rotations, opts.seed,
                                            threads);
        break;
      case spinvar::ClaimId::II:
        report = spinvar::verify_bounds(algebra, opts.samples, opts.seed, threads);
        break;
      case spinvar::ClaimId::III: {
        spinvar::MinimizeOptions min_opts;
        min_opts.tol = opts.tol;
        report = spinvar::minimize_claim(algebra, opts.starts, opts.seed, min_opts, threads);
        break;
      }
      case spinvar::ClaimId::IV:
        report = spinvar::mean_delta_check(algebra, opts.samples, opts.seed, threads);
        break;
      case spinvar::ClaimId::Joz:
        report = spinvar::jz_bound_check(algebra, opts.samples, opts.seed, threads);
        break;
      default:
        throw spinvar::Error("unknown claim");
    }
  }

  if (opts.format == "json") {
    emit(opts, spinvar::json_document("verify", spinvar::to_json(report)).dump(2) + "\n");
  } else if (opts.format == "text") {
    emit(opts, claim_text_lines(report));
  } else {
    throw spinvar::Error("format 'csv' is not supported by 'verify'");
  }
  return report.pass ? 0 : 1;
}

int cmd_mc_mean(const Options& opts) {
  const spinvar::SpinAlgebra algebra = make_algebra(opts);
  const auto n = spinvar::ProjectiveDimension::for_spin(algebra.s);

  spinvar::MeanMethod method;
  if (opts.method == "mc") method = spinvar::MeanMethod::MonteCarlo;
  else if (opts.method == "quadrature") method = spinvar::MeanMethod::Quadrature;
  else if (opts.method == "closed") method = spinvar::MeanMethod::ClosedMoment;
  else throw spinvar::Error("unknown method '" + opts.method + "'");

  spinvar::MeanOptions mean_opts;
  mean_opts.samples = opts.samples;
  mean_opts.quad_points = opts.quad_points;
  mean_opts.seed = opts.seed;
  mean_opts.threads = effective_threads(opts.threads);

  spinvar::MeanResult result;
  double analytic = 0.0;
  const double hbar2 = opts.hbar * opts.hbar;
  if (opts.functional == "delta") {
    result = spinvar::mean_over_cpn(spinvar::delta_functional(algebra), n, method, mean_opts);
    analytic = hbar2 * algebra.s.j() * (algebra.s.j() + 0.5);
  } else if (opts.functional == "jz2") {
    result = spinvar::mean_over_cpn(spinvar::jz_squared_functional(n, opts.hbar), n, method,
                                    mean_opts);
    analytic = hbar2 * n.value() / 12.0;
  } else {
    throw spinvar::Error("unknown functional '" + opts.functional + "'");
  }

  Json payload = spinvar::to_json(result);
  payload["functional"] = opts.functional;
  payload["analytic"] = analytic;
  if (opts.format == "json") {
    emit(opts, spinvar::json_document("mc-mean", payload).dump(2) + "\n");
  } else if (opts.format == "text") {
    std::string out = opts.functional + " over CP^" + std::to_string(n.value()) + " by " +
                      result.method + ": " + fmt12(result.estimate);
    if (result.std_error > 0.0) out += " +- " + fmt12(result.std_error);
    out += " (analytic " + fmt12(analytic) + ")\n";
    emit(opts, out);
  } else {
    throw spinvar::Error("format 'csv' is not supported by 'mc-mean'");
  }
  return 0;
}

int cmd_minimize(const Options& opts) {
  const spinvar::SpinAlgebra algebra = make_algebra(opts);
  const int threads = effective_threads(opts.threads);
  spinvar::MinimizeOptions min_opts;
  min_opts.tol = opts.tol;
  const auto results = spinvar::minimize_delta(algebra, opts.starts, opts.seed, min_opts, threads);

  double best_delta = results.front().final_delta;
  bool all_converged = true;
  for (const auto& r : results) {
    best_delta = std::min(best_delta, r.final_delta);
    all_converged = all_converged && r.converged;
  }

  if (opts.format == "json") {
    Json list = Json::array();
    for (const auto& r : results) list.push_back(spinvar::to_json(r));
    Json payload{{"j", algebra.s.j()},
                 {"starts", opts.starts},
                 {"analytic_min", algebra.hbar * algebra.hbar * algebra.s.j()},
                 {"best_delta", best_delta},
                 {"all_converged", all_converged},
                 {"results", std::move(list)}};
    emit(opts, spinvar::json_document("minimize", payload).dump(2) + "\n");
  } else if (opts.format == "text") {
    std::string out;
    out += "minimize Delta, j = " + fmt12(algebra.s.j()) + ", " + std::to_string(opts.starts) +
           " starts\n";
    for (const auto& r : results)
      out += "  delta " + fmt12(r.final_delta) + "  fidelity " + fmt12(r.coherent_fidelity) +
             "  iterations " + std::to_string(r.iterations) + (r.converged ? "" : "  NOT CONVERGED") +
             "\n";
    out += "best delta " + fmt12(best_delta) + " (analytic minimum " +
           fmt12(algebra.hbar * algebra.hbar * algebra.s.j()) + ")\n";
    emit(opts, out);
  } else {
    throw spinvar::Error("format 'csv' is not supported by 'minimize'");
  }
  return 0;
}

int cmd_sample(const Options& opts) {
  const spinvar::SpinAlgebra algebra = make_algebra(opts);
  if (opts.samples < 1) throw spinvar::Error("samples must be >= 1");
  const int dim = algebra.s.dimension();

  if (opts.format == "json") {
    Json rows = Json::array();
    for (std::int64_t i = 0; i < opts.samples; ++i) {
      const spinvar::PureState psi =
          spinvar::random_state(algebra.s, spinvar::derive_seed(opts.seed, i));
      const Eigen::Vector3d mean = spinvar::mean_spin_vector(algebra, psi);
      Json row = spinvar::to_json(psi);
      row["delta"] = spinvar::delta(algebra, psi);
      row["mean_j"] = Json{mean(0), mean(1), mean(2)};
      rows.push_back(std::move(row));
    }
    emit(opts, spinvar::json_document("sample", rows).dump(2) + "\n");
    return 0;
  }

  // csv (and text, which aliases it): fixed header, 2(2j+1)+4 columns
  std::string out;
  for (int k = 0; k < dim; ++k) {
    out += "re_" + std::to_string(k) + ",im_" + std::to_string(k) + ",";
  }
  out += "delta,mean_jx,mean_jy,mean_jz\n";
  for (std::int64_t i = 0; i < opts.samples; ++i) {
    const spinvar::PureState psi =
        spinvar::random_state(algebra.s, spinvar::derive_seed(opts.seed, i));
    const Eigen::Vector3d mean = spinvar::mean_spin_vector(algebra, psi);
    for (int k = 0; k < dim; ++k) {
      out += fmt17(psi.amplitudes()(k).real()) + ",";
      out += fmt17(psi.amplitudes()(k).imag()) + ",";
    }
    out += fmt17(spinvar::delta(algebra, psi)) + ",";
    out += fmt17(mean(0)) + "," + fmt17(mean(1)) + "," + fmt17(mean(2)) + "\n";
  }
  emit(opts, out);
  return 0;
}

int cmd_table(const Options& opts) {
  const auto rows = spinvar::limit_ratio_table(opts.j_max);
  if (opts.format == "json") {
    emit(opts, spinvar::json_document("table", spinvar::to_json(rows)).dump(2) + "\n");
  } else if (opts.format == "csv") {
    std::string out = "j,ratio\n";
    for (const auto& row : rows) out += fmt17(row.j) + "," + fmt17(row.ratio) + "\n";
    emit(opts, out);
  } else {
    std::string out = "j            mean/max\n";
    for (const auto& row : rows) {
      std::string j_text = fmt12(row.j);
      j_text.resize(12, ' ');
      out += j_text + " " + fmt12(row.ratio) + "\n";
    }
    emit(opts, out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"invariant uncertainty Delta for spin systems: reports, verifications, sampling"};
  app.require_subcommand(1);

  Options opts;

  CLI::App* report = app.add_subcommand("report", "full per-spin summary of all checks");
  add_common(report, opts);
  report->add_option("--starts", opts.starts, "optimizer starts")->capture_default_str();

  CLI::App* verify = app.add_subcommand("verify", "run one named claim check");
  add_common(verify, opts);
  verify->add_option("--claim", opts.claim, "one of I, II, III, IV, limit, joz")
      ->capture_default_str();
  verify->add_option("--starts", opts.starts, "optimizer starts (claim III)")
      ->capture_default_str();
  verify->add_option("--fiducials", opts.fiducials, "fiducial states (claim I)")
      ->capture_default_str();
  verify->add_option("--rotations", opts.rotations, "rotations per fiducial (claim I)")
      ->capture_default_str();
  verify->add_option("--jmax", opts.j_max, "largest j (claim limit)")->capture_default_str();

  CLI::App* mc_mean = app.add_subcommand("mc-mean", "mean of a functional over state space");
  add_common(mc_mean, opts);
  mc_mean->add_option("--functional", opts.functional, "delta or jz2")->capture_default_str();
  mc_mean->add_option("--method", opts.method, "mc, quadrature, or closed")
      ->capture_default_str();
  mc_mean->add_option("--quad-points", opts.quad_points, "Gauss-Legendre nodes per axis")
      ->capture_default_str();

  CLI::App* minimize = app.add_subcommand("minimize", "locate minimum-Delta states");
  add_common(minimize, opts, /*with_samples=*/false);
  minimize->add_option("--starts", opts.starts, "optimizer starts")->capture_default_str();

  CLI::App* sample = app.add_subcommand("sample", "emit random states with their statistics");
  add_common(sample, opts);

  CLI::App* table = app.add_subcommand("table", "mean/max ratio table over j");
  add_common(table, opts, /*with_samples=*/false);
  table->add_option("--jmax", opts.j_max, "largest j in the table")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  // sample is a CSV producer by default; other commands default to JSON
  if (sample->parsed() && sample->get_option("--format")->count() == 0) opts.format = "csv";

  try {
    if (report->parsed()) return cmd_report(opts);
    if (verify->parsed()) return cmd_verify(opts);
    if (mc_mean->parsed()) return cmd_mc_mean(opts);
    if (minimize->parsed()) return cmd_minimize(opts);
    if (sample->parsed()) return cmd_sample(opts);
    if (table->parsed()) return cmd_table(opts);
    std::cerr << "no subcommand given\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
