#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "skf/chart.hpp"

// Batch verification drivers behind `skf verify`. Each driver samples a
// chart, runs a fixed list of residual checks against per-check tolerances,
// and returns a machine-readable report. A tolerance scale can loosen or
// tighten every check uniformly without touching the pinned values.

namespace skf {

struct CheckRecord {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  std::optional<double> c;           // fitted constant, when the check fits one
  std::optional<double> expected_c;
  std::optional<double> c_tolerance;
  std::string note;                  // failure detail (e.g. an exception)
  bool pass = false;
};

struct ResidualReport {
  std::string version = "0.1.0";
  std::string chart;
  std::map<std::string, double> params;
  int samples = 0;
  std::uint64_t seed = 0;
  double tolerance_scale = 1.0;
  double r_lo = 0.5, r_hi = 2.0;
  std::vector<CheckRecord> checks;
  bool pass = true;
  double duration_ms = 0.0;

  std::string to_json_text() const;
};

struct VerifyOptions {
  int samples = 100;
  std::uint64_t seed = 42;
  double tolerance_scale = 1.0;
  double r_lo = 0.5, r_hi = 2.0;
};

// The Y^{p,q} suite: metric algebra, Einstein equation, Reeb geometry, the
// Killing tower, the extractor against its expansion oracle and the closed
// forms, special-constant fits, cone lifts, and radial independence.
ResidualReport run_verify_ypq(double a, const VerifyOptions& opt);

// Flat 3-space with its linear Killing 2-form; everything should hold to
// rounding error.
ResidualReport run_verify_flat3(const VerifyOptions& opt);

// User-supplied chart: metric sanity and metric compatibility of the
// connection, the Einstein equation when a constant is supplied, and the
// extractor oracle when the description carries a foliation.
ResidualReport run_verify_generic(const LoadedChart& loaded,
                                  const VerifyOptions& opt,
                                  std::optional<double> einstein_lambda);

}  // namespace skf
