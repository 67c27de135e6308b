#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace densitylab {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;   // deterministic; safe for stdout
  double seconds = 0.0; // wall time; diagnostics only
};

struct VerifyOptions {
  std::int64_t horizon_big = std::int64_t(1) << 22;   // density / polya criteria
  std::int64_t horizon_mid = std::int64_t(1) << 20;   // measure and property suites
  std::int64_t horizon_construct = 1'000'000;
  std::uint64_t seed = 1;
};

// The acceptance suite: one result per criterion.
std::vector<CheckResult> run_acceptance(const VerifyOptions& opts = {});

// Cross-module invariant suite.
std::vector<CheckResult> run_property_suite(const VerifyOptions& opts = {});

// Both suites, acceptance first.
std::vector<CheckResult> run_full_verification(const VerifyOptions& opts = {});

}  // namespace densitylab
