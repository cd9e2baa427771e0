#pragma once

#include <optional>
#include <string>
#include <vector>

#include "selflink/curve.hpp"
#include "selflink/diagram.hpp"
#include "selflink/framing.hpp"
#include "selflink/invariant.hpp"
#include "selflink/quadrature.hpp"

namespace selflink {

// Schemas are strict: unknown keys are errors, and every document carries
// "schema_version": 1. Output numbers are serialized with 17 significant
// digits so round trips are exact; key order is fixed, so identical
// computations produce byte-identical documents.

inline constexpr int kSchemaVersion = 1;

struct FamilySpec {
  int mode = 2;
  double amplitude = 0.0;
  Vec3 axis{0, 0, 1};
  double phase = 0.0;
};

struct RunConfig {
  CurveSpec curve;
  std::optional<CurveSpec> curve2;  // linking targets only
  std::optional<FramingSpec> framing;
  QuadratureConfig quadrature;
  double epsilon = 0.0;  // 0 = "auto"
  std::string output = "-";
  std::string format = "json";  // json | csv
};

struct VerifyFixture {
  std::string name;
  CurveSpec curve;
  std::optional<FramingSpec> framing;
  std::optional<FamilySpec> family;
  std::vector<Vec3> directions;
  double epsilon = 0.0;
};

struct VerifyConfig {
  std::vector<VerifyFixture> fixtures;
  QuadratureConfig quadrature;
};

CurveSpec parse_curve_spec(const std::string& json_text);
RunConfig parse_run_config(const std::string& json_text);
VerifyConfig parse_verify_config(const std::string& json_text);

std::string to_json(const SelfLinkReport& report);
std::string to_csv(const SelfLinkReport& report);
std::string to_json(const Diagram& diagram);

struct SuiteCheck {
  std::string name;
  double value = 0.0;
  double reference = 0.0;
  double gap = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct SuiteFixtureResult {
  std::string name;
  bool pass = false;
  std::vector<SuiteCheck> checks;
};

struct SuiteResult {
  std::string suite;
  bool pass = false;
  std::vector<SuiteFixtureResult> fixtures;
};

std::string to_json(const SuiteResult& result);

}  // namespace selflink
