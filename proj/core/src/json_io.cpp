#include "selflink/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include <json.hpp>

#include "selflink/errors.hpp"

namespace selflink {

namespace {

using nlohmann::json;

// ---- emitting ----

// Minimal ordered writer so numbers go out as %.17g and keys keep their
// insertion order regardless of the parser library.
class JsonWriter {
 public:
  void begin_object() {
    comma();
    out_ += '{';
    fresh_ = true;
  }
  void end_object() {
    out_ += '}';
    fresh_ = false;
  }
  void begin_array() {
    comma();
    out_ += '[';
    fresh_ = true;
  }
  void end_array() {
    out_ += ']';
    fresh_ = false;
  }
  void key(const std::string& k) {
    comma();
    quote(k);
    out_ += ':';
    fresh_ = true;
  }
  void value(double v) {
    comma();
    if (!std::isfinite(v)) {
      out_ += "null";
      return;
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out_ += buf;
  }
  void value(long v) {
    comma();
    out_ += std::to_string(v);
  }
  void value(int v) { value(static_cast<long>(v)); }
  void value(bool v) {
    comma();
    out_ += v ? "true" : "false";
  }
  void value(const std::string& v) {
    comma();
    quote(v);
  }
  void null() {
    comma();
    out_ += "null";
  }
  void vec3(const Vec3& v) {
    begin_array();
    value(v.x);
    value(v.y);
    value(v.z);
    end_array();
  }
  std::string take() { return std::move(out_); }

 private:
  void comma() {
    if (!fresh_ && !out_.empty() && out_.back() != '{' && out_.back() != '[' &&
        out_.back() != ':')
      out_ += ',';
    fresh_ = false;
  }
  void quote(const std::string& s) {
    out_ += '"';
    for (char c : s) {
      switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        default: out_ += c;
      }
    }
    out_ += '"';
  }

  std::string out_;
  bool fresh_ = true;
};

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// ---- parsing helpers ----

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key()))
      throw Error("unknown key '" + it.key() + "' in " + where);
  }
}

double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw Error(where + " must be a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& where) {
  const double v = as_number(j, where);
  const double r = std::round(v);
  if (std::abs(v - r) > 1e-9) throw Error(where + " must be an integer");
  return static_cast<int>(r);
}

Vec3 as_vec3(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3)
    throw Error(where + " must be an array of three numbers");
  return {as_number(j[0], where), as_number(j[1], where), as_number(j[2], where)};
}

std::vector<Vec3> as_vec3_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw Error(where + " must be an array");
  std::vector<Vec3> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(as_vec3(e, where + " entry"));
  return out;
}

CurveSpec curve_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw Error(where + " must be an object");
  reject_unknown_keys(j, {"kind", "params", "samples"}, where);
  CurveSpec spec;
  if (!j.contains("kind") || !j["kind"].is_string())
    throw Error(where + " needs a string 'kind'");
  spec.kind = j["kind"].get<std::string>();
  if (spec.kind != "circle" && spec.kind != "torus_knot" &&
      spec.kind != "perturbed_circle" && spec.kind != "sampled")
    throw Error(where + " has unknown kind '" + spec.kind + "'");
  if (j.contains("params")) {
    if (!j["params"].is_object()) throw Error(where + ".params must be an object");
    for (auto it = j["params"].begin(); it != j["params"].end(); ++it)
      spec.params[it.key()] = as_number(it.value(), where + ".params." + it.key());
  }
  if (j.contains("samples")) spec.samples = as_vec3_list(j["samples"], where + ".samples");
  return spec;
}

FramingSpec framing_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw Error(where + " must be an object");
  reject_unknown_keys(j, {"kind", "direction", "twists", "base", "samples"}, where);
  FramingSpec spec;
  if (!j.contains("kind") || !j["kind"].is_string())
    throw Error(where + " needs a string 'kind'");
  spec.kind = j["kind"].get<std::string>();
  if (spec.kind != "frenet" && spec.kind != "projection" && spec.kind != "twisted" &&
      spec.kind != "sampled")
    throw Error(where + " has unknown kind '" + spec.kind + "'");
  if (j.contains("direction")) spec.direction = as_vec3(j["direction"], where + ".direction");
  if (j.contains("twists")) spec.twists = as_int(j["twists"], where + ".twists");
  if (j.contains("base"))
    spec.base = std::make_shared<FramingSpec>(framing_from_json(j["base"], where + ".base"));
  if (j.contains("samples")) spec.samples = as_vec3_list(j["samples"], where + ".samples");
  if (spec.kind == "twisted" && !spec.base)
    throw Error(where + " of kind 'twisted' needs a 'base' framing");
  if (spec.kind == "sampled" && spec.samples.empty())
    throw Error(where + " of kind 'sampled' needs 'samples'");
  return spec;
}

QuadratureConfig quadrature_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw Error(where + " must be an object");
  reject_unknown_keys(j, {"n", "diagonal_policy", "richardson", "parallel"}, where);
  QuadratureConfig cfg;
  if (j.contains("n")) cfg.n = as_int(j["n"], where + ".n");
  if (j.contains("diagonal_policy")) {
    if (!j["diagonal_policy"].is_string() || j["diagonal_policy"] != "zero")
      throw Error(where + ".diagonal_policy must be \"zero\"");
  }
  if (j.contains("richardson")) {
    if (!j["richardson"].is_boolean()) throw Error(where + ".richardson must be a boolean");
    cfg.richardson = j["richardson"].get<bool>();
  }
  if (j.contains("parallel")) {
    if (!j["parallel"].is_boolean()) throw Error(where + ".parallel must be a boolean");
    cfg.parallel = j["parallel"].get<bool>();
  }
  cfg.validate();
  return cfg;
}

FamilySpec family_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw Error(where + " must be an object");
  reject_unknown_keys(j, {"mode", "amplitude", "axis", "phase"}, where);
  FamilySpec spec;
  if (j.contains("mode")) spec.mode = as_int(j["mode"], where + ".mode");
  if (j.contains("amplitude"))
    spec.amplitude = as_number(j["amplitude"], where + ".amplitude");
  if (j.contains("axis")) spec.axis = as_vec3(j["axis"], where + ".axis");
  if (j.contains("phase")) spec.phase = as_number(j["phase"], where + ".phase");
  return spec;
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // nlohmann's message already carries line and column information.
    throw Error(e.what());
  }
}

void check_schema_version(const json& j, const std::string& where) {
  if (!j.contains("schema_version"))
    throw Error(where + " is missing 'schema_version'");
  if (!j["schema_version"].is_number_integer() ||
      j["schema_version"].get<int>() != kSchemaVersion)
    throw Error(where + " has unsupported schema_version (expected " +
                std::to_string(kSchemaVersion) + ")");
}

double epsilon_from_json(const json& j, const std::string& where) {
  if (j.is_string()) {
    if (j.get<std::string>() != "auto")
      throw Error(where + " must be a positive number or \"auto\"");
    return 0.0;
  }
  const double v = as_number(j, where);
  if (!(v > 0.0)) throw Error(where + " must be a positive number or \"auto\"");
  return v;
}

}  // namespace

CurveSpec parse_curve_spec(const std::string& json_text) {
  return curve_from_json(parse_document(json_text), "curve");
}

RunConfig parse_run_config(const std::string& json_text) {
  const json j = parse_document(json_text);
  if (!j.is_object()) throw Error("config must be a JSON object");
  reject_unknown_keys(j,
                      {"schema_version", "curve", "curve2", "framing", "quadrature",
                       "epsilon", "output", "format"},
                      "config");
  check_schema_version(j, "config");

  RunConfig cfg;
  if (!j.contains("curve")) throw Error("config is missing 'curve'");
  cfg.curve = curve_from_json(j["curve"], "curve");
  if (j.contains("curve2")) cfg.curve2 = curve_from_json(j["curve2"], "curve2");
  if (j.contains("framing")) cfg.framing = framing_from_json(j["framing"], "framing");
  if (j.contains("quadrature"))
    cfg.quadrature = quadrature_from_json(j["quadrature"], "quadrature");
  if (j.contains("epsilon")) cfg.epsilon = epsilon_from_json(j["epsilon"], "epsilon");
  if (j.contains("output")) {
    if (!j["output"].is_string()) throw Error("output must be a string");
    cfg.output = j["output"].get<std::string>();
  }
  if (j.contains("format")) {
    if (!j["format"].is_string()) throw Error("format must be a string");
    cfg.format = j["format"].get<std::string>();
    if (cfg.format != "json" && cfg.format != "csv")
      throw Error("format must be \"json\" or \"csv\"");
  }
  return cfg;
}

VerifyConfig parse_verify_config(const std::string& json_text) {
  const json j = parse_document(json_text);
  if (!j.is_object()) throw Error("config must be a JSON object");
  reject_unknown_keys(j, {"schema_version", "fixtures", "quadrature"}, "config");
  check_schema_version(j, "config");

  VerifyConfig cfg;
  if (j.contains("quadrature"))
    cfg.quadrature = quadrature_from_json(j["quadrature"], "quadrature");
  if (!j.contains("fixtures") || !j["fixtures"].is_array() || j["fixtures"].empty())
    throw Error("config needs a nonempty 'fixtures' array");

  int index = 0;
  for (const auto& f : j["fixtures"]) {
    const std::string where = "fixtures[" + std::to_string(index) + "]";
    if (!f.is_object()) throw Error(where + " must be an object");
    reject_unknown_keys(
        f, {"name", "curve", "framing", "family", "directions", "epsilon"}, where);
    VerifyFixture fixture;
    fixture.name = f.contains("name") && f["name"].is_string()
                       ? f["name"].get<std::string>()
                       : "fixture_" + std::to_string(index);
    if (!f.contains("curve")) throw Error(where + " is missing 'curve'");
    fixture.curve = curve_from_json(f["curve"], where + ".curve");
    if (f.contains("framing"))
      fixture.framing = framing_from_json(f["framing"], where + ".framing");
    if (f.contains("family"))
      fixture.family = family_from_json(f["family"], where + ".family");
    if (f.contains("directions"))
      fixture.directions = as_vec3_list(f["directions"], where + ".directions");
    if (f.contains("epsilon"))
      fixture.epsilon = epsilon_from_json(f["epsilon"], where + ".epsilon");
    cfg.fixtures.push_back(std::move(fixture));
    ++index;
  }
  return cfg;
}

std::string to_json(const SelfLinkReport& report) {
  JsonWriter w;
  w.begin_object();
  w.key("schema_version");
  w.value(kSchemaVersion);
  w.key("writhe");
  w.value(report.writhe);
  w.key("twist");
  w.value(report.twist);
  w.key("total_torsion");
  if (report.total_torsion) w.value(*report.total_torsion); else w.null();
  w.key("sl_real");
  w.value(report.sl_real);
  w.key("sl");
  w.value(report.sl);
  w.key("residual");
  w.value(report.residual);
  w.key("framing_class");
  w.value(std::string(to_string(report.framing_class)));
  w.key("oracle_sl");
  if (report.oracle_sl) w.value(*report.oracle_sl); else w.null();
  w.key("oracle_agrees");
  if (report.oracle_agrees) w.value(*report.oracle_agrees); else w.null();
  w.key("failed");
  w.value(report.failed);
  w.key("quadrature");
  w.begin_object();
  w.key("n");
  w.value(report.quadrature.n);
  w.key("diagonal_policy");
  w.value(std::string("zero"));
  w.key("richardson");
  w.value(report.quadrature.richardson);
  w.key("parallel");
  w.value(report.quadrature.parallel);
  w.end_object();
  w.end_object();
  std::string out = w.take();
  out += '\n';
  return out;
}

std::string to_csv(const SelfLinkReport& report) {
  std::string out =
      "writhe,twist,total_torsion,sl_real,sl,residual,framing_class,oracle_sl,"
      "oracle_agrees,failed\n";
  out += format_double(report.writhe) + ",";
  out += format_double(report.twist) + ",";
  if (report.total_torsion) out += format_double(*report.total_torsion);
  out += ",";
  out += format_double(report.sl_real) + ",";
  out += std::to_string(report.sl) + ",";
  out += format_double(report.residual) + ",";
  out += std::string(to_string(report.framing_class)) + ",";
  if (report.oracle_sl) out += std::to_string(*report.oracle_sl);
  out += ",";
  if (report.oracle_agrees) out += *report.oracle_agrees ? "true" : "false";
  out += ",";
  out += report.failed ? "true" : "false";
  out += "\n";
  return out;
}

std::string to_json(const Diagram& diagram) {
  long writhe = 0;
  for (const Crossing& c : diagram.crossings)
    if (c.strand_a == c.strand_b) writhe += c.sign;

  JsonWriter w;
  w.begin_object();
  w.key("schema_version");
  w.value(kSchemaVersion);
  w.key("direction");
  w.vec3(diagram.direction);
  w.key("crossings");
  w.begin_array();
  for (const Crossing& c : diagram.crossings) {
    w.begin_object();
    w.key("s");
    w.value(c.s);
    w.key("t");
    w.value(c.t);
    w.key("sign");
    w.value(c.sign);
    w.key("over");
    w.value(c.over);
    w.end_object();
  }
  w.end_array();
  w.key("writhe");
  w.value(writhe);
  w.end_object();
  std::string out = w.take();
  out += '\n';
  return out;
}

std::string to_json(const SuiteResult& result) {
  JsonWriter w;
  w.begin_object();
  w.key("schema_version");
  w.value(kSchemaVersion);
  w.key("suite");
  w.value(result.suite);
  w.key("pass");
  w.value(result.pass);
  w.key("fixtures");
  w.begin_array();
  for (const auto& f : result.fixtures) {
    w.begin_object();
    w.key("name");
    w.value(f.name);
    w.key("pass");
    w.value(f.pass);
    w.key("checks");
    w.begin_array();
    for (const auto& c : f.checks) {
      w.begin_object();
      w.key("name");
      w.value(c.name);
      w.key("value");
      w.value(c.value);
      w.key("reference");
      w.value(c.reference);
      w.key("gap");
      w.value(c.gap);
      w.key("tolerance");
      w.value(c.tolerance);
      w.key("pass");
      w.value(c.pass);
      w.end_object();
    }
    w.end_array();
    w.end_object();
  }
  w.end_array();
  w.end_object();
  std::string out = w.take();
  out += '\n';
  return out;
}

}  // namespace selflink
