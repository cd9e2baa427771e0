// selflink: self-linking numbers of framed closed space curves, computed
// analytically (Gauss integral + framing holonomy) and combinatorially
// (signed diagram crossings), with verification suites for the invariance
// properties that tie the two together.
//
// Exit codes: 0 success, 1 input error, 2 computation-quality failure,
// 3 tolerance failure in a verify suite.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "selflink/diagram.hpp"
#include "selflink/errors.hpp"
#include "selflink/invariant.hpp"
#include "selflink/json_io.hpp"

namespace {

using namespace selflink;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitComputation = 2;
constexpr int kExitTolerance = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Bare names resolve against $SELFLINK_FIXTURES when the path itself does
// not exist.
std::string resolve_config_path(const std::string& arg) {
  namespace fs = std::filesystem;
  if (fs::exists(arg)) return arg;
  if (const char* dir = std::getenv("SELFLINK_FIXTURES")) {
    const fs::path candidate = fs::path(dir) / arg;
    if (fs::exists(candidate)) return candidate.string();
  }
  throw Error("config file '" + arg + "' not found");
}

void write_output(const std::string& text, const std::string& target) {
  if (target == "-" || target.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(target, std::ios::binary);
  if (!out) throw Error("cannot write '" + target + "'");
  out << text;
}

void apply_thread_flag(QuadratureConfig& cfg, int threads) {
  if (threads > 0) {
    cfg.threads = threads;
    if (threads == 1) cfg.parallel = false;
  }
}

Vec3 parse_direction(const std::string& text) {
  Vec3 d;
  char comma1 = 0, comma2 = 0;
  std::istringstream ss(text);
  if (!(ss >> d.x >> comma1 >> d.y >> comma2 >> d.z) || comma1 != ',' || comma2 != ',')
    throw Error("direction must be 'x,y,z'");
  if (d.norm() <= 0.0) throw Error("direction is not a unit vector and not normalizable");
  return d;
}

// ---- compute ----

int run_compute(const std::string& config_arg, int n_override, const std::string& eps_override,
                int threads, const std::string& output_override,
                const std::string& format_override, bool no_oracle) {
  RunConfig cfg;
  CurvePtr curve;
  try {
    cfg = parse_run_config(read_file(resolve_config_path(config_arg)));
    if (n_override > 0) {
      cfg.quadrature.n = n_override;
      cfg.quadrature.validate();
    }
    if (!eps_override.empty()) {
      if (eps_override == "auto") {
        cfg.epsilon = 0.0;
      } else {
        cfg.epsilon = std::stod(eps_override);
        if (!(cfg.epsilon > 0.0)) throw Error("--epsilon must be positive or 'auto'");
      }
    }
    if (!output_override.empty()) cfg.output = output_override;
    if (!format_override.empty()) {
      if (format_override != "json" && format_override != "csv")
        throw Error("--format must be json or csv");
      cfg.format = format_override;
    }
    if (!cfg.framing) throw Error("compute needs a 'framing' in the config");
    apply_thread_flag(cfg.quadrature, threads);
    curve = make_curve(cfg.curve);  // type invariants are input validation
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    const FramingPtr framing = make_framing(*cfg.framing, curve);
    OracleOptions oracle;
    oracle.enabled = !no_oracle;
    oracle.epsilon = cfg.epsilon;
    SelfLinkReport report;
    int code = kExitOk;
    try {
      report = self_link(curve, framing, cfg.quadrature, oracle);
    } catch (const ReportFailed& e) {
      report = e.report;
      code = kExitComputation;
      std::cerr << "error: " << e.what() << "\n";
    }
    write_output(cfg.format == "csv" ? to_csv(report) : to_json(report), cfg.output);
    return code;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitComputation;
  }
}

// ---- verify ----

SuiteCheck make_check(const std::string& name, double value, double reference,
                      double tolerance, bool gate = true) {
  SuiteCheck c;
  c.name = name;
  c.value = value;
  c.reference = reference;
  c.gap = std::abs(value - reference);
  c.tolerance = tolerance;
  c.pass = !gate || c.gap <= tolerance;
  return c;
}

const std::vector<Vec3> kDefaultDirections = {
    {0, 0, 1}, {0.3, 0.2, 0.93}, {1, 2, 3}, {-2, 1, 2}};

SuiteFixtureResult run_calugareanu_fixture(const VerifyFixture& f,
                                           const QuadratureConfig& cfg) {
  SuiteFixtureResult out;
  out.name = f.name;
  if (!f.framing) throw Error("calugareanu fixture '" + f.name + "' needs a framing");
  const CurvePtr curve = make_curve(f.curve);
  const FramingPtr framing = make_framing(*f.framing, curve);
  const CalugareanuVerdict v = verify_calugareanu(curve, framing, f.epsilon, cfg);
  out.checks.push_back(make_check("eta_plus_twist_vs_oracle", v.analytic,
                                  static_cast<double>(v.oracle), v.tolerance));
  // Reported, not gated: resolving the pushoff-linking quadrature needs
  // n to grow like diameter/epsilon.
  out.checks.push_back(make_check("pushoff_linking_vs_oracle", v.pushoff_linking,
                                  static_cast<double>(v.oracle), 0.0, /*gate=*/false));
  out.pass = v.pass;
  return out;
}

SuiteFixtureResult run_invariance_fixture(const VerifyFixture& f,
                                          const QuadratureConfig& cfg) {
  SuiteFixtureResult out;
  out.name = f.name;
  if (!f.framing) throw Error("invariance fixture '" + f.name + "' needs a framing rule");
  if (!f.family) throw Error("invariance fixture '" + f.name + "' needs a family");
  IsotopyFamily family;
  family.base = make_curve(f.curve);
  family.mode = f.family->mode;
  family.amplitude = f.family->amplitude;
  family.axis = f.family->axis;
  family.phase = f.family->phase;
  const InvarianceVerdict v =
      verify_invariance(family, *f.framing, cfg, {0.0, 0.25, 0.5, 0.75, 1.0});
  long max_dev = 0;
  for (long sl : v.sl) max_dev = std::max(max_dev, std::labs(sl - v.sl[0]));
  out.checks.push_back(make_check("sl_constant_along_family",
                                  static_cast<double>(max_dev), 0.0, 0.0));
  out.checks.push_back(make_check("eta_spread", v.eta_spread, 0.0, 0.0, /*gate=*/false));
  out.pass = v.pass;
  return out;
}

SuiteFixtureResult run_frenet_fixture(const VerifyFixture& f, const QuadratureConfig& cfg) {
  SuiteFixtureResult out;
  out.name = f.name;
  const CurvePtr curve = make_curve(f.curve);
  const double tw = twist_integral(*frenet_framing(curve), cfg.n);
  const double tt = total_torsion(*curve, cfg.n);
  out.checks.push_back(make_check("twist_of_frenet_vs_total_torsion", tw, tt, 1e-6));
  out.pass = out.checks.back().pass;
  return out;
}

SuiteFixtureResult run_blackboard_fixture(const VerifyFixture& f,
                                          const QuadratureConfig& cfg) {
  SuiteFixtureResult out;
  out.name = f.name;
  const CurvePtr curve = make_curve(f.curve);
  const std::vector<Vec3>& dirs = f.directions.empty() ? kDefaultDirections : f.directions;
  const double eta = writhe_integral(*curve, cfg).value;
  out.pass = true;
  for (const Vec3& d : dirs) {
    const FramingPtr framing = projection_framing(curve, d);
    const double tau = twist_integral(*framing, std::max(cfg.n, 64));
    const long sl = std::lround(eta + tau);
    if (std::abs(eta + tau - sl) >= 0.5)
      throw Error("blackboard residual too large on fixture '" + f.name + "'");
    const long wr = diagram_writhe(curve, d);
    std::ostringstream name;
    name << "sl_equals_diagram_writhe(" << d.x << "," << d.y << "," << d.z << ")";
    out.checks.push_back(make_check(name.str(), static_cast<double>(sl),
                                    static_cast<double>(wr), 0.0));
    out.pass = out.pass && out.checks.back().pass;
  }
  return out;
}

SuiteFixtureResult run_twist_shift_fixture(const VerifyFixture& f,
                                           const QuadratureConfig& cfg) {
  SuiteFixtureResult out;
  out.name = f.name;
  if (!f.framing) throw Error("twist-shift fixture '" + f.name + "' needs a framing");
  const CurvePtr curve = make_curve(f.curve);
  const FramingPtr base = make_framing(*f.framing, curve);
  const double eta = writhe_integral(*curve, cfg).value;

  auto sl_of = [&](const FramingPtr& fr) {
    const double x = eta + twist_integral(*fr, std::max(cfg.n, 64));
    const long sl = std::lround(x);
    if (std::abs(x - sl) >= 0.5)
      throw Error("twist-shift residual too large on fixture '" + f.name + "'");
    return sl;
  };

  const long sl0 = sl_of(base);
  const LiftClass class0 = so3_lift_class(*base);
  out.pass = true;
  for (int k : {-2, -1, 1, 2}) {
    const FramingPtr fk = add_twists(base, k);
    out.checks.push_back(make_check("sl_shift_k=" + std::to_string(k),
                                    static_cast<double>(sl_of(fk) - sl0),
                                    static_cast<double>(k), 0.0));
    const LiftClass ck = so3_lift_class(*fk);
    const bool flips = (k % 2 != 0);
    out.checks.push_back(make_check("class_parity_k=" + std::to_string(k),
                                    ck != class0 ? 1.0 : 0.0, flips ? 1.0 : 0.0, 0.0));
  }
  for (const SuiteCheck& c : out.checks) out.pass = out.pass && c.pass;
  return out;
}

int run_verify(const std::string& suite, const std::string& config_arg, int n_override,
               bool json_out, int threads) {
  const std::vector<std::string> suites = {"calugareanu", "invariance", "frenet",
                                           "blackboard", "twist-shift"};
  if (std::find(suites.begin(), suites.end(), suite) == suites.end()) {
    std::cerr << "error: unknown suite '" << suite << "'; valid suites:";
    for (const auto& s : suites) std::cerr << " " << s;
    std::cerr << "\n";
    return kExitInput;
  }

  VerifyConfig config;
  try {
    config = parse_verify_config(read_file(resolve_config_path(config_arg)));
    if (n_override > 0) {
      config.quadrature.n = n_override;
      config.quadrature.validate();
    }
    apply_thread_flag(config.quadrature, threads);
    for (const VerifyFixture& f : config.fixtures) make_curve(f.curve);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }

  SuiteResult result;
  result.suite = suite;
  result.pass = true;
  try {
    for (const VerifyFixture& f : config.fixtures) {
      SuiteFixtureResult r;
      if (suite == "calugareanu") r = run_calugareanu_fixture(f, config.quadrature);
      else if (suite == "invariance") r = run_invariance_fixture(f, config.quadrature);
      else if (suite == "frenet") r = run_frenet_fixture(f, config.quadrature);
      else if (suite == "blackboard") r = run_blackboard_fixture(f, config.quadrature);
      else r = run_twist_shift_fixture(f, config.quadrature);
      result.pass = result.pass && r.pass;
      result.fixtures.push_back(std::move(r));
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitComputation;
  }

  int passed = 0;
  for (const auto& f : result.fixtures) {
    std::cerr << (f.pass ? "pass" : "FAIL") << "  " << f.name << "\n";
    for (const auto& c : f.checks) {
      if (!c.pass)
        std::cerr << "      " << c.name << ": gap " << c.gap << " > " << c.tolerance << "\n";
    }
    if (f.pass) ++passed;
  }
  std::cerr << "suite " << suite << ": " << passed << "/" << result.fixtures.size()
            << " fixtures pass\n";
  if (json_out) std::cout << to_json(result);
  return result.pass ? kExitOk : kExitTolerance;
}

// ---- converge ----

int run_converge(const std::string& target, const std::string& config_arg,
                 const std::string& n_list_arg, int threads) {
  RunConfig cfg;
  CurvePtr curve;
  std::vector<int> n_list;
  try {
    if (target != "writhe" && target != "linking" && target != "twist")
      throw Error("unknown target '" + target + "'; valid: writhe, linking, twist");
    cfg = parse_run_config(read_file(resolve_config_path(config_arg)));
    apply_thread_flag(cfg.quadrature, threads);
    curve = make_curve(cfg.curve);

    std::istringstream ss(n_list_arg);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      size_t used = 0;
      n_list.push_back(std::stoi(item, &used));
      if (used != item.size()) throw Error("invalid n-list entry '" + item + "'");
    }
    if (n_list.empty()) throw Error("--n-list must contain at least one value");
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: invalid --n-list: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    std::function<double(int)> value_at_n;
    CurvePtr other;
    FramingPtr framing;
    if (target == "writhe") {
      value_at_n = [&cfg, curve](int n) {
        QuadratureConfig qc = cfg.quadrature;
        qc.n = n;
        qc.richardson = false;
        return writhe_integral(*curve, qc).value;
      };
    } else if (target == "linking") {
      if (!cfg.curve2) throw Error("linking target needs 'curve2' in the config");
      other = make_curve(*cfg.curve2);
      value_at_n = [&cfg, curve, other](int n) {
        QuadratureConfig qc = cfg.quadrature;
        qc.n = n;
        qc.richardson = false;
        return linking_integral(*curve, *other, qc).value;
      };
    } else {
      if (!cfg.framing) throw Error("twist target needs 'framing' in the config");
      framing = make_framing(*cfg.framing, curve);
      value_at_n = [framing](int n) { return twist_integral(*framing, n); };
    }

    const auto rows = convergence_study(value_at_n, n_list);
    std::cout << "n,value,diff_prev,observed_order\n";
    char buf[64];
    for (size_t i = 0; i < rows.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", rows[i].second);
      std::cout << rows[i].first << "," << buf << ",";
      if (i > 0) {
        const double diff = rows[i].second - rows[i - 1].second;
        std::snprintf(buf, sizeof(buf), "%.17g", diff);
        std::cout << buf;
      }
      std::cout << ",";
      if (i > 1) {
        const double diff = rows[i].second - rows[i - 1].second;
        const double prev_diff = rows[i - 1].second - rows[i - 2].second;
        const double ratio_n = static_cast<double>(rows[i].first) / rows[i - 1].first;
        if (diff != 0.0 && prev_diff != 0.0) {
          std::snprintf(buf, sizeof(buf), "%.3f",
                        std::log(std::abs(prev_diff / diff)) / std::log(ratio_n));
          std::cout << buf;
        }
      }
      std::cout << "\n";
    }
    return kExitOk;
  } catch (const Error& e) {
    // converge propagates everything as an input-level failure
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

// ---- crossings ----

int run_crossings(const std::string& config_arg, const std::string& direction_arg, int n) {
  RunConfig cfg;
  CurvePtr curve;
  Vec3 direction{0, 0, 1};
  try {
    cfg = parse_run_config(read_file(resolve_config_path(config_arg)));
    if (!direction_arg.empty()) direction = parse_direction(direction_arg);
    if (n > 0 && n < 256) throw Error("--n must be at least 256");
    curve = make_curve(cfg.curve);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    const Diagram d = project_diagram({curve}, direction, n > 0 ? n : 1024);
    std::cout << to_json(d);
    return kExitOk;
  } catch (const NonGenericDirection& e) {
    std::cerr << "error: " << e.what() << "\nattempted directions:\n";
    for (const Vec3& d : e.attempted)
      std::cerr << "  " << d.x << "," << d.y << "," << d.z << "\n";
    return kExitComputation;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitComputation;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"self-linking numbers of framed closed space curves"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads,
                 "worker threads (1 = bit-reproducible reference path)");

  auto* compute = app.add_subcommand("compute", "compute a self-linking report");
  std::string compute_config, compute_eps, compute_output, compute_format;
  int compute_n = 0;
  bool no_oracle = false;
  compute->add_option("config", compute_config, "run config JSON")->required();
  compute->add_option("--n", compute_n, "quadrature grid size override");
  compute->add_option("--epsilon", compute_eps, "pushoff distance or 'auto'");
  compute->add_option("--output", compute_output, "output path ('-' = stdout)");
  compute->add_option("--format", compute_format, "json or csv");
  compute->add_flag("--no-oracle", no_oracle, "skip the combinatorial pushoff oracle");

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  std::string verify_suite, verify_config;
  int verify_n = 0;
  bool verify_json = false;
  verify->add_option("suite", verify_suite,
                     "calugareanu | invariance | frenet | blackboard | twist-shift")
      ->required();
  verify->add_option("config", verify_config, "verify config JSON")->required();
  verify->add_option("--n", verify_n, "quadrature grid size override");
  verify->add_flag("--json", verify_json, "emit JSON verdicts on stdout");

  auto* converge = app.add_subcommand("converge", "grid-refinement study (CSV)");
  std::string converge_target, converge_config, converge_nlist;
  converge->add_option("target", converge_target, "writhe | linking | twist")->required();
  converge->add_option("config", converge_config, "run config JSON")->required();
  converge->add_option("--n-list", converge_nlist, "comma-separated grid sizes")->required();

  auto* crossings = app.add_subcommand("crossings", "emit the knot diagram as JSON");
  std::string crossings_config, crossings_direction;
  int crossings_n = 0;
  crossings->add_option("config", crossings_config, "run config JSON")->required();
  crossings->add_option("--direction", crossings_direction, "projection direction x,y,z");
  crossings->add_option("--n", crossings_n, "polyline points per strand");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  if (compute->parsed())
    return run_compute(compute_config, compute_n, compute_eps, threads, compute_output,
                       compute_format, no_oracle);
  if (verify->parsed())
    return run_verify(verify_suite, verify_config, verify_n, verify_json, threads);
  if (converge->parsed())
    return run_converge(converge_target, converge_config, converge_nlist, threads);
  return run_crossings(crossings_config, crossings_direction, crossings_n);
}
