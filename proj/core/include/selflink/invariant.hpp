#pragma once

#include <optional>
#include <string>
#include <vector>

#include "selflink/curve.hpp"
#include "selflink/errors.hpp"
#include "selflink/framing.hpp"
#include "selflink/quadrature.hpp"

namespace selflink {

struct SelfLinkReport {
  double writhe = 0.0;  // eta
  double twist = 0.0;   // tau_phi
  std::optional<double> total_torsion;
  double sl_real = 0.0;  // eta + tau_phi
  long sl = 0;           // rounded
  double residual = 0.0;
  LiftClass framing_class = LiftClass::trivial;
  std::optional<long> oracle_sl;      // linking of the pushoff, diagram route
  std::optional<bool> oracle_agrees;  // sl == oracle_sl
  bool failed = false;                // residual >= 0.5; never silently rounded
  QuadratureConfig quadrature;
};

// Carries the partially-assembled report so callers can still emit it.
class ReportFailed : public Error {
 public:
  explicit ReportFailed(SelfLinkReport r)
      : Error("self-linking residual " + std::to_string(r.residual) +
              " is too large to round"),
        report(std::move(r)) {}
  SelfLinkReport report;
};

// gamma_u(t) = base(t) + u amplitude sin(2 pi mode t + phase) axis,
// u in [0, 1].
struct IsotopyFamily {
  CurvePtr base;
  int mode = 2;
  double amplitude = 0.0;
  Vec3 axis{0, 0, 1};
  double phase = 0.0;

  CurvePtr member(double u) const;
  // Embeddedness at u in {0, 0.25, 0.5, 0.75, 1}; throws Error.
  void validate(int resolution = 1024) const;
};

struct OracleOptions {
  bool enabled = true;
  double epsilon = 0.0;  // 0 = auto (0.01 diameter, halved until stable)
  Vec3 direction{0, 0, 1};
  int diagram_n = 1024;
};

// eta + tau_phi with rounding certificate, SO(3) class, and (optionally)
// the combinatorial pushoff oracle. Throws ReportFailed when the residual
// reaches 0.5.
SelfLinkReport self_link(const CurvePtr& curve, const FramingPtr& framing,
                         const QuadratureConfig& cfg, const OracleOptions& oracle = {});

// The disc-correction representative of the framing's homotopy class:
// equals tau_phi, but only the trivial class admits the disc construction,
// so the nontrivial class throws NontrivialClass.
double swaddle_correction(const FramingPtr& framing, const QuadratureConfig& cfg);

// Pushoff distance rule: 0.01 x diameter, halved (with re-validation)
// until the combinatorial linking number is stable under one further
// halving.
double choose_pushoff_epsilon(const CurvePtr& curve, const FramingPtr& framing,
                              const Vec3& direction = {0, 0, 1}, int diagram_n = 1024);

struct CalugareanuVerdict {
  double analytic = 0.0;         // eta + tau_phi
  double pushoff_linking = 0.0;  // Gauss integral of (curve, pushoff)
  long oracle = 0;               // diagram linking integer
  double epsilon_used = 0.0;
  double gap_analytic = 0.0;  // |analytic - oracle|
  double gap_quadrature = 0.0;  // |pushoff_linking - oracle|
  double gap_pair = 0.0;        // |analytic - pushoff_linking|
  double tolerance = 0.0;
  bool pass = false;
};

CalugareanuVerdict verify_calugareanu(const CurvePtr& curve, const FramingPtr& framing,
                                      double epsilon, const QuadratureConfig& cfg,
                                      double tolerance = 1e-2);

struct InvarianceVerdict {
  std::vector<double> u;
  std::vector<long> sl;
  std::vector<double> eta;
  std::vector<double> tau;
  double eta_spread = 0.0;  // max |eta(u) - eta(0)|
  bool pass = false;        // sl identical along the family
};

// Recomputes the framing from its rule at each u; adjacent framings are
// checked for continuity (n_u . n_u' > 0).
InvarianceVerdict verify_invariance(const IsotopyFamily& family, const FramingSpec& rule,
                                    const QuadratureConfig& cfg,
                                    const std::vector<double>& u_samples);

struct ReparametrizationVerdict {
  std::vector<double> shifts;
  std::vector<long> sl;
  std::vector<double> eta;
  std::vector<double> tau;
  double eta_spread = 0.0;
  double tau_spread = 0.0;
  bool pass = false;  // sl identical and spreads below 1e-6
};

ReparametrizationVerdict reparametrization_check(const CurvePtr& curve,
                                                 const FramingPtr& framing,
                                                 const std::vector<double>& shifts,
                                                 const QuadratureConfig& cfg);

// Throw InvarianceViolated when a verdict fails; convenience for callers
// that want the error path instead of the record.
void ensure(const InvarianceVerdict& verdict);
void ensure(const ReparametrizationVerdict& verdict);

}  // namespace selflink
