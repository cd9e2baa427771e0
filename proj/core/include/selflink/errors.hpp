#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "selflink/vec3.hpp"

namespace selflink {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --- geometry ---

class TorsionUndefined : public Error {
 public:
  explicit TorsionUndefined(double t)
      : Error("torsion undefined at t=" + std::to_string(t) +
              ": |gamma' x gamma''| below 1e-9"),
        parameter(t) {}
  double parameter;
};

class FrameUndefined : public Error {
 public:
  explicit FrameUndefined(double t)
      : Error("Frenet frame undefined at t=" + std::to_string(t) +
              ": curvature below 1e-9"),
        parameter(t) {}
  double parameter;
};

// --- framing ---

class CurvatureVanishes : public Error {
 public:
  explicit CurvatureVanishes(double t)
      : Error("curvature vanishes near t=" + std::to_string(t)), parameter(t) {}
  double parameter;
};

class DirectionDegenerate : public Error {
 public:
  explicit DirectionDegenerate(double t)
      : Error("projection direction is parallel to the tangent near t=" +
              std::to_string(t)),
        parameter(t) {}
  double parameter;
};

class PushoffCollision : public Error {
 public:
  PushoffCollision(double epsilon, double min_distance)
      : Error("pushoff at epsilon=" + std::to_string(epsilon) +
              " collides with the base curve (min distance " +
              std::to_string(min_distance) + ")") {}
};

class LiftAmbiguous : public Error {
 public:
  using Error::Error;
};

// --- quadrature ---

class CoincidentPoints : public Error {
 public:
  using Error::Error;
};

class CurvesIntersect : public Error {
 public:
  using Error::Error;
};

class SelfIntersection : public Error {
 public:
  using Error::Error;
};

// --- diagram ---

class NonGenericDirection : public Error {
 public:
  explicit NonGenericDirection(std::vector<Vec3> tried)
      : Error("no generic projection direction found after " +
              std::to_string(tried.size()) + " attempts"),
        attempted(std::move(tried)) {}
  std::vector<Vec3> attempted;
};

class DegenerateCrossing : public Error {
 public:
  using Error::Error;
};

class OddCrossingParity : public Error {
 public:
  explicit OddCrossingParity(long sum)
      : Error("inter-strand signed crossing sum " + std::to_string(sum) +
              " is odd; crossing detection is inconsistent") {}
};

class ZeroOnGridLine : public Error {
 public:
  using Error::Error;
};

// --- invariant ---

class NontrivialClass : public Error {
 public:
  NontrivialClass()
      : Error("framing loop lies in the nontrivial class of pi_1(SO(3)); "
              "the disc correction does not apply") {}
};

class InvarianceViolated : public Error {
 public:
  using Error::Error;
};

}  // namespace selflink
