#pragma once

#include <stdexcept>
#include <string>

namespace aoi {

// Evaluation hit a pole or left the region where a transform is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Parameters violate the stability condition of the model. `slack` is the
// signed margin of the condition (negative or zero when violated).
class StabilityError : public std::runtime_error {
 public:
  StabilityError(const std::string& what, double slack)
      : std::runtime_error(what), slack_(slack) {}
  double slack() const noexcept { return slack_; }

 private:
  double slack_;
};

// Richardson extrapolation failed to settle within tolerance.
class UnstableDerivative : public std::runtime_error {
 public:
  UnstableDerivative(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class DivergentLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Discrete Fourier inversion of a PGF produced a coefficient outside [0, 1].
class InversionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class OracleUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace aoi
