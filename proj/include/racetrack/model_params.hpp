#pragma once

namespace racetrack {

/// Scalar parameters of the racetrack economy.
///
///   mu      manufacturing expenditure share, in (0, 1)
///   sigma   manufacturing elasticity of substitution, > 1
///   eta     agricultural elasticity of substitution, > 1
///   tau_a   agricultural transport cost rate, >= 0
///   tau_m   manufacturing transport cost rate, >= 0
///   radius  circle radius, > 0
///   gamma   migration adjustment speed, > 0
struct ModelParams {
  double mu = 0.5;
  double sigma = 3.0;
  double eta = 2.0;
  double tau_a = 2.0;
  double tau_m = 4.0;
  double radius = 1.0;
  double gamma = 1.0;

  double alpha() const { return tau_a * (eta - 1.0); }
  double beta() const { return tau_m * (sigma - 1.0); }
  bool no_black_hole() const { return (sigma - 1.0) / sigma > mu; }

  ModelParams with_tau_m(double value) const {
    ModelParams copy = *this;
    copy.tau_m = value;
    return copy;
  }

  /// Throws ConfigError naming the first field out of bounds.
  void validate() const;
};

}  // namespace racetrack
