#pragma once

#include <optional>
#include <string>
#include <vector>

#include "racetrack/model_params.hpp"

namespace racetrack {

/// Mass of the exponential kernel over the circle: 2(1 - exp(-decay*radius*pi)) / decay,
/// with the decay -> 0 limit 2*pi*radius.
double exp_kernel_mass(double decay, double radius);

/// Normalized Fourier coefficient of exp(-decay * d) at frequency n.
/// Lies in [0, 1); zero at decay = 0. Throws ConfigError for n = 0.
double h_coefficient(int n, double decay, double radius);

struct HomogeneousState {
  double lambda;        // manufacturing density 1/(2 pi rho)
  double phi;           // agricultural density 1/(2 pi rho)
  double wage;          // nominal wage, shared by both sectors
  double income;
  double price_agri;    // G^A
  double price_manu;    // G^M
  double real_wage;     // omega^M
  double mass_alpha;    // E_alpha
  double mass_beta;     // E_beta
};

/// Spatially uniform stationary state. The nominal wage is a free scale;
/// the real wage does not depend on it.
HomogeneousState homogeneous_state(const ModelParams& params, double wage = 1.0);

/// Closed-form homogeneous real wage, written without reference to the wage scale.
double homogeneous_real_wage(const ModelParams& params);

struct SpectralResult {
  int n = 0;
  double h_alpha = 0.0;
  double h_beta = 0.0;
  double b = 0.0;
  double d = 0.0;
  double big_b = 0.0;
  double q = 0.0;           // quadratic evaluated at h_beta
  double omega = 0.0;       // growth factor of the real-wage response
  double eigenvalue = 0.0;  // gamma * lambda_bar * omega
};

/// Quadratic whose sign decides stability of mode n, given b and B.
double stability_quadratic(double h, double b, double big_b, double mu, double sigma);

/// Growth rate of frequency n around the homogeneous state.
/// Throws NumericalError when an internal bound (mu < b <= 1, D > 0) fails.
SpectralResult mode_growth(int n, const ModelParams& params);

struct ScanOptions {
  double tau_lo = 1e-3;
  double tau_hi = 20.0;
  int points = 400;
  double tol = 1e-8;
};

/// Descending geometric grid from tau_hi down to tau_lo.
std::vector<double> geometric_grid(double lo, double hi, int points);

enum class CriticalStatus { none, upper_only, lower_only, two, anomaly };

std::string to_string(CriticalStatus status);

struct CriticalPoints {
  int n = 0;
  std::optional<double> lower;
  std::optional<double> upper;
  CriticalStatus status = CriticalStatus::none;
  std::vector<double> crossings;  // every refined root, ascending
  ScanOptions scan;
};

/// Zeros of the mode-n eigenvalue as a function of tau_m. params.tau_m is ignored.
CriticalPoints critical_points(int n, const ModelParams& params, const ScanOptions& scan = {});

enum class Plane { tau_m_tau_a, tau_m_eta };

struct AxisRange {
  double lo;
  double hi;
  int points;
};

struct CurvePoint {
  double x;
  double y;
};

struct CriticalCurve {
  int n = 0;
  Plane plane = Plane::tau_m_tau_a;
  std::vector<double> xs;              // tau_m values
  std::vector<double> ys;              // tau_a or eta values
  std::vector<double> eigenvalues;     // row-major, ys.size() rows by xs.size() columns
  std::vector<CurvePoint> polyline;    // zero crossings, ordered by column then y

  double at(std::size_t row, std::size_t col) const { return eigenvalues[row * xs.size() + col]; }
};

/// Eigenvalue heatmap on a rectangular grid plus its zero-level set, located
/// by bisection along y within each column.
CriticalCurve critical_curve(int n, const ModelParams& base, Plane plane, const AxisRange& x_axis,
                             const AxisRange& y_axis, double tol = 1e-10);

struct EigenRow {
  int n;
  double tau_m;
  SpectralResult result;
};

/// mode_growth for each n in order, each evaluated over the tau_m grid in order.
std::vector<EigenRow> eigen_table(const std::vector<int>& ns, const ModelParams& params,
                                  const std::vector<double>& tau_m_grid);

/// Smallest N >= 0 with Omega_n > 0 for all N < n <= N + window, searching N < n_limit.
std::optional<int> positive_tail_start(const ModelParams& params, int window = 50, int n_limit = 100000);

}  // namespace racetrack
