#pragma once

// Test-only reference computations. Nothing here calls into the library's
// closed forms; each routine reaches the same quantity by another path.

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

namespace oracle {

inline constexpr double kPi = std::numbers::pi;

inline double arc(double a, double b, double radius) {
  const double gap = std::abs(a - b);
  return radius * std::min(gap, 2.0 * kPi - gap);
}

/// Composite Simpson over a periodic node set theta_j = -pi + j*h, centred at
/// node 0. With even `nodes` the kernel kinks (node 0 and its antipode) fall
/// on panel boundaries. Returns the integral of exp(-decay d) cos(n (theta - theta_0)) dx.
inline double simpson_kernel_moment(int n, double decay, double radius, int nodes) {
  const double h = 2.0 * kPi / nodes;
  double sum = 0.0;
  for (int j = 0; j < nodes; ++j) {
    const double theta = -kPi + j * h;
    const double f = std::exp(-decay * arc(theta, -kPi, radius)) * std::cos(n * (theta + kPi));
    const double w = (j == 0) ? 2.0 : (j % 2 == 1 ? 4.0 : 2.0);
    sum += w * f;
  }
  return sum * h * radius / 3.0;
}

/// Normalized Fourier coefficient of the exponential kernel by quadrature.
inline double quadrature_h(int n, double decay, double radius, int nodes = 4096) {
  return simpson_kernel_moment(n, decay, radius, nodes) / simpson_kernel_moment(0, decay, radius, nodes);
}

/// Plain Riemann sum of the kernel over the circle (integral of exp(-decay d(x_1, .))).
inline double riemann_kernel_mass(double decay, double radius, int nodes) {
  const double h = 2.0 * kPi / nodes;
  double sum = 0.0;
  for (int j = 0; j < nodes; ++j) sum += std::exp(-decay * arc(-kPi + j * h, -kPi, radius));
  return sum * h * radius;
}

struct Params {
  double mu, sigma, eta, tau_a, tau_m, radius;
};

/// Growth factor Omega_n from the linearized Fourier system, solved as a dense
/// 6x6 linear system with lambda_hat = 1. H values and kernel masses come from
/// quadrature, so no closed form is shared with the library.
inline double fourier_system_omega(int n, const Params& p, double wage = 1.0, int nodes = 4096) {
  const double alpha = p.tau_a * (p.eta - 1.0);
  const double beta = p.tau_m * (p.sigma - 1.0);
  const double ha = quadrature_h(n, alpha, p.radius, nodes);
  const double hb = quadrature_h(n, beta, p.radius, nodes);
  const double ea = simpson_kernel_moment(0, alpha, p.radius, nodes);
  const double eb = simpson_kernel_moment(0, beta, p.radius, nodes);
  const double circ = 2.0 * kPi * p.radius;
  const double lam = 1.0 / circ;
  const double phi = 1.0 / circ;
  const double mu = p.mu;
  const double s = p.sigma;
  const double e = p.eta;
  const double ga = std::pow(phi * std::pow(wage, 1.0 - e) * ea, 1.0 / (1.0 - e));
  const double gm = std::pow(lam * std::pow(wage, 1.0 - s) * eb, 1.0 / (1.0 - s));
  const double om = wage * std::pow(gm, -mu) * std::pow(ga, mu - 1.0);

  // Unknowns: Y, G^A, w^A, G^M, w^M, omega.
  Eigen::Matrix<double, 6, 6> a = Eigen::Matrix<double, 6, 6>::Zero();
  Eigen::Matrix<double, 6, 1> rhs = Eigen::Matrix<double, 6, 1>::Zero();
  a.row(0) << 1, 0, -(1 - mu) * phi, 0, -mu * lam, 0;
  rhs(0) = mu * wage;
  a.row(1) << 0, 1, -ga / wage * ha, 0, 0, 0;
  a.row(2) << -circ / e * ha, -(e - 1) / e * wage / ga * ha, 1, 0, 0, 0;
  a.row(3) << 0, 0, 0, 1, -gm / wage * hb, 0;
  rhs(3) = circ / (1 - s) * gm * hb;
  a.row(4) << -circ / s * hb, 0, 0, -(s - 1) / s * wage / gm * hb, 1, 0;
  a.row(5) << 0, (1 - mu) * om / ga, 0, mu * om / gm, -om / wage, 1;
  return a.fullPivLu().solve(rhs)(5);
}

}  // namespace oracle
