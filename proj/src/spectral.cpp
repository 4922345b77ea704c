#include "racetrack/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include "racetrack/errors.hpp"

namespace racetrack {

namespace {

constexpr double kPi = std::numbers::pi;

// Below this decay*radius the closed forms lose digits to cancellation.
constexpr double kSeriesThreshold = 1e-8;

void require_nonzero_mode(int n) {
  if (n == 0) throw ConfigError("n: mode 0 is excluded (perturbations carry no mass)");
}

template <class F>
double bisect(F&& f, double lo, double hi, double f_lo, double tol) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

void ModelParams::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (!(mu > 0.0 && mu < 1.0)) fail("mu must lie in (0, 1)");
  if (!(sigma > 1.0) || !std::isfinite(sigma)) fail("sigma must be > 1");
  if (!(eta > 1.0) || !std::isfinite(eta)) fail("eta must be > 1");
  if (!(tau_a >= 0.0) || !std::isfinite(tau_a)) fail("tau_a must be >= 0");
  if (!(tau_m >= 0.0) || !std::isfinite(tau_m)) fail("tau_m must be >= 0");
  if (!(radius > 0.0) || !std::isfinite(radius)) fail("radius must be > 0");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) fail("gamma must be > 0");
}

double exp_kernel_mass(double decay, double radius) {
  const double x = decay * radius;
  if (x < kSeriesThreshold) return 2.0 * kPi * radius * (1.0 - 0.5 * kPi * x);
  return -2.0 * std::expm1(-kPi * x) / decay;
}

double h_coefficient(int n, double decay, double radius) {
  require_nonzero_mode(n);
  const double x = decay * radius;
  if (x <= 0.0) return 0.0;
  const double n2 = static_cast<double>(n) * n;
  const double x2 = x * x;
  const bool odd = (std::abs(n) % 2) == 1;
  if (x < kSeriesThreshold) {
    // Even modes: the bracket ratio is exactly 1. Odd modes: coth(pi x / 2).
    const double ratio = odd ? 2.0 / (kPi * x) + kPi * x / 6.0 : 1.0;
    return x2 * ratio / (n2 + x2);
  }
  const double tail = std::exp(-kPi * x);
  const double numer = odd ? 1.0 + tail : -std::expm1(-kPi * x);
  const double denom = -std::expm1(-kPi * x);
  return x2 * numer / ((n2 + x2) * denom);
}

HomogeneousState homogeneous_state(const ModelParams& params, double wage) {
  params.validate();
  const double circumference = 2.0 * kPi * params.radius;
  HomogeneousState s{};
  s.lambda = 1.0 / circumference;
  s.phi = 1.0 / circumference;
  s.wage = wage;
  s.income = wage / circumference;
  s.mass_alpha = exp_kernel_mass(params.alpha(), params.radius);
  s.mass_beta = exp_kernel_mass(params.beta(), params.radius);
  s.price_agri = std::pow(s.phi * std::pow(wage, 1.0 - params.eta) * s.mass_alpha, 1.0 / (1.0 - params.eta));
  s.price_manu =
      std::pow(s.lambda * std::pow(wage, 1.0 - params.sigma) * s.mass_beta, 1.0 / (1.0 - params.sigma));
  s.real_wage = wage * std::pow(s.price_manu, -params.mu) * std::pow(s.price_agri, params.mu - 1.0);
  return s;
}

double homogeneous_real_wage(const ModelParams& params) {
  params.validate();
  const double density = 1.0 / (2.0 * kPi * params.radius);
  const double manu = params.mu / (params.sigma - 1.0);
  const double agri = (1.0 - params.mu) / (params.eta - 1.0);
  return std::pow(density, manu) * std::pow(density, agri) *
         std::pow(exp_kernel_mass(params.alpha(), params.radius), agri) *
         std::pow(exp_kernel_mass(params.beta(), params.radius), manu);
}

double stability_quadratic(double h, double b, double big_b, double mu, double sigma) {
  const double quad = -sigma * (mu * mu + b) / b + 1.0 + big_b;
  const double lin = mu * (sigma * (b + 1.0) - 1.0) / b;
  return quad * h * h + lin * h - big_b;
}

SpectralResult mode_growth(int n, const ModelParams& params) {
  require_nonzero_mode(n);
  params.validate();
  const double mu = params.mu;
  const double sigma = params.sigma;
  const double eta = params.eta;

  SpectralResult r;
  r.n = n;
  r.h_alpha = h_coefficient(n, params.alpha(), params.radius);
  r.h_beta = h_coefficient(n, params.beta(), params.radius);
  r.b = 1.0 - (1.0 - mu) * r.h_alpha / (eta - (eta - 1.0) * r.h_alpha * r.h_alpha);
  r.d = sigma - (mu / r.b) * r.h_beta - (sigma - 1.0) * r.h_beta * r.h_beta;
  r.big_b = mu * sigma * (sigma - 1.0) * (1.0 - r.b) * r.h_alpha / r.b;
  r.q = stability_quadratic(r.h_beta, r.b, r.big_b, mu, sigma);

  if (!(r.b > mu && r.b <= 1.0) || !(r.d > 0.0)) {
    std::ostringstream msg;
    msg << "mode_growth: bound violated at n=" << n << " (b=" << r.b << ", D=" << r.d << ")";
    throw NumericalError(msg.str());
  }

  const double lambda_bar = 1.0 / (2.0 * kPi * params.radius);
  const double prefactor = 2.0 * kPi * params.radius * homogeneous_real_wage(params) / ((sigma - 1.0) * r.d);
  r.omega = prefactor * r.q;
  r.eigenvalue = params.gamma * lambda_bar * r.omega;
  return r;
}

std::vector<double> geometric_grid(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi > lo)) throw ConfigError("scan range must satisfy 0 < lo < hi");
  if (points < 2) throw ConfigError("scan points must be >= 2");
  std::vector<double> grid(points);
  const double ratio = std::log(lo / hi) / (points - 1);
  for (int k = 0; k < points; ++k) grid[k] = hi * std::exp(ratio * k);
  grid.front() = hi;
  grid.back() = lo;
  return grid;
}

std::string to_string(CriticalStatus status) {
  switch (status) {
    case CriticalStatus::none: return "none";
    case CriticalStatus::upper_only: return "upper_only";
    case CriticalStatus::lower_only: return "lower_only";
    case CriticalStatus::two: return "two";
    case CriticalStatus::anomaly: return "anomaly";
  }
  return "unknown";
}

CriticalPoints critical_points(int n, const ModelParams& params, const ScanOptions& scan) {
  require_nonzero_mode(n);
  if (!(scan.tol > 0.0)) throw ConfigError("tol must be > 0");
  CriticalPoints out;
  out.n = n;
  out.scan = scan;

  auto omega_at = [&](double tau_m) { return mode_growth(n, params.with_tau_m(tau_m)).omega; };
  const auto grid = geometric_grid(scan.tau_lo, scan.tau_hi, scan.points);

  // Walk downward in tau_m; each sign flip is one root.
  std::vector<int> flips;  // +1 when the eigenvalue turns positive going down, -1 otherwise
  double prev = omega_at(grid[0]);
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double cur = omega_at(grid[k]);
    if ((cur > 0.0) != (prev > 0.0)) {
      const double hi = grid[k - 1];
      const double lo = grid[k];
      out.crossings.push_back(bisect(omega_at, lo, hi, cur, scan.tol));
      flips.push_back(cur > 0.0 ? +1 : -1);
    }
    prev = cur;
  }
  std::reverse(out.crossings.begin(), out.crossings.end());
  std::reverse(flips.begin(), flips.end());

  const bool flat_agri = params.alpha() == 0.0;
  if (out.crossings.size() > 2) {
    out.status = CriticalStatus::anomaly;
  } else if (out.crossings.size() == 2 && flips[0] == -1 && flips[1] == +1) {
    // Ascending order: stable -> unstable at the lower root, unstable -> stable at the upper.
    out.lower = out.crossings[0];
    out.upper = out.crossings[1];
    out.status = CriticalStatus::two;
  } else if (out.crossings.size() == 2) {
    out.status = CriticalStatus::anomaly;
  } else if (out.crossings.size() == 1) {
    if (flips[0] == +1) {
      out.upper = out.crossings[0];
      out.status = CriticalStatus::upper_only;
      if (flat_agri) {
        // Without agricultural transport costs the eigenvalue vanishes only at tau_m = 0.
        out.lower = 0.0;
        out.status = CriticalStatus::two;
      }
    } else {
      out.lower = out.crossings[0];
      out.status = CriticalStatus::lower_only;
    }
  }
  return out;
}

CriticalCurve critical_curve(int n, const ModelParams& base, Plane plane, const AxisRange& x_axis,
                             const AxisRange& y_axis, double tol) {
  require_nonzero_mode(n);
  for (const AxisRange* axis : {&x_axis, &y_axis}) {
    if (!(axis->lo > 0.0) || !(axis->hi > axis->lo)) throw ConfigError("curve: axis range must satisfy 0 < lo < hi");
    if (axis->points < 16) throw ConfigError("curve: resolution must be >= 16 per axis");
  }
  if (plane == Plane::tau_m_eta && !(y_axis.lo > 1.0)) throw ConfigError("curve: eta axis must stay above 1");

  auto linspace = [](const AxisRange& a) {
    std::vector<double> v(a.points);
    for (int k = 0; k < a.points; ++k) v[k] = a.lo + (a.hi - a.lo) * k / (a.points - 1);
    return v;
  };
  auto params_at = [&](double x, double y) {
    ModelParams p = base;
    p.tau_m = x;
    if (plane == Plane::tau_m_tau_a) {
      p.tau_a = y;
    } else {
      p.eta = y;
    }
    return p;
  };

  CriticalCurve curve;
  curve.n = n;
  curve.plane = plane;
  curve.xs = linspace(x_axis);
  curve.ys = linspace(y_axis);
  const std::size_t nx = curve.xs.size();
  const std::size_t ny = curve.ys.size();
  curve.eigenvalues.resize(nx * ny);
  for (std::size_t row = 0; row < ny; ++row) {
    for (std::size_t col = 0; col < nx; ++col) {
      curve.eigenvalues[row * nx + col] = mode_growth(n, params_at(curve.xs[col], curve.ys[row])).eigenvalue;
    }
  }

  for (std::size_t col = 0; col < nx; ++col) {
    const double x = curve.xs[col];
    auto along_y = [&](double y) { return mode_growth(n, params_at(x, y)).eigenvalue; };
    for (std::size_t row = 1; row < ny; ++row) {
      const double below = curve.at(row - 1, col);
      const double above = curve.at(row, col);
      if ((below > 0.0) != (above > 0.0)) {
        curve.polyline.push_back({x, bisect(along_y, curve.ys[row - 1], curve.ys[row], below, tol)});
      }
    }
  }
  return curve;
}

std::vector<EigenRow> eigen_table(const std::vector<int>& ns, const ModelParams& params,
                                  const std::vector<double>& tau_m_grid) {
  std::vector<EigenRow> rows;
  rows.reserve(ns.size() * tau_m_grid.size());
  for (int n : ns) {
    for (double tau : tau_m_grid) rows.push_back({n, tau, mode_growth(n, params.with_tau_m(tau))});
  }
  return rows;
}

std::optional<int> positive_tail_start(const ModelParams& params, int window, int n_limit) {
  int last_nonpositive = 0;
  for (int n = 1; n <= n_limit + window; ++n) {
    if (mode_growth(n, params).omega <= 0.0) {
      last_nonpositive = n;
      if (last_nonpositive >= n_limit) return std::nullopt;
    }
    if (n - last_nonpositive >= window) return last_nonpositive;
  }
  return std::nullopt;
}

}  // namespace racetrack
