#include "racetrack/equilibrium.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "racetrack/errors.hpp"

namespace racetrack {

namespace {

void require_finite(const Field& f, const char* name, long iteration) {
  if (!f.allFinite()) {
    std::ostringstream msg;
    msg << "equilibrium: non-finite " << name << " at iteration " << iteration;
    throw NumericalError(msg.str());
  }
}

// x^(1/k) through the vectorized log/exp kernels.
Field root(const Field& x, double k) { return (x.array().log() * (1.0 / k)).exp().matrix(); }

double relative_mismatch(const Field& stored, const Field& recomputed) {
  const double scale = recomputed.cwiseAbs().maxCoeff();
  return (stored - recomputed).cwiseAbs().maxCoeff() / (scale > 0.0 ? scale : 1.0);
}

}  // namespace

PopulationField PopulationField::homogeneous(const Grid& grid) {
  return {Field::Constant(grid.size(), 1.0 / grid.circumference())};
}

void PopulationField::validate(const Grid& grid, double tol) const {
  if (values.size() != grid.size()) throw ConfigError("population: size does not match grid");
  if (!values.allFinite() || values.minCoeff() < 0.0) throw ConfigError("population: values must be finite and >= 0");
  const double mass = grid.integrate(values);
  if (std::abs(mass - 1.0) > tol) {
    std::ostringstream msg;
    msg << "population: mass must be 1, got " << mass;
    throw ConfigError(msg.str());
  }
}

EquilibriumSolver::EquilibriumSolver(const Grid& grid, const ModelParams& params, SolverOptions options)
    : grid_(grid), params_(params), options_(options) {
  params_.validate();
  if (!(options_.tol > 0.0)) throw ConfigError("solver: tol must be > 0");
  if (options_.max_iter < 1) throw ConfigError("solver: max_iter must be >= 1");
  if (!(options_.damping > 0.0 && options_.damping <= 1.0)) throw ConfigError("solver: damping must lie in (0, 1]");
  // Quadrature weight folded into the kernels.
  kernel_agri_ = KernelMatrix(grid_, params_.alpha()).matrix() * grid_.weight();
  kernel_manu_ = KernelMatrix(grid_, params_.beta()).matrix() * grid_.weight();
}

Equilibrium EquilibriumSolver::solve(const Field& lambda, const Field& phi, const Equilibrium* warm_start) const {
  const int size = grid_.size();
  if (lambda.size() != size || phi.size() != size) throw ConfigError("solver: field size does not match grid");

  const double mu = params_.mu;
  const double sigma = params_.sigma;
  const double eta = params_.eta;

  Field power_agri = Field::Ones(size);
  Field power_manu = Field::Ones(size);
  if (warm_start != nullptr && warm_start->power_agri.size() == size && warm_start->power_manu.size() == size) {
    power_agri = warm_start->power_agri;
    power_manu = warm_start->power_manu;
  }
  Field wage_agri = root(power_agri, eta);
  Field wage_manu = root(power_manu, sigma);

  Field income(size), index_agri(size), index_manu(size), next_agri(size), next_manu(size);
  double delta = 0.0;
  long iter = 0;
  while (true) {
    ++iter;
    income = mu * wage_manu.cwiseProduct(lambda) + (1.0 - mu) * wage_agri.cwiseProduct(phi);
    // Price indices raised to (1 - elasticity): w^(1-eta) = w / W.
    index_agri.noalias() = kernel_agri_ * (phi.array() * wage_agri.array() / power_agri.array()).matrix();
    index_manu.noalias() = kernel_manu_ * (lambda.array() * wage_manu.array() / power_manu.array()).matrix();
    next_agri.noalias() = kernel_agri_ * income.cwiseQuotient(index_agri);
    next_manu.noalias() = kernel_manu_ * income.cwiseQuotient(index_manu);

    if (options_.damping != 1.0) {
      next_agri = options_.damping * next_agri + (1.0 - options_.damping) * power_agri;
      next_manu = options_.damping * next_manu + (1.0 - options_.damping) * power_manu;
    }
    wage_agri = root(next_agri, eta);
    wage_manu = root(next_manu, sigma);
    if (options_.normalize_wages) {
      // One common wage factor c puts the mean manufacturing wage at 1.
      const double c = 1.0 / wage_manu.mean();
      wage_agri *= c;
      wage_manu *= c;
      next_agri *= std::pow(c, eta);
      next_manu *= std::pow(c, sigma);
    }
    require_finite(next_agri, "W^A", iter);
    require_finite(next_manu, "W^M", iter);

    delta = std::max((next_agri - power_agri).cwiseAbs().maxCoeff(), (next_manu - power_manu).cwiseAbs().maxCoeff());
    power_agri.swap(next_agri);
    power_manu.swap(next_manu);
    if (delta < options_.tol) break;
    if (iter >= options_.max_iter) {
      std::ostringstream msg;
      msg << "equilibrium: no convergence after " << iter << " iterations (residual " << delta << ")";
      throw NumericalError(msg.str());
    }
  }

  Equilibrium eq = from_wages(lambda, phi, wage_agri, wage_manu);
  eq.power_agri = std::move(power_agri);
  eq.power_manu = std::move(power_manu);
  eq.iterations = iter;
  eq.residual = delta;
  require_finite(eq.real_wage, "omega^M", iter);
  return eq;
}

Equilibrium EquilibriumSolver::from_wages(const Field& lambda, const Field& phi, const Field& wage_agri,
                                          const Field& wage_manu) const {
  const double mu = params_.mu;
  const double sigma = params_.sigma;
  const double eta = params_.eta;
  Equilibrium eq;
  eq.wage_agri = wage_agri;
  eq.wage_manu = wage_manu;
  // Everything below works in logs: Eigen vectorizes log and exp but not pow.
  const Eigen::ArrayXd log_wage_agri = wage_agri.array().log();
  const Eigen::ArrayXd log_wage_manu = wage_manu.array().log();
  eq.power_agri = (eta * log_wage_agri).exp().matrix();
  eq.power_manu = (sigma * log_wage_manu).exp().matrix();
  eq.income = mu * wage_manu.cwiseProduct(lambda) + (1.0 - mu) * wage_agri.cwiseProduct(phi);
  const Field index_agri = kernel_agri_ * (phi.array() * ((1.0 - eta) * log_wage_agri).exp()).matrix();
  const Field index_manu = kernel_manu_ * (lambda.array() * ((1.0 - sigma) * log_wage_manu).exp()).matrix();
  const Eigen::ArrayXd log_price_agri = index_agri.array().log() / (1.0 - eta);
  const Eigen::ArrayXd log_price_manu = index_manu.array().log() / (1.0 - sigma);
  eq.price_agri = log_price_agri.exp().matrix();
  eq.price_manu = log_price_manu.exp().matrix();
  eq.real_wage = wage_manu.array() * (-mu * log_price_manu + (mu - 1.0) * log_price_agri).exp();
  return eq;
}

double EquilibriumSolver::residual(const Equilibrium& eq, const Field& lambda, const Field& phi) const {
  const double mu = params_.mu;
  const double sigma = params_.sigma;
  const double eta = params_.eta;

  const Field income = mu * eq.wage_manu.cwiseProduct(lambda) + (1.0 - mu) * eq.wage_agri.cwiseProduct(phi);
  const Field price_agri =
      (kernel_agri_ * (phi.array() * eq.wage_agri.array().pow(1.0 - eta)).matrix()).array().pow(1.0 / (1.0 - eta));
  const Field wage_agri =
      (kernel_agri_ * (eq.income.array() * eq.price_agri.array().pow(eta - 1.0)).matrix()).array().pow(1.0 / eta);
  const Field price_manu = (kernel_manu_ * (lambda.array() * eq.wage_manu.array().pow(1.0 - sigma)).matrix())
                               .array()
                               .pow(1.0 / (1.0 - sigma));
  const Field wage_manu =
      (kernel_manu_ * (eq.income.array() * eq.price_manu.array().pow(sigma - 1.0)).matrix()).array().pow(1.0 / sigma);
  const Field real_wage =
      eq.wage_manu.array() * eq.price_manu.array().pow(-mu) * eq.price_agri.array().pow(mu - 1.0);

  double worst = 0.0;
  worst = std::max(worst, relative_mismatch(eq.income, income));
  worst = std::max(worst, relative_mismatch(eq.price_agri, price_agri));
  worst = std::max(worst, relative_mismatch(eq.wage_agri, wage_agri));
  worst = std::max(worst, relative_mismatch(eq.price_manu, price_manu));
  worst = std::max(worst, relative_mismatch(eq.wage_manu, wage_manu));
  worst = std::max(worst, relative_mismatch(eq.real_wage, real_wage));
  return worst;
}

Equilibrium solve_instantaneous(const Grid& grid, const PopulationField& lambda, const PopulationField& phi,
                                const ModelParams& params, const SolverOptions& options) {
  lambda.validate(grid);
  phi.validate(grid);
  return EquilibriumSolver(grid, params, options).solve(lambda.values, phi.values);
}

double equilibrium_residual(const Grid& grid, const Equilibrium& eq, const PopulationField& lambda,
                            const PopulationField& phi, const ModelParams& params) {
  return EquilibriumSolver(grid, params).residual(eq, lambda.values, phi.values);
}

}  // namespace racetrack
