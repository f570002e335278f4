#include "genmm/generic.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace genmm {

namespace {

void require_domain(const SystemModel& model, const Eigen::VectorXd& y) {
  if (!model.in_domain(y)) throw InvalidStateError("state outside the entropy domain");
}

void require_samples(std::span<const Eigen::VectorXd> samples) {
  if (samples.empty()) throw std::invalid_argument("empty sample set");
}

}  // namespace

double psi(const SystemModel& model, const Eigen::VectorXd& y,
           const Eigen::VectorXd& xi) {
  require_domain(model, y);
  return 0.5 * xi.dot(model.onsager(y) * xi);
}

ExtendedScalar psi_star_pinv(const SystemModel& model, const Eigen::VectorXd& y,
                             const Eigen::VectorXd& eta, const RangePolicy& policy) {
  require_domain(model, y);
  const Eigen::MatrixXd K = model.onsager(y);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(K);
  const Eigen::VectorXd& lam = eig.eigenvalues();
  const Eigen::MatrixXd& V = eig.eigenvectors();
  const double cutoff = policy.eig_cutoff_rel * std::max(0.0, lam.maxCoeff());

  // Coefficients of eta in the eigenbasis; components on the (near-)null
  // space must vanish up to the range tolerance.
  const Eigen::VectorXd coeff = V.transpose() * eta;
  double out_of_range_sq = 0.0;
  double value = 0.0;
  for (int i = 0; i < lam.size(); ++i) {
    if (lam[i] <= cutoff) {
      out_of_range_sq += coeff[i] * coeff[i];
    } else {
      value += coeff[i] * coeff[i] / lam[i];
    }
  }
  const double range_tol = policy.range_tol * std::max(1.0, eta.norm());
  if (std::sqrt(out_of_range_sq) > range_tol) return ExtendedScalar::pos_inf();
  return ExtendedScalar::finite(0.5 * value);
}

double fenchel_gap(const SystemModel& model, const Eigen::VectorXd& y,
                   const Eigen::VectorXd& xi) {
  require_domain(model, y);
  const Eigen::MatrixXd K = model.onsager(y);
  const Eigen::VectorXd eta = K * xi;
  const ExtendedScalar dual = psi_star_pinv(model, y, eta);
  // eta = K xi lies in range(K) by construction; a sentinel here would be a
  // rank-policy breakage worth surfacing.
  return dual.value() + psi(model, y, xi) - xi.dot(eta);
}

Eigen::VectorXd generic_rhs(const SystemModel& model, const Eigen::VectorXd& y) {
  require_domain(model, y);
  return model.poisson(y) * model.grad_energy(y) +
         model.onsager(y) * model.grad_entropy(y);
}

ValidationReport check_antisymmetry(const SystemModel& model,
                                    std::span<const Eigen::VectorXd> samples,
                                    double tol, ExecPolicy exec) {
  require_samples(samples);
  double worst = 0.0;
  const long n = static_cast<long>(samples.size());
#pragma omp parallel for reduction(max : worst) if (exec == ExecPolicy::Parallel)
  for (long i = 0; i < n; ++i) {
    const Eigen::MatrixXd L = model.poisson(samples[i]);
    const double r = (L + L.transpose()).cwiseAbs().maxCoeff();
    worst = std::max(worst, r);
  }
  return {"antisymmetry", worst, 0.0, tol, samples.size(), worst <= tol};
}

ValidationReport check_onsager_psd(const SystemModel& model,
                                   std::span<const Eigen::VectorXd> samples,
                                   double tol, ExecPolicy exec) {
  require_samples(samples);
  double worst_sym = 0.0;
  double min_eig = std::numeric_limits<double>::infinity();
  const long n = static_cast<long>(samples.size());
#pragma omp parallel for reduction(max : worst_sym) reduction(min : min_eig) \
    if (exec == ExecPolicy::Parallel)
  for (long i = 0; i < n; ++i) {
    const Eigen::MatrixXd K = model.onsager(samples[i]);
    worst_sym = std::max(worst_sym, (K - K.transpose()).cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(K);
    min_eig = std::min(min_eig, eig.eigenvalues().minCoeff());
  }
  const bool pass = worst_sym <= tol && min_eig >= -tol;
  return {"onsager_psd", std::max(worst_sym, std::max(0.0, -min_eig)), min_eig, tol,
          samples.size(), pass};
}

ValidationReport check_noninteraction(const SystemModel& model,
                                      std::span<const Eigen::VectorXd> samples,
                                      double tol, ExecPolicy exec) {
  require_samples(samples);
  double worst = 0.0;
  const long n = static_cast<long>(samples.size());
#pragma omp parallel for reduction(max : worst) if (exec == ExecPolicy::Parallel)
  for (long i = 0; i < n; ++i) {
    const Eigen::VectorXd& y = samples[i];
    const double rl =
        (model.poisson(y).transpose() * model.grad_entropy(y)).cwiseAbs().maxCoeff();
    const double rk =
        (model.onsager(y).transpose() * model.grad_energy(y)).cwiseAbs().maxCoeff();
    worst = std::max(worst, std::max(rl, rk));
  }
  return {"noninteraction", worst, 0.0, tol, samples.size(), worst <= tol};
}

namespace {

double jacobi_residual(const SystemModel& model, const Eigen::VectorXd& y,
                       const JacobiOptions& opts) {
  const int d = model.dimension();
  std::vector<Eigen::MatrixXd> dL(d);
  for (int l = 0; l < d; ++l) {
    if (opts.use_analytic) {
      if (auto a = model.poisson_partial(y, l)) {
        dL[l] = *a;
        continue;
      }
    }
    const double h = opts.fd_step * (1.0 + std::abs(y[l]));
    Eigen::VectorXd yp = y, ym = y;
    yp[l] += h;
    ym[l] -= h;
    if (!model.in_domain(ym) || !model.in_domain(yp))
      throw InvalidStateError("check_jacobi: finite-difference stencil leaves the domain");
    dL[l] = (model.poisson(yp) - model.poisson(ym)) / (2.0 * h);
  }
  const Eigen::MatrixXd L = model.poisson(y);
  double worst = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        double r = 0.0;
        for (int l = 0; l < d; ++l)
          r += L(l, i) * dL[l](j, k) + L(l, j) * dL[l](k, i) + L(l, k) * dL[l](i, j);
        worst = std::max(worst, std::abs(r));
      }
  return worst;
}

}  // namespace

ValidationReport check_jacobi(const SystemModel& model,
                              std::span<const Eigen::VectorXd> samples, double tol,
                              const JacobiOptions& opts, ExecPolicy exec) {
  require_samples(samples);
  double worst = 0.0;
  const long n = static_cast<long>(samples.size());
  // Exceptions must not unwind out of the parallel region.
  std::exception_ptr error;
#pragma omp parallel for reduction(max : worst) if (exec == ExecPolicy::Parallel)
  for (long i = 0; i < n; ++i) {
    try {
      worst = std::max(worst, jacobi_residual(model, samples[i], opts));
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return {"jacobi", worst, 0.0, tol, samples.size(), worst <= tol};
}

std::vector<Eigen::VectorXd> sample_states(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> qp(-2.0, 2.0);
  std::uniform_real_distribution<double> log_theta(std::log(0.1), std::log(10.0));
  std::vector<Eigen::VectorXd> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::VectorXd y(3);
    y[0] = qp(rng);
    y[1] = qp(rng);
    y[2] = std::exp(log_theta(rng));
    out.push_back(std::move(y));
  }
  return out;
}

}  // namespace genmm
