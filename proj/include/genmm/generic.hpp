#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "genmm/extended.hpp"

namespace genmm {

/// Finite-dimensional GENERIC quintuple (Y, E, S, L, K). Implementations
/// must be immutable after construction; all member functions are const and
/// safe to call concurrently.
class SystemModel {
 public:
  virtual ~SystemModel() = default;

  virtual int dimension() const = 0;
  /// True iff S(y) > -inf.
  virtual bool in_domain(const Eigen::VectorXd& y) const = 0;
  virtual double energy(const Eigen::VectorXd& y) const = 0;
  /// Only meaningful for in-domain states.
  virtual double entropy(const Eigen::VectorXd& y) const = 0;
  virtual Eigen::VectorXd grad_energy(const Eigen::VectorXd& y) const = 0;
  virtual Eigen::VectorXd grad_entropy(const Eigen::VectorXd& y) const = 0;
  /// Antisymmetric Poisson operator L(y).
  virtual Eigen::MatrixXd poisson(const Eigen::VectorXd& y) const = 0;
  /// Symmetric positive-semidefinite Onsager operator K(y).
  virtual Eigen::MatrixXd onsager(const Eigen::VectorXd& y) const = 0;

  /// Analytic partial derivative dL/dy_dir, if the model provides one.
  virtual std::optional<Eigen::MatrixXd> poisson_partial(const Eigen::VectorXd&,
                                                         int) const {
    return std::nullopt;
  }
};

/// Result of a structural check over a set of sample states.
struct ValidationReport {
  std::string check;
  double max_residual = 0.0;   ///< worst residual over all samples
  double min_eigenvalue = 0.0; ///< PSD check only
  double tolerance = 0.0;
  std::size_t samples = 0;
  bool pass = false;
};

enum class ExecPolicy { Serial, Parallel };

/// Entropy-production potential Psi(y, xi) = <xi, K(y) xi> / 2.
double psi(const SystemModel& model, const Eigen::VectorXd& y,
           const Eigen::VectorXd& xi);

/// Rank policy of the pseudoinverse behind psi_star_pinv.
struct RangePolicy {
  double eig_cutoff_rel = 1e-12;  ///< eigenvalues below cutoff*lambda_max are treated as zero
  double range_tol = 1e-10;       ///< |(I - K K^+) eta| <= range_tol * max(1, |eta|)
};

/// Conjugate of Psi in the second variable, computed through the symmetric
/// eigendecomposition pseudoinverse of K(y). Returns +inf when eta does not
/// lie in range(K(y)) up to the range tolerance.
ExtendedScalar psi_star_pinv(const SystemModel& model, const Eigen::VectorXd& y,
                             const Eigen::VectorXd& eta,
                             const RangePolicy& policy = {});

/// Psi*(y, K xi) + Psi(y, xi) - <xi, K xi>; zero up to rounding.
double fenchel_gap(const SystemModel& model, const Eigen::VectorXd& y,
                   const Eigen::VectorXd& xi);

/// L(y) DE(y) + K(y) DS(y).
Eigen::VectorXd generic_rhs(const SystemModel& model, const Eigen::VectorXd& y);

ValidationReport check_antisymmetry(const SystemModel& model,
                                    std::span<const Eigen::VectorXd> samples,
                                    double tol,
                                    ExecPolicy exec = ExecPolicy::Parallel);

ValidationReport check_onsager_psd(const SystemModel& model,
                                   std::span<const Eigen::VectorXd> samples,
                                   double tol,
                                   ExecPolicy exec = ExecPolicy::Parallel);

/// Residuals of L^T DS = 0 and K^T DE = 0.
ValidationReport check_noninteraction(const SystemModel& model,
                                      std::span<const Eigen::VectorXd> samples,
                                      double tol,
                                      ExecPolicy exec = ExecPolicy::Parallel);

struct JacobiOptions {
  double fd_step = 1e-6;           ///< central-difference step, scaled by 1 + |y_l|
  bool use_analytic = false;       ///< use the model's analytic dL when available
};

/// Jacobi-identity residual R_ijk = sum_l (L_li d_l L_jk + cyclic).
ValidationReport check_jacobi(const SystemModel& model,
                              std::span<const Eigen::VectorXd> samples,
                              double tol, const JacobiOptions& opts = {},
                              ExecPolicy exec = ExecPolicy::Parallel);

/// Reproducible validation sampling: q, p uniform in [-2, 2], theta
/// log-uniform in [0.1, 10]. Default seed 42.
std::vector<Eigen::VectorXd> sample_states(std::size_t n, std::uint64_t seed = 42);

}  // namespace genmm
