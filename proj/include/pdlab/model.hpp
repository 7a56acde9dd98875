#ifndef PDLAB_MODEL_HPP_
#define PDLAB_MODEL_HPP_

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pdlab/region.hpp"

namespace pdlab {

class DimensionError : public std::invalid_argument {
 public:
  DimensionError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  [[nodiscard]] const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Linear system  dU/dt + A dU/dx = -1_omega(x) * Btilde * U,  where omega is
// the complement of `region` and Btilde = diag(0_{n1}, Dd).
struct HyperbolicSystem {
  int n1 = 0;
  Eigen::MatrixXd A;
  Eigen::MatrixXd Dd;
  UndampedRegion region;

  HyperbolicSystem(int undamped_block, Eigen::MatrixXd flux, Eigen::MatrixXd damping,
                   UndampedRegion undamped);

  [[nodiscard]] int n() const noexcept { return static_cast<int>(A.rows()); }
  [[nodiscard]] int n2() const noexcept { return n() - n1; }
};

/// Eigen-decomposition of a symmetric flux matrix with ascending eigenvalues.
struct EigenStructure {
  Eigen::VectorXd lambdas;
  Eigen::MatrixXd P;  // columns are eigenvectors
  int p = 0;          // number of negative eigenvalues

  [[nodiscard]] int n() const noexcept { return static_cast<int>(lambdas.size()); }
};

struct FullDampingMatrix {
  Eigen::MatrixXd Btilde;
  double kappa0 = 0.0;
};

struct ValidationCheck {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  double kappa0 = 0.0;

  [[nodiscard]] bool passed() const noexcept {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  [[nodiscard]] const ValidationCheck* find(const std::string& name) const noexcept {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

inline constexpr int kJacobiSweepBudget = 100;
inline constexpr double kJacobiTolerance = 1e-13;

/// Cyclic Jacobi eigen-solver for a real symmetric matrix. Returns the
/// eigenvalues (unsorted) and accumulates rotations into `vectors`. Throws
/// ConvergenceError when the sweep budget is exhausted.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> jacobi_eigen(
    const Eigen::MatrixBase<Derived>& symmetric,
    Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>& vectors,
    int sweep_budget = kJacobiSweepBudget,
    typename Derived::Scalar relative_tolerance = typename Derived::Scalar(kJacobiTolerance)) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using std::abs;
  using std::sqrt;

  Matrix a = symmetric;
  const Eigen::Index n = a.rows();
  vectors = Matrix::Identity(n, n);
  const Scalar scale = a.norm();
  const Scalar target = relative_tolerance * scale;

  auto off_norm = [&a, n]() {
    Scalar s(0);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return sqrt(s);
  };

  int sweep = 0;
  while (off_norm() > target) {
    if (sweep++ >= sweep_budget)
      throw ConvergenceError("Jacobi eigen-solver did not converge within " +
                             std::to_string(sweep_budget) + " sweeps");
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar apq = a(p, q);
        if (apq == Scalar(0)) continue;
        const Scalar theta = (a(q, q) - a(p, p)) / (Scalar(2) * apq);
        const Scalar t = (theta >= Scalar(0) ? Scalar(1) : Scalar(-1)) /
                         (abs(theta) + sqrt(theta * theta + Scalar(1)));
        const Scalar c = Scalar(1) / sqrt(t * t + Scalar(1));
        const Scalar s = t * c;
        // A <- J^T A J with J the (p, q) rotation.
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar akp = a(k, p);
          const Scalar akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar apk = a(p, k);
          const Scalar aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar vkp = vectors(k, p);
          const Scalar vkq = vectors(k, q);
          vectors(k, p) = c * vkp - s * vkq;
          vectors(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  return a.diagonal();
}

/// Ascending eigenvalues and an orthogonal eigenbasis whose columns have a
/// positive first significant entry.
EigenStructure diagonalize(const Eigen::MatrixXd& A);

/// Btilde = diag(0, Dd) and kappa0 = smallest eigenvalue of sym(Dd).
FullDampingMatrix full_damping(const HyperbolicSystem& sys);

ValidationReport validate_system(const HyperbolicSystem& sys);

/// Shizuta-Kawashima via eigenvectors: no eigenvector of A lies in Ker(Btilde).
bool sk_check_eigvec(const EigenStructure& eigs, const FullDampingMatrix& B);

/// Shizuta-Kawashima via the Kalman rank of [B; BA; ...; BA^{n-1}].
bool sk_check_kalman(const Eigen::MatrixXd& A, const FullDampingMatrix& B);

/// Rank by Gaussian elimination with partial pivoting; rows whose pivot falls
/// below relative_threshold * (largest pivot) count as dependent.
int row_reduced_rank(Eigen::MatrixXd m, double relative_threshold = 1e-10);

/// Coupling matrix P^T Btilde P of the diagonalized transport system.
Eigen::MatrixXd source_matrix(const EigenStructure& eigs, const FullDampingMatrix& B);

}  // namespace pdlab

#endif  // PDLAB_MODEL_HPP_
