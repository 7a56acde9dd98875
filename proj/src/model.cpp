#include "pdlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pdlab {

HyperbolicSystem::HyperbolicSystem(int undamped_block, Eigen::MatrixXd flux,
                                   Eigen::MatrixXd damping, UndampedRegion undamped)
    : n1(undamped_block), A(std::move(flux)), Dd(std::move(damping)), region(std::move(undamped)) {
  if (A.rows() < 1 || A.rows() != A.cols())
    throw DimensionError("A", "must be a non-empty square matrix, got " + std::to_string(A.rows()) +
                                  "x" + std::to_string(A.cols()));
  if (n1 < 0 || n1 > A.rows())
    throw DimensionError("n1", "must lie in [0, n] with n = " + std::to_string(A.rows()));
  const auto n2 = A.rows() - n1;
  if (Dd.rows() != n2 || Dd.cols() != n2)
    throw DimensionError("Dd", "must be " + std::to_string(n2) + "x" + std::to_string(n2) +
                                   " (n - n1), got " + std::to_string(Dd.rows()) + "x" +
                                   std::to_string(Dd.cols()));
  if (!A.allFinite()) throw DimensionError("A", "contains non-finite entries");
  if (!Dd.allFinite()) throw DimensionError("Dd", "contains non-finite entries");
}

EigenStructure diagonalize(const Eigen::MatrixXd& A) {
  const Eigen::Index n = A.rows();
  Eigen::MatrixXd vectors;
  const Eigen::VectorXd values = jacobi_eigen(A, vectors);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&values](Eigen::Index a, Eigen::Index b) { return values(a) < values(b); });

  EigenStructure out;
  out.lambdas.resize(n);
  out.P.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.lambdas(k) = values(order[static_cast<std::size_t>(k)]);
    Eigen::VectorXd v = vectors.col(order[static_cast<std::size_t>(k)]);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(v(i)) > 1e-12) {
        if (v(i) < 0) v = -v;
        break;
      }
    }
    out.P.col(k) = v;
  }
  out.p = static_cast<int>((out.lambdas.array() < 0.0).count());
  return out;
}

FullDampingMatrix full_damping(const HyperbolicSystem& sys) {
  FullDampingMatrix B;
  B.Btilde = Eigen::MatrixXd::Zero(sys.n(), sys.n());
  if (sys.n2() > 0) {
    B.Btilde.bottomRightCorner(sys.n2(), sys.n2()) = sys.Dd;
    const Eigen::MatrixXd sym = 0.5 * (sys.Dd + sys.Dd.transpose());
    Eigen::MatrixXd unused;
    B.kappa0 = jacobi_eigen(sym, unused).minCoeff();
  }
  return B;
}

ValidationReport validate_system(const HyperbolicSystem& sys) {
  ValidationReport report;
  const Eigen::MatrixXd& A = sys.A;
  const double scale = A.cwiseAbs().maxCoeff();

  {
    const double asym = (A - A.transpose()).cwiseAbs().maxCoeff();
    const double threshold = 1e-12 * scale;
    report.checks.push_back({"symmetry", asym <= threshold, asym, threshold,
                             "max |A_ij - A_ji| against 1e-12 max|A|"});
  }

  // Spectrum of the symmetric part; equals the spectrum of A when symmetric.
  const Eigen::MatrixXd sym = 0.5 * (A + A.transpose());
  Eigen::VectorXd lambdas;
  try {
    lambdas = diagonalize(sym).lambdas;
  } catch (const ConvergenceError& e) {
    report.checks.push_back({"strict_hyperbolicity", false, 0.0, 0.0, e.what()});
    report.checks.push_back({"nonzero_eigenvalues", false, 0.0, 0.0, e.what()});
  }
  if (lambdas.size() > 0) {
    const double range = lambdas.maxCoeff() - lambdas.minCoeff();
    double min_gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 1; i < lambdas.size(); ++i)
      min_gap = std::min(min_gap, lambdas(i) - lambdas(i - 1));
    const double gap_threshold = 1e-9 * range;
    const bool distinct = lambdas.size() == 1 || min_gap > gap_threshold;
    report.checks.push_back({"strict_hyperbolicity", distinct,
                             lambdas.size() == 1 ? 0.0 : min_gap, gap_threshold,
                             "min eigenvalue gap against 1e-9 (lambda_max - lambda_min)"});

    const double largest = lambdas.cwiseAbs().maxCoeff();
    const double smallest = lambdas.cwiseAbs().minCoeff();
    const double zero_threshold = 1e-9 * largest;
    report.checks.push_back({"nonzero_eigenvalues", largest > 0.0 && smallest > zero_threshold,
                             smallest, zero_threshold, "min |lambda| against 1e-9 max |lambda|"});
  }

  const FullDampingMatrix B = full_damping(sys);
  report.kappa0 = B.kappa0;
  report.checks.push_back({"damping_positivity", sys.n2() > 0 && B.kappa0 > 0.0, B.kappa0, 0.0,
                           "smallest eigenvalue of (Dd + Dd^T)/2"});

  const auto defect = describe_region_defect(sys.region.stripes());
  report.checks.push_back({"region", defect.empty(), sys.region.total_length(), 0.0,
                           defect.empty() ? "total undamped length" : defect});
  return report;
}

bool sk_check_eigvec(const EigenStructure& eigs, const FullDampingMatrix& B) {
  for (Eigen::Index k = 0; k < eigs.P.cols(); ++k) {
    const Eigen::VectorXd v = eigs.P.col(k);
    const double image = (B.Btilde * v).cwiseAbs().maxCoeff();
    if (image <= 1e-10 * v.cwiseAbs().maxCoeff()) return false;
  }
  return true;
}

int row_reduced_rank(Eigen::MatrixXd m, double relative_threshold) {
  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = m.cols();
  int rank = 0;
  double largest_pivot = 0.0;
  for (Eigen::Index c = 0; c < cols && rank < rows; ++c) {
    Eigen::Index pivot_row = rank;
    m.col(c).segment(rank, rows - rank).cwiseAbs().maxCoeff(&pivot_row);
    pivot_row += rank;
    const double pivot = std::abs(m(pivot_row, c));
    largest_pivot = std::max(largest_pivot, pivot);
    if (pivot == 0.0 || pivot < relative_threshold * largest_pivot) continue;
    m.row(rank).swap(m.row(pivot_row));
    for (Eigen::Index r = rank + 1; r < rows; ++r) {
      const double f = m(r, c) / m(rank, c);
      if (f != 0.0) m.row(r) -= f * m.row(rank);
    }
    ++rank;
  }
  return rank;
}

bool sk_check_kalman(const Eigen::MatrixXd& A, const FullDampingMatrix& B) {
  const Eigen::Index n = A.rows();
  Eigen::MatrixXd stacked(n * n, n);
  Eigen::MatrixXd block = B.Btilde;
  for (Eigen::Index k = 0; k < n; ++k) {
    stacked.middleRows(k * n, n) = block;
    block = block * A;
  }
  return row_reduced_rank(stacked) == n;
}

Eigen::MatrixXd source_matrix(const EigenStructure& eigs, const FullDampingMatrix& B) {
  return eigs.P.transpose() * B.Btilde * eigs.P;
}

}  // namespace pdlab
