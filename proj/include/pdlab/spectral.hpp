#ifndef PDLAB_SPECTRAL_HPP_
#define PDLAB_SPECTRAL_HPP_

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pdlab/model.hpp"

namespace pdlab {

class SpectralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fourier symbol E(xi) = -i xi A - Btilde of the fully damped system.
struct SymbolMatrix {
  double xi = 0.0;
  Eigen::MatrixXcd E;
};

inline constexpr double kMatrixExpNormLimit = 1e8;

/// exp(M t) by scaling and squaring of a truncated Taylor series.
/// Throws SpectralError when ||M t||_1 exceeds kMatrixExpNormLimit or the
/// result overflows.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> matrix_exp(
    const Eigen::MatrixBase<Derived>& M, double t) {
  using Matrix = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = M.rows();
  Matrix X = M * typename Derived::Scalar(t);
  const double norm1 = X.cwiseAbs().colwise().sum().maxCoeff();
  if (!std::isfinite(norm1) || norm1 > kMatrixExpNormLimit)
    throw SpectralError("matrix exponential argument too large (||Mt||_1 = " +
                        std::to_string(norm1) + ")");

  int squarings = 0;
  if (norm1 > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
  X /= std::ldexp(1.0, squarings);

  Matrix result = Matrix::Identity(n, n);
  Matrix term = Matrix::Identity(n, n);
  for (int k = 1; k <= 30; ++k) {
    term = (term * X) / static_cast<double>(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() <= 1e-18 * result.cwiseAbs().maxCoeff()) break;
  }
  for (int s = 0; s < squarings; ++s) result = (result * result).eval();
  if (!result.allFinite()) throw SpectralError("matrix exponential overflowed");
  return result;
}

SymbolMatrix symbol(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Btilde, double xi);
SymbolMatrix symbol(const HyperbolicSystem& sys, double xi);
/// Same symbol in diagonalized coordinates: -i xi diag(lambdas) - P^T Btilde P.
SymbolMatrix symbol(const EigenStructure& eigs, const Eigen::MatrixXd& source, double xi);

/// Largest real part of the eigenvalues (complex Schur form, shifted QR).
double spectral_abscissa(const Eigen::MatrixXcd& M);

struct SpectralScan {
  std::vector<double> xi_grid;
  std::vector<double> abscissas;
  double gamma = 0.0;        // -max abscissa over |xi| >= 1
  double c_low = 0.0;        // abscissa ~ -c_low xi^2 on 0 < |xi| <= 0.1
  bool dissipative = false;  // every sampled abscissa at |xi| >= 1 is negative
  bool tail_stable = false;  // abscissa variation over the last decade < 1e-6
  double tail_variation = 0.0;
};

SpectralScan gamma_estimate(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Btilde,
                            double xi_max = 100.0, int samples = 400);
SpectralScan gamma_estimate(const HyperbolicSystem& sys, double xi_max = 100.0,
                            int samples = 400);

struct FullspaceNorms {
  double t = 0.0;
  double l2_total = 0.0;    // from the frequency side
  double l2_high = 0.0;     // |xi| > 1
  double l2_low = 0.0;      // |xi| <= 1
  double linf_low = 0.0;    // max_x |U^l(x)|, Euclidean in the components
  double l2_spatial = 0.0;  // discrete L2 of the reconstructed field
};

/// Evolves periodic samples U0 (n x m, spacing dx) of the fully damped system
/// mode by mode, U^(xi, t) = exp(E(xi) t) U^_0(xi) with xi_k = 2 pi k / (m dx).
/// Throws SpectralError when the initial spectrum has not decayed below 1e-8
/// (relative) in the top tenth of the frequency band.
std::vector<FullspaceNorms> fullspace_evolve(const Eigen::MatrixXd& A,
                                             const Eigen::MatrixXd& Btilde,
                                             const Eigen::MatrixXd& U0, double dx,
                                             const std::vector<double>& times);

/// Signed angular frequency of DFT bin k on m points of spacing dx.
inline double dft_frequency(Eigen::Index k, Eigen::Index m, double dx) {
  const Eigen::Index signed_k = (2 * k <= m) ? k : k - m;
  return 2.0 * M_PI * static_cast<double>(signed_k) / (static_cast<double>(m) * dx);
}

}  // namespace pdlab

#endif  // PDLAB_SPECTRAL_HPP_
