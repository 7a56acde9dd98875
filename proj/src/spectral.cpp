#include "pdlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <unsupported/Eigen/FFT>

namespace pdlab {

SymbolMatrix symbol(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Btilde, double xi) {
  const std::complex<double> minus_i_xi(0.0, -xi);
  SymbolMatrix s;
  s.xi = xi;
  s.E = minus_i_xi * A.cast<std::complex<double>>() - Btilde.cast<std::complex<double>>();
  return s;
}

SymbolMatrix symbol(const HyperbolicSystem& sys, double xi) {
  return symbol(sys.A, full_damping(sys).Btilde, xi);
}

SymbolMatrix symbol(const EigenStructure& eigs, const Eigen::MatrixXd& source, double xi) {
  return symbol(Eigen::MatrixXd(eigs.lambdas.asDiagonal()), source, xi);
}

double spectral_abscissa(const Eigen::MatrixXcd& M) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(M, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw SpectralError("eigenvalue iteration did not converge");
  return solver.eigenvalues().real().maxCoeff();
}

SpectralScan gamma_estimate(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Btilde,
                            double xi_max, int samples) {
  if (samples < 2 || !(xi_max > 1.0))
    throw SpectralError("gamma scan needs samples >= 2 and xi_max > 1");
  SpectralScan scan;
  for (int k = 0; k < samples; ++k) scan.xi_grid.push_back(static_cast<double>(k) / samples);
  const double log_max = std::log(xi_max);
  for (int k = 0; k < samples; ++k)
    scan.xi_grid.push_back(std::exp(log_max * static_cast<double>(k) / (samples - 1)));

  scan.abscissas.reserve(scan.xi_grid.size());
  for (double xi : scan.xi_grid)
    scan.abscissas.push_back(spectral_abscissa(symbol(A, Btilde, xi).E));

  double worst_high = -std::numeric_limits<double>::infinity();
  double tail_lo = std::numeric_limits<double>::infinity();
  double tail_hi = -std::numeric_limits<double>::infinity();
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < scan.xi_grid.size(); ++k) {
    const double xi = scan.xi_grid[k];
    const double a = scan.abscissas[k];
    if (xi >= 1.0) worst_high = std::max(worst_high, a);
    if (xi >= xi_max / 10.0) {
      tail_lo = std::min(tail_lo, a);
      tail_hi = std::max(tail_hi, a);
    }
    if (xi > 0.0 && xi <= 0.1) {
      num += a * xi * xi;
      den += xi * xi * xi * xi;
    }
  }
  scan.gamma = -worst_high;
  scan.dissipative = worst_high < 0.0;
  scan.c_low = den > 0.0 ? -num / den : 0.0;
  scan.tail_variation = tail_hi - tail_lo;
  scan.tail_stable = scan.tail_variation < 1e-6;
  return scan;
}

SpectralScan gamma_estimate(const HyperbolicSystem& sys, double xi_max, int samples) {
  return gamma_estimate(sys.A, full_damping(sys).Btilde, xi_max, samples);
}

std::vector<FullspaceNorms> fullspace_evolve(const Eigen::MatrixXd& A,
                                             const Eigen::MatrixXd& Btilde,
                                             const Eigen::MatrixXd& U0, double dx,
                                             const std::vector<double>& times) {
  using cplx = std::complex<double>;
  const Eigen::Index n = U0.rows();
  const Eigen::Index m = U0.cols();
  if (A.rows() != n) throw SpectralError("initial data has the wrong number of components");
  if (m < 4 || !(dx > 0.0)) throw SpectralError("initial data grid is too small");

  Eigen::FFT<double> fft;
  Eigen::MatrixXcd spectrum(n, m);
  std::vector<cplx> in(static_cast<std::size_t>(m));
  std::vector<cplx> out;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) in[static_cast<std::size_t>(j)] = U0(i, j);
    fft.fwd(out, in);
    for (Eigen::Index j = 0; j < m; ++j) spectrum(i, j) = out[static_cast<std::size_t>(j)];
  }

  const double peak = spectrum.cwiseAbs().maxCoeff();
  double band_peak = 0.0;
  for (Eigen::Index k = 0; k < m; ++k) {
    const Eigen::Index signed_k = (2 * k <= m) ? k : k - m;
    if (10 * std::abs(signed_k) >= 9 * (m / 2))
      band_peak = std::max(band_peak, spectrum.col(k).cwiseAbs().maxCoeff());
  }
  if (peak > 0.0 && band_peak > 1e-8 * peak)
    throw SpectralError("initial spectrum is not resolved: relative amplitude " +
                        std::to_string(band_peak / peak) + " near the Nyquist frequency");

  std::vector<double> xi(static_cast<std::size_t>(m));
  for (Eigen::Index k = 0; k < m; ++k) xi[static_cast<std::size_t>(k)] = dft_frequency(k, m, dx);

  const double weight = dx / static_cast<double>(m);
  std::vector<FullspaceNorms> result;
  Eigen::MatrixXcd evolved(n, m);
  Eigen::MatrixXcd low(n, m);
  for (double t : times) {
    FullspaceNorms norms;
    norms.t = t;
    double high2 = 0.0;
    double low2 = 0.0;
    for (Eigen::Index k = 0; k < m; ++k) {
      const double xk = xi[static_cast<std::size_t>(k)];
      evolved.col(k) = matrix_exp(symbol(A, Btilde, xk).E, t) * spectrum.col(k);
      const double e = evolved.col(k).squaredNorm();
      if (std::abs(xk) > 1.0) {
        high2 += e;
        low.col(k).setZero();
      } else {
        low2 += e;
        low.col(k) = evolved.col(k);
      }
    }
    norms.l2_high = std::sqrt(weight * high2);
    norms.l2_low = std::sqrt(weight * low2);
    norms.l2_total = std::sqrt(weight * (high2 + low2));

    Eigen::MatrixXd low_field(n, m);
    double spatial2 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) in[static_cast<std::size_t>(j)] = low(i, j);
      fft.inv(out, in);
      for (Eigen::Index j = 0; j < m; ++j) low_field(i, j) = out[static_cast<std::size_t>(j)].real();
      for (Eigen::Index j = 0; j < m; ++j) in[static_cast<std::size_t>(j)] = evolved(i, j);
      fft.inv(out, in);
      for (Eigen::Index j = 0; j < m; ++j) spatial2 += std::norm(out[static_cast<std::size_t>(j)]);
    }
    norms.linf_low = low_field.colwise().norm().maxCoeff();
    norms.l2_spatial = std::sqrt(dx * spatial2);
    result.push_back(norms);
  }
  return result;
}

}  // namespace pdlab
