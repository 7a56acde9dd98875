// Independent reference computations for the tests. Nothing here calls the
// closed forms under test; windows come from bisection on the position of a
// characteristic, measures from sampling the time axis.
#ifndef PDLAB_TESTS_ORACLES_HPP_
#define PDLAB_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/QR>

#include "pdlab/model.hpp"
#include "pdlab/region.hpp"

namespace oracle {

struct Window {
  double lo = 0.0;
  double hi = 0.0;
  bool empty = true;
};

// Times s in [0, t] when x - lambda (t - s) lies in [a, b]. Position is
// monotone in s, so each edge crossing is found by bisection.
inline Window bisect_window(double lambda, double a, double b, double x, double t) {
  auto pos = [&](double s) { return x - lambda * (t - s); };
  auto inside = [&](double s) { return pos(s) >= a && pos(s) <= b; };
  auto crossing = [&](double edge) {
    // root of pos(s) = edge, clamped to [0, t]
    double lo = 0.0, hi = t;
    const double f_lo = pos(lo) - edge;
    const double f_hi = pos(hi) - edge;
    if (f_lo * f_hi > 0.0) return std::nan("");
    for (int k = 0; k < 200; ++k) {
      const double mid = 0.5 * (lo + hi);
      if ((pos(mid) - edge) * f_lo > 0.0) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
  };
  std::vector<double> cand{0.0, t};
  for (double e : {a, b}) {
    const double r = crossing(e);
    if (!std::isnan(r)) cand.push_back(r);
  }
  std::sort(cand.begin(), cand.end());
  Window w;
  for (std::size_t k = 0; k + 1 < cand.size(); ++k) {
    const double mid = 0.5 * (cand[k] + cand[k + 1]);
    if (cand[k + 1] > cand[k] && inside(mid)) {
      if (w.empty) { w.lo = cand[k]; w.empty = false; }
      w.hi = cand[k + 1];
    }
  }
  return w;
}

// |{s in [0,t] : some characteristic through (x,t) is undamped at s}| by the
// midpoint rule with `samples` cells.
inline double sampled_measure(const std::vector<double>& speeds,
                              const std::vector<std::pair<double, double>>& stripes, double x,
                              double t, int samples) {
  if (t <= 0.0) return 0.0;
  const double h = t / samples;
  int hits = 0;
  for (int k = 0; k < samples; ++k) {
    const double s = (k + 0.5) * h;
    bool any = false;
    for (double lam : speeds) {
      const double y = x - lam * (t - s);
      for (const auto& [a, b] : stripes)
        if (y >= a && y <= b) { any = true; break; }
      if (any) break;
    }
    hits += any;
  }
  return hits * h;
}

struct ScanMax {
  double sup = 0.0;
  double argmax = 0.0;
};

inline ScanMax sampled_sup(const std::vector<double>& speeds,
                           const std::vector<std::pair<double, double>>& stripes, double t,
                           double x_lo, double x_hi, double x_step, int samples) {
  ScanMax best{-1.0, x_lo};
  for (double x = x_lo; x <= x_hi + 1e-12; x += x_step) {
    const double m = sampled_measure(speeds, stripes, x, t, samples);
    if (m > best.sup) best = {m, x};
  }
  return best;
}

// Abutment points along the slow corridor x = -R + s3 t, located by scanning
// t with step h for sign changes and bisecting inside the bracket.
struct Abutments {
  double t2 = std::nan(""), x2 = std::nan("");
  double t1 = std::nan(""), x1 = std::nan("");
  double overlap_at_2 = std::nan("");  // middle/fast overlap at (x2, t2)
};

inline Abutments scan_abutments(double s1, double s2, double s3, double R, double h) {
  auto g2 = [&](double t) {  // slow exit minus middle entry
    const double x = -R + s3 * t;
    const Window slow = bisect_window(s3, -R, R, x, t);
    const Window mid = bisect_window(s2, -R, R, x, t);
    if (slow.empty || mid.empty) return std::nan("");
    return slow.hi - mid.lo;
  };
  auto g1 = [&](double t) {  // middle exit minus fast entry
    const double x = -R + s3 * t;
    const Window mid = bisect_window(s2, -R, R, x, t);
    const Window fast = bisect_window(s1, -R, R, x, t);
    if (mid.empty || fast.empty) return std::nan("");
    return mid.hi - fast.lo;
  };
  auto locate = [&](auto&& g, double t_max) {
    double prev_t = h, prev = g(h);
    for (double t = 2 * h; t <= t_max; t += h) {
      const double cur = g(t);
      if (!std::isnan(prev) && !std::isnan(cur) && prev * cur <= 0.0 && prev != cur) {
        double lo = prev_t, hi = t;
        for (int k = 0; k < 100; ++k) {
          const double mid = 0.5 * (lo + hi);
          const double gm = g(mid);
          if (std::isnan(gm)) break;
          if (gm * prev > 0.0) lo = mid; else hi = mid;
        }
        return 0.5 * (lo + hi);
      }
      prev_t = t;
      prev = cur;
    }
    return std::nan("");
  };
  const double horizon = 4.0 * R / s3 * (1.0 + s1 / (s1 - s2) + s2 / (s2 - s3));
  Abutments a;
  a.t2 = locate(g2, horizon);
  a.x2 = -R + s3 * a.t2;
  a.t1 = locate(g1, horizon);
  a.x1 = -R + s3 * a.t1;
  if (!std::isnan(a.t2)) {
    const Window mid = bisect_window(s2, -R, R, a.x2, a.t2);
    const Window fast = bisect_window(s1, -R, R, a.x2, a.t2);
    a.overlap_at_2 = std::max(0.0, mid.hi - fast.lo);
  }
  return a;
}

// Largest real part of the roots of l^2 + l + xi^2 (damped-wave symbol).
inline double damped_wave_abscissa(double xi) {
  const double disc = 1.0 - 4.0 * xi * xi;
  if (disc >= 0.0) return 0.5 * (-1.0 + std::sqrt(disc));
  return -0.5;
}

// Eigenvalues of a symmetric 2x2 matrix in closed form, ascending.
inline std::pair<double, double> sym2_eigs(double a, double b, double d) {
  const double m = 0.5 * (a + d);
  const double r = std::sqrt(0.25 * (a - d) * (a - d) + b * b);
  return {m - r, m + r};
}

inline Eigen::MatrixXd random_orthogonal(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd X(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) X(i, j) = g(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(X);
  Eigen::MatrixXd Q = qr.householderQ();
  return Q;
}

struct RandomSystem {
  pdlab::HyperbolicSystem sys;
  bool built_sk_false = false;
};

// Random validated system of size n. When `kernel_eigvec` is set and n1 >= 1,
// one eigenvector is forced into span(e_1..e_n1) = Ker(Btilde).
inline RandomSystem random_system(int n, bool kernel_eigvec, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick_n1(kernel_eigvec ? 1 : 0, n - 1);
  const int n1 = pick_n1(rng);
  const int n2 = n - n1;
  std::uniform_real_distribution<double> u(0.3, 3.0);
  std::bernoulli_distribution sign(0.5);

  // distinct, well separated, nonzero speeds
  std::vector<double> lam;
  while (static_cast<int>(lam.size()) < n) {
    const double v = (sign(rng) ? 1.0 : -1.0) * u(rng);
    bool ok = true;
    for (double w : lam) ok = ok && std::abs(v - w) > 0.05;
    if (ok) lam.push_back(v);
  }
  Eigen::MatrixXd Q = random_orthogonal(n, rng);
  if (kernel_eigvec) {
    // first column supported on the undamped block, the rest orthogonal to it
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    Eigen::MatrixXd q1 = random_orthogonal(n1, rng);
    v.head(n1) = q1.col(0);
    Eigen::MatrixXd M(n, n);
    M.col(0) = v;
    M.rightCols(n - 1) = Q.rightCols(n - 1);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(M);
    Eigen::MatrixXd R = qr.householderQ();
    R.col(0) *= R.col(0).dot(v) < 0 ? -1.0 : 1.0;
    Q = R;
  }
  Eigen::MatrixXd A = Q * Eigen::VectorXd::Map(lam.data(), n).asDiagonal() * Q.transpose();
  A = 0.5 * (A + A.transpose());

  Eigen::MatrixXd G(n2, n2);
  std::normal_distribution<double> g;
  for (int i = 0; i < n2; ++i)
    for (int j = 0; j < n2; ++j) G(i, j) = g(rng);
  Eigen::MatrixXd Dd = G * G.transpose() + 0.5 * Eigen::MatrixXd::Identity(n2, n2);
  return {pdlab::HyperbolicSystem(n1, A, Dd, pdlab::UndampedRegion::centered(1.0)), kernel_eigvec};
}

}  // namespace oracle

#endif  // PDLAB_TESTS_ORACLES_HPP_
