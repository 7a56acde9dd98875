#include "pdlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>

#include <unsupported/Eigen/FFT>

#include "pdlab/spectral.hpp"

namespace pdlab {

namespace {

struct Fraction {
  long num = 0;
  long den = 1;
};

std::optional<Fraction> rational_approximation(double r, double rel_tol, long max_den) {
  long h_prev = 1, h_prev2 = 0;
  long k_prev = 0, k_prev2 = 1;
  double x = r;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(x);
    const long h = static_cast<long>(a) * h_prev + h_prev2;
    const long k = static_cast<long>(a) * k_prev + k_prev2;
    if (k > max_den) return std::nullopt;
    if (std::abs(r - static_cast<double>(h) / static_cast<double>(k)) <= rel_tol * r)
      return Fraction{h, k};
    const double frac = x - a;
    if (frac <= 0.0) return std::nullopt;
    x = 1.0 / frac;
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
  }
  return std::nullopt;
}

}  // namespace

RationalSpeeds rational_speed_unit(const Eigen::VectorXd& speeds) {
  if (speeds.size() == 0) throw GridError("no speeds given");
  if ((speeds.array() == 0.0).any() || !speeds.allFinite())
    throw GridError("speeds must be finite and nonzero");
  const double slowest = speeds.cwiseAbs().minCoeff();

  std::vector<Fraction> ratios;
  long common_den = 1;
  for (Eigen::Index i = 0; i < speeds.size(); ++i) {
    const double r = std::abs(speeds(i)) / slowest;
    const auto f = rational_approximation(r, 1e-9, kMaxSpeedDenominator);
    if (!f) {
      std::ostringstream os;
      os << "speed ratio |" << speeds(i) << "| / " << slowest
         << " is not rational within 1e-9 (denominator <= " << kMaxSpeedDenominator
         << "); the exact-shift scheme requires rational speed ratios";
      throw GridError(os.str());
    }
    ratios.push_back(*f);
    common_den = std::lcm(common_den, f->den);
  }

  std::vector<long> multiples;
  long g = 0;
  for (const auto& f : ratios) {
    multiples.push_back(f.num * (common_den / f.den));
    g = std::gcd(g, multiples.back());
  }

  RationalSpeeds out;
  out.v_unit = slowest * static_cast<double>(g) / static_cast<double>(common_den);
  for (std::size_t i = 0; i < multiples.size(); ++i) {
    const long cells = multiples[i] / g;
    out.shifts.push_back(static_cast<int>(speeds(static_cast<Eigen::Index>(i)) > 0 ? cells : -cells));
  }
  return out;
}

Grid build_grid(const GridSpec& domain, const Eigen::VectorXd& speeds,
                const std::optional<UndampedRegion>& region, double t_final) {
  if (domain.cells < 8) throw GridError("domain.cells must be at least 8");
  if (!(domain.x_max > domain.x_min)) throw GridError("domain.x_max must exceed domain.x_min");
  if (!(t_final >= 0.0)) throw GridError("t_final must be non-negative");
  const double length = domain.x_max - domain.x_min;
  if (speeds.cwiseAbs().maxCoeff() * t_final > length)
    throw GridError("domain too small: max speed * t_final exceeds the domain length");

  const auto rational = rational_speed_unit(speeds);
  Grid g;
  g.x_min = domain.x_min;
  g.x_max = domain.x_max;
  g.m = domain.cells;
  g.dx = length / domain.cells;
  g.v_unit = rational.v_unit;
  g.dt = g.dx / g.v_unit;
  g.shifts = rational.shifts;
  g.damp_mask.assign(static_cast<std::size_t>(g.m), 1);

  if (region) {
    for (const auto& s : region->stripes()) {
      const double lo = g.x_min + std::round((s.lo - g.x_min) / g.dx) * g.dx;
      const double hi = g.x_min + std::round((s.hi - g.x_min) / g.dx) * g.dx;
      g.snap_displacement = std::max({g.snap_displacement, std::abs(lo - s.lo), std::abs(hi - s.hi)});
      g.snapped.push_back({lo, hi});
      for (int j = 0; j < g.m; ++j) {
        const double c = g.center(j);
        if (c > lo && c < hi) g.damp_mask[static_cast<std::size_t>(j)] = 0;
      }
    }
  }
  return g;
}

// ---------------------------------------------------------------------------

const char* to_string(BumpShape s) noexcept {
  switch (s) {
    case BumpShape::kGaussian:
      return "gaussian";
    case BumpShape::kBox:
      return "box";
    case BumpShape::kCosineBump:
      return "cosine-bump";
  }
  return "unknown";
}

Interval Bump::support() const noexcept {
  const double half = shape == BumpShape::kGaussian ? 8.0 * width : 0.5 * width;
  return {center - half, center + half};
}

double Bump::operator()(double x) const noexcept {
  const double u = x - center;
  switch (shape) {
    case BumpShape::kGaussian:
      if (std::abs(u) > 8.0 * width) return 0.0;
      return amplitude * std::exp(-0.5 * u * u / (width * width));
    case BumpShape::kBox:
      return (u >= -0.5 * width && u < 0.5 * width) ? amplitude : 0.0;
    case BumpShape::kCosineBump: {
      if (std::abs(u) >= 0.5 * width) return 0.0;
      const double c = std::cos(M_PI * u / width);
      return amplitude * c * c;
    }
  }
  return 0.0;
}

long step_count(double t_final, double dt) {
  const double ratio = t_final / dt;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio)) return static_cast<long>(nearest);
  return static_cast<long>(std::ceil(ratio));
}

State sample_initial(const std::vector<Bump>& bumps, const Grid& grid, double t_final) {
  const int n = grid.components();
  State s;
  s.V = Field::Zero(n, grid.m);
  int max_shift = 0;
  for (int k : grid.shifts) max_shift = std::max(max_shift, std::abs(k));
  const double reach = static_cast<double>(max_shift) * static_cast<double>(step_count(t_final, grid.dt)) * grid.dx +
                       2.0 * grid.dx;

  for (std::size_t b = 0; b < bumps.size(); ++b) {
    const auto& bump = bumps[b];
    if (bump.component < 0 || bump.component >= n)
      throw GridError("initial[" + std::to_string(b) + "].component out of range");
    if (!(bump.width > 0.0)) throw GridError("initial[" + std::to_string(b) + "].width must be positive");
    const auto support = bump.support();
    if (support.lo - reach < grid.x_min || support.hi + reach > grid.x_max) {
      std::ostringstream os;
      os << "initial[" << b << "] support [" << support.lo << ", " << support.hi
         << "] needs a margin of " << reach << " to the domain boundary for t_final = " << t_final;
      throw GridError(os.str());
    }
    for (int j = 0; j < grid.m; ++j) s.V(bump.component, j) += bump(grid.center(j));
  }
  return s;
}

// ---------------------------------------------------------------------------

TransportSolver::TransportSolver(Grid grid, const Eigen::MatrixXd& source)
    : grid_(std::move(grid)) {
  if (source.rows() != grid_.components() || source.cols() != grid_.components())
    throw GridError("source matrix does not match the number of components");
  half_damp_ = matrix_exp(Eigen::MatrixXd(-source), 0.5 * grid_.dt);
  for (int j = 0; j < grid_.m; ++j)
    if (grid_.damp_mask[static_cast<std::size_t>(j)]) damped_cells_.push_back(j);
}

void TransportSolver::damp(Field& V) const {
  const auto n = V.rows();
  Eigen::VectorXd cell(n);
  for (int j : damped_cells_) {
    cell.noalias() = half_damp_ * V.col(j);
    V.col(j) = cell;
  }
}

void TransportSolver::step(State& state) const {
  Field& V = state.V;
  const int m = grid_.m;
  damp(V);
  for (int i = 0; i < V.rows(); ++i) {
    double* row = V.row(i).data();
    const int s = grid_.shifts[static_cast<std::size_t>(i)];
    if (s > 0) {
      std::copy_backward(row, row + m - s, row + m);
      std::fill(row, row + s, 0.0);
    } else if (s < 0) {
      std::copy(row - s, row + m, row);
      std::fill(row + m + s, row + m, 0.0);
    }
  }
  damp(V);
  state.t += grid_.dt;

  for (int i = 0; i < V.rows(); ++i) {
    if (V(i, 0) != 0.0 || V(i, 1) != 0.0 || V(i, m - 1) != 0.0 || V(i, m - 2) != 0.0) {
      std::ostringstream os;
      os << "component " << i + 1 << " reached the domain boundary at t = " << state.t;
      throw BoundaryError(os.str());
    }
  }
}

State step(const State& state, const Grid& grid, const Eigen::MatrixXd& source) {
  State next = state;
  TransportSolver(grid, source).step(next);
  return next;
}

EnergyNorms energy_norms(const State& state, const Grid& grid) {
  EnergyNorms e;
  const Field& V = state.V;
  e.component_l2 = (V.rowwise().squaredNorm() * grid.dx).cwiseSqrt();
  e.l2 = std::sqrt(grid.dx * V.squaredNorm());
  const Eigen::RowVectorXd pointwise = V.colwise().norm();
  e.l1 = grid.dx * pointwise.sum();
  e.linf = pointwise.size() > 0 ? pointwise.maxCoeff() : 0.0;
  return e;
}

FrequencySplitter::FrequencySplitter(const Grid& grid) : m_(grid.m), dx_(grid.dx) {
  high_.resize(static_cast<std::size_t>(m_));
  for (int k = 0; k < m_; ++k)
    high_[static_cast<std::size_t>(k)] = std::abs(dft_frequency(k, m_, dx_)) > 1.0 ? 1 : 0;
}

FrequencySplit FrequencySplitter::operator()(const Field& V) const {
  using cplx = std::complex<double>;
  Eigen::FFT<double> fft;
  std::vector<double> in(static_cast<std::size_t>(m_));
  std::vector<cplx> spec;
  std::vector<cplx> low_spec(static_cast<std::size_t>(m_));
  std::vector<cplx> low_field;
  Eigen::MatrixXd low(V.rows(), m_);
  double high2 = 0.0;
  double low2 = 0.0;
  for (int i = 0; i < V.rows(); ++i) {
    for (int j = 0; j < m_; ++j) in[static_cast<std::size_t>(j)] = V(i, j);
    fft.fwd(spec, in);
    for (int k = 0; k < m_; ++k) {
      const auto idx = static_cast<std::size_t>(k);
      const double e = std::norm(spec[idx]);
      if (high_[idx]) {
        high2 += e;
        low_spec[idx] = 0.0;
      } else {
        low2 += e;
        low_spec[idx] = spec[idx];
      }
    }
    fft.inv(low_field, low_spec);
    for (int j = 0; j < m_; ++j) low(i, j) = low_field[static_cast<std::size_t>(j)].real();
  }
  const double weight = dx_ / static_cast<double>(m_);
  FrequencySplit out;
  out.e_high = std::sqrt(weight * high2);
  out.e_low = std::sqrt(weight * low2);
  out.linf_low = low.colwise().norm().maxCoeff();
  return out;
}

FrequencySplit freq_split(const State& state, const Grid& grid) {
  return FrequencySplitter(grid)(state.V);
}

Trajectory run(const TransportSolver& solver, State initial, const RunOptions& options) {
  if (options.stride < 1) throw GridError("stride must be at least 1");
  const Grid& grid = solver.grid();
  const FrequencySplitter splitter(grid);
  Trajectory traj;
  traj.dt = grid.dt;
  traj.stride = options.stride;
  traj.steps = step_count(options.t_final, grid.dt);

  State state = std::move(initial);
  auto record = [&]() {
    const auto norms = energy_norms(state, grid);
    const auto split = splitter(state.V);
    TrajectorySample s;
    s.t = state.t;
    s.l2_total = norms.l2;
    s.l2_high = split.e_high;
    s.l2_low = split.e_low;
    s.linf = norms.linf;
    s.l1 = norms.l1;
    s.linf_low = split.linf_low;
    s.component_l2 = norms.component_l2;
    traj.samples.push_back(std::move(s));
  };

  const double t0 = state.t;
  record();
  for (long k = 1; k <= traj.steps; ++k) {
    solver.step(state);
    state.t = t0 + static_cast<double>(k) * grid.dt;
    if (k % options.stride == 0) record();
  }
  if (options.keep_final_state) traj.final_state = std::move(state);
  return traj;
}

}  // namespace pdlab
