#ifndef PDLAB_SOLVER_HPP_
#define PDLAB_SOLVER_HPP_

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pdlab/region.hpp"

// Exact-shift transport solver for the diagonalized system
//   d_t v_i + lambda_i d_x v_i = -1_omega(x) (M v)_i,
// Strang-split with an exact cell-wise damping exponential.

namespace pdlab {

class GridError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class BoundaryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Components x cells, one contiguous row per component.
using Field = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct GridSpec {
  double x_min = 0.0;
  double x_max = 0.0;
  int cells = 0;
};

struct Grid {
  double x_min = 0.0;
  double x_max = 0.0;
  int m = 0;
  double dx = 0.0;
  double dt = 0.0;
  double v_unit = 0.0;
  std::vector<int> shifts;       // signed cells per step, one per component
  std::vector<char> damp_mask;   // 1 where damping is on
  std::vector<Interval> snapped;  // stripes after snapping to cell edges
  double snap_displacement = 0.0;

  [[nodiscard]] double center(int j) const noexcept { return x_min + (j + 0.5) * dx; }
  [[nodiscard]] int components() const noexcept { return static_cast<int>(shifts.size()); }
};

struct RationalSpeeds {
  double v_unit = 0.0;
  std::vector<int> shifts;
};

inline constexpr long kMaxSpeedDenominator = 100;

/// Common unit v with every |lambda_i| an integer multiple of it. Throws
/// GridError when a speed ratio is not rational within 1e-9 (denominators up
/// to kMaxSpeedDenominator).
RationalSpeeds rational_speed_unit(const Eigen::VectorXd& speeds);

/// region == nullopt means damping everywhere.
Grid build_grid(const GridSpec& domain, const Eigen::VectorXd& speeds,
                const std::optional<UndampedRegion>& region, double t_final);

struct State {
  double t = 0.0;
  Field V;
};

enum class BumpShape { kGaussian, kBox, kCosineBump };

/// One bump of initial data on a diagonalized component (0-based).
/// gaussian: width is the standard deviation, truncated at 8 widths;
/// box: support of length width; cosine-bump: cos^2 profile on a support of
/// length width.
struct Bump {
  int component = 0;
  BumpShape shape = BumpShape::kGaussian;
  double center = 0.0;
  double width = 1.0;
  double amplitude = 1.0;

  [[nodiscard]] Interval support() const noexcept;
  [[nodiscard]] double operator()(double x) const noexcept;
};

const char* to_string(BumpShape s) noexcept;

/// Samples the bumps at cell centers. Throws GridError when a support leaves
/// less than max|shift| * steps + 2 cells of margin to either boundary.
State sample_initial(const std::vector<Bump>& bumps, const Grid& grid, double t_final);

class TransportSolver {
 public:
  TransportSolver(Grid grid, const Eigen::MatrixXd& source);

  /// Half damping, exact shift, half damping. Throws BoundaryError when the
  /// signal reaches the two outermost cells.
  void step(State& state) const;

  [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
  [[nodiscard]] const Eigen::MatrixXd& half_step_damping() const noexcept { return half_damp_; }

 private:
  void damp(Field& V) const;

  Grid grid_;
  Eigen::MatrixXd half_damp_;
  std::vector<int> damped_cells_;
};

State step(const State& state, const Grid& grid, const Eigen::MatrixXd& source);

struct EnergyNorms {
  double l2 = 0.0;
  Eigen::VectorXd component_l2;
  double l1 = 0.0;    // dx sum_x |V(x)|
  double linf = 0.0;  // max_x |V(x)|, Euclidean in the components
};

EnergyNorms energy_norms(const State& state, const Grid& grid);

struct FrequencySplit {
  double e_high = 0.0;   // |xi| > 1
  double e_low = 0.0;    // |xi| <= 1
  double linf_low = 0.0;
};

/// DFT of each component over the full grid, energy split at |xi| = 1.
class FrequencySplitter {
 public:
  explicit FrequencySplitter(const Grid& grid);
  [[nodiscard]] FrequencySplit operator()(const Field& V) const;

 private:
  int m_;
  double dx_;
  std::vector<char> high_;
};

FrequencySplit freq_split(const State& state, const Grid& grid);

struct TrajectorySample {
  double t = 0.0;
  double l2_total = 0.0;
  double l2_high = 0.0;
  double l2_low = 0.0;
  double linf = 0.0;
  double l1 = 0.0;
  double linf_low = 0.0;
  Eigen::VectorXd component_l2;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  double dt = 0.0;
  int stride = 1;
  long steps = 0;
  std::optional<State> final_state;

  [[nodiscard]] double sample_interval() const noexcept { return dt * stride; }
};

struct RunOptions {
  double t_final = 0.0;
  int stride = 1;
  bool keep_final_state = false;
};

/// Number of steps that reaches t_final (rounded up unless t_final/dt is an
/// integer within 1e-9).
long step_count(double t_final, double dt);

Trajectory run(const TransportSolver& solver, State initial, const RunOptions& options);

}  // namespace pdlab

#endif  // PDLAB_SOLVER_HPP_
