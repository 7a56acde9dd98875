#ifndef PDLAB_REPORT_HPP_
#define PDLAB_REPORT_HPP_

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "pdlab/experiments.hpp"

namespace pdlab {

using Document = nlohmann::ordered_json;

class ExportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Decimal with 17 significant digits ("%.17g"); non-finite values print as
/// "nan", "inf" or "-inf".
std::string format_number(double v);

/// JSON text with every floating-point number at 17 significant digits,
/// two-space indentation and a trailing newline. Non-finite numbers become
/// null.
std::string dump_document(const Document& doc);

/// Header `t,l2_total,l2_high,l2_low,linf,l1,comp_1..comp_n`, one row per
/// sample, every row newline-terminated.
std::string trajectory_csv(const Trajectory& traj);

Document to_document(const ValidationReport& report);
Document to_document(const CheckResult& check);
Document to_document(const TauStarBounds& b);
Document to_document(const ThreeSpeedGeometry& g);
Document to_document(const TimesReport& rep);
Document to_document(const SpectralScan& scan, bool include_grid);
Document to_document(const Calibration& c);
Document to_document(const EnvelopeReport& rep, bool include_margins);
Document to_document(const ProbeReport& rep);

struct SummaryInputs {
  const Scenario* scenario = nullptr;
  std::optional<SpectralScan> spectrum;
  std::optional<Calibration> calibration;
  std::optional<EnvelopeReport> envelope;
  std::optional<ProbeReport> probe;
  std::optional<Trajectory> trajectory;
};

/// Validation, SK checks, spectral scan, tau_bar, tau* bounds, three-speed
/// geometry (when applicable) and whichever run results are present.
Document summary_document(const SummaryInputs& in);

/// Writes trajectory.csv (when a trajectory is present) and summary.json into
/// `directory`, creating it if needed. Throws ExportError naming the path.
void export_results(const SummaryInputs& in, const std::filesystem::path& directory);

}  // namespace pdlab

#endif  // PDLAB_REPORT_HPP_
