#ifndef PDLAB_SCENARIO_HPP_
#define PDLAB_SCENARIO_HPP_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pdlab/model.hpp"
#include "pdlab/solver.hpp"

namespace pdlab {

enum class ExperimentKind { kSimulate, kFullspace, kVerifyEnvelope, kConservationProbe };

const char* to_string(ExperimentKind k) noexcept;

/// Parse or validation failure; each entry reads "<field path>: <reason>".
class ScenarioError : public std::invalid_argument {
 public:
  explicit ScenarioError(std::vector<std::string> errors);
  [[nodiscard]] const std::vector<std::string>& errors() const noexcept { return errors_; }

 private:
  std::vector<std::string> errors_;
};

struct Scenario {
  std::string name;
  HyperbolicSystem system;
  GridSpec domain;
  std::vector<Bump> initial;  // components are 0-based here, 1-based in the document
  double t_final = 0.0;
  int stride = 1;
  ExperimentKind kind = ExperimentKind::kSimulate;

  [[nodiscard]] bool needs_grid() const noexcept { return kind != ExperimentKind::kFullspace; }
};

/// Strict structural parse: unknown keys, wrong types and dimension
/// mismatches are errors. Does not check the system invariants.
Scenario parse_scenario(std::string_view text);

/// parse_scenario plus validate_system and, for grid-based kinds, the solver
/// preconditions (rational speeds, domain size, initial-data margins).
Scenario load_scenario(std::string_view text);

Scenario load_scenario_file(const std::string& path);
std::string read_text_file(const std::string& path);

/// Field paths of failed validation checks, e.g. "A: symmetry ...".
std::vector<std::string> validation_errors(const ValidationReport& report);

}  // namespace pdlab

#endif  // PDLAB_SCENARIO_HPP_
