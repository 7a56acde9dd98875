#include "pdlab/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace pdlab {

namespace {

using nlohmann::json;

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += "; ";
    out += p;
  }
  return out;
}

class Reader {
 public:
  std::vector<std::string> errors;

  void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    for (const auto& [key, value] : obj.items())
      if (!allowed.count(key)) errors.push_back(path + key + ": unknown key");
  }

  const json* member(const json& obj, const std::string& key, const std::string& path, bool required) {
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) errors.push_back(path + key + ": missing");
      return nullptr;
    }
    return &*it;
  }

  std::optional<double> number(const json& obj, const std::string& key, const std::string& path,
                               bool required = true) {
    const json* v = member(obj, key, path, required);
    if (!v) return std::nullopt;
    if (!v->is_number()) {
      errors.push_back(path + key + ": expected a number");
      return std::nullopt;
    }
    return v->get<double>();
  }

  std::optional<long> integer(const json& obj, const std::string& key, const std::string& path,
                              bool required = true) {
    const json* v = member(obj, key, path, required);
    if (!v) return std::nullopt;
    if (!v->is_number_integer()) {
      errors.push_back(path + key + ": expected an integer");
      return std::nullopt;
    }
    return v->get<long>();
  }

  std::optional<std::string> string(const json& obj, const std::string& key, const std::string& path,
                                    bool required = true) {
    const json* v = member(obj, key, path, required);
    if (!v) return std::nullopt;
    if (!v->is_string()) {
      errors.push_back(path + key + ": expected a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  std::optional<Eigen::MatrixXd> matrix(const json& obj, const std::string& key, long rows) {
    const json* v = member(obj, key, "", true);
    if (!v) return std::nullopt;
    if (!v->is_array()) {
      errors.push_back(key + ": expected a row-major array of numbers");
      return std::nullopt;
    }
    if (static_cast<long>(v->size()) != rows * rows) {
      errors.push_back(key + ": expected " + std::to_string(rows * rows) + " entries (" +
                       std::to_string(rows) + "x" + std::to_string(rows) + " row-major), got " +
                       std::to_string(v->size()));
      return std::nullopt;
    }
    Eigen::MatrixXd m(rows, rows);
    for (long k = 0; k < rows * rows; ++k) {
      const auto& e = (*v)[static_cast<std::size_t>(k)];
      if (!e.is_number()) {
        errors.push_back(key + "[" + std::to_string(k) + "]: expected a number");
        return std::nullopt;
      }
      m(k / rows, k % rows) = e.get<double>();
    }
    return m;
  }
};

std::optional<BumpShape> parse_shape(const std::string& s) {
  if (s == "gaussian") return BumpShape::kGaussian;
  if (s == "box") return BumpShape::kBox;
  if (s == "cosine-bump") return BumpShape::kCosineBump;
  return std::nullopt;
}

std::optional<ExperimentKind> parse_kind(const std::string& s) {
  if (s == "simulate") return ExperimentKind::kSimulate;
  if (s == "fullspace") return ExperimentKind::kFullspace;
  if (s == "verify-envelope") return ExperimentKind::kVerifyEnvelope;
  if (s == "conservation-probe") return ExperimentKind::kConservationProbe;
  return std::nullopt;
}

}  // namespace

const char* to_string(ExperimentKind k) noexcept {
  switch (k) {
    case ExperimentKind::kSimulate:
      return "simulate";
    case ExperimentKind::kFullspace:
      return "fullspace";
    case ExperimentKind::kVerifyEnvelope:
      return "verify-envelope";
    case ExperimentKind::kConservationProbe:
      return "conservation-probe";
  }
  return "unknown";
}

ScenarioError::ScenarioError(std::vector<std::string> errors)
    : std::invalid_argument("invalid scenario: " + join(errors)), errors_(std::move(errors)) {}

Scenario parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ScenarioError({std::string("document: ") + e.what()});
  }
  if (!doc.is_object()) throw ScenarioError({"document: expected an object"});

  Reader r;
  r.reject_unknown(doc, "", {"name", "description", "n", "n1", "A", "Dd", "region", "domain",
                             "initial", "t_final", "stride", "kind"});

  if (auto d = r.member(doc, "description", "", false); d && !d->is_string())
    r.errors.push_back("description: expected a string");
  const auto name = r.string(doc, "name", "", false);
  const auto n = r.integer(doc, "n", "");
  const auto n1 = r.integer(doc, "n1", "");
  if (n && *n < 1) r.errors.push_back("n: must be positive");
  if (n && n1 && (*n1 < 0 || *n1 > *n)) r.errors.push_back("n1: must lie in [0, n]");

  std::optional<Eigen::MatrixXd> A;
  std::optional<Eigen::MatrixXd> Dd;
  if (n && *n >= 1) A = r.matrix(doc, "A", *n);
  if (n && n1 && *n >= 1 && *n1 >= 0 && *n1 <= *n) Dd = r.matrix(doc, "Dd", *n - *n1);

  std::vector<Interval> stripes;
  bool stripes_ok = false;
  if (const json* region = r.member(doc, "region", "", true)) {
    if (!region->is_object()) {
      r.errors.push_back("region: expected an object");
    } else {
      r.reject_unknown(*region, "region.", {"stripes"});
      if (const json* st = r.member(*region, "stripes", "region.", true)) {
        stripes_ok = st->is_array();
        if (!stripes_ok) r.errors.push_back("region.stripes: expected an array of [lo, hi] pairs");
        for (std::size_t j = 0; stripes_ok && j < st->size(); ++j) {
          const auto& s = (*st)[j];
          if (!s.is_array() || s.size() != 2 || !s[0].is_number() || !s[1].is_number()) {
            r.errors.push_back("region.stripes[" + std::to_string(j) + "]: expected [lo, hi]");
            stripes_ok = false;
            break;
          }
          stripes.push_back({s[0].get<double>(), s[1].get<double>()});
        }
        if (stripes_ok) {
          if (auto defect = describe_region_defect(stripes); !defect.empty()) {
            r.errors.push_back("region.stripes: " + defect);
            stripes_ok = false;
          }
        }
      }
    }
  }

  GridSpec domain;
  if (const json* d = r.member(doc, "domain", "", true)) {
    if (!d->is_object()) {
      r.errors.push_back("domain: expected an object");
    } else {
      r.reject_unknown(*d, "domain.", {"x_min", "x_max", "cells"});
      domain.x_min = r.number(*d, "x_min", "domain.").value_or(0.0);
      domain.x_max = r.number(*d, "x_max", "domain.").value_or(0.0);
      domain.cells = static_cast<int>(r.integer(*d, "cells", "domain.").value_or(0));
      if (!(domain.x_max > domain.x_min)) r.errors.push_back("domain.x_max: must exceed domain.x_min");
      if (domain.cells < 8) r.errors.push_back("domain.cells: must be at least 8");
    }
  }

  std::vector<Bump> bumps;
  if (const json* init = r.member(doc, "initial", "", true)) {
    if (!init->is_array()) {
      r.errors.push_back("initial: expected an array of bumps");
    } else {
      for (std::size_t b = 0; b < init->size(); ++b) {
        const std::string path = "initial[" + std::to_string(b) + "].";
        const auto& item = (*init)[b];
        if (!item.is_object()) {
          r.errors.push_back(path.substr(0, path.size() - 1) + ": expected an object");
          continue;
        }
        r.reject_unknown(item, path, {"component", "shape", "center", "width", "amplitude"});
        Bump bump;
        const auto comp = r.integer(item, "component", path);
        if (comp && (*comp < 1 || (n && *comp > *n)))
          r.errors.push_back(path + "component: must lie in [1, n]");
        bump.component = static_cast<int>(comp.value_or(1)) - 1;
        if (const auto shape = r.string(item, "shape", path)) {
          if (auto s = parse_shape(*shape))
            bump.shape = *s;
          else
            r.errors.push_back(path + "shape: expected gaussian, box or cosine-bump");
        }
        bump.center = r.number(item, "center", path).value_or(0.0);
        bump.width = r.number(item, "width", path).value_or(1.0);
        if (!(bump.width > 0.0)) r.errors.push_back(path + "width: must be positive");
        bump.amplitude = r.number(item, "amplitude", path, false).value_or(1.0);
        bumps.push_back(bump);
      }
    }
  }

  const auto t_final = r.number(doc, "t_final", "");
  if (t_final && !(*t_final > 0.0)) r.errors.push_back("t_final: must be positive");
  const auto stride = r.integer(doc, "stride", "", false).value_or(1);
  if (stride < 1) r.errors.push_back("stride: must be at least 1");

  ExperimentKind kind = ExperimentKind::kSimulate;
  if (const auto k = r.string(doc, "kind", "", false)) {
    if (auto parsed = parse_kind(*k))
      kind = *parsed;
    else
      r.errors.push_back("kind: expected simulate, fullspace, verify-envelope or conservation-probe");
  }

  if (!r.errors.empty() || !A || !Dd || !stripes_ok || !n1) throw ScenarioError(r.errors);

  try {
    Scenario sc{name.value_or("scenario"),
                HyperbolicSystem(static_cast<int>(*n1), *A, *Dd, UndampedRegion(stripes)),
                domain,
                std::move(bumps),
                *t_final,
                static_cast<int>(stride),
                kind};
    return sc;
  } catch (const DimensionError& e) {
    throw ScenarioError({e.what()});
  }
}

std::vector<std::string> validation_errors(const ValidationReport& report) {
  std::vector<std::string> out;
  for (const auto& c : report.checks) {
    if (c.pass) continue;
    std::string field = "A";
    if (c.name == "damping_positivity") field = "Dd";
    if (c.name == "region") field = "region.stripes";
    std::ostringstream os;
    os << field << ": " << c.name << " invariant violated (" << c.detail << "; measured "
       << c.measured << ", threshold " << c.threshold << ")";
    out.push_back(os.str());
  }
  return out;
}

Scenario load_scenario(std::string_view text) {
  Scenario sc = parse_scenario(text);
  auto errors = validation_errors(validate_system(sc.system));
  if (!errors.empty()) throw ScenarioError(std::move(errors));

  if (sc.needs_grid()) {
    try {
      const auto eigs = diagonalize(sc.system.A);
      const auto grid = build_grid(sc.domain, eigs.lambdas, sc.system.region, sc.t_final);
      (void)sample_initial(sc.initial, grid, sc.t_final);
    } catch (const GridError& e) {
      const std::string what = e.what();
      const bool about_data = what.rfind("initial", 0) == 0;
      throw ScenarioError({(about_data ? "" : "domain: ") + what});
    }
  }
  return sc;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Scenario load_scenario_file(const std::string& path) { return load_scenario(read_text_file(path)); }

}  // namespace pdlab
