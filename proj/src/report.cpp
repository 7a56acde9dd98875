#include "pdlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pdlab {

namespace {

void write_value(std::ostringstream& os, const Document& v, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
  switch (v.type()) {
    case Document::value_t::object: {
      if (v.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (const auto& [key, item] : v.items()) {
        if (!first) os << ",\n";
        first = false;
        os << pad << Document(key).dump() << ": ";
        write_value(os, item, depth + 1);
      }
      os << "\n" << close_pad << "}";
      return;
    }
    case Document::value_t::array: {
      if (v.empty()) {
        os << "[]";
        return;
      }
      const bool flat = std::all_of(v.begin(), v.end(), [](const Document& e) { return e.is_primitive(); });
      if (flat) {
        os << "[";
        for (std::size_t k = 0; k < v.size(); ++k) {
          if (k) os << ", ";
          write_value(os, v[k], depth + 1);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) os << ",\n";
        os << pad;
        write_value(os, v[k], depth + 1);
      }
      os << "\n" << close_pad << "]";
      return;
    }
    case Document::value_t::number_float: {
      const double d = v.get<double>();
      if (std::isfinite(d))
        os << format_number(d);
      else
        os << "null";
      return;
    }
    default:
      os << v.dump();
  }
}

Document vector_doc(const Eigen::VectorXd& v) {
  Document arr = Document::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Document matrix_doc(const Eigen::MatrixXd& m) {
  Document arr = Document::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Document row = Document::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    arr.push_back(row);
  }
  return arr;
}

Document optional_number(const std::optional<double>& v) {
  return v ? Document(*v) : Document(nullptr);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ExportError("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw ExportError("failed writing " + path.string());
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump_document(const Document& doc) {
  std::ostringstream os;
  write_value(os, doc, 0);
  os << "\n";
  return os.str();
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream os;
  os << "t,l2_total,l2_high,l2_low,linf,l1";
  const Eigen::Index n = traj.samples.empty() ? 0 : traj.samples.front().component_l2.size();
  for (Eigen::Index i = 0; i < n; ++i) os << ",comp_" << i + 1;
  os << "\n";
  for (const auto& s : traj.samples) {
    os << format_number(s.t) << ',' << format_number(s.l2_total) << ',' << format_number(s.l2_high)
       << ',' << format_number(s.l2_low) << ',' << format_number(s.linf) << ','
       << format_number(s.l1);
    for (Eigen::Index i = 0; i < s.component_l2.size(); ++i) os << ',' << format_number(s.component_l2(i));
    os << "\n";
  }
  return os.str();
}

Document to_document(const ValidationReport& report) {
  Document d;
  d["passed"] = report.passed();
  d["kappa0"] = report.kappa0;
  Document checks = Document::array();
  for (const auto& c : report.checks) {
    Document e;
    e["name"] = c.name;
    e["pass"] = c.pass;
    e["measured"] = c.measured;
    e["threshold"] = c.threshold;
    e["detail"] = c.detail;
    checks.push_back(e);
  }
  d["checks"] = checks;
  return d;
}

Document to_document(const CheckResult& check) {
  Document d;
  d["passed"] = check.passed();
  d["validation"] = to_document(check.validation);
  d["sk_eigenvector"] = check.sk_eigvec;
  d["sk_kalman"] = check.sk_kalman;
  return d;
}

Document to_document(const TauStarBounds& b) {
  Document d;
  d["lemma_lower"] = b.lemma_defined ? Document(b.lemma_lower) : Document(nullptr);
  d["lemma_defined"] = b.lemma_defined;
  d["exact_three_speed"] = optional_number(b.exact_three_speed);
  d["upper"] = b.upper;
  return d;
}

Document to_document(const ThreeSpeedGeometry& g) {
  Document d;
  d["speeds"] = Document::array({g.s1, g.s2, g.s3});
  d["R"] = g.R;
  d["x2"] = g.x2;
  d["t2"] = g.t2;
  d["x1"] = g.x1;
  d["t1"] = g.t1;
  d["t_lambda"] = g.t_lambda;
  d["case"] = to_string(g.kind);
  return d;
}

Document to_document(const TimesReport& rep) {
  Document d;
  d["tau_bar"] = rep.tau_bar;
  d["tau_star"] = rep.tau_star ? to_document(*rep.tau_star) : Document(nullptr);
  d["geometric_ratio"] = rep.geometric;
  d["three_speed"] = rep.three_speed ? to_document(*rep.three_speed) : Document(nullptr);
  Document rows = Document::array();
  for (const auto& r : rep.delays) {
    Document e;
    e["t"] = r.t;
    e["sup_undamped"] = r.sup;
    e["argmax_x"] = r.argmax;
    e["delay"] = r.delay;
    rows.push_back(e);
  }
  d["sharp_delay"] = rows;
  return d;
}

Document to_document(const SpectralScan& scan, bool include_grid) {
  Document d;
  d["gamma"] = scan.gamma;
  d["c_low"] = scan.c_low;
  d["dissipative"] = scan.dissipative;
  d["tail_stable"] = scan.tail_stable;
  d["tail_variation"] = scan.tail_variation;
  d["samples"] = scan.xi_grid.size();
  if (include_grid) {
    d["xi"] = scan.xi_grid;
    d["abscissa"] = scan.abscissas;
  }
  return d;
}

Document to_document(const Calibration& c) {
  Document d;
  d["method"] = "full-damping reference run of the same initial data";
  d["gamma"] = c.gamma;
  d["c_high"] = c.c_high;
  d["c_low"] = c.c_low;
  d["safety_factor"] = c.safety;
  return d;
}

Document to_document(const EnvelopeReport& rep, bool include_margins) {
  Document d;
  d["passed"] = rep.passed();
  d["gamma"] = rep.gamma;
  d["c_high"] = rep.c_high;
  d["c_low"] = rep.c_low;
  d["tau_bar"] = rep.tau_bar;
  d["tau_star"] = rep.tau_star ? to_document(*rep.tau_star) : Document(nullptr);
  d["slack"] = rep.slack;
  d["check_from"] = rep.check_from;
  d["checked_samples"] = rep.checked;
  d["violations"] = rep.violations;
  d["low_frequency_violations"] = rep.low_violations;
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& [t, m] : rep.margins)
    if (t >= rep.check_from - 1e-12) worst = std::max(worst, m);
  d["max_margin"] = std::isfinite(worst) ? Document(worst) : Document(nullptr);
  d["onset_epsilon"] = rep.onset_epsilon;
  d["decay_onset"] = optional_number(rep.onset);
  if (include_margins) {
    Document m = Document::array();
    for (const auto& [t, v] : rep.margins) m.push_back(Document::array({t, v}));
    d["margins"] = m;
  }
  return d;
}

Document to_document(const ProbeReport& rep) {
  Document d;
  d["predicted_onset"] = rep.predicted_onset;
  d["predicted_end"] = rep.predicted_end;
  d["decay_onset"] = optional_number(rep.onset);
  d["plateau_ratio"] = rep.plateau_ratio;
  d["sample_interval"] = rep.sample_interval;
  return d;
}

Document summary_document(const SummaryInputs& in) {
  if (!in.scenario) throw std::invalid_argument("summary needs a scenario");
  const Scenario& sc = *in.scenario;
  const auto eigs = diagonalize(sc.system.A);

  Document d;
  d["scenario"] = sc.name;
  d["kind"] = to_string(sc.kind);
  d["n"] = sc.system.n();
  d["n1"] = sc.system.n1;
  d["eigenvalues"] = vector_doc(eigs.lambdas);
  d["negative_speeds"] = eigs.p;
  d["check"] = to_document(check_system(sc.system));
  d["source_matrix"] = matrix_doc(source_matrix(eigs, full_damping(sc.system)));
  if (in.spectrum) d["spectrum"] = to_document(*in.spectrum, false);

  const auto times = times_report(sc.system, {});
  d["tau_bar"] = times.tau_bar;
  d["tau_star"] = times.tau_star ? to_document(*times.tau_star) : Document(nullptr);
  d["geometric_ratio"] = times.geometric;
  d["three_speed"] = times.three_speed ? to_document(*times.three_speed) : Document(nullptr);

  if (in.calibration) d["calibration"] = to_document(*in.calibration);
  if (in.envelope) d["envelope"] = to_document(*in.envelope, false);
  if (in.probe) d["conservation_probe"] = to_document(*in.probe);
  if (in.trajectory) {
    Document t;
    t["samples"] = in.trajectory->samples.size();
    t["dt"] = in.trajectory->dt;
    t["stride"] = in.trajectory->stride;
    t["steps"] = in.trajectory->steps;
    t["decay_onset"] = optional_number(decay_onset(*in.trajectory));
    d["trajectory"] = t;
  }
  return d;
}

void export_results(const SummaryInputs& in, const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw ExportError("cannot create " + directory.string() + ": " + ec.message());
  if (in.trajectory) write_file(directory / "trajectory.csv", trajectory_csv(*in.trajectory));
  write_file(directory / "summary.json", dump_document(summary_document(in)));
}

}  // namespace pdlab
