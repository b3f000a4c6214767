#include "lab/report.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace lab {

std::string Verdict::line() const {
  std::ostringstream os;
  os.precision(12);
  os << (pass ? "[PASS] " : "[FAIL] ") << name << ": measured=" << measured
     << " predicted=" << predicted << " tol=" << tolerance << " tag=" << tag;
  if (!note.empty()) os << " (" << note << ")";
  return os.str();
}

bool RunReport::all_pass() const {
  for (const auto& v : verdicts)
    if (!v.pass) return false;
  return true;
}

Verdict& RunReport::add_abs(const std::string& name, double measured,
                            double predicted, double tol,
                            const std::string& tag) {
  Verdict v{name, measured, predicted, tol, tag,
            std::abs(measured - predicted) <= tol, "|measured - predicted| <= tol"};
  verdicts.push_back(v);
  return verdicts.back();
}

Verdict& RunReport::add_rel(const std::string& name, double measured,
                            double predicted, double rel_tol,
                            const std::string& tag) {
  const bool ok =
      std::abs(measured - predicted) <= rel_tol * std::abs(predicted);
  Verdict v{name, measured, predicted, rel_tol, tag, ok,
            "|measured - predicted| <= tol * |predicted|"};
  verdicts.push_back(v);
  return verdicts.back();
}

Verdict& RunReport::add_le(const std::string& name, double measured,
                           double bound, const std::string& tag) {
  Verdict v{name, measured, bound, 0, tag, measured <= bound,
            "measured <= bound"};
  verdicts.push_back(v);
  return verdicts.back();
}

Verdict& RunReport::add_ge(const std::string& name, double measured,
                           double bound, const std::string& tag) {
  Verdict v{name, measured, bound, 0, tag, measured >= bound,
            "measured >= bound"};
  verdicts.push_back(v);
  return verdicts.back();
}

Verdict& RunReport::add_flag(const std::string& name, bool ok,
                             const std::string& tag) {
  Verdict v{name, ok ? 1.0 : 0.0, 1.0, 0, tag, ok, "boolean check"};
  verdicts.push_back(v);
  return verdicts.back();
}

nlohmann::json RunReport::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["scenario"] = scenario;
  j["payload"] = payload;
  nlohmann::json vs = nlohmann::json::array();
  for (const auto& v : verdicts) {
    nlohmann::json jv;
    jv["name"] = v.name;
    jv["measured"] = v.measured;
    jv["predicted"] = v.predicted;
    jv["tolerance"] = v.tolerance;
    jv["tag"] = v.tag;
    jv["pass"] = v.pass;
    jv["note"] = v.note;
    vs.push_back(jv);
  }
  j["verdicts"] = vs;
  j["all_pass"] = all_pass();
  return j;
}

void ensure_dir(const std::string& dir) {
  std::filesystem::create_directories(dir);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

void write_json(const nlohmann::json& j, const std::string& path) {
  write_text(path, j.dump(2) + "\n");
}

void write_series(const std::string& path, const std::vector<double>& x,
                  const std::vector<double>& y) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i)
    os << x[i] << " " << y[i] << "\n";
  write_text(path, os.str());
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
  std::ostringstream os;
  os.precision(17);
  os << header << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << row[i] << (i + 1 < row.size() ? "," : "");
    os << "\n";
  }
  write_text(path, os.str());
}

}  // namespace lab
