#pragma once

#include <json.hpp>
#include <string>
#include <vector>

namespace lab {

// One acceptance-style verdict: every line carries what was measured,
// what was predicted, the tolerance it was judged against and the recipe
// tag that sourced the prediction.
struct Verdict {
  std::string name;
  double measured = 0;
  double predicted = 0;
  double tolerance = 0;
  std::string tag;
  bool pass = false;
  std::string note;  // comparison rule, e.g. "|m - p| <= tol" or "m <= p + tol"

  std::string line() const;
};

struct RunReport {
  std::string command;
  std::string scenario;
  nlohmann::json payload = nlohmann::json::object();
  std::vector<Verdict> verdicts;

  bool all_pass() const;
  Verdict& add_abs(const std::string& name, double measured, double predicted,
                   double tol, const std::string& tag);
  Verdict& add_rel(const std::string& name, double measured, double predicted,
                   double rel_tol, const std::string& tag);
  Verdict& add_le(const std::string& name, double measured, double bound,
                  const std::string& tag);
  Verdict& add_ge(const std::string& name, double measured, double bound,
                  const std::string& tag);
  Verdict& add_flag(const std::string& name, bool ok, const std::string& tag);

  nlohmann::json to_json() const;  // deterministic (no wall times)
};

void ensure_dir(const std::string& dir);
void write_text(const std::string& path, const std::string& text);
void write_json(const nlohmann::json& j, const std::string& path);

// Two-column plot series (.dat) and small CSV tables.
void write_series(const std::string& path, const std::vector<double>& x,
                  const std::vector<double>& y);
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace lab
