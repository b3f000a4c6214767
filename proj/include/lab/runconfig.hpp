#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lab {

// Minimal key-value config format with [section] headers and '#' comments.
// Keys are addressed as "section.key"; top-level keys have no prefix.
// Repeated sections get an index suffix: [point] [point] -> point[0], point[1].
class IniFile {
 public:
  static IniFile parse(const std::string& text);
  static IniFile load(const std::string& path);

  bool has(const std::string& key) const { return kv_.count(key) > 0; }
  std::string get(const std::string& key, const std::string& fallback = "") const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::vector<double> get_list(const std::string& key) const;  // comma/space separated
  std::vector<std::string> sections() const;

  void set(const std::string& key, const std::string& value) { kv_[key] = value; }
  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

struct RunConfig {
  std::string command;
  std::string scenario_name;     // built-in key, or empty
  std::string scenario_file;     // scenario description file, or empty
  std::vector<double> eps_list;  // decreasing, positive
  int resolution = 0;            // nodes per axis; 0 = recipe/scenario default
  int resolution_y = 0;          // second axis override (2D)
  double tol = 1e-10;
  int max_iter = 20000;
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  double delta = 0;              // ball radius; 0 = default rule
  std::string measure = "auto";  // plain-u2 | weighted-phi | weighted-L | auto
  int n_paths = 100000;
  double dt = 1e-3;
  double beta = 2.0;             // cycle Lyapunov scale
  double mu = 1.0;               // matrix equation parameter
  bool dump_matrix = false;
  bool upwind = true;            // drift discretization mode
  std::string reproduce_tag;

  static RunConfig from_ini(const IniFile& ini);
  void require_eps_decreasing() const;
};

}  // namespace lab
