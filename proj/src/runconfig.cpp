#include "lab/runconfig.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lab {

namespace {
std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}
}  // namespace

IniFile IniFile::parse(const std::string& text) {
  IniFile f;
  std::istringstream is(text);
  std::string line, section;
  std::map<std::string, int> section_count;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      std::string name = trim(line.substr(1, line.size() - 2));
      const int n = section_count[name]++;
      section = n == 0 ? name : name + "[" + std::to_string(n) + "]";
      // retroactively index the first occurrence when a repeat appears
      if (n == 1) {
        std::vector<std::pair<std::string, std::string>> moved;
        for (auto it = f.kv_.begin(); it != f.kv_.end();) {
          if (it->first.rfind(name + ".", 0) == 0) {
            moved.push_back({name + "[0]." + it->first.substr(name.size() + 1),
                             it->second});
            it = f.kv_.erase(it);
          } else
            ++it;
        }
        for (auto& kv : moved) f.kv_[kv.first] = kv.second;
        section = name + "[1]";
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: expected key = value, got: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    f.kv_[section.empty() ? key : section + "." + key] = val;
  }
  return f;
}

IniFile IniFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string IniFile::get(const std::string& key, const std::string& fb) const {
  const auto it = kv_.find(key);
  return it == kv_.end() ? fb : it->second;
}

double IniFile::get_double(const std::string& key, double fb) const {
  const auto it = kv_.find(key);
  return it == kv_.end() ? fb : std::stod(it->second);
}

int IniFile::get_int(const std::string& key, int fb) const {
  const auto it = kv_.find(key);
  return it == kv_.end() ? fb : std::stoi(it->second);
}

std::vector<double> IniFile::get_list(const std::string& key) const {
  std::vector<double> out;
  const auto it = kv_.find(key);
  if (it == kv_.end()) return out;
  std::string s = it->second;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream is(s);
  double v;
  while (is >> v) out.push_back(v);
  return out;
}

std::vector<std::string> IniFile::sections() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : kv_) {
    const auto dot = k.find('.');
    if (dot == std::string::npos) continue;
    const std::string s = k.substr(0, dot);
    if (out.empty() || out.back() != s) out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

RunConfig RunConfig::from_ini(const IniFile& ini) {
  RunConfig c;
  c.command = ini.get("command", c.command);
  c.scenario_name = ini.get("scenario", c.scenario_name);
  c.scenario_file = ini.get("scenario-file", c.scenario_file);
  c.eps_list = ini.get_list("eps");
  c.resolution = ini.get_int("resolution", c.resolution);
  c.resolution_y = ini.get_int("resolution-y", c.resolution_y);
  c.tol = ini.get_double("tol", c.tol);
  c.max_iter = ini.get_int("max-iter", c.max_iter);
  c.out_dir = ini.get("out", c.out_dir);
  c.seed = static_cast<std::uint64_t>(ini.get_double("seed", 1));
  c.delta = ini.get_double("delta", c.delta);
  c.measure = ini.get("measure", c.measure);
  c.n_paths = ini.get_int("n-paths", c.n_paths);
  c.dt = ini.get_double("dt", c.dt);
  c.beta = ini.get_double("beta", c.beta);
  c.mu = ini.get_double("mu", c.mu);
  c.dump_matrix = ini.get_int("dump-matrix", 0) != 0;
  c.upwind = ini.get_int("upwind", 1) != 0;
  c.reproduce_tag = ini.get("tag", c.reproduce_tag);
  return c;
}

void RunConfig::require_eps_decreasing() const {
  for (double e : eps_list)
    if (!(e > 0)) throw std::invalid_argument("eps values must be positive");
  for (std::size_t i = 1; i < eps_list.size(); ++i)
    if (!(eps_list[i] < eps_list[i - 1]))
      throw std::invalid_argument("eps list must be strictly decreasing");
}

}  // namespace lab
