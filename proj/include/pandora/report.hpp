#pragma once

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pandora/harness.hpp"

namespace pandora {

inline constexpr int kSchemaVersion = 1;

// Shortest stable decimal form; reports must be byte-identical across runs
// and parallelism degrees.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::string gap_rows_csv(const std::vector<GapRow>& rows,
                                const std::string& config_echo) {
  std::string out;
  out += "# schema_version=" + std::to_string(kSchemaVersion) + "\n";
  out += "# config=" + config_echo + "\n";
  out += "family,n,e_opt,e_del,ratio,ci_lo,ci_hi,seed,wall_ms\n";
  for (const auto& r : rows) {
    out += r.family + "," + std::to_string(r.n) + "," + format_double(r.e_opt) +
           "," + format_double(r.e_del) + "," + format_double(r.ratio) + "," +
           format_double(r.ci_lo) + "," + format_double(r.ci_hi) + "," +
           std::to_string(r.seed) + "," + format_double(r.wall_ms) + "\n";
  }
  return out;
}

inline nlohmann::json gap_rows_json(const std::vector<GapRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j;
    j["family"] = r.family;
    j["n"] = r.n;
    j["e_opt"] = r.e_opt;
    j["e_del"] = r.e_del;
    j["ratio"] = r.ratio;
    j["ci_lo"] = r.ci_lo;
    j["ci_hi"] = r.ci_hi;
    j["seed"] = r.seed;
    j["wall_ms"] = r.wall_ms;
    arr.push_back(j);
  }
  return arr;
}

inline void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw BadParametersError("cannot open output file: " + path);
  out << content;
}

}  // namespace pandora
