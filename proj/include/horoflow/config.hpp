#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "horoflow/imcf.hpp"

namespace horoflow {

struct RunConfig {
  struct Ambient {
    double m = 0.0;
    double r_max = 20.0;
    double tol_ode = 1e-11;
  } ambient;
  struct Initial {
    double r0 = 0.0;  // in the asymptotic coordinate
    std::string f_kind = "zero";
    std::vector<double> coefficients;
    double a = 0.0;
    std::string path;
  } initial;
  int n = 96;
  ImcfConfig flow;
  struct Lapse {
    bool enabled = true;
    double tol_R = 1e-4;
  } shitam;
  struct Inequality {
    bool enabled = true;
    int l_max = 6;
    int iters = 200;
  } inequality;
  struct Output {
    std::string dir = "horoflow-out";
    bool emit_svg = false;
    std::uint64_t seed = 0;
  } output;

  std::filesystem::path source;  // file the config was read from, if any
};

// Throws ConfigError naming the offending key path.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(const std::string& text,
                            const std::filesystem::path& base_dir = std::filesystem::current_path());

// Initial profile f on the grid, normalized so that e^{2f} g_0 has area 4 pi.
Field initial_profile(const RunConfig& config, const ColatitudeGrid& grid);

}  // namespace horoflow
