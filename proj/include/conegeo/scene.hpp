#pragma once

#include <Eigen/Dense>

#include <json.hpp>

#include <string>
#include <vector>

namespace conegeo {

struct RunOptions {
  double tolerance_scale = 1.0;
  std::vector<double> ts;  // empty: scene params.t, else the default list
  std::string out_dir;     // empty: no files written
};

struct RunResult {
  int exit_code = 0;  // 0 ok, 1 usage/io, 2 schema, 3 geometric degeneracy
  std::string report;
  std::vector<std::string> artifacts;
};

/// Names accepted by `run`.
const std::vector<std::string>& commands();

/// Default t-sampling for connection checks.
const std::vector<double>& default_t_values();

/// Parse the scene, dispatch the command and serialize the report. Errors are
/// reported in the JSON as {"error": {...}} with the matching exit code.
RunResult run(const std::string& command, const std::string& scene_text, const RunOptions& opts);

/// JSON text with every number printed as %.17g.
std::string dump_json(const nlohmann::ordered_json& j);

/// Grid mesh: vertex k = i * nv + j, "v %.9f %.9f %.9f", 1-based quads
/// (i,j) (i+1,j) (i+1,j+1) (i,j+1), closing faces on periodic axes.
std::string obj_text(const std::vector<Eigen::Vector3d>& v, int nu, int nv, bool periodic_u = false,
                     bool periodic_v = false);
void export_obj(const std::vector<Eigen::Vector3d>& v, int nu, int nv, const std::string& path, bool periodic_u = false,
                bool periodic_v = false);

}  // namespace conegeo
