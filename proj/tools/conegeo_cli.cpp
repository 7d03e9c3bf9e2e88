// conegeo <command> --scene <file> [--out <dir>] [--tolerance <x>] [--t <list>]
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "conegeo/conegeo.h"

namespace {

std::vector<double> parse_t_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument(item);
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> names;
  for (size_t k = 0; k < cg_command_count(); ++k) names.emplace_back(cg_command_name(k));

  CLI::App app{"Sphere geometry in light-cone coordinates"};
  app.set_version_flag("--version", std::string(cg_version()));
  std::string command, scene_path, out_dir, t_text;
  double tolerance = 1.0;
  app.add_option("command", command, "command to run")->required()->check(CLI::IsMember(names));
  app.add_option("--scene", scene_path, "scene JSON file")->required();
  app.add_option("--out", out_dir, "directory for report.json and OBJ files");
  app.add_option("--tolerance", tolerance, "multiplier for all tolerances")->check(CLI::PositiveNumber);
  app.add_option("--t", t_text, "comma-separated t values for connection checks");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  std::ifstream in(scene_path, std::ios::binary);
  if (!in) {
    std::cerr << "conegeo: cannot read scene '" << scene_path << "'\n";
    return 1;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  cg_context* ctx = nullptr;
  if (cg_context_create(&ctx) != CG_OK) {
    std::cerr << "conegeo: " << cg_last_error() << "\n";
    return 1;
  }
  cg_context_set_tolerance_scale(ctx, tolerance);
  if (!out_dir.empty()) cg_context_set_output_dir(ctx, out_dir.c_str());
  if (!t_text.empty()) {
    std::vector<double> ts;
    try {
      ts = parse_t_list(t_text);
    } catch (const std::exception&) {
      std::cerr << "conegeo: --t expects a comma-separated list of numbers\n";
      cg_context_destroy(ctx);
      return 1;
    }
    cg_context_set_t_values(ctx, ts.data(), ts.size());
  }

  const cg_status st = cg_context_run(ctx, command.c_str(), buf.str().c_str());
  std::fputs(cg_context_report(ctx), stdout);
  cg_context_destroy(ctx);
  return static_cast<int>(st);
}
