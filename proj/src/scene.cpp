#include "conegeo/scene.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include "conegeo/configurations.hpp"
#include "conegeo/connections.hpp"
#include "conegeo/discrete_nets.hpp"
#include "conegeo/gauge.hpp"
#include "conegeo/sphere_models.hpp"
#include "conegeo/surfaces.hpp"
#include "conegeo/symmetry_breaking.hpp"

namespace conegeo {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;
using V3 = Eigen::Vector3d;

// -- output ------------------------------------------------------------------

namespace {

void dump_rec(const ojson& j, std::string& out, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string pad0(static_cast<std::size_t>(2 * depth), ' ');
  switch (j.type()) {
    case ojson::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + ojson(it.key()).dump() + ": ";
        dump_rec(it.value(), out, depth + 1);
      }
      out += "\n" + pad0 + "}";
      return;
    }
    case ojson::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      bool scalar = true;
      for (const auto& e : j) scalar = scalar && !e.is_structured();
      if (scalar) {
        out += "[";
        for (std::size_t k = 0; k < j.size(); ++k) {
          if (k) out += ", ";
          dump_rec(j[k], out, depth + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k) out += ",\n";
        out += pad;
        dump_rec(j[k], out, depth + 1);
      }
      out += "\n" + pad0 + "]";
      return;
    }
    case ojson::value_t::number_float: {
      double v = j.get<double>();
      if (v == 0.0) v = 0.0;  // no "-0"
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump_json(const ojson& j) {
  std::string out;
  dump_rec(j, out, 0);
  out += "\n";
  return out;
}

std::string obj_text(const std::vector<V3>& v, int nu, int nv, bool periodic_u, bool periodic_v) {
  if (static_cast<int>(v.size()) != nu * nv) fail(ErrorCode::InvalidArgument, "vertex count does not match the grid");
  std::string out;
  char buf[128];
  for (const V3& p : v) {
    std::snprintf(buf, sizeof buf, "v %.9f %.9f %.9f\n", p.x(), p.y(), p.z());
    out += buf;
  }
  const int iu = periodic_u ? nu : nu - 1;
  const int jv = periodic_v ? nv : nv - 1;
  auto id = [&](int i, int j) { return (i % nu) * nv + (j % nv) + 1; };
  for (int i = 0; i < iu; ++i)
    for (int j = 0; j < jv; ++j) {
      std::snprintf(buf, sizeof buf, "f %d %d %d %d\n", id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
      out += buf;
    }
  return out;
}

void export_obj(const std::vector<V3>& v, int nu, int nv, const std::string& path, bool periodic_u, bool periodic_v) {
  const std::string text = obj_text(v, nu, nv, periodic_u, periodic_v);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw Error(ErrorCode::Io, "write to '" + path + "' failed");
}

const std::vector<std::string>& commands() {
  static const std::vector<std::string> c = {
      "lift",     "project",          "classify-pencil", "classify-cyclide", "mean-curvature", "miquel",
      "ribaucour", "cross-ratio",     "christoffel",     "darboux",          "triangle-centres", "desmic",
      "verify-conserved", "flatness", "gram",            "willmore",         "surface-class"};
  return c;
}

const std::vector<double>& default_t_values() {
  static const std::vector<double> t = {-0.5, -0.1, 0.1, 0.5, 1.0};
  return t;
}

// -- scene parsing -------------------------------------------------------------

namespace {

[[noreturn]] void schema(const std::string& msg, const std::string& id = {}) { throw Error(ErrorCode::Schema, msg, id); }

std::string id_of(const json& o) { return o.contains("id") && o["id"].is_string() ? o["id"].get<std::string>() : ""; }

const json& field(const json& o, const char* key) {
  if (!o.is_object() || !o.contains(key)) schema(std::string("missing field '") + key + "'", id_of(o));
  return o[key];
}

double num(const json& o, const char* key) {
  const json& v = field(o, key);
  if (!v.is_number()) schema(std::string("field '") + key + "' must be a number", id_of(o));
  return v.get<double>();
}

double num_or(const json& o, const char* key, double dflt) { return o.is_object() && o.contains(key) ? num(o, key) : dflt; }

int int_field(const json& o, const char* key) {
  const json& v = field(o, key);
  if (!v.is_number_integer()) schema(std::string("field '") + key + "' must be an integer", id_of(o));
  return v.get<int>();
}

Eigen::VectorXd vec_of(const json& v, int size, const std::string& what, const std::string& id) {
  if (!v.is_array()) schema(what + " must be an array of numbers", id);
  if (size >= 0 && static_cast<int>(v.size()) != size)
    schema(what + " must have " + std::to_string(size) + " entries", id);
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!v[k].is_number()) schema(what + " must contain numbers only", id);
    out[static_cast<Eigen::Index>(k)] = v[k].get<double>();
  }
  return out;
}

Eigen::VectorXd vec(const json& o, const char* key, int size) { return vec_of(field(o, key), size, std::string("'") + key + "'", id_of(o)); }

std::vector<V3> points_of(const json& v, const std::string& what, const std::string& id, int count = -1) {
  if (!v.is_array()) schema(what + " must be an array of 3-vectors", id);
  if (count >= 0 && static_cast<int>(v.size()) != count) schema(what + " must hold " + std::to_string(count) + " points", id);
  std::vector<V3> out;
  for (const auto& e : v) out.emplace_back(vec_of(e, 3, what, id));
  return out;
}

std::vector<double> doubles_of(const json& v, const std::string& what, const std::string& id) {
  const Eigen::VectorXd e = vec_of(v, -1, what, id);
  return {e.data(), e.data() + e.size()};
}

ojson arr(const Eigen::VectorXd& v) {
  ojson a = ojson::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(v[k]);
  return a;
}

ojson arr(const std::vector<double>& v) {
  ojson a = ojson::array();
  for (double x : v) a.push_back(x);
  return a;
}

ojson pts(const std::vector<V3>& v) {
  ojson a = ojson::array();
  for (const V3& p : v) a.push_back(arr(Eigen::VectorXd(p)));
  return a;
}

struct Scene {
  int version = 1;
  int n = 3;
  bool lie = true;
  double kappa = 0.0;
  std::optional<Space> space;
  std::optional<SubgeometryGauge> gauge;
  json objects;
  json params = json::object();
  std::map<std::string, const json*> by_id;
};

Scene parse_scene(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    schema(std::string("scene is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) schema("scene must be a JSON object");
  Scene s;
  s.version = root.contains("version") ? int_field(root, "version") : 1;
  if (s.version != 1) schema("unsupported scene version " + std::to_string(s.version));
  s.n = root.contains("n") ? int_field(root, "n") : 3;
  if (s.n < 1 || s.n > 8) schema("geometry dimension n must lie in [1, 8]");
  const json g = root.contains("gauge") ? root["gauge"] : json::object();
  if (!g.is_object()) schema("'gauge' must be an object");
  s.lie = g.contains("lie") ? g["lie"].get<bool>() : true;
  s.space = s.lie ? Space::lie(s.n) : Space::moebius(s.n);
  const std::string kind = g.contains("kind") ? g["kind"].get<std::string>() : "euclidean";
  if (g.contains("q")) {
    std::optional<Vec> p;
    if (s.lie) p = point_sphere_complex(*s.space);
    s.gauge.emplace(p, Vec(*s.space, vec(g, "q", s.space->dim())));
  } else if (kind == "euclidean") {
    s.gauge = SubgeometryGauge::euclidean(*s.space);
  } else if (kind == "spherical" || kind == "hyperbolic") {
    const double k = num_or(g, "kappa", kind == "spherical" ? 1.0 : -1.0);
    if ((kind == "spherical") != (k > 0.0)) schema("gauge kappa sign does not match its kind");
    s.gauge = SubgeometryGauge::space_form(*s.space, k);
  } else {
    schema("unknown gauge kind '" + kind + "'");
  }
  s.kappa = s.gauge->curvature();

  s.objects = field(root, "objects");
  if (!s.objects.is_array()) schema("'objects' must be an array");
  if (s.objects.empty()) schema("scene has no objects");
  int anon = 0;
  for (const json& o : s.objects) {
    if (!o.is_object() || !o.contains("type") || !o["type"].is_string()) schema("every object needs a string 'type'");
    std::string id = id_of(o);
    if (id.empty()) id = "#" + std::to_string(anon);
    ++anon;
    if (s.by_id.count(id)) schema("duplicate object id '" + id + "'", id);
    s.by_id[id] = &o;
  }
  if (root.contains("params")) {
    s.params = root["params"];
    if (!s.params.is_object()) schema("'params' must be an object");
  }
  return s;
}

struct Ctx {
  Scene scene;
  RunOptions opts;
  std::vector<double> ts;
  std::vector<std::string> artifacts;

  double tol(const char* name, double dflt) const {
    double v = dflt;
    if (scene.params.contains("tolerances") && scene.params["tolerances"].contains(name))
      v = scene.params["tolerances"][name].get<double>();
    return v * opts.tolerance_scale;
  }

  std::vector<const json*> of_type(const std::string& type) const {
    std::vector<const json*> out;
    for (const json& o : scene.objects)
      if (o["type"] == type) out.push_back(&o);
    return out;
  }

  /// params.target when given, else the first object of the type.
  const json& target(const std::string& type) const {
    if (scene.params.contains("target")) {
      const std::string id = scene.params["target"].get<std::string>();
      auto it = scene.by_id.find(id);
      if (it == scene.by_id.end()) schema("target object '" + id + "' does not exist", id);
      if ((*it->second)["type"] != type) schema("target '" + id + "' is not a " + type, id);
      return *it->second;
    }
    const auto all = of_type(type);
    if (all.empty()) schema("scene has no object of type '" + type + "'");
    return *all.front();
  }

  const json& ref(const json& o, const std::string& id) const {
    auto it = scene.by_id.find(id);
    if (it == scene.by_id.end()) schema("referenced object '" + id + "' does not exist", id_of(o));
    return *it->second;
  }

  void write(const std::string& name, const std::string& text) {
    if (opts.out_dir.empty()) return;
    const std::filesystem::path path = std::filesystem::path(opts.out_dir) / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
    f << text;
    if (!f) throw Error(ErrorCode::Io, "write to '" + path.string() + "' failed");
    artifacts.push_back(name);
  }

  void obj(const std::string& name, const std::vector<V3>& v, int nu, int nv, bool pu = false, bool pv = false) {
    write(name, obj_text(v, nu, nv, pu, pv));
  }
};

/// Run `fn`, tagging library errors with the object id.
template <class F>
auto tagged(const json& o, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    if (!e.object_id().empty()) throw;
    throw Error(e.code(), e.what(), id_of(o));
  }
}

EuclideanSphereData sphere_of(const Ctx& c, const json& o) {
  const std::string t = o["type"];
  const int n = c.scene.n;
  if (t == "sphere") return EuclideanSphereData::sphere(vec(o, "center", n), num(o, "radius"));
  if (t == "plane") {
    return tagged(o, [&] { return EuclideanSphereData::plane(vec(o, "normal", n), num(o, "offset")); });
  }
  if (t == "point") return EuclideanSphereData::point(vec(o, "x", n));
  schema("object '" + id_of(o) + "' is not a sphere, plane or point", id_of(o));
}

// -- geometry commands ---------------------------------------------------------

ojson cmd_lift(Ctx& c) {
  const Space& sp = *c.scene.space;
  ojson items = ojson::array();
  for (const json& o : c.scene.objects) {
    const std::string t = o["type"];
    if (t != "point" && t != "sphere" && t != "plane") continue;
    ojson r;
    r["id"] = id_of(o);
    r["type"] = t;
    tagged(o, [&] {
      if (t == "point") {
        const HomPoint hp = lift_point(sp, vec(o, "x", sp.n()));
        r["xi"] = arr(hp.v().coords());
        r["null_residual"] = std::abs(inner(hp.v(), hp.v()));
        r["q_pairing"] = inner(hp.v(), c.scene.gauge->q());
        return 0;
      }
      const SphereLift l = lift_sphere(sp, sphere_of(c, o));
      if (l.moebius) {
        r["s"] = arr(l.moebius->v().coords());
        r["s_norm_residual"] = std::abs(inner(l.moebius->v(), l.moebius->v()) - 1.0);
      }
      if (l.lie) {
        r["sigma"] = arr(l.lie->v().coords());
        r["sigma_null_residual"] = std::abs(inner(l.lie->v(), l.lie->v()));
      }
      return 0;
    });
    items.push_back(r);
  }
  if (items.empty()) schema("lift needs point, sphere or plane objects");
  ojson out;
  out["basis"] = sp.is_lie() ? "o,e1..en,inf,p" : "o,e1..en,inf";
  out["objects"] = items;
  return out;
}

ojson cmd_project(Ctx& c) {
  const Space& sp = *c.scene.space;
  ojson items = ojson::array();
  for (const json& o : c.scene.objects) {
    const std::string t = o["type"];
    if (t != "point" && t != "vector") continue;
    ojson r;
    r["id"] = id_of(o);
    tagged(o, [&] {
      const HomPoint hp = t == "point" ? lift_point(sp, vec(o, "x", sp.n())) : HomPoint(Vec(sp, vec(o, "coords", sp.dim())), 1e-8);
      r["chart"] = arr(project_point(hp, *c.scene.gauge));
      return 0;
    });
    items.push_back(r);
  }
  if (items.empty()) schema("project needs point or vector objects");
  ojson out;
  out["kappa"] = c.scene.kappa;
  out["objects"] = items;
  return out;
}

ojson cmd_mean_curvature(Ctx& c) {
  const Space& sp = *c.scene.space;
  const Vec& q = c.scene.gauge->q();
  ojson items = ojson::array();
  for (const json& o : c.scene.objects) {
    const std::string t = o["type"];
    if (t != "sphere" && t != "plane") continue;
    ojson r;
    r["id"] = id_of(o);
    tagged(o, [&] {
      const HomSphere s = lift_sphere_moebius(Space::moebius(sp.n()), sphere_of(c, o));
      r["H"] = sphere_mean_curvature(HomSphere::moebius(embed(s.v(), sp)), q);
      return 0;
    });
    items.push_back(r);
  }
  if (items.empty()) schema("mean-curvature needs sphere or plane objects");
  ojson out;
  out["kappa"] = c.scene.kappa;
  out["objects"] = items;
  return out;
}

ojson cmd_classify_pencil(Ctx& c) {
  const json& o = c.target("pencil");
  const json& ids = field(o, "spheres");
  if (!ids.is_array() || ids.size() != 2) schema("pencil needs two sphere ids", id_of(o));
  const Space m = Space::moebius(c.scene.n);
  return tagged(o, [&] {
    const HomSphere s1 = lift_sphere_moebius(m, sphere_of(c, c.ref(o, ids[0].get<std::string>())));
    const HomSphere s2 = lift_sphere_moebius(m, sphere_of(c, c.ref(o, ids[1].get<std::string>())));
    const SpherePencil pc(s1, s2, c.tol("signature", 1e-9));
    const PencilClass cls = classify_pencil(pc);
    const auto base = pencil_base_points(pc);
    ojson out;
    out["id"] = id_of(o);
    out["class"] = to_string(cls);
    out["base_points"] = base.size();
    out["signature"] = {pc.signature().positive, pc.signature().negative, pc.signature().null};
    ojson pl = ojson::array();
    const SubgeometryGauge eu = SubgeometryGauge::euclidean(m);
    for (const HomPoint& h : base) {
      try {
        pl.push_back(arr(project_point(h, eu)));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::InfinitePoint) throw;
        pl.push_back("infinity");
      }
    }
    out["points"] = pl;
    return out;
  });
}

CyclideDecomposition cyclide_of(const Ctx& c, const json& o) {
  if (o.contains("R")) return tagged(o, [&] { return torus_decomposition(num(o, "R"), num(o, "rho")); });
  const Space sp = Space::lie(3);
  auto side = [&](const char* key) {
    const json& v = field(o, key);
    if (!v.is_array() || v.size() != 3) schema(std::string("'") + key + "' must hold three 6-vectors", id_of(o));
    std::vector<Vec> out;
    for (const auto& e : v) out.emplace_back(sp, vec_of(e, 6, key, id_of(o)));
    return out;
  };
  (void)c;
  return tagged(o, [&] { return CyclideDecomposition(side("plus"), side("minus")); });
}

ojson cmd_classify_cyclide(Ctx& c) {
  if (!c.scene.lie || c.scene.n != 3) schema("classify-cyclide needs a Lie gauge with n = 3");
  const json& o = c.target("cyclide");
  const CyclideDecomposition cd = cyclide_of(c, o);
  return tagged(o, [&] {
    const CyclideReport rep = classify_cyclide(cd, *c.scene.gauge);
    ojson out;
    out["id"] = id_of(o);
    out["pp_plus"] = rep.pp_plus;
    out["pp_minus"] = rep.pp_minus;
    out["sum_residual"] = rep.sum_residual;
    out["plus_kind"] = to_string(rep.plus_kind);
    out["minus_kind"] = to_string(rep.minus_kind);
    const int m = o.contains("samples") ? int_field(o, "samples") : 24;
    std::vector<V3> surf;
    int failed = 0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const auto [sp, sm] = cyclide_contact_elements(cd, 2 * M_PI * i / m, 2 * M_PI * j / m);
        try {
          const ContactProjection pr = space_form_projection(sp, sm, *c.scene.gauge);
          surf.push_back(project_point(pr.xi, *c.scene.gauge));
        } catch (const Error&) {
          ++failed;
          surf.push_back(V3::Constant(NAN));
        }
      }
    out["samples"] = m * m;
    out["degenerate_samples"] = failed;
    if (o.contains("R")) {
      const double R = num(o, "R"), rho = num(o, "rho");
      double worst = 0.0;
      for (const V3& x : surf) {
        if (!x.allFinite()) continue;
        const double d = std::hypot(x.x(), x.y()) - R;
        worst = std::max(worst, std::abs(d * d + x.z() * x.z() - rho * rho));
      }
      out["torus_implicit_residual"] = worst;
    }
    if (failed == 0) c.obj(id_of(o).empty() ? "cyclide.obj" : id_of(o) + ".obj", surf, m, m, true, true);
    return out;
  });
}

// -- surfaces and connections --------------------------------------------------

Axis axis_of(const json& a, const std::string& id) {
  Axis ax;
  ax.n = int_field(a, "n");
  ax.a = num(a, "a");
  ax.b = num(a, "b");
  const std::string l = a.contains("layout") ? a["layout"].get<std::string>() : "nodes";
  if (l == "nodes") ax.layout = GridLayout::Nodes;
  else if (l == "cells") ax.layout = GridLayout::Cells;
  else if (l == "periodic") ax.layout = GridLayout::Periodic;
  else schema("unknown grid layout '" + l + "'", id);
  return ax;
}

SampledSurface surface_of(const json& o) {
  const std::string id = id_of(o);
  const std::string kind = field(o, "kind").get<std::string>();
  const std::vector<double> params = o.contains("params") ? doubles_of(o["params"], "'params'", id) : std::vector<double>{};
  static const char* known[] = {"plane", "sphere", "cylinder", "catenoid", "cone", "torus", "revolution"};
  if (std::find(std::begin(known), std::end(known), kind) == std::end(known))
    schema("unknown surface kind '" + kind + "'", id);
  Axis u, v;
  if (o.contains("grid")) {
    u = axis_of(field(o["grid"], "u"), id);
    v = axis_of(field(o["grid"], "v"), id);
  } else {
    if (kind == "revolution") schema("revolution surfaces need an explicit grid", id);
    std::tie(u, v) = tagged(o, [&] { return default_grid(kind, params); });
  }
  return tagged(o, [&] {
    if (kind == "revolution") {
      const json& pr = field(o, "profile");
      return make_revolution(doubles_of(field(pr, "r"), "'profile.r'", id), doubles_of(field(pr, "z"), "'profile.z'", id), u, v);
    }
    return make_surface(kind, params, u, v);
  });
}

struct SurfaceCtx {
  const json* obj;
  SampledSurface s;
  std::optional<LiftedSurface> ls;
};

SurfaceCtx surface_ctx(Ctx& c, bool lift) {
  const json& o = c.target("surface");
  SurfaceCtx sc{&o, surface_of(o), std::nullopt};
  if (lift) {
    if (!c.scene.lie || c.scene.n != 3) schema("surface lifts need a Lie gauge with n = 3");
    sc.ls = tagged(o, [&] { return lift_surface(sc.s, *c.scene.gauge); });
  }
  return sc;
}

/// (a, b, c) from params, or the CMC coefficients when only H is given.
Eigen::Vector3d lw_coefficients(const Ctx& c) {
  const json& p = c.scene.params;
  if (p.contains("a") || p.contains("b") || p.contains("c"))
    return {num_or(p, "a", 0.0), num_or(p, "b", 0.0), num_or(p, "c", 0.0)};
  if (p.contains("H")) return cmc_coefficients(num(p, "H"));
  schema("connection commands need params a, b, c (or H for the CMC case)");
}

ojson cmd_verify_conserved(Ctx& c) {
  SurfaceCtx sc = surface_ctx(c, true);
  const Eigen::Vector3d abc = lw_coefficients(c);
  const double a = abc[0], b = abc[1], cc = abc[2];
  return tagged(*sc.obj, [&] {
    const LiftedSurface& ls = *sc.ls;
    const auto [p, q] = lw_conserved_quantities(ls, a, b, cc);
    const GramReport g = gram_det(p, q, c.scene.kappa, a, b, cc);
    const DiscreteConnection conn = middle_connection(ls, a, b, cc, c.ts);
    const double tol_poly = c.tol("polynomial", 1e-10);
    const double tol_par = c.tol("parallel", 1e-6);
    const double tol_flat = c.tol("flatness", 1e-6);
    ojson out;
    out["id"] = id_of(*sc.obj);
    out["coefficients"] = arr(Eigen::VectorXd(abc));
    out["lw_residual"] = linear_weingarten_residual(sc.s, a, b, cc);
    out["lift_residual"] = lift_invariant_residual(ls);
    out["char_poly_p"] = arr(g.pp);
    out["char_poly_q"] = arr(g.qq);
    out["pairing_pq"] = arr(g.pq);
    out["det_G"] = arr(g.det);
    out["det_G_expected"] = arr(g.det_expected);
    out["gram_residual"] = g.residual;
    out["p_class"] = to_string(classify_cq(g.pp));
    ojson per_t = ojson::array();
    bool ok = g.residual <= tol_poly;
    for (std::size_t k = 0; k < c.ts.size(); ++k) {
      ojson r;
      r["t"] = c.ts[k];
      r["parallel_p"] = parallel_residual(conn, p, k);
      r["parallel_q"] = parallel_residual(conn, q, k);
      r["flatness"] = flatness_residual(conn, k);
      ok = ok && r["parallel_p"].get<double>() <= tol_par && r["parallel_q"].get<double>() <= tol_par &&
           r["flatness"].get<double>() <= tol_flat;
      per_t.push_back(r);
    }
    out["per_t"] = per_t;
    out["thresholds"] = {{"polynomial", tol_poly}, {"parallel", tol_par}, {"flatness", tol_flat}};
    out["pass"] = ok;
    return out;
  });
}

ojson cmd_flatness(Ctx& c) {
  SurfaceCtx sc = surface_ctx(c, true);
  const Eigen::Vector3d abc = lw_coefficients(c);
  return tagged(*sc.obj, [&] {
    const DiscreteConnection conn = middle_connection(*sc.ls, abc[0], abc[1], abc[2], c.ts);
    ojson out;
    out["id"] = id_of(*sc.obj);
    out["coefficients"] = arr(Eigen::VectorXd(abc));
    out["isometry_residual"] = conn.isometry_residual(sc.ls->gauge.space());
    ojson per_t = ojson::array();
    for (std::size_t k = 0; k < c.ts.size(); ++k) per_t.push_back({{"t", c.ts[k]}, {"flatness", flatness_residual(conn, k)}});
    out["per_t"] = per_t;
    return out;
  });
}

ojson cmd_gram(Ctx& c) {
  SurfaceCtx sc = surface_ctx(c, true);
  const Eigen::Vector3d abc = lw_coefficients(c);
  return tagged(*sc.obj, [&] {
    const auto [p, q] = lw_conserved_quantities(*sc.ls, abc[0], abc[1], abc[2]);
    const GramReport g = gram_det(p, q, c.scene.kappa, abc[0], abc[1], abc[2]);
    ojson out;
    out["id"] = id_of(*sc.obj);
    out["kappa"] = c.scene.kappa;
    out["pp"] = arr(g.pp);
    out["qq"] = arr(g.qq);
    out["pq"] = arr(g.pq);
    out["det_G"] = arr(g.det);
    out["pp_expected"] = arr(g.pp_expected);
    out["qq_expected"] = arr(g.qq_expected);
    out["pq_expected"] = arr(g.pq_expected);
    out["det_G_expected"] = arr(g.det_expected);
    out["residual"] = g.residual;
    out["discriminant"] = abc[1] * abc[1] - abc[0] * abc[2];
    return out;
  });
}

ojson cmd_willmore(Ctx& c) {
  SurfaceCtx sc = surface_ctx(c, false);
  return tagged(*sc.obj, [&] {
    ojson out;
    out["id"] = id_of(*sc.obj);
    out["W"] = willmore_energy(sc.s);
    out["samples"] = sc.s.samples();
    out["analytic"] = sc.s.analytic;
    return out;
  });
}

ojson cmd_surface_class(Ctx& c) {
  SurfaceCtx sc = surface_ctx(c, c.scene.lie && c.scene.n == 3);
  const json& p = c.scene.params;
  return tagged(*sc.obj, [&] {
    const SampledSurface& s = sc.s;
    ojson out;
    out["id"] = id_of(*sc.obj);
    out["kind"] = s.kind;
    out["analytic"] = s.analytic;
    const IsothermicResidual iso = isothermic_residual(s);
    out["isothermic"] = {iso.conformal, iso.orthogonal, iso.principal};
    const double gc = num_or(p, "guichard_c", 0.0);
    const int ge = p.contains("guichard_eps") ? p["guichard_eps"].get<int>() : 1;
    out["guichard"] = {{"c", gc}, {"eps", ge}, {"residual", guichard_surface_residual(s, gc, ge)}};
    const LinearWeingartenFit fit = linear_weingarten_fit(s);
    out["lw_fit"] = {{"abc", arr(Eigen::VectorXd(fit.abc))}, {"residual", fit.residual}, {"discriminant", fit.discriminant}};
    if (p.contains("a") || p.contains("b") || p.contains("c"))
      out["lw_residual"] = linear_weingarten_residual(s, num_or(p, "a", 0.0), num_or(p, "b", 0.0), num_or(p, "c", 0.0));
    if (sc.ls) {
      out["lift_residual"] = lift_invariant_residual(*sc.ls);
      if (p.contains("H")) out["cmc_residual"] = cmc_residual(*sc.ls, num(p, "H"), sc.ls->gauge.q());
    }
    if (s.u.layout != GridLayout::Nodes && s.v.layout != GridLayout::Nodes) out["willmore"] = willmore_energy(s);
    c.obj(id_of(*sc.obj).empty() ? "surface.obj" : id_of(*sc.obj) + ".obj", s.f, s.u.n, s.v.n, s.u.periodic(),
          s.v.periodic());
    return out;
  });
}

// -- nets ------------------------------------------------------------------------

QuadNet net_of(const json& o) {
  const std::string id = id_of(o);
  QuadNet net;
  const std::string gen = o.contains("generator") ? o["generator"].get<std::string>() : "explicit";
  tagged(o, [&] {
    if (gen == "explicit") {
      net = QuadNet(int_field(o, "nu"), int_field(o, "nv"));
      const auto v = points_of(field(o, "vertices"), "'vertices'", id, net.nu * net.nv);
      net.x = v;
      if (o.contains("alpha")) net.alpha = doubles_of(o["alpha"], "'alpha'", id);
      if (o.contains("beta")) net.beta = doubles_of(o["beta"], "'beta'", id);
    } else if (gen == "square") {
      const double h = num_or(o, "h", 1.0);
      net = QuadNet(int_field(o, "nu"), int_field(o, "nv"));
      for (int i = 0; i < net.nu; ++i)
        for (int j = 0; j < net.nv; ++j) net.at(i, j) = V3(i * h, j * h, 0.0);
      net.alpha.assign(net.nu - 1, 1.0);
      net.beta.assign(net.nv - 1, 1.0);
    } else if (gen == "rectangles") {
      const std::vector<double> w = doubles_of(field(o, "widths"), "'widths'", id);
      const double b = num_or(o, "height", 1.0);
      net = QuadNet(static_cast<int>(w.size()) + 1, int_field(o, "nv"));
      for (int j = 0; j < net.nv; ++j) {
        double x = 0.0;
        for (int i = 0; i < net.nu; ++i) {
          net.at(i, j) = V3(x, j * b, 0.0);
          if (i + 1 < net.nu) x += w[i];
        }
      }
      for (double a : w) net.alpha.push_back(a * a);
      net.beta.assign(net.nv - 1, b * b);
    } else if (gen == "exponential") {
      const double hu = num(o, "hu"), hv = num(o, "hv");
      net = QuadNet(int_field(o, "nu"), int_field(o, "nv"));
      for (int i = 0; i < net.nu; ++i)
        for (int j = 0; j < net.nv; ++j)
          net.at(i, j) = V3(std::exp(i * hu) * std::cos(j * hv), std::exp(i * hu) * std::sin(j * hv), 0.0);
      const double su = std::sinh(hu / 2), sv = std::sin(hv / 2);
      net.alpha.assign(net.nu - 1, su * su);
      net.beta.assign(net.nv - 1, sv * sv);
    } else {
      schema("unknown net generator '" + gen + "'", id);
    }
    if (o.contains("invert")) {
      const json& inv = o["invert"];
      const V3 ctr = vec(inv, "center", 3);
      const double r = num_or(inv, "radius", 1.0);
      for (V3& x : net.x) x = invert(x, ctr, r);
    }
    return 0;
  });
  if (!net.alpha.empty() || !net.beta.empty())
    if (!net.labelled()) schema("net labels need nu-1 alpha and nv-1 beta entries", id);
  return net;
}

ojson cmd_cross_ratio(Ctx& c) {
  const double tol = c.tol("circularity", 1e-8);
  ojson out;
  const auto quads = c.of_type("quad");
  if (!quads.empty() && !c.scene.params.contains("target")) {
    ojson items = ojson::array();
    for (const json* q : quads) {
      const auto p = points_of(field(*q, "points"), "'points'", id_of(*q), 4);
      items.push_back({{"id", id_of(*q)}, {"cross_ratio", tagged(*q, [&] { return cross_ratio({p[0], p[1], p[2], p[3]}, tol); })}});
    }
    out["quads"] = items;
    return out;
  }
  const json& o = c.target("net");
  const QuadNet net = net_of(o);
  return tagged(o, [&] {
    ojson rows = ojson::array();
    for (int i = 0; i + 1 < net.nu; ++i) {
      std::vector<double> row;
      for (int j = 0; j + 1 < net.nv; ++j) row.push_back(cross_ratio(net.face(i, j), tol));
      rows.push_back(arr(row));
    }
    out["id"] = id_of(o);
    out["face_cross_ratios"] = rows;
    out["circularity"] = net_circularity(net);
    if (net.labelled()) out["isothermic_residual"] = isothermic_residual_discrete(net);
    return out;
  });
}

ojson cmd_christoffel(Ctx& c) {
  const json& o = c.target("net");
  const QuadNet net = net_of(o);
  if (!net.labelled()) schema("christoffel needs a labelled net", id_of(o));
  return tagged(o, [&] {
    const ChristoffelResult d = christoffel_dual(net, c.tol("closure", 1e-8));
    const ChristoffelResult dd = christoffel_dual(d.dual, c.tol("closure", 1e-8));
    double back = 0.0;
    for (std::size_t k = 0; k < net.x.size(); ++k)
      back = std::max(back, ((dd.dual.x[k] - dd.dual.x[0]) - (net.x[k] - net.x[0])).norm());
    ojson out;
    out["id"] = id_of(o);
    out["closure_residual"] = d.closure_residual;
    out["dual_isothermic_residual"] = isothermic_residual_discrete(d.dual);
    out["dual_dual_residual"] = back / std::max(net.diameter(), 1e-300);
    out["dual"] = pts(d.dual.x);
    c.obj((id_of(o).empty() ? std::string("net") : id_of(o)) + "_dual.obj", d.dual.x, net.nu, net.nv);
    return out;
  });
}

ojson cmd_darboux(Ctx& c) {
  const json& o = c.target("net");
  const QuadNet net = net_of(o);
  if (!net.labelled()) schema("darboux needs a labelled net", id_of(o));
  const double lambda = num(c.scene.params, "lambda");
  const V3 seed = c.scene.params.contains("seed_point") ? V3(vec(c.scene.params, "seed_point", 3))
                                                        : V3(net.at(0, 0) + V3(0.0, 0.0, 0.5 * net.diameter()));
  return tagged(o, [&] {
    const DarbouxResult d = darboux_transform_discrete(net, lambda, seed);
    double vertical = 0.0;
    for (int i = 0; i < net.nu; ++i)
      for (int j = 0; j < net.nv; ++j) {
        if (i + 1 < net.nu)
          vertical = std::max(vertical, std::abs(cross_ratio({net.at(i, j), net.at(i + 1, j), d.net.at(i + 1, j), d.net.at(i, j)}, 1e-6) -
                                                 lambda * net.alpha[i]));
        if (j + 1 < net.nv)
          vertical = std::max(vertical, std::abs(cross_ratio({net.at(i, j), net.at(i, j + 1), d.net.at(i, j + 1), d.net.at(i, j)}, 1e-6) +
                                                 lambda * net.beta[j]));
      }
    ojson out;
    out["id"] = id_of(o);
    out["lambda"] = lambda;
    out["closure_gap"] = d.closure_gap;
    out["vertical_cross_ratio_residual"] = vertical;
    out["isothermic_residual"] = isothermic_residual_discrete(d.net);
    out["transform"] = pts(d.net.x);
    const std::string base = id_of(o).empty() ? std::string("net") : id_of(o);
    c.obj(base + ".obj", net.x, net.nu, net.nv);
    c.obj(base + "_darboux.obj", d.net.x, net.nu, net.nv);
    return out;
  });
}

ojson cmd_miquel(Ctx& c) {
  const json& o = c.target("miquel");
  const auto x = points_of(field(o, "x"), "'x'", id_of(o), 4);
  const auto h = points_of(field(o, "hat"), "'hat'", id_of(o), 3);
  return tagged(o, [&] {
    const MiquelResult r = miquel_completion(x[0], x[1], x[2], x[3], h[0], h[1], h[2], c.tol("circularity", 1e-8));
    ojson out;
    out["id"] = id_of(o);
    out["xk_hat"] = arr(Eigen::VectorXd(r.xk_hat));
    out["edge_residual_j"] = r.edge_residual_j;
    out["edge_residual_l"] = r.edge_residual_l;
    out["face_residual"] = r.face_residual;
    out["nearer_candidate_admissible"] = r.nearer_candidate_admissible;
    return out;
  });
}

QuadNet cauchy_data(const Ctx& c, const json& o, const QuadNet& net) {
  QuadNet hat = net;
  hat.alpha.clear();
  hat.beta.clear();
  if (o.contains("cauchy")) {
    const json& cd = o["cauchy"];
    const auto u0 = points_of(field(cd, "u0"), "'cauchy.u0'", id_of(o), net.nu);
    const auto v0 = points_of(field(cd, "v0"), "'cauchy.v0'", id_of(o), net.nv);
    if ((u0[0] - v0[0]).norm() > 1e-12) schema("cauchy.u0[0] and cauchy.v0[0] must agree", id_of(o));
    for (int i = 0; i < net.nu; ++i) hat.at(i, 0) = u0[i];
    for (int j = 0; j < net.nv; ++j) hat.at(0, j) = v0[j];
    return hat;
  }
  // Generated data: a shifted base point, then each next point rotated along
  // the circle through the edge and the previous point.
  std::mt19937_64 rng(c.scene.params.contains("seed") ? c.scene.params["seed"].get<std::uint64_t>() : 1u);
  std::uniform_real_distribution<double> ang(0.2, 0.6);
  const double h = (net.at(1, 0) - net.at(0, 0)).norm();
  V3 off = o.contains("offset") ? V3(vec(o, "offset", 3)) : V3(0.2 * h, -0.15 * h, 0.0);
  hat.at(0, 0) = net.at(0, 0) + off;
  for (int i = 0; i + 1 < net.nu; ++i) hat.at(i + 1, 0) = point_on_circle(net.at(i, 0), net.at(i + 1, 0), hat.at(i, 0), ang(rng));
  for (int j = 0; j + 1 < net.nv; ++j) hat.at(0, j + 1) = point_on_circle(net.at(0, j), net.at(0, j + 1), hat.at(0, j), ang(rng));
  return hat;
}

ojson cmd_ribaucour(Ctx& c) {
  const json& o = c.target("net");
  const QuadNet net = net_of(o);
  return tagged(o, [&] {
    const QuadNet hat = cauchy_data(c, o, net);
    const RibaucourResult r = ribaucour_propagate(net, hat, c.tol("circularity", 1e-8));
    ojson out;
    out["id"] = id_of(o);
    out["max_face_residual"] = r.max_face_residual;
    out["max_edge_residual"] = r.max_edge_residual;
    out["flagged_faces"] = r.flagged_faces;
    out["transform"] = pts(r.net.x);
    const std::string base = id_of(o).empty() ? std::string("net") : id_of(o);
    c.obj(base + ".obj", net.x, net.nu, net.nv);
    c.obj(base + "_ribaucour.obj", r.net.x, net.nu, net.nv);
    return out;
  });
}

// -- configurations --------------------------------------------------------------

PointQuadruple quadruple_of(const json& o) {
  const auto p = points_of(field(o, "points"), "'points'", id_of(o), 4);
  return tagged(o, [&] { return PointQuadruple({p[0], p[1], p[2], p[3]}); });
}

ojson cmd_triangle_centres(Ctx& c) {
  const json& o = c.target("quadruple");
  const PointQuadruple q = quadruple_of(o);
  return tagged(o, [&] {
    const InExCentres y = in_ex_centres(q);
    ojson out;
    out["id"] = id_of(o);
    out["centres"] = pts({y.y.begin(), y.y.end()});
    out["concurrency"] = arr(std::vector<double>(y.concurrency.begin(), y.concurrency.end()));
    return out;
  });
}

ojson cmd_desmic(Ctx& c) {
  const json& o = c.target("quadruple");
  const PointQuadruple q = quadruple_of(o);
  return tagged(o, [&] {
    const InExCentres y = in_ex_centres(q);
    const auto dc = desmic_centres(q, y);
    ojson cs = ojson::array();
    int interior = 0;
    const DesmicCentre* inner_c = nullptr;
    for (const DesmicCentre& d : dc) {
      cs.push_back({{"pairing", d.pairing}, {"point", arr(Eigen::VectorXd(d.point))}, {"residual", d.residual}, {"interior", d.interior}});
      if (d.interior) {
        ++interior;
        inner_c = &d;
      }
    }
    ojson out;
    out["id"] = id_of(o);
    out["centres"] = cs;
    out["interior_count"] = interior;
    if (interior == 1) {
      const V3 z = inner_c->point.head<3>() / inner_c->point[3];
      const AntipodalResult a = antipodal_normalization(q, y, z, inner_c->pairing);
      out["antipodal_residual"] = a.residual;
      out["isometry_residual"] = is_isometry(a.g, Space::moebius(2)).residual;
    }
    return out;
  });
}

using Handler = std::function<ojson(Ctx&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h = {
      {"lift", cmd_lift},
      {"project", cmd_project},
      {"classify-pencil", cmd_classify_pencil},
      {"classify-cyclide", cmd_classify_cyclide},
      {"mean-curvature", cmd_mean_curvature},
      {"miquel", cmd_miquel},
      {"ribaucour", cmd_ribaucour},
      {"cross-ratio", cmd_cross_ratio},
      {"christoffel", cmd_christoffel},
      {"darboux", cmd_darboux},
      {"triangle-centres", cmd_triangle_centres},
      {"desmic", cmd_desmic},
      {"verify-conserved", cmd_verify_conserved},
      {"flatness", cmd_flatness},
      {"gram", cmd_gram},
      {"willmore", cmd_willmore},
      {"surface-class", cmd_surface_class},
  };
  return h;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Schema: return 2;
    case ErrorCode::Io: return 1;
    default: return 3;
  }
}

}  // namespace

RunResult run(const std::string& command, const std::string& scene_text, const RunOptions& opts) {
  RunResult res;
  ojson report;
  report["command"] = command;
  // Usage problems never touch the scene or the output directory.
  const auto it = handlers().find(command);
  const char* usage = it == handlers().end()        ? "unknown command"
                      : !(opts.tolerance_scale > 0.0) ? "tolerance scale must be positive"
                                                      : nullptr;
  if (usage) {
    report["error"] = {{"code", "usage"}, {"message", usage}};
    res.exit_code = 1;
    res.report = dump_json(report);
    return res;
  }
  try {
    Ctx c{parse_scene(scene_text), opts, {}, {}};
    if (!opts.ts.empty())
      c.ts = opts.ts;
    else if (c.scene.params.contains("t"))
      c.ts = doubles_of(c.scene.params["t"], "'params.t'", "");
    else
      c.ts = default_t_values();
    if (!opts.out_dir.empty()) {
      std::error_code ec;
      std::filesystem::create_directories(opts.out_dir, ec);
      if (ec) throw Error(ErrorCode::Io, "cannot create output directory '" + opts.out_dir + "'");
    }
    report["result"] = it->second(c);
    report["artifacts"] = c.artifacts;
    res.artifacts = c.artifacts;
    res.exit_code = 0;
  } catch (const Error& e) {
    ojson err;
    err["code"] = to_string(e.code());
    err["message"] = e.what();
    if (!e.object_id().empty()) err["object"] = e.object_id();
    report["error"] = err;
    res.exit_code = exit_code_for(e.code());
  } catch (const json::exception& e) {
    report["error"] = {{"code", "schema"}, {"message", std::string("malformed scene value: ") + e.what()}};
    res.exit_code = 2;
  }
  res.report = dump_json(report);
  if (!opts.out_dir.empty() && res.exit_code != 1) {
    std::ofstream f(std::filesystem::path(opts.out_dir) / "report.json", std::ios::binary);
    if (f) f << res.report;
  }
  return res;
}

}  // namespace conegeo
