#include "conegeo/conegeo.h"

#include <cstring>
#include <new>
#include <string>

#include "conegeo/discrete_nets.hpp"
#include "conegeo/errors.hpp"
#include "conegeo/scene.hpp"
#include "conegeo/sphere_models.hpp"
#include "conegeo/surfaces.hpp"

struct cg_context {
  conegeo::RunOptions opts;
  std::string report;
};

struct cg_surface {
  conegeo::SampledSurface s;
};

namespace {

thread_local std::string g_error;

cg_status status_of(conegeo::ErrorCode code) {
  switch (code) {
    case conegeo::ErrorCode::Schema: return CG_ERR_SCHEMA;
    case conegeo::ErrorCode::InvalidArgument:
    case conegeo::ErrorCode::Io: return CG_ERR_INVALID;
    default: return CG_ERR_GEOMETRY;
  }
}

cg_status invalid(const char* msg) {
  g_error = msg;
  return CG_ERR_INVALID;
}

template <class F>
cg_status guarded(F&& fn) {
  try {
    g_error.clear();
    return fn();
  } catch (const conegeo::Error& e) {
    g_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_error = "out of memory";
    return CG_ERR_INVALID;
  } catch (const std::exception& e) {
    g_error = e.what();
    return CG_ERR_INVALID;
  }
}

bool dim_ok(int n) { return n >= 1 && n <= 8; }

Eigen::VectorXd view(const double* p, int size) { return Eigen::Map<const Eigen::VectorXd>(p, size); }

void store(const Eigen::VectorXd& v, double* out) { std::memcpy(out, v.data(), sizeof(double) * static_cast<std::size_t>(v.size())); }

}  // namespace

extern "C" {

const char* cg_version(void) { return "1.0.0"; }

const char* cg_last_error(void) { return g_error.c_str(); }

cg_status cg_context_create(cg_context** out) {
  if (!out) return invalid("null output pointer");
  return guarded([&] {
    *out = new cg_context();
    return CG_OK;
  });
}

void cg_context_destroy(cg_context* ctx) { delete ctx; }

cg_status cg_context_set_tolerance_scale(cg_context* ctx, double scale) {
  if (!ctx) return invalid("null context");
  if (!(scale > 0.0)) return invalid("tolerance scale must be positive");
  ctx->opts.tolerance_scale = scale;
  return CG_OK;
}

cg_status cg_context_set_t_values(cg_context* ctx, const double* ts, size_t count) {
  if (!ctx) return invalid("null context");
  if (count > 0 && !ts) return invalid("null t array");
  return guarded([&] {
    ctx->opts.ts.assign(ts, ts + count);
    return CG_OK;
  });
}

cg_status cg_context_set_output_dir(cg_context* ctx, const char* dir) {
  if (!ctx) return invalid("null context");
  ctx->opts.out_dir = dir ? dir : "";
  return CG_OK;
}

cg_status cg_context_run(cg_context* ctx, const char* command, const char* scene_json) {
  if (!ctx || !command || !scene_json) return invalid("null argument");
  return guarded([&] {
    const conegeo::RunResult r = conegeo::run(command, scene_json, ctx->opts);
    ctx->report = r.report;
    if (r.exit_code != 0) g_error = "command failed; see the report";
    return static_cast<cg_status>(r.exit_code);
  });
}

const char* cg_context_report(const cg_context* ctx) { return ctx ? ctx->report.c_str() : ""; }

size_t cg_command_count(void) { return conegeo::commands().size(); }

const char* cg_command_name(size_t index) {
  const auto& c = conegeo::commands();
  return index < c.size() ? c[index].c_str() : nullptr;
}

cg_status cg_lift_point(int n, const double* x, double* out) {
  if (!dim_ok(n) || !x || !out) return invalid("bad dimension or null pointer");
  return guarded([&] {
    const conegeo::Space sp = conegeo::Space::moebius(n);
    store(conegeo::lift_point(sp, view(x, n)).v().coords(), out);
    return CG_OK;
  });
}

cg_status cg_lift_sphere_lie(int n, const double* center, double radius, double* out) {
  if (!dim_ok(n) || !center || !out) return invalid("bad dimension or null pointer");
  return guarded([&] {
    const conegeo::Space sp = conegeo::Space::lie(n);
    const auto d = conegeo::EuclideanSphereData::sphere(view(center, n), radius);
    store(conegeo::lift_sphere_lie(sp, d).v().coords(), out);
    return CG_OK;
  });
}

cg_status cg_inner(int n, int lie, const double* u, const double* v, double* out) {
  if (!dim_ok(n) || !u || !v || !out) return invalid("bad dimension or null pointer");
  return guarded([&] {
    const conegeo::Space sp = lie ? conegeo::Space::lie(n) : conegeo::Space::moebius(n);
    *out = conegeo::inner(sp, view(u, sp.dim()), view(v, sp.dim()));
    return CG_OK;
  });
}

cg_status cg_cross_ratio(const double* pts, double* out) {
  if (!pts || !out) return invalid("null pointer");
  return guarded([&] {
    std::array<Eigen::Vector3d, 4> q;
    for (int k = 0; k < 4; ++k) q[k] = Eigen::Vector3d(pts[3 * k], pts[3 * k + 1], pts[3 * k + 2]);
    *out = conegeo::cross_ratio(q);
    return CG_OK;
  });
}

cg_status cg_surface_create(const char* kind, const double* params, size_t nparams, cg_surface** out) {
  if (!kind || !out || (nparams > 0 && !params)) return invalid("null argument");
  return guarded([&] {
    const std::vector<double> p(params, params + nparams);
    const auto [u, v] = conegeo::default_grid(kind, p);
    *out = new cg_surface{conegeo::make_surface(kind, p, u, v)};
    return CG_OK;
  });
}

void cg_surface_destroy(cg_surface* s) { delete s; }

size_t cg_surface_vertex_count(const cg_surface* s) { return s ? s->s.f.size() : 0; }

cg_status cg_surface_export_obj(const cg_surface* s, const char* path) {
  if (!s || !path) return invalid("null argument");
  return guarded([&] {
    conegeo::export_obj(s->s.f, s->s.u.n, s->s.v.n, path, s->s.u.periodic(), s->s.v.periodic());
    return CG_OK;
  });
}

}  // extern "C"
