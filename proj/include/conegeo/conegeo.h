/* C interface to the conegeo library. Every call returns a cg_status; on
 * failure cg_last_error() holds a thread-local message. */
#ifndef CONEGEO_H
#define CONEGEO_H

#include <stddef.h>

#if defined(CONEGEO_BUILDING_LIBRARY)
#define CG_API __attribute__((visibility("default")))
#else
#define CG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cg_status {
  CG_OK = 0,
  CG_ERR_INVALID = 1, /* bad argument, usage or I/O */
  CG_ERR_SCHEMA = 2,
  CG_ERR_GEOMETRY = 3 /* degenerate or unsupported configuration */
} cg_status;

typedef struct cg_context cg_context;
typedef struct cg_surface cg_surface;

CG_API const char* cg_version(void);
CG_API const char* cg_last_error(void);

/* Batch runs: one context holds options and the last report. */
CG_API cg_status cg_context_create(cg_context** out);
CG_API void cg_context_destroy(cg_context* ctx);
CG_API cg_status cg_context_set_tolerance_scale(cg_context* ctx, double scale);
CG_API cg_status cg_context_set_t_values(cg_context* ctx, const double* ts, size_t count);
CG_API cg_status cg_context_set_output_dir(cg_context* ctx, const char* dir);
/* Runs `command` on the scene JSON. Returns the CLI exit code as a status;
 * the report is available either way. */
CG_API cg_status cg_context_run(cg_context* ctx, const char* command, const char* scene_json);
/* Borrowed until the next run or destroy. */
CG_API const char* cg_context_report(const cg_context* ctx);
CG_API size_t cg_command_count(void);
CG_API const char* cg_command_name(size_t index);

/* Direct geometry. n is the Euclidean dimension; null-basis coordinates
 * (o, e1..en, inf[, p]) have n + 2 entries (n + 3 in the Lie model). */
CG_API cg_status cg_lift_point(int n, const double* x, double* out);
CG_API cg_status cg_lift_sphere_lie(int n, const double* center, double radius, double* out);
CG_API cg_status cg_inner(int n, int lie, const double* u, const double* v, double* out);
/* Four points in R^3, 12 doubles. */
CG_API cg_status cg_cross_ratio(const double* pts, double* out);

/* Sampled parametrized surfaces. Grids use the library defaults per kind. */
CG_API cg_status cg_surface_create(const char* kind, const double* params, size_t nparams, cg_surface** out);
CG_API void cg_surface_destroy(cg_surface* s);
CG_API size_t cg_surface_vertex_count(const cg_surface* s);
CG_API cg_status cg_surface_export_obj(const cg_surface* s, const char* path);

#ifdef __cplusplus
}
#endif

#endif
