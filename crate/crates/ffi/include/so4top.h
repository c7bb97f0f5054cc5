#ifndef SO4TOP_H
#define SO4TOP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum So4Status {
  SO4_STATUS_OK = 0,
  SO4_STATUS_NULL_POINTER = 1,
  SO4_STATUS_INVALID_SPECTRUM = 2,
  SO4_STATUS_OUTSIDE_CHAMBER = 3,
  SO4_STATUS_NOT_REGULAR = 4,
  SO4_STATUS_NOT_EQUILIBRIUM = 5,
  SO4_STATUS_INVALID_ARGUMENT = 6,
  SO4_STATUS_DRIFT_EXCEEDED = 7,
  SO4_STATUS_NUMERICAL = 8,
  SO4_STATUS_INTERNAL = 9,
} So4Status;

/**
 * Cartan subalgebra `t1`, `t2` or `t3`.
 */
typedef enum So4Family {
  SO4_FAMILY_T1 = 1,
  SO4_FAMILY_T2 = 2,
  SO4_FAMILY_T3 = 3,
} So4Family;

/**
 * Position in the Weyl orbit: `(a,b)`, `(-a,-b)`, `(b,a)`, `(-b,-a)`.
 */
typedef enum So4WeylLabel {
  SO4_WEYL_LABEL_AB = 0,
  SO4_WEYL_LABEL_NEG_AB = 1,
  SO4_WEYL_LABEL_BA = 2,
  SO4_WEYL_LABEL_NEG_BA = 3,
} So4WeylLabel;

typedef enum So4Williamson {
  SO4_WILLIAMSON_CENTER_CENTER = 0,
  SO4_WILLIAMSON_CENTER_SADDLE = 1,
  SO4_WILLIAMSON_SADDLE_SADDLE = 2,
  SO4_WILLIAMSON_FOCUS_FOCUS = 3,
  SO4_WILLIAMSON_DEGENERATE = 4,
} So4Williamson;

typedef enum So4Verdict {
  SO4_VERDICT_STABLE = 0,
  SO4_VERDICT_UNSTABLE = 1,
  SO4_VERDICT_OPEN = 2,
  SO4_VERDICT_STABLE_MODULO_DRIFT = 3,
} So4Verdict;

typedef enum So4Flow {
  SO4_FLOW_H = 0,
  SO4_FLOW_I = 1,
} So4Flow;

/**
 * Rigid body with a fixed inertia spectrum.
 */
typedef struct So4Body So4Body;

/**
 * Recorded trajectory.
 */
typedef struct So4Trajectory So4Trajectory;

/**
 * Frontiers of the `M1_{b,a}` analysis and their slopes `|c2| / c1`.
 */
typedef struct So4Frontiers {
  double alpha1;
  double alpha2;
  double alpha3;
  double s1;
  /**
   * Meaningful only when `has_s2`; absent in case II.
   */
  double s2;
  bool has_s2;
  bool case_two;
} So4Frontiers;

/**
 * Stability of one Cartan equilibrium.
 */
typedef struct So4Classification {
  /**
   * Type from the case analysis.
   */
  enum So4Williamson williamson;
  /**
   * Type from the numerical linearization.
   */
  enum So4Williamson spectral_williamson;
  enum So4Verdict orbit_verdict;
  enum So4Verdict liepoisson_verdict;
  /**
   * `b^2 / a^2`.
   */
  double ratio;
  bool nondegenerate;
} So4Classification;

/**
 * Integration settings.
 */
typedef struct So4IntegratorOptions {
  double step;
  size_t steps;
  /**
   * Record every n-th step; 0 is treated as 1.
   */
  size_t record_every;
  /**
   * Project onto the initial orbit after each step.
   */
  bool projection;
  /**
   * Use the implicit midpoint rule instead of RK4.
   */
  bool implicit_midpoint;
  /**
   * Abort with `DRIFT_EXCEEDED` above this relative `H` drift; `<= 0` disables.
   */
  double max_h_drift;
} So4IntegratorOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *so4_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *so4_version(void);

/**
 * Create a body from `lambda[4]` with `l1 > l2 > l3 > l4` and nonzero pair sums.
 *
 * # Safety
 * `lambda` must point to 4 readable doubles and `out` to a writable pointer.
 */
enum So4Status so4_body_new(const double *lambda, struct So4Body **out);

/**
 * Release a body; null is ignored.
 *
 * # Safety
 * `body` must come from [`so4_body_new`] and not be used afterwards.
 */
void so4_body_free(struct So4Body *body);

/**
 * Hamiltonian `H` at `state[6] = (x1, x2, x3, y1, y2, y3)`.
 *
 * # Safety
 * `body` must be valid, `state` must point to 6 doubles, `out` to one.
 */
enum So4Status so4_hamiltonian(const struct So4Body *body, const double *state, double *out);

/**
 * Second integral `I` at `state[6]`.
 *
 * # Safety
 * As for [`so4_hamiltonian`].
 */
enum So4Status so4_integral_i(const struct So4Body *body, const double *state, double *out);

/**
 * Casimirs `C1 = (|x|^2 + |y|^2) / 2` and `C2 = x . y`.
 *
 * # Safety
 * `state` must point to 6 doubles; `c1` and `c2` to one each.
 */
enum So4Status so4_casimirs(const double *state, double *c1, double *c2);

/**
 * Normalized equilibrium residual; below `1e-9` counts as an equilibrium.
 *
 * # Safety
 * As for [`so4_hamiltonian`].
 */
enum So4Status so4_equilibrium_residual(const struct So4Body *body,
                                        const double *state,
                                        double *out);

/**
 * Frontier ratios and slopes of the swapped `t1` points.
 *
 * # Safety
 * `body` must be valid and `out` writable.
 */
enum So4Status so4_frontiers(const struct So4Body *body, struct So4Frontiers *out);

/**
 * Write the Cartan point `(family, label)` of the orbit `(c1, c2)` to `state[6]`.
 *
 * # Safety
 * `state` must point to 6 writable doubles.
 */
enum So4Status so4_cartan_point(double c1,
                                double c2,
                                enum So4Family family,
                                enum So4WeylLabel label,
                                double *state);

/**
 * Classify one Cartan equilibrium of the regular orbit `(c1, c2)`.
 *
 * # Safety
 * `body` must be valid and `out` writable.
 */
enum So4Status so4_classify_cartan(const struct So4Body *body,
                                   double c1,
                                   double c2,
                                   enum So4Family family,
                                   enum So4WeylLabel label,
                                   struct So4Classification *out);

/**
 * Full JSON classification of the orbit (twelve Cartan reports plus
 * `s_samples` segment parameters of the s-curve). Free with [`so4_string_free`].
 *
 * # Safety
 * `body` must be valid and `out` writable.
 */
enum So4Status so4_classify_json(const struct So4Body *body,
                                 double c1,
                                 double c2,
                                 size_t s_samples,
                                 char **out);

/**
 * Release a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void so4_string_free(char *s);

/**
 * Default options: RK4, step `1e-3`, `1e4` steps, every step recorded.
 */
struct So4IntegratorOptions so4_integrator_defaults(void);

/**
 * Integrate the `H` or `I` flow from `state[6]`.
 *
 * # Safety
 * `body` must be valid, `state` must point to 6 doubles, `opts` and `out`
 * must be valid pointers.
 */
enum So4Status so4_integrate(const struct So4Body *body,
                             const double *state,
                             enum So4Flow flow,
                             const struct So4IntegratorOptions *opts,
                             struct So4Trajectory **out);

/**
 * Number of recorded samples, or 0 for null.
 *
 * # Safety
 * `traj` must be null or valid.
 */
size_t so4_trajectory_len(const struct So4Trajectory *traj);

/**
 * Time and state of sample `index`.
 *
 * # Safety
 * `traj` must be valid; `time` must point to one double and `state` to 6.
 */
enum So4Status so4_trajectory_sample(const struct So4Trajectory *traj,
                                     size_t index,
                                     double *time,
                                     double *state);

/**
 * Largest relative drift of `(C1, C2, H, I)` written to `out[4]`.
 *
 * # Safety
 * `traj` must be valid and `out` must point to 4 writable doubles.
 */
enum So4Status so4_trajectory_max_drift(const struct So4Trajectory *traj, double *out);

/**
 * Release a trajectory; null is ignored.
 *
 * # Safety
 * `traj` must come from [`so4_integrate`] and not be used afterwards.
 */
void so4_trajectory_free(struct So4Trajectory *traj);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SO4TOP_H */
