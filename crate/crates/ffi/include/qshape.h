/* C interface of the qshape confined-spectrum and thermodynamics workbench. */

#ifndef QSHAPE_H
#define QSHAPE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of every C-ABI call.
 */
typedef enum QshapeStatus {
  QSHAPE_STATUS_OK = 0,
  /**
   * A NULL pointer or an out-of-range scalar argument.
   */
  QSHAPE_STATUS_INVALID_ARGUMENT = 1,
  /**
   * Inputs violated a physical or numerical precondition.
   */
  QSHAPE_STATUS_DOMAIN = 2,
  /**
   * The requested operation is undefined for this potential variant.
   */
  QSHAPE_STATUS_UNSUPPORTED = 3,
  /**
   * The eigenvalue iteration failed or did not converge.
   */
  QSHAPE_STATUS_SOLVER = 4,
  /**
   * A derivative stencil straddled a feature; refine the step.
   */
  QSHAPE_STATUS_STEP_SIZE = 5,
  /**
   * A panic was caught at the language boundary.
   */
  QSHAPE_STATUS_INTERNAL = 6,
} QshapeStatus;

/**
 * Thermodynamic evaluation mode.
 */
typedef enum QshapeMode {
  QSHAPE_MODE_TWO_LEVEL = 0,
  QSHAPE_MODE_N_LEVEL = 1,
} QshapeMode;

/**
 * Spontaneity classes, matching the core enumeration.
 */
typedef enum QshapeClass {
  QSHAPE_CLASS_TYPICAL = 0,
  QSHAPE_CLASS_ENERGY_DRIVEN = 1,
  QSHAPE_CLASS_ENTROPY_DRIVEN = 2,
  QSHAPE_CLASS_NON_SPONTANEOUS = 3,
  QSHAPE_CLASS_BOUNDARY = 4,
} QshapeClass;

/**
 * Opaque confinement potential handle.
 */
typedef struct QshapePotential QshapePotential;

/**
 * Opaque spectrum handle.
 */
typedef struct QshapeSpectrum QshapeSpectrum;

/**
 * Dimensionless canonical state functions.
 */
typedef struct QshapeThermo {
  double zeta;
  double f_tilde;
  double u_tilde;
  double s_tilde;
  double c_tilde;
  /**
   * Nonzero when the supplied spectrum ended while its Boltzmann tail
   * still carried weight.
   */
  int32_t truncation_warning;
} QshapeThermo;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Version of the library as a static NUL-terminated string.
 */
const char *qshape_version(void);

/**
 * Copy the most recent error message of this thread into `buffer`
 * (truncated to `capacity` − 1 bytes, always NUL-terminated) and return
 * the full message length in bytes. A NULL or empty buffer only queries
 * the length.
 */
size_t qshape_last_error(char *buffer, size_t capacity);

/**
 * Flat-bottomed box with hard walls at 0 and `length_nm`.
 */
enum QshapeStatus qshape_potential_new_box(double length_nm,
                                           double mass_ratio,
                                           struct QshapePotential **out);

/**
 * Harmonic well of oscillator length `osc_length_nm` centered at
 * `center_nm`, inside hard walls at 0 and `domain_nm`.
 */
enum QshapeStatus qshape_potential_new_harmonic(double osc_length_nm,
                                                double domain_nm,
                                                double center_nm,
                                                double mass_ratio,
                                                struct QshapePotential **out);

/**
 * Box with an impenetrable partition at `partition_nm`.
 */
enum QshapeStatus qshape_potential_new_split_box(double length_nm,
                                                 double partition_nm,
                                                 double mass_ratio,
                                                 struct QshapePotential **out);

/**
 * Box with a Gaussian bump of height `height_ev` and width `width_nm`
 * centered at `partition_nm`.
 */
enum QshapeStatus qshape_potential_new_box_bump(double length_nm,
                                                double partition_nm,
                                                double height_ev,
                                                double width_nm,
                                                double mass_ratio,
                                                struct QshapePotential **out);

/**
 * Harmonic well plus Gaussian bump inside hard walls at 0 and `length_nm`.
 */
enum QshapeStatus qshape_potential_new_harmonic_bump(double length_nm,
                                                     double osc_length_nm,
                                                     double partition_nm,
                                                     double height_ev,
                                                     double width_nm,
                                                     double mass_ratio,
                                                     struct QshapePotential **out);

/**
 * Release a potential handle. NULL is accepted and ignored.
 */
void qshape_potential_free(struct QshapePotential *potential);

/**
 * Potential value at `x_nm` in eV.
 */
enum QshapeStatus qshape_potential_evaluate(const struct QshapePotential *potential,
                                            double x_nm,
                                            double *out_ev);

/**
 * Lowest `k` levels of the potential. `rel_tol` <= 0 selects the default
 * refinement tolerance. Exactly representable variants (box, split box,
 * wall-free harmonic well) are solved in closed form.
 */
enum QshapeStatus qshape_solve(const struct QshapePotential *potential,
                               size_t k,
                               double rel_tol,
                               struct QshapeSpectrum **out);

/**
 * Wrap an ascending list of levels (eV) in a spectrum handle.
 */
enum QshapeStatus qshape_spectrum_from_levels(const double *levels,
                                              size_t count,
                                              struct QshapeSpectrum **out);

/**
 * Release a spectrum handle. NULL is accepted and ignored.
 */
void qshape_spectrum_free(struct QshapeSpectrum *spectrum);

/**
 * Number of levels held by the spectrum.
 */
enum QshapeStatus qshape_spectrum_len(const struct QshapeSpectrum *spectrum, size_t *out);

/**
 * 1 if the grid refinement stabilized (or the result is exact), else 0.
 */
enum QshapeStatus qshape_spectrum_converged(const struct QshapeSpectrum *spectrum, int32_t *out);

/**
 * Copy up to `capacity` levels (eV, ascending) into `buffer` and report
 * how many were written.
 */
enum QshapeStatus qshape_spectrum_levels(const struct QshapeSpectrum *spectrum,
                                         double *buffer,
                                         size_t capacity,
                                         size_t *written);

/**
 * Closed-form two-level state functions for a dimensionless ground-state
 * energy and gap (both per k_B·T).
 */
enum QshapeStatus qshape_two_level(double eg_tilde, double gap_tilde, struct QshapeThermo *out);

/**
 * Exact Boltzmann sums over the spectrum at `temperature_k`.
 */
enum QshapeStatus qshape_n_level(const struct QshapeSpectrum *spectrum,
                                 double temperature_k,
                                 struct QshapeThermo *out);

/**
 * Occupation-weighted mean of consecutive level gaps (eV).
 */
enum QshapeStatus qshape_mean_level_spacing(const struct QshapeSpectrum *spectrum,
                                            double temperature_k,
                                            double *out_ev);

/**
 * Boltzmann occupation probabilities; up to `capacity` entries are copied
 * into `buffer`.
 */
enum QshapeStatus qshape_occupations(const struct QshapeSpectrum *spectrum,
                                     double temperature_k,
                                     double *buffer,
                                     size_t capacity,
                                     size_t *written);

/**
 * Pressure −∂F̃/∂L per k_B·T per nm. `delta_nm` <= 0 selects the default
 * step; `mode` picks the two-level or N-level free energy.
 */
enum QshapeStatus qshape_pressure(const struct QshapePotential *potential,
                                  double temperature_k,
                                  enum QshapeMode mode,
                                  double delta_nm,
                                  double *out);

/**
 * Classify an isothermal transition from its dimensionless changes
 * (ΔF̃, ΔŨ, ΔS̃), which must satisfy ΔF̃ = ΔŨ − ΔS̃.
 */
enum QshapeStatus qshape_classify(double d_f,
                                  double d_u,
                                  double d_s,
                                  double epsilon,
                                  enum QshapeClass *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QSHAPE_H */
