/*
 * cvteleport -- continuous-variable teleportation with conditioned
 * two-mode squeezed vacuum resources.
 *
 * C API of the shared library. Handles are opaque; every function returns a
 * cvt_status and writes results through out-parameters. On any failure the
 * thread-local message from cvt_last_error_message() describes the cause.
 */
#ifndef CVTELEPORT_H
#define CVTELEPORT_H

#include <stddef.h>

#if defined(_WIN32)
#define CVT_API __declspec(dllexport)
#else
#define CVT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cvt_status {
    CVT_OK = 0,
    CVT_ERROR_INVALID_ARGUMENT = 1,
    CVT_ERROR_CONVERGENCE = 2,
    CVT_ERROR_TRUNCATION = 3,
    CVT_ERROR_NONFINITE = 4,
    CVT_ERROR_INTERNAL = 5
} cvt_status;

typedef enum cvt_resource_kind {
    CVT_RESOURCE_STANDARD = 0,
    CVT_RESOURCE_PHOTON_SUBTRACTED = 1,
    CVT_RESOURCE_PHOTON_ADDED = 2
} cvt_resource_kind;

typedef enum cvt_parity { CVT_PARITY_EVEN = 0, CVT_PARITY_ODD = 1 } cvt_parity;

typedef enum cvt_input_type { CVT_INPUT_COHERENT = 0, CVT_INPUT_CAT = 1 } cvt_input_type;

typedef struct cvt_complex {
    double re;
    double im;
} cvt_complex;

typedef struct cvt_input_state {
    cvt_input_type type;
    cvt_complex alpha;
    cvt_parity parity; /* cat inputs only */
} cvt_input_state;

typedef struct cvt_point {
    cvt_complex beta;
    double prob_density;
    double fidelity;
    int numeric_route; /* 1 when served by the generalized numeric path */
} cvt_point;

typedef struct cvt_quad_options {
    int order;    /* <= 0 selects the default (48) */
    double width; /* <= 0 selects 1/sqrt(1 - lambda^2) */
    int refine;   /* nonzero doubles the order for an error estimate */
} cvt_quad_options;

typedef struct cvt_ndps_result {
    int k;
    double prob;
    double fidelity;      /* meaningful only when fidelity_defined != 0 */
    int fidelity_defined; /* 0 marks the undefined-fidelity outcome P(k)=0 */
} cvt_ndps_result;

typedef struct cvt_boundary_summary {
    double crossing_standard;   /* lambda where the standard curve hits 2/3 */
    double crossing_subtracted;
    int has_crossings;
    double window_lo; /* subtracted quantum, standard classical */
    double window_hi;
    int has_window;
    double gap_argmax_lambda;
    double gap_max;
    double gap_relative_improvement;
} cvt_boundary_summary;

typedef struct cvt_equivalence_summary {
    int cases;
    double max_abs_dp; /* worst |closed P - oracle P| */
    double max_abs_df; /* worst |closed F - oracle F| */
} cvt_equivalence_summary;

typedef struct cvt_equivalence_case_info {
    cvt_resource_kind kind;
    double lambda;
    double gain;
    int family; /* 0 coherent, 1 even cat, 2 odd cat */
    cvt_complex beta;
    double dp;
    double df;
} cvt_equivalence_case_info;

typedef struct cvt_resource cvt_resource; /* opaque */

/* Library version string, e.g. "1.0.0". */
CVT_API const char* cvt_version(void);

/* Thread-local description of the most recent failure. */
CVT_API const char* cvt_last_error_message(void);

/* ---- resources ---------------------------------------------------------- */

/* epsilon <= 0 and hard_cap <= 0 select the defaults (1e-12, 256). */
CVT_API cvt_status cvt_resource_create(cvt_resource_kind kind, double lambda, double epsilon,
                                       int hard_cap, cvt_resource** out);
CVT_API void cvt_resource_destroy(cvt_resource* res);

CVT_API cvt_status cvt_resource_info(const cvt_resource* res, cvt_resource_kind* kind,
                                     double* lambda, int* offset, size_t* n_coeffs,
                                     double* tail_mass);

/* Schmidt coefficients c_0..; *written receives the count copied. */
CVT_API cvt_status cvt_resource_coeffs(const cvt_resource* res, double* out, size_t capacity,
                                       size_t* written);

/* Photon-number probabilities indexed by Fock level, starting at 0. */
CVT_API cvt_status cvt_resource_photon_distribution(const cvt_resource* res, double* out,
                                                    size_t capacity, size_t* written);

/* base2 != 0 reports the entropy in bits instead of nats. */
CVT_API cvt_status cvt_resource_entropy(const cvt_resource* res, int base2, double* out);

/* Joint phase-sum density at phi in [-pi, pi], normalized to unit integral. */
CVT_API cvt_status cvt_resource_phase_density(const cvt_resource* res, double phi, double* out);

/* Heralding probability of the conditioning coincidence; *perturbative_ok is
 * cleared when the second-order expansion is no longer trustworthy. */
CVT_API cvt_status cvt_herald_probability(double theta, double lambda, double* out,
                                          int* perturbative_ok);

/* ---- x-/p+ teleportation ------------------------------------------------ */

/* P(beta) and F(beta); closed forms when available, numeric otherwise. */
CVT_API cvt_status cvt_teleport_point(const cvt_resource* res, const cvt_input_state* input,
                                      cvt_complex beta, double gain,
                                      const cvt_input_state* comparison,
                                      cvt_point* out);

/* Average fidelity with an order-doubling error estimate. quad may be NULL. */
CVT_API cvt_status cvt_average_fidelity(const cvt_resource* res, const cvt_input_state* input,
                                        double gain, const cvt_input_state* comparison,
                                        const cvt_quad_options* quad, double* fbar, double* err);

/* Cross product of gains x gammas; fbar/err arrays hold n_gains*n_gammas
 * entries in gain-major order. *argmax receives the flat index of the best
 * average fidelity. */
CVT_API cvt_status cvt_gain_scan(const cvt_resource* res, const cvt_input_state* input,
                                 const double* gains, size_t n_gains, const cvt_complex* gammas,
                                 size_t n_gammas, const cvt_quad_options* quad, double* fbar,
                                 double* err, size_t* argmax);

/* Fbar(lambda) for the standard and photon-subtracted resources at unity
 * gain, comparison amplitude = alpha, plus 2/3-crossing bookkeeping. */
CVT_API cvt_status cvt_boundary_scan(cvt_complex alpha, const double* lambdas, size_t n,
                                     const cvt_quad_options* quad, double* fbar_standard,
                                     double* fbar_subtracted, cvt_boundary_summary* summary);

/* ---- number-difference / phase-sum protocol ----------------------------- */

/* Input Fock coefficients c_0..c_{capacity-1}. */
CVT_API cvt_status cvt_input_coeffs(const cvt_input_state* input, cvt_complex* out,
                                    size_t capacity);

/* P(k), F(k) and optionally the normalized output state (out_coeffs may be
 * NULL). k may be negative (beyond-protocol completeness extension). */
CVT_API cvt_status cvt_ndps_point(const cvt_resource* res, const cvt_input_state* input, int k,
                                  cvt_ndps_result* out, cvt_complex* out_coeffs, size_t capacity,
                                  size_t* written);

/* ---- verification ------------------------------------------------------- */

/* Ground-truth teleportation point from the truncated-matrix transfer
 * operator. fidelity_defined is cleared when P(beta) vanished. */
CVT_API cvt_status cvt_oracle_point(const cvt_resource* res, const cvt_input_state* input,
                                    cvt_complex beta, double gain,
                                    const cvt_input_state* comparison, cvt_point* out,
                                    int* fidelity_defined);

/* Seeded closed-form vs oracle sweep (coherent and cat inputs, both
 * closed-form resource kinds). */
CVT_API cvt_status cvt_run_equivalence_suite(int n_cases, cvt_equivalence_summary* out);

/* Same sweep with per-case deviations copied into out (up to capacity). */
CVT_API cvt_status cvt_run_equivalence_cases(int n_cases, cvt_equivalence_case_info* out,
                                             size_t capacity, size_t* written,
                                             cvt_equivalence_summary* summary);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CVTELEPORT_H */
