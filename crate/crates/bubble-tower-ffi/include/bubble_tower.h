/* C interface for the bubble-tower library.
 *
 * Conventions: opaque handles behind pointers, integer status codes
 * (BT_OK = 0), out-parameters for results, one bt_*_free per
 * constructor. Out-pointers marked nullable may be NULL to skip that
 * component. All functions are thread-safe for distinct handles;
 * handles are immutable after construction and may be shared across
 * threads for read-only calls.
 */

#ifndef BUBBLE_TOWER_H
#define BUBBLE_TOWER_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define BT_OK 0
#define BT_ERR_NULL 1
#define BT_ERR_INVALID 2
#define BT_ERR_NUMERICAL 3
#define BT_ERR_IO 4
#define BT_ERR_INTERNAL 5

/* Opaque ground-state profile handle. */
typedef struct BtProfile BtProfile;

/* Opaque interaction-coefficient handle. */
typedef struct BtCoefficients BtCoefficients;

/* Version string of the underlying library; static storage. */
const char *bt_version(void);

/* Static description of a status code. */
const char *bt_error_message(int32_t code);

/* Solves the ground state of -ΔU + U = U^p in dimension n_dim,
 * bisecting the shooting value to width tol. On success *out receives
 * a heap handle; release it with bt_profile_free. */
int32_t bt_profile_solve(uint32_t n_dim, double p, double tol, BtProfile **out);

/* (U, U', U'') at radius r >= 0. Out-pointers nullable. */
int32_t bt_profile_eval(const BtProfile *handle, double r, double *u,
                        double *du, double *ddu);

/* U(0), the decay constant C0, and the tail-switch radius. */
int32_t bt_profile_info(const BtProfile *handle, double *shoot_value,
                        double *c0, double *r_match);

void bt_profile_free(BtProfile *handle);

/* Interaction coefficients A1 = a1 ∫U², A2 = (1-2/(p+1)) ∫U^(p+1),
 * B1 = C0 ∫U^p e^(-y1) by quadrature against the profile. */
int32_t bt_coefficients_compute(const BtProfile *profile, double a1,
                                BtCoefficients **out);

int32_t bt_coefficients_get(const BtCoefficients *handle, double *a1_coeff,
                            double *a2_coeff, double *b1_coeff,
                            double *err_estimate);

void bt_coefficients_free(BtCoefficients *handle);

/* Reduced tower energy F(r,h) and its exact gradient for k bubbles per
 * layer and potential tail exponent m (requires m > max(4/(p-1), 4)
 * and the profile dimension >= 3). Out-pointers nullable. */
int32_t bt_reduced_energy(const BtCoefficients *coeffs, double m, uint64_t k,
                          double r, double h, double *value, double *d_dr,
                          double *d_dh);

/* Interior critical point (r*, h*) of F with its relative gradient
 * residual. */
int32_t bt_find_critical_point(const BtCoefficients *coeffs, double m,
                               uint64_t k, double *r_star, double *h_star,
                               double *grad_residual);

/* Non-degeneracy verdict for the single bubble: *pass receives 1 when
 * the kernel is exactly the translation sector, 0 otherwise. */
int32_t bt_nondegeneracy_check(const BtProfile *profile, int32_t *pass);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* BUBBLE_TOWER_H */
