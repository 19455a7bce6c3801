#pragma once

#include "lprec/types.hpp"

namespace lprec {

// (sum |x_i|^p)^(1/p) for p in (0, 2]. A quasinorm for p < 1: absolutely
// homogeneous, zero only at zero, but the triangle inequality only holds
// with constant 2^(1/p-1).
double quasinorm(const Vector& x, double p);

// sum |x_i|^p, the subadditive power form. Shared by the decoders'
// objective and the gauge of the l^p ball.
double quasinorm_pow(const Vector& x, double p);

// ||x - x_T||_p where T keeps the S largest-magnitude entries, ties going
// to the lower index. Hard thresholding attains the minimum over all
// S-sparse approximants for every entrywise p.
double best_s_term_error(const Vector& x, Index S, double p);

// 20*log10(||x||_2 / ||x - xhat||_2), capped at kSnrCapDb when the error
// drops below 1e-15 * ||x||_2.
inline constexpr double kSnrCapDb = 300.0;
double snr_db(const Vector& x, const Vector& xhat);

}  // namespace lprec
