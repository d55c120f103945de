// Copyright 2026 The fairdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Independent oracle for the per-step Renyi divergence of the subsampled
// Gaussian mechanism. The production accountant evaluates the binomial
// series in log space; this oracle sums the series directly with exact
// binomial coefficients, in 512-bit arithmetic when MPFR is available and in
// long double otherwise. The long double version is valid for sigma >= 0.8
// and alpha <= 64, where no term overflows.

#pragma once

#include <cmath>

#ifdef FAIRDP_HAVE_MPFR
#include <gmp.h>
#include <mpfr.h>
#endif

namespace testsupport {

#ifdef FAIRDP_HAVE_MPFR

inline double oracle_rdp(double q, double sigma, int alpha) {
  const mpfr_prec_t prec = 512;
  mpfr_t sum, term, qm, one_minus_q, expo, sig;
  mpfr_inits2(prec, sum, term, qm, one_minus_q, expo, sig, (mpfr_ptr)0);
  mpfr_set_zero(sum, 1);
  mpfr_set_d(qm, q, MPFR_RNDN);
  mpfr_ui_sub(one_minus_q, 1, qm, MPFR_RNDN);
  mpfr_set_d(sig, sigma, MPFR_RNDN);
  mpz_t bin;
  mpz_init(bin);
  for (long k = 0; k <= alpha; ++k) {
    mpz_bin_uiui(bin, static_cast<unsigned long>(alpha), static_cast<unsigned long>(k));
    mpfr_set_z(term, bin, MPFR_RNDN);
    mpfr_pow_ui(expo, one_minus_q, static_cast<unsigned long>(alpha - k), MPFR_RNDN);
    mpfr_mul(term, term, expo, MPFR_RNDN);
    mpfr_pow_ui(expo, qm, static_cast<unsigned long>(k), MPFR_RNDN);
    mpfr_mul(term, term, expo, MPFR_RNDN);
    mpfr_sqr(expo, sig, MPFR_RNDN);
    mpfr_mul_ui(expo, expo, 2, MPFR_RNDN);
    mpfr_ui_div(expo, 1, expo, MPFR_RNDN);
    mpfr_mul_ui(expo, expo, static_cast<unsigned long>(k * (k - 1)), MPFR_RNDN);
    mpfr_exp(expo, expo, MPFR_RNDN);
    mpfr_mul(term, term, expo, MPFR_RNDN);
    mpfr_add(sum, sum, term, MPFR_RNDN);
  }
  mpfr_log(sum, sum, MPFR_RNDN);
  mpfr_div_ui(sum, sum, static_cast<unsigned long>(alpha - 1), MPFR_RNDN);
  const double out = mpfr_get_d(sum, MPFR_RNDN);
  mpz_clear(bin);
  mpfr_clears(sum, term, qm, one_minus_q, expo, sig, (mpfr_ptr)0);
  return out;
}

#else

inline double oracle_rdp(double q, double sigma, int alpha) {
  long double sum = 0.0L;
  __int128 binom = 1;
  for (int k = 0; k <= alpha; ++k) {
    if (k > 0) binom = binom * (alpha - k + 1) / k;  // exact: stays integral
    // __int128 to long double via two halves to keep every bit.
    const __int128 high = binom >> 62;
    const __int128 low = binom - (high << 62);
    long double term = std::ldexp(static_cast<long double>(static_cast<long long>(high)), 62) +
                       static_cast<long double>(static_cast<long long>(low));
    term *= std::pow(1.0L - static_cast<long double>(q),
                     static_cast<long double>(alpha - k));
    term *= std::pow(static_cast<long double>(q), static_cast<long double>(k));
    term *= std::exp(static_cast<long double>(k) * (k - 1) /
                     (2.0L * static_cast<long double>(sigma) * static_cast<long double>(sigma)));
    sum += term;
  }
  return static_cast<double>(std::log(sum) / (alpha - 1));
}

#endif

}  // namespace testsupport
