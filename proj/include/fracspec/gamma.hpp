#pragma once

/// Gamma-function kernels used throughout the library.
///
/// All modal formulas reduce to coefficients of the form 1/Γ(β₁k + β₂) with
/// β₂ possibly negative, so the primary object here is the *reciprocal*
/// gamma function, which is entire: it vanishes at 0, −1, −2, … and needs no
/// pole handling at call sites.
///
/// Accuracy: relative error ≤ 1e-14 on (0, 50] for gamma_fn/log_gamma
/// (verified against 60-digit references in the test suite). Internals run
/// in `long double` so the (x·ln x)·ε amplification of the power term stays
/// far below the target.

namespace fracspec {

/// Γ(x). Quiet NaN at the poles x = 0, −1, −2, …; +∞ on overflow (x ≳ 171.6).
double gamma_fn(double x);

/// ln Γ(x) for x > 0. Throws std::domain_error for x ≤ 0.
double log_gamma(double x);

/// 1/Γ(x) for any real x; exactly 0 at the poles of Γ. Saturates to ±∞ for
/// x ≲ −178 where |1/Γ| itself overflows.
double reciprocal_gamma(double x);

/// sin(πx) with argument reduction performed on x (not on πx), so the result
/// is exact at integers and accurate for large |x|.
double sin_pi(double x);

namespace detail {

/// 1/Γ(x) with a long-double argument. Series coefficients 1/Γ(β₁k + β₂)
/// must be evaluated at an argument formed in extended precision: at peak
/// Taylor-term magnitude e^M, a double-rounded argument alone injects
/// ~e^M · ψ(x) · ε_double of absolute error into the compensated sum.
long double reciprocal_gamma_l(long double x);

}  // namespace detail

}  // namespace fracspec

#if defined(FRACSPEC_USE_FLOAT128) && defined(__SIZEOF_FLOAT128__)
namespace fracspec::detail {

/// 1/Γ(x) in quadruple precision (argument included), for the
/// extended-precision series summation paths.
__float128 reciprocal_gamma_q(__float128 x);

}  // namespace fracspec::detail
#endif
