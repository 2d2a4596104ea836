#pragma once

namespace lcmle {

/// Derivative order (a, b) of the segment kernel; only a + b <= 2 is supported.
struct JDeriv {
    int a = 0;
    int b = 0;
};

/// J(r, s) = \int_0^1 exp((1-t) r + t s) dt, the integral of exp over a unit
/// segment with endpoint log-values r and s. Strictly positive, symmetric,
/// and smooth across the diagonal r = s. Throws std::domain_error on
/// non-finite input.
double j(double r, double s);

/// J_ab(r, s) = \int_0^1 (1-t)^a t^b exp((1-t) r + t s) dt with a + b <= 2.
///
/// Evaluated as exp(min(r, s)) times a function of the span |s - r|. Near the
/// diagonal a fourth-degree series in the span replaces the closed form; the
/// switchover spans are 0.005 (a + b = 0), 0.01 (a + b = 1), 0.02 (a + b = 2).
/// J_01 and J_02 are obtained from J_10 and J_20 with swapped arguments.
double j_deriv(JDeriv d, double r, double s);

inline double j10(double r, double s) { return j_deriv({1, 0}, r, s); }
inline double j01(double r, double s) { return j_deriv({0, 1}, r, s); }
inline double j20(double r, double s) { return j_deriv({2, 0}, r, s); }
inline double j02(double r, double s) { return j_deriv({0, 2}, r, s); }
inline double j11(double r, double s) { return j_deriv({1, 1}, r, s); }

}  // namespace lcmle
