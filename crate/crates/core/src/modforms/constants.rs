//! Frozen normalizations for the weight-3 Eisenstein pair on Gamma^1(5).
//!
//! `G = sum_{n>=1} (sum_{d|n} chi(d) d^2) q^n + c_0` with `chi(2) = i` the
//! odd quartic character mod 5. The pinned `E2` is `ALPHA * Re G + BETA * Im G`,
//! i.e. `E2 = 1 + sum_n (sum_{d|n} eps(d) d^2) x^n` with `x = q^(1/5)` and
//! `eps` below. `E1 = t E2` with `t = x prod (1 - x^m)^(5 (m|5))`.
//!
//! The elliptic surface is written in the parameter `T = MODEL_PARAMETER_SIGN * t`;
//! with `T = -t` its functional invariant `c4(T)^3 / (T^5 (T^2 - 11T - 1))`
//! matches `E4^3 / Delta` identically. `T = +t` already fails at the first
//! coefficient.

pub const ALPHA: i64 = -2;
pub const BETA: i64 = -1;

/// `eps(d mod 5)` for `d = 0, 1, 2, 3, 4`.
pub const EPS: [i64; 5] = [0, -2, -1, 1, 2];

/// `T = MODEL_PARAMETER_SIGN * t` on the surface.
pub const MODEL_PARAMETER_SIGN: i64 = -1;

/// Exponent of `(1 - x^m)` in `t / x`: `5 (m | 5)`.
pub fn hauptmodul_exponent(m: u64) -> i64 {
    5 * [0, 1, -1, -1, 1][(m % 5) as usize]
}

/// First coefficients of `E2`, `x^0 .. x^11`, used as a regression guard.
pub const E2_HEAD: [i64; 12] = [1, -2, -6, 7, 26, -2, -69, -51, 90, 169, -6, -244];

/// First coefficients of `t`, `x^0 .. x^6`.
pub const T_HEAD: [i64; 7] = [0, 1, -5, 15, -30, 40, -26];
