//! The singular distribution functions F and F0.
//!
//! For x in [0,1] with form-zero expansion [0; e1/a1, ..., el/al] put
//! E_i = prod_{j<=i} (-e_j) and A_i = (a_1 + ... + a_i) - 1. Then
//!
//! ```text
//! F0(x) = - sum_i E_i * L^{-A_i}
//! ```
//!
//! an element of Q(L) for rational x. F is the same series over the form-one
//! expansion, shifted by the constant term: F(x) = 1 - sum_i E_i * L^{-A_i},
//! which by the mirror property equals 1 - F0(1-x). Both functions are
//! continuous, strictly increasing and singular on [0,1], with F0(0) = 0,
//! F0(1) = 1, and they satisfy exact functional equations under the maps
//! x -> 1/(2n-1+x) and x -> 1/(2n+1/x); see the `check_functional_eq_*`
//! functions, which verify those identities in exact arithmetic.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::contfrac::{expand_odd_one, expand_odd_zero, Form, OddCf, OrdinaryCf};
use crate::cubic::{int_mul, lambda_neg_pow_int, CubicNumber, Enclosure};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// sum_i E_i L^{-A_i} over the given terms. Exponents A_i increase strictly;
/// the whole sum lives in Z[L], so it is accumulated on integer coordinate
/// triples (binary powering across each exponent gap) and becomes a field
/// element only at the end.
fn series_sum(terms: &[(i8, u64)]) -> CubicNumber {
    let mut acc = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
    let mut parity = 1i8;
    let mut power = [BigInt::one(), BigInt::zero(), BigInt::zero()];
    let mut first = true;
    for &(eps, a) in terms {
        let gap = if first { a - 1 } else { a };
        power = int_mul(&power, &lambda_neg_pow_int(gap as u128));
        first = false;
        parity *= -eps;
        for (slot, p) in acc.iter_mut().zip(&power) {
            if parity > 0 {
                *slot += p;
            } else {
                *slot -= p;
            }
        }
    }
    CubicNumber::from_int_coords(acc)
}

/// F0(x) for rational x in [0,1], exactly.
pub fn f0_exact(x: &Rational) -> Result<CubicNumber> {
    let cf = expand_odd_zero(x)?;
    Ok(-series_sum(&cf.terms))
}

/// F(x) for rational x in [0,1], exactly.
pub fn f_exact(x: &Rational) -> Result<CubicNumber> {
    let cf = expand_odd_one(x)?;
    Ok(CubicNumber::one() - series_sum(&cf.terms))
}

/// L/(L-1), the sup of sum_{m >= 1} L^{-m} tails used in the enclosure bound.
fn tail_constant() -> CubicNumber {
    let lm1 = CubicNumber::lambda() - CubicNumber::one();
    CubicNumber::lambda()
        .div(&lm1)
        .expect("L - 1 is not zero")
}

/// Certified enclosure of every possible completion of a form-zero prefix.
///
/// The terms must satisfy the expansion constraints except the terminal rule
/// (truncations are allowed to end anywhere). Any completion appends terms
/// whose exponents exceed A_k, so its series differs from the partial sum by
/// at most sum_{m > A_k} L^{-m} = L^{-(A_k+1)} * L/(L-1). The result is that
/// window intersected with [0,1], widened by at most 2^-bits per endpoint by
/// the enclosure step.
pub fn f0_numeric(prefix: &OddCf, bits: u32) -> Result<Enclosure> {
    if prefix.form != Form::Zero {
        return Err(Error::Domain("numeric evaluation expects form zero".into()));
    }
    prefix.validate_prefix()?;
    let partial = -series_sum(&prefix.terms);
    let sum_a: u64 = prefix.terms.iter().map(|&(_, a)| a).sum();
    let exponent = i64::try_from(sum_a)
        .map_err(|_| Error::Resource("prefix quotient sum exceeds i64".into()))?;
    // A_k + 1 = sum of the quotients (A_k itself is that sum minus one)
    let tail = CubicNumber::lambda_pow(-exponent) * tail_constant();
    let lo = (&partial - &tail).enclose(bits).lo;
    let hi = (&partial + &tail).enclose(bits).hi;
    Ok(Enclosure {
        lo: lo.max(Rational::zero()),
        hi: hi.min(Rational::one()),
    })
}

/// F(x) computed from an ordinary continued fraction of x, without ever
/// forming the odd expansion of x itself.
///
/// Writing F(x) = 1 - F0(1-x), the complement 1-x has the reflected
/// quotient list, and F0 of a quotient list is folded front-to-back with
/// three exact reduction steps (head quotient b, accumulated factor s*L^-P):
///
/// * b odd:      F0([0; b, rest])  = L^{-(b-1)} - L^{-b} F0([0; rest])
/// * b even >=4: F0([0; b, rest])  = L^{-(b-2)} * F0([0; 2, rest])
/// * b == 2:     F0([0; 2, rest])  = L^{-2} + L^{-3} * F0(1 - [0; rest])
///
/// The first two are the functional equations at x -> 1/(b-1+x) and
/// x -> 1/(b-2 + 1/x); the third follows from how the expansion of 1/(2+y)
/// splices the form-zero expansion of 1-y after a leading quotient 3.
/// Reflection (the quotient-list image of y -> 1-y) is:
/// [] <-> [1], [1, c, ...] <-> [c+1, ...], [c >= 2, ...] <-> [1, c-1, ...].
pub fn f_from_ordinary(cf: &OrdinaryCf) -> Result<CubicNumber> {
    match (cf.b0, cf.quots.is_empty()) {
        (0, _) => {}
        (1, true) => return Ok(CubicNumber::one()),
        _ => {
            return Err(Error::Domain(
                "F is defined on [0, 1] (b0 = 0, or [1; ])".into(),
            ))
        }
    }
    if cf.quots.iter().any(|&a| a == 0) {
        return Err(Error::Domain("zero partial quotient".into()));
    }
    let mut list: VecDeque<u128> = cf.quots.iter().map(|&a| a as u128).collect();
    reflect(&mut list);
    Ok(CubicNumber::one() - scan(list))
}

/// In-place reflection of a quotient list: [0; reflect(c)] = 1 - [0; c].
fn reflect(list: &mut VecDeque<u128>) {
    match list.front().copied() {
        None => list.push_front(1),
        Some(1) => {
            list.pop_front();
            if let Some(front) = list.front_mut() {
                *front += 1;
            }
        }
        Some(c) => {
            *list.front_mut().unwrap() = c - 1;
            list.push_front(1);
        }
    }
}

/// F0 of [0; list] by the head reductions described on [`f_from_ordinary`].
/// Accumulates on integer coordinate triples like [`series_sum`].
fn scan(mut list: VecDeque<u128>) -> CubicNumber {
    let mut acc = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
    let mut sign = 1i8;
    let mut pending: u128 = 0; // accumulated exponent P in s * L^-P
    let mut power = [BigInt::one(), BigInt::zero(), BigInt::zero()];
    let mut power_exp: u128 = 0;
    let mut emit = |acc: &mut [BigInt; 3], sign: i8, e: u128| {
        if power_exp < e {
            power = int_mul(&power, &lambda_neg_pow_int(e - power_exp));
            power_exp = e;
        }
        for (slot, p) in acc.iter_mut().zip(&power) {
            if sign > 0 {
                *slot += p;
            } else {
                *slot -= p;
            }
        }
    };
    while let Some(b) = list.pop_front() {
        if b % 2 == 1 {
            emit(&mut acc, sign, pending + b - 1);
            sign = -sign;
            pending += b;
        } else if b >= 4 {
            pending += b - 2;
            list.push_front(2);
        } else {
            emit(&mut acc, sign, pending + 2);
            pending += 3;
            reflect(&mut list);
        }
    }
    CubicNumber::from_int_coords(acc)
}

/// Exact check of the two functional equations of F0 at rational x in [0,1]:
///
/// ```text
/// F0(x) / L^{2n-1} = L^{-(2n-2)} - F0(1/(2n-1+x))
/// F0(x) / L^{2n}   = F0(1/(2n+1/x))          (x > 0)
/// ```
pub fn check_functional_eq_f0(x: &Rational, n: u64) -> Result<bool> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let n = i64::try_from(n).map_err(|_| Error::Domain("n too large".into()))?;
    let fx = f0_exact(x)?;
    let odd_arg = Rational::one() / (Rational::from_integer((2 * n - 1).into()) + x);
    let lhs_odd = &fx * &CubicNumber::lambda_pow(-(2 * n - 1));
    let rhs_odd = CubicNumber::lambda_pow(-(2 * n - 2)) - f0_exact(&odd_arg)?;
    if lhs_odd != rhs_odd {
        return Ok(false);
    }
    if x.is_zero() {
        return Ok(true);
    }
    let even_arg = Rational::one()
        / (Rational::from_integer((2 * n).into()) + Rational::one() / x);
    let lhs_even = &fx * &CubicNumber::lambda_pow(-2 * n);
    Ok(lhs_even == f0_exact(&even_arg)?)
}

/// Exact check of the corresponding equations of F at rational x in [0,1]:
///
/// ```text
/// (1 - F(1-x)) / L^{2n-1} = L^{-(2n-2)} - 1 + F(1 - 1/(2n-1+x))
/// (1 - F(1-x)) / L^{2n}   = 1 - F(1 - 1/(2n+1/x))   (x > 0)
/// ```
pub fn check_functional_eq_f(x: &Rational, n: u64) -> Result<bool> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let n = i64::try_from(n).map_err(|_| Error::Domain("n too large".into()))?;
    let one = Rational::one;
    let base = CubicNumber::one() - f_exact(&(one() - x))?;
    let odd_arg = one() - one() / (Rational::from_integer((2 * n - 1).into()) + x);
    let lhs_odd = &base * &CubicNumber::lambda_pow(-(2 * n - 1));
    let rhs_odd =
        CubicNumber::lambda_pow(-(2 * n - 2)) - CubicNumber::one() + f_exact(&odd_arg)?;
    if lhs_odd != rhs_odd {
        return Ok(false);
    }
    if x.is_zero() {
        return Ok(true);
    }
    let even_arg =
        one() - one() / (Rational::from_integer((2 * n).into()) + one() / x);
    let lhs_even = &base * &CubicNumber::lambda_pow(-2 * n);
    Ok(lhs_even == CubicNumber::one() - f_exact(&even_arg)?)
}
