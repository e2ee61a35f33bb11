//! Exact arithmetic in the cubic field Q(L), where L ~ 1.8392867552141612 is
//! the real root of t^3 = t^2 + t + 1 (the tribonacci constant).
//!
//! Elements are stored on the power basis {1, L, L^2} with rational
//! coefficients, so equality of values is coefficient equality. L is a unit:
//! L * (L^2 - L - 1) = 1, which means powers L^e keep integer coefficients
//! for negative e as well — the series in `distribution` rely on that.
//!
//! Decimal output never goes through floating point. A value is first
//! bracketed by an [`Enclosure`] (rational endpoints certified by sign checks
//! of the minimal polynomial) and then printed from the enclosure.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{cmp_flat, decimal_ceil, decimal_floor, decimal_round, Rational};

/// An element of Q(L) as `c[0] + c[1]*L + c[2]*L^2`.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct CubicNumber {
    c: [Rational; 3],
}

fn rz() -> Rational {
    Rational::zero()
}

impl CubicNumber {
    pub fn new(c0: Rational, c1: Rational, c2: Rational) -> Self {
        CubicNumber { c: [c0, c1, c2] }
    }

    pub fn zero() -> Self {
        CubicNumber::new(rz(), rz(), rz())
    }

    pub fn one() -> Self {
        CubicNumber::from_int(1)
    }

    pub fn lambda() -> Self {
        CubicNumber::new(rz(), Rational::one(), rz())
    }

    pub fn from_int(n: i64) -> Self {
        CubicNumber::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(r: Rational) -> Self {
        CubicNumber::new(r, rz(), rz())
    }

    pub fn coeff(&self, i: usize) -> &Rational {
        &self.c[i]
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    /// True when the value is rational (no L or L^2 component).
    pub fn is_rational(&self) -> bool {
        self.c[1].is_zero() && self.c[2].is_zero()
    }

    /// The value with integer coordinates `c` in the basis (1, L, L^2).
    pub(crate) fn from_int_coords(c: [BigInt; 3]) -> Self {
        let [c0, c1, c2] = c;
        CubicNumber::new(
            Rational::from(c0),
            Rational::from(c1),
            Rational::from(c2),
        )
    }

    /// L^e for any integer exponent.
    pub fn lambda_pow(e: i64) -> Self {
        let base = if e >= 0 {
            Self::lambda()
        } else {
            // L^-1 = L^2 - L - 1
            CubicNumber::new(-Rational::one(), -Rational::one(), Rational::one())
        };
        let mut acc = Self::one();
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &sq;
            }
            k >>= 1;
            if k > 0 {
                sq = &sq * &sq;
            }
        }
        acc
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CubicNumber::new(&self.c[0] * r, &self.c[1] * r, &self.c[2] * r)
    }

    /// Multiplicative inverse. Fails only at zero.
    pub fn inv(&self) -> Result<Self> {
        // Solve (mult-by-self) * v = 1 by Cramer. The matrix columns are
        // self * L^k for k = 0, 1, 2.
        let m0 = self.c.clone();
        let m1 = shift(&m0);
        let m2 = shift(&m1);
        let det = det3(&m0, &m1, &m2);
        if det.is_zero() {
            return Err(Error::Domain("division by zero in Q(L)".into()));
        }
        let e0 = [Rational::one(), rz(), rz()];
        let x0 = det3(&e0, &m1, &m2) / &det;
        let x1 = det3(&m0, &e0, &m2) / &det;
        let x2 = det3(&m0, &m1, &e0) / &det;
        Ok(CubicNumber::new(x0, x1, x2))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e >= 0 { self.clone() } else { self.inv()? };
        let mut acc = Self::one();
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &sq;
            }
            k >>= 1;
            if k > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    /// Exact sign of the real value.
    pub fn sign(&self) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        if self.is_rational() {
            return self.c[0].cmp(&rz());
        }
        // The value is a nonzero element of a field, hence a nonzero real;
        // a tight enough enclosure must eventually exclude zero.
        let mut bits = 32;
        loop {
            let e = self.enclose(bits);
            if e.lo.is_positive() {
                return Ordering::Greater;
            }
            if e.hi.is_negative() {
                return Ordering::Less;
            }
            bits *= 2;
        }
    }

    /// Certified enclosure of the value with width at most `2^-bits`.
    pub fn enclose(&self, bits: u32) -> Enclosure {
        if self.is_rational() {
            return Enclosure {
                lo: self.c[0].clone(),
                hi: self.c[0].clone(),
            };
        }
        // Width of c0 + c1*I + c2*I^2 over an interval I of width w around L
        // is at most w * (|c1| + |c2| * (hi + lo)) <= w * (|c1| + 4|c2|).
        let mag = Rational::one() + self.c[1].abs() + self.c[2].abs() * Rational::from_integer(4.into());
        let lam_bits = bits + 3 + ceil_log2(&mag);
        let lam = lambda_refined(lam_bits);
        let sq = Enclosure {
            lo: &lam.lo * &lam.lo,
            hi: &lam.hi * &lam.hi,
        };
        let t1 = scale_interval(&self.c[1], &lam);
        let t2 = scale_interval(&self.c[2], &sq);
        let lo = &self.c[0] + &t1.lo + &t2.lo;
        let hi = &self.c[0] + &t1.hi + &t2.hi;
        // Round outward to the dyadic grid 2^-(bits+2) to keep endpoints small.
        let k = bits + 2;
        Enclosure {
            lo: dyadic_floor(&lo, k),
            hi: dyadic_ceil(&hi, k),
        }
    }

    /// Enclosure tight relative to the value's own magnitude: zero is
    /// excluded (certifying the sign) and the width is at most
    /// 2^-rel_bits times the smaller endpoint magnitude. Use this where
    /// values can span many orders of magnitude, e.g. difference quotients
    /// that decay like large negative powers of L; a fixed absolute width
    /// would straddle zero there. Exact rationals come back as points.
    pub fn enclose_signif(&self, rel_bits: u32) -> Enclosure {
        if self.is_rational() {
            return self.enclose(rel_bits);
        }
        let scale = Rational::from_integer(BigInt::one() << rel_bits);
        // the value can be as small as ~1/coefficient-magnitude (large
        // coordinates cancelling), so start the precision there instead of
        // discovering it by doubling
        let coeff_bits = self
            .c
            .iter()
            .map(|r| (r.numer().bits() as i64 - r.denom().bits() as i64).max(0) as u32)
            .max()
            .unwrap_or(0);
        let mut bits = (rel_bits + coeff_bits).max(32);
        loop {
            let e = self.enclose(bits);
            if e.lo.is_positive() || e.hi.is_negative() {
                let inner = if e.lo.is_positive() {
                    e.lo.clone()
                } else {
                    -e.hi.clone()
                };
                if cmp_flat(&(e.width() * &scale), &inner) != Ordering::Greater {
                    return e;
                }
            }
            // irrational, hence nonzero: refinement must terminate
            bits = bits.saturating_mul(2);
        }
    }

    /// Decimal string correct to within one unit in the last printed digit.
    pub fn to_decimal(&self, digits: u32) -> String {
        let bits = ((digits as f64 + 2.0) * std::f64::consts::LOG2_10).ceil() as u32 + 2;
        let e = self.enclose(bits);
        decimal_round(&e.mid(), digits)
    }

    /// Convenience float approximation (not certified; display only).
    pub fn to_f64(&self) -> f64 {
        self.enclose(64).mid().to_f64().unwrap_or(f64::NAN)
    }
}

fn shift(v: &[Rational; 3]) -> [Rational; 3] {
    [v[2].clone(), &v[0] + &v[2], &v[1] + &v[2]]
}

fn det3(c0: &[Rational; 3], c1: &[Rational; 3], c2: &[Rational; 3]) -> Rational {
    &c0[0] * (&c1[1] * &c2[2] - &c1[2] * &c2[1])
        - &c1[0] * (&c0[1] * &c2[2] - &c0[2] * &c2[1])
        + &c2[0] * (&c0[1] * &c1[2] - &c0[2] * &c1[1])
}

fn scale_interval(c: &Rational, i: &Enclosure) -> Enclosure {
    if c.is_negative() {
        Enclosure {
            lo: c * &i.hi,
            hi: c * &i.lo,
        }
    } else {
        Enclosure {
            lo: c * &i.lo,
            hi: c * &i.hi,
        }
    }
}

/// Smallest k with 2^k >= r, for r >= 0.
fn ceil_log2(r: &Rational) -> u32 {
    let c = r.ceil();
    c.numer().bits() as u32
}

fn dyadic_floor(r: &Rational, k: u32) -> Rational {
    let f = (r.numer() << k).div_floor(r.denom());
    Rational::new(f, BigInt::one() << k)
}

fn dyadic_ceil(r: &Rational, k: u32) -> Rational {
    let f = (r.numer() << k).div_ceil(r.denom());
    Rational::new(f, BigInt::one() << k)
}

impl fmt::Display for CubicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*L + {}*L^2", self.c[0], self.c[1], self.c[2])
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $imp:expr) => {
        impl $trait<&CubicNumber> for &CubicNumber {
            type Output = CubicNumber;
            fn $method(self, rhs: &CubicNumber) -> CubicNumber {
                let f: fn(&CubicNumber, &CubicNumber) -> CubicNumber = $imp;
                f(self, rhs)
            }
        }
        impl $trait<CubicNumber> for CubicNumber {
            type Output = CubicNumber;
            fn $method(self, rhs: CubicNumber) -> CubicNumber {
                $trait::$method(&self, &rhs)
            }
        }
        impl $trait<&CubicNumber> for CubicNumber {
            type Output = CubicNumber;
            fn $method(self, rhs: &CubicNumber) -> CubicNumber {
                $trait::$method(&self, rhs)
            }
        }
        impl $trait<CubicNumber> for &CubicNumber {
            type Output = CubicNumber;
            fn $method(self, rhs: CubicNumber) -> CubicNumber {
                $trait::$method(self, &rhs)
            }
        }
    };
}

fn add_impl(a: &CubicNumber, b: &CubicNumber) -> CubicNumber {
    CubicNumber::new(&a.c[0] + &b.c[0], &a.c[1] + &b.c[1], &a.c[2] + &b.c[2])
}

fn sub_impl(a: &CubicNumber, b: &CubicNumber) -> CubicNumber {
    CubicNumber::new(&a.c[0] - &b.c[0], &a.c[1] - &b.c[1], &a.c[2] - &b.c[2])
}

fn mul_impl(a: &CubicNumber, b: &CubicNumber) -> CubicNumber {
    // Convolve, then reduce with L^3 = 1 + L + L^2 and L^4 = 1 + 2L + 2L^2.
    let t0 = &a.c[0] * &b.c[0];
    let t1 = &a.c[0] * &b.c[1] + &a.c[1] * &b.c[0];
    let t2 = &a.c[0] * &b.c[2] + &a.c[1] * &b.c[1] + &a.c[2] * &b.c[0];
    let t3 = &a.c[1] * &b.c[2] + &a.c[2] * &b.c[1];
    let t4 = &a.c[2] * &b.c[2];
    CubicNumber::new(
        &t0 + &t3 + &t4,
        &t1 + &t3 + &t4 + &t4,
        &t2 + &t3 + &t4 + &t4,
    )
}

forward_binop!(Add, add, add_impl);
forward_binop!(Sub, sub, sub_impl);
forward_binop!(Mul, mul, mul_impl);

/// Product of two integer coordinate triples in the basis (1, L, L^2), with
/// the same reduction as [`mul_impl`]. Z[L] is closed under this (and under
/// division by L, L being a unit), so series with integer coefficients can
/// be accumulated without any rational reduction.
pub(crate) fn int_mul(a: &[BigInt; 3], b: &[BigInt; 3]) -> [BigInt; 3] {
    let t0 = &a[0] * &b[0];
    let t1 = &a[0] * &b[1] + &a[1] * &b[0];
    let t2 = &a[0] * &b[2] + &a[1] * &b[1] + &a[2] * &b[0];
    let t3 = &a[1] * &b[2] + &a[2] * &b[1];
    let t4 = &a[2] * &b[2];
    [
        &t0 + &t3 + &t4,
        &t1 + &t3 + &t4 + &t4,
        &t2 + &t3 + &t4 + &t4,
    ]
}

/// Integer coordinates of L^-e for e >= 0, by binary powering of
/// L^-1 = -1 - L + L^2.
pub(crate) fn lambda_neg_pow_int(e: u128) -> [BigInt; 3] {
    let mut acc = [BigInt::one(), BigInt::zero(), BigInt::zero()];
    let mut sq = [-BigInt::one(), -BigInt::one(), BigInt::one()];
    let mut k = e;
    while k > 0 {
        if k & 1 == 1 {
            acc = int_mul(&acc, &sq);
        }
        k >>= 1;
        if k > 0 {
            sq = int_mul(&sq, &sq);
        }
    }
    acc
}

impl Neg for &CubicNumber {
    type Output = CubicNumber;
    fn neg(self) -> CubicNumber {
        CubicNumber::new(-&self.c[0], -&self.c[1], -&self.c[2])
    }
}

impl Neg for CubicNumber {
    type Output = CubicNumber;
    fn neg(self) -> CubicNumber {
        -&self
    }
}

impl PartialOrd for CubicNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CubicNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).sign()
    }
}

/// A closed interval with rational endpoints, `lo <= hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: Rational,
    pub hi: Rational,
}

impl Enclosure {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    /// Decimal endpoint strings rounded outward (lo down, hi up).
    pub fn decimal_bounds(&self, digits: u32) -> (String, String) {
        (
            decimal_floor(&self.lo, digits),
            decimal_ceil(&self.hi, digits),
        )
    }
}

fn poly(t: &Rational) -> Rational {
    // t^3 - t^2 - t - 1, Horner form
    ((t - Rational::one()) * t - Rational::one()) * t - Rational::one()
}

fn poly_deriv(t: &Rational) -> Rational {
    (Rational::from_integer(3.into()) * t - Rational::from_integer(2.into())) * t - Rational::one()
}

/// Certified enclosure of L by pure bisection, width at most `2^-bits`.
///
/// The bracket invariant is p(lo) < 0 < p(hi) for p(t) = t^3 - t^2 - t - 1;
/// p has no rational roots, so midpoint signs are always strict.
pub fn lambda_enclosure(bits: u32) -> Enclosure {
    let mut lo = Rational::one();
    let mut hi = Rational::from_integer(2.into());
    for _ in 0..bits {
        let m = (&lo + &hi) / Rational::from_integer(2.into());
        if poly(&m).is_negative() {
            lo = m;
        } else {
            hi = m;
        }
    }
    Enclosure { lo, hi }
}

// Enclosure of L plus the number of bits it is certified to: width <= 2^-bits.
// The counter exists so that a satisfied request is answered by an integer
// comparison; measuring the width of endpoints another caller refined to tens
// of thousands of bits costs more than the work being guarded.
static LAMBDA_CACHE: Mutex<Option<(Enclosure, u32)>> = Mutex::new(None);

/// Shared, monotonically refined enclosure of L. Refinement is a guarded
/// Newton iteration: each candidate interval is accepted only after exact
/// sign checks of p at its endpoints, with bisection as the fallback, so
/// correctness never depends on a convergence estimate.
pub(crate) fn lambda_refined(bits: u32) -> Enclosure {
    // refine slightly past the request, then hand back a dyadic copy rounded
    // to it: callers must not drag the cache's full precision (which another
    // caller may have pushed far higher) through their own arithmetic
    let fine = bits + 2;
    let mut guard = LAMBDA_CACHE.lock().unwrap();
    let state = guard.get_or_insert_with(|| (lambda_enclosure(8), 8));
    if state.1 >= fine {
        return Enclosure {
            lo: dyadic_floor(&state.0.lo, fine),
            hi: dyadic_ceil(&state.0.hi, fine),
        };
    }
    let enc = &mut state.0;
    let target = Rational::new(BigInt::one(), BigInt::one() << fine);
    while cmp_flat(&enc.width(), &target) == Ordering::Greater {
        let w = enc.width();
        // roughly -log2(w); w < 1 always holds here
        let cur_bits = (w.denom().bits() as i64 - w.numer().bits() as i64).max(1) as u32;
        let k = (2 * cur_bits + 8).min(bits + 8).max(cur_bits + 4);
        let m = enc.mid();
        // Newton correction p(m)/p'(m), floored at k dyadic bits as pure
        // integer arithmetic: a Ratio division would reduce by a gcd of
        // operands this wide, which dwarfs everything else in the loop. The
        // sign checks below keep correctness independent of its accuracy.
        let pm = poly(&m);
        let pd = poly_deriv(&m);
        let corr_num = pm.numer() * pd.denom();
        let corr_den = pm.denom() * pd.numer();
        let f = (m.numer() << k).div_floor(m.denom()) - (corr_num << k).div_floor(&corr_den);
        let denom = BigInt::one() << k;
        let cand_lo = Rational::new(&f - BigInt::from(2), denom.clone());
        let cand_hi = Rational::new(f + BigInt::from(3), denom);
        if cmp_flat(&cand_lo, &enc.lo) == Ordering::Greater
            && cmp_flat(&cand_hi, &enc.hi) == Ordering::Less
            && poly(&cand_lo).is_negative()
            && poly(&cand_hi).is_positive()
        {
            enc.lo = cand_lo;
            enc.hi = cand_hi;
        } else {
            if poly(&m).is_negative() {
                enc.lo = m;
            } else {
                enc.hi = m;
            }
        }
    }
    state.1 = fine;
    Enclosure {
        lo: dyadic_floor(&state.0.lo, fine),
        hi: dyadic_ceil(&state.0.hi, fine),
    }
}
