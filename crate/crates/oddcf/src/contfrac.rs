//! Continued fractions with odd partial quotients.
//!
//! Every x in [0,1] has exactly one expansion of each form
//!
//! ```text
//! x = b0 + e1/(a1 + e2/(a2 + ... + el/al))
//! ```
//!
//! where all partial quotients a_i are odd, the signs e_i are +-1, and
//! consecutive terms satisfy a_i + e_{i+1} >= 2 (a sign -1 may only follow a
//! quotient >= 3). Form zero has b0 = 0 and e1 = +1; form one has b0 = 1 and
//! e1 = -1. A terminal quotient 1 carries sign +1, except for the single-term
//! form-one expansion of 0, which is the mirror image of [0; 1/1]. The two
//! forms are reflections: the form-one expansion of x is the form-zero
//! expansion of 1-x with its leading sign flipped. Empty expansions denote
//! the endpoints: [0; ] = 0 and [1; ] = 1.
//!
//! The expansion algorithm is the Euclidean scheme of [`odd_div`]: divide,
//! forcing an odd quotient and a remainder in (-b, b], and recurse on the
//! absolute remainder while recording its sign.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Which constant term a continued fraction starts from.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Form {
    /// b0 = 0, leading sign +1.
    Zero,
    /// b0 = 1, leading sign -1.
    One,
}

/// A continued fraction with odd partial quotients. `terms` holds
/// (sign, quotient) pairs; signs are +-1 and quotients odd.
///
/// Parsing and the programmatic constructors check only that shape. Whether
/// the rep is the canonical expansion of its value (sign rule for the form,
/// a_i + e_{i+1} >= 2, terminal quotient 1 positive) is [`OddCf::validate`].
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct OddCf {
    pub form: Form,
    pub terms: Vec<(i8, u64)>,
}

impl OddCf {
    pub fn new(form: Form, terms: Vec<(i8, u64)>) -> Self {
        OddCf { form, terms }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Checks that this is a canonical expansion: shape, the leading-sign
    /// rule of the form, the follow constraint a_i + e_{i+1} >= 2, and the
    /// terminal rule (a final quotient 1 carries +1, first term aside).
    pub fn validate(&self) -> Result<()> {
        self.validate_shape()?;
        if let Some(&(s0, _)) = self.terms.first() {
            let want = match self.form {
                Form::Zero => 1,
                Form::One => -1,
            };
            if s0 != want {
                return Err(Error::Domain(format!(
                    "leading sign must be {want} for this form"
                )));
            }
        }
        self.validate_follow_constraint()?;
        if self.terms.len() >= 2 {
            let &(sl, al) = self.terms.last().unwrap();
            if al == 1 && sl != 1 {
                return Err(Error::Domain(
                    "terminal quotient 1 must carry sign +1".into(),
                ));
            }
        }
        Ok(())
    }

    /// Shape only: signs +-1, quotients odd and >= 1.
    fn validate_shape(&self) -> Result<()> {
        for &(s, a) in &self.terms {
            if s != 1 && s != -1 {
                return Err(Error::Domain(format!("sign {s} is not +-1")));
            }
            if a == 0 || a % 2 == 0 {
                return Err(Error::Domain(format!("partial quotient {a} is not odd")));
            }
        }
        Ok(())
    }

    pub(crate) fn validate_follow_constraint(&self) -> Result<()> {
        for w in self.terms.windows(2) {
            let (_, a) = w[0];
            let (s_next, _) = w[1];
            if (a as i64) + (s_next as i64) < 2 {
                return Err(Error::Domain(format!(
                    "sign -1 after partial quotient {a} violates a + e >= 2"
                )));
            }
        }
        Ok(())
    }

    /// Checks everything [`validate`](Self::validate) does except the
    /// terminal rule — the shape a truncated expansion is allowed to have.
    pub fn validate_prefix(&self) -> Result<()> {
        self.validate_shape()?;
        if let Some(&(s0, _)) = self.terms.first() {
            let want = match self.form {
                Form::Zero => 1,
                Form::One => -1,
            };
            if s0 != want {
                return Err(Error::Domain(format!(
                    "leading sign must be {want} for this form"
                )));
            }
        }
        self.validate_follow_constraint()
    }

    /// Exact value. Works on any shaped rep, canonical or not; fails only if
    /// some tail evaluates to a zero denominator (impossible for canonical
    /// expansions).
    pub fn eval(&self) -> Result<Rational> {
        let mut t = Rational::zero();
        for &(s, a) in self.terms.iter().rev() {
            let den = Rational::from_integer(BigInt::from(a)) + &t;
            if den.is_zero() {
                return Err(Error::Domain(
                    "continued fraction evaluates through a zero denominator".into(),
                ));
            }
            t = Rational::from_integer(BigInt::from(s)) / den;
        }
        Ok(match self.form {
            Form::Zero => t,
            Form::One => Rational::one() + t,
        })
    }

    /// The statistic S: the sum of all partial quotients, counting the
    /// leading unit of form one. S([0; ]) = 0, S([1; ]) = 1.
    pub fn quotient_sum(&self) -> u64 {
        let base = match self.form {
            Form::Zero => 0u64,
            Form::One => 1,
        };
        self.terms
            .iter()
            .map(|&(_, a)| a)
            .try_fold(base, u64::checked_add)
            .expect("quotient sum overflows u64")
    }

    /// First k terms, as a prefix (no terminal normalization).
    pub fn prefix(&self, k: usize) -> OddCf {
        OddCf::new(self.form, self.terms[..k.min(self.terms.len())].to_vec())
    }
}

use num_traits::One;

/// Division with an odd quotient: for a >= 1, b >= 1 returns (q, r) with
/// a = b*q + r, q odd, and r in (-b, b].
///
/// q = 2*ceil(a/2b) - 1 — the odd integer nearest a/b from the side that
/// puts the remainder in the half-open window.
pub fn odd_div(a: &BigInt, b: &BigInt) -> Result<(BigInt, BigInt)> {
    if !a.is_positive() || !b.is_positive() {
        return Err(Error::Domain(format!(
            "odd_div requires positive arguments, got ({a}, {b})"
        )));
    }
    let q = BigInt::from(2) * a.div_ceil(&(BigInt::from(2) * b)) - BigInt::one();
    let r = a - b * &q;
    Ok((q, r))
}

fn term_u64(a: &BigInt) -> Result<u64> {
    a.to_u64()
        .ok_or_else(|| Error::Resource("partial quotient exceeds u64".into()))
}

/// Form-zero expansion of x in [0,1].
pub fn expand_odd_zero(x: &Rational) -> Result<OddCf> {
    if x < &Rational::zero() || x > &Rational::one() {
        return Err(Error::Domain(format!("{x} is outside [0, 1]")));
    }
    let mut terms: Vec<(i8, u64)> = Vec::new();
    if x.numer().is_zero() {
        return Ok(OddCf::new(Form::Zero, terms));
    }
    let mut n = x.denom().clone();
    let mut d = x.numer().clone();
    let mut sign = 1i8;
    loop {
        let (q, r) = odd_div(&n, &d)?;
        terms.push((sign, term_u64(&q)?));
        if r.is_zero() {
            break;
        }
        sign = if r.is_negative() { -1 } else { 1 };
        n = d;
        d = r.abs();
    }
    Ok(OddCf::new(Form::Zero, terms))
}

/// Form-one expansion: the form-zero expansion of 1-x with the leading sign
/// flipped.
pub fn expand_odd_one(x: &Rational) -> Result<OddCf> {
    let mut cf = expand_odd_zero(&(Rational::one() - x))?;
    cf.form = Form::One;
    if let Some(first) = cf.terms.first_mut() {
        first.0 = -first.0;
    }
    Ok(cf)
}

/// An ordinary (regular) continued fraction `[b0; q1, q2, ...]`.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct OrdinaryCf {
    pub b0: u64,
    pub quots: Vec<u64>,
}

impl OrdinaryCf {
    pub fn new(b0: u64, quots: Vec<u64>) -> Self {
        OrdinaryCf { b0, quots }
    }

    pub fn eval(&self) -> Result<Rational> {
        let mut t = Rational::zero();
        for &a in self.quots.iter().rev() {
            if a == 0 {
                return Err(Error::Domain("zero partial quotient".into()));
            }
            t = Rational::one() / (Rational::from_integer(BigInt::from(a)) + &t);
        }
        Ok(Rational::from_integer(BigInt::from(self.b0)) + t)
    }
}

/// Euclidean expansion of x in [0,1] as an ordinary continued fraction.
/// Returns `[1; ]` for x = 1, otherwise `[0; q1, ..., ql]` with ql >= 2
/// (for x in the open interval).
pub fn expand_ordinary(x: &Rational) -> Result<OrdinaryCf> {
    if x < &Rational::zero() || x > &Rational::one() {
        return Err(Error::Domain(format!("{x} is outside [0, 1]")));
    }
    if x == &Rational::one() {
        return Ok(OrdinaryCf::new(1, vec![]));
    }
    let mut quots = Vec::new();
    let mut n = x.denom().clone();
    let mut d = x.numer().clone();
    while !d.is_zero() {
        let (q, r) = n.div_mod_floor(&d);
        quots.push(term_u64(&q)?);
        n = d;
        d = r;
    }
    Ok(OrdinaryCf::new(0, quots))
}

/// Rewrites an ordinary continued fraction of x in [0,1] into the canonical
/// form-zero odd expansion, without computing x.
///
/// The rewrite runs on (sign, quotient) pairs and repeatedly eliminates the
/// first even quotient c by one of three local rules:
///
/// * c is last:              `..., c          -> ..., c-1, +1/1`
/// * next quotient is 1:     `..., c, 1, c''  -> ..., c+1, -(c''+1)`
/// * next quotient is >= 2:  `..., c, c'      -> ..., c+1, -1, c'-1`
///
/// Every rule either shortens the list or moves the first even position
/// right, so the rewrite terminates; signs right of the first even position
/// stay +1, which is what makes the rules applicable verbatim.
pub fn convert_ordinary_to_odd(cf: &OrdinaryCf) -> Result<OddCf> {
    match (cf.b0, cf.quots.is_empty()) {
        (0, _) => {}
        (1, true) => return Ok(OddCf::new(Form::Zero, vec![(1, 1)])),
        _ => {
            return Err(Error::Domain(
                "conversion expects a value in [0, 1] (b0 = 0, or [1; ])".into(),
            ))
        }
    }
    if cf.quots.iter().any(|&a| a == 0) {
        return Err(Error::Domain("zero partial quotient".into()));
    }
    let mut v: Vec<(i8, u128)> = cf.quots.iter().map(|&a| (1i8, a as u128)).collect();
    loop {
        let Some(i) = v.iter().position(|&(_, a)| a % 2 == 0) else {
            break;
        };
        if i + 1 == v.len() {
            // terminal even quotient
            v[i].1 -= 1;
            v.push((1, 1));
        } else if v[i + 1].1 > 1 {
            v[i].1 += 1;
            let succ = v[i + 1].1;
            v[i + 1] = (-1, 1);
            v.insert(i + 2, (1, succ - 1));
        } else if i + 2 < v.len() {
            // ..., c, 1, c'' -> ..., c+1, -(c''+1)
            v[i].1 += 1;
            let merged = v[i + 2].1 + 1;
            v[i + 1] = (-1, merged);
            v.remove(i + 2);
        } else {
            // trailing "c, 1" is the non-canonical spelling of c+1
            v[i].1 += 1;
            v.remove(i + 1);
        }
    }
    let mut terms = Vec::with_capacity(v.len());
    for (s, a) in v {
        let a = u64::try_from(a)
            .map_err(|_| Error::Resource("partial quotient exceeds u64".into()))?;
        terms.push((s, a));
    }
    let out = OddCf::new(Form::Zero, terms);
    debug_assert!(out.validate().is_ok());
    Ok(out)
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Form::Zero => write!(f, "0"),
            Form::One => write!(f, "1"),
        }
    }
}

impl fmt::Display for OddCf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}; ", self.form)?;
        for (i, &(s, a)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if s < 0 {
                write!(f, "-")?;
            }
            write!(f, "1/{a}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for OrdinaryCf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}; ", self.b0)?;
        for (i, a) in self.quots.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "]")
    }
}

/// Splits `[b0; t1, t2, ...]` into b0 and raw term strings.
fn parse_body(s: &str) -> Result<(u64, Vec<&str>)> {
    let t = s.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|u| u.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("`{t}` is not bracketed like [b0; ...]")))?;
    let (head, tail) = inner
        .split_once(';')
        .ok_or_else(|| Error::Parse("missing `;` after the integer part".into()))?;
    let b0: u64 = head
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad integer part `{}`", head.trim())))?;
    let tail = tail.trim();
    let terms = if tail.is_empty() {
        vec![]
    } else {
        tail.split(',').map(str::trim).collect()
    };
    Ok((b0, terms))
}

impl FromStr for OddCf {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (b0, raw) = parse_body(s)?;
        let form = match b0 {
            0 => Form::Zero,
            1 => Form::One,
            _ => return Err(Error::Parse(format!("integer part {b0} must be 0 or 1"))),
        };
        let mut terms = Vec::with_capacity(raw.len());
        for (i, t) in raw.into_iter().enumerate() {
            let pos = i + 1;
            let (sign, rest) = match t.strip_prefix('-') {
                Some(rest) => (-1i8, rest),
                None => (1i8, t.strip_prefix('+').unwrap_or(t)),
            };
            let (numer, denom) = rest.split_once('/').ok_or_else(|| {
                Error::Parse(format!("term {pos} `{t}` is not of the form e/a"))
            })?;
            if numer.trim() != "1" {
                return Err(Error::Parse(format!(
                    "term {pos} `{t}` must have numerator 1 or -1"
                )));
            }
            let a: u64 = denom.trim().parse().map_err(|_| {
                Error::Parse(format!("term {pos}: bad partial quotient `{}`", denom.trim()))
            })?;
            if a == 0 || a % 2 == 0 {
                return Err(Error::Parse(format!(
                    "term {pos}: partial quotient {a} is not odd"
                )));
            }
            terms.push((sign, a));
        }
        Ok(OddCf::new(form, terms))
    }
}

impl FromStr for OrdinaryCf {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (b0, raw) = parse_body(s)?;
        let mut quots = Vec::with_capacity(raw.len());
        for (i, t) in raw.into_iter().enumerate() {
            let a: u64 = t.parse().map_err(|_| {
                Error::Parse(format!("term {}: bad partial quotient `{t}`", i + 1))
            })?;
            if a == 0 {
                return Err(Error::Parse(format!("term {}: zero partial quotient", i + 1)));
            }
            quots.push(a);
        }
        Ok(OrdinaryCf::new(b0, quots))
    }
}

/// Either kind of continued fraction, for inputs that accept both.
/// Terms containing `/` mark the odd kind; an empty body parses as ordinary.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AnyCf {
    Odd(OddCf),
    Ordinary(OrdinaryCf),
}

impl AnyCf {
    pub fn eval(&self) -> Result<Rational> {
        match self {
            AnyCf::Odd(cf) => cf.eval(),
            AnyCf::Ordinary(cf) => cf.eval(),
        }
    }
}

impl FromStr for AnyCf {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (_, raw) = parse_body(s)?;
        if raw.iter().any(|t| t.contains('/')) {
            Ok(AnyCf::Odd(s.parse()?))
        } else {
            Ok(AnyCf::Ordinary(s.parse()?))
        }
    }
}

impl fmt::Display for AnyCf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyCf::Odd(cf) => cf.fmt(f),
            AnyCf::Ordinary(cf) => cf.fmt(f),
        }
    }
}
