//! Brute-force empirical distribution functions over the enumerated level
//! sets, convergence measurement against the exact values, the exact
//! mediant-ratio audit over Stern-Brocot rows, and difference-quotient
//! probes of the (vanishing) derivative.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cubic::Enclosure;
use crate::distribution::{f0_exact, f_exact};
use crate::error::{Error, Result};
use crate::rational::{decimal_ceil, decimal_floor, decimal_round, Rational};
use crate::tree::{level_sets, ratio_report, stern_brocot_level, RatioReport};

/// A sorted sample supporting exact CDF queries.
#[derive(Clone, Debug)]
pub struct SampleCdf {
    points: Vec<Rational>,
}

impl SampleCdf {
    pub fn new(mut points: Vec<Rational>) -> SampleCdf {
        points.sort();
        SampleCdf { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    /// Number of sample points <= x (ties count, per exact comparison).
    pub fn count_le(&self, x: &Rational) -> usize {
        self.points.partition_point(|p| p <= x)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.points.binary_search(x).is_ok()
    }

    /// Empirical CDF value #{p <= x} / len, exactly (0 on an empty sample).
    pub fn value_at(&self, x: &Rational) -> Rational {
        if self.points.is_empty() {
            return Rational::zero();
        }
        Rational::new(BigInt::from(self.count_le(x)), BigInt::from(self.len()))
    }
}

/// The set of all interior rationals of level at most n, sorted.
pub fn y_set(n: u64) -> Result<Vec<Rational>> {
    let mut all: Vec<Rational> = level_sets(n)?.into_iter().flatten().collect();
    all.sort();
    Ok(all)
}

/// The reflected set {1 - xi : xi of level <= n-1} together with 1 itself;
/// this realizes the set behind the form-one empirical CDF without a second
/// enumeration pass. 0 is not a member. Requires n >= 1.
pub fn m_set(n: u64) -> Result<Vec<Rational>> {
    if n == 0 {
        return Err(Error::Domain("the form-one sample starts at n = 1".into()));
    }
    let mut pts: Vec<Rational> = y_set(n - 1)?
        .into_iter()
        .map(|x| Rational::one() - x)
        .collect();
    pts.push(Rational::one());
    pts.sort();
    Ok(pts)
}

/// Empirical form-zero CDF: #{xi of level <= n : xi <= x} divided by the
/// sample size. Requires n >= 1.
pub fn empirical_f0(n: u64, x: &Rational) -> Result<Rational> {
    if n == 0 {
        return Err(Error::Domain("the sample starts at n = 1".into()));
    }
    Ok(SampleCdf::new(y_set(n)?).value_at(x))
}

/// Empirical form-one CDF over the reflected sample of [`m_set`];
/// in particular the value at 0 is 0 (0 is not in the sample).
pub fn empirical_f(n: u64, x: &Rational) -> Result<Rational> {
    Ok(SampleCdf::new(m_set(n)?).value_at(x))
}

/// One grid point at one sample depth, with the exact value as an enclosure
/// and a certified bound on |empirical - exact|.
#[derive(Clone, Debug)]
pub struct ConvergenceRow {
    pub n: u64,
    pub x: Rational,
    pub empirical: Rational,
    pub exact: Enclosure,
    pub abs_error_bound: Rational,
}

/// Empirical-vs-exact rows for every n in 1..=max_n and every grid point,
/// in that order (row count = max_n * grid length). The grid must lie in
/// [0,1]. One enumeration serves all depths.
pub fn convergence_table(max_n: u64, grid: &[Rational]) -> Result<Vec<ConvergenceRow>> {
    if max_n == 0 {
        return Err(Error::Domain("need max_n >= 1".into()));
    }
    for x in grid {
        if x < &Rational::zero() || x > &Rational::one() {
            return Err(Error::Domain(format!("grid point {x} is outside [0, 1]")));
        }
    }
    let sets = level_sets(max_n)?;
    let exact: Vec<Enclosure> = grid
        .iter()
        .map(|x| Ok(f0_exact(x)?.enclose(64)))
        .collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(grid.len() * max_n as usize);
    let mut sample: Vec<Rational> = Vec::new();
    for (i, set) in sets.into_iter().enumerate() {
        let n = i as u64 + 1;
        sample.extend(set);
        sample.sort();
        let cdf = SampleCdf {
            points: std::mem::take(&mut sample),
        };
        for (x, enc) in grid.iter().zip(&exact) {
            let emp = cdf.value_at(x);
            let bound = std::cmp::max(
                (&emp - &enc.lo).abs(),
                (&emp - &enc.hi).abs(),
            );
            rows.push(ConvergenceRow {
                n,
                x: x.clone(),
                empirical: emp,
                exact: enc.clone(),
                abs_error_bound: bound,
            });
        }
        sample = cdf.points;
    }
    Ok(rows)
}

/// Largest abs_error_bound per depth n, ascending in n.
pub fn max_error_by_n(rows: &[ConvergenceRow]) -> Vec<(u64, Rational)> {
    let mut out: Vec<(u64, Rational)> = Vec::new();
    for row in rows {
        match out.iter_mut().find(|(n, _)| *n == row.n) {
            Some((_, m)) => {
                if row.abs_error_bound > *m {
                    *m = row.abs_error_bound.clone();
                }
            }
            None => out.push((row.n, row.abs_error_bound.clone())),
        }
    }
    out.sort_by_key(|(n, _)| *n);
    out
}

/// One audited consecutive pair of a Stern-Brocot row.
#[derive(Clone, Debug)]
pub struct AuditRow {
    pub level: u32,
    pub x: Rational,
    pub y: Rational,
    pub report: RatioReport,
}

/// Exact ratio classification for every consecutive pair of row l.
pub fn mediant_ratio_audit(l: u32) -> Result<Vec<AuditRow>> {
    let row = stern_brocot_level(l)?;
    let mut out = Vec::with_capacity(row.len() - 1);
    for w in row.windows(2) {
        out.push(AuditRow {
            level: l,
            x: w[0].clone(),
            y: w[1].clone(),
            report: ratio_report(&w[0], &w[1])?,
        });
    }
    Ok(out)
}

/// Deterministic sample of `count` distinct interior rationals with
/// denominators in 10..=200, confined to (lo, hi).
pub fn seeded_rationals_within(
    count: usize,
    seed: u64,
    lo: &Rational,
    hi: &Rational,
) -> Vec<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let q: i64 = rng.gen_range(10..=200);
        let p: i64 = rng.gen_range(1..q);
        let x = Rational::new(BigInt::from(p), BigInt::from(q));
        if &x > lo && &x < hi && seen.insert(x.clone()) {
            out.push(x);
        }
    }
    out
}

/// Deterministic sample of `count` distinct rationals in (0, 1).
pub fn seeded_rationals(count: usize, seed: u64) -> Vec<Rational> {
    seeded_rationals_within(count, seed, &Rational::zero(), &Rational::one())
}

/// A symmetric difference quotient of the form-one distribution at step h,
/// as a certified enclosure of the exact field element.
#[derive(Clone, Debug)]
pub struct ProbeRow {
    pub h: Rational,
    pub quotient: Enclosure,
}

/// The schedule h = 10^-1, ..., 10^-steps.
pub fn probe_schedule(steps: u32) -> Vec<Rational> {
    (1..=steps)
        .map(|k| Rational::new(BigInt::one(), BigInt::from(10u8).pow(k)))
        .collect()
}

/// Symmetric difference quotients (F(x+h) - F(x-h)) / 2h for each step h.
/// The differences are exact in Q(L); only the final enclosure rounds.
pub fn derivative_probe(x: &Rational, steps: &[Rational]) -> Result<Vec<ProbeRow>> {
    if x <= &Rational::zero() || x >= &Rational::one() {
        return Err(Error::Domain(format!("{x} is not interior to (0, 1)")));
    }
    let mut rows = Vec::with_capacity(steps.len());
    for h in steps {
        if h <= &Rational::zero() {
            return Err(Error::Domain(format!("step {h} is not positive")));
        }
        let (a, b) = (x - h, x + h);
        if a < Rational::zero() || b > Rational::one() {
            return Err(Error::Domain(format!(
                "step {h} leaves [0, 1] around {x}"
            )));
        }
        let diff = f_exact(&b)? - f_exact(&a)?;
        let quotient = diff.scale(&(Rational::new(BigInt::one(), BigInt::from(2)) / h));
        rows.push(ProbeRow {
            h: h.clone(),
            quotient: quotient.enclose_signif(50),
        });
    }
    Ok(rows)
}

/// CSV with header `n,x,empirical,exact_lo,exact_hi,abs_error_bound`;
/// bounds are rounded outward so the printed interval still brackets.
pub fn convergence_csv(rows: &[ConvergenceRow], digits: u32) -> String {
    let mut s = String::from("n,x,empirical,exact_lo,exact_hi,abs_error_bound\n");
    for r in rows {
        let (lo, hi) = r.exact.decimal_bounds(digits);
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.n,
            r.x,
            decimal_round(&r.empirical, digits),
            lo,
            hi,
            decimal_ceil(&r.abs_error_bound, digits),
        ));
    }
    s
}

/// CSV with header `level,x,y,mediant,ratio_class,node_type`.
pub fn audit_csv(rows: &[AuditRow]) -> String {
    let mut s = String::from("level,x,y,mediant,ratio_class,node_type\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.level, r.x, r.y, r.report.mediant, r.report.class, r.report.mediant_kind,
        ));
    }
    s
}

/// CSV with header `x,h,quotient_lo,quotient_hi` (outward-rounded bounds).
pub fn probe_csv(x: &Rational, rows: &[ProbeRow], digits: u32) -> String {
    let mut s = String::from("x,h,quotient_lo,quotient_hi\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{}\n",
            x,
            r.h,
            decimal_floor(&r.quotient.lo, digits),
            decimal_ceil(&r.quotient.hi, digits),
        ));
    }
    s
}
