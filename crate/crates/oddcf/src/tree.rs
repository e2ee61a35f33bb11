//! The mediant tree behind the level sets of the odd expansion.
//!
//! Interior rationals of (0,1) are graded by level(x) = S0(x) - 1, where
//! S0 is the sum of the form-zero partial quotients. X_n is the set at level
//! n and Y_n its cumulative count. The whole of (0,1) cap Q organizes into a
//! binary mediant tree rooted at 1/2 (whose ancestor pair is (0/1, 1/1)):
//! each node ξ with ancestor pair (x, y) has children mediant(x, ξ) and
//! mediant(ξ, y). A node of the *first kind* (last partial quotient 1) has
//! two children one level deeper; a node of the *second kind* (last quotient
//! >= 3) has one child one level deeper and one two levels deeper.
//!
//! The counting sequences follow the tribonacci recurrence, consecutive level
//! sets are linked by an explicit bijection X_{n+2} u X_{n+1} u X_n ->
//! X_{n+3} ([`phi`]), and F maps mediant subdivision to exact ratios in
//! {L-1, 1/(L-1), L, 1/L} ([`ratio_report`]).

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::contfrac::{expand_odd_one, expand_odd_zero, Form, OddCf};
use crate::cubic::CubicNumber;
use crate::distribution::f_exact;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// level(x) = S0(x) - 1 for x in the open interval (0,1).
pub fn level(x: &Rational) -> Result<u64> {
    require_interior(x)?;
    Ok(expand_odd_zero(x)?.quotient_sum() - 1)
}

fn require_interior(x: &Rational) -> Result<()> {
    if x <= &Rational::zero() || x >= &Rational::one() {
        return Err(Error::Domain(format!("{x} is not interior to (0, 1)")));
    }
    Ok(())
}

/// The two branching kinds of tree nodes.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NodeType {
    /// Last form-zero partial quotient is 1; both children go one level down.
    First,
    /// Last form-zero partial quotient is >= 3; the children go one and two
    /// levels down.
    Second,
}

impl fmt::Display for NodeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeType::First => write!(f, "first"),
            NodeType::Second => write!(f, "second"),
        }
    }
}

/// Node type of x from its form-zero expansion.
pub fn node_type(x: &Rational) -> Result<NodeType> {
    require_interior(x)?;
    let cf = expand_odd_zero(x)?;
    Ok(kind_of(&cf))
}

fn kind_of(cf: &OddCf) -> NodeType {
    match cf.terms.last() {
        Some(&(_, 1)) => NodeType::First,
        _ => NodeType::Second,
    }
}

/// Mediant of two (automatically reduced) fractions.
pub fn mediant(x: &Rational, y: &Rational) -> Rational {
    Rational::new(x.numer() + y.numer(), x.denom() + y.denom())
}

/// A tree node with its ancestor pair: value = mediant(left, right).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TreeNode {
    pub left: Rational,
    pub value: Rational,
    pub right: Rational,
}

impl TreeNode {
    /// The root 1/2, with ancestor pair (0/1, 1/1).
    pub fn root() -> TreeNode {
        TreeNode {
            left: Rational::zero(),
            value: Rational::new(BigInt::one(), BigInt::from(2)),
            right: Rational::one(),
        }
    }

    pub fn children(&self) -> (TreeNode, TreeNode) {
        let l = mediant(&self.left, &self.value);
        let r = mediant(&self.value, &self.right);
        (
            TreeNode {
                left: self.left.clone(),
                value: l,
                right: self.value.clone(),
            },
            TreeNode {
                left: self.value.clone(),
                value: r,
                right: self.right.clone(),
            },
        )
    }
}

/// Hard cap on enumerated nodes; keeps levels up to 25 reachable while
/// refusing runaway requests with an explicit error.
pub const NODE_BUDGET: u64 = 5_000_000;

fn check_budget(nodes: &BigUint, what: &str) -> Result<()> {
    if nodes > &BigUint::from(NODE_BUDGET) {
        return Err(Error::Resource(format!(
            "{what} needs {nodes} nodes, over the budget of {NODE_BUDGET}"
        )));
    }
    Ok(())
}

/// The level sets X_1, ..., X_max, each sorted ascending. Index 0 of the
/// returned vector is X_1. Errors when the total node count Y_max would
/// exceed [`NODE_BUDGET`].
pub fn level_sets(max_level: u64) -> Result<Vec<Vec<Rational>>> {
    if max_level == 0 {
        return Ok(vec![]);
    }
    let budget_counts = level_counts(max_level);
    check_budget(
        &budget_counts.y[max_level as usize],
        &format!("enumerating levels up to {max_level}"),
    )?;
    let mut sets: Vec<Vec<Rational>> = vec![Vec::new(); max_level as usize];
    // depth-first: the pending stack stays shallow (one sibling per depth),
    // unlike a breadth-first frontier which peaks at the widest level
    let mut stack: Vec<(TreeNode, u64)> = vec![(TreeNode::root(), 1)];
    sets[0].push(TreeNode::root().value);
    while let Some((node, lv)) = stack.pop() {
        if lv >= max_level {
            continue;
        }
        let (a, b) = node.children();
        for child in [a, b] {
            let child_level = level(&child.value)?;
            debug_assert!(child_level == lv + 1 || child_level == lv + 2);
            if child_level <= max_level {
                sets[child_level as usize - 1].push(child.value.clone());
                stack.push((child, child_level));
            }
        }
    }
    for s in &mut sets {
        s.sort();
    }
    Ok(sets)
}

/// One level set X_n, sorted ascending.
pub fn level_set(n: u64) -> Result<Vec<Rational>> {
    if n == 0 {
        return Err(Error::Domain("levels start at 1".into()));
    }
    Ok(level_sets(n)?.pop().unwrap())
}

/// Counting sequences X_n, Y_n = |X_1| + ... + |X_n|, and
/// Z_n = Y_{n+1} - Y_n - 1, each indexed so that `v[n]` is the value at n
/// (entry 0 is 0). All three satisfy the tribonacci-style recurrences
/// X_{n+3} = X_{n+2} + X_{n+1} + X_n (and the Y/Z forms with +2).
pub struct LevelCounts {
    pub x: Vec<BigUint>,
    pub y: Vec<BigUint>,
    pub z: Vec<BigUint>,
}

pub fn level_counts(upto: u64) -> LevelCounts {
    let n = upto as usize;
    // X up to n+1 so that Z_n = X_{n+1} - 1 is available
    let mut x: Vec<BigUint> = Vec::with_capacity(n + 2);
    x.push(BigUint::zero());
    let seeds = [1u32, 2, 3];
    for s in seeds {
        if x.len() <= n + 1 {
            x.push(BigUint::from(s));
        }
    }
    while x.len() <= n + 1 {
        let k = x.len();
        let next = &x[k - 1] + &x[k - 2] + &x[k - 3];
        x.push(next);
    }
    let mut y = vec![BigUint::zero()];
    for i in 1..=n {
        let prev = y[i - 1].clone();
        y.push(prev + &x[i]);
    }
    let mut z = vec![BigUint::zero()];
    for i in 1..=n {
        z.push(&x[i + 1] - BigUint::one());
    }
    x.truncate(n + 1);
    LevelCounts { x, y, z }
}

/// Number of descendants of x (x included) with level at most n.
///
/// Closed form: with s = S0(x), a first-kind node has Y_{n-s+2} of them and
/// a second-kind node Z_{n-s+2}, zero when the index is not positive.
pub fn subtree_count(x: &Rational, n: u64) -> Result<BigUint> {
    require_interior(x)?;
    let cf = expand_odd_zero(x)?;
    let s = cf.quotient_sum();
    if n + 2 <= s {
        return Ok(BigUint::zero());
    }
    let idx = n + 2 - s;
    let counts = level_counts(idx);
    Ok(match kind_of(&cf) {
        NodeType::First => counts.y[idx as usize].clone(),
        NodeType::Second => counts.z[idx as usize].clone(),
    })
}

/// The two child representations a node's kind dictates, as candidate
/// expansions (in no particular child order):
///
/// * first kind: drop the terminal 1 and add 2 to the new last quotient;
///   or append +1/1
/// * second kind: append +1/1; or append -1/1, +1/1
pub fn child_rep_candidates(x: &Rational) -> Result<(OddCf, OddCf)> {
    require_interior(x)?;
    let cf = expand_odd_zero(x)?;
    let mut a = cf.terms.clone();
    let mut b = cf.terms.clone();
    match kind_of(&cf) {
        NodeType::First => {
            a.pop();
            a.last_mut()
                .expect("interior nodes of the first kind have length >= 2")
                .1 += 2;
            b.push((1, 1));
        }
        NodeType::Second => {
            a.push((1, 1));
            b.push((-1, 1));
            b.push((1, 1));
        }
    }
    Ok((OddCf::new(Form::Zero, a), OddCf::new(Form::Zero, b)))
}

/// The level-set bijection X_{n+2} u X_{n+1} u X_n -> X_{n+3} (n >= 1).
/// The image of x descends to level n+3; which rewrite applies is read off
/// from the level of x (members of X_{n+2} descend one level, of X_{n+1}
/// two, of X_n three). Images of the three source sets partition X_{n+3}.
pub fn phi(x: &Rational, n: u64) -> Result<Rational> {
    if n == 0 {
        return Err(Error::Domain("the bijection is defined for n >= 1".into()));
    }
    let lx = level(x)?;
    if !(n..=n + 2).contains(&lx) {
        return Err(Error::Domain(format!(
            "{x} has level {lx}, outside the source union for n = {n}"
        )));
    }
    let slot = (n + 3 - lx) as u8;
    phi_by_slot(x, slot)
}

fn phi_by_slot(x: &Rational, slot: u8) -> Result<Rational> {
    require_interior(x)?;
    let cf = expand_odd_zero(x)?;
    let first_kind = kind_of(&cf) == NodeType::First;
    let mut t = cf.terms;
    match (slot, first_kind) {
        (1, true) => {
            t.pop();
            t.last_mut().expect("length >= 2").1 += 2;
        }
        (1, false) => t.push((1, 1)),
        (2, true) => {
            t.push((1, 1));
            t.push((1, 1));
        }
        (2, false) => {
            t.push((-1, 1));
            t.push((1, 1));
        }
        (3, true) => {
            t.pop();
            t.last_mut().expect("length >= 2").1 += 2;
            t.push((1, 1));
            t.push((1, 1));
        }
        (3, false) => {
            t.push((-1, 1));
            t.push((1, 1));
            t.push((1, 1));
        }
        _ => return Err(Error::Domain("slot must be 1, 2, or 3".into())),
    }
    let out = OddCf::new(Form::Zero, t);
    debug_assert!(out.validate().is_ok());
    out.eval()
}

/// Inverse of [`phi`]: recovers the preimage from the tail pattern of the
/// expansion of y. Defined for y of level at least 3; how many levels were
/// descended can be read back as level(y) - level(result).
pub fn phi_inverse(y: &Rational) -> Result<Rational> {
    require_interior(y)?;
    let cf = expand_odd_zero(y)?;
    if cf.quotient_sum() - 1 < 3 {
        return Err(Error::Domain(format!(
            "{y} has level below 3; the bijection starts at X_3"
        )));
    }
    let mut t = cf.terms;
    let l = t.len();
    let last = t[l - 1];
    if last.1 > 1 {
        // undo a one-level descent on a first-kind x
        t[l - 1].1 -= 2;
        t.push((1, 1));
    } else if t[l - 2].1 > 1 {
        // undo a one-level descent on a second-kind x
        t.pop();
    } else if t[l - 2].0 < 0 {
        // tail -1/1, +1/1: undo a two-level descent on a second-kind x
        t.truncate(l - 2);
    } else if t[l - 3].1 > 1 {
        // tail a/(>=3), +1/1, +1/1: undo a three-level descent, first kind
        t.truncate(l - 2);
        t[l - 3].1 -= 2;
        t.push((1, 1));
    } else if t[l - 3].0 > 0 {
        // tail +1/1 three deep: undo a two-level descent on a first-kind x
        t.truncate(l - 3);
        t.push((1, 1));
    } else {
        // tail -1/1, +1/1, +1/1: undo a three-level descent, second kind
        t.truncate(l - 3);
    }
    let out = OddCf::new(Form::Zero, t);
    debug_assert!(out.validate().is_ok());
    out.eval()
}

/// Stern-Brocot row F_l over [0,1]: 2^l + 1 fractions, built by l rounds of
/// mediant insertion starting from {0/1, 1/1}.
pub fn stern_brocot_level(l: u32) -> Result<Vec<Rational>> {
    if l > 22 {
        // 2^l + 1 rows would blow the node budget
        return Err(Error::Resource(format!(
            "row {l} holds 2^{l} + 1 fractions, over the budget of {NODE_BUDGET}"
        )));
    }
    let mut row = vec![Rational::zero(), Rational::one()];
    for _ in 0..l {
        let mut next = Vec::with_capacity(row.len() * 2 - 1);
        for w in row.windows(2) {
            next.push(w[0].clone());
            next.push(mediant(&w[0], &w[1]));
        }
        next.push(row.last().unwrap().clone());
        row = next;
    }
    Ok(row)
}

/// The consecutive-count ratios at one index, together with their exact
/// distances to the limits they approach: Y_n/Y_{n+1} -> 1/L,
/// Z_n/Z_{n+1} -> 1/L, and Y_n/Z_n -> 1/(L-1).
#[derive(Clone, Debug)]
pub struct LimitRatios {
    pub n: u64,
    pub y_ratio: Rational,
    pub z_ratio: Rational,
    pub yz_ratio: Rational,
    /// |Y_n/Y_{n+1} - 1/L| as an exact field element (positive).
    pub y_gap: CubicNumber,
    pub z_gap: CubicNumber,
    pub yz_gap: CubicNumber,
}

/// Ratio report at index n >= 4 (below that the ratios are seed artifacts).
pub fn limit_ratios(n: u64) -> Result<LimitRatios> {
    if n < 4 {
        return Err(Error::Domain("ratio report starts at n = 4".into()));
    }
    let c = level_counts(n + 1);
    let big = |u: &BigUint| BigInt::from(u.clone());
    let ratio = |a: &BigUint, b: &BigUint| Rational::new(big(a), big(b));
    let y_ratio = ratio(&c.y[n as usize], &c.y[n as usize + 1]);
    let z_ratio = ratio(&c.z[n as usize], &c.z[n as usize + 1]);
    let yz_ratio = ratio(&c.y[n as usize], &c.z[n as usize]);
    let gap = |r: &Rational, limit: CubicNumber| {
        let d = CubicNumber::from_rational(r.clone()) - limit;
        if d.sign() == std::cmp::Ordering::Less {
            -d
        } else {
            d
        }
    };
    let inv_lambda = CubicNumber::lambda_pow(-1);
    let inv_lm1 = (CubicNumber::lambda() - CubicNumber::one())
        .inv()
        .expect("L != 1");
    Ok(LimitRatios {
        n,
        y_gap: gap(&y_ratio, inv_lambda.clone()),
        z_gap: gap(&z_ratio, inv_lambda),
        yz_gap: gap(&yz_ratio, inv_lm1),
        y_ratio,
        z_ratio,
        yz_ratio,
    })
}

/// The four exact values taken by the ratio
/// (F(m) - F(x)) / (F(y) - F(m)) at a mediant subdivision.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RatioClass {
    /// L - 1
    LambdaMinusOne,
    /// 1/(L - 1)
    LambdaMinusOneInv,
    /// L
    Lambda,
    /// 1/L
    LambdaInv,
}

impl RatioClass {
    pub fn value(self) -> CubicNumber {
        let lm1 = CubicNumber::lambda() - CubicNumber::one();
        match self {
            RatioClass::LambdaMinusOne => lm1,
            RatioClass::LambdaMinusOneInv => lm1.inv().expect("L != 1"),
            RatioClass::Lambda => CubicNumber::lambda(),
            RatioClass::LambdaInv => CubicNumber::lambda_pow(-1),
        }
    }

    pub fn all() -> [RatioClass; 4] {
        [
            RatioClass::LambdaMinusOne,
            RatioClass::LambdaMinusOneInv,
            RatioClass::Lambda,
            RatioClass::LambdaInv,
        ]
    }
}

impl fmt::Display for RatioClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RatioClass::LambdaMinusOne => write!(f, "lambda-1"),
            RatioClass::LambdaMinusOneInv => write!(f, "1/(lambda-1)"),
            RatioClass::Lambda => write!(f, "lambda"),
            RatioClass::LambdaInv => write!(f, "1/lambda"),
        }
    }
}

/// How F splits the interval [F(x), F(y)] at the mediant of two
/// Stern-Brocot neighbors.
#[derive(Clone, Debug)]
pub struct RatioReport {
    pub mediant: Rational,
    /// (F(m) - F(x)) / (F(y) - F(m)), exactly one of the four class values.
    pub ratio: CubicNumber,
    pub class: RatioClass,
    /// Node type of the *form-one* expansion of the mediant (equivalently of
    /// 1 - m in form zero); this is the kind that correlates with the class:
    /// first kind pairs with {L-1, 1/(L-1)}, second with {L, 1/L}.
    pub mediant_kind: NodeType,
    /// (F(m) - F(x)) / (F(y) - F(x)).
    pub part_to_whole: CubicNumber,
}

/// Classifies the F-ratio at the mediant of the neighbors x < y.
/// The pair must be unimodular (|q_x p_y - p_x q_y| = 1), i.e. adjacent in
/// some Stern-Brocot row.
pub fn ratio_report(x: &Rational, y: &Rational) -> Result<RatioReport> {
    if x >= y {
        return Err(Error::Domain("expected x < y".into()));
    }
    if x < &Rational::zero() || y > &Rational::one() {
        return Err(Error::Domain("expected 0 <= x < y <= 1".into()));
    }
    let det = x.numer() * y.denom() - y.numer() * x.denom();
    if det.magnitude() != &BigUint::one() {
        return Err(Error::Domain(format!(
            "{x} and {y} are not Stern-Brocot neighbors"
        )));
    }
    let m = mediant(x, y);
    let fm = f_exact(&m)?;
    let d1 = &fm - &f_exact(x)?;
    let d2 = &f_exact(y)? - &fm;
    let ratio = d1.div(&d2)?;
    let class = RatioClass::all()
        .into_iter()
        .find(|c| c.value() == ratio)
        .ok_or_else(|| {
            Error::Domain(format!(
                "ratio at mediant {m} is outside the four-class family"
            ))
        })?;
    let whole = &d1 + &d2;
    let part_to_whole = d1.div(&whole)?;
    let mediant_kind = match expand_odd_one(&m)?.terms.last() {
        Some(&(_, 1)) => NodeType::First,
        _ => NodeType::Second,
    };
    Ok(RatioReport {
        mediant: m,
        ratio,
        class,
        mediant_kind,
        part_to_whole,
    })
}

#[cfg(test)]
mod tests {
    use std::collections::VecDeque;

    use super::*;
    use crate::rational::rat;

    #[test]
    fn levels_and_types() {
        assert_eq!(level(&rat(1, 2)).unwrap(), 1);
        assert_eq!(level(&rat(1, 3)).unwrap(), 2);
        assert_eq!(level(&rat(2, 3)).unwrap(), 2);
        assert_eq!(level(&rat(2, 5)).unwrap(), 4);
        assert_eq!(node_type(&rat(1, 2)).unwrap(), NodeType::First);
        assert_eq!(node_type(&rat(1, 3)).unwrap(), NodeType::Second);
        assert_eq!(node_type(&rat(3, 4)).unwrap(), NodeType::Second);
        assert!(level(&rat(0, 1)).is_err());
        assert!(node_type(&rat(1, 1)).is_err());
    }

    #[test]
    fn small_level_sets_by_hand() {
        let sets = level_sets(4).unwrap();
        assert_eq!(sets[0], vec![rat(1, 2)]);
        assert_eq!(sets[1], vec![rat(1, 3), rat(2, 3)]);
        assert_eq!(sets[2], vec![rat(1, 4), rat(3, 5), rat(3, 4)]);
        assert_eq!(
            sets[3],
            vec![rat(1, 5), rat(2, 7), rat(2, 5), rat(4, 7), rat(5, 8), rat(4, 5)]
        );
    }

    #[test]
    fn level_set_sizes_match_the_recurrence() {
        let sets = level_sets(12).unwrap();
        let counts = level_counts(12);
        for (i, s) in sets.iter().enumerate() {
            assert_eq!(
                BigUint::from(s.len()),
                counts.x[i + 1],
                "size of X_{}",
                i + 1
            );
            // all distinct (sorted already)
            for w in s.windows(2) {
                assert!(w[0] < w[1]);
            }
        }
    }

    #[test]
    fn counting_sequences() {
        let c = level_counts(20);
        let expect_x: [u64; 20] = [
            1, 2, 3, 6, 11, 20, 37, 68, 125, 230, 423, 778, 1431, 2632, 4841, 8904, 16377, 30122,
            55403, 101902,
        ];
        for (i, &v) in expect_x.iter().enumerate() {
            assert_eq!(c.x[i + 1], BigUint::from(v), "X_{}", i + 1);
        }
        assert_eq!(c.y[4], BigUint::from(12u32));
        assert_eq!(c.y[5], BigUint::from(23u32));
        assert_eq!(c.y[6], BigUint::from(43u32));
        assert_eq!(c.y[7], BigUint::from(80u32));
        assert_eq!(c.y[14], BigUint::from(5767u32));
        assert_eq!(c.y[17], BigUint::from(35889u32));
        assert_eq!(c.y[18], BigUint::from(66011u32));
        assert_eq!(c.y[20], BigUint::from(223316u32));
        assert_eq!(c.z[1], BigUint::from(1u32));
        assert_eq!(c.z[2], BigUint::from(2u32));
        assert_eq!(c.z[3], BigUint::from(5u32));
        assert_eq!(c.z[4], BigUint::from(10u32));
        assert_eq!(c.z[5], BigUint::from(19u32));
        assert_eq!(c.z[17], BigUint::from(30121u32));
        // recurrences with the +2 constant, and the chain identity
        for n in 1..=17usize {
            assert_eq!(
                c.y[n + 3],
                &c.y[n + 2] + &c.y[n + 1] + &c.y[n] + BigUint::from(2u32),
                "Y recurrence at {n}"
            );
            assert_eq!(
                c.z[n + 3],
                &c.z[n + 2] + &c.z[n + 1] + &c.z[n] + BigUint::from(2u32),
                "Z recurrence at {n}"
            );
        }
        for n in 1..=19usize {
            assert_eq!(
                c.y[n + 1],
                &c.y[n] + &c.z[n] + BigUint::one(),
                "Y/Z chain at {n}"
            );
        }
    }

    #[test]
    fn children_follow_the_kind_rules() {
        // walk the first few tree levels and compare child expansions with
        // the candidate representations
        let mut queue = VecDeque::from([TreeNode::root()]);
        let mut seen = 0;
        while let Some(node) = queue.pop_front() {
            let lv = level(&node.value).unwrap();
            if lv > 8 {
                continue;
            }
            let (a, b) = node.children();
            let (ca, cb) = child_rep_candidates(&node.value).unwrap();
            let got = [
                expand_odd_zero(&a.value).unwrap(),
                expand_odd_zero(&b.value).unwrap(),
            ];
            assert!(
                (got[0] == ca && got[1] == cb) || (got[0] == cb && got[1] == ca),
                "child reps of {}",
                node.value
            );
            // child levels: first kind +1/+1, second kind {+1, +2}
            let la = level(&a.value).unwrap() - lv;
            let lb = level(&b.value).unwrap() - lv;
            match node_type(&node.value).unwrap() {
                NodeType::First => assert_eq!((la, lb), (1, 1)),
                NodeType::Second => {
                    assert!(
                        (la == 1 && lb == 2) || (la == 2 && lb == 1),
                        "second-kind child levels of {}",
                        node.value
                    );
                }
            }
            seen += 1;
            queue.push_back(a);
            queue.push_back(b);
        }
        // every node of level <= 8 was visited
        assert_eq!(seen, 148);
    }

    #[test]
    fn subtree_counts_against_brute_force() {
        // brute force: count descendants by BFS from the node itself
        fn brute(node: &TreeNode, n: u64) -> u64 {
            let mut cnt = 0;
            let mut queue = VecDeque::from([node.clone()]);
            while let Some(nd) = queue.pop_front() {
                if level(&nd.value).unwrap() <= n {
                    cnt += 1;
                    let (a, b) = nd.children();
                    queue.push_back(a);
                    queue.push_back(b);
                }
            }
            cnt
        }
        let mut queue = VecDeque::from([TreeNode::root()]);
        let mut checked = 0;
        while let Some(node) = queue.pop_front() {
            let lv = level(&node.value).unwrap();
            if lv > 6 {
                continue;
            }
            for n in lv..=10 {
                assert_eq!(
                    subtree_count(&node.value, n).unwrap(),
                    BigUint::from(brute(&node, n)),
                    "subtree of {} up to {n}",
                    node.value
                );
            }
            assert_eq!(subtree_count(&node.value, lv - 1).unwrap(), BigUint::zero());
            let (a, b) = node.children();
            queue.push_back(a);
            queue.push_back(b);
            checked += 1;
        }
        assert_eq!(checked, 43);
    }

    #[test]
    fn phi_hand_values() {
        // n = 1: X_3 u X_2 u X_1 -> X_4
        assert_eq!(phi(&rat(1, 2), 1).unwrap(), rat(2, 7));
        assert_eq!(phi(&rat(1, 3), 1).unwrap(), rat(2, 5));
        assert_eq!(phi(&rat(2, 3), 1).unwrap(), rat(5, 8));
        assert_eq!(phi(&rat(1, 4), 1).unwrap(), rat(1, 5));
        assert_eq!(phi(&rat(3, 5), 1).unwrap(), rat(4, 7));
        assert_eq!(phi(&rat(3, 4), 1).unwrap(), rat(4, 5));
        // level 1 is outside the source union for n = 4
        assert!(phi(&rat(1, 2), 4).is_err());
        assert!(phi(&rat(1, 2), 0).is_err());
        assert!(phi(&rat(0, 1), 1).is_err());
    }

    #[test]
    fn phi_is_a_bijection_between_levels() {
        let upto = 13u64;
        let sets = level_sets(upto).unwrap();
        let set = |n: u64| -> &Vec<Rational> { &sets[n as usize - 1] };
        for target in 4..=upto {
            let n = target - 3;
            let mut images: Vec<Rational> = Vec::new();
            for source in [target - 1, target - 2, target - 3] {
                if source == 0 {
                    continue;
                }
                for x in set(source) {
                    let y = phi(x, n).unwrap();
                    assert_eq!(level(&y).unwrap(), target);
                    assert_eq!(&phi_inverse(&y).unwrap(), x, "phi round trip at {x}");
                    images.push(y);
                }
            }
            images.sort();
            assert_eq!(&images, set(target), "partition of X_{target}");
        }
        // below X_3 the inverse is not defined
        assert!(phi_inverse(&rat(1, 3)).is_err());
        assert!(phi_inverse(&rat(1, 2)).is_err());
    }

    #[test]
    fn limit_ratio_report() {
        let r4 = limit_ratios(4).unwrap();
        assert_eq!(r4.y_ratio, rat(12, 23));
        assert_eq!(r4.z_ratio, rat(10, 19));
        assert_eq!(r4.yz_ratio, rat(12, 10));
        let r10 = limit_ratios(10).unwrap();
        let r25 = limit_ratios(25).unwrap();
        // gaps shrink toward the limit and are under 10^-3 by n = 25
        for pick in [
            |r: &LimitRatios| r.y_gap.clone(),
            |r: &LimitRatios| r.z_gap.clone(),
            |r: &LimitRatios| r.yz_gap.clone(),
        ] {
            assert!(pick(&r25) < pick(&r10));
            assert!(pick(&r10) < pick(&r4));
            assert!(pick(&r25) < CubicNumber::from_rational(rat(1, 1000)));
        }
        assert!(limit_ratios(3).is_err());
    }

    #[test]
    fn stern_brocot_rows() {
        let f0 = stern_brocot_level(0).unwrap();
        assert_eq!(f0, vec![rat(0, 1), rat(1, 1)]);
        let f3 = stern_brocot_level(3).unwrap();
        assert_eq!(f3.len(), 9);
        assert_eq!(f3[1], rat(1, 4));
        assert_eq!(f3[4], rat(1, 2));
        for w in f3.windows(2) {
            assert!(w[0] < w[1]);
            let det = w[0].numer() * w[1].denom() - w[1].numer() * w[0].denom();
            assert_eq!(det.magnitude(), &BigUint::one());
        }
    }

    #[test]
    fn ratio_hand_values() {
        let lm1 = CubicNumber::lambda() - CubicNumber::one();
        let r = ratio_report(&rat(0, 1), &rat(1, 1)).unwrap();
        assert_eq!(r.mediant, rat(1, 2));
        assert_eq!(r.class, RatioClass::LambdaMinusOneInv);
        assert_eq!(r.ratio, lm1.inv().unwrap());
        assert_eq!(r.mediant_kind, NodeType::First);

        let r = ratio_report(&rat(0, 1), &rat(1, 2)).unwrap();
        assert_eq!(r.mediant, rat(1, 3));
        assert_eq!(r.class, RatioClass::LambdaMinusOne);
        assert_eq!(r.mediant_kind, NodeType::First);

        let r = ratio_report(&rat(1, 2), &rat(1, 1)).unwrap();
        assert_eq!(r.mediant, rat(2, 3));
        assert_eq!(r.class, RatioClass::LambdaInv);
        assert_eq!(r.mediant_kind, NodeType::Second);

        let r = ratio_report(&rat(0, 1), &rat(1, 3)).unwrap();
        assert_eq!(r.mediant, rat(1, 4));
        assert_eq!(r.class, RatioClass::Lambda);
        assert_eq!(r.mediant_kind, NodeType::Second);

        let r = ratio_report(&rat(0, 1), &rat(1, 4)).unwrap();
        assert_eq!(r.mediant, rat(1, 5));
        assert_eq!(r.class, RatioClass::LambdaMinusOne);

        let r = ratio_report(&rat(1, 2), &rat(3, 5)).unwrap();
        assert_eq!(r.mediant, rat(4, 7));
        assert_eq!(r.class, RatioClass::LambdaMinusOne);

        assert!(ratio_report(&rat(1, 3), &rat(2, 3)).is_err()); // not neighbors
        assert!(ratio_report(&rat(1, 2), &rat(1, 3)).is_err()); // wrong order
    }

    #[test]
    fn ratio_classes_and_correlation_exhaustive() {
        let one = CubicNumber::one();
        // with ratio r, part:whole = r/(1 + r)
        let expected_pw: Vec<CubicNumber> = RatioClass::all()
            .into_iter()
            .map(|c| {
                let r = c.value();
                r.div(&(&r + &one)).unwrap()
            })
            .collect();
        for l in 0..=6u32 {
            let row = stern_brocot_level(l).unwrap();
            for w in row.windows(2) {
                let rep = ratio_report(&w[0], &w[1]).unwrap();
                let in_first_family = matches!(
                    rep.class,
                    RatioClass::LambdaMinusOne | RatioClass::LambdaMinusOneInv
                );
                assert_eq!(
                    in_first_family,
                    rep.mediant_kind == NodeType::First,
                    "kind/class correlation at mediant {}",
                    rep.mediant
                );
                let idx = RatioClass::all()
                    .iter()
                    .position(|c| *c == rep.class)
                    .unwrap();
                assert_eq!(rep.part_to_whole, expected_pw[idx]);
            }
        }
    }
}
