//! The acceptance gate: twelve checks, one line of output each. Every check
//! is exact or certified — enumerations are compared set-for-set, field
//! elements coefficientwise, and decimals only ever come from enclosures.
//! Frozen decimal strings were calibrated once from the exact values and
//! guard against regressions.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::gcd;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use oddcf::{
    check_functional_eq_f, check_functional_eq_f0, convergence_table, convert_ordinary_to_odd,
    derivative_probe, empirical_f0, expand_odd_zero, expand_ordinary, f0_exact, f_exact,
    f_from_ordinary, lambda_enclosure, level, level_counts, level_sets, limit_ratios,
    max_error_by_n, mediant_ratio_audit, parse_rational, phi, phi_inverse, probe_schedule,
    seeded_rationals, subtree_count, CubicNumber, NodeType, RatioClass, Rational, TreeNode,
};

const SEED: u64 = 42;

fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// One enumeration pass serves every check that walks the tree.
fn sets() -> &'static Vec<Vec<Rational>> {
    static SETS: OnceLock<Vec<Vec<Rational>>> = OnceLock::new();
    SETS.get_or_init(|| level_sets(20).expect("enumeration to level 20 fits the budget"))
}

/// Reduced fractions p/q, 0 <= p <= q <= max, ascending in q.
fn farey(max: i64) -> Vec<Rational> {
    let mut out = Vec::new();
    for q in 1..=max {
        for p in 0..=q {
            if gcd(p, q) == 1 {
                out.push(rat(p, q));
            }
        }
    }
    out
}

fn gate(number: u32, name: &str, problems: Vec<String>) {
    let verdict = if problems.is_empty() { "PASS" } else { "FAIL" };
    println!("acceptance {number:02} {name}: {verdict}");
    assert!(
        problems.is_empty(),
        "acceptance {number:02} {name}:\n  {}",
        problems.join("\n  ")
    );
}

#[test]
fn acceptance_01_hand_anchors() {
    let mut problems = Vec::new();
    let listings: [&[&str]; 4] = [
        &["1/2"],
        &["1/3", "2/3"],
        &["1/4", "3/5", "3/4"],
        &["1/5", "2/7", "2/5", "4/7", "5/8", "4/5"],
    ];
    for (i, row) in listings.iter().enumerate() {
        let want: Vec<Rational> = row.iter().map(|s| parse_rational(s).unwrap()).collect();
        if sets()[i] != want {
            problems.push(format!("level {} is not {row:?}", i + 1));
        }
    }
    for (x, text) in [
        ("1/2", "[0; 1/1, 1/1]"),
        ("3/5", "[0; 1/1, 1/1, 1/1, 1/1]"),
        ("2/5", "[0; 1/3, -1/1, 1/1]"),
    ] {
        let got = expand_odd_zero(&parse_rational(x).unwrap()).unwrap().to_string();
        if got != text {
            problems.push(format!("{x} expands to {got}, not {text}"));
        }
    }
    gate(1, "hand anchors", problems);
}

#[test]
fn acceptance_02_level_bijection() {
    let mut problems = Vec::new();
    let sets = sets();
    for n in 1..=14u64 {
        let mut images = std::collections::BTreeSet::new();
        for k in [n, n + 1, n + 2] {
            for x in &sets[k as usize - 1] {
                let y = phi(x, n).unwrap();
                if level(&y).unwrap() != n + 3 {
                    problems.push(format!("phi({x}, {n}) lands off level {}", n + 3));
                }
                if phi_inverse(&y).unwrap() != *x {
                    problems.push(format!("phi_inverse undoes phi wrongly at ({x}, {n})"));
                }
                if !images.insert(y) {
                    problems.push(format!("phi collides at ({x}, {n})"));
                }
            }
        }
        if images.len() != sets[n as usize + 2].len() {
            problems.push(format!("images at n = {n} do not exhaust level {}", n + 3));
        }
        if !problems.is_empty() {
            break;
        }
    }
    // enumerated cardinalities against the three-term recurrence
    let c = level_counts(17);
    for k in 1..=17usize {
        if BigInt::from(sets[k - 1].len()) != BigInt::from(c.x[k].clone()) {
            problems.push(format!("enumerated level {k} size differs from the count"));
        }
    }
    for n in 1..=14usize {
        let sum = sets[n - 1].len() + sets[n].len() + sets[n + 1].len();
        if sets[n + 2].len() != sum {
            problems.push(format!("three-term recurrence fails at n = {n}"));
        }
    }
    gate(2, "level bijection", problems);
}

#[test]
fn acceptance_03_counting_recurrences() {
    let mut problems = Vec::new();
    let c = level_counts(31);
    let as_int = |n: usize, v: &[num_bigint::BigUint]| BigInt::from(v[n].clone());
    if [1, 2, 3, 6].iter().enumerate().any(|(i, &s)| as_int(i + 1, &c.x) != BigInt::from(s)) {
        problems.push("seeds are not (1, 2, 3, 6)".into());
    }
    for n in 1..=27usize {
        let y = |k: usize| as_int(k, &c.y);
        let z = |k: usize| as_int(k, &c.z);
        if y(n + 3) != y(n + 2) + y(n + 1) + y(n) + 2 {
            problems.push(format!("Y recurrence fails at n = {n}"));
        }
        if z(n + 3) != z(n + 2) + z(n + 1) + z(n) + 2 {
            problems.push(format!("Z recurrence fails at n = {n}"));
        }
    }
    for n in 2..=30usize {
        if as_int(n, &c.y) != as_int(n - 1, &c.y) + as_int(n - 1, &c.z) + 1 {
            problems.push(format!("chain identity fails at n = {n}"));
        }
    }
    // the same numbers fall out of the enumeration
    let sets = sets();
    let mut cumulative = 0usize;
    for n in 1..=17usize {
        cumulative += sets[n - 1].len();
        if BigInt::from(cumulative) != as_int(n, &c.y) {
            problems.push(format!("enumerated Y_{n} differs from the count"));
        }
        if n <= 16 && BigInt::from(sets[n].len() - 1) != as_int(n, &c.z) {
            problems.push(format!("enumerated Z_{n} differs from the count"));
        }
    }
    gate(3, "counting recurrences", problems);
}

#[test]
fn acceptance_04_reflection_symmetry() {
    let mut problems = Vec::new();
    let one = CubicNumber::one();
    for x in farey(100) {
        let lhs = f_exact(&x).unwrap();
        let rhs = &one - &f0_exact(&(rat(1, 1) - &x)).unwrap();
        if lhs != rhs {
            problems.push(format!("F({x}) != 1 - F0(1 - {x})"));
        }
    }
    gate(4, "reflection symmetry", problems);
}

#[test]
fn acceptance_05_ordinary_route() {
    let mut problems = Vec::new();
    for x in farey(200) {
        let via = f_from_ordinary(&expand_ordinary(&x).unwrap()).unwrap();
        if via != f_exact(&x).unwrap() {
            problems.push(format!("ordinary-input route differs at {x}"));
        }
    }
    gate(5, "ordinary route", problems);
}

#[test]
fn acceptance_06_conversion_agreement() {
    let mut problems = Vec::new();
    for x in farey(200) {
        let converted = convert_ordinary_to_odd(&expand_ordinary(&x).unwrap()).unwrap();
        if converted != expand_odd_zero(&x).unwrap() {
            problems.push(format!("conversion differs from direct expansion at {x}"));
        }
    }
    gate(6, "conversion agreement", problems);
}

#[test]
fn acceptance_07_functional_equations() {
    let mut problems = Vec::new();
    for x in seeded_rationals(100, SEED) {
        for n in 1..=5 {
            if !check_functional_eq_f0(&x, n).unwrap() {
                problems.push(format!("form-zero equation fails at ({x}, {n})"));
            }
            if !check_functional_eq_f(&x, n).unwrap() {
                problems.push(format!("form-one equation fails at ({x}, {n})"));
            }
        }
    }
    gate(7, "functional equations", problems);
}

#[test]
fn acceptance_08_subtree_counts() {
    let mut problems = Vec::new();
    // every subtree rooted at level <= 7, tallied directly to depth 14
    let mut roots = vec![TreeNode::root()];
    let mut i = 0;
    while i < roots.len() {
        let node = roots[i].clone();
        i += 1;
        if level(&node.value).unwrap() < 7 {
            let (a, b) = node.children();
            for c in [a, b] {
                if level(&c.value).unwrap() <= 7 {
                    roots.push(c);
                }
            }
        }
    }
    for root in &roots {
        let mut tally = vec![0u64; 15];
        let mut stack = vec![root.clone()];
        while let Some(node) = stack.pop() {
            let lv = level(&node.value).unwrap();
            if lv > 14 {
                continue;
            }
            tally[lv as usize] += 1;
            let (a, b) = node.children();
            stack.push(a);
            stack.push(b);
        }
        let mut brute = 0u64;
        for n in 1..=14u64 {
            brute += tally[n as usize];
            if num_bigint::BigUint::from(brute) != subtree_count(&root.value, n).unwrap() {
                problems.push(format!("closed form misses the tally at ({}, {n})", root.value));
            }
        }
    }
    // the empirical head-quotient mass is exactly a subtree share
    for n in 1..=14u64 {
        let card = sets()[..n as usize].iter().map(|s| s.len() as u64).sum::<u64>();
        for a1 in [1i64, 3, 5, 7] {
            let x = rat(1, a1);
            let mut want = subtree_count(&rat(1, a1 + 1), n).unwrap();
            if a1 > 1 && level(&x).unwrap() <= n {
                want += num_bigint::BigUint::one();
            }
            let share = Rational::new(BigInt::from(want), BigInt::from(card));
            if empirical_f0(n, &x).unwrap() != share {
                problems.push(format!("empirical mass at (1/{a1}, {n}) is not its subtree share"));
            }
        }
    }
    gate(8, "subtree counts", problems);
}

#[test]
fn acceptance_09_limit_ratios() {
    let mut problems = Vec::new();
    let r = limit_ratios(25).unwrap();
    let bound = CubicNumber::from_rational(rat(1, 1000));
    for (name, gap) in [("Y", &r.y_gap), ("Z", &r.z_gap), ("Y/Z", &r.yz_gap)] {
        if (&bound - gap).sign() != std::cmp::Ordering::Greater {
            problems.push(format!("{name} ratio at 25 is not within 1/1000 of its limit"));
        }
    }
    let enc = lambda_enclosure(45);
    if enc.width() > Rational::new(BigInt::one(), BigInt::one() << 40) {
        problems.push("enclosure is wider than 2^-40".into());
    }
    let anchor = Rational::new(
        BigInt::from(1_839_286_755_214_161u64),
        BigInt::from(10u64).pow(15),
    );
    if !enc.contains(&anchor) {
        problems.push("enclosure misses 1.839286755214161".into());
    }
    gate(9, "limit ratios", problems);
}

#[test]
fn acceptance_10_mediant_ratio_classes() {
    let mut problems = Vec::new();
    for l in 0..=10u32 {
        let rows = mediant_ratio_audit(l).unwrap();
        if rows.len() != 1usize << l {
            problems.push(format!("row {l} has {} pairs, expected {}", rows.len(), 1u32 << l));
        }
        for row in &rows {
            if row.report.ratio != row.report.class.value() {
                problems.push(format!("ratio at {} is off its class value", row.report.mediant));
            }
            let first_family = matches!(
                row.report.class,
                RatioClass::LambdaMinusOne | RatioClass::LambdaMinusOneInv
            );
            if first_family != (row.report.mediant_kind == NodeType::First) {
                problems.push(format!("kind/class mismatch at {}", row.report.mediant));
            }
        }
    }
    gate(10, "mediant ratio classes", problems);
}

#[test]
fn acceptance_11_convergence_goldens() {
    let mut problems = Vec::new();
    let grid: Vec<Rational> = {
        let mut g: Vec<Rational> = sets()[..10].iter().flatten().cloned().collect();
        g.sort();
        g
    };
    let rows = convergence_table(20, &grid).unwrap();
    let errs = max_error_by_n(&rows);
    let err = |n: u64| &errs.iter().find(|(k, _)| *k == n).unwrap().1;
    if err(20) >= &rat(1, 50) {
        problems.push("deepest error bound is not below 0.02".into());
    }
    for n in 8..=17u64 {
        if err(n + 3) > err(n) {
            problems.push(format!("error bound grows from n = {n} to {}", n + 3));
        }
    }
    // frozen from calibration: certified max |empirical - exact| over the grid
    for (n, golden) in [
        (8, "0.00869350"),
        (11, "0.00142504"),
        (14, "0.00018933"),
        (17, "0.00002831"),
        (20, "0.00000446"),
    ] {
        let got = CubicNumber::from_rational(err(n).clone()).to_decimal(8);
        if got != golden {
            problems.push(format!("error bound at n = {n} is {got}, golden {golden}"));
        }
    }
    gate(11, "convergence goldens", problems);
}

#[test]
fn acceptance_12_singularity_probe() {
    let mut problems = Vec::new();
    // denominators 11..=25 keep every point in the certified-decay regime
    // for h <= 1e-3 (the quotient fluctuates until h clears ~1/den^2)
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut seen = std::collections::BTreeSet::new();
    let mut xs: Vec<Rational> = Vec::new();
    while xs.len() < 25 {
        let q: i64 = rng.gen_range(11..=25);
        let p: i64 = rng.gen_range(1..q);
        let x = rat(p, q);
        let inside = x > rat(1, 10) && x < rat(9, 10);
        if inside && x.denom() >= &BigInt::from(11) && seen.insert(x.clone()) {
            xs.push(x);
        }
    }
    let steps = probe_schedule(5);
    for (i, x) in xs.iter().enumerate() {
        let rows = derivative_probe(x, &steps).unwrap();
        if rows.iter().any(|r| !r.quotient.lo.is_positive()) {
            problems.push(format!("a quotient at {x} is not certified positive"));
        }
        // strict decrease once h reaches 1e-3, certified by the enclosures
        for w in rows[2..].windows(2) {
            if w[1].quotient.hi >= w[0].quotient.lo {
                problems.push(format!("no certified decrease at {x} between h = {} and {}", w[0].h, w[1].h));
            }
        }
        if rows[4].quotient.hi >= rat(1, 10) {
            problems.push(format!("quotient at {x}, h = 1e-5 is not below 1/10"));
        }
        // frozen from calibration at h = 1e-2
        let pins = [
            ("11/17", "1.0750092120", "1.0750092121"),
            ("3/11", "1.5889833031", "1.5889833032"),
            ("4/21", "0.7139214852", "0.7139214853"),
        ];
        if i < pins.len() {
            let (px, plo, phi_) = pins[i];
            let (lo, hi) = rows[1].quotient.decimal_bounds(10);
            if x.to_string() != px || lo != plo || hi != phi_ {
                problems.push(format!("pin {i} drifted: x = {x}, lo = {lo}, hi = {hi}"));
            }
        }
    }
    gate(12, "singularity probe", problems);
}
