//! Continued fractions with odd partial quotients, exact arithmetic in the
//! cubic field of the tribonacci constant, and the singular distribution
//! functions attached to the statistics of those expansions.
//!
//! Everything on the main path is exact: rationals have arbitrary precision,
//! distribution values live in Q(L) on the power basis {1, L, L^2}, and
//! numeric output goes through certified enclosures with rational endpoints.

pub mod contfrac;
pub mod cubic;
pub mod distribution;
pub mod empirical;
pub mod error;
pub mod rational;
pub mod tree;
pub mod verify;

pub use contfrac::{
    convert_ordinary_to_odd, expand_odd_one, expand_odd_zero, expand_ordinary, odd_div, AnyCf,
    Form, OddCf, OrdinaryCf,
};
pub use cubic::{lambda_enclosure, CubicNumber, Enclosure};
pub use distribution::{
    check_functional_eq_f, check_functional_eq_f0, f0_exact, f0_numeric, f_exact, f_from_ordinary,
};
pub use empirical::{
    audit_csv, convergence_csv, convergence_table, derivative_probe, empirical_f, empirical_f0,
    m_set, max_error_by_n, mediant_ratio_audit, probe_csv, probe_schedule, seeded_rationals,
    seeded_rationals_within, y_set, AuditRow, ConvergenceRow, ProbeRow, SampleCdf,
};
pub use error::{Error, Result};
pub use rational::{parse_rational, Rational};
pub use tree::{
    child_rep_candidates, level, level_counts, level_set, level_sets, limit_ratios, mediant,
    node_type, phi, phi_inverse, ratio_report, stern_brocot_level, subtree_count, LevelCounts,
    LimitRatios, NodeType, RatioClass, RatioReport, TreeNode,
};
pub use verify::{run_suite, Check, SuiteReport, SUITES};
