use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde_json::json;

use super::{enumerate_trees, OracleError, Report};

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Number of d-ary trees with `n` internal nodes, `binom(dn+1, n)/(dn+1)`.
pub fn count_trees(d: usize, n: usize) -> BigUint {
    let m = (d * n + 1) as u64;
    let b = binomial(m, n as u64);
    debug_assert!((&b % m).is_zero());
    b / m
}

/// Checks `binom((d−1)(n+1)+1, d−1)·a_{n+1} = d·binom(dn+d−1, d−1)·a_n`
/// for all `2 ≤ d ≤ max_d`, `n ≤ max_n`.
pub fn verify_growth_identity(max_d: usize, max_n: usize) -> Report {
    let mut report = Report::new(
        "growth_identity",
        &[("max_d", json!(max_d)), ("max_n", json!(max_n))],
    );
    let mut checked = 0u64;
    for d in 2..=max_d {
        let mut a_n = count_trees(d, 0);
        for n in 0..=max_n {
            let a_next = count_trees(d, n + 1);
            let dd = d as u64;
            let nn = n as u64;
            let lhs = binomial((dd - 1) * (nn + 1) + 1, dd - 1) * &a_next;
            let rhs = binomial(dd * nn + dd - 1, dd - 1) * &a_n * dd;
            if lhs != rhs {
                report.fail(json!({"d": d, "n": n, "lhs": lhs.to_string(), "rhs": rhs.to_string()}));
            }
            checked += 1;
            a_n = a_next;
        }
    }
    report.count("pairs", checked);
    report
}

/// Compares the closed formula with exhaustive enumeration.
pub fn verify_counts(d: usize, n: usize, limit: u64) -> Result<Report, OracleError> {
    let mut report = Report::new("counts", &[("d", json!(d)), ("n", json!(n))]);
    let formula = count_trees(d, n);
    let listed = enumerate_trees(d, n, limit)?.len();
    report.count("count", &formula);
    report.count("enumerated", listed);
    if BigUint::from(listed) != formula {
        report.fail(json!({"formula": formula.to_string(), "enumerated": listed}));
    }
    Ok(report)
}
