use std::collections::BTreeSet;

use crate::catalog::Variety;
use crate::structure::{nucleus, NucleusKind};

use super::{enumerate_with, SearchError, SearchSpec};

/// `(order, nucleus size)` pairs that survive the divisibility arguments for
/// nonassociative C-loops of order at most 14.
pub const ADMISSIBLE_PAIRS: [(usize, usize); 3] = [(10, 1), (12, 3), (14, 1)];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderSummary {
    pub order: usize,
    pub classes: usize,
    pub nucleus_sizes: Vec<usize>,
    pub exhausted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimsReport {
    pub orders: Vec<OrderSummary>,
    pub observed_pairs: BTreeSet<(usize, usize)>,
    pub violations: Vec<String>,
}

impl ClaimsReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty() && self.orders.iter().all(|o| o.exhausted)
    }
}

/// Enumerates nonassociative C-loops of each given order up to isomorphism
/// and checks, for nucleus size `m`: `n` is even, the index `n/m` is not 2
/// and is 2 or 4 mod 6, and `(n, m)` is admissible when `n ≤ 14`.
pub fn verify_structure_claims(
    orders: &[usize],
    budget: Option<u64>,
    workers: usize,
) -> Result<ClaimsReport, SearchError> {
    let mut report = ClaimsReport {
        orders: Vec::new(),
        observed_pairs: BTreeSet::new(),
        violations: Vec::new(),
    };
    for &n in orders {
        let mut spec = SearchSpec::new(n)
            .variety(Variety::C)
            .nonassociative()
            .up_to_iso();
        spec.node_budget = budget;
        let out = enumerate_with(&spec, workers)?;
        let mut sizes = Vec::new();
        for t in &out.tables {
            let m = nucleus(t, NucleusKind::Full).len();
            sizes.push(m);
            report.observed_pairs.insert((n, m));
            let mut bad = |why: &str| {
                report
                    .violations
                    .push(format!("order {n}, nucleus {m}: {why}"))
            };
            if n % 2 != 0 {
                bad("odd order");
            }
            if n % m != 0 {
                bad("nucleus size does not divide the order");
            } else {
                let idx = n / m;
                if idx == 2 {
                    bad("nucleus of index 2");
                }
                if idx % 6 != 2 && idx % 6 != 4 {
                    bad("index not 2 or 4 mod 6");
                }
            }
            if n <= 14 && !ADMISSIBLE_PAIRS.contains(&(n, m)) {
                bad("pair not admissible");
            }
        }
        if !out.exhausted {
            report
                .violations
                .push(format!("order {n}: budget exhausted"));
        }
        report.orders.push(OrderSummary {
            order: n,
            classes: out.count,
            nucleus_sizes: sizes,
            exhausted: out.exhausted,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nothing_below_ten() {
        let orders: Vec<usize> = (1..=9).collect();
        let r = verify_structure_claims(&orders, None, 2).unwrap();
        assert!(r.holds());
        assert!(r.observed_pairs.is_empty());
        assert!(r.orders.iter().all(|o| o.classes == 0));
    }

    #[test]
    fn order_ten() {
        let r = verify_structure_claims(&[10], None, 2).unwrap();
        assert!(r.holds());
        assert_eq!(
            r.observed_pairs.into_iter().collect::<Vec<_>>(),
            vec![(10, 1)]
        );
    }
}
