//! Subloop enumeration and Lagrange/Cauchy-type reports.

use std::collections::HashSet;

use crate::set::ElementSet;
use crate::table::{Element, LoopTable};

use super::subloop::generate_subloop;
use super::StructureError;

/// Every subloop found, ordered by size and then by member list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubloopList {
    pub subloops: Vec<ElementSet>,
    /// `false` when the enumeration stopped at the limit.
    pub complete: bool,
}

/// Closure of `closed ∪ {a}` where `closed` is already a subloop; only pairs
/// involving new elements are combined.
fn extend_closed(t: &LoopTable, closed: &ElementSet, a: Element) -> ElementSet {
    let mut set = *closed;
    let mut members: Vec<Element> = closed.iter().collect();
    let mut next = members.len();
    if set.insert(a) {
        members.push(a);
    }
    while next < members.len() {
        let x = members[next];
        next += 1;
        let mut i = 0;
        while i < members.len() {
            let y = members[i];
            i += 1;
            for v in [
                t.product(x, y),
                t.product(y, x),
                t.left_divide(x, y),
                t.left_divide(y, x),
                t.right_divide(x, y),
                t.right_divide(y, x),
            ] {
                if set.insert(v) {
                    members.push(v);
                }
            }
        }
    }
    set
}

/// Finds all subloops: closures of every seed of at most two elements, then
/// saturation by adjoining one outside element at a time until no new
/// subloop appears. Stops after `limit` subloops.
pub fn enumerate_subloops(t: &LoopTable, limit: usize) -> SubloopList {
    let mut found: HashSet<ElementSet> = HashSet::new();
    let mut queue = Vec::new();
    let mut complete = true;
    let push = |s: ElementSet, found: &mut HashSet<ElementSet>, queue: &mut Vec<_>| {
        if found.len() >= limit {
            return false;
        }
        if found.insert(s) {
            queue.push(s);
        }
        true
    };
    'seed: for x in t.elements() {
        let sx = generate_subloop(t, &ElementSet::singleton(x));
        if !push(sx, &mut found, &mut queue) {
            complete = false;
            break;
        }
        for y in t.elements().skip(x as usize + 1) {
            if sx.contains(y) {
                continue;
            }
            if !push(extend_closed(t, &sx, y), &mut found, &mut queue) {
                complete = false;
                break 'seed;
            }
        }
    }
    let mut head = 0;
    while complete && head < queue.len() {
        let s = queue[head];
        head += 1;
        for a in t.elements() {
            if s.contains(a) {
                continue;
            }
            if !push(extend_closed(t, &s, a), &mut found, &mut queue) {
                complete = false;
                break;
            }
        }
    }
    let mut subloops: Vec<ElementSet> = found.into_iter().collect();
    subloops.sort_by_cached_key(|s| (s.len(), s.to_vec()));
    SubloopList { subloops, complete }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LagrangeReport {
    pub subloop_count: usize,
    pub complete: bool,
    /// Weak Lagrange: every subloop order divides the loop order.
    pub weak: bool,
    pub weak_witness: Option<ElementSet>,
    /// Every monogenic subloop order divides the loop order.
    pub monogenic: bool,
    pub monogenic_witness: Option<Element>,
    /// Strong Lagrange (every subloop has the weak property); `None` when the
    /// subloop list is incomplete.
    pub strong: Option<bool>,
    /// Strong monogenic Lagrange; `None` when the subloop list is incomplete.
    pub strong_monogenic: Option<bool>,
    /// For each prime dividing the order, whether an element of that order
    /// exists.
    pub cauchy: Vec<(usize, bool)>,
}

impl LagrangeReport {
    pub fn cauchy_holds(&self) -> bool {
        self.cauchy.iter().all(|&(_, ok)| ok)
    }

    pub fn cauchy_violations(&self) -> Vec<usize> {
        self.cauchy
            .iter()
            .filter(|&&(_, ok)| !ok)
            .map(|&(p, _)| p)
            .collect()
    }
}

pub const DEFAULT_SUBLOOP_LIMIT: usize = 100_000;

pub fn lagrange_report(t: &LoopTable) -> Result<LagrangeReport, StructureError> {
    lagrange_report_with_limit(t, DEFAULT_SUBLOOP_LIMIT)
}

pub fn lagrange_report_with_limit(
    t: &LoopTable,
    limit: usize,
) -> Result<LagrangeReport, StructureError> {
    t.exponent()?;
    let n = t.order();
    let list = enumerate_subloops(t, limit);
    let weak_witness = list.subloops.iter().find(|s| !n.is_multiple_of(s.len())).copied();

    let monogenic: Vec<ElementSet> = t
        .elements()
        .map(|x| generate_subloop(t, &ElementSet::singleton(x)))
        .collect();
    let monogenic_witness = t.elements().find(|&x| !n.is_multiple_of(monogenic[x as usize].len()));

    let (strong, strong_monogenic) = if list.complete {
        let strong = list.subloops.iter().all(|s| {
            list.subloops
                .iter()
                .filter(|u| u.len() < s.len() && u.is_subset(s))
                .all(|u| s.len() % u.len() == 0)
        });
        let strong_mono = list
            .subloops
            .iter()
            .all(|s| s.iter().all(|x| s.len() % monogenic[x as usize].len() == 0));
        (Some(strong), Some(strong_mono))
    } else {
        (None, None)
    };

    let cauchy = prime_divisors(n)
        .into_iter()
        .map(|p| (p, t.elements().any(|x| t.element_order(x) == p)))
        .collect();

    Ok(LagrangeReport {
        subloop_count: list.subloops.len(),
        complete: list.complete,
        weak: list.complete && weak_witness.is_none(),
        weak_witness,
        monogenic: monogenic_witness.is_none(),
        monogenic_witness,
        strong,
        strong_monogenic,
        cauchy,
    })
}

pub(crate) fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
