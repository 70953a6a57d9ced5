use std::str::FromStr;

use crate::identity::{Assignment, Verdict};
use crate::set::ElementSet;
use crate::table::{Element, LoopTable, Side};

use super::subloop::{generate_subloop, is_normal, is_subloop, quotient};

/// `[x,y,z]`: the unique `a` with `(x(yz)) a = (xy)z`.
pub fn associator(t: &LoopTable, x: Element, y: Element, z: Element) -> Element {
    let left = t.product(x, t.product(y, z));
    let right = t.product(t.product(x, y), z);
    t.left_divide(left, right)
}

pub fn associator_values(t: &LoopTable) -> ElementSet {
    let mut s = ElementSet::new();
    for x in t.elements() {
        for y in t.elements() {
            for z in t.elements() {
                s.insert(associator(t, x, y, z));
            }
        }
    }
    s
}

/// Subloop generated by all associators.
pub fn associator_subloop(t: &LoopTable) -> ElementSet {
    generate_subloop(t, &associator_values(t))
}

pub(crate) fn is_associative_on(t: &LoopTable, s: &ElementSet) -> bool {
    let members = s.to_vec();
    members.iter().all(|&x| {
        members.iter().all(|&y| {
            let xy = t.product(x, y);
            members
                .iter()
                .all(|&z| t.product(x, t.product(y, z)) == t.product(xy, z))
        })
    })
}

/// The square roots of the identity, with the structural facts that hold for
/// them in commutative C-loops re-checked rather than assumed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquaringKernel {
    pub members: ElementSet,
    pub is_subloop: bool,
    /// `None` when the set is not a subloop.
    pub is_normal: Option<bool>,
    /// `None` unless the set is a normal subloop.
    pub quotient_is_group: Option<bool>,
}

pub fn squaring_kernel(t: &LoopTable) -> SquaringKernel {
    let members: ElementSet = t.elements().filter(|&x| t.product(x, x) == 0).collect();
    let sub = is_subloop(t, &members);
    let normal = sub.then(|| is_normal(t, &members).map(|v| v.holds).unwrap_or(false));
    let quotient_is_group = (normal == Some(true)).then(|| {
        quotient(t, &members)
            .map(|q| q.is_associative())
            .unwrap_or(false)
    });
    SquaringKernel {
        members,
        is_subloop: sub,
        is_normal: normal,
        quotient_is_group,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AssocFamily {
    PowerAssociative,
    Diassociative,
    LeftPowerAlternative,
    RightPowerAlternative,
}

impl FromStr for AssocFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "power-associative" | "pa" => Ok(AssocFamily::PowerAssociative),
            "diassociative" => Ok(AssocFamily::Diassociative),
            "left-power-alt" => Ok(AssocFamily::LeftPowerAlternative),
            "right-power-alt" => Ok(AssocFamily::RightPowerAlternative),
            _ => Err(format!("unknown family `{s}`")),
        }
    }
}

/// Checks power associativity, diassociativity or one-sided power
/// alternativity. Counterexamples name the witnessing generators (`x`, `y`)
/// or the element and exponent (`x`, `n`).
pub fn check_assoc_family(t: &LoopTable, which: AssocFamily) -> Verdict {
    match which {
        AssocFamily::PowerAssociative => {
            for x in t.elements() {
                if !is_associative_on(t, &generate_subloop(t, &ElementSet::singleton(x))) {
                    return Verdict::fails(Assignment::new(vec![('x', x)]));
                }
            }
            Verdict::holds()
        }
        AssocFamily::Diassociative => {
            let mut checked = std::collections::HashSet::new();
            for x in t.elements() {
                for y in t.elements().skip(x as usize) {
                    let s = generate_subloop(t, &[x, y].into_iter().collect());
                    if checked.insert(s) && !is_associative_on(t, &s) {
                        return Verdict::fails(Assignment::new(vec![('x', x), ('y', y)]));
                    }
                }
            }
            Verdict::holds()
        }
        AssocFamily::LeftPowerAlternative | AssocFamily::RightPowerAlternative => {
            let side = if which == AssocFamily::LeftPowerAlternative {
                Side::Left
            } else {
                Side::Right
            };
            let pa = check_assoc_family(t, AssocFamily::PowerAssociative);
            if !pa.holds {
                return pa;
            }
            for x in t.elements() {
                let base = t.translation(x, side);
                let mut acc = base.clone();
                for n in 1..=t.element_order(x) {
                    if t.translation(t.power(x, n), side) != acc {
                        return Verdict::fails(Assignment::new(vec![
                            ('x', x),
                            ('n', n as Element),
                        ]));
                    }
                    acc = acc.then(&base);
                }
            }
            Verdict::holds()
        }
    }
}
