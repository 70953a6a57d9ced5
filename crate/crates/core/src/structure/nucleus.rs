use std::str::FromStr;

use crate::set::ElementSet;
use crate::table::{Element, LoopTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NucleusKind {
    Left,
    Middle,
    Right,
    Full,
}

impl FromStr for NucleusKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "left" => Ok(NucleusKind::Left),
            "middle" => Ok(NucleusKind::Middle),
            "right" => Ok(NucleusKind::Right),
            "full" => Ok(NucleusKind::Full),
            _ => Err(format!("unknown nucleus kind `{s}`")),
        }
    }
}

fn in_left(t: &LoopTable, x: Element) -> bool {
    t.elements().all(|y| {
        let xy = t.product(x, y);
        t.elements()
            .all(|z| t.product(x, t.product(y, z)) == t.product(xy, z))
    })
}

fn in_middle(t: &LoopTable, x: Element) -> bool {
    t.elements().all(|y| {
        let yx = t.product(y, x);
        t.elements()
            .all(|z| t.product(y, t.product(x, z)) == t.product(yx, z))
    })
}

fn in_right(t: &LoopTable, x: Element) -> bool {
    t.elements().all(|y| {
        t.elements()
            .all(|z| t.product(y, t.product(z, x)) == t.product(t.product(y, z), x))
    })
}

pub fn nucleus(t: &LoopTable, kind: NucleusKind) -> ElementSet {
    t.elements()
        .filter(|&x| match kind {
            NucleusKind::Left => in_left(t, x),
            NucleusKind::Middle => in_middle(t, x),
            NucleusKind::Right => in_right(t, x),
            NucleusKind::Full => in_left(t, x) && in_middle(t, x) && in_right(t, x),
        })
        .collect()
}

/// Nuclear elements commuting with every element.
pub fn center(t: &LoopTable) -> ElementSet {
    nucleus(t, NucleusKind::Full)
        .iter()
        .filter(|&x| t.elements().all(|y| t.product(x, y) == t.product(y, x)))
        .collect()
}
