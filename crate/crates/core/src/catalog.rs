//! The Bol-Moufang varieties and the other named loop properties.
//!
//! Each variety is pinned to one defining identity. Checks are brute force:
//! every assignment of elements to the identity's variables is tried.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::identity::{Assignment, Identity, Verdict};
use crate::table::{Element, LoopTable};

/// The fourteen varieties of loops of Bol-Moufang type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variety {
    C,
    Flexible,
    Group,
    Extra,
    Moufang,
    LeftBol,
    RightBol,
    LC,
    RC,
    LeftAlternative,
    RightAlternative,
    LeftNuclearSquare,
    MiddleNuclearSquare,
    RightNuclearSquare,
}

impl Variety {
    /// Output order of flags.
    pub const ALL: [Variety; 14] = [
        Variety::C,
        Variety::Flexible,
        Variety::Group,
        Variety::Extra,
        Variety::Moufang,
        Variety::LeftBol,
        Variety::RightBol,
        Variety::LC,
        Variety::RC,
        Variety::LeftAlternative,
        Variety::RightAlternative,
        Variety::LeftNuclearSquare,
        Variety::MiddleNuclearSquare,
        Variety::RightNuclearSquare,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Variety::C => "C",
            Variety::Flexible => "flexible",
            Variety::Group => "group",
            Variety::Extra => "extra",
            Variety::Moufang => "moufang",
            Variety::LeftBol => "left_bol",
            Variety::RightBol => "right_bol",
            Variety::LC => "LC",
            Variety::RC => "RC",
            Variety::LeftAlternative => "left_alt",
            Variety::RightAlternative => "right_alt",
            Variety::LeftNuclearSquare => "left_nuc_sq",
            Variety::MiddleNuclearSquare => "middle_nuc_sq",
            Variety::RightNuclearSquare => "right_nuc_sq",
        }
    }

    pub fn defining_identity_src(self) -> &'static str {
        match self {
            Variety::C => "x*(y*(y*z)) = ((x*y)*y)*z",
            Variety::Flexible => "x*(y*x) = (x*y)*x",
            Variety::Group => "x*(y*z) = (x*y)*z",
            Variety::Extra => "x*(y*(z*x)) = ((x*y)*z)*x",
            Variety::Moufang => "(x*y)*(z*x) = (x*(y*z))*x",
            Variety::LeftBol => "x*(y*(x*z)) = (x*(y*x))*z",
            Variety::RightBol => "((x*y)*z)*y = x*((y*z)*y)",
            Variety::LC => "x*(x*(y*z)) = ((x*x)*y)*z",
            Variety::RC => "((x*y)*z)*z = x*(y*(z*z))",
            Variety::LeftAlternative => "x*(x*y) = (x*x)*y",
            Variety::RightAlternative => "(y*x)*x = y*(x*x)",
            Variety::LeftNuclearSquare => "(x*x)*(y*z) = ((x*x)*y)*z",
            Variety::MiddleNuclearSquare => "y*((x*x)*z) = (y*(x*x))*z",
            Variety::RightNuclearSquare => "y*(z*(x*x)) = (y*z)*(x*x)",
        }
    }

    pub fn identity(self) -> Identity {
        Identity::parse(self.defining_identity_src())
            .expect("catalog identities parse")
            .named(self.key())
    }
}

impl fmt::Display for Variety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown property `{0}`")]
pub struct UnknownProperty(pub String);

impl FromStr for Variety {
    type Err = UnknownProperty;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase().replace('-', "_");
        Variety::ALL
            .into_iter()
            .find(|v| v.key().to_ascii_lowercase() == lower)
            .or(match lower.as_str() {
                "groups" | "associative" => Some(Variety::Group),
                "left_alternative" => Some(Variety::LeftAlternative),
                "right_alternative" => Some(Variety::RightAlternative),
                _ => None,
            })
            .ok_or_else(|| UnknownProperty(s.to_string()))
    }
}

/// Which catalog varieties a loop belongs to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    flags: Vec<(Variety, Verdict)>,
}

impl Classification {
    pub fn has(&self, v: Variety) -> bool {
        self.verdict(v).holds
    }

    pub fn verdict(&self, v: Variety) -> &Verdict {
        &self
            .flags
            .iter()
            .find(|(w, _)| *w == v)
            .expect("all varieties classified")
            .1
    }

    pub fn iter(&self) -> impl Iterator<Item = (Variety, bool)> + '_ {
        self.flags.iter().map(|(v, d)| (*v, d.holds))
    }

    /// Inclusions between varieties that every classification must respect.
    pub fn coherence_violations(&self) -> Vec<(Variety, Variety)> {
        use Variety::*;
        const IMPLICATIONS: &[(Variety, Variety)] = &[
            (Group, Extra),
            (Extra, Moufang),
            (Extra, C),
            (Moufang, LeftBol),
            (Moufang, RightBol),
            (Moufang, Flexible),
            (C, LC),
            (C, RC),
            (LC, LeftAlternative),
            (LC, LeftNuclearSquare),
            (LC, MiddleNuclearSquare),
            (RC, RightAlternative),
            (RC, RightNuclearSquare),
            (RC, MiddleNuclearSquare),
            (LeftBol, LeftAlternative),
            (RightBol, RightAlternative),
        ];
        IMPLICATIONS
            .iter()
            .copied()
            .filter(|&(a, b)| self.has(a) && !self.has(b))
            .collect()
    }
}

pub fn classify_bol_moufang(table: &LoopTable) -> Classification {
    Classification {
        flags: Variety::ALL
            .into_iter()
            .map(|v| (v, v.identity().satisfies(table)))
            .collect(),
    }
}

/// Named properties outside the Bol-Moufang catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Property {
    LeftInverse,
    RightInverse,
    InverseProperty,
    AntiautomorphicInverse,
    Steiner,
    TotallySymmetric,
    Commutative,
    ConjugacyClosed,
    Arif,
}

impl Property {
    pub const ALL: [Property; 9] = [
        Property::LeftInverse,
        Property::RightInverse,
        Property::InverseProperty,
        Property::AntiautomorphicInverse,
        Property::Steiner,
        Property::TotallySymmetric,
        Property::Commutative,
        Property::ConjugacyClosed,
        Property::Arif,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Property::LeftInverse => "lip",
            Property::RightInverse => "rip",
            Property::InverseProperty => "inverse-property",
            Property::AntiautomorphicInverse => "aaip",
            Property::Steiner => "steiner",
            Property::TotallySymmetric => "totally-symmetric",
            Property::Commutative => "commutative",
            Property::ConjugacyClosed => "conjugacy-closed",
            Property::Arif => "arif",
        }
    }

    /// Identities equivalent to the property (in loops), when it has an
    /// equational form without constants.
    pub fn identities(self) -> Vec<Identity> {
        let src: &[&str] = match self {
            Property::Commutative => &["x*y = y*x"],
            Property::Steiner | Property::TotallySymmetric => &["(y*x)*x = y", "x*y = y*x"],
            _ => &[],
        };
        src.iter().map(|s| Identity::parse(s).unwrap()).collect()
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Property {
    type Err = UnknownProperty;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase().replace('_', "-");
        Property::ALL
            .into_iter()
            .find(|p| p.key() == lower)
            .or(match lower.as_str() {
                "ip" | "inverse" => Some(Property::InverseProperty),
                "cc" => Some(Property::ConjugacyClosed),
                "left-inverse-property" => Some(Property::LeftInverse),
                "right-inverse-property" => Some(Property::RightInverse),
                _ => None,
            })
            .ok_or_else(|| UnknownProperty(s.to_string()))
    }
}

/// Checks a property by name. Catalog variety names are accepted too.
pub fn check_property(table: &LoopTable, name: &str) -> Result<Verdict, UnknownProperty> {
    if let Ok(p) = name.parse::<Property>() {
        return Ok(check(table, p));
    }
    name.parse::<Variety>()
        .map(|v| v.identity().satisfies(table))
}

pub fn check(table: &LoopTable, prop: Property) -> Verdict {
    match prop {
        Property::LeftInverse => left_inverse(table),
        Property::RightInverse => right_inverse(table),
        Property::InverseProperty => {
            let l = left_inverse(table);
            if l.holds {
                right_inverse(table)
            } else {
                l
            }
        }
        Property::AntiautomorphicInverse => antiautomorphic(table),
        Property::Steiner => {
            for x in table.elements() {
                if table.product(x, x) != 0 {
                    return Verdict::fails(Assignment::new(vec![('x', x)]));
                }
            }
            all_hold(table, &prop.identities())
        }
        Property::TotallySymmetric | Property::Commutative => all_hold(table, &prop.identities()),
        Property::ConjugacyClosed => conjugacy_closed(table),
        Property::Arif => {
            let flex = Variety::Flexible.identity().satisfies(table);
            if !flex.holds {
                return flex;
            }
            Identity::parse("(z*x)*((y*x)*y) = (z*((x*y)*x))*y")
                .unwrap()
                .satisfies(table)
        }
    }
}

fn all_hold(table: &LoopTable, ids: &[Identity]) -> Verdict {
    for id in ids {
        let v = id.satisfies(table);
        if !v.holds {
            return v;
        }
    }
    Verdict::holds()
}

fn pair(x: Element, y: Element) -> Assignment {
    Assignment::new(vec![('x', x), ('y', y)])
}

// x' (x y) = y where x' x = e
fn left_inverse(t: &LoopTable) -> Verdict {
    for x in t.elements() {
        let (xl, _) = t.inverse(x);
        for y in t.elements() {
            if t.product(xl, t.product(x, y)) != y {
                return Verdict::fails(pair(x, y));
            }
        }
    }
    Verdict::holds()
}

// (y x) x'' = y where x x'' = e
fn right_inverse(t: &LoopTable) -> Verdict {
    for x in t.elements() {
        let (_, xr) = t.inverse(x);
        for y in t.elements() {
            if t.product(t.product(y, x), xr) != y {
                return Verdict::fails(pair(x, y));
            }
        }
    }
    Verdict::holds()
}

fn antiautomorphic(t: &LoopTable) -> Verdict {
    for x in t.elements() {
        let (l, r) = t.inverse(x);
        if l != r {
            return Verdict::fails(Assignment::new(vec![('x', x)]));
        }
    }
    let inv = |x| t.inverse(x).0;
    for x in t.elements() {
        for y in t.elements() {
            if inv(t.product(x, y)) != t.product(inv(y), inv(x)) {
                return Verdict::fails(pair(x, y));
            }
        }
    }
    Verdict::holds()
}

// w -> x(y(x\w)) must be a left translation, and w -> ((w/x)y)x a right one.
fn conjugacy_closed(t: &LoopTable) -> Verdict {
    for x in t.elements() {
        for y in t.elements() {
            let at = |w| t.product(x, t.product(y, t.left_divide(x, w)));
            let base = at(0);
            if t.elements().any(|w| at(w) != t.product(base, w)) {
                return Verdict::fails(pair(x, y));
            }
        }
    }
    for x in t.elements() {
        for y in t.elements() {
            let at = |w| t.product(t.product(t.right_divide(w, x), y), x);
            let base = at(0);
            if t.elements().any(|w| at(w) != t.product(w, base)) {
                return Verdict::fails(pair(x, y));
            }
        }
    }
    Verdict::holds()
}
