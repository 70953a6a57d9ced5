//! The six multiplication tables printed in the C-loop literature, embedded
//! verbatim.
//!
//! | name      | order | description                                        |
//! |-----------|-------|----------------------------------------------------|
//! | `ex10`    | 10    | smallest nonassociative C-loop (Steiner)           |
//! | `ex12`    | 12    | smallest noncommutative nonassociative C-loop      |
//! | `ex14a`   | 14    | Steiner C-loop of order 14, trivial nucleus        |
//! | `ex14b`   | 14    | the other Steiner C-loop of order 14               |
//! | `ex16`    | 16    | commutative non-Steiner nonassociative C-loop      |
//! | `ipnuc12` | 12    | inverse property loop with a non-normal nucleus    |

use thiserror::Error;

use crate::table::{LoopTable, TableError};

pub const NAMES: [&str; 6] = ["ex10", "ex12", "ex14a", "ex14b", "ex16", "ipnuc12"];

/// Fixtures that are C-loops.
pub const C_LOOPS: [&str; 5] = ["ex10", "ex12", "ex14a", "ex14b", "ex16"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixtureError {
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("fixture `{0}` is corrupt: {1}")]
    Corrupt(String, TableError),
}

pub fn text(name: &str) -> Result<&'static str, FixtureError> {
    Ok(match name {
        "ex10" => include_str!("fixtures/ex10.tbl"),
        "ex12" => include_str!("fixtures/ex12.tbl"),
        "ex14a" => include_str!("fixtures/ex14a.tbl"),
        "ex14b" => include_str!("fixtures/ex14b.tbl"),
        "ex16" => include_str!("fixtures/ex16.tbl"),
        "ipnuc12" => include_str!("fixtures/ipnuc12.tbl"),
        _ => return Err(FixtureError::UnknownFixture(name.to_string())),
    })
}

pub fn load(name: &str) -> Result<LoopTable, FixtureError> {
    let src = text(name)?;
    LoopTable::parse(src)
        .map(|t| t.with_name(name))
        .map_err(|e| FixtureError::Corrupt(name.to_string(), e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fixtures_validate_and_round_trip() {
        let orders = [10, 12, 14, 14, 16, 12];
        for (name, n) in NAMES.iter().zip(orders) {
            let t = load(name).unwrap();
            assert_eq!(t.order(), n);
            assert_eq!(t.to_text(), text(name).unwrap());
        }
    }

    #[test]
    fn unknown_fixture() {
        assert_eq!(
            load("nope").unwrap_err(),
            FixtureError::UnknownFixture("nope".into())
        );
    }
}
