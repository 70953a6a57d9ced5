use std::fmt;
use std::str::FromStr;

use crate::table::{LoopTable, MAX_ORDER};

use super::ConstructionError;

/// Blocks of a Steiner triple system on points `1..=points`. Each block is
/// stored sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleSystem {
    points: usize,
    blocks: Vec<[usize; 3]>,
}

impl TripleSystem {
    /// Validates that every pair of distinct points lies in exactly one block.
    pub fn new(points: usize, blocks: Vec<[usize; 3]>) -> Result<Self, ConstructionError> {
        let bad = |m: String| Err(ConstructionError::InvalidTripleSystem(m));
        if points % 6 != 1 && points % 6 != 3 {
            return Err(ConstructionError::InadmissibleOrder(points));
        }
        let mut seen = vec![false; (points + 1) * (points + 1)];
        let mut norm = Vec::with_capacity(blocks.len());
        for mut b in blocks {
            b.sort_unstable();
            if b[0] == 0 || b[2] > points || b[0] == b[1] || b[1] == b[2] {
                return bad(format!("bad block {b:?}"));
            }
            for (x, y) in [(b[0], b[1]), (b[0], b[2]), (b[1], b[2])] {
                let cell = &mut seen[x * (points + 1) + y];
                if *cell {
                    return bad(format!("pair {{{x},{y}}} covered twice"));
                }
                *cell = true;
            }
            norm.push(b);
        }
        if norm.len() != points * (points - 1) / 6 {
            return bad(format!(
                "{} blocks, expected {}",
                norm.len(),
                points * (points - 1) / 6
            ));
        }
        Ok(TripleSystem {
            points,
            blocks: norm,
        })
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn blocks(&self) -> &[[usize; 3]] {
        &self.blocks
    }

    /// First line `v`, then one block per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.points);
        for b in &self.blocks {
            s.push_str(&format!("{} {} {}\n", b[0], b[1], b[2]));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, ConstructionError> {
        let bad = |m: String| ConstructionError::InvalidTripleSystem(m);
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let points: usize = lines
            .next()
            .ok_or_else(|| bad("empty input".into()))?
            .parse()
            .map_err(|_| bad("first line must be the number of points".into()))?;
        let mut blocks = Vec::new();
        for line in lines {
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| bad(format!("bad token `{t}`"))))
                .collect::<Result<_, _>>()?;
            let b: [usize; 3] = nums
                .try_into()
                .map_err(|_| bad(format!("block `{line}` needs three points")))?;
            blocks.push(b);
        }
        TripleSystem::new(points, blocks)
    }
}

impl fmt::Display for TripleSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for TripleSystem {
    type Err = ConstructionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TripleSystem::parse(s)
    }
}

/// Bose construction for `v = 6t + 3` and Skolem construction for
/// `v = 6t + 1`.
pub fn build_sts(v: usize) -> Result<TripleSystem, ConstructionError> {
    let blocks = match v % 6 {
        _ if v == 1 => Vec::new(),
        3 => bose(v),
        1 => skolem(v),
        _ => return Err(ConstructionError::InadmissibleOrder(v)),
    };
    TripleSystem::new(v, blocks)
}

fn bose(v: usize) -> Vec<[usize; 3]> {
    let n = v / 3;
    let t = (n - 1) / 2;
    let op = |a: usize, b: usize| (a + b) * (t + 1) % n;
    let pt = |x: usize, i: usize| 1 + x + (i % 3) * n;
    let mut blocks = Vec::new();
    for x in 0..n {
        blocks.push([pt(x, 0), pt(x, 1), pt(x, 2)]);
    }
    for i in 0..3 {
        for x in 0..n {
            for y in x + 1..n {
                blocks.push([pt(x, i), pt(y, i), pt(op(x, y), i + 1)]);
            }
        }
    }
    blocks
}

fn skolem(v: usize) -> Vec<[usize; 3]> {
    let n = (v - 1) / 6;
    let m = 2 * n;
    // half-idempotent: x∘x = (x+n)∘(x+n) = x for x < n
    let op = |a: usize, b: usize| {
        let s = (a + b) % m;
        if s.is_multiple_of(2) {
            s / 2
        } else {
            n + (s - 1) / 2
        }
    };
    let pt = |x: usize, i: usize| 1 + x + (i % 3) * m;
    let inf = v;
    let mut blocks = Vec::new();
    for x in 0..n {
        blocks.push([pt(x, 0), pt(x, 1), pt(x, 2)]);
        for i in 0..3 {
            blocks.push([inf, pt(n + x, i), pt(x, i + 1)]);
        }
    }
    for i in 0..3 {
        for x in 0..m {
            for y in x + 1..m {
                blocks.push([pt(x, i), pt(y, i), pt(op(x, y), i + 1)]);
            }
        }
    }
    blocks
}

/// The Steiner loop on `{e} ∪ points`: `xx = e` and `xy = z` for each block
/// `{x, y, z}`. Point `p` becomes element `p`, and `e` is 0.
pub fn steiner_loop(ts: &TripleSystem) -> Result<LoopTable, ConstructionError> {
    let n = ts.points + 1;
    if n > MAX_ORDER {
        return Err(crate::table::TableError::TooLarge(n).into());
    }
    let mut cells = vec![0usize; n * n];
    for a in 0..n {
        cells[a] = a;
        cells[a * n] = a;
    }
    for &[x, y, z] in &ts.blocks {
        for (a, b, c) in [(x, y, z), (x, z, y), (y, z, x)] {
            cells[a * n + b] = c;
            cells[b * n + a] = c;
        }
    }
    let t = LoopTable::from_fn(n, |a, b| cells[a * n + b])?;
    Ok(t.with_name(format!("steiner({})", ts.points)))
}
