//! Cayley tables of finite loops.
//!
//! A [`LoopTable`] is an `n x n` Latin square over the elements `0..n` whose
//! row 0 and column 0 are the identity permutation, so element `0` is the
//! neutral element. Tables are validated on construction and immutable
//! afterwards; left and right division tables are precomputed alongside the
//! multiplication table.

use std::fmt;

use thiserror::Error;

use crate::perm::Permutation;

/// An element of a loop, identified by its row/column index.
pub type Element = u8;

/// Largest supported loop order (elements fit in one byte).
pub const MAX_ORDER: usize = 255;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("empty table")]
    Empty,
    #[error("order {0} exceeds the supported maximum of {MAX_ORDER}")]
    TooLarge(usize),
    #[error("line {line}: expected {expected} entries, found {found}")]
    NotSquare {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: `{token}` is not a non-negative integer")]
    BadInteger { line: usize, token: String },
    #[error("entry ({row},{col}) = {value} is outside 0..{order}")]
    OutOfRange {
        row: usize,
        col: usize,
        value: usize,
        order: usize,
    },
    #[error("value {value} repeated in {line}")]
    NotLatin { line: Line, value: usize },
    #[error("row 0 and column 0 must be the identity permutation ({0})")]
    NoIdentity(Line),
}

/// A row or column of a table, used in validation errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Line {
    Row(usize),
    Col(usize),
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Line::Row(r) => write!(f, "row {r}"),
            Line::Col(c) => write!(f, "column {c}"),
        }
    }
}

/// Which side a translation multiplies from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone)]
pub struct LoopTable {
    order: usize,
    cells: Vec<Element>,
    ldiv: Vec<Element>,
    rdiv: Vec<Element>,
    name: Option<String>,
}

impl PartialEq for LoopTable {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.cells == other.cells
    }
}

impl Eq for LoopTable {}

impl fmt::Debug for LoopTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LoopTable")
            .field("order", &self.order)
            .field("name", &self.name)
            .finish_non_exhaustive()
    }
}

impl LoopTable {
    /// Builds a table from row-major cells, enforcing the Latin and identity
    /// invariants.
    pub fn from_cells(order: usize, cells: Vec<Element>) -> Result<Self, TableError> {
        if order == 0 {
            return Err(TableError::Empty);
        }
        if order > MAX_ORDER {
            return Err(TableError::TooLarge(order));
        }
        if cells.len() != order * order {
            return Err(TableError::NotSquare {
                line: cells.len() / order + 1,
                expected: order,
                found: cells.len() % order,
            });
        }
        for (i, &v) in cells.iter().enumerate() {
            if v as usize >= order {
                return Err(TableError::OutOfRange {
                    row: i / order,
                    col: i % order,
                    value: v as usize,
                    order,
                });
            }
        }
        let mut seen = vec![false; order];
        for r in 0..order {
            seen.fill(false);
            for c in 0..order {
                let v = cells[r * order + c] as usize;
                if std::mem::replace(&mut seen[v], true) {
                    return Err(TableError::NotLatin {
                        line: Line::Row(r),
                        value: v,
                    });
                }
            }
        }
        for c in 0..order {
            seen.fill(false);
            for r in 0..order {
                let v = cells[r * order + c] as usize;
                if std::mem::replace(&mut seen[v], true) {
                    return Err(TableError::NotLatin {
                        line: Line::Col(c),
                        value: v,
                    });
                }
            }
        }
        for i in 0..order {
            if cells[i] as usize != i {
                return Err(TableError::NoIdentity(Line::Row(0)));
            }
            if cells[i * order] as usize != i {
                return Err(TableError::NoIdentity(Line::Col(0)));
            }
        }
        let mut ldiv = vec![0; order * order];
        let mut rdiv = vec![0; order * order];
        for a in 0..order {
            for b in 0..order {
                let v = cells[a * order + b] as usize;
                // a * b = v  =>  a \ v = b  and  v / b = a
                ldiv[a * order + v] = b as Element;
                rdiv[v * order + b] = a as Element;
            }
        }
        Ok(LoopTable {
            order,
            cells,
            ldiv,
            rdiv,
            name: None,
        })
    }

    pub fn from_rows(rows: &[Vec<Element>]) -> Result<Self, TableError> {
        let n = rows.len();
        if n == 0 {
            return Err(TableError::Empty);
        }
        let mut cells = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(TableError::NotSquare {
                    line: i + 1,
                    expected: n,
                    found: row.len(),
                });
            }
            cells.extend_from_slice(row);
        }
        Self::from_cells(n, cells)
    }

    /// Builds a table from a multiplication function on `0..order`.
    pub fn from_fn(
        order: usize,
        mut mul: impl FnMut(usize, usize) -> usize,
    ) -> Result<Self, TableError> {
        if order > MAX_ORDER {
            return Err(TableError::TooLarge(order));
        }
        let mut cells = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                let v = mul(a, b);
                if v >= order {
                    return Err(TableError::OutOfRange {
                        row: a,
                        col: b,
                        value: v,
                        order,
                    });
                }
                cells.push(v as Element);
            }
        }
        Self::from_cells(order, cells)
    }

    /// Parses the Cayley text format: `n` lines of `n` whitespace-separated
    /// integers, with `#` comment lines and blank lines ignored.
    pub fn parse(text: &str) -> Result<Self, TableError> {
        let mut rows: Vec<Vec<Element>> = Vec::new();
        let mut width = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut row = Vec::new();
            for tok in line.split_whitespace() {
                let v: usize = tok.parse().map_err(|_| TableError::BadInteger {
                    line: idx + 1,
                    token: tok.to_string(),
                })?;
                if v > MAX_ORDER {
                    return Err(TableError::OutOfRange {
                        row: rows.len(),
                        col: row.len(),
                        value: v,
                        order: width.unwrap_or(row.len()),
                    });
                }
                row.push(v as Element);
            }
            let expected = *width.get_or_insert(row.len());
            if row.len() != expected {
                return Err(TableError::NotSquare {
                    line: idx + 1,
                    expected,
                    found: row.len(),
                });
            }
            rows.push(row);
        }
        let n = rows.len();
        if n == 0 {
            return Err(TableError::Empty);
        }
        if n > MAX_ORDER {
            return Err(TableError::TooLarge(n));
        }
        if let Some(w) = width {
            if w != n {
                return Err(TableError::NotSquare {
                    line: text.lines().count(),
                    expected: w,
                    found: n,
                });
            }
        }
        // out-of-range entries are reported before Latin violations
        for (r, row) in rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                if v as usize >= n {
                    return Err(TableError::OutOfRange {
                        row: r,
                        col: c,
                        value: v as usize,
                        order: n,
                    });
                }
            }
        }
        Self::from_rows(&rows)
    }

    /// Serializes to the Cayley text format with single-space separation.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.order * self.order * 3);
        for r in 0..self.order {
            let row = self.row(r as Element);
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                out.push_str(&v.to_string());
            }
            out.push('\n');
        }
        out
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + Clone {
        (0..self.order).map(|x| x as Element)
    }

    pub fn cells(&self) -> &[Element] {
        &self.cells
    }

    pub fn row(&self, a: Element) -> &[Element] {
        let a = a as usize;
        &self.cells[a * self.order..(a + 1) * self.order]
    }

    #[inline]
    pub fn product(&self, a: Element, b: Element) -> Element {
        self.cells[a as usize * self.order + b as usize]
    }

    /// The unique `z` with `a * z = b`.
    #[inline]
    pub fn left_divide(&self, a: Element, b: Element) -> Element {
        self.ldiv[a as usize * self.order + b as usize]
    }

    /// The unique `z` with `z * b = a`.
    #[inline]
    pub fn right_divide(&self, a: Element, b: Element) -> Element {
        self.rdiv[a as usize * self.order + b as usize]
    }

    /// Returns `(x', x'')` with `x' * x = 0` and `x * x'' = 0`.
    pub fn inverse(&self, x: Element) -> (Element, Element) {
        (self.right_divide(0, x), self.left_divide(x, 0))
    }

    /// Left-normed power: `x^0 = 0`, `x^n = x * x^(n-1)`.
    pub fn power(&self, x: Element, n: usize) -> Element {
        let mut acc = 0;
        for _ in 0..n {
            acc = self.product(x, acc);
        }
        acc
    }

    /// Least `n >= 1` with left-normed `x^n = 0`. Always exists since `L_x` is
    /// a permutation.
    pub fn element_order(&self, x: Element) -> usize {
        let mut acc = x;
        let mut k = 1;
        while acc != 0 {
            acc = self.product(x, acc);
            k += 1;
        }
        k
    }

    /// Whether the left-normed powers of `x` multiply like exponents, which
    /// holds exactly when `<x>` is a (cyclic) group.
    pub fn is_power_associative_at(&self, x: Element) -> bool {
        let k = self.element_order(x);
        let powers: Vec<Element> = (0..k).map(|i| self.power(x, i)).collect();
        (0..k).all(|i| (0..k).all(|j| self.product(powers[i], powers[j]) == powers[(i + j) % k]))
    }

    /// Least common multiple of all element orders.
    pub fn exponent(&self) -> Result<usize, NotPowerAssociative> {
        let mut acc = 1;
        for x in self.elements() {
            if !self.is_power_associative_at(x) {
                return Err(NotPowerAssociative(x));
            }
            acc = lcm(acc, self.element_order(x));
        }
        Ok(acc)
    }

    pub fn translation(&self, x: Element, side: Side) -> Permutation {
        let images = match side {
            Side::Left => self.row(x).to_vec(),
            Side::Right => self.elements().map(|y| self.product(y, x)).collect(),
        };
        Permutation::from_images_unchecked(images)
    }

    pub fn is_commutative(&self) -> bool {
        self.elements().all(|a| {
            self.elements()
                .all(|b| self.product(a, b) == self.product(b, a))
        })
    }

    pub fn is_associative(&self) -> bool {
        self.elements().all(|x| {
            self.elements().all(|y| {
                let xy = self.product(x, y);
                self.elements()
                    .all(|z| self.product(x, self.product(y, z)) == self.product(xy, z))
            })
        })
    }

    /// Relabels the table through a bijection `map` (old element -> new
    /// element) that must fix 0.
    pub fn relabel(&self, map: &Permutation) -> Result<LoopTable, TableError> {
        let inv = map.inverse();
        Self::from_fn(self.order, |a, b| {
            let pre = self.product(inv.apply(a as Element), inv.apply(b as Element));
            map.apply(pre) as usize
        })
    }
}

impl fmt::Display for LoopTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("loop is not power associative at element {0}")]
pub struct NotPowerAssociative(pub Element);

pub(crate) fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}
