use crate::perm::Permutation;
use crate::set::ElementSet;
use crate::table::{Element, LoopTable};

use super::generate_subloop;

const UNSET: Element = Element::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoResult {
    pub isomorphic: bool,
    /// Maps elements of the first loop to the second.
    pub mapping: Option<Permutation>,
}

impl IsoResult {
    fn no() -> Self {
        IsoResult {
            isomorphic: false,
            mapping: None,
        }
    }
}

/// Per-element invariants preserved by every isomorphism: element order,
/// number of square roots, commutant size, and the number of pairs `(y, z)`
/// with `x(yz) = (xy)z`.
pub fn invariant_vector(t: &LoopTable) -> Vec<[usize; 4]> {
    let n = t.order();
    let mut roots = vec![0usize; n];
    for y in t.elements() {
        roots[t.product(y, y) as usize] += 1;
    }
    t.elements()
        .map(|x| {
            let commutes = t
                .elements()
                .filter(|&y| t.product(x, y) == t.product(y, x))
                .count();
            let mut assoc = 0;
            for y in t.elements() {
                let xy = t.product(x, y);
                for z in t.elements() {
                    if t.product(x, t.product(y, z)) == t.product(xy, z) {
                        assoc += 1;
                    }
                }
            }
            [t.element_order(x), roots[x as usize], commutes, assoc]
        })
        .collect()
}

fn is_isomorphism(a: &LoopTable, b: &LoopTable, map: &[Element]) -> bool {
    a.elements().all(|x| {
        a.elements()
            .all(|y| map[a.product(x, y) as usize] == b.product(map[x as usize], map[y as usize]))
    })
}

struct Search<'a> {
    a: &'a LoopTable,
    b: &'a LoopTable,
    inv_a: Vec<[usize; 4]>,
    inv_b: Vec<[usize; 4]>,
    fwd: Vec<Element>,
    bwd: Vec<Element>,
    mapped: Vec<Element>,
    generators: Vec<Element>,
}

impl Search<'_> {
    fn bind(&mut self, x: Element, y: Element) -> bool {
        let (xi, yi) = (x as usize, y as usize);
        if self.fwd[xi] != UNSET {
            return self.fwd[xi] == y;
        }
        if self.bwd[yi] != UNSET || self.inv_a[xi] != self.inv_b[yi] {
            return false;
        }
        self.fwd[xi] = y;
        self.bwd[yi] = x;
        self.mapped.push(x);
        true
    }

    /// Extends the partial map along products of already mapped elements,
    /// starting from `mapped[from..]`.
    fn close(&mut self, from: usize) -> bool {
        let mut next = from;
        while next < self.mapped.len() {
            let p = self.mapped[next];
            next += 1;
            let mut i = 0;
            while i < self.mapped.len() {
                let q = self.mapped[i];
                i += 1;
                let (fp, fq) = (self.fwd[p as usize], self.fwd[q as usize]);
                if !self.bind(self.a.product(p, q), self.b.product(fp, fq))
                    || !self.bind(self.a.product(q, p), self.b.product(fq, fp))
                {
                    return false;
                }
            }
        }
        true
    }

    fn undo(&mut self, len: usize) {
        for x in self.mapped.drain(len..) {
            let y = self.fwd[x as usize];
            self.fwd[x as usize] = UNSET;
            self.bwd[y as usize] = UNSET;
        }
    }

    fn dfs(&mut self, depth: usize) -> bool {
        if depth == self.generators.len() {
            return self.mapped.len() == self.a.order()
                && is_isomorphism(self.a, self.b, &self.fwd);
        }
        let g = self.generators[depth];
        if self.fwd[g as usize] != UNSET {
            return self.dfs(depth + 1);
        }
        let len = self.mapped.len();
        for y in self.b.elements() {
            if self.bind(g, y) && self.close(len) && self.dfs(depth + 1) {
                return true;
            }
            self.undo(len);
        }
        false
    }
}

/// Picks generators one at a time, each time the element outside the current
/// subloop whose invariant class is smallest (lowest index on ties).
fn generators(t: &LoopTable, inv: &[[usize; 4]]) -> Vec<Element> {
    let class_size = |x: Element| inv.iter().filter(|v| **v == inv[x as usize]).count();
    let mut gens = Vec::new();
    let mut sub = generate_subloop(t, &ElementSet::new());
    while sub.len() < t.order() {
        let g = t
            .elements()
            .filter(|&x| !sub.contains(x))
            .min_by_key(|&x| (class_size(x), x))
            .expect("subloop is proper");
        gens.push(g);
        sub.insert(g);
        sub = generate_subloop(t, &sub);
    }
    gens
}

/// Backtracking isomorphism test. Images of a greedy generating set are
/// tried in ascending order; products propagate the partial map, and any
/// complete map is re-verified on every pair.
pub fn isomorphic(a: &LoopTable, b: &LoopTable) -> IsoResult {
    let n = a.order();
    if n != b.order() {
        return IsoResult::no();
    }
    if a.cells() == b.cells() {
        return IsoResult {
            isomorphic: true,
            mapping: Some(Permutation::identity(n)),
        };
    }
    let inv_a = invariant_vector(a);
    let inv_b = invariant_vector(b);
    let (mut sa, mut sb) = (inv_a.clone(), inv_b.clone());
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return IsoResult::no();
    }
    let mut s = Search {
        a,
        b,
        generators: generators(a, &inv_a),
        inv_a,
        inv_b,
        fwd: vec![UNSET; n],
        bwd: vec![UNSET; n],
        mapped: Vec::with_capacity(n),
    };
    if !s.bind(0, 0) {
        return IsoResult::no();
    }
    if s.dfs(0) {
        let mapping = Permutation::from_images(s.fwd).expect("verified bijection");
        IsoResult {
            isomorphic: true,
            mapping: Some(mapping),
        }
    } else {
        IsoResult::no()
    }
}
