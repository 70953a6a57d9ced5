use crate::construct::{steiner_loop, TripleSystem};
use crate::structure::{invariant_vector, isomorphic};
use crate::table::LoopTable;

use super::SearchError;

struct Cover {
    v: usize,
    covered: Vec<bool>,
    blocks: Vec<[usize; 3]>,
}

impl Cover {
    fn is_covered(&self, x: usize, y: usize) -> bool {
        self.covered[x * (self.v + 1) + y]
    }

    fn set(&mut self, b: [usize; 3], on: bool) {
        let w = self.v + 1;
        for (x, y) in [(b[0], b[1]), (b[0], b[2]), (b[1], b[2])] {
            self.covered[x * w + y] = on;
            self.covered[y * w + x] = on;
        }
    }

    fn push(&mut self, b: [usize; 3]) {
        self.set(b, true);
        self.blocks.push(b);
    }

    fn pop(&mut self) {
        let b = self.blocks.pop().unwrap();
        self.set(b, false);
    }

    fn first_open(&self) -> Option<(usize, usize)> {
        (1..=self.v)
            .flat_map(|x| (x + 1..=self.v).map(move |y| (x, y)))
            .find(|&(x, y)| !self.is_covered(x, y))
    }

    fn search(&mut self, out: &mut Vec<Vec<[usize; 3]>>) {
        let Some((x, y)) = self.first_open() else {
            out.push(self.blocks.clone());
            return;
        };
        for z in y + 1..=self.v {
            if !self.is_covered(x, z) && !self.is_covered(y, z) {
                self.push([x, y, z]);
                self.search(out);
                self.pop();
            }
        }
    }
}

/// All Steiner triple systems on `v` points up to isomorphism. The blocks
/// through point 1 are fixed to `{1,2,3}, {1,4,5}, ...` and the block
/// through `{2,4}` to `{2,4,6}`; the remaining pairs are covered by
/// backtracking on the least open pair, and solutions are reduced by
/// isomorphism of their Steiner loops.
pub fn enumerate_sts(v: usize) -> Result<Vec<TripleSystem>, SearchError> {
    if v % 6 != 1 && v % 6 != 3 {
        return Err(SearchError::InadmissibleOrder(v));
    }
    let mut cover = Cover {
        v,
        covered: vec![false; (v + 1) * (v + 1)],
        blocks: Vec::new(),
    };
    for k in 1..=(v - 1) / 2 {
        cover.push([1, 2 * k, 2 * k + 1]);
    }
    if v >= 7 {
        cover.push([2, 4, 6]);
    }
    let mut raw = Vec::new();
    cover.search(&mut raw);

    let mut reps: Vec<(Vec<[usize; 4]>, LoopTable, TripleSystem)> = Vec::new();
    for blocks in raw {
        let ts = TripleSystem::new(v, blocks).expect("search covers every pair once");
        let l = steiner_loop(&ts).expect("order within range");
        let mut key = invariant_vector(&l);
        key.sort_unstable();
        if !reps
            .iter()
            .any(|(k, r, _)| *k == key && isomorphic(r, &l).isomorphic)
        {
            reps.push((key, l, ts));
        }
    }
    Ok(reps.into_iter().map(|(_, _, ts)| ts).collect())
}
