use crate::identity::{Assignment, Verdict};
use crate::set::ElementSet;
use crate::table::{Element, LoopTable};

use super::StructureError;

/// Least superset of `seed ∪ {0}` closed under product and both divisions.
pub fn generate_subloop(t: &LoopTable, seed: &ElementSet) -> ElementSet {
    let mut set = *seed;
    set.insert(0);
    let mut members: Vec<Element> = set.iter().collect();
    let mut next = 0;
    while next < members.len() {
        let a = members[next];
        next += 1;
        let mut i = 0;
        while i < members.len() {
            let b = members[i];
            i += 1;
            for v in [
                t.product(a, b),
                t.product(b, a),
                t.left_divide(a, b),
                t.left_divide(b, a),
                t.right_divide(a, b),
                t.right_divide(b, a),
            ] {
                if set.insert(v) {
                    members.push(v);
                }
            }
        }
    }
    set
}

pub fn is_subloop(t: &LoopTable, s: &ElementSet) -> bool {
    s.contains(0)
        && s.iter().all(|a| {
            s.iter().all(|b| {
                s.contains(t.product(a, b))
                    && s.contains(t.left_divide(a, b))
                    && s.contains(t.right_divide(a, b))
            })
        })
}

fn left_coset(t: &LoopTable, x: Element, k: &ElementSet) -> ElementSet {
    k.iter().map(|a| t.product(x, a)).collect()
}

fn right_coset(t: &LoopTable, k: &ElementSet, x: Element) -> ElementSet {
    k.iter().map(|a| t.product(a, x)).collect()
}

/// Tests `xK = Kx`, `x(yK) = (xy)K` and `x(Ky) = (xK)y` for all `x, y`.
pub fn is_normal(t: &LoopTable, k: &ElementSet) -> Result<Verdict, StructureError> {
    if !is_subloop(t, k) {
        return Err(StructureError::NotASubloop);
    }
    for x in t.elements() {
        if left_coset(t, x, k) != right_coset(t, k, x) {
            return Ok(Verdict::fails(Assignment::new(vec![('x', x)])));
        }
    }
    for x in t.elements() {
        for y in t.elements() {
            let xy = t.product(x, y);
            let lhs: ElementSet = k.iter().map(|a| t.product(x, t.product(y, a))).collect();
            if lhs != left_coset(t, xy, k) {
                return Ok(Verdict::fails(Assignment::new(vec![('x', x), ('y', y)])));
            }
            let lhs: ElementSet = k.iter().map(|a| t.product(x, t.product(a, y))).collect();
            let rhs: ElementSet = k.iter().map(|a| t.product(t.product(x, a), y)).collect();
            if lhs != rhs {
                return Ok(Verdict::fails(Assignment::new(vec![('x', x), ('y', y)])));
            }
        }
    }
    Ok(Verdict::holds())
}

/// Left cosets of a subloop, ordered by least member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetPartition {
    pub subloop: ElementSet,
    pub blocks: Vec<ElementSet>,
}

impl CosetPartition {
    /// Index of the block containing `x`.
    pub fn block_of(&self, x: Element) -> usize {
        self.blocks
            .iter()
            .position(|b| b.contains(x))
            .expect("blocks cover every element")
    }
}

/// Left cosets `xK`. Fails unless they partition the loop into blocks of
/// size `|K|`.
pub fn cosets(t: &LoopTable, k: &ElementSet) -> Result<CosetPartition, StructureError> {
    if !is_subloop(t, k) {
        return Err(StructureError::NotASubloop);
    }
    let mut covered = ElementSet::new();
    let mut blocks = Vec::new();
    for x in t.elements() {
        if covered.contains(x) {
            continue;
        }
        let block = left_coset(t, x, k);
        if !block.intersection(&covered).is_empty() {
            return Err(StructureError::IllDefined);
        }
        covered = covered.union(&block);
        blocks.push(block);
    }
    // blocks are discovered in order of least member already
    Ok(CosetPartition {
        subloop: *k,
        blocks,
    })
}

/// The factor loop `L/K`, with cosets labeled by least member.
pub fn quotient(t: &LoopTable, k: &ElementSet) -> Result<LoopTable, StructureError> {
    if !is_normal(t, k)?.holds {
        return Err(StructureError::NotNormal);
    }
    let part = cosets(t, k)?;
    let n = part.blocks.len();
    let mut label = vec![0usize; t.order()];
    for (i, b) in part.blocks.iter().enumerate() {
        for x in b.iter() {
            label[x as usize] = i;
        }
    }
    let mut cells = Vec::with_capacity(n * n);
    for a in &part.blocks {
        for b in &part.blocks {
            let target = label[t.product(a.min().unwrap(), b.min().unwrap()) as usize];
            for x in a.iter() {
                for y in b.iter() {
                    if label[t.product(x, y) as usize] != target {
                        return Err(StructureError::IllDefined);
                    }
                }
            }
            cells.push(target as Element);
        }
    }
    LoopTable::from_cells(n, cells).map_err(|_| StructureError::IllDefined)
}

/// The multiplication table of a subloop, members relabeled in ascending
/// order.
pub fn subloop_table(t: &LoopTable, s: &ElementSet) -> Result<LoopTable, StructureError> {
    if !is_subloop(t, s) {
        return Err(StructureError::NotASubloop);
    }
    let members = s.to_vec();
    let mut index = vec![0usize; t.order()];
    for (i, &m) in members.iter().enumerate() {
        index[m as usize] = i;
    }
    LoopTable::from_fn(members.len(), |a, b| {
        index[t.product(members[a], members[b]) as usize]
    })
    .map_err(|_| StructureError::NotASubloop)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{check, Property};
    use crate::fixtures;
    use crate::structure::{nucleus, NucleusKind};

    fn set(xs: &[Element]) -> ElementSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn generated_subloops_in_ex12() {
        let t = fixtures::load("ex12").unwrap();
        assert_eq!(
            generate_subloop(&t, &set(&[5])).to_vec(),
            vec![0, 1, 2, 3, 4, 5]
        );
        assert_eq!(generate_subloop(&t, &ElementSet::new()).to_vec(), vec![0]);
        assert_eq!(generate_subloop(&t, &set(&[5, 6])).len(), 12);
    }

    #[test]
    fn normality() {
        let ip = fixtures::load("ipnuc12").unwrap();
        let n = nucleus(&ip, NucleusKind::Full);
        assert!(!is_normal(&ip, &n).unwrap().holds);

        let t = fixtures::load("ex12").unwrap();
        assert!(is_normal(&t, &set(&[0, 1, 2])).unwrap().holds);
        assert!(is_normal(&t, &set(&[0])).unwrap().holds);
        assert_eq!(
            is_normal(&t, &set(&[0, 3, 6])),
            Err(StructureError::NotASubloop)
        );
    }

    #[test]
    fn ex12_mod_nucleus_is_klein() {
        let t = fixtures::load("ex12").unwrap();
        let q = quotient(&t, &set(&[0, 1, 2])).unwrap();
        assert_eq!(q.order(), 4);
        assert!(check(&q, Property::Steiner).holds);
        assert!(q.is_associative());
    }

    #[test]
    fn trivial_quotients() {
        let t = fixtures::load("ex16").unwrap();
        assert_eq!(quotient(&t, &set(&[0])).unwrap(), t);
        assert_eq!(quotient(&t, &ElementSet::full(16)).unwrap().order(), 1);
    }

    #[test]
    fn quotient_rejects_non_normal() {
        let ip = fixtures::load("ipnuc12").unwrap();
        let n = nucleus(&ip, NucleusKind::Full);
        assert_eq!(quotient(&ip, &n), Err(StructureError::NotNormal));
    }

    #[test]
    fn coset_partition_shape() {
        let t = fixtures::load("ex12").unwrap();
        let p = cosets(&t, &set(&[0, 1, 2])).unwrap();
        assert_eq!(p.blocks.len(), 4);
        assert_eq!(p.blocks[0], set(&[0, 1, 2]));
        assert!(p.blocks.iter().all(|b| b.len() == 3));
        assert_eq!(p.block_of(11), 3);
    }
}
