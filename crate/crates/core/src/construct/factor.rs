use crate::catalog::Variety;
use crate::identity::{Assignment, Verdict};
use crate::structure::{nucleus, NucleusKind};
use crate::table::{Element, LoopTable};

use super::ConstructionError;

/// Data for the extension `(g, a)(h, b) = (gh, a + b + μ(g, h))` of an
/// abelian group `A` by a group `G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorSet {
    g: LoopTable,
    a: LoopTable,
    mu: Vec<Element>,
}

impl FactorSet {
    /// `mu[g * |G| + h]` is `μ(g, h)`.
    pub fn new(g: LoopTable, a: LoopTable, mu: Vec<Element>) -> Result<Self, ConstructionError> {
        let bad = |m: &str| Err(ConstructionError::InvalidFactorSet(m.to_string()));
        let n = g.order();
        if !g.is_associative() {
            return bad("G is not a group");
        }
        if !a.is_associative() || !a.is_commutative() {
            return bad("A is not an abelian group");
        }
        if mu.len() != n * n {
            return bad("μ must be a |G| x |G| matrix");
        }
        if mu.iter().any(|&m| m as usize >= a.order()) {
            return bad("μ takes a value outside A");
        }
        if (0..n).any(|x| mu[x] != 0 || mu[x * n] != 0) {
            return bad("μ(1, g) and μ(g, 1) must vanish");
        }
        Ok(FactorSet { g, a, mu })
    }

    /// The zero factor set.
    pub fn trivial(g: LoopTable, a: LoopTable) -> Result<Self, ConstructionError> {
        let n = g.order();
        FactorSet::new(g, a, vec![0; n * n])
    }

    pub fn g(&self) -> &LoopTable {
        &self.g
    }

    pub fn a(&self) -> &LoopTable {
        &self.a
    }

    pub fn mu(&self, g: Element, h: Element) -> Element {
        self.mu[g as usize * self.g.order() + h as usize]
    }

    pub fn mu_matrix(&self) -> &[Element] {
        &self.mu
    }

    fn add(&self, x: Element, y: Element) -> Element {
        self.a.product(x, y)
    }
}

/// The extension loop; pair `(g, a)` is element `g·|A| + a`.
pub fn extension(fs: &FactorSet) -> Result<LoopTable, ConstructionError> {
    let m = fs.a.order();
    let t = LoopTable::from_fn(fs.g.order() * m, |x, y| {
        let (g, a) = ((x / m) as Element, (x % m) as Element);
        let (h, b) = ((y / m) as Element, (y % m) as Element);
        let c = fs.add(fs.add(a, b), fs.mu(g, h));
        fs.g.product(g, h) as usize * m + c as usize
    })?;
    Ok(t)
}

/// `μ(h,k) + μ(h,hk) + μ(g,h·hk) = μ(g,h) + μ(gh,h) + μ(gh·h,k)` for all
/// `g, h, k`: the condition for the extension to be a C-loop.
pub fn is_c_factor_set(fs: &FactorSet) -> Verdict {
    let g = &fs.g;
    for x in g.elements() {
        for h in g.elements() {
            let xh = g.product(x, h);
            for k in g.elements() {
                let hk = g.product(h, k);
                let lhs = fs.add(
                    fs.add(fs.mu(h, k), fs.mu(h, hk)),
                    fs.mu(x, g.product(h, hk)),
                );
                let rhs = fs.add(
                    fs.add(fs.mu(x, h), fs.mu(xh, h)),
                    fs.mu(g.product(xh, h), k),
                );
                if lhs != rhs {
                    return Verdict::fails(Assignment::new(vec![('g', x), ('h', h), ('k', k)]));
                }
            }
        }
    }
    Verdict::holds()
}

/// The simplified condition `μ(h,k) + μ(h,hk) = μ(g,h) + μ(gh,h)`, valid only
/// when `G` is an elementary abelian 2-group; `None` otherwise.
pub fn c_factor_set_reduced(fs: &FactorSet) -> Option<Verdict> {
    let g = &fs.g;
    if !g.is_commutative() || g.elements().any(|x| g.product(x, x) != 0) {
        return None;
    }
    for x in g.elements() {
        for h in g.elements() {
            let xh = g.product(x, h);
            for k in g.elements() {
                let lhs = fs.add(fs.mu(h, k), fs.mu(h, g.product(h, k)));
                let rhs = fs.add(fs.mu(x, h), fs.mu(xh, h));
                if lhs != rhs {
                    return Some(Verdict::fails(Assignment::new(vec![
                        ('g', x),
                        ('h', h),
                        ('k', k),
                    ])));
                }
            }
        }
    }
    Some(Verdict::holds())
}

/// `G` is the Klein group with elements `1, u, v, w` as `0, 1, 2, 3` and
/// `μ(v,w) = μ(w,u) = μ(w,w) = α`, `μ(v,u) = −α`, zero elsewhere.
pub fn constr_factor_set(a: &LoopTable, alpha: Element) -> Result<FactorSet, ConstructionError> {
    if alpha as usize >= a.order() {
        return Err(ConstructionError::InvalidParameter(format!(
            "alpha = {alpha} is not an element of A"
        )));
    }
    let klein = LoopTable::from_fn(4, |x, y| x ^ y)?;
    let neg = a.inverse(alpha).0;
    let mut mu = vec![0; 16];
    let (u, v, w) = (1, 2, 3);
    mu[v * 4 + w] = alpha;
    mu[w * 4 + u] = alpha;
    mu[w * 4 + w] = alpha;
    mu[v * 4 + u] = neg;
    FactorSet::new(klein, a.clone(), mu)
}

/// The non-flexible noncommutative C-loop of order `4|A|` whose nucleus is
/// the copy `{(1, a)}` of `A`. Requires `α` of order greater than 2.
pub fn constr_family(a: &LoopTable, alpha: Element) -> Result<LoopTable, ConstructionError> {
    let fs = constr_factor_set(a, alpha)?;
    let order = a.element_order(alpha);
    if order <= 2 {
        return Err(ConstructionError::AlphaOrderTooSmall { alpha, order });
    }
    let t = extension(&fs)?;
    let fail = |m: &str| Err(ConstructionError::PostconditionFailed(m.to_string()));
    if !Variety::C.identity().satisfies(&t).holds {
        return fail("not a C-loop");
    }
    if Variety::Flexible.identity().satisfies(&t).holds {
        return fail("flexible");
    }
    if t.is_commutative() {
        return fail("commutative");
    }
    let expect: crate::set::ElementSet = (0..a.order() as Element).collect();
    if nucleus(&t, NucleusKind::Full) != expect {
        return fail("nucleus differs from the copy of A");
    }
    Ok(t.with_name(format!("constr({}, {alpha})", a.order())))
}
