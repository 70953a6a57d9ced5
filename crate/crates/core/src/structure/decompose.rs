use crate::catalog::Variety;
use crate::construct::direct_product;
use crate::perm::Permutation;
use crate::set::ElementSet;
use crate::table::{gcd, Element, LoopTable};

use super::lagrange::prime_divisors;
use super::subloop::{is_normal, is_subloop, subloop_table};
use super::{nucleus, NucleusKind, StructureError};

/// Outcome of testing whether `L` is the internal direct product of `K` and
/// `H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectProduct {
    pub holds: bool,
    /// First condition that failed.
    pub failure: Option<String>,
    /// `(K, H)` relabeled in ascending member order.
    pub factors: Option<(LoopTable, LoopTable)>,
    /// `L -> K × H`, where pair `(i, j)` is element `i·|H| + j`.
    pub isomorphism: Option<Permutation>,
}

impl DirectProduct {
    fn fails(why: impl Into<String>) -> Self {
        DirectProduct {
            holds: false,
            failure: Some(why.into()),
            factors: None,
            isomorphism: None,
        }
    }
}

pub fn internal_direct_product(
    t: &LoopTable,
    k: &ElementSet,
    h: &ElementSet,
) -> Result<DirectProduct, StructureError> {
    if !is_subloop(t, k) || !is_subloop(t, h) {
        return Err(StructureError::NotASubloop);
    }
    if !is_normal(t, k)?.holds {
        return Ok(DirectProduct::fails("K is not normal"));
    }
    if !is_normal(t, h)?.holds {
        return Ok(DirectProduct::fails("H is not normal"));
    }
    if k.intersection(h).len() != 1 {
        return Ok(DirectProduct::fails("K and H intersect nontrivially"));
    }
    let (ks, hs) = (k.to_vec(), h.to_vec());
    if ks.len() * hs.len() != t.order() {
        return Ok(DirectProduct::fails("KH is not the whole loop"));
    }
    let mut images = vec![Element::MAX; t.order()];
    for (i, &a) in ks.iter().enumerate() {
        for (j, &b) in hs.iter().enumerate() {
            let x = t.product(a, b) as usize;
            if images[x] != Element::MAX {
                return Ok(DirectProduct::fails("KH is not the whole loop"));
            }
            images[x] = (i * hs.len() + j) as Element;
        }
    }
    let phi = Permutation::from_images(images).expect("images are distinct");
    let kt = subloop_table(t, k)?;
    let ht = subloop_table(t, h)?;
    let prod = direct_product(&kt, &ht);
    for x in t.elements() {
        for y in t.elements() {
            if phi.apply(t.product(x, y)) != prod.product(phi.apply(x), phi.apply(y)) {
                return Ok(DirectProduct::fails("(k, h) -> kh is not a homomorphism"));
            }
        }
    }
    Ok(DirectProduct {
        holds: true,
        failure: None,
        factors: Some((kt, ht)),
        isomorphism: Some(phi),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub prime: usize,
    /// Elements whose order is a power of `prime`.
    pub u: ElementSet,
    /// Elements whose order is coprime to `prime`.
    pub v: ElementSet,
    pub v_in_nucleus: bool,
    pub product: DirectProduct,
}

/// Splits `L` into its `p`-part `U` and `p'`-part `V` and verifies
/// `L = U × V`. For commutative C-loops with `p = 2` the inclusion of `V`
/// in the nucleus is also required.
pub fn decompose_torsion(t: &LoopTable, p: usize) -> Result<Decomposition, StructureError> {
    t.exponent()?;
    if p < 2 || prime_divisors(p) != [p] {
        return Err(StructureError::DecompositionFails(format!(
            "{p} is not prime"
        )));
    }
    let is_p_power = |mut m: usize| {
        while m.is_multiple_of(p) {
            m /= p;
        }
        m == 1
    };
    let u: ElementSet = t
        .elements()
        .filter(|&x| is_p_power(t.element_order(x)))
        .collect();
    let v: ElementSet = t
        .elements()
        .filter(|&x| gcd(t.element_order(x), p) == 1)
        .collect();
    let fail = |why: &str| Err(StructureError::DecompositionFails(why.to_string()));
    if !is_subloop(t, &u) {
        return fail("U is not a subloop");
    }
    if !is_subloop(t, &v) {
        return fail("V is not a subloop");
    }
    let product = internal_direct_product(t, &u, &v)?;
    if !product.holds {
        let why = product.failure.clone().unwrap_or_default();
        return Err(StructureError::DecompositionFails(why));
    }
    let v_in_nucleus = v.is_subset(&nucleus(t, NucleusKind::Full));
    let commutative_c = t.is_commutative() && Variety::C.identity().satisfies(t).holds;
    if commutative_c && p == 2 && !v_in_nucleus {
        return fail("V is not contained in the nucleus");
    }
    Ok(Decomposition {
        prime: p,
        u,
        v,
        v_in_nucleus,
        product,
    })
}
