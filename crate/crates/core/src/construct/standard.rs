use crate::table::{Element, LoopTable};

use super::ConstructionError;

pub const STANDARD_NAMES: [&str; 4] = ["cyclic", "elementary_abelian_2", "klein", "octonion16"];

/// Componentwise product; pair `(i, j)` is element `i·|L2| + j`.
///
/// # Panics
/// If `|L1|·|L2|` exceeds the maximum table order.
pub fn direct_product(l1: &LoopTable, l2: &LoopTable) -> LoopTable {
    let m = l2.order();
    LoopTable::from_fn(l1.order() * m, |x, y| {
        let i = l1.product((x / m) as Element, (y / m) as Element) as usize;
        let j = l2.product((x % m) as Element, (y % m) as Element) as usize;
        i * m + j
    })
    .expect("product of loops is a loop")
}

const FANO: [[usize; 3]; 7] = [
    [1, 2, 4],
    [2, 3, 5],
    [3, 4, 6],
    [4, 5, 7],
    [5, 6, 1],
    [6, 7, 2],
    [7, 1, 3],
];

/// `e_a e_b` as `(sign, index)` with sign `true` for negative.
fn unit_product(a: usize, b: usize) -> (bool, usize) {
    if a == 0 {
        return (false, b);
    }
    if b == 0 {
        return (false, a);
    }
    if a == b {
        return (true, 0);
    }
    for t in FANO {
        for r in 0..3 {
            if t[r] == a && t[(r + 1) % 3] == b {
                return (false, t[(r + 2) % 3]);
            }
            if t[r] == b && t[(r + 1) % 3] == a {
                return (true, t[(r + 2) % 3]);
            }
        }
    }
    unreachable!("every pair of imaginary units lies on a line")
}

/// The Moufang loop of unit octonions `±e_0, …, ±e_7`, with `+e_k` as `2k`
/// and `−e_k` as `2k + 1`.
pub fn octonion16() -> LoopTable {
    LoopTable::from_fn(16, |x, y| {
        let (neg, k) = unit_product(x / 2, y / 2);
        let sign = (x % 2 == 1) ^ (y % 2 == 1) ^ neg;
        2 * k + sign as usize
    })
    .expect("octonion units form a loop")
    .with_name("octonion16")
}

/// `cyclic` (param `n`), `elementary_abelian_2` (param `k`, order `2^k`),
/// `klein`, `octonion16`.
pub fn standard_loop(name: &str, param: Option<usize>) -> Result<LoopTable, ConstructionError> {
    let need = |what: &str| {
        param.ok_or_else(|| ConstructionError::InvalidParameter(format!("{name} needs {what}")))
    };
    let t = match name.replace('-', "_").as_str() {
        "cyclic" | "z" => {
            let n = need("an order")?;
            if n == 0 {
                return Err(ConstructionError::InvalidParameter(
                    "order must be positive".into(),
                ));
            }
            LoopTable::from_fn(n, |a, b| (a + b) % n)?.with_name(format!("Z{n}"))
        }
        "elementary_abelian_2" => {
            let k = need("a rank")?;
            if k > 7 {
                return Err(ConstructionError::InvalidParameter(format!(
                    "2^{k} exceeds the maximum order"
                )));
            }
            LoopTable::from_fn(1 << k, |a, b| a ^ b)?.with_name(format!("(Z2)^{k}"))
        }
        "klein" => LoopTable::from_fn(4, |a, b| a ^ b)?.with_name("klein"),
        "octonion16" | "octonion" => octonion16(),
        _ => return Err(ConstructionError::UnknownName(name.to_string())),
    };
    Ok(t)
}
