//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails. Runs without the test harness so the
//! report is always shown.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use loopsmith::catalog::{check, classify_bol_moufang, Property, Variety};
use loopsmith::construct::{
    build_sts, constr_factor_set, constr_family, direct_product, extension, is_c_factor_set,
    standard_loop, steiner_loop, FactorSet,
};
use loopsmith::search::{enumerate_sts, enumerate_with, SearchSpec};
use loopsmith::structure::{
    associator, associator_subloop, check_assoc_family, decompose_torsion, generate_subloop,
    is_normal, is_subloop, isomorphic, lagrange_report, nucleus, quotient, squaring_kernel,
    subloop_table, AssocFamily, NucleusKind,
};
use loopsmith::{fixtures, Element, ElementSet, LoopTable};
use rand::{Rng, SeedableRng};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn fixture(name: &str) -> LoopTable {
    fixtures::load(name).unwrap()
}

fn cyclic(n: usize) -> LoopTable {
    standard_loop("cyclic", Some(n)).unwrap()
}

fn set(xs: &[Element]) -> ElementSet {
    xs.iter().copied().collect()
}

fn within(start: Instant, limit: Duration) -> Outcome {
    let took = start.elapsed();
    ensure!(took <= limit, "took {took:?}, limit {limit:?}");
    Ok(())
}

fn c1_fixture_validation() -> Outcome {
    let start = Instant::now();
    for name in fixtures::NAMES {
        let text = fixtures::text(name).unwrap();
        let t = LoopTable::parse(text).map_err(|e| format!("{name}: {e}"))?;
        ensure!(t.order() >= 10, "{name}: order {}", t.order());
    }
    within(start, Duration::from_secs(1))
}

fn c2_c_identity() -> Outcome {
    let start = Instant::now();
    let c = Variety::C.identity();
    for name in fixtures::C_LOOPS {
        ensure!(
            c.satisfies(&fixture(name)).holds,
            "{name} fails the C identity"
        );
    }
    let ip = fixture("ipnuc12");
    let v = c.satisfies(&ip);
    ensure!(!v.holds, "ipnuc12 satisfies the C identity");
    let cx = v.counterexample.ok_or("no counterexample")?.values();
    let (l, r) = c.evaluate(&ip, &cx);
    ensure!(l != r, "counterexample {cx:?} does not separate the sides");
    within(start, Duration::from_secs(1))
}

fn c3_nuclei() -> Outcome {
    let start = Instant::now();
    let n14 = nucleus(&fixture("ex14a"), NucleusKind::Full);
    ensure!(n14.to_vec() == vec![0], "nucleus(ex14a) = {n14}");
    let ex12 = fixture("ex12");
    let kinds = [
        NucleusKind::Left,
        NucleusKind::Middle,
        NucleusKind::Right,
        NucleusKind::Full,
    ];
    let ns: Vec<ElementSet> = kinds.iter().map(|&k| nucleus(&ex12, k)).collect();
    ensure!(ns[3].len() == 3, "nucleus(ex12) = {}", ns[3]);
    ensure!(
        ns.iter().all(|n| *n == ns[0]),
        "nuclei of ex12 differ: {ns:?}"
    );
    let ip = fixture("ipnuc12");
    let n = nucleus(&ip, NucleusKind::Full);
    ensure!(n.contains(1) && !n.contains(2), "nucleus(ipnuc12) = {n}");
    ensure!(
        !is_normal(&ip, &n).unwrap().holds,
        "nucleus of ipnuc12 is normal"
    );
    within(start, Duration::from_secs(1))
}

fn c4_quotients() -> Outcome {
    let start = Instant::now();
    let ex12 = fixture("ex12");
    let q = quotient(&ex12, &nucleus(&ex12, NucleusKind::Full)).map_err(|e| e.to_string())?;
    ensure!(q.order() == 4, "|ex12 / N| = {}", q.order());
    ensure!(
        check(&q, Property::Steiner).holds,
        "ex12 / N is not Steiner"
    );
    for name in fixtures::C_LOOPS {
        let t = fixture(name);
        let q =
            quotient(&t, &nucleus(&t, NucleusKind::Full)).map_err(|e| format!("{name}: {e}"))?;
        ensure!(
            check(&q, Property::Steiner).holds,
            "{name} / N is not Steiner"
        );
    }
    within(start, Duration::from_secs(1))
}

fn c5_associators() -> Outcome {
    let ex12 = fixture("ex12");
    let a = associator(&ex12, 11, 8, 9);
    ensure!(a == 2, "[11,8,9] = {a} in ex12");
    ensure!(
        ex12.element_order(a) == 3,
        "|2| = {}",
        ex12.element_order(a)
    );
    let ex14a = fixture("ex14a");
    let a = associator(&ex14a, 13, 12, 1);
    ensure!(a == 10, "[13,12,1] = {a} in ex14a");
    ensure!(
        !nucleus(&ex14a, NucleusKind::Full).contains(10),
        "10 is nuclear in ex14a"
    );
    Ok(())
}

fn c6_power_associativity() -> Outcome {
    let start = Instant::now();
    let ex12 = fixture("ex12");
    for f in [
        AssocFamily::PowerAssociative,
        AssocFamily::LeftPowerAlternative,
        AssocFamily::RightPowerAlternative,
    ] {
        ensure!(check_assoc_family(&ex12, f).holds, "ex12 fails {f:?}");
    }
    ensure!(
        !check_assoc_family(&ex12, AssocFamily::Diassociative).holds,
        "ex12 is diassociative"
    );
    let w = generate_subloop(&ex12, &set(&[5, 6]));
    ensure!(w.len() == 12, "<5,6> = {w}");
    let assoc = w.iter().all(|x| {
        w.iter().all(|y| {
            w.iter()
                .all(|z| ex12.product(x, ex12.product(y, z)) == ex12.product(ex12.product(x, y), z))
        })
    });
    ensure!(!assoc, "<5,6> is associative");
    let g5 = generate_subloop(&ex12, &set(&[5]));
    ensure!(g5.to_vec() == vec![0, 1, 2, 3, 4, 5], "<5> = {g5}");
    for name in fixtures::C_LOOPS {
        let t = fixture(name);
        for x in t.elements() {
            ensure!(
                t.order().is_multiple_of(t.element_order(x)),
                "{name}: |{x}| does not divide |L|"
            );
        }
    }
    let r = lagrange_report(&fixture("ex14a")).map_err(|e| e.to_string())?;
    ensure!(!r.weak, "ex14a has the weak Lagrange property");
    let sub = set(&[0, 1, 2, 3]);
    ensure!(
        is_subloop(&fixture("ex14a"), &sub),
        "{{0,1,2,3}} is not a subloop of ex14a"
    );
    ensure!(r.weak_witness == Some(sub), "witness {:?}", r.weak_witness);
    let r = lagrange_report(&fixture("ex10")).map_err(|e| e.to_string())?;
    ensure!(
        r.cauchy_violations() == vec![5],
        "ex10 cauchy {:?}",
        r.cauchy
    );
    within(start, Duration::from_secs(5))
}

fn c7_commutative_suite() -> Outcome {
    let start = Instant::now();
    let t = fixture("ex16");
    ensure!(t.is_commutative(), "ex16 is not commutative");
    let sq = |x: Element| t.product(x, x);
    for x in t.elements() {
        for y in t.elements() {
            let xy = t.product(x, y);
            ensure!(
                sq(xy) == t.product(sq(x), sq(y)),
                "(xy)^2 != x^2 y^2 at ({x},{y})"
            );
        }
    }
    let k = squaring_kernel(&t);
    ensure!(
        k.is_subloop && k.is_normal == Some(true),
        "squaring kernel {k:?}"
    );
    ensure!(k.quotient_is_group == Some(true), "L/K is not a group");
    let q = quotient(&t, &k.members).map_err(|e| e.to_string())?;
    ensure!(q.is_associative(), "L/K is not associative");
    for a in associator_subloop(&t).iter() {
        ensure!(sq(a) == 0, "associator {a} squares to {}", sq(a));
    }
    within(start, Duration::from_secs(1))
}

fn c8_constructions() -> Outcome {
    let start = Instant::now();
    let l9 = steiner_loop(&build_sts(9).unwrap()).unwrap();
    ensure!(
        isomorphic(&l9, &fixture("ex10")).isomorphic,
        "steiner(9) is not ex10"
    );
    let l7 = steiner_loop(&build_sts(7).unwrap()).unwrap();
    let e8 = standard_loop("elementary_abelian_2", Some(3)).unwrap();
    ensure!(isomorphic(&l7, &e8).isomorphic, "steiner(7) is not (Z2)^3");
    let fam = constr_family(&cyclic(3), 2).map_err(|e| e.to_string())?;
    ensure!(
        isomorphic(&fam, &fixture("ex12")).isomorphic,
        "constr(Z3, 2) is not ex12"
    );

    let c = Variety::C.identity();
    let fs = constr_factor_set(&cyclic(3), 2).unwrap();
    ensure!(
        is_c_factor_set(&fs).holds,
        "the family factor set fails the C condition"
    );
    ensure!(
        c.satisfies(&extension(&fs).unwrap()).holds,
        "family extension is not C"
    );
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let klein = standard_loop("klein", None).unwrap();
    let mut agree = 0;
    let mut c_count = 0;
    for i in 0..1000 {
        let mut mu = vec![0; 16];
        for g in 1..4 {
            for h in 1..4 {
                mu[g * 4 + h] = rng.gen_range(0..3);
            }
        }
        let fs = FactorSet::new(klein.clone(), cyclic(3), mu).unwrap();
        let by_condition = is_c_factor_set(&fs).holds;
        let by_loop = c.satisfies(&extension(&fs).unwrap()).holds;
        ensure!(
            by_condition == by_loop,
            "sample {i}: condition {by_condition}, loop {by_loop}"
        );
        agree += 1;
        c_count += by_loop as usize;
    }
    println!("    1000 random factor sets: {agree} agree, {c_count} give C-loops");
    within(start, Duration::from_secs(30))
}

fn c9_octonions() -> Outcome {
    let start = Instant::now();
    let o = standard_loop("octonion16", None).unwrap();
    let flags = classify_bol_moufang(&o);
    for v in [Variety::Moufang, Variety::Extra, Variety::C] {
        ensure!(flags.has(v), "octonion16 lacks {}", v.key());
    }
    ensure!(!o.is_commutative(), "octonion16 is commutative");
    let n = nucleus(&o, NucleusKind::Full);
    ensure!(n.len() == 2, "nucleus(octonion16) = {n}");
    within(start, Duration::from_secs(1))
}

fn c10_decomposition() -> Outcome {
    let start = Instant::now();
    let ex16 = fixture("ex16");
    let z3 = cyclic(3);
    let p = direct_product(&ex16, &z3);
    let d = decompose_torsion(&p, 2).map_err(|e| e.to_string())?;
    ensure!(
        d.u.len() == 16 && d.v.len() == 3,
        "|U| = {}, |V| = {}",
        d.u.len(),
        d.v.len()
    );
    ensure!(d.v_in_nucleus, "V is not nuclear");
    ensure!(
        d.product.holds,
        "direct product check failed: {:?}",
        d.product.failure
    );
    let u = subloop_table(&p, &d.u).unwrap();
    let v = subloop_table(&p, &d.v).unwrap();
    ensure!(isomorphic(&u, &ex16).isomorphic, "U is not ex16");
    ensure!(isomorphic(&v, &z3).isomorphic, "V is not Z3");
    // the returned map really is an isomorphism onto U x V
    let phi = d.product.isomorphism.unwrap();
    let uv = direct_product(&u, &v);
    for x in p.elements() {
        for y in p.elements() {
            ensure!(
                phi.apply(p.product(x, y)) == uv.product(phi.apply(x), phi.apply(y)),
                "map fails at ({x},{y})"
            );
        }
    }
    within(start, Duration::from_secs(10))
}

fn c11_enumeration() -> Outcome {
    let start = Instant::now();
    let mut pairs = BTreeSet::new();
    for n in (1..=10).chain([12]) {
        let spec = SearchSpec::new(n)
            .variety(Variety::C)
            .nonassociative()
            .up_to_iso();
        let out = enumerate_with(&spec, 1).map_err(|e| e.to_string())?;
        ensure!(out.exhausted, "order {n}: budget exhausted");
        let expect = if n == 10 || n == 12 { 1 } else { 0 };
        ensure!(out.count == expect, "order {n}: {} classes", out.count);
        for t in &out.tables {
            pairs.insert((n, nucleus(t, NucleusKind::Full).len()));
        }
        if n == 12 {
            ensure!(
                isomorphic(&out.tables[0], &fixture("ex12")).isomorphic,
                "order 12 model is not ex12"
            );
        }
        if n == 10 {
            ensure!(
                isomorphic(&out.tables[0], &fixture("ex10")).isomorphic,
                "order 10 model is not ex10"
            );
        }
    }
    let allowed: BTreeSet<_> = [(10, 1), (12, 3)].into_iter().collect();
    ensure!(pairs.is_subset(&allowed), "observed pairs {pairs:?}");
    println!("    orders 1-12: pairs {pairs:?} in {:?}", start.elapsed());
    within(start, Duration::from_secs(600))?;

    let sts_start = Instant::now();
    let systems = enumerate_sts(13).map_err(|e| e.to_string())?;
    ensure!(systems.len() == 2, "{} systems on 13 points", systems.len());
    let loops: Vec<_> = systems.iter().map(|s| steiner_loop(s).unwrap()).collect();
    for name in ["ex14a", "ex14b"] {
        let f = fixture(name);
        let hits = loops
            .iter()
            .filter(|l| isomorphic(l, &f).isomorphic)
            .count();
        ensure!(hits == 1, "{name} matches {hits} systems");
    }
    for l in &loops {
        ensure!(
            nucleus(l, NucleusKind::Full).len() == 1,
            "order-14 Steiner loop with nontrivial nucleus"
        );
    }
    within(sts_start, Duration::from_secs(60))?;

    let s14 = Instant::now();
    let spec = SearchSpec::new(14)
        .variety(Variety::C)
        .nonassociative()
        .up_to_iso();
    let out = enumerate_with(&spec, 1).map_err(|e| e.to_string())?;
    ensure!(
        out.exhausted && out.count == 2,
        "order 14: {} classes, exhausted {}",
        out.count,
        out.exhausted
    );
    for t in &out.tables {
        ensure!(
            check(t, Property::Steiner).holds,
            "order-14 model is not Steiner"
        );
        ensure!(
            nucleus(t, NucleusKind::Full).len() == 1,
            "order-14 model has nontrivial nucleus"
        );
    }
    for name in ["ex14a", "ex14b"] {
        let f = fixture(name);
        let hits = out
            .tables
            .iter()
            .filter(|t| isomorphic(t, &f).isomorphic)
            .count();
        ensure!(hits == 1, "{name} matches {hits} order-14 models");
    }
    println!(
        "    order 14 direct search: 2 classes, {} nodes, {:?}",
        out.nodes,
        s14.elapsed()
    );
    within(s14, Duration::from_secs(7200))?;
    Ok(())
}

/// Every normalized Latin square, then classes by trying every relabeling.
fn naive_class_count(n: usize) -> usize {
    fn squares(n: usize, cells: &mut Vec<usize>, idx: usize, out: &mut Vec<Vec<usize>>) {
        if idx == n * n {
            out.push(cells.clone());
            return;
        }
        let (r, c) = (idx / n, idx % n);
        if r == 0 || c == 0 {
            cells[idx] = r + c;
            return squares(n, cells, idx + 1, out);
        }
        for v in 0..n {
            if (0..c).all(|j| cells[r * n + j] != v) && (0..r).all(|i| cells[i * n + c] != v) {
                cells[idx] = v;
                squares(n, cells, idx + 1, out);
            }
        }
    }
    fn perms(k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(k - 1) {
            for i in 0..=p.len() {
                let mut q = p.clone();
                q.insert(i, k - 1);
                out.push(q);
            }
        }
        out
    }
    let mut all = Vec::new();
    squares(n, &mut vec![0; n * n], 0, &mut all);
    let relabelings: Vec<Vec<usize>> = perms(n - 1)
        .into_iter()
        .map(|p| {
            std::iter::once(0)
                .chain(p.into_iter().map(|x| x + 1))
                .collect()
        })
        .collect();
    let mut canon = BTreeSet::new();
    for cells in all {
        let best = relabelings
            .iter()
            .map(|phi| {
                let mut inv = vec![0; n];
                for (i, &p) in phi.iter().enumerate() {
                    inv[p] = i;
                }
                (0..n * n)
                    .map(|idx| phi[cells[inv[idx / n] * n + inv[idx % n]]])
                    .collect::<Vec<_>>()
            })
            .min()
            .unwrap();
        canon.insert(best);
    }
    canon.len()
}

fn c12_calibration() -> Outcome {
    let start = Instant::now();
    let mut found = Vec::new();
    for n in 1..=5 {
        let out = enumerate_with(&SearchSpec::new(n).up_to_iso(), 1).map_err(|e| e.to_string())?;
        let oracle = naive_class_count(n);
        ensure!(
            out.count == oracle,
            "n = {n}: search {} oracle {oracle}",
            out.count
        );
        found.push(out.count);
    }
    ensure!(found == vec![1, 1, 1, 2, 6], "counts {found:?}");
    within(start, Duration::from_secs(60))
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_loopsmith"))
        .args(args)
        .env_remove("LOOPSMITH_BUDGET")
        .output()
        .expect("run loopsmith");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

fn c13_determinism() -> Outcome {
    let c = Variety::C.identity().to_string();
    let mut runs: Vec<Vec<String>> = Vec::new();
    for name in fixtures::NAMES {
        runs.push(vec![
            "check".into(),
            format!("fixture:{name}"),
            "--identity".into(),
            c.clone(),
        ]);
    }
    runs.push(
        ["associator", "fixture:ex12", "11", "8", "9"]
            .map(String::from)
            .to_vec(),
    );
    runs.push(
        ["associator", "fixture:ex14a", "13", "12", "1"]
            .map(String::from)
            .to_vec(),
    );
    for args in &runs {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = cli(&args);
        let second = cli(&args);
        ensure!(first == second, "{args:?} differs between runs");
    }
    let (code, text) = cli(&["check", "fixture:ipnuc12", "--identity", &c]);
    ensure!(
        code == 1 && text.contains("counterexample="),
        "ipnuc12 check: exit {code}, {text}"
    );
    let (code, text) = cli(&["associator", "fixture:ex12", "11", "8", "9"]);
    ensure!(
        code == 0 && text.contains("associator=2"),
        "associator: {text}"
    );

    for n in ["9", "10", "12", "14"] {
        let base = [
            "search",
            "--order",
            n,
            "--variety",
            "C",
            "--nonassoc",
            "--up-to-iso",
        ];
        let one = cli(&[&base[..], &["--workers", "1"]].concat());
        let four = cli(&[&base[..], &["--workers", "4"]].concat());
        ensure!(one == four, "order {n}: workers 1 {one:?} vs 4 {four:?}");
        ensure!(one.0 == 0, "order {n}: exit {}", one.0);
        ensure!(one.1.contains("exhausted=true"), "order {n}: {}", one.1);
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("fixture validation", c1_fixture_validation),
        ("C identity on fixtures", c2_c_identity),
        ("nucleus claims", c3_nuclei),
        ("quotients by the nucleus", c4_quotients),
        ("associator values", c5_associators),
        ("power associativity and Lagrange", c6_power_associativity),
        ("commutative C-loop suite", c7_commutative_suite),
        ("construction equivalences", c8_constructions),
        ("octonion loop", c9_octonions),
        ("torsion decomposition", c10_decomposition),
        ("enumeration", c11_enumeration),
        ("calibration oracle", c12_calibration),
        ("determinism", c13_determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        match &res {
            Ok(()) => println!("criterion {:>2} PASS  {name} ({took:.2?})", i + 1),
            Err(e) => {
                println!("criterion {:>2} FAIL  {name} ({took:.2?}): {e}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", criteria.len());
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
