//! `loopsmith`: command-line front end for the finite loop toolkit.
//!
//! Exit codes: 0 success or true, 1 false or not isomorphic, 2 invalid
//! input, 3 search budget exhausted.

mod report;
mod source;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use loopsmith::catalog::{check, classify_bol_moufang, Property, Variety};
use loopsmith::construct::{
    build_sts, constr_family, direct_product, extension, is_c_factor_set, standard_loop,
    steiner_loop, FactorSet, TripleSystem,
};
use loopsmith::search::{
    enumerate_sts, enumerate_with, verify_structure_claims, SearchError, SearchSpec, DEFAULT_BUDGET,
};
use loopsmith::structure::{
    associator, associator_subloop, center, check_assoc_family, cosets, decompose_torsion,
    isomorphic, lagrange_report, nucleus, quotient, AssocFamily, NucleusKind, StructureError,
};
use loopsmith::{Element, Identity, LoopTable, Verdict};
use serde_json::Value;

use report::{Field, Report};

#[derive(Parser)]
#[command(
    name = "loopsmith",
    version,
    about = "Finite loop toolkit: classify, analyze, construct and enumerate loops"
)]
struct Cli {
    /// Emit a flat JSON object instead of key=value text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a table is a loop.
    Validate { src: String },
    /// Bol-Moufang flags and named properties.
    Classify { src: String },
    /// Nuclei, center, orders, Lagrange/Cauchy report, associativity families.
    Analyze { src: String },
    /// Factor loop by a normal subloop.
    Quotient {
        src: String,
        /// Elements of the subloop, comma separated.
        #[arg(long)]
        by: String,
    },
    /// Split into p-part and p'-part and verify the direct product.
    Decompose {
        src: String,
        #[arg(long, default_value_t = 2)]
        prime: usize,
    },
    /// Build a loop or triple system.
    #[command(subcommand)]
    Construct(Construct),
    /// Enumerate loops satisfying constraints.
    Search(SearchArgs),
    /// Enumerate Steiner triple systems up to isomorphism.
    EnumerateSts {
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check nucleus-size claims on nonassociative C-loops of each order.
    Claims {
        #[arg(long, default_value_t = 14)]
        max_order: usize,
        #[arg(long, env = "LOOPSMITH_BUDGET")]
        budget: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Test two tables for isomorphism.
    Iso { first: String, second: String },
    /// Check an identity or named property.
    Check {
        src: String,
        #[arg(
            long,
            conflicts_with = "property",
            required_unless_present = "property"
        )]
        identity: Option<String>,
        #[arg(long)]
        property: Option<String>,
    },
    /// The associator [x,y,z] = (x(yz)) \ ((xy)z).
    Associator {
        src: String,
        x: usize,
        y: usize,
        z: usize,
    },
}

#[derive(Subcommand)]
enum Construct {
    /// Steiner loop of a triple system file.
    Steiner {
        sts: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bose/Skolem triple system on v points.
    Sts {
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extension of A by G with a factor set read from a matrix file.
    Factorset {
        #[arg(long)]
        g: String,
        #[arg(long)]
        a: String,
        /// |G| lines of |G| elements of A.
        #[arg(long)]
        mu: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The Klein-group family over an abelian group A.
    Family {
        #[arg(long)]
        a: String,
        #[arg(long)]
        alpha: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Direct product of two loops.
    Product {
        first: String,
        second: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// cyclic <n>, elementary_abelian_2 <k>, klein, octonion16.
    Std {
        name: String,
        param: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    order: usize,
    /// Catalog variety to require (repeatable).
    #[arg(long)]
    variety: Vec<String>,
    /// Named property to require (repeatable).
    #[arg(long)]
    property: Vec<String>,
    /// Extra identity to require (repeatable).
    #[arg(long)]
    identity: Vec<String>,
    #[arg(long)]
    nonassoc: bool,
    #[arg(long)]
    up_to_iso: bool,
    #[arg(long, env = "LOOPSMITH_BUDGET")]
    budget: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    /// Directory for one table file per model.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Number of models to retain and write.
    #[arg(long, default_value_t = 1000)]
    limit: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn yes(b: bool) -> u8 {
    if b {
        0
    } else {
        1
    }
}

fn run(cli: &Cli) -> Result<u8> {
    let json = cli.json;
    let emit = |r: &Report| print!("{}", r.render(json));
    match &cli.command {
        Command::Validate { src } => {
            let mut r = Report::new();
            match source::load(src) {
                Ok(t) => {
                    r.put("valid", Field::Bool(true))
                        .put("order", Field::int(t.order()));
                    emit(&r);
                    Ok(0)
                }
                Err(e) => {
                    r.put("valid", Field::Bool(false))
                        .put("error", Field::Text(format!("{e:#}")));
                    emit(&r);
                    Ok(2)
                }
            }
        }
        Command::Classify { src } => {
            let t = source::load(src)?;
            emit(&classify_report(&t));
            Ok(0)
        }
        Command::Analyze { src } => {
            let t = source::load(src)?;
            emit(&analyze_report(&t));
            Ok(0)
        }
        Command::Quotient { src, by } => {
            let t = source::load(src)?;
            let k = source::elements(&t, by)?;
            match quotient(&t, &k) {
                Ok(q) => {
                    if json {
                        let blocks: Vec<Value> = cosets(&t, &k)?
                            .blocks
                            .iter()
                            .map(|b| Value::from(b.to_vec()))
                            .collect();
                        let doc = serde_json::json!({
                            "order": q.order(),
                            "cosets": blocks,
                            "table": rows(&q),
                        });
                        println!("{}", serde_json::to_string_pretty(&doc)?);
                    } else {
                        print!("{}", q.to_text());
                    }
                    Ok(0)
                }
                Err(StructureError::NotASubloop) => bail!("{k} is not a subloop"),
                Err(e) => {
                    let mut r = Report::new();
                    r.put("quotient", Field::Bool(false))
                        .put("reason", Field::Text(e.to_string()));
                    emit(&r);
                    Ok(1)
                }
            }
        }
        Command::Decompose { src, prime } => {
            let t = source::load(src)?;
            let mut r = Report::new();
            r.put("prime", Field::int(*prime));
            match decompose_torsion(&t, *prime) {
                Ok(d) => {
                    r.put("u", Field::set(&d.u))
                        .put("v", Field::set(&d.v))
                        .put("v_in_nucleus", Field::Bool(d.v_in_nucleus))
                        .put("direct_product", Field::Bool(d.product.holds));
                    emit(&r);
                    Ok(0)
                }
                Err(StructureError::DecompositionFails(why)) => {
                    r.put("direct_product", Field::Bool(false))
                        .put("reason", Field::Text(why));
                    emit(&r);
                    Ok(1)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Construct(c) => construct(c, json),
        Command::Search(args) => search(args, json),
        Command::EnumerateSts { points, out } => {
            let systems = enumerate_sts(*points)?;
            if let Some(dir) = out {
                std::fs::create_dir_all(dir)?;
                for (i, s) in systems.iter().enumerate() {
                    std::fs::write(dir.join(format!("{points}_sts_{}.sts", i + 1)), s.to_text())?;
                }
            }
            let mut r = Report::new();
            r.put("points", Field::int(*points))
                .put("systems", Field::int(systems.len()));
            emit(&r);
            Ok(0)
        }
        Command::Claims {
            max_order,
            budget,
            workers,
        } => {
            let orders: Vec<usize> = (1..=*max_order).collect();
            let rep = verify_structure_claims(
                &orders,
                Some(budget.unwrap_or(DEFAULT_BUDGET)),
                workers_or_default(*workers),
            )?;
            let mut r = Report::new();
            for o in &rep.orders {
                let p = format!("order.{}", o.order);
                r.line()
                    .put(format!("{p}.classes"), Field::int(o.classes))
                    .put(
                        format!("{p}.nucleus_sizes"),
                        Field::list(
                            &o.nucleus_sizes
                                .iter()
                                .map(|&m| m as u64)
                                .collect::<Vec<_>>(),
                        ),
                    )
                    .put(format!("{p}.exhausted"), Field::Bool(o.exhausted));
            }
            let pairs: Vec<String> = rep
                .observed_pairs
                .iter()
                .map(|(n, m)| format!("({n},{m})"))
                .collect();
            r.line()
                .put(
                    "observed_pairs",
                    Field::Annotated(format!("[{}]", pairs.join(",")), Value::from(pairs.clone())),
                )
                .put("violations", Field::int(rep.violations.len()))
                .put("holds", Field::Bool(rep.holds()));
            for v in &rep.violations {
                eprintln!("violation: {v}");
            }
            emit(&r);
            if rep.orders.iter().any(|o| !o.exhausted) {
                Ok(3)
            } else {
                Ok(yes(rep.holds()))
            }
        }
        Command::Iso { first, second } => {
            let a = source::load(first)?;
            let b = source::load(second)?;
            let res = isomorphic(&a, &b);
            let mut r = Report::new();
            r.put("isomorphic", Field::Bool(res.isomorphic));
            if let Some(m) = &res.mapping {
                r.put("mapping", Field::list(m.images()));
            }
            emit(&r);
            Ok(yes(res.isomorphic))
        }
        Command::Check {
            src,
            identity,
            property,
        } => {
            let t = source::load(src)?;
            let mut r = Report::new();
            let verdict = if let Some(expr) = identity {
                let id: Identity = expr
                    .parse()
                    .map_err(|e| anyhow::anyhow!("cannot parse identity `{expr}`: {e}"))?;
                r.put("identity", Field::Text(id.to_string()));
                let v = id.satisfies(&t);
                put_verdict(&mut r, &v);
                if let Some(cx) = &v.counterexample {
                    let (l, rr) = id.evaluate(&t, &cx.values());
                    r.put("lhs", Field::int(l as usize))
                        .put("rhs", Field::int(rr as usize));
                }
                v
            } else {
                let name = property.as_deref().unwrap();
                r.put("property", Field::Text(name.to_string()));
                let v = loopsmith::check_property(&t, name)?;
                put_verdict(&mut r, &v);
                v
            };
            emit(&r);
            Ok(yes(verdict.holds))
        }
        Command::Associator { src, x, y, z } => {
            let t = source::load(src)?;
            let (x, y, z) = (
                source::element(&t, *x)?,
                source::element(&t, *y)?,
                source::element(&t, *z)?,
            );
            let a = associator(&t, x, y, z);
            let mut r = Report::new();
            r.put("associator", Field::int(a as usize));
            if t.is_power_associative_at(a) {
                r.put("order", Field::int(t.element_order(a)));
            }
            emit(&r);
            Ok(0)
        }
    }
}

fn put_verdict(r: &mut Report, v: &Verdict) {
    r.line().put("holds", Field::Bool(v.holds));
    if let Some(cx) = &v.counterexample {
        r.line().put("counterexample", Field::Text(cx.to_string()));
    }
}

fn rows(t: &LoopTable) -> Value {
    Value::from(
        t.elements()
            .map(|a| Value::from(t.row(a).to_vec()))
            .collect::<Vec<_>>(),
    )
}

fn workers_or_default(w: Option<usize>) -> usize {
    w.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .max(1)
}

fn classify_report(t: &LoopTable) -> Report {
    let mut r = Report::new();
    r.put("order", Field::int(t.order()));
    r.line();
    for (v, holds) in classify_bol_moufang(t).iter() {
        r.put(v.key(), Field::Flag(holds));
    }
    r.line();
    for p in Property::ALL {
        r.put(p.key(), Field::Flag(check(t, p).holds));
    }
    r
}

fn analyze_report(t: &LoopTable) -> Report {
    let exponent = t.exponent().ok();
    let lagrange = lagrange_report(t).ok();
    let cauchy = match &lagrange {
        None => Field::Missing,
        Some(l) if l.cauchy_holds() => Field::Bool(true),
        Some(l) => {
            let ps: Vec<String> = l
                .cauchy_violations()
                .iter()
                .map(|p| p.to_string())
                .collect();
            Field::Annotated(format!("false(p={})", ps.join(",")), Value::Bool(false))
        }
    };
    let mut r = Report::new();
    r.put("order", Field::int(t.order()))
        .put("exponent", exponent.map_or(Field::Missing, Field::int))
        .put("lagrange.cauchy", cauchy.clone());
    r.line();
    for (v, holds) in classify_bol_moufang(t).iter() {
        r.put(format!("identity_flags.{}", v.key()), Field::Flag(holds));
    }
    r.line();
    for (key, kind) in [
        ("left", NucleusKind::Left),
        ("middle", NucleusKind::Middle),
        ("right", NucleusKind::Right),
        ("full", NucleusKind::Full),
    ] {
        r.put(format!("nucleus.{key}"), Field::set(&nucleus(t, kind)));
    }
    r.line().put("center", Field::set(&center(t)));
    r.line()
        .put("exponent", exponent.map_or(Field::Missing, Field::int));
    let orders: Vec<u64> = t.elements().map(|x| t.element_order(x) as u64).collect();
    r.line().put("element_orders", Field::List(orders));
    r.line();
    match &lagrange {
        Some(l) => {
            r.put("lagrange.weak", Field::Bool(l.weak))
                .put(
                    "lagrange.weak_witness",
                    l.weak_witness.as_ref().map_or(Field::Missing, Field::set),
                )
                .put("lagrange.monogenic", Field::Bool(l.monogenic))
                .put("lagrange.cauchy", cauchy)
                .put(
                    "lagrange.cauchy_violations",
                    Field::List(l.cauchy_violations().iter().map(|&p| p as u64).collect()),
                );
        }
        None => {
            for k in [
                "lagrange.weak",
                "lagrange.weak_witness",
                "lagrange.monogenic",
                "lagrange.cauchy",
                "lagrange.cauchy_violations",
            ] {
                r.put(k, Field::Missing);
            }
        }
    }
    r.line().put(
        "power_associative",
        Field::Bool(check_assoc_family(t, AssocFamily::PowerAssociative).holds),
    );
    let di = check_assoc_family(t, AssocFamily::Diassociative);
    r.put("diassociative", Field::Bool(di.holds));
    if let Some(cx) = &di.counterexample {
        r.put("diassociative.witness", Field::list(&cx.values()));
    }
    r.line()
        .put("associator_subloop", Field::set(&associator_subloop(t)));
    r
}

fn write_or_print(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_table(t: &LoopTable, out: &Option<PathBuf>, json: bool) -> Result<u8> {
    if json && out.is_none() {
        let doc = serde_json::json!({ "order": t.order(), "table": rows(t) });
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        write_or_print(out, &t.to_text())?;
    }
    Ok(0)
}

fn read_matrix(path: &str) -> Result<Vec<Element>> {
    let text = source::read_text(path)?;
    let mut out = Vec::new();
    for tok in text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .flat_map(str::split_whitespace)
    {
        let v: usize = tok
            .parse()
            .with_context(|| format!("bad matrix entry `{tok}`"))?;
        out.push(Element::try_from(v).with_context(|| format!("entry {v} too large"))?);
    }
    Ok(out)
}

fn construct(c: &Construct, json: bool) -> Result<u8> {
    match c {
        Construct::Steiner { sts, out } => {
            let ts = TripleSystem::parse(&source::read_text(sts)?)?;
            emit_table(&steiner_loop(&ts)?, out, json)
        }
        Construct::Sts { points, out } => {
            write_or_print(out, &build_sts(*points)?.to_text())?;
            Ok(0)
        }
        Construct::Factorset { g, a, mu, out } => {
            let fs = FactorSet::new(source::load(g)?, source::load(a)?, read_matrix(mu)?)?;
            if !is_c_factor_set(&fs).holds {
                eprintln!("note: the factor set does not yield a C-loop");
            }
            emit_table(&extension(&fs)?, out, json)
        }
        Construct::Family { a, alpha, out } => {
            let a = source::load(a)?;
            let alpha = source::element(&a, *alpha)?;
            emit_table(&constr_family(&a, alpha)?, out, json)
        }
        Construct::Product { first, second, out } => {
            let (x, y) = (source::load(first)?, source::load(second)?);
            if x.order() * y.order() > loopsmith::table::MAX_ORDER {
                bail!("product order {} is too large", x.order() * y.order());
            }
            emit_table(&direct_product(&x, &y), out, json)
        }
        Construct::Std { name, param, out } => emit_table(&standard_loop(name, *param)?, out, json),
    }
}

fn search(args: &SearchArgs, json: bool) -> Result<u8> {
    let mut spec = SearchSpec::new(args.order);
    let mut parts = Vec::new();
    for v in &args.variety {
        let var: Variety = v.parse()?;
        parts.push(var.key().to_string());
        spec = spec.variety(var);
    }
    for p in &args.property {
        parts.push(p.clone());
        spec = spec.property(p.clone());
    }
    for expr in &args.identity {
        let id: Identity = expr
            .parse()
            .map_err(|e| anyhow::anyhow!("cannot parse identity `{expr}`: {e}"))?;
        parts.push(id.to_string().replace(' ', ""));
        spec = spec.identity(id);
    }
    if parts.is_empty() {
        parts.push("loop".to_string());
    }
    let base = parts.join("+");
    spec.forbid_associative = args.nonassoc;
    spec.up_to_isomorphism = args.up_to_iso;
    spec.node_budget = Some(args.budget.unwrap_or(DEFAULT_BUDGET));
    spec.table_limit = Some(args.limit);
    let out = match enumerate_with(&spec, workers_or_default(args.workers)) {
        Ok(o) => o,
        Err(e @ SearchError::UnknownProperty(_)) => bail!(e),
        Err(e) => return Err(e.into()),
    };
    if let Some(dir) = &args.out {
        std::fs::create_dir_all(dir)?;
        let tag: String = base
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() { c } else { '-' })
            .collect();
        for (i, t) in out.tables.iter().enumerate() {
            let path = dir.join(format!("{}_{}_{}.tbl", args.order, tag, i + 1));
            std::fs::write(path, t.to_text())?;
        }
    }
    let constraint = if args.nonassoc {
        format!("{base}+nonassoc")
    } else {
        base
    };
    let mut r = Report::new();
    r.put("order", Field::int(args.order))
        .put("constraint", Field::Text(constraint))
        .put("classes", Field::int(out.count))
        .put("exhausted", Field::Bool(out.exhausted));
    print!("{}", r.render(json));
    Ok(if out.exhausted { 0 } else { 3 })
}
