use std::io::Read;

use anyhow::{bail, Context, Result};
use loopsmith::construct::standard_loop;
use loopsmith::{fixtures, Element, ElementSet, LoopTable};

/// Loads a table from `fixture:<name>`, `std:<name>[:<param>]`, `-` (stdin)
/// or a file path.
pub fn load(src: &str) -> Result<LoopTable> {
    if let Some(name) = src.strip_prefix("fixture:") {
        return Ok(fixtures::load(name)?);
    }
    if let Some(rest) = src.strip_prefix("std:") {
        let (name, param) = match rest.split_once(':') {
            Some((n, p)) => (
                n,
                Some(p.parse().with_context(|| format!("bad parameter `{p}`"))?),
            ),
            None => (rest, None),
        };
        return Ok(standard_loop(name, param)?);
    }
    let text = read_text(src)?;
    let t = LoopTable::parse(&text).with_context(|| format!("{src}: not a loop table"))?;
    Ok(t.with_name(src))
}

pub fn read_text(src: &str) -> Result<String> {
    if src == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(src).with_context(|| format!("cannot read `{src}`"))
    }
}

/// Parses `a,b,c` into a set of elements of `t`.
pub fn elements(t: &LoopTable, list: &str) -> Result<ElementSet> {
    let mut s = ElementSet::new();
    for tok in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let x: usize = tok
            .parse()
            .with_context(|| format!("bad element `{tok}`"))?;
        if x >= t.order() {
            bail!("element {x} is outside 0..{}", t.order());
        }
        s.insert(x as Element);
    }
    Ok(s)
}

pub fn element(t: &LoopTable, x: usize) -> Result<Element> {
    if x >= t.order() {
        bail!("element {x} is outside 0..{}", t.order());
    }
    Ok(x as Element)
}
