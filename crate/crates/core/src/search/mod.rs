//! Exhaustive enumeration of loops satisfying identities.
//!
//! Cells are completed in row-major order with ascending candidate values.
//! After each decision the board is propagated to a fixpoint: Latin naked
//! and hidden singles, plus every instance of every required identity whose
//! two sides are partly known (a known side forces the cell read by the other
//! side, directly or through a division already in the table).
//!
//! With `up_to_isomorphism`, row 1 is fixed to the least relabeling of a left
//! translation of each admissible cycle type, and rows whose own least
//! relabeling is smaller are pruned; the surviving tables are then reduced
//! with the isomorphism test.

mod claims;
mod engine;
mod sts;

pub use claims::{verify_structure_claims, ClaimsReport, OrderSummary};
pub use sts::enumerate_sts;

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use thiserror::Error;

use crate::catalog::{check, Property, Variety};
use crate::identity::Identity;
use crate::structure::{invariant_vector, isomorphic};
use crate::table::LoopTable;

use engine::{bits, row_orders, Board, Budget, Compiled, RowOrder, MAX_SEARCH_ORDER, MAX_VARS};

pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("order must be between 1 and {MAX_SEARCH_ORDER}, got {0}")]
    InvalidOrder(usize),
    #[error("node budget must be positive")]
    ZeroBudget,
    #[error("unknown property `{0}`")]
    UnknownProperty(String),
    #[error("no Steiner triple system on {0} points")]
    InadmissibleOrder(usize),
    #[error("identity `{0}` has more than {MAX_VARS} variables")]
    TooManyVariables(String),
}

#[derive(Debug, Clone)]
pub struct SearchSpec {
    pub order: usize,
    pub identities: Vec<Identity>,
    /// Property or variety names, checked on every complete table.
    pub properties: Vec<String>,
    pub forbid_associative: bool,
    pub up_to_isomorphism: bool,
    pub node_budget: Option<u64>,
    pub table_limit: Option<usize>,
}

impl SearchSpec {
    pub fn new(order: usize) -> Self {
        SearchSpec {
            order,
            identities: Vec::new(),
            properties: Vec::new(),
            forbid_associative: false,
            up_to_isomorphism: false,
            node_budget: None,
            table_limit: None,
        }
    }

    pub fn identity(mut self, id: Identity) -> Self {
        self.identities.push(id);
        self
    }

    pub fn variety(self, v: Variety) -> Self {
        self.identity(v.identity())
    }

    pub fn property(mut self, name: impl Into<String>) -> Self {
        self.properties.push(name.into());
        self
    }

    pub fn nonassociative(mut self) -> Self {
        self.forbid_associative = true;
        self
    }

    pub fn up_to_iso(mut self) -> Self {
        self.up_to_isomorphism = true;
        self
    }

    pub fn budget(mut self, nodes: u64) -> Self {
        self.node_budget = Some(nodes);
        self
    }

    pub fn limit(mut self, tables: usize) -> Self {
        self.table_limit = Some(tables);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    /// Models found, or isomorphism classes when requested.
    pub count: usize,
    /// The first `table_limit` models in search order.
    pub tables: Vec<LoopTable>,
    /// True when the whole space was explored; the count is then exact.
    pub exhausted: bool,
    pub nodes: u64,
}

enum Filter {
    Property(Property),
    Variety(Variety),
}

struct Plan {
    n: usize,
    compiled: Vec<Compiled>,
    identities: Vec<Identity>,
    filters: Vec<Filter>,
    forbid_associative: bool,
}

fn plan(spec: &SearchSpec) -> Result<Plan, SearchError> {
    let n = spec.order;
    if n == 0 || n > MAX_SEARCH_ORDER {
        return Err(SearchError::InvalidOrder(n));
    }
    if spec.node_budget == Some(0) {
        return Err(SearchError::ZeroBudget);
    }
    let mut identities = spec.identities.clone();
    let mut filters = Vec::new();
    for name in &spec.properties {
        if let Ok(p) = name.parse::<Property>() {
            identities.extend(p.identities());
            filters.push(Filter::Property(p));
        } else if let Ok(v) = name.parse::<Variety>() {
            identities.push(v.identity());
            filters.push(Filter::Variety(v));
        } else {
            return Err(SearchError::UnknownProperty(name.clone()));
        }
    }
    if let Some(id) = identities.iter().find(|id| id.vars().len() > MAX_VARS) {
        return Err(SearchError::TooManyVariables(id.to_string()));
    }
    Ok(Plan {
        n,
        compiled: identities.iter().map(Compiled::new).collect(),
        identities,
        filters,
        forbid_associative: spec.forbid_associative,
    })
}

impl Plan {
    /// Independent re-check of a completed table.
    fn accept(&self, cells: &[u8]) -> Option<LoopTable> {
        let t = LoopTable::from_cells(self.n, cells.to_vec())
            .expect("search produced an invalid loop table");
        for id in &self.identities {
            assert!(
                id.satisfies(&t).holds,
                "search produced a table violating {id}"
            );
        }
        let ok = self.filters.iter().all(|f| match f {
            Filter::Property(p) => check(&t, *p).holds,
            Filter::Variety(v) => v.identity().satisfies(&t).holds,
        });
        (ok && !(self.forbid_associative && t.is_associative())).then_some(t)
    }
}

struct Item {
    order: Option<usize>,
    first: Option<(usize, u8)>,
}

#[derive(Default)]
struct ItemResult {
    count: usize,
    tables: Vec<LoopTable>,
}

struct Run<'a> {
    plan: &'a Plan,
    keep_all: bool,
    limit: usize,
}

impl Run<'_> {
    fn dfs(&self, board: &mut Board, out: &mut ItemResult) {
        if board.stopped() {
            return;
        }
        let Some(idx) = board.first_empty() else {
            if let Some(t) = self.plan.accept(&board.cells) {
                out.count += 1;
                if self.keep_all || out.tables.len() < self.limit {
                    out.tables.push(t);
                }
            }
            return;
        };
        for v in bits(board.branch_candidates(idx)) {
            let mark = board.mark();
            if board.assign(idx, v as u8) && board.propagate() {
                self.dfs(board, out);
            }
            board.undo(mark);
            if board.stopped() {
                return;
            }
        }
    }
}

/// Runs the search on all available cores.
pub fn enumerate(spec: &SearchSpec) -> Result<SearchOutcome, SearchError> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    enumerate_with(spec, workers)
}

pub fn enumerate_with(spec: &SearchSpec, workers: usize) -> Result<SearchOutcome, SearchError> {
    let plan = plan(spec)?;
    let n = plan.n;
    let budget = Budget::new(spec.node_budget.unwrap_or(DEFAULT_BUDGET));
    let orders: Vec<RowOrder> = if spec.up_to_isomorphism && n > 1 {
        row_orders(n)
    } else {
        Vec::new()
    };

    // split each top-level board on the candidates of its first open cell
    let mut items = Vec::new();
    let tops: Vec<Option<usize>> = if orders.is_empty() {
        vec![None]
    } else {
        (0..orders.len()).map(Some).collect()
    };
    for o in tops {
        let mut board = Board::new(n, &plan.compiled, o.map(|i| &orders[i]), &budget);
        if !board.propagate() {
            continue;
        }
        match board.first_empty() {
            None => items.push(Item {
                order: o,
                first: None,
            }),
            Some(idx) => {
                for v in bits(board.branch_candidates(idx)) {
                    items.push(Item {
                        order: o,
                        first: Some((idx, v as u8)),
                    });
                }
            }
        }
    }

    let run = Run {
        plan: &plan,
        keep_all: spec.up_to_isomorphism,
        limit: spec.table_limit.unwrap_or(usize::MAX),
    };
    let results: Vec<Mutex<Option<ItemResult>>> = items.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let work = || loop {
        let i = next.fetch_add(1, Ordering::Relaxed);
        let Some(item) = items.get(i) else {
            break;
        };
        let mut board = Board::new(n, &plan.compiled, item.order.map(|k| &orders[k]), &budget);
        let mut out = ItemResult::default();
        let ok = board.propagate()
            && item
                .first
                .is_none_or(|(idx, v)| board.assign(idx, v) && board.propagate());
        if ok {
            run.dfs(&mut board, &mut out);
        }
        board.flush();
        *results[i].lock().unwrap() = Some(out);
    };
    std::thread::scope(|s| {
        for _ in 1..workers.max(1) {
            s.spawn(work);
        }
        work();
    });

    let exhausted = !budget.hit.load(Ordering::Relaxed);
    let nodes = budget.used.load(Ordering::Relaxed);
    let limit = run.limit;
    let mut count = 0;
    let mut tables = Vec::new();
    let mut reps: Vec<(Vec<[usize; 4]>, LoopTable)> = Vec::new();
    for r in results {
        let r = r.into_inner().unwrap().unwrap_or_default();
        if spec.up_to_isomorphism {
            for t in r.tables {
                let mut key = invariant_vector(&t);
                key.sort_unstable();
                let dup = reps
                    .iter()
                    .any(|(k, u)| *k == key && isomorphic(u, &t).isomorphic);
                if !dup {
                    reps.push((key, t));
                }
            }
        } else {
            count += r.count;
            for t in r.tables {
                if tables.len() < limit {
                    tables.push(t);
                }
            }
        }
    }
    if spec.up_to_isomorphism {
        count = reps.len();
        tables = reps.into_iter().map(|(_, t)| t).take(limit).collect();
    }
    Ok(SearchOutcome {
        count,
        tables,
        exhausted,
        nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    /// Every normalized Latin square of order n, by plain backtracking.
    fn naive_loops(n: usize) -> Vec<LoopTable> {
        fn rec(n: usize, cells: &mut Vec<usize>, idx: usize, out: &mut Vec<LoopTable>) {
            if idx == n * n {
                out.push(LoopTable::from_fn(n, |a, b| cells[a * n + b]).unwrap());
                return;
            }
            let (r, c) = (idx / n, idx % n);
            if r == 0 || c == 0 {
                cells[idx] = r + c;
                return rec(n, cells, idx + 1, out);
            }
            for v in 0..n {
                let clash =
                    (0..c).any(|j| cells[r * n + j] == v) || (0..r).any(|i| cells[i * n + c] == v);
                if !clash {
                    cells[idx] = v;
                    rec(n, cells, idx + 1, out);
                }
            }
        }
        let mut out = Vec::new();
        rec(n, &mut vec![0; n * n], 0, &mut out);
        out
    }

    fn naive_classes(n: usize) -> usize {
        let mut reps: Vec<LoopTable> = Vec::new();
        for t in naive_loops(n) {
            if !reps.iter().any(|r| isomorphic(r, &t).isomorphic) {
                reps.push(t);
            }
        }
        reps.len()
    }

    #[test]
    fn labelled_counts_match_naive() {
        for n in 1..=5 {
            let out = enumerate_with(&SearchSpec::new(n), 1).unwrap();
            assert_eq!(out.count, naive_loops(n).len(), "n = {n}");
            assert!(out.exhausted);
        }
    }

    #[test]
    fn class_counts_match_naive() {
        for n in 1..=5 {
            let out = enumerate_with(&SearchSpec::new(n).up_to_iso(), 1).unwrap();
            assert_eq!(out.count, naive_classes(n), "n = {n}");
        }
        let counts: Vec<usize> = (1..=5)
            .map(|n| {
                enumerate_with(&SearchSpec::new(n).up_to_iso(), 2)
                    .unwrap()
                    .count
            })
            .collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 6]);
    }

    #[test]
    fn variety_counts_match_naive() {
        for n in 1..=6 {
            let loops = naive_loops(n);
            for v in Variety::ALL {
                let id = v.identity();
                let members: Vec<&LoopTable> =
                    loops.iter().filter(|t| id.satisfies(t).holds).collect();
                if n <= 5 {
                    let out = enumerate_with(&SearchSpec::new(n).variety(v), 1).unwrap();
                    assert_eq!(out.count, members.len(), "{v}, n = {n}");
                }
                let mut reps: Vec<&LoopTable> = Vec::new();
                for t in members {
                    if !reps.iter().any(|r| isomorphic(r, t).isomorphic) {
                        reps.push(t);
                    }
                }
                let out = enumerate_with(&SearchSpec::new(n).variety(v).up_to_iso(), 1).unwrap();
                assert_eq!(out.count, reps.len(), "{v} classes, n = {n}");
            }
        }
    }

    #[test]
    fn class_counts_match_labelled_dedup() {
        for (n, v) in [
            (7, Variety::LeftBol),
            (8, Variety::Group),
            (8, Variety::Moufang),
            (8, Variety::LeftBol),
            (8, Variety::LC),
            (8, Variety::Extra),
        ] {
            let labelled = enumerate_with(&SearchSpec::new(n).variety(v), 1).unwrap();
            assert!(labelled.exhausted && labelled.tables.len() == labelled.count);
            let mut reps: Vec<(Vec<[usize; 4]>, &LoopTable)> = Vec::new();
            for t in &labelled.tables {
                let mut key = invariant_vector(t);
                key.sort_unstable();
                if !reps
                    .iter()
                    .any(|(k, r)| *k == key && isomorphic(r, t).isomorphic)
                {
                    reps.push((key, t));
                }
            }
            let classes = enumerate_with(&SearchSpec::new(n).variety(v).up_to_iso(), 1).unwrap();
            assert_eq!(classes.count, reps.len(), "{v}, n = {n}");
        }
    }

    #[test]
    fn groups_of_order_eight() {
        let spec = SearchSpec::new(8).variety(Variety::Group).up_to_iso();
        assert_eq!(enumerate_with(&spec, 2).unwrap().count, 5);
        let spec = SearchSpec::new(6).variety(Variety::Group);
        // 6!/|Aut| labelled copies with 0 fixed: 5!/2 for Z6, 5!/6 for S3
        assert_eq!(enumerate_with(&spec, 1).unwrap().count, 60 + 20);
    }

    #[test]
    fn small_c_loops_are_groups() {
        for n in 1..=9 {
            let spec = SearchSpec::new(n)
                .variety(Variety::C)
                .nonassociative()
                .up_to_iso();
            let out = enumerate_with(&spec, 2).unwrap();
            assert_eq!(out.count, 0, "n = {n}");
            assert!(out.exhausted);
        }
    }

    #[test]
    fn unique_c_loop_of_order_ten() {
        let spec = SearchSpec::new(10)
            .variety(Variety::C)
            .nonassociative()
            .up_to_iso();
        let out = enumerate_with(&spec, 2).unwrap();
        assert_eq!(out.count, 1);
        assert!(isomorphic(&out.tables[0], &fixtures::load("ex10").unwrap()).isomorphic);
    }

    #[test]
    fn steiner_property_matches_triple_systems() {
        for v in [3, 7, 9] {
            let spec = SearchSpec::new(v + 1).property("steiner").up_to_iso();
            let out = enumerate_with(&spec, 2).unwrap();
            let systems = enumerate_sts(v).unwrap();
            assert_eq!(out.count, systems.len());
        }
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let spec = SearchSpec::new(6).up_to_iso();
        let a = enumerate_with(&spec, 1).unwrap();
        let b = enumerate_with(&spec, 4).unwrap();
        assert_eq!(a.count, 109);
        assert_eq!(a.tables, b.tables);
    }

    #[test]
    fn budget_is_reported() {
        let spec = SearchSpec::new(7).budget(1000);
        let out = enumerate_with(&spec, 1).unwrap();
        assert!(!out.exhausted);
        assert_eq!(
            enumerate_with(&SearchSpec::new(4).budget(0), 1),
            Err(SearchError::ZeroBudget)
        );
    }

    #[test]
    fn table_limit_keeps_the_first_models() {
        let all = enumerate_with(&SearchSpec::new(5), 3).unwrap();
        let few = enumerate_with(&SearchSpec::new(5).limit(4), 3).unwrap();
        assert_eq!(few.count, all.count);
        assert_eq!(few.tables, all.tables[..4].to_vec());
    }

    #[test]
    fn every_model_satisfies_the_constraints() {
        let id = Identity::parse("x*(x*y) = (x*x)*y").unwrap();
        let spec = SearchSpec::new(6)
            .identity(id.clone())
            .property("commutative");
        let out = enumerate_with(&spec, 2).unwrap();
        assert!(out.count > 0);
        for t in &out.tables {
            assert!(id.satisfies(t).holds && t.is_commutative());
        }
    }
}
