//! Latin-square completion with identity propagation.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use crate::identity::{Identity, Term};

pub(crate) const EMPTY: u8 = u8::MAX;
pub(crate) const MAX_SEARCH_ORDER: usize = 64;
pub(crate) const MAX_VARS: usize = 64;

#[derive(Debug, Clone, Copy)]
enum Node {
    Var,
    Mul(usize, usize),
}

/// An identity flattened into nodes grouped by the last variable they depend
/// on, so that nested loops over variables evaluate each node once per
/// prefix.
#[derive(Debug, Clone)]
pub(crate) struct Compiled {
    nodes: Vec<Node>,
    /// `levels[i]` lists the nodes computable once variables `0..=i` are set,
    /// children first; the variable node itself comes first.
    levels: Vec<Vec<usize>>,
    /// Variables each node depends on.
    masks: Vec<u64>,
    /// Product nodes; each reads one cell per instance.
    muls: Vec<usize>,
    lhs: usize,
    rhs: usize,
}

impl Compiled {
    pub(crate) fn new(id: &Identity) -> Self {
        let k = id.vars().len();
        assert!(k <= MAX_VARS, "identity has more than {MAX_VARS} variables");
        let mut c = Compiled {
            nodes: Vec::new(),
            levels: vec![Vec::new(); k],
            masks: Vec::new(),
            muls: Vec::new(),
            lhs: 0,
            rhs: 0,
        };
        // variable i is node i
        let mut var_nodes = vec![usize::MAX; k];
        for (i, slot) in var_nodes.iter_mut().enumerate() {
            *slot = c.nodes.len();
            c.nodes.push(Node::Var);
            c.masks.push(1 << i);
            c.levels[i].push(*slot);
        }
        c.lhs = c.add(&id.lhs, &var_nodes).0;
        c.rhs = c.add(&id.rhs, &var_nodes).0;
        c
    }

    fn vars(&self) -> usize {
        self.levels.len()
    }

    fn add(&mut self, t: &Term, vars: &[usize]) -> (usize, usize) {
        match t {
            Term::Var(i) => (vars[*i], *i),
            Term::Mul(a, b) => {
                let (l, la) = self.add(a, vars);
                let (r, lb) = self.add(b, vars);
                let id = self.nodes.len();
                self.nodes.push(Node::Mul(l, r));
                self.masks.push(self.masks[l] | self.masks[r]);
                self.muls.push(id);
                let level = la.max(lb);
                self.levels[level].push(id);
                (id, level)
            }
        }
    }
}

pub(crate) struct Budget {
    pub limit: u64,
    pub used: AtomicU64,
    pub hit: AtomicBool,
}

impl Budget {
    pub(crate) fn new(limit: u64) -> Self {
        Budget {
            limit,
            used: AtomicU64::new(0),
            hit: AtomicBool::new(false),
        }
    }
}

const FLUSH: u64 = 1 << 12;

/// Symmetry-breaking data: row 1 is fixed to `canon`, and every other row `r`
/// must have a canonical row (from the cycle type of `L_r`) no smaller.
#[derive(Debug, Clone)]
pub(crate) struct RowOrder {
    pub k0: usize,
    pub canon: Vec<u8>,
}

impl RowOrder {
    /// Lengths of the cycles other than 0's, ascending.
    fn rest(&self) -> Vec<usize> {
        cycle_type(&self.canon).1
    }
}

pub(crate) struct Board<'a> {
    pub n: usize,
    full: u64,
    pub cells: Vec<u8>,
    row_used: Vec<u64>,
    col_used: Vec<u64>,
    row_pos: Vec<u8>,
    col_pos: Vec<u8>,
    trail: Vec<u16>,
    ids: &'a [Compiled],
    vals: Vec<u8>,
    /// Trail entries before `head` have been propagated.
    head: usize,
    ready: bool,
    bind: Vec<u8>,
    bound: u64,
    goals: Vec<(usize, u8)>,
    order: Option<&'a RowOrder>,
    /// Cycle of `L_1` containing each element; cycle 0 holds 0.
    cycle: Vec<u8>,
    cycle_len: Vec<u8>,
    budget: &'a Budget,
    pending: u64,
    stopped: bool,
}

impl<'a> Board<'a> {
    pub(crate) fn new(
        n: usize,
        ids: &'a [Compiled],
        order: Option<&'a RowOrder>,
        budget: &'a Budget,
    ) -> Self {
        let width = ids.iter().map(|c| c.nodes.len()).max().unwrap_or(0);
        let mut b = Board {
            n,
            full: if n == 64 { u64::MAX } else { (1u64 << n) - 1 },
            cells: vec![EMPTY; n * n],
            row_used: vec![0; n],
            col_used: vec![0; n],
            row_pos: vec![EMPTY; n * n],
            col_pos: vec![EMPTY; n * n],
            trail: Vec::with_capacity(n * n),
            ids,
            vals: vec![EMPTY; width],
            head: 0,
            ready: false,
            bind: vec![EMPTY; ids.iter().map(Compiled::vars).max().unwrap_or(0)],
            bound: 0,
            goals: Vec::new(),
            order,
            cycle: Vec::new(),
            cycle_len: Vec::new(),
            budget,
            pending: 0,
            stopped: false,
        };
        for x in 0..n {
            b.assign(x, x as u8);
            if x > 0 {
                b.assign(x * n, x as u8);
            }
        }
        if let Some(o) = order {
            b.cycle = vec![0; n];
            let mut start = 0;
            for (k, len) in std::iter::once(o.k0).chain(o.rest()).enumerate() {
                for x in start..start + len {
                    b.cycle[x] = k as u8;
                }
                b.cycle_len.push(len as u8);
                start += len;
            }
            if n > 1 {
                for (c, &v) in o.canon.iter().enumerate().skip(1) {
                    if !b.assign(n + c, v) {
                        unreachable!("canonical row is a permutation");
                    }
                }
            }
        }
        b.trail.clear();
        b
    }

    pub(crate) fn stopped(&self) -> bool {
        self.stopped
    }

    #[inline]
    fn tick(&mut self) {
        self.pending += 1;
        if self.pending >= FLUSH {
            self.flush();
        }
    }

    pub(crate) fn flush(&mut self) {
        let used = self.budget.used.fetch_add(self.pending, Ordering::Relaxed) + self.pending;
        self.pending = 0;
        if used > self.budget.limit {
            self.budget.hit.store(true, Ordering::Relaxed);
        }
        if self.budget.hit.load(Ordering::Relaxed) {
            self.stopped = true;
        }
    }

    /// Places `v` at `idx`; false if that breaks the Latin property.
    #[inline]
    pub(crate) fn assign(&mut self, idx: usize, v: u8) -> bool {
        let cur = self.cells[idx];
        if cur != EMPTY {
            return cur == v;
        }
        let (a, b) = (idx / self.n, idx % self.n);
        let bit = 1u64 << v;
        if (self.row_used[a] | self.col_used[b]) & bit != 0 {
            return false;
        }
        self.cells[idx] = v;
        self.row_used[a] |= bit;
        self.col_used[b] |= bit;
        self.row_pos[a * self.n + v as usize] = b as u8;
        self.col_pos[b * self.n + v as usize] = a as u8;
        self.trail.push(idx as u16);
        self.tick();
        true
    }

    pub(crate) fn mark(&self) -> usize {
        self.trail.len()
    }

    pub(crate) fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let idx = self.trail.pop().unwrap() as usize;
            let v = self.cells[idx];
            let (a, b) = (idx / self.n, idx % self.n);
            let bit = 1u64 << v;
            self.cells[idx] = EMPTY;
            self.row_used[a] &= !bit;
            self.col_used[b] &= !bit;
            self.row_pos[a * self.n + v as usize] = EMPTY;
            self.col_pos[b * self.n + v as usize] = EMPTY;
        }
        self.head = self.head.min(mark);
    }

    pub(crate) fn first_empty(&self) -> Option<usize> {
        self.cells.iter().position(|&c| c == EMPTY)
    }

    pub(crate) fn candidates(&self, idx: usize) -> u64 {
        let (a, b) = (idx / self.n, idx % self.n);
        !(self.row_used[a] | self.col_used[b]) & self.full
    }

    /// Candidates for `idx` up to relabelings that fix 0, commute with
    /// `L_1` and fix every element placed so far outside rows 0, 1 and
    /// column 0. Such a relabeling fixes each cycle of `L_1` it touches and
    /// may permute and rotate the untouched cycles of equal length, so one
    /// candidate per untouched length suffices.
    pub(crate) fn branch_candidates(&self, idx: usize) -> u64 {
        let cands = self.candidates(idx);
        if self.order.is_none() {
            return cands;
        }
        let n = self.n;
        let mut touched = 1u64 << self.cycle[idx / n] | 1 << self.cycle[idx % n] | 1;
        for i in 2..n {
            for j in 1..n {
                let v = self.cells[i * n + j];
                if v != EMPTY {
                    touched |=
                        1 << self.cycle[i] | 1 << self.cycle[j] | 1 << self.cycle[v as usize];
                }
            }
        }
        let mut lens = 0u64;
        let mut out = 0;
        for v in bits(cands) {
            let k = self.cycle[v];
            let len = self.cycle_len[k as usize];
            if touched >> k & 1 == 1 {
                out |= 1 << v;
            } else if lens >> len & 1 == 0 {
                lens |= 1 << len;
                out |= 1 << v;
            }
        }
        out
    }

    /// Runs all propagators to a fixpoint; false on contradiction. The first
    /// call scans the whole board, later ones only revisit constraints that
    /// read a newly filled cell.
    pub(crate) fn propagate(&mut self) -> bool {
        if !self.ready {
            if !self.propagate_full() {
                return false;
            }
            self.ready = true;
            self.head = self.trail.len();
            return self.row_order_ok();
        }
        while self.head < self.trail.len() {
            let idx = self.trail[self.head] as usize;
            self.head += 1;
            if !self.latin_at(idx) || !self.identities_at(idx) {
                return false;
            }
        }
        self.row_order_ok()
    }

    fn propagate_full(&mut self) -> bool {
        loop {
            let before = self.trail.len();
            if !self.latin() {
                return false;
            }
            let ids = self.ids;
            for c in ids {
                if !self.scan(c, 0) {
                    return false;
                }
            }
            if self.trail.len() == before {
                return true;
            }
        }
    }

    #[inline]
    fn single(&mut self, idx: usize) -> bool {
        if self.cells[idx] != EMPTY {
            return true;
        }
        let c = self.candidates(idx);
        c != 0 && (c & (c - 1) != 0 || self.assign(idx, c.trailing_zeros() as u8))
    }

    /// Places `v` in row `r` if exactly one cell can take it.
    fn hidden_in_row(&mut self, r: usize, v: usize) -> bool {
        let n = self.n;
        if self.row_used[r] >> v & 1 == 1 {
            return true;
        }
        let mut spot = usize::MAX;
        let mut count = 0;
        for c in 0..n {
            if self.cells[r * n + c] == EMPTY && self.col_used[c] >> v & 1 == 0 {
                count += 1;
                spot = c;
            }
        }
        count > 1 || (count == 1 && self.assign(r * n + spot, v as u8))
    }

    fn hidden_in_col(&mut self, c: usize, v: usize) -> bool {
        let n = self.n;
        if self.col_used[c] >> v & 1 == 1 {
            return true;
        }
        let mut spot = usize::MAX;
        let mut count = 0;
        for r in 0..n {
            if self.cells[r * n + c] == EMPTY && self.row_used[r] >> v & 1 == 0 {
                count += 1;
                spot = r;
            }
        }
        count > 1 || (count == 1 && self.assign(spot * n + c, v as u8))
    }

    /// Latin singles that can change when `idx` is filled.
    fn latin_at(&mut self, idx: usize) -> bool {
        let n = self.n;
        let (a, b) = (idx / n, idx % n);
        let v = self.cells[idx] as usize;
        for i in 0..n {
            if !self.single(a * n + i) || !self.single(i * n + b) {
                return false;
            }
        }
        for u in bits(!self.row_used[a] & self.full) {
            if !self.hidden_in_row(a, u) {
                return false;
            }
        }
        for u in bits(!self.col_used[b] & self.full) {
            if !self.hidden_in_col(b, u) {
                return false;
            }
        }
        for i in 0..n {
            if !self.hidden_in_row(i, v) || !self.hidden_in_col(i, v) {
                return false;
            }
        }
        true
    }

    /// Checks every identity instance in which some product reads `idx`.
    fn identities_at(&mut self, idx: usize) -> bool {
        let n = self.n;
        let (a, b) = ((idx / n) as u8, (idx % n) as u8);
        let ids = self.ids;
        for c in ids {
            for &m in &c.muls {
                let Node::Mul(l, r) = c.nodes[m] else {
                    unreachable!()
                };
                self.goals.clear();
                self.goals.push((l, a));
                self.goals.push((r, b));
                if !self.solve(c) {
                    return false;
                }
            }
        }
        true
    }

    /// Enumerates bindings meeting every pending goal `(node, value)`, then
    /// the remaining variables, and checks each instance.
    fn solve(&mut self, c: &Compiled) -> bool {
        let Some((node, t)) = self.goals.pop() else {
            return self.free_vars(c, 0);
        };
        let ok = self.solve_goal(c, node, t);
        self.goals.push((node, t));
        ok
    }

    fn solve_goal(&mut self, c: &Compiled, node: usize, t: u8) -> bool {
        let n = self.n;
        match c.nodes[node] {
            Node::Var => match self.bind[node] {
                EMPTY => {
                    self.bind[node] = t;
                    self.bound |= 1 << node;
                    let ok = self.solve(c);
                    self.bind[node] = EMPTY;
                    self.bound &= !(1 << node);
                    ok
                }
                cur if cur == t => self.solve(c),
                _ => true,
            },
            Node::Mul(l, r) => {
                let lfree = (c.masks[l] & !self.bound).count_ones();
                let rfree = (c.masks[r] & !self.bound).count_ones();
                if lfree == 0 || rfree == 0 {
                    let (known, other) = if lfree == 0 { (l, r) } else { (r, l) };
                    let p = self.eval(c, known);
                    if p == EMPTY {
                        return true;
                    }
                    let q = if lfree == 0 {
                        self.row_pos[p as usize * n + t as usize]
                    } else {
                        self.col_pos[p as usize * n + t as usize]
                    };
                    if q == EMPTY {
                        return true;
                    }
                    self.goals.push((other, q));
                    let ok = self.solve(c);
                    self.goals.pop();
                    return ok;
                }
                // branch on the value of the side with fewer free variables
                let by_left = lfree <= rfree;
                for p in 0..n {
                    let q = if by_left {
                        self.row_pos[p * n + t as usize]
                    } else {
                        self.col_pos[p * n + t as usize]
                    };
                    if q == EMPTY {
                        continue;
                    }
                    let (first, second) = if by_left {
                        ((r, q), (l, p as u8))
                    } else {
                        ((l, q), (r, p as u8))
                    };
                    self.goals.push(first);
                    self.goals.push(second);
                    let ok = self.solve(c);
                    self.goals.truncate(self.goals.len() - 2);
                    if !ok {
                        return false;
                    }
                }
                true
            }
        }
    }

    fn eval(&self, c: &Compiled, node: usize) -> u8 {
        match c.nodes[node] {
            Node::Var => self.bind[node],
            Node::Mul(l, r) => {
                let (a, b) = (self.eval(c, l), self.eval(c, r));
                if a == EMPTY || b == EMPTY {
                    EMPTY
                } else {
                    self.cells[a as usize * self.n + b as usize]
                }
            }
        }
    }

    fn free_vars(&mut self, c: &Compiled, from: usize) -> bool {
        let Some(i) = (from..c.vars()).find(|&i| self.bind[i] == EMPTY) else {
            let n = self.n;
            for node in 0..c.nodes.len() {
                self.vals[node] = match c.nodes[node] {
                    Node::Var => self.bind[node],
                    Node::Mul(l, r) => {
                        let (a, b) = (self.vals[l], self.vals[r]);
                        if a == EMPTY || b == EMPTY {
                            EMPTY
                        } else {
                            self.cells[a as usize * n + b as usize]
                        }
                    }
                };
            }
            return self.instance(c);
        };
        let mut ok = true;
        for x in 0..self.n {
            self.bind[i] = x as u8;
            if !self.free_vars(c, i + 1) {
                ok = false;
                break;
            }
        }
        self.bind[i] = EMPTY;
        ok
    }

    fn latin(&mut self) -> bool {
        let n = self.n;
        for idx in 0..n * n {
            if self.cells[idx] != EMPTY {
                continue;
            }
            let c = self.candidates(idx);
            if c == 0 {
                return false;
            }
            if c & (c - 1) == 0 && !self.assign(idx, c.trailing_zeros() as u8) {
                return false;
            }
        }
        for r in 0..n {
            let missing = !self.row_used[r] & self.full;
            for v in bits(missing) {
                if self.row_used[r] >> v & 1 == 1 {
                    continue;
                }
                let mut spot = usize::MAX;
                let mut count = 0;
                for c in 0..n {
                    if self.cells[r * n + c] == EMPTY && self.col_used[c] >> v & 1 == 0 {
                        count += 1;
                        spot = c;
                    }
                }
                if count == 0 || (count == 1 && !self.assign(r * n + spot, v as u8)) {
                    return false;
                }
            }
        }
        for c in 0..n {
            let missing = !self.col_used[c] & self.full;
            for v in bits(missing) {
                if self.col_used[c] >> v & 1 == 1 {
                    continue;
                }
                let mut spot = usize::MAX;
                let mut count = 0;
                for r in 0..n {
                    if self.cells[r * n + c] == EMPTY && self.row_used[r] >> v & 1 == 0 {
                        count += 1;
                        spot = r;
                    }
                }
                if count == 0 || (count == 1 && !self.assign(spot * n + c, v as u8)) {
                    return false;
                }
            }
        }
        true
    }

    fn scan(&mut self, c: &Compiled, level: usize) -> bool {
        let n = self.n;
        for x in 0..n {
            for &node in &c.levels[level] {
                self.vals[node] = match c.nodes[node] {
                    Node::Var => x as u8,
                    Node::Mul(l, r) => {
                        let (a, b) = (self.vals[l], self.vals[r]);
                        if a == EMPTY || b == EMPTY {
                            EMPTY
                        } else {
                            self.cells[a as usize * n + b as usize]
                        }
                    }
                };
            }
            let ok = if level + 1 < c.levels.len() {
                self.scan(c, level + 1)
            } else {
                self.instance(c)
            };
            if !ok {
                return false;
            }
        }
        true
    }

    fn instance(&mut self, c: &Compiled) -> bool {
        let (l, r) = (self.vals[c.lhs], self.vals[c.rhs]);
        match (l == EMPTY, r == EMPTY) {
            (false, false) => l == r,
            (false, true) => self.force(c, c.rhs, l),
            (true, false) => self.force(c, c.lhs, r),
            (true, true) => true,
        }
    }

    /// Requires node `node` to evaluate to `v`, assigning the cell it reads or
    /// pushing the requirement into an unknown operand through a division
    /// already present in the table.
    fn force(&mut self, c: &Compiled, node: usize, v: u8) -> bool {
        let n = self.n;
        match c.nodes[node] {
            Node::Var => self.vals[node] == v,
            Node::Mul(l, r) => {
                let (a, b) = (self.vals[l], self.vals[r]);
                match (a == EMPTY, b == EMPTY) {
                    (false, false) => self.assign(a as usize * n + b as usize, v),
                    (false, true) => {
                        let col = self.row_pos[a as usize * n + v as usize];
                        col == EMPTY || self.force(c, r, col)
                    }
                    (true, false) => {
                        let row = self.col_pos[b as usize * n + v as usize];
                        row == EMPTY || self.force(c, l, row)
                    }
                    (true, true) => true,
                }
            }
        }
    }

    fn row_order_ok(&self) -> bool {
        let Some(order) = self.order else {
            return true;
        };
        let n = self.n;
        for r in 2..n {
            let row = &self.cells[r * n..(r + 1) * n];
            let mut x = 0usize;
            let mut len = 0;
            let closed = loop {
                let y = row[x];
                if y == EMPTY {
                    break false;
                }
                len += 1;
                x = y as usize;
                if x == 0 {
                    break true;
                }
            };
            if closed && len < order.k0 {
                return false;
            }
            if self.row_used[r] == self.full && canonical_row(row) < order.canon {
                return false;
            }
        }
        true
    }
}

pub(crate) fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}

/// Cycle lengths of a fixed-point-free permutation: the cycle through 0 and
/// the others sorted ascending.
pub(crate) fn cycle_type(perm: &[u8]) -> (usize, Vec<usize>) {
    let n = perm.len();
    let mut seen = vec![false; n];
    let mut k0 = 0;
    let mut rest = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = perm[x] as usize;
            len += 1;
        }
        if s == 0 {
            k0 = len;
        } else {
            rest.push(len);
        }
    }
    rest.sort_unstable();
    (k0, rest)
}

/// Least row, over relabelings fixing 0 and sending the row's element to 1,
/// of a left translation with the given cycle type.
pub(crate) fn canonical_from_type(k0: usize, rest: &[usize]) -> Vec<u8> {
    let n = k0 + rest.iter().sum::<usize>();
    let mut row = vec![0u8; n];
    let mut start = 0;
    for &len in std::iter::once(&k0).chain(rest) {
        for i in 0..len {
            row[start + i] = (start + (i + 1) % len) as u8;
        }
        start += len;
    }
    row
}

pub(crate) fn canonical_row(row: &[u8]) -> Vec<u8> {
    let (k0, rest) = cycle_type(row);
    canonical_from_type(k0, &rest)
}

/// Cycle types admissible for `L_1`: no fixed points, cycles of length at
/// least 2, 0's cycle distinguished.
pub(crate) fn row_orders(n: usize) -> Vec<RowOrder> {
    fn parts(rem: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for p in min..=rem {
            cur.push(p);
            parts(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for k0 in 2..=n {
        let mut rests = Vec::new();
        parts(n - k0, 2, &mut Vec::new(), &mut rests);
        for rest in rests {
            out.push(RowOrder {
                k0,
                canon: canonical_from_type(k0, &rest),
            });
        }
    }
    out.sort_by(|a, b| a.canon.cmp(&b.canon));
    out
}
