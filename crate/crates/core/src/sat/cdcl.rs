//! Conflict-driven clause learning with two watched literals, first-UIP
//! learning, VSIDS, phase saving, Luby restarts, and LBD-based clause
//! database reduction.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{RestartPolicy, SolveResult, SolveStats, SolveStatus, SolverConfig};
use crate::cnf::{Assignment, CnfFormula};

const NO_REASON: u32 = u32::MAX;
/// Propagations between two wall-clock checks.
const BUDGET_CHECK_INTERVAL: u64 = 4096;
const GLUCOSE_MIN_CONFLICTS: u64 = 50;
const GLUCOSE_MARGIN: f64 = 0.8;

#[derive(Clone, Copy)]
struct Watcher {
    cref: u32,
    blocker: u32,
}

/// Binary max-heap of variables ordered by activity.
struct VarOrder {
    heap: Vec<u32>,
    position: Vec<usize>,
}

const NOT_IN_HEAP: usize = usize::MAX;

impl VarOrder {
    fn new(n: usize) -> VarOrder {
        VarOrder {
            heap: (0..n as u32).collect(),
            position: (0..n).collect(),
        }
    }

    fn contains(&self, v: u32) -> bool {
        self.position[v as usize] != NOT_IN_HEAP
    }

    fn sift_up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            let p = self.heap[parent];
            if act[p as usize] >= act[v as usize] {
                break;
            }
            self.heap[i] = p;
            self.position[p as usize] = i;
            i = parent;
        }
        self.heap[i] = v;
        self.position[v as usize] = i;
    }

    fn sift_down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        let len = self.heap.len();
        loop {
            let left = 2 * i + 1;
            if left >= len {
                break;
            }
            let right = left + 1;
            let child = if right < len && act[self.heap[right] as usize] > act[self.heap[left] as usize] {
                right
            } else {
                left
            };
            let c = self.heap[child];
            if act[c as usize] <= act[v as usize] {
                break;
            }
            self.heap[i] = c;
            self.position[c as usize] = i;
            i = child;
        }
        self.heap[i] = v;
        self.position[v as usize] = i;
    }

    fn insert(&mut self, v: u32, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.heap.push(v);
        let i = self.heap.len() - 1;
        self.position[v as usize] = i;
        self.sift_up(i, act);
    }

    fn bumped(&mut self, v: u32, act: &[f64]) {
        if self.contains(v) {
            self.sift_up(self.position[v as usize], act);
        }
    }

    fn pop(&mut self, act: &[f64]) -> Option<u32> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().expect("non-empty");
        self.position[top as usize] = NOT_IN_HEAP;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.position[last as usize] = 0;
            self.sift_down(0, act);
        }
        Some(top)
    }

}

/// `luby(i)` for `i >= 0`: 1 1 2 1 1 2 4 1 1 2 1 1 2 4 8 …
fn luby(mut i: u64) -> u64 {
    let mut size = 1u64;
    let mut seq = 0u32;
    while size < i + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != i {
        size = (size - 1) >> 1;
        seq -= 1;
        i %= size;
    }
    1 << seq
}

/// Clause header words preceding the literals in the arena:
/// length, flags (learnt, deleted, lbd), activity as `f32` bits.
const HDR: usize = 3;
const LEARNT: u32 = 1;
const DELETED: u32 = 2;

pub(crate) struct Cdcl {
    /// Every clause, header followed by literal codes. A clause reference is
    /// the offset of its header.
    db: Vec<u32>,
    wasted: usize,
    watches: Vec<Vec<Watcher>>,
    /// Indexed by literal code: 1 true, -1 false, 0 unassigned.
    vals: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<u32>,
    trail: Vec<u32>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    clause_inc: f32,
    order: VarOrder,
    phase: Vec<bool>,
    seen: Vec<bool>,
    level_mark: Vec<u64>,
    mark_stamp: u64,
    to_clear: Vec<u32>,
    stack: Vec<u32>,
    num_learnts: usize,
    max_learnts: f64,
    ok: bool,
    config: SolverConfig,
    rng: ChaCha8Rng,
    stats: SolveStats,
}

impl Cdcl {
    pub(crate) fn new(formula: &CnfFormula, config: SolverConfig) -> Cdcl {
        let n = formula.num_vars();
        let mut solver = Cdcl {
            db: Vec::new(),
            wasted: 0,
            watches: vec![Vec::new(); 2 * n],
            vals: vec![0; 2 * n],
            level: vec![0; n],
            reason: vec![NO_REASON; n],
            trail: Vec::with_capacity(n),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: vec![0.0; n],
            var_inc: 1.0,
            clause_inc: 1.0,
            order: VarOrder::new(n),
            phase: vec![false; n],
            seen: vec![false; n],
            level_mark: vec![0; n + 1],
            mark_stamp: 0,
            to_clear: Vec::new(),
            stack: Vec::new(),
            num_learnts: 0,
            max_learnts: 0.0,
            ok: true,
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            config,
            stats: SolveStats::default(),
        };
        let mut buf = Vec::new();
        for clause in formula.clauses() {
            if !solver.ok {
                break;
            }
            buf.clear();
            buf.extend(clause.iter().map(|l| l.code()));
            solver.add_input_clause(&mut buf);
        }
        solver.max_learnts = (formula.num_clauses() as f64 / 3.0).max(2000.0);
        solver
    }

    #[inline]
    fn val(&self, lit: u32) -> i8 {
        self.vals[lit as usize]
    }

    #[inline]
    fn clause_len(&self, c: usize) -> usize {
        self.db[c] as usize
    }

    #[inline]
    fn lit_at(&self, c: usize, k: usize) -> u32 {
        self.db[c + HDR + k]
    }

    fn is_learnt(&self, c: usize) -> bool {
        self.db[c + 1] & LEARNT != 0
    }

    fn is_deleted(&self, c: usize) -> bool {
        self.db[c + 1] & DELETED != 0
    }

    fn lbd(&self, c: usize) -> u32 {
        self.db[c + 1] >> 2
    }

    fn clause_activity(&self, c: usize) -> f32 {
        f32::from_bits(self.db[c + 2])
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn add_input_clause(&mut self, lits: &mut Vec<u32>) {
        lits.sort_unstable();
        lits.dedup();
        if lits.windows(2).any(|w| w[0] == w[1] ^ 1) {
            return;
        }
        lits.retain(|&l| self.val(l) != -1);
        if lits.iter().any(|&l| self.val(l) == 1) {
            return;
        }
        match lits.len() {
            0 => self.ok = false,
            1 => {
                self.enqueue(lits[0], NO_REASON);
                if self.propagate().is_some() {
                    self.ok = false;
                }
            }
            _ => {
                self.attach(lits, false, 0);
            }
        }
    }

    fn attach(&mut self, lits: &[u32], learnt: bool, lbd: u32) -> u32 {
        let cref = self.db.len() as u32;
        self.db.push(lits.len() as u32);
        self.db.push((lbd << 2) | if learnt { LEARNT } else { 0 });
        self.db.push(0f32.to_bits());
        self.db.extend_from_slice(lits);
        self.watches[lits[0] as usize].push(Watcher { cref, blocker: lits[1] });
        self.watches[lits[1] as usize].push(Watcher { cref, blocker: lits[0] });
        if learnt {
            self.num_learnts += 1;
        }
        cref
    }

    #[inline]
    fn enqueue(&mut self, lit: u32, reason: u32) {
        let v = (lit >> 1) as usize;
        debug_assert_eq!(self.vals[lit as usize], 0);
        self.vals[lit as usize] = 1;
        self.vals[(lit ^ 1) as usize] = -1;
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(lit);
    }

    /// Unit propagation; returns a conflicting clause if one arises.
    fn propagate(&mut self) -> Option<u32> {
        let mut conflict = None;
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = p ^ 1;
            let mut ws = std::mem::take(&mut self.watches[false_lit as usize]);
            let (mut i, mut j) = (0, 0);
            'watch: while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.val(w.blocker) == 1 {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let base = w.cref as usize + HDR;
                if self.db[base] == false_lit {
                    self.db.swap(base, base + 1);
                }
                let first = self.db[base];
                let kept = Watcher { cref: w.cref, blocker: first };
                if first != w.blocker && self.val(first) == 1 {
                    ws[j] = kept;
                    j += 1;
                    continue;
                }
                let len = self.db[base - HDR] as usize;
                for k in 2..len {
                    let lit = self.db[base + k];
                    if self.val(lit) != -1 {
                        self.db[base + 1] = lit;
                        self.db[base + k] = false_lit;
                        self.watches[lit as usize].push(kept);
                        continue 'watch;
                    }
                }
                ws[j] = kept;
                j += 1;
                if self.val(first) == -1 {
                    conflict = Some(w.cref);
                    self.qhead = self.trail.len();
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.enqueue(first, w.cref);
                }
            }
            ws.truncate(j);
            self.watches[false_lit as usize] = ws;
            if conflict.is_some() {
                break;
            }
        }
        conflict
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.order.bumped(v as u32, &self.activity);
    }

    fn bump_clause(&mut self, c: usize) {
        let act = self.clause_activity(c) + self.clause_inc;
        self.db[c + 2] = act.to_bits();
        if act > 1e20 {
            let mut c = 0;
            while c < self.db.len() {
                if self.is_learnt(c) {
                    self.db[c + 2] = (self.clause_activity(c) * 1e-20).to_bits();
                }
                c += HDR + self.clause_len(c);
            }
            self.clause_inc *= 1e-20;
        }
    }

    fn compute_lbd(&mut self, lits: &[u32]) -> u32 {
        self.mark_stamp += 1;
        let mut count = 0;
        for &l in lits {
            let lev = self.level[(l >> 1) as usize] as usize;
            if self.level_mark[lev] != self.mark_stamp {
                self.level_mark[lev] = self.mark_stamp;
                count += 1;
            }
        }
        count
    }

    fn abstract_level(&self, v: usize) -> u32 {
        1 << (self.level[v] & 31)
    }

    /// First-UIP conflict analysis with recursive minimisation. Returns the
    /// learnt clause (asserting literal first, highest remaining level
    /// second) and the backjump level.
    fn analyze(&mut self, mut confl: u32) -> (Vec<u32>, u32) {
        let mut learnt: Vec<u32> = vec![0];
        let mut path_count = 0;
        let mut p: Option<u32> = None;
        let mut index = self.trail.len();
        let current = self.decision_level();
        loop {
            let c = confl as usize;
            if self.is_learnt(c) {
                self.bump_clause(c);
            }
            let start = usize::from(p.is_some());
            for k in start..self.clause_len(c) {
                let q = self.lit_at(c, k);
                let v = (q >> 1) as usize;
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump_var(v);
                    if self.level[v] >= current {
                        path_count += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[(self.trail[index] >> 1) as usize] {
                    break;
                }
            }
            let lit = self.trail[index];
            let v = (lit >> 1) as usize;
            confl = self.reason[v];
            self.seen[v] = false;
            p = Some(lit);
            path_count -= 1;
            if path_count == 0 {
                break;
            }
        }
        learnt[0] = p.expect("conflict has a UIP") ^ 1;

        self.to_clear.clear();
        self.to_clear.extend_from_slice(&learnt[1..]);
        let levels = learnt[1..]
            .iter()
            .fold(0, |acc, &l| acc | self.abstract_level((l >> 1) as usize));
        let mut kept = 1;
        for i in 1..learnt.len() {
            let l = learnt[i];
            if self.reason[(l >> 1) as usize] == NO_REASON || !self.redundant(l, levels) {
                learnt[kept] = l;
                kept += 1;
            }
        }
        learnt.truncate(kept);
        for i in 0..self.to_clear.len() {
            self.seen[(self.to_clear[i] >> 1) as usize] = false;
        }

        let mut backjump = 0;
        if learnt.len() > 1 {
            let mut max_i = 1;
            for i in 2..learnt.len() {
                if self.level[(learnt[i] >> 1) as usize] > self.level[(learnt[max_i] >> 1) as usize] {
                    max_i = i;
                }
            }
            learnt.swap(1, max_i);
            backjump = self.level[(learnt[1] >> 1) as usize];
        }
        (learnt, backjump)
    }

    /// Whether `lit` is implied by the other literals of the learnt clause
    /// through reason clauses.
    fn redundant(&mut self, lit: u32, levels: u32) -> bool {
        self.stack.clear();
        self.stack.push(lit);
        let top = self.to_clear.len();
        while let Some(q) = self.stack.pop() {
            let c = self.reason[(q >> 1) as usize] as usize;
            for k in 1..self.clause_len(c) {
                let l = self.lit_at(c, k);
                let v = (l >> 1) as usize;
                if self.seen[v] || self.level[v] == 0 {
                    continue;
                }
                if self.reason[v] != NO_REASON && self.abstract_level(v) & levels != 0 {
                    self.seen[v] = true;
                    self.stack.push(l);
                    self.to_clear.push(l);
                } else {
                    for i in top..self.to_clear.len() {
                        self.seen[(self.to_clear[i] >> 1) as usize] = false;
                    }
                    self.to_clear.truncate(top);
                    return false;
                }
            }
        }
        true
    }

    fn cancel_until(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let start = self.trail_lim[level as usize];
        for i in (start..self.trail.len()).rev() {
            let lit = self.trail[i];
            let v = (lit >> 1) as usize;
            self.vals[lit as usize] = 0;
            self.vals[(lit ^ 1) as usize] = 0;
            self.reason[v] = NO_REASON;
            self.phase[v] = lit & 1 == 0;
            self.order.insert(v as u32, &self.activity);
        }
        self.trail.truncate(start);
        self.trail_lim.truncate(level as usize);
        self.qhead = start;
    }

    fn pick_branch(&mut self) -> Option<u32> {
        if self.config.random_var_freq > 0.0
            && !self.order.heap.is_empty()
            && self.rng.gen_bool(self.config.random_var_freq.min(1.0))
        {
            let v = self.order.heap[self.rng.gen_range(0..self.order.heap.len())];
            if self.vals[2 * v as usize] == 0 {
                return Some(self.decision_lit(v as usize));
            }
        }
        while let Some(v) = self.order.pop(&self.activity) {
            if self.vals[2 * v as usize] == 0 {
                return Some(self.decision_lit(v as usize));
            }
        }
        None
    }

    fn decision_lit(&self, v: usize) -> u32 {
        2 * v as u32 + u32::from(!self.phase[v])
    }

    fn is_locked(&self, c: usize) -> bool {
        let first = self.lit_at(c, 0);
        self.reason[(first >> 1) as usize] == c as u32 && self.val(first) == 1
    }

    fn reduce_db(&mut self) {
        let mut candidates = Vec::new();
        let mut c = 0;
        while c < self.db.len() {
            let len = self.clause_len(c);
            if self.is_learnt(c) && !self.is_deleted(c) && self.lbd(c) > 2 && len > 2 && !self.is_locked(c) {
                candidates.push(c);
            }
            c += HDR + len;
        }
        candidates.sort_by(|&a, &b| {
            self.lbd(b)
                .cmp(&self.lbd(a))
                .then(self.clause_activity(a).total_cmp(&self.clause_activity(b)))
        });
        let remove = candidates.len() / 2;
        for &c in &candidates[..remove] {
            self.db[c + 1] |= DELETED;
            self.wasted += HDR + self.clause_len(c);
            self.num_learnts -= 1;
        }
        let db = &self.db;
        for ws in &mut self.watches {
            ws.retain(|w| db[w.cref as usize + 1] & DELETED == 0);
        }
        if self.wasted * 2 > self.db.len() {
            self.compact();
        }
    }

    /// Drops deleted clauses from the arena and renumbers references.
    fn compact(&mut self) {
        let mut db = Vec::with_capacity(self.db.len() - self.wasted);
        let mut c = 0;
        while c < self.db.len() {
            let size = HDR + self.clause_len(c);
            if !self.is_deleted(c) {
                let moved = db.len() as u32;
                db.extend_from_slice(&self.db[c..c + size]);
                // the old activity word now forwards to the new offset
                self.db[c + 2] = moved;
            }
            c += size;
        }
        let old = std::mem::replace(&mut self.db, db);
        for &lit in &self.trail {
            let v = (lit >> 1) as usize;
            if self.reason[v] != NO_REASON {
                self.reason[v] = old[self.reason[v] as usize + 2];
            }
        }
        for ws in &mut self.watches {
            for w in ws.iter_mut() {
                w.cref = old[w.cref as usize + 2];
            }
        }
        self.wasted = 0;
    }

    fn out_of_time(&self, started: Instant) -> bool {
        match self.config.time_limit {
            Some(limit) => started.elapsed() >= limit,
            None => false,
        }
    }

    pub(crate) fn solve(mut self) -> SolveResult {
        let started = Instant::now();
        let status = self.search_loop(started);
        self.stats.seconds = started.elapsed().as_secs_f64();
        let assignment = if status == SolveStatus::Sat {
            let values = (0..self.level.len()).map(|v| self.vals[2 * v] == 1).collect();
            Some(Assignment::new(values))
        } else {
            None
        };
        SolveResult {
            status,
            assignment,
            stats: self.stats,
        }
    }

    fn search_loop(&mut self, started: Instant) -> SolveStatus {
        if !self.ok {
            return SolveStatus::Unsat;
        }
        if self.propagate().is_some() {
            return SolveStatus::Unsat;
        }
        if self.out_of_time(started) {
            return SolveStatus::Timeout;
        }
        let mut restarts = 0u64;
        let mut last_check = 0u64;
        let (mut lbd_fast, mut lbd_slow) = (0.0f64, 0.0f64);
        loop {
            let budget = match self.config.restarts {
                RestartPolicy::Luby => luby(restarts) * self.config.restart_unit,
                RestartPolicy::Glucose => u64::MAX,
            };
            let mut conflicts_here = 0u64;
            loop {
                if self.stats.propagations - last_check >= BUDGET_CHECK_INTERVAL {
                    last_check = self.stats.propagations;
                    if self.out_of_time(started) {
                        return SolveStatus::Timeout;
                    }
                }
                if let Some(confl) = self.propagate() {
                    self.stats.conflicts += 1;
                    conflicts_here += 1;
                    if self.decision_level() == 0 {
                        return SolveStatus::Unsat;
                    }
                    let (learnt, backjump) = self.analyze(confl);
                    let lbd = self.compute_lbd(&learnt);
                    let n = self.stats.conflicts as f64;
                    lbd_fast += (lbd as f64 - lbd_fast) / n.min(32.0);
                    lbd_slow += (lbd as f64 - lbd_slow) / n.min(16384.0);
                    self.cancel_until(backjump);
                    if learnt.len() == 1 {
                        self.enqueue(learnt[0], NO_REASON);
                    } else {
                        let cref = self.attach(&learnt, true, lbd);
                        self.bump_clause(cref as usize);
                        self.enqueue(learnt[0], cref);
                    }
                    self.var_inc /= self.config.var_decay;
                    self.clause_inc /= self.config.clause_decay as f32;
                } else {
                    let glucose_restart = self.config.restarts == RestartPolicy::Glucose
                        && conflicts_here >= GLUCOSE_MIN_CONFLICTS
                        && lbd_fast * GLUCOSE_MARGIN > lbd_slow;
                    if conflicts_here >= budget || glucose_restart {
                        self.cancel_until(0);
                        restarts += 1;
                        self.stats.restarts += 1;
                        break;
                    }
                    if self.num_learnts as f64 >= self.max_learnts + self.trail.len() as f64 {
                        self.reduce_db();
                        self.max_learnts *= 1.1;
                    }
                    match self.pick_branch() {
                        None => return SolveStatus::Sat,
                        Some(lit) => {
                            self.stats.decisions += 1;
                            self.trail_lim.push(self.trail.len());
                            self.enqueue(lit, NO_REASON);
                        }
                    }
                }
            }
            if self.out_of_time(started) {
                return SolveStatus::Timeout;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn luby_prefix() {
        let seq: Vec<u64> = (0..15).map(luby).collect();
        assert_eq!(seq, vec![1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }
}
