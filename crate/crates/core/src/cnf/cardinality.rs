use super::{CnfBuilder, CnfError, Lit};

/// How `at most` / `at least` constraints become clauses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CardinalityEncoding {
    /// One clause per `(c+1)`-subset, no auxiliary variables.
    #[default]
    Binomial,
    /// Sinz's sequential counter: `O(k·c)` clauses and auxiliaries.
    SequentialCounter,
}

/// `n choose k`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Calls `emit` with every `size`-subset of `items`, in lexicographic order.
fn for_each_subset(items: &[Lit], size: usize, mut emit: impl FnMut(&[Lit])) {
    let k = items.len();
    if size == 0 || size > k {
        return;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    let mut buf = Vec::with_capacity(size);
    loop {
        buf.clear();
        buf.extend(idx.iter().map(|&i| items[i]));
        emit(&buf);
        // advance to the next combination
        let mut pos = size;
        while pos > 0 {
            pos -= 1;
            if idx[pos] != pos + k - size {
                idx[pos] += 1;
                for j in pos + 1..size {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
            if pos == 0 {
                return;
            }
        }
    }
}

impl CnfBuilder {
    fn check_capacity(&self, estimated: u128, constraint: &'static str) -> Result<(), CnfError> {
        if estimated > self.config.clause_limit as u128 {
            return Err(CnfError::Capacity {
                constraint,
                estimated,
                limit: self.config.clause_limit,
            });
        }
        Ok(())
    }

    /// `y_1 + … + y_k >= z` as the single clause `y_1 ∨ … ∨ y_k ∨ ¬z`.
    pub fn at_least_activated(
        &mut self,
        lits: &[Lit],
        z: Lit,
        tag: &'static str,
    ) -> Result<usize, CnfError> {
        if lits.is_empty() {
            return Err(CnfError::EmptyConstraint { constraint: tag });
        }
        let mut clause = Vec::with_capacity(lits.len() + 1);
        clause.extend_from_slice(lits);
        clause.push(!z);
        self.add_clause(&clause, tag);
        Ok(1)
    }

    /// `y_1 + … + y_k <= c`. Vacuous when `k <= c`. Returns the number of
    /// clauses emitted.
    pub fn at_most(&mut self, lits: &[Lit], c: usize, tag: &'static str) -> Result<usize, CnfError> {
        let k = lits.len();
        if k <= c {
            return Ok(0);
        }
        match self.config.cardinality {
            CardinalityEncoding::Binomial => {
                let count = binomial(k, c + 1);
                self.check_capacity(count, tag)?;
                let negated: Vec<Lit> = lits.iter().map(|&l| !l).collect();
                let mut emitted = 0;
                let formula = &mut self.formula;
                for_each_subset(&negated, c + 1, |clause| {
                    formula.add_tagged(clause, tag);
                    emitted += 1;
                });
                Ok(emitted)
            }
            CardinalityEncoding::SequentialCounter => self.sequential_at_most(lits, c, tag),
        }
    }

    /// `y_1 + … + y_k >= c`. Vacuous for `c == 0`; marks the formula
    /// contradictory when `c > k`.
    pub fn at_least(&mut self, lits: &[Lit], c: usize, tag: &'static str) -> Result<usize, CnfError> {
        let k = lits.len();
        if c == 0 {
            return Ok(0);
        }
        if c > k {
            self.formula.mark_contradiction(tag);
            return Ok(1);
        }
        if c == 1 {
            self.add_clause(lits, tag);
            return Ok(1);
        }
        match self.config.cardinality {
            CardinalityEncoding::Binomial => {
                let size = k - c + 1;
                self.check_capacity(binomial(k, size), tag)?;
                let mut emitted = 0;
                let formula = &mut self.formula;
                for_each_subset(lits, size, |clause| {
                    formula.add_tagged(clause, tag);
                    emitted += 1;
                });
                Ok(emitted)
            }
            CardinalityEncoding::SequentialCounter => {
                let negated: Vec<Lit> = lits.iter().map(|&l| !l).collect();
                self.sequential_at_most(&negated, k - c, tag)
            }
        }
    }

    /// `y_1 + … + y_k = c`, as an at-most plus an at-least constraint.
    pub fn exactly(&mut self, lits: &[Lit], c: usize, tag: &'static str) -> Result<usize, CnfError> {
        Ok(self.at_most(lits, c, tag)? + self.at_least(lits, c, tag)?)
    }

    fn sequential_at_most(
        &mut self,
        lits: &[Lit],
        c: usize,
        tag: &'static str,
    ) -> Result<usize, CnfError> {
        let k = lits.len();
        if k <= c {
            return Ok(0);
        }
        if c == 0 {
            for &l in lits {
                self.add_clause(&[!l], tag);
            }
            return Ok(k);
        }
        self.check_capacity((2 * k * c + k) as u128, tag)?;
        let mut emitted = 0;
        // prev[j] means "at least j+1 of the first i literals are true"
        let mut prev: Vec<Lit> = (0..c).map(|_| self.new_aux().positive()).collect();
        self.add_clause(&[!lits[0], prev[0]], tag);
        emitted += 1;
        for &s in &prev[1..] {
            self.add_clause(&[!s], tag);
            emitted += 1;
        }
        for &x in &lits[1..k - 1] {
            let next: Vec<Lit> = (0..c).map(|_| self.new_aux().positive()).collect();
            self.add_clause(&[!x, next[0]], tag);
            self.add_clause(&[!prev[0], next[0]], tag);
            emitted += 2;
            for j in 1..c {
                self.add_clause(&[!x, !prev[j - 1], next[j]], tag);
                self.add_clause(&[!prev[j], next[j]], tag);
                emitted += 2;
            }
            self.add_clause(&[!x, !prev[c - 1]], tag);
            emitted += 1;
            prev = next;
        }
        self.add_clause(&[!lits[k - 1], !prev[c - 1]], tag);
        emitted += 1;
        Ok(emitted)
    }
}
