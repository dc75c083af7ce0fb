use std::cmp::{Ordering, Reverse};
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{GridVariable, Monomial};
use crate::error::{Error, Result};
use crate::perm::Permutation;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum OrderKind {
    /// Weighted degree `Σ (n+1-i-v(j)) a_ij` first, then the larger standard
    /// degree counts as smaller, then lexicographic by priority.
    Composite,
    /// Lexicographic by priority.
    PureLex,
}

/// A term order on monomials over a fixed variable universe.
///
/// In the lexicographic stage the monomial with the smaller exponent at the
/// first (highest-priority) variable where the two differ is smaller.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TermOrder {
    kind: OrderKind,
    priority: Vec<GridVariable>,
    index: BTreeMap<GridVariable, usize>,
    weights: Vec<i64>,
}

impl TermOrder {
    fn with_priority(
        kind: OrderKind,
        priority: Vec<GridVariable>,
        weights: Vec<i64>,
    ) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (k, &v) in priority.iter().enumerate() {
            if index.insert(v, k).is_some() {
                return Err(Error::Inconsistent(format!(
                    "variable z[{}][{}] listed twice in a priority order",
                    v.i, v.j
                )));
            }
        }
        Ok(TermOrder {
            kind,
            priority,
            index,
            weights,
        })
    }

    /// The composite order for `Z^(v)` with variable priority `priority`
    /// (highest first). Every listed variable must have positive weight.
    pub fn composite(v: &Permutation, priority: Vec<GridVariable>) -> Result<Self> {
        let n = v.n() as i64;
        let mut weights = Vec::with_capacity(priority.len());
        for c in &priority {
            if c.i == 0 || c.j == 0 || c.i > v.n() || c.j > v.n() {
                return Err(Error::ForeignVariable { i: c.i, j: c.j });
            }
            let w = n + 1 - c.i as i64 - v.at(c.j) as i64;
            if w <= 0 {
                return Err(Error::ForeignVariable { i: c.i, j: c.j });
            }
            weights.push(w);
        }
        TermOrder::with_priority(OrderKind::Composite, priority, weights)
    }

    pub fn pure_lex(priority: Vec<GridVariable>) -> Result<Self> {
        TermOrder::with_priority(OrderKind::PureLex, priority, Vec::new())
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    /// Variables, highest priority first.
    pub fn priority(&self) -> &[GridVariable] {
        &self.priority
    }

    pub fn index_of(&self, v: &GridVariable) -> Option<usize> {
        self.index.get(v).copied()
    }

    /// Weighted degree of a variable under a composite order.
    pub fn weight(&self, v: &GridVariable) -> Option<i64> {
        self.index_of(v).and_then(|k| self.weights.get(k).copied())
    }

    pub fn check_universe(&self, m: &Monomial) -> Result<()> {
        match m.support().find(|v| !self.index.contains_key(v)) {
            Some(v) => Err(Error::ForeignVariable { i: v.i, j: v.j }),
            None => Ok(()),
        }
    }

    fn weighted_degree(&self, m: &Monomial) -> i64 {
        m.exponents()
            .iter()
            .map(|(v, &e)| self.weights[self.index[v]] * e as i64)
            .sum()
    }

    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Result<Ordering> {
        self.check_universe(a)?;
        self.check_universe(b)?;
        if self.kind == OrderKind::Composite {
            let by_weight = self.weighted_degree(a).cmp(&self.weighted_degree(b));
            if by_weight != Ordering::Equal {
                return Ok(by_weight);
            }
            let by_degree = b.degree().cmp(&a.degree());
            if by_degree != Ordering::Equal {
                return Ok(by_degree);
            }
        }
        for v in &self.priority {
            let ord = a.exponent(v).cmp(&b.exponent(v));
            if ord != Ordering::Equal {
                return Ok(ord);
            }
        }
        Ok(Ordering::Equal)
    }

    /// Linear forms that precede the lexicographic stage, as rows over the
    /// priority-indexed exponent vector.
    pub(crate) fn grading_rows(&self) -> Vec<Vec<i64>> {
        match self.kind {
            OrderKind::Composite => vec![self.weights.clone(), vec![-1; self.priority.len()]],
            OrderKind::PureLex => Vec::new(),
        }
    }
}

/// Rows bottom to top, each left to right.
pub fn pi_sw_ne(vars: &[GridVariable]) -> Vec<GridVariable> {
    let mut out = vars.to_vec();
    out.sort_by_key(|c| (c.i, c.j));
    out
}

/// Columns right to left, each bottom to top.
pub fn pi_se_nw(vars: &[GridVariable]) -> Vec<GridVariable> {
    let mut out = vars.to_vec();
    out.sort_by_key(|c| (Reverse(c.j), c.i));
    out
}
