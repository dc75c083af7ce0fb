use std::collections::BTreeSet;

use super::{GridVariable, Monomial, Polynomial};
use crate::error::{Error, Result};
use crate::perm::{bruhat_leq, essential_set, rank_matrix, Cell, Permutation};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Entry {
    Zero,
    One,
    Var,
}

/// An `n x n` matrix whose entries are `0`, `1` or the variable `z[i][j]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SpecializedMatrix {
    n: usize,
    entries: Vec<Entry>,
}

impl SpecializedMatrix {
    /// The fully generic matrix: every entry a variable.
    pub fn generic(n: usize) -> Self {
        SpecializedMatrix {
            n,
            entries: vec![Entry::Var; n * n],
        }
    }

    /// `Z^(v)`: a `1` at `(n - v(j) + 1, j)`, zeros to the right of each `1`
    /// in its row and above each `1` in its column, variables elsewhere.
    pub fn build_zv(v: &Permutation) -> Self {
        let n = v.n();
        let mut m = SpecializedMatrix {
            n,
            entries: vec![Entry::Var; n * n],
        };
        for j in 1..=n {
            let i = v.dot_row(j);
            for jj in j + 1..=n {
                m.set(i, jj, Entry::Zero);
            }
            for ii in i + 1..=n {
                m.set(ii, j, Entry::Zero);
            }
        }
        for j in 1..=n {
            m.set(v.dot_row(j), j, Entry::One);
        }
        m
    }

    fn set(&mut self, i: usize, j: usize, e: Entry) {
        self.entries[(i - 1) * self.n + (j - 1)] = e;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> Entry {
        self.entries[(i - 1) * self.n + (j - 1)]
    }

    pub fn is_var(&self, i: usize, j: usize) -> bool {
        self.entry(i, j) == Entry::Var
    }

    /// Free variables sorted by `(i, j)`.
    pub fn vars(&self) -> Vec<GridVariable> {
        (1..=self.n)
            .flat_map(|i| (1..=self.n).map(move |j| Cell::new(i, j)))
            .filter(|c| self.is_var(c.i, c.j))
            .collect()
    }

    pub fn var_count(&self) -> usize {
        self.entries.iter().filter(|&&e| e == Entry::Var).count()
    }

    fn entry_poly(&self, i: usize, j: usize) -> Option<Polynomial> {
        match self.entry(i, j) {
            Entry::Zero => None,
            Entry::One => Some(Polynomial::from_int(1)),
            Entry::Var => Some(Polynomial::var(Cell::new(i, j))),
        }
    }

    /// Determinant of the submatrix on `rows x cols` (each listed in
    /// increasing order), by cofactor expansion along the sparsest row.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Polynomial {
        debug_assert_eq!(rows.len(), cols.len());
        if rows.is_empty() {
            return Polynomial::from_int(1);
        }
        let (pick, _) = rows
            .iter()
            .enumerate()
            .map(|(k, &r)| {
                let nonzero = cols
                    .iter()
                    .filter(|&&c| self.entry(r, c) != Entry::Zero)
                    .count();
                (k, nonzero)
            })
            .min_by_key(|&(_, nz)| nz)
            .expect("nonempty rows");
        let r = rows[pick];
        let rest_rows: Vec<usize> = rows.iter().copied().filter(|&x| x != r).collect();
        let mut out = Polynomial::zero();
        for (k, &c) in cols.iter().enumerate() {
            let Some(e) = self.entry_poly(r, c) else {
                continue;
            };
            let rest_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let sub = self.minor(&rest_rows, &rest_cols);
            if sub.is_zero() {
                continue;
            }
            let term = &e * &sub;
            out = if (pick + k) % 2 == 0 {
                &out + &term
            } else {
                &out - &term
            };
        }
        out
    }

    /// All size-`(r+1)` minors of the southwest `a x b` submatrix for each
    /// essential box `(a, b)` of `w` with rank `r`; zeros dropped, duplicates
    /// (up to sign) removed, in a deterministic order.
    fn essential_minors(&self, w: &Permutation) -> Vec<Polynomial> {
        let ranks = rank_matrix(w);
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for e in essential_set(w) {
            let size = ranks.at(e) + 1;
            if size > e.i || size > e.j {
                continue;
            }
            for rows in subsets(e.i, size) {
                for cols in subsets(e.j, size) {
                    let m = self.minor(&rows, &cols);
                    if m.is_zero() {
                        continue;
                    }
                    let key = m.sign_normalized();
                    if seen.insert(key.to_string()) {
                        out.push(m);
                    }
                }
            }
        }
        out
    }
}

/// All `k`-subsets of `{1..n}` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..=n {
            if n - x + 1 < k - cur.len() {
                break;
            }
            cur.push(x);
            go(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(1, n, k, &mut cur, &mut out);
    out
}

/// Generators of the Kazhdan–Lusztig ideal `I_{v,w}`: essential minors of `Z^(v)`.
pub fn kl_generators(v: &Permutation, w: &Permutation) -> Result<Vec<Polynomial>> {
    if !bruhat_leq(v, w)? {
        return Err(Error::NotBruhatLeq {
            v: v.to_string(),
            w: w.to_string(),
        });
    }
    Ok(SpecializedMatrix::build_zv(v).essential_minors(w))
}

/// Essential minors of the generic `n x n` matrix.
pub fn schubert_determinantal_generators(w: &Permutation) -> Vec<Polynomial> {
    SpecializedMatrix::generic(w.n()).essential_minors(w)
}

/// Torus weight `e_{v(j)} - e_{n-i+1}` of `z[i][j]` under the usual action,
/// as a vector indexed `1..=n` (slot 0 unused).
pub fn usual_action_weight(v: &Permutation, var: GridVariable) -> Vec<i64> {
    let n = v.n();
    let mut wt = vec![0i64; n + 1];
    wt[v.at(var.j)] += 1;
    wt[n + 1 - var.i] -= 1;
    wt
}

/// Sum of the usual-action weights of the variables of `m`.
pub fn monomial_weight(v: &Permutation, m: &Monomial) -> Vec<i64> {
    let mut wt = vec![0i64; v.n() + 1];
    for (var, &e) in m.exponents() {
        for (slot, x) in wt.iter_mut().zip(usual_action_weight(v, *var)) {
            *slot += x * e as i64;
        }
    }
    wt
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::length;
    use crate::poly::{pi_sw_ne, TermOrder};

    fn p(s: &str) -> Permutation {
        Permutation::parse(s).unwrap()
    }

    #[test]
    fn zv_running_example() {
        let v = p("5123746");
        let zv = SpecializedMatrix::build_zv(&v);
        assert_eq!(zv.var_count(), 15);
        let ones: Vec<(usize, usize)> = (1..=7)
            .map(|j| {
                (1..=7)
                    .find(|&i| zv.entry(i, j) == Entry::One)
                    .map(|i| (i, j))
                    .unwrap()
            })
            .collect();
        assert_eq!(
            ones,
            vec![(3, 1), (7, 2), (6, 3), (5, 4), (1, 5), (4, 6), (2, 7)]
        );
    }

    #[test]
    fn zv_extremes() {
        let w0 = Permutation::longest(5);
        assert_eq!(SpecializedMatrix::build_zv(&w0).var_count(), 0);
        let id = Permutation::identity(5);
        let zv = SpecializedMatrix::build_zv(&id);
        assert_eq!(zv.var_count(), 10);
        for i in 1..=5 {
            for j in 1..=5 {
                let want = if i + j == 6 {
                    Entry::One
                } else if i + j < 6 {
                    Entry::Var
                } else {
                    Entry::Zero
                };
                assert_eq!(zv.entry(i, j), want);
            }
        }
    }

    #[test]
    fn var_counts_and_weights() {
        for n in 1..=6 {
            for v in Permutation::all(n) {
                let zv = SpecializedMatrix::build_zv(&v);
                assert_eq!(zv.var_count(), length(&v.w0_times()));
                for c in zv.vars() {
                    assert!(n + 1 > c.i + v.at(c.j), "nonpositive weight at {c} for {v}");
                }
            }
        }
    }

    #[test]
    fn example_with_failing_generators() {
        let gens = kl_generators(&p("23451"), &p("45231")).unwrap();
        let want = [
            Polynomial::parse("z[1][1]").unwrap(),
            Polynomial::parse(
                "z[1][1] - z[1][3]*z[2][1] - z[1][2]*z[3][1] + z[1][3]*z[2][2]*z[3][1]",
            )
            .unwrap(),
        ];
        let norm = |q: &Polynomial| q.sign_normalized();
        let got: BTreeSet<String> = gens.iter().map(|g| norm(g).to_string()).collect();
        let want: BTreeSet<String> = want.iter().map(|g| norm(g).to_string()).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn running_example_generators_are_homogeneous() {
        let (v, w) = (p("5123746"), p("7531462"));
        let gens = kl_generators(&v, &w).unwrap();
        assert!(!gens.is_empty());
        for g in &gens {
            let weights: BTreeSet<Vec<i64>> =
                g.terms().map(|(m, _)| monomial_weight(&v, m)).collect();
            assert_eq!(weights.len(), 1, "{g} is not homogeneous");
        }
        assert!(kl_generators(&w, &v).is_err());
    }

    #[test]
    fn schubert_generators() {
        assert!(schubert_determinantal_generators(&Permutation::longest(4)).is_empty());
        // 563412: essential boxes give the rank conditions of the example
        let gens = schubert_determinantal_generators(&p("563412"));
        assert!(!gens.is_empty());
        let ord = TermOrder::pure_lex(pi_sw_ne(&SpecializedMatrix::generic(6).vars())).unwrap();
        for g in &gens {
            assert!(g.lead_term(&ord).unwrap().is_some());
        }
    }

    #[test]
    fn minors_of_generic() {
        let m = SpecializedMatrix::generic(2);
        let d = m.minor(&[1, 2], &[1, 2]);
        assert_eq!(
            d,
            Polynomial::parse("z[1][1]*z[2][2] - z[1][2]*z[2][1]").unwrap()
        );
        assert_eq!(subsets(4, 2).len(), 6);
    }
}
