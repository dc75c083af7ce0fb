//! Monomial ideals: minimal generators, radicals, minimal primes of squarefree
//! ideals, K-polynomials, dimension and degree.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{GridVariable, Monomial};
use crate::unipoly::UniPoly;

/// A monomial ideal over a fixed, sorted variable universe, stored by its
/// minimal generators (sorted).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MonomialIdeal {
    universe: Vec<GridVariable>,
    gens: Vec<Monomial>,
}

/// Chooses the pivot variable for the K-polynomial recursion from the dense
/// generators and the candidate variable indices.
pub type Pivot<'a> = dyn FnMut(&[Vec<u8>], &[usize]) -> usize + 'a;

/// The prime ideal generated by a set of variables.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct PrimeComponent {
    pub variables: BTreeSet<GridVariable>,
}

impl fmt::Display for PrimeComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self
            .variables
            .iter()
            .map(|v| format!("z[{}][{}]", v.i, v.j))
            .collect();
        write!(f, "<{}>", vs.join(", "))
    }
}

/// Divisibility-minimal subset of `gens`, sorted and deduplicated.
fn minimal(gens: impl IntoIterator<Item = Monomial>) -> Vec<Monomial> {
    let mut all: Vec<Monomial> = gens
        .into_iter()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    all.sort_by_key(|m| m.degree());
    let mut out: Vec<Monomial> = Vec::new();
    for m in all {
        if !out.iter().any(|g| g.divides(&m)) {
            out.push(m);
        }
    }
    out.sort();
    out
}

impl MonomialIdeal {
    /// The ideal generated by `gens`, with the universe extended by any
    /// variable the generators use.
    pub fn new(universe: Vec<GridVariable>, gens: Vec<Monomial>) -> Self {
        let mut u: BTreeSet<GridVariable> = universe.into_iter().collect();
        for g in &gens {
            u.extend(g.support());
        }
        MonomialIdeal {
            universe: u.into_iter().collect(),
            gens: minimal(gens),
        }
    }

    pub fn universe(&self) -> &[GridVariable] {
        &self.universe
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.iter().any(|g| g.is_one())
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.gens.iter().any(|g| g.divides(m))
    }

    pub fn is_squarefree(&self) -> bool {
        self.gens.iter().all(|g| g.is_squarefree())
    }

    pub fn radical(&self) -> MonomialIdeal {
        MonomialIdeal {
            universe: self.universe.clone(),
            gens: minimal(
                self.gens
                    .iter()
                    .map(|g| Monomial::from_exponents(g.support().map(|v| (v, 1)))),
            ),
        }
    }

    fn index_of(&self, v: &GridVariable) -> usize {
        self.universe
            .binary_search(v)
            .expect("variable in universe")
    }

    fn bitmasks(&self) -> Result<Vec<u64>> {
        if self.universe.len() > 64 {
            return Err(Error::UniverseTooLarge(self.universe.len()));
        }
        Ok(self
            .gens
            .iter()
            .map(|g| {
                g.support()
                    .fold(0u64, |acc, v| acc | 1 << self.index_of(&v))
            })
            .collect())
    }

    pub(crate) fn mask_to_vars(&self, mask: u64) -> BTreeSet<GridVariable> {
        (0..self.universe.len())
            .filter(|k| mask >> k & 1 == 1)
            .map(|k| self.universe[k])
            .collect()
    }

    /// Minimal primes as bitmasks over the universe.
    pub(crate) fn minimal_cover_masks(&self) -> Result<Vec<u64>> {
        if !self.is_squarefree() {
            return Err(Error::NonSquarefree);
        }
        let edges = self.bitmasks()?;
        let mut covers = Vec::new();
        fn go(edges: &[u64], chosen: u64, banned: u64, out: &mut Vec<u64>) {
            let Some(&e) = edges.iter().find(|&&e| e & chosen == 0) else {
                out.push(chosen);
                return;
            };
            let mut banned = banned;
            let mut rest = e & !banned;
            while rest != 0 {
                let x = rest & rest.wrapping_neg();
                rest &= rest - 1;
                let now_chosen = chosen | x;
                // every uncovered edge must still have an allowed variable
                let ok = edges
                    .iter()
                    .all(|&f| f & now_chosen != 0 || f & !banned & !x != 0);
                if ok {
                    go(edges, now_chosen, banned, out);
                }
                banned |= x;
            }
        }
        go(&edges, 0, 0, &mut covers);
        covers.sort_by_key(|c| c.count_ones());
        let mut minimal_covers: Vec<u64> = Vec::new();
        for c in covers {
            if !minimal_covers.iter().any(|&m| m & !c == 0) {
                minimal_covers.push(c);
            }
        }
        Ok(minimal_covers)
    }

    /// Minimal primes of a squarefree ideal, sorted.
    pub fn prime_decomposition(&self) -> Result<Vec<PrimeComponent>> {
        let mut out: Vec<PrimeComponent> = self
            .minimal_cover_masks()?
            .into_iter()
            .map(|m| PrimeComponent {
                variables: self.mask_to_vars(m),
            })
            .collect();
        out.sort();
        Ok(out)
    }

    pub fn is_equidimensional(&self) -> Result<bool> {
        let sizes: BTreeSet<usize> = self
            .prime_decomposition()?
            .iter()
            .map(|p| p.variables.len())
            .collect();
        Ok(sizes.len() <= 1)
    }

    fn dense(&self) -> Vec<Vec<u8>> {
        self.gens
            .iter()
            .map(|g| {
                let mut e = vec![0u8; self.universe.len()];
                for (v, &x) in g.exponents() {
                    e[self.index_of(v)] = x as u8;
                }
                e
            })
            .collect()
    }

    /// Numerator `K(t)` of the standard-graded Hilbert series
    /// `Hilb(S/I, t) = K(t) / (1-t)^N`.
    pub fn k_polynomial(&self) -> UniPoly {
        self.k_polynomial_with_pivot(&mut most_frequent_pivot)
    }

    /// As [`k_polynomial`](Self::k_polynomial) with a caller-chosen pivot. The
    /// pivot must return a variable index from `candidates`.
    pub fn k_polynomial_with_pivot(&self, pivot: &mut Pivot<'_>) -> UniPoly {
        let mut memo = HashMap::new();
        k_rec(minimal_dense(self.dense()), pivot, &mut memo)
    }

    /// Krull dimension of `S/I` (`-1` for the unit ideal).
    pub fn dimension(&self) -> isize {
        let k = self.k_polynomial();
        if k.is_zero() {
            return -1;
        }
        self.universe.len() as isize - k.split_one_minus_t().0 as isize
    }

    /// Degree of `S/I` (0 for the unit ideal).
    pub fn degree(&self) -> BigInt {
        self.k_polynomial().split_one_minus_t().1.eval_one()
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gs: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
        write!(f, "<{}>", gs.join(", "))
    }
}

/// `{z11, z11 z12}`-style minimalization on a bare generator list.
pub fn minimalize(universe: Vec<GridVariable>, gens: Vec<Monomial>) -> MonomialIdeal {
    MonomialIdeal::new(universe, gens)
}

fn divides(a: &[u8], b: &[u8]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn minimal_dense(mut gens: Vec<Vec<u8>>) -> Vec<Vec<u8>> {
    gens.sort_by_key(|g| g.iter().map(|&x| x as u32).sum::<u32>());
    let mut out: Vec<Vec<u8>> = Vec::new();
    for g in gens {
        if !out.iter().any(|h| divides(h, &g)) {
            out.push(g);
        }
    }
    out.sort();
    out
}

fn degree_of(g: &[u8]) -> usize {
    g.iter().map(|&x| x as usize).sum()
}

/// Variables occurring in generators of degree at least two.
fn pivot_candidates(gens: &[Vec<u8>]) -> Vec<usize> {
    let n = gens.first().map_or(0, |g| g.len());
    (0..n)
        .filter(|&k| gens.iter().any(|g| g[k] > 0 && degree_of(g) > 1))
        .collect()
}

fn most_frequent_pivot(gens: &[Vec<u8>], candidates: &[usize]) -> usize {
    *candidates
        .iter()
        .max_by_key(|&&k| {
            (
                gens.iter().filter(|g| g[k] > 0 && degree_of(g) > 1).count(),
                std::cmp::Reverse(k),
            )
        })
        .expect("nonempty candidates")
}

fn pairwise_coprime(gens: &[Vec<u8>]) -> bool {
    let n = gens.first().map_or(0, |g| g.len());
    (0..n).all(|k| gens.iter().filter(|g| g[k] > 0).count() <= 1)
}

fn k_rec(
    gens: Vec<Vec<u8>>,
    pivot: &mut Pivot<'_>,
    memo: &mut HashMap<Vec<Vec<u8>>, UniPoly>,
) -> UniPoly {
    if gens.is_empty() {
        return UniPoly::one();
    }
    if gens.iter().any(|g| g.iter().all(|&x| x == 0)) {
        return UniPoly::zero();
    }
    if pairwise_coprime(&gens) {
        // complete intersection: Π (1 - t^deg g)
        return gens.iter().fold(UniPoly::one(), |acc, g| {
            &acc * &(&UniPoly::one() - &UniPoly::monomial(degree_of(g)))
        });
    }
    if let Some(k) = memo.get(&gens) {
        return k.clone();
    }
    let candidates = pivot_candidates(&gens);
    let x = pivot(&gens, &candidates);
    assert!(candidates.contains(&x), "pivot outside candidates");
    let n = gens[0].len();
    let mut unit = vec![0u8; n];
    unit[x] = 1;
    let mut plus = gens.clone();
    plus.push(unit);
    let colon: Vec<Vec<u8>> = gens
        .iter()
        .map(|g| {
            let mut h = g.clone();
            h[x] = h[x].saturating_sub(1);
            h
        })
        .collect();
    let a = k_rec(minimal_dense(plus), pivot, memo);
    let b = k_rec(minimal_dense(colon), pivot, memo);
    let k = &a + &(&UniPoly::monomial(1) * &b);
    memo.insert(gens, k.clone());
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Cell;

    fn mono(boxes: &[(usize, usize)]) -> Monomial {
        Monomial::from_exponents(boxes.iter().map(|&(i, j)| (Cell::new(i, j), 1)))
    }

    fn running_example_ideal() -> MonomialIdeal {
        let v = crate::perm::Permutation::parse("5123746").unwrap();
        let universe = crate::poly::SpecializedMatrix::build_zv(&v).vars();
        let gens = vec![
            mono(&[(1, 2)]),
            mono(&[(2, 1)]),
            mono(&[(2, 2)]),
            mono(&[(2, 3)]),
            mono(&[(2, 4)]),
            mono(&[(4, 2)]),
            mono(&[(1, 3), (4, 4)]),
        ];
        MonomialIdeal::new(universe, gens)
    }

    fn vars(boxes: &[(usize, usize)]) -> BTreeSet<Cell> {
        boxes.iter().map(|&(i, j)| Cell::new(i, j)).collect()
    }

    #[test]
    fn minimalization() {
        let i = minimalize(vec![], vec![mono(&[(1, 1)]), mono(&[(1, 1), (1, 2)])]);
        assert_eq!(i.generators(), &[mono(&[(1, 1)])]);
        assert_eq!(running_example_ideal().generators().len(), 7);
        assert!(minimalize(vec![Cell::new(1, 1)], vec![]).is_zero());
    }

    #[test]
    fn squarefree_and_radical() {
        assert!(running_example_ideal().is_squarefree());
        let sq = Monomial::from_exponents([(Cell::new(1, 1), 2)]);
        let i = MonomialIdeal::new(vec![], vec![sq]);
        assert!(!i.is_squarefree());
        assert_eq!(i.radical().generators(), &[mono(&[(1, 1)])]);
    }

    #[test]
    fn decomposition_running_example() {
        let comps = running_example_ideal().prime_decomposition().unwrap();
        let want = vec![
            PrimeComponent {
                variables: vars(&[(1, 2), (1, 3), (2, 1), (2, 2), (2, 3), (2, 4), (4, 2)]),
            },
            PrimeComponent {
                variables: vars(&[(1, 2), (2, 1), (2, 2), (2, 3), (2, 4), (4, 2), (4, 4)]),
            },
        ];
        assert_eq!(comps, want);
        assert!(running_example_ideal().is_equidimensional().unwrap());
    }

    #[test]
    fn decomposition_small() {
        let i = MonomialIdeal::new(vec![], vec![mono(&[(1, 1)])]);
        assert_eq!(i.prime_decomposition().unwrap().len(), 1);
        let tri = MonomialIdeal::new(
            vec![],
            vec![
                mono(&[(1, 1), (2, 2)]),
                mono(&[(1, 1), (3, 3)]),
                mono(&[(2, 2), (3, 3)]),
            ],
        );
        let comps = tri.prime_decomposition().unwrap();
        assert_eq!(comps.len(), 3);
        assert!(comps.iter().all(|c| c.variables.len() == 2));
        let uneven = MonomialIdeal::new(
            vec![],
            vec![mono(&[(1, 1), (2, 2)]), mono(&[(1, 1), (3, 3)])],
        );
        assert!(!uneven.is_equidimensional().unwrap());
        let sq = MonomialIdeal::new(
            vec![],
            vec![Monomial::from_exponents([(Cell::new(1, 1), 2)])],
        );
        assert!(matches!(
            sq.prime_decomposition(),
            Err(Error::NonSquarefree)
        ));
        let principal = MonomialIdeal::new(vec![], vec![mono(&[(1, 1), (1, 2), (2, 2)])]);
        assert!(principal.is_equidimensional().unwrap());
    }

    #[test]
    fn k_polynomials() {
        let zero = MonomialIdeal::new(vars(&[(1, 1), (1, 2)]).into_iter().collect(), vec![]);
        assert_eq!(zero.k_polynomial(), UniPoly::one());
        let x = MonomialIdeal::new(vec![], vec![mono(&[(1, 1)])]);
        assert_eq!(x.k_polynomial(), UniPoly::from_i64(&[1, -1]));
        let want = &UniPoly::one_minus_t_pow(7) * &UniPoly::from_i64(&[1, 1]);
        let i = running_example_ideal();
        assert_eq!(i.k_polynomial(), want);
        assert_eq!(i.dimension(), 8);
        assert_eq!(i.degree(), BigInt::from(2));
    }

    #[test]
    fn dimension_and_degree_edge_cases() {
        let maximal = MonomialIdeal::new(vec![], vec![mono(&[(1, 1)]), mono(&[(1, 2)])]);
        assert_eq!(maximal.dimension(), 0);
        assert_eq!(maximal.degree(), BigInt::from(1));
        let double = MonomialIdeal::new(
            vec![],
            vec![Monomial::from_exponents([(Cell::new(1, 1), 2)])],
        );
        assert_eq!(double.k_polynomial(), UniPoly::from_i64(&[1, 0, -1]));
        assert_eq!(double.degree(), BigInt::from(2));
        let unit = MonomialIdeal::new(vec![Cell::new(1, 1)], vec![Monomial::one()]);
        assert!(unit.k_polynomial().is_zero());
        assert_eq!(unit.dimension(), -1);
    }
}
