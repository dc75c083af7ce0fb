//! Buchberger's algorithm over a dense exponent representation.
//!
//! A monomial is stored as its order key: the values of the order's grading
//! forms followed by the exponent vector in priority order. Comparing keys
//! lexicographically is then exactly the term order, and multiplication is
//! componentwise addition.

use std::collections::BTreeMap;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Monomial, Polynomial, TermOrder};
use crate::error::{Error, Result};
use crate::monideal::MonomialIdeal;

type Mono = Box<[i32]>;
type Poly = Vec<(Mono, BigRational)>;

struct Ring {
    nvars: usize,
    grading: Vec<Vec<i32>>,
}

impl Ring {
    fn new(ord: &TermOrder) -> Self {
        Ring {
            nvars: ord.priority().len(),
            grading: ord
                .grading_rows()
                .into_iter()
                .map(|row| row.into_iter().map(|x| x as i32).collect())
                .collect(),
        }
    }

    fn prefix(&self) -> usize {
        self.grading.len()
    }

    fn exps<'a>(&self, m: &'a [i32]) -> &'a [i32] {
        &m[self.prefix()..]
    }

    fn mono(&self, exps: &[i32]) -> Mono {
        let mut key = Vec::with_capacity(self.prefix() + self.nvars);
        for row in &self.grading {
            key.push(row.iter().zip(exps).map(|(a, b)| a * b).sum());
        }
        key.extend_from_slice(exps);
        key.into_boxed_slice()
    }

    fn mul(&self, a: &[i32], b: &[i32]) -> Mono {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn divides(&self, a: &[i32], b: &[i32]) -> bool {
        self.exps(a).iter().zip(self.exps(b)).all(|(x, y)| x <= y)
    }

    /// `b / a`; requires `a | b`.
    fn quotient(&self, b: &[i32], a: &[i32]) -> Mono {
        b.iter().zip(a).map(|(x, y)| x - y).collect()
    }

    fn lcm(&self, a: &[i32], b: &[i32]) -> Mono {
        let e: Vec<i32> = self
            .exps(a)
            .iter()
            .zip(self.exps(b))
            .map(|(x, y)| *x.max(y))
            .collect();
        self.mono(&e)
    }

    fn coprime(&self, a: &[i32], b: &[i32]) -> bool {
        self.exps(a)
            .iter()
            .zip(self.exps(b))
            .all(|(x, y)| *x == 0 || *y == 0)
    }

    fn degree(&self, a: &[i32]) -> i32 {
        self.exps(a).iter().sum()
    }

    fn encode(&self, p: &Polynomial, ord: &TermOrder) -> Result<Poly> {
        let mut out: Poly = Vec::with_capacity(p.len());
        for (m, c) in p.terms() {
            let mut e = vec![0i32; self.nvars];
            for (v, &x) in m.exponents() {
                let k = ord
                    .index_of(v)
                    .ok_or(Error::ForeignVariable { i: v.i, j: v.j })?;
                e[k] = x as i32;
            }
            out.push((self.mono(&e), c.clone()));
        }
        out.sort_by(|a, b| b.0.cmp(&a.0));
        Ok(out)
    }

    fn to_monomial(&self, m: &[i32], ord: &TermOrder) -> Monomial {
        Monomial::from_exponents(
            self.exps(m)
                .iter()
                .enumerate()
                .map(|(k, &e)| (ord.priority()[k], e as u32)),
        )
    }

    fn to_sparse(&self, p: &Poly, ord: &TermOrder) -> Polynomial {
        Polynomial::from_terms(p.iter().map(|(m, c)| (self.to_monomial(m, ord), c.clone())))
    }

    fn monic(&self, mut p: Poly) -> Poly {
        if let Some((_, lc)) = p.first() {
            if !lc.is_one() {
                let inv = lc.recip();
                for (_, c) in p.iter_mut() {
                    *c *= &inv;
                }
            }
        }
        p
    }

    /// Full reduction of `f` by polynomials with monic leads.
    fn reduce(&self, f: Poly, basis: &[&Poly]) -> Poly {
        let mut work: BTreeMap<Mono, BigRational> = f.into_iter().collect();
        let mut rem: Poly = Vec::new();
        while let Some((m, c)) = work.pop_last() {
            let divisor = basis
                .iter()
                .find(|g| g.first().is_some_and(|(lm, _)| self.divides(lm, &m)));
            match divisor {
                Some(g) => {
                    let q = self.quotient(&m, &g[0].0);
                    for (gm, gc) in &g[1..] {
                        let key = self.mul(gm, &q);
                        let delta = &c * gc;
                        match work.entry(key) {
                            std::collections::btree_map::Entry::Vacant(slot) => {
                                slot.insert(-delta);
                            }
                            std::collections::btree_map::Entry::Occupied(mut slot) => {
                                *slot.get_mut() -= delta;
                                if slot.get().is_zero() {
                                    slot.remove();
                                }
                            }
                        }
                    }
                }
                None => rem.push((m, c)),
            }
        }
        rem
    }

    fn spoly(&self, f: &Poly, g: &Poly) -> Poly {
        let l = self.lcm(&f[0].0, &g[0].0);
        let qf = self.quotient(&l, &f[0].0);
        let qg = self.quotient(&l, &g[0].0);
        let mut acc: BTreeMap<Mono, BigRational> = BTreeMap::new();
        for (m, c) in &f[1..] {
            *acc.entry(self.mul(m, &qf))
                .or_insert_with(BigRational::zero) += c;
        }
        for (m, c) in &g[1..] {
            *acc.entry(self.mul(m, &qg))
                .or_insert_with(BigRational::zero) -= c;
        }
        let mut out: Poly = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        out.reverse();
        out
    }
}

struct Engine<'a> {
    ring: Ring,
    polys: Vec<Poly>,
    active: Vec<bool>,
    pairs: Vec<(usize, usize)>,
    deadline: Option<Instant>,
    _ord: &'a TermOrder,
}

impl Engine<'_> {
    fn lead(&self, k: usize) -> &Mono {
        &self.polys[k][0].0
    }

    fn active_refs(&self) -> Vec<&Poly> {
        self.polys
            .iter()
            .zip(&self.active)
            .filter(|(_, &a)| a)
            .map(|(p, _)| p)
            .collect()
    }

    /// Gebauer–Möller update with the new basis element `h`.
    fn update(&mut self, h: Poly) {
        let r = &self.ring;
        let hk = self.polys.len();
        let lh = h[0].0.clone();
        let olds: Vec<usize> = (0..self.polys.len()).filter(|&k| self.active[k]).collect();
        let lcms: BTreeMap<usize, Mono> = olds
            .iter()
            .map(|&k| (k, r.lcm(&lh, &self.polys[k][0].0)))
            .collect();

        // chain criterion among the new pairs
        let mut kept: Vec<usize> = Vec::new();
        for (idx, &g1) in olds.iter().enumerate() {
            let l1 = &lcms[&g1];
            if r.coprime(&lh, self.lead(g1)) {
                kept.push(g1);
                continue;
            }
            let dominated_later = olds[idx + 1..].iter().any(|g2| r.divides(&lcms[g2], l1));
            let dominated_kept = kept.iter().any(|g2| r.divides(&lcms[g2], l1));
            if !dominated_later && !dominated_kept {
                kept.push(g1);
            }
        }
        // product criterion
        let new_pairs: Vec<(usize, usize)> = kept
            .into_iter()
            .filter(|&g| !r.coprime(&lh, self.lead(g)))
            .map(|g| (g, hk))
            .collect();
        // drop old pairs made redundant by h
        let polys = &self.polys;
        self.pairs.retain(|&(a, b)| {
            let lab = r.lcm(&polys[a][0].0, &polys[b][0].0);
            !(r.divides(&lh, &lab)
                && r.lcm(&polys[a][0].0, &lh) != lab
                && r.lcm(&lh, &polys[b][0].0) != lab)
        });
        self.pairs.extend(new_pairs);
        for &k in &olds {
            if r.divides(&lh, &self.polys[k][0].0) {
                self.active[k] = false;
            }
        }
        self.polys.push(h);
        self.active.push(true);
    }

    fn pair_key(&self, (a, b): (usize, usize)) -> (i32, Mono) {
        let l = self.ring.lcm(self.lead(a), self.lead(b));
        (self.ring.degree(&l), l)
    }

    fn check_deadline(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(Error::Budget),
            _ => Ok(()),
        }
    }

    fn run(&mut self, inputs: Vec<Poly>) -> Result<()> {
        for f in inputs {
            self.check_deadline()?;
            let h = self.ring.reduce(f, &self.active_refs());
            if !h.is_empty() {
                let h = self.ring.monic(h);
                self.update(h);
            }
        }
        while !self.pairs.is_empty() {
            self.check_deadline()?;
            let (pos, _) = self
                .pairs
                .iter()
                .enumerate()
                .map(|(k, &p)| (k, self.pair_key(p)))
                .min_by(|x, y| x.1.cmp(&y.1))
                .expect("nonempty");
            let (a, b) = self.pairs.swap_remove(pos);
            let s = self.ring.spoly(&self.polys[a], &self.polys[b]);
            let h = self.ring.reduce(s, &self.active_refs());
            if !h.is_empty() {
                let h = self.ring.monic(h);
                self.update(h);
            }
        }
        Ok(())
    }

    fn reduced_basis(&self) -> Vec<Poly> {
        let basis: Vec<Poly> = self.active_refs().into_iter().cloned().collect();
        let mut out: Vec<Poly> = Vec::with_capacity(basis.len());
        for (k, g) in basis.iter().enumerate() {
            let others: Vec<&Poly> = basis
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, p)| p)
                .collect();
            let mut tail = self.ring.reduce(g[1..].to_vec(), &others);
            let mut p = vec![g[0].clone()];
            p.append(&mut tail);
            out.push(p);
        }
        out.sort_by(|a, b| a[0].0.cmp(&b[0].0));
        out
    }
}

fn prepare(gens: &[Polynomial], ord: &TermOrder) -> Result<(Ring, Vec<Poly>)> {
    let ring = Ring::new(ord);
    let mut polys = Vec::with_capacity(gens.len());
    for g in gens {
        let p = ring.encode(g, ord)?;
        if !p.is_empty() {
            polys.push(p);
        }
    }
    // process small leads first
    polys.sort_by(|a, b| a[0].0.cmp(&b[0].0));
    Ok((ring, polys))
}

/// Reduced, monic Gröbner basis of the ideal generated by `gens`, sorted by
/// increasing lead monomial.
pub fn buchberger(gens: &[Polynomial], ord: &TermOrder) -> Result<Vec<Polynomial>> {
    buchberger_with_deadline(gens, ord, None)
}

/// As [`buchberger`], failing with [`Error::Budget`] once `deadline` passes.
pub fn buchberger_with_deadline(
    gens: &[Polynomial],
    ord: &TermOrder,
    deadline: Option<Instant>,
) -> Result<Vec<Polynomial>> {
    let (ring, inputs) = prepare(gens, ord)?;
    let mut engine = Engine {
        ring,
        polys: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
        deadline,
        _ord: ord,
    };
    engine.run(inputs)?;
    Ok(engine
        .reduced_basis()
        .iter()
        .map(|p| engine.ring.to_sparse(p, ord))
        .collect())
}

/// Whether every S-polynomial of `gens` reduces to zero modulo `gens`.
pub fn is_groebner(gens: &[Polynomial], ord: &TermOrder) -> Result<bool> {
    let (ring, polys) = prepare(gens, ord)?;
    let polys: Vec<Poly> = polys.into_iter().map(|p| ring.monic(p)).collect();
    let refs: Vec<&Poly> = polys.iter().collect();
    for a in 0..polys.len() {
        for b in a + 1..polys.len() {
            if ring.coprime(&polys[a][0].0, &polys[b][0].0) {
                continue;
            }
            let s = ring.spoly(&polys[a], &polys[b]);
            if !ring.reduce(s, &refs).is_empty() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The monomial ideal of lead terms of `gb`.
pub fn initial_ideal(gb: &[Polynomial], ord: &TermOrder) -> Result<MonomialIdeal> {
    let mut leads = Vec::with_capacity(gb.len());
    for g in gb {
        if let Some((m, _)) = g.lead_term(ord)? {
            leads.push(m);
        }
    }
    Ok(MonomialIdeal::new(ord.priority().to_vec(), leads))
}
