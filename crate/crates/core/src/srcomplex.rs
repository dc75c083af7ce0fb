//! Stanley–Reisner complexes of squarefree monomial ideals.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::binomial;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monideal::MonomialIdeal;
use crate::poly::GridVariable;
use crate::unipoly::UniPoly;

/// A simplicial complex on at most 64 vertices; faces are bitmasks over
/// `vertices`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SimplicialComplex {
    vertices: Vec<GridVariable>,
    facets: Vec<u64>,
}

/// Face counts of a pure complex, split into interior and boundary faces.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct FaceCensus {
    /// Interior faces by codimension `dim Δ - dim F`.
    pub interior_by_codim: BTreeMap<usize, u64>,
    pub boundary_face_count: u64,
    /// `f_vector[k]` = faces with `k` vertices (`f_vector[0] = 1` for `∅`).
    pub f_vector: Vec<u64>,
    pub h_vector: Vec<i64>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Decomposability {
    Decomposable,
    NotDecomposable,
    /// The search budget ran out before an answer was found.
    Indeterminate,
}

fn maximal_only(mut sets: Vec<u64>) -> Vec<u64> {
    sets.sort_unstable_by_key(|s| std::cmp::Reverse(s.count_ones()));
    let mut out: Vec<u64> = Vec::new();
    for s in sets {
        if !out.iter().any(|&f| f & s == s) {
            out.push(s);
        }
    }
    out.sort_unstable();
    out
}

fn subsets_of(mask: u64) -> impl Iterator<Item = u64> {
    // walks every submask of `mask`, ending with 0
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            Some((cur - 1) & mask)
        };
        Some(cur)
    })
}

impl SimplicialComplex {
    /// Complex with the given facets (non-maximal sets are dropped).
    pub fn from_facets(vertices: Vec<GridVariable>, facets: Vec<u64>) -> Result<Self> {
        if vertices.len() > 64 {
            return Err(Error::UniverseTooLarge(vertices.len()));
        }
        Ok(SimplicialComplex {
            vertices,
            facets: maximal_only(facets),
        })
    }

    /// Facets are the complements of the minimal primes of `ideal`.
    pub fn from_ideal(ideal: &MonomialIdeal) -> Result<Self> {
        let n = ideal.universe().len();
        if n > 64 {
            return Err(Error::UniverseTooLarge(n));
        }
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let facets = ideal
            .minimal_cover_masks()?
            .into_iter()
            .map(|c| full & !c)
            .collect();
        SimplicialComplex::from_facets(ideal.universe().to_vec(), facets)
    }

    pub fn vertices(&self) -> &[GridVariable] {
        &self.vertices
    }

    pub fn facet_masks(&self) -> &[u64] {
        &self.facets
    }

    pub fn facets(&self) -> Vec<Vec<GridVariable>> {
        self.facets
            .iter()
            .map(|&f| {
                (0..self.vertices.len())
                    .filter(|k| f >> k & 1 == 1)
                    .map(|k| self.vertices[k])
                    .collect()
            })
            .collect()
    }

    /// `max |F| - 1`; `None` for the void complex with no faces at all.
    pub fn dimension(&self) -> Option<isize> {
        self.facets
            .iter()
            .map(|f| f.count_ones() as isize - 1)
            .max()
    }

    pub fn is_pure(&self) -> bool {
        self.facets
            .windows(2)
            .all(|p| p[0].count_ones() == p[1].count_ones())
    }

    /// Codimension-one faces with the number of facets containing each.
    fn ridge_counts(&self) -> HashMap<u64, usize> {
        let mut counts = HashMap::new();
        for &f in &self.facets {
            let mut rest = f;
            while rest != 0 {
                let x = rest & rest.wrapping_neg();
                rest &= rest - 1;
                *counts.entry(f & !x).or_insert(0) += 1;
            }
        }
        counts
    }

    /// Pure, and every codimension-one face lies in at most two facets.
    pub fn is_pseudomanifold(&self) -> bool {
        self.is_pure() && self.ridge_counts().values().all(|&c| c <= 2)
    }

    fn all_faces(&self) -> HashSet<u64> {
        let mut faces = HashSet::new();
        for &f in &self.facets {
            faces.extend(subsets_of(f));
        }
        faces
    }

    pub fn f_vector(&self) -> Vec<u64> {
        let Some(dim) = self.dimension() else {
            return Vec::new();
        };
        let mut f = vec![0u64; (dim + 2) as usize];
        for s in self.all_faces() {
            f[s.count_ones() as usize] += 1;
        }
        f
    }

    /// `h_k = Σ_i (-1)^{k-i} C(d-i, k-i) f_{i-1}` with `d = dim + 1`.
    pub fn h_vector(&self) -> Vec<i64> {
        let f = self.f_vector();
        if f.is_empty() {
            return Vec::new();
        }
        let d = f.len() - 1;
        (0..=d)
            .map(|k| {
                (0..=k)
                    .map(|i| {
                        let c = binomial(BigInt::from(d - i), BigInt::from(k - i));
                        let term = c * BigInt::from(f[i]);
                        if (k - i) % 2 == 0 {
                            term
                        } else {
                            -term
                        }
                    })
                    .sum::<BigInt>()
                    .try_into()
                    .expect("h-vector entry fits in i64")
            })
            .collect()
    }

    /// `Σ_k (-1)^{k-1} f_{k-1}`: 0 for balls, `±1` for spheres.
    pub fn reduced_euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(k, &c)| if k % 2 == 0 { -(c as i64) } else { c as i64 })
            .sum()
    }

    /// Boundary faces are the faces of codimension-one faces that lie in
    /// exactly one facet; every other face, `∅` included, is interior.
    pub fn interior_census(&self) -> Result<FaceCensus> {
        if !self.is_pure() {
            return Err(Error::NonPure);
        }
        let facet_size = self.facets.first().map_or(0, |f| f.count_ones() as usize);
        let mut boundary = HashSet::new();
        for (ridge, count) in self.ridge_counts() {
            if count == 1 {
                boundary.extend(subsets_of(ridge));
            }
        }
        let mut interior_by_codim = BTreeMap::new();
        for face in self.all_faces() {
            if !boundary.contains(&face) {
                *interior_by_codim
                    .entry(facet_size - face.count_ones() as usize)
                    .or_insert(0) += 1;
            }
        }
        Ok(FaceCensus {
            interior_by_codim,
            boundary_face_count: boundary.len() as u64,
            f_vector: self.f_vector(),
            h_vector: self.h_vector(),
        })
    }

    /// Vertex decomposability, giving up after `budget` search nodes.
    pub fn is_vertex_decomposable(&self, budget: usize) -> Decomposability {
        let mut search = VdSearch {
            memo: HashMap::new(),
            nodes: 0,
            budget,
        };
        match search.run(self.facets.clone()) {
            Some(true) => Decomposability::Decomposable,
            Some(false) => Decomposability::NotDecomposable,
            None => Decomposability::Indeterminate,
        }
    }
}

/// `Σ_k (-1)^k (1-t)^{shift+k} #(interior faces of codimension k)`.
pub fn g_from_interior(census: &FaceCensus, shift: usize) -> UniPoly {
    let mut g = UniPoly::zero();
    for (&k, &count) in &census.interior_by_codim {
        let term = UniPoly::one_minus_t_pow(shift + k).scale(&BigInt::from(count));
        g = if k % 2 == 0 { &g + &term } else { &g - &term };
    }
    g
}

struct VdSearch {
    memo: HashMap<Vec<u64>, bool>,
    nodes: usize,
    budget: usize,
}

impl VdSearch {
    fn run(&mut self, facets: Vec<u64>) -> Option<bool> {
        if facets.is_empty() {
            return Some(true);
        }
        let cone = facets.iter().fold(u64::MAX, |acc, &f| acc & f);
        let facets = maximal_only(facets.into_iter().map(|f| f & !cone).collect());
        if facets.len() == 1 {
            return Some(true);
        }
        let size = facets[0].count_ones();
        if facets.iter().any(|f| f.count_ones() != size) {
            return Some(false);
        }
        if let Some(&known) = self.memo.get(&facets) {
            return Some(known);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        let support = facets.iter().fold(0u64, |acc, &f| acc | f);
        let mut rest = support;
        let mut answer = false;
        while rest != 0 {
            let x = rest & rest.wrapping_neg();
            rest &= rest - 1;
            let del: Vec<u64> = facets.iter().copied().filter(|f| f & x == 0).collect();
            let link: Vec<u64> = facets
                .iter()
                .filter(|&&f| f & x != 0)
                .map(|&f| f & !x)
                .collect();
            // shedding: the deletion keeps full dimension
            let shedding = link.iter().all(|&l| del.iter().any(|&d| d & l == l));
            if !shedding {
                continue;
            }
            if self.run(link)? && self.run(del)? {
                answer = true;
                break;
            }
        }
        self.memo.insert(facets, answer);
        Some(answer)
    }
}
