//! Per-pair analysis: every route to the multiplicity and Hilbert numerator,
//! plus the structural checks on the degenerate limit.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::covex::{shuffle_data, theta, unshuffle};
use crate::error::{Error, Result};
use crate::monideal::MonomialIdeal;
use crate::perm::{
    bounding_b, bruhat_leq, check_same_size, flag_b, is_covexillary, length, shape_lambda,
    Permutation,
};
use crate::poly::{
    buchberger_with_deadline, initial_ideal, is_groebner, kl_generators, pi_se_nw, pi_sw_ne,
    schubert_determinantal_generators, Polynomial, SpecializedMatrix, TermOrder,
};
use crate::srcomplex::{g_from_interior, Decomposability, SimplicialComplex};
use crate::tabpipe::{
    count_flagged_ssyt, det_multiplicity, g_poly, pipe_dreams, set_valued_census,
};
use crate::unipoly::UniPoly;

/// Variable priority used to break ties in the composite order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Shuffle {
    /// The row/column shuffle derived from `(v, w)`; covexillary `w` only.
    #[serde(rename = "covex")]
    Covex,
    /// Columns right to left, each bottom to top.
    #[serde(rename = "se-nw")]
    SeNw,
    /// Rows bottom to top, each left to right.
    #[serde(rename = "sw-ne")]
    SwNe,
}

impl fmt::Display for Shuffle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shuffle::Covex => "covex",
            Shuffle::SeNw => "se-nw",
            Shuffle::SwNe => "sw-ne",
        })
    }
}

impl FromStr for Shuffle {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "covex" => Ok(Shuffle::Covex),
            "se-nw" => Ok(Shuffle::SeNw),
            "sw-ne" => Ok(Shuffle::SwNe),
            other => Err(Error::Parse(format!("unknown shuffle {other:?}"))),
        }
    }
}

/// The composite order on the variables of `Z^(v)` for a given shuffle. A
/// covex shuffle for non-covexillary `w` falls back to se-nw. Returns the
/// shuffle actually used.
pub fn composite_order(
    v: &Permutation,
    w: &Permutation,
    shuffle: Shuffle,
) -> Result<(TermOrder, Shuffle)> {
    let vars = SpecializedMatrix::build_zv(v).vars();
    let effective = match shuffle {
        Shuffle::Covex if !is_covexillary(w) => Shuffle::SeNw,
        s => s,
    };
    let priority = match effective {
        Shuffle::Covex => shuffle_data(v, w)?.pi_order,
        Shuffle::SeNw => pi_se_nw(&vars),
        Shuffle::SwNe => pi_sw_ne(&vars),
    };
    Ok((TermOrder::composite(v, priority)?, effective))
}

#[derive(Clone, Debug)]
pub struct AnalysisOptions {
    pub shuffle: Shuffle,
    pub deadline: Option<Instant>,
    /// Search-node budget for the vertex decomposability test; `None` skips it.
    pub vertex_decomposable_budget: Option<usize>,
    pub timings: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            shuffle: Shuffle::Covex,
            deadline: None,
            vertex_decomposable_budget: None,
            timings: false,
        }
    }
}

pub const SCHEMA_VERSION: u32 = 1;

/// Everything computed for one pair `(v, w)`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PairReport {
    pub schema: u32,
    pub v: Permutation,
    pub w: Permutation,
    pub covexillary: bool,
    pub shuffle: Shuffle,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub theta: Option<Permutation>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lambda: Option<Vec<usize>>,
    #[serde(rename = "flag_B", skip_serializing_if = "Option::is_none", default)]
    pub flag_big_b: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub flag_b: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mult_tableau: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mult_det: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mult_facets: Option<u64>,
    pub mult_degree: u64,
    /// Coefficients of the Hilbert numerator `G(t)`, constant term first.
    pub g_numerator: Vec<i64>,
    pub initial_ideal: Vec<String>,
    pub checks: BTreeMap<String, bool>,
    /// Wall-clock microseconds per stage, only when requested.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timings: Option<BTreeMap<String, u64>>,
}

/// Check names whose failure would contradict a theorem (and so signals a bug)
/// for this kind of pair; every other failing check is a finding.
pub fn is_theorem_check(name: &str, covexillary: bool, shuffle: Shuffle) -> bool {
    match name {
        "mult_agree" | "dimension" | "k_polynomial_match" => true,
        "groebner_essential_minors"
        | "squarefree"
        | "equidimensional"
        | "pure"
        | "pseudomanifold"
        | "pipe_dream_components"
        | "census_match"
        | "census_tableaux"
        | "h_nonnegative"
        | "euler_ball_sphere"
        | "vertex_decomposable" => covexillary && shuffle == Shuffle::Covex,
        _ => false,
    }
}

impl PairReport {
    pub fn failed_checks(&self) -> impl Iterator<Item = &str> {
        self.checks
            .iter()
            .filter(|(_, &ok)| !ok)
            .map(|(k, _)| k.as_str())
    }

    pub fn theorem_failures(&self) -> Vec<String> {
        self.failed_checks()
            .filter(|name| is_theorem_check(name, self.covexillary, self.shuffle))
            .map(str::to_string)
            .collect()
    }

    pub fn findings(&self) -> Vec<String> {
        self.failed_checks()
            .filter(|name| !is_theorem_check(name, self.covexillary, self.shuffle))
            .map(str::to_string)
            .collect()
    }
}

fn to_u64(x: &BigInt) -> Result<u64> {
    x.to_u64()
        .ok_or_else(|| Error::Inconsistent(format!("count {x} does not fit in 64 bits")))
}

fn poly_coeffs(p: &UniPoly) -> Result<Vec<i64>> {
    p.to_i64_vec()
        .ok_or_else(|| Error::Inconsistent("Hilbert numerator coefficient overflow".into()))
}

struct Clock {
    enabled: bool,
    last: Instant,
    laps: BTreeMap<String, u64>,
}

impl Clock {
    fn new(enabled: bool) -> Self {
        Clock {
            enabled,
            last: Instant::now(),
            laps: BTreeMap::new(),
        }
    }

    fn lap(&mut self, name: &str) {
        if self.enabled {
            let now = Instant::now();
            self.laps
                .insert(name.into(), (now - self.last).as_micros() as u64);
            self.last = now;
        }
    }
}

/// Runs every applicable method on `(v, w)`.
pub fn analyze_pair(
    v: &Permutation,
    w: &Permutation,
    opts: &AnalysisOptions,
) -> Result<PairReport> {
    check_same_size(v, w)?;
    if !bruhat_leq(v, w)? {
        return Err(Error::NotBruhatLeq {
            v: v.to_string(),
            w: w.to_string(),
        });
    }
    let mut clock = Clock::new(opts.timings);
    let covexillary = is_covexillary(w);
    let (ord, shuffle) = composite_order(v, w, opts.shuffle)?;
    let mut checks = BTreeMap::new();

    let gens = kl_generators(v, w)?;
    checks.insert(
        "groebner_essential_minors".to_string(),
        is_groebner(&gens, &ord)?,
    );
    let gb = buchberger_with_deadline(&gens, &ord, opts.deadline)?;
    let init = initial_ideal(&gb, &ord)?;
    clock.lap("groebner");

    let k_poly = init.k_polynomial();
    let (codim, q) = k_poly.split_one_minus_t();
    let mult_degree = to_u64(&q.eval_one())?;
    let expected_dim = length(w) as isize - length(v) as isize;
    checks.insert(
        "dimension".into(),
        init.universe().len() as isize - codim as isize == expected_dim,
    );
    clock.lap("k_polynomial");

    let squarefree = init.is_squarefree();
    checks.insert("squarefree".into(), squarefree);
    let radical = init.radical();
    let complex = SimplicialComplex::from_ideal(&radical)?;
    let top = complex
        .facet_masks()
        .iter()
        .map(|f| f.count_ones())
        .max()
        .unwrap_or(0);
    let equidimensional = complex.is_pure();
    checks.insert("equidimensional".into(), equidimensional);
    checks.insert("pure".into(), complex.is_pure());
    checks.insert("pseudomanifold".into(), complex.is_pseudomanifold());
    let mult_facets = squarefree.then(|| {
        complex
            .facet_masks()
            .iter()
            .filter(|f| f.count_ones() == top)
            .count() as u64
    });
    let census = complex.interior_census().ok();
    if let Some(c) = &census {
        checks.insert("h_nonnegative".into(), c.h_vector.iter().all(|&h| h >= 0));
        let chi = complex.reduced_euler_characteristic();
        let euler_ok = if c.boundary_face_count > 0 {
            chi == 0
        } else {
            chi.abs() == 1
        };
        checks.insert("euler_ball_sphere".into(), euler_ok);
    }
    if let Some(budget) = opts.vertex_decomposable_budget {
        match complex.is_vertex_decomposable(budget) {
            Decomposability::Decomposable => {
                checks.insert("vertex_decomposable".into(), true);
            }
            Decomposability::NotDecomposable => {
                checks.insert("vertex_decomposable".into(), false);
            }
            Decomposability::Indeterminate => {}
        }
    }
    clock.lap("complex");

    let mut report = PairReport {
        schema: SCHEMA_VERSION,
        v: v.clone(),
        w: w.clone(),
        covexillary,
        shuffle,
        theta: None,
        lambda: None,
        flag_big_b: None,
        flag_b: None,
        mult_tableau: None,
        mult_det: None,
        mult_facets,
        mult_degree,
        g_numerator: poly_coeffs(&k_poly)?,
        initial_ideal: init.generators().iter().map(|m| m.to_string()).collect(),
        checks: BTreeMap::new(),
        timings: None,
    };

    if covexillary {
        let t = theta(v, w)?;
        let lambda = shape_lambda(w)?;
        let big_b = bounding_b(&t)?;
        let b = flag_b(&t)?;
        let mult_tableau = to_u64(&count_flagged_ssyt(&lambda, &b)?)?;
        let mult_det = to_u64(&det_multiplicity(&lambda, &b)?)?;
        let g = g_poly(&lambda, &b)?;
        clock.lap("tableaux");

        checks.insert("k_polynomial_match".into(), g == k_poly);
        let shift = length(&w.w0_times());
        if let Some(c) = &census {
            checks.insert("census_match".into(), g_from_interior(c, shift) == g);
            let sv = set_valued_census(&lambda, &b)?;
            let by_codim: BTreeMap<usize, u64> = sv
                .iter()
                .enumerate()
                .filter(|(_, n)| n.is_positive())
                .map(|(k, n)| Ok((k, to_u64(n)?)))
                .collect::<Result<_>>()?;
            checks.insert("census_tableaux".into(), by_codim == c.interior_by_codim);
        }
        if shuffle == Shuffle::Covex {
            checks.insert(
                "pipe_dream_components".into(),
                components_match_pipe_dreams(v, w, &radical)?,
            );
        }
        clock.lap("pipe_dreams");

        let mut mults = vec![mult_tableau, mult_det, mult_degree];
        mults.extend(mult_facets);
        checks.insert("mult_agree".into(), mults.windows(2).all(|p| p[0] == p[1]));
        report.theta = Some(t);
        report.lambda = Some(lambda.parts().to_vec());
        report.flag_big_b = Some(big_b.parts().to_vec());
        report.flag_b = Some(b.bounds().to_vec());
        report.mult_tableau = Some(mult_tableau);
        report.mult_det = Some(mult_det);
        report.g_numerator = poly_coeffs(&g)?;
    } else {
        checks.insert(
            "mult_agree".into(),
            mult_facets.is_none_or(|f| !equidimensional || f == mult_degree),
        );
    }
    report.checks = checks;
    if opts.timings {
        report.timings = Some(clock.laps);
    }
    Ok(report)
}

/// The minimal primes of `ideal` equal the pipe dreams of `Θ_{v,w}` moved to
/// `Z` coordinates by the row and column shuffles.
pub fn components_match_pipe_dreams(
    v: &Permutation,
    w: &Permutation,
    ideal: &MonomialIdeal,
) -> Result<bool> {
    let t = theta(v, w)?;
    let lambda = shape_lambda(w)?;
    let region = bounding_b(&t)?;
    let sd = shuffle_data(v, w)?;
    let from_pipes: BTreeSet<BTreeSet<_>> = pipe_dreams(&region, &lambda)?
        .into_iter()
        .map(|pd| unshuffle(&sd, pd.plusses))
        .collect();
    let from_ideal: BTreeSet<BTreeSet<_>> = ideal
        .prime_decomposition()?
        .into_iter()
        .map(|c| c.variables)
        .collect();
    Ok(from_pipes == from_ideal)
}

/// Pure lex order on all `n^2` entries of the generic matrix for the
/// Schubert determinantal ideal; the covex shuffle does not apply there.
pub fn schubert_order(n: usize, shuffle: Shuffle) -> Result<TermOrder> {
    let vars = SpecializedMatrix::generic(n).vars();
    match shuffle {
        Shuffle::SwNe => TermOrder::pure_lex(pi_sw_ne(&vars)),
        Shuffle::SeNw => TermOrder::pure_lex(pi_se_nw(&vars)),
        Shuffle::Covex => Err(Error::Unsupported(
            "the covex shuffle is defined for Kazhdan-Lusztig ideals only".into(),
        )),
    }
}

/// Reduced Gröbner basis and initial ideal of the Schubert determinantal
/// ideal of `w` under [`schubert_order`].
pub fn schubert_degeneration(
    w: &Permutation,
    shuffle: Shuffle,
    deadline: Option<Instant>,
) -> Result<(TermOrder, Vec<Polynomial>, MonomialIdeal)> {
    let ord = schubert_order(w.n(), shuffle)?;
    let gens = schubert_determinantal_generators(w);
    let gb = buchberger_with_deadline(&gens, &ord, deadline)?;
    let init = initial_ideal(&gb, &ord)?;
    Ok((ord, gb, init))
}

/// Reduced Gröbner basis, formatted lead term first.
pub fn format_basis(gb: &[Polynomial], ord: &TermOrder) -> Result<Vec<String>> {
    gb.iter().map(|g| g.format_with(ord)).collect()
}
