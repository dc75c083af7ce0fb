//! Sliding essential boxes of covexillary permutations, the permutation
//! `Θ_{v,w}`, and the row/column shuffles that put the Kazhdan–Lusztig ideal of
//! `(v, w)` in antidiagonal position.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{
    bruhat_leq, essential_set, flag_b, is_covexillary, rank_matrix, shape_lambda, Cell, Partition,
    Permutation,
};
use crate::poly::SpecializedMatrix;

/// How far an essential box of `w` slides southwest and the rank it ends with.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct EssentialMove {
    pub steps: usize,
    pub target_rank: usize,
}

pub type EssentialMoves = BTreeMap<Cell, EssentialMove>;

fn require_covexillary(w: &Permutation) -> Result<()> {
    if is_covexillary(w) {
        Ok(())
    } else {
        Err(Error::NotCovexillary(w.to_string()))
    }
}

fn require_below(v: &Permutation, w: &Permutation) -> Result<()> {
    if bruhat_leq(v, w)? {
        Ok(())
    } else {
        Err(Error::NotBruhatLeq {
            v: v.to_string(),
            w: w.to_string(),
        })
    }
}

/// Slides the essential box `e0` of `w` one step southwest, lowering its rank
/// by one. The result is checked against the expected diagram change.
pub fn transition(w: &Permutation, e0: Cell) -> Result<Permutation> {
    require_covexillary(w)?;
    let ess = essential_set(w);
    if !ess.contains(&e0) {
        return Err(Error::NotEssential {
            i: e0.i,
            j: e0.j,
            w: w.to_string(),
        });
    }
    let ranks = rank_matrix(w);
    let r = ranks.at(e0);
    if r == 0 {
        return Err(Error::ZeroRank {
            i: e0.i,
            j: e0.j,
            w: w.to_string(),
        });
    }
    let n = w.n();
    let dominated: Vec<Cell> = (1..=e0.j)
        .map(|j| Cell::new(w.dot_row(j), j))
        .filter(|d| d.i <= e0.i)
        .collect();
    let top = dominated.iter().max_by_key(|d| d.i).copied();
    let right = dominated.iter().max_by_key(|d| d.j).copied();
    let (Some(top), Some(right)) = (top, right) else {
        return Err(Error::NotCovexillary(w.to_string()));
    };
    if top != right {
        return Err(Error::NotCovexillary(w.to_string()));
    }
    let j1 = top.j;
    let j2 = e0.j;
    let j3 = w.dot_col(e0.i);
    let mut word = w.word().to_vec();
    word[j1 - 1] = n + 1 - e0.i;
    word[j2 - 1] = w.at(j1);
    word[j3 - 1] = w.at(j2);
    let next = Permutation::new(word)?;

    let fail = |what: &str| {
        Err(Error::Inconsistent(format!(
            "transition {w} at {e0}: {what}"
        )))
    };
    if !is_covexillary(&next) {
        return fail("result is not covexillary");
    }
    if shape_lambda(&next)? != shape_lambda(w)? {
        return fail("shape changed");
    }
    let moved = Cell::new(e0.i - 1, e0.j - 1);
    let mut want = ess.clone();
    want.remove(&e0);
    want.insert(moved);
    if essential_set(&next) != want {
        return fail("essential set is not the slid one");
    }
    let next_ranks = rank_matrix(&next);
    if next_ranks.at(moved) + 1 != r {
        return fail("rank of the slid box did not drop by one");
    }
    if ess
        .iter()
        .filter(|&&e| e != e0)
        .any(|&e| next_ranks.at(e) != ranks.at(e))
    {
        return fail("another essential rank changed");
    }
    Ok(next)
}

/// For each `e ∈ E(w)`: slide by `r^v_e` steps, ending at rank `r^w_e - r^v_e`.
pub fn essential_moves(v: &Permutation, w: &Permutation) -> Result<EssentialMoves> {
    require_covexillary(w)?;
    require_below(v, w)?;
    let (rv, rw) = (rank_matrix(v), rank_matrix(w));
    Ok(essential_set(w)
        .into_iter()
        .map(|e| {
            (
                e,
                EssentialMove {
                    steps: rv.at(e),
                    target_rank: rw.at(e) - rv.at(e),
                },
            )
        })
        .collect())
}

/// The covexillary permutation `Θ_{v,w}` obtained by sliding every essential
/// box `e` of `w` southwest by `r^v_e` steps.
pub fn theta(v: &Permutation, w: &Permutation) -> Result<Permutation> {
    let moves = essential_moves(v, w)?;
    // current position -> (original box, steps left)
    let mut live: BTreeMap<Cell, (Cell, usize)> =
        moves.iter().map(|(&e, m)| (e, (e, m.steps))).collect();
    let mut cur = w.clone();
    loop {
        let pick = live
            .iter()
            .filter(|(_, &(_, left))| left > 0)
            .map(|(&pos, _)| pos)
            .max_by_key(|pos| (pos.i, pos.j));
        let Some(pos) = pick else { break };
        cur = transition(&cur, pos)?;
        let (orig, left) = live.remove(&pos).expect("picked from map");
        let moved = Cell::new(pos.i - 1, pos.j - 1);
        if live.insert(moved, (orig, left - 1)).is_some() {
            return Err(Error::Inconsistent(format!(
                "two essential boxes of {w} collide at {moved}"
            )));
        }
    }

    let fail = |what: &str| {
        Err(Error::Inconsistent(format!(
            "theta({v}, {w}) = {cur}: {what}"
        )))
    };
    if shape_lambda(&cur)? != shape_lambda(w)? {
        return fail("shape differs from w");
    }
    let slid: BTreeSet<Cell> = moves
        .iter()
        .map(|(e, m)| Cell::new(e.i - m.steps, e.j - m.steps))
        .collect();
    if essential_set(&cur) != slid {
        return fail("essential set is not the slid one");
    }
    let ranks = rank_matrix(&cur);
    for (e, m) in &moves {
        if ranks.get(e.i - m.steps, e.j - m.steps) != m.target_rank {
            return fail("final rank mismatch");
        }
    }
    Ok(cur)
}

/// Row shuffle `ρ`, column shuffle `χ`, and the variable priority `π` they
/// induce on the free entries of `Z^(v)`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ShuffleData {
    pub rho: Permutation,
    pub chi: Permutation,
    pub pi_order: Vec<Cell>,
}

/// Row sets `R_0..R_{ℓ+1}` and column sets `C_0..C_{ℓ+1}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ShuffleBlocks {
    pub rows: Vec<BTreeSet<usize>>,
    pub cols: Vec<BTreeSet<usize>>,
    /// `k_i`: ones of `Z^(v)` dominated by the `i`-th corner box.
    pub dominated_ones: Vec<usize>,
}

pub fn shuffle_blocks(v: &Permutation, w: &Permutation) -> Result<ShuffleBlocks> {
    require_covexillary(w)?;
    require_below(v, w)?;
    let n = w.n();
    let lambda = shape_lambda(w)?;
    let b = flag_b(w)?;
    let l = lambda.len();
    let mut rows = vec![BTreeSet::new()];
    let mut cols = vec![(1..=n).collect::<BTreeSet<_>>()];
    let mut dominated_ones = Vec::with_capacity(l);
    for i in 1..=l {
        let corner = corner_box(&lambda, b.get(i), i);
        let ones: Vec<Cell> = (1..=n)
            .map(|beta| Cell::new(n + 1 - v.at(beta), beta))
            .filter(|one| one.dominated_by(&corner))
            .collect();
        let mut r: BTreeSet<usize> = (1..=corner.i).collect();
        let mut c: BTreeSet<usize> = (1..=corner.j).collect();
        for one in &ones {
            r.remove(&one.i);
            c.remove(&one.j);
        }
        dominated_ones.push(ones.len());
        rows.push(r);
        cols.push(c);
    }
    rows.push((1..=n).collect());
    cols.push(BTreeSet::new());
    Ok(ShuffleBlocks {
        rows,
        cols,
        dominated_ones,
    })
}

/// Corner `(b_i, λ_i - i + b_i)` attached to row `i` of `λ`.
fn corner_box(lambda: &Partition, b_i: usize, i: usize) -> Cell {
    Cell::new(b_i, lambda.part(i) + b_i - i)
}

pub fn shuffle_data(v: &Permutation, w: &Permutation) -> Result<ShuffleData> {
    let blocks = shuffle_blocks(v, w)?;
    let l = blocks.rows.len() - 2;
    let inconsistent =
        |what: &str| Error::Inconsistent(format!("shuffle data of ({v}, {w}): {what}"));
    for i in 0..=l {
        if !blocks.rows[i].is_subset(&blocks.rows[i + 1]) {
            return Err(inconsistent("row sets are not nested"));
        }
        if !blocks.cols[i + 1].is_subset(&blocks.cols[i]) {
            return Err(inconsistent("column sets are not nested"));
        }
    }
    let mut rho = Vec::with_capacity(w.n());
    for i in 0..=l {
        rho.extend(blocks.rows[i + 1].difference(&blocks.rows[i]));
    }
    let mut chi = Vec::with_capacity(w.n());
    for i in (0..=l).rev() {
        chi.extend(blocks.cols[i].difference(&blocks.cols[i + 1]));
    }
    let rho = Permutation::new(rho).map_err(|_| inconsistent("rho is not a permutation"))?;
    let chi = Permutation::new(chi).map_err(|_| inconsistent("chi is not a permutation"))?;
    let zv = SpecializedMatrix::build_zv(v);
    let n = w.n();
    let mut pi_order = Vec::with_capacity(zv.var_count());
    for i in 1..=n {
        for j in 1..=n {
            let c = Cell::new(rho.at(i), chi.at(j));
            if zv.is_var(c.i, c.j) {
                pi_order.push(c);
            }
        }
    }
    Ok(ShuffleData { rho, chi, pi_order })
}

/// Moves a set of boxes of the shuffled matrix back to `Z` coordinates,
/// `(i, j) -> (ρ(i), χ(j))`.
pub fn unshuffle(data: &ShuffleData, boxes: impl IntoIterator<Item = Cell>) -> BTreeSet<Cell> {
    boxes
        .into_iter()
        .map(|c| Cell::new(data.rho.at(c.i), data.chi.at(c.j)))
        .collect()
}
