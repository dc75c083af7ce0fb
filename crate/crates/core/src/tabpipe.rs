//! Flagged tableaux, set-valued tableaux, pipe dreams, and the covexillary
//! multiplicity and Hilbert series formulas built from them.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::covex::theta;
use crate::error::{Error, Result};
use crate::perm::{flag_b, length, shape_lambda, Cell, FlagVector, Partition, Permutation};
use crate::unipoly::UniPoly;

/// A semistandard tableau of shape `λ`; `rows[r]` is row `r + 1` of `λ`,
/// displayed top to bottom.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct FlaggedTableau {
    pub shape: Partition,
    pub rows: Vec<Vec<usize>>,
}

impl FlaggedTableau {
    /// Rows weakly increase, columns strictly increase, row `r` entries `<= b_r`.
    pub fn is_valid(&self, b: &FlagVector) -> bool {
        if self.rows.len() != self.shape.len() || b.len() != self.shape.len() {
            return false;
        }
        self.rows.iter().enumerate().all(|(r, row)| {
            row.len() == self.shape.part(r + 1)
                && row.iter().all(|&x| x >= 1 && x <= b.get(r + 1))
                && row.windows(2).all(|p| p[0] <= p[1])
                && (r == 0
                    || row
                        .iter()
                        .enumerate()
                        .all(|(c, &x)| self.rows[r - 1][c] < x))
        })
    }
}

impl fmt::Display for FlaggedTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// A set-valued tableau; `sets[r][c]` is a bitmask of the entries of box
/// `(r + 1, c + 1)` (bit `x` set iff `x` is present).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct SetValuedTableau {
    pub shape: Partition,
    pub sets: Vec<Vec<u64>>,
}

impl SetValuedTableau {
    pub fn entry_count(&self) -> usize {
        self.sets
            .iter()
            .flatten()
            .map(|s| s.count_ones() as usize)
            .sum()
    }

    pub fn entries(&self, r: usize, c: usize) -> Vec<usize> {
        bits(self.sets[r][c]).collect()
    }
}

impl fmt::Display for SetValuedTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.sets {
            let cells: Vec<String> = row
                .iter()
                .map(|&s| {
                    let xs: Vec<String> = bits(s).map(|x| x.to_string()).collect();
                    if xs.len() == 1 {
                        xs[0].clone()
                    } else {
                        format!("{{{}}}", xs.join(","))
                    }
                })
                .collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

fn bits(mut s: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if s == 0 {
            None
        } else {
            let x = s.trailing_zeros() as usize;
            s &= s - 1;
            Some(x)
        }
    })
}

fn check_lengths(lambda: &Partition, b: &FlagVector) -> Result<()> {
    if lambda.len() != b.len() {
        return Err(Error::LengthMismatch {
            parts: lambda.len(),
            flag: b.len(),
        });
    }
    Ok(())
}

/// Calls `visit` on every flagged tableau in row-reading lexicographic order.
fn visit_flagged(lambda: &Partition, b: &FlagVector, visit: &mut dyn FnMut(&[Vec<usize>])) {
    let mut rows: Vec<Vec<usize>> = lambda.parts().iter().map(|&p| vec![0; p]).collect();
    let cells: Vec<(usize, usize)> = lambda.cells().map(|c| (c.i - 1, c.j - 1)).collect();

    fn go(
        k: usize,
        cells: &[(usize, usize)],
        rows: &mut Vec<Vec<usize>>,
        b: &FlagVector,
        visit: &mut dyn FnMut(&[Vec<usize>]),
    ) {
        let Some(&(r, c)) = cells.get(k) else {
            visit(rows);
            return;
        };
        let left = if c > 0 { rows[r][c - 1] } else { 1 };
        let above = if r > 0 { rows[r - 1][c] + 1 } else { 1 };
        let hi = b.get(r + 1);
        for x in left.max(above)..=hi {
            rows[r][c] = x;
            go(k + 1, cells, rows, b, visit);
        }
    }
    go(0, &cells, &mut rows, b, visit);
}

pub fn enumerate_flagged_ssyt(lambda: &Partition, b: &FlagVector) -> Result<Vec<FlaggedTableau>> {
    check_lengths(lambda, b)?;
    let mut out = Vec::new();
    visit_flagged(lambda, b, &mut |rows| {
        out.push(FlaggedTableau {
            shape: lambda.clone(),
            rows: rows.to_vec(),
        })
    });
    Ok(out)
}

pub fn count_flagged_ssyt(lambda: &Partition, b: &FlagVector) -> Result<BigInt> {
    check_lengths(lambda, b)?;
    let mut count = 0u64;
    visit_flagged(lambda, b, &mut |_| count += 1);
    Ok(BigInt::from(count))
}

/// `C(a, k)` with `C(a, k) = 0` for `k < 0` and the falling-factorial value
/// for negative `a`.
fn binom(a: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    if a >= 0 {
        return if k > a {
            BigInt::zero()
        } else {
            binomial(BigInt::from(a), BigInt::from(k))
        };
    }
    // C(a, k) = (-1)^k C(k - a - 1, k)
    let v = binomial(BigInt::from(k - a - 1), BigInt::from(k));
    if k % 2 == 0 {
        v
    } else {
        -v
    }
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det_bigint(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&p| !m[p][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// The matrix `C(b_i + λ_i - i + j - 1, λ_i - i + j)`.
pub fn det_matrix(lambda: &Partition, b: &FlagVector) -> Result<Vec<Vec<BigInt>>> {
    check_lengths(lambda, b)?;
    let l = lambda.len();
    Ok((1..=l)
        .map(|i| {
            (1..=l)
                .map(|j| {
                    let k = lambda.part(i) as i64 - i as i64 + j as i64;
                    binom(b.get(i) as i64 + k - 1, k)
                })
                .collect()
        })
        .collect())
}

pub fn det_multiplicity(lambda: &Partition, b: &FlagVector) -> Result<BigInt> {
    Ok(det_bigint(det_matrix(lambda, b)?))
}

/// Calls `visit` on every flagged set-valued tableau with at most `max_k`
/// entries in total.
fn visit_set_valued(
    lambda: &Partition,
    b: &FlagVector,
    max_k: usize,
    visit: &mut dyn FnMut(&[Vec<u64>], usize),
) {
    let mut sets: Vec<Vec<u64>> = lambda.parts().iter().map(|&p| vec![0; p]).collect();
    let cells: Vec<(usize, usize)> = lambda.cells().map(|c| (c.i - 1, c.j - 1)).collect();

    struct Ctx<'a> {
        cells: &'a [(usize, usize)],
        b: &'a FlagVector,
        max_k: usize,
    }

    fn go(
        ctx: &Ctx,
        k: usize,
        used: usize,
        sets: &mut Vec<Vec<u64>>,
        visit: &mut dyn FnMut(&[Vec<u64>], usize),
    ) {
        let Some(&(r, c)) = ctx.cells.get(k) else {
            visit(sets, used);
            return;
        };
        let remaining_cells = ctx.cells.len() - k - 1;
        let max_here = ctx.max_k - used - remaining_cells;
        // smallest allowed element
        let left = if c > 0 {
            63 - sets[r][c - 1].leading_zeros() as usize
        } else {
            1
        };
        let above = if r > 0 {
            64 - sets[r - 1][c].leading_zeros() as usize
        } else {
            1
        };
        let lo = left.max(above);
        let hi = ctx.b.get(r + 1);
        if lo > hi {
            return;
        }
        let width = hi - lo + 1;
        for sub in 1u64..(1u64 << width) {
            let size = sub.count_ones() as usize;
            if size > max_here {
                continue;
            }
            sets[r][c] = sub << lo;
            go(ctx, k + 1, used + size, sets, visit);
        }
        sets[r][c] = 0;
    }
    if lambda.size() > max_k {
        return;
    }
    let ctx = Ctx {
        cells: &cells,
        b,
        max_k,
    };
    go(&ctx, 0, 0, &mut sets, visit);
}

/// Largest possible entry count: each box of row `r` holds at most `b_r` values.
pub fn set_valued_entry_bound(lambda: &Partition, b: &FlagVector) -> usize {
    (1..=lambda.len()).map(|r| lambda.part(r) * b.get(r)).sum()
}

/// All flagged set-valued tableaux with exactly `k` entries.
pub fn enumerate_set_valued(
    lambda: &Partition,
    b: &FlagVector,
    k: usize,
) -> Result<Vec<SetValuedTableau>> {
    check_lengths(lambda, b)?;
    let mut out = Vec::new();
    visit_set_valued(lambda, b, k, &mut |sets, used| {
        if used == k {
            out.push(SetValuedTableau {
                shape: lambda.clone(),
                sets: sets.to_vec(),
            });
        }
    });
    Ok(out)
}

/// `census[k - |λ|]` = number of set-valued tableaux with `k` entries,
/// for `k` from `|λ|` to the entry bound.
pub fn set_valued_census(lambda: &Partition, b: &FlagVector) -> Result<Vec<BigInt>> {
    check_lengths(lambda, b)?;
    let base = lambda.size();
    let top = set_valued_entry_bound(lambda, b).max(base);
    let mut counts = vec![0u64; top - base + 1];
    visit_set_valued(lambda, b, top, &mut |_, used| counts[used - base] += 1);
    while counts.len() > 1 && counts.last() == Some(&0) {
        counts.pop();
    }
    Ok(counts.into_iter().map(BigInt::from).collect())
}

/// `Σ_k (-1)^{k-|λ|} (1-t)^k #SetSSYT(λ, b, k)`.
pub fn g_poly(lambda: &Partition, b: &FlagVector) -> Result<UniPoly> {
    let census = set_valued_census(lambda, b)?;
    let base = lambda.size();
    let mut g = UniPoly::zero();
    for (d, count) in census.iter().enumerate() {
        let term = UniPoly::one_minus_t_pow(base + d).scale(count);
        g = if d % 2 == 0 { &g + &term } else { &g - &term };
    }
    Ok(g)
}

/// A placement of `+`'s in the boxes of a French Young diagram.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct PipeDream {
    pub region: Partition,
    pub plusses: BTreeSet<Cell>,
}

impl PipeDream {
    /// ASCII grid over the region, top row first: `+` or `.`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for i in (1..=self.region.len()).rev() {
            let row: Vec<&str> = (1..=self.region.part(i))
                .map(|j| {
                    if self.plusses.contains(&Cell::new(i, j)) {
                        "+"
                    } else {
                        "."
                    }
                })
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

/// All pipe dreams reachable from `λ` placed at the origin by the move that
/// takes a `+` at `(i,j)` to `(i+1,j+1)` when the other three boxes of that
/// `2 x 2` square are empty and inside `region`. Sorted.
pub fn pipe_dreams(region: &Partition, lambda: &Partition) -> Result<Vec<PipeDream>> {
    if !region.contains(lambda) {
        return Err(Error::NotContained);
    }
    let start: BTreeSet<Cell> = lambda.cells().collect();
    let mut seen = BTreeSet::new();
    seen.insert(start.clone());
    let mut queue = VecDeque::from([start]);
    while let Some(cur) = queue.pop_front() {
        for &p in &cur {
            let ne = Cell::new(p.i + 1, p.j + 1);
            let n = Cell::new(p.i + 1, p.j);
            let e = Cell::new(p.i, p.j + 1);
            if region.contains_box(ne) && [ne, n, e].iter().all(|c| !cur.contains(c)) {
                let mut next = cur.clone();
                next.remove(&p);
                next.insert(ne);
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    Ok(seen
        .into_iter()
        .map(|plusses| PipeDream {
            region: region.clone(),
            plusses,
        })
        .collect())
}

/// Reduced pipe dreams of `w` in the classical convention: crosses at
/// matrix positions `(a,b)` (rows counted from the top) with `a + b <= n`,
/// such that reading crosses right to left along rows, top row first, and
/// taking `s_{a+b-1}` for each gives a reduced word for `w`. Found by
/// exhaustive search, so meant for small `n`. Sorted.
pub fn classical_pipe_dreams(w: &Permutation) -> Result<Vec<BTreeSet<Cell>>> {
    let n = w.n();
    if n > 8 {
        return Err(Error::Unsupported(format!(
            "classical pipe dream search for n = {n} > 8"
        )));
    }
    // staircase cells in reading order
    let mut cells: Vec<Cell> = (1..n)
        .flat_map(|a| (1..=n - a).map(move |b| Cell::new(a, b)))
        .collect();
    cells.sort_by_key(|c| (c.i, std::cmp::Reverse(c.j)));
    let target = w.word().to_vec();
    let l = length(w);
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(l);
    let mut current: Vec<usize> = (1..=n).collect();
    search_words(&cells, 0, l, &mut chosen, &mut current, &target, &mut out);
    out.sort();
    Ok(out)
}

fn search_words(
    cells: &[Cell],
    from: usize,
    left: usize,
    chosen: &mut Vec<Cell>,
    current: &mut Vec<usize>,
    target: &[usize],
    out: &mut Vec<BTreeSet<Cell>>,
) {
    if left == 0 {
        if current.as_slice() == target {
            out.push(chosen.iter().copied().collect());
        }
        return;
    }
    for idx in from..=cells.len().saturating_sub(left) {
        let c = cells[idx];
        let k = c.i + c.j - 1;
        // right multiplication by s_k swaps positions k, k+1; it lengthens
        // the word only on an ascent
        if current[k - 1] > current[k] {
            continue;
        }
        current.swap(k - 1, k);
        chosen.push(c);
        search_words(cells, idx + 1, left - 1, chosen, current, target, out);
        chosen.pop();
        current.swap(k - 1, k);
    }
}

fn diagonal(c: &Cell) -> isize {
    c.j as isize - c.i as isize
}

/// Reads a tableau off a pipe dream: along each diagonal the `m`-th `+` from
/// the southwest labels the `m`-th box of `λ`, with entry the `+`'s row.
pub fn pipedream_to_tableau(pd: &PipeDream, lambda: &Partition) -> Result<FlaggedTableau> {
    let mut rows: Vec<Vec<usize>> = lambda.parts().iter().map(|&p| vec![0; p]).collect();
    let diags: BTreeSet<isize> = lambda
        .cells()
        .chain(pd.plusses.iter().copied())
        .map(|c| diagonal(&c))
        .collect();
    for d in diags {
        let boxes: Vec<Cell> = lambda.cells().filter(|c| diagonal(c) == d).collect();
        let plus: Vec<Cell> = pd
            .plusses
            .iter()
            .copied()
            .filter(|c| diagonal(c) == d)
            .collect();
        if boxes.len() != plus.len() {
            return Err(Error::Inconsistent(format!(
                "diagonal {d} holds {} plusses but {} boxes of {lambda}",
                plus.len(),
                boxes.len()
            )));
        }
        // both lists are sorted by row since cells sort by (i, j)
        for (bx, p) in boxes.iter().zip(&plus) {
            rows[bx.i - 1][bx.j - 1] = p.i;
        }
    }
    Ok(FlaggedTableau {
        shape: lambda.clone(),
        rows,
    })
}

/// Inverse of [`pipedream_to_tableau`]: entry `e` in box `(r,c)` becomes a `+`
/// at `(e, c - r + e)`.
pub fn tableau_to_pipedream(t: &FlaggedTableau, region: &Partition) -> Result<PipeDream> {
    let mut plusses = BTreeSet::new();
    for (r, row) in t.rows.iter().enumerate() {
        for (c, &e) in row.iter().enumerate() {
            let col = (c + 1 + e).checked_sub(r + 1).filter(|&x| x >= 1);
            let Some(col) = col else {
                return Err(Error::NotContained);
            };
            let cell = Cell::new(e, col);
            if !region.contains_box(cell) || !plusses.insert(cell) {
                return Err(Error::NotContained);
            }
        }
    }
    Ok(PipeDream {
        region: region.clone(),
        plusses,
    })
}

/// Shape `λ(w)` and flag `b(Θ_{v,w})`.
pub fn covexillary_data(v: &Permutation, w: &Permutation) -> Result<(Partition, FlagVector)> {
    let t = theta(v, w)?;
    Ok((shape_lambda(w)?, flag_b(&t)?))
}

/// Multiplicity of `X_w` at `e_v` as a count of flagged tableaux.
pub fn multiplicity_covexillary(v: &Permutation, w: &Permutation) -> Result<BigInt> {
    let (lambda, b) = covexillary_data(v, w)?;
    count_flagged_ssyt(&lambda, &b)
}

/// Hilbert series data: the series of the local ring is
/// `numerator / (1-t)^local_exponent`, that of the Kazhdan–Lusztig tangent
/// cone is `numerator / (1-t)^tangent_exponent`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct HilbertData {
    pub numerator: UniPoly,
    pub local_exponent: usize,
    pub tangent_exponent: usize,
}

pub fn hilbert_series_covexillary(v: &Permutation, w: &Permutation) -> Result<HilbertData> {
    let (lambda, b) = covexillary_data(v, w)?;
    let n = w.n();
    Ok(HilbertData {
        numerator: g_poly(&lambda, &b)?,
        local_exponent: n * (n - 1) / 2,
        tangent_exponent: length(&v.w0_times()),
    })
}
