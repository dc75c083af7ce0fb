//! Brute-force reference implementations, written from the definitions and
//! sharing no code with the library routines they check.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use klmult_core::monideal::MonomialIdeal;
use klmult_core::poly::Monomial;
use klmult_core::{Cell, Partition, Permutation};

pub fn inversions(w: &Permutation) -> usize {
    let x = w.word();
    (0..x.len())
        .flat_map(|a| (a + 1..x.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| x[a] > x[b])
        .count()
}

/// Ehresmann's tableau criterion: sorted prefixes compare entrywise.
pub fn bruhat_tableau(v: &Permutation, w: &Permutation) -> bool {
    (1..=v.n()).all(|k| {
        let mut a = v.word()[..k].to_vec();
        let mut b = w.word()[..k].to_vec();
        a.sort_unstable();
        b.sort_unstable();
        a.iter().zip(&b).all(|(x, y)| x <= y)
    })
}

/// Dots of `w` as `(row from the bottom, column)`.
pub fn dots(w: &Permutation) -> Vec<(usize, usize)> {
    let n = w.n();
    (1..=n).map(|k| (n + 1 - w.word()[k - 1], k)).collect()
}

/// Removes each dot's hook (the dot, everything above it in its column and
/// everything right of it in its row) from the full grid.
pub fn diagram_by_hooks(w: &Permutation) -> BTreeSet<(usize, usize)> {
    let n = w.n();
    let mut alive: BTreeSet<(usize, usize)> =
        (1..=n).flat_map(|i| (1..=n).map(move |j| (i, j))).collect();
    for (r, c) in dots(w) {
        for i in r..=n {
            alive.remove(&(i, c));
        }
        for j in c..=n {
            alive.remove(&(r, j));
        }
    }
    alive
}

pub fn essential_of(d: &BTreeSet<(usize, usize)>) -> BTreeSet<(usize, usize)> {
    d.iter()
        .filter(|&&(i, j)| !d.contains(&(i + 1, j)) && !d.contains(&(i, j + 1)))
        .copied()
        .collect()
}

/// Dots of `w` in the southwest `i x j` rectangle.
pub fn rank(w: &Permutation, i: usize, j: usize) -> usize {
    dots(w)
        .into_iter()
        .filter(|&(r, c)| r <= i && c <= j)
        .count()
}

pub fn avoids_3412(w: &Permutation) -> bool {
    let x = w.word();
    let n = x.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    if x[c] < x[d] && x[d] < x[a] && x[a] < x[b] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Sorts rows by length and columns by height, then checks the relabeled
/// boxes form a left- and bottom-justified Young diagram.
pub fn sorts_to_young(d: &BTreeSet<(usize, usize)>) -> bool {
    let mut row_len: BTreeMap<usize, usize> = BTreeMap::new();
    let mut col_len: BTreeMap<usize, usize> = BTreeMap::new();
    for &(i, j) in d {
        *row_len.entry(i).or_default() += 1;
        *col_len.entry(j).or_default() += 1;
    }
    let mut rows: Vec<usize> = row_len.keys().copied().collect();
    rows.sort_by_key(|r| (std::cmp::Reverse(row_len[r]), *r));
    let mut cols: Vec<usize> = col_len.keys().copied().collect();
    cols.sort_by_key(|c| (std::cmp::Reverse(col_len[c]), *c));
    let row_pos: BTreeMap<usize, usize> =
        rows.iter().enumerate().map(|(k, &r)| (r, k + 1)).collect();
    let col_pos: BTreeMap<usize, usize> =
        cols.iter().enumerate().map(|(k, &c)| (c, k + 1)).collect();
    let relabeled: BTreeSet<(usize, usize)> =
        d.iter().map(|(i, j)| (row_pos[i], col_pos[j])).collect();
    relabeled.iter().all(|&(i, j)| {
        (i == 1 || relabeled.contains(&(i - 1, j))) && (j == 1 || relabeled.contains(&(i, j - 1)))
    })
}

/// All fillings of `λ` (English rows, row `r` bounded by `b_r`) checked for
/// weakly increasing rows and strictly increasing columns.
pub fn flagged_count(lambda: &Partition, b: &[usize]) -> u64 {
    let cells: Vec<(usize, usize)> = (1..=lambda.len())
        .flat_map(|r| (1..=lambda.part(r)).map(move |c| (r, c)))
        .collect();
    let mut vals = vec![1usize; cells.len()];
    let mut count = 0;
    loop {
        let at: BTreeMap<(usize, usize), usize> =
            cells.iter().copied().zip(vals.iter().copied()).collect();
        let ok = cells.iter().all(|&(r, c)| {
            let x = at[&(r, c)];
            at.get(&(r, c + 1)).is_none_or(|&y| x <= y)
                && at.get(&(r + 1, c)).is_none_or(|&y| x < y)
        });
        if ok {
            count += 1;
        }
        // odometer
        let mut k = 0;
        loop {
            if k == cells.len() {
                return count;
            }
            if vals[k] < b[cells[k].0 - 1] {
                vals[k] += 1;
                break;
            }
            vals[k] = 1;
            k += 1;
        }
    }
}

/// Set-valued fillings: nonempty subsets of `[b_r]` in row `r`, with
/// `max(left) <= min(right)` and `max(above) < min(below)`. Counts by total
/// number of entries.
pub fn set_valued_counts(lambda: &Partition, b: &[usize]) -> BTreeMap<usize, u64> {
    let cells: Vec<(usize, usize)> = (1..=lambda.len())
        .flat_map(|r| (1..=lambda.part(r)).map(move |c| (r, c)))
        .collect();
    let mut sets = vec![1u32; cells.len()];
    let mut out = BTreeMap::new();
    let lo = |s: u32| s.trailing_zeros();
    let hi = |s: u32| 31 - s.leading_zeros();
    loop {
        let at: BTreeMap<(usize, usize), u32> =
            cells.iter().copied().zip(sets.iter().copied()).collect();
        let ok = cells.iter().all(|&(r, c)| {
            let s = at[&(r, c)];
            at.get(&(r, c + 1)).is_none_or(|&t| hi(s) <= lo(t))
                && at.get(&(r + 1, c)).is_none_or(|&t| hi(s) < lo(t))
        });
        if ok {
            let k: u32 = sets.iter().map(|s| s.count_ones()).sum();
            *out.entry(k as usize).or_insert(0) += 1;
        }
        let mut k = 0;
        loop {
            if k == cells.len() {
                return out;
            }
            let full = (1u32 << b[cells[k].0 - 1]) - 1;
            if sets[k] < full {
                sets[k] += 1;
                break;
            }
            sets[k] = 1;
            k += 1;
        }
    }
}

/// Number of degree-`d` monomials in the universe outside the ideal.
pub fn hilbert_function(ideal: &MonomialIdeal, d: usize) -> u64 {
    let vars = ideal.universe().to_vec();
    let mut count = 0;
    let mut exps = vec![0u32; vars.len()];
    fn go(
        k: usize,
        left: u32,
        exps: &mut Vec<u32>,
        vars: &[Cell],
        ideal: &MonomialIdeal,
        count: &mut u64,
    ) {
        if k + 1 == vars.len() || vars.is_empty() {
            if let Some(last) = exps.last_mut() {
                *last = left;
            } else if left > 0 {
                return;
            }
            let m = Monomial::from_exponents(vars.iter().copied().zip(exps.iter().copied()));
            if !ideal.generators().iter().any(|g| g.divides(&m)) {
                *count += 1;
            }
            return;
        }
        for e in 0..=left {
            exps[k] = e;
            go(k + 1, left - e, exps, vars, ideal, count);
        }
        exps[k] = 0;
    }
    go(0, d as u32, &mut exps, &vars, ideal, &mut count);
    count
}

/// The composite order from its definition: weighted degree
/// `Σ e (n + 1 - i - v(j))`, then the larger standard degree is smaller,
/// then the first priority variable with differing exponent decides, the
/// smaller exponent being smaller. `v = None` gives pure lex.
pub fn compare_by_definition(
    v: Option<&Permutation>,
    priority: &[Cell],
    a: &Monomial,
    b: &Monomial,
) -> Ordering {
    if let Some(v) = v {
        let n = v.n() as i64;
        let weight = |m: &Monomial| -> i64 {
            m.exponents()
                .iter()
                .map(|(c, &e)| e as i64 * (n + 1 - c.i as i64 - v.word()[c.j - 1] as i64))
                .sum()
        };
        let by_weight = weight(a).cmp(&weight(b));
        if by_weight != Ordering::Equal {
            return by_weight;
        }
        let by_degree = b.degree().cmp(&a.degree());
        if by_degree != Ordering::Equal {
            return by_degree;
        }
    }
    for c in priority {
        let (x, y) = (a.exponent(c), b.exponent(c));
        if x != y {
            return x.cmp(&y);
        }
    }
    Ordering::Equal
}

/// Reduced pipe dreams by ladder moves from the bottom pipe dream, in the
/// classical matrix convention (crosses `(row from top, column)`).
pub fn pipe_dreams_by_ladders(w: &Permutation) -> BTreeSet<BTreeSet<(usize, usize)>> {
    // bottom pipe dream: row a holds the code c_a, left-justified
    let x = w.word();
    let n = x.len();
    let mut bottom = BTreeSet::new();
    for a in 0..n {
        let code = (a + 1..n).filter(|&b| x[b] < x[a]).count();
        for j in 1..=code {
            bottom.insert((a + 1, j));
        }
    }
    let mut seen = BTreeSet::from([bottom.clone()]);
    let mut stack = vec![bottom];
    while let Some(p) = stack.pop() {
        for &(a, j) in &p {
            if p.contains(&(a, j + 1)) {
                continue;
            }
            // climb through a run of rows holding both (r, j) and (r, j+1)
            let mut m = a - 1;
            while m >= 1 && p.contains(&(m, j)) && p.contains(&(m, j + 1)) {
                m -= 1;
            }
            if m >= 1 && !p.contains(&(m, j)) && !p.contains(&(m, j + 1)) {
                let mut q = p.clone();
                q.remove(&(a, j));
                q.insert((m, j + 1));
                if seen.insert(q.clone()) {
                    stack.push(q);
                }
            }
        }
    }
    seen
}
