//! Permutations in bottom-up grid coordinates.
//!
//! Box `(i, j)` of the `n x n` grid has `i` counted from the bottom row and `j`
//! from the left column. The graph dot of column `j` of `w` sits at
//! `(n - w(j) + 1, j)`, so the identity has its dots on the northwest-southeast
//! diagonal and `w0` has its dots on the southwest-northeast diagonal.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of `{1..n}` in one-line notation, `w(j) = word[j - 1]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Permutation {
    word: Vec<usize>,
}

impl Permutation {
    pub fn new(word: Vec<usize>) -> Result<Self> {
        let n = word.len();
        if n == 0 {
            return Err(Error::InvalidPermutation("empty word".into()));
        }
        let mut seen = vec![false; n + 1];
        for &x in &word {
            if x == 0 || x > n || seen[x] {
                return Err(Error::InvalidPermutation(format!(
                    "{word:?} is not a bijection of 1..{n}"
                )));
            }
            seen[x] = true;
        }
        Ok(Permutation { word })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            word: (1..=n).collect(),
        }
    }

    /// The longest element `w0 = n (n-1) ... 1`.
    pub fn longest(n: usize) -> Self {
        Permutation {
            word: (1..=n).rev().collect(),
        }
    }

    /// Parses either a digit string (`n <= 9`) or comma-separated integers.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::InvalidPermutation("empty input".into()));
        }
        let word: Vec<usize> = if text.contains(',') {
            text.split(',')
                .map(|s| {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::InvalidPermutation(format!("bad entry {s:?}")))
                })
                .collect::<Result<_>>()?
        } else {
            text.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| Error::InvalidPermutation(format!("bad digit {c:?}")))
                })
                .collect::<Result<_>>()?
        };
        Permutation::new(word)
    }

    pub fn n(&self) -> usize {
        self.word.len()
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    /// `w(j)` for `1 <= j <= n`.
    #[inline]
    pub fn at(&self, j: usize) -> usize {
        self.word[j - 1]
    }

    /// `w^{-1}(value)`.
    pub fn position_of(&self, value: usize) -> usize {
        self.word
            .iter()
            .position(|&x| x == value)
            .expect("value in range")
            + 1
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (j, &x) in self.word.iter().enumerate() {
            inv[x - 1] = j + 1;
        }
        Permutation { word: inv }
    }

    /// Row (from the bottom) of the graph dot in column `j`.
    #[inline]
    pub fn dot_row(&self, j: usize) -> usize {
        self.n() - self.at(j) + 1
    }

    /// Column of the graph dot in row `i` (from the bottom).
    pub fn dot_col(&self, i: usize) -> usize {
        self.position_of(self.n() - i + 1)
    }

    /// `w0 ∘ w`, i.e. `j -> n + 1 - w(j)`.
    pub fn w0_times(&self) -> Permutation {
        let n = self.n();
        Permutation {
            word: self.word.iter().map(|&x| n + 1 - x).collect(),
        }
    }

    /// Every permutation of `S_n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (1..=n).collect();
        loop {
            out.push(Permutation { word: cur.clone() });
            // next lexicographic permutation
            let Some(k) = (0..n.saturating_sub(1))
                .rev()
                .find(|&k| cur[k] < cur[k + 1])
            else {
                break;
            };
            let l = (k + 1..n).rev().find(|&l| cur[k] < cur[l]).unwrap();
            cur.swap(k, l);
            cur[k + 1..].reverse();
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n() <= 9 {
            for x in &self.word {
                write!(f, "{x}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.word.iter().map(|x| x.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl FromStr for Permutation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Permutation::parse(s)
    }
}

impl TryFrom<String> for Permutation {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        Permutation::parse(&s)
    }
}

impl From<Permutation> for String {
    fn from(p: Permutation) -> String {
        p.to_string()
    }
}

/// A grid box `(i, j)`: row `i` from the bottom, column `j` from the left.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Cell {
    pub i: usize,
    pub j: usize,
}

impl Cell {
    pub const fn new(i: usize, j: usize) -> Self {
        Cell { i, j }
    }

    /// `self` lies in the rectangle with corners `(1,1)` and `other`.
    pub fn dominated_by(&self, other: &Cell) -> bool {
        self.i <= other.i && self.j <= other.j
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

/// `r[i][j]` = number of dots in the southwest `i x j` rectangle.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RankMatrix {
    n: usize,
    // (n+1) x (n+1), row/column 0 are zero
    entries: Vec<usize>,
}

impl RankMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry at `(i, j)`; `i == 0` or `j == 0` gives 0.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> usize {
        self.entries[i * (self.n + 1) + j]
    }

    pub fn at(&self, c: Cell) -> usize {
        self.get(c.i, c.j)
    }
}

/// A finite set of grid boxes attached to an `n x n` grid.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Diagram {
    pub n: usize,
    pub boxes: BTreeSet<Cell>,
}

impl Diagram {
    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.boxes.contains(&Cell::new(i, j))
    }

    /// Column sets of the nonempty rows.
    fn row_sets(&self) -> Vec<BTreeSet<usize>> {
        let mut rows = vec![BTreeSet::new(); self.n + 1];
        for b in &self.boxes {
            rows[b.i].insert(b.j);
        }
        rows.into_iter().filter(|r| !r.is_empty()).collect()
    }

    /// True iff some permutation of rows and of columns turns the diagram into a
    /// Young diagram, i.e. the row column-sets form a chain under inclusion.
    pub fn is_young_up_to_permutation(&self) -> bool {
        let rows = self.row_sets();
        rows.iter().enumerate().all(|(a, ra)| {
            rows[a + 1..]
                .iter()
                .all(|rb| ra.is_subset(rb) || rb.is_subset(ra))
        })
    }
}

/// A weakly decreasing sequence of positive parts.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Parse(format!("partition {parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parse(format!(
                "partition {parts:?} is not weakly decreasing"
            )));
        }
        Ok(Partition(parts))
    }

    /// Drops zero parts and sorts decreasingly.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// `λ_i` (1-based), zero past the end.
    pub fn part(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    /// Containment of French Young diagrams anchored at `(1,1)`.
    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && (1..=other.len()).all(|i| other.part(i) <= self.part(i))
    }

    pub fn contains_box(&self, c: Cell) -> bool {
        c.i >= 1 && c.j >= 1 && c.j <= self.part(c.i)
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.part(1);
        Partition(
            (1..=width)
                .map(|c| self.0.iter().filter(|&&p| p >= c).count())
                .collect(),
        )
    }

    /// Boxes in French notation: row `i` from the bottom holds columns `1..=λ_i`.
    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(r, &len)| (1..=len).map(move |c| Cell::new(r + 1, c)))
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Vec<usize> {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Row bounds `b_1, ..., b_ℓ` flagging a partition.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FlagVector(pub Vec<usize>);

impl FlagVector {
    pub fn bounds(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `b_i` (1-based).
    pub fn get(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    /// `b` weakly increasing and `λ_i - i + b_i` weakly decreasing.
    pub fn satisfies_shape_inequalities(&self, lambda: &Partition) -> bool {
        if self.len() != lambda.len() {
            return false;
        }
        let diag: Vec<isize> = (1..=self.len())
            .map(|i| lambda.part(i) as isize - i as isize + self.get(i) as isize)
            .collect();
        self.0.windows(2).all(|w| w[0] <= w[1]) && diag.windows(2).all(|w| w[0] >= w[1])
    }
}

impl fmt::Display for FlagVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub(crate) fn check_same_size(v: &Permutation, w: &Permutation) -> Result<()> {
    if v.n() != w.n() {
        return Err(Error::SizeMismatch {
            left: v.n(),
            right: w.n(),
        });
    }
    Ok(())
}

/// Number of inversions.
pub fn length(w: &Permutation) -> usize {
    let word = w.word();
    let mut inv = 0;
    for a in 0..word.len() {
        for b in a + 1..word.len() {
            if word[a] > word[b] {
                inv += 1;
            }
        }
    }
    inv
}

pub fn rank_matrix(w: &Permutation) -> RankMatrix {
    let n = w.n();
    let stride = n + 1;
    let mut entries = vec![0; stride * stride];
    for i in 1..=n {
        for j in 1..=n {
            let dot = usize::from(w.at(j) > n - i);
            entries[i * stride + j] = entries[i * stride + j - 1] + dot;
        }
    }
    RankMatrix { n, entries }
}

/// Entrywise comparison of rank matrices.
pub fn bruhat_leq(v: &Permutation, w: &Permutation) -> Result<bool> {
    check_same_size(v, w)?;
    let (rv, rw) = (rank_matrix(v), rank_matrix(w));
    let n = v.n();
    Ok((1..=n).all(|i| (1..=n).all(|j| rv.get(i, j) <= rw.get(i, j))))
}

/// Boxes `(i,j)` with `i < n - w(j) + 1` and `j < w^{-1}(n - i + 1)`.
pub fn rothe_diagram(w: &Permutation) -> Diagram {
    let n = w.n();
    let inv = w.inverse();
    let mut boxes = BTreeSet::new();
    for i in 1..=n {
        for j in 1..=n {
            if i < n - w.at(j) + 1 && j < inv.at(n - i + 1) {
                boxes.insert(Cell::new(i, j));
            }
        }
    }
    Diagram { n, boxes }
}

/// Northeast corners of the connected components of the Rothe diagram.
pub fn essential_set(w: &Permutation) -> BTreeSet<Cell> {
    essential_of(&rothe_diagram(w))
}

pub(crate) fn essential_of(d: &Diagram) -> BTreeSet<Cell> {
    d.boxes
        .iter()
        .copied()
        .filter(|b| !d.contains(b.i + 1, b.j) && !d.contains(b.i, b.j + 1))
        .collect()
}

/// Direct scan for a subsequence order-isomorphic to `pattern`.
pub fn contains_pattern(w: &Permutation, pattern: &[usize]) -> bool {
    let k = pattern.len();
    let word = w.word();
    let mut idx = Vec::with_capacity(k);
    fn go(word: &[usize], pattern: &[usize], start: usize, idx: &mut Vec<usize>) -> bool {
        let k = pattern.len();
        if idx.len() == k {
            return (0..k).all(|a| {
                (a + 1..k).all(|b| (word[idx[a]] < word[idx[b]]) == (pattern[a] < pattern[b]))
            });
        }
        for p in start..word.len() {
            idx.push(p);
            if go(word, pattern, p + 1, idx) {
                return true;
            }
            idx.pop();
        }
        false
    }
    go(word, pattern, 0, &mut idx)
}

/// 3412-avoidance.
pub fn is_covexillary(w: &Permutation) -> bool {
    let word = w.word();
    let n = word.len();
    for a in 0..n {
        for b in a + 1..n {
            if word[a] > word[b] {
                continue;
            }
            for c in b + 1..n {
                if word[c] >= word[a] {
                    continue;
                }
                for d in c + 1..n {
                    if word[c] < word[d] && word[d] < word[a] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn require_covexillary(w: &Permutation) -> Result<()> {
    if is_covexillary(w) {
        Ok(())
    } else {
        Err(Error::NotCovexillary(w.to_string()))
    }
}

/// The shape `λ(w)`: sorted row lengths of the Rothe diagram.
pub fn shape_lambda(w: &Permutation) -> Result<Partition> {
    require_covexillary(w)?;
    let d = rothe_diagram(w);
    let mut rows = vec![0usize; w.n() + 1];
    for b in &d.boxes {
        rows[b.i] += 1;
    }
    Ok(Partition::from_unsorted(rows))
}

/// Smallest French Young diagram containing `E(w)` and the box `(1,1)`,
/// as row lengths from the bottom.
pub fn bounding_b(w: &Permutation) -> Result<Partition> {
    require_covexillary(w)?;
    Ok(bounding_of(&essential_set(w)))
}

pub(crate) fn bounding_of(ess: &BTreeSet<Cell>) -> Partition {
    let height = ess.iter().map(|c| c.i).max().unwrap_or(1).max(1);
    let rows = (1..=height)
        .map(|m| {
            ess.iter()
                .filter(|c| c.i >= m)
                .map(|c| c.j)
                .max()
                .unwrap_or(0)
                .max(1)
        })
        .collect();
    Partition(rows)
}

/// `b_i = max{ m : B(w)_m >= λ_i + m - i }`.
pub fn flag_b(w: &Permutation) -> Result<FlagVector> {
    let lambda = shape_lambda(w)?;
    let big_b = bounding_b(w)?;
    flag_from(&lambda, &big_b)
}

pub(crate) fn flag_from(lambda: &Partition, big_b: &Partition) -> Result<FlagVector> {
    let mut bounds = Vec::with_capacity(lambda.len());
    for i in 1..=lambda.len() {
        let b = (1..=big_b.len())
            .filter(|&m| big_b.part(m) as isize >= (lambda.part(i) + m) as isize - i as isize)
            .max()
            .ok_or_else(|| {
                Error::Inconsistent(format!("no admissible flag row for λ_{i} in {big_b}"))
            })?;
        bounds.push(b);
    }
    Ok(FlagVector(bounds))
}

/// The permutation with at most one ascent, at position `d`, whose shape is
/// `lambda`. The empty shape maps to `w0`.
///
/// `lambda` must have at most `n - d` parts, each at most `d`.
pub fn cograssmannian_from_partition(
    lambda: &Partition,
    d: usize,
    n: usize,
) -> Result<Permutation> {
    if d == 0 || d >= n || lambda.len() > n - d || lambda.part(1) > d {
        return Err(Error::PartitionTooLarge(lambda.to_string()));
    }
    // w0·w is grassmannian with descent at d; its Rothe shape (standard
    // coordinates) is the conjugate of λ read from row d upwards.
    let mu = lambda.conjugate();
    let mut first: Vec<usize> = (1..=d).map(|k| mu.part(d + 1 - k) + k).collect();
    first.sort_unstable();
    let mut rest: Vec<usize> = (1..=n).filter(|x| !first.contains(x)).collect();
    rest.sort_unstable();
    let u: Vec<usize> = first.into_iter().chain(rest).collect();
    let word = u.into_iter().map(|x| n + 1 - x).collect();
    Permutation::new(word)
}

/// ASCII picture of `D(w)`: top row first, `o` for dots, `#` for diagram
/// boxes, `E` for essential boxes.
pub fn render_diagram(w: &Permutation) -> String {
    let n = w.n();
    let d = rothe_diagram(w);
    let ess = essential_of(&d);
    let mut out = String::new();
    for i in (1..=n).rev() {
        for j in 1..=n {
            let c = Cell::new(i, j);
            let ch = if w.dot_row(j) == i {
                'o'
            } else if ess.contains(&c) {
                'E'
            } else if d.boxes.contains(&c) {
                '#'
            } else {
                '.'
            };
            out.push(ch);
            if j < n {
                out.push(' ');
            }
        }
        out.push('\n');
    }
    out
}
