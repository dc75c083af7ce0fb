//! Exact sparse polynomials in grid variables `z[i][j]`, term orders, the
//! specialized matrices `Z^(v)`, and a Buchberger engine.

mod groebner;
mod matrix;
mod order;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::perm::Cell;

pub use groebner::{buchberger, buchberger_with_deadline, initial_ideal, is_groebner};
pub use matrix::{
    kl_generators, monomial_weight, schubert_determinantal_generators, usual_action_weight, Entry,
    SpecializedMatrix,
};
pub use order::{pi_se_nw, pi_sw_ne, OrderKind, TermOrder};

/// The variable `z[i][j]`, addressed by its grid box.
pub type GridVariable = Cell;

/// A monomial `Π z_ij^a_ij`; zero exponents are never stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Monomial(BTreeMap<GridVariable, u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn var(v: GridVariable) -> Self {
        Monomial(BTreeMap::from([(v, 1)]))
    }

    pub fn from_exponents(exps: impl IntoIterator<Item = (GridVariable, u32)>) -> Self {
        let mut m = BTreeMap::new();
        for (v, e) in exps {
            if e > 0 {
                *m.entry(v).or_insert(0) += e;
            }
        }
        Monomial(m)
    }

    pub fn exponents(&self) -> &BTreeMap<GridVariable, u32> {
        &self.0
    }

    pub fn exponent(&self, v: &GridVariable) -> u32 {
        self.0.get(v).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Standard degree.
    pub fn degree(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn is_squarefree(&self) -> bool {
        self.0.values().all(|&e| e == 1)
    }

    pub fn support(&self) -> impl Iterator<Item = GridVariable> + '_ {
        self.0.keys().copied()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().all(|(v, &e)| other.exponent(v) >= e)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut m = self.0.clone();
        for (&v, &e) in &other.0 {
            let slot = m.entry(v).or_insert(0);
            *slot = (*slot).max(e);
        }
        Monomial(m)
    }

    /// `self / other`, if `other` divides `self`.
    pub fn quotient(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        Some(Monomial::from_exponents(
            self.0.iter().map(|(&v, &e)| (v, e - other.exponent(&v))),
        ))
    }
}

impl Mul for &Monomial {
    type Output = Monomial;
    fn mul(self, rhs: &Monomial) -> Monomial {
        Monomial::from_exponents(self.0.iter().chain(rhs.0.iter()).map(|(&v, &e)| (v, e)))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(v, &e)| {
                if e == 1 {
                    format!("z[{}][{}]", v.i, v.j)
                } else {
                    format!("z[{}][{}]^{e}", v.i, v.j)
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// A polynomial with exact rational coefficients; zero coefficients are never
/// stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Polynomial(BTreeMap<Monomial, BigRational>);

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial(BTreeMap::new())
    }

    pub fn constant(c: BigRational) -> Self {
        Polynomial::term(c, Monomial::one())
    }

    pub fn from_int(c: i64) -> Self {
        Polynomial::constant(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn var(v: GridVariable) -> Self {
        Polynomial::term(BigRational::one(), Monomial::var(v))
    }

    pub fn term(c: BigRational, m: Monomial) -> Self {
        let mut p = BTreeMap::new();
        if !c.is_zero() {
            p.insert(m, c);
        }
        Polynomial(p)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigRational)>) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        use std::collections::btree_map::Entry as E;
        match self.0.entry(m) {
            E::Vacant(slot) => {
                if !c.is_zero() {
                    slot.insert(c);
                }
            }
            E::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.0.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn variables(&self) -> std::collections::BTreeSet<GridVariable> {
        self.0.keys().flat_map(|m| m.support()).collect()
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        Polynomial::from_terms(self.0.iter().map(|(m, x)| (m.clone(), x * c)))
    }

    /// Normalizes the sign so that the term with the largest monomial in the
    /// internal (variable-sorted) order is positive.
    pub(crate) fn sign_normalized(&self) -> Polynomial {
        match self.0.iter().next_back() {
            Some((_, c)) if c.is_negative() => -self,
            _ => self.clone(),
        }
    }

    /// Terms sorted by `ord`, largest first.
    pub fn sorted_terms(&self, ord: &TermOrder) -> Result<Vec<(Monomial, BigRational)>> {
        let mut terms: Vec<(Monomial, BigRational)> =
            self.0.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        for (m, _) in &terms {
            ord.check_universe(m)?;
        }
        terms.sort_by(|a, b| ord.compare(&b.0, &a.0).expect("checked universe"));
        Ok(terms)
    }

    pub fn lead_term(&self, ord: &TermOrder) -> Result<Option<(Monomial, BigRational)>> {
        Ok(self.sorted_terms(ord)?.into_iter().next())
    }

    /// Text form `c*z[i][j]^e*...` with terms sorted by `ord`, lead first.
    pub fn format_with(&self, ord: &TermOrder) -> Result<String> {
        Ok(format_terms(&self.sorted_terms(ord)?))
    }

    pub fn parse(text: &str) -> Result<Polynomial> {
        parse_polynomial(text)
    }
}

fn format_terms(terms: &[(Monomial, BigRational)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let a = c.abs();
        if m.is_one() {
            out.push_str(&a.to_string());
        } else if a.is_one() {
            out.push_str(&m.to_string());
        } else {
            out.push_str(&format!("{a}*{m}"));
        }
    }
    out
}

impl fmt::Display for Polynomial {
    /// Terms in decreasing internal monomial order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(Monomial, BigRational)> = self
            .0
            .iter()
            .rev()
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        write!(f, "{}", format_terms(&terms))
    }
}

fn parse_polynomial(text: &str) -> Result<Polynomial> {
    let bad = |what: &str| Error::Parse(format!("{what} in polynomial {text:?}"));
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(bad("empty input"));
    }
    // split into signed terms
    let mut terms: Vec<(bool, &str)> = Vec::new();
    let mut start = 0;
    let mut neg = false;
    let bytes = s.as_bytes();
    if bytes[0] == b'-' || bytes[0] == b'+' {
        neg = bytes[0] == b'-';
        start = 1;
    }
    for (k, &ch) in bytes.iter().enumerate().skip(start) {
        if (ch == b'+' || ch == b'-') && k > start && bytes[k - 1] != b'^' {
            terms.push((neg, &s[start..k]));
            neg = ch == b'-';
            start = k + 1;
        }
    }
    terms.push((neg, &s[start..]));

    let mut poly = Polynomial::zero();
    for (neg, body) in terms {
        if body.is_empty() {
            return Err(bad("empty term"));
        }
        let mut coeff = BigRational::one();
        let mut mono = Monomial::one();
        for factor in body.split('*') {
            if let Some(rest) = factor.strip_prefix('z') {
                let (var, exp) = match rest.split_once('^') {
                    Some((v, e)) => (v, e.parse::<u32>().map_err(|_| bad("bad exponent"))?),
                    None => (rest, 1),
                };
                let inner = var
                    .strip_prefix('[')
                    .and_then(|r| r.strip_suffix(']'))
                    .ok_or_else(|| bad("bad variable"))?;
                let (i, j) = inner.split_once("][").ok_or_else(|| bad("bad variable"))?;
                let i = i.parse::<usize>().map_err(|_| bad("bad row index"))?;
                let j = j.parse::<usize>().map_err(|_| bad("bad column index"))?;
                mono = &mono * &Monomial::from_exponents([(Cell::new(i, j), exp)]);
            } else {
                let c = match factor.split_once('/') {
                    Some((a, b)) => {
                        let a: BigInt = a.parse().map_err(|_| bad("bad coefficient"))?;
                        let b: BigInt = b.parse().map_err(|_| bad("bad coefficient"))?;
                        if b.is_zero() {
                            return Err(bad("zero denominator"));
                        }
                        BigRational::new(a, b)
                    }
                    None => BigRational::from_integer(
                        factor.parse().map_err(|_| bad("bad coefficient"))?,
                    ),
                };
                coeff *= c;
            }
        }
        if neg {
            coeff = -coeff;
        }
        poly.add_term(mono, coeff);
    }
    Ok(poly)
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.0 {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.0 {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial(
            self.0
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        )
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.0 {
            for (mb, cb) in &rhs.0 {
                out.add_term(ma * mb, ca * cb);
            }
        }
        out
    }
}
