//! Univariate polynomials in `t` with big-integer coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// `Σ coeffs[k] t^k`, trailing zeros trimmed (the zero polynomial is empty).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UniPoly {
    coeffs: Vec<BigInt>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        UniPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UniPoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        UniPoly::new(vec![c])
    }

    /// `t^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        UniPoly { coeffs }
    }

    /// `(1 - t)^k`.
    pub fn one_minus_t_pow(k: usize) -> Self {
        let mut coeffs = Vec::with_capacity(k + 1);
        let mut c = BigInt::one();
        for i in 0..=k {
            coeffs.push(if i % 2 == 0 { c.clone() } else { -c.clone() });
            c = c * BigInt::from(k - i) / BigInt::from(i + 1);
        }
        UniPoly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &BigInt) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Value at `t = 1`.
    pub fn eval_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Writes `self = (1-t)^c · q` with `q(1) != 0`; returns `(c, q)`.
    /// The zero polynomial gives `(0, 0)`.
    pub fn split_one_minus_t(&self) -> (usize, UniPoly) {
        let mut q = self.clone();
        let mut c = 0;
        while !q.is_zero() && q.eval_one().is_zero() {
            q = q.div_one_minus_t();
            c += 1;
        }
        (c, q)
    }

    /// Exact quotient by `(1 - t)`; requires `self(1) = 0`.
    fn div_one_minus_t(&self) -> UniPoly {
        // p = (1-t) q  =>  q_k = Σ_{i<=k} p_i
        let mut out = Vec::with_capacity(self.coeffs.len());
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().take(self.coeffs.len().saturating_sub(1)) {
            acc += c;
            out.push(acc.clone());
        }
        UniPoly::new(out)
    }

    /// First `terms` coefficients of `self / (1 - t)^k`.
    pub fn series_over_one_minus_t(&self, k: usize, terms: usize) -> Vec<BigInt> {
        let mut s: Vec<BigInt> = (0..terms).map(|i| self.coeff(i)).collect();
        for _ in 0..k {
            for i in 1..terms {
                let prev = s[i - 1].clone();
                s[i] += prev;
            }
        }
        s
    }

    /// Coefficients `c_k` of `self = Σ c_k (1-t)^k`.
    pub fn in_one_minus_t(&self) -> Vec<BigInt> {
        // substitute t = 1 - s by Horner's rule
        let one_minus_s = UniPoly::one_minus_t_pow(1);
        let mut acc = UniPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &one_minus_s) + &UniPoly::constant(c.clone());
        }
        acc.coeffs
    }

    /// Renders `self` in powers of `(1-t)`, e.g. `2(1-t)^7 - (1-t)^8`.
    pub fn format_one_minus_t(&self) -> String {
        let mut out = String::new();
        for (k, c) in self.in_one_minus_t().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.magnitude().to_string();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            match (k, mag.as_str()) {
                (0, m) => out.push_str(m),
                (_, "1") => {}
                (_, m) => out.push_str(m),
            }
            match k {
                0 => {}
                1 => out.push_str("(1-t)"),
                _ => out.push_str(&format!("(1-t)^{k}")),
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Coefficients as `i64`, if they all fit.
    pub fn to_i64_vec(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(|c| c.to_i64()).collect()
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (a, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in rhs.coeffs.iter().enumerate() {
                out[a + b] += x * y;
            }
        }
        UniPoly::new(out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for UniPoly {
            type Output = UniPoly;
            fn $m(self, rhs: UniPoly) -> UniPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if k == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
