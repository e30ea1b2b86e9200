use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Univariate polynomial in `q` with arbitrary-precision integer coefficients.
///
/// Coefficients are stored in ascending order of exponent with no trailing
/// zeros, so the zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<BigInt>,
}

impl Poly {
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::from_coeffs(vec![c.into()])
    }

    /// `c * q^k`
    pub fn monomial(c: impl Into<BigInt>, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c.into();
        Self::from_coeffs(coeffs)
    }

    /// `q^k`
    pub fn q_pow(k: usize) -> Self {
        Self::monomial(1, k)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Exponent of the lowest nonzero term.
    pub fn low_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// The constant value, if the polynomial has degree at most 0.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.coeffs.len() {
            0 => Some(BigInt::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn eval(&self, q: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * q + c)
    }

    /// Sum of the coefficients, i.e. the value at `q = 1`.
    pub fn eval_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Flips the sign so that the lowest nonzero coefficient is positive.
    pub fn normalize_sign(&self) -> Self {
        match self.low_degree() {
            Some(k) if self.coeffs[k].is_negative() => -self,
            _ => self.clone(),
        }
    }

    /// Divides by `q^k`; `None` if some coefficient below `k` is nonzero.
    pub fn shift_down(&self, k: usize) -> Option<Self> {
        if self.coeffs.iter().take(k).any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::from_coeffs(self.coeffs.iter().skip(k).cloned().collect()))
    }

    /// Exact division. Returns `None` when `divisor` is zero or does not
    /// divide `self` in `Z[q]`.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let dd = divisor.degree()?;
        if self.is_zero() {
            return Some(Poly::default());
        }
        let nd = self.degree().unwrap();
        if nd < dd {
            return None;
        }
        let lead = &divisor.coeffs[dd];
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            if !(top % lead).is_zero() {
                return None;
            }
            let f = top / lead;
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= &f * d;
            }
            quot[k] = f;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Poly::from_coeffs(quot))
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }
}

impl From<BigInt> for Poly {
    fn from(c: BigInt) -> Self {
        Poly::constant(c)
    }
}

impl From<i64> for Poly {
    fn from(c: i64) -> Self {
        Poly::constant(c)
    }
}

impl std::ops::Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|k| {
                let mut c = self.coeff(k);
                if let Some(r) = rhs.coeffs.get(k) {
                    c += r;
                }
                c
            })
            .collect();
        Poly::from_coeffs(coeffs)
    }
}

impl std::ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl std::ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::default();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::from_coeffs(coeffs)
    }
}

impl fmt::Display for Poly {
    /// Ascending exponents: `1 + 2*q + q^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{mag}*q")?,
                (_, true) => write!(f, "q^{k}")?,
                (_, false) => write!(f, "{mag}*q^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}
