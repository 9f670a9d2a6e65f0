//! Truncated Laurent series in x = 1/θ, i.e. elements of k_∞ known modulo
//! x^prec.

use super::field::{Fe, GaloisField};
use super::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    /// Exponent of `coeffs[0]`; the first stored coefficient is nonzero
    /// unless the series is zero to its precision.
    val: i64,
    coeffs: Vec<Fe>,
    /// Coefficients of x^j are exact for j < prec.
    prec: i64,
}

impl LaurentSeries {
    pub fn zero(prec: i64) -> Self {
        Self {
            val: prec,
            coeffs: Vec::new(),
            prec,
        }
    }

    pub fn one(prec: i64) -> Self {
        Self::new(0, vec![Fe::ONE], prec)
    }

    pub fn new(val: i64, coeffs: Vec<Fe>, prec: i64) -> Self {
        let mut s = Self { val, coeffs, prec };
        s.normalize();
        s
    }

    /// The polynomial n(θ) viewed in k_∞.
    pub fn from_theta_poly(n: &Poly, prec: i64) -> Self {
        match n.degree() {
            None => Self::zero(prec),
            Some(i) => {
                let coeffs = (0..=i).map(|j| n.coeff(i - j)).collect();
                Self::new(-(i as i64), coeffs, prec)
            }
        }
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => {
                self.coeffs.clear();
                self.val = self.prec;
            }
            Some(k) => {
                self.coeffs.drain(..k);
                self.val += k as i64;
                let keep = (self.prec - self.val).max(0) as usize;
                self.coeffs.truncate(keep);
                while self.coeffs.last().is_some_and(|c| c.is_zero()) {
                    self.coeffs.pop();
                }
                if self.coeffs.is_empty() {
                    self.val = self.prec;
                }
            }
        }
    }

    /// ord_∞; for a series that is zero to its precision this is `prec`,
    /// a lower bound.
    pub fn valuation(&self) -> i64 {
        self.val
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of x^j, or `None` beyond the precision.
    pub fn coeff(&self, j: i64) -> Option<Fe> {
        if j >= self.prec {
            return None;
        }
        if j < self.val {
            return Some(Fe::ZERO);
        }
        Some(self.coeffs.get((j - self.val) as usize).copied().unwrap_or(Fe::ZERO))
    }

    /// Coefficients of x^j for `from <= j < self.prec`.
    pub fn coeffs_from(&self, from: i64) -> Vec<Fe> {
        (from..self.prec).map(|j| self.coeff(j).unwrap()).collect()
    }

    pub fn truncate(&self, prec: i64) -> Self {
        Self::new(self.val, self.coeffs.clone(), prec.min(self.prec))
    }

    pub fn add(&self, other: &Self, f: &GaloisField) -> Self {
        let prec = self.prec.min(other.prec);
        let lo = self.val.min(other.val).min(prec);
        let coeffs = (lo..prec)
            .map(|j| f.add(self.coeff(j).unwrap(), other.coeff(j).unwrap()))
            .collect();
        Self::new(lo, coeffs, prec)
    }

    pub fn neg(&self, f: &GaloisField) -> Self {
        Self::new(self.val, self.coeffs.iter().map(|&c| f.neg(c)).collect(), self.prec)
    }

    pub fn sub(&self, other: &Self, f: &GaloisField) -> Self {
        self.add(&other.neg(f), f)
    }

    pub fn scale(&self, c: Fe, f: &GaloisField) -> Self {
        Self::new(self.val, self.coeffs.iter().map(|&a| f.mul(a, c)).collect(), self.prec)
    }

    /// Product; the absolute precision is min(prec_a + val_b, prec_b + val_a).
    pub fn mul(&self, other: &Self, f: &GaloisField) -> Self {
        let prec = (self.prec + other.val).min(other.prec + self.val);
        let val = self.val + other.val;
        if self.is_zero() || other.is_zero() {
            return Self::zero(prec);
        }
        let len = (prec - val).max(0) as usize;
        let mut out = vec![Fe::ZERO; len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if i >= len || a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Self::new(val, out, prec)
    }

    /// Inverse of a series with a known nonzero leading term; relative
    /// precision is preserved. `None` if the series is zero to precision.
    pub fn inv(&self, f: &GaloisField) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let rel = (self.prec - self.val) as usize;
        let lead_inv = f.inv(self.coeffs[0])?;
        let mut out = vec![Fe::ZERO; rel];
        for k in 0..rel {
            // solve sum_{i<=k} a_i b_{k-i} = [k == 0]
            let mut acc = if k == 0 { Fe::ONE } else { Fe::ZERO };
            for i in 1..=k.min(self.coeffs.len().saturating_sub(1)) {
                acc = f.sub(acc, f.mul(self.coeffs[i], out[k - i]));
            }
            out[k] = f.mul(acc, lead_inv);
        }
        Some(Self::new(-self.val, out, rel as i64 - self.val))
    }

    pub fn pow(&self, e: u64, f: &GaloisField) -> Self {
        let mut acc: Option<Self> = None;
        let mut base = self.clone();
        let mut e = e;
        if e == 0 {
            return Self::one(self.prec - self.val);
        }
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base, f),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, f);
            }
        }
        acc.unwrap()
    }

    /// Agreement on every coefficient below `n` (both must be known there).
    pub fn agrees_below(&self, other: &Self, n: i64) -> bool {
        let lo = self.val.min(other.val);
        (lo..n).all(|j| match (self.coeff(j), other.coeff(j)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        })
    }

    /// Human-readable rendering `c*x^j + ... + O(x^prec)` with x = 1/θ.
    pub fn display(&self) -> String {
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let j = self.val + k as i64;
            let mono = match j {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{j}"),
            };
            parts.push(match (c.0, mono.is_empty()) {
                (v, true) => format!("{v}"),
                (1, false) => mono,
                (v, false) => format!("{v}*{mono}"),
            });
        }
        parts.push(format!("O(x^{})", self.prec));
        parts.join("+")
    }
}
