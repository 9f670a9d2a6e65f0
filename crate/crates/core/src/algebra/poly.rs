//! Dense polynomials in A = F_q[θ].
//!
//! Coefficients are stored lowest degree first with no trailing zeros, so
//! the zero polynomial is the empty vector. All arithmetic takes the field
//! explicitly.

use std::fmt;

use super::field::{Fe, GaloisField};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<Fe>,
}

impl Poly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Fe::ONE)
    }

    /// θ.
    pub fn theta() -> Self {
        Self::monomial(Fe::ONE, 1)
    }

    pub fn constant(c: Fe) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn monomial(c: Fe, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Fe::ZERO; k + 1];
        coeffs[k] = c;
        Self { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<Fe>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Builds from raw element indices, checking each against the field.
    pub fn from_indices(indices: &[u32], field: &GaloisField) -> Result<Self> {
        let coeffs = indices
            .iter()
            .map(|&i| field.element(i))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_coeffs(coeffs))
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Fe {
        self.coeffs.get(k).copied().unwrap_or(Fe::ZERO)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Fe::ONE
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&Fe::ONE)
    }

    pub fn leading(&self) -> Option<Fe> {
        self.coeffs.last().copied()
    }

    pub fn add(&self, other: &Poly, f: &GaloisField) -> Poly {
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = long.coeffs.clone();
        for (o, &s) in out.iter_mut().zip(&short.coeffs) {
            *o = f.add(*o, s);
        }
        Self::from_coeffs(out)
    }

    pub fn add_assign(&mut self, other: &Poly, f: &GaloisField) {
        if other.coeffs.len() > self.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), Fe::ZERO);
        }
        for (o, &s) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *o = f.add(*o, s);
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn neg(&self, f: &GaloisField) -> Poly {
        Self {
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly, f: &GaloisField) -> Poly {
        self.add(&other.neg(f), f)
    }

    pub fn scale(&self, c: Fe, f: &GaloisField) -> Poly {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Fe::ZERO; k];
        coeffs.extend_from_slice(&self.coeffs);
        Self { coeffs }
    }

    pub fn mul(&self, other: &Poly, f: &GaloisField) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Fe::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Self::from_coeffs(out)
    }

    /// Quotient and remainder; `divisor` must be nonzero.
    pub fn div_rem(&self, divisor: &Poly, f: &GaloisField) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = f.inv(divisor.coeffs[dd]).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Fe::ZERO; rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            let c = rem[top];
            if c.is_zero() {
                continue;
            }
            let factor = f.mul(c, lead_inv);
            quot[top - dd] = factor;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                let idx = top - dd + j;
                rem[idx] = f.sub(rem[idx], f.mul(factor, b));
            }
        }
        rem.truncate(dd);
        (Self::from_coeffs(quot), Self::from_coeffs(rem))
    }

    pub fn rem(&self, divisor: &Poly, f: &GaloisField) -> Poly {
        if self.coeffs.len() < divisor.coeffs.len() {
            return self.clone();
        }
        self.div_rem(divisor, f).1
    }

    /// Exact quotient, or `None` if `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &Poly, f: &GaloisField) -> Option<Poly> {
        let (q, r) = self.div_rem(divisor, f);
        r.is_zero().then_some(q)
    }

    pub fn make_monic(&self, f: &GaloisField) -> Poly {
        match self.leading() {
            Some(c) => self.scale(f.inv(c).expect("nonzero"), f),
            None => Self::zero(),
        }
    }

    /// Coefficientwise Frobenius followed by θ -> θ^p, i.e. the p-th power.
    pub fn frobenius(&self, f: &GaloisField) -> Poly {
        if self.is_zero() {
            return Self::zero();
        }
        let p = f.p() as usize;
        let mut coeffs = vec![Fe::ZERO; (self.coeffs.len() - 1) * p + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * p] = f.frobenius(c);
        }
        Self { coeffs }
    }

    fn pow_by_squaring(&self, mut e: u64, f: &GaloisField) -> Poly {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, f);
            }
        }
        acc
    }

    /// `self^e`, using the base-p digits of `e` and the Frobenius so that
    /// only digit-sized powers are multiplied out.
    pub fn pow(&self, e: u64, f: &GaloisField) -> Poly {
        if e == 0 {
            return Self::one();
        }
        if self.is_zero() {
            return Self::zero();
        }
        let p = f.p() as u64;
        let mut acc = Self::one();
        let mut frob = self.clone();
        let mut rest = e;
        loop {
            let digit = rest % p;
            if digit > 0 {
                acc = acc.mul(&frob.pow_by_squaring(digit, f), f);
            }
            rest /= p;
            if rest == 0 {
                break;
            }
            frob = frob.frobenius(f);
        }
        acc
    }

    /// `self^e mod modulus` by square-and-multiply on a big exponent given
    /// as little-endian 64-bit limbs.
    pub fn pow_mod_limbs(&self, limbs: &[u64], modulus: &Poly, f: &GaloisField) -> Poly {
        let mut acc = Self::one().rem(modulus, f);
        let base = self.rem(modulus, f);
        for &limb in limbs.iter().rev() {
            for bit in (0..64).rev() {
                acc = acc.mul(&acc, f).rem(modulus, f);
                if (limb >> bit) & 1 == 1 {
                    acc = acc.mul(&base, f).rem(modulus, f);
                }
            }
        }
        acc
    }

    pub fn pow_mod(&self, e: u64, modulus: &Poly, f: &GaloisField) -> Poly {
        self.pow_mod_limbs(&[e], modulus, f)
    }

    pub fn gcd(&self, other: &Poly, f: &GaloisField) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, f);
            a = b;
            b = r;
        }
        a.make_monic(f)
    }

    /// Irreducibility over F_q (Ben-Or: no factor of degree <= deg/2).
    pub fn is_irreducible(&self, f: &GaloisField) -> bool {
        let Some(n) = self.degree() else {
            return false;
        };
        if n == 0 {
            return false;
        }
        let m = self.make_monic(f);
        let theta = Self::theta();
        let mut power = theta.rem(&m, f);
        for _ in 0..n / 2 {
            power = power.pow_mod(f.q() as u64, &m, f);
            let g = power.sub(&theta, f).gcd(&m, f);
            if !g.is_one() {
                return false;
            }
        }
        true
    }

    /// Multiplicity of `v` in `self` (`None` for zero).
    pub fn valuation(&self, v: &Poly, f: &GaloisField) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let mut cur = self.clone();
        let mut k = 0;
        while let Some(q) = cur.exact_div(v, f) {
            cur = q;
            k += 1;
        }
        Some(k)
    }

    pub fn display(&self, f: &GaloisField) -> PolyDisplay<'_> {
        PolyDisplay {
            poly: self,
            field: f.clone(),
        }
    }
}

/// Human-readable form `2*t^3+t+2`. Coefficients of extension fields print
/// as their element index; use the JSON encoding for exact coordinates.
pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    field: GaloisField,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let _ = &self.field;
        if self.poly.is_zero() {
            return write!(out, "0");
        }
        let mut first = true;
        for (k, c) in self.poly.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(out, "+")?;
            }
            first = false;
            match (k, c.0) {
                (0, v) => write!(out, "{v}")?,
                (_, 1) => {}
                (_, v) => write!(out, "{v}*")?,
            }
            match k {
                0 => {}
                1 => write!(out, "t")?,
                _ => write!(out, "t^{k}")?,
            }
        }
        Ok(())
    }
}

/// Filter applied by [`enumerate_monic`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonicFilter {
    All,
    /// Keep n with gcd(n, v) = 1.
    CoprimeTo(Poly),
    /// Keep n with n ≡ residue mod modulus, where modulus is a unit times v^e.
    Residue { residue: Poly, modulus: Poly },
}

/// Checks that `m` is a unit multiple of a power of one irreducible and
/// returns that irreducible (monic) with its exponent; constants give `(1, 0)`.
pub fn prime_power_decomposition(m: &Poly, f: &GaloisField) -> Result<(Poly, u32)> {
    let n = m
        .degree()
        .ok_or_else(|| Error::UnsupportedModulus("0".into()))?;
    let monic = m.make_monic(f);
    if n == 0 {
        return Ok((Poly::one(), 0));
    }
    let theta = Poly::theta();
    let mut power = theta.rem(&monic, f);
    for i in 1..=n {
        power = power.pow_mod(f.q() as u64, &monic, f);
        let g = power.sub(&theta, f).gcd(&monic, f);
        if g.is_one() {
            continue;
        }
        // g is the product of the distinct degree-i irreducible factors
        if g.degree() == Some(i) && n % i == 0 {
            let e = (n / i) as u32;
            if g.pow(e as u64, f) == monic {
                return Ok((g, e));
            }
        }
        break;
    }
    Err(Error::UnsupportedModulus(format!("{}", m.display(f))))
}

/// All monic polynomials of degree `deg` passing `filter`, each once, in
/// increasing order of `sum c_k q^k` over the lower coefficients (c_0 varies
/// fastest).
pub fn enumerate_monic(
    deg: usize,
    field: &GaloisField,
    filter: MonicFilter,
) -> Result<impl Iterator<Item = Poly>> {
    if let MonicFilter::Residue { modulus, .. } = &filter {
        prime_power_decomposition(modulus, field)?;
    }
    let field = field.clone();
    let q = field.q();
    let mut lower = vec![0u32; deg];
    let mut done = false;
    let iter = std::iter::from_fn(move || {
        if done {
            return None;
        }
        let mut coeffs: Vec<Fe> = lower.iter().map(|&c| Fe(c)).collect();
        coeffs.push(Fe::ONE);
        // advance odometer
        let mut k = 0;
        loop {
            if k == deg {
                done = true;
                break;
            }
            lower[k] += 1;
            if lower[k] < q {
                break;
            }
            lower[k] = 0;
            k += 1;
        }
        Some(Poly { coeffs })
    })
    .filter(move |n| match &filter {
        MonicFilter::All => true,
        MonicFilter::CoprimeTo(v) => !n.rem(v, &field).is_zero(),
        MonicFilter::Residue { residue, modulus } => {
            n.rem(modulus, &field) == residue.rem(modulus, &field)
        }
    });
    Ok(iter)
}

/// Every polynomial (not only monic) of degree < `bound`, zero first.
pub fn enumerate_below(bound: usize, field: &GaloisField) -> impl Iterator<Item = Poly> {
    let q = field.q();
    let mut digits = vec![0u32; bound];
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = Poly::from_coeffs(digits.iter().map(|&c| Fe(c)).collect());
        let mut k = 0;
        loop {
            if k == bound {
                done = true;
                break;
            }
            digits[k] += 1;
            if digits[k] < q {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
        Some(out)
    })
}
