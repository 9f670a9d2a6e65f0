//! Truncated v-adic integers: residues in A / v^E for a monic irreducible v.

use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;

use super::field::{Fe, GaloisField};
use super::poly::Poly;
use crate::error::{Error, Result};

struct PlaceInner {
    field: GaloisField,
    v: Poly,
    d: usize,
    powers: RwLock<Vec<Poly>>,
}

/// A finite place of k given by a monic irreducible polynomial v.
#[derive(Clone)]
pub struct VPlace {
    inner: Arc<PlaceInner>,
}

impl PartialEq for VPlace {
    fn eq(&self, other: &Self) -> bool {
        self.inner.field == other.inner.field && self.inner.v == other.inner.v
    }
}

impl Eq for VPlace {}

impl std::hash::Hash for VPlace {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.inner.field.hash(state);
        self.inner.v.hash(state);
    }
}

impl fmt::Debug for VPlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VPlace(q={}, v={})", self.inner.field.q(), self.inner.v.display(&self.inner.field))
    }
}

impl VPlace {
    pub fn new(field: &GaloisField, v: Poly) -> Result<Self> {
        if !v.is_monic() || v.degree().unwrap_or(0) == 0 {
            return Err(Error::InvalidInput(format!(
                "v = {} must be monic of positive degree",
                v.display(field)
            )));
        }
        if !v.is_irreducible(field) {
            return Err(Error::NotIrreducible(v.display(field).to_string()));
        }
        let d = v.degree().unwrap();
        Ok(Self {
            inner: Arc::new(PlaceInner {
                field: field.clone(),
                v: v.clone(),
                d,
                powers: RwLock::new(vec![Poly::one(), v]),
            }),
        })
    }

    pub fn field(&self) -> &GaloisField {
        &self.inner.field
    }

    pub fn v(&self) -> &Poly {
        &self.inner.v
    }

    pub fn degree(&self) -> usize {
        self.inner.d
    }

    /// v^e, cached.
    pub fn v_pow(&self, e: u32) -> Poly {
        let e = e as usize;
        if let Some(p) = self.inner.powers.read().unwrap().get(e) {
            return p.clone();
        }
        let mut powers = self.inner.powers.write().unwrap();
        while powers.len() <= e {
            let next = powers.last().unwrap().mul(&self.inner.v, &self.inner.field);
            powers.push(next);
        }
        powers[e].clone()
    }

    /// Order of (A / v^level)^×, i.e. (q^d − 1)·q^{(level−1)d}.
    pub fn unit_group_order(&self, level: u32) -> BigUint {
        let q = BigUint::from(self.inner.field.q());
        let qd = q.pow(self.inner.d as u32);
        (&qd - 1u32) * qd.pow(level.saturating_sub(1))
    }

    pub fn is_unit(&self, a: &Poly) -> bool {
        !a.rem(&self.inner.v, &self.inner.field).is_zero()
    }

    pub fn reduce(&self, a: &Poly, level: u32) -> Result<VAdic> {
        check_level(level)?;
        Ok(VAdic {
            place: self.clone(),
            level,
            value: a.rem(&self.v_pow(level), &self.inner.field),
        })
    }

    /// Image of num/den, which must be v-integral with den a unit.
    pub fn reduce_rational(&self, num: &Poly, den: &Poly, level: u32) -> Result<VAdic> {
        if den.is_zero() || !self.is_unit(den) {
            return Err(Error::DenominatorNotUnit(den.display(&self.inner.field).to_string()));
        }
        let n = self.reduce(num, level)?;
        let d = self.reduce(den, level)?;
        Ok(n.mul(&d.inv()?))
    }

    pub fn one(&self, level: u32) -> Result<VAdic> {
        self.reduce(&Poly::one(), level)
    }

    pub fn zero(&self, level: u32) -> Result<VAdic> {
        self.reduce(&Poly::zero(), level)
    }
}

fn check_level(level: u32) -> Result<()> {
    if level == 0 {
        return Err(Error::InvalidInput("v-adic level must be at least 1".into()));
    }
    Ok(())
}

/// Residue class mod v^level. Arithmetic between different levels truncates
/// to the smaller one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VAdic {
    place: VPlace,
    level: u32,
    value: Poly,
}

impl VAdic {
    pub fn place(&self) -> &VPlace {
        &self.place
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Canonical representative, of degree < level·d.
    pub fn value(&self) -> &Poly {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn field(&self) -> &GaloisField {
        self.place.field()
    }

    fn with_value(&self, level: u32, value: Poly) -> VAdic {
        let value = if level < self.level || value.degree().unwrap_or(0) >= level as usize * self.place.degree() {
            value.rem(&self.place.v_pow(level), self.field())
        } else {
            value
        };
        VAdic {
            place: self.place.clone(),
            level,
            value,
        }
    }

    pub fn reduce_to(&self, level: u32) -> VAdic {
        let level = level.min(self.level).max(1);
        self.with_value(level, self.value.clone())
    }

    pub fn add(&self, other: &VAdic) -> VAdic {
        debug_assert_eq!(self.place, other.place);
        let level = self.level.min(other.level);
        self.with_value(level, self.value.add(&other.value, self.field()))
    }

    pub fn sub(&self, other: &VAdic) -> VAdic {
        debug_assert_eq!(self.place, other.place);
        let level = self.level.min(other.level);
        self.with_value(level, self.value.sub(&other.value, self.field()))
    }

    pub fn neg(&self) -> VAdic {
        self.with_value(self.level, self.value.neg(self.field()))
    }

    pub fn mul(&self, other: &VAdic) -> VAdic {
        debug_assert_eq!(self.place, other.place);
        let level = self.level.min(other.level);
        self.with_value(level, self.value.mul(&other.value, self.field()))
    }

    /// Multiplies by a constant.
    pub fn scale(&self, c: Fe) -> VAdic {
        self.with_value(self.level, self.value.scale(c, self.field()))
    }

    /// Multiplies by an element of A.
    pub fn mul_poly(&self, a: &Poly) -> VAdic {
        self.with_value(self.level, self.value.mul(a, self.field()))
    }

    pub fn is_unit(&self) -> bool {
        self.place.is_unit(&self.value)
    }

    pub fn inv(&self) -> Result<VAdic> {
        if !self.is_unit() {
            return Err(Error::NotAUnit(self.value.display(self.field()).to_string()));
        }
        let f = self.field();
        let modulus = self.place.v_pow(self.level);
        // extended Euclid: track s with s·value ≡ r (mod modulus)
        let (mut r0, mut r1) = (modulus.clone(), self.value.clone());
        let (mut s0, mut s1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (quot, rem) = r0.div_rem(&r1, f);
            let s2 = s0.sub(&quot.mul(&s1, f), f);
            r0 = r1;
            r1 = rem;
            s0 = s1;
            s1 = s2;
        }
        // r0 is a nonzero constant since gcd = 1
        let c = f.inv(r0.coeff(0)).expect("gcd is a unit");
        Ok(self.with_value(self.level, s0.scale(c, f).rem(&modulus, f)))
    }

    /// `self^t` at `target_level` for any integer t; the exponent is reduced
    /// modulo the order of the unit group at that level.
    pub fn pow(&self, t: &BigInt, target_level: u32) -> Result<VAdic> {
        if target_level > self.level {
            return Err(Error::InvalidInput(format!(
                "target level {target_level} exceeds operand level {}",
                self.level
            )));
        }
        check_level(target_level)?;
        if !self.is_unit() {
            return Err(Error::NotAUnit(self.value.display(self.field()).to_string()));
        }
        let order = BigInt::from(self.place.unit_group_order(target_level));
        let e = t.mod_floor(&order).to_biguint().expect("nonnegative residue");
        let base = self.reduce_to(target_level);
        if e.is_zero() {
            return Ok(base.with_value(target_level, Poly::one()));
        }
        let modulus = self.place.v_pow(target_level);
        let value = base.value.pow_mod_limbs(&e.to_u64_digits(), &modulus, self.field());
        Ok(base.with_value(target_level, value))
    }

    /// Plain nonnegative power without exponent reduction (valid for non-units).
    pub fn pow_u(&self, e: u64) -> VAdic {
        if e == 0 {
            return self.with_value(self.level, Poly::one());
        }
        let modulus = self.place.v_pow(self.level);
        self.with_value(self.level, self.value.pow_mod(e, &modulus, self.field()))
    }

    /// ord_v of the residue, capped at the level (zero has "valuation" level).
    pub fn valuation(&self) -> u32 {
        match self.value.valuation(self.place.v(), self.field()) {
            Some(k) => k.min(self.level),
            None => self.level,
        }
    }

    /// Equality at the common level.
    pub fn congruent(&self, other: &VAdic) -> bool {
        let level = self.level.min(other.level);
        self.reduce_to(level).value == other.reduce_to(level).value
    }
}

impl fmt::Display for VAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(v^{})", self.value.display(self.field()), self.level)
    }
}

/// Convenience for callers holding machine-size exponents.
pub fn big(t: i64) -> BigInt {
    BigInt::from(t)
}
