//! The finite field F_q, q = p^k.
//!
//! Elements are encoded as integers in `[0, q)`: the element with coordinates
//! `(c_0, ..., c_{k-1})` in the power basis of the modulus is `sum c_j p^j`.
//! For `k = 1` this is the residue itself. Multiplication in extension fields
//! goes through discrete log tables built once per field.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest extension-field order for which log tables are built.
pub const MAX_EXTENSION_ORDER: u32 = 1 << 16;

/// An element of F_q in index encoding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Inner {
    p: u32,
    ext_degree: u32,
    q: u32,
    /// Monic modulus over F_p, lowest coefficient first, length `ext_degree + 1`.
    modulus: Vec<u32>,
    /// `exp[i] = g^i` for a primitive element g (extension fields only).
    exp: Vec<u32>,
    /// `log[a]` with `g^log[a] = a`; `log[0]` is unused.
    log: Vec<u32>,
}

/// Descriptor and arithmetic for F_q. Cheap to clone.
#[derive(Clone)]
pub struct GaloisField {
    inner: Arc<Inner>,
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for GaloisField {}

impl std::hash::Hash for GaloisField {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.inner.p.hash(state);
        self.inner.modulus.hash(state);
    }
}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}", self.inner.q)?;
        if self.inner.ext_degree > 1 {
            write!(f, ", modulus {:?}", self.inner.modulus)?;
        }
        write!(f, ")")
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` into `(p, k)` with `q = p^k`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1 && p <= u32::MAX as u64).then_some((p as u32, k))
}

// Dense polynomials over F_p used only while building extension tables.
fn fp_trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn fp_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = fp_trim(a.to_vec());
    let dm = m.len() - 1;
    let inv_lead = fp_pow(m[dm], p - 2, p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = (*r.last().unwrap() as u64 * inv_lead as u64 % p as u64) as u32;
        for (j, &mj) in m.iter().enumerate() {
            let t = (c as u64 * mj as u64 % p as u64) as u32;
            r[shift + j] = (r[shift + j] + p - t) % p;
        }
        r = fp_trim(r);
    }
    r
}

fn fp_pow(a: u32, mut e: u32, p: u32) -> u32 {
    let (mut base, mut acc) = (a as u64 % p as u64, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

fn fp_is_irreducible(m: &[u32], p: u32) -> bool {
    let k = m.len() - 1;
    if k == 0 {
        return false;
    }
    // trial division by every monic divisor candidate of degree <= k/2
    for deg in 1..=k / 2 {
        let count = (p as u64).pow(deg as u32);
        for idx in 0..count {
            let mut cand = Vec::with_capacity(deg + 1);
            let mut rest = idx;
            for _ in 0..deg {
                cand.push((rest % p as u64) as u32);
                rest /= p as u64;
            }
            cand.push(1);
            if fp_rem(m, &cand, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn default_modulus(p: u32, k: u32) -> Vec<u32> {
    match (p, k) {
        (_, 1) => vec![0, 1],
        (2, 2) => vec![1, 1, 1],
        (2, 3) => vec![1, 1, 0, 1],
        (3, 2) => vec![1, 0, 1],
        _ => {
            // first irreducible monic polynomial in index order
            let count = (p as u64).pow(k);
            (0..count)
                .map(|idx| {
                    let mut m = Vec::with_capacity(k as usize + 1);
                    let mut rest = idx;
                    for _ in 0..k {
                        m.push((rest % p as u64) as u32);
                        rest /= p as u64;
                    }
                    m.push(1);
                    m
                })
                .find(|m| fp_is_irreducible(m, p))
                .expect("an irreducible polynomial of every degree exists")
        }
    }
}

impl GaloisField {
    /// The prime field F_p.
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1, None)
    }

    /// F_q with the built-in modulus (x^2+x+1 for q=4, x^3+x+1 for q=8,
    /// x^2+1 for q=9, the first irreducible in index order otherwise).
    pub fn with_order(q: u64) -> Result<Self> {
        let (p, k) = prime_power(q)
            .ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
        Self::new(p, k, None)
    }

    /// Builds F_{p^k}. `modulus` is a monic degree-k polynomial over F_p given
    /// lowest coefficient first; `None` picks the default.
    pub fn new(p: u32, ext_degree: u32, modulus: Option<Vec<u32>>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if ext_degree == 0 {
            return Err(Error::InvalidField("extension degree must be positive".into()));
        }
        let q = (p as u64)
            .checked_pow(ext_degree)
            .filter(|&q| q <= u32::MAX as u64)
            .ok_or_else(|| Error::InvalidField("field order too large".into()))?
            as u32;
        let modulus = match modulus {
            Some(m) => m,
            None => default_modulus(p, ext_degree),
        };
        if modulus.len() != ext_degree as usize + 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField(format!(
                "modulus {modulus:?} must have {} coefficients in [0, {p})",
                ext_degree + 1
            )));
        }
        if modulus[ext_degree as usize] != 1 {
            return Err(Error::InvalidField(format!("modulus {modulus:?} is not monic")));
        }
        if ext_degree == 1 {
            if modulus != [0, 1] {
                return Err(Error::InvalidField(
                    "prime fields use the identity modulus [0, 1]".into(),
                ));
            }
            return Ok(Self {
                inner: Arc::new(Inner {
                    p,
                    ext_degree,
                    q,
                    modulus,
                    exp: Vec::new(),
                    log: Vec::new(),
                }),
            });
        }
        if q > MAX_EXTENSION_ORDER {
            return Err(Error::InvalidField(format!(
                "extension fields are limited to q <= {MAX_EXTENSION_ORDER}"
            )));
        }
        if !fp_is_irreducible(&modulus, p) {
            return Err(Error::NotIrreducible(format!("modulus {modulus:?}")));
        }
        let (exp, log) = build_log_tables(p, ext_degree, q, &modulus);
        Ok(Self {
            inner: Arc::new(Inner {
                p,
                ext_degree,
                q,
                modulus,
                exp,
                log,
            }),
        })
    }

    pub fn p(&self) -> u32 {
        self.inner.p
    }

    pub fn ext_degree(&self) -> u32 {
        self.inner.ext_degree
    }

    pub fn q(&self) -> u32 {
        self.inner.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (0..self.inner.q).map(Fe)
    }

    /// Image of an integer under Z -> F_p -> F_q.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.inner.p as i64) as u32)
    }

    pub fn coords(&self, a: Fe) -> Vec<u32> {
        let p = self.inner.p;
        let mut rest = a.0;
        (0..self.inner.ext_degree)
            .map(|_| {
                let c = rest % p;
                rest /= p;
                c
            })
            .collect()
    }

    pub fn from_coords(&self, coords: &[u32]) -> Result<Fe> {
        let p = self.inner.p;
        if coords.len() != self.inner.ext_degree as usize || coords.iter().any(|&c| c >= p) {
            return Err(Error::InvalidInput(format!(
                "coefficient {coords:?} is not a length-{} vector over [0, {p})",
                self.inner.ext_degree
            )));
        }
        Ok(Fe(coords.iter().rev().fold(0u32, |acc, &c| acc * p + c)))
    }

    /// Checked conversion from an index in `[0, q)`.
    pub fn element(&self, index: u32) -> Result<Fe> {
        if index < self.inner.q {
            Ok(Fe(index))
        } else {
            Err(Error::InvalidInput(format!(
                "{index} is not an element index of F_{}",
                self.inner.q
            )))
        }
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let inner = &*self.inner;
        if inner.ext_degree == 1 {
            let s = a.0 as u64 + b.0 as u64;
            return Fe((s % inner.p as u64) as u32);
        }
        if inner.p == 2 {
            return Fe(a.0 ^ b.0);
        }
        let p = inner.p;
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0u32, 1u32);
        while x > 0 || y > 0 {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        Fe(out)
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        let inner = &*self.inner;
        if inner.ext_degree == 1 {
            return Fe((inner.p - a.0) % inner.p);
        }
        if inner.p == 2 {
            return a;
        }
        let p = inner.p;
        let (mut x, mut out, mut place) = (a.0, 0u32, 1u32);
        while x > 0 {
            out += ((p - x % p) % p) * place;
            x /= p;
            place *= p;
        }
        Fe(out)
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        let inner = &*self.inner;
        if inner.ext_degree == 1 {
            return Fe((a.0 as u64 * b.0 as u64 % inner.p as u64) as u32);
        }
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        let order = inner.q - 1;
        let s = inner.log[a.0 as usize] + inner.log[b.0 as usize];
        Fe(inner.exp[(if s >= order { s - order } else { s }) as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Fe) -> Option<Fe> {
        if a.is_zero() {
            return None;
        }
        let inner = &*self.inner;
        if inner.ext_degree == 1 {
            return Some(Fe(fp_pow(a.0, inner.p - 2, inner.p)));
        }
        let order = inner.q - 1;
        Some(Fe(inner.exp[((order - inner.log[a.0 as usize]) % order) as usize]))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.is_zero() {
            return Fe::ZERO;
        }
        let order = (self.inner.q - 1) as u64;
        let e = e % order;
        let inner = &*self.inner;
        if inner.ext_degree == 1 {
            return Fe(fp_pow(a.0, e as u32, inner.p));
        }
        let l = inner.log[a.0 as usize] as u64 * e % order;
        Fe(inner.exp[l as usize])
    }

    /// a -> a^p.
    pub fn frobenius(&self, a: Fe) -> Fe {
        self.pow(a, self.inner.p as u64)
    }
}

fn build_log_tables(p: u32, k: u32, q: u32, modulus: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let k = k as usize;
    let encode = |c: &[u32]| c.iter().rev().fold(0u32, |acc, &x| acc * p + x);
    let decode = |mut idx: u32| {
        (0..k)
            .map(|_| {
                let c = idx % p;
                idx /= p;
                c
            })
            .collect::<Vec<_>>()
    };
    let slow_mul = |a: &[u32], b: &[u32]| {
        let mut prod = vec![0u32; 2 * k - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
            }
        }
        let mut r = fp_rem(&prod, modulus, p);
        r.resize(k, 0);
        r
    };
    let order = q - 1;
    for g in 2..q.max(3) {
        let gc = decode(g);
        let mut exp = Vec::with_capacity(order as usize);
        let mut cur = decode(1);
        let mut ok = true;
        for i in 0..order {
            let idx = encode(&cur);
            if i > 0 && idx == 1 {
                ok = false;
                break;
            }
            exp.push(idx);
            cur = slow_mul(&cur, &gc);
        }
        if ok && encode(&cur) == 1 {
            let mut log = vec![0u32; q as usize];
            for (i, &e) in exp.iter().enumerate() {
                log[e as usize] = i as u32;
            }
            return (exp, log);
        }
    }
    // q = 2 never reaches here (ext_degree > 1); F_4 etc. always have a generator above 1
    unreachable!("multiplicative group of a finite field is cyclic")
}
