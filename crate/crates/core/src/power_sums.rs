//! Power sums S_i(−m), their v-coprime variants S̃_i, and the degree
//! truncated zeta sums ζ_{<d}, ζ*_{<d}.

use std::num::NonZeroUsize;
use std::sync::Mutex;

use lru::LruCache;
use num_bigint::BigInt;
use num_integer::Integer;

use crate::algebra::{enumerate_monic, Fe, GaloisField, MonicFilter, Poly, VAdic, VPlace};
use crate::error::Result;

pub const DEFAULT_CACHE_ENTRIES: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Key {
    S {
        field: GaloisField,
        i: usize,
        m: u64,
    },
    STildeVadic {
        place: VPlace,
        i: usize,
        // exponent already reduced mod the unit group order at `level`
        e: BigInt,
        level: u32,
    },
}

#[derive(Clone, Debug)]
enum Value {
    Poly(Poly),
    VAdic(VAdic),
}

/// Memoized evaluator for the power sums of one field.
pub struct PowerSums {
    field: GaloisField,
    cache: Option<Mutex<LruCache<Key, Value>>>,
}

impl std::fmt::Debug for PowerSums {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PowerSums").field("field", &self.field).finish()
    }
}

impl PowerSums {
    pub fn new(field: &GaloisField) -> Self {
        Self::with_capacity(field, DEFAULT_CACHE_ENTRIES)
    }

    /// A capacity of 0 disables memoization.
    pub fn with_capacity(field: &GaloisField, entries: usize) -> Self {
        Self {
            field: field.clone(),
            cache: NonZeroUsize::new(entries).map(|n| Mutex::new(LruCache::new(n))),
        }
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    fn lookup(&self, key: &Key) -> Option<Value> {
        self.cache.as_ref()?.lock().unwrap().get(key).cloned()
    }

    fn store(&self, key: Key, value: Value) {
        if let Some(c) = &self.cache {
            c.lock().unwrap().put(key, value);
        }
    }

    /// S_i(−m) = Σ_{n monic, deg n = i} n^m.
    pub fn s(&self, i: usize, m: u64) -> Poly {
        if i == 0 {
            return Poly::one();
        }
        if i as u64 > m {
            return Poly::zero();
        }
        let key = Key::S {
            field: self.field.clone(),
            i,
            m,
        };
        if let Some(Value::Poly(p)) = self.lookup(&key) {
            return p;
        }
        let f = &self.field;
        let mut acc = Poly::zero();
        for n in enumerate_monic(i, f, MonicFilter::All).expect("no residue filter") {
            acc.add_assign(&n.pow(m, f), f);
        }
        self.store(key, Value::Poly(acc.clone()));
        acc
    }

    /// S̃_i(−m), from S_i(−m) − v^m·S_{i−d}(−m) for i ≥ d.
    pub fn s_tilde(&self, i: usize, m: u64, place: &VPlace) -> Poly {
        let d = place.degree();
        let s = self.s(i, m);
        if i < d {
            return s;
        }
        let shifted = self.s(i - d, m);
        if shifted.is_zero() {
            return s;
        }
        let f = &self.field;
        s.sub(&place.v().pow(m, f).mul(&shifted, f), f)
    }

    /// S̃_i(−m) by direct enumeration of the monic n coprime to v.
    pub fn s_tilde_enumerated(&self, i: usize, m: u64, place: &VPlace) -> Poly {
        FlatField::new(&self.field).sum_coprime_powers(i, m, place.v())
    }

    /// Σ_{n monic, deg n = i, (n,v)=1} n^e mod v^level, for any integer e.
    pub fn s_tilde_vadic(&self, i: usize, e: &BigInt, place: &VPlace, level: u32) -> Result<VAdic> {
        let order = BigInt::from(place.unit_group_order(level));
        let e = e.mod_floor(&order);
        // the reduced exponent is a nonnegative integer, so the exact vanishing applies
        if BigInt::from(i) >= &e + BigInt::from(place.degree() + 1) {
            return place.zero(level);
        }
        let key = Key::STildeVadic {
            place: place.clone(),
            i,
            e: e.clone(),
            level,
        };
        if let Some(Value::VAdic(x)) = self.lookup(&key) {
            return Ok(x);
        }
        let mut acc = place.zero(level)?;
        for n in enumerate_monic(i, &self.field, MonicFilter::CoprimeTo(place.v().clone()))? {
            acc = acc.add(&place.reduce(&n, level)?.pow(&e, level)?);
        }
        self.store(key, Value::VAdic(acc.clone()));
        Ok(acc)
    }

    /// ζ_{<d}(−m_1, …, −m_r) (or the star version): the chain sum over
    /// d > i_1 > ⋯ > i_r ≥ 0 (weakly decreasing for star). An empty tuple
    /// gives 1.
    pub fn zeta_truncated(&self, d_bound: usize, ms: &[u64], star: bool) -> Poly {
        if ms.is_empty() {
            return Poly::one();
        }
        if d_bound == 0 {
            return Poly::zero();
        }
        let f = &self.field;
        let caps: Vec<usize> = ms
            .iter()
            .map(|&m| (d_bound - 1).min(m as usize))
            .collect();
        chain_sum(
            &caps,
            star,
            |j, i| {
                let s = self.s(i, ms[j]);
                (!s.is_zero()).then_some(s)
            },
            |a, b| a.add(b, f),
            |a, b| a.mul(b, f),
        )
        .unwrap_or_else(Poly::zero)
    }
}

/// Σ over chains i_1 > ⋯ > i_r ≥ 0 (or ≥ for `star`) with i_j ≤ caps[j] of
/// Π_j term(j, i_j). `term` returns `None` for zero. The sum is built by a
/// suffix dynamic program so each term is evaluated once.
pub(crate) fn chain_sum<T: Clone>(
    caps: &[usize],
    star: bool,
    term: impl Fn(usize, usize) -> Option<T>,
    add: impl Fn(&T, &T) -> T,
    mul: impl Fn(&T, &T) -> T,
) -> Option<T> {
    let r = caps.len();
    assert!(r >= 1);
    let sum_opt = |a: Option<T>, b: &Option<T>| match (a, b) {
        (None, b) => b.clone(),
        (a, None) => a,
        (Some(a), Some(b)) => Some(add(&a, b)),
    };
    // acc[i] = total over chains of positions j.. with i_j = i
    let mut acc: Vec<Option<T>> = (0..=caps[r - 1]).map(|i| term(r - 1, i)).collect();
    for j in (0..r - 1).rev() {
        // prefix[i] = Σ_{i' <= i} acc[i']
        let mut prefix: Vec<Option<T>> = Vec::with_capacity(acc.len());
        let mut running: Option<T> = None;
        for a in &acc {
            running = sum_opt(running, a);
            prefix.push(running.clone());
        }
        let lower = |i: usize| -> Option<T> {
            // Σ_{i' < i} (strict) or Σ_{i' <= i} (star), restricted to the cap of j+1
            let top = if star { Some(i) } else { i.checked_sub(1) }?;
            let top = top.min(prefix.len() - 1);
            prefix[top].clone()
        };
        acc = (0..=caps[j])
            .map(|i| {
                let tail = lower(i)?;
                let t = term(j, i)?;
                Some(mul(&t, &tail))
            })
            .collect();
    }
    acc.iter().fold(None, sum_opt)
}

/// Table-driven arithmetic for the brute-force enumeration: elements are
/// indices, and polynomials are plain coefficient slices.
struct FlatField {
    q: usize,
    p: u64,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    frob: Vec<u32>,
}

impl FlatField {
    fn new(f: &GaloisField) -> Self {
        let q = f.q() as usize;
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = f.add(Fe(a as u32), Fe(b as u32)).0;
                mul[a * q + b] = f.mul(Fe(a as u32), Fe(b as u32)).0;
            }
        }
        let neg = (0..q).map(|a| f.neg(Fe(a as u32)).0).collect();
        let frob = (0..q).map(|a| f.frobenius(Fe(a as u32)).0).collect();
        Self { q, p: f.p() as u64, add, mul, neg, frob }
    }

    // out = a·b, resized to fit
    fn mul_into(&self, a: &[u32], b: &[u32], out: &mut Vec<u32>) {
        out.clear();
        out.resize(a.len() + b.len() - 1, 0);
        let q = self.q;
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let row = &self.mul[x as usize * q..(x as usize + 1) * q];
            for (j, &y) in b.iter().enumerate() {
                let t = row[y as usize];
                out[i + j] = self.add[out[i + j] as usize * q + t as usize];
            }
        }
    }

    // whether the monic polynomial n is divisible by the monic v
    fn divisible(&self, n: &[u32], v: &[u32], scratch: &mut Vec<u32>) -> bool {
        scratch.clear();
        scratch.extend_from_slice(n);
        let dv = v.len() - 1;
        let q = self.q;
        for top in (dv..scratch.len()).rev() {
            let c = scratch[top];
            if c == 0 {
                continue;
            }
            let nc = self.neg[c as usize] as usize;
            for (k, &vk) in v.iter().enumerate() {
                let idx = top - dv + k;
                scratch[idx] = self.add[scratch[idx] as usize * q + self.mul[nc * q + vk as usize] as usize];
            }
        }
        scratch[..dv.min(scratch.len())].iter().all(|&c| c == 0)
    }

    /// Σ n^m over monic n of degree i prime to v, each term computed directly.
    fn sum_coprime_powers(&self, i: usize, m: u64, v: &Poly) -> Poly {
        let v: Vec<u32> = v.coeffs().iter().map(|c| c.0).collect();
        let q = self.q;
        let mut acc = vec![0u32; i * m as usize + 1];
        let mut n = vec![0u32; i + 1];
        n[i] = 1;
        let mut digits = Vec::new();
        let mut rest = m;
        while rest > 0 {
            digits.push(rest % self.p);
            rest /= self.p;
        }
        let (mut power, mut frob, mut tmp, mut scratch) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        loop {
            if !self.divisible(&n, &v, &mut scratch) {
                // n^m = Π_k (n^{p^k})^{m_k}
                power.clear();
                power.push(1);
                frob.clear();
                frob.extend_from_slice(&n);
                for (k, &digit) in digits.iter().enumerate() {
                    for _ in 0..digit {
                        self.mul_into(&power, &frob, &mut tmp);
                        std::mem::swap(&mut power, &mut tmp);
                    }
                    if k + 1 < digits.len() {
                        tmp.clear();
                        tmp.resize((frob.len() - 1) * self.p as usize + 1, 0);
                        for (j, &c) in frob.iter().enumerate() {
                            tmp[j * self.p as usize] = self.frob[c as usize];
                        }
                        std::mem::swap(&mut frob, &mut tmp);
                    }
                }
                for (a, &c) in acc.iter_mut().zip(&power) {
                    *a = self.add[*a as usize * q + c as usize];
                }
            }
            // advance the lower coefficients
            let mut k = 0;
            loop {
                if k == i {
                    return Poly::from_coeffs(acc.into_iter().map(Fe).collect());
                }
                n[k] += 1;
                if (n[k] as usize) < q {
                    break;
                }
                n[k] = 0;
                k += 1;
            }
        }
    }
}
