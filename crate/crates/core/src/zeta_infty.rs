//! ∞-adic multiple zeta (star) values.
//!
//! At tuples of non-positive integers the values lie in A and are finite
//! chain sums; at positive tuples they are computed as truncated Laurent
//! series in 1/θ.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::algebra::{binomial_mod_p, enumerate_monic, GaloisField, LaurentSeries, MonicFilter, Poly, VPlace};
use crate::error::{Error, Result};
use crate::power_sums::{chain_sum, PowerSums};

/// How the integers of an [`ExponentTuple`] are read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// values m_j ≥ 0 stand for the arguments −m_j
    Negative,
    /// values m_j ≥ 1 are the arguments themselves
    Positive,
    /// values are arbitrary integer arguments (v-adic evaluation)
    Integer,
}

/// A depth-r argument tuple with an explicit reading mode and star flag.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExponentTuple {
    pub values: Vec<BigInt>,
    pub star: bool,
    pub mode: Mode,
}

impl ExponentTuple {
    pub fn new(values: Vec<BigInt>, star: bool, mode: Mode) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("exponent tuple must be nonempty".into()));
        }
        let bad = match mode {
            Mode::Negative => values.iter().any(|m| m.is_negative()),
            Mode::Positive => values.iter().any(|m| !m.is_positive()),
            Mode::Integer => false,
        };
        if bad {
            return Err(Error::InvalidInput(format!(
                "tuple {:?} does not fit mode {mode:?}",
                values.iter().map(|v| v.to_string()).collect::<Vec<_>>()
            )));
        }
        Ok(Self { values, star, mode })
    }

    pub fn negative(ms: &[u64], star: bool) -> Self {
        Self::new(ms.iter().map(|&m| BigInt::from(m)).collect(), star, Mode::Negative).expect("nonempty")
    }

    pub fn integer(ss: &[i64], star: bool) -> Self {
        Self::new(ss.iter().map(|&s| BigInt::from(s)).collect(), star, Mode::Integer).expect("nonempty")
    }

    pub fn depth(&self) -> usize {
        self.values.len()
    }

    /// The m_j as machine integers (Negative and Positive modes).
    pub fn small(&self) -> Result<Vec<u64>> {
        if self.mode == Mode::Integer {
            return Err(Error::InvalidInput("tuple is in integer mode".into()));
        }
        self.values
            .iter()
            .map(|m| m.to_u64().ok_or_else(|| Error::InvalidInput(format!("exponent {m} too large"))))
            .collect()
    }

    /// The zeta arguments s_j.
    pub fn arguments(&self) -> Vec<BigInt> {
        match self.mode {
            Mode::Negative => self.values.iter().map(|m| -m).collect(),
            _ => self.values.clone(),
        }
    }
}

/// ζ_∞(−m_1, …, −m_r) (or ζ*_∞) as the finite chain sum over i_j ≤ m_j.
pub fn zeta_inf_neg(ps: &PowerSums, ms: &[u64], star: bool) -> Poly {
    if ms.is_empty() {
        return Poly::one();
    }
    let f = ps.field();
    let caps: Vec<usize> = ms.iter().map(|&m| m as usize).collect();
    chain_sum(
        &caps,
        star,
        |j, i| {
            let s = ps.s(i, ms[j]);
            (!s.is_zero()).then_some(s)
        },
        |a, b| a.add(b, f),
        |a, b| a.mul(b, f),
    )
    .unwrap_or_else(Poly::zero)
}

/// The inner exponent sum of the recursive expansion:
/// for a_j ranging over `0 <= a_j < m_j` (or `<= m_j` when `inclusive`)
/// with (q−1) | (m_j − a_j), the generator yields the tuple a⃗ with its
/// weight v^{Σa} Π ζ_{<d}(a_j − m_j) Π C(m_j, a_j).
pub(crate) fn weighted_lower_tuples(
    ps: &PowerSums,
    place: &VPlace,
    ms: &[u64],
    inclusive: bool,
) -> Vec<(Vec<u64>, Poly)> {
    let f = ps.field();
    let q1 = f.q() as u64 - 1;
    let d = place.degree();
    let per_coord: Vec<Vec<(u64, Poly)>> = ms
        .iter()
        .map(|&m| {
            let top = if inclusive { m + 1 } else { m };
            (0..top)
                .filter(|a| (m - a) % q1 == 0)
                .filter_map(|a| {
                    let c = binomial_mod_p(m, a, f.p());
                    if c == 0 {
                        return None;
                    }
                    let w = ps
                        .zeta_truncated(d, &[m - a], false)
                        .mul(&place.v().pow(a, f), f)
                        .scale(f.from_int(c as i64), f);
                    (!w.is_zero()).then_some((a, w))
                })
                .collect()
        })
        .collect();
    let mut out: Vec<(Vec<u64>, Poly)> = vec![(Vec::new(), Poly::one())];
    for options in &per_coord {
        let mut next = Vec::with_capacity(out.len() * options.len());
        for (prefix, w) in &out {
            for (a, wa) in options {
                let mut t = prefix.clone();
                t.push(*a);
                next.push((t, w.mul(wa, f)));
            }
        }
        out = next;
    }
    out
}

/// ζ_∞(−m⃗) (or ζ*_∞) through the expansion in ζ_{<d} values and values
/// at strictly smaller tuples, for a monic irreducible v of degree d.
pub fn zeta_inf_neg_recursive(ps: &PowerSums, ms: &[u64], star: bool, place: &VPlace) -> Poly {
    let mut memo = HashMap::new();
    recursive_value(ps, ms, star, place, &mut memo)
}

fn recursive_value(
    ps: &PowerSums,
    ms: &[u64],
    star: bool,
    place: &VPlace,
    memo: &mut HashMap<Vec<u64>, Poly>,
) -> Poly {
    if ms.is_empty() {
        return Poly::one();
    }
    if let Some(v) = memo.get(ms) {
        return v.clone();
    }
    let f = ps.field().clone();
    let d = place.degree();
    let r = ms.len();
    let mut total = Poly::zero();
    for l in 0..=r {
        let tail = ps.zeta_truncated(d, &ms[l..], star);
        if tail.is_zero() {
            continue;
        }
        let mut inner = Poly::zero();
        for (a, w) in weighted_lower_tuples(ps, place, &ms[..l], false) {
            let z = recursive_value(ps, &a, star, place, memo);
            inner.add_assign(&w.mul(&z, &f), &f);
        }
        let term = tail.mul(&inner, &f);
        if l % 2 == 1 {
            total = total.sub(&term, &f);
        } else {
            total.add_assign(&term, &f);
        }
    }
    memo.insert(ms.to_vec(), total.clone());
    total
}

/// S_i(m) = Σ_{deg n = i} n^{−m} in k_∞ to absolute precision `prec`
/// (zero when i·m ≥ prec).
fn s_positive(field: &GaloisField, i: usize, m: u64, prec: i64) -> LaurentSeries {
    let val = i as i64 * m as i64;
    if val >= prec {
        return LaurentSeries::zero(prec);
    }
    let rel = prec - val;
    let mut acc = LaurentSeries::zero(prec);
    for n in enumerate_monic(i, field, MonicFilter::All).expect("no residue filter") {
        let inv = LaurentSeries::from_theta_poly(&n, rel - i as i64)
            .inv(field)
            .expect("monic");
        acc = acc.add(&inv.pow(m, field), field);
    }
    acc.truncate(prec)
}

/// ζ_∞(m_1, …, m_r) (or ζ*_∞) at positive integers, correct for every
/// coefficient of (1/θ)^j with j < `prec`. Chains with Σ i_j m_j ≥ prec are
/// discarded since ord_∞ S_i(m) ≥ i·m.
pub fn zeta_inf_pos(field: &GaloisField, ms: &[u64], star: bool, prec: i64) -> Result<LaurentSeries> {
    if ms.is_empty() || ms.contains(&0) {
        return Err(Error::InvalidInput("positive mode needs a nonempty tuple of m_j >= 1".into()));
    }
    if prec < 1 {
        return Err(Error::InvalidInput("precision must be at least 1".into()));
    }
    let caps: Vec<usize> = ms.iter().map(|&m| ((prec - 1) / m as i64) as usize).collect();
    let mut table: HashMap<(usize, u64), LaurentSeries> = HashMap::new();
    for (j, &m) in ms.iter().enumerate() {
        for i in 0..=caps[j] {
            table.entry((i, m)).or_insert_with(|| s_positive(field, i, m, prec));
        }
    }
    let sum = chain_sum(
        &caps,
        star,
        |j, i| {
            let s = &table[&(i, ms[j])];
            (!s.is_zero()).then(|| s.clone())
        },
        |a, b| a.add(b, field),
        |a, b| a.mul(b, field).truncate(prec),
    );
    Ok(sum.map_or_else(|| LaurentSeries::zero(prec), |s| s.truncate(prec)))
}

/// Lower bound i·m + i(i+1)/2 on ord_∞ S_i(m) for m ≥ 0, from the quadratic
/// growth of the normalized sums Σ (θ^{−i} n)^{−m}. Diagnostic only.
pub fn quadratic_bound_inf(i: u64, m: u64) -> u64 {
    i * m + i * (i + 1) / 2
}
