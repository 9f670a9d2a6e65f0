//! v-adic multiple zeta (star) values.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::algebra::{Poly, VAdic, VPlace};
use crate::error::{Error, Result};
use crate::power_sums::{chain_sum, PowerSums};
use crate::zeta_infty::{weighted_lower_tuples, zeta_inf_neg};

/// Default ceiling on the degree strata searched by [`zeta_v_eval`].
pub const DEFAULT_I_MAX: u32 = 512;

/// ζ_v(−m⃗) (or ζ*_v) exactly in A: the chain sum of S̃_{i_j}(−m_j) over
/// i_j ≤ m_j + d, past which S̃ vanishes.
pub fn zeta_v_neg(ps: &PowerSums, ms: &[u64], star: bool, place: &VPlace) -> Poly {
    if ms.is_empty() {
        return Poly::one();
    }
    let f = ps.field();
    let d = place.degree();
    let caps: Vec<usize> = ms.iter().map(|&m| m as usize + d).collect();
    chain_sum(
        &caps,
        star,
        |j, i| {
            let s = ps.s_tilde(i, ms[j], place);
            (!s.is_zero()).then_some(s)
        },
        |a, b| a.add(b, f),
        |a, b| a.mul(b, f),
    )
    .unwrap_or_else(Poly::zero)
}

/// Certified lower bound (q−1)·Σ_{j=1}^{⌊i/d⌋} max(0, i − jd − 1) for
/// ord_v S̃_i(t), valid for every exponent t.
pub fn term_bound_v(i: u64, place: &VPlace) -> u64 {
    let d = place.degree() as u64;
    let q1 = place.field().q() as u64 - 1;
    let s: u64 = (1..=i / d).map(|j| (i - j * d).saturating_sub(1)).sum();
    q1 * s
}

/// Least I with term_bound_v(I) ≥ level, or an error past `i_max`.
pub fn degree_cap(place: &VPlace, level: u32, i_max: u32) -> Result<usize> {
    (0..=i_max as u64)
        .find(|&i| term_bound_v(i, place) >= level as u64)
        .map(|i| i as usize)
        .ok_or(Error::PrecisionUnreachable { level, i_max })
}

/// Options for [`zeta_v_eval_with`].
#[derive(Clone, Debug)]
pub struct EvalOptions {
    /// σ_j weights (units at least at the target level); `None` means all 1.
    pub sigmas: Option<Vec<VAdic>>,
    pub i_max: u32,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            sigmas: None,
            i_max: DEFAULT_I_MAX,
        }
    }
}

/// ζ_v(s_1, …, s_r) (or ζ*_v) at integer arguments, mod v^level.
pub fn zeta_v_eval(ps: &PowerSums, args: &[BigInt], star: bool, place: &VPlace, level: u32) -> Result<VAdic> {
    zeta_v_eval_with(ps, args, star, place, level, &EvalOptions::default())
}

/// ζ_v((σ_1, s_1), …, (σ_r, s_r)) = Σ σ_1^{−i_1}⋯σ_r^{−i_r} S̃_{i_1}(s_1)⋯
/// mod v^level. Every stratum i at or past the cap has ord_v ≥ level and the
/// other factors are v-integral, so those chains are dropped.
pub fn zeta_v_eval_with(
    ps: &PowerSums,
    args: &[BigInt],
    star: bool,
    place: &VPlace,
    level: u32,
    opts: &EvalOptions,
) -> Result<VAdic> {
    if args.is_empty() {
        return place.one(level);
    }
    let cap = degree_cap(place, level, opts.i_max)?;
    if cap == 0 {
        return place.zero(level);
    }
    let inv_sigmas = match &opts.sigmas {
        None => None,
        Some(s) => {
            if s.len() != args.len() {
                return Err(Error::InvalidInput("one σ per argument required".into()));
            }
            Some(
                s.iter()
                    .map(|x| {
                        if x.level() < level {
                            return Err(Error::InvalidInput("σ known below the target level".into()));
                        }
                        x.reduce_to(level)
                            .inv()
                            .map_err(|_| Error::SigmaNotUnit(x.value().display(place.field()).to_string()))
                    })
                    .collect::<Result<Vec<_>>>()?,
            )
        }
    };
    let r = args.len();
    let mut table: Vec<Vec<Option<VAdic>>> = Vec::with_capacity(r);
    for (j, s) in args.iter().enumerate() {
        let e = -s;
        let mut row = Vec::with_capacity(cap);
        for i in 0..cap {
            let mut x = ps.s_tilde_vadic(i, &e, place, level)?;
            if let Some(inv) = &inv_sigmas {
                x = x.mul(&inv[j].pow_u(i as u64));
            }
            row.push((!x.is_zero()).then_some(x));
        }
        table.push(row);
    }
    let caps = vec![cap - 1; r];
    let sum = chain_sum(&caps, star, |j, i| table[j][i].clone(), |a, b| a.add(b), |a, b| a.mul(b));
    match sum {
        Some(x) => Ok(x),
        None => place.zero(level),
    }
}

/// Σ_{l} (−1)^l ζ^{(⋆)}_{<d}(−m_{l+1}, …) Σ_{a⃗} weight(a⃗)·ζ_∞^{(⋆)}(−a⃗) with
/// 0 ≤ a_j ≤ m_j; `only_touching` keeps just the a⃗ with some a_j = m_j.
fn expansion_v(
    ps: &PowerSums,
    ms: &[u64],
    star: bool,
    place: &VPlace,
    only_touching: bool,
    mut inner: impl FnMut(&[u64]) -> Result<Poly>,
) -> Result<Poly> {
    let f = ps.field().clone();
    let d = place.degree();
    let mut total = Poly::zero();
    for l in 0..=ms.len() {
        let tail = ps.zeta_truncated(d, &ms[l..], star);
        if tail.is_zero() {
            continue;
        }
        let mut acc = Poly::zero();
        for (a, w) in weighted_lower_tuples(ps, place, &ms[..l], true) {
            if only_touching && !a.iter().zip(ms).any(|(x, y)| x == y) {
                continue;
            }
            acc.add_assign(&w.mul(&inner(&a)?, &f), &f);
        }
        let term = tail.mul(&acc, &f);
        total = if l % 2 == 1 { total.sub(&term, &f) } else { total.add(&term, &f) };
    }
    Ok(total)
}

/// ζ_v(−m⃗) (or ζ*_v) from ζ_{<d} values and ∞-adic values at a⃗ ≤ m⃗.
pub fn zeta_v_via_recursion(ps: &PowerSums, ms: &[u64], star: bool, place: &VPlace) -> Poly {
    expansion_v(ps, ms, star, place, false, |a| Ok(zeta_inf_neg(ps, a, star))).expect("infallible")
}

/// Right-hand side of ζ_v(−m⃗) − ζ_∞(−m⃗) = Σ (terms with some a_j = m_j).
pub fn difference_rhs(ps: &PowerSums, ms: &[u64], star: bool, place: &VPlace) -> Poly {
    expansion_v(ps, ms, star, place, true, |a| Ok(zeta_inf_neg(ps, a, star))).expect("infallible")
}

/// Reconstructs ζ_∞(−m⃗) (or ζ*_∞) from v-adic values alone.
///
/// The all-equal term of the difference identity is (−1)^r v^{|m|}·ζ_∞(−m⃗),
/// so ζ_∞(−m⃗)·(1 + (−1)^r v^{|m|}) = ζ_v(−m⃗) − (terms at strictly smaller
/// tuples), solved by exact division in A. `zeta_v` supplies the v-adic
/// values; all-zero tuples are seeded directly.
pub fn infty_from_v(
    ps: &PowerSums,
    ms: &[u64],
    star: bool,
    place: &VPlace,
    zeta_v: &mut dyn FnMut(&[u64]) -> Poly,
) -> Result<Poly> {
    let mut memo = HashMap::new();
    infty_from_v_rec(ps, ms, star, place, zeta_v, &mut memo)
}

fn infty_from_v_rec(
    ps: &PowerSums,
    ms: &[u64],
    star: bool,
    place: &VPlace,
    zeta_v: &mut dyn FnMut(&[u64]) -> Poly,
    memo: &mut HashMap<Vec<u64>, Poly>,
) -> Result<Poly> {
    if ms.is_empty() {
        return Ok(Poly::one());
    }
    if let Some(v) = memo.get(ms) {
        return Ok(v.clone());
    }
    let f = ps.field().clone();
    let r = ms.len();
    let value = if ms.iter().all(|&m| m == 0) {
        if star || r == 1 {
            Poly::one()
        } else {
            Poly::zero()
        }
    } else {
        let total: u64 = ms.iter().sum();
        let mut others = Poly::zero();
        {
            let mut inner = |a: &[u64]| -> Result<Poly> {
                if a == ms {
                    return Ok(Poly::zero());
                }
                infty_from_v_rec(ps, a, star, place, zeta_v, memo)
            };
            // the skipped all-equal term is restored through the divisor below
            let rhs = expansion_v(ps, ms, star, place, true, &mut inner)?;
            others.add_assign(&rhs, &f);
        }
        let vm = place.v().pow(total, &f);
        let divisor = if r.is_multiple_of(2) { Poly::one().add(&vm, &f) } else { Poly::one().sub(&vm, &f) };
        let numerator = zeta_v(ms).sub(&others, &f);
        numerator.exact_div(&divisor, &f).ok_or_else(|| {
            Error::Consistency(format!(
                "ζ_v − lower terms not divisible by 1 ± v^{total} at {ms:?}"
            ))
        })?
    };
    memo.insert(ms.to_vec(), value.clone());
    Ok(value)
}

/// Outcome of a Kummer congruence check.
#[derive(Clone, Debug)]
pub struct KummerReport {
    pub holds: bool,
    pub lhs: VAdic,
    pub rhs: VAdic,
}

/// Checks ζ_v(m⃗) ≡ ζ_v(l⃗) mod v^e for m_i ≡ l_i mod (q^d−1)q^{(e−1)d}.
///
/// Both sides are evaluated at level e+1, where the exponents are generally
/// not congruent modulo the unit group order, and then compared at level e.
/// Evaluating at level e itself would reduce both exponent tuples to the same
/// residues and compare a value with itself.
pub fn kummer_check(
    ps: &PowerSums,
    m: &[BigInt],
    l: &[BigInt],
    star: bool,
    place: &VPlace,
    e: u32,
) -> Result<KummerReport> {
    if e == 0 {
        return Err(Error::InvalidInput("e must be positive".into()));
    }
    if m.len() != l.len() || m.is_empty() {
        return Err(Error::InvalidInput("index tuples must be nonempty and of equal depth".into()));
    }
    let order = BigInt::from(place.unit_group_order(e));
    for (a, b) in m.iter().zip(l) {
        if !(a - b).mod_floor(&order).is_zero() {
            return Err(Error::HypothesisViolated(format!("{a} ≢ {b} mod {order}")));
        }
    }
    let lhs = zeta_v_eval(ps, m, star, place, e + 1)?.reduce_to(e);
    let rhs = zeta_v_eval(ps, l, star, place, e + 1)?.reduce_to(e);
    Ok(KummerReport {
        holds: lhs == rhs,
        lhs,
        rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Fe, GaloisField};

    fn p(coeffs: &[u32]) -> Poly {
        Poly::from_coeffs(coeffs.iter().map(|&c| Fe(c)).collect())
    }

    fn setup(q: u64, v: &[u32]) -> (PowerSums, VPlace) {
        let f = GaloisField::with_order(q).unwrap();
        let pl = VPlace::new(&f, p(v)).unwrap();
        (PowerSums::new(&f), pl)
    }

    #[test]
    fn neg_examples() {
        let (ps, pl) = setup(3, &[0, 1]);
        assert_eq!(zeta_v_neg(&ps, &[1], false, &pl), p(&[1, 2]));
        assert_eq!(zeta_v_neg(&ps, &[2, 1], false, &pl), p(&[2, 0, 0, 2]));
        // S̃_d(0) counts the q^d − 1 ≡ −1 coprime monics of degree d
        assert_eq!(zeta_v_neg(&ps, &[0], false, &pl), Poly::zero());
    }

    #[test]
    fn term_bound_examples() {
        let (_, pl) = setup(3, &[1, 0, 1]);
        assert_eq!(term_bound_v(5, &pl), 4);
        for i in 0..4 {
            assert_eq!(term_bound_v(i, &pl), 0);
        }
        let (_, pl) = setup(2, &[0, 1]);
        assert_eq!(term_bound_v(6, &pl), 10);
        assert_eq!(term_bound_v(2, &pl), 0);
    }

    #[test]
    fn eval_examples() {
        let (ps, pl) = setup(3, &[0, 1]);
        let z = zeta_v_eval(&ps, &[BigInt::from(-1)], false, &pl, 3).unwrap();
        assert_eq!(z.value(), &p(&[1, 2]));
        for level in 1..4 {
            let z = zeta_v_eval(&ps, &[BigInt::from(0)], false, &pl, level).unwrap();
            assert!(z.is_zero());
        }
        let (ps, pl) = setup(2, &[1, 1, 1]);
        let z1 = zeta_v_eval(&ps, &[BigInt::from(1)], false, &pl, 1).unwrap();
        let z2 = zeta_v_eval(&ps, &[BigInt::from(1)], false, &pl, 2).unwrap();
        assert_eq!(z2.reduce_to(1), z1);
    }

    #[test]
    fn recursion_examples() {
        let (ps, pl) = setup(3, &[0, 1]);
        assert_eq!(zeta_v_via_recursion(&ps, &[1], false, &pl), p(&[1, 2]));
        assert_eq!(zeta_v_via_recursion(&ps, &[2, 1], false, &pl), p(&[2, 0, 0, 2]));
        assert_eq!(zeta_v_via_recursion(&ps, &[0], false, &pl), Poly::zero());
    }

    #[test]
    fn infty_from_v_examples() {
        let (ps, pl) = setup(3, &[0, 1]);
        let mut zv = |a: &[u64]| zeta_v_neg(&ps, a, false, &pl);
        assert_eq!(infty_from_v(&ps, &[1], false, &pl, &mut zv).unwrap(), Poly::one());
        assert_eq!(infty_from_v(&ps, &[2, 1], false, &pl, &mut zv).unwrap(), p(&[2]));
        assert_eq!(infty_from_v(&ps, &[0], false, &pl, &mut zv).unwrap(), Poly::one());
    }

    #[test]
    fn kummer_examples() {
        let (ps, pl) = setup(3, &[0, 1]);
        let r = kummer_check(&ps, &[BigInt::from(-1)], &[BigInt::from(-3)], false, &pl, 1).unwrap();
        assert!(r.holds);
        let (ps, pl) = setup(2, &[1, 1, 1]);
        let m = [BigInt::from(-1), BigInt::from(-1)];
        let l = [BigInt::from(-4), BigInt::from(-4)];
        assert!(kummer_check(&ps, &m, &l, false, &pl, 1).unwrap().holds);
        assert!(matches!(
            kummer_check(&ps, &[BigInt::from(1)], &[BigInt::from(2)], false, &pl, 1),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn unreachable_precision() {
        let (ps, pl) = setup(2, &[0, 1]);
        let opts = EvalOptions {
            sigmas: None,
            i_max: 3,
        };
        assert!(matches!(
            zeta_v_eval_with(&ps, &[BigInt::from(1)], false, &pl, 50, &opts),
            Err(Error::PrecisionUnreachable { .. })
        ));
    }
}
