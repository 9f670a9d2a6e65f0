//! Goss multi-measures μ^{σ⃗} and μ*^{σ⃗} on A_v^r and Riemann sums against
//! monomials.

use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::algebra::{enumerate_below, Poly, VAdic, VPlace};
use crate::error::{Error, Result};
use crate::power_sums::PowerSums;
use crate::zeta_infty::zeta_inf_neg;
use crate::zeta_v::{zeta_v_eval_with, EvalOptions};

/// The box (α_1, …, α_r) + v^{e_1}A_v × ⋯ × v^{e_r}A_v.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cylinder {
    pub base: Vec<Poly>,
    pub levels: Vec<u32>,
}

impl Cylinder {
    pub fn uniform(base: Vec<Poly>, e: u32) -> Self {
        let levels = vec![e; base.len()];
        Self { base, levels }
    }
}

/// Measure parameters: weights σ_j given as v-units num/den, the star flag,
/// the place, and the level at which volumes are reported.
#[derive(Clone, Debug)]
pub struct MeasureSpec {
    place: VPlace,
    star: bool,
    work_level: u32,
    sigmas: Vec<VAdic>,
    // inv_powers[j][k] = σ_j^{−k}, grown on demand
    inv_powers: Arc<RwLock<Vec<Vec<VAdic>>>>,
    trivial_sigmas: bool,
}

impl MeasureSpec {
    /// σ_j = num_j / den_j; every numerator and denominator must be prime to v.
    pub fn new(place: &VPlace, sigmas: &[(Poly, Poly)], star: bool, work_level: u32) -> Result<Self> {
        if sigmas.is_empty() {
            return Err(Error::InvalidInput("measure needs at least one σ".into()));
        }
        let f = place.field();
        let mut vs = Vec::with_capacity(sigmas.len());
        for (num, den) in sigmas {
            if num.is_zero() || !place.is_unit(num) || den.is_zero() || !place.is_unit(den) {
                return Err(Error::SigmaNotUnit(format!("{}/{}", num.display(f), den.display(f))));
            }
            vs.push(place.reduce_rational(num, den, work_level)?);
        }
        let one = place.one(work_level)?;
        let inv_powers = vs
            .iter()
            .map(|s| Ok(vec![one.clone(), s.inv()?]))
            .collect::<Result<Vec<_>>>()?;
        let trivial_sigmas = sigmas.iter().all(|(n, d)| n.is_one() && d.is_one());
        Ok(Self {
            place: place.clone(),
            star,
            work_level,
            sigmas: vs,
            inv_powers: Arc::new(RwLock::new(inv_powers)),
            trivial_sigmas,
        })
    }

    /// σ⃗ = (1, …, 1).
    pub fn trivial(place: &VPlace, r: usize, star: bool, work_level: u32) -> Result<Self> {
        Self::new(place, &vec![(Poly::one(), Poly::one()); r], star, work_level)
    }

    pub fn depth(&self) -> usize {
        self.sigmas.len()
    }

    pub fn place(&self) -> &VPlace {
        &self.place
    }

    pub fn star(&self) -> bool {
        self.star
    }

    pub fn work_level(&self) -> u32 {
        self.work_level
    }

    pub fn sigmas(&self) -> &[VAdic] {
        &self.sigmas
    }

    pub fn has_trivial_sigmas(&self) -> bool {
        self.trivial_sigmas
    }

    fn sigma_pow_neg(&self, j: usize, k: usize) -> VAdic {
        if let Some(x) = self.inv_powers.read().unwrap()[j].get(k) {
            return x.clone();
        }
        let mut table = self.inv_powers.write().unwrap();
        let row = &mut table[j];
        while row.len() <= k {
            let next = row[row.len() - 1].mul(&row[1]);
            row.push(next);
        }
        row[k].clone()
    }
}

/// What the closed forms need to know about a canonical representative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueClass {
    pub degree: Option<usize>,
    pub monic: bool,
}

impl ResidueClass {
    pub fn of(a: &Poly) -> Self {
        Self {
            degree: a.degree(),
            monic: a.is_monic(),
        }
    }
}

/// Volume of a uniform-level cylinder of level e whose coordinates have the
/// given classes (degrees below d·e).
///
/// Non-star: [α⃗ monic, degrees strictly decreasing]·σ^{−deg α⃗}
/// + [α_2.. monic, strictly decreasing]·σ_1^{−de}σ_2^{−deg α_2}⋯.
///
/// Star: with C_i saying α_i, …, α_r are monic of weakly decreasing degree
/// (C_{r+1} vacuous) and i the least index with C_i,
/// Σ_{j=i}^{r+1} σ_1^{−de}⋯σ_{j−1}^{−de} σ_j^{−deg α_j}⋯σ_r^{−deg α_r}.
pub fn mu_classes(spec: &MeasureSpec, classes: &[ResidueClass], e: u32) -> VAdic {
    let r = classes.len();
    let de = spec.place.degree() * e as usize;
    let level = spec.work_level;
    let one = spec.place.one(level).expect("level checked at construction");
    let zero = spec.place.zero(level).expect("level checked at construction");
    let deg_of = |j: usize| classes[j].degree.expect("monic classes are nonzero");
    // monomial with σ_k^{−de} for k < j and σ_k^{−deg α_k} for k ≥ j
    let weight = |j: usize| -> VAdic {
        if spec.trivial_sigmas {
            return one.clone();
        }
        let mut w = one.clone();
        for k in 0..r {
            let exp = if k < j { de } else { deg_of(k) };
            w = w.mul(&spec.sigma_pow_neg(k, exp));
        }
        w
    };
    if spec.star {
        // least i (0-based) such that classes[i..] are monic, weakly decreasing
        let mut i = r;
        while i > 0 {
            let k = i - 1;
            let ok = classes[k].monic && (k + 1 == r || classes[k].degree >= classes[k + 1].degree);
            if !ok {
                break;
            }
            i = k;
        }
        let mut total = zero;
        for j in i..=r {
            total = total.add(&weight(j));
        }
        total
    } else {
        let strict_monic_from = |start: usize| {
            (start..r).all(|k| classes[k].monic && (k + 1 == r || classes[k].degree > classes[k + 1].degree))
        };
        let mut total = zero;
        if strict_monic_from(1) {
            total = total.add(&weight(1));
            if strict_monic_from(0) {
                total = total.add(&weight(0));
            }
        }
        total
    }
}

fn check_cylinder(spec: &MeasureSpec, c: &Cylinder) -> Result<()> {
    if c.base.len() != spec.depth() || c.levels.len() != spec.depth() {
        return Err(Error::InvalidInput(format!(
            "cylinder depth {} does not match measure depth {}",
            c.base.len(),
            spec.depth()
        )));
    }
    let d = spec.place.degree();
    for (a, &e) in c.base.iter().zip(&c.levels) {
        if e == 0 {
            return Err(Error::InvalidInput("cylinder levels must be positive".into()));
        }
        if let Some(k) = a.degree() {
            if k >= e as usize * d {
                return Err(Error::NonCanonicalRepresentative { rep: k, bound: e as usize * d });
            }
        }
    }
    Ok(())
}

/// μ(c) (or μ*(c)) at the spec's work level. Cylinders of unequal levels
/// are refined to the largest level and summed.
pub fn mu_cylinder(spec: &MeasureSpec, c: &Cylinder) -> Result<VAdic> {
    check_cylinder(spec, c)?;
    let classes: Vec<ResidueClass> = c.base.iter().map(ResidueClass::of).collect();
    mu_refined(spec, &classes, &c.levels)
}

/// Classes of the lifts α + v^e·g to level e + steps (g ≠ 0, deg g < d·steps)
/// with their counts mod p. Such a lift has degree d·e + deg g and is monic
/// iff g is; there are q^k monic and (q−2)q^k non-monic g of degree k.
fn lift_classes(spec: &MeasureSpec, e: u32, steps: u32) -> Vec<(ResidueClass, u64)> {
    let f = spec.place.field();
    let (p, q) = (f.p() as u64, f.q() as u64);
    let top = spec.place.degree() * e as usize;
    let mut out = Vec::new();
    let mut qk = 1;
    for k in 0..spec.place.degree() * steps as usize {
        let others = (q - 2) % p * qk % p;
        out.push((ResidueClass { degree: Some(top + k), monic: true }, qk));
        out.push((ResidueClass { degree: Some(top + k), monic: false }, others));
        qk = qk * (q % p) % p;
    }
    out.retain(|&(_, n)| n != 0);
    out
}

fn mu_refined(spec: &MeasureSpec, classes: &[ResidueClass], levels: &[u32]) -> Result<VAdic> {
    let e_max = *levels.iter().max().unwrap();
    if levels.iter().all(|&e| e == e_max) {
        return Ok(mu_classes(spec, classes, e_max));
    }
    let f = spec.place.field();
    let p = f.p() as u64;
    let per_coord: Vec<Vec<(ResidueClass, u64)>> = classes
        .iter()
        .zip(levels)
        .map(|(&a, &e)| {
            let mut v = vec![(a, 1)];
            v.extend(lift_classes(spec, e, e_max - e));
            v
        })
        .collect();
    let mut total = spec.place.zero(spec.work_level)?;
    for_each_product(&per_coord, p, &mut |classes, mult| {
        if mult % p != 0 {
            let mu = mu_classes(spec, classes, e_max);
            total = total.add(&mu.scale(f.from_int((mult % p) as i64)));
        }
    });
    Ok(total)
}

fn for_each_product(per_coord: &[Vec<(ResidueClass, u64)>], p: u64, visit: &mut dyn FnMut(&[ResidueClass], u64)) {
    fn go(
        per_coord: &[Vec<(ResidueClass, u64)>],
        p: u64,
        acc: &mut Vec<ResidueClass>,
        mult: u64,
        visit: &mut dyn FnMut(&[ResidueClass], u64),
    ) {
        if acc.len() == per_coord.len() {
            visit(acc, mult);
            return;
        }
        for &(c, m) in &per_coord[acc.len()] {
            acc.push(c);
            go(per_coord, p, acc, mult * m % p, visit);
            acc.pop();
        }
    }
    go(per_coord, p, &mut Vec::new(), 1, visit);
}

/// Outcome of an additivity check.
#[derive(Clone, Debug)]
pub struct AdditivityReport {
    pub holds: bool,
    pub parent: VAdic,
    pub children: VAdic,
}

/// Refines coordinate `j` of `c` one level and compares the parent volume
/// with the sum of the q^d children.
pub fn additivity_check(spec: &MeasureSpec, c: &Cylinder, j: usize) -> Result<AdditivityReport> {
    check_cylinder(spec, c)?;
    if j >= c.base.len() {
        return Err(Error::InvalidInput(format!("coordinate {j} out of range")));
    }
    let parent = mu_cylinder(spec, c)?;
    let f = spec.place.field();
    let mut classes: Vec<ResidueClass> = c.base.iter().map(ResidueClass::of).collect();
    let mut levels = c.levels.clone();
    levels[j] += 1;
    // child g = 0 keeps α_j; the others are grouped by class
    let mut children = mu_refined(spec, &classes, &levels)?;
    for (class, n) in lift_classes(spec, c.levels[j], 1) {
        classes[j] = class;
        let mu = mu_refined(spec, &classes, &levels)?;
        children = children.add(&mu.scale(f.from_int(n as i64)));
    }
    Ok(AdditivityReport {
        holds: parent == children,
        parent,
        children,
    })
}

/// Integration domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Domain {
    /// all of A_v^r
    Full,
    /// (A_v ∖ 𝔪_v)^r
    Units,
}

/// Σ_x x_1^{t_1}⋯x_r^{t_r}·μ(x⃗ + 𝔪_v^e × ⋯) over canonical residues x_j of
/// degree < d·e (units only for [`Domain::Units`]), at the work level.
pub fn riemann_integrate(spec: &MeasureSpec, t: &[BigInt], domain: Domain, e: u32) -> Result<VAdic> {
    if t.len() != spec.depth() {
        return Err(Error::InvalidInput("one exponent per coordinate required".into()));
    }
    if e == 0 {
        return Err(Error::InvalidInput("level e must be positive".into()));
    }
    if domain == Domain::Full && t.iter().any(|x| x.is_negative()) {
        return Err(Error::NegativeExponentOnFullDomain);
    }
    let place = &spec.place;
    let f = place.field();
    let level = spec.work_level;
    let bound = place.degree() * e as usize;
    // per coordinate: Σ x^t over residues in each class
    let mut per_coord: Vec<Vec<(ResidueClass, VAdic)>> = Vec::new();
    for tj in t {
        let mut sums: std::collections::BTreeMap<ResidueClass, VAdic> = Default::default();
        for x in enumerate_below(bound, f) {
            let unit = place.is_unit(&x);
            if domain == Domain::Units && !unit {
                continue;
            }
            let xv = place.reduce(&x, level)?;
            let term = if domain == Domain::Units {
                xv.pow(tj, level)?
            } else {
                xv.pow_u(tj.to_u64().ok_or_else(|| Error::InvalidInput(format!("exponent {tj} too large")))?)
            };
            let slot = sums.entry(ResidueClass::of(&x)).or_insert_with(|| place.zero(level).unwrap());
            *slot = slot.add(&term);
        }
        per_coord.push(sums.into_iter().collect());
    }
    let mut total = place.zero(level)?;
    let mut classes = Vec::with_capacity(t.len());
    sum_products(spec, &per_coord, e, &mut classes, place.one(level)?, &mut total);
    Ok(total)
}

fn sum_products(
    spec: &MeasureSpec,
    per_coord: &[Vec<(ResidueClass, VAdic)>],
    e: u32,
    classes: &mut Vec<ResidueClass>,
    weight: VAdic,
    total: &mut VAdic,
) {
    if classes.len() == per_coord.len() {
        let mu = mu_classes(spec, classes, e);
        *total = total.add(&mu.mul(&weight));
        return;
    }
    for (c, s) in &per_coord[classes.len()] {
        if s.is_zero() {
            continue;
        }
        classes.push(*c);
        sum_products(spec, per_coord, e, classes, weight.mul(s), total);
        classes.pop();
    }
}

/// The Riemann sum for μ^{1,…,1} (or μ*) on the full domain, exactly in A:
/// Σ_x x_1^{m_1}⋯x_r^{m_r}·μ(x⃗ + 𝔪_v^e × ⋯) with the volumes taken in F_p.
pub fn riemann_sum_exact(ps: &PowerSums, place: &VPlace, ms: &[u64], star: bool, e: u32) -> Result<Poly> {
    if ms.is_empty() || e == 0 {
        return Err(Error::InvalidInput("need a nonempty tuple and e >= 1".into()));
    }
    let f = ps.field();
    let spec = MeasureSpec::trivial(place, ms.len(), star, 1)?;
    let bound = place.degree() * e as usize;
    let mut per_coord: Vec<Vec<(ResidueClass, Poly)>> = Vec::new();
    for &m in ms {
        let mut sums: std::collections::BTreeMap<ResidueClass, Poly> = Default::default();
        for x in enumerate_below(bound, f) {
            let slot = sums.entry(ResidueClass::of(&x)).or_default();
            slot.add_assign(&x.pow(m, f), f);
        }
        per_coord.push(sums.into_iter().collect());
    }
    // with σ = 1 every volume is an element of F_p, read off at level 1
    let mut total = Poly::zero();
    let mut stack: Vec<(usize, Vec<ResidueClass>, Poly)> = vec![(0, Vec::new(), Poly::one())];
    while let Some((j, classes, w)) = stack.pop() {
        if j == ms.len() {
            let mu = mu_classes(&spec, &classes, e);
            let c = mu.value().coeff(0);
            total.add_assign(&w.scale(c, f), f);
            continue;
        }
        for (c, s) in &per_coord[j] {
            if s.is_zero() {
                continue;
            }
            let mut next = classes.clone();
            next.push(*c);
            stack.push((j + 1, next, w.mul(s, f)));
        }
    }
    Ok(total)
}

/// Which integral expression [`integral_check`] verifies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IntegralKind {
    /// ζ_∞(−m⃗) = ∫_{A_v^r} x⃗^{m⃗} dμ^{1,…,1}; the tuple holds the m_j ≥ 0
    InfNeg,
    /// ζ_v((σ_1, s_1), …) = ∫_{(A_v∖𝔪_v)^r} x⃗^{−s⃗} dμ^{σ⃗}; the tuple holds
    /// the arguments s_j
    VUnits,
}

/// One step of an integral check.
#[derive(Clone, Debug)]
pub struct IntegralStep {
    pub e: u32,
    /// whether this step is asserted (INF_NEG only asserts past the threshold)
    pub asserted: bool,
    pub holds: bool,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug)]
pub struct IntegralReport {
    pub holds: bool,
    pub steps: Vec<IntegralStep>,
}

/// Compares Riemann sums along `e_schedule` with the zeta value.
///
/// INF_NEG asserts exact equality in A for every e with d·e ≥ max m_j + 2.
/// V_UNITS asserts agreement mod v^{E(e)} with E(e) = min(e, work level),
/// and reports an exhausted schedule if E never reaches the work level.
pub fn integral_check(
    ps: &PowerSums,
    kind: IntegralKind,
    tuple: &[BigInt],
    spec: &MeasureSpec,
    e_schedule: &[u32],
) -> Result<IntegralReport> {
    let place = spec.place();
    let f = place.field();
    if tuple.len() != spec.depth() {
        return Err(Error::InvalidInput("tuple depth does not match the measure".into()));
    }
    let mut steps = Vec::new();
    match kind {
        IntegralKind::InfNeg => {
            if !spec.has_trivial_sigmas() {
                return Err(Error::InvalidInput("INF_NEG needs σ = (1, …, 1)".into()));
            }
            let ms = tuple
                .iter()
                .map(|m| m.to_u64().ok_or_else(|| Error::InvalidInput(format!("INF_NEG needs m_j >= 0, got {m}"))))
                .collect::<Result<Vec<_>>>()?;
            let target = zeta_inf_neg(ps, &ms, spec.star());
            let threshold = ms.iter().max().unwrap() + 2;
            for &e in e_schedule {
                let sum = riemann_sum_exact(ps, place, &ms, spec.star(), e)?;
                let asserted = (place.degree() as u64) * e as u64 >= threshold;
                steps.push(IntegralStep {
                    e,
                    asserted,
                    holds: sum == target,
                    lhs: sum.display(f).to_string(),
                    rhs: target.display(f).to_string(),
                });
            }
            if !steps.iter().any(|s| s.asserted) {
                let needed = threshold.div_ceil(place.degree() as u64) as u32;
                return Err(Error::ScheduleExhausted(needed));
            }
        }
        IntegralKind::VUnits => {
            let exps: Vec<BigInt> = tuple.iter().map(|s| -s).collect();
            let opts = EvalOptions {
                sigmas: Some(spec.sigmas().to_vec()),
                ..EvalOptions::default()
            };
            for &e in e_schedule {
                let level = e.min(spec.work_level());
                let sum = riemann_integrate(spec, &exps, Domain::Units, e)?.reduce_to(level);
                let z = zeta_v_eval_with(ps, tuple, spec.star(), place, level, &opts)?;
                steps.push(IntegralStep {
                    e,
                    asserted: true,
                    holds: sum == z,
                    lhs: sum.to_string(),
                    rhs: z.to_string(),
                });
            }
            let reached = e_schedule.iter().map(|&e| e.min(spec.work_level())).max().unwrap_or(0);
            if reached < spec.work_level() {
                return Err(Error::ScheduleExhausted(spec.work_level()));
            }
        }
    }
    Ok(IntegralReport {
        holds: steps.iter().filter(|s| s.asserted).all(|s| s.holds),
        steps,
    })
}
