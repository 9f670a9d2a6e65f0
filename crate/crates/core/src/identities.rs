//! Verifiers for the identities between ∞-adic values, v-adic values and
//! the multi-measures, and a configurable suite running them over grids.

use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::json::{laurent_to_json, poly_to_json, vadic_to_json, FieldSpec};
use crate::algebra::{enumerate_below, GaloisField, LaurentSeries, Poly, VPlace};
use crate::error::{Error, Result};
use crate::measures::{additivity_check, integral_check, Cylinder, IntegralKind, MeasureSpec};
use crate::power_sums::PowerSums;
use crate::zeta_infty::{zeta_inf_neg, zeta_inf_neg_recursive, zeta_inf_pos, ExponentTuple, Mode};
use crate::zeta_v::{
    degree_cap, difference_rhs, infty_from_v, kummer_check, term_bound_v, zeta_v_eval, zeta_v_neg,
    zeta_v_via_recursion, DEFAULT_I_MAX,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witnesses {
    pub lhs: Value,
    pub rhs: Value,
}

/// Machine-readable outcome of one verifier run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub identity: String,
    pub params: Value,
    pub holds: bool,
    pub witnesses: Witnesses,
    /// wall time, only filled in when timing is requested
    pub elapsed_ms: Option<u64>,
}

impl Report {
    fn new(identity: &str, params: Value, holds: bool, lhs: Value, rhs: Value) -> Self {
        Self {
            identity: identity.to_string(),
            params,
            holds,
            witnesses: Witnesses { lhs, rhs },
            elapsed_ms: None,
        }
    }

    fn failed(identity: &str, params: Value, err: &Error) -> Self {
        Self::new(identity, params, false, json!({ "error": err.to_string() }), json!(null))
    }
}

fn place_json(place: &VPlace) -> Value {
    poly_to_json(place.v(), place.field())
}

fn tuple_json(values: &[BigInt]) -> Value {
    Value::Array(
        values
            .iter()
            .map(|v| v.to_i64().map_or_else(|| json!(v.to_string()), |x| json!(x)))
            .collect(),
    )
}

/// Where the orthogonality sum is evaluated.
#[derive(Clone, Debug)]
pub enum OrthoTarget {
    /// ∞-adic: exact for negative tuples, to `precision` for positive ones
    Infinity { precision: Option<i64> },
    /// v-adic: exact in A for negative tuples, mod v^level for integer tuples
    Place { place: VPlace, level: Option<u32> },
}

/// Σ_{l=0}^{r} (−1)^l ζ(s_r, …, s_{r−l+1})·ζ*(s_1, …, s_{r−l}).
///
/// With `reversed = false` the non-star factor is taken as ζ(s_{r−l+1}, …, s_r)
/// instead; that variant is kept for diagnosis and fails at asymmetric tuples.
pub fn orthogonality_defect(
    ps: &PowerSums,
    tuple: &ExponentTuple,
    target: &OrthoTarget,
    reversed: bool,
) -> Result<Report> {
    let r = tuple.depth();
    let f = ps.field();
    let split = |l: usize, vals: &[BigInt]| -> (Vec<BigInt>, Vec<BigInt>) {
        let mut tail: Vec<BigInt> = vals[r - l..].to_vec();
        if reversed {
            tail.reverse();
        }
        (tail, vals[..r - l].to_vec())
    };
    let sign = |l: usize| l % 2 == 1;
    let mut params = json!({
        "arguments": tuple_json(&tuple.arguments()),
        "star": tuple.star,
        "reversed": reversed,
    });
    let defect: Value;
    let holds: bool;
    match (target, tuple.mode) {
        (OrthoTarget::Infinity { .. }, Mode::Negative) | (OrthoTarget::Place { .. }, Mode::Negative) => {
            let ms = tuple.small()?;
            let eval = |a: &[u64], star: bool| -> Poly {
                if a.is_empty() {
                    return Poly::one();
                }
                match target {
                    OrthoTarget::Infinity { .. } => zeta_inf_neg(ps, a, star),
                    OrthoTarget::Place { place, .. } => zeta_v_neg(ps, a, star, place),
                }
            };
            let small: Vec<BigInt> = ms.iter().map(|&m| BigInt::from(m)).collect();
            let mut acc = Poly::zero();
            for l in 0..=r {
                let (tail, head) = split(l, &small);
                let to_u = |v: &[BigInt]| v.iter().map(|x| u64::try_from(x).unwrap()).collect::<Vec<_>>();
                let term = eval(&to_u(&tail), false).mul(&eval(&to_u(&head), true), f);
                acc = if sign(l) { acc.sub(&term, f) } else { acc.add(&term, f) };
            }
            holds = acc.is_zero();
            defect = poly_to_json(&acc, f);
        }
        (OrthoTarget::Infinity { precision }, Mode::Positive) => {
            let n = precision.ok_or_else(|| Error::InvalidInput("positive tuples need a precision".into()))?;
            let ms = tuple.small()?;
            let eval = |a: &[BigInt], star: bool| -> Result<LaurentSeries> {
                if a.is_empty() {
                    return Ok(LaurentSeries::one(n));
                }
                let a: Vec<u64> = a.iter().map(|x| u64::try_from(x).unwrap()).collect();
                zeta_inf_pos(f, &a, star, n)
            };
            let vals: Vec<BigInt> = ms.iter().map(|&m| BigInt::from(m)).collect();
            let mut acc = LaurentSeries::zero(n);
            for l in 0..=r {
                let (tail, head) = split(l, &vals);
                let term = eval(&tail, false)?.mul(&eval(&head, true)?, f);
                acc = if sign(l) { acc.sub(&term, f) } else { acc.add(&term, f) };
            }
            holds = acc.agrees_below(&LaurentSeries::zero(n), n);
            defect = laurent_to_json(&acc, f);
            params["precision"] = json!(n);
        }
        (OrthoTarget::Place { place, level }, Mode::Integer) => {
            let level = level.ok_or_else(|| Error::InvalidInput("integer tuples need a level".into()))?;
            let eval = |a: &[BigInt], star: bool| zeta_v_eval(ps, a, star, place, level);
            let mut acc = place.zero(level)?;
            for l in 0..=r {
                let (tail, head) = split(l, &tuple.values);
                let term = eval(&tail, false)?.mul(&eval(&head, true)?);
                acc = if sign(l) { acc.sub(&term) } else { acc.add(&term) };
            }
            holds = acc.is_zero();
            defect = vadic_to_json(&acc);
            params["level"] = json!(level);
        }
        (OrthoTarget::Infinity { .. }, Mode::Integer) => {
            return Err(Error::InvalidInput(
                "∞-adic orthogonality needs a negative or positive tuple".into(),
            ));
        }
        (OrthoTarget::Place { .. }, Mode::Positive) => {
            return Err(Error::InvalidInput("v-adic orthogonality takes integer tuples".into()));
        }
    }
    match target {
        OrthoTarget::Infinity { .. } => params["place"] = json!("inf"),
        OrthoTarget::Place { place, .. } => params["place"] = place_json(place),
    }
    Ok(Report::new("orthogonality", params, holds, defect, json!(0)))
}

/// ζ_v(−m) = (1 − v^m)·ζ_∞(−m), exactly in A.
pub fn interpolation_check(ps: &PowerSums, m: u64, place: &VPlace) -> Report {
    let f = ps.field();
    let lhs = zeta_v_neg(ps, &[m], false, place);
    let factor = Poly::one().sub(&place.v().pow(m, f), f);
    let rhs = factor.mul(&zeta_inf_neg(ps, &[m], false), f);
    Report::new(
        "interpolation",
        json!({ "m": m, "place": place_json(place) }),
        lhs == rhs,
        poly_to_json(&lhs, f),
        poly_to_json(&rhs, f),
    )
}

/// ζ_v(−m⃗) − ζ_∞(−m⃗) against the sum over the lower tuples touching m⃗.
pub fn difference_identity_check(ps: &PowerSums, ms: &[u64], place: &VPlace, star: bool) -> Report {
    let f = ps.field();
    let lhs = zeta_v_neg(ps, ms, star, place).sub(&zeta_inf_neg(ps, ms, star), f);
    let rhs = difference_rhs(ps, ms, star, place);
    Report::new(
        "difference",
        json!({ "tuple": ms, "star": star, "place": place_json(place) }),
        lhs == rhs,
        poly_to_json(&lhs, f),
        poly_to_json(&rhs, f),
    )
}

/// The ∞-adic recursion in terms of truncated sums and lower values.
pub fn recursive_inf_check(ps: &PowerSums, ms: &[u64], place: &VPlace, star: bool) -> Report {
    let f = ps.field();
    let lhs = zeta_inf_neg_recursive(ps, ms, star, place);
    let rhs = zeta_inf_neg(ps, ms, star);
    Report::new(
        "recursive_inf",
        json!({ "tuple": ms, "star": star, "place": place_json(place) }),
        lhs == rhs,
        poly_to_json(&lhs, f),
        poly_to_json(&rhs, f),
    )
}

/// The v-adic value from ∞-adic values at the lower tuples.
pub fn recursive_v_check(ps: &PowerSums, ms: &[u64], place: &VPlace, star: bool) -> Report {
    let f = ps.field();
    let lhs = zeta_v_via_recursion(ps, ms, star, place);
    let rhs = zeta_v_neg(ps, ms, star, place);
    Report::new(
        "recursive_v",
        json!({ "tuple": ms, "star": star, "place": place_json(place) }),
        lhs == rhs,
        poly_to_json(&lhs, f),
        poly_to_json(&rhs, f),
    )
}

/// ζ_∞(−m⃗) rebuilt from v-adic values only.
pub fn infty_from_v_check(ps: &PowerSums, ms: &[u64], place: &VPlace, star: bool) -> Report {
    let f = ps.field();
    let params = json!({ "tuple": ms, "star": star, "place": place_json(place) });
    let mut zv = |a: &[u64]| zeta_v_neg(ps, a, star, place);
    match infty_from_v(ps, ms, star, place, &mut zv) {
        Ok(lhs) => {
            let rhs = zeta_inf_neg(ps, ms, star);
            Report::new("infty_from_v", params, lhs == rhs, poly_to_json(&lhs, f), poly_to_json(&rhs, f))
        }
        Err(e) => Report::failed("infty_from_v", params, &e),
    }
}

/// ord_v S̃_i(s) ≥ min(term_bound_v(i), level) for 0 ≤ i ≤ `i_top`.
pub fn term_bound_check(ps: &PowerSums, s: &BigInt, place: &VPlace, level: u32, i_top: usize) -> Report {
    let params = json!({ "s": s.to_string(), "level": level, "i_top": i_top, "place": place_json(place) });
    let mut ords = Vec::new();
    let mut bounds = Vec::new();
    for i in 0..=i_top {
        match ps.s_tilde_vadic(i, &-s, place, level) {
            Ok(x) => ords.push(x.valuation()),
            Err(e) => return Report::failed("term_bound", params, &e),
        }
        bounds.push(term_bound_v(i as u64, place).min(level as u64) as u32);
    }
    let holds = ords.iter().zip(&bounds).all(|(o, b)| o >= b);
    Report::new("term_bound", params, holds, json!(ords), json!(bounds))
}

fn kummer_report(ps: &PowerSums, m: &[BigInt], l: &[BigInt], star: bool, place: &VPlace, e: u32) -> Report {
    let params = json!({
        "m": m.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "l": l.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "star": star,
        "e": e,
        "place": place_json(place),
    });
    match kummer_check(ps, m, l, star, place, e) {
        Ok(k) => Report::new("kummer", params, k.holds, vadic_to_json(&k.lhs), vadic_to_json(&k.rhs)),
        Err(err) => Report::failed("kummer", params, &err),
    }
}

fn additivity_report(spec: &MeasureSpec, c: &Cylinder, j: usize, sigma: &str) -> Report {
    let f = spec.place().field();
    let params = json!({
        "base": c.base.iter().map(|a| poly_to_json(a, f)).collect::<Vec<_>>(),
        "levels": c.levels,
        "coordinate": j,
        "star": spec.star(),
        "sigma": sigma,
        "place": place_json(spec.place()),
    });
    match additivity_check(spec, c, j) {
        Ok(a) => Report::new("additivity", params, a.holds, vadic_to_json(&a.parent), vadic_to_json(&a.children)),
        Err(e) => Report::failed("additivity", params, &e),
    }
}

fn integral_report(ps: &PowerSums, kind: IntegralKind, tuple: &[BigInt], spec: &MeasureSpec, schedule: &[u32]) -> Report {
    let params = json!({
        "kind": kind,
        "tuple": tuple_json(tuple),
        "star": spec.star(),
        "schedule": schedule,
        "work_level": spec.work_level(),
        "place": place_json(spec.place()),
    });
    match integral_check(ps, kind, tuple, spec, schedule) {
        Ok(rep) => {
            let lhs: Vec<_> = rep.steps.iter().map(|s| json!({"e": s.e, "asserted": s.asserted, "value": s.lhs})).collect();
            let rhs: Vec<_> = rep.steps.iter().map(|s| json!({"e": s.e, "value": s.rhs})).collect();
            Report::new("integral", params, rep.holds, json!(lhs), json!(rhs))
        }
        Err(e) => Report::failed("integral", params, &e),
    }
}

/// Positive-tuple orthogonality parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PositiveGrid {
    pub max_depth: usize,
    pub max_exponent: u64,
    pub precision: i64,
}

/// Measure parameters for additivity sweeps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureGrid {
    pub max_depth: usize,
    pub max_level: u32,
    pub work_level: u32,
}

/// Integral-expression parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegralGrid {
    pub max_depth: usize,
    /// m_j ≤ this for INF_NEG
    pub max_exponent: u64,
    /// |s_j| ≤ this for V_UNITS
    pub max_argument: i64,
    pub schedule: Vec<u32>,
    pub work_level: u32,
}

fn default_levels() -> Vec<u32> {
    vec![1, 2]
}

fn default_kummer_pairs() -> usize {
    100
}

/// One field with its places and grid bounds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    /// the field order; alternatively give `field`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldSpec>,
    /// each place as coefficient indices lowest first, e.g. [0, 1] for θ
    pub places: Vec<Vec<u32>>,
    pub max_depth: usize,
    pub max_exponent: u64,
    /// v-adic levels for integer-tuple orthogonality and the Kummer sweep
    #[serde(default = "default_levels")]
    pub levels: Vec<u32>,
    /// |s_j| bound for integer-tuple orthogonality
    #[serde(default)]
    pub max_argument: i64,
    #[serde(default = "default_kummer_pairs")]
    pub kummer_pairs: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positive: Option<PositiveGrid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<MeasureGrid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integral: Option<IntegralGrid>,
}

impl GridConfig {
    pub fn build_field(&self) -> Result<GaloisField> {
        match (&self.q, &self.field) {
            (Some(q), None) => GaloisField::with_order(*q),
            (None, Some(spec)) => spec.build(),
            _ => Err(Error::Config("each grid needs exactly one of `q` or `field`".into())),
        }
    }
}

/// Suite configuration. Report order follows the order of grids, places
/// and parameters here, whatever the number of worker threads.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
    #[serde(default)]
    pub timing: bool,
    /// restricts the run to these identity names
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identities: Option<Vec<String>>,
    #[serde(default)]
    pub grids: Vec<GridConfig>,
}

pub const IDENTITY_NAMES: [&str; 10] = [
    "orthogonality",
    "interpolation",
    "difference",
    "recursive_inf",
    "recursive_v",
    "infty_from_v",
    "kummer",
    "term_bound",
    "additivity",
    "integral",
];

impl Default for SuiteConfig {
    fn default() -> Self {
        let grid = |q: u64, places: Vec<Vec<u32>>| GridConfig {
            q: Some(q),
            field: None,
            places,
            max_depth: 2,
            max_exponent: 3,
            levels: default_levels(),
            max_argument: 2,
            kummer_pairs: default_kummer_pairs(),
            positive: Some(PositiveGrid {
                max_depth: 2,
                max_exponent: 2,
                precision: 8,
            }),
            measure: Some(MeasureGrid {
                max_depth: 2,
                max_level: 1,
                work_level: 2,
            }),
            integral: Some(IntegralGrid {
                max_depth: 2,
                max_exponent: 2,
                max_argument: 2,
                schedule: vec![1, 2, 3],
                work_level: 2,
            }),
        };
        Self {
            seed: 0,
            jobs: None,
            timing: false,
            identities: None,
            grids: vec![
                grid(2, vec![vec![0, 1], vec![1, 1, 1]]),
                grid(3, vec![vec![0, 1], vec![1, 0, 1]]),
                grid(4, vec![vec![0, 1], vec![2, 1, 1]]),
            ],
        }
    }
}

/// All tuples of depth 1..=max_depth with entries in `values`, depth-major.
pub fn tuples<T: Clone>(values: &[T], max_depth: usize) -> Vec<Vec<T>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<T>> = vec![Vec::new()];
    for _ in 0..max_depth {
        layer = layer
            .iter()
            .flat_map(|t| {
                values.iter().map(move |v| {
                    let mut t = t.clone();
                    t.push(v.clone());
                    t
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

#[derive(Clone)]
enum Task {
    Orthogonality(Arc<PowerSums>, ExponentTuple, OrthoTarget),
    Interpolation(Arc<PowerSums>, u64, VPlace),
    Difference(Arc<PowerSums>, Vec<u64>, VPlace, bool),
    RecursiveInf(Arc<PowerSums>, Vec<u64>, VPlace, bool),
    RecursiveV(Arc<PowerSums>, Vec<u64>, VPlace, bool),
    InftyFromV(Arc<PowerSums>, Vec<u64>, VPlace, bool),
    Kummer(Arc<PowerSums>, Vec<BigInt>, Vec<BigInt>, bool, VPlace, u32),
    TermBound(Arc<PowerSums>, BigInt, VPlace, u32, usize),
    Additivity(Arc<MeasureSpec>, Cylinder, usize, &'static str),
    Integral(Arc<PowerSums>, IntegralKind, Vec<BigInt>, Arc<MeasureSpec>, Vec<u32>),
}

impl Task {
    fn name(&self) -> &'static str {
        match self {
            Task::Orthogonality(..) => "orthogonality",
            Task::Interpolation(..) => "interpolation",
            Task::Difference(..) => "difference",
            Task::RecursiveInf(..) => "recursive_inf",
            Task::RecursiveV(..) => "recursive_v",
            Task::InftyFromV(..) => "infty_from_v",
            Task::Kummer(..) => "kummer",
            Task::TermBound(..) => "term_bound",
            Task::Additivity(..) => "additivity",
            Task::Integral(..) => "integral",
        }
    }

    fn run(&self) -> Report {
        match self {
            Task::Orthogonality(ps, t, target) => orthogonality_defect(ps, t, target, true).unwrap_or_else(|e| {
                Report::failed("orthogonality", json!({ "tuple": tuple_json(&t.values) }), &e)
            }),
            Task::Interpolation(ps, m, pl) => interpolation_check(ps, *m, pl),
            Task::Difference(ps, ms, pl, star) => difference_identity_check(ps, ms, pl, *star),
            Task::RecursiveInf(ps, ms, pl, star) => recursive_inf_check(ps, ms, pl, *star),
            Task::RecursiveV(ps, ms, pl, star) => recursive_v_check(ps, ms, pl, *star),
            Task::InftyFromV(ps, ms, pl, star) => infty_from_v_check(ps, ms, pl, *star),
            Task::Kummer(ps, m, l, star, pl, e) => kummer_report(ps, m, l, *star, pl, *e),
            Task::TermBound(ps, s, pl, level, top) => term_bound_check(ps, s, pl, *level, *top),
            Task::Additivity(spec, c, j, sigma) => additivity_report(spec, c, *j, sigma),
            Task::Integral(ps, kind, t, spec, sched) => integral_report(ps, *kind, t, spec, sched),
        }
    }
}

/// A unit among θ+1, θ+2, …, θ used as the non-trivial weight.
fn nontrivial_sigma(place: &VPlace) -> Poly {
    let f = place.field();
    f.elements()
        .skip(1)
        .chain(std::iter::once(crate::algebra::Fe::ZERO))
        .map(|c| Poly::from_coeffs(vec![c, crate::algebra::Fe::ONE]))
        .find(|s| place.is_unit(s))
        .unwrap_or_else(Poly::one)
}

/// Draws a pair m⃗ ≡ l⃗ mod (q^d − 1)q^{(e−1)d}.
pub fn kummer_pair(rng: &mut ChaCha8Rng, place: &VPlace, e: u32, depth: usize) -> (Vec<BigInt>, Vec<BigInt>) {
    let order = BigInt::from(place.unit_group_order(e));
    let span = order.clone() * 2;
    let mut m = Vec::with_capacity(depth);
    let mut l = Vec::with_capacity(depth);
    for _ in 0..depth {
        let base = BigInt::from(rng.gen_range(-1_000_000i64..1_000_000)) % &span;
        let shift: i64 = rng.gen_range(-3..=3);
        l.push(&base + &order * shift);
        m.push(base);
    }
    (m, l)
}

fn build_tasks(config: &SuiteConfig) -> Result<Vec<Task>> {
    let wanted = |name: &str| config.identities.as_ref().is_none_or(|ids| ids.iter().any(|i| i == name));
    if let Some(ids) = &config.identities {
        if let Some(bad) = ids.iter().find(|i| !IDENTITY_NAMES.contains(&i.as_str())) {
            return Err(Error::Config(format!("unknown identity {bad:?}")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut tasks = Vec::new();
    for grid in &config.grids {
        let field = grid.build_field()?;
        if grid.levels.contains(&0) {
            return Err(Error::Config("levels must be positive".into()));
        }
        let ps = Arc::new(PowerSums::new(&field));
        let mut places = Vec::with_capacity(grid.places.len());
        for coeffs in &grid.places {
            let c = coeffs.iter().map(|&i| field.element(i)).collect::<Result<Vec<_>>>()?;
            places.push(VPlace::new(&field, Poly::from_coeffs(c)).map_err(|e| Error::Config(e.to_string()))?);
        }
        let exps: Vec<u64> = (0..=grid.max_exponent).collect();
        let neg_tuples = tuples(&exps, grid.max_depth);
        let args: Vec<i64> = (-grid.max_argument..=grid.max_argument).collect();
        let int_tuples = if grid.max_argument > 0 { tuples(&args, grid.max_depth) } else { Vec::new() };

        if wanted("orthogonality") {
            for t in &neg_tuples {
                tasks.push(Task::Orthogonality(
                    ps.clone(),
                    ExponentTuple::negative(t, false),
                    OrthoTarget::Infinity { precision: None },
                ));
            }
            if let Some(pos) = &grid.positive {
                let pexps: Vec<u64> = (1..=pos.max_exponent).collect();
                for t in tuples(&pexps, pos.max_depth) {
                    let vals = t.iter().map(|&m| BigInt::from(m)).collect();
                    tasks.push(Task::Orthogonality(
                        ps.clone(),
                        ExponentTuple::new(vals, false, Mode::Positive)?,
                        OrthoTarget::Infinity {
                            precision: Some(pos.precision),
                        },
                    ));
                }
            }
            for pl in &places {
                for t in &neg_tuples {
                    tasks.push(Task::Orthogonality(
                        ps.clone(),
                        ExponentTuple::negative(t, false),
                        OrthoTarget::Place {
                            place: pl.clone(),
                            level: None,
                        },
                    ));
                }
                for &level in &grid.levels {
                    for t in &int_tuples {
                        tasks.push(Task::Orthogonality(
                            ps.clone(),
                            ExponentTuple::integer(t, false),
                            OrthoTarget::Place {
                                place: pl.clone(),
                                level: Some(level),
                            },
                        ));
                    }
                }
            }
        }
        for pl in &places {
            if wanted("interpolation") {
                for m in 0..=grid.max_exponent {
                    tasks.push(Task::Interpolation(ps.clone(), m, pl.clone()));
                }
            }
            for star in [false, true] {
                for t in &neg_tuples {
                    if wanted("difference") {
                        tasks.push(Task::Difference(ps.clone(), t.clone(), pl.clone(), star));
                    }
                    if wanted("recursive_inf") {
                        tasks.push(Task::RecursiveInf(ps.clone(), t.clone(), pl.clone(), star));
                    }
                    if wanted("recursive_v") {
                        tasks.push(Task::RecursiveV(ps.clone(), t.clone(), pl.clone(), star));
                    }
                    if wanted("infty_from_v") {
                        tasks.push(Task::InftyFromV(ps.clone(), t.clone(), pl.clone(), star));
                    }
                }
            }
            if wanted("kummer") || wanted("term_bound") {
                for &e in &grid.levels {
                    // the check evaluates at level e+1
                    let top = degree_cap(pl, e + 1, DEFAULT_I_MAX).map_err(|x| Error::Config(x.to_string()))?;
                    for _ in 0..grid.kummer_pairs {
                        let depth = rng.gen_range(1..=grid.max_depth.max(1));
                        let star = rng.gen_bool(0.5);
                        let (m, l) = kummer_pair(&mut rng, pl, e, depth);
                        if wanted("term_bound") {
                            for s in m.iter().chain(&l) {
                                tasks.push(Task::TermBound(ps.clone(), s.clone(), pl.clone(), e + 1, top + 1));
                            }
                        }
                        if wanted("kummer") {
                            tasks.push(Task::Kummer(ps.clone(), m, l, star, pl.clone(), e));
                        }
                    }
                }
            }
            if let (true, Some(mg)) = (wanted("additivity"), &grid.measure) {
                let sigma = nontrivial_sigma(pl);
                for r in 1..=mg.max_depth {
                    for star in [false, true] {
                        let weights: [(&'static str, Vec<(Poly, Poly)>); 2] = [
                            ("one", vec![(Poly::one(), Poly::one()); r]),
                            ("theta_plus_c", vec![(sigma.clone(), Poly::one()); r]),
                        ];
                        for (label, w) in weights {
                            let spec = Arc::new(MeasureSpec::new(pl, &w, star, mg.work_level)?);
                            for e in 1..=mg.max_level {
                                let residues: Vec<Poly> = enumerate_below(pl.degree() * e as usize, &field).collect();
                                for base in tuples(&residues, r).into_iter().filter(|b| b.len() == r) {
                                    let c = Cylinder::uniform(base, e);
                                    for j in 0..r {
                                        tasks.push(Task::Additivity(spec.clone(), c.clone(), j, label));
                                    }
                                }
                            }
                        }
                    }
                }
            }
            if let (true, Some(ig)) = (wanted("integral"), &grid.integral) {
                let iexps: Vec<u64> = (0..=ig.max_exponent).collect();
                let iargs: Vec<i64> = (-ig.max_argument..=ig.max_argument).collect();
                for star in [false, true] {
                    for t in tuples(&iexps, ig.max_depth) {
                        let spec = Arc::new(MeasureSpec::trivial(pl, t.len(), star, 1)?);
                        let need = (t.iter().max().unwrap() + 2).div_ceil(pl.degree() as u64) as u32;
                        let schedule: Vec<u32> = (1..=need).collect();
                        let vals = t.iter().map(|&m| BigInt::from(m)).collect();
                        tasks.push(Task::Integral(ps.clone(), IntegralKind::InfNeg, vals, spec, schedule));
                    }
                    for t in tuples(&iargs, ig.max_depth) {
                        let spec = Arc::new(MeasureSpec::trivial(pl, t.len(), star, ig.work_level)?);
                        let vals = t.iter().map(|&s| BigInt::from(s)).collect();
                        tasks.push(Task::Integral(ps.clone(), IntegralKind::VUnits, vals, spec, ig.schedule.clone()));
                    }
                }
            }
        }
    }
    Ok(tasks)
}

/// Runs every configured verifier. The reports come back in configuration
/// order and, with timing off, are identical for a fixed seed whatever
/// `jobs` is.
pub fn run_suite(config: &SuiteConfig) -> Result<Vec<Report>> {
    let tasks = build_tasks(config)?;
    let timing = config.timing;
    let run = |t: &Task| {
        let start = Instant::now();
        let mut rep = t.run();
        debug_assert_eq!(rep.identity, t.name());
        if timing {
            rep.elapsed_ms = Some(start.elapsed().as_millis() as u64);
        }
        rep
    };
    let jobs = config.jobs.unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    Ok(pool.install(|| tasks.par_iter().map(run).collect()))
}

/// Parses a suite configuration from JSON, rejecting unknown keys.
pub fn suite_config_from_json(text: &str) -> Result<SuiteConfig> {
    serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
}
