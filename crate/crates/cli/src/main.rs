use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ffzeta::algebra::json::{laurent_to_json, poly_to_json, vadic_to_json, FieldSpec};
use ffzeta::algebra::{GaloisField, Poly, VPlace};
use ffzeta::identities::{
    difference_identity_check, infty_from_v_check, interpolation_check, orthogonality_defect,
    recursive_inf_check, recursive_v_check, run_suite, suite_config_from_json, term_bound_check, OrthoTarget,
    Report, SuiteConfig, Witnesses,
};
use ffzeta::measures::{
    additivity_check, integral_check, mu_cylinder, riemann_integrate, Cylinder, Domain, IntegralKind, MeasureSpec,
};
use ffzeta::power_sums::PowerSums;
use ffzeta::zeta_infty::{zeta_inf_neg, zeta_inf_pos, ExponentTuple, Mode};
use ffzeta::zeta_v::{kummer_check, zeta_v_eval, zeta_v_neg};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

#[derive(Parser)]
#[command(name = "ffzeta", version, about = "Multiple zeta values over F_q[θ]")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// ∞-adic values ζ_∞ / ζ*_∞ over one or more tuples
    Szeta(ZetaArgs),
    /// v-adic values ζ_v / ζ*_v over one or more tuples
    Vzeta(ZetaArgs),
    /// Volumes of cylinders under μ or μ*
    Measure(MeasureArgs),
    /// Riemann sums along a level schedule
    Integrate(IntegrateArgs),
    /// Runs one named identity
    Verify(VerifyArgs),
    /// Runs the configured verification suite
    Suite(SuiteArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Negative,
    Positive,
    Integer,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Field order q (a prime power)
    #[arg(long)]
    q: Option<u64>,
    /// Characteristic, with --ext-degree and optionally --modulus
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    ext_degree: Option<u32>,
    /// Defining polynomial of F_q over F_p, coefficients lowest first
    #[arg(long)]
    modulus: Option<String>,
    /// Output format
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Worker threads over the tuple grid (0 = all cores)
    #[arg(long)]
    jobs: Option<usize>,
    /// JSON file with the same keys as the flags; flags given explicitly win
    #[arg(long)]
    config: Option<String>,
}

#[derive(Args, Clone)]
struct ZetaArgs {
    #[command(flatten)]
    common: Common,
    /// Place v: `t`, a polynomial like `t^2+t+1`, or coefficients lowest first
    #[arg(long)]
    v: Option<String>,
    /// Comma-separated zeta arguments; repeat for a grid
    #[arg(long, allow_hyphen_values = true)]
    tuple: Vec<String>,
    #[arg(long)]
    star: bool,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Precision in powers of 1/θ (positive mode)
    #[arg(long)]
    precision: Option<i64>,
    /// v-adic level (integer mode)
    #[arg(long)]
    level: Option<u32>,
}

#[derive(Args, Clone)]
struct MeasureArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    v: Option<String>,
    /// Cylinder base point, one polynomial per coordinate; repeat per coordinate
    #[arg(long, required = true)]
    base: Vec<String>,
    /// Cylinder level per coordinate (one value applies to all)
    #[arg(long, value_delimiter = ',', required = true)]
    level: Vec<u32>,
    /// σ_j, one polynomial per coordinate (default 1)
    #[arg(long)]
    sigma: Vec<String>,
    #[arg(long)]
    star: bool,
    /// Level at which volumes are reported
    #[arg(long, default_value_t = 1)]
    work_level: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum KindArg {
    /// exact sums on A_v^r against ζ_∞(−m⃗); the tuple holds m⃗
    #[value(alias = "INF_NEG")]
    InfNeg,
    /// sums on the units against ζ_v(s⃗); the tuple holds s⃗
    #[value(alias = "V_UNITS")]
    VUnits,
}

#[derive(Args, Clone)]
struct IntegrateArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    v: Option<String>,
    #[arg(long, value_enum, default_value = "inf-neg")]
    kind: KindArg,
    #[arg(long, allow_hyphen_values = true)]
    tuple: Option<String>,
    #[arg(long)]
    star: bool,
    /// Levels e of the Riemann sums
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    schedule: Vec<u32>,
    #[arg(long, default_value_t = 2)]
    work_level: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Identity {
    Orthogonality,
    Interpolation,
    Difference,
    RecursiveInf,
    RecursiveV,
    InftyFromV,
    Kummer,
    TermBound,
    Additivity,
    Integral,
}

#[derive(Args, Clone)]
struct VerifyArgs {
    #[arg(value_enum)]
    identity: Identity,
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    v: Option<String>,
    /// Exponent m (interpolation)
    #[arg(long)]
    m: Option<u64>,
    /// Tuple of zeta arguments (or m⃗ for integral)
    #[arg(long, allow_hyphen_values = true)]
    tuple: Option<String>,
    /// Second tuple (kummer)
    #[arg(long, allow_hyphen_values = true)]
    other: Option<String>,
    #[arg(long)]
    star: bool,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long)]
    precision: Option<i64>,
    /// Level E (v-adic) or congruence level e (kummer)
    #[arg(long)]
    level: Option<u32>,
    /// Cylinder base points (additivity)
    #[arg(long)]
    base: Vec<String>,
    /// Refined coordinate (additivity)
    #[arg(long, default_value_t = 0)]
    coordinate: usize,
    /// Use the non-reversed argument order in orthogonality (diagnostic)
    #[arg(long)]
    forward: bool,
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    #[arg(long, value_delimiter = ',')]
    schedule: Vec<u32>,
}

#[derive(Args, Clone)]
struct SuiteArgs {
    /// Suite configuration JSON (default grid if absent)
    #[arg(long)]
    config: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    jobs: Option<usize>,
    /// Record per-report wall time (makes output nondeterministic)
    #[arg(long)]
    timing: bool,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

enum Failure {
    Usage(String),
    Identity,
}

impl From<ffzeta::Error> for Failure {
    fn from(e: ffzeta::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

/// Flags merged with an optional `--config` file.
struct Settings {
    file: Map<String, Value>,
    format: Format,
    field: GaloisField,
    jobs: usize,
}

impl Settings {
    fn load(common: &Common) -> Result<Self, Failure> {
        let file = match &common.config {
            None => Map::new(),
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))?;
                match serde_json::from_str::<Value>(&text) {
                    Ok(Value::Object(m)) => m,
                    Ok(_) => return usage(format!("{path}: config must be a JSON object")),
                    Err(e) => return usage(format!("{path}: {e}")),
                }
            }
        };
        let get_u64 = |k: &str| file.get(k).and_then(Value::as_u64);
        let q = common.q.or(get_u64("q"));
        let p = common.p.or(get_u64("p").map(|x| x as u32));
        let ext = common.ext_degree.or(get_u64("ext_degree").map(|x| x as u32));
        let modulus = match &common.modulus {
            Some(s) => Some(parse_u32_list(s)?),
            None => file
                .get("modulus")
                .map(|v| serde_json::from_value::<Vec<u32>>(v.clone()))
                .transpose()
                .map_err(|e| Failure::Usage(format!("modulus: {e}")))?,
        };
        let field = match (q, p) {
            (Some(q), None) if ext.is_none() => match modulus {
                None => GaloisField::with_order(q)?,
                Some(m) => {
                    let (p, k) = ffzeta::algebra::field::prime_power(q)
                        .ok_or_else(|| Failure::Usage(format!("q = {q} is not a prime power")))?;
                    GaloisField::new(p, k, Some(m))?
                }
            },
            (None, Some(p)) => FieldSpec {
                p,
                ext_degree: ext.unwrap_or(1),
                modulus,
            }
            .build()?,
            (None, None) => return usage("give the field with --q, or with --p and --ext-degree"),
            _ => return usage("use either --q or --p/--ext-degree, not both"),
        };
        let format = match common.format {
            Some(f) => f,
            None => match file.get("format").and_then(Value::as_str) {
                None | Some("json") => Format::Json,
                Some("csv") => Format::Csv,
                Some(other) => return usage(format!("unknown format {other:?}")),
            },
        };
        let jobs = common.jobs.or(get_u64("jobs").map(|x| x as usize)).unwrap_or(0);
        Ok(Self { file, format, field, jobs })
    }

    fn str_opt(&self, flag: &Option<String>, key: &str) -> Option<String> {
        flag.clone().or_else(|| match self.file.get(key) {
            Some(Value::String(s)) => Some(s.clone()),
            Some(Value::Array(a)) => Some(a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")),
            _ => None,
        })
    }

    fn u64_opt(&self, flag: Option<u64>, key: &str) -> Option<u64> {
        flag.or_else(|| self.file.get(key).and_then(Value::as_u64))
    }

    fn i64_opt(&self, flag: Option<i64>, key: &str) -> Option<i64> {
        flag.or_else(|| self.file.get(key).and_then(Value::as_i64))
    }

    fn bool_flag(&self, flag: bool, key: &str) -> bool {
        flag || self.file.get(key).and_then(Value::as_bool).unwrap_or(false)
    }

    fn mode(&self, flag: Option<ModeArg>) -> Result<Mode, Failure> {
        let m = match flag {
            Some(ModeArg::Negative) => Mode::Negative,
            Some(ModeArg::Positive) => Mode::Positive,
            Some(ModeArg::Integer) => Mode::Integer,
            None => match self.file.get("mode") {
                None => Mode::Negative,
                Some(v) => serde_json::from_value(v.clone()).map_err(|e| Failure::Usage(format!("mode: {e}")))?,
            },
        };
        Ok(m)
    }

    fn tuples(&self, flags: &[String]) -> Result<Vec<Vec<BigInt>>, Failure> {
        let raw: Vec<String> = if !flags.is_empty() {
            flags.to_vec()
        } else {
            match self.file.get("tuple").or_else(|| self.file.get("tuples")) {
                None => Vec::new(),
                Some(Value::String(s)) => vec![s.clone()],
                Some(Value::Array(a)) if a.iter().all(Value::is_array) => a
                    .iter()
                    .map(|t| t.as_array().unwrap().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
                    .collect(),
                Some(Value::Array(a)) => vec![a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")],
                Some(other) => return usage(format!("tuple: unexpected {other}")),
            }
        };
        if raw.is_empty() {
            return usage("give at least one --tuple, e.g. --tuple -1,-1");
        }
        raw.iter().map(|s| parse_tuple(s)).collect()
    }

    /// Evaluates `row` at every tuple on a worker pool, keeping input order.
    fn over_grid(
        &self,
        flags: &[String],
        row: impl Fn(&[BigInt]) -> Result<Value, Failure> + Sync,
    ) -> Result<Vec<Value>, Failure> {
        let grid = self.tuples(flags)?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs)
            .build()
            .map_err(|e| Failure::Usage(e.to_string()))?;
        pool.install(|| grid.par_iter().map(|t| row(t)).collect())
    }

    fn place(&self, flag: &Option<String>) -> Result<VPlace, Failure> {
        let text = self
            .str_opt(flag, "v")
            .ok_or_else(|| Failure::Usage("give the place with --v, e.g. --v t or --v 0,1".into()))?;
        let v = parse_poly(&text, &self.field)?;
        Ok(VPlace::new(&self.field, v)?)
    }
}

fn parse_u32_list(s: &str) -> Result<Vec<u32>, Failure> {
    s.split(',')
        .map(|x| x.trim().parse::<u32>().map_err(|_| Failure::Usage(format!("not a coefficient list: {s:?}"))))
        .collect()
}

fn parse_tuple(s: &str) -> Result<Vec<BigInt>, Failure> {
    let s = s.trim().trim_start_matches('[').trim_end_matches(']');
    if s.is_empty() {
        return usage("empty tuple");
    }
    s.split(',')
        .map(|x| x.trim().parse::<BigInt>().map_err(|_| Failure::Usage(format!("not an integer tuple: {s:?}"))))
        .collect()
}

/// `t`, `2*t^3+t+1` (coefficients are element indices), or a
/// comma-separated coefficient list lowest first.
fn parse_poly(s: &str, f: &GaloisField) -> Result<Poly, Failure> {
    let s = s.trim();
    let bad = || Failure::Usage(format!("cannot parse polynomial {s:?}"));
    if !s.contains('t') {
        return Ok(Poly::from_indices(&parse_u32_list(s)?, f)?);
    }
    let mut acc = Poly::zero();
    for term in s.split('+') {
        let term = term.trim();
        let (coef, power) = match term.split_once('t') {
            None => (term, None),
            Some((c, rest)) => {
                let c = c.trim_end_matches('*').trim();
                let k = match rest.trim() {
                    "" => 1,
                    r => r.strip_prefix('^').and_then(|k| k.trim().parse::<usize>().ok()).ok_or_else(bad)?,
                };
                (if c.is_empty() { "1" } else { c }, Some(k))
            }
        };
        let c = f.element(coef.parse::<u32>().map_err(|_| bad())?)?;
        acc = acc.add(&Poly::monomial(c, power.unwrap_or(0)), f);
    }
    Ok(acc)
}

fn emit(format: Format, rows: &[Value], csv_columns: &[&str]) -> Outcome {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match format {
        Format::Json => {
            let payload = if rows.len() == 1 { rows[0].clone() } else { Value::Array(rows.to_vec()) };
            writeln!(out, "{payload}").map_err(|e| Failure::Usage(e.to_string()))?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(csv_columns).map_err(|e| Failure::Usage(e.to_string()))?;
            for row in rows {
                let record: Vec<String> = csv_columns
                    .iter()
                    .map(|c| match row.get(*c) {
                        Some(Value::String(s)) => s.clone(),
                        Some(v) => v.to_string(),
                        None => String::new(),
                    })
                    .collect();
                w.write_record(&record).map_err(|e| Failure::Usage(e.to_string()))?;
            }
            w.flush().map_err(|e| Failure::Usage(e.to_string()))?;
        }
    }
    Ok(())
}

fn tuple_value(t: &[BigInt]) -> Value {
    Value::Array(
        t.iter()
            .map(|x| i64::try_from(x).map_or_else(|_| json!(x.to_string()), |v| json!(v)))
            .collect(),
    )
}

/// Reads a tuple of arguments as an [`ExponentTuple`] in the given mode.
fn exponent_tuple(args: &[BigInt], star: bool, mode: Mode) -> Result<ExponentTuple, Failure> {
    let values = match mode {
        Mode::Negative => {
            if args.iter().any(|s| s > &BigInt::from(0)) {
                return usage(format!(
                    "tuple {} has positive entries; negative mode takes arguments ≤ 0 (use --mode positive or --mode integer)",
                    tuple_value(args)
                ));
            }
            args.iter().map(|s| -s).collect()
        }
        _ => args.to_vec(),
    };
    Ok(ExponentTuple::new(values, star, mode)?)
}

fn szeta(a: &ZetaArgs) -> Outcome {
    let st = Settings::load(&a.common)?;
    let f = &st.field;
    let mode = st.mode(a.mode)?;
    let star = st.bool_flag(a.star, "star");
    let ps = PowerSums::new(f);
    let precision = st.i64_opt(a.precision, "precision");
    let rows = st.over_grid(&a.tuple, |args| {
        let t = exponent_tuple(args, star, mode)?;
        let (value, text) = match mode {
            Mode::Negative => {
                let v = zeta_inf_neg(&ps, &t.small()?, star);
                (poly_to_json(&v, f), v.display(f).to_string())
            }
            Mode::Positive => {
                let n = precision.ok_or_else(|| Failure::Usage("positive mode needs --precision".into()))?;
                let v = zeta_inf_pos(f, &t.small()?, star, n)?;
                (laurent_to_json(&v, f), v.display())
            }
            Mode::Integer => return usage("∞-adic values take --mode negative or --mode positive"),
        };
        Ok(json!({ "tuple": tuple_value(args), "star": star, "value": value, "text": text }))
    })?;
    emit(st.format, &rows, &["tuple", "star", "text"])
}

fn vzeta(a: &ZetaArgs) -> Outcome {
    let st = Settings::load(&a.common)?;
    let f = &st.field;
    let place = st.place(&a.v)?;
    let mode = st.mode(a.mode)?;
    let star = st.bool_flag(a.star, "star");
    let ps = PowerSums::new(f);
    let level = st.u64_opt(a.level.map(u64::from), "level").map(|x| x as u32);
    let rows = st.over_grid(&a.tuple, |args| {
        let t = exponent_tuple(args, star, mode)?;
        let (value, text) = match mode {
            Mode::Negative => {
                let v = zeta_v_neg(&ps, &t.small()?, star, &place);
                (poly_to_json(&v, f), v.display(f).to_string())
            }
            Mode::Integer => {
                let level = level.ok_or_else(|| Failure::Usage("integer mode needs --level".into()))?;
                let v = zeta_v_eval(&ps, &t.arguments(), star, &place, level)?;
                (vadic_to_json(&v), v.to_string())
            }
            Mode::Positive => return usage("v-adic values take --mode negative or --mode integer"),
        };
        Ok(json!({ "tuple": tuple_value(args), "star": star, "value": value, "text": text }))
    })?;
    emit(st.format, &rows, &["tuple", "star", "text"])
}

fn measure_spec(st: &Settings, place: &VPlace, sigma: &[String], r: usize, star: bool, work: u32) -> Result<MeasureSpec, Failure> {
    let sigmas = if sigma.is_empty() {
        vec![(Poly::one(), Poly::one()); r]
    } else if sigma.len() == r || sigma.len() == 1 {
        let parsed = sigma.iter().map(|s| parse_poly(s, &st.field)).collect::<Result<Vec<_>, _>>()?;
        (0..r).map(|j| (parsed[j.min(parsed.len() - 1)].clone(), Poly::one())).collect()
    } else {
        return usage(format!("give one --sigma or one per coordinate ({r})"));
    };
    Ok(MeasureSpec::new(place, &sigmas, star, work)?)
}

fn cylinder(st: &Settings, base: &[String], levels: &[u32]) -> Result<Cylinder, Failure> {
    let base = base.iter().map(|s| parse_poly(s, &st.field)).collect::<Result<Vec<_>, _>>()?;
    let levels = match levels.len() {
        1 => vec![levels[0]; base.len()],
        n if n == base.len() => levels.to_vec(),
        _ => return usage("give one --level or one per coordinate"),
    };
    Ok(Cylinder { base, levels })
}

fn measure(a: &MeasureArgs) -> Outcome {
    let st = Settings::load(&a.common)?;
    let place = st.place(&a.v)?;
    let c = cylinder(&st, &a.base, &a.level)?;
    let spec = measure_spec(&st, &place, &a.sigma, c.base.len(), a.star, a.work_level)?;
    let mu = mu_cylinder(&spec, &c)?;
    let f = &st.field;
    let row = json!({
        "base": c.base.iter().map(|b| poly_to_json(b, f)).collect::<Vec<_>>(),
        "levels": c.levels,
        "star": a.star,
        "value": vadic_to_json(&mu),
        "text": mu.to_string(),
    });
    emit(st.format, &[row], &["base", "levels", "star", "text"])
}

fn integrate(a: &IntegrateArgs) -> Outcome {
    let st = Settings::load(&a.common)?;
    let place = st.place(&a.v)?;
    let t = match st.str_opt(&a.tuple, "tuple") {
        Some(s) => parse_tuple(&s)?,
        None => return usage("give --tuple"),
    };
    let ps = PowerSums::new(&st.field);
    let f = &st.field;
    let mut rows = Vec::new();
    match a.kind {
        KindArg::InfNeg => {
            let ms = t
                .iter()
                .map(|m| u64::try_from(m).map_err(|_| Failure::Usage("INF_NEG takes m_j ≥ 0".into())))
                .collect::<Result<Vec<_>, _>>()?;
            for &e in &a.schedule {
                let v = ffzeta::measures::riemann_sum_exact(&ps, &place, &ms, a.star, e)?;
                rows.push(json!({ "e": e, "value": poly_to_json(&v, f), "text": v.display(f).to_string() }));
            }
        }
        KindArg::VUnits => {
            let spec = MeasureSpec::trivial(&place, t.len(), a.star, a.work_level)?;
            let exps: Vec<BigInt> = t.iter().map(|s| -s).collect();
            for &e in &a.schedule {
                let v = riemann_integrate(&spec, &exps, Domain::Units, e)?;
                rows.push(json!({ "e": e, "value": vadic_to_json(&v), "text": v.to_string() }));
            }
        }
    }
    let rows: Vec<Value> = vec![json!({ "tuple": tuple_value(&t), "star": a.star, "sums": rows })];
    match st.format {
        Format::Json => emit(Format::Json, &rows, &[]),
        Format::Csv => {
            let flat: Vec<Value> = rows[0]["sums"].as_array().unwrap().clone();
            emit(Format::Csv, &flat, &["e", "text"])
        }
    }
}

fn verify(a: &VerifyArgs) -> Outcome {
    let st = Settings::load(&a.common)?;
    let f = st.field.clone();
    let ps = PowerSums::new(&f);
    let star = st.bool_flag(a.star, "star");
    let tuple = || -> Result<Vec<BigInt>, Failure> {
        match st.str_opt(&a.tuple, "tuple") {
            Some(s) => parse_tuple(&s),
            None => usage("give --tuple"),
        }
    };
    let small = |t: &[BigInt]| -> Result<Vec<u64>, Failure> {
        t.iter()
            .map(|s| {
                u64::try_from(-s).map_err(|_| Failure::Usage("this identity takes arguments ≤ 0 (tuple −m⃗)".into()))
            })
            .collect()
    };
    let report: Report = match a.identity {
        Identity::Orthogonality => {
            let mode = st.mode(a.mode)?;
            let t = exponent_tuple(&tuple()?, false, mode)?;
            let target = match st.str_opt(&a.v, "v") {
                None => OrthoTarget::Infinity {
                    precision: st.i64_opt(a.precision, "precision"),
                },
                Some(_) => OrthoTarget::Place {
                    place: st.place(&a.v)?,
                    level: st.u64_opt(a.level.map(u64::from), "level").map(|x| x as u32),
                },
            };
            orthogonality_defect(&ps, &t, &target, !a.forward)?
        }
        Identity::Interpolation => {
            let m = st.u64_opt(a.m, "m").ok_or_else(|| Failure::Usage("give --m".into()))?;
            interpolation_check(&ps, m, &st.place(&a.v)?)
        }
        Identity::Difference => difference_identity_check(&ps, &small(&tuple()?)?, &st.place(&a.v)?, star),
        Identity::RecursiveInf => recursive_inf_check(&ps, &small(&tuple()?)?, &st.place(&a.v)?, star),
        Identity::RecursiveV => recursive_v_check(&ps, &small(&tuple()?)?, &st.place(&a.v)?, star),
        Identity::InftyFromV => infty_from_v_check(&ps, &small(&tuple()?)?, &st.place(&a.v)?, star),
        Identity::Kummer => {
            let place = st.place(&a.v)?;
            let m = tuple()?;
            let l = match st.str_opt(&a.other, "other") {
                Some(s) => parse_tuple(&s)?,
                None => return usage("give the second tuple with --other"),
            };
            let e = st.u64_opt(a.level.map(u64::from), "level").unwrap_or(1) as u32;
            let k = kummer_check(&ps, &m, &l, star, &place, e)?;
            Report {
                identity: "kummer".into(),
                params: json!({ "m": tuple_value(&m), "l": tuple_value(&l), "star": star, "e": e }),
                holds: k.holds,
                witnesses: Witnesses {
                    lhs: vadic_to_json(&k.lhs),
                    rhs: vadic_to_json(&k.rhs),
                },
                elapsed_ms: None,
            }
        }
        Identity::TermBound => {
            let place = st.place(&a.v)?;
            let t = tuple()?;
            if t.len() != 1 {
                return usage("term_bound takes a single argument s");
            }
            let level = st.u64_opt(a.level.map(u64::from), "level").unwrap_or(2) as u32;
            let top = ffzeta::zeta_v::degree_cap(&place, level, ffzeta::zeta_v::DEFAULT_I_MAX)? + 1;
            term_bound_check(&ps, &t[0], &place, level, top)
        }
        Identity::Additivity => {
            let place = st.place(&a.v)?;
            if a.base.is_empty() {
                return usage("give the cylinder with --base (one per coordinate) and --level");
            }
            let e = st.u64_opt(a.level.map(u64::from), "level").unwrap_or(1) as u32;
            let c = cylinder(&st, &a.base, &[e])?;
            let spec = MeasureSpec::trivial(&place, c.base.len(), star, e + 1)?;
            let r = additivity_check(&spec, &c, a.coordinate)?;
            Report {
                identity: "additivity".into(),
                params: json!({ "levels": c.levels, "coordinate": a.coordinate, "star": star }),
                holds: r.holds,
                witnesses: Witnesses {
                    lhs: vadic_to_json(&r.parent),
                    rhs: vadic_to_json(&r.children),
                },
                elapsed_ms: None,
            }
        }
        Identity::Integral => {
            let place = st.place(&a.v)?;
            let t = tuple()?;
            let kind = match a.kind.unwrap_or(KindArg::InfNeg) {
                KindArg::InfNeg => IntegralKind::InfNeg,
                KindArg::VUnits => IntegralKind::VUnits,
            };
            let work = st.u64_opt(a.level.map(u64::from), "level").unwrap_or(2) as u32;
            let spec = MeasureSpec::trivial(&place, t.len(), star, if kind == IntegralKind::InfNeg { 1 } else { work })?;
            let schedule = if a.schedule.is_empty() { vec![1, 2, 3] } else { a.schedule.clone() };
            let rep = integral_check(&ps, kind, &t, &spec, &schedule)?;
            Report {
                identity: "integral".into(),
                params: json!({ "tuple": tuple_value(&t), "kind": kind, "star": star, "schedule": schedule }),
                holds: rep.holds,
                witnesses: Witnesses {
                    lhs: json!(rep.steps.iter().map(|s| json!({"e": s.e, "asserted": s.asserted, "value": s.lhs})).collect::<Vec<_>>()),
                    rhs: json!(rep.steps.iter().map(|s| json!({"e": s.e, "value": s.rhs})).collect::<Vec<_>>()),
                },
                elapsed_ms: None,
            }
        }
    };
    emit_reports(st.format, std::slice::from_ref(&report))?;
    if report.holds {
        Ok(())
    } else {
        Err(Failure::Identity)
    }
}

fn emit_reports(format: Format, reports: &[Report]) -> Outcome {
    match format {
        Format::Json => {
            let v = if reports.len() == 1 {
                serde_json::to_value(&reports[0])
            } else {
                serde_json::to_value(reports)
            }
            .map_err(|e| Failure::Usage(e.to_string()))?;
            println!("{v}");
            Ok(())
        }
        Format::Csv => {
            let rows: Vec<Value> = reports
                .iter()
                .map(|r| {
                    json!({
                        "identity": r.identity,
                        "params": r.params,
                        "holds": r.holds,
                        "lhs": r.witnesses.lhs,
                        "rhs": r.witnesses.rhs,
                    })
                })
                .collect();
            emit(Format::Csv, &rows, &["identity", "params", "holds", "lhs", "rhs"])
        }
    }
}

fn suite(a: &SuiteArgs) -> Outcome {
    let mut cfg = match &a.config {
        None => SuiteConfig::default(),
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))?;
            suite_config_from_json(&text)?
        }
    };
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if a.jobs.is_some() {
        cfg.jobs = a.jobs;
    }
    cfg.timing |= a.timing;
    let reports = run_suite(&cfg)?;
    let format = a.format.unwrap_or(Format::Json);
    match format {
        Format::Json => {
            println!("{}", serde_json::to_string(&reports).map_err(|e| Failure::Usage(e.to_string()))?);
        }
        Format::Csv => emit_reports(Format::Csv, &reports)?,
    }
    let failed = reports.iter().filter(|r| !r.holds).count();
    if failed > 0 {
        eprintln!("{failed} of {} reports failed", reports.len());
        return Err(Failure::Identity);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Szeta(a) => szeta(a),
        Command::Vzeta(a) => vzeta(a),
        Command::Measure(a) => measure(a),
        Command::Integrate(a) => integrate(a),
        Command::Verify(a) => verify(a),
        Command::Suite(a) => suite(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Identity) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
