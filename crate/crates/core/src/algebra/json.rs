//! Shared JSON encodings.
//!
//! * field: `{"p": 3, "ext_degree": 1, "modulus": [0, 1]}`
//! * polynomial: array of coefficients lowest first, each a length-ext_degree
//!   coordinate vector, e.g. `[[1], [2]]` for 1 + 2θ
//! * v-adic: `{"v": <poly>, "level": E, "value": <poly>}`

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::field::GaloisField;
use super::laurent::LaurentSeries;
use super::poly::Poly;
use super::vadic::{VAdic, VPlace};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub ext_degree: u32,
    /// Coefficients over F_p, lowest first. Optional on input.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

impl FieldSpec {
    pub fn of(field: &GaloisField) -> Self {
        Self {
            p: field.p(),
            ext_degree: field.ext_degree(),
            modulus: Some(field.modulus().to_vec()),
        }
    }

    pub fn build(&self) -> Result<GaloisField> {
        GaloisField::new(self.p, self.ext_degree, self.modulus.clone())
    }
}

pub fn field_to_json(field: &GaloisField) -> Value {
    serde_json::to_value(FieldSpec::of(field)).expect("plain struct")
}

pub fn poly_to_json(a: &Poly, field: &GaloisField) -> Value {
    Value::Array(
        a.coeffs()
            .iter()
            .map(|&c| json!(field.coords(c)))
            .collect(),
    )
}

pub fn poly_from_json(v: &Value, field: &GaloisField) -> Result<Poly> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::InvalidInput(format!("polynomial must be an array, got {v}")))?;
    let mut coeffs = Vec::with_capacity(arr.len());
    for c in arr {
        let coords: Vec<u32> = serde_json::from_value(c.clone())
            .map_err(|e| Error::InvalidInput(format!("bad coefficient {c}: {e}")))?;
        coeffs.push(field.from_coords(&coords)?);
    }
    Ok(Poly::from_coeffs(coeffs))
}

pub fn vadic_to_json(x: &VAdic) -> Value {
    let f = x.place().field();
    json!({
        "v": poly_to_json(x.place().v(), f),
        "level": x.level(),
        "value": poly_to_json(x.value(), f),
    })
}

pub fn vadic_from_json(v: &Value, field: &GaloisField) -> Result<VAdic> {
    let get = |k: &str| {
        v.get(k)
            .ok_or_else(|| Error::InvalidInput(format!("v-adic value lacks field {k:?}")))
    };
    let place = VPlace::new(field, poly_from_json(get("v")?, field)?)?;
    let level = get("level")?
        .as_u64()
        .ok_or_else(|| Error::InvalidInput("level must be a positive integer".into()))? as u32;
    let value = poly_from_json(get("value")?, field)?;
    if value.degree().is_some_and(|k| k >= level as usize * place.degree()) {
        return Err(Error::NonCanonicalRepresentative {
            rep: value.degree().unwrap(),
            bound: level as usize * place.degree(),
        });
    }
    place.reduce(&value, level)
}

/// `{"valuation": v, "precision": N, "coeffs": [...]}` with coeffs[k] the
/// coefficient of (1/θ)^(v+k) for v+k < N.
pub fn laurent_to_json(s: &LaurentSeries, field: &GaloisField) -> Value {
    let lo = s.valuation().min(0);
    json!({
        "valuation": lo,
        "precision": s.precision(),
        "coeffs": s.coeffs_from(lo).iter().map(|&c| json!(field.coords(c))).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::Fe;

    #[test]
    fn poly_round_trip() {
        for q in [2u64, 3, 4, 9] {
            let f = GaloisField::with_order(q).unwrap();
            let a = Poly::from_coeffs((0..5).map(|k| Fe((k * 7 + 1) % q as u32)).collect());
            let j = poly_to_json(&a, &f);
            assert_eq!(poly_from_json(&j, &f).unwrap(), a);
        }
        let f = GaloisField::with_order(3).unwrap();
        assert_eq!(poly_to_json(&Poly::from_coeffs(vec![Fe(1), Fe(2)]), &f), json!([[1], [2]]));
        assert_eq!(poly_to_json(&Poly::zero(), &f), json!([]));
    }

    #[test]
    fn vadic_round_trip() {
        let f = GaloisField::with_order(4).unwrap();
        let pl = VPlace::new(&f, Poly::from_coeffs(vec![Fe(2), Fe(1)])).unwrap();
        let x = pl.reduce(&Poly::from_coeffs(vec![Fe(3), Fe(1), Fe(2)]), 3).unwrap();
        let back = vadic_from_json(&vadic_to_json(&x), &f).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn field_round_trip() {
        let f = GaloisField::with_order(9).unwrap();
        let spec: FieldSpec = serde_json::from_value(field_to_json(&f)).unwrap();
        assert_eq!(spec.build().unwrap(), f);
    }

    #[test]
    fn rejects_non_canonical() {
        let f = GaloisField::with_order(2).unwrap();
        let j = json!({"v": [[0], [1]], "level": 1, "value": [[0], [1]]});
        assert!(matches!(
            vadic_from_json(&j, &f),
            Err(Error::NonCanonicalRepresentative { .. })
        ));
    }
}
