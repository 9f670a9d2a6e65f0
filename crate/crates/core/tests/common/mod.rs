//! Independent oracles: plain enumeration and recurrences written without the
//! crate's power-sum, zeta or measure code. Only field and polynomial
//! arithmetic is shared.

#![allow(dead_code)]

use std::collections::HashMap;

use ffzeta::algebra::{Fe, GaloisField, Poly, VPlace};

pub fn poly(coeffs: &[u32]) -> Poly {
    Poly::from_coeffs(coeffs.iter().map(|&c| Fe(c)).collect())
}

pub fn field(q: u64) -> GaloisField {
    GaloisField::with_order(q).unwrap()
}

pub fn places(f: &GaloisField) -> Vec<VPlace> {
    place_indices(f.q() as u64)
        .iter()
        .map(|c| VPlace::new(f, Poly::from_indices(c, f).unwrap()).unwrap())
        .collect()
}

/// The places used on the test grids: θ and one irreducible quadratic,
/// as coefficient indices lowest first.
pub fn place_indices(q: u64) -> [Vec<u32>; 2] {
    match q {
        2 => [vec![0, 1], vec![1, 1, 1]],
        3 => [vec![0, 1], vec![1, 0, 1]],
        4 => [vec![0, 1], vec![2, 1, 1]],
        _ => panic!("no places for q={q}"),
    }
}

/// Every polynomial of degree < `bound`, by counting in base q.
pub fn all_below(f: &GaloisField, bound: usize) -> Vec<Poly> {
    let q = f.q() as u64;
    let total = q.pow(bound as u32);
    (0..total)
        .map(|mut idx| {
            let mut c = Vec::with_capacity(bound);
            for _ in 0..bound {
                c.push(f.element((idx % q) as u32).unwrap());
                idx /= q;
            }
            Poly::from_coeffs(c)
        })
        .collect()
}

pub fn monics(f: &GaloisField, deg: usize) -> Vec<Poly> {
    let top = Poly::monomial(Fe::ONE, deg);
    all_below(f, deg).into_iter().map(|a| a.add(&top, f)).collect()
}

pub fn brute_s(f: &GaloisField, i: usize, m: u64) -> Poly {
    let mut acc = Poly::zero();
    for n in monics(f, i) {
        acc = acc.add(&n.pow(m, f), f);
    }
    acc
}

pub fn brute_s_tilde(f: &GaloisField, v: &Poly, i: usize, m: u64) -> Poly {
    let mut acc = Poly::zero();
    for n in monics(f, i) {
        if !n.rem(v, f).is_zero() {
            acc = acc.add(&n.pow(m, f), f);
        }
    }
    acc
}

/// C(n, k) mod p from a Pascal triangle reduced mod p.
pub fn binom_mod(n: u64, k: u64, p: u32) -> u32 {
    if k > n {
        return 0;
    }
    let mut row = vec![1u32];
    for _ in 0..n {
        let mut next = vec![1u32; row.len() + 1];
        for j in 1..row.len() {
            next[j] = (row[j - 1] + row[j]) % p;
        }
        row = next;
    }
    row[k as usize]
}

/// Table t[i][k] = S_i(−k) for i ≤ i_max, k ≤ m_max, from writing a monic n
/// of degree i as θ·a + c with a monic of degree i−1:
/// S_i(−k) = −Σ_{j<k, (q−1) | (k−j)} C(k, j)·θ^j·S_{i−1}(−j).
pub fn s_table(f: &GaloisField, i_max: usize, m_max: u64) -> Vec<Vec<Poly>> {
    let q1 = (f.q() - 1) as u64;
    let mut t = vec![vec![Poly::one(); m_max as usize + 1]];
    for i in 1..=i_max {
        let prev = &t[i - 1];
        let row: Vec<Poly> = (0..=m_max)
            .map(|k| {
                let mut acc = Poly::zero();
                for j in 0..k {
                    if (k - j) % q1 != 0 {
                        continue;
                    }
                    let c = binom_mod(k, j, f.p());
                    if c == 0 {
                        continue;
                    }
                    let term = Poly::monomial(f.from_int(c as i64), j as usize).mul(&prev[j as usize], f);
                    acc = acc.add(&term, f);
                }
                acc.neg(f)
            })
            .collect();
        t.push(row);
    }
    t
}

/// Σ over index chains i_1 > ⋯ > i_r ≥ 0 (≥ for star) with i_j ≤ caps[j].
pub fn chains(caps: &[usize], star: bool) -> Vec<Vec<usize>> {
    fn go(caps: &[usize], star: bool, upper: Option<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let j = cur.len();
        if j == caps.len() {
            out.push(cur.clone());
            return;
        }
        let hi = match upper {
            None => Some(caps[j]),
            Some(u) if star => Some(u.min(caps[j])),
            Some(u) => u.checked_sub(1).map(|u| u.min(caps[j])),
        };
        if let Some(hi) = hi {
            for i in 0..=hi {
                cur.push(i);
                go(caps, star, Some(i), cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(caps, star, None, &mut Vec::new(), &mut out);
    out
}

pub struct ZetaOracle {
    pub field: GaloisField,
    s: Vec<Vec<Poly>>,
    tilde: HashMap<(Vec<Fe>, usize, u64), Poly>,
}

impl ZetaOracle {
    pub fn new(q: u64, m_max: u64) -> Self {
        let f = field(q);
        let s = s_table(&f, m_max as usize + 1, m_max);
        Self {
            field: f,
            s,
            tilde: HashMap::new(),
        }
    }

    pub fn s(&self, i: usize, m: u64) -> Poly {
        self.s.get(i).map_or_else(Poly::zero, |row| row[m as usize].clone())
    }

    pub fn zeta_inf(&self, ms: &[u64], star: bool) -> Poly {
        let f = &self.field;
        let caps: Vec<usize> = ms.iter().map(|&m| m as usize).collect();
        let mut acc = Poly::zero();
        for c in chains(&caps, star) {
            let mut term = Poly::one();
            for (j, &i) in c.iter().enumerate() {
                term = term.mul(&self.s(i, ms[j]), f);
            }
            acc = acc.add(&term, f);
        }
        acc
    }

    /// S̃ by the inclusion–exclusion over multiples of v, from the S table:
    /// the multiples v·b with b monic of degree i − d contribute v^m S_{i−d}.
    fn s_tilde(&self, v: &Poly, i: usize, m: u64) -> Poly {
        let f = &self.field;
        let d = v.degree().unwrap();
        let s = self.s(i, m);
        if i < d {
            return s;
        }
        s.sub(&v.pow(m, f).mul(&self.s(i - d, m), f), f)
    }

    /// ζ_v with S̃ enumerated directly when small, else from the S table.
    pub fn zeta_v(&mut self, v: &Poly, ms: &[u64], star: bool) -> Poly {
        let d = v.degree().unwrap();
        let caps: Vec<usize> = ms.iter().map(|&m| m as usize + d).collect();
        let mut acc = Poly::zero();
        for c in chains(&caps, star) {
            let mut term = Poly::one();
            for (j, &i) in c.iter().enumerate() {
                let t = self.tilde_cached(v, i, ms[j]);
                term = term.mul(&t, &self.field);
            }
            acc = acc.add(&term, &self.field);
        }
        acc
    }

    fn tilde_cached(&mut self, v: &Poly, i: usize, m: u64) -> Poly {
        let key = (v.coeffs().to_vec(), i, m);
        if let Some(t) = self.tilde.get(&key) {
            return t.clone();
        }
        let q = self.field.q() as u64;
        let t = if q.pow(i as u32) <= 1 << 12 {
            brute_s_tilde(&self.field, v, i, m)
        } else {
            self.s_tilde(v, i, m)
        };
        self.tilde.insert(key, t.clone());
        t
    }
}

/// Coefficients of x^0..x^{n−1} (x = 1/θ) of Σ_{n monic, deg i} n^{−m},
/// by power-series inversion of each reversed n^m.
pub fn laurent_s_pos(f: &GaloisField, i: usize, m: u64, prec: usize) -> Vec<Fe> {
    let mut acc = vec![Fe::ZERO; prec];
    for n in monics(f, i) {
        let nm = n.pow(m, f);
        let deg = nm.degree().unwrap();
        if deg >= prec {
            continue;
        }
        // n^m = θ^deg·rev(x), rev monic-constant: n^{−m} = x^deg / rev(x)
        let mut rev = vec![Fe::ZERO; prec];
        for k in 0..=deg.min(prec - 1) {
            rev[k] = nm.coeff(deg - k);
        }
        let mut inv = vec![Fe::ZERO; prec];
        inv[0] = Fe::ONE;
        for k in 1..prec {
            let mut s = Fe::ZERO;
            for j in 1..=k {
                s = f.add(s, f.mul(rev[j], inv[k - j]));
            }
            inv[k] = f.neg(s);
        }
        for k in 0..prec - deg {
            acc[k + deg] = f.add(acc[k + deg], inv[k]);
        }
    }
    acc
}

pub fn series_mul(f: &GaloisField, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    let n = a.len();
    let mut out = vec![Fe::ZERO; n];
    for i in 0..n {
        for j in 0..n - i {
            out[i + j] = f.add(out[i + j], f.mul(a[i], b[j]));
        }
    }
    out
}

/// ζ_∞(m⃗) at positive integers to precision `prec`, by naive summation.
pub fn laurent_zeta_pos(f: &GaloisField, ms: &[u64], star: bool, prec: usize) -> Vec<Fe> {
    let caps: Vec<usize> = ms.iter().map(|&m| (prec - 1) / m as usize).collect();
    let mut table = HashMap::new();
    let mut acc = vec![Fe::ZERO; prec];
    for c in chains(&caps, star) {
        let mut term = vec![Fe::ZERO; prec];
        term[0] = Fe::ONE;
        for (j, &i) in c.iter().enumerate() {
            let s = table
                .entry((i, ms[j]))
                .or_insert_with(|| laurent_s_pos(f, i, ms[j], prec))
                .clone();
            term = series_mul(f, &term, &s);
        }
        for k in 0..prec {
            acc[k] = f.add(acc[k], term[k]);
        }
    }
    acc
}

/// N(i, α) = #{n monic of degree i, n ≡ α mod v^e} mod p, for every
/// canonical α, for i ≤ i_top.
pub fn residue_counts(f: &GaloisField, ve: &Poly, i_top: usize) -> HashMap<(Poly, usize), u64> {
    let mut counts = HashMap::new();
    for i in 0..=i_top {
        for n in monics(f, i) {
            *counts.entry((n.rem(ve, f), i)).or_insert(0u64) += 1;
        }
    }
    counts
}
