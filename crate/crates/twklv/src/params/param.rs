use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::foundations::{integral_roots, InfChar, Rat, WeylElem};

/// Module side: representations (primal) or sheaves on the dual side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Primal,
    Dual,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Primal => Side::Dual,
            Side::Dual => Side::Primal,
        }
    }
}

/// (w′, ε): an involution and signs on its fixed points (0 elsewhere).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeomParam {
    pub winv: WeylElem,
    pub signs: Vec<i8>,
}

impl GeomParam {
    pub fn new(winv: WeylElem, signs: Vec<i8>) -> Self {
        debug_assert!(winv.is_involution());
        debug_assert!((0..signs.len()).all(|i| (winv.apply(i) == i) == (signs[i] != 0)));
        GeomParam { winv, signs }
    }

    pub fn n(&self) -> usize {
        self.signs.len()
    }

    /// Short label like "(1 3)|+-+" with '.' at non-fixed slots.
    pub fn label(&self) -> String {
        let s: String = self
            .signs
            .iter()
            .map(|&e| match e {
                1 => '+',
                -1 => '-',
                _ => '.',
            })
            .collect();
        format!("{}|{}", self.winv.cycle_string(), s)
    }

    pub fn sign_map(&self) -> BTreeMap<String, &'static str> {
        self.signs
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| ((i + 1).to_string(), if e > 0 { "+" } else { "-" }))
            .collect()
    }

    pub fn is_theta_fixed(&self) -> bool {
        &theta_action(self) == self
    }

    pub fn to_json(&self, lc: &InfChar) -> serde_json::Value {
        serde_json::json!({
            "winv": self.winv.cycle_string(),
            "signs": self.sign_map(),
            "lambda": lc.coords(),
        })
    }

    /// Inverse of `to_json` (lambda is checked by the caller).
    pub fn from_json(n: usize, v: &serde_json::Value) -> Option<GeomParam> {
        let winv = WeylElem::parse_cycles(n, v.get("winv")?.as_str()?)?;
        if !winv.is_involution() {
            return None;
        }
        let mut signs = vec![0i8; n];
        for (k, s) in v.get("signs")?.as_object()? {
            let i: usize = k.parse().ok()?;
            if i == 0 || i > n || winv.apply(i - 1) != i - 1 {
                return None;
            }
            signs[i - 1] = match s.as_str()? {
                "+" => 1,
                "-" => -1,
                _ => return None,
            };
        }
        if (0..n).any(|i| winv.apply(i) == i && signs[i] == 0) {
            return None;
        }
        Some(GeomParam { winv, signs })
    }
}

impl fmt::Debug for GeomParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl fmt::Display for GeomParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl Serialize for GeomParam {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("GeomParam", 2)?;
        st.serialize_field("winv", &self.winv.cycle_string())?;
        st.serialize_field("signs", &self.sign_map())?;
        st.end()
    }
}

/// Involutions whose 2-cycles pair coordinates with integral difference.
pub fn admissible_involutions(lc: &InfChar) -> Vec<WeylElem> {
    crate::foundations::involutions(lc.n())
        .into_iter()
        .filter(|w| w.two_cycles().iter().all(|&(i, j)| lc.is_integral(i, j)))
        .collect()
}

/// All parameters at λ, 2^{#fixed} per admissible involution.
pub fn enumerate_params(lc: &InfChar) -> Vec<GeomParam> {
    let n = lc.n();
    let mut out = vec![];
    for w in admissible_involutions(lc) {
        let fixed = w.fixed_points();
        for mask in 0u32..(1 << fixed.len()) {
            let mut signs = vec![0i8; n];
            for (k, &f) in fixed.iter().enumerate() {
                signs[f] = if mask >> k & 1 == 1 { -1 } else { 1 };
            }
            out.push(GeomParam::new(w.clone(), signs));
        }
    }
    out.sort();
    out
}

/// w′ -> w0 w′ w0, signs moved along i -> N+1-i.
pub fn theta_action(xi: &GeomParam) -> GeomParam {
    let n = xi.n();
    let winv = crate::foundations::theta_on_weyl(&xi.winv);
    let signs = (0..n).map(|i| xi.signs[n - 1 - i]).collect();
    GeomParam { winv, signs }
}

/// Cross action by σ in W(λ); a sign moved from f to σ(f) picks up (-1)^{λ_f-λ_σ(f)}.
pub fn cross_by(lc: &InfChar, sigma: &WeylElem, xi: &GeomParam) -> GeomParam {
    let n = xi.n();
    let winv = xi.winv.conjugate_by(sigma);
    let mut signs = vec![0i8; n];
    for f in 0..n {
        if xi.signs[f] != 0 {
            let g = sigma.apply(f);
            let k = lc
                .int_diff(f, g)
                .expect("cross action by an element outside W(λ)");
            signs[g] = xi.signs[f] * if k.rem_euclid(2) == 0 { 1 } else { -1 };
        }
    }
    GeomParam { winv, signs }
}

/// Sign condition for a real root e_i-e_j (both fixed) to satisfy parity.
pub fn is_parity(lc: &InfChar, xi: &GeomParam, i: usize, j: usize) -> bool {
    let Some(k) = lc.int_diff(i, j) else { return false };
    let want = if (k + 1).rem_euclid(2) == 0 { 1 } else { -1 };
    xi.signs[i] != 0 && xi.signs[j] != 0 && xi.signs[i] * xi.signs[j] == want
}

/// Primal Cayley transform through the 2-cycle (i j): both parity sign choices.
pub fn split_cycle(lc: &InfChar, xi: &GeomParam, i: usize, j: usize) -> Vec<GeomParam> {
    if xi.winv.apply(i) != j {
        return vec![];
    }
    let Some(k) = lc.int_diff(i, j) else { return vec![] };
    let prod: i8 = if (k + 1).rem_euclid(2) == 0 { 1 } else { -1 };
    let n = xi.n();
    let winv = xi.winv.compose(&WeylElem::transposition(n, i, j));
    let mut out: Vec<GeomParam> = [1i8, -1]
        .iter()
        .map(|&a| {
            let mut signs = xi.signs.clone();
            signs[i] = a;
            signs[j] = a * prod;
            GeomParam::new(winv.clone(), signs)
        })
        .collect();
    out.sort();
    out
}

/// Primal inverse Cayley transform through a real parity root: merge i, j.
pub fn merge_fixed(lc: &InfChar, xi: &GeomParam, i: usize, j: usize) -> Vec<GeomParam> {
    if xi.winv.apply(i) != i || xi.winv.apply(j) != j || !is_parity(lc, xi, i, j) {
        return vec![];
    }
    let n = xi.n();
    let winv = xi.winv.compose(&WeylElem::transposition(n, i, j));
    let mut signs = xi.signs.clone();
    signs[i] = 0;
    signs[j] = 0;
    vec![GeomParam::new(winv, signs)]
}

/// l^I: -1/2(#{α in R^+(λ) : -w′α in R^+(λ)} + #2-cycles).
pub fn integral_length(lc: &InfChar, xi: &GeomParam) -> i64 {
    let w = &xi.winv;
    let count = integral_roots(lc)
        .into_iter()
        .filter(|&(i, j)| w.apply(j) < w.apply(i))
        .count() as i64;
    let dim = w.two_cycles().len() as i64;
    let total = count + dim;
    assert!(total % 2 == 0, "half-integral integral length at {}", xi);
    -total / 2
}

/// The absolute dual-side length -1/2(#{α > 0 : w′α > 0} + dim h^{w′}), possibly half-integral.
pub fn dual_absolute_length(lc: &InfChar, xi: &GeomParam) -> Rat {
    let w = &xi.winv;
    let count = integral_roots(lc)
        .into_iter()
        .filter(|&(i, j)| w.apply(i) < w.apply(j))
        .count() as i64;
    let dim = (w.fixed_points().len() + w.two_cycles().len()) as i64;
    Rat::new(-(count + dim), 2)
}

/// l^I_ϑ from the restricted roots of (GL_N^ϑ)^0 on h^ϑ.
///
/// The roots used are the restrictions to h^ϑ of the λ-integral roots of GL_N,
/// so that their Weyl group is W(λ)^ϑ: β ↦ primitive direction of β∨ + ϑβ∨,
/// oriented by λ. These are multiples of E_i ± E_j and E_i, with
/// E_i = e_i - e_{N+1-i}. θ acts on h^ϑ as -w′.
pub fn theta_integral_length(lc: &InfChar, xi: &GeomParam) -> Option<i64> {
    if !xi.is_theta_fixed() {
        return None;
    }
    let n = lc.n();
    let m = n / 2;
    let e = |i: usize| -> Vec<i64> {
        let mut v = vec![0i64; n];
        v[i] += 1;
        v[n - 1 - i] -= 1;
        v
    };
    let pair = |v: &[i64]| -> Rat {
        v.iter()
            .enumerate()
            .fold(Rat::zero(), |acc, (i, &c)| acc + lc.get(i) * c)
    };
    let mut positive: Vec<Vec<i64>> = vec![];
    for (i, j) in integral_roots(lc) {
        let mut v = vec![0i64; n];
        v[i] += 1;
        v[j] -= 1;
        v[n - 1 - j] += 1;
        v[n - 1 - i] -= 1;
        let g = v.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
        let mut v: Vec<i64> = v.iter().map(|x| x / g).collect();
        if !pair(&v).is_positive() {
            v = v.iter().map(|x| -x).collect();
        }
        if !positive.contains(&v) {
            positive.push(v);
        }
    }
    let theta = |v: &[i64]| -> Vec<i64> {
        let mut out = vec![0i64; n];
        for (k, &c) in v.iter().enumerate() {
            out[xi.winv.apply(k)] -= c;
        }
        out
    };
    let count = positive
        .iter()
        .filter(|c| positive.contains(&theta(c)))
        .count() as i64;
    // dim of the θ-fixed part of h^ϑ: basis E_1..E_m, θE_i = -E_{w′(i)} up to the flip.
    let basis: Vec<Vec<i64>> = (0..m).map(e).collect();
    let mut dim = 0i64;
    let mut seen = vec![false; m];
    for i in 0..m {
        if seen[i] {
            continue;
        }
        let img = theta(&basis[i]);
        // θ permutes ±E_k; find k and sign
        let k = (0..m).find(|&k| img[k] != 0).expect("θ preserves h^ϑ");
        let s = img[k];
        if k == i {
            seen[i] = true;
            if s > 0 {
                dim += 1;
            }
        } else {
            // a 2-cycle of coordinates contributes one fixed direction
            seen[i] = true;
            seen[k] = true;
            dim += 1;
        }
    }
    let total = count + dim;
    assert!(total % 2 == 0, "half-integral ϑ-length at {}", xi);
    Some(-total / 2)
}
