use serde::Serialize;

use crate::foundations::WeylElem;

/// (λ, τ, ℓ, t) with integer entries, together with the twisted involution w it extends.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtendedParam {
    pub lam: Vec<i64>,
    pub tau: Vec<i64>,
    pub ell: Vec<i64>,
    pub t: Vec<i64>,
    #[serde(skip)]
    pub w: WeylElem,
}

impl ExtendedParam {
    /// Preferred form: ℓ = t = 0.
    pub fn preferred(w: WeylElem, lam: Vec<i64>, tau: Vec<i64>) -> Self {
        let n = lam.len();
        ExtendedParam {
            lam,
            tau,
            ell: vec![0; n],
            t: vec![0; n],
            w,
        }
    }
}

/// A power of i, stored mod 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FourthRoot(pub u8);

impl FourthRoot {
    pub fn as_str(&self) -> &'static str {
        ["1", "i", "-1", "-i"][self.0 as usize % 4]
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// i^{<τ,(1+w)t>} (-1)^{<λ,t>}
pub fn z_of_extended(e: &ExtendedParam) -> FourthRoot {
    let n = e.t.len();
    let mut wt = vec![0i64; n];
    for (k, &c) in e.t.iter().enumerate() {
        wt[e.w.apply(k)] += c;
    }
    let one_plus: Vec<i64> = e.t.iter().zip(&wt).map(|(a, b)| a + b).collect();
    let k = dot(&e.tau, &one_plus) + 2 * dot(&e.lam, &e.t);
    FourthRoot(k.rem_euclid(4) as u8)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_zero_gives_one() {
        let e = ExtendedParam::preferred(WeylElem::identity(3), vec![1, 0, -1], vec![1, 1, 0]);
        assert_eq!(z_of_extended(&e).as_str(), "1");
    }

    #[test]
    fn odd_lambda_pairing() {
        let e = ExtendedParam {
            lam: vec![1, 0],
            tau: vec![0, 0],
            ell: vec![0, 0],
            t: vec![1, 0],
            w: WeylElem::identity(2),
        };
        assert_eq!(z_of_extended(&e).as_str(), "-1");
    }

    #[test]
    fn tau_pairing_two() {
        // w = e so (1+w)t = 2t; <τ,2t> = 2 and <λ,t> = 0
        let e = ExtendedParam {
            lam: vec![0, 0],
            tau: vec![1, 0],
            ell: vec![0, 0],
            t: vec![1, 0],
            w: WeylElem::identity(2),
        };
        assert_eq!(z_of_extended(&e).as_str(), "-1");
    }
}
