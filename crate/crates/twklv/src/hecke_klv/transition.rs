use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::params::GeomParam;

use super::klv::KLVTable;
use super::HeckeError;

pub type IntMatrix = Vec<Vec<i64>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TransitionKind {
    /// M = Σ m_r π
    MR,
    /// from the dual table via the sheaf decomposition
    CG,
    MRTheta,
    CGTheta,
    /// Whittaker-normalized m_r^ϑ
    MRWhit,
    /// inverse of `MRWhit`: π^∼ = Σ n M^∼
    NWhit,
    /// inverse of `MR`
    MRInverse,
    /// inverse of `MRTheta`
    MRThetaInverse,
}

impl TransitionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TransitionKind::MR => "m_r",
            TransitionKind::CG => "c_g",
            TransitionKind::MRTheta => "m_r_theta",
            TransitionKind::CGTheta => "c_g_theta",
            TransitionKind::MRWhit => "m_r_whit",
            TransitionKind::NWhit => "n_whit",
            TransitionKind::MRInverse => "m_r_inv",
            TransitionKind::MRThetaInverse => "m_r_theta_inv",
        }
    }
}

/// Integer matrix over a block; `entries[x][y]` is the (ξ′ = members[x], ξ = members[y]) entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransitionMatrix {
    pub kind: TransitionKind,
    pub members: Vec<GeomParam>,
    pub entries: IntMatrix,
}

impl TransitionMatrix {
    pub fn get(&self, x: &GeomParam, y: &GeomParam) -> Option<i64> {
        let i = self.members.iter().position(|m| m == x)?;
        let j = self.members.iter().position(|m| m == y)?;
        Some(self.entries[i][j])
    }

    pub fn column(&self, y: usize) -> Vec<i64> {
        self.entries.iter().map(|r| r[y]).collect()
    }
}

/// Exact inverse over ℤ; fails if singular or if the inverse is not integral.
pub fn integer_inverse(a: &IntMatrix) -> Result<IntMatrix, HeckeError> {
    let n = a.len();
    let mut m: Vec<Vec<Ratio<i128>>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Ratio<i128>> = row.iter().map(|&x| Ratio::from_integer(x as i128)).collect();
            r.extend((0..n).map(|j| if i == j { Ratio::one() } else { Ratio::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .ok_or_else(|| HeckeError::NotInvertible("singular matrix".into()))?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x *= inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col];
                for c in 0..2 * n {
                    let v = m[col][c];
                    m[r][c] -= f * v;
                }
            }
        }
    }
    m.iter()
        .map(|row| {
            row[n..]
                .iter()
                .map(|x| {
                    if x.is_integer() {
                        Ok(x.to_integer() as i64)
                    } else {
                        Err(HeckeError::NotInvertible("inverse is not integral".into()))
                    }
                })
                .collect()
        })
        .collect()
}

pub(crate) fn parity(d: i64) -> i64 {
    if d.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// All transition data of one block, indexed by the primal member order.
#[derive(Clone, Debug, Serialize)]
pub struct Transitions {
    pub twisted: bool,
    pub members: Vec<GeomParam>,
    /// l^I
    pub lengths: Vec<i64>,
    /// l^I_ϑ, twisted blocks only
    pub theta_lengths: Option<Vec<i64>>,
    /// m_r or m_r^ϑ
    pub m: TransitionMatrix,
    /// c_g or c_g^ϑ
    pub c: TransitionMatrix,
    pub m_inv: TransitionMatrix,
    /// twisted only
    pub m_whit: Option<TransitionMatrix>,
    pub n_whit: Option<TransitionMatrix>,
}

/// Whittaker/Atlas sign (−1)^{l^I − l^I_ϑ}.
pub fn whit_sign(l: i64, lt: i64) -> i64 {
    parity(l - lt)
}

impl Transitions {
    /// Relative sign (−1)^{d(ξ)} with d measured from the block minimum.
    pub fn d_sign(&self, x: usize) -> i64 {
        let lmin = self.lengths.iter().min().copied().unwrap_or(0);
        parity(self.lengths[x] - lmin)
    }

    pub fn whit_signs(&self) -> Option<Vec<i64>> {
        let lt = self.theta_lengths.as_ref()?;
        Some(self.lengths.iter().zip(lt).map(|(&a, &b)| whit_sign(a, b)).collect())
    }

    pub fn all(&self) -> Vec<&TransitionMatrix> {
        let mut v = vec![&self.m, &self.c, &self.m_inv];
        v.extend(self.m_whit.iter());
        v.extend(self.n_whit.iter());
        v
    }
}

/// Build transitions from the primal table (rep side) and the dual table (sheaf side).
///
/// π(ξ) = Σ (−1)^{Δl^I} P(ξ′,ξ)(1) M(ξ′) gives m_r as an inverse;
/// c_g(ξ′,ξ) = (−1)^{Δl^I} ∨P(∨ξ′,∨ξ)(1).
pub fn transition_matrices(
    primal: &KLVTable,
    dual: &KLVTable,
    primal_lengths: &[i64],
    theta_lengths: Option<&[i64]>,
) -> Result<Transitions, HeckeError> {
    if primal.twisted != dual.twisted || primal.len() != dual.len() {
        return Err(HeckeError::BlockMismatch("primal and dual tables differ".into()));
    }
    let n = primal.len();
    let members = primal.members.clone();
    let pos: Vec<usize> = members
        .iter()
        .map(|m| dual.index_of(m).ok_or_else(|| HeckeError::BlockMismatch(m.label())))
        .collect::<Result<_, _>>()?;
    let l = primal_lengths;
    let p1 = primal.at_one();
    let q1 = dual.at_one();
    let mut a = vec![vec![0i64; n]; n];
    let mut c = vec![vec![0i64; n]; n];
    for x in 0..n {
        for y in 0..n {
            let s = parity(l[y] - l[x]);
            a[x][y] = s * p1[x][y];
            c[x][y] = s * q1[pos[x]][pos[y]];
        }
    }
    let m = integer_inverse(&a)?;
    let (mk, ck, ik) = if primal.twisted {
        (TransitionKind::MRTheta, TransitionKind::CGTheta, TransitionKind::MRThetaInverse)
    } else {
        (TransitionKind::MR, TransitionKind::CG, TransitionKind::MRInverse)
    };
    let wrap = |kind, entries| TransitionMatrix {
        kind,
        members: members.clone(),
        entries,
    };
    let (m_whit, n_whit) = match theta_lengths {
        Some(lt) if primal.twisted => {
            let s: Vec<i64> = (0..n).map(|i| whit_sign(l[i], lt[i])).collect();
            let mw: IntMatrix = (0..n)
                .map(|x| (0..n).map(|y| s[x] * s[y] * m[x][y]).collect())
                .collect();
            let nw = integer_inverse(&mw)?;
            (
                Some(wrap(TransitionKind::MRWhit, mw)),
                Some(wrap(TransitionKind::NWhit, nw)),
            )
        }
        _ => (None, None),
    };
    Ok(Transitions {
        twisted: primal.twisted,
        members: members.clone(),
        lengths: l.to_vec(),
        theta_lengths: theta_lengths.map(|t| t.to_vec()),
        m: wrap(mk, m),
        c: wrap(ck, c),
        m_inv: wrap(ik, a),
        m_whit,
        n_whit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_unitriangular() {
        let a = vec![vec![1, -1, 2], vec![0, 1, 3], vec![0, 0, 1]];
        let b = integer_inverse(&a).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let s: i64 = (0..3).map(|k| a[i][k] * b[k][j]).sum();
                assert_eq!(s, (i == j) as i64);
            }
        }
    }

    #[test]
    fn non_integral_inverse_is_rejected() {
        assert!(matches!(
            integer_inverse(&vec![vec![2]]),
            Err(HeckeError::NotInvertible(_))
        ));
        assert!(integer_inverse(&vec![vec![1, 1], vec![1, 1]]).is_err());
    }
}
