use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::summand::{summand_duality_type, AParameter, DualityType, QuasiChar, WRSummand};
use super::ArthurError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DatumKind {
    Simple1,
    Simple2,
}

/// Real form of SO_N for Simple1 with even N.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Embedding {
    #[default]
    Split,
    Quasisplit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupTag {
    Sp,
    SOodd,
    SOevenSplit,
    SOevenQuasi,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct EndoDatum {
    pub kind: DatumKind,
    #[serde(rename = "N")]
    pub n: usize,
    pub group: GroupTag,
    /// diagonal of s
    pub s: Vec<i8>,
}

/// JSON form of a datum request: {"kind":"simple1","N":3} with optional "embedding".
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumSpec {
    pub kind: DatumKind,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(default)]
    pub embedding: Embedding,
}

impl EndoDatum {
    /// Rank of the endoscopic group's defining representation.
    pub fn group_name(&self) -> String {
        match self.group {
            GroupTag::Sp => format!("Sp_{}", self.n - 1),
            GroupTag::SOodd => format!("SO_{}", self.n + 1),
            GroupTag::SOevenSplit => format!("SO_{} (split)", self.n),
            GroupTag::SOevenQuasi => format!("SO_{} (quasisplit)", self.n),
        }
    }

    /// Type of the dual group's standard representation.
    pub fn dual_type(&self) -> DualityType {
        match self.group {
            GroupTag::SOodd => DualityType::Symplectic,
            _ => DualityType::Orthogonal,
        }
    }

    /// Determinant an orthogonal parameter must have; None for symplectic.
    pub fn required_det(&self) -> Option<QuasiChar> {
        match self.group {
            GroupTag::SOodd => None,
            GroupTag::Sp | GroupTag::SOevenSplit => Some(QuasiChar::trivial()),
            GroupTag::SOevenQuasi => Some(QuasiChar::sgn()),
        }
    }

    pub fn is_so_even(&self) -> bool {
        matches!(self.group, GroupTag::SOevenSplit | GroupTag::SOevenQuasi)
    }
}

pub fn endoscopic_datum(kind: DatumKind, n: usize, embedding: Embedding) -> Result<EndoDatum, ArthurError> {
    if n == 0 {
        return Err(ArthurError::InvalidDatum("N must be positive".into()));
    }
    let alternating: Vec<i8> = (0..n).map(|k| if k % 2 == 0 { 1 } else { -1 }).collect();
    let (group, s) = match kind {
        DatumKind::Simple1 if n % 2 == 1 => (GroupTag::Sp, alternating),
        DatumKind::Simple1 => (
            match embedding {
                Embedding::Split => GroupTag::SOevenSplit,
                Embedding::Quasisplit => GroupTag::SOevenQuasi,
            },
            alternating,
        ),
        DatumKind::Simple2 if n % 2 == 0 => {
            // antidiagonal (−1 above, +1 below) times the inverse of the form
            let s = (0..n)
                .map(|k| if k < n / 2 { -alternating[k] } else { alternating[k] })
                .collect();
            (GroupTag::SOodd, s)
        }
        DatumKind::Simple2 => {
            return Err(ArthurError::InvalidDatum(format!("Simple2 needs even N, got {}", n)))
        }
    };
    Ok(EndoDatum { kind, n, group, s })
}

impl DatumSpec {
    pub fn resolve(&self) -> Result<EndoDatum, ArthurError> {
        endoscopic_datum(self.kind, self.n, self.embedding)
    }
}

/// A ∨G-orbit of L-parameters, recorded by its multiset of W_ℝ-summands.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GOrbit {
    pub group: GroupTag,
    pub summands: Vec<WRSummand>,
}

impl fmt::Display for GOrbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.summands.iter().map(|x| x.to_string()).collect();
        write!(f, "{:?}[{}]", self.group, s.join(", "))
    }
}

/// Multiset of (summand, type) must be closed under duals, with every self-dual
/// member of the dual group's type.
fn types_admissible(items: &[(WRSummand, DualityType)], d: &EndoDatum) -> bool {
    let mut counts: BTreeMap<WRSummand, i64> = BTreeMap::new();
    for (s, ty) in items {
        match ty {
            DualityType::NonSelfDual => *counts.entry(*s).or_default() += 1,
            t if *t == d.dual_type() => {}
            _ => return false,
        }
    }
    counts
        .iter()
        .all(|(s, c)| counts.get(&s.dual()).copied().unwrap_or(0) == *c)
}

fn det_ok(phi: &[WRSummand], d: &EndoDatum) -> bool {
    match d.required_det() {
        None => true,
        Some(want) => phi.iter().fold(QuasiChar::trivial(), |acc, s| acc.times(s.det())) == want,
    }
}

/// The ∨G-orbit through which an L-parameter factors, if any.
pub fn descend_orbit(phi: &[WRSummand], d: &EndoDatum) -> Option<GOrbit> {
    let dim: usize = phi.iter().map(|s| s.dim()).sum();
    if dim != d.n {
        return None;
    }
    let items: Vec<(WRSummand, DualityType)> = phi.iter().map(|s| (*s, s.duality_type())).collect();
    if !types_admissible(&items, d) || !det_ok(phi, d) {
        return None;
    }
    let mut summands = phi.to_vec();
    summands.sort();
    Some(GOrbit {
        group: d.group,
        summands,
    })
}

/// Does ψ factor through ∨G^Γ? Types are read on μ⊠ν_n, the determinant on φ_ψ.
pub fn psi_factors(psi: &AParameter, d: &EndoDatum) -> bool {
    if psi.dim() != d.n {
        return false;
    }
    // non-self-dual μ⊠ν_n must pair with μ^∨⊠ν_n
    let mut counts: BTreeMap<(WRSummand, u32), i64> = BTreeMap::new();
    for s in &psi.summands {
        let ty = summand_duality_type(&s.mu, s.n);
        if ty == DualityType::NonSelfDual {
            *counts.entry((s.mu, s.n)).or_default() += s.mult as i64;
        } else if ty != d.dual_type() {
            return false;
        }
    }
    let closed = counts
        .iter()
        .all(|((mu, n), c)| counts.get(&(mu.dual(), *n)).copied().unwrap_or(0) == *c);
    closed && det_ok(&super::summand::phi_of_psi(psi), d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundations::Rat;

    fn d(a: i64, b: i64) -> WRSummand {
        WRSummand::two_dim(Rat::int(a), Rat::int(b)).unwrap()
    }

    #[test]
    fn data() {
        let s1 = endoscopic_datum(DatumKind::Simple1, 3, Embedding::Split).unwrap();
        assert_eq!(s1.group, GroupTag::Sp);
        assert_eq!(s1.group_name(), "Sp_2");
        assert_eq!(s1.s, vec![1, -1, 1]);
        let s2 = endoscopic_datum(DatumKind::Simple2, 2, Embedding::Split).unwrap();
        assert_eq!(s2.group_name(), "SO_3");
        assert_eq!(s2.s, vec![-1, -1]);
        let q = endoscopic_datum(DatumKind::Simple1, 4, Embedding::Quasisplit).unwrap();
        assert_eq!(q.group, GroupTag::SOevenQuasi);
        assert!(matches!(
            endoscopic_datum(DatumKind::Simple2, 3, Embedding::Split),
            Err(ArthurError::InvalidDatum(_))
        ));
    }

    #[test]
    fn descent_examples() {
        let sp2 = endoscopic_datum(DatumKind::Simple1, 3, Embedding::Split).unwrap();
        let sgn = WRSummand::one_dim(1, Rat::zero());
        let triv = WRSummand::one_dim(0, Rat::zero());
        assert!(descend_orbit(&[d(1, -1), sgn], &sp2).is_some());
        assert!(descend_orbit(&[d(1, -1), triv], &sp2).is_none());
        let so3 = endoscopic_datum(DatumKind::Simple2, 2, Embedding::Split).unwrap();
        let pair = [
            WRSummand::one_dim(0, Rat::new(1, 2)),
            WRSummand::one_dim(0, Rat::new(-1, 2)),
        ];
        assert!(descend_orbit(&pair, &so3).is_some());
        // an orthogonal summand cannot enter Sp_2
        assert!(descend_orbit(&[d(1, -1)], &so3).is_none());
        // unpaired non-self-dual member
        assert!(descend_orbit(&[WRSummand::one_dim(0, Rat::new(1, 2)), triv], &sp2).is_none());
    }

    #[test]
    fn so_even_determinant() {
        let split = endoscopic_datum(DatumKind::Simple1, 2, Embedding::Split).unwrap();
        let quasi = endoscopic_datum(DatumKind::Simple1, 2, Embedding::Quasisplit).unwrap();
        assert!(descend_orbit(&[d(1, -1)], &quasi).is_some());
        assert!(descend_orbit(&[d(1, -1)], &split).is_none());
        let pair = [WRSummand::one_dim(0, Rat::int(1)), WRSummand::one_dim(0, Rat::int(-1))];
        assert!(descend_orbit(&pair, &split).is_some());
    }
}
