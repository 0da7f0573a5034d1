use std::fmt;

use serde::{Deserialize, Serialize};

use crate::foundations::{validate_infchar, InfChar, Rat};

use super::ArthurError;

/// Irreducible representation of W_ℝ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WRSummand {
    /// sgn^δ |·|^t
    OneDim { delta: u8, t: Rat },
    /// induced from ℂ^×, exponents a > b with a − b ∈ ℤ
    TwoDim { a: Rat, b: Rat },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DualityType {
    Orthogonal,
    Symplectic,
    NonSelfDual,
}

impl DualityType {
    fn times(self, o: DualityType) -> DualityType {
        use DualityType::*;
        match (self, o) {
            (NonSelfDual, _) | (_, NonSelfDual) => NonSelfDual,
            (a, b) if a == b => Orthogonal,
            _ => Symplectic,
        }
    }
}

/// A character of ℝ^× written sgn^δ |·|^t, δ mod 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuasiChar {
    pub delta: u8,
    pub t: Rat,
}

impl QuasiChar {
    pub fn trivial() -> Self {
        QuasiChar { delta: 0, t: Rat::zero() }
    }

    pub fn sgn() -> Self {
        QuasiChar { delta: 1, t: Rat::zero() }
    }

    pub fn times(self, o: QuasiChar) -> QuasiChar {
        QuasiChar {
            delta: (self.delta + o.delta) % 2,
            t: self.t + o.t,
        }
    }
}

impl WRSummand {
    pub fn one_dim(delta: u8, t: Rat) -> Self {
        WRSummand::OneDim { delta: delta % 2, t }
    }

    /// Orders the exponents so that a > b.
    pub fn two_dim(x: Rat, y: Rat) -> Result<Self, ArthurError> {
        let (a, b) = if x > y { (x, y) } else { (y, x) };
        if a == b || !(a - b).is_integer() {
            return Err(ArthurError::InvalidParameter(format!(
                "two-dimensional summand needs a - b a positive integer, got ({}, {})",
                x, y
            )));
        }
        Ok(WRSummand::TwoDim { a, b })
    }

    pub fn dim(&self) -> usize {
        match self {
            WRSummand::OneDim { .. } => 1,
            WRSummand::TwoDim { .. } => 2,
        }
    }

    pub fn validate(&self) -> Result<(), ArthurError> {
        match *self {
            WRSummand::OneDim { delta, .. } if delta > 1 => {
                Err(ArthurError::InvalidParameter(format!("delta must be 0 or 1, got {}", delta)))
            }
            WRSummand::TwoDim { a, b } => WRSummand::two_dim(a, b).map(|_| ()),
            _ => Ok(()),
        }
    }

    pub fn exponents(&self) -> Vec<Rat> {
        match *self {
            WRSummand::OneDim { t, .. } => vec![t],
            WRSummand::TwoDim { a, b } => vec![a, b],
        }
    }

    /// Twist by |·|^s.
    pub fn shift(&self, s: Rat) -> Self {
        match *self {
            WRSummand::OneDim { delta, t } => WRSummand::OneDim { delta, t: t + s },
            WRSummand::TwoDim { a, b } => WRSummand::TwoDim { a: a + s, b: b + s },
        }
    }

    pub fn dual(&self) -> Self {
        match *self {
            WRSummand::OneDim { delta, t } => WRSummand::OneDim { delta, t: -t },
            WRSummand::TwoDim { a, b } => WRSummand::TwoDim { a: -b, b: -a },
        }
    }

    pub fn is_bounded(&self) -> bool {
        match *self {
            WRSummand::OneDim { t, .. } => t.is_zero(),
            WRSummand::TwoDim { a, b } => (a + b).is_zero(),
        }
    }

    pub fn duality_type(&self) -> DualityType {
        match *self {
            WRSummand::OneDim { t, .. } if t.is_zero() => DualityType::Orthogonal,
            WRSummand::TwoDim { a, b } if (a + b).is_zero() => {
                if a.is_integer() {
                    DualityType::Orthogonal
                } else {
                    DualityType::Symplectic
                }
            }
            _ => DualityType::NonSelfDual,
        }
    }

    /// det OneDim = itself; det TwoDim(a,b) = sgn^{a−b+1}|·|^{a+b}.
    pub fn det(&self) -> QuasiChar {
        match *self {
            WRSummand::OneDim { delta, t } => QuasiChar { delta, t },
            WRSummand::TwoDim { a, b } => {
                let k = (a - b).to_integer().expect("a - b is integral");
                QuasiChar {
                    delta: (k + 1).rem_euclid(2) as u8,
                    t: a + b,
                }
            }
        }
    }
}

impl fmt::Display for WRSummand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WRSummand::OneDim { delta, t } => {
                let base = if *delta == 1 { "sgn" } else { "triv" };
                if t.is_zero() {
                    write!(f, "{}", base)
                } else {
                    write!(f, "{}|.|^{}", base, t)
                }
            }
            WRSummand::TwoDim { a, b } => write!(f, "D({},{})", a, b),
        }
    }
}

/// Type of μ ⊠ ν_n: ν_n is orthogonal for odd n and symplectic for even n; types multiply.
pub fn summand_duality_type(mu: &WRSummand, n: u32) -> DualityType {
    let nu = if n % 2 == 1 {
        DualityType::Orthogonal
    } else {
        DualityType::Symplectic
    };
    mu.duality_type().times(nu)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ASummand {
    pub mu: WRSummand,
    pub n: u32,
    #[serde(default = "one")]
    pub mult: u32,
}

fn one() -> u32 {
    1
}

/// ψ = ⊞ mult · (μ ⊠ ν_n).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AParameter {
    pub summands: Vec<ASummand>,
}

impl AParameter {
    pub fn new(summands: Vec<(WRSummand, u32)>) -> Self {
        AParameter {
            summands: summands
                .into_iter()
                .map(|(mu, n)| ASummand { mu, n, mult: 1 })
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.summands
            .iter()
            .map(|s| s.mult as usize * s.mu.dim() * s.n as usize)
            .sum()
    }

    pub fn is_tempered(&self) -> bool {
        self.summands.iter().all(|s| s.n == 1)
    }

    /// Shape checks; `strict` also demands bounded μ.
    pub fn validate(&self, strict: bool) -> Result<(), ArthurError> {
        if self.summands.is_empty() {
            return Err(ArthurError::InvalidParameter("no summands".into()));
        }
        for s in &self.summands {
            s.mu.validate()?;
            if s.n == 0 || s.mult == 0 {
                return Err(ArthurError::InvalidParameter("n and mult must be positive".into()));
            }
            if strict && !s.mu.is_bounded() {
                return Err(ArthurError::InvalidParameter(format!("{} is not bounded", s.mu)));
            }
        }
        Ok(())
    }
}

impl fmt::Display for AParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .summands
            .iter()
            .map(|s| {
                let base = format!("{}⊠ν{}", s.mu, s.n);
                if s.mult > 1 {
                    format!("{}·{}", s.mult, base)
                } else {
                    base
                }
            })
            .collect();
        write!(f, "{}", parts.join(" ⊞ "))
    }
}

/// Restriction along w ↦ (w, diag(|w|^{1/2}, |w|^{−1/2})): μ⊠ν_n ↦ μ|·|^{(n−1)/2}, …, μ|·|^{−(n−1)/2}.
pub fn phi_of_psi(psi: &AParameter) -> Vec<WRSummand> {
    let mut out = vec![];
    for s in &psi.summands {
        for _ in 0..s.mult {
            for k in 0..s.n as i64 {
                out.push(s.mu.shift(Rat::new(s.n as i64 - 1 - 2 * k, 2)));
            }
        }
    }
    out.sort();
    out
}

/// Sorted exponents of φ_ψ, validated.
pub fn infl_char_of(psi: &AParameter) -> Result<InfChar, ArthurError> {
    infl_char_of_phi(&phi_of_psi(psi))
}

pub fn infl_char_of_phi(phi: &[WRSummand]) -> Result<InfChar, ArthurError> {
    let lam: Vec<Rat> = phi.iter().flat_map(|s| s.exponents()).collect();
    Ok(validate_infchar(&lam)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triv() -> WRSummand {
        WRSummand::one_dim(0, Rat::zero())
    }

    #[test]
    fn phi_of_small_psis() {
        let psi = AParameter::new(vec![(triv(), 2)]);
        assert_eq!(
            phi_of_psi(&psi),
            vec![
                WRSummand::one_dim(0, Rat::new(-1, 2)),
                WRSummand::one_dim(0, Rat::new(1, 2))
            ]
        );
        assert_eq!(phi_of_psi(&AParameter::new(vec![(triv(), 1)])), vec![triv()]);
        let d = WRSummand::two_dim(Rat::int(1), Rat::int(-1)).unwrap();
        assert_eq!(phi_of_psi(&AParameter::new(vec![(d, 1)])), vec![d]);
    }

    #[test]
    fn infl_chars() {
        let lc = infl_char_of(&AParameter::new(vec![(triv(), 3)])).unwrap();
        assert_eq!(lc.label(), "1,0,-1");
        let d = WRSummand::two_dim(Rat::new(1, 2), Rat::new(-1, 2)).unwrap();
        assert_eq!(infl_char_of(&AParameter::new(vec![(d, 1)])).unwrap().label(), "1/2,-1/2");
        let e = infl_char_of(&AParameter::new(vec![(triv(), 1), (triv(), 1)])).unwrap_err();
        assert!(e.to_string().contains("NotRegular"), "{}", e);
    }

    #[test]
    fn duality_types() {
        assert_eq!(summand_duality_type(&triv(), 3), DualityType::Orthogonal);
        assert_eq!(summand_duality_type(&triv(), 2), DualityType::Symplectic);
        assert_eq!(
            summand_duality_type(&WRSummand::one_dim(0, Rat::new(1, 2)), 1),
            DualityType::NonSelfDual
        );
        let d = WRSummand::two_dim(Rat::new(1, 2), Rat::new(-1, 2)).unwrap();
        assert_eq!(summand_duality_type(&d, 1), DualityType::Symplectic);
        assert_eq!(summand_duality_type(&d, 2), DualityType::Orthogonal);
    }

    #[test]
    fn determinants() {
        let d = WRSummand::two_dim(Rat::int(1), Rat::int(-1)).unwrap();
        assert_eq!(d.det(), QuasiChar::sgn());
        assert_eq!(d.det().times(QuasiChar::sgn()), QuasiChar::trivial());
        let h = WRSummand::two_dim(Rat::new(1, 2), Rat::new(-1, 2)).unwrap();
        assert_eq!(h.det(), QuasiChar::trivial());
    }

    #[test]
    fn json_shape() {
        let v: AParameter = serde_json::from_str(
            r#"{"summands":[{"mu":{"kind":"onedim","delta":0,"t":"0"},"n":3,"mult":1}]}"#,
        )
        .unwrap();
        assert_eq!(v.dim(), 3);
        let back: AParameter = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(back, v);
        assert!(WRSummand::two_dim(Rat::int(1), Rat::new(1, 2)).is_err());
    }
}
