use crate::foundations::{InfChar, LaurentPoly};
use crate::params::{integral_length, theta_integral_length, GeomParam, Side};

use super::module::HeckeElem;
use super::transition::{whit_sign, Transitions};
use super::HeckeError;

/// (−1)^{l^I(ξ) − l^I_ϑ(ξ)}: M(ξ)^∼ = sign · M(ξ)^+.
pub fn whittaker_sign(lc: &InfChar, xi: &GeomParam) -> Result<i64, HeckeError> {
    let lt = theta_integral_length(lc, xi).ok_or_else(|| HeckeError::NotThetaFixed(xi.label()))?;
    Ok(whit_sign(integral_length(lc, xi), lt))
}

/// Rescale every basis symbol between the Atlas and Whittaker extensions. Involutive.
pub fn whittaker_normalize(lc: &InfChar, e: &HeckeElem) -> Result<HeckeElem, HeckeError> {
    let mut out = HeckeElem::zero(e.side);
    for (xi, c) in &e.terms {
        out.terms.insert(xi.clone(), c.scale(whittaker_sign(lc, xi)?));
    }
    Ok(out)
}

fn constant(c: &LaurentPoly, xi: &GeomParam) -> Result<i64, HeckeError> {
    match c.terms().collect::<Vec<_>>().as_slice() {
        [] => Ok(0),
        [(0, v)] => Ok(*v),
        _ => Err(HeckeError::BlockMismatch(format!("coefficient at {} is not evaluated at q = 1", xi.label()))),
    }
}

/// ⟨a, b⟩ with a in the M^+ basis (primal side) and b in the μ^+ basis (dual side),
/// ⟨M(ξ)^+, μ(ξ′)^+⟩ = (−1)^{l^I(ξ)−l^I_ϑ(ξ)} δ.
pub fn pairing_eval(t: &Transitions, a: &HeckeElem, b: &HeckeElem) -> Result<i64, HeckeError> {
    if a.side != Side::Primal || b.side != Side::Dual {
        return Err(HeckeError::BlockMismatch("expected (representation, sheaf) sides".into()));
    }
    let s = t
        .whit_signs()
        .ok_or_else(|| HeckeError::BlockMismatch("pairing needs a twisted block".into()))?;
    let idx = |xi: &GeomParam| {
        t.members
            .iter()
            .position(|m| m == xi)
            .ok_or_else(|| HeckeError::BlockMismatch(format!("{} outside the block", xi.label())))
    };
    for xi in b.terms.keys() {
        idx(xi)?;
    }
    let mut total = 0;
    for (xi, c) in &a.terms {
        let i = idx(xi)?;
        total += constant(c, xi)? * constant(&b.coeff(xi), xi)? * s[i];
    }
    Ok(total)
}

/// π(ξ)^∼ in the M^+ basis.
pub fn irreducible_whit(t: &Transitions, y: usize) -> Option<HeckeElem> {
    let s = t.whit_signs()?;
    let nw = t.n_whit.as_ref()?;
    let mut e = HeckeElem::zero(Side::Primal);
    for (x, m) in t.members.iter().enumerate() {
        let v = nw.entries[x][y] * s[x];
        if v != 0 {
            e.terms.insert(m.clone(), LaurentPoly::constant(v));
        }
    }
    Some(e)
}

/// P(ξ)^+ in the μ^+ basis: Σ (−1)^{d(ξ′)} c_g^ϑ(ξ′,ξ) μ(ξ′)^+.
pub fn sheaf_element(t: &Transitions, y: usize) -> HeckeElem {
    let mut e = HeckeElem::zero(Side::Dual);
    for (x, m) in t.members.iter().enumerate() {
        let v = t.d_sign(x) * t.c.entries[x][y];
        if v != 0 {
            e.terms.insert(m.clone(), LaurentPoly::constant(v));
        }
    }
    e
}
