//! Enumeration of small self-dual A-parameters and the packet-level checks on them.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::foundations::Rat;

use super::endoscopy::{endoscopic_datum, psi_factors, DatumKind, Embedding, EndoDatum};
use super::packet::arthur_packet;
use super::summand::{infl_char_of, AParameter, ASummand, WRSummand};

/// Bounded W_ℝ-summands with |exponent| ≤ 2.
fn bounded_summands() -> Vec<WRSummand> {
    let mut v = vec![
        WRSummand::one_dim(0, Rat::zero()),
        WRSummand::one_dim(1, Rat::zero()),
    ];
    for k in 1..=4 {
        let a = Rat::new(k, 2);
        v.push(WRSummand::TwoDim { a, b: -a });
    }
    v
}

/// Every datum for GL_n.
pub fn data_for(n: usize) -> Vec<EndoDatum> {
    let mut out = vec![endoscopic_datum(DatumKind::Simple1, n, Embedding::Split).unwrap()];
    if n % 2 == 0 {
        out.push(endoscopic_datum(DatumKind::Simple1, n, Embedding::Quasisplit).unwrap());
        out.push(endoscopic_datum(DatumKind::Simple2, n, Embedding::Split).unwrap());
    }
    out
}

/// Multiplicity-free ψ = ⊞ μ_i ⊠ ν_{n_i} of dimension ≤ max_n with bounded μ_i and regular λ.
/// With `tempered`, all n_i = 1.
pub fn self_dual_psis(max_n: usize, tempered: bool) -> Vec<AParameter> {
    let mut atoms: Vec<ASummand> = vec![];
    for mu in bounded_summands() {
        let max_k = if tempered { 1 } else { max_n };
        for n in 1..=max_k as u32 {
            if mu.dim() * n as usize <= max_n {
                atoms.push(ASummand { mu, n, mult: 1 });
            }
        }
    }
    let mut out = vec![];
    let mut seen = BTreeSet::new();
    let m = atoms.len();
    for mask in 1u32..(1 << m) {
        let chosen: Vec<ASummand> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| atoms[i].clone()).collect();
        let psi = AParameter { summands: chosen };
        if psi.dim() > max_n || infl_char_of(&psi).is_err() {
            continue;
        }
        let key = format!("{}", psi);
        if seen.insert(key) {
            out.push(psi);
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct PacketCheck {
    pub psi: String,
    pub datum: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

/// Tempered ψ: a single orbit with coefficient +1. Others: the packet assembles
/// without descent failure and distinct orbits come from distinct GL_N parameters.
pub fn packet_checks(max_n: usize) -> Vec<PacketCheck> {
    let tempered: BTreeSet<String> = self_dual_psis(max_n, true).iter().map(|p| p.to_string()).collect();
    let mut out = vec![];
    for psi in self_dual_psis(max_n, false) {
        for d in data_for(psi.dim()) {
            if !psi_factors(&psi, &d) {
                continue;
            }
            let r = arthur_packet(&psi, &d);
            let verdict = match &r {
                Err(e) => Err(e.to_string()),
                Ok(p) if tempered.contains(&psi.to_string()) => {
                    if p.eta_ar.terms.len() == 1 && p.eta_ar.terms[0].coeff == 1 {
                        Ok(())
                    } else {
                        Err(format!("tempered packet has {} terms", p.eta_ar.terms.len()))
                    }
                }
                Ok(p) => {
                    let gl: BTreeSet<_> = p.eta_ar.terms.iter().map(|t| &t.gl_param).collect();
                    let orbits: BTreeSet<_> = p.eta_ar.terms.iter().map(|t| &t.orbit).collect();
                    if gl.len() == orbits.len() && p.eta_ar.terms.iter().any(|t| t.gl_param == p.xi_psi) {
                        Ok(())
                    } else {
                        Err("orbit map not injective or ξ_ψ missing".into())
                    }
                }
            };
            out.push(PacketCheck {
                psi: psi.to_string(),
                datum: d.group_name(),
                ok: verdict.is_ok(),
                detail: verdict.err().unwrap_or_default(),
            });
        }
    }
    out
}
