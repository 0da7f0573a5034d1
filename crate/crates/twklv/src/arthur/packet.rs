use serde::Serialize;

use crate::foundations::InfChar;
use crate::hecke_klv::{compute_block, whittaker_sign, BlockComputation};
use crate::params::{GeomParam, ParamSet};

use super::endoscopy::{descend_orbit, psi_factors, EndoDatum, GOrbit};
use super::langlands::{param_of_phi, phi_of_param};
use super::summand::{infl_char_of, phi_of_psi, AParameter};
use super::ArthurError;

/// Which basis a signed symbol refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SymbolBasis {
    /// M(ξ)^+
    StandardAtlas,
    /// π(ξ)^+
    IrreducibleAtlas,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignedSymbol {
    pub basis: SymbolBasis,
    pub param: GeomParam,
    pub coeff: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PacketTerm {
    pub orbit: GOrbit,
    pub coeff: i64,
    /// the GL_N parameter ε(S_G)
    pub gl_param: GeomParam,
}

/// η^Ar as Σ n · η^loc over G-orbits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StablePseudoChar {
    pub group: String,
    pub terms: Vec<PacketTerm>,
    /// even orthogonal groups: coefficients are on O_N-orbits
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outer: Option<&'static str>,
}

impl StablePseudoChar {
    pub fn coeff_of(&self, summands_of: impl Fn(&GOrbit) -> bool) -> Option<i64> {
        self.terms.iter().find(|t| summands_of(&t.orbit)).map(|t| t.coeff)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PacketResult {
    pub lambda: InfChar,
    pub xi_psi: GeomParam,
    pub eta_ar: StablePseudoChar,
    /// Whittaker-normalized inverse column: π(ξ_ψ)^∼ = Σ n_S M(S,1)^∼
    #[serde(rename = "n_S")]
    pub n_s: Vec<(GeomParam, i64)>,
}

/// ξ_ψ and its twisted block, computed.
pub fn psi_block(psi: &AParameter) -> Result<(InfChar, GeomParam, BlockComputation), ArthurError> {
    psi.validate(false)?;
    let lc = infl_char_of(psi)?;
    let xi = param_of_phi(&phi_of_psi(psi), &lc)?;
    let ps = ParamSet::new(&lc).map_err(|e| ArthurError::Engine(e.to_string()))?;
    let b = ps
        .twisted_block_of(&xi)
        .ok_or_else(|| ArthurError::TypeMismatch(format!("{} is not self-dual", psi)))?;
    let bc = compute_block(&lc, &ps.twisted_blocks[b]).map_err(|e| ArthurError::Engine(e.to_string()))?;
    Ok((lc, xi, bc))
}

pub fn arthur_packet(psi: &AParameter, d: &EndoDatum) -> Result<PacketResult, ArthurError> {
    psi.validate(false)?;
    if psi.dim() != d.n {
        return Err(ArthurError::TypeMismatch(format!(
            "{} has dimension {}, datum has N = {}",
            psi,
            psi.dim(),
            d.n
        )));
    }
    // regularity first so repeated summands report NotRegular
    infl_char_of(psi)?;
    if !psi_factors(psi, d) {
        return Err(ArthurError::TypeMismatch(format!(
            "{} does not factor through the dual of {}",
            psi,
            d.group_name()
        )));
    }
    let (lc, xi, bc) = psi_block(psi)?;
    let t = &bc.transitions;
    let y = t.members.iter().position(|m| *m == xi).expect("ξ_ψ in its block");
    let nw = t.n_whit.as_ref().expect("twisted block");
    let mut n_s = vec![];
    let mut terms = vec![];
    for (x, s) in t.members.iter().enumerate() {
        let n = nw.entries[x][y];
        if n == 0 {
            continue;
        }
        n_s.push((s.clone(), n));
        let orbit = descend_orbit(&phi_of_param(&lc, s), d).ok_or_else(|| {
            ArthurError::DescentFailure(format!("{} with n = {} does not descend to {}", s.label(), n, d.group_name()))
        })?;
        terms.push(PacketTerm {
            orbit,
            coeff: n,
            gl_param: s.clone(),
        });
    }
    Ok(PacketResult {
        lambda: lc,
        xi_psi: xi,
        eta_ar: StablePseudoChar {
            group: d.group_name(),
            terms,
            outer: d.is_so_even().then_some("merged"),
        },
        n_s,
    })
}

/// Lift₀ of a pseudopacket: M(S,1)^+ with sign (−1)^{l^I − l^I_ϑ}.
pub fn lift0_pseudopacket(sg: &GOrbit, d: &EndoDatum) -> Result<(InfChar, SignedSymbol), ArthurError> {
    if sg.group != d.group || descend_orbit(&sg.summands, d).as_ref() != Some(sg) {
        return Err(ArthurError::TypeMismatch(format!("{} is not an orbit for {}", sg, d.group_name())));
    }
    let lc = super::summand::infl_char_of_phi(&sg.summands)?;
    let param = param_of_phi(&sg.summands, &lc)?;
    let coeff = whittaker_sign(&lc, &param).map_err(|e| ArthurError::Engine(e.to_string()))?;
    Ok((
        lc,
        SignedSymbol {
            basis: SymbolBasis::StandardAtlas,
            param,
            coeff,
        },
    ))
}

/// η^{mic+}_ψ = (−1)^{l^I(ξ)−l^I_ϑ(ξ)} π(ξ)^+ with ξ = ξ_ψ.
pub fn eta_mic_plus(psi: &AParameter) -> Result<SignedSymbol, ArthurError> {
    psi.validate(false)?;
    let lc = infl_char_of(psi)?;
    let param = param_of_phi(&phi_of_psi(psi), &lc)?;
    let coeff = whittaker_sign(&lc, &param).map_err(|e| ArthurError::TypeMismatch(e.to_string()))?;
    Ok(SignedSymbol {
        basis: SymbolBasis::IrreducibleAtlas,
        param,
        coeff,
    })
}
