//! Arthur parameters, their Langlands and geometric parameters, simple twisted
//! endoscopic data, orbit descent, and the stable pseudopacket combination η^Ar.

mod catalog;
mod endoscopy;
mod langlands;
mod packet;
mod summand;

pub use catalog::{data_for, packet_checks, self_dual_psis, PacketCheck};
pub use endoscopy::{
    descend_orbit, endoscopic_datum, psi_factors, DatumKind, DatumSpec, Embedding, EndoDatum, GOrbit,
    GroupTag,
};
pub use langlands::{induce_param, is_self_dual, l_parameters_at, param_of_phi, phi_of_param};
pub use packet::{
    arthur_packet, eta_mic_plus, lift0_pseudopacket, psi_block, PacketResult, PacketTerm, SignedSymbol,
    StablePseudoChar, SymbolBasis,
};
pub use summand::{
    infl_char_of, infl_char_of_phi, phi_of_psi, summand_duality_type, ASummand, AParameter,
    DualityType, QuasiChar, WRSummand,
};

use crate::foundations::InfCharError;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ArthurError {
    #[error("InvalidParameter: {0}")]
    InvalidParameter(String),
    #[error("{0}")]
    InfChar(#[from] InfCharError),
    #[error("InfCharMismatch: {0}")]
    InfCharMismatch(String),
    #[error("InvalidDatum: {0}")]
    InvalidDatum(String),
    #[error("TypeMismatch: {0}")]
    TypeMismatch(String),
    #[error("DescentFailure: {0}")]
    DescentFailure(String),
    #[error("engine error: {0}")]
    Engine(String),
}

impl ArthurError {
    /// 2 for bad input, 4 when the engine contradicts a theorem it relies on.
    pub fn exit_code(&self) -> i32 {
        match self {
            ArthurError::DescentFailure(_) | ArthurError::Engine(_) => 4,
            _ => 2,
        }
    }
}
