//! Exact engine for twisted KLV polynomials of GL_N(R) and the stable
//! characters of Arthur packets for its simple twisted endoscopic groups.

pub mod arthur;
pub mod foundations;
pub mod hecke_klv;
pub mod params;
pub mod report;

pub use foundations::{InfChar, KappaOrbit, LaurentPoly, OrbitKind, Rat, WeylElem};

pub use params::{GeomParam, ParamSet, Side};
