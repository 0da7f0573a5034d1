use std::fmt;

use crate::foundations::{InfChar, KappaOrbit, OrbitKind, Root, WeylElem};

use super::param::{cross_by, merge_fixed, split_cycle, theta_action, GeomParam, Side};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MoveError {
    #[error("NotCayleyType: κ={kappa} has type {tag} at {xi}")]
    NotCayleyType { kappa: String, xi: String, tag: String },
    #[error("UnknownType: {0}")]
    UnknownType(String),
}

/// Shape of T_κ on a basis element; each variant fixes one row of the action table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Row {
    /// complex ascent
    CPlus,
    /// complex descent
    CMinus,
    /// single Cayley image, cross action moves the element
    I1,
    /// single Cayley image of an orbit whose w_κ fixes the element (2Ci, 3Ci, 3i)
    ICi,
    /// partner of ICi
    RCr,
    /// two Cayley images, both in the module
    I2Fixed,
    /// two Cayley images, neither in the module
    I2Swapped,
    /// two inverse Cayley images, both in the module
    R1Fixed,
    /// two inverse Cayley images, neither in the module
    R1Swapped,
    /// single inverse Cayley image (partner of I2Fixed)
    R2,
    /// compact imaginary
    Ic,
    /// nonparity real
    Rn,
}

impl Row {
    pub fn is_descent(self) -> bool {
        matches!(
            self,
            Row::CMinus | Row::RCr | Row::R1Fixed | Row::R1Swapped | Row::R2 | Row::Ic
        )
    }
}

/// Classification of (κ, ξ) on one side, with the images T_κ needs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KType {
    pub tag: String,
    pub row: Row,
    pub cross: GeomParam,
    /// Cayley images (raise the side's length)
    pub up: Vec<GeomParam>,
    /// inverse Cayley images (lower the side's length)
    pub down: Vec<GeomParam>,
}

impl fmt::Display for KType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag)
    }
}

pub const PRIMAL_TYPES: &[&str] = &[
    "1C+", "1C-", "1i2f", "1i2s", "1r2", "1rn", "2C+", "2C-", "2Ci", "2Cr", "2i22", "2r22",
    "2rn", "3C+", "3C-", "3Ci", "3r", "3rn",
];

pub const DUAL_TYPES: &[&str] = &[
    "1C-", "1C+", "1r1f", "1r1s", "1i1", "1ic", "2C-", "2C+", "2Cr", "2Ci", "2r11", "2i11",
    "2ic", "3C-", "3C+", "3Cr", "3i", "3ic",
];

pub const PRIMAL_UNTWISTED_TYPES: &[&str] = &["1C+", "1C-", "1i2", "1r2", "1rn"];
pub const DUAL_UNTWISTED_TYPES: &[&str] = &["1C+", "1C-", "1i1", "1r1", "1ic"];

pub fn admissible_types(side: Side, twisted: bool) -> &'static [&'static str] {
    match (side, twisted) {
        (Side::Primal, true) => PRIMAL_TYPES,
        (Side::Dual, true) => DUAL_TYPES,
        (Side::Primal, false) => PRIMAL_UNTWISTED_TYPES,
        (Side::Dual, false) => DUAL_UNTWISTED_TYPES,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Imaginary,
    Real,
    /// image of the root under θ, as (a, b) meaning e_a - e_b
    Complex(usize, usize),
}

/// θα for the side: primal θ = -w′, dual θ = w′.
fn theta_root(side: Side, xi: &GeomParam, r: Root) -> (usize, usize) {
    let (a, b) = (xi.winv.apply(r.0), xi.winv.apply(r.1));
    match side {
        Side::Primal => (b, a),
        Side::Dual => (a, b),
    }
}

fn status(side: Side, xi: &GeomParam, r: Root) -> Status {
    let t = theta_root(side, xi, r);
    if t == r {
        Status::Imaginary
    } else if t == (r.1, r.0) {
        Status::Real
    } else {
        Status::Complex(t.0, t.1)
    }
}

/// Cayley images through one root for the side.
pub fn up_root(lc: &InfChar, side: Side, xi: &GeomParam, r: Root) -> Vec<GeomParam> {
    match side {
        Side::Primal => split_cycle(lc, xi, r.0, r.1),
        Side::Dual => merge_fixed(lc, xi, r.0, r.1),
    }
}

/// Inverse Cayley images through one root for the side.
pub fn down_root(lc: &InfChar, side: Side, xi: &GeomParam, r: Root) -> Vec<GeomParam> {
    match side {
        Side::Primal => merge_fixed(lc, xi, r.0, r.1),
        Side::Dual => split_cycle(lc, xi, r.0, r.1),
    }
}

fn refl(n: usize, r: Root) -> WeylElem {
    WeylElem::transposition(n, r.0, r.1)
}

fn fixed_only(v: Vec<GeomParam>) -> Vec<GeomParam> {
    let mut out: Vec<GeomParam> = v.into_iter().filter(|x| x.is_theta_fixed()).collect();
    out.sort();
    out.dedup();
    out
}

fn sorted(mut v: Vec<GeomParam>) -> Vec<GeomParam> {
    v.sort();
    v.dedup();
    v
}

/// Classifies κ at ξ. `twisted` selects the ϑ-fixed module (ξ must be ϑ-fixed);
/// otherwise κ must be a single simple root and the classical types are used.
pub fn kappa_type(
    lc: &InfChar,
    kappa: &KappaOrbit,
    xi: &GeomParam,
    side: Side,
    twisted: bool,
) -> Result<KType, MoveError> {
    let n = lc.n();
    let cross = cross_by(lc, &kappa.w_kappa, xi);
    let unknown = |what: &str| {
        MoveError::UnknownType(format!(
            "κ={} at {} ({:?} side): {}",
            kappa.label(),
            xi,
            side,
            what
        ))
    };
    let (tag, row, up, down) = match kappa.kind {
        OrbitKind::Type1 => {
            let a = kappa.roots[0];
            match status(side, xi, a) {
                Status::Complex(x, y) => {
                    if x < y {
                        ("1C+".to_string(), Row::CPlus, vec![], vec![])
                    } else {
                        ("1C-".to_string(), Row::CMinus, vec![], vec![])
                    }
                }
                Status::Imaginary => {
                    let u = up_root(lc, side, xi, a);
                    match (u.len(), twisted) {
                        (0, _) => ("1ic".to_string(), Row::Ic, vec![], vec![]),
                        (1, _) => ("1i1".to_string(), Row::I1, u, vec![]),
                        (2, false) => ("1i2".to_string(), Row::I2Fixed, u, vec![]),
                        (2, true) => {
                            let f = fixed_only(u);
                            match f.len() {
                                2 => ("1i2f".to_string(), Row::I2Fixed, f, vec![]),
                                0 => ("1i2s".to_string(), Row::I2Swapped, vec![], vec![]),
                                _ => return Err(unknown("one of two Cayley images is ϑ-fixed")),
                            }
                        }
                        _ => return Err(unknown("too many Cayley images")),
                    }
                }
                Status::Real => {
                    let d = down_root(lc, side, xi, a);
                    match (d.len(), twisted) {
                        (0, _) => ("1rn".to_string(), Row::Rn, vec![], vec![]),
                        (1, _) => ("1r2".to_string(), Row::R2, vec![], d),
                        (2, false) => ("1r1".to_string(), Row::R1Fixed, vec![], d),
                        (2, true) => {
                            let f = fixed_only(d);
                            match f.len() {
                                2 => ("1r1f".to_string(), Row::R1Fixed, vec![], f),
                                0 => ("1r1s".to_string(), Row::R1Swapped, vec![], vec![]),
                                _ => return Err(unknown("one of two inverse images is ϑ-fixed")),
                            }
                        }
                        _ => return Err(unknown("too many inverse Cayley images")),
                    }
                }
            }
        }
        OrbitKind::Type2 => {
            let (a, b) = (kappa.roots[0], kappa.roots[1]);
            let (sa, sb) = (status(side, xi, a), status(side, xi, b));
            match (sa, sb) {
                (Status::Complex(x, y), Status::Complex(u, v)) => {
                    if (x, y) == b {
                        let c = cross_by(lc, &refl(n, a), xi);
                        if c != cross_by(lc, &refl(n, b), xi) {
                            return Err(unknown("2Ci reflections disagree"));
                        }
                        ("2Ci".to_string(), Row::ICi, vec![c], vec![])
                    } else if (y, x) == b {
                        let c = cross_by(lc, &refl(n, a), xi);
                        if c != cross_by(lc, &refl(n, b), xi) {
                            return Err(unknown("2Cr reflections disagree"));
                        }
                        ("2Cr".to_string(), Row::RCr, vec![], vec![c])
                    } else if (x < y) != (u < v) {
                        return Err(unknown("complex roots of one orbit differ in sign"));
                    } else if x < y {
                        ("2C+".to_string(), Row::CPlus, vec![], vec![])
                    } else {
                        ("2C-".to_string(), Row::CMinus, vec![], vec![])
                    }
                }
                (Status::Imaginary, Status::Imaginary) => {
                    let ua = up_root(lc, side, xi, a);
                    let ub = up_root(lc, side, xi, b);
                    if ua.is_empty() || ub.is_empty() {
                        if !(ua.is_empty() && ub.is_empty()) {
                            return Err(unknown("mixed compactness"));
                        }
                        ("2ic".to_string(), Row::Ic, vec![], vec![])
                    } else {
                        let all: Vec<GeomParam> = ua
                            .iter()
                            .flat_map(|x| up_root(lc, side, x, b))
                            .collect();
                        let f = fixed_only(all);
                        let tag = format!("2i{}{}", ua.len(), ub.len());
                        let row = match (tag.as_str(), f.len()) {
                            ("2i22", 2) => Row::I2Fixed,
                            ("2i11", 1) => Row::I1,
                            _ => return Err(unknown(&format!("{} with {} fixed images", tag, f.len()))),
                        };
                        (tag, row, f, vec![])
                    }
                }
                (Status::Real, Status::Real) => {
                    let da = down_root(lc, side, xi, a);
                    let db = down_root(lc, side, xi, b);
                    if da.is_empty() || db.is_empty() {
                        if !(da.is_empty() && db.is_empty()) {
                            return Err(unknown("mixed parity"));
                        }
                        ("2rn".to_string(), Row::Rn, vec![], vec![])
                    } else {
                        let all: Vec<GeomParam> = da
                            .iter()
                            .flat_map(|x| down_root(lc, side, x, b))
                            .collect();
                        let f = fixed_only(all);
                        let tag = format!("2r{}{}", 3 - da.len(), 3 - db.len());
                        let row = match (tag.as_str(), f.len()) {
                            ("2r22", 1) => Row::R2,
                            ("2r11", 2) => Row::R1Fixed,
                            _ => return Err(unknown(&format!("{} with {} fixed images", tag, f.len()))),
                        };
                        (tag, row, vec![], f)
                    }
                }
                _ => return Err(unknown("roots of one orbit have different kinds")),
            }
        }
        OrbitKind::Type3 => {
            let (a, b) = (kappa.roots[0], kappa.roots[1]);
            let (ra, rb) = (refl(n, a), refl(n, b));
            match (status(side, xi, a), status(side, xi, b)) {
                (Status::Complex(x, y), Status::Complex(u, v)) => {
                    if (x, y) == b {
                        let c = fixed_only(
                            up_root(lc, side, &cross_by(lc, &rb, xi), a)
                                .into_iter()
                                .chain(up_root(lc, side, &cross_by(lc, &ra, xi), b))
                                .collect(),
                        );
                        if c.len() != 1 {
                            return Err(unknown("3Ci without a unique Cayley image"));
                        }
                        ("3Ci".to_string(), Row::ICi, c, vec![])
                    } else if (y, x) == b {
                        let c = fixed_only(
                            down_root(lc, side, &cross_by(lc, &rb, xi), a)
                                .into_iter()
                                .chain(down_root(lc, side, &cross_by(lc, &ra, xi), b))
                                .collect(),
                        );
                        if c.len() != 1 {
                            return Err(unknown("3Cr without a unique inverse image"));
                        }
                        ("3Cr".to_string(), Row::RCr, vec![], c)
                    } else if (x < y) != (u < v) {
                        return Err(unknown("complex roots of one orbit differ in sign"));
                    } else if x < y {
                        ("3C+".to_string(), Row::CPlus, vec![], vec![])
                    } else {
                        ("3C-".to_string(), Row::CMinus, vec![], vec![])
                    }
                }
                (Status::Imaginary, Status::Imaginary) => {
                    let ua = up_root(lc, side, xi, a);
                    let ub = up_root(lc, side, xi, b);
                    if ua.is_empty() && ub.is_empty() {
                        ("3ic".to_string(), Row::Ic, vec![], vec![])
                    } else {
                        let c = fixed_only(
                            ua.iter()
                                .map(|x| cross_by(lc, &rb, x))
                                .chain(ub.iter().map(|x| cross_by(lc, &ra, x)))
                                .collect(),
                        );
                        if c.len() != 1 {
                            return Err(unknown("3i without a unique Cayley image"));
                        }
                        ("3i".to_string(), Row::ICi, c, vec![])
                    }
                }
                (Status::Real, Status::Real) => {
                    let da = down_root(lc, side, xi, a);
                    let db = down_root(lc, side, xi, b);
                    if da.is_empty() && db.is_empty() {
                        ("3rn".to_string(), Row::Rn, vec![], vec![])
                    } else {
                        let c = fixed_only(
                            da.iter()
                                .map(|x| cross_by(lc, &rb, x))
                                .chain(db.iter().map(|x| cross_by(lc, &ra, x)))
                                .collect(),
                        );
                        if c.len() != 1 {
                            return Err(unknown("3r without a unique inverse image"));
                        }
                        ("3r".to_string(), Row::RCr, vec![], c)
                    }
                }
                _ => return Err(unknown("roots of one orbit have different kinds")),
            }
        }
    };
    if !admissible_types(side, twisted).contains(&tag.as_str()) {
        return Err(unknown(&format!("tag {} not admissible", tag)));
    }
    Ok(KType {
        tag,
        row,
        cross,
        up: sorted(up),
        down: sorted(down),
    })
}

/// Cayley transform for the primal side: 0, 1 or 2 values.
pub fn cayley(
    lc: &InfChar,
    kappa: &KappaOrbit,
    xi: &GeomParam,
    twisted: bool,
) -> Result<Vec<GeomParam>, MoveError> {
    let t = kappa_type(lc, kappa, xi, Side::Primal, twisted)?;
    match t.row {
        Row::I1 | Row::ICi | Row::I2Fixed => Ok(t.up),
        Row::R2 | Row::RCr | Row::R1Fixed => Ok(t.down),
        Row::I2Swapped => {
            // images exist but leave the ϑ-fixed set
            let mut v = up_root(lc, Side::Primal, xi, kappa.roots[0]);
            v.sort();
            Ok(v)
        }
        _ => Err(MoveError::NotCayleyType {
            kappa: kappa.label(),
            xi: xi.to_string(),
            tag: t.tag,
        }),
    }
}

/// Cross action by w_κ.
pub fn cross_action(lc: &InfChar, kappa: &KappaOrbit, xi: &GeomParam) -> GeomParam {
    cross_by(lc, &kappa.w_kappa, xi)
}

/// ϑ commutes with the move; used by property tests.
pub fn theta_commutes(lc: &InfChar, kappa: &KappaOrbit, xi: &GeomParam) -> bool {
    theta_action(&cross_action(lc, kappa, xi)) == cross_action(lc, kappa, &theta_action(xi))
}
