use crate::foundations::{validate_infchar, InfChar, Rat, WeylElem};
use crate::params::GeomParam;

use super::summand::WRSummand;
use super::ArthurError;

fn slot(coords: &[Rat], used: &mut [bool], x: Rat) -> Option<usize> {
    let i = coords.iter().position(|&c| c == x)?;
    if used[i] {
        return None;
    }
    used[i] = true;
    Some(i)
}

/// The geometric parameter of an L-parameter at a given λ.
///
/// A two-dimensional summand swaps the coordinates of its exponents; a
/// one-dimensional summand sgn^δ|·|^t sits at the coordinate t with sign (−1)^δ,
/// since y = exp(πiλ)φ(j) differs from the base point by φ(j) = (−1)^δ there.
pub fn param_of_phi(phi: &[WRSummand], lc: &InfChar) -> Result<GeomParam, ArthurError> {
    let coords = lc.coords();
    let n = coords.len();
    let mismatch = || {
        ArthurError::InfCharMismatch(format!(
            "[{}] does not have infinitesimal character {}",
            phi.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", "),
            lc
        ))
    };
    let mut used = vec![false; n];
    let mut perm: Vec<usize> = (0..n).collect();
    let mut signs = vec![0i8; n];
    for s in phi {
        match *s {
            WRSummand::OneDim { delta, t } => {
                let i = slot(coords, &mut used, t).ok_or_else(mismatch)?;
                signs[i] = if delta == 0 { 1 } else { -1 };
            }
            WRSummand::TwoDim { a, b } => {
                let i = slot(coords, &mut used, a).ok_or_else(mismatch)?;
                let j = slot(coords, &mut used, b).ok_or_else(mismatch)?;
                perm.swap(i, j);
            }
        }
    }
    if used.iter().any(|u| !u) {
        return Err(mismatch());
    }
    let w = WeylElem::from_perm(perm);
    Ok(GeomParam::new(w, signs))
}

/// Inverse of `param_of_phi`: the sorted L-parameter multiset of ξ.
pub fn phi_of_param(lc: &InfChar, xi: &GeomParam) -> Vec<WRSummand> {
    let mut out = vec![];
    for i in 0..xi.n() {
        let j = xi.winv.apply(i);
        if j == i {
            out.push(WRSummand::one_dim((xi.signs[i] < 0) as u8, lc.get(i)));
        } else if i < j {
            out.push(WRSummand::TwoDim {
                a: lc.get(i),
                b: lc.get(j),
            });
        }
    }
    out.sort();
    out
}

/// Parabolic induction: the parameter whose L-parameter is the union of the parts'.
/// Each part is (its λ, decreasing, and a parameter for it).
pub fn induce_param(parts: &[(Vec<Rat>, GeomParam)]) -> Result<(InfChar, GeomParam), ArthurError> {
    let mut phi = vec![];
    let mut lam = vec![];
    for (l, xi) in parts {
        let mut sorted = l.clone();
        sorted.sort_by(|a, b| b.cmp(a));
        if sorted.len() != xi.n() || sorted != *l {
            return Err(ArthurError::InvalidParameter(
                "part λ must be decreasing and match its parameter".into(),
            ));
        }
        for i in 0..xi.n() {
            let j = xi.winv.apply(i);
            if j == i {
                phi.push(WRSummand::one_dim((xi.signs[i] < 0) as u8, l[i]));
            } else if i < j {
                phi.push(WRSummand::two_dim(l[i], l[j])?);
            }
        }
        lam.extend_from_slice(l);
    }
    let lc = validate_infchar(&lam)?;
    let xi = param_of_phi(&phi, &lc)?;
    Ok((lc, xi))
}

/// Every L-parameter with infinitesimal character λ, by direct search over W_ℝ-summands:
/// the first free coordinate carries either a character (two signs) or one end of a
/// two-dimensional summand whose other exponent is an integer below it.
pub fn l_parameters_at(lc: &InfChar) -> Vec<Vec<WRSummand>> {
    fn go(coords: &[Rat], free: &mut Vec<bool>, cur: &mut Vec<WRSummand>, out: &mut Vec<Vec<WRSummand>>) {
        let Some(i) = free.iter().position(|&f| f) else {
            let mut v = cur.clone();
            v.sort();
            out.push(v);
            return;
        };
        free[i] = false;
        for delta in 0..2 {
            cur.push(WRSummand::one_dim(delta, coords[i]));
            go(coords, free, cur, out);
            cur.pop();
        }
        for j in 0..coords.len() {
            let d = coords[i] - coords[j];
            if free[j] && d.is_positive() && d.is_integer() {
                free[j] = false;
                cur.push(WRSummand::TwoDim { a: coords[i], b: coords[j] });
                go(coords, free, cur, out);
                cur.pop();
                free[j] = true;
            }
        }
        free[i] = true;
    }
    let mut out = vec![];
    go(lc.coords(), &mut vec![true; lc.n()], &mut vec![], &mut out);
    out.sort();
    out
}

/// Self-dual: closed under μ ↦ μ^∨ with multiplicities.
pub fn is_self_dual(phi: &[WRSummand]) -> bool {
    let mut dual: Vec<WRSummand> = phi.iter().map(|s| s.dual()).collect();
    dual.sort();
    let mut own = phi.to_vec();
    own.sort();
    dual == own
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundations::{lambda_templates, parse_lambda};
    use crate::params::enumerate_params;

    fn lc(s: &str) -> InfChar {
        validate_infchar(&parse_lambda(s).unwrap()).unwrap()
    }

    #[test]
    fn worked_examples() {
        let l2 = lc("1/2,-1/2");
        let triv2 = vec![
            WRSummand::one_dim(0, Rat::new(1, 2)),
            WRSummand::one_dim(0, Rat::new(-1, 2)),
        ];
        assert_eq!(param_of_phi(&triv2, &l2).unwrap().label(), "e|++");
        let l1 = lc("0");
        assert_eq!(param_of_phi(&[WRSummand::one_dim(1, Rat::zero())], &l1).unwrap().label(), "e|-");
        let d = WRSummand::two_dim(Rat::int(1), Rat::int(-1)).unwrap();
        assert_eq!(param_of_phi(&[d], &lc("1,-1")).unwrap().label(), "(1 2)|..");
        assert!(matches!(
            param_of_phi(&[d], &l2),
            Err(ArthurError::InfCharMismatch(_))
        ));
    }

    #[test]
    fn round_trip_up_to_rank_four() {
        for l in lambda_templates(4) {
            for xi in enumerate_params(&l) {
                assert_eq!(param_of_phi(&phi_of_param(&l, &xi), &l).unwrap(), xi);
            }
        }
    }

    #[test]
    fn oracle_counts() {
        assert_eq!(l_parameters_at(&lc("0")).len(), 2);
        assert_eq!(l_parameters_at(&lc("1/2,-1/2")).len(), 5);
        assert_eq!(l_parameters_at(&lc("1,0,-1")).len(), 14);
        let fixed = l_parameters_at(&lc("1,-1")).into_iter().filter(|p| is_self_dual(p)).count();
        assert_eq!(fixed, 3);
    }

    #[test]
    fn induction() {
        let a = (vec![Rat::new(1, 2)], GeomParam::new(WeylElem::identity(1), vec![1]));
        let b = (vec![Rat::new(-1, 2)], GeomParam::new(WeylElem::identity(1), vec![1]));
        let (l, xi) = induce_param(&[a.clone(), b.clone()]).unwrap();
        assert_eq!((l.label(), xi.label()), ("1/2,-1/2".to_string(), "e|++".to_string()));
        // commutative
        assert_eq!(induce_param(&[b, a]).unwrap().1, xi);
        let dpart = (vec![Rat::int(1), Rat::int(-1)], GeomParam::new(WeylElem::simple(2, 1), vec![0, 0]));
        let sgn = (vec![Rat::zero()], GeomParam::new(WeylElem::identity(1), vec![-1]));
        let (l3, x3) = induce_param(&[dpart.clone(), sgn]).unwrap();
        assert_eq!((l3.label(), x3.label()), ("1,0,-1".to_string(), "(1 3)|.-.".to_string()));
        let (_, single) = induce_param(&[dpart.clone()]).unwrap();
        assert_eq!(single, dpart.1);
        let clash = (vec![Rat::int(1)], GeomParam::new(WeylElem::identity(1), vec![1]));
        assert!(induce_param(&[dpart, clash]).is_err());
    }
}
