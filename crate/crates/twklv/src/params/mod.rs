//! Parameters at a fixed λ: enumeration, ϑ, Vogan duality, lengths, moves, blocks.

mod block;
mod extended;
mod moves;
mod param;

pub use block::{
    block_decomposition, generators, generic_param, param_order_key, Block, Edge, ParamRow,
    ParamSet,
};
pub use extended::{z_of_extended, ExtendedParam, FourthRoot};
pub use moves::{
    admissible_types, cayley, cross_action, down_root, kappa_type, theta_commutes, up_root, KType, MoveError,
    Row, DUAL_TYPES, DUAL_UNTWISTED_TYPES, PRIMAL_TYPES, PRIMAL_UNTWISTED_TYPES,
};
pub use param::{
    admissible_involutions, cross_by, dual_absolute_length, enumerate_params, integral_length,
    is_parity, merge_fixed, split_cycle, theta_action, theta_integral_length, GeomParam, Side,
};

use crate::foundations::{InfChar, Rat};

/// ∨ξ: the same stored data read with the roles of x and y exchanged.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DualParam {
    pub xi: GeomParam,
}

pub fn vogan_dual(xi: &GeomParam) -> DualParam {
    DualParam { xi: xi.clone() }
}

impl DualParam {
    pub fn undual(&self) -> GeomParam {
        self.xi.clone()
    }

    /// y-element on the diagonal torus as exponents r with entries exp(πi r), for w′ = e.
    /// Fixed coordinates carry λ_i (shifted by 1 when ε_i = -1); paired ones are None.
    pub fn y_exponents(&self, lc: &InfChar) -> Vec<Option<Rat>> {
        (0..lc.n())
            .map(|i| match self.xi.signs[i] {
                0 => None,
                1 => Some(reduce_mod2(lc.get(i))),
                _ => Some(reduce_mod2(lc.get(i) + Rat::int(1))),
            })
            .collect()
    }
}

fn reduce_mod2(r: Rat) -> Rat {
    let mut r = r;
    while r >= Rat::int(2) {
        r = r - Rat::int(2);
    }
    while r < Rat::zero() {
        r = r + Rat::int(2);
    }
    r
}

/// exp(πi r) in closed form when r is a multiple of 1/2.
pub fn root_of_unity_label(r: Rat) -> String {
    let r = reduce_mod2(r);
    for (v, s) in [(Rat::zero(), "1"), (Rat::new(1, 2), "i"), (Rat::int(1), "-1"), (Rat::new(3, 2), "-i")] {
        if r == v {
            return s.to_string();
        }
    }
    format!("exp(πi·{})", r)
}

/// l_rel(∨ξ) = -l^I(ξ) + C, C making the block minimum 0.
pub fn dual_relative_lengths(lc: &InfChar, block: &Block) -> Vec<i64> {
    let ls: Vec<i64> = block.members.iter().map(|x| integral_length(lc, x)).collect();
    let c = *ls.iter().max().expect("nonempty block");
    ls.iter().map(|l| c - l).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundations::{parse_lambda, validate_infchar, WeylElem};

    #[test]
    fn dual_of_dual() {
        let l = validate_infchar(&parse_lambda("1,0,-1").unwrap()).unwrap();
        for x in enumerate_params(&l) {
            assert_eq!(vogan_dual(&x).undual(), x);
        }
    }

    #[test]
    fn gl2_dual_lengths_reverse() {
        let l = validate_infchar(&parse_lambda("1/2,-1/2").unwrap()).unwrap();
        let ps = ParamSet::new(&l).unwrap();
        let big = ps.blocks.iter().find(|b| b.len() == 3).unwrap();
        let rel = dual_relative_lengths(&l, big);
        let d = big.index_of(&GeomParam::new(WeylElem::simple(2, 1), vec![0, 0])).unwrap();
        assert_eq!(rel[d], *rel.iter().max().unwrap());
        assert_eq!(d, 0);
        for i in 0..big.len() {
            for j in 0..big.len() {
                let li = integral_length(&l, &big.members[i]);
                let lj = integral_length(&l, &big.members[j]);
                assert_eq!(li - lj, -(rel[i] - rel[j]));
            }
        }
    }

    #[test]
    fn gl2_y_element() {
        let l = validate_infchar(&parse_lambda("1/2,-1/2").unwrap()).unwrap();
        let x = GeomParam::new(WeylElem::identity(2), vec![1, 1]);
        let y: Vec<String> = vogan_dual(&x)
            .y_exponents(&l)
            .into_iter()
            .map(|r| root_of_unity_label(r.unwrap()))
            .collect();
        assert_eq!(y, vec!["i", "-i"]);
        assert!(vogan_dual(&x).xi.winv.is_identity());
    }

    #[test]
    fn absolute_lengths_sum_to_constant() {
        // l^I(ξ) + l^I(∨ξ) = -1/2(|R^+(λ)| + N)
        for l in crate::foundations::lambda_templates(4) {
            let r = crate::foundations::integral_roots(&l).len() as i64;
            let k = Rat::new(-(r + l.n() as i64), 2);
            for x in enumerate_params(&l) {
                assert_eq!(Rat::int(integral_length(&l, &x)) + dual_absolute_length(&l, &x), k);
            }
        }
    }
}
