use proptest::prelude::*;

use twklv::arthur::{
    infl_char_of, is_self_dual, l_parameters_at, param_of_phi, phi_of_param, phi_of_psi, self_dual_psis,
    AParameter, WRSummand,
};
use twklv::foundations::{lambda_templates, InfChar, Rat};
use twklv::hecke_klv::{compute_block, integer_inverse};
use twklv::params::{enumerate_params, GeomParam, ParamSet};

fn templates() -> Vec<InfChar> {
    lambda_templates(4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn params_json_round_trip(t in 0usize..22, k in 0usize..64) {
        let ts = templates();
        let lc = &ts[t % ts.len()];
        let ps = enumerate_params(lc);
        let xi = &ps[k % ps.len()];
        let v = xi.to_json(lc);
        prop_assert_eq!(GeomParam::from_json(lc.n(), &v), Some(xi.clone()));
        let phi = phi_of_param(lc, xi);
        prop_assert_eq!(phi.iter().map(|s| s.dim()).sum::<usize>(), lc.n());
        prop_assert_eq!(is_self_dual(&phi), xi.is_theta_fixed());
        prop_assert_eq!(&param_of_phi(&phi, lc).unwrap(), xi);
    }

    #[test]
    fn psi_dimension_and_exponents(i in 0usize..200) {
        let all = self_dual_psis(4, false);
        let psi: &AParameter = &all[i % all.len()];
        let phi = phi_of_psi(psi);
        prop_assert_eq!(phi.iter().map(|s| s.dim()).sum::<usize>(), psi.dim());
        let mut exps: Vec<Rat> = phi.iter().flat_map(WRSummand::exponents).collect();
        exps.sort_by(|a, b| b.cmp(a));
        prop_assert_eq!(infl_char_of(psi).unwrap().coords().to_vec(), exps);
    }

    #[test]
    fn transitions_are_mutually_inverse(t in 0usize..22, b in 0usize..16, twisted in any::<bool>()) {
        let ts = templates();
        let lc = &ts[t % ts.len()];
        let ps = ParamSet::new(lc).unwrap();
        let blocks = if twisted { &ps.twisted_blocks } else { &ps.blocks };
        let bc = compute_block(lc, &blocks[b % blocks.len()]).unwrap();
        let tr = &bc.transitions;
        prop_assert_eq!(integer_inverse(&tr.m.entries).unwrap(), tr.m_inv.entries.clone());
        if let (Some(w), Some(n)) = (&tr.m_whit, &tr.n_whit) {
            prop_assert_eq!(integer_inverse(&w.entries).unwrap(), n.entries.clone());
        }
        // unit diagonal at q = 1
        for (i, row) in bc.primal.table.at_one().iter().enumerate() {
            prop_assert_eq!(row[i], 1);
        }
    }
}

#[test]
fn oracle_agrees_on_every_template() {
    for lc in templates() {
        let mut engine: Vec<_> = enumerate_params(&lc).iter().map(|x| phi_of_param(&lc, x)).collect();
        engine.sort();
        assert_eq!(engine, l_parameters_at(&lc), "λ = {}", lc);
    }
}
