//! Per-block computation bundle and the named invariant suite run by `--check` and selfcheck.

use serde::Serialize;

use crate::foundations::{InfChar, LaurentPoly};
use crate::params::{generic_param, integral_length, theta_integral_length, Block, ParamSet, Side};

use super::klv::{check_klv, compute_side, SideComputation};
use super::module::{check_duality, HeckeElem};
use super::pairing::{irreducible_whit, pairing_eval, sheaf_element, whittaker_normalize};
use super::transition::{parity, transition_matrices, Transitions};
use super::verdier::check_verdier;
use super::HeckeError;

/// Everything computed for one block.
#[derive(Clone, Debug)]
pub struct BlockComputation {
    pub block: Block,
    pub primal: SideComputation,
    pub dual: SideComputation,
    pub transitions: Transitions,
}

pub fn compute_block(lc: &InfChar, block: &Block) -> Result<BlockComputation, HeckeError> {
    let primal = compute_side(lc, block, Side::Primal)?;
    let dual = compute_side(lc, block, Side::Dual)?;
    let members = &primal.table.members;
    let lengths: Vec<i64> = members.iter().map(|m| integral_length(lc, m)).collect();
    let theta: Option<Vec<i64>> = if block.twisted {
        Some(
            members
                .iter()
                .map(|m| theta_integral_length(lc, m).expect("twisted block member is ϑ-fixed"))
                .collect(),
        )
    } else {
        None
    };
    let transitions = transition_matrices(&primal.table, &dual.table, &lengths, theta.as_deref())?;
    Ok(BlockComputation {
        block: block.clone(),
        primal,
        dual,
        transitions,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckName {
    Quadratic,
    Eigenvalue,
    DualityEquivariance,
    Verdier,
    KlvStructure,
    InverseTranspose,
    WhittakerTranspose,
    DualMaxColumn,
    OneBetween,
    GenericRowSign,
    Pairing,
    ParityDomination,
}

impl CheckName {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckName::Quadratic => "quadratic_relation",
            CheckName::Eigenvalue => "eigenvalue_law",
            CheckName::DualityEquivariance => "duality_equivariance",
            CheckName::Verdier => "verdier_involution",
            CheckName::KlvStructure => "klv_structure",
            CheckName::InverseTranspose => "inverse_transpose",
            CheckName::WhittakerTranspose => "whittaker_transpose",
            CheckName::DualMaxColumn => "dual_max_column",
            CheckName::OneBetween => "one_between",
            CheckName::GenericRowSign => "generic_row_sign",
            CheckName::Pairing => "pairing",
            CheckName::ParityDomination => "parity_domination",
        }
    }

    /// Exit code on failure: 3 for structural invariants, 4 for identities between computed objects.
    pub fn exit_code(self) -> i32 {
        match self {
            CheckName::Quadratic
            | CheckName::Eigenvalue
            | CheckName::DualityEquivariance
            | CheckName::Verdier
            | CheckName::KlvStructure => 3,
            _ => 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub check: CheckName,
    pub scope: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

fn outcome(check: CheckName, scope: &str, r: Result<(), String>) -> CheckOutcome {
    CheckOutcome {
        check,
        scope: scope.to_string(),
        ok: r.is_ok(),
        detail: r.err().unwrap_or_default(),
    }
}

fn as_msg(r: Result<(), HeckeError>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

/// m(ξ′,ξ) = (−1)^{Δ} c(ξ,ξ′) with Δ = l(ξ) − l(ξ′).
pub fn check_inverse_transpose(t: &Transitions, lens: &[i64], m: &[Vec<i64>]) -> Result<(), String> {
    let n = t.members.len();
    for x in 0..n {
        for y in 0..n {
            let want = parity(lens[y] - lens[x]) * t.c.entries[y][x];
            if m[x][y] != want {
                return Err(format!(
                    "at ({}, {}): {} vs {}",
                    t.members[x].label(),
                    t.members[y].label(),
                    m[x][y],
                    want
                ));
            }
        }
    }
    Ok(())
}

/// Column of ∨P at the dual maximum (the primal generic parameter) is identically 1.
pub fn check_dual_max_column(lc: &InfChar, bc: &BlockComputation) -> Result<(), String> {
    let gen = generic_param(lc, &bc.block);
    let t = &bc.dual.table;
    let y = t.index_of(&gen).ok_or("generic parameter missing")?;
    let lmax = *t.lengths.iter().max().unwrap();
    if t.lengths[y] != lmax || t.lengths.iter().filter(|&&l| l == lmax).count() != 1 {
        return Err(format!("{} is not the unique dual maximum", gen.label()));
    }
    for x in 0..t.len() {
        if t.p[x][y] != LaurentPoly::one() {
            return Err(format!("∨P({}, {}) = {}", t.members[x].label(), gen.label(), t.p[x][y]));
        }
    }
    Ok(())
}

/// For a dual ascent of κ at ∨ξ′, exactly one summand of T̂_κ M(∨ξ′) has κ as a descent,
/// and ∨P(∨ξ′, ∨ξ) = ∨P(∨ξ″, ∨ξ) whenever κ is a descent for ∨ξ.
/// Where T̂_κ M(∨ξ′) = 0, ∨P(∨ξ′, ∨ξ) must vanish for such ∨ξ.
pub fn check_one_between(bc: &BlockComputation) -> Result<(), String> {
    let m = &bc.dual.module;
    let t = &bc.dual.table;
    let n = m.len();
    for g in 0..m.gens.len() {
        for x in 0..n {
            if m.types[g][x].row.is_descent() {
                continue;
            }
            let col = m.t_hat_col(g, x);
            let desc: Vec<usize> = col.keys().copied().filter(|&k| m.types[g][k].row.is_descent()).collect();
            let partner = match (col.is_empty(), desc.as_slice()) {
                (true, _) => None,
                (false, [one]) => Some(*one),
                _ => {
                    return Err(format!(
                        "κ={} at {}: {} descent summands",
                        m.gens[g].label(),
                        m.members[x].label(),
                        desc.len()
                    ))
                }
            };
            for y in 0..n {
                if !m.types[g][y].row.is_descent() {
                    continue;
                }
                let want = match partner {
                    Some(z) => t.p[z][y].clone(),
                    None => LaurentPoly::zero(),
                };
                if t.p[x][y] != want {
                    return Err(format!(
                        "κ={}: ∨P({}, {}) = {} but predecessor gives {}",
                        m.gens[g].label(),
                        m.members[x].label(),
                        m.members[y].label(),
                        t.p[x][y],
                        want
                    ));
                }
            }
        }
    }
    Ok(())
}

/// m_r^ϑ(ξ₀, ξ) = (−1)^{l^I(ξ)−l^I_ϑ(ξ)+l^I(ξ₀)−l^I_ϑ(ξ₀)} for the generic ξ₀.
pub fn check_generic_row(lc: &InfChar, bc: &BlockComputation) -> Result<(), String> {
    let t = &bc.transitions;
    let s = t.whit_signs().ok_or("untwisted block")?;
    let gen = generic_param(lc, &bc.block);
    let g = t.members.iter().position(|m| *m == gen).ok_or("generic missing")?;
    for y in 0..t.members.len() {
        let want = s[y] * s[g];
        if t.m.entries[g][y] != want {
            return Err(format!(
                "m_r^ϑ({}, {}) = {} ≠ {}",
                gen.label(),
                t.members[y].label(),
                t.m.entries[g][y],
                want
            ));
        }
    }
    Ok(())
}

/// ⟨M^∼(ξ), μ^+(ξ′)⟩ = δ and ⟨π^∼(ξ), P^+(ξ′)⟩ = (−1)^{d(ξ)} δ.
pub fn check_pairing(lc: &InfChar, t: &Transitions) -> Result<(), String> {
    let n = t.members.len();
    for x in 0..n {
        let mx = whittaker_normalize(lc, &HeckeElem::basis(Side::Primal, &t.members[x])).map_err(|e| e.to_string())?;
        let pix = irreducible_whit(t, x).ok_or("untwisted block")?;
        for y in 0..n {
            let mu = HeckeElem::basis(Side::Dual, &t.members[y]);
            let v = pairing_eval(t, &mx, &mu).map_err(|e| e.to_string())?;
            if v != (x == y) as i64 {
                return Err(format!("⟨M^∼({}), μ^+({})⟩ = {}", t.members[x].label(), t.members[y].label(), v));
            }
            let v = pairing_eval(t, &pix, &sheaf_element(t, y)).map_err(|e| e.to_string())?;
            let want = if x == y { t.d_sign(x) } else { 0 };
            if v != want {
                return Err(format!(
                    "⟨π^∼({}), P^+({})⟩ = {} ≠ {}",
                    t.members[x].label(),
                    t.members[y].label(),
                    v,
                    want
                ));
            }
        }
    }
    Ok(())
}

/// Every named check on one block.
pub fn block_checks(lc: &InfChar, bc: &BlockComputation) -> Vec<CheckOutcome> {
    let scope = format!(
        "{} {}block {}",
        lc,
        if bc.block.twisted { "twisted " } else { "" },
        bc.block.members[0].label()
    );
    let mut out = Vec::new();
    for sc in [&bc.primal, &bc.dual] {
        let side = format!("{scope} {:?}", sc.module.side);
        out.push(outcome(CheckName::Quadratic, &side, as_msg(sc.module.check_quadratic())));
        out.push(outcome(CheckName::Eigenvalue, &side, as_msg(sc.module.check_eigen())));
        out.push(outcome(CheckName::Verdier, &side, as_msg(check_verdier(&sc.module, &sc.verdier))));
        out.push(outcome(CheckName::KlvStructure, &side, as_msg(check_klv(&sc.table, &sc.verdier))));
    }
    out.push(outcome(
        CheckName::DualityEquivariance,
        &scope,
        as_msg(check_duality(&bc.primal.module, &bc.dual.module)),
    ));
    let t = &bc.transitions;
    let sign_lengths = t.theta_lengths.as_ref().unwrap_or(&t.lengths);
    out.push(outcome(
        CheckName::InverseTranspose,
        &scope,
        check_inverse_transpose(t, sign_lengths, &t.m.entries),
    ));
    out.push(outcome(CheckName::DualMaxColumn, &scope, check_dual_max_column(lc, bc)));
    out.push(outcome(CheckName::OneBetween, &scope, check_one_between(bc)));
    if bc.block.twisted {
        let mw = &t.m_whit.as_ref().expect("twisted").entries;
        out.push(outcome(
            CheckName::WhittakerTranspose,
            &scope,
            check_inverse_transpose(t, &t.lengths, mw),
        ));
        out.push(outcome(CheckName::GenericRowSign, &scope, check_generic_row(lc, bc)));
        out.push(outcome(CheckName::Pairing, &scope, check_pairing(lc, t)));
    }
    out
}

/// |m^ϑ(ξ′,ξ)| ≤ m(ξ′,ξ) and m^ϑ ≡ m mod 2 over all ϑ-fixed pairs of each untwisted block.
/// Pairs in different twisted blocks have m^ϑ = 0.
pub fn check_parity_domination(
    ps: &ParamSet,
    untwisted: &[BlockComputation],
    twisted: &[BlockComputation],
) -> Result<(), String> {
    for bc in untwisted {
        let t = &bc.transitions;
        let fixed: Vec<usize> = (0..t.members.len()).filter(|&i| t.members[i].is_theta_fixed()).collect();
        for &x in &fixed {
            for &y in &fixed {
                let (mx, my) = (&t.members[x], &t.members[y]);
                let m = t.m.entries[x][y];
                let bx = ps.twisted_block_of(mx).ok_or("ϑ-fixed member outside twisted blocks")?;
                let by = ps.twisted_block_of(my).ok_or("ϑ-fixed member outside twisted blocks")?;
                let mt = if bx == by {
                    twisted[bx].transitions.m.get(mx, my).ok_or("member missing")?
                } else {
                    0
                };
                if mt.abs() > m || (m - mt).rem_euclid(2) != 0 {
                    return Err(format!(
                        "at ({}, {}): m = {}, m^ϑ = {}",
                        mx.label(),
                        my.label(),
                        m,
                        mt
                    ));
                }
            }
        }
    }
    Ok(())
}

/// All blocks of one λ, with every check.
#[derive(Clone, Debug)]
pub struct LambdaComputation {
    pub params: ParamSet,
    pub blocks: Vec<BlockComputation>,
    pub twisted_blocks: Vec<BlockComputation>,
}

pub fn compute_lambda(lc: &InfChar) -> Result<LambdaComputation, HeckeError> {
    let params = ParamSet::new(lc).map_err(|e| HeckeError::IncompleteTable(e.to_string()))?;
    let blocks = params.blocks.iter().map(|b| compute_block(lc, b)).collect::<Result<_, _>>()?;
    let twisted_blocks = params
        .twisted_blocks
        .iter()
        .map(|b| compute_block(lc, b))
        .collect::<Result<_, _>>()?;
    Ok(LambdaComputation {
        params,
        blocks,
        twisted_blocks,
    })
}

pub fn lambda_checks(lc: &InfChar, c: &LambdaComputation) -> Vec<CheckOutcome> {
    let mut out: Vec<CheckOutcome> = c
        .blocks
        .iter()
        .chain(&c.twisted_blocks)
        .flat_map(|b| block_checks(lc, b))
        .collect();
    out.push(outcome(
        CheckName::ParityDomination,
        &lc.to_string(),
        check_parity_domination(&c.params, &c.blocks, &c.twisted_blocks),
    ));
    out
}
