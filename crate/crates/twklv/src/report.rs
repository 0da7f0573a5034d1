//! Serializable views of computed data. Every type here round-trips through JSON.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arthur::{
    arthur_packet, is_self_dual, l_parameters_at, packet_checks, AParameter, EndoDatum, PacketCheck,
};
use crate::foundations::{InfChar, LaurentPoly};
use crate::hecke_klv::{lambda_checks, whittaker_sign, BlockComputation, CheckName, CheckOutcome, LambdaComputation};
use crate::params::{enumerate_params, integral_length, GeomParam, ParamSet};

/// Bumped whenever a cached report would no longer deserialize to the same meaning.
pub const CACHE_VERSION: u32 = 1;

fn lambda_strings(lc: &InfChar) -> Vec<String> {
    lc.coords().iter().map(|r| r.to_string()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamOut {
    pub id: usize,
    pub label: String,
    pub winv: String,
    pub signs: BTreeMap<String, String>,
    pub length: i64,
    pub theta_length: Option<i64>,
    pub theta_fixed: bool,
    pub block: usize,
    pub twisted_block: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub lambda: Vec<String>,
    pub params: Vec<ParamOut>,
}

pub fn params_report(ps: &ParamSet) -> ParamsReport {
    let params = ps
        .rows()
        .into_iter()
        .map(|r| ParamOut {
            id: r.id,
            label: r.param.label(),
            winv: r.param.winv.cycle_string(),
            signs: r.param.sign_map().into_iter().map(|(k, v)| (k, v.to_string())).collect(),
            length: r.length,
            theta_length: r.theta_length,
            theta_fixed: r.theta_fixed,
            block: r.block,
            twisted_block: r.twisted_block,
        })
        .collect();
    ParamsReport {
        n: ps.lc.n(),
        lambda: lambda_strings(&ps.lc),
        params,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeOut {
    pub from: usize,
    pub to: usize,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockOut {
    pub id: usize,
    pub twisted: bool,
    pub members: Vec<String>,
    pub lengths: Vec<i64>,
    pub generators: Vec<String>,
    pub edges: Vec<EdgeOut>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlocksReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub lambda: Vec<String>,
    pub blocks: Vec<BlockOut>,
}

pub fn blocks_report(ps: &ParamSet, twisted: bool) -> BlocksReport {
    let src = if twisted { &ps.twisted_blocks } else { &ps.blocks };
    let blocks = src
        .iter()
        .enumerate()
        .map(|(id, b)| BlockOut {
            id,
            twisted,
            members: b.members.iter().map(|m| m.label()).collect(),
            lengths: b.members.iter().map(|m| integral_length(&ps.lc, m)).collect(),
            generators: b.gens.iter().map(|g| g.label()).collect(),
            edges: b
                .edges
                .iter()
                .map(|e| EdgeOut {
                    from: e.from,
                    to: e.to,
                    label: e.label.clone(),
                })
                .collect(),
        })
        .collect();
    BlocksReport {
        n: ps.lc.n(),
        lambda: lambda_strings(&ps.lc),
        blocks,
    }
}

/// KLV data of one block. Matrices are indexed by `members` (primal order).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockKlv {
    pub id: usize,
    pub twisted: bool,
    pub members: Vec<String>,
    pub lengths: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub theta_lengths: Option<Vec<i64>>,
    /// P(x, y), representation side
    pub p: Vec<Vec<LaurentPoly>>,
    /// dual members and their relative lengths, sheaf side
    pub dual_members: Vec<String>,
    pub dual_lengths: Vec<i64>,
    pub dual_p: Vec<Vec<LaurentPoly>>,
    /// integer transition matrices keyed by name
    pub matrices: BTreeMap<String, Vec<Vec<i64>>>,
}

impl BlockKlv {
    pub fn from_computation(id: usize, bc: &BlockComputation) -> BlockKlv {
        let t = &bc.transitions;
        BlockKlv {
            id,
            twisted: bc.block.twisted,
            members: bc.primal.table.members.iter().map(|m| m.label()).collect(),
            lengths: bc.primal.table.lengths.clone(),
            theta_lengths: t.theta_lengths.clone(),
            p: bc.primal.table.p.clone(),
            dual_members: bc.dual.table.members.iter().map(|m| m.label()).collect(),
            dual_lengths: bc.dual.table.lengths.clone(),
            dual_p: bc.dual.table.p.clone(),
            matrices: t
                .all()
                .into_iter()
                .map(|m| (m.kind.as_str().to_string(), m.entries.clone()))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KlvReport {
    pub version: u32,
    #[serde(rename = "N")]
    pub n: usize,
    pub lambda: Vec<String>,
    pub blocks: Vec<BlockKlv>,
}

impl KlvReport {
    pub fn new(lc: &InfChar, blocks: Vec<BlockKlv>) -> KlvReport {
        KlvReport {
            version: CACHE_VERSION,
            n: lc.n(),
            lambda: lambda_strings(lc),
            blocks,
        }
    }

    pub fn matches(&self, lc: &InfChar) -> bool {
        self.version == CACHE_VERSION && self.n == lc.n() && self.lambda == lambda_strings(lc)
    }
}

/// Untwisted blocks first, then twisted, in enumeration order.
pub fn klv_report(lc: &InfChar, c: &LambdaComputation) -> KlvReport {
    let blocks = c
        .blocks
        .iter()
        .enumerate()
        .chain(c.twisted_blocks.iter().enumerate())
        .map(|(i, b)| BlockKlv::from_computation(i, b))
        .collect();
    KlvReport::new(lc, blocks)
}

/// One TSV table per block: header row of ids, then one row per x with P(x, y).
pub fn klv_tsv(r: &KlvReport) -> String {
    let mut s = String::new();
    for b in &r.blocks {
        s.push_str(&format!(
            "# block {} {}\n",
            b.id,
            if b.twisted { "twisted" } else { "untwisted" }
        ));
        s.push_str("id\tparam\tlength");
        for y in 0..b.members.len() {
            s.push_str(&format!("\t{}", y));
        }
        s.push('\n');
        for (x, m) in b.members.iter().enumerate() {
            s.push_str(&format!("{}\t{}\t{}", x, m, b.lengths[x]));
            for y in 0..b.members.len() {
                s.push_str(&format!("\t{}", b.p[x][y]));
            }
            s.push('\n');
        }
        for (name, mat) in &b.matrices {
            s.push_str(&format!("# {}\n", name));
            for row in mat {
                let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                s.push_str(&cells.join("\t"));
                s.push('\n');
            }
        }
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub lambda: String,
    pub check: String,
    pub scopes: usize,
    pub failures: Vec<String>,
    /// 3 for structural identities, 4 for theorem-level ones
    pub exit_code: i32,
}

/// Outcomes grouped by check name, in a fixed order.
pub fn summarize_checks(lc: &InfChar, outcomes: &[CheckOutcome]) -> Vec<CheckSummary> {
    let mut by: BTreeMap<CheckName, (usize, Vec<String>)> = BTreeMap::new();
    for o in outcomes {
        let e = by.entry(o.check).or_default();
        e.0 += 1;
        if !o.ok {
            e.1.push(format!("{}: {}", o.scope, o.detail));
        }
    }
    by.into_iter()
        .map(|(c, (scopes, failures))| CheckSummary {
            lambda: lc.label(),
            check: c.as_str().to_string(),
            scopes,
            failures,
            exit_code: c.exit_code(),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamCount {
    pub lambda: String,
    pub engine: usize,
    pub oracle: usize,
    pub theta_fixed_engine: usize,
    pub theta_fixed_oracle: usize,
    pub ok: bool,
}

/// Engine enumeration against the independent search over L-parameters.
pub fn param_count(lc: &InfChar) -> ParamCount {
    let engine = enumerate_params(lc);
    let oracle = l_parameters_at(lc);
    let mut via_engine: Vec<_> = engine.iter().map(|x| crate::arthur::phi_of_param(lc, x)).collect();
    via_engine.sort();
    let te = engine.iter().filter(|x| x.is_theta_fixed()).count();
    let to = oracle.iter().filter(|p| is_self_dual(p)).count();
    ParamCount {
        lambda: lc.label(),
        engine: engine.len(),
        oracle: oracle.len(),
        theta_fixed_engine: te,
        theta_fixed_oracle: to,
        ok: via_engine == oracle && te == to,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignRow {
    pub lambda: String,
    pub param: String,
    pub principal_series: bool,
    /// all coordinate differences integral
    pub integral: bool,
    pub sign: i64,
}

/// Whittaker/Atlas signs of every ϑ-fixed parameter.
pub fn sign_rows(lc: &InfChar) -> Vec<SignRow> {
    enumerate_params(lc)
        .into_iter()
        .filter(|x| x.is_theta_fixed())
        .map(|x| SignRow {
            lambda: lc.label(),
            param: x.label(),
            principal_series: x.winv.is_identity(),
            integral: (0..lc.n()).all(|j| lc.is_integral(0, j)),
            sign: whittaker_sign(lc, &x).expect("ϑ-fixed"),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PacketTermOut {
    pub orbit: String,
    pub gl_param: String,
    pub coeff: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PacketReport {
    pub psi: String,
    pub group: String,
    pub lambda: Vec<String>,
    pub xi_psi: String,
    pub eta_ar: Vec<PacketTermOut>,
    #[serde(rename = "n_S")]
    pub n_s: Vec<(String, i64)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub outer: Option<String>,
}

pub fn packet_report(psi: &AParameter, d: &EndoDatum) -> Result<PacketReport, crate::arthur::ArthurError> {
    let r = arthur_packet(psi, d)?;
    Ok(PacketReport {
        psi: psi.to_string(),
        group: r.eta_ar.group.clone(),
        lambda: lambda_strings(&r.lambda),
        xi_psi: r.xi_psi.label(),
        eta_ar: r
            .eta_ar
            .terms
            .iter()
            .map(|t| PacketTermOut {
                orbit: t.orbit.to_string(),
                gl_param: t.gl_param.label(),
                coeff: t.coeff,
            })
            .collect(),
        n_s: r.n_s.iter().map(|(s, n)| (s.label(), *n)).collect(),
        outer: r.eta_ar.outer.map(|s| s.to_string()),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PacketCheckOut {
    pub psi: String,
    pub datum: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "String::is_empty", default)]
    pub detail: String,
}

impl From<PacketCheck> for PacketCheckOut {
    fn from(c: PacketCheck) -> Self {
        PacketCheckOut {
            psi: c.psi,
            datum: c.datum,
            ok: c.ok,
            detail: c.detail,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelfcheckReport {
    pub max_n: usize,
    pub ok: bool,
    pub param_counts: Vec<ParamCount>,
    pub invariants: Vec<CheckSummary>,
    pub signs: Vec<SignRow>,
    pub sign_failures: Vec<String>,
    pub packets: Vec<PacketCheckOut>,
}

/// Sign expectations: +1 on principal series and on GL_2 discrete series, −1 on GL_3 (1 3)
/// at integral λ.
pub fn sign_failures(rows: &[SignRow]) -> Vec<String> {
    rows.iter()
        .filter(|r| {
            let n = r.param.split('|').nth(1).map_or(0, |s| s.len());
            let want = if r.principal_series || n == 2 {
                Some(1)
            } else if n == 3 && r.integral {
                Some(-1)
            } else {
                None
            };
            want.is_some_and(|w| w != r.sign)
        })
        .map(|r| format!("{} at {}: sign {}", r.param, r.lambda, r.sign))
        .collect()
}

/// Per-λ part of the self-check, independent across λ so callers may parallelize it.
pub fn selfcheck_lambda(lc: &InfChar) -> Result<(ParamCount, Vec<CheckSummary>, Vec<SignRow>), String> {
    let pc = param_count(lc);
    let c = crate::hecke_klv::compute_lambda(lc).map_err(|e| e.to_string())?;
    let inv = summarize_checks(lc, &lambda_checks(lc, &c));
    Ok((pc, inv, sign_rows(lc)))
}

pub fn assemble_selfcheck(
    max_n: usize,
    per_lambda: Vec<(ParamCount, Vec<CheckSummary>, Vec<SignRow>)>,
) -> SelfcheckReport {
    let mut param_counts = vec![];
    let mut invariants = vec![];
    let mut signs = vec![];
    for (p, i, s) in per_lambda {
        param_counts.push(p);
        invariants.extend(i);
        signs.extend(s);
    }
    let sign_failures = sign_failures(&signs);
    let packets: Vec<PacketCheckOut> = packet_checks(max_n).into_iter().map(Into::into).collect();
    let ok = param_counts.iter().all(|p| p.ok)
        && invariants.iter().all(|c| c.failures.is_empty())
        && sign_failures.is_empty()
        && packets.iter().all(|p| p.ok);
    SelfcheckReport {
        max_n,
        ok,
        param_counts,
        invariants,
        signs,
        sign_failures,
        packets,
    }
}

impl SelfcheckReport {
    /// 0 when everything passes; 3 if a structural identity fails; 4 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.ok {
            return 0;
        }
        if self.invariants.iter().any(|c| !c.failures.is_empty() && c.exit_code == 3) {
            3
        } else {
            4
        }
    }
}

/// Inverse of `GeomParam::label`.
pub fn param_from_label(n: usize, label: &str) -> Option<GeomParam> {
    let (cyc, signs) = label.split_once('|')?;
    let winv = crate::foundations::WeylElem::parse_cycles(n, cyc)?;
    if signs.chars().count() != n {
        return None;
    }
    let signs = signs
        .chars()
        .map(|c| match c {
            '+' => Some(1),
            '-' => Some(-1),
            '.' => Some(0),
            _ => None,
        })
        .collect::<Option<Vec<i8>>>()?;
    let xi = GeomParam::new(winv, signs);
    (xi.label() == label).then_some(xi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundations::{lambda_templates, parse_lambda, validate_infchar};
    use crate::hecke_klv::compute_lambda;

    fn lc(s: &str) -> InfChar {
        validate_infchar(&parse_lambda(s).unwrap()).unwrap()
    }

    #[test]
    fn param_counts_match_oracle() {
        for l in lambda_templates(4) {
            let p = param_count(&l);
            assert!(p.ok, "{:?}", p);
        }
        assert_eq!(param_count(&lc("1,0,-1")).engine, 14);
    }

    #[test]
    fn reports_round_trip() {
        let l = lc("1/2,-1/2");
        let ps = ParamSet::new(&l).unwrap();
        let r = params_report(&ps);
        assert_eq!(r.params.len(), 5);
        let back: ParamsReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
        let b = blocks_report(&ps, true);
        let back: BlocksReport = serde_json::from_str(&serde_json::to_string(&b).unwrap()).unwrap();
        assert_eq!(back, b);
        let k = klv_report(&l, &compute_lambda(&l).unwrap());
        let back: KlvReport = serde_json::from_str(&serde_json::to_string(&k).unwrap()).unwrap();
        assert_eq!(back, k);
        assert!(k.matches(&l));
        assert!(!k.matches(&lc("1,-1")));
    }

    #[test]
    fn labels_parse_back() {
        let l = lc("3/2,1/2,-1/2,-3/2");
        for xi in enumerate_params(&l) {
            assert_eq!(param_from_label(4, &xi.label()), Some(xi));
        }
        assert_eq!(param_from_label(2, "e|+"), None);
    }

    #[test]
    fn sign_expectations() {
        let rows: Vec<SignRow> = lambda_templates(3).iter().flat_map(sign_rows).collect();
        let f = sign_failures(&rows);
        assert!(f.is_empty(), "{:?}", f);
        let bad = SignRow {
            lambda: "x".into(),
            param: "e|++".into(),
            principal_series: true,
            integral: true,
            sign: -1,
        };
        assert_eq!(sign_failures(&[bad]).len(), 1);
    }
}
