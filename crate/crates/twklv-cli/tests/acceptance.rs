//! Acceptance gate: one line per criterion, exit status nonzero if any fails.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use twklv::arthur::{
    arthur_packet, data_for, endoscopic_datum, psi_factors, self_dual_psis, AParameter, DatumKind, Embedding,
    WRSummand,
};
use twklv::foundations::{lambda_templates, parse_lambda, validate_infchar, InfChar, Rat};
use twklv::hecke_klv::{compute_lambda, lambda_checks, whittaker_sign, CheckName, CheckOutcome};
use twklv::params::enumerate_params;
use twklv::report::param_count;

// Time budgets. Exactness criteria have no tolerance: integer and polynomial equality only.
const BUDGET_COUNTS: Duration = Duration::from_secs(1);
const BUDGET_HECKE: Duration = Duration::from_secs(30);
const BUDGET_DUALITY: Duration = Duration::from_secs(60);
const BUDGET_PACKET_2: Duration = Duration::from_secs(5);
const BUDGET_PACKET_3: Duration = Duration::from_secs(10);
const BUDGET_SELFCHECK: Duration = Duration::from_secs(300);
const MAX_N: usize = 4;

fn lc(s: &str) -> InfChar {
    validate_infchar(&parse_lambda(s).unwrap()).unwrap()
}

fn outcomes() -> Vec<CheckOutcome> {
    lambda_templates(MAX_N)
        .iter()
        .flat_map(|l| lambda_checks(l, &compute_lambda(l).expect("blocks compute")))
        .collect()
}

fn named(all: &[CheckOutcome], names: &[CheckName]) -> Result<String, String> {
    let sel: Vec<_> = all.iter().filter(|o| names.contains(&o.check)).collect();
    if sel.is_empty() {
        return Err("no outcomes".into());
    }
    match sel.iter().find(|o| !o.ok) {
        Some(o) => Err(format!("{} at {}: {}", o.check.as_str(), o.scope, o.detail)),
        None => Ok(format!("{} outcomes", sel.len())),
    }
}

fn timed(budget: Duration, f: impl FnOnce() -> Result<String, String>) -> Result<String, String> {
    let t = Instant::now();
    let r = f();
    let el = t.elapsed();
    match r {
        Ok(m) if el <= budget => Ok(format!("{}; {:.2?} <= {:?}", m, el, budget)),
        Ok(m) => Err(format!("{} but took {:.2?} > {:?}", m, el, budget)),
        Err(e) => Err(e),
    }
}

fn c1() -> Result<String, String> {
    timed(BUDGET_COUNTS, || {
        for (l, want) in [("0", 2), ("1/2,-1/2", 5), ("1,0,-1", 14)] {
            let got = enumerate_params(&lc(l)).len();
            if got != want {
                return Err(format!("λ=({}) gives {} parameters, expected {}", l, got, want));
            }
        }
        let ts = lambda_templates(MAX_N);
        for l in &ts {
            let p = param_count(l);
            if !p.ok {
                return Err(format!("oracle mismatch {:?}", p));
            }
        }
        Ok(format!("2/5/14 and {} templates match the oracle", ts.len()))
    })
}

fn c7() -> Result<String, String> {
    let mut n = 0;
    for l in lambda_templates(MAX_N) {
        for x in enumerate_params(&l).into_iter().filter(|x| x.is_theta_fixed() && x.winv.is_identity()) {
            n += 1;
            if whittaker_sign(&l, &x) != Ok(1) {
                return Err(format!("principal series {} at {} has sign ≠ +1", x, l));
            }
        }
    }
    let gl2 = lc("1/2,-1/2");
    let ds: Vec<_> = enumerate_params(&gl2).into_iter().filter(|x| !x.winv.is_identity()).collect();
    if ds.len() != 1 || whittaker_sign(&gl2, &ds[0]) != Ok(1) {
        return Err("GL_2 discrete series sign ≠ +1".into());
    }
    let gl3 = lc("1,0,-1");
    let ones: Vec<_> = enumerate_params(&gl3)
        .into_iter()
        .filter(|x| x.winv.cycle_string() == "(1 3)")
        .collect();
    if ones.len() != 2 || ones.iter().any(|x| whittaker_sign(&gl3, x) != Ok(-1)) {
        return Err("GL_3 (1 3) signs ≠ −1".into());
    }
    Ok(format!("{} principal series +1, GL_2 DS +1, GL_3 (1 3) −1 ×2", n))
}

fn triv() -> WRSummand {
    WRSummand::one_dim(0, Rat::zero())
}

fn c8() -> Result<String, String> {
    timed(BUDGET_PACKET_2, || {
        let d = endoscopic_datum(DatumKind::Simple2, 2, Embedding::Split).map_err(|e| e.to_string())?;
        let r = arthur_packet(&AParameter::new(vec![(triv(), 2)]), &d).map_err(|e| e.to_string())?;
        let got: BTreeSet<(String, i64)> = r.eta_ar.terms.iter().map(|t| (t.gl_param.label(), t.coeff)).collect();
        let want: BTreeSet<(String, i64)> = [("e|++".to_string(), 1), ("(1 2)|..".to_string(), -1)].into();
        if r.eta_ar.terms.len() == 2 && got == want {
            Ok("SO(2,1): +1 principal series, −1 discrete series".into())
        } else {
            Err(format!("got {:?}", got))
        }
    })
}

fn c9() -> Result<String, String> {
    timed(BUDGET_PACKET_3, || {
        let d = endoscopic_datum(DatumKind::Simple1, 3, Embedding::Split).map_err(|e| e.to_string())?;
        let r = arthur_packet(&AParameter::new(vec![(triv(), 3)]), &d).map_err(|e| e.to_string())?;
        let t = &r.eta_ar.terms;
        let sgn = WRSummand::one_dim(1, Rat::zero());
        let mut coeffs: Vec<i64> = t.iter().map(|x| x.coeff).collect();
        coeffs.sort();
        let neg_has_sgn = t.iter().filter(|x| x.coeff == -1).all(|x| x.orbit.summands.contains(&sgn));
        if t.len() == 2 && coeffs == vec![-1, 1] && neg_has_sgn {
            Ok("SL_2: {+1, −1}, −1 on the orbit with sgn".into())
        } else {
            Err(format!("got {:?}", t.iter().map(|x| (x.orbit.to_string(), x.coeff)).collect::<Vec<_>>()))
        }
    })
}

fn c10() -> Result<String, String> {
    let mut n = 0;
    for psi in self_dual_psis(MAX_N, true) {
        for d in data_for(psi.dim()) {
            if !psi_factors(&psi, &d) {
                continue;
            }
            n += 1;
            let r = arthur_packet(&psi, &d).map_err(|e| format!("{} / {}: {}", psi, d.group_name(), e))?;
            if r.eta_ar.terms.len() != 1 || r.eta_ar.terms[0].coeff != 1 {
                return Err(format!("{} / {}: {} terms", psi, d.group_name(), r.eta_ar.terms.len()));
            }
        }
    }
    if n == 0 {
        return Err("no tempered ψ".into());
    }
    Ok(format!("{} tempered (ψ, datum) pairs give a single +1", n))
}

fn c11() -> Result<String, String> {
    timed(BUDGET_SELFCHECK, || {
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_twklv"))
                .args(["selfcheck", "--max-n", "4"])
                .output()
                .map_err(|e| e.to_string())
        };
        let a = run()?;
        let b = run()?;
        if !a.status.success() {
            return Err(format!("exit {:?}: {}", a.status.code(), String::from_utf8_lossy(&a.stderr)));
        }
        if a.stdout != b.stdout || !b.status.success() {
            return Err("repeated runs differ".into());
        }
        Ok(format!("two runs byte-identical ({} bytes)", a.stdout.len()))
    })
}

fn main() {
    // filter arguments from `cargo test <name>` are accepted and ignored
    let start = Instant::now();
    let (all, hecke_time) = {
        let t = Instant::now();
        let o = outcomes();
        (o, t.elapsed())
    };
    let within = |r: Result<String, String>, budget: Duration| match r {
        Ok(m) if hecke_time <= budget => Ok(format!("{}; full suite {:.2?} <= {:?}", m, hecke_time, budget)),
        Ok(m) => Err(format!("{} but the suite took {:.2?}", m, hecke_time)),
        e => e,
    };
    let results: Vec<(u32, &str, Result<String, String>)> = vec![
        (1, "parameter counts", c1()),
        (
            2,
            "Hecke quadratic relation and eigenvalue law",
            within(named(&all, &[CheckName::Quadratic, CheckName::Eigenvalue]), BUDGET_HECKE),
        ),
        (
            3,
            "duality equivariance",
            within(named(&all, &[CheckName::DualityEquivariance]), BUDGET_DUALITY),
        ),
        (
            4,
            "KLV structure and Verdier involution",
            named(&all, &[CheckName::KlvStructure, CheckName::Verdier]),
        ),
        (
            5,
            "inverse-transpose identities",
            named(&all, &[CheckName::InverseTranspose]),
        ),
        (
            6,
            "dual maximum column, one-between, generic row sign, parity domination",
            named(
                &all,
                &[
                    CheckName::DualMaxColumn,
                    CheckName::OneBetween,
                    CheckName::GenericRowSign,
                    CheckName::ParityDomination,
                ],
            ),
        ),
        (7, "Whittaker/Atlas signs", c7()),
        (8, "packet triv⊠ν2 on SO(2,1)", c8()),
        (9, "packet triv⊠ν3 on SL_2", c9()),
        (10, "tempered packets", c10()),
        (11, "selfcheck determinism and time", c11()),
    ];
    let mut failed = 0;
    for (i, name, r) in &results {
        match r {
            Ok(m) => println!("criterion {:>2} PASS  {}: {}", i, name, m),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {}: {}", i, name, e);
            }
        }
    }
    println!(
        "acceptance: {}/{} passed in {:.2?}",
        results.len() - failed,
        results.len(),
        start.elapsed()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
