use std::collections::BTreeMap;

use crate::foundations::LaurentPoly;

use super::module::{add_at, axpy, unit, HeckeModule, Vector};
use super::HeckeError;

/// Columns D(M_u), u in module order.
pub type DualityMatrix = Vec<Vector>;

const P: u64 = (1 << 61) - 1;

fn mulm(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn addm(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

fn subm(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

fn powm(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, a);
        }
        a = mulm(a, a);
        e >>= 1;
    }
    r
}

fn invm(a: u64) -> u64 {
    powm(a, P - 2)
}

fn to_mod(c: i64) -> u64 {
    c.rem_euclid(P as i64) as u64
}

fn from_mod(c: u64) -> i64 {
    if c > P / 2 {
        -((P - c) as i64)
    } else {
        c as i64
    }
}

/// Value at q^{1/2} = t.
fn eval_mod(p: &LaurentPoly, t: u64, tinv: u64) -> u64 {
    p.terms()
        .fold(0, |acc, (e, c)| addm(acc, mulm(to_mod(c), pow_signed(t, tinv, e))))
}

/// D on the standard basis: the bar-semilinear involution commuting with every T̂,
/// normalized by D(M) = q^{-l} M at elements without lower neighbors.
pub fn verdier_matrix(m: &HeckeModule) -> Result<DualityMatrix, HeckeError> {
    let n = m.len();
    let gens = m.gens.len();
    let that: Vec<Vec<Vector>> = (0..gens)
        .map(|g| (0..n).map(|j| m.t_hat_col(g, j)).collect())
        .collect();
    // incoming[u]: columns (g, j), j ≠ u, of T̂ that contain u
    let mut incoming: Vec<Vec<(usize, usize)>> = vec![vec![]; n];
    for (g, cols) in that.iter().enumerate() {
        for (j, col) in cols.iter().enumerate() {
            for &u in col.keys() {
                if u != j {
                    incoming[u].push((g, j));
                }
            }
        }
    }
    let mut d: Vec<Option<Vector>> = vec![None; n];
    let mut levels: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for u in 0..n {
        levels.entry(m.lengths[u]).or_default().push(u);
    }
    for (_, members) in levels {
        let mut pending: Vec<usize> = vec![];
        for &u in &members {
            let has_lower = incoming[u]
                .iter()
                .any(|&(_, j)| m.lengths[j] < m.lengths[u]);
            if has_lower {
                pending.push(u);
            } else {
                d[u] = Some(unit(u, LaurentPoly::half_pow(-2 * m.lengths[u])));
            }
        }
        loop {
            let before = pending.len();
            pending.retain(|&u| match fast_step(u, &that, &incoming, &d) {
                Some(v) => {
                    d[u] = Some(v);
                    false
                }
                None => true,
            });
            if pending.is_empty() || pending.len() == before {
                break;
            }
        }
        if !pending.is_empty() {
            let solved = solve_group(m, &that, &d, &pending)?;
            for (u, v) in solved {
                d[u] = Some(v);
            }
        }
    }
    let d: DualityMatrix = d.into_iter().map(|x| x.expect("all columns solved")).collect();
    check_verdier(m, &d)?;
    Ok(d)
}

/// Isolate D(M_u) from one equation T̂_g D(M_j) = Σ_i bar(t̂_ij) D(M_i).
fn fast_step(
    u: usize,
    that: &[Vec<Vector>],
    incoming: &[Vec<(usize, usize)>],
    d: &[Option<Vector>],
) -> Option<Vector> {
    'cand: for &(g, j) in &incoming[u] {
        let Some(dj) = &d[j] else { continue };
        let col = &that[g][j];
        for &i in col.keys() {
            if i != u && d[i].is_none() {
                continue 'cand;
            }
        }
        let mut rhs = Vector::new();
        for (&v, c) in dj {
            axpy(&mut rhs, c, &that[g][v]);
        }
        for (&i, c) in col {
            if i != u {
                axpy(&mut rhs, &(-&c.bar()), d[i].as_ref().unwrap());
            }
        }
        let div = col[&u].bar();
        let mut out = Vector::new();
        for (k, c) in rhs {
            match c.div_exact(&div) {
                Some(x) => add_at(&mut out, k, &x),
                None => continue 'cand,
            }
        }
        return Some(out);
    }
    None
}

/// One linear form: constant + Σ coef_k x_k.
struct Form {
    constant: LaurentPoly,
    coefs: BTreeMap<usize, LaurentPoly>,
}

fn form_at(comp: &mut BTreeMap<usize, Form>, r: usize) -> &mut Form {
    comp.entry(r).or_insert_with(|| Form {
        constant: LaurentPoly::zero(),
        coefs: BTreeMap::new(),
    })
}

fn pow_signed(t: u64, tinv: u64, e: i64) -> u64 {
    if e >= 0 {
        powm(t, e as u64)
    } else {
        powm(tinv, (-e) as u64)
    }
}

/// Solve for the columns of `group` together.
///
/// Unknowns are the lower coefficients x_{u,v}; each equation is linear over
/// ℤ[q^{±1/2}]. The system is solved modulo a prime at many values of q^{1/2}
/// and every unknown is interpolated as a Laurent polynomial.
fn solve_group(
    m: &HeckeModule,
    that: &[Vec<Vector>],
    d: &[Option<Vector>],
    group: &[usize],
) -> Result<Vec<(usize, Vector)>, HeckeError> {
    let n = m.len();
    let in_group = |x: usize| group.contains(&x);
    let mut unknown: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut key: Vec<(usize, usize)> = vec![];
    for &u in group {
        for v in 0..n {
            if m.lengths[v] < m.lengths[u] {
                unknown.insert((u, v), key.len());
                key.push((u, v));
            }
        }
    }
    let nk = key.len();
    let known_or_group = |x: usize| d[x].is_some() || in_group(x);

    // symbolic equations, one form per (g, j, component)
    let mut forms: Vec<Form> = vec![];
    for (g, cols) in that.iter().enumerate() {
        for (j, col) in cols.iter().enumerate() {
            if !known_or_group(j) || !col.keys().all(|&i| known_or_group(i)) {
                continue;
            }
            if !in_group(j) && !col.keys().any(|&i| in_group(i)) {
                continue;
            }
            let mut comp: BTreeMap<usize, Form> = BTreeMap::new();
            // T̂_g D(M_j)
            if let Some(dj) = &d[j] {
                for (&v, c) in dj {
                    for (&r, t) in &that[g][v] {
                        let f = form_at(&mut comp, r);
                        f.constant += &(c * t);
                    }
                }
            } else {
                let lead = LaurentPoly::half_pow(-2 * m.lengths[j]);
                for (&r, t) in &that[g][j] {
                    let f = form_at(&mut comp, r);
                    f.constant += &(&lead * t);
                }
                for v in 0..n {
                    if let Some(&k) = unknown.get(&(j, v)) {
                        for (&r, t) in &that[g][v] {
                            let f = form_at(&mut comp, r);
                            *f.coefs.entry(k).or_insert_with(LaurentPoly::zero) += t;
                        }
                    }
                }
            }
            // − Σ_i bar(t̂_ij) D(M_i)
            for (&i, t) in col {
                let c = -&t.bar();
                if let Some(di) = &d[i] {
                    for (&r, x) in di {
                        let f = form_at(&mut comp, r);
                        f.constant += &(&c * x);
                    }
                } else {
                    let f = form_at(&mut comp, i);
                    f.constant += &(&c * &LaurentPoly::half_pow(-2 * m.lengths[i]));
                    for v in 0..n {
                        if let Some(&k) = unknown.get(&(i, v)) {
                            let f = form_at(&mut comp, v);
                            *f.coefs.entry(k).or_insert_with(LaurentPoly::zero) += &c;
                        }
                    }
                }
            }
            for (_, mut f) in comp {
                f.coefs.retain(|_, c| !c.is_zero());
                if f.coefs.is_empty() {
                    if !f.constant.is_zero() {
                        return Err(HeckeError::NotEquivariant(format!(
                            "inconsistent equation for {}",
                            m.members[j]
                        )));
                    }
                    continue;
                }
                forms.push(f);
            }
        }
    }

    let lmin = *m.lengths.iter().min().unwrap();
    let lmax = *m.lengths.iter().max().unwrap();
    let deg = (2 * (lmax - lmin) + 8) as usize;
    let checks = 3;
    let mut xs: Vec<u64> = vec![];
    let mut vals: Vec<Vec<u64>> = vec![];
    let mut t = 2u64;
    let mut failures = 0;
    while xs.len() < deg + 1 + checks {
        t += 1;
        match solve_at(&forms, nk, t) {
            Some(sol) => {
                xs.push(t);
                vals.push(sol);
            }
            None => {
                failures += 1;
                if failures > 8 {
                    return Err(HeckeError::Underdetermined(format!(
                        "Verdier dual at {}",
                        group
                            .iter()
                            .map(|&u| m.members[u].label())
                            .collect::<Vec<_>>()
                            .join(", ")
                    )));
                }
            }
        }
    }
    let mut out: BTreeMap<usize, Vector> = group
        .iter()
        .map(|&u| (u, unit(u, LaurentPoly::half_pow(-2 * m.lengths[u]))))
        .collect();
    for (k, &(u, _)) in key.iter().enumerate() {
        // x has exponents in [-2l(u), -2lmin]; f(t) = t^s x(t) is a polynomial of degree <= deg
        let s = 2 * m.lengths[u] + 4;
        let ys: Vec<u64> = xs
            .iter()
            .zip(&vals)
            .map(|(&x, v)| mulm(v[k], pow_signed(x, invm(x), s)))
            .collect();
        let coeffs = interpolate(&xs[..deg + 1], &ys[..deg + 1]);
        for c in 0..checks {
            let x = xs[deg + 1 + c];
            let mut acc = 0;
            for a in coeffs.iter().rev() {
                acc = addm(mulm(acc, x), *a);
            }
            if acc != ys[deg + 1 + c] {
                return Err(HeckeError::Underdetermined(format!(
                    "interpolation failed at {}",
                    m.members[u]
                )));
            }
        }
        let mut poly = LaurentPoly::zero();
        for (e, &c) in coeffs.iter().enumerate() {
            poly.add_term(e as i64 - s, from_mod(c));
        }
        add_at(out.get_mut(&u).unwrap(), key[k].1, &poly);
    }
    Ok(out.into_iter().collect())
}

/// Unique solution of the forms at q^{1/2} = t, or None when rank drops.
fn solve_at(forms: &[Form], nk: usize, t: u64) -> Option<Vec<u64>> {
    let tinv = invm(t);
    // reduced pivot rows: (pivot column, row of length nk + 1)
    let mut pivots: Vec<(usize, Vec<u64>)> = vec![];
    for f in forms {
        let mut row = vec![0u64; nk + 1];
        for (&k, c) in &f.coefs {
            row[k] = eval_mod(c, t, tinv);
        }
        row[nk] = subm(0, eval_mod(&f.constant, t, tinv));
        for (pc, prow) in &pivots {
            let a = row[*pc];
            if a != 0 {
                for (x, y) in row.iter_mut().zip(prow) {
                    *x = subm(*x, mulm(a, *y));
                }
            }
        }
        match (0..nk).find(|&k| row[k] != 0) {
            Some(pc) => {
                let inv = invm(row[pc]);
                for x in row.iter_mut() {
                    *x = mulm(*x, inv);
                }
                for (_, prow) in pivots.iter_mut() {
                    let a = prow[pc];
                    if a != 0 {
                        for (x, y) in prow.iter_mut().zip(&row) {
                            *x = subm(*x, mulm(a, *y));
                        }
                    }
                }
                pivots.push((pc, row));
            }
            None => {
                if row[nk] != 0 {
                    return None;
                }
            }
        }
    }
    if pivots.len() < nk {
        return None;
    }
    let mut sol = vec![0u64; nk];
    for (pc, row) in pivots {
        sol[pc] = row[nk];
    }
    Some(sol)
}

/// Coefficients (low to high) of the polynomial through the points.
fn interpolate(xs: &[u64], ys: &[u64]) -> Vec<u64> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = subm(dd[i], dd[i - 1]);
            let den = subm(xs[i], xs[i - level]);
            dd[i] = mulm(num, invm(den));
        }
    }
    let mut poly = vec![0u64; n];
    for i in (0..n).rev() {
        // poly = poly * (x - xs[i]) + dd[i]
        let mut next = vec![0u64; n];
        for k in 0..n {
            if poly[k] == 0 {
                continue;
            }
            if k + 1 < n {
                next[k + 1] = addm(next[k + 1], poly[k]);
            }
            next[k] = subm(next[k], mulm(poly[k], xs[i]));
        }
        next[0] = addm(next[0], dd[i]);
        poly = next;
    }
    poly
}

/// D² = id and D T̂_g = T̂_g D on every basis element.
pub fn check_verdier(m: &HeckeModule, d: &DualityMatrix) -> Result<(), HeckeError> {
    let apply = |v: &Vector| -> Vector {
        let mut out = Vector::new();
        for (&k, c) in v {
            axpy(&mut out, &c.bar(), &d[k]);
        }
        out
    };
    for u in 0..m.len() {
        if apply(&d[u]) != unit(u, LaurentPoly::one()) {
            return Err(HeckeError::NonInvolutive(m.members[u].label()));
        }
        if d[u].get(&u) != Some(&LaurentPoly::half_pow(-2 * m.lengths[u])) {
            return Err(HeckeError::NonInvolutive(format!(
                "diagonal at {}",
                m.members[u].label()
            )));
        }
        if d[u].keys().any(|&v| v != u && m.lengths[v] >= m.lengths[u]) {
            return Err(HeckeError::NonInvolutive(format!(
                "not triangular at {}",
                m.members[u].label()
            )));
        }
        for g in 0..m.gens.len() {
            let lhs = m.t_hat_apply_vec(g, &d[u]);
            let rhs = apply(&m.t_hat_col(g, u));
            if lhs != rhs {
                return Err(HeckeError::NotEquivariant(format!(
                    "({}, {})",
                    m.gens[g].label(),
                    m.members[u].label()
                )));
            }
        }
    }
    Ok(())
}

/// D applied to an arbitrary vector.
pub fn apply_verdier(d: &DualityMatrix, v: &Vector) -> Vector {
    let mut out = Vector::new();
    for (&k, c) in v {
        axpy(&mut out, &c.bar(), &d[k]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundations::{lambda_templates, parse_lambda, validate_infchar, InfChar};
    use crate::params::{ParamSet, Side};

    fn lc(s: &str) -> InfChar {
        validate_infchar(&parse_lambda(s).unwrap()).unwrap()
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let xs: Vec<u64> = (3..9).collect();
        let f = |x: u64| addm(mulm(5, mulm(x, x)), subm(0, 7));
        let ys: Vec<u64> = xs.iter().map(|&x| f(x)).collect();
        let c = interpolate(&xs, &ys);
        assert_eq!(from_mod(c[0]), -7);
        assert_eq!(from_mod(c[1]), 0);
        assert_eq!(from_mod(c[2]), 5);
        assert!(c[3..].iter().all(|&x| x == 0));
    }

    #[test]
    fn singleton_block_is_scalar() {
        let l = lc("1/2,-1/2");
        let ps = ParamSet::new(&l).unwrap();
        let single = ps.blocks.iter().find(|b| b.len() == 1).unwrap();
        let m = HeckeModule::new(&l, single, Side::Primal).unwrap();
        let d = verdier_matrix(&m).unwrap();
        assert_eq!(d[0], unit(0, LaurentPoly::one()));
    }

    #[test]
    fn gl2_big_block() {
        let l = lc("1/2,-1/2");
        let ps = ParamSet::new(&l).unwrap();
        let big = ps.blocks.iter().find(|b| b.len() == 3).unwrap();
        let m = HeckeModule::new(&l, big, Side::Primal).unwrap();
        let d = verdier_matrix(&m).unwrap();
        // minimum: D(M) = q M at l = -1
        assert_eq!(d[0], unit(0, LaurentPoly::q_pow(1)));
        assert_eq!(d[1].len(), 2);
    }

    #[test]
    fn all_blocks_up_to_rank_four() {
        for l in lambda_templates(4) {
            let ps = ParamSet::new(&l).unwrap();
            for b in ps.blocks.iter().chain(&ps.twisted_blocks) {
                for side in [Side::Primal, Side::Dual] {
                    let m = HeckeModule::new(&l, b, side).unwrap();
                    verdier_matrix(&m).unwrap_or_else(|e| panic!("{} {:?} {}", l, side, e));
                }
            }
        }
    }
}
