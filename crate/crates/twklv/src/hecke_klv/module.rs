use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::foundations::{InfChar, KappaOrbit, LaurentPoly};
use crate::params::{
    integral_length, kappa_type, theta_integral_length, Block, GeomParam, KType, Row, Side,
};

use super::HeckeError;

/// Sparse vector over the member indices of a module.
pub type Vector = BTreeMap<usize, LaurentPoly>;

pub(crate) fn axpy(acc: &mut Vector, c: &LaurentPoly, v: &Vector) {
    if c.is_zero() {
        return;
    }
    for (&k, x) in v {
        let e = acc.entry(k).or_insert_with(LaurentPoly::zero);
        *e += &(c * x);
        if e.is_zero() {
            acc.remove(&k);
        }
    }
}

pub(crate) fn add_at(acc: &mut Vector, k: usize, c: &LaurentPoly) {
    if c.is_zero() {
        return;
    }
    let e = acc.entry(k).or_insert_with(LaurentPoly::zero);
    *e += c;
    if e.is_zero() {
        acc.remove(&k);
    }
}

pub(crate) fn unit(k: usize, c: LaurentPoly) -> Vector {
    let mut v = Vector::new();
    add_at(&mut v, k, &c);
    v
}

/// A formal combination of standard modules M(ξ)^+ (or M(∨ξ)^+) of one block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeckeElem {
    pub side: Side,
    pub terms: BTreeMap<GeomParam, LaurentPoly>,
}

impl HeckeElem {
    pub fn zero(side: Side) -> Self {
        HeckeElem {
            side,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(side: Side, xi: &GeomParam) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(xi.clone(), LaurentPoly::one());
        HeckeElem { side, terms }
    }

    pub fn coeff(&self, xi: &GeomParam) -> LaurentPoly {
        self.terms.get(xi).cloned().unwrap_or_else(LaurentPoly::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// The Hecke module of one block on one side: basis, lengths, and the T_κ action.
#[derive(Clone, Debug)]
pub struct HeckeModule {
    pub lc: InfChar,
    pub side: Side,
    pub twisted: bool,
    /// sorted by (length, w′, signs)
    pub members: Vec<GeomParam>,
    /// l^I on the primal side, relative dual length on the dual side
    pub lengths: Vec<i64>,
    pub gens: Vec<KappaOrbit>,
    /// types[g][i]: type of generator g at member i
    pub types: Vec<Vec<KType>>,
    /// t_cols[g][i] = T_g M_i
    t_cols: Vec<Vec<Vector>>,
    index: HashMap<GeomParam, usize>,
}

fn q_len(k: &KappaOrbit) -> LaurentPoly {
    LaurentPoly::q_pow(k.len as i64)
}

impl HeckeModule {
    pub fn new(lc: &InfChar, block: &Block, side: Side) -> Result<HeckeModule, HeckeError> {
        let twisted = block.twisted;
        let prim: Vec<i64> = block.members.iter().map(|x| integral_length(lc, x)).collect();
        let top = prim.iter().copied().max().unwrap_or(0);
        let mut order: Vec<(i64, &GeomParam)> = block
            .members
            .iter()
            .zip(&prim)
            .map(|(x, &l)| match side {
                Side::Primal => (l, x),
                Side::Dual => (top - l, x),
            })
            .collect();
        order.sort_by(|a, b| {
            (a.0, a.1.winv.as_slice(), &a.1.signs).cmp(&(b.0, b.1.winv.as_slice(), &b.1.signs))
        });
        let members: Vec<GeomParam> = order.iter().map(|(_, x)| (*x).clone()).collect();
        let lengths: Vec<i64> = order.iter().map(|(l, _)| *l).collect();
        let index: HashMap<GeomParam, usize> = members
            .iter()
            .enumerate()
            .map(|(i, x)| (x.clone(), i))
            .collect();
        let gens = block.gens.clone();
        let mut types = vec![];
        let mut t_cols = vec![];
        for k in &gens {
            let mut ts = vec![];
            let mut cols = vec![];
            for x in &members {
                let t = kappa_type(lc, k, x, side, twisted)
                    .map_err(|e| HeckeError::IncompleteTable(e.to_string()))?;
                cols.push(t_column(k, x, &t, &index)?);
                ts.push(t);
            }
            types.push(ts);
            t_cols.push(cols);
        }
        Ok(HeckeModule {
            lc: lc.clone(),
            side,
            twisted,
            members,
            lengths,
            gens,
            types,
            t_cols,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn index_of(&self, xi: &GeomParam) -> Option<usize> {
        self.index.get(xi).copied()
    }

    /// l^I of the underlying primal parameter, whatever the side.
    pub fn primal_length(&self, i: usize) -> i64 {
        integral_length(&self.lc, &self.members[i])
    }

    pub fn theta_length(&self, i: usize) -> Option<i64> {
        theta_integral_length(&self.lc, &self.members[i])
    }

    pub fn t_col(&self, g: usize, i: usize) -> &Vector {
        &self.t_cols[g][i]
    }

    /// T̂_g M_i = q^{-len/2}(T_g + 1) M_i.
    pub fn t_hat_col(&self, g: usize, i: usize) -> Vector {
        let mut v = self.t_cols[g][i].clone();
        add_at(&mut v, i, &LaurentPoly::one());
        let s = LaurentPoly::half_pow(-(self.gens[g].len as i64));
        v.into_iter().map(|(k, c)| (k, &c * &s)).collect()
    }

    pub fn t_apply_vec(&self, g: usize, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (&i, c) in v {
            axpy(&mut out, c, &self.t_cols[g][i]);
        }
        out
    }

    pub fn t_hat_apply_vec(&self, g: usize, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (&i, c) in v {
            axpy(&mut out, c, &self.t_hat_col(g, i));
        }
        out
    }

    pub fn to_vec(&self, e: &HeckeElem) -> Result<Vector, HeckeError> {
        if e.side != self.side {
            return Err(HeckeError::BlockMismatch("element on the other side".into()));
        }
        let mut v = Vector::new();
        for (x, c) in &e.terms {
            let i = self
                .index_of(x)
                .ok_or_else(|| HeckeError::BlockMismatch(format!("{} not in block", x)))?;
            add_at(&mut v, i, c);
        }
        Ok(v)
    }

    pub fn to_elem(&self, v: &Vector) -> HeckeElem {
        HeckeElem {
            side: self.side,
            terms: v
                .iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(&i, c)| (self.members[i].clone(), c.clone()))
                .collect(),
        }
    }

    fn gen_index(&self, kappa: &KappaOrbit) -> Result<usize, HeckeError> {
        self.gens
            .iter()
            .position(|k| k == kappa)
            .ok_or_else(|| HeckeError::BlockMismatch(format!("κ={} not a generator", kappa.label())))
    }

    pub fn t_apply(&self, kappa: &KappaOrbit, e: &HeckeElem) -> Result<HeckeElem, HeckeError> {
        let g = self.gen_index(kappa)?;
        Ok(self.to_elem(&self.t_apply_vec(g, &self.to_vec(e)?)))
    }

    pub fn t_hat_apply(&self, kappa: &KappaOrbit, e: &HeckeElem) -> Result<HeckeElem, HeckeError> {
        let g = self.gen_index(kappa)?;
        Ok(self.to_elem(&self.t_hat_apply_vec(g, &self.to_vec(e)?)))
    }

    /// Overwrite one column of T_g; used to exercise the self-checks.
    pub fn corrupt(&mut self, g: usize, i: usize, col: Vector) {
        self.t_cols[g][i] = col;
    }

    /// (T+1)(T-Q) kills every basis element.
    pub fn check_quadratic(&self) -> Result<(), HeckeError> {
        for (g, k) in self.gens.iter().enumerate() {
            let q = q_len(k);
            let qm1 = &q - &LaurentPoly::one();
            for i in 0..self.len() {
                let t1 = self.t_cols[g][i].clone();
                let mut r = self.t_apply_vec(g, &t1);
                axpy(&mut r, &(-&qm1), &t1);
                add_at(&mut r, i, &(-&q));
                if !r.is_empty() {
                    return Err(HeckeError::QuadRel {
                        kappa: k.label(),
                        xi: self.members[i].label(),
                    });
                }
            }
        }
        Ok(())
    }

    /// T̂∘T̂ = (q^{len/2}+q^{-len/2})T̂.
    pub fn check_eigen(&self) -> Result<(), HeckeError> {
        for (g, k) in self.gens.iter().enumerate() {
            let l = k.len as i64;
            let ev = &LaurentPoly::half_pow(l) + &LaurentPoly::half_pow(-l);
            for i in 0..self.len() {
                let t1 = self.t_hat_col(g, i);
                let mut r = self.t_hat_apply_vec(g, &t1);
                axpy(&mut r, &(-&ev), &t1);
                if !r.is_empty() {
                    return Err(HeckeError::Eigen {
                        kappa: k.label(),
                        xi: self.members[i].label(),
                    });
                }
            }
        }
        Ok(())
    }
}

fn idx(index: &HashMap<GeomParam, usize>, x: &GeomParam) -> Result<usize, HeckeError> {
    index
        .get(x)
        .copied()
        .ok_or_else(|| HeckeError::BlockMismatch(format!("move leaves the block at {}", x)))
}

/// T_κ M for one basis element, by row of the action table.
fn t_column(
    k: &KappaOrbit,
    x: &GeomParam,
    t: &KType,
    index: &HashMap<GeomParam, usize>,
) -> Result<Vector, HeckeError> {
    let me = idx(index, x)?;
    let q = q_len(k);
    let one = LaurentPoly::one();
    let qm1 = &q - &one;
    let q1 = LaurentPoly::q_pow(1);
    let mut v = Vector::new();
    match t.row {
        Row::CPlus => add_at(&mut v, idx(index, &t.cross)?, &one),
        Row::CMinus => {
            add_at(&mut v, idx(index, &t.cross)?, &q);
            add_at(&mut v, me, &qm1);
        }
        Row::I1 => {
            add_at(&mut v, idx(index, &t.cross)?, &one);
            add_at(&mut v, idx(index, &t.up[0])?, &one);
        }
        Row::ICi => {
            add_at(&mut v, me, &q1);
            add_at(&mut v, idx(index, &t.up[0])?, &(&q1 + &one));
        }
        Row::RCr => {
            add_at(&mut v, me, &(&qm1 - &q1));
            add_at(&mut v, idx(index, &t.down[0])?, &(&q - &q1));
        }
        Row::I2Fixed => {
            add_at(&mut v, me, &one);
            for y in &t.up {
                add_at(&mut v, idx(index, y)?, &one);
            }
        }
        Row::R1Fixed => {
            add_at(&mut v, me, &(&qm1 - &one));
            for y in &t.down {
                add_at(&mut v, idx(index, y)?, &qm1);
            }
        }
        Row::R2 => {
            add_at(&mut v, me, &qm1);
            add_at(&mut v, idx(index, &t.cross)?, &(-&one));
            add_at(&mut v, idx(index, &t.down[0])?, &qm1);
        }
        Row::I2Swapped | Row::Rn => add_at(&mut v, me, &(-&one)),
        Row::R1Swapped | Row::Ic => add_at(&mut v, me, &q),
    }
    Ok(v)
}

/// Sign relating the two sides in the duality check: ϑ-lengths when twisted, l^I otherwise.
fn duality_sign(m: &HeckeModule, i: usize, j: usize) -> i64 {
    let d = if m.twisted {
        m.theta_length(i).unwrap_or(0) - m.theta_length(j).unwrap_or(0)
    } else {
        m.primal_length(i) - m.primal_length(j)
    };
    if d.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Entrywise: (−1)^{Δ}[M(ξ₂) in T_p M(ξ₁)] = [M(∨ξ₁) in −T_d M(∨ξ₂) + (Q−1)M(∨ξ₂)].
pub fn check_duality(primal: &HeckeModule, dual: &HeckeModule) -> Result<(), HeckeError> {
    if primal.side != Side::Primal || dual.side != Side::Dual || primal.len() != dual.len() {
        return Err(HeckeError::BlockMismatch("duality check needs both sides".into()));
    }
    for (g, k) in primal.gens.iter().enumerate() {
        let qm1 = &q_len(k) - &LaurentPoly::one();
        for i1 in 0..primal.len() {
            let col = primal.t_col(g, i1);
            for i2 in 0..primal.len() {
                let lhs = col
                    .get(&i2)
                    .map(|c| c.scale(duality_sign(primal, i2, i1)))
                    .unwrap_or_else(LaurentPoly::zero);
                let d1 = dual.index_of(&primal.members[i1]).expect("same block");
                let d2 = dual.index_of(&primal.members[i2]).expect("same block");
                let mut rhs = dual
                    .t_col(g, d2)
                    .get(&d1)
                    .map(|c| -c)
                    .unwrap_or_else(LaurentPoly::zero);
                if d1 == d2 {
                    rhs += &qm1;
                }
                if lhs != rhs {
                    return Err(HeckeError::Duality {
                        kappa: k.label(),
                        xi1: primal.members[i1].label(),
                        xi2: primal.members[i2].label(),
                    });
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundations::{lambda_templates, parse_lambda, validate_infchar};
    use crate::params::ParamSet;

    fn lc(s: &str) -> InfChar {
        validate_infchar(&parse_lambda(s).unwrap()).unwrap()
    }

    #[test]
    fn gl2_primal_rows() {
        let l = lc("1/2,-1/2");
        let ps = ParamSet::new(&l).unwrap();
        let big = ps.blocks.iter().find(|b| b.len() == 3).unwrap();
        let m = HeckeModule::new(&l, big, Side::Primal).unwrap();
        // D first (l = -1), then ++, --
        assert_eq!(m.lengths, vec![-1, 0, 0]);
        let col = m.t_col(0, 0);
        assert_eq!(col.len(), 3);
        assert!(col.values().all(|c| *c == LaurentPoly::one()));
        let k = &m.gens[0];
        let t = m.t_hat_apply(k, &HeckeElem::basis(Side::Primal, &m.members[0])).unwrap();
        assert_eq!(t.coeff(&m.members[0]), LaurentPoly::half_pow(-1).scale(2));
    }

    #[test]
    fn dual_table_rows() {
        // dual 1C+: T̂ M = q^{-1/2}(M + w×M)
        let l = lc("1/2,-1/2");
        let ps = ParamSet::new(&l).unwrap();
        let m = HeckeModule::new(&l, &ps.blocks[0], Side::Dual).unwrap();
        for g in 0..m.gens.len() {
            for i in 0..m.len() {
                if m.types[g][i].tag == "1C+" {
                    let v = m.t_hat_col(g, i);
                    assert!(v.values().all(|c| *c == LaurentPoly::half_pow(-1)));
                }
            }
        }
        // dual 3Ci/2Ci: the ascent row has the (q+1) factor
        let l = lc("1,0,-1");
        let ps = ParamSet::new(&l).unwrap();
        for b in &ps.twisted_blocks {
            let m = HeckeModule::new(&l, b, Side::Dual).unwrap();
            for i in 0..m.len() {
                if m.types[0][i].tag == "3Ci" || m.types[0][i].tag == "3i" {
                    let v = m.t_hat_col(0, i);
                    let want = LaurentPoly::from_terms([(-1, 1), (-3, 1)]);
                    assert!(v.values().all(|c| *c == want), "{:?}", v);
                }
            }
        }
    }

    #[test]
    fn compact_and_cminus_rows() {
        for l in lambda_templates(4) {
            let ps = ParamSet::new(&l).unwrap();
            for b in ps.blocks.iter().chain(&ps.twisted_blocks) {
                for side in [Side::Primal, Side::Dual] {
                    let m = HeckeModule::new(&l, b, side).unwrap();
                    for (g, k) in m.gens.iter().enumerate() {
                        let h = k.len as i64;
                        for i in 0..m.len() {
                            let t = &m.types[g][i];
                            let v = m.t_hat_col(g, i);
                            if t.row == Row::Ic {
                                let ev = &LaurentPoly::half_pow(h) + &LaurentPoly::half_pow(-h);
                                assert_eq!(v, unit(i, ev));
                            }
                            if t.row == Row::CMinus {
                                let j = m.index_of(&t.cross).unwrap();
                                let mut w = unit(i, LaurentPoly::half_pow(h));
                                add_at(&mut w, j, &LaurentPoly::half_pow(h));
                                assert_eq!(v, w);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn quadratic_eigen_and_duality_on_templates() {
        for l in lambda_templates(4) {
            let ps = ParamSet::new(&l).unwrap();
            for b in ps.blocks.iter().chain(&ps.twisted_blocks) {
                let p = HeckeModule::new(&l, b, Side::Primal).unwrap();
                let d = HeckeModule::new(&l, b, Side::Dual).unwrap();
                p.check_quadratic().unwrap();
                d.check_quadratic().unwrap();
                p.check_eigen().unwrap();
                d.check_eigen().unwrap();
                check_duality(&p, &d).unwrap_or_else(|e| panic!("{} {}", l, e));
            }
        }
    }

    #[test]
    fn corrupted_table_is_reported() {
        let l = lc("1/2,-1/2");
        let ps = ParamSet::new(&l).unwrap();
        let big = ps.blocks.iter().find(|b| b.len() == 3).unwrap();
        let mut m = HeckeModule::new(&l, big, Side::Primal).unwrap();
        m.corrupt(0, 0, unit(0, LaurentPoly::constant(2)));
        let err = m.check_quadratic().unwrap_err();
        assert_eq!(err.to_string(), "quadrel violated at (e1-e2, (1 2)|..)");
    }
}
