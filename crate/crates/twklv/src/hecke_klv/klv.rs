use serde::Serialize;

use crate::foundations::{InfChar, LaurentPoly};
use crate::params::{Block, GeomParam, Side};

use super::module::{add_at, HeckeModule, Vector};
use super::verdier::{apply_verdier, verdier_matrix, DualityMatrix};
use super::HeckeError;

/// KLV polynomials of one block on one side. `p[x][y]` is P(x, y); members in module order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KLVTable {
    pub side: Side,
    pub twisted: bool,
    pub members: Vec<GeomParam>,
    /// l^I (primal) or relative dual length, matching `members`
    pub lengths: Vec<i64>,
    pub p: Vec<Vec<LaurentPoly>>,
}

impl KLVTable {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn index_of(&self, xi: &GeomParam) -> Option<usize> {
        self.members.iter().position(|m| m == xi)
    }

    pub fn get(&self, x: &GeomParam, y: &GeomParam) -> Option<&LaurentPoly> {
        Some(&self.p[self.index_of(x)?][self.index_of(y)?])
    }

    /// C(ξ) = Σ P(ξ′,ξ) M(ξ′), as a vector in module order.
    ///
    /// The action tables already carry the alternating signs, so the
    /// self-dual element is the plain sum.
    pub fn c_vector(&self, y: usize) -> Vector {
        let mut v = Vector::new();
        for x in 0..self.len() {
            add_at(&mut v, x, &self.p[x][y]);
        }
        v
    }

    /// Values at q = 1.
    pub fn at_one(&self) -> Vec<Vec<i64>> {
        self.p
            .iter()
            .map(|row| row.iter().map(|c| c.eval1()).collect())
            .collect()
    }
}


/// Solve for the self-dual basis given D.
///
/// In the normalized basis M̂ = q^{-l/2} M, D has matrix r̂ with unit diagonal,
/// and C(ξ) = Σ p̂(ξ′) M̂(ξ′) with p̂(ξ′) ∈ q^{-1/2}ℤ[q^{-1/2}] below the diagonal.
/// Going down in length, p̂(ξ′) − bar p̂(ξ′) = Σ_{z above ξ′} r̂(ξ′,z) bar p̂(z).
pub fn solve_klv(m: &HeckeModule, d: &DualityMatrix) -> Result<KLVTable, HeckeError> {
    let n = m.len();
    let l = &m.lengths;
    // r̂[v][z] = q^{(l(z)+l(v))/2} D_{vz}
    let mut rhat: Vec<Vec<(usize, LaurentPoly)>> = vec![vec![]; n];
    for (z, col) in d.iter().enumerate() {
        for (&v, c) in col {
            if v != z {
                rhat[v].push((z, c.shift(l[z] + l[v])));
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(l[i]));
    let mut p = vec![vec![LaurentPoly::zero(); n]; n];
    for y in 0..n {
        let mut phat: Vec<LaurentPoly> = vec![LaurentPoly::zero(); n];
        phat[y] = LaurentPoly::one();
        for &x in &order {
            if x == y || l[x] >= l[y] {
                continue;
            }
            let mut rhs = LaurentPoly::zero();
            for (z, r) in &rhat[x] {
                if !phat[*z].is_zero() {
                    rhs += &(r * &phat[*z].bar());
                }
            }
            if !(&rhs + &rhs.bar()).is_zero() {
                return Err(HeckeError::DegreeViolation(format!(
                    "no bar-invariant correction at ({}, {})",
                    m.members[x].label(),
                    m.members[y].label()
                )));
            }
            phat[x] = rhs.below(0);
        }
        for x in 0..n {
            if phat[x].is_zero() {
                continue;
            }
            let dl = l[y] - l[x];
            p[x][y] = phat[x].shift(dl);
        }
    }
    Ok(KLVTable {
        side: m.side,
        twisted: m.twisted,
        members: m.members.clone(),
        lengths: l.clone(),
        p,
    })
}

/// Structural checks: unit diagonal, triangularity, degree bound, polynomiality,
/// and D(C(ξ)) = q^{-l(ξ)} C(ξ).
pub fn check_klv(t: &KLVTable, d: &DualityMatrix) -> Result<(), HeckeError> {
    let n = t.len();
    for y in 0..n {
        for x in 0..n {
            let pxy = &t.p[x][y];
            let at = || format!("({}, {})", t.members[x].label(), t.members[y].label());
            if x == y {
                if *pxy != LaurentPoly::one() {
                    return Err(HeckeError::KlvStructure(format!("diagonal {}", at())));
                }
                continue;
            }
            if pxy.is_zero() {
                continue;
            }
            let dl = t.lengths[y] - t.lengths[x];
            if dl <= 0 {
                return Err(HeckeError::KlvStructure(format!("not triangular {}", at())));
            }
            if !pxy.is_integral_in_q() || pxy.min_exp().unwrap() < 0 {
                return Err(HeckeError::KlvStructure(format!("not a polynomial in q {}", at())));
            }
            // deg_q P <= (dl - 1)/2, i.e. half-exponent <= dl - 1
            if pxy.max_exp().unwrap() > dl - 1 {
                return Err(HeckeError::DegreeViolation(at()));
            }
        }
        let c = t.c_vector(y);
        let dc = apply_verdier(d, &c);
        let want: Vector = c
            .iter()
            .map(|(&k, v)| (k, v.shift(-2 * t.lengths[y])))
            .collect();
        if dc != want {
            return Err(HeckeError::KlvStructure(format!(
                "D(C) ≠ q^(-l) C at {}",
                t.members[y].label()
            )));
        }
    }
    Ok(())
}

/// Module, Verdier dual and KLV table of one block and side.
#[derive(Clone, Debug)]
pub struct SideComputation {
    pub module: HeckeModule,
    pub verdier: DualityMatrix,
    pub table: KLVTable,
}

pub fn compute_side(lc: &InfChar, block: &Block, side: Side) -> Result<SideComputation, HeckeError> {
    let module = HeckeModule::new(lc, block, side)?;
    let verdier = verdier_matrix(&module)?;
    let table = solve_klv(&module, &verdier)?;
    Ok(SideComputation {
        module,
        verdier,
        table,
    })
}

/// P^ϑ on a twisted block (primal side).
pub fn compute_twisted_klv(lc: &InfChar, block: &Block) -> Result<KLVTable, HeckeError> {
    if !block.twisted {
        return Err(HeckeError::BlockMismatch("expected a twisted block".into()));
    }
    Ok(compute_side(lc, block, Side::Primal)?.table)
}

/// Classical P on an untwisted block (primal side).
pub fn compute_untwisted_klv(lc: &InfChar, block: &Block) -> Result<KLVTable, HeckeError> {
    if block.twisted {
        return Err(HeckeError::BlockMismatch("expected an untwisted block".into()));
    }
    Ok(compute_side(lc, block, Side::Primal)?.table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundations::{lambda_templates, parse_lambda, validate_infchar, WeylElem};
    use crate::params::ParamSet;

    fn lc(s: &str) -> InfChar {
        validate_infchar(&parse_lambda(s).unwrap()).unwrap()
    }

    #[test]
    fn gl2_twisted_and_untwisted() {
        let l = lc("1/2,-1/2");
        let ps = ParamSet::new(&l).unwrap();
        let d = GeomParam::new(WeylElem::simple(2, 1), vec![0, 0]);
        let pp = GeomParam::new(WeylElem::identity(2), vec![1, 1]);
        let tb = &ps.twisted_blocks[ps.twisted_block_of(&pp).unwrap()];
        let t = compute_twisted_klv(&l, tb).unwrap();
        assert_eq!(*t.get(&d, &pp).unwrap(), LaurentPoly::one());
        let ub = &ps.blocks[ps.block_of(&pp).unwrap()];
        let u = compute_untwisted_klv(&l, ub).unwrap();
        assert_eq!(u.len(), 3);
        for row in u.at_one() {
            assert!(row.iter().all(|&x| x == 0 || x == 1));
        }
        assert_eq!(*u.get(&d, &pp).unwrap(), LaurentPoly::one());
    }

    #[test]
    fn gl3_trivial_block() {
        let l = lc("1,0,-1");
        let ps = ParamSet::new(&l).unwrap();
        let triv = GeomParam::new(WeylElem::identity(3), vec![1, 1, 1]);
        let tb = &ps.twisted_blocks[ps.twisted_block_of(&triv).unwrap()];
        let t = compute_twisted_klv(&l, tb).unwrap();
        let gen = crate::params::generic_param(&l, tb);
        assert_eq!(*t.get(&gen, &triv).unwrap(), LaurentPoly::one());
    }

    #[test]
    fn every_block_satisfies_the_structure_theorem() {
        for l in lambda_templates(4) {
            let ps = ParamSet::new(&l).unwrap();
            for b in ps.blocks.iter().chain(&ps.twisted_blocks) {
                for side in [Side::Primal, Side::Dual] {
                    let c = compute_side(&l, b, side).unwrap();
                    check_klv(&c.table, &c.verdier)
                        .unwrap_or_else(|e| panic!("{} {:?} {}", l, side, e));
                    if !b.twisted {
                        // classical KLV polynomials have non-negative coefficients
                        for row in &c.table.p {
                            for x in row {
                                assert!(x.terms().all(|(_, c)| c >= 0), "{} {}", l, x);
                            }
                        }
                    }
                }
            }
        }
    }
}
