use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::foundations::{simple_integral_roots, theta_orbits, InfChar, KappaOrbit};

use super::moves::{kappa_type, MoveError, Row};
use super::param::{
    enumerate_params, integral_length, theta_integral_length, GeomParam, Side,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    /// "cross:k" or "cayley:k", k the generator index
    pub label: String,
}

/// Members sorted by (l^I, w′, signs); edges index into `members`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub twisted: bool,
    pub members: Vec<GeomParam>,
    pub edges: Vec<Edge>,
    /// generators used for the moves (κ-orbits, or single roots when untwisted)
    pub gens: Vec<KappaOrbit>,
}

impl Block {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn index_of(&self, xi: &GeomParam) -> Option<usize> {
        self.members.iter().position(|m| m == xi)
    }

    pub fn contains(&self, xi: &GeomParam) -> bool {
        self.index_of(xi).is_some()
    }
}

/// Generators of the Hecke algebra: κ-orbits, or each simple integral root.
pub fn generators(lc: &InfChar, twisted: bool) -> Vec<KappaOrbit> {
    if twisted {
        theta_orbits(lc)
    } else {
        simple_integral_roots(lc)
            .into_iter()
            .map(|r| KappaOrbit::single(lc.n(), r))
            .collect()
    }
}

/// Neighbors of ξ under the cross action and Cayley moves of one generator.
fn moves(
    lc: &InfChar,
    k: &KappaOrbit,
    xi: &GeomParam,
    twisted: bool,
) -> Result<Vec<(GeomParam, &'static str)>, MoveError> {
    let t = kappa_type(lc, k, xi, Side::Primal, twisted)?;
    let mut out = vec![(t.cross.clone(), "cross")];
    match t.row {
        Row::I1 | Row::ICi | Row::I2Fixed => out.extend(t.up.into_iter().map(|x| (x, "cayley"))),
        Row::R2 | Row::RCr | Row::R1Fixed => out.extend(t.down.into_iter().map(|x| (x, "cayley"))),
        _ => {}
    }
    Ok(out)
}

pub fn param_order_key(lc: &InfChar, xi: &GeomParam) -> (i64, Vec<usize>, Vec<i8>) {
    (
        integral_length(lc, xi),
        xi.winv.as_slice().to_vec(),
        xi.signs.clone(),
    )
}

/// Connected components of the move graph, among all parameters (untwisted)
/// or among ϑ-fixed ones using κ-orbit moves (twisted).
pub fn block_decomposition(
    lc: &InfChar,
    params: &[GeomParam],
    twisted: bool,
) -> Result<Vec<Block>, MoveError> {
    let gens = generators(lc, twisted);
    let pool: BTreeSet<GeomParam> = params
        .iter()
        .filter(|x| !twisted || x.is_theta_fixed())
        .cloned()
        .collect();
    let mut assigned: BTreeSet<GeomParam> = BTreeSet::new();
    let mut blocks = vec![];
    for start in &pool {
        if assigned.contains(start) {
            continue;
        }
        let mut comp = BTreeSet::new();
        let mut queue = VecDeque::from([start.clone()]);
        comp.insert(start.clone());
        while let Some(x) = queue.pop_front() {
            for k in &gens {
                for (y, _) in moves(lc, k, &x, twisted)? {
                    if pool.contains(&y) && comp.insert(y.clone()) {
                        queue.push_back(y);
                    }
                }
            }
        }
        assigned.extend(comp.iter().cloned());
        let mut members: Vec<GeomParam> = comp.into_iter().collect();
        members.sort_by_key(|x| param_order_key(lc, x));
        let idx: BTreeMap<&GeomParam, usize> =
            members.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut edges = vec![];
        for (i, x) in members.iter().enumerate() {
            for (g, k) in gens.iter().enumerate() {
                for (y, kind) in moves(lc, k, x, twisted)? {
                    if let Some(&j) = idx.get(&y) {
                        if kind == "cross" && j == i {
                            continue;
                        }
                        if kind == "cross" && j < i {
                            continue;
                        }
                        // each Cayley edge once, from the lower-length end
                        if kind == "cayley"
                            && integral_length(lc, &members[j]) < integral_length(lc, x)
                        {
                            continue;
                        }
                        edges.push(Edge {
                            from: i,
                            to: j,
                            label: format!("{}:{}", kind, g),
                        });
                    }
                }
            }
        }
        blocks.push(Block {
            twisted,
            members,
            edges,
            gens: gens.clone(),
        });
    }
    blocks.sort_by_key(|b| param_order_key(lc, &b.members[0]));
    Ok(blocks)
}

/// The unique member of minimal l^I.
pub fn generic_param(lc: &InfChar, block: &Block) -> GeomParam {
    let min = block
        .members
        .iter()
        .map(|x| integral_length(lc, x))
        .min()
        .expect("nonempty block");
    let at_min: Vec<&GeomParam> = block
        .members
        .iter()
        .filter(|x| integral_length(lc, x) == min)
        .collect();
    assert_eq!(at_min.len(), 1, "block without a unique generic member");
    at_min[0].clone()
}

/// Everything about the parameters at one λ.
#[derive(Clone, Debug)]
pub struct ParamSet {
    pub lc: InfChar,
    pub params: Vec<GeomParam>,
    pub blocks: Vec<Block>,
    pub twisted_blocks: Vec<Block>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ParamRow {
    pub id: usize,
    pub param: GeomParam,
    pub length: i64,
    pub theta_length: Option<i64>,
    pub theta_fixed: bool,
    pub block: usize,
    pub twisted_block: Option<usize>,
}

impl ParamSet {
    pub fn new(lc: &InfChar) -> Result<ParamSet, MoveError> {
        let params = enumerate_params(lc);
        let blocks = block_decomposition(lc, &params, false)?;
        let twisted_blocks = block_decomposition(lc, &params, true)?;
        Ok(ParamSet {
            lc: lc.clone(),
            params,
            blocks,
            twisted_blocks,
        })
    }

    pub fn block_of(&self, xi: &GeomParam) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(xi))
    }

    pub fn twisted_block_of(&self, xi: &GeomParam) -> Option<usize> {
        self.twisted_blocks.iter().position(|b| b.contains(xi))
    }

    pub fn rows(&self) -> Vec<ParamRow> {
        self.params
            .iter()
            .enumerate()
            .map(|(id, x)| ParamRow {
                id,
                param: x.clone(),
                length: integral_length(&self.lc, x),
                theta_length: theta_integral_length(&self.lc, x),
                theta_fixed: x.is_theta_fixed(),
                block: self.block_of(x).expect("every parameter lies in a block"),
                twisted_block: self.twisted_block_of(x),
            })
            .collect()
    }

    /// Graphviz export of the blocks.
    pub fn to_dot(&self, twisted: bool) -> String {
        let blocks = if twisted {
            &self.twisted_blocks
        } else {
            &self.blocks
        };
        let mut s = String::from("digraph blocks {\n  node [shape=box];\n");
        for (b, blk) in blocks.iter().enumerate() {
            s.push_str(&format!("  subgraph cluster_{} {{\n    label=\"block {}\";\n", b, b));
            for (i, m) in blk.members.iter().enumerate() {
                s.push_str(&format!(
                    "    b{}_{} [label=\"{} l={}\"];\n",
                    b,
                    i,
                    m.label(),
                    integral_length(&self.lc, m)
                ));
            }
            for e in &blk.edges {
                s.push_str(&format!(
                    "    b{}_{} -> b{}_{} [label=\"{}\"];\n",
                    b, e.from, b, e.to, e.label
                ));
            }
            s.push_str("  }\n");
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundations::{parse_lambda, validate_infchar, WeylElem};

    fn lc(s: &str) -> InfChar {
        validate_infchar(&parse_lambda(s).unwrap()).unwrap()
    }

    fn labels(b: &Block) -> Vec<String> {
        let mut v: Vec<String> = b.members.iter().map(|m| m.label()).collect();
        v.sort();
        v
    }

    #[test]
    fn gl2_blocks() {
        let ps = ParamSet::new(&lc("1/2,-1/2")).unwrap();
        let got: Vec<Vec<String>> = ps.blocks.iter().map(labels).collect();
        assert_eq!(got.len(), 3);
        assert!(got.contains(&vec!["(1 2)|..".into(), "e|++".into(), "e|--".into()]));
        assert!(got.contains(&vec!["e|+-".into()]));
        assert!(got.contains(&vec!["e|-+".into()]));

        let ps = ParamSet::new(&lc("1,-1")).unwrap();
        let got: Vec<Vec<String>> = ps.blocks.iter().map(labels).collect();
        assert!(got.contains(&vec!["(1 2)|..".into(), "e|+-".into(), "e|-+".into()]));
        assert!(got.contains(&vec!["e|++".into()]));
        assert!(got.contains(&vec!["e|--".into()]));
        assert_eq!(ps.twisted_blocks.len(), 3);
    }

    #[test]
    fn gl1_blocks() {
        let ps = ParamSet::new(&lc("0")).unwrap();
        assert_eq!(ps.blocks.len(), 2);
        assert!(ps.blocks.iter().all(|b| b.len() == 1));
    }

    #[test]
    fn generic_members() {
        let l = lc("1/2,-1/2");
        let ps = ParamSet::new(&l).unwrap();
        let big = ps.blocks.iter().find(|b| b.len() == 3).unwrap();
        assert_eq!(generic_param(&l, big).winv, WeylElem::simple(2, 1));
        let single = ps.blocks.iter().find(|b| b.len() == 1).unwrap();
        assert_eq!(generic_param(&l, single), single.members[0]);

        let l = lc("1,0,-1");
        let ps = ParamSet::new(&l).unwrap();
        let triv = GeomParam::new(WeylElem::identity(3), vec![1, 1, 1]);
        let tb = &ps.twisted_blocks[ps.twisted_block_of(&triv).unwrap()];
        let g = generic_param(&l, tb);
        assert_eq!(g.winv.cycle_string(), "(1 3)");
        assert_eq!(integral_length(&l, &g), -2);
        let ub = &ps.blocks[ps.block_of(&triv).unwrap()];
        assert_eq!(generic_param(&l, ub), g);
    }

    #[test]
    fn every_block_has_unique_generic_member() {
        for l in crate::foundations::lambda_templates(4) {
            let ps = ParamSet::new(&l).unwrap();
            for b in ps.blocks.iter().chain(&ps.twisted_blocks) {
                let g = generic_param(&l, b);
                // the generic member has w′ = w0 on its support: no real roots for it
                assert_eq!(g, b.members[0]);
            }
            // twisted blocks refine the ϑ-fixed parts of untwisted blocks
            for tb in &ps.twisted_blocks {
                let ids: BTreeSet<_> = tb.members.iter().map(|m| ps.block_of(m)).collect();
                assert_eq!(ids.len(), 1, "{}", l);
            }
        }
    }

    #[test]
    fn dot_export_mentions_edges() {
        let ps = ParamSet::new(&lc("1/2,-1/2")).unwrap();
        let dot = ps.to_dot(false);
        assert!(dot.contains("cayley:0"));
        assert!(dot.starts_with("digraph"));
    }
}
