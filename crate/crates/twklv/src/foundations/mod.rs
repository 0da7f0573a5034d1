//! Coefficient ring, symmetric-group combinatorics, ϑ and κ-orbits.

mod infchar;
mod laurent;
mod weyl;

pub use infchar::{
    in_integral_weyl_group, integral_length, integral_roots, parse_lambda, simple_integral_roots,
    theta_length, theta_on_root, theta_orbits, validate_infchar, InfChar, InfCharError,
    KappaOrbit, OrbitKind, Rat, Root, Violation,
};
pub use laurent::LaurentPoly;
pub use weyl::{all_perms, involutions, theta_on_weyl, twisted_involutions, WeylElem};

use std::collections::BTreeSet;

/// One representative ϑ-fixed regular λ per integrality pattern, for each N <= max_n.
///
/// The pattern of λ is: for each pair i<j, whether λ_i-λ_j is integral and, if
/// so, its parity, together with whether each λ_i is integral. Candidates come
/// from a grid of quarter-integers, which realizes every pattern for N <= 4.
pub fn lambda_templates(max_n: usize) -> Vec<InfChar> {
    let grid: Vec<Rat> = (1..=16).map(|k| Rat::new(k, 4)).collect();
    let mut out = vec![];
    for n in 1..=max_n {
        let half = n / 2;
        let mut seen = BTreeSet::new();
        let mut cands: Vec<Vec<Rat>> = vec![vec![]];
        for _ in 0..half {
            let mut next = vec![];
            for c in &cands {
                for &g in &grid {
                    if c.last().map_or(true, |&l: &Rat| g < l) {
                        let mut d = c.clone();
                        d.push(g);
                        next.push(d);
                    }
                }
            }
            cands = next;
        }
        for top in cands {
            let mut lam = top.clone();
            if n % 2 == 1 {
                lam.push(Rat::zero());
            }
            lam.extend(top.iter().rev().map(|&x| -x));
            let Ok(lc) = validate_infchar(&lam) else { continue };
            if seen.insert(pattern(&lc)) {
                out.push(lc);
            }
        }
    }
    out
}

fn pattern(lc: &InfChar) -> Vec<i8> {
    let n = lc.n();
    let mut p = vec![];
    for i in 0..n {
        for j in i + 1..n {
            p.push(match lc.int_diff(i, j) {
                Some(k) => (k.rem_euclid(2)) as i8,
                None => -1,
            });
        }
        p.push(if lc.get(i).is_integer() {
            0
        } else if lc.get(i).is_half_odd() {
            1
        } else {
            2
        });
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{HashSet, VecDeque};

    /// Elements of W(λ) commuting with w0, by brute force over S_N.
    fn theta_fixed_integral_weyl(lc: &InfChar) -> HashSet<WeylElem> {
        let w0 = WeylElem::longest(lc.n());
        all_perms(lc.n())
            .into_iter()
            .filter(|w| in_integral_weyl_group(lc, w) && w.compose(&w0) == w0.compose(w))
            .collect()
    }

    fn order(w: &WeylElem) -> usize {
        let mut k = 1;
        let mut p = w.clone();
        while !p.is_identity() {
            p = p.compose(w);
            k += 1;
        }
        k
    }

    #[test]
    fn kappa_generators_satisfy_coxeter_relations_and_generate() {
        for lc in lambda_templates(5) {
            let orbits = theta_orbits(&lc);
            for a in &orbits {
                assert!(a.w_kappa.compose(&a.w_kappa).is_identity());
                assert_eq!(integral_length(&lc, &a.w_kappa), a.len as usize, "{}", lc);
                for b in &orbits {
                    if a == b {
                        continue;
                    }
                    let m = order(&a.w_kappa.compose(&b.w_kappa));
                    assert!([2, 3, 4, 6].contains(&m), "{} m={}", lc, m);
                    let disjoint = a.roots.iter().all(|r| {
                        b.roots
                            .iter()
                            .all(|s| r.0 != s.0 && r.0 != s.1 && r.1 != s.0 && r.1 != s.1)
                    });
                    if disjoint {
                        assert_eq!(m, 2);
                    }
                }
            }
            // closure of the generators equals the brute-force W(λ)^ϑ
            let target = theta_fixed_integral_weyl(&lc);
            let mut seen = HashSet::new();
            let e = WeylElem::identity(lc.n());
            let mut queue = VecDeque::from([e.clone()]);
            seen.insert(e);
            let mut dist = std::collections::HashMap::new();
            dist.insert(WeylElem::identity(lc.n()), 0usize);
            while let Some(w) = queue.pop_front() {
                for k in &orbits {
                    let v = w.compose(&k.w_kappa);
                    if seen.insert(v.clone()) {
                        dist.insert(v.clone(), dist[&w] + 1);
                        queue.push_back(v);
                    }
                }
            }
            assert_eq!(seen, target, "{}", lc);
            for (w, d) in &dist {
                assert_eq!(theta_length(&lc, &orbits, w), Some(*d), "{} {}", lc, w);
            }
        }
    }

    #[test]
    fn templates_are_valid_and_distinct() {
        let t = lambda_templates(4);
        assert!(t.iter().any(|l| l.n() == 1));
        let n2 = t.iter().filter(|l| l.n() == 2).count();
        assert_eq!(n2, 3);
        let set: HashSet<_> = t.iter().map(pattern).collect();
        assert_eq!(set.len(), t.len());
    }
}
