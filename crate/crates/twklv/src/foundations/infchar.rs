use std::fmt;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::weyl::WeylElem;

/// Exact rational. Serialized as "p/q" (or "p" when integral).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Rat(pub Ratio<i64>);

impl Rat {
    pub fn new(n: i64, d: i64) -> Self {
        Rat(Ratio::new(n, d))
    }

    pub fn int(n: i64) -> Self {
        Rat(Ratio::from_integer(n))
    }

    pub fn zero() -> Self {
        Rat::int(0)
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn to_integer(&self) -> Option<i64> {
        self.is_integer().then(|| self.0.to_integer())
    }

    /// True when 2x is an odd integer.
    pub fn is_half_odd(&self) -> bool {
        !self.is_integer() && (self.0 * 2).is_integer()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn parse(s: &str) -> Option<Rat> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n.trim().parse().ok()?;
            let d: i64 = d.trim().parse().ok()?;
            if d == 0 {
                return None;
            }
            Some(Rat::new(n, d))
        } else {
            s.parse::<i64>().ok().map(Rat::int)
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl std::ops::Add for Rat {
    type Output = Rat;
    fn add(self, o: Rat) -> Rat {
        Rat(self.0 + o.0)
    }
}

impl std::ops::Sub for Rat {
    type Output = Rat;
    fn sub(self, o: Rat) -> Rat {
        Rat(self.0 - o.0)
    }
}

impl std::ops::Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl std::ops::Mul<i64> for Rat {
    type Output = Rat;
    fn mul(self, k: i64) -> Rat {
        Rat(self.0 * k)
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Rat::parse(&s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {:?}", s)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NotThetaFixed(String),
    NotRegular(String),
    NotIntegrallyDominant(String),
}

impl Violation {
    pub fn name(&self) -> &'static str {
        match self {
            Violation::NotThetaFixed(_) => "NotThetaFixed",
            Violation::NotRegular(_) => "NotRegular",
            Violation::NotIntegrallyDominant(_) => "NotIntegrallyDominant",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let detail = match self {
            Violation::NotThetaFixed(d)
            | Violation::NotRegular(d)
            | Violation::NotIntegrallyDominant(d) => d,
        };
        write!(f, "{}: {}", self.name(), detail)
    }
}

/// Every violated clause, in clause order.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct InfCharError {
    pub violations: Vec<Violation>,
}

impl InfCharError {
    pub fn has(&self, name: &str) -> bool {
        self.violations.iter().any(|v| v.name() == name)
    }
}

impl fmt::Display for InfCharError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "empty infinitesimal character");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Positive root e_i - e_j, i < j (0-based).
pub type Root = (usize, usize);

/// Validated, sorted (strictly decreasing) infinitesimal character.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InfChar {
    lambda: Vec<Rat>,
}

impl InfChar {
    pub fn n(&self) -> usize {
        self.lambda.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.lambda
    }

    pub fn get(&self, i: usize) -> Rat {
        self.lambda[i]
    }

    pub fn is_integral(&self, i: usize, j: usize) -> bool {
        (self.lambda[i] - self.lambda[j]).is_integer()
    }

    /// λ_i - λ_j when it is an integer.
    pub fn int_diff(&self, i: usize, j: usize) -> Option<i64> {
        (self.lambda[i] - self.lambda[j]).to_integer()
    }

    /// Index of coordinate i under the ϑ-flip.
    pub fn mirror(&self, i: usize) -> usize {
        self.n() - 1 - i
    }

    /// ρ of GL_N (also ∨ρ).
    pub fn rho(&self) -> Vec<Rat> {
        let n = self.n() as i64;
        (0..n).map(|i| Rat::new(n - 1 - 2 * i, 2)).collect()
    }

    /// Half sum of R^+(λ).
    pub fn rho_lambda(&self) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.n()];
        for (i, j) in integral_roots(self) {
            v[i] = v[i] + Rat::new(1, 2);
            v[j] = v[j] - Rat::new(1, 2);
        }
        v
    }

    pub fn label(&self) -> String {
        self.lambda
            .iter()
            .map(|r| r.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for InfChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.label())
    }
}

impl Serialize for InfChar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.lambda.serialize(s)
    }
}

/// Sorts decreasingly, then checks every clause and reports all that fail.
pub fn validate_infchar(lambda: &[Rat]) -> Result<InfChar, InfCharError> {
    if lambda.is_empty() {
        return Err(InfCharError { violations: vec![] });
    }
    let mut v = lambda.to_vec();
    v.sort_by(|a, b| b.cmp(a));
    let n = v.len();
    let mut violations = vec![];
    let bad: Vec<usize> = (0..n).filter(|&i| v[i] != -v[n - 1 - i]).collect();
    if !bad.is_empty() {
        violations.push(Violation::NotThetaFixed(format!(
            "sorted λ = ({}) is not of the form λ_i = -λ_(N+1-i) at position {}",
            v.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(","),
            bad[0] + 1
        )));
    }
    if let Some(i) = (1..n).find(|&i| v[i] == v[i - 1]) {
        violations.push(Violation::NotRegular(format!(
            "coordinate {} repeats",
            v[i]
        )));
    }
    for i in 0..n {
        for j in i + 1..n {
            if let Some(k) = (v[i] - v[j]).to_integer() {
                if k < 0 {
                    violations.push(Violation::NotIntegrallyDominant(format!(
                        "root e{}-e{} pairs to {}",
                        i + 1,
                        j + 1,
                        k
                    )));
                }
            }
        }
    }
    if violations.is_empty() {
        Ok(InfChar { lambda: v })
    } else {
        Err(InfCharError { violations })
    }
}

/// Parses "a,b,c" into rationals.
pub fn parse_lambda(s: &str) -> Option<Vec<Rat>> {
    s.split(',').map(Rat::parse).collect()
}

/// R^+(λ).
pub fn integral_roots(lc: &InfChar) -> Vec<Root> {
    let n = lc.n();
    let mut out = vec![];
    for i in 0..n {
        for j in i + 1..n {
            if lc.is_integral(i, j) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Simple roots of R^+(λ): consecutive members of an integrality class.
pub fn simple_integral_roots(lc: &InfChar) -> Vec<Root> {
    let n = lc.n();
    let mut out = vec![];
    for i in 0..n {
        if let Some(j) = (i + 1..n).find(|&j| lc.is_integral(i, j)) {
            out.push((i, j));
        }
    }
    out
}

pub fn theta_on_root(n: usize, r: Root) -> Root {
    (n - 1 - r.1, n - 1 - r.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum OrbitKind {
    Type1,
    Type2,
    Type3,
}

impl OrbitKind {
    pub fn digit(&self) -> char {
        match self {
            OrbitKind::Type1 => '1',
            OrbitKind::Type2 => '2',
            OrbitKind::Type3 => '3',
        }
    }
}

/// A ϑ-orbit of simple integral roots, or (untwisted use) a single simple root.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KappaOrbit {
    pub roots: Vec<Root>,
    pub kind: OrbitKind,
    pub w_kappa: WeylElem,
    /// Length of w_κ in W(λ).
    pub len: u32,
}

impl KappaOrbit {
    pub fn single(n: usize, r: Root) -> Self {
        KappaOrbit {
            roots: vec![r],
            kind: OrbitKind::Type1,
            w_kappa: WeylElem::transposition(n, r.0, r.1),
            len: 1,
        }
    }

    pub fn label(&self) -> String {
        self.roots
            .iter()
            .map(|(i, j)| format!("e{}-e{}", i + 1, j + 1))
            .collect::<Vec<_>>()
            .join("+")
    }
}

/// Partition of the simple integral roots into ϑ-orbits.
pub fn theta_orbits(lc: &InfChar) -> Vec<KappaOrbit> {
    let n = lc.n();
    let simple = simple_integral_roots(lc);
    let mut out = vec![];
    let mut used = vec![false; simple.len()];
    for (k, &a) in simple.iter().enumerate() {
        if used[k] {
            continue;
        }
        used[k] = true;
        let b = theta_on_root(n, a);
        let sa = WeylElem::transposition(n, a.0, a.1);
        if b == a {
            out.push(KappaOrbit {
                roots: vec![a],
                kind: OrbitKind::Type1,
                w_kappa: sa,
                len: 1,
            });
            continue;
        }
        let kb = simple
            .iter()
            .position(|&r| r == b)
            .expect("simple integral roots are ϑ-stable");
        used[kb] = true;
        let sb = WeylElem::transposition(n, b.0, b.1);
        let shares = a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1;
        if shares {
            out.push(KappaOrbit {
                roots: vec![a, b],
                kind: OrbitKind::Type3,
                w_kappa: sa.compose(&sb).compose(&sa),
                len: 3,
            });
        } else {
            out.push(KappaOrbit {
                roots: vec![a, b],
                kind: OrbitKind::Type2,
                w_kappa: sa.compose(&sb),
                len: 2,
            });
        }
    }
    out
}

/// ℓ in W(λ): number of positive integral roots sent negative.
pub fn integral_length(lc: &InfChar, w: &WeylElem) -> usize {
    integral_roots(lc)
        .into_iter()
        .filter(|&(i, j)| w.apply(i) > w.apply(j))
        .count()
}

/// True if w permutes coordinates only within integrality classes.
pub fn in_integral_weyl_group(lc: &InfChar, w: &WeylElem) -> bool {
    (0..lc.n()).all(|i| lc.is_integral(i, w.apply(i)))
}

/// Length in W(λ)^ϑ by greedy right descent through the generators w_κ.
pub fn theta_length(lc: &InfChar, orbits: &[KappaOrbit], w: &WeylElem) -> Option<usize> {
    let mut cur = w.clone();
    let mut steps = 0;
    while !cur.is_identity() {
        let l = integral_length(lc, &cur);
        let next = orbits.iter().find_map(|k| {
            let c = cur.compose(&k.w_kappa);
            (integral_length(lc, &c) + k.len as usize == l).then_some(c)
        })?;
        cur = next;
        steps += 1;
    }
    Some(steps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(s: &str) -> Vec<Rat> {
        parse_lambda(s).unwrap()
    }

    #[test]
    fn valid_examples() {
        assert!(validate_infchar(&lam("1/2,-1/2")).is_ok());
        assert!(validate_infchar(&lam("1,0,-1")).is_ok());
        assert!(validate_infchar(&lam("-1/2,1/2")).is_ok());
    }

    #[test]
    fn invalid_examples_name_clauses() {
        let e = validate_infchar(&lam("1,1,-2")).unwrap_err();
        assert!(e.has("NotThetaFixed"));
        let e = validate_infchar(&lam("1,1")).unwrap_err();
        assert!(e.has("NotRegular"));
        assert!(e.to_string().contains("NotRegular"));
        let e = validate_infchar(&lam("0,0")).unwrap_err();
        assert_eq!(e.violations.len(), 1);
        assert!(e.has("NotRegular"));
    }

    #[test]
    fn integral_root_examples() {
        let l = validate_infchar(&lam("1/2,-1/2")).unwrap();
        assert_eq!(integral_roots(&l), vec![(0, 1)]);
        let l = validate_infchar(&lam("1/4,-1/4")).unwrap();
        assert!(integral_roots(&l).is_empty());
        let l = validate_infchar(&lam("1,0,-1")).unwrap();
        assert_eq!(integral_roots(&l).len(), 3);
    }

    #[test]
    fn orbit_examples() {
        let l = validate_infchar(&lam("1/2,-1/2")).unwrap();
        let o = theta_orbits(&l);
        assert_eq!(o.len(), 1);
        assert_eq!((o[0].kind, o[0].len), (OrbitKind::Type1, 1));

        let l = validate_infchar(&lam("1,0,-1")).unwrap();
        let o = theta_orbits(&l);
        assert_eq!(o.len(), 1);
        assert_eq!((o[0].kind, o[0].len), (OrbitKind::Type3, 3));
        let s1 = WeylElem::simple(3, 1);
        let s2 = WeylElem::simple(3, 2);
        assert_eq!(o[0].w_kappa, s1.compose(&s2).compose(&s1));

        let l = validate_infchar(&lam("3/2,1/2,-1/2,-3/2")).unwrap();
        let o = theta_orbits(&l);
        assert_eq!(o.len(), 2);
        assert_eq!(o[0].kind, OrbitKind::Type2);
        assert_eq!(o[0].roots, vec![(0, 1), (2, 3)]);
        assert_eq!(o[0].len, 2);
        assert_eq!(o[1].kind, OrbitKind::Type1);
        assert_eq!(o[1].roots, vec![(1, 2)]);
    }

    #[test]
    fn doubled_rho_parity() {
        for n in 1..=7 {
            let l: Vec<Rat> = (0..n).map(|i| Rat::int(n as i64 - 1 - 2 * i as i64)).collect();
            let lc = validate_infchar(&l).unwrap();
            for r in lc.rho() {
                let twice = (r * 2).to_integer().unwrap();
                assert_eq!(twice.rem_euclid(2), (n as i64 - 1).rem_euclid(2));
            }
        }
    }

    #[test]
    fn rho_lambda_of_integral_lambda_is_rho() {
        let l = validate_infchar(&lam("1,0,-1")).unwrap();
        assert_eq!(l.rho_lambda(), l.rho());
        let l = validate_infchar(&lam("1/4,-1/4")).unwrap();
        assert_eq!(l.rho_lambda(), vec![Rat::zero(), Rat::zero()]);
    }

    #[test]
    fn rational_serialization() {
        assert_eq!(serde_json::to_string(&Rat::new(-1, 2)).unwrap(), "\"-1/2\"");
        assert_eq!(serde_json::to_string(&Rat::int(3)).unwrap(), "\"3\"");
        let r: Rat = serde_json::from_str("\"2/4\"").unwrap();
        assert_eq!(r, Rat::new(1, 2));
    }
}
