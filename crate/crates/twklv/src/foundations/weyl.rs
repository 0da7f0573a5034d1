use std::fmt;

/// Permutation of {0,…,N-1}; `perm[i]` is the image of `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct WeylElem {
    perm: Vec<usize>,
}

impl WeylElem {
    pub fn identity(n: usize) -> Self {
        Self {
            perm: (0..n).collect(),
        }
    }

    /// Panics if `perm` is not a bijection.
    pub fn from_perm(perm: Vec<usize>) -> Self {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in &perm {
            assert!(p < n && !seen[p], "not a permutation: {:?}", perm);
            seen[p] = true;
        }
        Self { perm }
    }

    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut w = Self::identity(n);
        w.perm.swap(i, j);
        w
    }

    /// The longest element i -> n-1-i.
    pub fn longest(n: usize) -> Self {
        Self {
            perm: (0..n).rev().collect(),
        }
    }

    /// Simple reflection s_k swapping k-1 and k (1-based k).
    pub fn simple(n: usize, k: usize) -> Self {
        Self::transposition(n, k - 1, k)
    }

    pub fn rank(&self) -> usize {
        self.perm.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.perm[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.perm
    }

    /// `(self * other)(i) = self(other(i))`
    pub fn compose(&self, other: &WeylElem) -> WeylElem {
        WeylElem {
            perm: other.perm.iter().map(|&i| self.perm[i]).collect(),
        }
    }

    pub fn inverse(&self) -> WeylElem {
        let mut inv = vec![0; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p] = i;
        }
        WeylElem { perm: inv }
    }

    pub fn conjugate_by(&self, g: &WeylElem) -> WeylElem {
        g.compose(self).compose(&g.inverse())
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn is_involution(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| self.perm[p] == i)
    }

    /// Inversion count.
    pub fn length(&self) -> usize {
        let n = self.perm.len();
        let mut c = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.perm[i] > self.perm[j] {
                    c += 1;
                }
            }
        }
        c
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.perm.len()).filter(|&i| self.perm[i] == i).collect()
    }

    /// Two-cycles as (i, j) with i < j.
    pub fn two_cycles(&self) -> Vec<(usize, usize)> {
        (0..self.perm.len())
            .filter_map(|i| {
                let j = self.perm[i];
                (j > i && self.perm[j] == i).then_some((i, j))
            })
            .collect()
    }

    /// Cycle notation with 1-based points, "e" for the identity.
    pub fn cycle_string(&self) -> String {
        let n = self.perm.len();
        let mut seen = vec![false; n];
        let mut out = String::new();
        for s in 0..n {
            if seen[s] || self.perm[s] == s {
                continue;
            }
            let mut cyc = vec![];
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                cyc.push((i + 1).to_string());
                i = self.perm[i];
            }
            out.push('(');
            out.push_str(&cyc.join(" "));
            out.push(')');
        }
        if out.is_empty() {
            "e".to_string()
        } else {
            out
        }
    }

    /// Inverse of `cycle_string`.
    pub fn parse_cycles(n: usize, s: &str) -> Option<WeylElem> {
        let s = s.trim();
        let mut perm: Vec<usize> = (0..n).collect();
        if s == "e" || s.is_empty() {
            return Some(Self { perm });
        }
        let mut seen = vec![false; n];
        for chunk in s.split('(').skip(1) {
            let body = chunk.strip_suffix(')')?;
            let pts: Vec<usize> = body
                .split_whitespace()
                .map(|t| t.parse::<usize>().ok().filter(|&k| k >= 1 && k <= n).map(|k| k - 1))
                .collect::<Option<_>>()?;
            for (k, &p) in pts.iter().enumerate() {
                if seen[p] {
                    return None;
                }
                seen[p] = true;
                perm[p] = pts[(k + 1) % pts.len()];
            }
        }
        Some(Self { perm })
    }
}

impl fmt::Display for WeylElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cycle_string())
    }
}

/// w -> w0 w w0
pub fn theta_on_weyl(w: &WeylElem) -> WeylElem {
    w.conjugate_by(&WeylElem::longest(w.rank()))
}

/// All permutations of {0..n-1} in lexicographic order.
pub fn all_perms(n: usize) -> Vec<WeylElem> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<WeylElem>) {
        let n = used.len();
        if cur.len() == n {
            out.push(WeylElem { perm: cur.clone() });
            return;
        }
        for k in 0..n {
            if !used[k] {
                used[k] = true;
                cur.push(k);
                rec(cur, used, out);
                cur.pop();
                used[k] = false;
            }
        }
    }
    let mut out = vec![];
    rec(&mut vec![], &mut vec![false; n], &mut out);
    out
}

/// Involutions of S_n, generated directly as products of disjoint transpositions.
pub fn involutions(n: usize) -> Vec<WeylElem> {
    fn rec(perm: &mut Vec<usize>, start: usize, out: &mut Vec<WeylElem>) {
        let n = perm.len();
        let Some(i) = (start..n).find(|&i| perm[i] == usize::MAX) else {
            out.push(WeylElem { perm: perm.clone() });
            return;
        };
        perm[i] = i;
        rec(perm, i + 1, out);
        for j in i + 1..n {
            if perm[j] == usize::MAX {
                perm[i] = j;
                perm[j] = i;
                rec(perm, i + 1, out);
                perm[j] = usize::MAX;
            }
        }
        perm[i] = usize::MAX;
    }
    let mut out = vec![];
    rec(&mut vec![usize::MAX; n], 0, &mut out);
    out.sort();
    out
}

/// {w : (w w0)^2 = 1}
pub fn twisted_involutions(n: usize) -> Vec<WeylElem> {
    let w0 = WeylElem::longest(n);
    let mut out: Vec<WeylElem> = involutions(n).iter().map(|v| v.compose(&w0)).collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn theta_examples() {
        assert_eq!(theta_on_weyl(&WeylElem::simple(2, 1)), WeylElem::simple(2, 1));
        assert_eq!(theta_on_weyl(&WeylElem::simple(3, 1)), WeylElem::simple(3, 2));
        assert_eq!(theta_on_weyl(&WeylElem::simple(4, 2)), WeylElem::simple(4, 2));
    }

    #[test]
    fn twisted_involution_counts_match_brute_force() {
        for n in 1..=6 {
            let w0 = WeylElem::longest(n);
            let brute: Vec<WeylElem> = all_perms(n)
                .into_iter()
                .filter(|w| {
                    let v = w.compose(&w0);
                    v.compose(&v).is_identity()
                })
                .collect();
            let mut fast = twisted_involutions(n);
            fast.sort();
            let mut brute = brute;
            brute.sort();
            assert_eq!(fast, brute, "n={}", n);
        }
        assert_eq!(twisted_involutions(1).len(), 1);
        assert_eq!(twisted_involutions(2).len(), 2);
        assert_eq!(twisted_involutions(3).len(), 4);
    }

    #[test]
    fn twisted_involutions_satisfy_defining_relation() {
        // w * theta(w) = 1 with theta(w) = w0 w w0
        for n in 1..=5 {
            for w in twisted_involutions(n) {
                assert!(w.compose(&theta_on_weyl(&w)).is_identity());
            }
        }
    }

    #[test]
    fn cycle_strings_round_trip() {
        for w in all_perms(4) {
            let s = w.cycle_string();
            assert_eq!(WeylElem::parse_cycles(4, &s).unwrap(), w, "{}", s);
        }
        assert_eq!(WeylElem::transposition(3, 0, 2).cycle_string(), "(1 3)");
        assert!(WeylElem::parse_cycles(3, "(1 4)").is_none());
    }

    #[test]
    fn length_of_longest() {
        for n in 1..=6 {
            assert_eq!(WeylElem::longest(n).length(), n * (n - 1) / 2);
        }
    }

    proptest! {
        #[test]
        fn theta_is_involutive(seed in 0usize..720) {
            let perms = all_perms(6);
            let w = &perms[seed];
            prop_assert_eq!(&theta_on_weyl(&theta_on_weyl(w)), w);
        }

        #[test]
        fn composition_is_associative(a in 0usize..120, b in 0usize..120, c in 0usize..120) {
            let p = all_perms(5);
            let (a, b, c) = (&p[a], &p[b], &p[c]);
            prop_assert_eq!(a.compose(b).compose(c), a.compose(&b.compose(c)));
        }

        #[test]
        fn length_is_inverse_invariant(a in 0usize..720) {
            let p = all_perms(6);
            prop_assert_eq!(p[a].length(), p[a].inverse().length());
        }
    }
}
