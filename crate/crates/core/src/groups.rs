//! Finite groups as explicit Cayley tables.
//!
//! Element 0 is always the identity. Enumeration conventions:
//! * `cyclic(n)`: element `i` is `i mod n`.
//! * `dihedral(n)`: `r^a` is element `a`, `s·r^a` is element `n + a`.
//! * `symmetric(n)`: permutations in lexicographic one-line order, with
//!   product `(στ)(i) = σ(τ(i))`.

use crate::error::{Error, Result};

/// Largest symmetric group whose full table fits comfortably in memory
/// (S_7 has 5040² ≈ 25M entries).
pub const MAX_SYMMETRIC_DEGREE: usize = 7;
const ASSOCIATIVITY_CHECK_LIMIT: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    name: String,
    labels: Vec<String>,
    mul: Vec<u32>,
    inv: Vec<usize>,
}

impl GroupTable {
    /// Validates the table: identity at index 0, Latin square, inverses, and
    /// associativity for orders up to 64.
    pub fn new(name: impl Into<String>, labels: Vec<String>, mul: Vec<Vec<usize>>) -> Result<Self> {
        let order = labels.len();
        if mul.len() != order || mul.iter().any(|row| row.len() != order) {
            return Err(Error::InvalidGroup("table shape does not match label count".into()));
        }
        let flat = mul.iter().flatten().map(|&v| v as u32).collect();
        Self::from_flat(name.into(), labels, flat)
    }

    fn from_flat(name: String, labels: Vec<String>, mul: Vec<u32>) -> Result<Self> {
        let order = labels.len();
        if order == 0 {
            return Err(Error::InvalidGroup("empty group".into()));
        }
        let at = |g: usize, h: usize| mul[g * order + h] as usize;
        for g in 0..order {
            if at(0, g) != g || at(g, 0) != g {
                return Err(Error::InvalidGroup(format!("element 0 is not an identity for {g}")));
            }
        }
        let mut seen = vec![0u32; order];
        for pass in 0..2 {
            for i in 0..order {
                let stamp = (2 * i + pass + 1) as u32;
                for j in 0..order {
                    let v = if pass == 0 { at(i, j) } else { at(j, i) };
                    if v >= order || seen[v] == stamp {
                        return Err(Error::InvalidGroup(format!(
                            "{} {i} is not a permutation",
                            if pass == 0 { "row" } else { "column" }
                        )));
                    }
                    seen[v] = stamp;
                }
            }
        }
        let mut inv = vec![usize::MAX; order];
        for g in 0..order {
            inv[g] = (0..order).find(|&h| at(g, h) == 0).expect("Latin square row contains 0");
        }
        if order <= ASSOCIATIVITY_CHECK_LIMIT {
            for a in 0..order {
                for b in 0..order {
                    let ab = at(a, b);
                    for c in 0..order {
                        if at(ab, c) != at(a, at(b, c)) {
                            return Err(Error::InvalidGroup(format!(
                                "({a}·{b})·{c} != {a}·({b}·{c})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(Self {
            name,
            labels,
            mul,
            inv,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, g: usize) -> &str {
        &self.labels[g]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.mul[g * self.order() + h] as usize
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inv[g]
    }

    pub fn inverses(&self) -> &[usize] {
        &self.inv
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut k = 1;
        let mut x = g;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|g| (0..n).all(|h| self.mul(g, h) == self.mul(h, g)))
    }

    /// A small generating set, chosen greedily in enumeration order.
    pub fn generators(&self) -> Vec<usize> {
        let n = self.order();
        let mut in_subgroup = vec![false; n];
        in_subgroup[0] = true;
        let mut members = vec![0];
        let mut gens = Vec::new();
        for g in 1..n {
            if in_subgroup[g] {
                continue;
            }
            gens.push(g);
            // close the subgroup under right multiplication by generators
            let mut frontier = members.clone();
            while let Some(x) = frontier.pop() {
                for &s in &gens {
                    let y = self.mul(x, s);
                    if !in_subgroup[y] {
                        in_subgroup[y] = true;
                        members.push(y);
                        frontier.push(y);
                    }
                }
            }
            if members.len() == n {
                break;
            }
        }
        gens
    }
}

pub fn cyclic(n: usize) -> Result<GroupTable> {
    if n == 0 {
        return Err(Error::OutOfRange("cyclic group needs n >= 1".into()));
    }
    let labels = (0..n).map(|i| i.to_string()).collect();
    let mul = (0..n * n).map(|k| ((k / n + k % n) % n) as u32).collect();
    GroupTable::from_flat(format!("Z{n}"), labels, mul)
}

pub fn dihedral(n: usize) -> Result<GroupTable> {
    if n < 2 {
        return Err(Error::OutOfRange("dihedral group needs n >= 2".into()));
    }
    let order = 2 * n;
    let labels = (0..order)
        .map(|g| {
            let (s, a) = (g / n, g % n);
            let rot = match a {
                0 => String::new(),
                1 => "r".to_string(),
                _ => format!("r^{a}"),
            };
            match (s, a) {
                (0, 0) => "e".to_string(),
                (0, _) => rot,
                _ => format!("s{rot}"),
            }
        })
        .collect();
    // (s^e r^a)(s^f r^b) = s^(e+f) r^((-1)^f a + b)
    let mut mul = Vec::with_capacity(order * order);
    for g in 0..order {
        let (e, a) = (g / n, g % n);
        for h in 0..order {
            let (f, b) = (h / n, h % n);
            let rot = if f == 0 { (a + b) % n } else { (n - a + b) % n };
            mul.push((((e + f) % 2) * n + rot) as u32);
        }
    }
    GroupTable::from_flat(format!("D{n}"), labels, mul)
}

pub fn symmetric(n: usize) -> Result<GroupTable> {
    if n == 0 || n > MAX_SYMMETRIC_DEGREE {
        return Err(Error::OutOfRange(format!(
            "symmetric group needs 1 <= n <= {MAX_SYMMETRIC_DEGREE}, got {n}"
        )));
    }
    let perms = permutations(n);
    let labels = perms
        .iter()
        .map(|p| {
            let body: Vec<String> = p.iter().map(|v| (v + 1).to_string()).collect();
            format!("[{}]", body.join(","))
        })
        .collect();
    let mut mul = Vec::with_capacity(perms.len() * perms.len());
    let mut composed = vec![0usize; n];
    for sigma in &perms {
        for tau in &perms {
            for i in 0..n {
                composed[i] = sigma[tau[i]];
            }
            mul.push(permutation_rank(&composed) as u32);
        }
    }
    GroupTable::from_flat(format!("S{n}"), labels, mul)
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

/// Lexicographic index of a permutation (Lehmer code).
pub fn permutation_rank(p: &[usize]) -> usize {
    let n = p.len();
    let mut rank = 0;
    for i in 0..n {
        let smaller = p[i + 1..].iter().filter(|&&v| v < p[i]).count();
        rank = rank * (n - i) + smaller;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_inverses(g: &GroupTable) {
        for x in 0..g.order() {
            assert_eq!(g.mul(x, g.inv(x)), 0);
            assert_eq!(g.mul(g.inv(x), x), 0);
        }
    }

    #[test]
    fn cyclic_examples() {
        assert_eq!(cyclic(1).unwrap().order(), 1);
        let z2 = cyclic(2).unwrap();
        assert_eq!(
            (0..2).map(|i| (0..2).map(|j| z2.mul(i, j)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            vec![vec![0, 1], vec![1, 0]]
        );
        assert_eq!(cyclic(4).unwrap().inverses(), &[0, 3, 2, 1]);
        assert!(cyclic(0).is_err());
    }

    #[test]
    fn dihedral_examples() {
        let klein = dihedral(2).unwrap();
        assert_eq!(klein.order(), 4);
        assert!((0..4).all(|g| klein.inv(g) == g));
        let d3 = dihedral(3).unwrap();
        assert_eq!(d3.order(), 6);
        assert_ne!(d3.mul(1, 3), d3.mul(3, 1));
        for n in 2..9 {
            let d = dihedral(n).unwrap();
            assert_eq!(d.order(), 2 * n);
            check_inverses(&d);
            let (r, s) = (1 % n, n);
            assert_eq!(d.element_order(s), 2);
            // s r s = r^-1
            assert_eq!(d.mul(d.mul(s, r), s), d.inv(r));
        }
        assert!(dihedral(1).is_err());
    }

    #[test]
    fn symmetric_examples() {
        assert_eq!(symmetric(1).unwrap().order(), 1);
        let s3 = symmetric(3).unwrap();
        let mut orders: Vec<usize> = (0..6).map(|g| s3.element_order(g)).collect();
        orders.sort();
        let d3 = dihedral(3).unwrap();
        let mut dorders: Vec<usize> = (0..6).map(|g| d3.element_order(g)).collect();
        dorders.sort();
        assert_eq!(orders, vec![1, 2, 2, 2, 3, 3]);
        assert_eq!(orders, dorders);
        assert_eq!(symmetric(4).unwrap().order(), 24);
        assert!(symmetric(0).is_err());
        assert!(symmetric(MAX_SYMMETRIC_DEGREE + 1).is_err());
    }

    #[test]
    fn labels_and_generators() {
        let d4 = dihedral(4).unwrap();
        assert_eq!(d4.labels(), &["e", "r", "r^2", "r^3", "s", "sr", "sr^2", "sr^3"]);
        assert_eq!(d4.generators(), vec![1, 4]);
        assert_eq!(cyclic(6).unwrap().generators(), vec![1]);
        assert_eq!(symmetric(3).unwrap().label(0), "[1,2,3]");
    }

    #[test]
    fn rejects_bad_tables() {
        let labels = vec!["e".to_string(), "a".to_string()];
        assert!(GroupTable::new("bad", labels.clone(), vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(GroupTable::new("bad", labels, vec![vec![1, 0], vec![0, 1]]).is_err());
    }

    #[test]
    fn rank_inverts_enumeration() {
        for (i, p) in permutations(5).iter().enumerate() {
            assert_eq!(permutation_rank(p), i);
        }
    }
}
