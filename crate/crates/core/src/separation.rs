//! Orbit membership by brute force, agreement of low-degree invariants, and
//! the sign-flip pairs in the complete multiplicity-free dihedral representation.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::representations::{dihedral_cmf, Representation};
use crate::scalar::{Rational, Scalar};
use crate::tensors::{invariant_tensor, tensor_equal};

const SAMPLE_RANGE: i64 = 10;
const MAX_SAMPLE_ATTEMPTS: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeparationVerdict {
    pub invariants_agree_to_degree: usize,
    pub same_orbit: bool,
    pub witness_group_element: Option<usize>,
}

/// Some `g` with `g·x = y` (exactly, or to `tol` relative to the largest entry).
pub fn same_orbit<F: Scalar>(rep: &Representation<F>, x: &Vector<F>, y: &Vector<F>, tol: f64) -> Result<Option<usize>> {
    if y.dim() != rep.dim() {
        return Err(Error::DimensionMismatch {
            op: "same_orbit",
            expected: rep.dim(),
            got: y.dim(),
        });
    }
    let scale = 1.0 + x.max_magnitude().max(y.max_magnitude());
    for g in 0..rep.order() {
        let gx = rep.apply(g, x)?;
        if gx.entries.iter().zip(&y.entries).all(|(a, b)| a.approx_eq(b, scale, tol)) {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

/// Largest `D <= max_degree` with `T_d(x) = T_d(y)` for every `d <= D`,
/// together with the orbit-membership verdict.
pub fn compare_invariants<F: Scalar>(
    rep: &Representation<F>,
    x: &Vector<F>,
    y: &Vector<F>,
    max_degree: usize,
    tol: f64,
) -> Result<SeparationVerdict> {
    let mut agree = 0;
    for d in 1..=max_degree {
        if !tensor_equal(&invariant_tensor(rep, x, d)?, &invariant_tensor(rep, y, d)?, tol)? {
            break;
        }
        agree = d;
    }
    let witness = same_orbit(rep, x, y, tol)?;
    Ok(SeparationVerdict {
        invariants_agree_to_degree: agree,
        same_orbit: witness.is_some(),
        witness_group_element: witness,
    })
}

/// Builds `(x, s_0)` and `(x, -s_0)` for odd `n`, or `(x, s_0, s_-1)` and
/// `(x, -s_0, -s_-1)` for even `n`.
pub fn cmf_pair(x: &[i64], s0: i64, s_minus1: Option<i64>) -> (Vector<Rational>, Vector<Rational>) {
    let mut a = x.to_vec();
    let mut b = x.to_vec();
    a.push(s0);
    b.push(-s0);
    if let Some(s) = s_minus1 {
        a.push(s);
        b.push(-s);
    }
    (Vector::from_i64(&a), Vector::from_i64(&b))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CmfWitness {
    pub n: usize,
    pub seed: u64,
    pub x: Vec<i64>,
    pub s0: i64,
    pub s_minus1: Option<i64>,
    pub verdict: SeparationVerdict,
    /// Degree-3 agreement and distinct orbits both hold.
    pub holds: bool,
}

fn nonzero(rng: &mut ChaCha8Rng) -> i64 {
    let k = rng.random_range(0..2 * SAMPLE_RANGE);
    if k < SAMPLE_RANGE {
        k - SAMPLE_RANGE
    } else {
        k - SAMPLE_RANGE + 1
    }
}

/// Samples a pair with distinct standard-part entries in `[-10, 10]` and
/// nonzero sign coordinates, and compares invariants up to degree 3.
pub fn dihedral_cmf_counterexample(n: usize, seed: u64) -> Result<CmfWitness> {
    let width = (2 * SAMPLE_RANGE + 1) as usize;
    if n < 3 || n > width {
        return Err(Error::OutOfRange(format!("n must lie in 3..={width}, got {n}")));
    }
    let rep = dihedral_cmf::<Rational>(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<i64> = (-SAMPLE_RANGE..=SAMPLE_RANGE).collect();
    for _ in 0..MAX_SAMPLE_ATTEMPTS {
        pool.shuffle(&mut rng);
        let x = pool[..n].to_vec();
        let s0 = nonzero(&mut rng);
        let s_minus1 = n.is_multiple_of(2).then(|| nonzero(&mut rng));
        let (a, b) = cmf_pair(&x, s0, s_minus1);
        let verdict = compare_invariants(&rep, &a, &b, 3, 0.0)?;
        if verdict.same_orbit {
            continue;
        }
        let holds = verdict.invariants_agree_to_degree == 3;
        return Ok(CmfWitness {
            n,
            seed,
            x,
            s0,
            s_minus1,
            verdict,
            holds,
        });
    }
    Err(Error::DegenerateSample(MAX_SAMPLE_ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups;
    use crate::representations::regular;
    use std::sync::Arc;

    fn z(n: usize) -> Representation<Rational> {
        regular(Arc::new(groups::cyclic(n).unwrap())).unwrap()
    }

    #[test]
    fn orbit_membership() {
        let rep = z(3);
        let x = Vector::from_i64(&[1, 2, 4]);
        assert_eq!(same_orbit(&rep, &x, &x, 0.0).unwrap(), Some(0));
        let g = same_orbit(&rep, &x, &Vector::from_i64(&[2, 4, 1]), 0.0).unwrap().unwrap();
        assert_eq!(rep.apply(g, &x).unwrap(), Vector::from_i64(&[2, 4, 1]));
        assert_eq!(same_orbit(&rep, &x, &Vector::from_i64(&[1, 2, 5]), 0.0).unwrap(), None);
    }

    #[test]
    fn invariant_agreement() {
        let rep = z(2);
        let v = compare_invariants(&rep, &Vector::from_i64(&[1, 2]), &Vector::from_i64(&[1, 3]), 3, 0.0).unwrap();
        assert_eq!(v.invariants_agree_to_degree, 0);
        assert!(!v.same_orbit);
        let x = Vector::from_i64(&[1, 2]);
        let v = compare_invariants(&rep, &x, &rep.apply(1, &x).unwrap(), 3, 0.0).unwrap();
        assert_eq!(v.invariants_agree_to_degree, 3);
        assert_eq!(v.witness_group_element, Some(1));
    }

    #[test]
    fn odd_cmf_pair() {
        let w = dihedral_cmf_counterexample(3, 1).unwrap();
        assert!(w.holds, "{w:?}");
        assert_eq!(w.verdict.invariants_agree_to_degree, 3);
        assert!(!w.verdict.same_orbit);
        let x: Vec<i64> = w.x.clone();
        let mut distinct = x.clone();
        distinct.sort();
        distinct.dedup();
        assert_eq!(distinct.len(), x.len());
    }

    #[test]
    fn zero_sign_coordinate_collapses_pair() {
        let rep = dihedral_cmf::<Rational>(5).unwrap();
        let (a, b) = cmf_pair(&[1, -3, 4, 7, 2], 0, None);
        let v = compare_invariants(&rep, &a, &b, 3, 0.0).unwrap();
        assert!(v.same_orbit);
        assert_eq!(v.witness_group_element, Some(0));
    }

    #[test]
    fn even_cmf_pair_is_separated_in_degree_three() {
        // s_-1 · Σ (-1)^i x_i x_{i+1} is a cubic invariant that changes sign
        let w = dihedral_cmf_counterexample(4, 1).unwrap();
        assert!(!w.verdict.same_orbit);
        assert_eq!(w.verdict.invariants_agree_to_degree, 2);
        assert!(!w.holds);
    }
}
