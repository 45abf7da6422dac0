//! Orbit recovery from the degree-2 and degree-3 invariant tensors.
//!
//! With `X = [g_1 x, …, g_|G| x]` linearly independent, `T_2 = X Xᵀ` has
//! column space `W = span X`, and a contraction of `T_3` against a covector
//! `a` is `X D_a Xᵀ` with `D_a = diag⟨a, g x⟩`. Restricted to the pivot rows
//! and columns of `T_2` these become invertible `|G|×|G|` matrices `A_a`,
//! `A_b`, and the eigenvectors of `A_a A_b⁻¹` are scalar multiples of orbit
//! points written in those coordinates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{
generalized_eigenpair, Matrix, Vector
};
use crate::representations::Representation;
use crate::scalar::{Scalar, DEFAULT_RANK_TOL, DEFAULT_TOL};
use crate::tensors::{as_matrix, contract_once, power_sum_tensor, tensor_equal, SymmetricTensor};

#[derive(Debug, Clone, Copy)]
pub struct RecoveryOptions {
    pub seed: u64,
    /// Redraws of the covector pair allowed after the first attempt.
    pub max_retries: usize,
    /// Covector entries are uniform integers in `[-covector_range, covector_range]`.
    pub covector_range: i64,
    /// Relative pivot threshold on the floating-point path.
    pub rank_tol: f64,
    /// Eigenvalue separation, scale consistency and verification tolerance
    /// on the floating-point path.
    pub tol: f64,
}

impl Default for RecoveryOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            max_retries: 10,
            covector_range: 1000,
            rank_tol: DEFAULT_RANK_TOL,
            tol: DEFAULT_TOL,
        }
    }
}

impl RecoveryOptions {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct RecoveryInput<'a, F> {
    pub rep: &'a Representation<F>,
    pub t2: &'a SymmetricTensor<F>,
    pub t3: &'a SymmetricTensor<F>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryResult<F> {
    pub recovered_orbit: Vec<Vector<F>>,
    /// Columns of the degree-2 matrix spanning `W`.
    pub basis_w: Matrix<F>,
    pub scale_cubed: F,
    pub scale: F,
    pub retries_used: usize,
}

pub fn recover_orbit<F: Scalar>(input: &RecoveryInput<'_, F>, opts: &RecoveryOptions) -> Result<RecoveryResult<F>> {
    let RecoveryInput { rep, t2, t3 } = *input;
    let n = rep.dim();
    let order = rep.order();
    for t in [t2, t3] {
        if t.dim() != n {
            return Err(Error::DimensionMismatch {
                op: "recover_orbit",
                expected: n,
                got: t.dim(),
            });
        }
    }
    if t2.degree() != 2 {
        return Err(Error::DegreeMismatch {
            expected: 2,
            got: t2.degree(),
        });
    }
    if t3.degree() != 3 {
        return Err(Error::DegreeMismatch {
            expected: 3,
            got: t3.degree(),
        });
    }

    let gram = as_matrix(t2)?;
    let pivots = F::pivot_columns(&gram, opts.rank_tol);
    if pivots.len() != order {
        return Err(Error::LinearlyDependentOrbit {
            rank: pivots.len(),
            order,
        });
    }
    let basis = gram.select_columns(&pivots);

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut found = None;
    for attempt in 0..=opts.max_retries {
        let a = random_covector::<F>(&mut rng, n, opts.covector_range);
        let b = random_covector::<F>(&mut rng, n, opts.covector_range);
        match pencil_eigenvector(&pivots, t3, &a, &b, opts)? {
            Some(v) => {
                found = Some((v, attempt));
                break;
            }
            None => continue,
        }
    }
    let Some((u, retries_used)) = found else {
        return Err(Error::DegenerateContraction {
            retries: opts.max_retries,
        });
    };

    let u_orbit = rep.orbit(&u)?;
    let scale_cubed = scale_ratio(&power_sum_tensor(&u_orbit, n, 3)?, t3, 3, opts.tol)?;
    let scale_squared = scale_ratio(&power_sum_tensor(&u_orbit, n, 2)?, t2, 2, opts.tol)?;
    if scale_squared.is_zero() || scale_cubed.is_zero() {
        return Err(Error::InconsistentScale("scale factor vanishes".into()));
    }
    let scale = scale_cubed.div_ref(&scale_squared);
    let inv = F::one().div_ref(&scale);
    let recovered_orbit: Vec<Vector<F>> = u_orbit.iter().map(|y| y.scale(&inv)).collect();

    for (degree, target) in [(2, t2), (3, t3)] {
        let got = power_sum_tensor(&recovered_orbit, n, degree)?;
        if !tensor_equal(&got, target, opts.tol)? {
            return Err(Error::VerificationFailed(format!(
                "degree-{degree} tensor of the recovered orbit differs from the input"
            )));
        }
    }

    Ok(RecoveryResult {
        recovered_orbit,
        basis_w: basis,
        scale_cubed,
        scale,
        retries_used,
    })
}

/// One attempt with the covector pair `(a, b)`; `Ok(None)` asks for a redraw.
///
/// With `P` the pivot rows and columns of `T_2`, `X_P` (the orbit matrix
/// restricted to the rows `P`) is invertible and `T_a[P,P] = X_P D_a X_Pᵀ`.
/// An eigenvector `w` of the pencil `T_a[P,P] w = λ T_b[P,P] w` satisfies
/// `X_Pᵀ w ∝ e_i`, so `T_b[:,P] w ∝ x_i`.
fn pencil_eigenvector<F: Scalar>(
    pivots: &[usize],
    t3: &SymmetricTensor<F>,
    a: &Vector<F>,
    b: &Vector<F>,
    opts: &RecoveryOptions,
) -> Result<Option<Vector<F>>> {
    let ta = as_matrix(&contract_once(t3, a)?)?;
    let tb_cols = as_matrix(&contract_once(t3, b)?)?.select_columns(pivots);
    let restrict = |m: &Matrix<F>| Matrix::from_fn(pivots.len(), pivots.len(), |r, c| m[(pivots[r], pivots[c])].clone());
    let aa = restrict(&ta);
    let ab = Matrix::from_fn(pivots.len(), pivots.len(), |r, c| tb_cols[(pivots[r], c)].clone());
    let pair = match generalized_eigenpair(&aa, &ab, opts.rank_tol, opts.tol, &best_separated::<F>) {
        Ok(p) => p,
        Err(Error::SingularMatrix | Error::EigenvaluesNotDistinct(_) | Error::NotDiagonalizable { .. }) => {
            return Ok(None)
        }
        Err(Error::IrrationalEigenvalues(k)) => {
            return Err(Error::VerificationFailed(format!(
                "{k} eigenvalues of the contraction pencil lie outside the scalar field"
            )));
        }
        Err(e) => return Err(e),
    };
    Ok(Some(tb_cols.mul_vec(&pair.vector)?))
}

/// Index of the eigenvalue farthest from all others (the first one on the exact path).
fn best_separated<F: Scalar>(values: &[F]) -> usize {
    if F::is_exact() || values.len() == 1 {
        return 0;
    }
    let gap = |i: usize| {
        values
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, q)| values[i].sub_ref(q).magnitude())
            .fold(f64::INFINITY, f64::min)
    };
    (0..values.len())
        .max_by(|&i, &j| gap(i).total_cmp(&gap(j)))
        .expect("nonempty")
}

/// `c` with `s ≈ c·t`, read at the largest entry of `t` and checked on all others.
fn scale_ratio<F: Scalar>(s: &SymmetricTensor<F>, t: &SymmetricTensor<F>, degree: usize, tol: f64) -> Result<F> {
    let Some((key, pivot)) = t
        .iter()
        .max_by(|x, y| x.1.magnitude().total_cmp(&y.1.magnitude()))
    else {
        return Err(Error::InconsistentScale(format!("degree-{degree} tensor is zero")));
    };
    let c = s.get(key).div_ref(pivot);
    let scale = 1.0 + s.max_magnitude();
    let consistent = t
        .iter()
        .map(|(k, _)| k)
        .chain(s.iter().map(|(k, _)| k))
        .all(|k| s.get(k).approx_eq(&c.mul_ref(&t.get(k)), scale, tol));
    if !consistent {
        return Err(Error::InconsistentScale(format!(
            "degree-{degree} tensor of the candidate orbit is not a multiple of the input"
        )));
    }
    Ok(c)
}

fn random_covector<F: Scalar>(rng: &mut ChaCha8Rng, dim: usize, range: i64) -> Vector<F> {
    Vector::new((0..dim).map(|_| F::from_i64(rng.random_range(-range..=range))).collect())
}

/// Entries uniform in `[-range, range] \ {0}`, deterministic in `seed`.
pub fn random_generic_vector<F: Scalar>(dim: usize, seed: u64, range: u64) -> Vector<F> {
    let range = range.max(1) as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Vector::new(
        (0..dim)
            .map(|_| {
                let k = rng.random_range(0..2 * range);
                F::from_i64(if k < range { k - range } else { k - range + 1 })
            })
            .collect(),
    )
}

/// True when `a` and `b` agree as multisets, matching each element of `a`
/// with a distinct element of `b` to tolerance `tol` relative to the largest entry.
pub fn same_multiset<F: Scalar>(a: &[Vector<F>], b: &[Vector<F>], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let scale = 1.0
        + a.iter()
            .chain(b)
            .map(|v| v.max_magnitude())
            .fold(0.0, f64::max);
    let mut used = vec![false; b.len()];
    a.iter().all(|x| {
        let hit = b.iter().enumerate().position(|(j, y)| {
            !used[j]
                && x.dim() == y.dim()
                && x.entries.iter().zip(&y.entries).all(|(p, q)| p.approx_eq(q, scale, tol))
        });
        match hit {
            Some(j) => {
                used[j] = true;
                true
            }
            None => false,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups;
    use crate::representations::regular;
    use crate::scalar::Rational;
    use crate::tensors::invariant_tensor;
    use num_traits::Zero;
    use std::sync::Arc;

    type Q = Rational;

    fn run(rep: &Representation<Q>, x: &Vector<Q>, seed: u64) -> Result<RecoveryResult<Q>> {
        let t2 = invariant_tensor(rep, x, 2).unwrap();
        let t3 = invariant_tensor(rep, x, 3).unwrap();
        recover_orbit(
            &RecoveryInput {
                rep,
                t2: &t2,
                t3: &t3,
            },
            &RecoveryOptions::with_seed(seed),
        )
    }

    #[test]
    fn z3_orbit() {
        let rep = regular::<Q>(Arc::new(groups::cyclic(3).unwrap())).unwrap();
        let x = Vector::from_i64(&[1, 2, 4]);
        let res = run(&rep, &x, 7).unwrap();
        let truth = vec![
            Vector::from_i64(&[1, 2, 4]),
            Vector::from_i64(&[4, 1, 2]),
            Vector::from_i64(&[2, 4, 1]),
        ];
        assert!(same_multiset(&res.recovered_orbit, &truth, 0.0));
        assert_eq!(res.scale_cubed, res.scale.clone() * res.scale.clone() * res.scale.clone());
    }

    #[test]
    fn fixed_vector_is_dependent() {
        let rep = regular::<Q>(Arc::new(groups::cyclic(3).unwrap())).unwrap();
        let err = run(&rep, &Vector::from_i64(&[1, 1, 1]), 0).unwrap_err();
        assert_eq!(err, Error::LinearlyDependentOrbit { rank: 1, order: 3 });
    }

    #[test]
    fn d3_powers_of_two() {
        let rep = regular::<Q>(Arc::new(groups::dihedral(3).unwrap())).unwrap();
        let x = Vector::from_i64(&[1, 2, 4, 8, 16, 32]);
        let res = run(&rep, &x, 1).unwrap();
        assert!(same_multiset(&res.recovered_orbit, &rep.orbit(&x).unwrap(), 0.0));
    }

    #[test]
    fn generic_vectors() {
        let a: Vector<Q> = random_generic_vector(3, 5, 50);
        assert_eq!(a, random_generic_vector(3, 5, 50));
        assert!(a.entries.iter().all(|e| !e.is_zero()));
        let distinct = (0..100u64)
            .filter(|&s| random_generic_vector::<Q>(6, 2 * s, 10) != random_generic_vector::<Q>(6, 2 * s + 1, 10))
            .count();
        assert_eq!(distinct, 100);
        let small: Vector<Q> = random_generic_vector(200, 3, 1);
        assert!(small.entries.iter().all(|e| e.magnitude() == 1.0));
    }
}
