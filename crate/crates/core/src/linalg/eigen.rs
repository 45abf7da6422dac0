//! Eigendecomposition for matrices with pairwise-distinct eigenvalues.
//!
//! Exact path: characteristic polynomial by the Faddeev–LeVerrier recurrence,
//! rational roots, then exact kernels of `M - λI`. Only rational eigenvalues
//! are found, which is all the orbit-recovery use site ever produces.
//!
//! Floating-point path: Householder reduction to Hessenberg form, complex
//! shifted QR to Schur form, and back substitution for the eigenvectors.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::roots::{rational_roots, root_multiplicity, IntPoly};
use super::bareiss::determinant_int;
use super::{kernel_basis, Matrix, Vector};
use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair<F> {
    pub value: F,
    pub vector: Vector<F>,
}

/// Coefficients of `det(tI - m)`, constant term first (so the last is 1).
pub fn characteristic_polynomial<F: Scalar>(m: &Matrix<F>) -> Vec<F> {
    let n = m.rows();
    let mut coeffs = vec![F::zero(); n + 1];
    coeffs[n] = F::one();
    // M_1 = I,  c_{n-k} = -tr(A M_k) / k,  M_{k+1} = A M_k + c_{n-k} I
    let mut mk = Matrix::<F>::identity(n);
    for k in 1..=n {
        let mut am = super::matmul(m, &mk).expect("square");
        let c = -(am.trace() / F::from_i64(k as i64));
        for i in 0..n {
            am[(i, i)] = am[(i, i)].add_ref(&c);
        }
        coeffs[n - k] = c;
        mk = am;
    }
    coeffs
}

pub fn eigen_distinct_rational(m: &Matrix<Rational>) -> Result<Vec<EigenPair<Rational>>> {
    eigenvalues_rational(m)?
        .into_iter()
        .map(|value| {
            let vector = eigenvector_rational(m, &value)?;
            Ok(EigenPair { value, vector })
        })
        .collect()
}

/// All eigenvalues, ascending; fails unless there are `dim` distinct
/// rational ones.
pub fn eigenvalues_rational(m: &Matrix<Rational>) -> Result<Vec<Rational>> {
    generalized_eigenvalues_rational(m, &Matrix::identity(m.rows()))
}

/// Integer polynomial with the same roots as `det(a - t b)`, constant term
/// first. Fails with `SingularMatrix` when `b` is singular (degree drops).
pub fn pencil_polynomial(a: &Matrix<Rational>, b: &Matrix<Rational>) -> Result<IntPoly> {
    let k = a.rows();
    let den = a
        .entries()
        .iter()
        .chain(b.entries())
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let to_int = |m: &Matrix<Rational>| -> Vec<Vec<BigInt>> {
        (0..k)
            .map(|r| m.row(r).iter().map(|q| q.numer() * (&den / q.denom())).collect())
            .collect()
    };
    let (ai, bi) = (to_int(a), to_int(b));
    // det(A - tB) at t = 0..=k, then Newton interpolation
    let values: Vec<BigInt> = (0..=k)
        .into_par_iter()
        .map(|t| {
            let t = BigInt::from(t);
            let shifted: Vec<Vec<BigInt>> = ai
                .iter()
                .zip(&bi)
                .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x - &t * y).collect())
                .collect();
            determinant_int(&shifted)
        })
        .collect();
    let mut diffs: Vec<Rational> = values.into_iter().map(Rational::from_integer).collect();
    for level in 1..=k {
        for i in (level..=k).rev() {
            diffs[i] = (&diffs[i] - &diffs[i - 1]) / Rational::from_integer(BigInt::from(level));
        }
    }
    // expand Σ diffs[j] ∏_{i<j} (t - i), Horner style from the top
    let mut coeffs = vec![Rational::zero(); k + 1];
    for j in (0..=k).rev() {
        for c in (1..=k).rev() {
            coeffs[c] = &coeffs[c - 1] - &coeffs[c] * Rational::from_integer(BigInt::from(j));
        }
        coeffs[0] = &diffs[j] - &coeffs[0] * Rational::from_integer(BigInt::from(j));
    }
    if coeffs[k].is_zero() {
        return Err(Error::SingularMatrix);
    }
    Ok(IntPoly::from_rational(&coeffs))
}

/// Roots of `det(a - t b)`, i.e. the eigenvalues of `b⁻¹ a`, ascending.
/// Fails unless all `dim` of them are rational and pairwise distinct.
pub fn generalized_eigenvalues_rational(a: &Matrix<Rational>, b: &Matrix<Rational>) -> Result<Vec<Rational>> {
    let n = a.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let poly = pencil_polynomial(a, b)?;
    let roots = rational_roots(&poly);
    if roots.len() != n {
        let split = root_multiplicity(&poly, &roots);
        if split < n {
            return Err(Error::IrrationalEigenvalues(n - split));
        }
        return Err(Error::EigenvaluesNotDistinct(format!(
            "{} distinct rational eigenvalues for dimension {n}",
            roots.len()
        )));
    }
    Ok(roots)
}

/// `w` with `a w = value · b w`, scaled so its first nonzero entry is 1.
pub fn generalized_eigenvector_rational(
    a: &Matrix<Rational>,
    b: &Matrix<Rational>,
    value: &Rational,
) -> Result<Vector<Rational>> {
    let shifted = a.sub(&b.scale(value))?;
    let kernel = kernel_basis(&shifted, 0.0);
    if kernel.len() != 1 {
        return Err(Error::NotDiagonalizable {
            eigenvalue: value.to_string(),
            kernel_dim: kernel.len(),
        });
    }
    let v = kernel.into_iter().next().unwrap();
    let lead = v.entries.iter().find(|e| !e.is_zero()).cloned().unwrap();
    Ok(v.scale(&(Rational::one() / lead)))
}

/// Spanning vector of the one-dimensional eigenspace, scaled so its first
/// nonzero entry is 1.
pub fn eigenvector_rational(m: &Matrix<Rational>, value: &Rational) -> Result<Vector<Rational>> {
    generalized_eigenvector_rational(m, &Matrix::identity(m.rows()), value)
}

type C = Complex64;

/// Eigenpairs of `b⁻¹ a`, so each vector `w` satisfies `a w = λ b w`.
pub fn generalized_eigen_complex(a: &Matrix<C>, b: &Matrix<C>, rank_tol: f64, tol: f64) -> Result<Vec<EigenPair<C>>> {
    let binv = super::inverse_with_tol(b, rank_tol)?;
    eigen_distinct_complex(&super::matmul(&binv, a)?, tol)
}

/// Inverse iteration on the pencil itself: `(a - λ b) y = b w`, then the
/// Rayleigh quotient `λ = (wᴴ a w) / (wᴴ b w)`. Sharpens an eigenpair taken
/// from `b⁻¹ a` when `b` is ill-conditioned.
pub fn refine_pencil_pair(a: &Matrix<C>, b: &Matrix<C>, pair: EigenPair<C>, steps: usize) -> EigenPair<C> {
    let n = a.rows();
    let EigenPair { mut value, mut vector } = pair;
    for _ in 0..steps {
        let shifted = Matrix::from_fn(n, n, |r, c| a[(r, c)] - value * b[(r, c)]);
        let Some(y) = lu_solve(&shifted, &b.mul_vec(&vector).expect("square")) else {
            break;
        };
        let pivot = y
            .iter()
            .copied()
            .max_by(|p, q| p.norm().total_cmp(&q.norm()))
            .unwrap_or_default();
        if pivot.norm() == 0.0 || !pivot.norm().is_finite() {
            break;
        }
        vector = Vector::new(y.into_iter().map(|e| e / pivot).collect());
        let conj = Vector::new(vector.entries.iter().map(|e| e.conj()).collect());
        let num = conj.dot(&a.mul_vec(&vector).expect("square"));
        let den = conj.dot(&b.mul_vec(&vector).expect("square"));
        if den.norm() == 0.0 {
            break;
        }
        value = num / den;
    }
    EigenPair { value, vector }
}

/// Partially pivoted LU solve; tiny pivots are nudged to `eps·‖m‖` so that a
/// nearly singular shifted matrix still yields a direction.
fn lu_solve(m: &Matrix<C>, rhs: &Vector<C>) -> Option<Vec<C>> {
    let n = m.rows();
    let mut lu = m.entries().to_vec();
    let mut x = rhs.entries.clone();
    let norm = lu.iter().map(|e| e.norm()).fold(0.0, f64::max);
    if norm == 0.0 {
        return None;
    }
    let floor = f64::EPSILON * norm;
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| lu[i * n + k].norm().total_cmp(&lu[j * n + k].norm()))?;
        if p != k {
            for c in 0..n {
                lu.swap(k * n + c, p * n + c);
            }
            x.swap(k, p);
        }
        if lu[k * n + k].norm() < floor {
            lu[k * n + k] = C::new(floor, 0.0);
        }
        let d = lu[k * n + k];
        for r in (k + 1)..n {
            let f = lu[r * n + k] / d;
            if f == C::zero() {
                continue;
            }
            for c in k..n {
                let v = lu[k * n + c];
                lu[r * n + c] -= f * v;
            }
            let xk = x[k];
            x[r] -= f * xk;
        }
    }
    for k in (0..n).rev() {
        let s: C = ((k + 1)..n).map(|c| lu[k * n + c] * x[c]).sum();
        x[k] = (x[k] - s) / lu[k * n + k];
    }
    Some(x)
}

pub fn eigen_distinct_complex(m: &Matrix<C>, tol: f64) -> Result<Vec<EigenPair<C>>> {
    let n = m.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut h = m.entries().to_vec();
    let mut z = Matrix::<C>::identity(n).entries().to_vec();
    hessenberg(&mut h, &mut z, n);
    schur(&mut h, &mut z, n)?;

    let values: Vec<C> = (0..n).map(|i| h[i * n + i]).collect();
    let largest = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    for i in 0..n {
        for j in (i + 1)..n {
            if (values[i] - values[j]).norm() <= tol * largest {
                return Err(Error::EigenvaluesNotDistinct(format!(
                    "|{} - {}| below {tol:e} relative",
                    values[i], values[j]
                )));
            }
        }
    }

    let hnorm = h.iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let small = f64::EPSILON * hnorm;
    let mut pairs: Vec<EigenPair<C>> = (0..n)
        .map(|k| {
            let lambda = values[k];
            let mut y = vec![C::zero(); n];
            y[k] = C::one();
            for j in (0..k).rev() {
                let s: C = ((j + 1)..=k).map(|l| h[j * n + l] * y[l]).sum();
                let mut d = h[j * n + j] - lambda;
                if d.norm() < small {
                    d = C::new(small, 0.0);
                }
                y[j] = -s / d;
            }
            let mut v: Vec<C> = (0..n)
                .map(|r| (0..=k).map(|c| z[r * n + c] * y[c]).sum())
                .collect();
            let pivot = v
                .iter()
                .copied()
                .max_by(|a, b| a.norm().total_cmp(&b.norm()))
                .unwrap();
            for e in &mut v {
                *e /= pivot;
            }
            EigenPair {
                value: lambda,
                vector: Vector::new(v),
            }
        })
        .collect();
    pairs.sort_by(|a, b| {
        a.value
            .re
            .total_cmp(&b.value.re)
            .then(a.value.im.total_cmp(&b.value.im))
    });
    Ok(pairs)
}

/// Householder reduction `h <- Qᴴ h Q`, accumulating `z <- z Q`.
fn hessenberg(h: &mut [C], z: &mut [C], n: usize) {
    for k in 0..n.saturating_sub(2) {
        let mut v: Vec<C> = ((k + 1)..n).map(|i| h[i * n + k]).collect();
        let alpha = v.iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt();
        if alpha == 0.0 {
            continue;
        }
        let phase = if v[0].norm() == 0.0 { C::one() } else { v[0] / v[0].norm() };
        v[0] += phase * alpha;
        let vnorm2: f64 = v.iter().map(|e| e.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm2;
        // left: rows k+1..n
        for j in k..n {
            let w: C = v
                .iter()
                .enumerate()
                .map(|(t, vi)| vi.conj() * h[(k + 1 + t) * n + j])
                .sum();
            for (t, vi) in v.iter().enumerate() {
                h[(k + 1 + t) * n + j] -= vi * w * beta;
            }
        }
        // right: columns k+1..n
        for mat in [&mut *h, &mut *z] {
            for i in 0..n {
                let w: C = v
                    .iter()
                    .enumerate()
                    .map(|(t, vj)| mat[i * n + k + 1 + t] * vj)
                    .sum();
                for (t, vj) in v.iter().enumerate() {
                    mat[i * n + k + 1 + t] -= w * vj.conj() * beta;
                }
            }
        }
        for i in (k + 2)..n {
            h[i * n + k] = C::zero();
        }
    }
}

fn givens(a: C, b: C) -> (f64, C) {
    if b.norm() == 0.0 {
        (1.0, C::zero())
    } else if a.norm() == 0.0 {
        (0.0, b.conj() / b.norm())
    } else {
        let rho = a.norm().hypot(b.norm());
        (a.norm() / rho, (a / a.norm()) * b.conj() / rho)
    }
}

fn wilkinson_shift(a: C, b: C, c: C, d: C) -> C {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let (m1, m2) = (mean + disc, mean - disc);
    if (m1 - d).norm() <= (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

/// Shifted QR iteration on an upper Hessenberg matrix, leaving the upper
/// triangular Schur factor in `h` and accumulating the unitary factor in `z`.
fn schur(h: &mut [C], z: &mut [C], n: usize) -> Result<()> {
    let norm = h.iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt();
    let max_sweeps = 100 * n.max(1);
    let mut sweeps = 0;
    let mut since_deflation = 0;
    let mut hi = n - 1;
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let mut s = h[(l - 1) * n + l - 1].norm() + h[l * n + l].norm();
            if s == 0.0 {
                s = norm;
            }
            if h[l * n + l - 1].norm() <= f64::EPSILON * s {
                h[l * n + l - 1] = C::zero();
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        sweeps += 1;
        since_deflation += 1;
        if sweeps > max_sweeps {
            return Err(Error::NoConvergence(sweeps));
        }
        let shift = if since_deflation % 11 == 10 {
            h[hi * n + hi] + C::new(1.5 * h[hi * n + hi - 1].norm(), 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 1) * n + hi - 1],
                h[(hi - 1) * n + hi],
                h[hi * n + hi - 1],
                h[hi * n + hi],
            )
        };
        for i in l..=hi {
            h[i * n + i] -= shift;
        }
        let mut rotations = Vec::with_capacity(hi - l);
        for k in l..hi {
            let (c, s) = givens(h[k * n + k], h[(k + 1) * n + k]);
            for j in k..n {
                let (u, v) = (h[k * n + j], h[(k + 1) * n + j]);
                h[k * n + j] = u * c + s * v;
                h[(k + 1) * n + j] = -s.conj() * u + v * c;
            }
            rotations.push((c, s));
        }
        for (off, &(c, s)) in rotations.iter().enumerate() {
            let k = l + off;
            for i in 0..=(k + 1) {
                let (u, v) = (h[i * n + k], h[i * n + k + 1]);
                h[i * n + k] = u * c + v * s.conj();
                h[i * n + k + 1] = -u * s + v * c;
            }
            for i in 0..n {
                let (u, v) = (z[i * n + k], z[i * n + k + 1]);
                z[i * n + k] = u * c + v * s.conj();
                z[i * n + k + 1] = -u * s + v * c;
            }
        }
        for i in l..=hi {
            h[i * n + i] += shift;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{inverse, matmul};
    use crate::scalar::{int, rat};

    #[test]
    fn charpoly_of_companion_like() {
        // [[5,4],[4,5]]: t^2 - 10 t + 9
        let m = Matrix::<Rational>::from_i64_rows(&[&[5, 4], &[4, 5]]);
        assert_eq!(characteristic_polynomial(&m), vec![int(9), int(-10), int(1)]);
    }

    #[test]
    fn diagonal_rational() {
        let m = Matrix::diagonal(&[int(2), int(3), int(5)]);
        let pairs = eigen_distinct_rational(&m).unwrap();
        let expect = [(2, [1, 0, 0]), (3, [0, 1, 0]), (5, [0, 0, 1])];
        for (p, (v, e)) in pairs.iter().zip(expect) {
            assert_eq!(p.value, int(v));
            assert_eq!(p.vector, Vector::from_i64(&e));
        }
    }

    #[test]
    fn swap_rational() {
        let m = Matrix::<Rational>::from_i64_rows(&[&[0, 1], &[1, 0]]);
        let pairs = eigen_distinct_rational(&m).unwrap();
        assert_eq!(pairs[0].value, int(-1));
        assert_eq!(pairs[0].vector, Vector::from_i64(&[1, -1]));
        assert_eq!(pairs[1].value, int(1));
        assert_eq!(pairs[1].vector, Vector::from_i64(&[1, 1]));
    }

    #[test]
    fn conjugated_diagonal_rational() {
        let x = Matrix::<Rational>::from_i64_rows(&[&[1, 1], &[1, 2]]);
        let d = Matrix::diagonal(&[rat(1, 2), int(3)]);
        let m = matmul(&matmul(&x, &d).unwrap(), &inverse(&x).unwrap()).unwrap();
        let pairs = eigen_distinct_rational(&m).unwrap();
        assert_eq!(pairs[0].value, rat(1, 2));
        assert_eq!(pairs[1].value, int(3));
        // eigenvectors are the columns of X up to scale
        assert_eq!(pairs[0].vector, Vector::from_i64(&[1, 1]));
        assert_eq!(pairs[1].vector, Vector::new(vec![int(1), int(2)]));
    }

    #[test]
    fn repeated_and_irrational_rejected() {
        let m = Matrix::<Rational>::from_i64_rows(&[&[1, 1], &[0, 1]]);
        assert!(matches!(eigen_distinct_rational(&m), Err(Error::EigenvaluesNotDistinct(_))));
        let rot = Matrix::<Rational>::from_i64_rows(&[&[0, -1], &[1, 0]]);
        assert!(matches!(eigen_distinct_rational(&rot), Err(Error::IrrationalEigenvalues(2))));
    }

    #[test]
    fn complex_rotation_has_conjugate_pair() {
        let rot = Matrix::<C>::from_i64_rows(&[&[0, -1], &[1, 0]]);
        let pairs = eigen_distinct_complex(&rot, 1e-8).unwrap();
        assert!((pairs[0].value - C::new(0.0, -1.0)).norm() < 1e-12);
        assert!((pairs[1].value - C::new(0.0, 1.0)).norm() < 1e-12);
        for p in &pairs {
            let mv = rot.mul_vec(&p.vector).unwrap();
            for (a, b) in mv.entries.iter().zip(&p.vector.entries) {
                assert!((a - b * p.value).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn complex_repeated_rejected() {
        let m = Matrix::<C>::identity(3);
        assert!(matches!(eigen_distinct_complex(&m, 1e-8), Err(Error::EigenvaluesNotDistinct(_))));
    }
}
