//! Symmetric invariant tensors and moment tensors of group orbits.
//!
//! A [`SymmetricTensor`] stores one value per sorted multi-index. The value is
//! the tensor entry, the same for every permutation of the index, and not the
//! coefficient of the matching monomial (see [`SymmetricTensor::monomial_coefficients`]).

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::representations::Representation;
use crate::scalar::{Scalar, ScalarKind};

/// Linear functionals are stored as their coefficient vectors.
pub type Covector<F> = Vector<F>;

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricTensor<F> {
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, F>,
}

impl<F: Scalar> SymmetricTensor<F> {
    pub fn zeros(dim: usize, degree: usize) -> Self {
        Self {
            dim,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Entry at any (not necessarily sorted) multi-index.
    pub fn get(&self, index: &[usize]) -> F {
        let mut key = index.to_vec();
        key.sort_unstable();
        self.coeffs.get(&key).cloned().unwrap_or_else(F::zero)
    }

    /// Sets the entry for every permutation of `index`.
    pub fn set(&mut self, index: &[usize], value: F) -> Result<()> {
        self.check_index(index)?;
        let mut key = index.to_vec();
        key.sort_unstable();
        if value.is_zero() {
            self.coeffs.remove(&key);
        } else {
            self.coeffs.insert(key, value);
        }
        Ok(())
    }

    fn check_index(&self, index: &[usize]) -> Result<()> {
        if index.len() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: index.len(),
            });
        }
        if let Some(&bad) = index.iter().find(|&&i| i >= self.dim) {
            return Err(Error::DimensionMismatch {
                op: "tensor index",
                expected: self.dim,
                got: bad,
            });
        }
        Ok(())
    }

    /// Stored (sorted index, entry) pairs; entries not listed are zero.
    pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, &F)> {
        self.coeffs.iter()
    }

    pub fn nnz(&self) -> usize {
        self.coeffs.len()
    }

    pub fn max_magnitude(&self) -> f64 {
        self.coeffs.values().map(|v| v.magnitude()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = Self::zeros(self.dim, self.degree);
        for (k, v) in &self.coeffs {
            let s = v.mul_ref(c);
            if !s.is_zero() {
                out.coeffs.insert(k.clone(), s);
            }
        }
        out
    }

    /// Coefficients of the polynomial `⟨T, x^{⊗d}⟩`: entry times the number
    /// of distinct permutations of its index.
    pub fn monomial_coefficients(&self) -> BTreeMap<Vec<usize>, F> {
        self.coeffs
            .iter()
            .map(|(k, v)| (k.clone(), v.mul_ref(&F::from_i64(multinomial(k) as i64))))
            .collect()
    }

    pub fn to_polynomial_string(&self) -> String {
        let terms: Vec<String> = self
            .monomial_coefficients()
            .iter()
            .map(|(k, c)| {
                let mut powers: Vec<(usize, usize)> = Vec::new();
                for &i in k {
                    match powers.last_mut() {
                        Some((j, p)) if *j == i => *p += 1,
                        _ => powers.push((i, 1)),
                    }
                }
                let mono: Vec<String> = powers
                    .iter()
                    .map(|&(i, p)| if p == 1 { format!("x{i}") } else { format!("x{i}^{p}") })
                    .collect();
                format!("({})*{}", scalar_text(c), mono.join("*"))
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    /// `{dim, degree, entries: [[[i…], value…], …]}` with sorted indices.
    /// Rationals are strings `p/q`, complex values are `re, im`.
    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self.coeffs.iter().map(|(k, v)| entry_json(json!(k), v)).collect();
        json!({ "dim": self.dim, "degree": self.degree, "entries": entries })
    }
}

fn scalar_text<F: Scalar>(v: &F) -> String {
    match v.to_json() {
        Value::String(s) => s,
        Value::Array(parts) if parts.len() == 2 => format!("{}{:+}i", parts[0], parts[1].as_f64().unwrap_or(0.0)),
        other => other.to_string(),
    }
}

fn entry_json<F: Scalar>(index: Value, v: &F) -> Value {
    let mut row = vec![index];
    match v.to_json() {
        Value::Array(parts) => row.extend(parts),
        other => row.push(other),
    }
    Value::Array(row)
}

/// `d! / ∏ m_i!` for a sorted multi-index with multiplicities `m_i`.
pub fn multinomial(sorted: &[usize]) -> u128 {
    let mut out: u128 = 1;
    let mut run = 0u128;
    for (pos, i) in sorted.iter().enumerate() {
        run = if pos > 0 && sorted[pos - 1] == *i { run + 1 } else { 1 };
        // multiply by (pos+1)/run, staying integral at every step
        out = out * (pos as u128 + 1) / run;
    }
    out
}

/// All sorted multi-indices `i_1 <= … <= i_d` over `0..dim`, in lexicographic order.
pub fn sorted_multi_indices(dim: usize, degree: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if dim == 0 && degree > 0 {
        return out;
    }
    let mut cur = vec![0usize; degree];
    loop {
        out.push(cur.clone());
        let Some(pos) = (0..degree).rev().find(|&p| cur[p] + 1 < dim) else {
            break;
        };
        let v = cur[pos] + 1;
        for slot in &mut cur[pos..] {
            *slot = v;
        }
    }
    out
}

fn product<F: Scalar>(y: &Vector<F>, index: &[usize]) -> F {
    let mut acc = F::one();
    for &i in index {
        acc = acc.mul_ref(&y[i]);
    }
    acc
}

/// `Σ_k v_k^{⊗d}` over an arbitrary list of vectors of equal dimension.
pub fn power_sum_tensor<F: Scalar>(vectors: &[Vector<F>], dim: usize, degree: usize) -> Result<SymmetricTensor<F>> {
    if let Some(v) = vectors.iter().find(|v| v.dim() != dim) {
        return Err(Error::DimensionMismatch {
            op: "power_sum_tensor",
            expected: dim,
            got: v.dim(),
        });
    }
    let indices = sorted_multi_indices(dim, degree);
    // each entry sums over the vectors in list order, so chunking over
    // indices never changes the floating-point result
    let values: Vec<F> = indices
        .par_iter()
        .map(|idx| {
            let mut acc = F::zero();
            for v in vectors {
                acc = acc.add_ref(&product(v, idx));
            }
            acc
        })
        .collect();
    let coeffs = indices
        .into_iter()
        .zip(values)
        .filter(|(_, v)| !v.is_zero())
        .collect();
    Ok(SymmetricTensor { dim, degree, coeffs })
}

/// `T_d(x) = Σ_{g∈G} (g·x)^{⊗d}`, without dividing by `|G|`.
pub fn invariant_tensor<F: Scalar>(rep: &Representation<F>, x: &Vector<F>, degree: usize) -> Result<SymmetricTensor<F>> {
    if degree == 0 {
        return Err(Error::OutOfRange("tensor degree must be >= 1".into()));
    }
    let orbit = rep.orbit(x)?;
    power_sum_tensor(&orbit, rep.dim(), degree)
}

/// Tensor symmetric in its first `d-1` slots, with a distinguished last slot.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTensor {
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<(Vec<usize>, usize), Complex64>,
}

impl MomentTensor {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Entry at `(head…, last)`; `head` need not be sorted.
    pub fn get(&self, head: &[usize], last: usize) -> Complex64 {
        let mut key = head.to_vec();
        key.sort_unstable();
        self.coeffs.get(&(key, last)).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Vec<usize>, usize), &Complex64)> {
        self.coeffs.iter()
    }

    pub fn max_magnitude(&self) -> f64 {
        self.coeffs.values().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Same shape as [`SymmetricTensor::to_json`], with the last slot
    /// appended to each index list.
    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .coeffs
            .iter()
            .map(|((head, last), v)| {
                let mut idx = head.clone();
                idx.push(*last);
                entry_json(json!(idx), v)
            })
            .collect();
        json!({ "dim": self.dim, "degree": self.degree, "entries": entries })
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if self.dim != other.dim || self.degree != other.degree {
            return false;
        }
        let scale = 1.0 + self.max_magnitude().max(other.max_magnitude());
        self.coeffs
            .keys()
            .chain(other.coeffs.keys())
            .all(|(h, l)| (self.get(h, *l) - other.get(h, *l)).norm() <= tol * scale)
    }
}

/// `Σ_g (g·x)^{⊗(d-1)} ⊗ conj(g·x)`. For `d = 1` this is `Σ_g conj(g·x)`.
pub fn moment_tensor<F: Scalar>(rep: &Representation<F>, x: &Vector<F>, degree: usize) -> Result<MomentTensor> {
    if F::KIND != ScalarKind::ComplexF64 {
        return Err(Error::ScalarKindMismatch {
            expected: ScalarKind::ComplexF64.name(),
            got: F::KIND.name(),
        });
    }
    if degree == 0 {
        return Err(Error::OutOfRange("tensor degree must be >= 1".into()));
    }
    let orbit: Vec<Vec<Complex64>> = rep
        .orbit(x)?
        .iter()
        .map(|v| v.entries.iter().map(|e| e.to_complex()).collect())
        .collect();
    let n = rep.dim();
    let heads = sorted_multi_indices(n, degree - 1);
    let keys: Vec<(Vec<usize>, usize)> = heads
        .into_iter()
        .flat_map(|h| (0..n).map(move |l| (h.clone(), l)))
        .collect();
    let values: Vec<Complex64> = keys
        .par_iter()
        .map(|(head, last)| {
            let mut acc = Complex64::new(0.0, 0.0);
            for y in &orbit {
                let mut p = y[*last].conj();
                for &i in head {
                    p *= y[i];
                }
                acc += p;
            }
            acc
        })
        .collect();
    let coeffs = keys
        .into_iter()
        .zip(values)
        .filter(|(_, v)| *v != Complex64::new(0.0, 0.0))
        .collect();
    Ok(MomentTensor {
        dim: n,
        degree,
        coeffs,
    })
}

/// Symmetric `dim×dim` matrix of a degree-2 tensor.
pub fn as_matrix<F: Scalar>(t: &SymmetricTensor<F>) -> Result<Matrix<F>> {
    if t.degree != 2 {
        return Err(Error::DegreeMismatch {
            expected: 2,
            got: t.degree,
        });
    }
    let mut m = Matrix::zeros(t.dim, t.dim);
    for (k, v) in &t.coeffs {
        m[(k[0], k[1])] = v.clone();
        m[(k[1], k[0])] = v.clone();
    }
    Ok(m)
}

/// `(T_a)[j,k] = Σ_i a[i] T[i,j,k]` for a degree-3 tensor.
pub fn contract_once<F: Scalar>(t: &SymmetricTensor<F>, a: &Covector<F>) -> Result<SymmetricTensor<F>> {
    if t.degree != 3 {
        return Err(Error::DegreeMismatch {
            expected: 3,
            got: t.degree,
        });
    }
    if a.dim() != t.dim {
        return Err(Error::DimensionMismatch {
            op: "contract_once",
            expected: t.dim,
            got: a.dim(),
        });
    }
    let mut acc: BTreeMap<Vec<usize>, F> = BTreeMap::new();
    for (k, v) in &t.coeffs {
        // each distinct slot value i contributes a[i]·T to the remaining pair
        for pos in 0..3 {
            if pos > 0 && k[pos] == k[pos - 1] {
                continue;
            }
            let rest: Vec<usize> = (0..3).filter(|&p| p != pos).map(|p| k[p]).collect();
            let term = a[k[pos]].mul_ref(v);
            let slot = acc.entry(rest).or_insert_with(F::zero);
            *slot = slot.add_ref(&term);
        }
    }
    acc.retain(|_, v| !v.is_zero());
    Ok(SymmetricTensor {
        dim: t.dim,
        degree: 2,
        coeffs: acc,
    })
}

/// Exact equality on the rational path, otherwise
/// `max |A - B| <= tol * (1 + max |A|, |B|)`.
pub fn tensor_equal<F: Scalar>(a: &SymmetricTensor<F>, b: &SymmetricTensor<F>, tol: f64) -> Result<bool> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            op: "tensor_equal",
            expected: a.dim,
            got: b.dim,
        });
    }
    if a.degree != b.degree {
        return Err(Error::DegreeMismatch {
            expected: a.degree,
            got: b.degree,
        });
    }
    let scale = 1.0 + a.max_magnitude().max(b.max_magnitude());
    Ok(a.coeffs
        .keys()
        .chain(b.coeffs.keys())
        .all(|k| a.get(k).approx_eq(&b.get(k), scale, tol)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups;
    use crate::representations::{cyclic_fourier, regular};
    use crate::scalar::{int, Rational};
    use std::sync::Arc;

    type Q = Rational;

    fn z(n: usize) -> Representation<Q> {
        regular(Arc::new(groups::cyclic(n).unwrap())).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn fourier_x(n: usize) -> Vector<Complex64> {
        Vector::new((0..n).map(|i| c(1.0 + i as f64 * 0.7, 0.3 - 0.45 * i as f64)).collect())
    }

    #[test]
    fn multi_index_counts() {
        assert_eq!(sorted_multi_indices(3, 2).len(), 6);
        assert_eq!(sorted_multi_indices(24, 3).len(), 2600);
        assert_eq!(sorted_multi_indices(4, 0), vec![Vec::<usize>::new()]);
        assert_eq!(multinomial(&[0, 0, 1]), 3);
        assert_eq!(multinomial(&[0, 1, 2]), 6);
        assert_eq!(multinomial(&[2, 2, 2]), 1);
        assert_eq!(multinomial(&[0, 0, 1, 1]), 6);
    }

    #[test]
    fn trivial_group_degree_one() {
        let rep = regular::<Q>(Arc::new(groups::cyclic(1).unwrap())).unwrap();
        let x = Vector::from_i64(&[7]);
        let t = invariant_tensor(&rep, &x, 1).unwrap();
        assert_eq!(t.get(&[0]), int(7));
    }

    #[test]
    fn z2_degree_two() {
        let t = invariant_tensor(&z(2), &Vector::from_i64(&[1, 2]), 2).unwrap();
        assert_eq!(as_matrix(&t).unwrap(), Matrix::from_i64_rows(&[&[5, 4], &[4, 5]]));
        assert_eq!(t.to_polynomial_string(), "(5)*x0^2 + (8)*x0*x1 + (5)*x1^2");
        let t13 = invariant_tensor(&z(2), &Vector::from_i64(&[1, 3]), 2).unwrap();
        assert_eq!(as_matrix(&t13).unwrap(), Matrix::from_i64_rows(&[&[10, 6], &[6, 10]]));
        assert!(!tensor_equal(&t, &t13, 0.0).unwrap());
        assert!(tensor_equal(&t, &t, 0.0).unwrap());
    }

    #[test]
    fn z2_contraction() {
        let t3 = invariant_tensor(&z(2), &Vector::from_i64(&[1, 2]), 3).unwrap();
        let ta = contract_once(&t3, &Vector::from_i64(&[1, 0])).unwrap();
        assert_eq!(as_matrix(&ta).unwrap(), Matrix::from_i64_rows(&[&[9, 6], &[6, 6]]));
        let zero = contract_once(&t3, &Vector::from_i64(&[0, 0])).unwrap();
        assert_eq!(zero.nnz(), 0);
        assert_eq!(as_matrix(&zero).unwrap(), Matrix::zeros(2, 2));
    }

    #[test]
    fn contraction_matches_orbit_sum() {
        let rep = z(4);
        let x = Vector::from_i64(&[3, -1, 4, 2]);
        let a = Vector::from_i64(&[2, 7, -3, 5]);
        let direct = contract_once(&invariant_tensor(&rep, &x, 3).unwrap(), &a).unwrap();
        let mut oracle = Matrix::<Q>::zeros(4, 4);
        for y in rep.orbit(&x).unwrap() {
            let w = a.dot(&y);
            for i in 0..4 {
                for j in 0..4 {
                    oracle[(i, j)] = &oracle[(i, j)] + &w * &y[i] * &y[j];
                }
            }
        }
        assert_eq!(as_matrix(&direct).unwrap(), oracle);
    }

    #[test]
    fn shape_errors() {
        let t3 = invariant_tensor(&z(2), &Vector::from_i64(&[1, 2]), 3).unwrap();
        assert!(matches!(as_matrix(&t3), Err(Error::DegreeMismatch { .. })));
        assert!(contract_once(&t3, &Vector::from_i64(&[1, 0, 0])).is_err());
        let t2 = invariant_tensor(&z(2), &Vector::from_i64(&[1, 2]), 2).unwrap();
        assert!(tensor_equal(&t2, &t3, 0.0).is_err());
    }

    #[test]
    fn fourier_bispectrum_support() {
        for n in 3..7 {
            let rep = cyclic_fourier(n).unwrap();
            let x = fourier_x(n);
            let t = invariant_tensor(&rep, &x, 3).unwrap();
            let scale = t.max_magnitude();
            for idx in sorted_multi_indices(n, 3) {
                if idx.iter().sum::<usize>() % n != 0 {
                    assert!(t.get(&idx).norm() <= 1e-10 * scale, "{n} {idx:?}");
                }
            }
            let m = moment_tensor(&rep, &x, 3).unwrap();
            for ((head, last), v) in m.iter() {
                if (head[0] + head[1]) % n != *last {
                    assert!(v.norm() <= 1e-10 * m.max_magnitude());
                }
            }
        }
    }

    #[test]
    fn fourier_moment_degree_two_is_diagonal() {
        let n = 5;
        let rep = cyclic_fourier(n).unwrap();
        let x = fourier_x(n);
        let m = moment_tensor(&rep, &x, 2).unwrap();
        for i in 0..n {
            for j in 0..n {
                let expect = if i == j { n as f64 * x[i].norm_sqr() } else { 0.0 };
                assert!((m.get(&[i], j) - c(expect, 0.0)).norm() < 1e-10);
            }
        }
        let zero = moment_tensor(&rep, &Vector::zeros(n), 2).unwrap();
        assert_eq!(zero.max_magnitude(), 0.0);
        assert!(matches!(
            moment_tensor(&z(3), &Vector::from_i64(&[1, 2, 3]), 2),
            Err(Error::ScalarKindMismatch { .. })
        ));
    }

    #[test]
    fn json_layout() {
        let t = invariant_tensor(&z(2), &Vector::from_i64(&[1, 2]), 2).unwrap();
        assert_eq!(
            t.to_json(),
            json!({"dim": 2, "degree": 2, "entries": [[[0, 0], "5"], [[0, 1], "4"], [[1, 1], "5"]]})
        );
        let f = invariant_tensor(&cyclic_fourier(2).unwrap(), &Vector::new(vec![c(1.0, 1.0), c(0.0, 0.0)]), 1).unwrap();
        assert_eq!(f.to_json()["entries"], json!([[[0], 2.0, 2.0]]));
    }
}
