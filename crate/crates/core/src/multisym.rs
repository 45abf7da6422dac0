//! Multisymmetric power sums: invariants of `S_n` permuting the rows of an
//! `n×d` matrix of variables `x_{i,j}`.
//!
//! Points are flattened row-major, so `x_{i,j}` (1-based) sits at index
//! `(i-1)·d + (j-1)`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::scalar::Scalar;
use crate::tensors::sorted_multi_indices;

/// Sorted multiset of 1-based column indices `i_1 <= … <= i_k`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct PowerSumLabel(Vec<usize>);

impl PowerSumLabel {
    pub fn new(mut columns: Vec<usize>) -> Self {
        columns.sort_unstable();
        Self(columns)
    }

    pub fn columns(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for PowerSumLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "p[{}]", parts.join(","))
    }
}

/// `Σ_{i=1}^n Π_t x_{i, label_t}` kept in structured form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantPolynomial {
    n: usize,
    d: usize,
    label: PowerSumLabel,
}

pub fn power_sum(n: usize, d: usize, label: PowerSumLabel) -> Result<InvariantPolynomial> {
    if label.0.is_empty() || label.0.iter().any(|&c| c == 0 || c > d) {
        return Err(Error::LabelOutOfRange {
            label: label.0.clone(),
            d,
        });
    }
    Ok(InvariantPolynomial { n, d, label })
}

/// Every power sum of degree `1..=max_degree`, ordered by degree and then
/// lexicographically by label.
pub fn enumerate_power_sums(n: usize, d: usize, max_degree: usize) -> Vec<InvariantPolynomial> {
    (1..=max_degree)
        .flat_map(|k| sorted_multi_indices(d, k))
        .map(|cols| InvariantPolynomial {
            n,
            d,
            label: PowerSumLabel(cols.into_iter().map(|c| c + 1).collect()),
        })
        .collect()
}

/// `Σ_{k=1}^{max_degree} C(d+k-1, k)`.
pub fn power_sum_count(d: usize, max_degree: usize) -> u128 {
    (1..=max_degree as u128)
        .map(|k| {
            let d = d as u128;
            (1..=k).fold(1u128, |acc, i| acc * (d + i - 1) / i)
        })
        .sum()
}

/// `(d³ + 6d² + 11d) / 6`, the number of power sums of degree at most 3.
pub fn cubic_count(d: usize) -> u128 {
    let d = d as u128;
    (d * d * d + 6 * d * d + 11 * d) / 6
}

impl InvariantPolynomial {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn label(&self) -> &PowerSumLabel {
        &self.label
    }

    pub fn degree(&self) -> usize {
        self.label.degree()
    }

    pub fn num_variables(&self) -> usize {
        self.n * self.d
    }

    fn check_point<F: Scalar>(&self, point: &Vector<F>) -> Result<()> {
        if point.dim() != self.num_variables() {
            return Err(Error::DimensionMismatch {
                op: "power sum evaluation",
                expected: self.num_variables(),
                got: point.dim(),
            });
        }
        Ok(())
    }

    pub fn evaluate<F: Scalar>(&self, point: &Vector<F>) -> Result<F> {
        self.check_point(point)?;
        let mut total = F::zero();
        for i in 0..self.n {
            let mut term = F::one();
            for &c in &self.label.0 {
                term = term.mul_ref(&point[i * self.d + c - 1]);
            }
            total = total.add_ref(&term);
        }
        Ok(total)
    }

    /// `∂p/∂x_{i,j}` at `point`: for each row, every occurrence of a column
    /// contributes the product of the remaining factors.
    pub fn gradient<F: Scalar>(&self, point: &Vector<F>) -> Result<Vector<F>> {
        self.check_point(point)?;
        let k = self.degree();
        let mut grad = Vector::<F>::zeros(self.num_variables());
        for i in 0..self.n {
            let row = |c: usize| &point[i * self.d + c - 1];
            for skip in 0..k {
                let mut term = F::one();
                for (t, &c) in self.label.0.iter().enumerate() {
                    if t != skip {
                        term = term.mul_ref(row(c));
                    }
                }
                let slot = i * self.d + self.label.0[skip] - 1;
                grad[slot] = grad[slot].add_ref(&term);
            }
        }
        Ok(grad)
    }

    /// Explicit term map: exponent vector over the `n·d` variables to coefficient.
    pub fn terms<F: Scalar>(&self) -> BTreeMap<Vec<u32>, F> {
        let mut out = BTreeMap::new();
        for i in 0..self.n {
            let mut exps = vec![0u32; self.num_variables()];
            for &c in &self.label.0 {
                exps[i * self.d + c - 1] += 1;
            }
            let slot = out.entry(exps).or_insert_with(F::zero);
            *slot = slot.add_ref(&F::one());
        }
        out
    }
}

impl fmt::Display for InvariantPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mono: Vec<String> = self.label.0.iter().map(|c| format!("x[i,{c}]")).collect();
        write!(f, "sum_i {}", mono.join("*"))
    }
}
