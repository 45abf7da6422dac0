//! Matrix representations of finite groups.
//!
//! Conventions:
//! * regular: `g·e_h = e_{gh}` (left multiplication on the element basis).
//! * dihedral standard: `r` shifts coordinates, `(r·x)_i = x_{i-1}`, and
//!   `s` reflects, `s(x_0, …, x_{n-1}) = (x_0, x_{n-1}, …, x_1)`.
//! * `n×d` matrices are flattened row-major and `σ` moves row `i` to row `σ(i)`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::groups::{self, GroupTable};
use crate::linalg::{matmul, Matrix, Vector};
use crate::scalar::{Scalar, ScalarKind};

const HOMOMORPHISM_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct Representation<F> {
    name: String,
    group: Arc<GroupTable>,
    dim: usize,
    matrices: Vec<Matrix<F>>,
}

impl<F: Scalar> Representation<F> {
    /// Checks that the identity acts trivially and that
    /// `ρ(g s) = ρ(g) ρ(s)` for every `g` and every generator `s`, which by
    /// induction on word length gives the full homomorphism property (and
    /// invertibility, since `ρ(g) ρ(g⁻¹) = ρ(e) = I`).
    pub fn new(name: impl Into<String>, group: Arc<GroupTable>, matrices: Vec<Matrix<F>>) -> Result<Self> {
        let name = name.into();
        if matrices.len() != group.order() {
            return Err(Error::DimensionMismatch {
                op: "Representation::new",
                expected: group.order(),
                got: matrices.len(),
            });
        }
        let dim = matrices[0].rows();
        for m in &matrices {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::NotHomomorphism(format!("{name}: matrices must be {dim}x{dim}")));
            }
        }
        if !matrices[0].approx_eq(&Matrix::identity(dim), HOMOMORPHISM_TOL) {
            return Err(Error::NotHomomorphism(format!("{name}: identity acts nontrivially")));
        }
        let rep = Self {
            name,
            group,
            dim,
            matrices,
        };
        let gens = rep.group.generators();
        for g in 0..rep.group.order() {
            for &s in &gens {
                rep.check_product(g, s)?;
            }
        }
        Ok(rep)
    }

    fn check_product(&self, g: usize, h: usize) -> Result<()> {
        let prod = matmul(&self.matrices[g], &self.matrices[h])?;
        if !prod.approx_eq(&self.matrices[self.group.mul(g, h)], HOMOMORPHISM_TOL) {
            return Err(Error::NotHomomorphism(format!(
                "{}: ρ({}) ρ({}) != ρ({}·{})",
                self.name,
                self.group.label(g),
                self.group.label(h),
                self.group.label(g),
                self.group.label(h)
            )));
        }
        Ok(())
    }

    /// Checks `ρ(gh) = ρ(g) ρ(h)` on every pair (quadratic in the order).
    pub fn verify_homomorphism(&self) -> Result<()> {
        for g in 0..self.group.order() {
            for h in 0..self.group.order() {
                self.check_product(g, h)?;
            }
        }
        Ok(())
    }

    /// The representation on the zero space.
    pub fn zero_dim(group: Arc<GroupTable>) -> Self {
        Self {
            name: "0".into(),
            dim: 0,
            matrices: vec![Matrix::zeros(0, 0); group.order()],
            group,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn group(&self) -> &GroupTable {
        &self.group
    }

    pub fn group_arc(&self) -> Arc<GroupTable> {
        Arc::clone(&self.group)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn scalar_kind(&self) -> ScalarKind {
        F::KIND
    }

    pub fn matrix(&self, g: usize) -> &Matrix<F> {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[Matrix<F>] {
        &self.matrices
    }

    pub fn apply(&self, g: usize, x: &Vector<F>) -> Result<Vector<F>> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                op: "apply",
                expected: self.dim,
                got: x.dim(),
            });
        }
        self.matrices[g].mul_vec(x)
    }

    /// `(g_1 x, …, g_|G| x)` in group enumeration order.
    pub fn orbit(&self, x: &Vector<F>) -> Result<Vec<Vector<F>>> {
        (0..self.order()).map(|g| self.apply(g, x)).collect()
    }

    pub fn map_scalars<G: Scalar>(&self, f: impl Fn(&F) -> G) -> Representation<G> {
        Representation {
            name: self.name.clone(),
            group: Arc::clone(&self.group),
            dim: self.dim,
            matrices: self.matrices.iter().map(|m| m.map(&f)).collect(),
        }
    }
}

fn permutation_matrix<F: Scalar>(n: usize, image: impl Fn(usize) -> usize) -> Matrix<F> {
    // column j has its 1 in row image(j), so e_j ↦ e_image(j)
    let mut m = Matrix::zeros(n, n);
    for j in 0..n {
        m[(image(j), j)] = F::one();
    }
    m
}

pub fn regular<F: Scalar>(group: Arc<GroupTable>) -> Result<Representation<F>> {
    let n = group.order();
    let matrices = (0..n)
        .map(|g| permutation_matrix(n, |h| group.mul(g, h)))
        .collect();
    let name = format!("regular:{}", group.name());
    Representation::new(name, group, matrices)
}

pub fn cyclic_fourier(n: usize) -> Result<Representation<Complex64>> {
    let group = Arc::new(groups::cyclic(n)?);
    let matrices = (0..n)
        .map(|l| {
            let diag: Vec<Complex64> = (0..n)
                .map(|j| {
                    let k = (j * l) % n;
                    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64)
                })
                .collect();
            Matrix::diagonal(&diag)
        })
        .collect();
    Representation::new(format!("fourier:{n}"), group, matrices)
}

pub fn dihedral_standard<F: Scalar>(n: usize) -> Result<Representation<F>> {
    let group = Arc::new(groups::dihedral(n)?);
    // s^e r^a sends x to y with y_i = x_{(±i) - a}
    let matrices = (0..2 * n)
        .map(|g| {
            let (e, a) = (g / n, g % n);
            let source = move |i: usize| {
                if e == 0 {
                    (i + n - a) % n
                } else {
                    (2 * n - i - a) % n
                }
            };
            let mut m = Matrix::zeros(n, n);
            for i in 0..n {
                m[(i, source(i))] = F::one();
            }
            m
        })
        .collect();
    Representation::new(format!("dihedral-standard:{n}"), group, matrices)
}

fn dihedral_character<F: Scalar>(n: usize, name: &str, sign: impl Fn(usize, usize) -> bool) -> Result<Representation<F>> {
    let group = Arc::new(groups::dihedral(n)?);
    let matrices = (0..2 * n)
        .map(|g| {
            let v = if sign(g / n, g % n) { -F::one() } else { F::one() };
            Matrix::diagonal(&[v])
        })
        .collect();
    Representation::new(format!("{name}:{n}"), group, matrices)
}

/// `r ↦ 1`, `s ↦ -1`.
pub fn character_s0<F: Scalar>(n: usize) -> Result<Representation<F>> {
    dihedral_character(n, "S0", |e, _| e == 1)
}

/// `r ↦ -1`, `s ↦ -1`; only a character when `n` is even.
pub fn character_sminus1<F: Scalar>(n: usize) -> Result<Representation<F>> {
    if !n.is_multiple_of(2) {
        return Err(Error::ParityMismatch(n));
    }
    dihedral_character(n, "S-1", |e, a| (e + a) % 2 == 1)
}

pub fn direct_sum<F: Scalar>(a: &Representation<F>, b: &Representation<F>) -> Result<Representation<F>> {
    if !Arc::ptr_eq(&a.group, &b.group) && *a.group != *b.group {
        return Err(Error::GroupMismatch);
    }
    let (da, db) = (a.dim, b.dim);
    let matrices = a
        .matrices
        .iter()
        .zip(&b.matrices)
        .map(|(ma, mb)| {
            Matrix::from_fn(da + db, da + db, |r, c| match (r < da, c < da) {
                (true, true) => ma[(r, c)].clone(),
                (false, false) => mb[(r - da, c - da)].clone(),
                _ => F::zero(),
            })
        })
        .collect();
    let name = match (da, db) {
        (_, 0) => a.name.clone(),
        (0, _) => b.name.clone(),
        _ => format!("{}+{}", a.name, b.name),
    };
    Representation::new(name, Arc::clone(&a.group), matrices)
}

/// Standard representation plus every sign character: `(x_1..x_n, s_0)` for
/// odd `n`, `(x_1..x_n, s_0, s_-1)` for even `n`.
pub fn dihedral_cmf<F: Scalar>(n: usize) -> Result<Representation<F>> {
    if n < 3 {
        return Err(Error::OutOfRange(format!("dihedral-cmf needs n >= 3, got {n}")));
    }
    let std_rep = dihedral_standard::<F>(n)?;
    let group = std_rep.group_arc();
    let rebase = |r: Representation<F>| Representation {
        group: Arc::clone(&group),
        ..r
    };
    let mut rep = direct_sum(&std_rep, &rebase(character_s0(n)?))?;
    if n.is_multiple_of(2) {
        rep = direct_sum(&rep, &rebase(character_sminus1(n)?))?;
    }
    rep.name = format!("dihedral-cmf:{n}");
    Ok(rep)
}

/// `S_n` permuting the rows of an `n×d` matrix.
pub fn symmetric_matrix_rep<F: Scalar>(n: usize, d: usize) -> Result<Representation<F>> {
    if d == 0 {
        return Err(Error::OutOfRange("snmatrix needs d >= 1".into()));
    }
    let group = Arc::new(groups::symmetric(n)?);
    let perms = groups::permutations(n);
    let matrices = perms
        .iter()
        .map(|sigma| permutation_matrix(n * d, |k| sigma[k / d] * d + k % d))
        .collect();
    Representation::new(format!("snmatrix:{n}:{d}"), group, matrices)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupFamily {
    Cyclic,
    Dihedral,
    Symmetric,
}

impl GroupFamily {
    pub fn build(self, n: usize) -> Result<GroupTable> {
        match self {
            GroupFamily::Cyclic => groups::cyclic(n),
            GroupFamily::Dihedral => groups::dihedral(n),
            GroupFamily::Symmetric => groups::symmetric(n),
        }
    }

    fn keyword(self) -> &'static str {
        match self {
            GroupFamily::Cyclic => "cyclic",
            GroupFamily::Dihedral => "dihedral",
            GroupFamily::Symmetric => "symmetric",
        }
    }
}

/// Parsed form of the command-line representation strings, e.g.
/// `regular:dihedral:4`, `fourier:5`, `snmatrix:5:3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepDescriptor {
    Regular(GroupFamily, usize),
    Fourier(usize),
    DihedralStandard(usize),
    DihedralCmf(usize),
    SnMatrix(usize, usize),
}

impl RepDescriptor {
    pub fn build<F: Scalar>(&self) -> Result<Representation<F>> {
        match *self {
            RepDescriptor::Regular(family, n) => regular(Arc::new(family.build(n)?)),
            RepDescriptor::Fourier(n) => {
                let rep = cyclic_fourier(n)?;
                if F::KIND != ScalarKind::ComplexF64 {
                    return Err(Error::ScalarKindMismatch {
                        expected: ScalarKind::ComplexF64.name(),
                        got: F::KIND.name(),
                    });
                }
                Ok(rep.map_scalars(|c| F::from_complex(*c).expect("complex scalars")))
            }
            RepDescriptor::DihedralStandard(n) => dihedral_standard(n),
            RepDescriptor::DihedralCmf(n) => dihedral_cmf(n),
            RepDescriptor::SnMatrix(n, d) => symmetric_matrix_rep(n, d),
        }
    }

    pub fn requires_complex(&self) -> bool {
        matches!(self, RepDescriptor::Fourier(_))
    }
}

impl FromStr for RepDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidDescriptor(s.to_string());
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        match parts.as_slice() {
            ["regular", family, n] => {
                let family = match *family {
                    "cyclic" => GroupFamily::Cyclic,
                    "dihedral" => GroupFamily::Dihedral,
                    "symmetric" => GroupFamily::Symmetric,
                    _ => return Err(bad()),
                };
                Ok(RepDescriptor::Regular(family, num(n)?))
            }
            ["fourier", n] => Ok(RepDescriptor::Fourier(num(n)?)),
            ["dihedral-standard", n] => Ok(RepDescriptor::DihedralStandard(num(n)?)),
            ["dihedral-cmf", n] => Ok(RepDescriptor::DihedralCmf(num(n)?)),
            ["snmatrix", n, d] => Ok(RepDescriptor::SnMatrix(num(n)?, num(d)?)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for RepDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepDescriptor::Regular(family, n) => write!(f, "regular:{}:{n}", family.keyword()),
            RepDescriptor::Fourier(n) => write!(f, "fourier:{n}"),
            RepDescriptor::DihedralStandard(n) => write!(f, "dihedral-standard:{n}"),
            RepDescriptor::DihedralCmf(n) => write!(f, "dihedral-cmf:{n}"),
            RepDescriptor::SnMatrix(n, d) => write!(f, "snmatrix:{n}:{d}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, Rational};

    type Q = Rational;

    fn v(xs: &[i64]) -> Vector<Q> {
        Vector::from_i64(xs)
    }

    #[test]
    fn regular_examples() {
        let triv = regular::<Q>(Arc::new(groups::cyclic(1).unwrap())).unwrap();
        assert_eq!(triv.matrix(0), &Matrix::identity(1));
        let z2 = regular::<Q>(Arc::new(groups::cyclic(2).unwrap())).unwrap();
        assert_eq!(z2.matrix(1), &Matrix::from_i64_rows(&[&[0, 1], &[1, 0]]));
        let z3 = regular::<Q>(Arc::new(groups::cyclic(3).unwrap())).unwrap();
        assert_eq!(
            z3.matrix(1),
            &Matrix::from_i64_rows(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]])
        );
        assert_eq!(z3.apply(1, &v(&[1, 2, 4])).unwrap(), v(&[4, 1, 2]));
    }

    #[test]
    fn fourier_examples() {
        let f2 = cyclic_fourier(2).unwrap();
        assert!(f2.matrix(0).approx_eq(&Matrix::identity(2), 1e-15));
        let expect = Matrix::diagonal(&[Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]);
        assert!(f2.matrix(1).approx_eq(&expect, 1e-15));
        let f4 = cyclic_fourier(4).unwrap();
        let i = Complex64::new(0.0, 1.0);
        let expect = Matrix::diagonal(&[Complex64::new(1.0, 0.0), i, -Complex64::new(1.0, 0.0), -i]);
        assert!(f4.matrix(1).approx_eq(&expect, 1e-15));
    }

    #[test]
    fn dihedral_standard_examples() {
        let d4 = dihedral_standard::<Q>(4).unwrap();
        assert_eq!(d4.matrix(0), &Matrix::identity(4));
        assert_eq!(d4.apply(4, &v(&[9, 1, 2, 3])).unwrap(), v(&[9, 3, 2, 1]));
        let d3 = dihedral_standard::<Q>(3).unwrap();
        let sr = d3.group().mul(3, 1);
        assert_eq!(d3.group().element_order(sr), 2);
        let m = d3.matrix(sr);
        assert_eq!(&matmul(m, m).unwrap(), &Matrix::identity(3));
        d3.verify_homomorphism().unwrap();
    }

    #[test]
    fn characters() {
        let s0 = character_s0::<Q>(5).unwrap();
        assert_eq!(s0.matrix(1)[(0, 0)], int(1));
        assert_eq!(s0.matrix(5)[(0, 0)], int(-1));
        let sr = s0.group().mul(5, 1);
        assert_eq!(s0.matrix(sr)[(0, 0)], int(-1));
        let sm = character_sminus1::<Q>(4).unwrap();
        assert_eq!(sm.matrix(1)[(0, 0)], int(-1));
        assert_eq!(sm.matrix(4)[(0, 0)], int(-1));
        assert_eq!(sm.matrix(5)[(0, 0)], int(1));
        assert_eq!(character_sminus1::<Q>(5).unwrap_err(), Error::ParityMismatch(5));
    }

    #[test]
    fn direct_sums() {
        let a = dihedral_standard::<Q>(3).unwrap();
        let zero = Representation::zero_dim(a.group_arc());
        let same = direct_sum(&a, &zero).unwrap();
        assert_eq!(same.dim(), 3);
        assert_eq!(same.matrices(), a.matrices());
        let s0 = Representation {
            group: a.group_arc(),
            ..character_s0::<Q>(3).unwrap()
        };
        let sum = direct_sum(&a, &s0).unwrap();
        assert_eq!(sum.dim(), 4);
        sum.verify_homomorphism().unwrap();
        let other = regular::<Q>(Arc::new(groups::cyclic(6).unwrap())).unwrap();
        assert_eq!(direct_sum(&a, &other).unwrap_err(), Error::GroupMismatch);
    }

    #[test]
    fn cmf_dimensions() {
        for n in 3..9 {
            let rep = dihedral_cmf::<Q>(n).unwrap();
            assert_eq!(rep.dim(), if n % 2 == 1 { n + 1 } else { n + 2 });
            assert_eq!(rep.matrix(0), &Matrix::identity(rep.dim()));
        }
        assert!(dihedral_cmf::<Q>(2).is_err());
    }

    #[test]
    fn snmatrix_examples() {
        let d1 = symmetric_matrix_rep::<Q>(3, 1).unwrap();
        assert_eq!(d1.dim(), 3);
        let s2 = symmetric_matrix_rep::<Q>(2, 2).unwrap();
        assert_eq!(s2.apply(1, &v(&[1, 2, 3, 4])).unwrap(), v(&[3, 4, 1, 2]));
        symmetric_matrix_rep::<Q>(3, 2).unwrap().verify_homomorphism().unwrap();
    }

    #[test]
    fn orbits() {
        let z3 = regular::<Q>(Arc::new(groups::cyclic(3).unwrap())).unwrap();
        let fixed = z3.orbit(&v(&[1, 1, 1])).unwrap();
        assert!(fixed.iter().all(|y| *y == v(&[1, 1, 1])));
        let orbit = z3.orbit(&v(&[1, 2, 4])).unwrap();
        assert_eq!(orbit, vec![v(&[1, 2, 4]), v(&[4, 1, 2]), v(&[2, 4, 1])]);
    }

    #[test]
    fn descriptors_round_trip() {
        for s in [
            "regular:cyclic:5",
            "regular:dihedral:4",
            "regular:symmetric:4",
            "fourier:5",
            "dihedral-standard:6",
            "dihedral-cmf:5",
            "snmatrix:5:3",
        ] {
            let d: RepDescriptor = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
        assert!("regular:foo:3".parse::<RepDescriptor>().is_err());
        assert!("fourier".parse::<RepDescriptor>().is_err());
        let fourier: RepDescriptor = "fourier:3".parse().unwrap();
        assert!(matches!(fourier.build::<Q>(), Err(Error::ScalarKindMismatch { .. })));
        assert_eq!(fourier.build::<Complex64>().unwrap().dim(), 3);
    }
}
