//! Rational roots of integer polynomials.
//!
//! Every rational root `a/b` (in lowest terms) of a primitive integer
//! polynomial has `a | c_0` and `b | c_n`. When both coefficients are small
//! the candidates are enumerated directly. Otherwise candidates are produced
//! p-adically: roots modulo a small prime are Hensel-lifted until the
//! modulus exceeds `2 |c_0| |c_n|`, then rational reconstruction recovers the
//! unique fraction with those bounds. Every candidate is checked against the
//! divisibility conditions and by exact evaluation, so only true roots are
//! ever returned.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::Rational;

/// Candidate pairs above which direct divisor enumeration is abandoned.
const MAX_DIRECT_CANDIDATES: usize = 20_000;
const FIRST_PRIME: u64 = 10_007;
const PRIME_ATTEMPTS: usize = 40;

/// Integer polynomial with coefficients listed from the constant term up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Clears denominators of rational coefficients and removes the content.
    pub fn from_rational(coeffs: &[Rational]) -> Self {
        let l = coeffs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        Self::new(coeffs.iter().map(|q| q.numer() * (&l / q.denom())).collect()).primitive()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Divides by the gcd of the coefficients and makes the leading one positive.
    pub fn primitive(&self) -> Self {
        let g = self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if g.is_zero() {
            return self.clone();
        }
        let sign = if self.coeffs.last().is_some_and(Signed::is_negative) { -1 } else { 1 };
        let g = g * sign;
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Whether `a/b` is a root: `Σ c_k a^k b^(n-k) = 0`.
    pub fn vanishes_at(&self, a: &BigInt, b: &BigInt) -> bool {
        let n = self.degree();
        let mut acc = BigInt::zero();
        let mut a_pow = BigInt::one();
        let mut b_pows = vec![BigInt::one(); n + 1];
        for k in 1..=n {
            b_pows[k] = &b_pows[k - 1] * b;
        }
        for (k, c) in self.coeffs.iter().enumerate() {
            acc += c * &a_pow * &b_pows[n - k];
            a_pow *= a;
        }
        acc.is_zero()
    }

    fn eval_mod(&self, x: &BigInt, m: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| (acc * x + c).mod_floor(m))
    }

    fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::new(vec![BigInt::zero()]);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }
}

fn eval_u64(reduced: &[u64], x: u64, p: u64) -> u64 {
    reduced
        .iter()
        .rev()
        .fold(0u64, |acc, &c| ((acc as u128 * x as u128 + c as u128) % p as u128) as u64)
}

/// Distinct rational roots of `poly`, sorted ascending.
pub fn rational_roots(poly: &IntPoly) -> Vec<Rational> {
    if poly.is_zero() || poly.degree() == 0 {
        return Vec::new();
    }
    let mut roots = Vec::new();
    let shift = poly.coeffs.iter().take_while(|c| c.is_zero()).count();
    if shift > 0 {
        roots.push(Rational::zero());
    }
    let reduced = IntPoly::new(poly.coeffs[shift..].to_vec()).primitive();
    if reduced.degree() > 0 {
        let found = if let Some(c) = direct_candidates(&reduced) {
            c
        } else {
            padic_candidates(&reduced)
        };
        roots.extend(found);
    }
    roots.sort();
    roots.dedup();
    roots
}

/// Total multiplicity of the given rational roots of `poly`.
pub fn root_multiplicity(poly: &IntPoly, roots: &[Rational]) -> usize {
    let mut cur: Vec<Rational> = poly.coeffs.iter().cloned().map(Rational::from_integer).collect();
    let mut total = 0;
    for r in roots {
        while cur.len() > 1 {
            // synthetic division by (t - r), highest coefficient first
            let mut quotient = vec![Rational::zero(); cur.len() - 1];
            let mut carry = Rational::zero();
            for k in (0..cur.len()).rev() {
                carry = &carry * r + &cur[k];
                if k > 0 {
                    quotient[k - 1] = carry.clone();
                }
            }
            if !carry.is_zero() {
                break;
            }
            cur = quotient;
            total += 1;
        }
    }
    total
}

/// Roots by enumerating `±a/b` with `a | c_0`, `b | c_n`; `None` when the
/// candidate set would be too large.
pub fn direct_candidates(poly: &IntPoly) -> Option<Vec<Rational>> {
    let c0 = poly.coeffs[0].abs().to_u64()?;
    let cn = poly.coeffs.last()?.abs().to_u64()?;
    if c0 == 0 {
        return None;
    }
    if c0 > 1 << 40 || cn > 1 << 40 {
        return None;
    }
    let nums = divisors(c0);
    let dens = divisors(cn);
    if nums.len() * dens.len() > MAX_DIRECT_CANDIDATES {
        return None;
    }
    let mut out = Vec::new();
    for &b in &dens {
        for &a in &nums {
            if a.gcd(&b) != 1 {
                continue;
            }
            for sign in [1i64, -1] {
                let num = BigInt::from(a) * sign;
                let den = BigInt::from(b);
                if poly.vanishes_at(&num, &den) {
                    out.push(Rational::new(num, den));
                }
            }
        }
    }
    Some(out)
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Simple roots of `poly` in `F_p`, or `None` if `p` divides the leading
/// coefficient.
fn simple_roots_mod(poly: &IntPoly, deriv: &IntPoly, p: u64) -> Option<Vec<u64>> {
    let pb = BigInt::from(p);
    let red = |q: &IntPoly| -> Vec<u64> {
        q.coeffs.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect()
    };
    let pr = red(poly);
    if *pr.last()? == 0 {
        return None;
    }
    let dr = red(deriv);
    let roots = (0..p)
        .filter(|&x| eval_u64(&pr, x, p) == 0 && eval_u64(&dr, x, p) != 0)
        .collect();
    Some(roots)
}

pub fn padic_candidates(poly: &IntPoly) -> Vec<Rational> {
    let n = poly.degree();
    let deriv = poly.derivative();
    let mut best: Option<(u64, Vec<u64>)> = None;
    let mut p = FIRST_PRIME;
    let mut tried = 0;
    while tried < PRIME_ATTEMPTS {
        if is_prime(p) {
            tried += 1;
            if let Some(rs) = simple_roots_mod(poly, &deriv, p) {
                let full = rs.len() == n;
                if best.as_ref().is_none_or(|(_, b)| rs.len() > b.len()) {
                    best = Some((p, rs));
                }
                if full {
                    break;
                }
            }
        }
        p += 2;
    }
    let Some((p, residues)) = best else {
        return Vec::new();
    };

    let c0 = poly.coeffs[0].abs();
    let cn = poly.coeffs.last().unwrap().abs();
    let bound = BigInt::from(2) * &c0 * &cn;
    let pb = BigInt::from(p);
    let mut out = Vec::new();
    for r in residues {
        let (root, modulus) = hensel_lift(poly, &deriv, BigInt::from(r), pb.clone(), &bound);
        let Some((a, b)) = reconstruct(&root, &modulus, &c0, &cn) else {
            continue;
        };
        if !(&cn % &b).is_zero() || (!a.is_zero() && !(&c0 % a.abs()).is_zero()) {
            continue;
        }
        if poly.vanishes_at(&a, &b) {
            out.push(Rational::new(a, b));
        }
    }
    out
}

/// Newton iteration in `Z/p^(2^k)` until the modulus exceeds `bound`.
fn hensel_lift(
    poly: &IntPoly,
    deriv: &IntPoly,
    mut r: BigInt,
    mut m: BigInt,
    bound: &BigInt,
) -> (BigInt, BigInt) {
    while &m <= bound {
        m = &m * &m;
        let f = poly.eval_mod(&r, &m);
        let df = deriv.eval_mod(&r, &m);
        let inv = mod_inverse(&df, &m).expect("simple root has invertible derivative");
        r = (&r - f * inv).mod_floor(&m);
    }
    (r, m)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// Finds `a/b` with `|a| <= num_bound`, `0 < b <= den_bound` and
/// `a ≡ b r (mod m)`.
fn reconstruct(
    r: &BigInt,
    m: &BigInt,
    num_bound: &BigInt,
    den_bound: &BigInt,
) -> Option<(BigInt, BigInt)> {
    let (mut r0, mut r1) = (m.clone(), r.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while &r1 > num_bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() {
        return None;
    }
    let (mut a, mut b) = (r1, t1);
    if b.sign() == Sign::Minus {
        a = -a;
        b = -b;
    }
    if &b > den_bound || !a.gcd(&b).is_one() {
        return None;
    }
    Some((a, b))
}
