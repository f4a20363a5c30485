//! Homogeneous binary forms over ℚ.
//!
//! A form of degree `k` is stored as `k + 1` coefficients, `coeffs[i]`
//! multiplying `x1^(k-i) · x2^i`. Most algorithms dehomogenize with
//! `t = x2 / x1`, handle the power of `x1` dividing the form separately,
//! and homogenize back.

mod bareiss;
mod univariate;

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::order::Order;
use crate::rational::Rational;

pub use bareiss::determinant;
pub use univariate::UniPoly;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    coeffs: Vec<Rational>,
}

impl BinaryForm {
    /// Degree is `coeffs.len() - 1`. Panics on an empty list.
    pub fn new(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a binary form needs at least one coefficient");
        BinaryForm { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        BinaryForm::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn zero(degree: usize) -> Self {
        BinaryForm { coeffs: vec![Rational::zero(); degree + 1] }
    }

    /// `c · x1^(degree-i) · x2^i`.
    pub fn monomial(degree: usize, i: usize, c: Rational) -> Self {
        let mut f = BinaryForm::zero(degree);
        f.coeffs[i] = c;
        f
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        BinaryForm { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Sum of two forms of the same degree.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree(), other.degree(), "adding forms of different degree");
        BinaryForm {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = BinaryForm::zero(self.degree() + other.degree());
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = BinaryForm::new(vec![Rational::one()]);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn eval(&self, x1: &Rational, x2: &Rational) -> Rational {
        let k = self.degree();
        let mut p1 = vec![Rational::one(); k + 1];
        let mut p2 = vec![Rational::one(); k + 1];
        for i in 1..=k {
            p1[i] = &p1[i - 1] * x1;
            p2[i] = &p2[i - 1] * x2;
        }
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * &p1[k - i] * &p2[i])
            .sum()
    }

    pub fn eval_f64(&self, x1: f64, x2: f64) -> f64 {
        let k = self.degree();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| crate::rational::to_f64(c) * powi(x1, k - i) * powi(x2, i))
            .sum()
    }

    /// Largest `e` with `x1^e` dividing the form; `degree + 1` never occurs
    /// because the zero form is excluded by callers.
    fn x1_power(&self) -> usize {
        self.coeffs.iter().rev().take_while(|c| c.is_zero()).count()
    }

    /// `f(1, t)`.
    pub fn dehomogenize(&self) -> UniPoly {
        UniPoly::new(self.coeffs.clone())
    }

    /// `x1^degree · f(x2 / x1)`; `degree` must be at least `deg f`.
    pub fn homogenize(f: &UniPoly, degree: usize) -> Self {
        let mut out = BinaryForm::zero(degree);
        for (i, c) in f.coeffs().iter().enumerate() {
            out.coeffs[i] = c.clone();
        }
        out
    }

    /// `(unit, primitive)` with integer coprime coefficients in `primitive`
    /// and its first nonzero coefficient positive.
    pub fn primitive_part(&self) -> (Rational, Self) {
        if self.is_zero() {
            return (Rational::zero(), self.clone());
        }
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let mut content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let first = ints.iter().find(|c| !c.is_zero()).unwrap();
        if first.is_negative() {
            content = -content;
        }
        let prim = BinaryForm {
            coeffs: ints
                .iter()
                .map(|c| Rational::new(c.clone(), content.clone()))
                .collect(),
        };
        (Rational::new(content, lcm), prim)
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.degree();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            match k - i {
                0 => {}
                1 => f.write_str("*x1")?,
                e => write!(f, "*x1^{e}")?,
            }
            match i {
                0 => {}
                1 => f.write_str("*x2")?,
                e => write!(f, "*x2^{e}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

pub(crate) fn powi(x: f64, n: usize) -> f64 {
    let mut out = 1.0;
    for _ in 0..n {
        out *= x;
    }
    out
}

/// `a·x1 + b·x2`, not both zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearForm {
    a: Rational,
    b: Rational,
}

impl LinearForm {
    pub fn new(a: Rational, b: Rational) -> Option<Self> {
        if a.is_zero() && b.is_zero() {
            None
        } else {
            Some(LinearForm { a, b })
        }
    }

    pub fn x1() -> Self {
        LinearForm { a: Rational::one(), b: Rational::zero() }
    }

    pub fn x2() -> Self {
        LinearForm { a: Rational::zero(), b: Rational::one() }
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn to_form(&self) -> BinaryForm {
        BinaryForm::new(vec![self.a.clone(), self.b.clone()])
    }

    /// Scaled so the first nonzero coefficient is 1.
    pub fn normalized(&self) -> Self {
        let lead = if self.a.is_zero() { &self.b } else { &self.a };
        LinearForm { a: &self.a / lead, b: &self.b / lead }
    }

    /// Exact quotient `p / self`, or `None` if `self` does not divide `p`.
    pub fn divide(&self, p: &BinaryForm) -> Option<BinaryForm> {
        let k = p.degree();
        if k == 0 {
            return p.is_zero().then(|| p.clone());
        }
        let c = p.coeffs();
        let mut q = vec![Rational::zero(); k];
        if self.a.is_zero() {
            // b·x2 divides p iff the pure x1^k coefficient vanishes
            if !c[0].is_zero() {
                return None;
            }
            for i in 0..k {
                q[i] = &c[i + 1] / &self.b;
            }
        } else {
            // p_i = a·q_i + b·q_{i-1}
            for i in 0..k {
                let carry = if i == 0 { Rational::zero() } else { &self.b * &q[i - 1] };
                q[i] = (&c[i] - carry) / &self.a;
            }
            if c[k] != &self.b * &q[k - 1] {
                return None;
            }
        }
        Some(BinaryForm::new(q))
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})*x1 + ({})*x2", self.a, self.b)
    }
}

/// Square-free decomposition `p = unit · Π factor^multiplicity`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquarefreeDecomposition {
    pub unit: Rational,
    /// Primitive, square-free, pairwise coprime; sorted by decreasing
    /// multiplicity, then by coefficients.
    pub factors: Vec<(BinaryForm, u32)>,
}

impl SquarefreeDecomposition {
    pub fn expand(&self) -> BinaryForm {
        let mut out = BinaryForm::new(vec![self.unit.clone()]);
        for (f, m) in &self.factors {
            out = out.mul(&f.pow(*m));
        }
        out
    }
}

pub fn squarefree_decomposition(p: &BinaryForm) -> Result<SquarefreeDecomposition, Error> {
    if p.is_zero() {
        return Err(Error::ZeroForm("squarefree"));
    }
    let e1 = p.x1_power();
    let f = p.dehomogenize();
    let mut factors: Vec<(BinaryForm, u32)> = Vec::new();
    if e1 > 0 {
        factors.push((BinaryForm::from_ints(&[1, 0]), e1 as u32));
    }
    for (g, m) in f.squarefree() {
        let deg = g.degree().unwrap();
        let (_, prim) = BinaryForm::homogenize(&g, deg).primitive_part();
        factors.push((prim, m));
    }
    factors.sort_by(|(f, m), (g, n)| n.cmp(m).then_with(|| f.coeffs.cmp(&g.coeffs)));
    let mut rest = BinaryForm::new(vec![Rational::one()]);
    for (g, m) in &factors {
        rest = rest.mul(&g.pow(*m));
    }
    // `rest` has the same degree as `p`; compare any nonzero position
    let i = rest.coeffs.iter().position(|c| !c.is_zero()).unwrap();
    let unit = &p.coeffs[i] / &rest.coeffs[i];
    Ok(SquarefreeDecomposition { unit, factors })
}

pub fn has_real_projective_root(f: &BinaryForm) -> bool {
    if f.is_zero() {
        return true;
    }
    f.x1_power() > 0 || f.dehomogenize().count_real_roots() > 0
}

/// Largest multiplicity of a real linear factor of `p`; the largest order
/// of vanishing of `p` on the unit circle.
pub fn m_circle(p: &BinaryForm) -> Result<u32, Error> {
    if p.is_zero() {
        return Err(Error::ZeroForm("m_circle"));
    }
    let sf = squarefree_decomposition(p)?;
    Ok(sf
        .factors
        .iter()
        .filter(|(f, _)| has_real_projective_root(f))
        .map(|&(_, m)| m)
        .max()
        .unwrap_or(0))
}

/// Gcd of two forms, primitive; the zero form if both are zero.
pub fn gcd(p: &BinaryForm, q: &BinaryForm) -> BinaryForm {
    if p.is_zero() {
        return q.primitive_part().1;
    }
    if q.is_zero() {
        return p.primitive_part().1;
    }
    let e = p.x1_power().min(q.x1_power());
    let g = p.dehomogenize().gcd(&q.dehomogenize());
    let deg = g.degree().unwrap();
    let x1e = BinaryForm::monomial(e, 0, Rational::one());
    x1e.mul(&BinaryForm::homogenize(&g, deg)).primitive_part().1
}

/// Homogeneous Sylvester resultant. Zero forms are rejected.
pub fn resultant(p: &BinaryForm, q: &BinaryForm) -> Result<Rational, Error> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::ZeroForm("resultant"));
    }
    if p.degree() == 0 || q.degree() == 0 {
        return Err(Error::pre("resultant needs forms of degree at least 1"));
    }
    Ok(sylvester_resultant(p, q))
}

/// Determinant of the `(m+n)×(m+n)` Sylvester matrix of the full
/// coefficient lists. Zero forms give 0.
pub(crate) fn sylvester_resultant(p: &BinaryForm, q: &BinaryForm) -> Rational {
    let (m, n) = (p.degree(), q.degree());
    let size = m + n;
    let (dp, ip) = integer_coeffs(p);
    let (dq, iq) = integer_coeffs(q);
    let mut rows = Vec::with_capacity(size);
    for r in 0..n {
        let mut row = vec![BigInt::zero(); size];
        row[r..r + m + 1].clone_from_slice(&ip);
        rows.push(row);
    }
    for r in 0..m {
        let mut row = vec![BigInt::zero(); size];
        row[r..r + n + 1].clone_from_slice(&iq);
        rows.push(row);
    }
    let det = determinant(rows);
    let scale = num_traits::pow(dp, n) * num_traits::pow(dq, m);
    Rational::new(det, scale)
}

fn integer_coeffs(p: &BinaryForm) -> (BigInt, Vec<BigInt>) {
    let lcm = p.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints = p
        .coeffs
        .iter()
        .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    (lcm, ints)
}

/// Largest `m` with `l^m | p`; infinite for the zero form.
pub fn linear_factor_multiplicity(l: &LinearForm, p: &BinaryForm) -> Order {
    if p.is_zero() {
        return Order::Infinite;
    }
    let mut m = 0;
    let mut cur = p.clone();
    while let Some(q) = l.divide(&cur) {
        m += 1;
        cur = q;
    }
    Order::Finite(m)
}

/// `(c, L)` with `p = c · L³`, `L` normalized, if `p` is a rational perfect
/// cube.
pub fn extract_perfect_cube(p: &BinaryForm) -> Option<(Rational, LinearForm)> {
    if p.degree() != 3 || p.is_zero() {
        return None;
    }
    let c = p.coeffs();
    let (scale, l) = if c[0].is_zero() {
        (c[3].clone(), LinearForm::x2())
    } else {
        let r = &c[1] / (&c[0] * Rational::from_integer(3.into()));
        (c[0].clone(), LinearForm { a: Rational::one(), b: r })
    };
    let candidate = l.to_form().pow(3).scale(&scale);
    (candidate == *p).then_some((scale, l))
}
