//! Truncated bivariate polynomials and polynomial coordinate changes.
//!
//! A [`PolyJet`] keeps every coefficient of total degree at most its order.
//! Arithmetic between jets truncates at the smaller order, and
//! [`PolyJet::substitute`] composes a jet with a [`PolyMap2`] whose
//! components have no constant term, so every retained coefficient of the
//! result is exact.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::error::Error;
use crate::forms::{powi, BinaryForm};
use crate::rational::{to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyJet {
    order: u32,
    coeffs: BTreeMap<(u32, u32), Rational>,
}

impl PolyJet {
    pub fn zero(order: u32) -> Self {
        PolyJet { order, coeffs: BTreeMap::new() }
    }

    pub fn constant(order: u32, c: Rational) -> Self {
        let mut j = PolyJet::zero(order);
        j.add_term(0, 0, c);
        j
    }

    pub fn x1(order: u32) -> Self {
        let mut j = PolyJet::zero(order);
        j.add_term(1, 0, Rational::one());
        j
    }

    pub fn x2(order: u32) -> Self {
        let mut j = PolyJet::zero(order);
        j.add_term(0, 1, Rational::one());
        j
    }

    /// Builds a jet from `(i, j, c)` triples, summing repeated monomials.
    /// Fails if a nonzero term lies above `order`.
    pub fn from_terms<I>(order: u32, terms: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = (u32, u32, Rational)>,
    {
        let mut j = PolyJet::zero(order);
        for (a, b, c) in terms {
            if a + b > order && !c.is_zero() {
                return Err(Error::DegreeAboveOrder { degree: a + b, order });
            }
            j.add_term(a, b, c);
        }
        Ok(j)
    }

    /// Convenience for integer coefficients; see [`PolyJet::from_terms`].
    pub fn from_int_terms(order: u32, terms: &[(u32, u32, i64)]) -> Result<Self, Error> {
        PolyJet::from_terms(
            order,
            terms.iter().map(|&(a, b, c)| (a, b, Rational::from_integer(c.into()))),
        )
    }

    pub fn from_form(form: &BinaryForm, order: u32) -> Self {
        let k = form.degree() as u32;
        let mut j = PolyJet::zero(order);
        for (i, c) in form.coeffs().iter().enumerate() {
            j.add_term(k - i as u32, i as u32, c.clone());
        }
        j
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &Rational)> + '_ {
        self.coeffs.iter().map(|(&(i, j), c)| (i, j, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest total degree carrying a nonzero coefficient.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|&(i, j)| i + j).max()
    }

    /// Adds `c·x1^i·x2^j`; terms above the order are dropped.
    pub fn add_term(&mut self, i: u32, j: u32, c: Rational) {
        if i + j > self.order || c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry((i, j)).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&(i, j));
        }
    }

    /// Same polynomial, read as a jet of another order. Raising the order is
    /// only meaningful when the jet is the full polynomial germ.
    pub fn with_order(&self, order: u32) -> Self {
        PolyJet {
            order,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(&(i, j), _)| i + j <= order)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    pub fn homogeneous_part(&self, k: u32) -> Result<BinaryForm, Error> {
        if k > self.order {
            return Err(Error::DegreeAboveOrder { degree: k, order: self.order });
        }
        let mut form = BinaryForm::zero(k as usize);
        let mut coeffs: Vec<Rational> = form.coeffs().to_vec();
        for (i, j, c) in self.terms() {
            if i + j == k {
                coeffs[j as usize] = c.clone();
            }
        }
        form = BinaryForm::new(coeffs);
        Ok(form)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return PolyJet::zero(self.order);
        }
        PolyJet {
            order: self.order,
            coeffs: self.coeffs.iter().map(|(k, a)| (*k, a * c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.with_order(self.order.min(other.order));
        for (i, j, c) in other.terms() {
            out.add_term(i, j, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut out = PolyJet::zero(order);
        for (i1, j1, a) in self.terms() {
            for (i2, j2, b) in other.terms() {
                if i1 + j1 + i2 + j2 <= order {
                    out.add_term(i1 + i2, j1 + j2, a * b);
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = PolyJet::constant(self.order, Rational::one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn derivative_x1(&self) -> Self {
        PolyJet {
            order: self.order.saturating_sub(1),
            coeffs: self
                .terms()
                .filter(|&(i, _, _)| i > 0)
                .map(|(i, j, c)| ((i - 1, j), c * Rational::from_integer(i.into())))
                .collect(),
        }
    }

    pub fn derivative_x2(&self) -> Self {
        PolyJet {
            order: self.order.saturating_sub(1),
            coeffs: self
                .terms()
                .filter(|&(_, j, _)| j > 0)
                .map(|(i, j, c)| ((i, j - 1), c * Rational::from_integer(j.into())))
                .collect(),
        }
    }

    /// `self ∘ map`, truncated to the smaller of the two orders.
    pub fn substitute(&self, map: &PolyMap2) -> PolyJet {
        let order = self.order.min(map.order());
        let (max_i, max_j) = self
            .coeffs
            .keys()
            .fold((0, 0), |(a, b), &(i, j)| (a.max(i), b.max(j)));
        let c1 = map.comp1.with_order(order);
        let c2 = map.comp2.with_order(order);
        let powers = |base: &PolyJet, n: u32| {
            let mut v = vec![PolyJet::constant(order, Rational::one())];
            for k in 1..=n as usize {
                let next = v[k - 1].mul(base);
                v.push(next);
            }
            v
        };
        let p1 = powers(&c1, max_i);
        let p2 = powers(&c2, max_j);
        let mut out = PolyJet::zero(order);
        for (i, j, c) in self.terms() {
            let term = p1[i as usize].mul(&p2[j as usize]);
            for (a, b, t) in term.terms() {
                out.add_term(a, b, t * c);
            }
        }
        out
    }

    pub fn eval_f64(&self, x1: f64, x2: f64) -> f64 {
        self.terms()
            .map(|(i, j, c)| to_f64(c) * powi(x1, i as usize) * powi(x2, j as usize))
            .sum()
    }

    pub fn eval(&self, x1: &Rational, x2: &Rational) -> Rational {
        self.terms()
            .map(|(i, j, c)| c * num_traits::pow(x1.clone(), i as usize) * num_traits::pow(x2.clone(), j as usize))
            .sum()
    }

    /// True when every coefficient of total degree at most `order` agrees.
    pub fn agrees_to(&self, other: &Self, order: u32) -> bool {
        let low = |j: &PolyJet| j.with_order(order.min(j.order)).coeffs;
        low(self) == low(other)
    }
}

impl fmt::Display for PolyJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0 + O({})", self.order + 1);
        }
        let mut sorted: Vec<_> = self.terms().collect();
        sorted.sort_by_key(|&(i, j, _)| (i + j, core::cmp::Reverse(i)));
        for (n, (i, j, c)) in sorted.into_iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            if i > 0 {
                write!(f, "*x1^{i}")?;
            }
            if j > 0 {
                write!(f, "*x2^{j}")?;
            }
        }
        Ok(())
    }
}

pub type Matrix2 = [[Rational; 2]; 2];

/// A polynomial map `(x1, x2) ↦ (comp1, comp2)` fixing the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMap2 {
    comp1: PolyJet,
    comp2: PolyJet,
}

impl PolyMap2 {
    pub fn new(comp1: PolyJet, comp2: PolyJet) -> Result<Self, Error> {
        if !comp1.coeff(0, 0).is_zero() || !comp2.coeff(0, 0).is_zero() {
            return Err(Error::ConstantTerm);
        }
        Ok(PolyMap2 { comp1, comp2 })
    }

    pub fn identity(order: u32) -> Self {
        PolyMap2 { comp1: PolyJet::x1(order), comp2: PolyJet::x2(order) }
    }

    /// `(x1, x2) ↦ (m00·x1 + m01·x2, m10·x1 + m11·x2)`.
    pub fn linear(m: &Matrix2, order: u32) -> Self {
        let row = |r: &[Rational; 2]| {
            let mut j = PolyJet::zero(order);
            j.add_term(1, 0, r[0].clone());
            j.add_term(0, 1, r[1].clone());
            j
        };
        PolyMap2 { comp1: row(&m[0]), comp2: row(&m[1]) }
    }

    pub fn comp1(&self) -> &PolyJet {
        &self.comp1
    }

    pub fn comp2(&self) -> &PolyJet {
        &self.comp2
    }

    pub fn order(&self) -> u32 {
        self.comp1.order.min(self.comp2.order)
    }

    pub fn linear_part(&self) -> Matrix2 {
        [
            [self.comp1.coeff(1, 0), self.comp1.coeff(0, 1)],
            [self.comp2.coeff(1, 0), self.comp2.coeff(0, 1)],
        ]
    }

    pub fn linear_determinant(&self) -> Rational {
        let m = self.linear_part();
        &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
    }

    pub fn is_invertible_linear_part(&self) -> bool {
        !self.linear_determinant().is_zero()
    }

    pub fn is_linear(&self) -> bool {
        [&self.comp1, &self.comp2]
            .iter()
            .all(|c| c.terms().all(|(i, j, _)| i + j == 1))
    }

    pub fn invert_linear(&self) -> Result<PolyMap2, Error> {
        if !self.is_linear() {
            return Err(Error::NotLinear);
        }
        let det = self.linear_determinant();
        if det.is_zero() {
            return Err(Error::SingularLinearMap);
        }
        let [[a, b], [c, d]] = self.linear_part();
        let inv = [[&d / &det, -&b / &det], [-&c / &det, &a / &det]];
        Ok(PolyMap2::linear(&inv, self.order()))
    }

    /// `self ∘ inner`: substituting with the result equals substituting with
    /// `self` and then with `inner`.
    pub fn compose(&self, inner: &PolyMap2) -> PolyMap2 {
        PolyMap2 {
            comp1: self.comp1.substitute(inner),
            comp2: self.comp2.substitute(inner),
        }
    }

    pub fn eval_f64(&self, x: [f64; 2]) -> [f64; 2] {
        [self.comp1.eval_f64(x[0], x[1]), self.comp2.eval_f64(x[0], x[1])]
    }
}

/// The kinds of coordinate change used by the reductions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepKind {
    /// Linear change sending the cube root of `p3` to `x2`.
    RotateP3,
    /// `x1 ↦ x1 - s·x2`, removing `x1³x2` on the E6 branch.
    ShearE6,
    /// `x2 ↦ x2 - k·x1²`, removing `x1⁵` on the E7 branch.
    QShearE7,
    /// `x1 ↦ x1 - s·x2`, removing `x1²x2²` on the E7 branch.
    ShearE7b,
    /// `x2 ↦ x2 - k·x1²`, removing `x1²x2²` on the E8 branch.
    QShearE8,
    /// `x1 ↦ x1 - s·x2`, removing `x1⁴x2` on the E8 branch.
    ShearE8b,
    /// `x2 ↦ x2 + g(x1)` along a solution curve.
    TranslateBranch,
}

impl StepKind {
    pub const ALL: [StepKind; 7] = [
        StepKind::RotateP3,
        StepKind::ShearE6,
        StepKind::QShearE7,
        StepKind::ShearE7b,
        StepKind::QShearE8,
        StepKind::ShearE8b,
        StepKind::TranslateBranch,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StepKind::RotateP3 => "rotate_p3",
            StepKind::ShearE6 => "shear_E6",
            StepKind::QShearE7 => "qshear_E7",
            StepKind::ShearE7b => "shear_E7b",
            StepKind::QShearE8 => "qshear_E8",
            StepKind::ShearE8b => "shear_E8b",
            StepKind::TranslateBranch => "translate_branch",
        }
    }

    pub fn parse(s: &str) -> Option<StepKind> {
        StepKind::ALL.into_iter().find(|k| k.as_str() == s)
    }
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One recorded coordinate change: the next jet is `jet.substitute(&map)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformStep {
    pub kind: StepKind,
    pub map: PolyMap2,
    pub parameters: Vec<(String, Rational)>,
}

impl TransformStep {
    pub fn apply(&self, jet: &PolyJet) -> PolyJet {
        jet.substitute(&self.map)
    }
}

/// Applies the steps in order.
pub fn replay(jet: &PolyJet, steps: &[TransformStep]) -> PolyJet {
    steps.iter().fold(jet.clone(), |j, s| s.apply(&j))
}

/// Maps a point of the final coordinates back to the original ones.
pub fn pull_back_point(steps: &[TransformStep], x: [f64; 2]) -> [f64; 2] {
    steps.iter().rev().fold(x, |p, s| s.map.eval_f64(p))
}

/// `x1 ↦ x1 - s·x2`.
pub(crate) fn shear_x1(s: &Rational, order: u32) -> PolyMap2 {
    PolyMap2::linear(
        &[[Rational::one(), -s], [Rational::zero(), Rational::one()]],
        order,
    )
}

/// `x2 ↦ x2 - k·x1²`.
pub(crate) fn quadratic_shear_x2(k: &Rational, order: u32) -> PolyMap2 {
    let mut c2 = PolyJet::x2(order);
    c2.add_term(2, 0, -k);
    PolyMap2 { comp1: PolyJet::x1(order), comp2: c2 }
}

/// `x2 ↦ x2 + g(x1)`, `g` given by ascending coefficients with `g(0) = 0`.
pub(crate) fn translate_x2(g: &[Rational], order: u32) -> PolyMap2 {
    let mut c2 = PolyJet::x2(order);
    for (k, c) in g.iter().enumerate().skip(1) {
        c2.add_term(k as u32, 0, c.clone());
    }
    debug_assert!(g.first().is_none_or(Zero::is_zero));
    PolyMap2 { comp1: PolyJet::x1(order), comp2: c2 }
}
