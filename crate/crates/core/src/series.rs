//! Formal splitting of a germ along the curve `∂₂²φ = 0`.
//!
//! For a jet with `∂₂²φ(0) = ∂₁∂₂²φ(0) = 0` and `∂₂³φ(0) ≠ 0` there is a
//! unique series `ψ` with `ψ(0) = ψ'(0) = 0` and `∂₂²φ(x1, ψ(x1)) ≡ 0`, and
//!
//! ```text
//! φ = b0(x1) + b1(x1)·(x2 - ψ(x1)) + B(x1, x2)·(x2 - ψ(x1))³
//! ```
//!
//! with `b0 = φ(x1, ψ)`, `b1 = ∂₂φ(x1, ψ)` and `B(0, 0) ≠ 0`. Everything is
//! computed exactly up to a working order `W`: `ψ`, `b0`, `b1` modulo
//! `x1^(W+1)` and `B` to total degree `W - 3`.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::Error;
use crate::jet::PolyJet;
use crate::order::Order;
use crate::rational::{to_f64, Rational};

/// Univariate series `a_0 + a_1·x + … + a_W·x^W mod x^(W+1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSeries1 {
    coeffs: Vec<Rational>,
}

impl PowerSeries1 {
    pub fn zero(order: u32) -> Self {
        PowerSeries1 { coeffs: vec![Rational::zero(); order as usize + 1] }
    }

    /// Order is `coeffs.len() - 1`. Panics on an empty list.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least one coefficient");
        PowerSeries1 { coeffs }
    }

    pub fn order(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: u32) -> &Rational {
        &self.coeffs[k as usize]
    }

    pub fn set(&mut self, k: u32, c: Rational) {
        self.coeffs[k as usize] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, order: u32) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order as usize + 1, Rational::zero());
        PowerSeries1 { coeffs }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PowerSeries1 { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().min(other.coeffs.len());
        PowerSeries1 { coeffs: (0..n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().min(other.coeffs.len());
        PowerSeries1 { coeffs: (0..n).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.coeffs.len().min(other.coeffs.len());
        let mut out = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n - i) {
                out[i + j] += a * b;
            }
        }
        PowerSeries1 { coeffs: out }
    }

    /// `self / x^k`, or `None` if a coefficient below `k` is nonzero. The
    /// order drops by `k`.
    pub fn shift_down(&self, k: u32) -> Option<Self> {
        let k = k as usize;
        if k >= self.coeffs.len() || self.coeffs[..k].iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(PowerSeries1 { coeffs: self.coeffs[k..].to_vec() })
    }

    /// `x^k · self`, same order (top coefficients fall off).
    pub fn shift_up(&self, k: u32) -> Self {
        let n = self.coeffs.len();
        let mut coeffs = vec![Rational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            if i + (k as usize) < n {
                coeffs[i + k as usize] = c.clone();
            }
        }
        PowerSeries1 { coeffs }
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + to_f64(c))
    }

    /// The series as a jet in `x1` alone.
    pub fn to_jet(&self, order: u32) -> PolyJet {
        let mut j = PolyJet::zero(order);
        for (k, c) in self.coeffs.iter().enumerate() {
            j.add_term(k as u32, 0, c.clone());
        }
        j
    }
}

/// Index of the first nonzero coefficient, or infinite when all computed
/// coefficients vanish.
pub fn vanishing_order(s: &PowerSeries1) -> Order {
    s.coeffs
        .iter()
        .position(|c| !c.is_zero())
        .map_or(Order::Infinite, |k| Order::Finite(k as u32))
}

/// `jet(x1, s(x1)) mod x1^(order+1)`, reading the jet as a polynomial.
pub fn eval_on_graph(jet: &PolyJet, s: &PowerSeries1, order: u32) -> PowerSeries1 {
    let s = s.truncate(order);
    let max_j = jet.terms().map(|(_, j, _)| j).max().unwrap_or(0);
    let mut rows = vec![PowerSeries1::zero(order); max_j as usize + 1];
    for (i, j, c) in jet.terms() {
        if i <= order {
            rows[j as usize].coeffs[i as usize] += c;
        }
    }
    // Horner in x2
    let mut acc = PowerSeries1::zero(order);
    for row in rows.iter().rev() {
        acc = acc.mul(&s).add(row);
    }
    acc
}

fn check_psi_hypotheses(jet: &PolyJet) -> Result<Rational, Error> {
    if !jet.coeff(0, 2).is_zero() {
        return Err(Error::PsiHypotheses("d2^2 phi(0) != 0"));
    }
    if !jet.coeff(1, 2).is_zero() {
        return Err(Error::PsiHypotheses("d1 d2^2 phi(0) != 0"));
    }
    let c03 = jet.coeff(0, 3);
    if c03.is_zero() {
        return Err(Error::PsiHypotheses("d2^3 phi(0) = 0"));
    }
    Ok(c03)
}

/// The series `ψ` with `∂₂²φ(x1, ψ(x1)) ≡ 0 mod x1^(W+1)`, `ψ(0) = ψ'(0) = 0`.
pub fn solve_psi(jet: &PolyJet, order: u32) -> Result<PowerSeries1, Error> {
    check_psi_hypotheses(jet)?;
    let g = jet.with_order(jet.order().max(order)).derivative_x2().derivative_x2();
    // ∂/∂x2 of g at the origin, i.e. ∂₂³φ(0)
    let pivot = g.coeff(0, 1);
    let mut psi = PowerSeries1::zero(order);
    for k in 2..=order {
        let r = eval_on_graph(&g, &psi, k);
        psi.set(k, -r.coeff(k) / &pivot);
    }
    if !eval_on_graph(&g, &psi, order).is_zero() {
        return Err(Error::internal("psi does not annihilate d2^2 phi"));
    }
    Ok(psi)
}

/// `F / (x2 - ψ(x1))` for a jet `F` vanishing on the graph of `ψ`. The
/// quotient has order one less than `F`.
pub fn divide_by_graph(f: &PolyJet, psi: &PowerSeries1) -> Result<PolyJet, Error> {
    let n = f.order();
    if n == 0 {
        return Err(Error::internal("cannot divide an order-0 jet"));
    }
    debug_assert!(psi.coeffs.iter().take(2).all(Zero::is_zero));
    let psi = psi.truncate(n);
    let max_j = f.terms().map(|(_, j, _)| j).max().unwrap_or(0) as usize;
    let mut rows = vec![PowerSeries1::zero(n); max_j + 1];
    for (i, j, c) in f.terms() {
        rows[j as usize].coeffs[i as usize] = c.clone();
    }
    // synthetic division in x2 with coefficients in ℚ[[x1]]
    let mut quot = vec![PowerSeries1::zero(n); max_j.max(1)];
    let mut carry = PowerSeries1::zero(n);
    for j in (0..=max_j).rev() {
        let v = rows[j].add(&psi.mul(&carry));
        if j == 0 {
            if !v.is_zero() {
                return Err(Error::internal("division by x2 - psi left a remainder"));
            }
        } else {
            quot[j - 1] = v.clone();
            carry = v;
        }
    }
    let mut q = PolyJet::zero(n - 1);
    for (j, row) in quot.iter().enumerate() {
        for (i, c) in row.coeffs.iter().enumerate() {
            q.add_term(i as u32, j as u32, c.clone());
        }
    }
    Ok(q)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    /// Working order `W`.
    pub order: u32,
    pub psi: PowerSeries1,
    pub b0: PowerSeries1,
    pub b1: PowerSeries1,
    /// The cubic cofactor, exact to total degree `W - 3`.
    pub b: PolyJet,
    pub ord_psi: Order,
    pub ord_b0: Order,
    pub ord_b1: Order,
    pub b_at_origin: Rational,
}

impl Decomposition {
    /// `b0 + b1·(x2 - ψ) + B·(x2 - ψ)³` as a jet of order `W`.
    pub fn reconstruct(&self) -> PolyJet {
        let w = self.order;
        let d = PolyJet::x2(w).sub(&self.psi.to_jet(w));
        let b = self.b.with_order(w);
        self.b0
            .to_jet(w)
            .add(&self.b1.to_jet(w).mul(&d))
            .add(&b.mul(&d.pow(3)))
    }
}

pub fn decompose(jet: &PolyJet, order: u32) -> Result<Decomposition, Error> {
    if order < 3 {
        return Err(Error::OrderTooLow { needed: 3, got: order });
    }
    let psi = solve_psi(jet, order)?;
    let phi = jet.with_order(order);
    let b0 = eval_on_graph(&phi, &psi, order);
    let b1 = eval_on_graph(&phi.derivative_x2(), &psi, order);

    let d = PolyJet::x2(order).sub(&psi.to_jet(order));
    let rest = phi.sub(&b0.to_jet(order)).sub(&b1.to_jet(order).mul(&d));
    let mut b = rest;
    for _ in 0..3 {
        b = divide_by_graph(&b, &psi)?;
    }
    let b_at_origin = b.coeff(0, 0);
    if b_at_origin != jet.coeff(0, 3) {
        return Err(Error::internal("B(0,0) differs from the x2^3 coefficient"));
    }
    let dec = Decomposition {
        order,
        ord_psi: vanishing_order(&psi),
        ord_b0: vanishing_order(&b0),
        ord_b1: vanishing_order(&b1),
        psi,
        b0,
        b1,
        b,
        b_at_origin,
    };
    if dec.reconstruct() != phi {
        return Err(Error::internal("decomposition does not reconstruct the jet"));
    }
    Ok(dec)
}
