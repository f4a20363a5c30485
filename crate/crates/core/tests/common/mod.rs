//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use ejet_core::forms::BinaryForm;
use ejet_core::rational::{rat, to_f64};
use ejet_core::{PolyJet, PolyMap2, Rational};
use num_complex::Complex64;
use num_traits::{One, Zero};
use proptest::prelude::*;

/// Small rationals, zero about a third of the time.
pub fn small_rational() -> impl Strategy<Value = Rational> {
    prop_oneof![
        1 => Just(Rational::zero()),
        2 => (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d)),
    ]
}

pub fn nonzero_rational() -> impl Strategy<Value = Rational> {
    ((1i64..=6), (1i64..=4), any::<bool>())
        .prop_map(|(n, d, neg)| if neg { rat(-n, d) } else { rat(n, d) })
}

pub fn form(degree: usize) -> impl Strategy<Value = BinaryForm> {
    proptest::collection::vec(small_rational(), degree + 1).prop_map(BinaryForm::new)
}

pub fn nonzero_form(degree: usize) -> impl Strategy<Value = BinaryForm> {
    form(degree).prop_filter("zero form", |f| !f.is_zero())
}

/// Integer matrices with entries in -3..=3 and nonzero determinant.
pub fn gl2() -> impl Strategy<Value = [[Rational; 2]; 2]> {
    proptest::array::uniform4(-3i64..=3)
        .prop_filter("singular", |m| m[0] * m[3] != m[1] * m[2])
        .prop_map(|m| [[rat(m[0], 1), rat(m[1], 1)], [rat(m[2], 1), rat(m[3], 1)]])
}

/// Jets with all terms of degree 3..=order.
pub fn critical_jet(order: u32) -> impl Strategy<Value = PolyJet> {
    let keys: Vec<(u32, u32)> = (3..=order)
        .flat_map(|d| (0..=d).map(move |j| (d - j, j)))
        .collect();
    proptest::collection::vec(small_rational(), keys.len()).prop_map(move |cs| {
        PolyJet::from_terms(order, keys.iter().zip(cs).map(|(&(i, j), c)| (i, j, c))).unwrap()
    })
}

/// `p(s, 1)` as ascending coefficients.
fn dehomog_x2(p: &BinaryForm) -> Vec<Rational> {
    let mut v: Vec<Rational> = p.coeffs().iter().rev().cloned().collect();
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn poly_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    let lead = b.last().unwrap().clone();
    while r.len() >= b.len() {
        let q = r.last().unwrap().clone() / &lead;
        let shift = r.len() - b.len();
        for (k, c) in b.iter().enumerate() {
            r[shift + k] -= &q * c;
        }
        r.pop();
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r
}

/// Textbook Euclid on `p(s, 1)` and `q(s, 1)`; `(1, 0)` is handled apart.
pub fn share_projective_root(p: &BinaryForm, q: &BinaryForm) -> bool {
    if p.coeff(0).is_zero() && q.coeff(0).is_zero() {
        return true;
    }
    let (mut a, mut b) = (dehomog_x2(p), dehomog_x2(q));
    while !b.is_empty() {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    a.len() >= 2
}

/// Roots of an ascending complex polynomial by Durand–Kerner iteration.
pub fn complex_roots(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let lead = c[n];
    let monic: Vec<Complex64> = c.iter().map(|x| x / lead).collect();
    let eval = |z: Complex64| monic.iter().rev().fold(Complex64::zero(), |acc, a| acc * z + a);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32)).collect();
    for _ in 0..2000 {
        let mut delta: f64 = 0.0;
        for i in 0..n {
            let mut den = Complex64::one();
            for j in 0..n {
                if i != j {
                    den *= roots[i] - roots[j];
                }
            }
            let step = eval(roots[i]) / den;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-17 {
            break;
        }
    }
    roots
}

fn eval_at(q: &BinaryForm, x1: Complex64, x2: Complex64) -> Complex64 {
    let k = q.degree();
    q.coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| x1.powu((k - i) as u32) * x2.powu(i as u32) * to_f64(c))
        .sum()
}

/// `p0ⁿ·∏ q(sᵢ, 1)` over the roots `sᵢ` of `p(s, 1)`, where `p0` is the
/// `x1^m` coefficient; the roles swap (with sign `(-1)^{mn}`) when `p0 = 0`.
pub fn product_over_roots(p: &BinaryForm, q: &BinaryForm) -> f64 {
    let (m, n) = (p.degree(), q.degree());
    let side = |f: &BinaryForm, g: &BinaryForm, e: usize| -> f64 {
        let cs: Vec<Complex64> =
            f.coeffs().iter().rev().map(|c| Complex64::new(to_f64(c), 0.0)).collect();
        let roots = if cs.len() > 1 { complex_roots(&cs) } else { Vec::new() };
        let prod: Complex64 = roots.iter().map(|&s| eval_at(g, s, Complex64::one())).product();
        to_f64(f.coeff(0)).powi(e as i32) * prod.re
    };
    if !p.coeff(0).is_zero() {
        side(p, q, n)
    } else if !q.coeff(0).is_zero() {
        let sign = if (m * n) % 2 == 0 { 1.0 } else { -1.0 };
        sign * side(q, p, m)
    } else {
        0.0
    }
}

/// Dense untruncated bivariate polynomial, `c[i][j]` for `x1^i x2^j`.
#[derive(Clone, Debug)]
pub struct Dense(pub Vec<Vec<Rational>>);

impl Dense {
    pub fn constant(c: Rational, size: usize) -> Self {
        let mut d = Dense(vec![vec![Rational::zero(); size]; size]);
        d.0[0][0] = c;
        d
    }

    pub fn from_jet(j: &PolyJet, size: usize) -> Self {
        let mut d = Dense::constant(Rational::zero(), size);
        for (i, k, c) in j.terms() {
            d.0[i as usize][k as usize] = c.clone();
        }
        d
    }

    pub fn mul(&self, o: &Dense) -> Dense {
        let size = self.0.len();
        let mut out = Dense::constant(Rational::zero(), size);
        for (i1, row) in self.0.iter().enumerate() {
            for (j1, a) in row.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (i2, row2) in o.0.iter().enumerate() {
                    for (j2, b) in row2.iter().enumerate() {
                        if !b.is_zero() {
                            out.0[i1 + i2][j1 + j2] += a * b;
                        }
                    }
                }
            }
        }
        out
    }

    pub fn add(&mut self, o: &Dense, scale: &Rational) {
        for (i, row) in o.0.iter().enumerate() {
            for (j, b) in row.iter().enumerate() {
                self.0[i][j] += b * scale;
            }
        }
    }
}

/// Full composition `jet ∘ map` with no truncation at any stage.
pub fn slow_substitute(jet: &PolyJet, map: &PolyMap2, size: usize) -> Dense {
    let u = Dense::from_jet(map.comp1(), size);
    let v = Dense::from_jet(map.comp2(), size);
    let mut out = Dense::constant(Rational::zero(), size);
    for (i, j, c) in jet.terms() {
        let mut term = Dense::constant(Rational::one(), size);
        for _ in 0..i {
            term = term.mul(&u);
        }
        for _ in 0..j {
            term = term.mul(&v);
        }
        out.add(&term, c);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    E6,
    E7,
    E8,
}

/// A germ of the given type in adapted coordinates: `c·x2³` in degree 3,
/// the type's defining coefficient forced nonzero and the coefficients the
/// type forbids forced zero; everything else random up to `order`.
pub fn e_germ(kind: Kind, order: u32) -> impl Strategy<Value = PolyJet> {
    (critical_jet(order), nonzero_rational(), nonzero_rational()).prop_map(move |(j, c, lead)| {
        let forced: &[(u32, u32)] = match kind {
            Kind::E6 => &[(4, 0)],
            Kind::E7 => &[(4, 0), (3, 1)],
            Kind::E8 => &[(4, 0), (3, 1), (5, 0)],
        };
        let mut out = PolyJet::zero(order);
        for (i, k, v) in j.terms() {
            if i + k > 3 && !forced.contains(&(i, k)) {
                out.add_term(i, k, v.clone());
            }
        }
        out.add_term(0, 3, c);
        let key = match kind {
            Kind::E6 => (4, 0),
            Kind::E7 => (3, 1),
            Kind::E8 => (5, 0),
        };
        out.add_term(key.0, key.1, lead);
        out
    })
}

/// `e_germ` moved by a random invertible linear map.
pub fn hidden_e_germ(kind: Kind, order: u32) -> impl Strategy<Value = PolyJet> {
    (e_germ(kind, order), gl2()).prop_map(move |(j, a)| j.substitute(&PolyMap2::linear(&a, order)))
}
