//! Reduction to pre-normal form by explicit shears.
//!
//! Each reduction expects the jet after the `rotate_p3` step, so that
//! `p3 = c·x2³`. The cube coefficient `c` is never normalized, since that
//! would need a cube root; it is resolved in the numeric charts.
//!
//! * E6: `x1 ↦ x1 - c1/(4c0)·x2` removes `x1³x2`.
//! * E7: `x2 ↦ x2 - (b0/c1)·x1²` removes `x1⁵`, then
//!   `x1 ↦ x1 - c̃2/(3c1)·x2` removes `x1²x2²`.
//! * E8: `x2 ↦ x2 - c2/(3c)·x1²` removes `x1²x2²` (leaving the `x1⁵`
//!   coefficient `d0` alone), then `x1 ↦ x1 - d1/(5d0)·x2` removes `x1⁴x2`.
//!
//! On the E7 branch the jet is further translated along `ψ` and along the
//! zero branch `x2 = x1³·w(x1)` so that it takes the shape
//! `B·x2³ + x2·x1³·B1` with `B1(0, 0) ≠ 0`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::classify::{Certificate, Verdict};
use crate::error::Error;
use crate::forms::BinaryForm;
use crate::jet::{quadratic_shear_x2, shear_x1, translate_x2, PolyJet, StepKind, TransformStep};
use crate::rational::{int, Rational};
use crate::series::{decompose, eval_on_graph, PowerSeries1};

fn param(name: &str, value: &Rational) -> (String, Rational) {
    (String::from(name), value.clone())
}

/// The cube coefficient `c`, checking `p3 = c·x2³`.
fn cube_coefficient(jet: &PolyJet) -> Result<Rational, Error> {
    let p3 = jet.homogeneous_part(3)?;
    let c = p3.coeff(3).clone();
    if c.is_zero() || p3 != BinaryForm::monomial(3, 3, c.clone()) {
        return Err(Error::pre("jet is not rotated so that p3 = c*x2^3"));
    }
    Ok(c)
}

pub fn reduce_e6(jet: &PolyJet) -> Result<(TransformStep, PolyJet), Error> {
    cube_coefficient(jet)?;
    let c0 = jet.coeff(4, 0);
    if c0.is_zero() {
        return Err(Error::pre("E6 reduction requires Res(p3,p4) != 0"));
    }
    let s = jet.coeff(3, 1) / (int(4) * &c0);
    let step = TransformStep {
        kind: StepKind::ShearE6,
        map: shear_x1(&s, jet.order()),
        parameters: vec![param("s", &s)],
    };
    let out = step.apply(jet);
    if !out.coeff(3, 1).is_zero() || out.coeff(4, 0) != c0 {
        return Err(Error::internal("E6 shear did not clear x1^3 x2"));
    }
    Ok((step, out))
}

pub fn reduce_e7(jet: &PolyJet) -> Result<(Vec<TransformStep>, PolyJet), Error> {
    cube_coefficient(jet)?;
    if !jet.coeff(4, 0).is_zero() {
        return Err(Error::pre("E7 reduction requires a common root of p3 and p4"));
    }
    let c1 = jet.coeff(3, 1);
    if c1.is_zero() {
        return Err(Error::pre("E7 reduction requires simple common factor"));
    }
    let k = jet.coeff(5, 0) / &c1;
    let first = TransformStep {
        kind: StepKind::QShearE7,
        map: quadratic_shear_x2(&k, jet.order()),
        parameters: vec![param("k", &k)],
    };
    let mid = first.apply(jet);
    if (0..=5).any(|i| !mid.coeff(i, 0).is_zero()) {
        return Err(Error::internal("E7 quadratic shear left a pure x1 term of degree <= 5"));
    }
    let s = mid.coeff(2, 2) / (int(3) * &c1);
    let second = TransformStep {
        kind: StepKind::ShearE7b,
        map: shear_x1(&s, jet.order()),
        parameters: vec![param("s", &s)],
    };
    let out = second.apply(&mid);
    if !out.coeff(2, 2).is_zero() || out.coeff(3, 1) != c1 {
        return Err(Error::internal("E7 linear shear did not clear x1^2 x2^2"));
    }
    Ok((vec![first, second], out))
}

pub fn reduce_e8(jet: &PolyJet) -> Result<(Vec<TransformStep>, PolyJet), Error> {
    let c = cube_coefficient(jet)?;
    if !jet.coeff(4, 0).is_zero() || !jet.coeff(3, 1).is_zero() {
        return Err(Error::pre("E8 reduction requires a double common root of p3 and p4"));
    }
    let k = jet.coeff(2, 2) / (int(3) * &c);
    let first = TransformStep {
        kind: StepKind::QShearE8,
        map: quadratic_shear_x2(&k, jet.order()),
        parameters: vec![param("k", &k)],
    };
    let mid = first.apply(jet);
    let d0 = mid.coeff(5, 0);
    if d0 != jet.coeff(5, 0) {
        return Err(Error::internal("E8 quadratic shear changed the x1^5 coefficient"));
    }
    if d0.is_zero() {
        return Err(Error::pre("not E8: Res(p3,p5) = 0"));
    }
    if !mid.coeff(2, 2).is_zero() {
        return Err(Error::internal("E8 quadratic shear did not clear x1^2 x2^2"));
    }
    let s = mid.coeff(4, 1) / (int(5) * &d0);
    let second = TransformStep {
        kind: StepKind::ShearE8b,
        map: shear_x1(&s, jet.order()),
        parameters: vec![param("s", &s)],
    };
    let out = second.apply(&mid);
    if !out.coeff(4, 1).is_zero() || out.coeff(5, 0) != d0 {
        return Err(Error::internal("E8 linear shear did not clear x1^4 x2"));
    }
    Ok((vec![first, second], out))
}

/// `x2 ↦ x2 + ψ(x1)`: afterwards the jet has no `x2²` terms.
pub fn translate_psi(jet: &PolyJet, psi: &PowerSeries1) -> (TransformStep, PolyJet) {
    let parameters = psi
        .coeffs()
        .iter()
        .enumerate()
        .skip(2)
        .map(|(k, c)| (format!("psi_{k}"), c.clone()))
        .collect();
    let step = TransformStep {
        kind: StepKind::TranslateBranch,
        map: translate_x2(psi.coeffs(), jet.order()),
        parameters,
    };
    let out = step.apply(jet);
    (step, out)
}

/// Checks the shape `b·x2³ + x2·x1³·b1(x1) + x1⁶·b0(x1)`.
fn e7_preform_violation(jet: &PolyJet) -> Option<&'static str> {
    for (i, j, _) in jet.terms() {
        match j {
            0 if i < 6 => return Some("pure x1 term of degree below 6"),
            1 if i < 3 => return Some("x2*x1^k term with k < 3"),
            2 => return Some("x2^2 term present"),
            _ => {}
        }
    }
    None
}

/// Solves `φ(x1, x1³·w(x1)) ≡ 0` order by order and translates
/// `x2 ↦ x2 + x1³·w(x1)`. The result has no pure `x1` terms up to `order`.
pub fn zero_branch(
    jet: &PolyJet,
    order: u32,
) -> Result<(PowerSeries1, TransformStep, PolyJet), Error> {
    if let Some(why) = e7_preform_violation(jet) {
        return Err(Error::Precondition(format!("jet is not in E7 pre-form: {why}")));
    }
    let b1_0 = jet.coeff(3, 1);
    if b1_0.is_zero() {
        return Err(Error::pre("zero branch requires b1(0) != 0"));
    }
    if order < 6 {
        return Err(Error::OrderTooLow { needed: 6, got: order });
    }
    let phi = jet.with_order(order);
    let mut w = PowerSeries1::zero(order - 6);
    let mut along = PowerSeries1::zero(order);
    for k in 0..=order - 6 {
        // w_k enters the x1^(6+k) coefficient only through x2·x1³·b1(0)
        let r = eval_on_graph(&phi, &along, 6 + k);
        let wk = -r.coeff(6 + k) / &b1_0;
        along.set(k + 3, wk.clone());
        w.set(k, wk);
    }
    let parameters = w
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| (format!("w_{k}"), c.clone()))
        .collect();
    let step = TransformStep {
        kind: StepKind::TranslateBranch,
        map: translate_x2(along.coeffs(), phi.order()),
        parameters,
    };
    let out = step.apply(&phi);
    if (0..=order).any(|i| !out.coeff(i, 0).is_zero()) {
        return Err(Error::internal("zero branch left a pure x1 term"));
    }
    if out.coeff(3, 1) != b1_0 {
        return Err(Error::internal("zero branch changed B1(0,0)"));
    }
    Ok((w, step, out))
}

/// The full reduction of a classified germ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub verdict: Verdict,
    /// Rotation first, then the type-specific steps.
    pub steps: Vec<TransformStep>,
    /// Jet after the shears of the verdict's branch.
    pub prenormal: PolyJet,
    /// Final jet; differs from `prenormal` only on the E7 branch.
    pub jet: PolyJet,
    pub psi: Option<PowerSeries1>,
    pub zero_branch: Option<PowerSeries1>,
    /// Working order used for the series, at most the jet order.
    pub series_order: u32,
}

pub fn reduce(
    verdict: Verdict,
    cert: &Certificate,
    series_order: u32,
) -> Result<Reduction, Error> {
    if !verdict.is_e_type() {
        return Err(Error::NotEType);
    }
    let jet = &cert.normalized_jet;
    let w = series_order.min(jet.order());
    let mut steps = cert.transform_chain.clone();
    let mut red = Reduction {
        verdict,
        steps: Vec::new(),
        prenormal: jet.clone(),
        jet: jet.clone(),
        psi: None,
        zero_branch: None,
        series_order: w,
    };
    match verdict {
        Verdict::E6(_) => {
            let (step, out) = reduce_e6(jet)?;
            steps.push(step);
            red.prenormal = out.clone();
            red.jet = out;
        }
        Verdict::E8 => {
            let (s, out) = reduce_e8(jet)?;
            steps.extend(s);
            red.prenormal = out.clone();
            red.jet = out;
        }
        Verdict::E7 => {
            let (s, out) = reduce_e7(jet)?;
            steps.extend(s);
            red.prenormal = out.clone();
            let psi = decompose(&out, w)?.psi;
            let (t, shifted) = translate_psi(&out, &psi);
            steps.push(t);
            if let Some(why) = e7_preform_violation(&shifted) {
                return Err(Error::Internal(format!("E7 pre-form check failed: {why}")));
            }
            let (wser, t2, last) = zero_branch(&shifted, w)?;
            steps.push(t2);
            red.jet = last;
            red.psi = Some(psi);
            red.zero_branch = Some(wser);
        }
        _ => unreachable!(),
    }
    red.steps = steps;
    Ok(red)
}
