//! The E6/E7/E8 decision tree.
//!
//! Only the homogeneous parts `p3`, `p4`, `p5` drive the verdict:
//!
//! * `p3` must be `c·L³` for a real linear form `L`; otherwise the germ is
//!   outside the E series.
//! * after a linear change taking `L` to `x2`, the multiplicity of `x2` in
//!   `p4` is 0 for E6 and 1 for E7;
//! * at multiplicity ≥ 2 (or `p4 ≡ 0`) the germ is E8 exactly when `x2`
//!   does not divide `p5`, and indeterminate at this jet order otherwise.
//!
//! Common roots are detected by divisibility, which is total even when `p4`
//! vanishes. Resultants are recorded alongside and cross-checked.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::forms::{
    extract_perfect_cube, linear_factor_multiplicity, m_circle, sylvester_resultant, BinaryForm,
    LinearForm,
};
use crate::jet::{PolyJet, PolyMap2, StepKind, TransformStep};
use crate::order::Order;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Reason {
    /// `p3` is zero or not the cube of a linear form.
    CubeMultiplicity,
    /// The common root of `p3` and `p4` is at least double and also
    /// divides `p5`.
    NoCriterionApplies,
}

impl Reason {
    pub fn code(self) -> &'static str {
        match self {
            Reason::CubeMultiplicity => "m_s1_p3_ne_3",
            Reason::NoCriterionApplies => "no_criterion_applies",
        }
    }

    pub fn message(self) -> &'static str {
        match self {
            Reason::CubeMultiplicity => "m_S1(p3) != 3: outside E classification",
            Reason::NoCriterionApplies => {
                "conditions of the E6, E7 and E8 criteria all fail within the order-5 jet"
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    E6(Sign),
    E7,
    E8,
    NotEType(Reason),
    Indeterminate(Reason),
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::E6(_) => "E6",
            Verdict::E7 => "E7",
            Verdict::E8 => "E8",
            Verdict::NotEType(_) => "NotEType",
            Verdict::Indeterminate(_) => "Indeterminate",
        }
    }

    pub fn is_e_type(&self) -> bool {
        matches!(self, Verdict::E6(_) | Verdict::E7 | Verdict::E8)
    }

    pub fn reason(&self) -> Option<Reason> {
        match self {
            Verdict::NotEType(r) | Verdict::Indeterminate(r) => Some(*r),
            _ => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::E6(s) => write!(f, "E6({})", s.as_str()),
            Verdict::NotEType(r) | Verdict::Indeterminate(r) => {
                write!(f, "{}({})", self.name(), r.code())
            }
            _ => f.write_str(self.name()),
        }
    }
}

/// Everything the decision tree computed on its way to the verdict. Fields
/// past the point where the tree stopped are `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    /// `Infinite` when `p3 ≡ 0`.
    pub m_s1_p3: Order,
    pub cube_root_form: Option<LinearForm>,
    /// `c` in `p3 = c·L³`.
    pub cube_coefficient: Option<Rational>,
    /// Computed on the original `p3`, `p4`; zero when `p4 ≡ 0`.
    pub res_p3_p4: Option<Rational>,
    pub common_mult_in_p4: Option<Order>,
    pub res_p3_p5: Option<Rational>,
    pub transform_chain: Vec<TransformStep>,
    /// The input jet after `transform_chain`.
    pub normalized_jet: PolyJet,
}

pub fn check_critical_origin(jet: &PolyJet) -> bool {
    jet.terms().all(|(i, j, _)| i + j > 2)
}

/// Linear change taking `l` to `x2`, as a substitution map (old coordinates
/// in terms of new ones).
pub fn rotation_for(l: &LinearForm, order: u32) -> TransformStep {
    let l = l.normalized();
    let (a, b) = (l.a().clone(), l.b().clone());
    let m = if b.is_zero() {
        [[Rational::zero(), Rational::one()], [Rational::one(), Rational::zero()]]
    } else {
        [[Rational::one(), Rational::zero()], [-&a / &b, b.recip()]]
    };
    TransformStep {
        kind: StepKind::RotateP3,
        map: PolyMap2::linear(&m, order),
        parameters: vec![(String::from("a"), a), (String::from("b"), b)],
    }
}

/// `Res(p3, p5) ≠ 0 ⟺ L ∤ p5` for `p3 = c·L³`.
pub fn res_equivalence_check(p3: &BinaryForm, p5: &BinaryForm, l: &LinearForm) -> bool {
    let res_nonzero = !sylvester_resultant(p3, p5).is_zero();
    let coprime = linear_factor_multiplicity(l, p5) == Order::Finite(0);
    res_nonzero == coprime
}

pub fn classify(jet: &PolyJet) -> Result<(Verdict, Certificate), Error> {
    if jet.order() < 5 {
        return Err(Error::OrderTooLow { needed: 5, got: jet.order() });
    }
    if !check_critical_origin(jet) {
        return Err(Error::NotDegenerateCritical);
    }
    let p3 = jet.homogeneous_part(3)?;
    let p4 = jet.homogeneous_part(4)?;
    let p5 = jet.homogeneous_part(5)?;

    let mut cert = Certificate {
        m_s1_p3: if p3.is_zero() { Order::Infinite } else { Order::Finite(m_circle(&p3)?) },
        cube_root_form: None,
        cube_coefficient: None,
        res_p3_p4: None,
        common_mult_in_p4: None,
        res_p3_p5: None,
        transform_chain: Vec::new(),
        normalized_jet: jet.clone(),
    };

    let Some((c, l)) = extract_perfect_cube(&p3) else {
        return Ok((Verdict::NotEType(Reason::CubeMultiplicity), cert));
    };
    if cert.m_s1_p3 != Order::Finite(3) {
        return Err(Error::internal("perfect cube with m_S1(p3) != 3"));
    }
    cert.cube_root_form = Some(l.clone());
    cert.cube_coefficient = Some(c.clone());
    let res34 = sylvester_resultant(&p3, &p4);

    let rotate = rotation_for(&l, jet.order());
    let rotated = rotate.apply(jet);
    if rotated.homogeneous_part(3)? != BinaryForm::monomial(3, 3, c.clone()) {
        return Err(Error::internal("rotation did not send p3 to c*x2^3"));
    }
    cert.transform_chain.push(rotate);
    cert.normalized_jet = rotated.clone();

    let x2 = LinearForm::x2();
    let mult = linear_factor_multiplicity(&x2, &rotated.homogeneous_part(4)?);
    if res34.is_zero() != mult.at_least(1) {
        return Err(Error::internal("Res(p3,p4) disagrees with the common-factor test"));
    }
    cert.res_p3_p4 = Some(res34);
    cert.common_mult_in_p4 = Some(mult);

    let verdict = match mult {
        Order::Finite(0) => {
            let c0 = rotated.coeff(4, 0);
            Verdict::E6(if c0.is_positive() { Sign::Plus } else { Sign::Minus })
        }
        Order::Finite(1) => Verdict::E7,
        _ => {
            if !res_equivalence_check(&p3, &p5, &l) {
                return Err(Error::internal("Res(p3,p5) disagrees with the common-factor test"));
            }
            cert.res_p3_p5 = Some(sylvester_resultant(&p3, &p5));
            let p5r = rotated.homogeneous_part(5)?;
            if linear_factor_multiplicity(&x2, &p5r) == Order::Finite(0) {
                Verdict::E8
            } else {
                Verdict::Indeterminate(Reason::NoCriterionApplies)
            }
        }
    };
    Ok((verdict, cert))
}
