//! Floating-point charts onto the normal forms and their statistical check.
//!
//! The reductions stop at a jet whose coefficients are exact; the last
//! change of variables takes fourth, cube and fifth roots of unit factors
//! and therefore lives here, in `f64`. Verification runs forward: for a
//! sample `x` in the final coordinates it compares `φ(S(x))`, with `S` the
//! exact chain, against `NF(y(x))`.

use alloc::vec::Vec;

use libm::{cbrt, cos, fabs, log2, pow, sin, sqrt};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::{classify, Sign, Verdict};
use crate::error::Error;
use crate::forms::powi;
use crate::jet::{pull_back_point, PolyJet, PolyMap2, TransformStep};
use crate::normal_form::Reduction;
use crate::rational::{int, to_f64};
use crate::series::{decompose, PowerSeries1};

/// Residual maxima below this count as exact.
pub const EXACT_TOLERANCE: f64 = 1e-13;
/// Allowed shortfall of the estimated order against the expected one.
pub const ORDER_SLACK: f64 = 0.5;
/// Finite-difference step for the Jacobian at the origin.
pub const JACOBIAN_STEP: f64 = 1e-6;

/// A jet with its coefficients rounded once.
#[derive(Debug, Clone, PartialEq)]
struct F64Poly {
    terms: Vec<(usize, usize, f64)>,
}

impl F64Poly {
    fn new(jet: &PolyJet) -> Self {
        F64Poly {
            terms: jet.terms().map(|(i, j, c)| (i as usize, j as usize, to_f64(c))).collect(),
        }
    }

    fn eval(&self, x1: f64, x2: f64) -> f64 {
        self.terms.iter().map(|&(i, j, c)| c * powi(x1, i) * powi(x2, j)).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
struct F64Series(Vec<f64>);

impl F64Series {
    fn new(s: &PowerSeries1) -> Self {
        F64Series(s.coeffs().iter().map(to_f64).collect())
    }

    fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }
}

fn signed_root(x: f64, n: f64) -> f64 {
    if x < 0.0 {
        -pow(-x, 1.0 / n)
    } else {
        pow(x, 1.0 / n)
    }
}

/// `x2 - ψ(x1)` together with the radicand `b̃0 + (x2 - ψ)·b̃1` and `B`.
#[derive(Debug, Clone, PartialEq)]
struct Split {
    psi: F64Series,
    b0t: F64Series,
    b1t: F64Series,
    b: F64Poly,
}

impl Split {
    fn new(jet: &PolyJet, order: u32, m: u32) -> Result<(Self, f64, f64), Error> {
        let dec = decompose(jet, order)?;
        let b0t = dec.b0.shift_down(m).ok_or_else(|| Error::internal("b0 vanishes to too low order"))?;
        let b1t = dec.b1.shift_down(m).ok_or_else(|| Error::internal("b1 vanishes to too low order"))?;
        let lead = to_f64(b0t.coeff(0));
        let b00 = to_f64(&dec.b_at_origin);
        Ok((
            Split {
                psi: F64Series::new(&dec.psi),
                b0t: F64Series::new(&b0t),
                b1t: F64Series::new(&b1t),
                b: F64Poly::new(&dec.b),
            },
            lead,
            b00,
        ))
    }

    fn parts(&self, x: [f64; 2]) -> (f64, f64, f64) {
        let u = x[1] - self.psi.eval(x[0]);
        let rad = self.b0t.eval(x[0]) + u * self.b1t.eval(x[0]);
        (u, rad, self.b.eval(x[0], x[1]))
    }
}

/// The final root-extraction chart of a reduced germ.
#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    kind: ChartKind,
    series_order: u32,
}

#[derive(Debug, Clone, PartialEq)]
enum ChartKind {
    E6 { sign: Sign, split: Split, b0: f64, b: f64 },
    E7 { b: F64Poly, b1: F64Poly },
    E8 { split: Split, b0: f64, b: f64 },
}

impl Chart {
    pub fn new(red: &Reduction) -> Result<Chart, Error> {
        let w = red.series_order;
        let kind = match red.verdict {
            Verdict::E6(sign) => {
                let (split, b0, b) = Split::new(&red.jet, w, 4)?;
                if (b0 < 0.0) != (sign == Sign::Minus) {
                    return Err(Error::internal("E6 sign disagrees with b0"));
                }
                ChartKind::E6 { sign, split, b0, b }
            }
            Verdict::E8 => {
                let (split, b0, b) = Split::new(&red.jet, w, 5)?;
                ChartKind::E8 { split, b0, b }
            }
            Verdict::E7 => {
                // B·x2³ + x2·x1³·B1 with B1 collecting the x2 and x2² terms
                let mut b = PolyJet::zero(red.jet.order());
                let mut b1 = PolyJet::zero(red.jet.order());
                for (i, j, c) in red.jet.terms() {
                    match j {
                        0 => return Err(Error::internal("E7 jet keeps a pure x1 term")),
                        1 | 2 if i < 3 => return Err(Error::internal("E7 jet is not divisible by x1^3")),
                        1 | 2 => b1.add_term(i - 3, j - 1, c.clone()),
                        _ => b.add_term(i, j - 3, c.clone()),
                    }
                }
                if b.coeff(0, 0).is_zero() || b1.coeff(0, 0).is_zero() {
                    return Err(Error::internal("E7 unit factors vanish at the origin"));
                }
                ChartKind::E7 { b: F64Poly::new(&b), b1: F64Poly::new(&b1) }
            }
            _ => return Err(Error::NotEType),
        };
        Ok(Chart { kind, series_order: w })
    }

    pub fn series_order(&self) -> u32 {
        self.series_order
    }

    /// `None` when the even root's radicand has the wrong sign or a unit
    /// factor vanishes at `x`.
    pub fn normal_form_map(&self, x: [f64; 2]) -> Option<[f64; 2]> {
        match &self.kind {
            ChartKind::E6 { sign, split, .. } => {
                let (u, rad, b) = split.parts(x);
                if sign.as_f64() * rad <= 0.0 {
                    return None;
                }
                Some([x[0] * sqrt(sqrt(fabs(rad))), u * cbrt(b)])
            }
            ChartKind::E7 { b, b1 } => {
                let cb = cbrt(b.eval(x[0], x[1]));
                if cb == 0.0 {
                    return None;
                }
                Some([x[0] * cbrt(b1.eval(x[0], x[1]) / cb), x[1] * cb])
            }
            ChartKind::E8 { split, .. } => {
                let (u, rad, b) = split.parts(x);
                Some([x[0] * signed_root(rad, 5.0), u * cbrt(b)])
            }
        }
    }

    pub fn normal_form(&self, y: [f64; 2]) -> f64 {
        let [y1, y2] = y;
        match &self.kind {
            ChartKind::E6 { sign, .. } => sign.as_f64() * powi(y1, 4) + powi(y2, 3),
            ChartKind::E7 { .. } => y2 * powi(y1, 3) + powi(y2, 3),
            ChartKind::E8 { .. } => powi(y1, 5) + powi(y2, 3),
        }
    }

    /// Central differences at the origin with [`JACOBIAN_STEP`].
    pub fn numeric_jacobian(&self) -> Option<f64> {
        let h = JACOBIAN_STEP;
        let d = |e: [f64; 2]| -> Option<[f64; 2]> {
            let p = self.normal_form_map([e[0] * h, e[1] * h])?;
            let m = self.normal_form_map([-e[0] * h, -e[1] * h])?;
            Some([(p[0] - m[0]) / (2.0 * h), (p[1] - m[1]) / (2.0 * h)])
        };
        let c1 = d([1.0, 0.0])?;
        let c2 = d([0.0, 1.0])?;
        Some(c1[0] * c2[1] - c1[1] * c2[0])
    }

    /// `∜|b̃0(0)|·∛B(0,0)` for E6 and `⁵√b̃0(0)·∛B(0,0)` for E8, odd roots
    /// taken real. No closed form is used for E7.
    pub fn closed_form_jacobian(&self) -> Option<f64> {
        match &self.kind {
            ChartKind::E6 { b0, b, .. } => Some(sqrt(sqrt(fabs(*b0))) * cbrt(*b)),
            ChartKind::E8 { b0, b, .. } => Some(signed_root(*b0, 5.0) * cbrt(*b)),
            ChartKind::E7 { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub samples: usize,
    pub radius: f64,
    pub max_residual: f64,
    pub max_residual_half: f64,
    /// `log₂` of the ratio of the two maxima; infinite when the half-radius
    /// maximum is zero.
    pub residual_order_estimate: f64,
    pub expected_order: u32,
    /// Samples dropped at either radius because the chart was undefined.
    pub skipped: usize,
    pub jacobian: Option<f64>,
    pub jacobian_closed_form: Option<f64>,
    pub pass: bool,
}

/// Points in the unit disk, redrawn when a coordinate is within 1e-6 of an axis.
pub fn unit_disk_samples(samples: usize, seed: u64) -> Vec<[f64; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(samples);
    while out.len() < samples {
        let rho = sqrt(rng.gen::<f64>());
        let theta = rng.gen::<f64>() * core::f64::consts::TAU;
        let p = [rho * cos(theta), rho * sin(theta)];
        if fabs(p[0]) >= 1e-6 && fabs(p[1]) >= 1e-6 {
            out.push(p);
        }
    }
    out
}

/// Compares `φ` pulled through `steps` with the chart's normal form at
/// `samples` points of the disk of radius `radius` and again at half that
/// radius (same directions, half the distance).
pub fn verify_normal_form(
    jet: &PolyJet,
    steps: &[TransformStep],
    chart: &Chart,
    radius: f64,
    samples: usize,
    seed: u64,
) -> VerifyReport {
    let phi = F64Poly::new(jet);
    let unit = unit_disk_samples(samples, seed);
    let mut skipped = 0;
    let mut max_at = |scale: f64| -> f64 {
        let mut worst: f64 = 0.0;
        for u in &unit {
            let x = [u[0] * scale, u[1] * scale];
            let Some(y) = chart.normal_form_map(x) else {
                skipped += 1;
                continue;
            };
            let [p1, p2] = pull_back_point(steps, x);
            let r = fabs(phi.eval(p1, p2) - chart.normal_form(y));
            // f64::max would drop a NaN
            worst = if r.is_nan() { f64::INFINITY } else { worst.max(r) };
        }
        worst
    };
    let max_residual = max_at(radius);
    let max_residual_half = max_at(radius / 2.0);
    let residual_order_estimate = if max_residual_half == 0.0 {
        f64::INFINITY
    } else {
        log2(max_residual / max_residual_half)
    };
    let expected_order = chart.series_order + 1;
    let exact = max_residual < EXACT_TOLERANCE && max_residual_half < EXACT_TOLERANCE;
    let converges = residual_order_estimate >= expected_order as f64 - ORDER_SLACK;
    VerifyReport {
        samples,
        radius,
        max_residual,
        max_residual_half,
        residual_order_estimate,
        expected_order,
        skipped,
        jacobian: chart.numeric_jacobian(),
        jacobian_closed_form: chart.closed_form_jacobian(),
        pass: skipped < 2 * samples && max_residual.is_finite() && (exact || converges),
    }
}

/// Classifies, reduces and verifies in one go.
pub fn verify(
    jet: &PolyJet,
    series_order: u32,
    radius: f64,
    samples: usize,
    seed: u64,
) -> Result<(Reduction, VerifyReport), Error> {
    let (verdict, cert) = classify(jet)?;
    let red = crate::normal_form::reduce(verdict, &cert, series_order)?;
    let chart = Chart::new(&red)?;
    let report = verify_normal_form(jet, &red.steps, &chart, radius, samples, seed);
    Ok((red, report))
}

/// A random invertible integer matrix with entries in `-3..=3`.
pub fn random_gl2(rng: &mut impl Rng) -> [[i64; 2]; 2] {
    loop {
        let m = [
            [rng.gen_range(-3..=3), rng.gen_range(-3..=3)],
            [rng.gen_range(-3..=3), rng.gen_range(-3..=3)],
        ];
        if m[0][0] * m[1][1] != m[0][1] * m[1][0] {
            return m;
        }
    }
}

/// Checks that `trials` random linear changes leave the verdict unchanged.
pub fn gl2_invariance_fuzz(jet: &PolyJet, trials: usize, seed: u64) -> Result<bool, Error> {
    let (base, _) = classify(jet)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let m = random_gl2(&mut rng);
        let a = [[int(m[0][0]), int(m[0][1])], [int(m[1][0]), int(m[1][1])]];
        let moved = jet.substitute(&PolyMap2::linear(&a, jet.order()));
        if classify(&moved)?.0 != base {
            return Ok(false);
        }
    }
    Ok(true)
}
