//! The inequality catalog: the two exact derivative identities, the six
//! generic-h bounds, the kernel weight integrals behind them, and the
//! printed closed-form corollary constants.
//!
//! Naming follows the stable report ids `T3.2 ... T3.23` for the generic
//! bounds and `C3.3 ... C3.26` for their specializations to `h(t) = t`,
//! `h(t) = t^s` and `h(t) = 1`.
//!
//! Two deliberate readings are encoded here:
//!
//! * `T3.19` carries the `1/(alpha+1)` factor from the final display of its
//!   derivation; the statement form without that factor is exposed
//!   separately as `T3.19-printed` so the two can be compared.
//! * The `C3.4` / `C3.12` closed form is read as the three-term sum
//!   `B_{1/2}(a+1,s+1) - B_{1/2}(s+1,a+1) + (1 - 2^-(s+a))/(a+s+1)`, the
//!   unique bracketing consistent with a split of the weight integral at
//!   `t = 1/2`. The audit compares it against the numeric oracle either way.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fracint;
use crate::funclasses::{certify_h_preinvex, derivative_magnitude_power, HClass, Scenario};
use crate::quad::{self, QuadConfig, QuadResult};
use crate::specfun;

/// The six generic-h bounds (plus the as-printed variant of T3.19).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InequalityId {
    T3_2,
    T3_6,
    T3_10,
    T3_15,
    T3_19,
    T3_19Printed,
    T3_23,
}

/// The proof-final forms exercised by default verification runs.
pub const THEOREMS: [InequalityId; 6] = [
    InequalityId::T3_2,
    InequalityId::T3_6,
    InequalityId::T3_10,
    InequalityId::T3_15,
    InequalityId::T3_19,
    InequalityId::T3_23,
];

impl InequalityId {
    /// Derivative order and power of the magnitude that must be
    /// h-preinvex for this bound to apply; the exponent is either 1 or
    /// the conjugate exponent `q`.
    pub fn required_class(&self, q: f64) -> (u8, f64) {
        match self {
            InequalityId::T3_2 => (1, 1.0),
            InequalityId::T3_6 | InequalityId::T3_10 => (1, q),
            InequalityId::T3_15 => (2, 1.0),
            InequalityId::T3_19 | InequalityId::T3_19Printed | InequalityId::T3_23 => (2, q),
        }
    }
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            InequalityId::T3_2 => "T3.2",
            InequalityId::T3_6 => "T3.6",
            InequalityId::T3_10 => "T3.10",
            InequalityId::T3_15 => "T3.15",
            InequalityId::T3_19 => "T3.19",
            InequalityId::T3_19Printed => "T3.19-printed",
            InequalityId::T3_23 => "T3.23",
        };
        f.write_str(s)
    }
}

impl FromStr for InequalityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "T3.2" => InequalityId::T3_2,
            "T3.6" => InequalityId::T3_6,
            "T3.10" => InequalityId::T3_10,
            "T3.15" => InequalityId::T3_15,
            "T3.19" => InequalityId::T3_19,
            "T3.19-printed" | "T3.19_printed" => InequalityId::T3_19Printed,
            "T3.23" => InequalityId::T3_23,
            _ => return Err(Error::Usage(format!("unknown inequality id `{s}`"))),
        })
    }
}

/// The 18 printed corollaries, grouped by parent bound and h-class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[allow(non_camel_case_types)]
pub enum CorollaryId {
    C3_3,
    C3_4,
    C3_5,
    C3_7,
    C3_8,
    C3_9,
    C3_11,
    C3_12,
    C3_13,
    C3_16,
    C3_17,
    C3_18,
    C3_20,
    C3_21,
    C3_22,
    C3_24,
    C3_25,
    C3_26,
}

pub const COROLLARIES: [CorollaryId; 18] = [
    CorollaryId::C3_3,
    CorollaryId::C3_4,
    CorollaryId::C3_5,
    CorollaryId::C3_7,
    CorollaryId::C3_8,
    CorollaryId::C3_9,
    CorollaryId::C3_11,
    CorollaryId::C3_12,
    CorollaryId::C3_13,
    CorollaryId::C3_16,
    CorollaryId::C3_17,
    CorollaryId::C3_18,
    CorollaryId::C3_20,
    CorollaryId::C3_21,
    CorollaryId::C3_22,
    CorollaryId::C3_24,
    CorollaryId::C3_25,
    CorollaryId::C3_26,
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HCase {
    Identity,
    PowerS,
    One,
}

impl CorollaryId {
    pub fn h_case(&self) -> HCase {
        use CorollaryId::*;
        match self {
            C3_3 | C3_7 | C3_11 | C3_16 | C3_20 | C3_24 => HCase::Identity,
            C3_4 | C3_8 | C3_12 | C3_17 | C3_21 | C3_25 => HCase::PowerS,
            C3_5 | C3_9 | C3_13 | C3_18 | C3_22 | C3_26 => HCase::One,
        }
    }

    pub fn family(&self) -> InequalityId {
        use CorollaryId::*;
        match self {
            C3_3 | C3_4 | C3_5 => InequalityId::T3_2,
            C3_7 | C3_8 | C3_9 => InequalityId::T3_6,
            C3_11 | C3_12 | C3_13 => InequalityId::T3_10,
            C3_16 | C3_17 | C3_18 => InequalityId::T3_15,
            C3_20 | C3_21 | C3_22 => InequalityId::T3_19,
            C3_24 | C3_25 | C3_26 => InequalityId::T3_23,
        }
    }

    pub fn needs_s(&self) -> bool {
        self.h_case() == HCase::PowerS
    }

    pub fn needs_p(&self) -> bool {
        use CorollaryId::*;
        matches!(self, C3_20 | C3_21 | C3_22 | C3_24)
    }
}

impl fmt::Display for CorollaryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use CorollaryId::*;
        let s = match self {
            C3_3 => "C3.3",
            C3_4 => "C3.4",
            C3_5 => "C3.5",
            C3_7 => "C3.7",
            C3_8 => "C3.8",
            C3_9 => "C3.9",
            C3_11 => "C3.11",
            C3_12 => "C3.12",
            C3_13 => "C3.13",
            C3_16 => "C3.16",
            C3_17 => "C3.17",
            C3_18 => "C3.18",
            C3_20 => "C3.20",
            C3_21 => "C3.21",
            C3_22 => "C3.22",
            C3_24 => "C3.24",
            C3_25 => "C3.25",
            C3_26 => "C3.26",
        };
        f.write_str(s)
    }
}

impl FromStr for CorollaryId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        COROLLARIES
            .iter()
            .find(|id| id.to_string() == s)
            .copied()
            .ok_or_else(|| Error::Usage(format!("unknown corollary id `{s}`")))
    }
}

/// One evaluated bound instance.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub quad_error: f64,
    pub holds: bool,
    pub scenario_digest: String,
}

/// Whether the h-preinvexity hypothesis must be certified before evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertPolicy {
    Require,
    Waive,
}

/// Kernel weight `W1(h, alpha) = integral of |(1-t)^alpha - t^alpha| h(t) dt`
/// over `[0, 1]`, split at the kink `t = 1/2`.
pub fn weight_integral_w1(h: &HClass, alpha: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("W1 requires alpha > 0, got {alpha}")));
    }
    let mut c = cfg.clone();
    c.breakpoints.push(0.5);
    c.breakpoints.extend(h.breakpoints());
    let h = h.clone();
    quad::integrate(
        move |t| ((1.0 - t).powf(alpha) - t.powf(alpha)).abs() * h.eval(t).unwrap_or(f64::NAN),
        0.0,
        1.0,
        &c,
    )
}

/// Kernel weight `W2(h, alpha) = integral of
/// (1 - (1-t)^(alpha+1) - t^(alpha+1)) / (alpha+1) * h(t) dt` over `[0, 1]`.
pub fn weight_integral_w2(h: &HClass, alpha: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("W2 requires alpha > 0, got {alpha}")));
    }
    let mut c = cfg.clone();
    c.breakpoints.extend(h.breakpoints());
    let h = h.clone();
    quad::integrate(
        move |t| {
            (1.0 - (1.0 - t).powf(alpha + 1.0) - t.powf(alpha + 1.0)) / (alpha + 1.0)
                * h.eval(t).unwrap_or(f64::NAN)
        },
        0.0,
        1.0,
        &c,
    )
}

/// `integral of h(t) dt` over `[0, 1]`.
pub fn h_integral(h: &HClass, cfg: &QuadConfig) -> Result<QuadResult> {
    let mut c = cfg.clone();
    c.breakpoints.extend(h.breakpoints());
    let h = h.clone();
    quad::integrate(move |t| h.eval(t).unwrap_or(f64::NAN), 0.0, 1.0, &c)
}

/// Signed identity left-hand side:
/// `[f(a) + f(a + L)] - Gamma(alpha+1)/L^alpha * [J_{a+}^alpha f(a+L) + J_{(a+L)-}^alpha f(a)]`
/// with `L = lambda * eta(b, a)`. Returns the value and a quadrature error bound.
pub fn identity_lhs(s: &Scenario) -> Result<(f64, f64)> {
    s.validate()?;
    let lever = s.lever();
    let upper = s.upper();
    let f = s.f.clone();
    let left = fracint::rl_left(|t| f.eval(t), s.a, upper, s.alpha, &s.quad_cfg)?;
    let f = s.f.clone();
    let right = fracint::rl_right(|t| f.eval(t), s.a, upper, s.alpha, &s.quad_cfg)?;
    let scale = specfun::gamma(s.alpha + 1.0)?.value / lever.powf(s.alpha);
    let value = (s.f.eval(s.a) + s.f.eval(upper)) - scale * (left.value + right.value);
    let err = scale.abs() * (left.abs_error_estimate + right.abs_error_estimate);
    Ok((value, err))
}

/// `|LHS - RHS|` of the order-1 (antisymmetric `t^a - (1-t)^a` kernel) or
/// order-2 (smooth `1 - (1-t)^(a+1) - t^(a+1)` kernel) identity.
pub fn lemma_residual(order: u8, s: &Scenario) -> Result<f64> {
    let (lhs, lhs_err) = identity_lhs(s)?;
    let lever = s.lever();
    let a = s.a;
    let alpha = s.alpha;
    let map = s.map.clone();
    let b = s.b;
    let rhs = match order {
        1 => {
            let f = s.f.clone();
            let r = quad::integrate(
                |t| {
                    let x = map.displaced(a, b, t).unwrap_or(f64::NAN);
                    (t.powf(alpha) - (1.0 - t).powf(alpha)) * f.deriv(1, x).unwrap_or(f64::NAN)
                },
                0.0,
                1.0,
                &s.quad_cfg,
            )?;
            QuadResult {
                value: lever * r.value,
                abs_error_estimate: lever.abs() * r.abs_error_estimate,
                ..r
            }
        }
        2 => {
            let f = s.f.clone();
            let r = quad::integrate(
                |t| {
                    let x = map.displaced(a, b, t).unwrap_or(f64::NAN);
                    (1.0 - (1.0 - t).powf(alpha + 1.0) - t.powf(alpha + 1.0)) / (alpha + 1.0)
                        * f.deriv(2, x).unwrap_or(f64::NAN)
                },
                0.0,
                1.0,
                &s.quad_cfg,
            )?;
            QuadResult {
                value: lever * lever * r.value,
                abs_error_estimate: lever * lever * r.abs_error_estimate,
                ..r
            }
        }
        o => return Err(Error::DerivativeUnavailable { order: o }),
    };
    let _ = lhs_err;
    Ok((lhs - rhs.value).abs())
}

fn deriv_endpoint_sum(s: &Scenario, order: u8, exponent: f64) -> Result<f64> {
    let da = s.f.deriv(order, s.a)?.abs().powf(exponent);
    let db = s.f.deriv(order, s.b)?.abs().powf(exponent);
    Ok(da + db)
}

/// Right-hand side of a generic bound, with a quadrature error estimate.
pub fn inequality_rhs(id: InequalityId, s: &Scenario) -> Result<(f64, f64)> {
    let lever = s.lever();
    let alpha = s.alpha;
    let p = s.p;
    let q = s.q();
    match id {
        InequalityId::T3_2 => {
            let w1 = weight_integral_w1(&s.h, alpha, &s.quad_cfg)?;
            let sum = deriv_endpoint_sum(s, 1, 1.0)?;
            Ok((lever * sum * w1.value, lever * sum * w1.abs_error_estimate))
        }
        InequalityId::T3_6 => {
            let hint = h_integral(&s.h, &s.quad_cfg)?;
            let sum = deriv_endpoint_sum(s, 1, q)?;
            let pre = (2.0 / (alpha * p + 1.0)).powf(1.0 / p)
                * lever
                * (1.0 - 0.5f64.powf(alpha * p)).powf(1.0 / p);
            let inner = sum * hint.value;
            let value = pre * inner.powf(1.0 / q);
            // d(x^(1/q)) = x^(1/q - 1)/q dx
            let err = if inner > 0.0 {
                pre * inner.powf(1.0 / q - 1.0) / q * sum * hint.abs_error_estimate
            } else {
                0.0
            };
            Ok((value, err))
        }
        InequalityId::T3_10 => {
            let w1 = weight_integral_w1(&s.h, alpha, &s.quad_cfg)?;
            let sum = deriv_endpoint_sum(s, 1, q)?;
            let pre = (2.0 / (alpha + 1.0)).powf(1.0 / p)
                * (1.0 - 0.5f64.powf(alpha)).powf(1.0 / p)
                * lever;
            let inner = sum * w1.value;
            let value = pre * inner.powf(1.0 / q);
            let err = if inner > 0.0 {
                pre * inner.powf(1.0 / q - 1.0) / q * sum * w1.abs_error_estimate
            } else {
                0.0
            };
            Ok((value, err))
        }
        InequalityId::T3_15 => {
            let w2 = weight_integral_w2(&s.h, alpha, &s.quad_cfg)?;
            let sum = deriv_endpoint_sum(s, 2, 1.0)?;
            Ok((
                lever * lever * sum * w2.value,
                lever * lever * sum * w2.abs_error_estimate,
            ))
        }
        InequalityId::T3_19 | InequalityId::T3_19Printed => {
            let hint = h_integral(&s.h, &s.quad_cfg)?;
            let sum = deriv_endpoint_sum(s, 2, q)?;
            let mut pre = lever * lever * (1.0 - 0.5f64.powf(alpha));
            if id == InequalityId::T3_19 {
                pre /= alpha + 1.0;
            }
            let inner = sum * hint.value;
            let value = pre * inner.powf(1.0 / q);
            let err = if inner > 0.0 {
                pre * inner.powf(1.0 / q - 1.0) / q * sum * hint.abs_error_estimate
            } else {
                0.0
            };
            Ok((value, err))
        }
        InequalityId::T3_23 => {
            let w2 = weight_integral_w2(&s.h, alpha, &s.quad_cfg)?;
            let sum = deriv_endpoint_sum(s, 2, q)?;
            let pre = lever
                * lever
                * (alpha / ((alpha + 1.0) * (alpha + 2.0))).powf(1.0 / p);
            let inner = sum * w2.value;
            let value = pre * inner.powf(1.0 / q);
            let err = if inner > 0.0 {
                pre * inner.powf(1.0 / q - 1.0) / q * sum * w2.abs_error_estimate
            } else {
                0.0
            };
            Ok((value, err))
        }
    }
}

/// Check that the scenario satisfies the preinvexity hypothesis the bound
/// requires, on the hull of `{a, b, a + lever}`.
pub fn certify_for(id: InequalityId, s: &Scenario) -> Result<()> {
    let (order, exponent) = id.required_class(s.q());
    let g = derivative_magnitude_power(&s.f, order, exponent)?;
    let lo = s.a.min(s.b);
    let hi = s.b.max(s.upper()).max(s.a);
    let cert = certify_h_preinvex(g, &s.h, &s.map, (lo, hi), 9)?;
    if cert.holds {
        Ok(())
    } else {
        Err(Error::CertificationMissing {
            class: format!("|f^({order})|^{exponent} {}-preinvex", s.h),
        })
    }
}

/// Evaluate one bound on one scenario.
pub fn eval_inequality(id: InequalityId, s: &Scenario, policy: CertPolicy) -> Result<BoundReport> {
    s.validate()?;
    if policy == CertPolicy::Require {
        certify_for(id, s)?;
    }
    let (lhs_signed, lhs_err) = identity_lhs(s)?;
    let lhs = lhs_signed.abs();
    let (rhs, rhs_err) = inequality_rhs(id, s)?;
    let quad_error = lhs_err + rhs_err;
    let tol_total = quad_error + 1e-9 * rhs.abs().max(1.0);
    Ok(BoundReport {
        lhs,
        rhs,
        margin: rhs - lhs,
        quad_error,
        holds: lhs <= rhs + tol_total,
        scenario_digest: s.digest(),
    })
}

fn b_half(p: f64, q: f64) -> Result<f64> {
    Ok(specfun::incomplete_beta_lower(0.5, p, q)?.value)
}

fn require_s(s: Option<f64>) -> Result<f64> {
    let s = s.ok_or(Error::MissingParameter("s"))?;
    if s > 0.0 && s <= 1.0 {
        Ok(s)
    } else {
        Err(Error::Domain(format!("s must be in (0,1], got {s}")))
    }
}

fn require_q(p: Option<f64>) -> Result<f64> {
    let p = p.ok_or(Error::MissingParameter("p"))?;
    if p > 1.0 {
        Ok(p / (p - 1.0))
    } else {
        Err(Error::Domain(format!("p must exceed 1, got {p}")))
    }
}

/// The closed-form constant exactly as printed, suspect ones included.
pub fn corollary_constant(id: CorollaryId, alpha: f64, s: Option<f64>, p: Option<f64>) -> Result<f64> {
    use CorollaryId::*;
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
    }
    Ok(match id {
        C3_3 | C3_11 => (1.0 - 0.5f64.powf(alpha + 2.0)) / (alpha + 2.0),
        C3_4 | C3_12 => {
            let s = require_s(s)?;
            b_half(alpha + 1.0, s + 1.0)? - b_half(s + 1.0, alpha + 1.0)?
                + (1.0 - 0.5f64.powf(s + alpha)) / (alpha + s + 1.0)
        }
        C3_5 | C3_13 => 2.0 / (alpha + 1.0) * (1.0 - 0.5f64.powf(alpha)),
        C3_7 => 0.5,
        C3_8 => 1.0 / (require_s(s)? + 1.0),
        C3_9 => 1.0,
        C3_16 => alpha / (2.0 * (alpha + 1.0) * (alpha + 2.0)),
        C3_17 | C3_25 => {
            let s = require_s(s)?;
            1.0 / ((alpha + s + 2.0) * (s + 1.0)) - b_half(s + 1.0, alpha)? / (alpha + 1.0)
        }
        C3_18 | C3_26 => alpha / ((alpha + 1.0) * (alpha + 2.0)),
        C3_20 | C3_24 => 0.5f64.powf(1.0 / require_q(p)?),
        C3_21 => {
            let s = require_s(s)?;
            (1.0 / (s + 1.0)).powf(1.0 / require_q(p)?)
        }
        C3_22 => 1.0,
    })
}

/// Numeric oracle for a printed constant: the kernel integral it claims to
/// equal (or bound), evaluated by adaptive quadrature.
pub fn corollary_oracle(
    id: CorollaryId,
    alpha: f64,
    s: Option<f64>,
    p: Option<f64>,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    use CorollaryId::*;
    let h = match id.h_case() {
        HCase::Identity => HClass::Identity,
        HCase::PowerS => HClass::Power(require_s(s)?),
        HCase::One => HClass::One,
    };
    match id {
        C3_3 | C3_4 | C3_5 | C3_11 | C3_12 | C3_13 => weight_integral_w1(&h, alpha, cfg),
        C3_7 | C3_8 | C3_9 => h_integral(&h, cfg),
        C3_16 | C3_17 | C3_18 | C3_25 | C3_26 => weight_integral_w2(&h, alpha, cfg),
        C3_20 | C3_21 | C3_22 => {
            let q = require_q(p)?;
            let hint = h_integral(&h, cfg)?;
            let value = hint.value.powf(1.0 / q);
            let err = if hint.value > 0.0 {
                hint.value.powf(1.0 / q - 1.0) / q * hint.abs_error_estimate
            } else {
                hint.abs_error_estimate
            };
            Ok(QuadResult {
                value,
                abs_error_estimate: err,
                ..hint
            })
        }
        C3_24 => {
            // The printed (1/2)^(1/q) encodes the ratio W2(t)/W2(1) after the
            // p- and q-exponents of the generic bound merge.
            let q = require_q(p)?;
            let num = weight_integral_w2(&HClass::Identity, alpha, cfg)?;
            let den = weight_integral_w2(&HClass::One, alpha, cfg)?;
            let ratio = num.value / den.value;
            let value = ratio.powf(1.0 / q);
            let rel_err = num.abs_error_estimate / num.value.abs().max(f64::MIN_POSITIVE)
                + den.abs_error_estimate / den.value.abs().max(f64::MIN_POSITIVE);
            Ok(QuadResult {
                value,
                abs_error_estimate: value.abs() * rel_err / q,
                subdivisions: num.subdivisions + den.subdivisions,
                converged: num.converged && den.converged,
            })
        }
    }
}

/// Full closed-form right-hand side of a printed corollary on a scenario.
///
/// Used by the reduction checks to compare the generic-h evaluator against
/// the specialized closed forms.
pub fn corollary_rhs(id: CorollaryId, s: &Scenario) -> Result<f64> {
    use CorollaryId::*;
    let lever = s.lever();
    let alpha = s.alpha;
    let p = s.p;
    let q = s.q();
    let s_exp = match &s.h {
        HClass::Power(e) => Some(*e),
        _ => None,
    };
    let konst = corollary_constant(id, alpha, s_exp, Some(p))?;
    Ok(match id {
        C3_3 | C3_4 | C3_5 => lever * deriv_endpoint_sum(s, 1, 1.0)? * konst,
        C3_7 | C3_8 | C3_9 => {
            let pre = (2.0 / (alpha * p + 1.0)).powf(1.0 / p)
                * lever
                * (1.0 - 0.5f64.powf(alpha * p)).powf(1.0 / p);
            pre * (deriv_endpoint_sum(s, 1, q)? * konst).powf(1.0 / q)
        }
        C3_11 => {
            let pre = (2.0 / (alpha + 1.0)).powf(1.0 / p)
                * (1.0 - 0.5f64.powf(alpha)).powf(1.0 / p)
                * lever;
            pre * (deriv_endpoint_sum(s, 1, q)? * konst).powf(1.0 / q)
        }
        C3_12 | C3_13 => {
            // printed prefactor (2^(a+1) - 2) / (2^a (a+1)), no 1/p exponent
            let pre = 2.0 * (1.0 - 0.5f64.powf(alpha)) / (alpha + 1.0) * lever;
            let inner = if id == C3_12 { konst } else { 1.0 };
            pre * (deriv_endpoint_sum(s, 1, q)? * inner).powf(1.0 / q)
        }
        C3_16 | C3_17 | C3_18 => lever * lever * deriv_endpoint_sum(s, 2, 1.0)? * konst,
        C3_20 | C3_21 | C3_22 => {
            lever * lever / (alpha + 1.0)
                * (1.0 - 0.5f64.powf(alpha))
                * konst
                * deriv_endpoint_sum(s, 2, q)?.powf(1.0 / q)
        }
        C3_24 => {
            lever * lever
                * konst
                * (alpha / ((alpha + 1.0) * (alpha + 2.0)))
                * deriv_endpoint_sum(s, 2, q)?.powf(1.0 / q)
        }
        C3_26 => lever * lever * konst * deriv_endpoint_sum(s, 2, q)?.powf(1.0 / q),
        C3_25 => {
            lever * lever
                * (alpha / ((alpha + 1.0) * (alpha + 2.0))).powf(1.0 / p)
                * (deriv_endpoint_sum(s, 2, q)? * konst).powf(1.0 / q)
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionKind {
    AlphaOne,
    PhiZero,
    Both,
}

impl FromStr for ReductionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "alpha_one" => ReductionKind::AlphaOne,
            "phi_zero" => ReductionKind::PhiZero,
            "both" => ReductionKind::Both,
            _ => return Err(Error::Usage(format!("unknown reduction kind `{s}`"))),
        })
    }
}

impl fmt::Display for ReductionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReductionKind::AlphaOne => "alpha_one",
            ReductionKind::PhiZero => "phi_zero",
            ReductionKind::Both => "both",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionReport {
    pub kind: String,
    pub max_abs_discrepancy: f64,
}

/// Corollaries whose printed closed form agrees with the generic weight
/// integral exactly (analytically), so the alpha = 1 reduction may compare
/// against them at tight tolerance.
pub const EXACT_COROLLARIES: [CorollaryId; 12] = [
    CorollaryId::C3_5,
    CorollaryId::C3_7,
    CorollaryId::C3_8,
    CorollaryId::C3_9,
    CorollaryId::C3_13,
    CorollaryId::C3_16,
    CorollaryId::C3_18,
    CorollaryId::C3_20,
    CorollaryId::C3_21,
    CorollaryId::C3_22,
    CorollaryId::C3_24,
    CorollaryId::C3_26,
];

/// Consistency checks of the alpha = 1 and lambda = 1 specializations.
pub fn reduction_check(kind: ReductionKind, scenario: &Scenario) -> Result<ReductionReport> {
    let mut max_disc: f64 = 0.0;
    match kind {
        ReductionKind::AlphaOne => {
            let mut s = scenario.clone();
            s.alpha = 1.0;
            let s_exp = match &s.h {
                HClass::Power(e) => *e,
                _ => 0.5,
            };
            for id in EXACT_COROLLARIES {
                let mut sc = s.clone();
                sc.h = match id.h_case() {
                    HCase::Identity => HClass::Identity,
                    HCase::PowerS => HClass::Power(s_exp),
                    HCase::One => HClass::One,
                };
                let (generic, _) = inequality_rhs(id.family(), &sc)?;
                let closed = corollary_rhs(id, &sc)?;
                max_disc = max_disc.max((generic - closed).abs());
            }
        }
        ReductionKind::PhiZero => {
            let mut s = scenario.clone();
            s.map.lambda = 1.0;
            max_disc = max_disc.max(lemma_residual(1, &s)?);
            max_disc = max_disc.max(lemma_residual(2, &s)?);
        }
        ReductionKind::Both => {
            let mut s = scenario.clone();
            s.alpha = 1.0;
            s.map.lambda = 1.0;
            let (lhs, _) = identity_lhs(&s)?;
            let lever = s.lever();
            let upper = s.upper();
            let f = s.f.clone();
            let integral = quad::integrate(|t| f.eval(t), s.a, upper, &s.quad_cfg)?;
            let trapezoid = (s.f.eval(s.a) + s.f.eval(upper) - 2.0 / lever * integral.value).abs();
            max_disc = (lhs.abs() - trapezoid).abs();
        }
    }
    Ok(ReductionReport {
        kind: kind.to_string(),
        max_abs_discrepancy: max_disc,
    })
}
