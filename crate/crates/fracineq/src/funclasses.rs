//! The h-preinvexity framework: multiplier classes `h`, invexity maps
//! `(eta, lambda)`, the test-function library, and empirical certification
//! of the preinvexity hypotheses.
//!
//! The complex phase factor `e^{i phi}` of the underlying function class is
//! modeled as a real scaling factor `lambda` in `(0, 1]`; `lambda = 1`
//! recovers the `phi = 0` case. A literal complex displacement would make
//! `f(a + t e^{i phi} eta)` undefined for real-valued `f` on a real
//! interval, so every formula substitutes `lambda` for `e^{i phi}`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quad::QuadConfig;

/// Certification tolerance: grid violations smaller than this are noise.
pub const CERTIFY_TOL: f64 = 1e-12;

/// The multiplier function `h` on `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub enum HClass {
    /// `h(t) = t`
    Identity,
    /// `h(t) = t^s`, `s` in `(0, 1]`
    Power(f64),
    /// `h(t) = 1`
    One,
    /// Piecewise-linear interpolation through sorted knots spanning `[0, 1]`.
    Tabulated(Vec<(f64, f64)>),
}

impl HClass {
    pub fn validate(&self) -> Result<()> {
        match self {
            HClass::Identity | HClass::One => Ok(()),
            HClass::Power(s) => {
                if *s > 0.0 && *s <= 1.0 {
                    Ok(())
                } else {
                    Err(Error::Domain(format!("power exponent s must be in (0,1], got {s}")))
                }
            }
            HClass::Tabulated(knots) => {
                if knots.len() < 2 || knots.first().unwrap().0 != 0.0 || knots.last().unwrap().0 != 1.0 {
                    return Err(Error::Domain("tabulated h must span [0,1]".into()));
                }
                for w in knots.windows(2) {
                    if w[1].0 <= w[0].0 {
                        return Err(Error::Domain("tabulated h knots must be strictly increasing".into()));
                    }
                }
                if knots.iter().any(|&(_, v)| v < 0.0 || !v.is_finite()) {
                    return Err(Error::Domain("tabulated h values must be nonnegative".into()));
                }
                Ok(())
            }
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Domain(format!("h is defined on [0,1], got t = {t}")));
        }
        Ok(match self {
            HClass::Identity => t,
            HClass::Power(s) => t.powf(*s),
            HClass::One => 1.0,
            HClass::Tabulated(knots) => {
                let i = knots.partition_point(|&(k, _)| k <= t).min(knots.len() - 1);
                let (t0, v0) = knots[i - 1];
                let (t1, v1) = knots[i];
                v0 + (v1 - v0) * (t - t0) / (t1 - t0)
            }
        })
    }

    /// Interior points where `h` is not smooth (tabulated knots); handed to
    /// the quadrature engine as forced breakpoints.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            HClass::Tabulated(knots) => knots[1..knots.len() - 1].iter().map(|&(t, _)| t).collect(),
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for HClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HClass::Identity => write!(f, "id"),
            HClass::Power(s) => write!(f, "pow:{s}"),
            HClass::One => write!(f, "one"),
            HClass::Tabulated(knots) => {
                write!(f, "tab:")?;
                for (i, (t, v)) in knots.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{t}={v}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for HClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let h = if s == "id" {
            HClass::Identity
        } else if s == "one" {
            HClass::One
        } else if let Some(rest) = s.strip_prefix("pow:") {
            let s: f64 = rest
                .parse()
                .map_err(|_| Error::Usage(format!("bad h exponent `{rest}`")))?;
            HClass::Power(s)
        } else if let Some(rest) = s.strip_prefix("tab:") {
            let mut knots = Vec::new();
            for piece in rest.split(',') {
                let (t, v) = piece
                    .split_once('=')
                    .ok_or_else(|| Error::Usage(format!("bad tabulated knot `{piece}`")))?;
                let t: f64 = t.parse().map_err(|_| Error::Usage(format!("bad knot abscissa `{t}`")))?;
                let v: f64 = v.parse().map_err(|_| Error::Usage(format!("bad knot value `{v}`")))?;
                knots.push((t, v));
            }
            HClass::Tabulated(knots)
        } else {
            return Err(Error::Usage(format!("unknown h class `{s}`")));
        };
        h.validate()?;
        Ok(h)
    }
}

/// The direction bifunction `eta(v, u)`.
#[derive(Clone)]
pub enum EtaKind {
    /// `eta(v, u) = v - u`
    Difference,
    /// `eta(v, u) = c (v - u)`, `c > 0`
    Affine(f64),
    Custom(Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for EtaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EtaKind::Difference => write!(f, "diff"),
            EtaKind::Affine(c) => write!(f, "affine:{c}"),
            EtaKind::Custom(_) => write!(f, "custom"),
        }
    }
}

impl fmt::Display for EtaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for EtaKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "diff" {
            Ok(EtaKind::Difference)
        } else if let Some(rest) = s.strip_prefix("affine:") {
            let c: f64 = rest
                .parse()
                .map_err(|_| Error::Usage(format!("bad affine factor `{rest}`")))?;
            if c <= 0.0 {
                return Err(Error::Usage(format!("affine factor must be positive, got {c}")));
            }
            Ok(EtaKind::Affine(c))
        } else {
            Err(Error::Usage(format!("unknown eta `{s}`")))
        }
    }
}

/// Bifunction `eta` together with the real phase factor `lambda`.
#[derive(Clone, Debug)]
pub struct InvexityMap {
    pub eta: EtaKind,
    pub lambda: f64,
}

impl InvexityMap {
    pub fn new(eta: EtaKind, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda <= 1.0) {
            return Err(Error::Domain(format!("lambda must be in (0,1], got {lambda}")));
        }
        Ok(InvexityMap { eta, lambda })
    }

    pub fn eta(&self, v: f64, u: f64) -> f64 {
        match &self.eta {
            EtaKind::Difference => v - u,
            EtaKind::Affine(c) => c * (v - u),
            EtaKind::Custom(f) => f(v, u),
        }
    }

    /// The point `a + t * lambda * eta(b, a)`.
    pub fn displaced(&self, a: f64, b: f64, t: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Domain(format!("displacement parameter t must be in [0,1], got {t}")));
        }
        let eta = self.eta(b, a);
        if eta <= 0.0 {
            return Err(Error::Domain(format!("eta(b,a) must be positive, got {eta}")));
        }
        Ok(a + t * self.lambda * eta)
    }
}

/// A test function with analytically evaluable first and second derivatives.
#[derive(Clone)]
pub enum Family {
    /// `c0 + c1 x + c2 x^2 + ...`
    Poly(Vec<f64>),
    /// `exp(k x)`
    ExpScaled(f64),
    /// `|x|^k`, `k >= 2`
    PowerAbs(f64),
    Custom {
        f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        d1: Option<Arc<dyn Fn(f64) -> f64 + Send + Sync>>,
        d2: Option<Arc<dyn Fn(f64) -> f64 + Send + Sync>>,
    },
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Poly(coeffs) => {
                write!(f, "poly:")?;
                for (i, c) in coeffs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                Ok(())
            }
            Family::ExpScaled(k) => write!(f, "exp:{k}"),
            Family::PowerAbs(k) => write!(f, "powabs:{k}"),
            Family::Custom { .. } => write!(f, "custom"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(rest) = s.strip_prefix("poly:") {
            let coeffs: std::result::Result<Vec<f64>, _> = rest.split(',').map(str::parse).collect();
            let coeffs = coeffs.map_err(|_| Error::Usage(format!("bad poly coefficients `{rest}`")))?;
            if coeffs.is_empty() {
                return Err(Error::Usage("poly needs at least one coefficient".into()));
            }
            Ok(Family::Poly(coeffs))
        } else if let Some(rest) = s.strip_prefix("exp:") {
            let k: f64 = rest
                .parse()
                .map_err(|_| Error::Usage(format!("bad exp scale `{rest}`")))?;
            Ok(Family::ExpScaled(k))
        } else if let Some(rest) = s.strip_prefix("powabs:") {
            let k: f64 = rest
                .parse()
                .map_err(|_| Error::Usage(format!("bad powabs exponent `{rest}`")))?;
            if k < 2.0 {
                return Err(Error::Usage(format!("powabs exponent must be >= 2, got {k}")));
            }
            Ok(Family::PowerAbs(k))
        } else {
            Err(Error::Usage(format!("unknown function spec `{s}`")))
        }
    }
}

fn poly_eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn poly_deriv(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| i as f64 * c)
        .collect()
}

#[derive(Clone, Debug)]
pub struct FunctionSpec {
    pub family: Family,
    /// Closed interval on which the function (and the hypotheses) live.
    pub domain: (f64, f64),
}

impl FunctionSpec {
    pub fn new(family: Family, domain: (f64, f64)) -> Self {
        FunctionSpec { family, domain }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match &self.family {
            Family::Poly(c) => poly_eval(c, x),
            Family::ExpScaled(k) => (k * x).exp(),
            Family::PowerAbs(k) => x.abs().powf(*k),
            Family::Custom { f, .. } => f(x),
        }
    }

    pub fn deriv(&self, order: u8, x: f64) -> Result<f64> {
        match (&self.family, order) {
            (Family::Poly(c), 1) => Ok(poly_eval(&poly_deriv(c), x)),
            (Family::Poly(c), 2) => Ok(poly_eval(&poly_deriv(&poly_deriv(c)), x)),
            (Family::ExpScaled(k), 1) => Ok(k * (k * x).exp()),
            (Family::ExpScaled(k), 2) => Ok(k * k * (k * x).exp()),
            (Family::PowerAbs(k), 1) => Ok(k * x.abs().powf(k - 1.0) * x.signum()),
            (Family::PowerAbs(k), 2) => Ok(k * (k - 1.0) * x.abs().powf(k - 2.0)),
            (Family::Custom { d1: Some(d), .. }, 1) => Ok(d(x)),
            (Family::Custom { d2: Some(d), .. }, 2) => Ok(d(x)),
            (Family::Custom { .. }, o) => Err(Error::DerivativeUnavailable { order: o }),
            (_, o) => Err(Error::DerivativeUnavailable { order: o }),
        }
    }
}

/// `t -> |f^(order)(t)|^q_exp` as an owned callable.
pub fn derivative_magnitude_power(
    spec: &FunctionSpec,
    order: u8,
    q_exp: f64,
) -> Result<impl Fn(f64) -> f64> {
    if order != 1 && order != 2 {
        return Err(Error::DerivativeUnavailable { order });
    }
    // Probe once so custom specs lacking the derivative fail eagerly.
    spec.deriv(order, spec.domain.0)?;
    let spec = spec.clone();
    Ok(move |x: f64| spec.deriv(order, x).map(|d| d.abs().powf(q_exp)).unwrap_or(f64::NAN))
}

/// Result of an empirical preinvexity check.
#[derive(Clone, Copy, Debug)]
pub struct Certification {
    pub holds: bool,
    /// Max over the grid of `g(displaced) - [h(1-t)g(u) + h(t)g(v)]`;
    /// negative when the inequality holds strictly.
    pub worst_violation: f64,
    pub witness: (f64, f64, f64),
}

/// Grid check of `g(u + t*lambda*eta(v,u)) <= h(1-t)g(u) + h(t)g(v)` over
/// `(u, v, t)` triples with `eta(v, u) > 0` and the displaced point inside
/// the interval.
pub fn certify_h_preinvex<G: Fn(f64) -> f64>(
    g: G,
    h: &HClass,
    map: &InvexityMap,
    interval: (f64, f64),
    grid_n: usize,
) -> Result<Certification> {
    if grid_n < 3 {
        return Err(Error::Domain(format!("certification grid needs >= 3 points, got {grid_n}")));
    }
    let (lo, hi) = interval;
    if !(hi > lo) {
        return Err(Error::InvalidInterval { lo, hi });
    }
    let step = (hi - lo) / (grid_n - 1) as f64;
    let mut worst = f64::NEG_INFINITY;
    let mut witness = (lo, lo, 0.0);

    for i in 0..grid_n {
        let u = lo + i as f64 * step;
        let gu = g(u);
        for j in 0..grid_n {
            let v = lo + j as f64 * step;
            if map.eta(v, u) <= 0.0 {
                continue;
            }
            let gv = g(v);
            for k in 0..grid_n {
                let t = k as f64 / (grid_n - 1) as f64;
                let x = map.displaced(u, v, t)?;
                if x < lo || x > hi {
                    continue;
                }
                let lhs = g(x);
                let rhs = h.eval(1.0 - t)? * gu + h.eval(t)? * gv;
                let gap = lhs - rhs;
                if gap > worst {
                    worst = gap;
                    witness = (u, v, t);
                }
            }
        }
    }

    if worst == f64::NEG_INFINITY {
        // No admissible triple; vacuous certification.
        worst = 0.0;
    }
    Ok(Certification {
        holds: worst <= CERTIFY_TOL,
        worst_violation: worst,
        witness,
    })
}

/// One fully-bound verification instance.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub f: FunctionSpec,
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    /// Hoelder exponent, `p > 1`.
    pub p: f64,
    pub h: HClass,
    pub map: InvexityMap,
    pub quad_cfg: QuadConfig,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.h.validate()?;
        if !(self.alpha > 0.0) {
            return Err(Error::Domain(format!("alpha must be positive, got {}", self.alpha)));
        }
        if !(self.p > 1.0) {
            return Err(Error::Domain(format!("Hoelder exponent p must exceed 1, got {}", self.p)));
        }
        let eta = self.map.eta(self.b, self.a);
        if eta <= 0.0 {
            return Err(Error::Domain(format!("eta(b,a) must be positive, got {eta}")));
        }
        let upper = self.a + self.map.lambda * eta;
        let (lo, hi) = self.f.domain;
        if self.a < lo || upper > hi || self.b < lo || self.b > hi {
            return Err(Error::Domain(format!(
                "scenario range [{}, {}] (b = {}) escapes function domain [{lo}, {hi}]",
                self.a, upper, self.b
            )));
        }
        Ok(())
    }

    /// The conjugate exponent `q = p / (p - 1)`.
    pub fn q(&self) -> f64 {
        self.p / (self.p - 1.0)
    }

    /// The displacement length `lambda * eta(b, a)`.
    pub fn lever(&self) -> f64 {
        self.map.lambda * self.map.eta(self.b, self.a)
    }

    /// Upper evaluation point `a + lambda * eta(b, a)`.
    pub fn upper(&self) -> f64 {
        self.a + self.lever()
    }

    /// Stable, comma-free identifier used in reports.
    pub fn digest(&self) -> String {
        format!(
            "f={}|a={}|b={}|alpha={}|p={}|h={}|eta={}|lambda={}",
            self.f.family, self.a, self.b, self.alpha, self.p, self.h, self.map.eta, self.map.lambda
        )
        .replace(',', ";")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diff_map(lambda: f64) -> InvexityMap {
        InvexityMap::new(EtaKind::Difference, lambda).unwrap()
    }

    #[test]
    fn h_eval_cases() {
        assert_eq!(HClass::Identity.eval(0.3).unwrap(), 0.3);
        assert!((HClass::Power(0.5).eval(0.25).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(HClass::One.eval(0.9).unwrap(), 1.0);
        assert!(HClass::Identity.eval(1.2).is_err());
        assert!(HClass::Identity.eval(-0.1).is_err());
    }

    #[test]
    fn h_tabulated_interpolation() {
        let h: HClass = "tab:0=1,0.5=0.2,1=1".parse().unwrap();
        assert!((h.eval(0.25).unwrap() - 0.6).abs() < 1e-15);
        assert!((h.eval(0.75).unwrap() - 0.6).abs() < 1e-15);
        assert_eq!(h.eval(0.0).unwrap(), 1.0);
        assert_eq!(h.eval(1.0).unwrap(), 1.0);
        assert_eq!(h.breakpoints(), vec![0.5]);
    }

    #[test]
    fn h_validation() {
        assert!("pow:0".parse::<HClass>().is_err());
        assert!("pow:1.5".parse::<HClass>().is_err());
        assert!("tab:0=1,1=-1".parse::<HClass>().is_err());
        assert!("tab:0.1=1,1=1".parse::<HClass>().is_err());
        assert!("huh".parse::<HClass>().is_err());
    }

    #[test]
    fn displaced_point_cases() {
        let m = diff_map(1.0);
        assert_eq!(m.displaced(0.0, 1.0, 0.5).unwrap(), 0.5);
        let m = diff_map(0.5);
        assert_eq!(m.displaced(0.0, 1.0, 1.0).unwrap(), 0.5);
        let m = InvexityMap::new(EtaKind::Affine(2.0), 1.0).unwrap();
        assert_eq!(m.displaced(1.0, 2.0, 1.0).unwrap(), 3.0);
        // endpoints are exact
        let m = diff_map(0.7);
        assert_eq!(m.displaced(0.25, 2.0, 0.0).unwrap(), 0.25);
        assert_eq!(m.displaced(0.25, 2.0, 1.0).unwrap(), 0.25 + 0.7 * 1.75);
        // eta <= 0 rejected
        assert!(m.displaced(2.0, 0.25, 0.5).is_err());
    }

    #[test]
    fn certify_square_identity() {
        let c = certify_h_preinvex(|x| x * x, &HClass::Identity, &diff_map(1.0), (0.0, 1.0), 15).unwrap();
        assert!(c.holds, "worst violation {}", c.worst_violation);
    }

    #[test]
    fn certify_exp_with_h_one() {
        let c = certify_h_preinvex(|x| x.exp(), &HClass::One, &diff_map(1.0), (0.0, 1.0), 15).unwrap();
        assert!(c.holds);
    }

    #[test]
    fn certify_square_power_half() {
        let c = certify_h_preinvex(|x| x * x, &HClass::Power(0.5), &diff_map(1.0), (0.0, 1.0), 15).unwrap();
        assert!(c.holds);
    }

    #[test]
    fn certify_rejects_concave() {
        let c = certify_h_preinvex(|x| x.sqrt(), &HClass::Identity, &diff_map(1.0), (0.0, 1.0), 15).unwrap();
        assert!(!c.holds);
        assert!(c.worst_violation > 0.0);
    }

    #[test]
    fn certify_matches_midpoint_convexity_grid() {
        // For h = identity, lambda = 1, eta = diff, a violation on the grid
        // is exactly a convexity violation at grid points.
        let g = |x: f64| (x - 0.4).abs(); // convex
        let c = certify_h_preinvex(g, &HClass::Identity, &diff_map(1.0), (0.0, 1.0), 11).unwrap();
        assert!(c.holds);
        let n = 11usize;
        let mut convex_ok = true;
        for i in 0..n {
            for j in 0..n {
                let (u, v) = (i as f64 / 10.0, j as f64 / 10.0);
                if v <= u {
                    continue;
                }
                for k in 0..n {
                    let t = k as f64 / 10.0;
                    if g(u + t * (v - u)) > (1.0 - t) * g(u) + t * g(v) + CERTIFY_TOL {
                        convex_ok = false;
                    }
                }
            }
        }
        assert_eq!(c.holds, convex_ok);
    }

    #[test]
    fn monotone_nesting_identity_power_one() {
        // nonnegative g certified with identity is certified with power(s) and one
        let g = |x: f64| x * x + 0.1;
        for s in [0.25, 0.5, 0.75, 1.0] {
            let c = certify_h_preinvex(g, &HClass::Power(s), &diff_map(1.0), (0.0, 1.0), 9).unwrap();
            assert!(c.holds, "power({s}) failed");
        }
        let c = certify_h_preinvex(g, &HClass::One, &diff_map(1.0), (0.0, 1.0), 9).unwrap();
        assert!(c.holds);
    }

    #[test]
    fn derivative_powers() {
        let f = FunctionSpec::new("poly:0,0,1".parse().unwrap(), (0.0, 1.0));
        let g = derivative_magnitude_power(&f, 1, 1.0).unwrap();
        assert!((g(0.5) - 1.0).abs() < 1e-15);
        let f = FunctionSpec::new("poly:0,0,0,1".parse().unwrap(), (0.0, 1.0));
        let g = derivative_magnitude_power(&f, 2, 2.0).unwrap();
        assert!((g(0.5) - 9.0).abs() < 1e-12); // (6 * 0.5)^2
        let f = FunctionSpec::new("exp:1".parse().unwrap(), (0.0, 1.0));
        let g = derivative_magnitude_power(&f, 1, 3.0).unwrap();
        assert!((g(1.0) - 3.0f64.exp()).abs() < 1e-10);
    }

    #[test]
    fn custom_missing_derivative_errors() {
        let f = FunctionSpec::new(
            Family::Custom {
                f: Arc::new(|x| x),
                d1: None,
                d2: None,
            },
            (0.0, 1.0),
        );
        assert!(derivative_magnitude_power(&f, 1, 1.0).is_err());
    }

    #[test]
    fn scenario_q_relation_and_digest_stability() {
        let s = Scenario {
            f: FunctionSpec::new("poly:0,0,1".parse().unwrap(), (0.0, 1.0)),
            a: 0.0,
            b: 1.0,
            alpha: 1.0,
            p: 2.0,
            h: HClass::Identity,
            map: diff_map(1.0),
            quad_cfg: QuadConfig::default(),
        };
        s.validate().unwrap();
        let q = s.q();
        assert!((q * (s.p - 1.0) - s.p).abs() < 1e-12);
        assert_eq!(s.digest(), s.digest());
        assert!(!s.digest().contains(','));
    }

    #[test]
    fn grammar_round_trip() {
        for text in ["poly:0,0,1", "exp:1.5", "powabs:3", "pow:0.5", "id", "one"] {
            if let Ok(fam) = text.parse::<Family>() {
                assert_eq!(fam.to_string(), text);
            } else {
                let h: HClass = text.parse().unwrap();
                assert_eq!(h.to_string(), text);
            }
        }
    }
}
