//! Composition smoothness `σ(s,p)`, the loss `d(s)`, the margin `δ(s,p)`
//! and membership in the parameter domain 𝔻(A_T + g(·)).
//!
//! Everything is evaluated in the `(n/p, s)` plane with `t = n/p`. The
//! borderline of condition (iii) is the level curve `d(s) = 2`, a branch of
//! the hyperbola `(s−3)² − (t−3)(s−3) + 2 = 0` that exists for `t ≥ 3+√8`.

use std::cmp::Ordering;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{CalcError, Result};
use crate::numeric::{format_rational, int, ExtReal, Rational, Surd};
use crate::space::{realisation_condition_holds, Base, OperatorSpec, Scale, SpaceParams};

/// Which guarantee `σ` reports for B-scale spaces or finite `q`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum SigmaMode {
    /// Only `σ(s,p) − ε` is established outside `F^s_{p,∞}`.
    #[default]
    Proved,
    /// Use `σ(s,p)` for every scale and sum exponent.
    Conjectured,
}

fn plane_t(u: &Rational, n: u32) -> Rational {
    int(n as i64) * u
}

/// Lower bound for `s` in condition (ii): `0` for `p ≥ 1`, otherwise
/// `n/p + max(−n, −p/(1−p))`.
pub fn condition_ii_threshold(u: &Rational, n: u32) -> Rational {
    if *u <= Rational::one() {
        return Rational::zero();
    }
    // p/(1−p) = 1/(u−1) for p = 1/u
    let frac = (u - Rational::one()).recip();
    let n_r = int(n as i64);
    plane_t(u, n) + (-n_r).max(-frac)
}

pub fn condition_ii(s: &ExtReal, u: &Rational, n: u32) -> bool {
    s.gt_rational(&condition_ii_threshold(u, n))
}

/// Verdict of condition (iii).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionIII {
    pub holds: bool,
    /// `n/p < 3 + √8`: the hyperbola does not exist at this abscissa.
    pub vacuous: bool,
}

/// `(t − 3)² − 8`.
pub fn discriminant(t: &Rational) -> Rational {
    let shifted = t - int(3);
    &shifted * &shifted - int(8)
}

pub fn condition_iii(s: &ExtReal, u: &Rational, n: u32) -> ConditionIII {
    let t = plane_t(u, n);
    if Surd::vertex().cmp_rational(&t) == Ordering::Greater {
        return ConditionIII { holds: true, vacuous: true };
    }
    // w = 2s − t − 3 must avoid [−√D, √D]
    let w = s.scale_int(2).sub_rational(&(&t + int(3)));
    let root = discriminant(&t);
    let above = w.cmp_surd(&Surd::new(Rational::zero(), Rational::one(), root.clone())) == Ordering::Greater;
    let below = w.cmp_surd(&Surd::new(Rational::zero(), -Rational::one(), root)) == Ordering::Less;
    ConditionIII { holds: above || below, vacuous: false }
}

/// `σ(s,p)` for `F^s_{p,∞}`.
///
/// In the middle branch the infinitesimal part of `s` is carried over
/// unchanged; `σ` is strictly increasing there, so the sign of the
/// ε-offset is what every comparison needs.
pub fn sigma_formula(s: &ExtReal, u: &Rational, n: u32) -> Result<ExtReal> {
    if !condition_ii(s, u, n) {
        return Err(CalcError::OutsideCompositionDomain(format!(
            "s = {s} must exceed {}",
            format_rational(&condition_ii_threshold(u, n))
        )));
    }
    let t = plane_t(u, n);
    let one = Rational::one();
    if s.gt_rational(&t) || (s.gt_rational(&Rational::zero()) && s.lt_rational(&one)) {
        return Ok(s.clone());
    }
    if s.eq_rational(&t) || s.eq_rational(&one) {
        return Ok(s.shift_eps(-1));
    }
    let middle = &t / (&t - &s.base + &one);
    Ok(ExtReal::new(middle, s.eps))
}

/// `σ` with the guarantee appropriate for the given scale and `1/q`.
pub fn sigma(s: &ExtReal, u: &Rational, n: u32, scale: Scale, v: &Rational, mode: SigmaMode) -> Result<ExtReal> {
    let value = sigma_formula(s, u, n)?;
    let exact_case = scale == Scale::F && v.is_zero();
    Ok(if mode == SigmaMode::Proved && !exact_case { value.shift_eps(-1) } else { value })
}

/// `δ(s,p) = σ(s,p) − (s − 2)`, the margin of `g(·)` below the order of `A_T`.
pub fn delta(s: &ExtReal, u: &Rational, n: u32) -> Result<ExtReal> {
    let sigma = sigma_formula(s, u, n)?;
    Ok(&sigma - &s.sub_rational(&int(2)))
}

/// Loss of smoothness `d(s) = (s−1)(t−s)/(t−s+1)` on `1 < s < t`.
pub fn loss_d(s: &Rational, u: &Rational, n: u32) -> Result<Rational> {
    let t = plane_t(u, n);
    let one = Rational::one();
    if !(*s > one && *s < t) {
        return Err(CalcError::Contract(format!(
            "loss d(s) is defined on 1 < s < n/p = {}, got s = {}",
            format_rational(&t),
            format_rational(s)
        )));
    }
    Ok((s - &one) * (&t - s) / (&t - s + &one))
}

/// `max { d(s) | 1 < s < t } = (√t − 1)² = t + 1 − 2√t`.
pub fn max_loss(t: &Rational) -> Surd {
    Surd::new(t + int(1), int(-2), t.clone())
}

/// Order of the maximal loss at abscissa `t` against `2`.
pub fn max_loss_cmp_two(t: &Rational) -> Ordering {
    max_loss(t).cmp_rational(&int(2))
}

/// The identity `(√t − 1)² = 2 ⟺ t = 3 + √8`, checked symbolically: at
/// `t = 3+√8` the discriminant vanishes, `√t = 1 + √2`, and hence the
/// maximal loss is exactly `2`.
pub fn max_loss_equals_two_at_vertex() -> bool {
    let vertex = Surd::vertex();
    // D(3+√8) = (√8)² − 8
    let discriminant_zero = &vertex.b * &vertex.b * &vertex.c - int(8) == Rational::zero();
    // (1 + √2)² = 3 + 2√2 equals the vertex
    let root_squared = Surd::new(int(3), int(2), int(2));
    let root_matches = root_squared.cmp_surd(&vertex) == Ordering::Equal;
    // (√t − 1)² = (√2)² = 2
    let loss = Surd::new(Rational::zero(), Rational::one(), int(2));
    let loss_is_two = {
        let sq = &loss.b * &loss.b * &loss.c;
        sq == int(2)
    };
    discriminant_zero && root_matches && loss_is_two
}

/// The two branches `h₂(t) < h₁(t)` of the level curve at abscissa `t`.
#[derive(Clone, Debug, Serialize)]
pub struct HyperbolaBranches {
    pub lower: Surd,
    pub upper: Surd,
    pub lower_approx: f64,
    pub upper_approx: f64,
}

pub fn hyperbola_branches(t: &Rational) -> Result<HyperbolaBranches> {
    let d = discriminant(t);
    if *t < int(3) || d < Rational::zero() {
        return Err(CalcError::Contract(format!(
            "hyperbola branches need t ≥ 3 + √8, got t = {}",
            format_rational(t)
        )));
    }
    let half = Rational::new(1.into(), 2.into());
    let mid = (t + int(3)) * &half;
    let lower = Surd::new(mid.clone(), -half.clone(), d.clone());
    let upper = Surd::new(mid, half, d);
    Ok(HyperbolaBranches { lower_approx: lower.to_f64(), upper_approx: upper.to_f64(), lower, upper })
}

/// `(h₁(t) − t, h₂(t) − 3)`; the first tends to `0₋`, the second to `0₊`.
pub fn asymptote_gaps(t: &Rational) -> Result<(Surd, Surd)> {
    let HyperbolaBranches { lower, upper, .. } = hyperbola_branches(t)?;
    let upper_gap = Surd::new(&upper.a - t, upper.b, upper.c);
    let lower_gap = Surd::new(&lower.a - int(3), lower.b, lower.c);
    Ok((upper_gap, lower_gap))
}

/// Geometry of the borderline in dimension `n`.
#[derive(Clone, Copy, Debug)]
pub struct HyperbolaGeometry {
    pub n: u32,
}

impl HyperbolaGeometry {
    pub fn applicable_from(&self) -> Surd {
        Surd::vertex()
    }

    pub fn branches(&self, t: &Rational) -> Result<HyperbolaBranches> {
        hyperbola_branches(t)
    }

    pub fn max_loss(&self, t: &Rational) -> Surd {
        max_loss(t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BindingCondition {
    None,
    I,
    II,
    III,
}

/// Verdict of conditions (i)–(iii) for one space.
///
/// `sigma` and `delta` are the `F^s_{p,∞}` values of the composition
/// smoothness; they depend on `(s, p)` only, so the report is the same for
/// every sum exponent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MembershipReport {
    pub in_domain: bool,
    #[serde(rename = "condI")]
    pub cond_i: bool,
    #[serde(rename = "condII")]
    pub cond_ii: bool,
    #[serde(rename = "condIII")]
    pub cond_iii: bool,
    #[serde(rename = "condIIIVacuous")]
    pub cond_iii_vacuous: bool,
    pub binding_condition: BindingCondition,
    pub sigma: Option<ExtReal>,
    pub delta: Option<ExtReal>,
    pub notes: Vec<String>,
}

pub fn membership(sp: &SpaceParams, op: &OperatorSpec) -> Result<MembershipReport> {
    if sp.base != Base::BoundedDomain {
        return Err(CalcError::Contract("membership is defined for bounded-domain spaces".into()));
    }
    let cond_i = realisation_condition_holds(sp, op);
    let cond_ii = condition_ii(&sp.s, &sp.u, sp.n);
    let iii = condition_iii(&sp.s, &sp.u, sp.n);
    let binding_condition = if !cond_i {
        BindingCondition::I
    } else if !cond_ii {
        BindingCondition::II
    } else if !iii.holds {
        BindingCondition::III
    } else {
        BindingCondition::None
    };
    let (sigma, delta) = if cond_ii {
        let sigma = sigma_formula(&sp.s, &sp.u, sp.n)?;
        let delta = &sigma - &sp.s.sub_rational(&int(2));
        (Some(sigma), Some(delta))
    } else {
        (None, None)
    };
    let mut notes = Vec::new();
    if sp.u.is_zero() {
        notes.push("p = inf: condition (ii) evaluated with the 1 <= p branch (s > 0)".to_string());
    }
    Ok(MembershipReport {
        in_domain: cond_i && cond_ii && iii.holds,
        cond_i,
        cond_ii,
        cond_iii: iii.holds,
        cond_iii_vacuous: iii.vacuous,
        binding_condition,
        sigma,
        delta,
        notes,
    })
}

pub fn in_domain(sp: &SpaceParams, op: &OperatorSpec) -> bool {
    membership(sp, op).map(|r| r.in_domain).unwrap_or(false)
}

/// Closed forms of the domain in the atypical low-dimensional cases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SimplifiedDomain {
    /// `n = 1`: `s > 1/p − 1 + r`, a convex set.
    OneDimensional { r: u8 },
    /// `n = 2, r = 2`: `s > max(1/p + 1, 2/p)`.
    PlanarClassTwo,
    /// `n = 2, r = 1`: (ii) implies (iii), so the curved part of the boundary
    /// is `s = n/p − p/(1−p)`; no separate closed form.
    PlanarClassOneCurvedBoundary,
}

impl SimplifiedDomain {
    /// Membership by the closed form, when there is one.
    pub fn contains(&self, s: &ExtReal, u: &Rational) -> Option<bool> {
        match self {
            SimplifiedDomain::OneDimensional { r } => Some(s.gt_rational(&(u - int(1) + int(*r as i64)))),
            SimplifiedDomain::PlanarClassTwo => Some(s.gt_rational(&(u + int(1)).max(int(2) * u))),
            SimplifiedDomain::PlanarClassOneCurvedBoundary => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            SimplifiedDomain::OneDimensional { r } => format!("s > 1/p - 1 + {r}"),
            SimplifiedDomain::PlanarClassTwo => "s > max(1/p + 1, 2/p)".into(),
            SimplifiedDomain::PlanarClassOneCurvedBoundary => {
                "curved boundary is s = n/p - p/(1-p); condition (iii) implied by (ii)".into()
            }
        }
    }
}

pub fn simplified_domain(n: u32, op: &OperatorSpec) -> Option<SimplifiedDomain> {
    match (n, op.trace_class) {
        (1, r) => Some(SimplifiedDomain::OneDimensional { r }),
        (2, 2) => Some(SimplifiedDomain::PlanarClassTwo),
        (2, 1) => Some(SimplifiedDomain::PlanarClassOneCurvedBoundary),
        _ => None,
    }
}

/// Whether `s > n/p − p/(1−p)` is implied by (i) for class `r = 2`, i.e.
/// `p(n−1) ≥ n−2`.
pub fn class2_redundancy(n: u32, u: &Rational) -> Result<bool> {
    if *u <= Rational::one() {
        return Err(CalcError::Contract("class-2 redundancy concerns p < 1 (1/p > 1)".into()));
    }
    let n = n as i64;
    // p(n−1) ≥ n−2 with p = 1/u
    Ok(int(n - 1) >= int(n - 2) * u)
}
