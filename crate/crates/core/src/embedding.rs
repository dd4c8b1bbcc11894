//! Embeddings between Besov and Triebel–Lizorkin spaces derived from a fixed
//! set of sufficient conditions, with replayable proof chains.
//!
//! Source `E^s_{p,q}` and target `E^t_{r,o}` are compared through the
//! reciprocals `u = 1/p`, `v = 1/q` and through the differential dimension
//! `s − n/p`, which no rule can increase.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{CalcError, Result};
use crate::numeric::{format_rational, int, ExtReal, Rational};
use crate::space::{Base, Scale, SpaceParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EmbeddingRule {
    /// `E^s_{p,q} ↪ E^s_{p,o}` for `q ≤ o`.
    SumExponentMonotone,
    /// `E^s_{p,q} ↪ E^{s−ε}_{p,o}` for any `o`.
    EpsilonDown,
    /// `B^s_{p,min(p,q)} ↪ F^s_{p,q}`.
    BFSandwichLeft,
    /// `F^s_{p,q} ↪ B^s_{p,max(p,q)}`.
    BFSandwichRight,
    /// Sobolev embedding within one scale.
    SobolevSameScale,
    /// Sobolev embedding between the scales at equal differential dimension.
    SobolevCrossScale,
    /// `L_p(Ω) ⊂ L_r(Ω)` for `p ≥ r` on a bounded domain.
    IntegrabilityDown,
    IntoLr,
    IntoLinfty,
}

impl EmbeddingRule {
    /// Rules whose target is again a point of one of the scales.
    pub const SPACE_RULES: [EmbeddingRule; 7] = [
        EmbeddingRule::SumExponentMonotone,
        EmbeddingRule::EpsilonDown,
        EmbeddingRule::BFSandwichLeft,
        EmbeddingRule::BFSandwichRight,
        EmbeddingRule::SobolevSameScale,
        EmbeddingRule::SobolevCrossScale,
        EmbeddingRule::IntegrabilityDown,
    ];
}

impl fmt::Display for EmbeddingRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideCondition {
    pub text: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProofStep {
    pub rule: EmbeddingRule,
    pub side_conditions: Vec<SideCondition>,
    pub to: SpaceParams,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingProof {
    pub source: SpaceParams,
    pub target: SpaceParams,
    pub steps: Vec<ProofStep>,
}

impl EmbeddingProof {
    pub fn identity(space: &SpaceParams) -> Self {
        EmbeddingProof { source: space.clone(), target: space.clone(), steps: Vec::new() }
    }

    pub fn rules(&self) -> Vec<EmbeddingRule> {
        self.steps.iter().map(|step| step.rule).collect()
    }

    /// Chains `self: a ↪ b` with `next: b ↪ c`.
    pub fn then(&self, next: &EmbeddingProof) -> Result<EmbeddingProof> {
        if self.target != next.source {
            return Err(CalcError::Contract(format!(
                "cannot chain proofs: {} differs from {}",
                self.target, next.source
            )));
        }
        let mut steps = self.steps.clone();
        steps.extend(next.steps.iter().cloned());
        Ok(EmbeddingProof { source: self.source.clone(), target: next.target.clone(), steps })
    }
}

/// Collects side conditions; without `record` only the conjunction is kept.
struct Checks {
    record: bool,
    all_hold: bool,
    items: Vec<SideCondition>,
}

impl Default for Checks {
    fn default() -> Self {
        Checks { record: true, all_hold: true, items: Vec::new() }
    }
}

impl Checks {
    fn push(&mut self, text: impl FnOnce() -> String, holds: bool) {
        self.all_hold &= holds;
        if self.record {
            self.items.push(SideCondition { text: text(), holds });
        }
    }

    fn same_scale(&mut self, a: &SpaceParams, b: &SpaceParams) {
        self.push(|| format!("scale kept ({} -> {})", a.scale, b.scale), a.scale == b.scale);
    }

    fn scales(&mut self, a: &SpaceParams, b: &SpaceParams, from: Scale, to: Scale) {
        self.push(
            || format!("scale {from} -> {to} ({} -> {})", a.scale, b.scale),
            a.scale == from && b.scale == to,
        );
    }

    fn same_s(&mut self, a: &SpaceParams, b: &SpaceParams) {
        self.push(|| format!("s kept ({} = {})", a.s, b.s), a.s == b.s);
    }

    fn same_u(&mut self, a: &SpaceParams, b: &SpaceParams) {
        self.push(
            || format!("1/p kept ({} = {})", format_rational(&a.u), format_rational(&b.u)),
            a.u == b.u,
        );
    }

    fn ge(&mut self, label: &str, x: &Rational, y: &Rational) {
        self.push(|| format!("{label} ({} >= {})", format_rational(x), format_rational(y)), x >= y);
    }

    fn lt(&mut self, label: &str, x: &Rational, y: &Rational) {
        self.push(|| format!("{label} ({} < {})", format_rational(x), format_rational(y)), x < y);
    }
}

/// Evaluates every side condition of `rule` for the single step `a ↪ b`.
pub fn side_conditions(rule: EmbeddingRule, a: &SpaceParams, b: &SpaceParams) -> Vec<SideCondition> {
    let mut c = Checks::default();
    evaluate(rule, a, b, &mut c);
    c.items
}

pub fn rule_applies(rule: EmbeddingRule, a: &SpaceParams, b: &SpaceParams) -> bool {
    let mut c = Checks { record: false, ..Checks::default() };
    evaluate(rule, a, b, &mut c);
    c.all_hold
}

fn evaluate(rule: EmbeddingRule, a: &SpaceParams, b: &SpaceParams, c: &mut Checks) {
    use EmbeddingRule::*;
    c.push(|| format!("dimension kept ({} = {})", a.n, b.n), a.n == b.n);
    c.push(|| format!("base kept ({:?} = {:?})", a.base, b.base), a.base == b.base);
    let da = a.differential_dim();
    let db = b.differential_dim();
    match rule {
        SumExponentMonotone => {
            c.same_scale(a, b);
            c.same_s(a, b);
            c.same_u(a, b);
            c.ge("q <= o", &a.v, &b.v);
        }
        EpsilonDown => {
            c.same_scale(a, b);
            c.same_u(a, b);
            c.push(|| format!("s decreases ({} < {})", b.s, a.s), b.s < a.s);
        }
        BFSandwichLeft => {
            c.scales(a, b, Scale::B, Scale::F);
            c.same_s(a, b);
            c.same_u(a, b);
            c.ge("q_B <= min(p, q_F)", &a.v, &a.u.clone().max(b.v.clone()));
        }
        BFSandwichRight => {
            c.scales(a, b, Scale::F, Scale::B);
            c.same_s(a, b);
            c.same_u(a, b);
            c.ge("q_B >= max(p, q_F)", &a.u.clone().min(a.v.clone()), &b.v);
        }
        SobolevSameScale => {
            c.same_scale(a, b);
            c.lt("r > p", &b.u, &a.u);
            c.push(|| format!("s - n/p does not increase ({da} >= {db})"), da >= db);
            if a.scale == Scale::B && b.scale == Scale::B {
                c.push(
                    || format!(
                        "q <= o when s - n/p is kept ({} >= {})",
                        format_rational(&a.v),
                        format_rational(&b.v)
                    ),
                    da != db || a.v >= b.v,
                );
            }
        }
        SobolevCrossScale => {
            c.push(|| format!("scale switched ({} -> {})", a.scale, b.scale), a.scale != b.scale);
            c.lt("r > p", &b.u, &a.u);
            c.push(|| format!("s - n/p kept ({da} = {db})"), da == db);
            if a.scale == Scale::B {
                c.ge("q_0 <= p", &a.v, &b.u);
            } else {
                c.ge("p <= q_1", &a.u, &b.v);
            }
        }
        IntegrabilityDown => {
            c.push(|| format!("bounded domain ({:?})", a.base), a.base == Base::BoundedDomain);
            c.same_scale(a, b);
            c.same_s(a, b);
            c.push(
                || format!("q kept ({} = {})", format_rational(&a.v), format_rational(&b.v)),
                a.v == b.v,
            );
            c.ge("p >= r", &b.u, &a.u);
        }
        IntoLr | IntoLinfty => c.push(|| "target is a scale space".into(), false),
    }
}

fn check_pair(src: &SpaceParams, dst: &SpaceParams) -> Result<()> {
    if src.n != dst.n {
        return Err(CalcError::DimensionMismatch { source_dim: src.n, target_dim: dst.n });
    }
    if src.base != dst.base {
        return Err(CalcError::Contract(format!(
            "embedding between different base sets ({:?} vs {:?})",
            src.base, dst.base
        )));
    }
    if src.base == Base::Boundary {
        return Err(CalcError::Contract("embeddings are derived over the full space or a bounded domain".into()));
    }
    Ok(())
}

/// Decides `src ↪ dst` by the canonical chain of at most three rule
/// applications. `Ok(None)` means "not derivable from the rule set".
pub fn embeds(src: &SpaceParams, dst: &SpaceParams) -> Result<Option<EmbeddingProof>> {
    check_pair(src, dst)?;
    if src == dst {
        return Ok(Some(EmbeddingProof::identity(src)));
    }
    let Some(chain) = canonical_chain(src, dst) else {
        return Ok(None);
    };
    let mut steps = Vec::new();
    let mut current = src.clone();
    for (rule, next) in chain {
        if next == current {
            continue;
        }
        let side_conditions = side_conditions(rule, &current, &next);
        if !side_conditions.iter().all(|sc| sc.holds) {
            return Ok(None);
        }
        steps.push(ProofStep { rule, side_conditions, to: next.clone() });
        current = next;
    }
    if current != *dst {
        return Ok(None);
    }
    Ok(Some(EmbeddingProof { source: src.clone(), target: dst.clone(), steps }))
}

pub fn is_derivable(src: &SpaceParams, dst: &SpaceParams) -> bool {
    matches!(embeds(src, dst), Ok(Some(_)))
}

fn canonical_chain(src: &SpaceParams, dst: &SpaceParams) -> Option<Vec<(EmbeddingRule, SpaceParams)>> {
    use EmbeddingRule::*;
    use Scale::{B, F};
    let bounded = src.base == Base::BoundedDomain;
    let (s, u, v) = (&src.s, &src.u, &src.v);
    let (t, w, o) = (&dst.s, &dst.u, &dst.v);
    let at = |scale: Scale, s: &ExtReal, u: &Rational, v: &Rational| {
        SpaceParams::new(scale, s.clone(), u.clone(), v.clone(), src.n, src.base).ok()
    };
    let max = |x: &Rational, y: &Rational| x.clone().max(y.clone());
    let min = |x: &Rational, y: &Rational| x.clone().min(y.clone());
    let x = src.scale;

    let chain = if w >= u {
        if w > u && !bounded {
            return None;
        }
        if s < t {
            return None;
        }
        let lowered = s > t;
        match (src.scale, dst.scale, lowered) {
            (a, b, true) if a == b => vec![(EpsilonDown, at(x, t, u, o)?), (IntegrabilityDown, dst.clone())],
            (B, F, true) if !u.is_zero() => vec![
                (EpsilonDown, at(B, t, u, &max(u, o))?),
                (BFSandwichLeft, at(F, t, u, o)?),
                (IntegrabilityDown, dst.clone()),
            ],
            (B, F, true) => vec![
                (EpsilonDown, at(B, t, u, &max(w, o))?),
                (IntegrabilityDown, at(B, t, w, &max(w, o))?),
                (BFSandwichLeft, dst.clone()),
            ],
            (_, _, true) => vec![
                (BFSandwichRight, at(B, s, u, &min(u, v))?),
                (EpsilonDown, at(B, t, u, o)?),
                (IntegrabilityDown, dst.clone()),
            ],
            (a, b, false) if a == b => vec![(SumExponentMonotone, at(x, s, u, o)?), (IntegrabilityDown, dst.clone())],
            (B, F, false) => {
                let pivot = if u.is_zero() { min(w, v) } else { u.clone() };
                vec![
                    (IntegrabilityDown, at(B, s, &pivot, v)?),
                    (BFSandwichLeft, at(F, s, &pivot, o)?),
                    (IntegrabilityDown, dst.clone()),
                ]
            }
            (_, _, false) => vec![(IntegrabilityDown, at(F, s, w, v)?), (BFSandwichRight, dst.clone())],
        }
    } else {
        let d_src = src.differential_dim();
        let d_dst = dst.differential_dim();
        if d_src < d_dst {
            return None;
        }
        let strict = d_src > d_dst;
        match (src.scale, dst.scale, strict) {
            (a, b, _) if a == b => vec![(SobolevSameScale, dst.clone())],
            (B, F, true) => vec![(SobolevSameScale, at(B, t, w, &max(w, o))?), (BFSandwichLeft, dst.clone())],
            (F, B, true) => vec![(BFSandwichRight, at(B, s, u, &min(u, v))?), (SobolevSameScale, dst.clone())],
            _ => vec![(SobolevCrossScale, dst.clone())],
        }
    };
    Some(chain)
}

/// Independent replay of a proof chain.
pub fn validate_proof(proof: &EmbeddingProof) -> bool {
    if check_pair(&proof.source, &proof.target).is_err() {
        return false;
    }
    let mut current = &proof.source;
    for step in &proof.steps {
        if !step.side_conditions.iter().all(|sc| sc.holds) {
            return false;
        }
        if !rule_applies(step.rule, current, &step.to) {
            return false;
        }
        current = &step.to;
    }
    *current == proof.target
}

/// Verdict of `src ↪ L_{1/r}` together with the conditions that decided it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LebesgueVerdict {
    pub holds: bool,
    pub rule: Option<EmbeddingRule>,
    pub side_conditions: Vec<SideCondition>,
    /// The decision used the terse `s = 0` edge conditions.
    pub zero_smoothness_edge: bool,
}

/// `L_∞` test: `s > n/p`, or `s = n/p` with `q ≤ 1` (B) resp. `p ≤ 1` (F).
fn into_linfty(src: &SpaceParams) -> bool {
    let np = src.np();
    match src.s.cmp_rational(&np) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Equal => match src.scale {
            Scale::B => src.v >= int(1),
            Scale::F => src.u >= int(1),
        },
        std::cmp::Ordering::Less => false,
    }
}

/// Reciprocal exponents `r` with `src ↪ L_{1/r}` directly: the interval
/// between `1/t = 1/p − s/n` and `1/p`, with the endpoint rules of the
/// respective scale. Smoothness at or above `n/p` is first lowered by
/// `EpsilonDown`, which makes every `0 < r ≤ 1/p` reachable.
fn into_lr_direct(src: &SpaceParams, r: &Rational, c: &mut Checks) -> (bool, bool) {
    let n = int(src.n as i64);
    let u = &src.u;
    let floor = &n * (u - int(1)).max(Rational::zero());
    let np = src.np();
    let in_range = !src.s.lt_rational(&floor);
    c.push(|| format!("s >= n(1/p - 1)_+ ({} >= {})", src.s, format_rational(&floor)), in_range);
    c.ge("r >= p", r, u);
    if !in_range || r > u || r.is_zero() {
        return (false, false);
    }
    if !src.s.lt_rational(&np) {
        c.push(|| format!("s >= n/p ({} >= {}), lowered by EpsilonDown", src.s, format_rational(&np)), true);
        return (true, false);
    }
    // r against 1/t = 1/p − s/n, i.e. s against n(1/p − r)
    let bound = &n * (u - r);
    let order = src.s.cmp_rational(&bound);
    if src.s.eq_rational(&Rational::zero()) {
        return match src.scale {
            Scale::F => {
                let needed = if *u == int(1) { int(1) } else { Rational::new(1.into(), 2.into()) };
                c.ge("s = 0: q <= 1 for p = 1, q <= 2 for p > 1", &src.v, &needed);
                (src.v >= needed && order != std::cmp::Ordering::Less, true)
            }
            Scale::B => {
                c.push(|| format!("s = 0: r = p ({} = {})", format_rational(r), format_rational(u)), r == u);
                c.push(|| format!("s = 0: p >= 1 ({} <= 1)", format_rational(u)), *u <= int(1));
                let needed = u.clone().max(Rational::new(1.into(), 2.into()));
                c.ge("s = 0: q <= min(2, p)", &src.v, &needed);
                (r == u && *u <= int(1) && src.v >= needed, true)
            }
        };
    }
    let holds = match (src.scale, order) {
        (_, std::cmp::Ordering::Greater) => true,
        (Scale::F, std::cmp::Ordering::Equal) => true,
        (Scale::B, std::cmp::Ordering::Equal) => src.v >= *r,
        _ => false,
    };
    c.push(|| format!("r <= t with 1/t = 1/p - s/n (s {} vs {})", src.s, format_rational(&bound)), holds);
    (holds, false)
}

/// `src ↪ L_{1/r}`; `r = 0` is `L_∞`. On a bounded domain `L_p ⊂ L_{p'}`
/// for `p' ≤ p` is used as well.
pub fn lebesgue_verdict(src: &SpaceParams, r: &Rational) -> Result<LebesgueVerdict> {
    if src.base == Base::Boundary {
        return Err(CalcError::Contract("Lebesgue embeddings are derived over the full space or a bounded domain".into()));
    }
    if *r < Rational::zero() {
        return Err(CalcError::Contract("reciprocal Lebesgue exponent must be nonnegative".into()));
    }
    let mut c = Checks::default();
    let linfty = into_linfty(src);
    if r.is_zero() || (linfty && src.base == Base::BoundedDomain) {
        c.push(
            || format!("s > n/p, or s = n/p with the endpoint condition ({} vs {})", src.s, format_rational(&src.np())),
            linfty,
        );
        if !r.is_zero() {
            c.push(|| "bounded domain: L_inf inside every L_r".into(), true);
        }
        return Ok(LebesgueVerdict {
            holds: linfty,
            rule: Some(EmbeddingRule::IntoLinfty),
            side_conditions: c.items,
            zero_smoothness_edge: false,
        });
    }
    let (mut holds, mut edge) = into_lr_direct(src, r, &mut c);
    if !holds && src.base == Base::BoundedDomain {
        // try the largest admissible reciprocal not exceeding r
        let candidate = r.clone().min(src.u.clone());
        if candidate < *r && !candidate.is_zero() {
            let mut inner = Checks::default();
            let (ok, e) = into_lr_direct(src, &candidate, &mut inner);
            if ok {
                c.items.extend(inner.items);
                c.push(|| "bounded domain: L_p inside L_r for r <= p".into(), true);
                holds = true;
                edge = e;
            }
        }
    }
    Ok(LebesgueVerdict { holds, rule: Some(EmbeddingRule::IntoLr), side_conditions: c.items, zero_smoothness_edge: edge })
}

pub fn embeds_into_lebesgue(src: &SpaceParams, r: &Rational) -> bool {
    lebesgue_verdict(src, r).map(|v| v.holds).unwrap_or(false)
}
