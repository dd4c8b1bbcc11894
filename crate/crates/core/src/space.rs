//! Points of the B/F scales and the metadata of the linear boundary problem.
//!
//! Integrability and sum exponents are stored as reciprocals, so `p = ∞`
//! is the exact rational `0` and every inequality is linear in the fields.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{CalcError, Result};
use crate::numeric::{format_rational, int, rational_json, ExtReal, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Scale {
    B,
    F,
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scale::B => "B",
            Scale::F => "F",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Base {
    FullSpace,
    BoundedDomain,
    /// Boundary manifold; only produced as a trace target.
    Boundary,
}

/// One point `E^s_{p,q}` of a scale. `u = 1/p`, `v = 1/q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SpaceRepr", into = "SpaceRepr")]
pub struct SpaceParams {
    pub scale: Scale,
    pub s: ExtReal,
    pub u: Rational,
    pub v: Rational,
    pub n: u32,
    pub base: Base,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceRepr {
    scale: Scale,
    s: ExtReal,
    #[serde(rename = "invP", with = "rational_json")]
    inv_p: Rational,
    #[serde(rename = "invQ", with = "rational_json")]
    inv_q: Rational,
    n: u32,
    base: Base,
}

impl TryFrom<SpaceRepr> for SpaceParams {
    type Error = CalcError;
    fn try_from(r: SpaceRepr) -> Result<Self> {
        SpaceParams::new(r.scale, r.s, r.inv_p, r.inv_q, r.n, r.base)
    }
}

impl From<SpaceParams> for SpaceRepr {
    fn from(sp: SpaceParams) -> Self {
        SpaceRepr { scale: sp.scale, s: sp.s, inv_p: sp.u, inv_q: sp.v, n: sp.n, base: sp.base }
    }
}

impl SpaceParams {
    pub fn new(scale: Scale, s: ExtReal, u: Rational, v: Rational, n: u32, base: Base) -> Result<Self> {
        if n == 0 {
            return Err(CalcError::Contract("dimension n must be positive".into()));
        }
        if u.is_negative() || v.is_negative() {
            return Err(CalcError::Contract("1/p and 1/q must be nonnegative".into()));
        }
        if scale == Scale::F && u.is_zero() {
            return Err(CalcError::Contract("F-scale requires p < ∞".into()));
        }
        Ok(SpaceParams { scale, s, u, v, n, base })
    }

    /// Bounded-domain space; panics on invalid input. Intended for literals.
    pub fn bounded(scale: Scale, s: ExtReal, u: Rational, v: Rational, n: u32) -> Self {
        Self::new(scale, s, u, v, n, Base::BoundedDomain).expect("valid space parameters")
    }

    /// The plane coordinate `n/p`.
    pub fn np(&self) -> Rational {
        int(self.n as i64) * &self.u
    }

    /// `s − n/p`, the quantity preserved by Sobolev embeddings.
    pub fn differential_dim(&self) -> ExtReal {
        self.s.sub_rational(&self.np())
    }

    pub fn with_s(&self, s: ExtReal) -> Self {
        SpaceParams { s, ..self.clone() }
    }

    pub fn with_u(&self, u: Rational) -> Self {
        SpaceParams { u, ..self.clone() }
    }

    pub fn with_v(&self, v: Rational) -> Self {
        SpaceParams { v, ..self.clone() }
    }

    pub fn with_scale(&self, scale: Scale) -> Self {
        SpaceParams { scale, ..self.clone() }
    }
}

fn reciprocal_label(x: &Rational) -> String {
    if x.is_zero() {
        "inf".into()
    } else {
        format_rational(&x.recip())
    }
}

impl fmt::Display for SpaceParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}^{{{}}}_{{{},{}}}",
            self.scale,
            self.s,
            reciprocal_label(&self.u),
            reciprocal_label(&self.v)
        )
    }
}

/// Metadata of the linear problem `{A, T}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "OperatorRepr", into = "OperatorRepr")]
pub struct OperatorSpec {
    pub trace_class: u8,
    pub trace_order: Rational,
    pub self_adjoint: bool,
    pub invertible: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct OperatorRepr {
    order: u8,
    r: u8,
    #[serde(with = "rational_json")]
    d: Rational,
    self_adjoint: bool,
    invertible: bool,
}

impl TryFrom<OperatorRepr> for OperatorSpec {
    type Error = CalcError;
    fn try_from(r: OperatorRepr) -> Result<Self> {
        if r.order != OperatorSpec::INTERIOR_ORDER {
            return Err(CalcError::Contract(format!("interior order must be 2, got {}", r.order)));
        }
        OperatorSpec::new(r.r, r.d, r.self_adjoint, r.invertible)
    }
}

impl From<OperatorSpec> for OperatorRepr {
    fn from(op: OperatorSpec) -> Self {
        OperatorRepr {
            order: OperatorSpec::INTERIOR_ORDER,
            r: op.trace_class,
            d: op.trace_order,
            self_adjoint: op.self_adjoint,
            invertible: op.invertible,
        }
    }
}

impl OperatorSpec {
    pub const INTERIOR_ORDER: u8 = 2;

    pub fn new(trace_class: u8, trace_order: Rational, self_adjoint: bool, invertible: bool) -> Result<Self> {
        if !(1..=2).contains(&trace_class) {
            return Err(CalcError::Contract(format!("trace class r must be 1 or 2, got {trace_class}")));
        }
        if trace_order >= int(2) {
            return Err(CalcError::Contract("trace order d must be < 2".into()));
        }
        Ok(OperatorSpec { trace_class, trace_order, self_adjoint, invertible })
    }

    /// Class `r` with `d = r − 1` (Dirichlet-like for r = 1, Neumann-like for r = 2).
    pub fn with_class(trace_class: u8) -> Result<Self> {
        Self::new(trace_class, int(trace_class as i64 - 1), false, true)
    }

    pub fn r(&self) -> Rational {
        int(self.trace_class as i64)
    }
}

/// Threshold `r + max(1/p − 1, n/p − n)` of the realisation condition.
pub fn realisation_threshold(u: &Rational, n: u32, op: &OperatorSpec) -> Rational {
    let n = int(n as i64);
    let first = u - int(1);
    let second = &n * u - &n;
    op.r() + first.max(second)
}

/// Whether `T` makes sense on the space: `s > r + max(1/p − 1, n/p − n)`.
pub fn realisation_condition_holds(sp: &SpaceParams, op: &OperatorSpec) -> bool {
    sp.s.gt_rational(&realisation_threshold(&sp.u, sp.n, op))
}

/// Target of the trace operator: `B^{s−d−1/p}_{p,q}(Γ)`, with `q` replaced by
/// `p` for the F-scale.
pub fn trace_target(sp: &SpaceParams, op: &OperatorSpec) -> Result<SpaceParams> {
    if sp.base != Base::BoundedDomain {
        return Err(CalcError::Contract("trace target needs a bounded-domain space".into()));
    }
    if !realisation_condition_holds(sp, op) {
        return Err(CalcError::Contract(format!(
            "realisation condition fails for {sp}: s must exceed {}",
            format_rational(&realisation_threshold(&sp.u, sp.n, op))
        )));
    }
    let s = sp.s.sub_rational(&(&op.trace_order + &sp.u));
    let v = match sp.scale {
        Scale::B => sp.v.clone(),
        Scale::F => sp.u.clone(),
    };
    SpaceParams::new(Scale::B, s, sp.u.clone(), v, sp.n, Base::Boundary)
}
