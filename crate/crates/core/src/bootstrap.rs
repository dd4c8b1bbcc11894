//! Step certificates for the inverse-regularity bootstrap.
//!
//! A solution `u ∈ E^{s₁}_{p₁,q₁}` of `A_T u + g(u) = f` with data
//! `f ∈ E^{s₀−2}_{p₀,q₀}` satisfies `u = R₀f − R₀g(u) + 𝓡u` for a parametrix
//! `R₀`. Each round uses `R₀g(u) ∈ F^{s_j+δ_j}_{p_j,∞}` and `R₀f` in the
//! (ε-shrunk) target to place `u` in a new space `(n/p_{j+1}, s_{j+1})` of the
//! plane, until the target itself is reached.
//!
//! States are `F^s_{p,∞}`, except `p = ∞`, which is represented by
//! `B^s_{∞,∞}`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::composition::{delta, in_domain, max_loss, membership};
use crate::embedding::{embeds, is_derivable, validate_proof, EmbeddingProof, SideCondition};
use crate::error::{CalcError, Result};
use crate::numeric::{ceil, format_rational, int, rational_json, ExtReal, Rational, Surd};
use crate::space::{Base, OperatorSpec, Scale, SpaceParams};

/// Denominator used for the rational floor of the vertex gain bound.
pub const ALPHA_DENOMINATOR: i64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MoveTag {
    Sobolev1,
    Flatten2,
    Upward3,
    MainUpward,
    FinalEmbed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PlannerState {
    pub j: usize,
    pub space: SpaceParams,
    pub delta: ExtReal,
    pub line_value: ExtReal,
    pub in_domain: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Move {
    pub tag: MoveTag,
    pub from: usize,
    pub side_conditions: Vec<SideCondition>,
    /// Increase of the line value `s + δ − n/p`; absent for the final embedding.
    pub gain: Option<ExtReal>,
    /// Claimed lower bound for `gain`; `0+ε` encodes a strict increase.
    pub gain_bound: Option<ExtReal>,
    /// Uninterpreted round nodes: parametrix application and composition gain.
    pub nodes: Vec<String>,
    /// `F^{s_j+δ_j}_{p_j,∞} ↪` next space (the nonlinear term).
    pub nonlinear_proof: Option<EmbeddingProof>,
    /// Working target `↪` next space (the data term).
    pub data_proof: Option<EmbeddingProof>,
    /// The move relies on an argument outside the rule set and carries no proofs.
    pub delegated: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Annotation {
    pub kind: String,
    pub move_index: Option<usize>,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StepBound {
    pub value: u64,
    pub formula: String,
    pub sobolev_steps: u64,
    pub gap_steps: u64,
    pub rise_steps: u64,
    #[serde(with = "rational_json")]
    pub alpha: Rational,
    #[serde(with = "rational_json")]
    pub post_np: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TargetUpgrade {
    pub from: SpaceParams,
    pub to: SpaceParams,
    pub justification: String,
    pub side_conditions: Vec<SideCondition>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BootstrapCertificate {
    pub target: SpaceParams,
    pub initial: SpaceParams,
    pub operator: OperatorSpec,
    /// `F^{s₀−ε}_{p₀,∞}`, the space actually reached by the rounds.
    pub working_target: SpaceParams,
    /// `initial ↪ states[0]`.
    pub initial_proof: EmbeddingProof,
    pub states: Vec<PlannerState>,
    pub moves: Vec<Move>,
    pub final_proof: EmbeddingProof,
    pub upgrade: TargetUpgrade,
    pub step_bound: StepBound,
    pub annotations: Vec<Annotation>,
}

const PARAMETRIX_NODE: &str = "apply R0: u = R0 f - R0 g(u) + R u";

fn cond(text: impl Into<String>, holds: bool) -> SideCondition {
    SideCondition { text: text.into(), holds }
}

/// The planner's space at abscissa `t = n/p`.
pub fn state_space(s: ExtReal, t: &Rational, n: u32) -> Result<SpaceParams> {
    let u = t / int(n as i64);
    let scale = if u.is_zero() { Scale::B } else { Scale::F };
    SpaceParams::new(scale, s, u, Rational::zero(), n, Base::BoundedDomain)
}

fn normalized(space: &SpaceParams, s: ExtReal) -> Result<SpaceParams> {
    state_space(s, &space.np(), space.n)
}

/// `F^{s−ε}_{p,∞}` (or `B^{s−ε}_{∞,∞}`).
pub fn working_target(target: &SpaceParams) -> Result<SpaceParams> {
    normalized(target, target.s.shift_eps(-1))
}

/// Largest planner space that `initial` embeds into: `F^{s}_{p,∞}` when
/// derivable, otherwise `F^{s−ε}_{p,∞}`.
fn initial_state(initial: &SpaceParams) -> Result<(SpaceParams, EmbeddingProof)> {
    for shift in [0, -1] {
        let candidate = normalized(initial, initial.s.shift_eps(shift))?;
        if let Some(proof) = embeds(initial, &candidate)? {
            return Ok((candidate, proof));
        }
    }
    Err(CalcError::Internal(format!("{initial} does not embed into its planner normalisation")))
}

fn line_value(space: &SpaceParams, delta: &ExtReal) -> ExtReal {
    (&space.s + delta).sub_rational(&space.np())
}

fn make_state(j: usize, space: SpaceParams, op: &OperatorSpec) -> Result<PlannerState> {
    let delta = delta(&space.s, &space.u, space.n)?;
    let line_value = line_value(&space, &delta);
    let in_domain = in_domain(&space, op);
    Ok(PlannerState { j, space, delta, line_value, in_domain })
}

/// `2 − (√t − 1)²`, the least margin at abscissa `t < 3+√8`.
pub fn vertex_gain(t: &Rational) -> Surd {
    let loss = max_loss(t);
    Surd::new(int(2) - loss.a, -loss.b, loss.c)
}

/// Largest `k / 2¹⁶` strictly below `2 − (√t − 1)²`.
pub fn alpha_floor(t: &Rational) -> Rational {
    let gain = vertex_gain(t);
    let scale = int(ALPHA_DENOMINATOR);
    let mut k = BigInt::from((gain.to_f64() * ALPHA_DENOMINATOR as f64).floor() as i64 + 1);
    // settle the float guess exactly
    while gain.cmp_rational(&(Rational::from(k.clone()) / &scale)) != Ordering::Greater {
        k -= 1;
    }
    while gain.cmp_rational(&(Rational::from(k.clone() + 1) / &scale)) == Ordering::Greater {
        k += 1;
    }
    Rational::from(k) / scale
}

/// The planner stops with an internal error after
/// `HARD_CAP_FACTOR · stepBound + HARD_CAP_SLACK` states.
pub const HARD_CAP_FACTOR: usize = 16;
pub const HARD_CAP_SLACK: usize = 256;

/// Denominators above this many bits are rounded to the `2^-48` grid.
const COARSEN_BITS: u64 = 64;

/// Rounds `x` down (or up) to a multiple of `2^-48` once its denominator
/// exceeds [`COARSEN_BITS`]; chains of Sobolev moves otherwise double the
/// bit length at every step.
pub fn coarsen(x: &Rational, up: bool) -> Rational {
    if x.denom().bits() <= COARSEN_BITS {
        return x.clone();
    }
    let scale = Rational::from(BigInt::from(1u64 << 48));
    let scaled = x * &scale;
    let k = if up { ceil(&scaled) } else { crate::numeric::floor(&scaled) };
    Rational::from(k) / scale
}

fn coarsen_s(x: &ExtReal) -> ExtReal {
    ExtReal::new(coarsen(&x.base, false), x.eps)
}

/// `next` is `expected`, possibly coarsened and lowered by one ε.
fn settles_to(next: &ExtReal, expected: &ExtReal) -> bool {
    let rounded = coarsen_s(expected);
    [expected.clone(), expected.shift_eps(-1), rounded.clone(), rounded.shift_eps(-1)].contains(next)
}

fn ceil_u64(x: &Rational) -> u64 {
    if x.is_positive() {
        ceil(x).to_u64().unwrap_or(u64::MAX)
    } else {
        0
    }
}

/// Explicit upper bound on the number of planner states.
pub fn step_bound(initial: &SpaceParams, target: &SpaceParams) -> Result<StepBound> {
    let (start, _) = initial_state(initial)?;
    let goal = working_target(target)?;
    let n = start.n;
    let t0 = goal.np();
    let t1 = start.np();
    let s1 = &start.s;
    let delta1 = delta(s1, &start.u, n)?;
    if !delta1.base.is_positive() {
        return Err(CalcError::Internal(format!("non-positive margin {delta1} at the initial state")));
    }
    let sobolev_steps = ceil_u64(&(&t1 / &delta1.base));
    // abscissa after the Sobolev moves, or 0 after a flattening move
    let vertex = Surd::vertex();
    let mut post = t1.clone();
    loop {
        let beyond = post > t0 || vertex.cmp_rational(&post) == Ordering::Less;
        if !beyond {
            break;
        }
        let d = delta(s1, &(&post / int(n as i64)), n)?;
        if d.base > post {
            post = Rational::zero();
            break;
        }
        post = coarsen(&(&post - &d.base), true);
    }
    let alpha = alpha_floor(&post);
    let gap = ((&goal.s.base - &t0) - (&s1.base + &delta1.base - &t1)).max(Rational::zero());
    let rise = (&goal.s.base - &s1.base).max(Rational::zero());
    let gap_steps = ceil_u64(&(&gap / &alpha));
    let rise_steps = ceil_u64(&(&rise / &alpha));
    let value = sobolev_steps + 1 + gap_steps + rise_steps + 4;
    Ok(StepBound {
        value,
        formula: "ceil(t1/delta1) + 1 + ceil(gap/alpha) + ceil((s0-s1)/alpha) + 4".into(),
        sobolev_steps,
        gap_steps,
        rise_steps,
        alpha,
        post_np: post,
    })
}

struct Context {
    goal: SpaceParams,
    goal_line: ExtReal,
    delta1: ExtReal,
}

struct Candidate {
    tag: MoveTag,
    space: SpaceParams,
    side_conditions: Vec<SideCondition>,
    gain_bound: Option<ExtReal>,
    note: Option<String>,
    allow_delegation: bool,
}

fn strictly_positive() -> ExtReal {
    ExtReal::new(Rational::zero(), 1)
}

fn beyond_threshold(t: &Rational, t0: &Rational) -> bool {
    t > t0 || Surd::vertex().cmp_rational(t) == Ordering::Less
}

/// The space `F^{s_j+δ_j}_{p_j,∞}` holding `R₀g(u)`.
fn nonlinear_space(state: &PlannerState) -> Result<SpaceParams> {
    normalized(&state.space, &state.space.s + &state.delta)
}

fn finish_condition(state: &PlannerState, ctx: &Context) -> bool {
    let raised = &state.space.s + &state.delta;
    raised >= ctx.goal.s && state.line_value >= ctx.goal_line
}

fn next_candidate(state: &PlannerState, ctx: &Context) -> Result<Candidate> {
    let n = state.space.n;
    let t = state.space.np();
    let t0 = ctx.goal.np();
    let s = &state.space.s;
    let d = &state.delta;
    let raised = s + d;
    let line = &state.line_value;
    let line_test = ctx.goal_line >= *line;
    let prefix = if line_test { "line test" } else { "line test fails" };
    let mut sc = vec![cond(
        format!("{prefix}: s0 - n/p0 >= s_j + delta_j - n/p_j ({} vs {line})", ctx.goal_line),
        true,
    )];
    if line_test {
        let cond_i = ExtReal::exact(t.clone()) >= *d;
        let cond_ii = beyond_threshold(&t, &t0);
        let text_i = format!("n/p_j - delta_j >= 0 ({} vs {d})", format_rational(&t));
        let text_ii = format!("n/p_j > min(n/p0, 3+sqrt8) ({} vs {})", format_rational(&t), format_rational(&t0));
        if cond_ii {
            let prefix = if cond_i { "(I)" } else { "not (I)" };
            sc.push(cond(format!("{prefix} {text_i}"), true));
            sc.push(cond(format!("(II) {text_ii}"), true));
        } else {
            sc.push(cond(format!("not (II) {text_ii}"), true));
        }
        if cond_i && cond_ii {
            let new_t = coarsen(&(&t - &d.base), true);
            let shift = d.eps.min(0);
            let mut space = state_space(s.shift_eps(shift), &new_t, n)?;
            let mut note = None;
            if *s > ctx.goal.s && new_t >= t0 {
                // keep the data embedding: stop at the goal smoothness on the line through (n/p_j, s_j + δ_j)
                let meet = &ctx.goal.s - line;
                let t_meet = coarsen(&meet.base, true);
                let s_meet = coarsen_s(&std::cmp::min(ctx.goal.s.clone(), line.add_rational(&t_meet)));
                space = state_space(s_meet, &t_meet, n)?;
                note = Some("smoothness capped at the target: s_{j+1} = s0 on the line through (n/p_j, s_j + delta_j)".into());
            }
            return Ok(Candidate {
                tag: MoveTag::Sobolev1,
                space,
                side_conditions: sc,
                gain_bound: Some(if note.is_some() { strictly_positive() } else { ctx.delta1.clone() }),
                allow_delegation: note.is_some(),
                note,
            });
        }
        if cond_ii {
            let space = state_space(coarsen_s(line), &Rational::zero(), n)?;
            return Ok(Candidate {
                tag: MoveTag::Flatten2,
                space,
                side_conditions: sc,
                gain_bound: Some(ctx.delta1.clone()),
                note: None,
                allow_delegation: false,
            });
        }
        let space = normalized(&state.space, coarsen_s(&raised))?;
        return Ok(Candidate {
            tag: MoveTag::Upward3,
            space,
            side_conditions: sc,
            gain_bound: Some(ExtReal::exact(alpha_floor(&t))),
            note: None,
            allow_delegation: false,
        });
    }
    if raised < ctx.goal.s {
        sc.push(cond(format!("s_j + delta_j < s0 ({raised} vs {})", ctx.goal.s), true));
    } else {
        sc.push(cond(
            format!("no final embedding from {}", nonlinear_space(state)?),
            !is_derivable(&nonlinear_space(state)?, &ctx.goal),
        ));
    }
    if t >= t0 {
        sc.push(cond(format!("n/p_j >= n/p0 ({} >= {})", format_rational(&t), format_rational(&t0)), true));
        let space = normalized(&state.space, coarsen_s(&raised))?;
        return Ok(Candidate {
            tag: MoveTag::MainUpward,
            space,
            side_conditions: sc,
            gain_bound: Some(strictly_positive()),
            note: None,
            allow_delegation: false,
        });
    }
    // left of the target: the corner of s = s_j + δ_j and the target's slope-one line
    sc.push(cond(format!("n/p_j < n/p0 ({} < {})", format_rational(&t), format_rational(&t0)), true));
    let corner = &raised - &ctx.goal_line;
    let (s_new, t_new) = if corner.base >= t0 {
        (coarsen_s(&raised), t0.clone())
    } else {
        let t_c = coarsen(&corner.base, true).min(t0.clone());
        (coarsen_s(&std::cmp::min(raised.clone(), ctx.goal_line.add_rational(&t_c))), t_c)
    };
    Ok(Candidate {
        tag: MoveTag::MainUpward,
        space: state_space(s_new, &t_new, n)?,
        side_conditions: sc,
        gain_bound: None,
        note: Some("moved onto the target's slope-one line; the line value may drop here".into()),
        allow_delegation: false,
    })
}

/// Raises `s` to `r + 1/p − 1 + ε` when condition (i) fails.
fn clamp_realisation(space: &SpaceParams, op: &OperatorSpec) -> SpaceParams {
    let floor = ExtReal::new(op.r() + &space.u - int(1), 1);
    if space.s >= floor {
        space.clone()
    } else {
        space.with_s(floor)
    }
}

/// Runs the bootstrap from `initial` (holding `u`) to `target` (holding
/// `R₀f`), both required to lie in the parameter domain.
pub fn plan_bootstrap(initial: &SpaceParams, target: &SpaceParams, op: &OperatorSpec) -> Result<BootstrapCertificate> {
    for (label, space) in [("initial", initial), ("target", target)] {
        let report = membership(space, op)?;
        if !report.in_domain {
            return Err(CalcError::NotInDomain(format!(
                "{label} space {space} fails condition {:?}",
                report.binding_condition
            )));
        }
    }
    if initial.n != target.n {
        return Err(CalcError::DimensionMismatch { source_dim: initial.n, target_dim: target.n });
    }
    let goal = working_target(target)?;
    let bound = step_bound(initial, target)?;
    let upgrade = TargetUpgrade {
        from: goal.clone(),
        to: target.clone(),
        justification: "sigma > s - 2 is possible near the target parameters, so R0 g(u) and hence u lie in the target"
            .into(),
        side_conditions: vec![cond("target lies in the parameter domain", true)],
    };
    let (start, initial_proof) = initial_state(initial)?;
    let first = make_state(0, start, op)?;

    if initial == target {
        return Ok(BootstrapCertificate {
            target: target.clone(),
            initial: initial.clone(),
            operator: op.clone(),
            working_target: goal,
            initial_proof,
            states: vec![first],
            moves: Vec::new(),
            final_proof: EmbeddingProof::identity(target),
            upgrade,
            step_bound: bound,
            annotations: vec![Annotation {
                kind: "identity".into(),
                move_index: None,
                text: "initial space equals the target".into(),
            }],
        });
    }

    let ctx = Context {
        goal_line: goal.s.sub_rational(&goal.np()),
        delta1: first.delta.clone(),
        goal: goal.clone(),
    };
    let mut states = vec![first];
    let mut moves: Vec<Move> = Vec::new();
    let mut annotations = Vec::new();
    let limit = (bound.value as usize).saturating_mul(HARD_CAP_FACTOR).saturating_add(HARD_CAP_SLACK);
    loop {
        let state = states.last().expect("at least one state").clone();
        if !state.in_domain || !state.delta.base.is_positive() {
            return Err(CalcError::Internal(format!(
                "state {} = {} left the domain or lost its margin (delta = {})",
                state.j, state.space, state.delta
            )));
        }
        let raised = nonlinear_space(&state)?;
        if finish_condition(&state, &ctx) {
            if let Some(proof) = embeds(&raised, &goal)? {
                moves.push(Move {
                    tag: MoveTag::FinalEmbed,
                    from: state.j,
                    side_conditions: vec![
                        cond(format!("s_j + delta_j >= s0 ({} >= {})", raised.s, goal.s), true),
                        cond(
                            format!("s_j + delta_j - n/p_j >= s0 - n/p0 ({} >= {})", state.line_value, ctx.goal_line),
                            true,
                        ),
                    ],
                    gain: None,
                    gain_bound: None,
                    nodes: vec![PARAMETRIX_NODE.into()],
                    nonlinear_proof: None,
                    data_proof: None,
                    delegated: false,
                    note: None,
                });
                return Ok(BootstrapCertificate {
                    target: target.clone(),
                    initial: initial.clone(),
                    operator: op.clone(),
                    working_target: goal,
                    initial_proof,
                    states,
                    moves,
                    final_proof: proof,
                    upgrade,
                    step_bound: bound,
                    annotations,
                });
            }
        }
        if states.len() >= limit {
            return Err(CalcError::Internal(format!(
                "no progress within {limit} states between {initial} and {target} (step bound {})",
                bound.value
            )));
        }
        let candidate = next_candidate(&state, &ctx)?;
        let mut space = candidate.space;
        let mut delegated = false;
        let mut note = candidate.note;
        if candidate.allow_delegation && !in_domain(&space, op) {
            space = clamp_realisation(&space, op);
            delegated = true;
            note = Some("condition (i) failed for the capped state; smoothness raised to r + 1/p - 1 + eps".into());
        }
        if !delegated && !(is_derivable(&raised, &space) && is_derivable(&goal, &space)) {
            // B^{s}_{∞,∞} does not reach F^{s}_{p,∞}; give up one ε
            space = space.with_s(space.s.shift_eps(-1));
        }
        let next = make_state(state.j + 1, space, op)?;
        let (nonlinear_proof, data_proof) = if delegated {
            (None, None)
        } else {
            let a = embeds(&raised, &next.space)?;
            let b = embeds(&goal, &next.space)?;
            match (a, b) {
                (Some(a), Some(b)) => (Some(a), Some(b)),
                (a, b) => {
                    return Err(CalcError::Internal(format!(
                        "{:?} move from {} to {}: missing embedding (nonlinear {}, data {})",
                        candidate.tag,
                        state.space,
                        next.space,
                        a.is_some(),
                        b.is_some()
                    )))
                }
            }
        };
        let index = moves.len();
        if delegated {
            annotations.push(Annotation {
                kind: "delegated".into(),
                move_index: Some(index),
                text: "R0 g(.) is defined on the next space since p > 1 there; the rule set alone does not justify it"
                    .into(),
            });
        }
        if candidate.gain_bound.is_none() {
            annotations.push(Annotation {
                kind: "line-walk".into(),
                move_index: Some(index),
                text: "states on or above both s = s_j + delta_j and the target line; progress measured by s".into(),
            });
        }
        let gain = &next.line_value - &state.line_value;
        moves.push(Move {
            tag: candidate.tag,
            from: state.j,
            side_conditions: candidate.side_conditions,
            gain: Some(gain),
            gain_bound: candidate.gain_bound,
            nodes: vec![
                PARAMETRIX_NODE.into(),
                format!("composition gain: R0 g(u) in {raised}"),
            ],
            nonlinear_proof,
            data_proof,
            delegated,
            note,
        });
        states.push(next);
    }
}

fn replay_move_conditions(mv: &Move, state: &PlannerState, next: Option<&PlannerState>, ctx: &Context) -> bool {
    let t = state.space.np();
    let t0 = ctx.goal.np();
    let line_test = ctx.goal_line >= state.line_value;
    let cond_i = ExtReal::exact(t.clone()) >= state.delta;
    let cond_ii = beyond_threshold(&t, &t0);
    let raised = &state.space.s + &state.delta;
    match mv.tag {
        MoveTag::Sobolev1 => line_test && cond_i && cond_ii,
        MoveTag::Flatten2 => {
            line_test
                && !cond_i
                && cond_ii
                && next.is_some_and(|n| n.space.np().is_zero() && settles_to(&n.space.s, &state.line_value))
        }
        MoveTag::Upward3 => line_test && !cond_ii && next.is_some_and(|n| n.space.np() == t && settles_to(&n.space.s, &raised)),
        MoveTag::MainUpward => {
            !line_test
                && (raised < ctx.goal.s
                    || nonlinear_space(state).is_ok_and(|sp| !is_derivable(&sp, &ctx.goal)))
        }
        MoveTag::FinalEmbed => raised >= ctx.goal.s && state.line_value >= ctx.goal_line,
    }
}

/// Independent replay of a certificate: memberships, margins, move
/// conditions, gains, embedding proofs and the chain structure.
pub fn validate_certificate(cert: &BootstrapCertificate, op: &OperatorSpec) -> bool {
    validate_inner(cert, op).is_ok()
}

/// As [`validate_certificate`], naming the first failed check.
pub fn validate_inner(cert: &BootstrapCertificate, op: &OperatorSpec) -> std::result::Result<(), String> {
    let fail = |msg: String| Err(msg);
    for space in [&cert.initial, &cert.target] {
        if !in_domain(space, op) {
            return fail(format!("{space} is not in the domain"));
        }
    }
    let Ok(goal) = working_target(&cert.target) else {
        return fail("target cannot be normalised".into());
    };
    if goal != cert.working_target || cert.upgrade.from != goal || cert.upgrade.to != cert.target {
        return fail("working target or upgrade node mismatch".into());
    }
    let Some(first) = cert.states.first() else {
        return fail("no states".into());
    };
    if cert.initial_proof.source != cert.initial || cert.initial_proof.target != first.space || !validate_proof(&cert.initial_proof) {
        return fail("initial normalisation proof does not replay".into());
    }
    for (j, state) in cert.states.iter().enumerate() {
        let expected = match normalized(&state.space, state.space.s.clone()) {
            Ok(sp) => sp,
            Err(e) => return fail(format!("state {j}: {e}")),
        };
        if state.j != j || state.space != expected {
            return fail(format!("state {j} is not a planner space"));
        }
        let Ok(d) = delta(&state.space.s, &state.space.u, state.space.n) else {
            return fail(format!("state {j}: margin undefined"));
        };
        if d != state.delta || line_value(&state.space, &d) != state.line_value {
            return fail(format!("state {j}: recorded margin or line value differs"));
        }
        if !in_domain(&state.space, op) || !state.in_domain || !d.base.is_positive() {
            return fail(format!("state {j} is outside the domain"));
        }
    }
    if let Ok(bound) = step_bound(&cert.initial, &cert.target) {
        if bound != cert.step_bound {
            return fail("step bound mismatch".into());
        }
    } else {
        return fail("step bound not computable".into());
    }
    if cert.initial == cert.target {
        return if cert.moves.is_empty()
            && cert.states.len() == 1
            && cert.final_proof == EmbeddingProof::identity(&cert.target)
        {
            Ok(())
        } else {
            fail("identity certificate is malformed".into())
        };
    }
    let ctx = Context {
        goal_line: goal.s.sub_rational(&goal.np()),
        delta1: first.delta.clone(),
        goal: goal.clone(),
    };
    if cert.moves.len() != cert.states.len() {
        return fail("one move per state expected".into());
    }
    for (i, mv) in cert.moves.iter().enumerate() {
        let state = &cert.states[i];
        let next = cert.states.get(i + 1);
        let last = i + 1 == cert.moves.len();
        if mv.from != i || (mv.tag == MoveTag::FinalEmbed) != last {
            return fail(format!("move {i} is out of sequence"));
        }
        if !mv.side_conditions.iter().all(|c| c.holds) || !replay_move_conditions(mv, state, next, &ctx) {
            return fail(format!("move {i} ({:?}): side conditions do not replay", mv.tag));
        }
        let Ok(raised) = nonlinear_space(state) else {
            return fail(format!("move {i}: nonlinear space"));
        };
        if last {
            if cert.final_proof.source != raised || cert.final_proof.target != goal || !validate_proof(&cert.final_proof) {
                return fail("final embedding does not replay".into());
            }
            continue;
        }
        let next = next.expect("non-final move has a successor");
        let gain = &next.line_value - &state.line_value;
        if mv.gain.as_ref() != Some(&gain) {
            return fail(format!("move {i}: recorded gain differs"));
        }
        if let Some(bound) = &mv.gain_bound {
            let required = match mv.tag {
                MoveTag::Sobolev1 if mv.note.is_none() => ctx.delta1.clone(),
                MoveTag::Flatten2 => ctx.delta1.clone(),
                MoveTag::Upward3 => ExtReal::exact(alpha_floor(&state.space.np())),
                _ => strictly_positive(),
            };
            if *bound < required || gain < *bound {
                return fail(format!("move {i}: gain {gain} below bound {bound}"));
            }
        } else if mv.tag != MoveTag::MainUpward {
            return fail(format!("move {i}: missing gain bound"));
        }
        if mv.delegated {
            if mv.nonlinear_proof.is_some() || mv.data_proof.is_some() || mv.tag != MoveTag::Sobolev1 {
                return fail(format!("move {i}: malformed delegated move"));
            }
            continue;
        }
        let (Some(a), Some(b)) = (&mv.nonlinear_proof, &mv.data_proof) else {
            return fail(format!("move {i}: missing proofs"));
        };
        if a.source != raised || a.target != next.space || b.source != goal || b.target != next.space {
            return fail(format!("move {i}: proof endpoints do not match the states"));
        }
        if !validate_proof(a) || !validate_proof(b) {
            return fail(format!("move {i}: embedding proof does not replay"));
        }
    }
    if !cert.upgrade.side_conditions.iter().all(|c| c.holds) {
        return fail("upgrade node".into());
    }
    Ok(())
}

/// Convenience for reporting: the sequence of abscissas and smoothness values.
pub fn trace(cert: &BootstrapCertificate) -> Vec<(Rational, ExtReal)> {
    cert.states.iter().map(|st| (st.space.np(), st.space.s.clone())).collect()
}

impl BootstrapCertificate {
    pub fn move_tags(&self) -> Vec<MoveTag> {
        self.moves.iter().map(|m| m.tag).collect()
    }

    pub fn within_step_bound(&self) -> bool {
        self.states.len() as u64 <= self.step_bound.value
    }

    /// Whether the line value increases strictly from each state to the next.
    pub fn line_value_strictly_increasing(&self) -> bool {
        self.states.windows(2).all(|w| w[1].line_value > w[0].line_value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::ratio;

    fn f(s: ExtReal, t: Rational, n: u32) -> SpaceParams {
        state_space(s, &t, n).unwrap()
    }

    #[test]
    fn worked_example_first_move() {
        let op = OperatorSpec::with_class(1).unwrap();
        let initial = f(ExtReal::exact(ratio(3, 2)), int(7), 12);
        let target = f(ExtReal::new(ratio(11, 2), -1), int(6), 12);
        let cert = plan_bootstrap(&initial, &target, &op).unwrap();
        assert_eq!(cert.states[0].delta, ExtReal::exact(ratio(41, 26)));
        assert_eq!(cert.moves[0].tag, MoveTag::Sobolev1);
        assert_eq!(cert.states[1].space.np(), ratio(141, 26));
        assert_eq!(cert.moves.last().unwrap().tag, MoveTag::FinalEmbed);
        assert_eq!(validate_inner(&cert, &op), Ok(()));
    }

    #[test]
    fn identity_pair() {
        let op = OperatorSpec::with_class(1).unwrap();
        let space = f(ExtReal::exact(int(3)), int(1), 2);
        let cert = plan_bootstrap(&space, &space, &op).unwrap();
        assert!(cert.moves.is_empty());
        assert!(cert.final_proof.steps.is_empty());
        assert!(validate_certificate(&cert, &op));
    }

    #[test]
    fn immediate_final_embedding() {
        let op = OperatorSpec::with_class(1).unwrap();
        let initial = f(ExtReal::exact(ratio(5, 2)), int(1), 2);
        let target = f(ExtReal::exact(int(2)), int(1), 2);
        let cert = plan_bootstrap(&initial, &target, &op).unwrap();
        assert_eq!(cert.move_tags(), vec![MoveTag::FinalEmbed]);
        assert!(validate_certificate(&cert, &op));
    }

    #[test]
    fn tampering_is_detected() {
        let op = OperatorSpec::with_class(1).unwrap();
        let initial = f(ExtReal::exact(ratio(3, 2)), int(7), 12);
        let target = f(ExtReal::new(ratio(11, 2), -1), int(6), 12);
        let cert = plan_bootstrap(&initial, &target, &op).unwrap();

        let mut bumped = cert.clone();
        let st = &mut bumped.states[1];
        st.space = st.space.with_s(st.space.s.add_rational(&int(1)));
        assert!(!validate_certificate(&bumped, &op));

        let mut retagged = cert.clone();
        if let Some(mv) = retagged.moves.iter_mut().find(|m| m.tag == MoveTag::Upward3) {
            mv.tag = MoveTag::Sobolev1;
            assert!(!validate_certificate(&retagged, &op));
        }

        let mut dropped = cert.clone();
        dropped.states.remove(1);
        assert!(!validate_certificate(&dropped, &op));
    }

    #[test]
    fn outside_domain_is_rejected() {
        let op = OperatorSpec::with_class(1).unwrap();
        let bad = f(ExtReal::exact(ratio(1, 2)), int(7), 12);
        let good = f(ExtReal::exact(int(3)), int(1), 12);
        assert!(matches!(plan_bootstrap(&bad, &good, &op), Err(CalcError::NotInDomain(_))));
    }

    #[test]
    fn alpha_floor_is_strict() {
        assert!(alpha_floor(&int(1)) < int(2));
        assert!(alpha_floor(&int(4)) < int(1));
        assert!(alpha_floor(&int(4)) > ratio(65535, 65536) - ratio(1, 65536));
        assert!(alpha_floor(&int(0)) < int(1));
    }
}
