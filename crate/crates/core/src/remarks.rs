//! Exact verification of the implications between conditions (ii) and (iii)
//! and of the asymptotics of the borderline hyperbola.
//!
//! For `n ≥ 2` and `p < 1` write `t = n/p`. Then (ii) reads
//! `s > t − n/(t−n)` and the upper half of (iii) reads `s > h₁(t)`. Their
//! comparison reduces to the quadratic `t² − (n+3)t + n` with roots
//! `α±(n) = ½(n+3 ± √(n²+2n+9))`.

use std::cmp::Ordering;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::composition::{asymptote_gaps, class2_redundancy, discriminant, hyperbola_branches};
use crate::error::{CalcError, Result};
use crate::numeric::{cmp_rational_vs_surd, format_rational, int, ratio, Rational, Surd};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseVerdict {
    pub case: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimCheck {
    pub id: String,
    pub statement: String,
    pub passed: bool,
    pub cases: Vec<CaseVerdict>,
}

impl ClaimCheck {
    fn new(id: &str, statement: &str, cases: Vec<CaseVerdict>) -> Self {
        let passed = !cases.is_empty() && cases.iter().all(|c| c.holds);
        ClaimCheck { id: id.into(), statement: statement.into(), passed, cases }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RemarkReport {
    pub n_max: u32,
    pub passed: bool,
    pub claims: Vec<ClaimCheck>,
}

fn case(label: impl Into<String>, holds: bool) -> CaseVerdict {
    CaseVerdict { case: label.into(), holds }
}

/// `α₊(n)` and `α₋(n)`.
pub fn alpha(n: u32) -> (Surd, Surd) {
    let n = int(n as i64);
    let mid = (&n + int(3)) * ratio(1, 2);
    let c = &n * &n + int(2) * &n + int(9);
    (Surd::new(mid.clone(), ratio(1, 2), c.clone()), Surd::new(mid, ratio(-1, 2), c))
}

/// `n(n−1)/(n−2)` for `n ≥ 3`.
fn pole(n: u32) -> Rational {
    let n = n as i64;
    ratio(n * (n - 1), n - 2)
}

/// Rational sample points `t > 3+√8` used for the per-`t` checks.
fn samples_above_vertex() -> Vec<Rational> {
    let mut out: Vec<Rational> = (0..=96).map(|k| ratio(47, 8) + ratio(k, 4)).collect();
    out.extend([int(50), int(100), int(1000), int(10_000)]);
    out
}

/// Whether `t − 3 − 2n/(t−n) ≤ √((t−3)² − 8)`, i.e. (iii)′ implies (ii)′ at `t`.
pub fn upper_branch_dominates(n: u32, t: &Rational) -> bool {
    let n_r = int(n as i64);
    let lhs = t - int(3) - int(2) * &n_r / (t - &n_r);
    cmp_rational_vs_surd(&lhs, &Rational::zero(), &Rational::one(), &discriminant(t)) != Ordering::Greater
}

pub fn remark_implication_suite(n_max: u32) -> Result<RemarkReport> {
    if n_max < 2 {
        return Err(CalcError::Contract("the remark suite needs nMax >= 2".into()));
    }
    let vertex = Surd::vertex();
    let mut claims = Vec::new();

    let mut roots = Vec::new();
    for n in 2..=n_max {
        let (plus, minus) = alpha(n);
        let n_r = int(n as i64);
        let above = plus.cmp_rational(&n_r) == Ordering::Greater;
        let below = minus.cmp_rational(&n_r) == Ordering::Less && minus.cmp_surd(&vertex) == Ordering::Less;
        roots.push(case(format!("n={n}"), above && below));
    }
    claims.push(ClaimCheck::new(
        "alpha-roots",
        "alpha+(n) > n and alpha-(n) < min(n, 3+sqrt8)",
        roots,
    ));

    let mut pole_cases = Vec::new();
    for n in 3..=n_max {
        let (plus, _) = alpha(n);
        let below_alpha = plus.cmp_rational(&pole(n)) == Ordering::Greater;
        pole_cases.push(case(format!("n={n}: pole < alpha+ is {below_alpha}"), below_alpha == (n >= 4)));
    }
    claims.push(ClaimCheck::new(
        "pole-vs-alpha",
        "n(n-1)/(n-2) < alpha+(n) iff n >= 4",
        pole_cases,
    ));

    // with the inequality read as `≤`, the quadratic factor is nonnegative
    // on all of [max(α₊, 3+√8), ∞[
    let mut beyond = Vec::new();
    for n in 4..=n_max {
        let (plus, _) = alpha(n);
        let p = pole(n);
        let dominated = plus.cmp_rational(&p) != Ordering::Less || vertex.cmp_rational(&p) != Ordering::Less;
        beyond.push(case(format!("n={n}"), dominated));
    }
    claims.push(ClaimCheck::new(
        "pole-below-threshold",
        "n(n-1)/(n-2) <= max(alpha+(n), 3+sqrt8) for n >= 4, so (iii)' implies (ii)' wherever both apply",
        beyond,
    ));

    let mut three = Vec::new();
    let (plus3, _) = alpha(3);
    three.push(case(
        "alpha+(3) = 3+sqrt6",
        plus3.cmp_surd(&Surd::new(int(3), int(1), int(6))) == Ordering::Equal,
    ));
    three.push(case("alpha+(3) < 6 = n(n-1)/(n-2)", plus3.cmp_rational(&pole(3)) == Ordering::Less));
    for t in (0..=160).map(|k| int(6) + ratio(k, 8)).chain([int(100), int(1000)]) {
        three.push(case(format!("t={}", format_rational(&t)), upper_branch_dominates(3, &t)));
    }
    claims.push(ClaimCheck::new(
        "n3-upper-branch",
        "n = 3: t - 3 - 2n/(t-n) <= sqrt((t-3)^2 - 8) on t >= 6",
        three,
    ));

    let mut two = Vec::new();
    let (plus2, _) = alpha(2);
    two.push(case("alpha+(2) < 3+sqrt8", plus2.cmp_surd(&vertex) == Ordering::Less));
    for t in samples_above_vertex() {
        // (n−2)t² − n(n−1)t with n = 2 is −2t
        let quadratic_fails = int(-2) * &t < Rational::zero();
        let threshold = &t - int(2) / (&t - int(2));
        let upper = hyperbola_branches(&t)?.upper;
        let implied = upper.cmp_rational(&threshold) != Ordering::Greater;
        two.push(case(format!("t={}", format_rational(&t)), quadratic_fails && implied));
    }
    claims.push(ClaimCheck::new(
        "n2-degeneration",
        "n = 2 => (ii)' implies (iii)': 0 <= -2t fails for t > 0 and alpha+(2) < 3+sqrt8",
        two,
    ));

    let passed = claims.iter().all(|c| c.passed);
    Ok(RemarkReport { n_max, passed, claims })
}

/// Sign, decay and leading-term checks for `h₁(t) − t` and `h₂(t) − 3`.
pub fn asymptote_claims() -> Result<Vec<ClaimCheck>> {
    let ts = [6, 8, 11, 20, 50, 100].map(int);
    let mut signs = Vec::new();
    let mut decay = Vec::new();
    let mut previous: Option<(Surd, Surd)> = None;
    for t in &ts {
        let (upper, lower) = asymptote_gaps(t)?;
        signs.push(case(
            format!("t={}", format_rational(t)),
            upper.sign() == Ordering::Less && lower.sign() == Ordering::Greater,
        ));
        if let Some((pu, pl)) = &previous {
            // gaps shrink: upper rises towards 0, lower falls towards 0
            decay.push(case(
                format!("t={}", format_rational(t)),
                upper.cmp_surd(pu) == Ordering::Greater && lower.cmp_surd(pl) == Ordering::Less,
            ));
        }
        previous = Some((upper, lower));
    }
    let t = int(100);
    let (upper, lower) = asymptote_gaps(&t)?;
    let lead = int(-2) / (&t - int(3));
    let leading = vec![
        case(
            "t=100: h1(t) - t within factor 2 of -2/(t-3)",
            upper.cmp_rational(&(&lead * int(2))) == Ordering::Greater
                && upper.cmp_rational(&(&lead / int(2))) == Ordering::Less,
        ),
        case(
            "t=100: h2(t) - 3 within factor 2 of 2/(t-3)",
            lower.cmp_rational(&(-&lead * int(2))) == Ordering::Less
                && lower.cmp_rational(&(-&lead / int(2))) == Ordering::Greater,
        ),
    ];
    Ok(vec![
        ClaimCheck::new("asymptote-signs", "h1(t) - t < 0 and h2(t) - 3 > 0", signs),
        ClaimCheck::new("asymptote-decay", "both gaps tend to 0 as t grows", decay),
        ClaimCheck::new("asymptote-leading-term", "h1(t) - t = -2/(t-3) + O((t-3)^-3)", leading),
    ])
}

/// Class-2 redundancy against the direct inequality on a grid of `p < 1`.
pub fn class2_claim(n_max: u32) -> Result<ClaimCheck> {
    let mut cases = Vec::new();
    for n in 1..=n_max {
        for k in 1..16 {
            let p = ratio(k, 16);
            let u = p.recip();
            let t = int(n as i64) * &u;
            let lhs = &t - &p / (Rational::one() - &p);
            let rhs = &t - int(n as i64) + int(2);
            let redundant = class2_redundancy(n, &u)?;
            cases.push(case(format!("n={n}, p={}", format_rational(&p)), redundant == (lhs <= rhs)));
        }
    }
    Ok(ClaimCheck::new(
        "class2-redundancy",
        "n/p - p/(1-p) <= n/p - n + 2 iff p(n-1) >= n-2",
        cases,
    ))
}

/// Everything checked by `verify-remarks`.
pub fn verify_remarks(n_max: u32) -> Result<RemarkReport> {
    if n_max < 4 {
        return Err(CalcError::Contract("verify-remarks needs nMax >= 4".into()));
    }
    let mut report = remark_implication_suite(n_max)?;
    report.claims.push(class2_claim(n_max)?);
    report.claims.extend(asymptote_claims()?);
    report.passed = report.claims.iter().all(|c| c.passed);
    Ok(report)
}
