//! Desk-scale probes of limit and ascending-chain phenomena over
//! parameterized families: per-member F-pure threshold bounds, certified
//! ordering of consecutive members, ascending-run detection, and a
//! finite-tail limit estimate.

use std::cmp::Ordering;

use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::fpt::{fpt_bounds, FptBounds};
use crate::poly::{parse_poly, PrimeChar};
use crate::rat::Rat;

/// A one-parameter family f_m of principal ideals given by a polynomial
/// template with integer-exponent slots: every standalone identifier `m`
/// in the template is replaced by the decimal value of the parameter
/// before parsing, so instantiation is total once the template validates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    pub p: u64,
    pub nvars: usize,
    pub template: String,
    pub m_lo: u64,
    pub m_hi: u64,
}

impl FamilySpec {
    pub fn new(p: u64, nvars: usize, template: &str, m_lo: u64, m_hi: u64) -> Result<Self> {
        if m_lo < 1 || m_lo > m_hi {
            return Err(Error::Precondition(
                "family range requires 1 <= m_lo <= m_hi".into(),
            ));
        }
        let spec = FamilySpec {
            p,
            nvars,
            template: template.to_string(),
            m_lo,
            m_hi,
        };
        // validate once up front: every instantiation must parse
        spec.instantiate(m_lo)?;
        Ok(spec)
    }

    /// The member polynomial text for parameter value `m`.
    pub fn member_text(&self, m: u64) -> String {
        substitute_parameter(&self.template, m)
    }

    pub fn instantiate(&self, m: u64) -> Result<crate::poly::Poly> {
        let char = PrimeChar::new(self.p)?;
        parse_poly(&self.member_text(m), self.nvars, char)
    }
}

/// Replace each standalone identifier `m` (not part of a longer name or
/// number) by the decimal parameter value.
fn substitute_parameter(template: &str, m: u64) -> String {
    let chars: Vec<char> = template.chars().collect();
    let mut out = String::with_capacity(template.len() + 4);
    let is_word = |c: char| c.is_ascii_alphanumeric() || c == '_';
    for (i, &c) in chars.iter().enumerate() {
        let prev_word = i > 0 && is_word(chars[i - 1]);
        let next_word = i + 1 < chars.len() && is_word(chars[i + 1]);
        if c == 'm' && !prev_word && !next_word {
            out.push_str(&m.to_string());
        } else {
            out.push(c);
        }
    }
    out
}

/// How two consecutive members compare, by certified interval ordering:
/// intervals must be disjoint to order, or exactly equal to tie.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOrder {
    Increase,
    Decrease,
    Equal,
    Incomparable,
}

/// Report of a family scan. `values` holds one entry per parameter in
/// range; members whose evaluation failed carry the error text instead of
/// bounds, and the scan continues past them.
#[derive(Debug, Clone)]
pub struct ChainReport {
    pub family: FamilySpec,
    pub values: Vec<(u64, std::result::Result<FptBounds, String>)>,
    /// Index intervals [i, j] into `values` (inclusive) along which every
    /// consecutive certified comparison is a strict increase.
    pub ascending_runs: Vec<(usize, usize)>,
    /// Pairs of consecutive indices whose bound intervals overlap without
    /// being equal; these are never silently ordered.
    pub incomparable: Vec<(usize, usize)>,
    pub limit_estimate: Option<LimitEstimate>,
}

/// A finite-tail limit estimate with its supporting note. The note always
/// records that this is numerical evidence from a finite sequence, not a
/// computed limit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitEstimate {
    pub value: Rat,
    pub note: String,
}

/// Compare two bound intervals: disjoint intervals order strictly,
/// identical exact values tie, and overlapping intervals are incomparable.
fn compare_bounds(a: &FptBounds, b: &FptBounds) -> StepOrder {
    if let (Some(x), Some(y)) = (&a.exact, &b.exact) {
        return match x.cmp(y) {
            Ordering::Less => StepOrder::Increase,
            Ordering::Greater => StepOrder::Decrease,
            Ordering::Equal => StepOrder::Equal,
        };
    }
    if a.upper < b.lower {
        StepOrder::Increase
    } else if b.upper < a.lower {
        StepOrder::Decrease
    } else {
        StepOrder::Incomparable
    }
}

/// Evaluate every member of the family and assemble the ordered report:
/// per-member bounds (errors recorded, scan continues), certified
/// consecutive comparisons, maximal strictly ascending runs, and the
/// finite-tail limit estimate when enough members are exactly certified.
pub fn scan_family(fam: &FamilySpec, n_max: u32, budgets: &Budgets) -> Result<ChainReport> {
    let mut values = Vec::new();
    for m in fam.m_lo..=fam.m_hi {
        let entry = fam
            .instantiate(m)
            .and_then(|f| fpt_bounds(&f, n_max, budgets));
        values.push((m, entry.map_err(|e| e.to_string())));
    }

    let mut ascending_runs = Vec::new();
    let mut incomparable = Vec::new();
    let mut run_start: Option<usize> = None;
    for i in 1..values.len() {
        let step = match (&values[i - 1].1, &values[i].1) {
            (Ok(a), Ok(b)) => compare_bounds(a, b),
            _ => StepOrder::Incomparable,
        };
        if step == StepOrder::Incomparable
            && matches!((&values[i - 1].1, &values[i].1), (Ok(_), Ok(_)))
        {
            incomparable.push((i - 1, i));
        }
        match step {
            StepOrder::Increase => {
                if run_start.is_none() {
                    run_start = Some(i - 1);
                }
            }
            _ => {
                if let Some(s) = run_start.take() {
                    ascending_runs.push((s, i - 1));
                }
            }
        }
    }
    if let Some(s) = run_start.take() {
        ascending_runs.push((s, values.len() - 1));
    }

    let mut report = ChainReport {
        family: fam.clone(),
        values,
        ascending_runs,
        incomparable,
        limit_estimate: None,
    };
    report.limit_estimate = estimate_limit(&report).ok();
    Ok(report)
}

/// Extrapolate the tail of the certified exact values: a constant tail
/// yields the constant, otherwise the affine-in-1/m model through the last
/// two distinct points, with the third-from-last point checked for
/// consistency. Requires at least three exactly certified members.
pub fn estimate_limit(report: &ChainReport) -> Result<LimitEstimate> {
    let exact: Vec<(u64, Rat)> = report
        .values
        .iter()
        .filter_map(|(m, r)| {
            r.as_ref()
                .ok()
                .and_then(|b| b.exact.clone())
                .map(|v| (*m, v))
        })
        .collect();
    if exact.len() < 3 {
        return Err(Error::InsufficientData {
            need: 3,
            have: exact.len(),
        });
    }
    let (m2, v2) = exact[exact.len() - 1].clone();
    let (m1, v1) = exact[exact.len() - 2].clone();
    let (m0, v0) = exact[exact.len() - 3].clone();
    if v0 == v1 && v1 == v2 {
        return Ok(LimitEstimate {
            value: v2,
            note: "constant tail; finite-sequence evidence only".to_string(),
        });
    }
    if v1 == v2 {
        return Ok(LimitEstimate {
            value: v2,
            note: "tail stabilized over the last two members; \
                   finite-sequence evidence only"
                .to_string(),
        });
    }
    // affine model v(m) = a + b/m through the last two points
    let inv = |m: u64| Rat::new(1, m as i64);
    let (x1, x2) = (inv(m1), inv(m2));
    let slope = &(&v1 - &v2) / &(&x1 - &x2);
    let a = &v2 - &(&slope * &x2);
    let predicted0 = &a + &(&slope * &inv(m0));
    let note = if predicted0 == v0 {
        "affine-in-1/m fit through the last two members, consistent with \
         the third-from-last; finite-sequence evidence only"
            .to_string()
    } else {
        format!(
            "affine-in-1/m fit through the last two members; \
             third-from-last deviates (predicted {predicted0}, got {v0}); \
             finite-sequence evidence only"
        )
    };
    Ok(LimitEstimate { value: a, note })
}
