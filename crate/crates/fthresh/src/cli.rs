//! Command-line front end: argument parsing, job files, and bit-exact
//! JSON/CSV report formats.
//!
//! Reports are deterministic byte-for-byte: field order is fixed, all
//! rationals are exact strings "u/v", and no floating point appears
//! anywhere. Exit codes: 0 success (including UNKNOWN answers), 2 for
//! syntax/schema problems, 3 for violated mathematical preconditions,
//! 4 for exhausted resource budgets.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::chains::{scan_family, FamilySpec};
use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::fpt::{
    fpt_bounds, fpt_pair_bounds, reduce_pair_to_ideal, FptBounds, LowerWitness, UpperWitness,
};
use crate::frobenius::{ci_check, fedder_pair_check, nu_invariant, FedderDecision};
use crate::groebner::IdealHandle;
use crate::poly::{parse_poly, Monomial, Poly, PrimeChar};
use crate::rat::Rat;
use crate::testideal::{
    jumping_numbers, ntau, orbit_discreteness, test_ideal, DivisorSpec, Factor, MixedExponent,
};

/// Exact-arithmetic invariants of prime-characteristic singularities.
#[derive(Parser, Debug)]
#[command(name = "fthresh", version, disable_help_subcommand = true)]
pub struct Cli {
    /// Emit the flat CSV projection instead of JSON.
    #[arg(long, global = true)]
    pub csv: bool,
    #[command(subcommand)]
    pub cmd: Cmd,
}

/// Budget overrides; unset values fall back to `FTHRESH_BUDGET_*`
/// environment variables, then to the built-in defaults.
#[derive(Args, Debug, Clone)]
pub struct BudgetArgs {
    /// Levels n probed in nu/mu sweeps and Fedder checks.
    #[arg(long)]
    pub nmax: Option<u32>,
    /// Maximum number of block steps in test-ideal chains.
    #[arg(long)]
    pub emax: Option<u32>,
    /// Bound on candidate denominators in jump searches.
    #[arg(long)]
    pub denom_bound: Option<u64>,
    /// Consecutive agreeing perturbation levels for the left limit.
    #[arg(long)]
    pub sweep: Option<u32>,
}

impl BudgetArgs {
    fn resolve(&self) -> Budgets {
        let mut b = Budgets::from_env();
        if let Some(v) = self.nmax {
            b.n_max = v;
        }
        if let Some(v) = self.emax {
            b.e_max = v;
        }
        if let Some(v) = self.denom_bound {
            b.denom_bound = v;
        }
        if let Some(v) = self.sweep {
            b.sweep = v;
        }
        b
    }
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// The nu-invariant of f at level q = p^e, with its witness monomial.
    Nu {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        vars: usize,
        /// Frobenius level e; q = p^e.
        #[arg(long, default_value_t = 1)]
        e: u32,
        poly: String,
        #[command(flatten)]
        budgets: BudgetArgs,
    },
    /// Certified bounds (exact when the certificates close) on fpt(A; (f)).
    Fpt {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        vars: usize,
        poly: String,
        #[command(flatten)]
        budgets: BudgetArgs,
    },
    /// Certified bounds on the pair threshold fpt(A, div(f)/(p^e-1); a).
    FptPair {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = 1)]
        e: u32,
        /// Comma-separated ideal generators.
        #[arg(long)]
        ideal: String,
        #[command(flatten)]
        budgets: BudgetArgs,
    },
    /// Sharp F-purity of the pair at exponent t (PURE or UNKNOWN).
    Fedder {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = 1)]
        e: u32,
        #[arg(long)]
        ideal: String,
        /// Exponent t as an exact rational "u/v".
        #[arg(long)]
        t: String,
        #[command(flatten)]
        budgets: BudgetArgs,
    },
    /// The test ideal tau(A, f^t a^s) via the stabilizing chain.
    Tau {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        f: Option<String>,
        #[arg(long)]
        t: Option<String>,
        #[arg(long)]
        ideal: Option<String>,
        #[arg(long)]
        s: Option<String>,
        #[command(flatten)]
        budgets: BudgetArgs,
    },
    /// The left-limit test ideal tau_-(A, mult*div(f), a^t).
    Ntau {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = 1)]
        e: u32,
        /// Divisor multiplier as "u/v".
        #[arg(long, default_value = "1")]
        mult: String,
        #[arg(long)]
        ideal: Option<String>,
        #[arg(long, default_value = "0")]
        t: String,
        #[command(flatten)]
        budgets: BudgetArgs,
    },
    /// F-jumping numbers of (mult*div(f), a^t) over [lo, hi].
    Jumps {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        f: Option<String>,
        #[arg(long, default_value_t = 1)]
        e: u32,
        #[arg(long, default_value = "1")]
        mult: String,
        #[arg(long)]
        ideal: String,
        #[arg(long, default_value = "0")]
        lo: String,
        #[arg(long)]
        hi: String,
        #[command(flatten)]
        budgets: BudgetArgs,
    },
    /// Eventual periodicity of the orbit of t under multiplication by q
    /// at fixed denominator level l.
    Orbit {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 1)]
        l: u64,
        t: String,
        #[command(flatten)]
        budgets: BudgetArgs,
    },
    /// The pair-to-ideal reduction b = (f^v) * a^{u(p^e-1)} at t = u/v.
    Reduce {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = 1)]
        e: u32,
        #[arg(long)]
        ideal: String,
        #[arg(long)]
        t: String,
        #[command(flatten)]
        budgets: BudgetArgs,
    },
    /// Sharp F-purity of a complete intersection cut out by the factors.
    CiCheck {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        vars: usize,
        /// A defining factor; repeat for several.
        #[arg(long = "factor", required = true)]
        factors: Vec<String>,
        #[command(flatten)]
        budgets: BudgetArgs,
    },
    /// Scan a one-parameter family described by a JSON job file.
    Chain {
        /// Path to the JSON job file.
        #[arg(long)]
        job: std::path::PathBuf,
        #[command(flatten)]
        budgets: BudgetArgs,
    },
}

/// A `chain` job file: the family template plus optional budget fields.
#[derive(Debug, Deserialize)]
pub struct ChainJob {
    pub command: String,
    pub p: u64,
    pub nvars: usize,
    pub template: String,
    pub m_lo: u64,
    pub m_hi: u64,
    #[serde(default)]
    pub n_max: Option<u32>,
}

// ---------------------------------------------------------------------
// Deterministic JSON values: insertion-ordered objects, escaped strings,
// integers only (rationals are strings).

#[derive(Debug, Clone)]
pub enum JVal {
    Null,
    Bool(bool),
    Int(i128),
    Str(String),
    Arr(Vec<JVal>),
    Obj(Vec<(String, JVal)>),
}

impl JVal {
    fn s(v: impl Into<String>) -> JVal {
        JVal::Str(v.into())
    }

    fn render(&self, out: &mut String) {
        match self {
            JVal::Null => out.push_str("null"),
            JVal::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            JVal::Int(n) => {
                let _ = write!(out, "{n}");
            }
            JVal::Str(s) => {
                out.push('"');
                for c in s.chars() {
                    match c {
                        '"' => out.push_str("\\\""),
                        '\\' => out.push_str("\\\\"),
                        '\n' => out.push_str("\\n"),
                        '\t' => out.push_str("\\t"),
                        '\r' => out.push_str("\\r"),
                        c if (c as u32) < 0x20 => {
                            let _ = write!(out, "\\u{:04x}", c as u32);
                        }
                        c => out.push(c),
                    }
                }
                out.push('"');
            }
            JVal::Arr(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    item.render(out);
                }
                out.push(']');
            }
            JVal::Obj(fields) => {
                out.push('{');
                for (i, (k, v)) in fields.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    JVal::s(k.clone()).render(out);
                    out.push(':');
                    v.render(out);
                }
                out.push('}');
            }
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = String::new();
        self.render(&mut out);
        out
    }
}

/// Flatten a report into dotted-key/value pairs for the CSV projection.
fn flatten(prefix: &str, v: &JVal, rows: &mut Vec<(String, String)>) {
    match v {
        JVal::Obj(fields) => {
            for (k, v) in fields {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, v, rows);
            }
        }
        JVal::Arr(items) => {
            for (i, item) in items.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), item, rows);
            }
        }
        JVal::Null => rows.push((prefix.to_string(), String::new())),
        JVal::Bool(b) => rows.push((prefix.to_string(), b.to_string())),
        JVal::Int(n) => rows.push((prefix.to_string(), n.to_string())),
        JVal::Str(s) => rows.push((prefix.to_string(), s.clone())),
    }
}

fn csv_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

/// Render the report document: single-line JSON by default, or a two-row
/// CSV (header, values) with dotted keys.
pub fn render_report(report: &JVal, csv: bool) -> String {
    if !csv {
        let mut out = report.to_json();
        out.push('\n');
        return out;
    }
    let mut rows = Vec::new();
    flatten("", report, &mut rows);
    let header: Vec<String> = rows.iter().map(|(k, _)| csv_quote(k)).collect();
    let values: Vec<String> = rows.iter().map(|(_, v)| csv_quote(v)).collect();
    format!("{}\n{}\n", header.join(","), values.join(","))
}

// ---------------------------------------------------------------------
// Rendering helpers for domain values.

fn monomial_string(m: &Monomial, nvars: usize) -> String {
    let parts: Vec<String> = m
        .exponents()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(v, &e)| format!("{}^{}", Poly::var_name(nvars, v), e))
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

fn ideal_json(i: &IdealHandle, budgets: &Budgets) -> Result<JVal> {
    let basis = i.reduced_basis(budgets)?;
    Ok(JVal::Arr(
        basis.iter().map(|g| JVal::s(g.to_string())).collect(),
    ))
}

fn lower_witness_json(w: &LowerWitness) -> JVal {
    match w {
        LowerWitness::Nu { n, q, nu } => JVal::Obj(vec![
            ("kind".into(), JVal::s("nu")),
            ("n".into(), JVal::Int(*n as i128)),
            ("q".into(), JVal::Int(*q as i128)),
            ("nu".into(), JVal::Int(*nu as i128)),
        ]),
        LowerWitness::Mu { n, mu } => JVal::Obj(vec![
            ("kind".into(), JVal::s("mu")),
            ("n".into(), JVal::Int(*n as i128)),
            ("mu".into(), JVal::Int(*mu as i128)),
        ]),
        LowerWitness::TrivialTau { t } => JVal::Obj(vec![
            ("kind".into(), JVal::s("trivial_tau")),
            ("t".into(), JVal::s(t.to_string())),
        ]),
    }
}

fn upper_witness_json(w: &UpperWitness) -> JVal {
    match w {
        UpperWitness::Bracket { q, nu } => JVal::Obj(vec![
            ("kind".into(), JVal::s("bracket")),
            ("q".into(), JVal::Int(*q as i128)),
            ("nu".into(), JVal::Int(*nu as i128)),
        ]),
        UpperWitness::TauJump { t } => JVal::Obj(vec![
            ("kind".into(), JVal::s("tau_jump")),
            ("t".into(), JVal::s(t.to_string())),
        ]),
        UpperWitness::MuRefuted { n, t } => JVal::Obj(vec![
            ("kind".into(), JVal::s("mu_refuted")),
            ("n".into(), JVal::Int(*n as i128)),
            ("t".into(), JVal::s(t.to_string())),
        ]),
        UpperWitness::Dim { dim } => JVal::Obj(vec![
            ("kind".into(), JVal::s("dim")),
            ("dim".into(), JVal::Int(*dim as i128)),
        ]),
    }
}

fn bounds_json(b: &FptBounds) -> JVal {
    JVal::Obj(vec![
        ("lower".into(), JVal::s(b.lower.to_string())),
        ("upper".into(), JVal::s(b.upper.to_string())),
        (
            "exact".into(),
            b.exact
                .as_ref()
                .map(|e| JVal::s(e.to_string()))
                .unwrap_or(JVal::Null),
        ),
        ("lower_witness".into(), lower_witness_json(&b.lower_witness)),
        ("upper_witness".into(), upper_witness_json(&b.upper_witness)),
    ])
}

fn budgets_json(b: &Budgets) -> JVal {
    JVal::Obj(vec![
        ("n_max".into(), JVal::Int(b.n_max as i128)),
        ("e_max".into(), JVal::Int(b.e_max as i128)),
        ("denom_bound".into(), JVal::Int(b.denom_bound as i128)),
        ("sweep".into(), JVal::Int(b.sweep as i128)),
        ("ntau_levels".into(), JVal::Int(b.ntau_levels as i128)),
        ("denominator_exponent_cap".into(), JVal::Int(b.exponent_cap as i128)),
    ])
}

fn envelope(
    command: &str,
    inputs: Vec<(String, JVal)>,
    budgets: &Budgets,
    result: JVal,
    flags: Vec<&str>,
) -> JVal {
    JVal::Obj(vec![
        ("command".into(), JVal::s(command)),
        ("version".into(), JVal::s(env!("CARGO_PKG_VERSION"))),
        ("inputs".into(), JVal::Obj(inputs)),
        ("budgets".into(), budgets_json(budgets)),
        ("result".into(), result),
        (
            "flags".into(),
            JVal::Arr(flags.into_iter().map(JVal::s).collect()),
        ),
    ])
}

// ---------------------------------------------------------------------
// Input parsing helpers.

fn parse_char(p: u64) -> Result<PrimeChar> {
    PrimeChar::new(p)
}

fn parse_rat(s: &str) -> Result<Rat> {
    s.parse()
}

fn parse_ideal(text: &str, nvars: usize, char: PrimeChar) -> Result<IdealHandle> {
    let gens: Vec<Poly> = text
        .split(',')
        .map(|g| parse_poly(g.trim(), nvars, char))
        .collect::<Result<_>>()?;
    if gens.is_empty() {
        return Err(Error::Precondition("ideal needs at least one generator".into()));
    }
    Ok(IdealHandle::new(char, nvars, gens))
}

// ---------------------------------------------------------------------
// Command execution.

/// Execute a parsed invocation, returning the rendered report document.
pub fn run(cli: &Cli) -> Result<String> {
    let report = execute(&cli.cmd)?;
    Ok(render_report(&report, cli.csv))
}

fn execute(cmd: &Cmd) -> Result<JVal> {
    match cmd {
        Cmd::Nu {
            p,
            vars,
            e,
            poly,
            budgets,
        } => {
            let b = budgets.resolve();
            let char = parse_char(*p)?;
            let f = parse_poly(poly, *vars, char)?;
            let q = p
                .checked_pow(*e)
                .filter(|&q| q <= b.exponent_cap as u64)
                .ok_or(Error::ExponentCap { cap: b.exponent_cap })?;
            let (nu, witness) = nu_invariant(&f, q)?;
            let lower = Rat::from_big(nu.into(), (q - 1).into());
            let upper = Rat::from_big((nu + 1).into(), q.into());
            let result = JVal::Obj(vec![
                ("q".into(), JVal::Int(q as i128)),
                ("nu".into(), JVal::Int(nu as i128)),
                (
                    "witness".into(),
                    JVal::s(monomial_string(&witness.surviving_monomial, *vars)),
                ),
                ("lower".into(), JVal::s(lower.to_string())),
                ("upper".into(), JVal::s(upper.to_string())),
            ]);
            Ok(envelope(
                "nu",
                vec![
                    ("p".into(), JVal::Int(*p as i128)),
                    ("vars".into(), JVal::Int(*vars as i128)),
                    ("e".into(), JVal::Int(*e as i128)),
                    ("poly".into(), JVal::s(poly.clone())),
                ],
                &b,
                result,
                vec![],
            ))
        }
        Cmd::Fpt {
            p,
            vars,
            poly,
            budgets,
        } => {
            let b = budgets.resolve();
            let char = parse_char(*p)?;
            let f = parse_poly(poly, *vars, char)?;
            let bounds = fpt_bounds(&f, b.n_max, &b)?;
            Ok(envelope(
                "fpt",
                vec![
                    ("p".into(), JVal::Int(*p as i128)),
                    ("vars".into(), JVal::Int(*vars as i128)),
                    ("poly".into(), JVal::s(poly.clone())),
                ],
                &b,
                bounds_json(&bounds),
                vec![],
            ))
        }
        Cmd::FptPair {
            p,
            vars,
            f,
            e,
            ideal,
            budgets,
        } => {
            let b = budgets.resolve();
            let char = parse_char(*p)?;
            let fp = parse_poly(f, *vars, char)?;
            let a = parse_ideal(ideal, *vars, char)?;
            let qe = p.checked_pow(*e).ok_or(Error::ExponentCap { cap: b.exponent_cap })?;
            let mult = Rat::from_big(1.into(), (qe - 1).into());
            let div = DivisorSpec::new(fp, *e, mult)?;
            let bounds = fpt_pair_bounds(&div, &a, b.n_max, &b)?;
            Ok(envelope(
                "fpt-pair",
                vec![
                    ("p".into(), JVal::Int(*p as i128)),
                    ("vars".into(), JVal::Int(*vars as i128)),
                    ("f".into(), JVal::s(f.clone())),
                    ("e".into(), JVal::Int(*e as i128)),
                    ("ideal".into(), JVal::s(ideal.clone())),
                ],
                &b,
                bounds_json(&bounds),
                vec![],
            ))
        }
        Cmd::Fedder {
            p,
            vars,
            f,
            e,
            ideal,
            t,
            budgets,
        } => {
            let b = budgets.resolve();
            let char = parse_char(*p)?;
            let fp = parse_poly(f, *vars, char)?;
            let a = parse_ideal(ideal, *vars, char)?;
            let t = parse_rat(t)?;
            let decision = fedder_pair_check(&fp, *e, &a, &t, b.n_max, &b)?;
            let (result, flags) = match decision {
                FedderDecision::Pure { n, witness } => (
                    JVal::Obj(vec![
                        ("result".into(), JVal::s("PURE")),
                        ("n".into(), JVal::Int(n as i128)),
                        (
                            "witness".into(),
                            witness
                                .map(|m| JVal::s(monomial_string(&m, *vars)))
                                .unwrap_or(JVal::Null),
                        ),
                    ]),
                    vec![],
                ),
                FedderDecision::Unknown => (
                    JVal::Obj(vec![
                        ("result".into(), JVal::s("UNKNOWN")),
                        ("n".into(), JVal::Null),
                        ("witness".into(), JVal::Null),
                    ]),
                    vec!["UNKNOWN"],
                ),
            };
            Ok(envelope(
                "fedder",
                vec![
                    ("p".into(), JVal::Int(*p as i128)),
                    ("vars".into(), JVal::Int(*vars as i128)),
                    ("f".into(), JVal::s(f.clone())),
                    ("e".into(), JVal::Int(*e as i128)),
                    ("ideal".into(), JVal::s(ideal.clone())),
                    ("t".into(), JVal::s(t.to_string())),
                ],
                &b,
                result,
                flags,
            ))
        }
        Cmd::Tau {
            p,
            vars,
            f,
            t,
            ideal,
            s,
            budgets,
        } => {
            let b = budgets.resolve();
            let char = parse_char(*p)?;
            let mut entries = Vec::new();
            if let Some(f) = f {
                let t = t
                    .as_deref()
                    .ok_or_else(|| Error::Job("--f requires --t".into()))?;
                entries.push((
                    Factor::Principal(parse_poly(f, *vars, char)?),
                    parse_rat(t)?,
                ));
            }
            if let Some(ideal) = ideal {
                let s = s
                    .as_deref()
                    .ok_or_else(|| Error::Job("--ideal requires --s".into()))?;
                entries.push((
                    Factor::Ideal(parse_ideal(ideal, *vars, char)?),
                    parse_rat(s)?,
                ));
            }
            if entries.is_empty() {
                return Err(Error::Job("tau needs --f/--t or --ideal/--s".into()));
            }
            let mix = MixedExponent::new(entries)?;
            let r = test_ideal(&mix, b.e_max, &b)?;
            let result = JVal::Obj(vec![
                ("generators".into(), ideal_json(&r.ideal, &b)?),
                ("level".into(), JVal::Int(r.level as i128)),
                ("stable".into(), JVal::Bool(r.stable)),
            ]);
            let flags = if r.stable {
                vec!["STABLE"]
            } else {
                vec!["UNSTABLE"]
            };
            Ok(envelope(
                "tau",
                vec![
                    ("p".into(), JVal::Int(*p as i128)),
                    ("vars".into(), JVal::Int(*vars as i128)),
                    (
                        "f".into(),
                        f.as_ref().map(|v| JVal::s(v.clone())).unwrap_or(JVal::Null),
                    ),
                    (
                        "t".into(),
                        t.as_ref().map(|v| JVal::s(v.clone())).unwrap_or(JVal::Null),
                    ),
                    (
                        "ideal".into(),
                        ideal
                            .as_ref()
                            .map(|v| JVal::s(v.clone()))
                            .unwrap_or(JVal::Null),
                    ),
                    (
                        "s".into(),
                        s.as_ref().map(|v| JVal::s(v.clone())).unwrap_or(JVal::Null),
                    ),
                ],
                &b,
                result,
                flags,
            ))
        }
        Cmd::Ntau {
            p,
            vars,
            f,
            e,
            mult,
            ideal,
            t,
            budgets,
        } => {
            let b = budgets.resolve();
            let char = parse_char(*p)?;
            let fp = parse_poly(f, *vars, char)?;
            let mult_r = parse_rat(mult)?;
            let div = if mult_r.is_zero() {
                DivisorSpec::zero()
            } else {
                DivisorSpec::new(fp, *e, mult_r)?
            };
            let a = match ideal {
                Some(text) => parse_ideal(text, *vars, char)?,
                None => IdealHandle::unit(char, *vars),
            };
            let t = parse_rat(t)?;
            let r = ntau(&div, &a, &t, &b)?;
            let result = JVal::Obj(vec![
                ("generators".into(), ideal_json(&r.ideal, &b)?),
                (
                    "epsilon_level".into(),
                    r.epsilon_level
                        .map(|l| JVal::Int(l as i128))
                        .unwrap_or(JVal::Null),
                ),
                ("stable".into(), JVal::Bool(r.stable)),
            ]);
            let flags = if r.stable {
                vec!["STABLE"]
            } else {
                vec!["UNSTABLE"]
            };
            Ok(envelope(
                "ntau",
                vec![
                    ("p".into(), JVal::Int(*p as i128)),
                    ("vars".into(), JVal::Int(*vars as i128)),
                    ("f".into(), JVal::s(f.clone())),
                    ("e".into(), JVal::Int(*e as i128)),
                    ("mult".into(), JVal::s(mult.clone())),
                    (
                        "ideal".into(),
                        ideal
                            .as_ref()
                            .map(|v| JVal::s(v.clone()))
                            .unwrap_or(JVal::Null),
                    ),
                    ("t".into(), JVal::s(t.to_string())),
                ],
                &b,
                result,
                flags,
            ))
        }
        Cmd::Jumps {
            p,
            vars,
            f,
            e,
            mult,
            ideal,
            lo,
            hi,
            budgets,
        } => {
            let b = budgets.resolve();
            let char = parse_char(*p)?;
            let mult_r = parse_rat(mult)?;
            let div = match f {
                Some(f) if !mult_r.is_zero() => {
                    DivisorSpec::new(parse_poly(f, *vars, char)?, *e, mult_r)?
                }
                _ => DivisorSpec::zero(),
            };
            let a = parse_ideal(ideal, *vars, char)?;
            let lo = parse_rat(lo)?;
            let hi = parse_rat(hi)?;
            let report = jumping_numbers(&div, &a, &lo, &hi, &b)?;
            let jumps: Vec<JVal> = report
                .jumps
                .iter()
                .map(|j| {
                    Ok(JVal::Obj(vec![
                        ("t".into(), JVal::s(j.t.to_string())),
                        ("left".into(), JVal::Bool(j.left)),
                        ("right".into(), JVal::Bool(j.right)),
                        ("ideal_before".into(), ideal_json(&j.ideal_before, &b)?),
                        (
                            "ideal_at_or_after".into(),
                            ideal_json(&j.ideal_at_or_after, &b)?,
                        ),
                    ]))
                })
                .collect::<Result<_>>()?;
            let unresolved: Vec<JVal> = report
                .unresolved
                .iter()
                .map(|(x, y)| {
                    JVal::Arr(vec![JVal::s(x.to_string()), JVal::s(y.to_string())])
                })
                .collect();
            let flags = if report.unresolved.is_empty() {
                vec![]
            } else {
                vec!["UNRESOLVED"]
            };
            let result = JVal::Obj(vec![
                (
                    "interval".into(),
                    JVal::Arr(vec![
                        JVal::s(report.interval.0.to_string()),
                        JVal::s(report.interval.1.to_string()),
                    ]),
                ),
                ("jumps".into(), JVal::Arr(jumps)),
                ("unresolved".into(), JVal::Arr(unresolved)),
            ]);
            Ok(envelope(
                "jumps",
                vec![
                    ("p".into(), JVal::Int(*p as i128)),
                    ("vars".into(), JVal::Int(*vars as i128)),
                    (
                        "f".into(),
                        f.as_ref().map(|v| JVal::s(v.clone())).unwrap_or(JVal::Null),
                    ),
                    ("e".into(), JVal::Int(*e as i128)),
                    ("mult".into(), JVal::s(mult.clone())),
                    ("ideal".into(), JVal::s(ideal.clone())),
                    ("lo".into(), JVal::s(lo.to_string())),
                    ("hi".into(), JVal::s(hi.to_string())),
                ],
                &b,
                result,
                flags,
            ))
        }
        Cmd::Orbit { q, l, t, budgets } => {
            let b = budgets.resolve();
            let t = parse_rat(t)?;
            let report = orbit_discreteness(&t, *q, *l, &b)?;
            let result = JVal::Obj(vec![
                ("preperiod".into(), JVal::Int(report.preperiod as i128)),
                ("period".into(), JVal::Int(report.period as i128)),
                (
                    "cycle".into(),
                    JVal::Arr(
                        report
                            .cycle
                            .iter()
                            .map(|c| JVal::s(c.to_string()))
                            .collect(),
                    ),
                ),
                ("truncated".into(), JVal::Bool(report.truncated)),
            ]);
            Ok(envelope(
                "orbit",
                vec![
                    ("q".into(), JVal::Int(*q as i128)),
                    ("l".into(), JVal::Int(*l as i128)),
                    ("t".into(), JVal::s(t.to_string())),
                ],
                &b,
                result,
                vec![],
            ))
        }
        Cmd::Reduce {
            p,
            vars,
            f,
            e,
            ideal,
            t,
            budgets,
        } => {
            let b = budgets.resolve();
            let char = parse_char(*p)?;
            let fp = parse_poly(f, *vars, char)?;
            let a = parse_ideal(ideal, *vars, char)?;
            let t = parse_rat(t)?;
            let (bi, threshold) = reduce_pair_to_ideal(&fp, *e, &a, &t, &b)?;
            let result = JVal::Obj(vec![
                ("generators".into(), ideal_json(&bi, &b)?),
                ("threshold".into(), JVal::s(threshold.to_string())),
            ]);
            Ok(envelope(
                "reduce",
                vec![
                    ("p".into(), JVal::Int(*p as i128)),
                    ("vars".into(), JVal::Int(*vars as i128)),
                    ("f".into(), JVal::s(f.clone())),
                    ("e".into(), JVal::Int(*e as i128)),
                    ("ideal".into(), JVal::s(ideal.clone())),
                    ("t".into(), JVal::s(t.to_string())),
                ],
                &b,
                result,
                vec![],
            ))
        }
        Cmd::CiCheck {
            p,
            vars,
            factors,
            budgets,
        } => {
            let b = budgets.resolve();
            let char = parse_char(*p)?;
            let polys: Vec<Poly> = factors
                .iter()
                .map(|f| parse_poly(f, *vars, char))
                .collect::<Result<_>>()?;
            let report = ci_check(&polys, &b)?;
            let result = JVal::Obj(vec![
                ("is_fpure_ci".into(), JVal::Bool(report.is_fpure_ci)),
                ("emb_bound".into(), JVal::Int(report.emb_bound as i128)),
                (
                    "witness".into(),
                    report
                        .witness
                        .map(|m| JVal::s(monomial_string(&m, *vars)))
                        .unwrap_or(JVal::Null),
                ),
            ]);
            Ok(envelope(
                "ci-check",
                vec![
                    ("p".into(), JVal::Int(*p as i128)),
                    ("vars".into(), JVal::Int(*vars as i128)),
                    (
                        "factors".into(),
                        JVal::Arr(factors.iter().map(|f| JVal::s(f.clone())).collect()),
                    ),
                ],
                &b,
                result,
                vec![],
            ))
        }
        Cmd::Chain { job, budgets } => {
            let b = budgets.resolve();
            let text = std::fs::read_to_string(job)
                .map_err(|e| Error::Job(format!("cannot read job file: {e}")))?;
            let spec: ChainJob = serde_json::from_str(&text)
                .map_err(|e| Error::Job(format!("invalid job file: {e}")))?;
            if spec.command != "chain" {
                return Err(Error::Job(format!(
                    "job command must be \"chain\", got \"{}\"",
                    spec.command
                )));
            }
            let fam = FamilySpec::new(spec.p, spec.nvars, &spec.template, spec.m_lo, spec.m_hi)?;
            let n_max = spec.n_max.unwrap_or(b.n_max);
            let report = scan_family(&fam, n_max, &b)?;
            let values: Vec<JVal> = report
                .values
                .iter()
                .map(|(m, r)| match r {
                    Ok(bounds) => JVal::Obj(vec![
                        ("m".into(), JVal::Int(*m as i128)),
                        ("bounds".into(), bounds_json(bounds)),
                        ("error".into(), JVal::Null),
                    ]),
                    Err(msg) => JVal::Obj(vec![
                        ("m".into(), JVal::Int(*m as i128)),
                        ("bounds".into(), JVal::Null),
                        ("error".into(), JVal::s(msg.clone())),
                    ]),
                })
                .collect();
            let pair_list = |pairs: &[(usize, usize)]| {
                JVal::Arr(
                    pairs
                        .iter()
                        .map(|(i, j)| {
                            JVal::Arr(vec![JVal::Int(*i as i128), JVal::Int(*j as i128)])
                        })
                        .collect(),
                )
            };
            let result = JVal::Obj(vec![
                ("values".into(), JVal::Arr(values)),
                ("ascending_runs".into(), pair_list(&report.ascending_runs)),
                ("incomparable".into(), pair_list(&report.incomparable)),
                (
                    "limit_estimate".into(),
                    report
                        .limit_estimate
                        .as_ref()
                        .map(|est| {
                            JVal::Obj(vec![
                                ("value".into(), JVal::s(est.value.to_string())),
                                ("note".into(), JVal::s(est.note.clone())),
                            ])
                        })
                        .unwrap_or(JVal::Null),
                ),
            ]);
            Ok(envelope(
                "chain",
                vec![
                    ("p".into(), JVal::Int(spec.p as i128)),
                    ("vars".into(), JVal::Int(spec.nvars as i128)),
                    ("template".into(), JVal::s(spec.template.clone())),
                    ("m_lo".into(), JVal::Int(spec.m_lo as i128)),
                    ("m_hi".into(), JVal::Int(spec.m_hi as i128)),
                    ("n_max".into(), JVal::Int(n_max as i128)),
                ],
                &b,
                result,
                vec![],
            ))
        }
    }
}

/// Parse arguments, execute, print the report, and return the process
/// exit code per the error-class contract.
pub fn run_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            eprint!("{e}");
            return 2;
        }
    };
    match run(&cli) {
        Ok(report) => {
            print!("{report}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_json(args: &[&str]) -> Result<String> {
        let mut full = vec!["fthresh"];
        full.extend_from_slice(args);
        let cli = Cli::try_parse_from(full).expect("args parse");
        run(&cli)
    }

    #[test]
    fn fpt_cusp_report() {
        let out = run_json(&["fpt", "--p", "7", "--vars", "2", "x^2+y^3"]).unwrap();
        assert!(out.contains("\"exact\":\"5/6\""), "{out}");
        assert!(out.contains("\"lower\":\"5/6\""));
        assert!(out.contains("\"upper\":\"5/6\""));
        assert!(!out.contains('.') || !out.contains("e-"), "no floats");
    }

    #[test]
    fn orbit_report_matches_contract() {
        let out = run_json(&["orbit", "--q", "2", "--l", "1", "1/2"]).unwrap();
        assert!(out.contains("\"preperiod\":1"), "{out}");
        assert!(out.contains("\"period\":1"), "{out}");
        assert!(out.contains("\"cycle\":[\"1\"]"), "{out}");
    }

    #[test]
    fn fedder_report_matches_contract() {
        let out = run_json(&[
            "fedder", "--p", "2", "--e", "1", "--vars", "2", "--f", "x*y", "--ideal", "x,y",
            "--t", "0", "--nmax", "1",
        ])
        .unwrap();
        assert!(out.contains("\"result\":\"PURE\""), "{out}");
        assert!(out.contains("\"n\":1"), "{out}");
        assert!(out.contains("\"witness\":\"x^1*y^1\""), "{out}");
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_json(&["fpt", "--p", "2", "--vars", "1", "x^2"]).unwrap();
        let b = run_json(&["fpt", "--p", "2", "--vars", "1", "x^2"]).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("\"exact\":\"1/2\""));
    }

    #[test]
    fn csv_projection_is_flat() {
        let mut full = vec!["fthresh", "--csv", "fpt", "--p", "2", "--vars", "1", "x"];
        let cli = Cli::try_parse_from(full.drain(..)).unwrap();
        let out = run(&cli).unwrap();
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].contains("\"result.exact\""));
        assert!(lines[1].contains("\"1\""));
    }

    #[test]
    fn tau_reports_stability_flag() {
        let out = run_json(&["tau", "--p", "2", "--vars", "1", "--f", "x", "--t", "1/2"]).unwrap();
        assert!(out.contains("\"flags\":[\"STABLE\"]"), "{out}");
        assert!(out.contains("\"generators\":[\"1\"]"), "{out}");
    }

    #[test]
    fn ntau_exhibits_left_limit_via_cli() {
        let out = run_json(&[
            "ntau", "--p", "2", "--vars", "2", "--f", "x", "--e", "1", "--mult", "1", "--ideal",
            "y", "--t", "0",
        ])
        .unwrap();
        assert!(out.contains("\"generators\":[\"1\"]"), "{out}");
    }

    #[test]
    fn unknown_answers_exit_zero() {
        // UNKNOWN is an answer, not an error
        let code = run_main([
            "fthresh", "fedder", "--p", "2", "--e", "1", "--vars", "1", "--f", "x^2", "--ideal",
            "x", "--t", "1/2", "--nmax", "1",
        ]);
        assert_eq!(code, 0);
    }

    #[test]
    fn error_classes_map_to_exit_codes() {
        // syntax error in the polynomial: exit 2
        assert_eq!(
            run_main(["fthresh", "fpt", "--p", "2", "--vars", "1", "x +"]),
            2
        );
        // mathematical precondition (f = 0 has no threshold): exit 3
        assert_eq!(
            run_main(["fthresh", "fpt", "--p", "2", "--vars", "1", "0"]),
            3
        );
        // unknown flag: exit 2
        assert_eq!(run_main(["fthresh", "fpt", "--bogus"]), 2);
    }

    #[test]
    fn chain_job_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("job.json");
        std::fs::write(
            &path,
            r#"{"command":"chain","p":2,"nvars":1,"template":"x^m","m_lo":1,"m_hi":3,"n_max":2}"#,
        )
        .unwrap();
        let args = ["fthresh", "chain", "--job", path.to_str().unwrap()];
        let cli = Cli::try_parse_from(args).unwrap();
        let a = run(&cli).unwrap();
        let b = run(&cli).unwrap();
        assert_eq!(a, b, "byte-identical across runs");
        assert!(a.contains("\"template\":\"x^m\""));
        assert!(a.contains("\"exact\":\"1\""));
        assert!(a.contains("\"exact\":\"1/2\""));
    }
}
