//! Resource budgets and search-depth configuration.
//!
//! Every cap is a hard error when exceeded, never a silent wrong answer.
//! Defaults can be overridden through `FTHRESH_BUDGET_*` environment
//! variables or per-job fields.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    /// Levels n probed in nu/mu sweeps and Fedder checks.
    pub n_max: u32,
    /// Maximum Frobenius level e in test-ideal chains.
    pub e_max: u32,
    /// Bound on candidate denominators q^a(q^b-1) in jump searches and
    /// exactness certificates.
    pub denom_bound: u64,
    /// Consecutive agreeing perturbation levels required before the
    /// left-limit test ideal is declared stable.
    pub sweep: u32,
    /// Perturbation levels tried by the left-limit sweep.
    pub ntau_levels: u32,
    /// Cap on monomial exponents (and hence on q).
    pub exponent_cap: u32,
    /// Buchberger: maximum S-pairs processed.
    pub max_pairs: u64,
    /// Buchberger: maximum total degree of any intermediate polynomial.
    pub max_degree: u32,
    /// Cap on the number of terms of any polynomial product.
    pub max_poly_terms: usize,
    /// Cap on generators of an ideal power / product.
    pub max_ideal_gens: usize,
    /// Cap on the mu-invariant product frontier per level.
    pub max_frontier: usize,
    /// Orbit iteration step budget.
    pub orbit_steps: u64,
    /// Cycle elements materialized in an orbit report.
    pub orbit_cycle_cap: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            n_max: 3,
            e_max: 4,
            denom_bound: 100,
            sweep: 2,
            ntau_levels: 6,
            exponent_cap: 1 << 20,
            max_pairs: 100_000,
            max_degree: 4_000,
            max_poly_terms: 1_000_000,
            max_ideal_gens: 100_000,
            max_frontier: 200_000,
            orbit_steps: 20_000_000,
            orbit_cycle_cap: 1024,
        }
    }
}

impl Budgets {
    /// Defaults with `FTHRESH_BUDGET_*` environment overrides applied.
    pub fn from_env() -> Self {
        let mut b = Budgets::default();
        fn get<T: std::str::FromStr>(name: &str, slot: &mut T) {
            if let Ok(v) = std::env::var(name) {
                if let Ok(parsed) = v.parse() {
                    *slot = parsed;
                }
            }
        }
        get("FTHRESH_BUDGET_NMAX", &mut b.n_max);
        get("FTHRESH_BUDGET_EMAX", &mut b.e_max);
        get("FTHRESH_BUDGET_DENOM_BOUND", &mut b.denom_bound);
        get("FTHRESH_BUDGET_SWEEP", &mut b.sweep);
        get("FTHRESH_BUDGET_NTAU_LEVELS", &mut b.ntau_levels);
        get("FTHRESH_BUDGET_EXPONENT_CAP", &mut b.exponent_cap);
        get("FTHRESH_BUDGET_MAX_PAIRS", &mut b.max_pairs);
        get("FTHRESH_BUDGET_MAX_DEGREE", &mut b.max_degree);
        get("FTHRESH_BUDGET_MAX_POLY_TERMS", &mut b.max_poly_terms);
        get("FTHRESH_BUDGET_MAX_IDEAL_GENS", &mut b.max_ideal_gens);
        get("FTHRESH_BUDGET_MAX_FRONTIER", &mut b.max_frontier);
        get("FTHRESH_BUDGET_ORBIT_STEPS", &mut b.orbit_steps);
        b
    }
}
