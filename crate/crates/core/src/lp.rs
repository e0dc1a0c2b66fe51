//! Exact rational linear feasibility.
//!
//! Systems of linear equalities and inequalities over the rationals are
//! decided by a phase-1 simplex with Bland's rule and exact pivots. A
//! feasible answer carries a witness point that satisfies every constraint
//! exactly; an infeasible answer carries a Farkas certificate (nonnegative
//! multipliers over the ≤-normalized rows combining to `0 ≤ negative`)
//! which is re-verified in exact arithmetic before being returned.

use std::sync::atomic::{AtomicU64, Ordering};

use num_traits::{One, Signed, Zero};

use crate::scalar::Rational;

/// Relation of a single constraint row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub rel: Rel,
    pub rhs: Rational,
}

/// A feasibility system over `n_vars` variables. Variables are free unless
/// flagged nonnegative; nonnegativity is part of the system (and of the
/// certificate space), not a solver convention.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    n_vars: usize,
    nonneg: Vec<bool>,
    constraints: Vec<Constraint>,
}

impl LinearSystem {
    pub fn new(n_vars: usize) -> Self {
        LinearSystem {
            n_vars,
            nonneg: vec![false; n_vars],
            constraints: Vec::new(),
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn set_nonneg(&mut self, var: usize) {
        self.nonneg[var] = true;
    }

    pub fn set_nonneg_range(&mut self, vars: std::ops::Range<usize>) {
        for v in vars {
            self.nonneg[v] = true;
        }
    }

    pub fn is_nonneg(&self, var: usize) -> bool {
        self.nonneg[var]
    }

    pub fn push(&mut self, coeffs: Vec<Rational>, rel: Rel, rhs: Rational) {
        assert_eq!(coeffs.len(), self.n_vars, "row width mismatch");
        self.constraints.push(Constraint { coeffs, rel, rhs });
    }

    pub fn push_sparse(&mut self, entries: &[(usize, Rational)], rel: Rel, rhs: Rational) {
        let mut coeffs = vec![Rational::zero(); self.n_vars];
        for (j, c) in entries {
            coeffs[*j] = &coeffs[*j] + c;
        }
        self.constraints.push(Constraint { coeffs, rel, rhs });
    }

    /// Exact satisfaction check, including nonnegativity flags.
    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        if x.len() != self.n_vars {
            return false;
        }
        for (v, &nn) in x.iter().zip(&self.nonneg) {
            if nn && v.is_negative() {
                return false;
            }
        }
        self.constraints.iter().all(|c| {
            let lhs: Rational = c
                .coeffs
                .iter()
                .zip(x)
                .filter(|(a, _)| !a.is_zero())
                .map(|(a, v)| a * v)
                .sum();
            match c.rel {
                Rel::Le => lhs <= c.rhs,
                Rel::Ge => lhs >= c.rhs,
                Rel::Eq => lhs == c.rhs,
            }
        })
    }

    /// The system rewritten as a list of `≤`-rows: one per Le constraint,
    /// one (negated) per Ge, two per Eq, then one `−x_k ≤ 0` row per
    /// nonnegative variable. Farkas certificates index into this list.
    pub fn le_normal_rows(&self) -> Vec<(Vec<Rational>, Rational)> {
        let mut rows = Vec::new();
        for c in &self.constraints {
            match c.rel {
                Rel::Le => rows.push((c.coeffs.clone(), c.rhs.clone())),
                Rel::Ge => rows.push((
                    c.coeffs.iter().map(|a| -a.clone()).collect(),
                    -c.rhs.clone(),
                )),
                Rel::Eq => {
                    rows.push((c.coeffs.clone(), c.rhs.clone()));
                    rows.push((
                        c.coeffs.iter().map(|a| -a.clone()).collect(),
                        -c.rhs.clone(),
                    ));
                }
            }
        }
        for (k, &nn) in self.nonneg.iter().enumerate() {
            if nn {
                let mut row = vec![Rational::zero(); self.n_vars];
                row[k] = -Rational::one();
                rows.push((row, Rational::zero()));
            }
        }
        rows
    }
}

/// Nonnegative multipliers over [`LinearSystem::le_normal_rows`] whose
/// combination is `0 ≤ c` with `c < 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub multipliers: Vec<Rational>,
}

impl FarkasCertificate {
    /// Exact re-validation against the system the certificate refutes.
    pub fn verify(&self, system: &LinearSystem) -> bool {
        let rows = system.le_normal_rows();
        if rows.len() != self.multipliers.len() {
            return false;
        }
        if self.multipliers.iter().any(Rational::is_negative) {
            return false;
        }
        let mut combined = vec![Rational::zero(); system.n_vars()];
        let mut rhs = Rational::zero();
        for (mult, (coeffs, b)) in self.multipliers.iter().zip(&rows) {
            if mult.is_zero() {
                continue;
            }
            for (acc, a) in combined.iter_mut().zip(coeffs) {
                if !a.is_zero() {
                    *acc = &*acc + &(mult * a);
                }
            }
            rhs += mult * b;
        }
        combined.iter().all(Rational::is_zero) && rhs.is_negative()
    }
}

#[derive(Debug, Clone)]
pub enum LpOutcome {
    Feasible(Vec<Rational>),
    Infeasible(FarkasCertificate),
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpOutcome::Feasible(_))
    }

    pub fn witness(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Feasible(x) => Some(x),
            LpOutcome::Infeasible(_) => None,
        }
    }

    pub fn certificate(&self) -> Option<&FarkasCertificate> {
        match self {
            LpOutcome::Feasible(_) => None,
            LpOutcome::Infeasible(c) => Some(c),
        }
    }
}

static LP_CALLS: AtomicU64 = AtomicU64::new(0);
static LP_INFEASIBLE: AtomicU64 = AtomicU64::new(0);
static LP_CERT_VERIFIED: AtomicU64 = AtomicU64::new(0);
static LP_CERT_FAILURES: AtomicU64 = AtomicU64::new(0);

/// Cumulative solver counters for this process.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LpStats {
    pub calls: u64,
    pub infeasible: u64,
    pub certificates_verified: u64,
    pub certificate_failures: u64,
}

pub fn lp_stats() -> LpStats {
    LpStats {
        calls: LP_CALLS.load(Ordering::Relaxed),
        infeasible: LP_INFEASIBLE.load(Ordering::Relaxed),
        certificates_verified: LP_CERT_VERIFIED.load(Ordering::Relaxed),
        certificate_failures: LP_CERT_FAILURES.load(Ordering::Relaxed),
    }
}

/// Decides feasibility of the system exactly. The empty system is feasible
/// with the zero witness.
pub fn lp_feasible(system: &LinearSystem) -> LpOutcome {
    LP_CALLS.fetch_add(1, Ordering::Relaxed);
    let outcome = solve(system);
    match &outcome {
        LpOutcome::Feasible(x) => {
            assert!(
                system.is_satisfied_by(x),
                "solver produced a witness violating the system"
            );
        }
        LpOutcome::Infeasible(cert) => {
            LP_INFEASIBLE.fetch_add(1, Ordering::Relaxed);
            if cert.verify(system) {
                LP_CERT_VERIFIED.fetch_add(1, Ordering::Relaxed);
            } else {
                LP_CERT_FAILURES.fetch_add(1, Ordering::Relaxed);
                panic!("solver produced an invalid Farkas certificate");
            }
        }
    }
    outcome
}

/// Column classes of the phase-1 tableau.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Col {
    /// positive part of variable k (or the whole variable when nonnegative)
    VarPos(usize),
    /// negative part of a free variable k
    VarNeg(usize),
    /// slack of row i (coefficient ±1 depending on relation and flip)
    Slack(usize),
    /// artificial of row i; never re-enters the basis
    Artificial(usize),
}

fn solve(system: &LinearSystem) -> LpOutcome {
    let m = system.constraints.len();
    let n = system.n_vars;
    if m == 0 {
        return LpOutcome::Feasible(vec![Rational::zero(); n]);
    }

    // column layout
    let mut cols: Vec<Col> = Vec::new();
    for k in 0..n {
        cols.push(Col::VarPos(k));
        if !system.nonneg[k] {
            cols.push(Col::VarNeg(k));
        }
    }
    let mut slack_col_of_row = vec![usize::MAX; m];
    for (i, c) in system.constraints.iter().enumerate() {
        if matches!(c.rel, Rel::Le | Rel::Ge) {
            slack_col_of_row[i] = cols.len();
            cols.push(Col::Slack(i));
        }
    }
    let art_start = cols.len();
    for i in 0..m {
        cols.push(Col::Artificial(i));
    }
    let width = cols.len() + 1; // + rhs
    let rhs_col = cols.len();

    // row signs: flip rows with negative rhs so the artificial basis is feasible
    let flip: Vec<bool> = system.constraints.iter().map(|c| c.rhs.is_negative()).collect();

    // each row is cleared to integer coefficients; this keeps intermediate
    // pivot entries determinant-bounded instead of compounding denominators
    let row_scale: Vec<Rational> = system
        .constraints
        .iter()
        .map(|c| {
            let mut lcm = num_bigint::BigInt::from(1);
            for a in c.coeffs.iter().chain(std::iter::once(&c.rhs)) {
                lcm = num_integer::Integer::lcm(&lcm, a.denom());
            }
            Rational::from_integer(lcm)
        })
        .collect();

    let mut tab: Vec<Vec<Rational>> = vec![vec![Rational::zero(); width]; m];
    for (i, c) in system.constraints.iter().enumerate() {
        let scaled_sign = if flip[i] { -&row_scale[i] } else { row_scale[i].clone() };
        let unit_sign = if flip[i] { -Rational::one() } else { Rational::one() };
        let mut jj = 0;
        for k in 0..n {
            let a = &c.coeffs[k];
            if !a.is_zero() {
                tab[i][jj] = &scaled_sign * a;
                if !system.nonneg[k] {
                    tab[i][jj + 1] = -(&scaled_sign * a);
                }
            }
            jj += if system.nonneg[k] { 1 } else { 2 };
        }
        // the slack keeps unit coefficient so it can seed the basis
        match c.rel {
            Rel::Le => tab[i][slack_col_of_row[i]] = unit_sign.clone(),
            Rel::Ge => tab[i][slack_col_of_row[i]] = -unit_sign.clone(),
            Rel::Eq => {}
        }
        tab[i][art_start + i] = Rational::one();
        tab[i][rhs_col] = &scaled_sign * &c.rhs;
        debug_assert!(!tab[i][rhs_col].is_negative());
    }

    // initial basis: slack where its column is +e_i, artificial otherwise
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    for i in 0..m {
        let s = slack_col_of_row[i];
        if s != usize::MAX && tab[i][s].is_one() {
            basis.push(s);
            // the artificial stays nonbasic at zero
        } else {
            basis.push(art_start + i);
        }
    }

    let is_artificial = |j: usize| j >= art_start;

    // reduced-cost row of the phase-1 objective, kept canonical by the
    // same pivots as the tableau: rc_j = c_j − Σ_{i basic artificial} T[i][j]
    let mut cost_row: Vec<Rational> = (0..width)
        .map(|j| {
            let mut rc = if j < rhs_col && is_artificial(j) {
                Rational::one()
            } else {
                Rational::zero()
            };
            for i in 0..m {
                if is_artificial(basis[i]) && !tab[i][j].is_zero() {
                    rc -= &tab[i][j];
                }
            }
            rc
        })
        .collect();

    // Dantzig's rule makes progress quickly; a streak of degenerate pivots
    // flips to Bland's rule, whose anticycling guarantee ensures termination
    let mut bland = false;
    let mut degenerate_streak = 0usize;

    loop {
        let entering = if bland {
            (0..art_start).find(|&j| cost_row[j].is_negative())
        } else {
            let mut best: Option<usize> = None;
            for j in 0..art_start {
                if cost_row[j].is_negative()
                    && best.is_none_or(|b| cost_row[j] < cost_row[b])
                {
                    best = Some(j);
                }
            }
            best
        };

        let Some(j) = entering else {
            // optimal for phase 1; the cost-row rhs carries −objective
            let objective = -cost_row[rhs_col].clone();
            debug_assert!(!objective.is_negative());
            if objective.is_zero() {
                return LpOutcome::Feasible(extract_witness(system, &cols, &tab, &basis, rhs_col));
            }
            return LpOutcome::Infeasible(extract_certificate(
                system, &cost_row, &flip, &row_scale, art_start,
            ));
        };

        // ratio test; Bland tie-break on the smallest leaving variable index
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if tab[i][j].is_positive() {
                let ratio = &tab[i][rhs_col] / &tab[i][j];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && basis[i] < basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (pivot_row, ratio) =
            leave.expect("phase-1 objective is bounded below; ratio test cannot fail");
        if ratio.is_zero() {
            degenerate_streak += 1;
            if degenerate_streak > 24 {
                bland = true;
            }
        } else {
            degenerate_streak = 0;
        }

        pivot(&mut tab, pivot_row, j);
        // the cost row pivots like any other row
        let factor = cost_row[j].clone();
        if !factor.is_zero() {
            for (v, p) in cost_row.iter_mut().zip(&tab[pivot_row]) {
                if !p.is_zero() {
                    *v = &*v - &(&factor * p);
                }
            }
        }
        debug_assert!(cost_row[j].is_zero());
        basis[pivot_row] = j;
    }
}

fn pivot(tab: &mut [Vec<Rational>], row: usize, col: usize) {
    let inv = {
        let p = &tab[row][col];
        assert!(!p.is_zero());
        Rational::one() / p
    };
    for v in tab[row].iter_mut() {
        if !v.is_zero() {
            *v = &*v * &inv;
        }
    }
    let pivot_row = tab[row].clone();
    for (i, r) in tab.iter_mut().enumerate() {
        if i == row || r[col].is_zero() {
            continue;
        }
        let factor = r[col].clone();
        for (v, p) in r.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *v = &*v - &(&factor * p);
            }
        }
        debug_assert!(r[col].is_zero());
    }
}

fn extract_witness(
    system: &LinearSystem,
    cols: &[Col],
    tab: &[Vec<Rational>],
    basis: &[usize],
    rhs_col: usize,
) -> Vec<Rational> {
    let mut col_value = vec![Rational::zero(); cols.len()];
    for (i, &b) in basis.iter().enumerate() {
        col_value[b] = tab[i][rhs_col].clone();
    }
    let mut x = vec![Rational::zero(); system.n_vars];
    for (j, c) in cols.iter().enumerate() {
        match c {
            Col::VarPos(k) => x[*k] += &col_value[j],
            Col::VarNeg(k) => x[*k] -= &col_value[j],
            _ => {}
        }
    }
    x
}

fn extract_certificate(
    system: &LinearSystem,
    cost_row: &[Rational],
    flip: &[bool],
    row_scale: &[Rational],
    art_start: usize,
) -> FarkasCertificate {
    let m = system.constraints.len();
    // dual vector from the artificial reduced costs: rc(t_i) = 1 − y_i
    let y: Vec<Rational> = (0..m)
        .map(|row| Rational::one() - &cost_row[art_start + row])
        .collect();
    // signed multiplier per original row: −ε_i·λ_i·y_i, where ε is the flip
    // sign and λ the integer clearing scale of the row
    let signed: Vec<Rational> = y
        .iter()
        .zip(flip)
        .zip(row_scale)
        .map(|((yi, &f), scale)| {
            let s = yi * scale;
            if f {
                s
            } else {
                -s
            }
        })
        .collect();

    let mut multipliers = Vec::new();
    for (c, mu) in system.constraints.iter().zip(&signed) {
        match c.rel {
            Rel::Le => multipliers.push(mu.clone()),
            // the normalized row is the negation, so the multiplier flips
            Rel::Ge => multipliers.push(-mu.clone()),
            Rel::Eq => {
                if mu.is_negative() {
                    multipliers.push(Rational::zero());
                    multipliers.push(-mu.clone());
                } else {
                    multipliers.push(mu.clone());
                    multipliers.push(Rational::zero());
                }
            }
        }
    }
    // nonnegativity rows absorb the leftover coefficients
    let mut combined = vec![Rational::zero(); system.n_vars];
    let rows = system.le_normal_rows();
    for (mu, (coeffs, _)) in multipliers.iter().zip(&rows) {
        if mu.is_zero() {
            continue;
        }
        for (acc, a) in combined.iter_mut().zip(coeffs) {
            if !a.is_zero() {
                *acc = &*acc + &(mu * a);
            }
        }
    }
    for (k, &nn) in system.nonneg.iter().enumerate() {
        if nn {
            // row is −x_k ≤ 0: a multiplier equal to the combined
            // coefficient cancels it
            multipliers.push(combined[k].clone());
        }
    }
    FarkasCertificate { multipliers }
}
