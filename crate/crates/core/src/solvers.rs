//! Exact solvers: exhaustive enumeration (the oracle) and a capacity-indexed
//! dynamic program. Both return the lexicographically smallest optimal
//! assignment, so their reports can be compared field by field.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::model::{Problem, SolutionVector};

/// Resource limits. Exceeding one is an error, never a silent truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    /// Largest `n` accepted by the enumerating solvers.
    pub enumeration_cap: usize,
    /// Largest capacity accepted by the dynamic program.
    pub dp_capacity_cap: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { enumeration_cap: 25, dp_capacity_cap: 10_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Brute,
    Dp,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Brute => "brute",
            Method::Dp => "dp",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub nodes_visited: u64,
    pub cells_visited: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub satisfiable: bool,
    /// Present exactly when `satisfiable`.
    pub witness: Option<SolutionVector>,
    /// Maximum value over assignments within capacity.
    pub optimum: Option<BigUint>,
    pub method: Method,
    pub stats: SolveStats,
}

impl SolveReport {
    fn new(method: Method, optimum: BigUint, best: SolutionVector, target: &BigUint, stats: SolveStats) -> Self {
        let satisfiable = &optimum >= target;
        Self {
            satisfiable,
            witness: satisfiable.then_some(best),
            optimum: Some(optimum),
            method,
            stats,
        }
    }
}

fn check_enumeration_cap(n: usize, config: &SolverConfig) -> Result<()> {
    if n > config.enumeration_cap {
        return Err(Error::TooLargeForOracle { n, cap: config.enumeration_cap });
    }
    Ok(())
}

/// Depth-first walk over all assignments in lexicographic order (0 before 1
/// at every position). Branches that already exceed the capacity are cut;
/// weights are nonnegative so none of their leaves is feasible.
struct Walk<'a> {
    weights: &'a [BigUint],
    values: &'a [BigUint],
    capacity: &'a BigUint,
    bits: Vec<bool>,
    nodes: u64,
}

impl Walk<'_> {
    fn run<F>(&mut self, i: usize, weight: &BigUint, value: &BigUint, prune: &dyn Fn(usize, &BigUint) -> bool, leaf: &mut F) -> bool
    where
        F: FnMut(&[bool], &BigUint) -> bool,
    {
        self.nodes += 1;
        if prune(i, value) {
            return true;
        }
        if i == self.weights.len() {
            return leaf(&self.bits, value);
        }
        if !self.run(i + 1, weight, value, prune, leaf) {
            return false;
        }
        let with = weight + &self.weights[i];
        if &with <= self.capacity {
            self.bits[i] = true;
            let keep_going = self.run(i + 1, &with, &(value + &self.values[i]), prune, leaf);
            self.bits[i] = false;
            return keep_going;
        }
        true
    }
}

pub fn solve_brute_force<P: Problem + ?Sized>(instance: &P, config: &SolverConfig) -> Result<SolveReport> {
    let n = instance.len();
    check_enumeration_cap(n, config)?;
    let values = instance.values();
    let mut walk = Walk {
        weights: instance.weights(),
        values: &values,
        capacity: instance.capacity(),
        bits: vec![false; n],
        nodes: 0,
    };
    let mut best: Option<(BigUint, Vec<bool>)> = None;
    walk.run(0, &BigUint::zero(), &BigUint::zero(), &|_, _| false, &mut |bits, value| {
        if best.as_ref().is_none_or(|(v, _)| value > v) {
            best = Some((value.clone(), bits.to_vec()));
        }
        true
    });
    let stats = SolveStats { nodes_visited: walk.nodes, ..SolveStats::default() };
    // The empty assignment always fits, so `best` is set.
    let (optimum, bits) = best.expect("empty assignment is feasible");
    Ok(SolveReport::new(Method::Brute, optimum, SolutionVector::new(bits), instance.target(), stats))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessList {
    pub witnesses: Vec<SolutionVector>,
    /// Set when more witnesses exist beyond `limit`.
    pub truncated: bool,
}

/// Every satisfying assignment, in lexicographic order, at most `limit`.
pub fn enumerate_witnesses<P: Problem + ?Sized>(
    instance: &P,
    limit: usize,
    config: &SolverConfig,
) -> Result<WitnessList> {
    if limit == 0 {
        return Err(Error::InvalidArgument("witness limit must be positive".into()));
    }
    let n = instance.len();
    check_enumeration_cap(n, config)?;
    let values = instance.values();
    // suffix[i] = sum of values[i..]
    let mut suffix = vec![BigUint::zero(); n + 1];
    for i in (0..n).rev() {
        suffix[i] = &suffix[i + 1] + &values[i];
    }
    let target = instance.target();
    let mut walk = Walk {
        weights: instance.weights(),
        values: &values,
        capacity: instance.capacity(),
        bits: vec![false; n],
        nodes: 0,
    };
    let mut witnesses = Vec::new();
    let mut truncated = false;
    let prune = |i: usize, value: &BigUint| &(value + &suffix[i]) < target;
    walk.run(0, &BigUint::zero(), &BigUint::zero(), &prune, &mut |bits, value| {
        if value < target {
            return true;
        }
        if witnesses.len() == limit {
            truncated = true;
            return false;
        }
        witnesses.push(SolutionVector::new(bits.to_vec()));
        true
    });
    Ok(WitnessList { witnesses, truncated })
}

/// Packed bit rows recording whether item `i` is taken at capacity `c`.
struct TakeTable {
    words_per_row: usize,
    bits: Vec<u64>,
}

impl TakeTable {
    fn new(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64);
        Self { words_per_row, bits: vec![0; rows * words_per_row] }
    }

    fn set(&mut self, row: usize, col: usize) {
        self.bits[row * self.words_per_row + col / 64] |= 1 << (col % 64);
    }

    fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.words_per_row + col / 64] >> (col % 64) & 1 == 1
    }
}

struct DpOutcome {
    profile: Vec<BigUint>,
    take: TakeTable,
    weights: Vec<Option<usize>>,
    cells: u64,
}

fn run_dp<P: Problem + ?Sized>(instance: &P, config: &SolverConfig) -> Result<DpOutcome> {
    let cap = instance.capacity();
    let b = cap
        .to_u64()
        .filter(|&b| b <= config.dp_capacity_cap)
        .and_then(|b| usize::try_from(b).ok())
        .ok_or_else(|| Error::CapacityExceedsBudget {
            capacity: cap.to_string(),
            cap: config.dp_capacity_cap,
        })?;
    let n = instance.len();
    let values = instance.values();
    // None marks items heavier than the capacity.
    let weights: Vec<Option<usize>> = instance
        .weights()
        .iter()
        .map(|a| a.to_usize().filter(|&a| a <= b))
        .collect();
    let mut take = TakeTable::new(n, b + 1);
    // best[c] = max value using items i.. with weight <= c; filled from the
    // last item backwards so the forward reconstruction can prefer x_i = 0.
    let mut best = vec![BigUint::zero(); b + 1];
    let mut cells = 0u64;
    for i in (0..n).rev() {
        let Some(a) = weights[i] else { continue };
        for c in (a..=b).rev() {
            cells += 1;
            let with = &best[c - a] + &values[i];
            if with > best[c] {
                best[c] = with;
                take.set(i, c);
            }
        }
    }
    Ok(DpOutcome { profile: best, take, weights, cells })
}

pub fn solve_dp<P: Problem + ?Sized>(instance: &P, config: &SolverConfig) -> Result<SolveReport> {
    let outcome = run_dp(instance, config)?;
    let mut c = outcome.profile.len() - 1;
    let mut bits = vec![false; instance.len()];
    for (i, bit) in bits.iter_mut().enumerate() {
        if outcome.take.get(i, c) {
            *bit = true;
            c -= outcome.weights[i].expect("taken items fit");
        }
    }
    let optimum = outcome.profile.last().cloned().unwrap_or_default();
    let stats = SolveStats { cells_visited: outcome.cells, ..SolveStats::default() };
    Ok(SolveReport::new(Method::Dp, optimum, SolutionVector::new(bits), instance.target(), stats))
}

/// Optimum for every capacity `0..=b`.
pub fn capacity_profile<P: Problem + ?Sized>(instance: &P, config: &SolverConfig) -> Result<Vec<BigUint>> {
    Ok(run_dp(instance, config)?.profile)
}

pub fn solve<P: Problem + ?Sized>(instance: &P, method: Method, config: &SolverConfig) -> Result<SolveReport> {
    match method {
        Method::Brute => solve_brute_force(instance, config),
        Method::Dp => solve_dp(instance, config),
    }
}
