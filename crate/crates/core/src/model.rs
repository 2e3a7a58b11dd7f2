//! Instance types for the 0-1 knapsack decision family, canonicalization,
//! the restriction predicate and witness verification.
//!
//! Every quantity is an unbounded nonnegative integer. Values of a
//! polynomially correlated instance are the exact `m`-th powers of the
//! weights and are computed on demand, never stored approximately.

use std::borrow::Cow;

use num_bigint::BigUint;
use num_traits::{Pow, Zero};

use crate::error::{Error, Result};

/// Common view over the decision instances: maximize `sum p_i x_i` subject to
/// `sum a_i x_i <= capacity`, decided against `target`.
pub trait Problem {
    fn weights(&self) -> &[BigUint];
    fn capacity(&self) -> &BigUint;
    fn target(&self) -> &BigUint;
    /// Item values, materialized exactly.
    fn values(&self) -> Cow<'_, [BigUint]>;

    fn len(&self) -> usize {
        self.weights().len()
    }

    fn is_empty(&self) -> bool {
        self.weights().is_empty()
    }
}

/// General decision instance `X(A, b, P, q)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KnapsackInstance {
    weights: Vec<BigUint>,
    values: Vec<BigUint>,
    capacity: BigUint,
    target: BigUint,
}

impl KnapsackInstance {
    pub fn new(
        weights: Vec<BigUint>,
        values: Vec<BigUint>,
        capacity: BigUint,
        target: BigUint,
    ) -> Result<Self> {
        if weights.len() != values.len() {
            return Err(Error::DomainViolation(format!(
                "{} weights but {} values",
                weights.len(),
                values.len()
            )));
        }
        check_positive("weight", &weights)?;
        check_positive("value", &values)?;
        Ok(Self { weights, values, capacity, target })
    }

    pub fn canonicalize(&self) -> Result<(Self, ReductionTrace)> {
        check_positive("weight", &self.weights)?;
        check_positive("value", &self.values)?;
        let trace = canonical_order(&self.weights, &self.capacity)?;
        let instance = Self {
            weights: trace.gather(&self.weights),
            values: trace.gather(&self.values),
            capacity: self.capacity.clone(),
            target: self.target.clone(),
        };
        Ok((instance, trace.with_differences_of(&self.weights)))
    }
}

impl Problem for KnapsackInstance {
    fn weights(&self) -> &[BigUint] {
        &self.weights
    }
    fn capacity(&self) -> &BigUint {
        &self.capacity
    }
    fn target(&self) -> &BigUint {
        &self.target
    }
    fn values(&self) -> Cow<'_, [BigUint]> {
        Cow::Borrowed(&self.values)
    }
}

/// Subset sum `X_1(A, b, b)`: the bound is both capacity and target.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubsetSumInstance {
    weights: Vec<BigUint>,
    bound: BigUint,
}

impl SubsetSumInstance {
    pub fn new(weights: Vec<BigUint>, bound: BigUint) -> Result<Self> {
        check_positive("weight", &weights)?;
        Ok(Self { weights, bound })
    }

    /// Difference instances carry `d_1 = 0`, so zero weights are allowed here.
    pub(crate) fn with_zero_weights(weights: Vec<BigUint>, bound: BigUint) -> Self {
        Self { weights, bound }
    }

    pub fn bound(&self) -> &BigUint {
        &self.bound
    }

    pub fn canonicalize(&self) -> Result<(Self, ReductionTrace)> {
        check_positive("weight", &self.weights)?;
        let trace = canonical_order(&self.weights, &self.bound)?;
        let instance = Self {
            weights: trace.gather(&self.weights),
            bound: self.bound.clone(),
        };
        Ok((instance, trace.with_differences_of(&self.weights)))
    }

    /// Stable sort without dropping oversized items.
    pub(crate) fn sorted(&self) -> (Self, ReductionTrace) {
        let mut order: Vec<usize> = (0..self.weights.len()).collect();
        order.sort_by(|&i, &j| self.weights[i].cmp(&self.weights[j]));
        let trace = ReductionTrace::from_order(order, Vec::new());
        let instance = Self {
            weights: trace.gather(&self.weights),
            bound: self.bound.clone(),
        };
        (instance, trace.with_differences_of(&self.weights))
    }

    /// The same instance viewed as `X(A, b, A, b)`.
    pub fn to_knapsack(&self) -> KnapsackInstance {
        KnapsackInstance {
            weights: self.weights.clone(),
            values: self.weights.clone(),
            capacity: self.bound.clone(),
            target: self.bound.clone(),
        }
    }
}

impl Problem for SubsetSumInstance {
    fn weights(&self) -> &[BigUint] {
        &self.weights
    }
    fn capacity(&self) -> &BigUint {
        &self.bound
    }
    fn target(&self) -> &BigUint {
        &self.bound
    }
    fn values(&self) -> Cow<'_, [BigUint]> {
        Cow::Borrowed(&self.weights)
    }
}

/// Polynomially correlated instance `X_m(A, b, q)` with values `a_i^m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyCorrInstance {
    weights: Vec<BigUint>,
    exponent: u32,
    capacity: BigUint,
    target: BigUint,
}

impl PolyCorrInstance {
    pub fn new(weights: Vec<BigUint>, exponent: u32, capacity: BigUint, target: BigUint) -> Result<Self> {
        if exponent == 0 {
            return Err(Error::DomainViolation("exponent m must be positive".into()));
        }
        check_positive("weight", &weights)?;
        Ok(Self { weights, exponent, capacity, target })
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn canonicalize(&self) -> Result<(Self, ReductionTrace)> {
        check_positive("weight", &self.weights)?;
        let trace = canonical_order(&self.weights, &self.capacity)?;
        let instance = Self {
            weights: trace.gather(&self.weights),
            exponent: self.exponent,
            capacity: self.capacity.clone(),
            target: self.target.clone(),
        };
        let mut trace = trace.with_differences_of(&self.weights);
        trace.binomial_peak = Some(crate::num::binomial_peak(self.exponent));
        Ok((instance, trace))
    }

    /// Replaces the value threshold; used for fail-injection.
    pub fn with_target(mut self, target: BigUint) -> Self {
        self.target = target;
        self
    }
}

impl Problem for PolyCorrInstance {
    fn weights(&self) -> &[BigUint] {
        &self.weights
    }
    fn capacity(&self) -> &BigUint {
        &self.capacity
    }
    fn target(&self) -> &BigUint {
        &self.target
    }
    fn values(&self) -> Cow<'_, [BigUint]> {
        Cow::Owned(self.weights.iter().map(|a| Pow::pow(a, self.exponent)).collect())
    }
}

/// Any of the three instance kinds.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Instance {
    Knapsack(KnapsackInstance),
    SubsetSum(SubsetSumInstance),
    PolyCorr(PolyCorrInstance),
}

impl Instance {
    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Knapsack(_) => "knapsack",
            Instance::SubsetSum(_) => "subset_sum",
            Instance::PolyCorr(_) => "poly_corr",
        }
    }

    fn as_problem(&self) -> &dyn Problem {
        match self {
            Instance::Knapsack(k) => k,
            Instance::SubsetSum(s) => s,
            Instance::PolyCorr(p) => p,
        }
    }

    pub fn canonicalize(&self) -> Result<(Self, ReductionTrace)> {
        Ok(match self {
            Instance::Knapsack(k) => {
                let (k, t) = k.canonicalize()?;
                (Instance::Knapsack(k), t)
            }
            Instance::SubsetSum(s) => {
                let (s, t) = s.canonicalize()?;
                (Instance::SubsetSum(s), t)
            }
            Instance::PolyCorr(p) => {
                let (p, t) = p.canonicalize()?;
                (Instance::PolyCorr(p), t)
            }
        })
    }
}

impl Problem for Instance {
    fn weights(&self) -> &[BigUint] {
        self.as_problem().weights()
    }
    fn capacity(&self) -> &BigUint {
        self.as_problem().capacity()
    }
    fn target(&self) -> &BigUint {
        self.as_problem().target()
    }
    fn values(&self) -> Cow<'_, [BigUint]> {
        match self {
            Instance::Knapsack(k) => k.values(),
            Instance::SubsetSum(s) => s.values(),
            Instance::PolyCorr(p) => p.values(),
        }
    }
}

impl From<KnapsackInstance> for Instance {
    fn from(k: KnapsackInstance) -> Self {
        Instance::Knapsack(k)
    }
}

impl From<SubsetSumInstance> for Instance {
    fn from(s: SubsetSumInstance) -> Self {
        Instance::SubsetSum(s)
    }
}

impl From<PolyCorrInstance> for Instance {
    fn from(p: PolyCorrInstance) -> Self {
        Instance::PolyCorr(p)
    }
}

/// A 0-1 assignment to the items of an instance.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SolutionVector(Vec<bool>);

impl SolutionVector {
    pub fn new(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![false; n])
    }

    /// Builds from `0`/`1` entries; anything else is rejected.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        bits.iter()
            .map(|&b| match b {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(Error::DomainViolation(format!("solution entry {other} is not 0 or 1"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    pub fn to_bits(&self) -> Vec<u8> {
        self.0.iter().map(|&b| b as u8).collect()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of selected items.
    pub fn cardinality(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    /// `y_i = 1 - x_i`.
    pub fn complement(&self) -> Self {
        Self(self.0.iter().map(|&b| !b).collect())
    }

    pub fn selected(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }
}

impl From<Vec<bool>> for SolutionVector {
    fn from(bits: Vec<bool>) -> Self {
        Self(bits)
    }
}

/// Certificate of a canonicalization or reduction step.
///
/// `permutation[k]` is the source index of item `k` of the produced
/// instance; `dropped` lists source indices that were removed and are
/// forced to 0 when a solution is pulled back.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReductionTrace {
    pub shift_constant: Option<BigUint>,
    pub solution_count_r: Option<BigUint>,
    pub residual: Option<BigUint>,
    pub polycorr_target: Option<BigUint>,
    pub binomial_peak: Option<BigUint>,
    pub differences: Vec<BigUint>,
    pub permutation: Vec<usize>,
    pub dropped: Vec<usize>,
}

impl ReductionTrace {
    pub(crate) fn from_order(permutation: Vec<usize>, dropped: Vec<usize>) -> Self {
        Self { permutation, dropped, ..Self::default() }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_order((0..n).collect(), Vec::new())
    }

    /// Item count of the instance this trace maps back to.
    pub fn source_len(&self) -> usize {
        self.permutation.len() + self.dropped.len()
    }

    pub fn is_identity(&self) -> bool {
        self.dropped.is_empty() && self.permutation.iter().enumerate().all(|(k, &i)| k == i)
    }

    fn gather(&self, source: &[BigUint]) -> Vec<BigUint> {
        self.permutation.iter().map(|&i| source[i].clone()).collect()
    }

    fn with_differences_of(mut self, source: &[BigUint]) -> Self {
        let kept = self.gather(source);
        self.differences = differences(&kept);
        self
    }

    /// Maps a solution of the produced instance back to source indexing.
    pub fn pull_back(&self, x: &SolutionVector) -> Result<SolutionVector> {
        if x.len() != self.permutation.len() {
            return Err(Error::LengthMismatch { expected: self.permutation.len(), found: x.len() });
        }
        let mut out = vec![false; self.source_len()];
        for (k, &i) in self.permutation.iter().enumerate() {
            out[i] = x.bits()[k];
        }
        Ok(SolutionVector(out))
    }

    /// Maps a source solution forward; fails if it selects a dropped item.
    pub fn push_forward(&self, x: &SolutionVector) -> Result<SolutionVector> {
        if x.len() != self.source_len() {
            return Err(Error::LengthMismatch { expected: self.source_len(), found: x.len() });
        }
        if self.dropped.iter().any(|&i| x.bits()[i]) {
            return Err(Error::DomainViolation("solution selects a dropped item".into()));
        }
        Ok(SolutionVector(self.permutation.iter().map(|&i| x.bits()[i]).collect()))
    }

    /// Composes `self` (source -> middle) with `next` (middle -> target),
    /// keeping the constants recorded by `next`.
    pub fn then(&self, next: &ReductionTrace) -> ReductionTrace {
        let mut dropped = self.dropped.clone();
        dropped.extend(next.dropped.iter().map(|&k| self.permutation[k]));
        dropped.sort_unstable();
        ReductionTrace {
            permutation: next.permutation.iter().map(|&k| self.permutation[k]).collect(),
            dropped,
            shift_constant: next.shift_constant.clone().or_else(|| self.shift_constant.clone()),
            ..next.clone()
        }
    }
}

/// `d_i = a_i - a_1` for nondecreasing weights.
pub fn differences(sorted_weights: &[BigUint]) -> Vec<BigUint> {
    match sorted_weights.first() {
        Some(first) => sorted_weights.iter().map(|a| a - first).collect(),
        None => Vec::new(),
    }
}

fn check_positive(what: &str, xs: &[BigUint]) -> Result<()> {
    match xs.iter().position(Zero::is_zero) {
        Some(i) => Err(Error::DomainViolation(format!("{what} at index {i} is zero"))),
        None => Ok(()),
    }
}

/// Keeps items with `a_i <= capacity`, stably sorted by weight.
fn canonical_order(weights: &[BigUint], capacity: &BigUint) -> Result<ReductionTrace> {
    let (mut kept, dropped): (Vec<usize>, Vec<usize>) =
        (0..weights.len()).partition(|&i| &weights[i] <= capacity);
    if kept.is_empty() {
        return Err(Error::VacuousInstance);
    }
    kept.sort_by(|&i, &j| weights[i].cmp(&weights[j]));
    Ok(ReductionTrace::from_order(kept, dropped))
}

/// Membership in the restricted class: `n * d_n^m < a_1`, evaluated exactly.
///
/// Equivalent to `d_n < (a_1 / n)^(1/m)` over nonnegative integers.
pub fn is_restricted(instance: &SubsetSumInstance, m: u32) -> bool {
    let weights = instance.weights();
    let (Some(min), Some(max)) = (weights.iter().min(), weights.iter().max()) else {
        return false;
    };
    let spread = max - min;
    BigUint::from(weights.len()) * Pow::pow(&spread, m) < *min
}

/// Total weight and total value of the selected items.
pub fn evaluate<P: Problem + ?Sized>(instance: &P, x: &SolutionVector) -> Result<(BigUint, BigUint)> {
    if x.len() != instance.len() {
        return Err(Error::LengthMismatch { expected: instance.len(), found: x.len() });
    }
    let values = instance.values();
    let mut weight = BigUint::zero();
    let mut value = BigUint::zero();
    for i in x.selected() {
        weight += &instance.weights()[i];
        value += &values[i];
    }
    Ok((weight, value))
}

/// Witness check: `sum a_i x_i <= b` and `sum p_i x_i >= q`.
pub fn verify_solution<P: Problem + ?Sized>(instance: &P, x: &SolutionVector) -> Result<bool> {
    let (weight, value) = evaluate(instance, x)?;
    Ok(&weight <= instance.capacity() && &value >= instance.target())
}

#[cfg(test)]
pub(crate) fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

#[cfg(test)]
pub(crate) fn bigs(ns: &[u64]) -> Vec<BigUint> {
    ns.iter().copied().map(big).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ss(ws: &[u64], b: u64) -> SubsetSumInstance {
        SubsetSumInstance::new(bigs(ws), big(b)).unwrap()
    }

    fn x(bits: &[u8]) -> SolutionVector {
        SolutionVector::from_bits(bits).unwrap()
    }

    #[test]
    fn canonicalize_sorts_and_records_permutation() {
        let (c, t) = ss(&[3, 1, 2], 5).canonicalize().unwrap();
        assert_eq!(c.weights(), bigs(&[1, 2, 3]).as_slice());
        assert_eq!(t.permutation, vec![1, 2, 0]);
        assert!(t.dropped.is_empty());
        assert_eq!(t.differences, bigs(&[0, 1, 2]));
    }

    #[test]
    fn canonicalize_drops_oversized_items() {
        let (c, t) = ss(&[1, 2, 9], 5).canonicalize().unwrap();
        assert_eq!(c.weights(), bigs(&[1, 2]).as_slice());
        assert_eq!(t.dropped, vec![2]);
        let back = t.pull_back(&x(&[1, 1])).unwrap();
        assert_eq!(back, x(&[1, 1, 0]));
    }

    #[test]
    fn canonicalize_single_item_is_identity() {
        let (c, t) = ss(&[1], 1).canonicalize().unwrap();
        assert_eq!(c, ss(&[1], 1));
        assert!(t.is_identity());
    }

    #[test]
    fn canonicalize_errors() {
        assert!(matches!(ss(&[6, 7], 5).canonicalize(), Err(Error::VacuousInstance)));
        assert!(matches!(
            SubsetSumInstance::new(bigs(&[1, 0]), big(3)),
            Err(Error::DomainViolation(_))
        ));
        assert!(matches!(
            KnapsackInstance::new(bigs(&[1]), bigs(&[0]), big(3), big(1)),
            Err(Error::DomainViolation(_))
        ));
        assert!(matches!(
            PolyCorrInstance::new(bigs(&[1]), 0, big(3), big(1)),
            Err(Error::DomainViolation(_))
        ));
    }

    #[test]
    fn canonicalize_knapsack_copermutes_values() {
        let k = KnapsackInstance::new(bigs(&[5, 2, 9]), bigs(&[50, 20, 90]), big(6), big(1)).unwrap();
        let (c, t) = k.canonicalize().unwrap();
        assert_eq!(c.weights(), bigs(&[2, 5]).as_slice());
        assert_eq!(c.values().as_ref(), bigs(&[20, 50]).as_slice());
        assert_eq!(t.permutation, vec![1, 0]);
        assert_eq!(t.dropped, vec![2]);
    }

    #[test]
    fn duplicate_weights_sort_stably() {
        let (_, t) = ss(&[2, 1, 2, 1], 9).canonicalize().unwrap();
        assert_eq!(t.permutation, vec![1, 3, 0, 2]);
    }

    #[test]
    fn restriction_predicate() {
        assert!(is_restricted(&ss(&[10, 11], 21), 2));
        assert!(!is_restricted(&ss(&[10, 13], 21), 2));
        assert!(is_restricted(&ss(&[5], 5), 3));
        // boundary n * d_n^m == a_1 is not restricted
        assert!(!is_restricted(&ss(&[8, 10], 18), 2));
    }

    #[test]
    fn verify_examples() {
        let p = PolyCorrInstance::new(bigs(&[10, 11]), 2, big(21), big(220)).unwrap();
        assert!(verify_solution(&p, &x(&[1, 1])).unwrap());
        assert!(!verify_solution(&p, &x(&[0, 0])).unwrap());
        assert!(verify_solution(&ss(&[1, 2, 3], 5), &x(&[0, 1, 1])).unwrap());
        assert!(!verify_solution(&ss(&[1, 2, 3], 5), &x(&[1, 1, 0])).unwrap());
        assert!(matches!(
            verify_solution(&p, &x(&[1])),
            Err(Error::LengthMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn zero_bound_only_admits_empty_selection() {
        let s = SubsetSumInstance::new(bigs(&[1, 2]), big(0)).unwrap();
        assert!(verify_solution(&s, &x(&[0, 0])).unwrap());
        assert!(!verify_solution(&s, &x(&[1, 0])).unwrap());
        assert!(matches!(s.canonicalize(), Err(Error::VacuousInstance)));
    }

    #[test]
    fn solution_vector_rejects_non_bits() {
        assert!(SolutionVector::from_bits(&[0, 2]).is_err());
        assert_eq!(x(&[1, 0, 1]).cardinality(), 2);
        assert_eq!(x(&[1, 0, 1]).complement(), x(&[0, 1, 0]));
    }

    #[test]
    fn trace_push_forward_inverts_pull_back() {
        let (_, t) = ss(&[4, 9, 1, 3], 5).canonicalize().unwrap();
        let y = x(&[1, 0, 1]);
        let back = t.pull_back(&y).unwrap();
        assert_eq!(t.push_forward(&back).unwrap(), y);
        assert!(t.push_forward(&x(&[0, 1, 0, 0])).is_err());
    }
}
