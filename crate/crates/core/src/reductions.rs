//! The reduction chain subset sum -> restricted subset sum -> `X_m`, and the
//! complement transform that swaps weights and values.
//!
//! Every construction keeps a [`ReductionTrace`] so witnesses of the produced
//! instances can be mapped back to the caller's original item order.

use num_bigint::BigUint;
use num_traits::{Pow, Zero};

use crate::error::{Error, Result};
use crate::model::{
    differences, verify_solution, KnapsackInstance, PolyCorrInstance, Problem, ReductionTrace,
    SolutionVector, SubsetSumInstance,
};
use crate::num::binomial_peak;

/// The shifted family `Y_0 .. Y_n`: weights `a_i + C`, bounds `rC + b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftFamily {
    /// Canonical form of the input.
    pub source: SubsetSumInstance,
    /// Canonicalization of the caller's instance into `source`.
    pub source_trace: ReductionTrace,
    pub shift_constant: BigUint,
    pub exponent: u32,
    pub members: Vec<SubsetSumInstance>,
}

impl LiftFamily {
    pub fn member(&self, r: usize) -> Option<&SubsetSumInstance> {
        self.members.get(r)
    }

    /// Trace of member `r`, indexed against the caller's instance.
    pub fn trace(&self, r: usize) -> ReductionTrace {
        ReductionTrace {
            shift_constant: Some(self.shift_constant.clone()),
            solution_count_r: Some(BigUint::from(r)),
            binomial_peak: Some(binomial_peak(self.exponent)),
            ..self.source_trace.clone()
        }
    }

    /// Maps a witness of `Y_r` to a witness of the original instance. The bit
    /// vector itself is unchanged; only the indexing is restored.
    pub fn pull_back(&self, r: usize, x: &SolutionVector) -> Result<SolutionVector> {
        let member = self
            .member(r)
            .ok_or_else(|| Error::InvalidArgument(format!("no member Y_{r} in a family of {}", self.members.len())))?;
        if !verify_solution(member, x)? {
            return Err(Error::NotAWitness(format!("assignment does not solve Y_{r}")));
        }
        self.source_trace.pull_back(x)
    }
}

/// `C = B_m * n * a_n^m * b + m + 1` for a canonical instance.
///
/// Exceeds `n * a_n^m`, `b` and `B_m * n * a_n^m + m` simultaneously, so the
/// lifted members satisfy both the restriction predicate and the spread
/// precondition of [`restricted_to_polycorr`].
pub fn shift_constant(canonical: &SubsetSumInstance, m: u32) -> BigUint {
    let n = BigUint::from(canonical.len());
    let a_n = canonical.weights().last().cloned().unwrap_or_default();
    binomial_peak(m) * n * Pow::pow(&a_n, m) * canonical.bound() + BigUint::from(m) + 1u32
}

pub fn lift_to_restricted(ss: &SubsetSumInstance, m: u32) -> Result<LiftFamily> {
    check_exponent(m)?;
    let (source, _) = ss.canonicalize()?;
    let c = shift_constant(&source, m);
    lift_with_shift(ss, m, c)
}

/// Builds the lift family with an arbitrary shift constant. Only
/// [`shift_constant`] carries the correctness guarantee; other values exist
/// for fail-injection.
pub fn lift_with_shift(ss: &SubsetSumInstance, m: u32, c: BigUint) -> Result<LiftFamily> {
    check_exponent(m)?;
    let (source, source_trace) = ss.canonicalize()?;
    let shifted: Vec<BigUint> = source.weights().iter().map(|a| a + &c).collect();
    let members = (0..=source.len())
        .map(|r| {
            let bound = BigUint::from(r) * &c + source.bound();
            SubsetSumInstance::new(shifted.clone(), bound)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LiftFamily { source, source_trace, shift_constant: c, exponent: m, members })
}

/// Canonical form used by the second stage. When every item exceeds the
/// bound (the `Y_0` member of a lift family) the items are kept, sorted, so
/// the stage still emits an instance over the same item set.
fn stage_two_input(rss: &SubsetSumInstance) -> Result<(SubsetSumInstance, ReductionTrace)> {
    match rss.canonicalize() {
        Err(Error::VacuousInstance) => Ok(rss.sorted()),
        other => other,
    }
}

/// `r = floor(b / a_1)` and `b' = b - r a_1`.
fn decompose(canonical: &SubsetSumInstance) -> (BigUint, BigUint) {
    let a_1 = &canonical.weights()[0];
    let b = canonical.bound();
    let r = b / a_1;
    let residual = b - &r * a_1;
    (r, residual)
}

/// Difference instance `X_1(A', b', b')` with `a'_i = a_i - a_1`.
pub fn difference_instance(rss: &SubsetSumInstance) -> Result<(SubsetSumInstance, ReductionTrace)> {
    let (canonical, mut trace) = stage_two_input(rss)?;
    let (r, residual) = decompose(&canonical);
    let d = differences(canonical.weights());
    trace.solution_count_r = Some(r);
    trace.residual = Some(residual.clone());
    trace.differences = d.clone();
    Ok((SubsetSumInstance::with_zero_weights(d, residual), trace))
}

/// Spread precondition `a_1 > B_m * n * d_n^m + m` on a canonical instance.
pub fn spread_precondition_holds(canonical: &SubsetSumInstance, m: u32) -> bool {
    let w = canonical.weights();
    let (Some(a_1), Some(a_n)) = (w.first(), w.last()) else {
        return false;
    };
    let d_n = a_n - a_1;
    let rhs = binomial_peak(m) * BigUint::from(w.len()) * Pow::pow(&d_n, m) + BigUint::from(m);
    *a_1 > rhs
}

/// Output of the second stage together with what is needed to map back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyCorrReduction {
    pub instance: PolyCorrInstance,
    pub trace: ReductionTrace,
}

impl PolyCorrReduction {
    /// Witness identity: a solution of `X_m(A, b, G)` solves the source with
    /// `sum a_i x_i = b`.
    pub fn pull_back(&self, x: &SolutionVector) -> Result<SolutionVector> {
        if !verify_solution(&self.instance, x)? {
            return Err(Error::NotAWitness("assignment does not solve X_m(A, b, G)".into()));
        }
        self.trace.pull_back(x)
    }

    pub fn target_g(&self) -> &BigUint {
        self.instance.target()
    }
}

/// `X_m(A, b, G)` with `G = a_1^(m-1) * (r a_1 + m b')`.
pub fn restricted_to_polycorr(rss: &SubsetSumInstance, m: u32) -> Result<PolyCorrReduction> {
    check_exponent(m)?;
    let (canonical, mut trace) = stage_two_input(rss)?;
    if !spread_precondition_holds(&canonical, m) {
        return Err(Error::SpreadTooLarge { m });
    }
    let (r, residual) = decompose(&canonical);
    let a_1 = &canonical.weights()[0];
    let g = Pow::pow(a_1, m - 1) * (&r * a_1 + BigUint::from(m) * &residual);
    let instance =
        PolyCorrInstance::new(canonical.weights().to_vec(), m, canonical.bound().clone(), g.clone())?;
    trace.solution_count_r = Some(r);
    trace.residual = Some(residual);
    trace.polycorr_target = Some(g);
    trace.binomial_peak = Some(binomial_peak(m));
    Ok(PolyCorrReduction { instance, trace })
}

/// One output of [`full_pipeline`]: the `X_m` image of lift member `Y_r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineMember {
    /// Family index of the lift member this instance came from.
    pub family_index: usize,
    pub instance: PolyCorrInstance,
    /// Indexed against the caller's original instance.
    pub trace: ReductionTrace,
}

impl PipelineMember {
    pub fn pull_back(&self, x: &SolutionVector) -> Result<SolutionVector> {
        if !verify_solution(&self.instance, x)? {
            return Err(Error::NotAWitness(format!(
                "assignment does not solve pipeline member {}",
                self.family_index
            )));
        }
        self.trace.pull_back(x)
    }
}

/// Lift into `Y_0 .. Y_n`, then reduce each member to `X_m`. The source is
/// satisfiable iff at least one of the `n + 1` outputs is.
pub fn full_pipeline(ss: &SubsetSumInstance, m: u32) -> Result<Vec<PipelineMember>> {
    let family = lift_to_restricted(ss, m)?;
    match pipeline_from_family(&family) {
        Err(Error::SpreadTooLarge { .. }) => {
            panic!("lifted member violates the spread precondition; the shift constant is wrong")
        }
        other => other,
    }
}

/// Second stage applied to every member of an existing family.
pub fn pipeline_from_family(family: &LiftFamily) -> Result<Vec<PipelineMember>> {
    family
        .members
        .iter()
        .enumerate()
        .map(|(r, member)| {
            let stage = restricted_to_polycorr(member, family.exponent)?;
            let mut trace = family.source_trace.then(&stage.trace);
            trace.shift_constant = Some(family.shift_constant.clone());
            Ok(PipelineMember { family_index: r, instance: stage.instance, trace })
        })
        .collect()
}

fn check_exponent(m: u32) -> Result<()> {
    if m == 0 {
        return Err(Error::DomainViolation("exponent m must be positive".into()));
    }
    Ok(())
}

/// `y_i = 1 - x_i` turns `X(A, b, P, q)` into
/// `X(P, sum p - q, A, sum a - b)`.
///
/// A negative capacity-side bound `sum a - b` is clamped to 0, where the new
/// value constraint is vacuous exactly as the old packing constraint was. When
/// `q > sum p` the source cannot be satisfied; the image then gets capacity 0
/// and the unreachable target `sum a + 1`, so both solution sets are empty.
pub fn complement_transform(k: &KnapsackInstance) -> KnapsackInstance {
    let sum_a: BigUint = k.weights().iter().sum();
    let values = k.values();
    let sum_p: BigUint = values.iter().sum();
    let (capacity, target) = if k.target() > &sum_p {
        (BigUint::zero(), &sum_a + 1u32)
    } else {
        let target = if k.capacity() > &sum_a { BigUint::zero() } else { &sum_a - k.capacity() };
        (&sum_p - k.target(), target)
    };
    KnapsackInstance::new(values.into_owned(), k.weights().to_vec(), capacity, target)
        .expect("weights and values are positive")
}

/// True when [`complement_transform`] needs no clamping, in which case it is
/// an involution.
pub fn complement_is_exact(k: &KnapsackInstance) -> bool {
    let sum_a: BigUint = k.weights().iter().sum();
    let sum_p: BigUint = k.values().iter().sum();
    k.capacity() <= &sum_a && k.target() <= &sum_p
}
