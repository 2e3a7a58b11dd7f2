//! Executable checks of the cardinality and equivalence lemmas behind the
//! reduction chain, seeded instance generation, and fail-injection.
//!
//! Universally quantified statements are checked by exhaustive enumeration
//! only; the solver's enumeration cap bounds the verified envelope.

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, Pow};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::json::{opt_count, opt_dec};
use crate::model::{verify_solution, Instance, Problem, SolutionVector, SubsetSumInstance};
use crate::reductions::{
    difference_instance, lift_to_restricted, lift_with_shift, pipeline_from_family, restricted_to_polycorr,
    LiftFamily, PipelineMember, PolyCorrReduction,
};
use crate::solvers::{enumerate_witnesses, solve_brute_force, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LemmaId {
    L2_2,
    L2_3,
    L3_2,
    L3_3_4,
    L3_5,
    T1_1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Skip,
}

/// What a counterexample claims; [`Counterexample::reproduces`] re-checks it
/// through [`verify_solution`], without the harness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Violation {
    /// `x` solves `instance` but selects a number of items other than `expected`.
    Cardinality {
        instance: Instance,
        #[serde(with = "crate::json::dec")]
        expected: BigUint,
    },
    /// `accepted` solves `accepted_by` while its image `rejected` does not
    /// solve `rejected_by`.
    Correspondence {
        accepted_by: Instance,
        accepted: SolutionVector,
        rejected_by: Instance,
        rejected: SolutionVector,
    },
    /// `x` solves exactly one of `source` and its difference instance.
    Difference { source: Instance },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Counterexample {
    pub x: SolutionVector,
    pub explanation: String,
    pub violation: Violation,
}

impl Counterexample {
    pub fn reproduces(&self) -> Result<bool> {
        match &self.violation {
            Violation::Cardinality { instance, expected } => {
                Ok(verify_solution(instance, &self.x)? && BigUint::from(self.x.cardinality()) != *expected)
            }
            Violation::Correspondence { accepted_by, accepted, rejected_by, rejected } => {
                Ok(verify_solution(accepted_by, accepted)? && !verify_solution(rejected_by, rejected)?)
            }
            Violation::Difference { source: Instance::SubsetSum(source) } => {
                let (diff, _) = difference_instance(source)?;
                Ok(verify_solution(source, &self.x)? != verify_solution(&diff, &self.x)?)
            }
            Violation::Difference { .. } => Ok(false),
        }
    }
}

/// Constants the check ran with.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Parameters {
    pub m: u32,
    #[serde(with = "opt_count")]
    pub r: Option<BigUint>,
    #[serde(rename = "C", with = "opt_dec")]
    pub shift_constant: Option<BigUint>,
    #[serde(rename = "b_prime", with = "opt_dec")]
    pub residual: Option<BigUint>,
    #[serde(rename = "G", with = "opt_dec")]
    pub polycorr_target: Option<BigUint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckReport {
    pub lemma_id: LemmaId,
    /// SHA-256 of the checked instance's JSON form.
    pub instance_digest: String,
    pub verdict: Verdict,
    pub counterexample: Option<Counterexample>,
    pub parameters: Parameters,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckReport {
    fn new(lemma_id: LemmaId, source: &SubsetSumInstance, parameters: Parameters) -> Self {
        Self {
            lemma_id,
            instance_digest: digest(&source.clone().into()),
            verdict: Verdict::Pass,
            counterexample: None,
            parameters,
            note: None,
        }
    }

    fn fail(mut self, counterexample: Counterexample) -> Self {
        self.verdict = Verdict::Fail;
        self.counterexample = Some(counterexample);
        self
    }

    fn skip(mut self, note: impl Into<String>) -> Self {
        self.verdict = Verdict::Skip;
        self.note = Some(note.into());
        self
    }
}

pub fn digest(instance: &Instance) -> String {
    let text = crate::json::instance_to_json(instance);
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Tally written as the last line of a report file.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportSummary {
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
    pub wall_time_ms: u64,
}

impl ReportSummary {
    /// `{"summary": {...}}`, the closing line of a report file.
    pub fn to_json_line(&self) -> String {
        #[derive(Serialize)]
        struct Line<'a> {
            summary: &'a ReportSummary,
        }
        serde_json::to_string(&Line { summary: self }).expect("summary serializes")
    }

    pub fn tally(reports: &[CheckReport], started: Instant) -> Self {
        let count = |v| reports.iter().filter(|r| r.verdict == v).count();
        Self {
            pass: count(Verdict::Pass),
            fail: count(Verdict::Fail),
            skip: count(Verdict::Skip),
            wall_time_ms: started.elapsed().as_millis() as u64,
        }
    }
}

/// Formula-breaking replacements for the target `G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TargetMutation {
    Set(BigUint),
    /// `G + m * a_1^(m-1)`
    AddLinearTerm,
    /// `a_1^m`
    LeadingPower,
}

impl TargetMutation {
    fn apply(&self, g: &BigUint, a_1: &BigUint, m: u32) -> BigUint {
        match self {
            TargetMutation::Set(v) => v.clone(),
            TargetMutation::AddLinearTerm => g + BigUint::from(m) * Pow::pow(a_1, m - 1),
            TargetMutation::LeadingPower => Pow::pow(a_1, m),
        }
    }
}

/// Fail-injection knobs. The default applies no mutation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Mutation {
    pub shift_constant: Option<BigUint>,
    pub polycorr_target: Option<TargetMutation>,
}

/// Runs lemma checks with a solver configuration and optional mutation.
#[derive(Debug, Clone, Default)]
pub struct Harness {
    pub config: SolverConfig,
    pub mutation: Mutation,
}

fn all_witnesses<P: Problem + ?Sized>(instance: &P, config: &SolverConfig) -> Result<Vec<SolutionVector>> {
    Ok(enumerate_witnesses(instance, usize::MAX, config)?.witnesses)
}

fn with_cardinality(ws: Vec<SolutionVector>, r: &BigUint) -> BTreeSet<SolutionVector> {
    ws.into_iter().filter(|x| BigUint::from(x.cardinality()) == *r).collect()
}

/// First `x` (lexicographically) present in exactly one of the two sets.
fn first_mismatch<'a>(
    left: &'a BTreeSet<SolutionVector>,
    right: &'a BTreeSet<SolutionVector>,
) -> Option<(&'a SolutionVector, bool)> {
    left.symmetric_difference(right).next().map(|x| (x, left.contains(x)))
}

fn cardinality_violation(instance: Instance, witnesses: &[SolutionVector], r: &BigUint) -> Option<Counterexample> {
    let x = witnesses.iter().find(|x| BigUint::from(x.cardinality()) != *r)?;
    Some(Counterexample {
        x: x.clone(),
        explanation: format!("witness has cardinality {} but r = {r}", x.cardinality()),
        violation: Violation::Cardinality { instance, expected: r.clone() },
    })
}

fn correspondence(
    x: &SolutionVector,
    accepted_by: Instance,
    rejected_by: Instance,
    explanation: String,
) -> Counterexample {
    Counterexample {
        x: x.clone(),
        explanation,
        violation: Violation::Correspondence {
            accepted_by,
            accepted: x.clone(),
            rejected_by,
            rejected: x.clone(),
        },
    }
}

impl Harness {
    pub fn new(config: SolverConfig) -> Self {
        Self { config, mutation: Mutation::default() }
    }

    pub fn with_mutation(mut self, mutation: Mutation) -> Self {
        self.mutation = mutation;
        self
    }

    pub fn lift(&self, ss: &SubsetSumInstance, m: u32) -> Result<LiftFamily> {
        match &self.mutation.shift_constant {
            Some(c) => lift_with_shift(ss, m, c.clone()),
            None => lift_to_restricted(ss, m),
        }
    }

    fn lift_member<'a>(&self, family: &'a LiftFamily, r: usize) -> Result<&'a SubsetSumInstance> {
        family.member(r).ok_or_else(|| {
            Error::InvalidArgument(format!("r = {r} outside 0..={}", family.members.len() - 1))
        })
    }

    fn family_params(&self, family: &LiftFamily, r: usize) -> Parameters {
        Parameters {
            m: family.exponent,
            r: Some(BigUint::from(r)),
            shift_constant: Some(family.shift_constant.clone()),
            ..Parameters::default()
        }
    }

    /// Every solution of `Y_r` selects exactly `r` items.
    pub fn check_lemma_2_2(&self, ss: &SubsetSumInstance, m: u32, r: usize) -> Result<CheckReport> {
        let family = self.lift(ss, m)?;
        let member = self.lift_member(&family, r)?;
        let report = CheckReport::new(LemmaId::L2_2, ss, self.family_params(&family, r));
        let witnesses = all_witnesses(member, &self.config)?;
        Ok(match cardinality_violation(member.clone().into(), &witnesses, &BigUint::from(r)) {
            Some(cx) => report.fail(cx),
            None => report,
        })
    }

    /// Cardinality-`r` solutions of `Y_r` and of the source coincide bit for bit.
    pub fn check_lemma_2_3(&self, ss: &SubsetSumInstance, m: u32, r: usize) -> Result<CheckReport> {
        let family = self.lift(ss, m)?;
        let member = self.lift_member(&family, r)?;
        let report = CheckReport::new(LemmaId::L2_3, ss, self.family_params(&family, r));
        let r_big = BigUint::from(r);
        let lifted = with_cardinality(all_witnesses(member, &self.config)?, &r_big);
        let source = with_cardinality(all_witnesses(&family.source, &self.config)?, &r_big);
        Ok(match first_mismatch(&lifted, &source) {
            None => report,
            Some((x, true)) => report.fail(correspondence(
                x,
                member.clone().into(),
                family.source.clone().into(),
                format!("solves Y_{r} but not the source"),
            )),
            Some((x, false)) => report.fail(correspondence(
                x,
                family.source.clone().into(),
                member.clone().into(),
                format!("cardinality-{r} solution of the source does not solve Y_{r}"),
            )),
        })
    }

    /// Second-stage reduction with the target mutation applied, or `None`
    /// when the spread precondition fails.
    fn stage_two(&self, rss: &SubsetSumInstance, m: u32) -> Result<Option<PolyCorrReduction>> {
        match restricted_to_polycorr(rss, m) {
            Ok(mut red) => {
                if let Some(mutation) = &self.mutation.polycorr_target {
                    let a_1 = red.instance.weights()[0].clone();
                    let g = mutation.apply(red.instance.target(), &a_1, m);
                    red.trace.polycorr_target = Some(g.clone());
                    red.instance = red.instance.with_target(g);
                }
                Ok(Some(red))
            }
            Err(Error::SpreadTooLarge { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    }

    fn stage_two_params(m: u32, red: &PolyCorrReduction) -> Parameters {
        Parameters {
            m,
            r: red.trace.solution_count_r.clone(),
            shift_constant: None,
            residual: red.trace.residual.clone(),
            polycorr_target: red.trace.polycorr_target.clone(),
        }
    }

    const SKIP_NOTE: &'static str = "spread precondition a_1 > B_m*n*d_n^m + m does not hold";

    /// Every solution of `X_1(A, r a_1 + b', r a_1 + b')` selects `r` items.
    pub fn check_lemma_3_2(&self, rss: &SubsetSumInstance, m: u32) -> Result<CheckReport> {
        let Some(red) = self.stage_two(rss, m)? else {
            return Ok(CheckReport::new(LemmaId::L3_2, rss, Parameters { m, ..Parameters::default() })
                .skip(Self::SKIP_NOTE));
        };
        let report = CheckReport::new(LemmaId::L3_2, rss, Self::stage_two_params(m, &red));
        let canonical = stage_source(&red)?;
        let r = red.trace.solution_count_r.clone().expect("stage two records r");
        let witnesses = all_witnesses(&canonical, &self.config)?;
        Ok(match cardinality_violation(canonical.into(), &witnesses, &r) {
            Some(cx) => report.fail(cx),
            None => report,
        })
    }

    /// The chain behind the second stage, on exhaustively enumerated sets:
    /// every source solution has cardinality `r`; cardinality-`r` solutions
    /// of the source and of the difference instance coincide; and the
    /// solutions of `X_m(A, b, G)` are exactly the cardinality-`r` solutions
    /// of the difference instance.
    pub fn check_lemma_3_4(&self, rss: &SubsetSumInstance, m: u32) -> Result<CheckReport> {
        let Some(red) = self.stage_two(rss, m)? else {
            return Ok(CheckReport::new(LemmaId::L3_3_4, rss, Parameters { m, ..Parameters::default() })
                .skip(Self::SKIP_NOTE));
        };
        let report = CheckReport::new(LemmaId::L3_3_4, rss, Self::stage_two_params(m, &red));
        let canonical = stage_source(&red)?;
        let r = red.trace.solution_count_r.clone().expect("stage two records r");
        let (diff, _) = difference_instance(&canonical)?;

        let source_all = all_witnesses(&canonical, &self.config)?;
        if let Some(cx) = cardinality_violation(canonical.clone().into(), &source_all, &r) {
            return Ok(report.fail(cx));
        }
        let source_r = with_cardinality(source_all, &r);
        let diff_r = with_cardinality(all_witnesses(&diff, &self.config)?, &r);
        if let Some((x, in_source)) = first_mismatch(&source_r, &diff_r) {
            let side = if in_source { "source" } else { "difference instance" };
            return Ok(report.fail(Counterexample {
                x: x.clone(),
                explanation: format!("cardinality-{r} solution of the {side} only"),
                violation: Violation::Difference { source: canonical.into() },
            }));
        }
        // From here on the source's solutions are exactly the cardinality-r
        // difference solutions, so the source stands in for the difference
        // instance (which has zero weights) in counterexamples.
        let polycorr: BTreeSet<_> = all_witnesses(&red.instance, &self.config)?.into_iter().collect();
        let values = red.instance.values();
        let value_of = |x: &SolutionVector| -> BigUint { x.selected().map(|i| &values[i]).sum() };
        // The offending X_m solution closest to the threshold G.
        let extra = polycorr.difference(&diff_r).min_by_key(|x| (value_of(x), (*x).clone()));
        if let Some(x) = extra {
            return Ok(report.fail(correspondence(
                x,
                red.instance.clone().into(),
                canonical.into(),
                format!(
                    "solves X_m(A, b, G) with cardinality {} and value {} but is not a cardinality-{r} solution of the source",
                    x.cardinality(),
                    value_of(x)
                ),
            )));
        }
        Ok(match diff_r.difference(&polycorr).next() {
            None => report,
            Some(x) => report.fail(correspondence(
                x,
                canonical.into(),
                red.instance.clone().into(),
                format!("cardinality-{r} solution of the source does not solve X_m(A, b, G)"),
            )),
        })
    }

    /// Every solution of `X_m(A, b, G)` selects exactly `r` items.
    pub fn check_lemma_3_5(&self, rss: &SubsetSumInstance, m: u32) -> Result<CheckReport> {
        let Some(red) = self.stage_two(rss, m)? else {
            return Ok(CheckReport::new(LemmaId::L3_5, rss, Parameters { m, ..Parameters::default() })
                .skip(Self::SKIP_NOTE));
        };
        let report = CheckReport::new(LemmaId::L3_5, rss, Self::stage_two_params(m, &red));
        let r = red.trace.solution_count_r.clone().expect("stage two records r");
        let witnesses = all_witnesses(&red.instance, &self.config)?;
        Ok(match cardinality_violation(red.instance.into(), &witnesses, &r) {
            Some(cx) => report.fail(cx),
            None => report,
        })
    }

    /// Pipeline outputs with the harness mutations applied.
    pub fn pipeline(&self, ss: &SubsetSumInstance, m: u32) -> Result<Vec<PipelineMember>> {
        let family = self.lift(ss, m)?;
        let mut members = pipeline_from_family(&family)?;
        if let Some(mutation) = &self.mutation.polycorr_target {
            for member in &mut members {
                let a_1 = member.instance.weights()[0].clone();
                let g = mutation.apply(member.instance.target(), &a_1, m);
                member.trace.polycorr_target = Some(g.clone());
                member.instance = member.instance.clone().with_target(g);
            }
        }
        Ok(members)
    }

    /// The source is satisfiable iff some pipeline output is, and a pulled
    /// back witness sums to `b` exactly.
    pub fn check_theorem_1_1(&self, ss: &SubsetSumInstance, m: u32) -> Result<CheckReport> {
        let members = match self.pipeline(ss, m) {
            Ok(members) => members,
            Err(Error::SpreadTooLarge { .. }) => {
                return Ok(CheckReport::new(LemmaId::T1_1, ss, Parameters { m, ..Parameters::default() })
                    .skip(Self::SKIP_NOTE))
            }
            Err(e) => return Err(e),
        };
        let params = Parameters {
            m,
            shift_constant: members[0].trace.shift_constant.clone(),
            ..Parameters::default()
        };
        let report = CheckReport::new(LemmaId::T1_1, ss, params);
        let source = solve_brute_force(ss, &self.config)?;
        let mut solved = None;
        for member in &members {
            let out = solve_brute_force(&member.instance, &self.config)?;
            if let Some(w) = out.witness {
                solved = Some((member, w));
                break;
            }
        }
        match (source.witness, solved) {
            (None, None) => Ok(report),
            (Some(x), None) => {
                // The source witness lands in the member indexed by its cardinality.
                let member = &members[x.cardinality()];
                let image = member.trace.push_forward(&x)?;
                Ok(report.fail(Counterexample {
                    x: x.clone(),
                    explanation: format!(
                        "source is satisfiable but no pipeline output is (member {} rejects the image)",
                        member.family_index
                    ),
                    violation: Violation::Correspondence {
                        accepted_by: ss.clone().into(),
                        accepted: x,
                        rejected_by: member.instance.clone().into(),
                        rejected: image,
                    },
                }))
            }
            (source_witness, Some((member, w))) => {
                let back = member.pull_back(&w)?;
                let (weight, _) = crate::model::evaluate(ss, &back)?;
                if &weight == ss.bound() && verify_solution(ss, &back)? {
                    return Ok(report);
                }
                let explanation = match source_witness {
                    None => format!("pipeline member {} is satisfiable but the source is not", member.family_index),
                    Some(_) => format!("witness of member {} pulls back to sum {weight}", member.family_index),
                };
                Ok(report.fail(Counterexample {
                    x: w.clone(),
                    explanation,
                    violation: Violation::Correspondence {
                        accepted_by: member.instance.clone().into(),
                        accepted: w,
                        rejected_by: ss.clone().into(),
                        rejected: back,
                    },
                }))
            }
        }
    }

    /// Every check on one instance: the lift lemmas for all `r`, the
    /// second-stage lemmas on the instance itself and on every lift member,
    /// and the end-to-end theorem. Ordered by (instance digest, lemma id).
    pub fn check_all(&self, ss: &SubsetSumInstance, m: u32) -> Result<Vec<CheckReport>> {
        let family = self.lift(ss, m)?;
        let mut reports = Vec::new();
        for r in 0..family.members.len() {
            reports.push(self.check_lemma_2_2(ss, m, r)?);
            reports.push(self.check_lemma_2_3(ss, m, r)?);
        }
        for rss in std::iter::once(ss).chain(&family.members) {
            reports.push(self.check_lemma_3_2(rss, m)?);
            reports.push(self.check_lemma_3_4(rss, m)?);
            reports.push(self.check_lemma_3_5(rss, m)?);
        }
        reports.push(self.check_theorem_1_1(ss, m)?);
        reports.sort_by(|a, b| (&a.instance_digest, a.lemma_id).cmp(&(&b.instance_digest, b.lemma_id)));
        Ok(reports)
    }
}

/// The canonical subset-sum instance the second stage worked on.
fn stage_source(red: &PolyCorrReduction) -> Result<SubsetSumInstance> {
    SubsetSumInstance::new(red.instance.weights().to_vec(), red.instance.capacity().clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundMode {
    /// `b` is the sum of a random nonempty subset.
    SubsetAchievable,
    /// `b` uniform in `[1, sum a]`.
    Random,
    /// `b = sum a` or `b = 1`.
    Boundary,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GenSpec {
    pub seed: u64,
    pub n: usize,
    pub weight_max: BigUint,
    pub bound_mode: BoundMode,
}

/// Deterministic subset-sum instance for `spec`; weights uniform in
/// `[1, weight_max]`.
pub fn generate(spec: &GenSpec) -> Result<SubsetSumInstance> {
    if spec.n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if spec.weight_max < BigUint::one() {
        return Err(Error::InvalidArgument("weight_max must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let upper = &spec.weight_max + 1u32;
    let weights: Vec<BigUint> = (0..spec.n).map(|_| rng.gen_biguint_range(&BigUint::one(), &upper)).collect();
    let total: BigUint = weights.iter().sum();
    let bound = match spec.bound_mode {
        BoundMode::SubsetAchievable => {
            let mut pick: Vec<bool> = (0..spec.n).map(|_| rng.gen_bool(0.5)).collect();
            if !pick.contains(&true) {
                pick[rng.gen_range(0..spec.n)] = true;
            }
            weights.iter().zip(&pick).filter(|(_, &p)| p).map(|(w, _)| w).sum()
        }
        BoundMode::Random => rng.gen_biguint_range(&BigUint::one(), &(&total + 1u32)),
        BoundMode::Boundary => {
            if rng.gen_bool(0.5) {
                total
            } else {
                BigUint::one()
            }
        }
    };
    SubsetSumInstance::new(weights, bound)
}
