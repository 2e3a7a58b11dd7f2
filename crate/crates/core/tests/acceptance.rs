//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, Pow};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polyknap::num::{binomial_peak, bit_len};
use polyknap::{
    complement_is_exact, complement_transform, full_pipeline, generate, is_restricted, lift_to_restricted,
    solve_brute_force, solve_dp, verify_solution, BoundMode, CheckReport, Error, GenSpec, Harness,
    KnapsackInstance, LiftFamily, Mutation, Problem, SolutionVector, SolverConfig, SubsetSumInstance,
    TargetMutation, Verdict,
};

use common::{big, bigs, ss};

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn new(ok: bool, detail: impl Into<String>) -> Self {
        Self { ok, detail: detail.into() }
    }
}

/// Accumulates pass/fail facts across the criteria that span several inputs.
#[derive(Default)]
struct Tally {
    checked: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failures.len() < 5 {
            self.failures.push(what());
        } else if !ok {
            self.failures.push(String::new());
        }
    }

    fn outcome(&self, noun: &str) -> Outcome {
        if self.failures.is_empty() {
            Outcome::new(true, format!("{} {noun}", self.checked))
        } else {
            let shown: Vec<&str> = self.failures.iter().map(String::as_str).filter(|s| !s.is_empty()).collect();
            Outcome::new(
                false,
                format!("{} of {} {noun} failed; first: {}", self.failures.len(), self.checked, shown.join(" | ")),
            )
        }
    }
}

fn weight_multisets(n: usize, max: u64) -> Vec<Vec<u64>> {
    fn go(n: usize, lo: u64, max: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for w in lo..=max {
            cur.push(w);
            go(n, w, max, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, 1, max, &mut Vec::new(), &mut out);
    out
}

/// Distinct canonical forms of every instance with `n <= 4`, weights in
/// `[1, 8]` and `b` in `[1, 20]`. Instances whose items all exceed `b` are
/// left out.
fn grid() -> Vec<SubsetSumInstance> {
    let mut seen = BTreeSet::new();
    for n in 1..=4 {
        for ws in weight_multisets(n, 8) {
            for b in 1..=20 {
                match ss(&ws, b).canonicalize() {
                    Ok((canon, _)) => {
                        seen.insert((canon.weights().to_vec(), canon.bound().clone()));
                    }
                    Err(Error::VacuousInstance) => {}
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }
    seen.into_iter().map(|(w, b)| SubsetSumInstance::new(w, b).unwrap()).collect()
}

fn mixed_instances() -> Vec<SubsetSumInstance> {
    let modes = [BoundMode::SubsetAchievable, BoundMode::Random, BoundMode::Boundary];
    (0..300u64)
        .map(|seed| {
            generate(&GenSpec {
                seed,
                n: 1 + (seed as usize % 10),
                weight_max: big(50),
                bound_mode: modes[seed as usize % 3],
            })
            .unwrap()
        })
        .collect()
}

fn describe(ss: &SubsetSumInstance) -> String {
    let ws: Vec<String> = ss.weights().iter().map(ToString::to_string).collect();
    format!("A=({}), b={}", ws.join(","), ss.bound())
}

fn record(tally: &mut Tally, report: &CheckReport, ss: &SubsetSumInstance) {
    tally.check(report.verdict == Verdict::Pass, || {
        format!("{:?} {:?} on {} m={}", report.lemma_id, report.verdict, describe(ss), report.parameters.m)
    });
}

/// Restriction of every lift member.
fn restriction(tally: &mut Tally, family: &LiftFamily) {
    for (r, member) in family.members.iter().enumerate() {
        tally.check(is_restricted(member, family.exponent), || {
            format!("Y_{r} of {} not restricted for m={}", describe(&family.source), family.exponent)
        });
    }
}

/// Bit-length bounds on `C`, the lifted bounds and every `G`.
fn size_bounds(tally: &mut Tally, family: &LiftFamily) {
    let m = family.exponent;
    let src = &family.source;
    let n = src.len();
    let a_n = src.weights().iter().max().unwrap();
    let c_limit = bit_len(&binomial_peak(m))
        + bit_len(&big(n as u64))
        + u64::from(m) * bit_len(a_n)
        + bit_len(src.bound())
        + 2;
    tally.check(bit_len(&family.shift_constant) <= c_limit, || {
        format!("bitlen(C) = {} > {c_limit} for {}", bit_len(&family.shift_constant), describe(src))
    });
    let bound_limit = bit_len(&family.shift_constant) + bit_len(&big(n as u64 + 1));
    for member in &family.members {
        tally.check(bit_len(member.bound()) <= bound_limit, || {
            format!("lifted bound {} exceeds {bound_limit} bits", member.bound())
        });
    }
    for member in polyknap::reductions::pipeline_from_family(family).unwrap() {
        let inst = &member.instance;
        let a_1 = inst.weights().iter().min().unwrap();
        let g_limit = u64::from(m - 1) * bit_len(a_1) + bit_len(&big(u64::from(m))) + bit_len(inst.capacity());
        tally.check(bit_len(inst.target()) <= g_limit, || {
            format!("bitlen(G) = {} > {g_limit}", bit_len(inst.target()))
        });
    }
}

fn criterion_1(grid: &[SubsetSumInstance], restrict: &mut Tally, sizes: &mut Tally) -> Outcome {
    let started = Instant::now();
    let h = Harness::default();
    let mut tally = Tally::default();
    for inst in grid {
        for m in 1..=3 {
            let family = lift_to_restricted(inst, m).unwrap();
            restriction(restrict, &family);
            size_bounds(sizes, &family);
            for r in 0..family.members.len() {
                record(&mut tally, &h.check_lemma_2_2(inst, m, r).unwrap(), inst);
                record(&mut tally, &h.check_lemma_2_3(inst, m, r).unwrap(), inst);
            }
            for member in &family.members {
                record(&mut tally, &h.check_lemma_3_4(member, m).unwrap(), member);
                record(&mut tally, &h.check_lemma_3_5(member, m).unwrap(), member);
            }
        }
    }
    let elapsed = started.elapsed();
    let mut out = tally.outcome(&format!("lemma checks over {} canonical instances", grid.len()));
    out.detail.push_str(&format!(", {:.1}s", elapsed.as_secs_f64()));
    if elapsed > Duration::from_secs(300) {
        out.ok = false;
        out.detail.push_str(" (over the 300s budget)");
    }
    out
}

fn criterion_2(instances: &[SubsetSumInstance], restrict: &mut Tally, sizes: &mut Tally) -> Outcome {
    let cfg = SolverConfig::default();
    let mut tally = Tally::default();
    for inst in instances {
        let expected = common::satisfiable(inst);
        for m in 1..=3 {
            let family = match lift_to_restricted(inst, m) {
                Ok(f) => f,
                Err(Error::VacuousInstance) => {
                    tally.check(!expected, || format!("vacuous but satisfiable: {}", describe(inst)));
                    continue;
                }
                Err(e) => panic!("{e}"),
            };
            restriction(restrict, &family);
            size_bounds(sizes, &family);
            let mut any = false;
            for member in full_pipeline(inst, m).unwrap() {
                let report = solve_brute_force(&member.instance, &cfg).unwrap();
                if let Some(x) = report.witness {
                    any = true;
                    let back = member.pull_back(&x).unwrap();
                    let sum: BigUint = back.selected().map(|i| &inst.weights()[i]).sum();
                    tally.check(&sum == inst.bound(), || {
                        format!("pulled-back witness sums to {sum} on {} m={m}", describe(inst))
                    });
                }
            }
            tally.check(any == expected, || {
                format!("pipeline says {any}, oracle says {expected} on {} m={m}", describe(inst))
            });
        }
    }
    tally.outcome("pipeline checks over 300 instances x 3 exponents")
}

fn criterion_3() -> Outcome {
    let pipeline = full_pipeline(&ss(&[1, 2, 3], 5), 2).unwrap();
    let member = &pipeline[2];
    let t = &member.trace;
    let x = SolutionVector::from_bits(&[0, 1, 1]).unwrap();
    let (weight, value) = polyknap::evaluate(&member.instance, &x).unwrap();
    let want = (Some(big(273)), Some(big(2)), Some(big(3)), Some(big(151796)));
    let got = (t.shift_constant.clone(), t.solution_count_r.clone(), t.residual.clone(), t.polycorr_target.clone());
    let ok = got == want
        && weight == big(551)
        && value == big(151801)
        && verify_solution(&member.instance, &x).unwrap();
    Outcome::new(
        ok,
        format!(
            "C={:?} r={:?} b'={:?} G={:?} value={value}",
            got.0.map(|v| v.to_string()),
            got.1.map(|v| v.to_string()),
            got.2.map(|v| v.to_string()),
            got.3.map(|v| v.to_string())
        ),
    )
}

fn criterion_5() -> Outcome {
    let started = Instant::now();
    let cfg = SolverConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let mut tally = Tally::default();
    for i in 0..200 {
        let n = rng.gen_range(1..=15usize);
        let weights: Vec<BigUint> = (0..n).map(|_| big(rng.gen_range(1..=100))).collect();
        let values: Vec<BigUint> = (0..n).map(|_| big(rng.gen_range(1..=1_000_000))).collect();
        let capacity = big(rng.gen_range(1..=500));
        let total: BigUint = values.iter().sum();
        let target = rng.gen_biguint_range(&BigUint::default(), &(total + 1u32));
        let k = KnapsackInstance::new(weights, values, capacity, target).unwrap();
        let brute = solve_brute_force(&k, &cfg).unwrap();
        let dp = solve_dp(&k, &cfg).unwrap();
        tally.check(brute.satisfiable == dp.satisfiable && brute.optimum == dp.optimum, || {
            format!("instance {i}: brute {:?}/{:?} vs dp {:?}/{:?}", brute.satisfiable, brute.optimum, dp.satisfiable, dp.optimum)
        });
        if let Some(x) = &dp.witness {
            tally.check(verify_solution(&k, x).unwrap(), || format!("instance {i}: dp witness invalid"));
        }
    }
    let elapsed = started.elapsed();
    let mut out = tally.outcome("agreement checks");
    out.detail.push_str(&format!(", {:.1}s", elapsed.as_secs_f64()));
    if elapsed > Duration::from_secs(60) {
        out.ok = false;
        out.detail.push_str(" (over the 60s budget)");
    }
    out
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mut tally = Tally::default();
    let mut made = 0;
    while made < 100 {
        let n = rng.gen_range(1..=10usize);
        let weights: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=40)).collect();
        let values: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=40)).collect();
        let sum_a: u64 = weights.iter().sum();
        let sum_p: u64 = values.iter().sum();
        let k = KnapsackInstance::new(
            bigs(&weights),
            bigs(&values),
            big(rng.gen_range(1..=sum_a)),
            big(rng.gen_range(0..=sum_p)),
        )
        .unwrap();
        if !complement_is_exact(&k) {
            continue;
        }
        made += 1;
        let image = complement_transform(&k);
        tally.check(complement_transform(&image) == k, || format!("involution fails on instance {made}"));
        tally.check(common::satisfiable(&k) == common::satisfiable(&image), || {
            format!("satisfiability differs on instance {made}")
        });
        let bijection = (0..1u64 << n).all(|mask| {
            let x = SolutionVector::new(common::assignment(mask, n));
            verify_solution(&k, &x).unwrap() == verify_solution(&image, &x.complement()).unwrap()
        });
        tally.check(bijection, || format!("x <-> 1-x fails on instance {made}"));
    }
    tally.outcome("complement checks over 100 instances")
}

fn failing(reports: &[CheckReport]) -> Vec<&CheckReport> {
    reports.iter().filter(|r| r.verdict == Verdict::Fail).collect()
}

fn criterion_7(grid: &[SubsetSumInstance]) -> Outcome {
    let mut tally = Tally::default();
    let reproduce = |tally: &mut Tally, label: &str, reports: &[CheckReport]| {
        let fails = failing(reports);
        tally.check(!fails.is_empty(), || format!("{label}: no failing report"));
        for r in fails {
            let cx = r.counterexample.as_ref().expect("failing report carries a counterexample");
            tally.check(cx.reproduces().unwrap(), || format!("{label}: counterexample does not reproduce"));
        }
    };

    let pair = ss(&[10, 11], 21);
    let set_100 = Harness::default()
        .with_mutation(Mutation { polycorr_target: Some(TargetMutation::Set(big(100))), ..Mutation::default() });
    let report = set_100.check_lemma_3_4(&pair, 2).unwrap();
    let bits = report.counterexample.as_ref().map(|cx| cx.x.to_bits());
    tally.check(bits == Some(vec![1, 0]), || format!("G <- 100: counterexample {bits:?}, expected [1, 0]"));
    reproduce(&mut tally, "G <- 100", &[report]);

    for (label, mutation) in
        [("G + m a_1^(m-1)", TargetMutation::AddLinearTerm), ("G <- a_1^m", TargetMutation::LeadingPower)]
    {
        let h = Harness::default().with_mutation(Mutation { polycorr_target: Some(mutation), ..Mutation::default() });
        let reports: Vec<CheckReport> = (2..=3).map(|m| h.check_lemma_3_4(&pair, m).unwrap()).collect();
        reproduce(&mut tally, label, &reports);
    }

    // C one below n a_n^m, over the whole grid.
    let mut reports = Vec::new();
    for inst in grid {
        for m in 1..=3u32 {
            let n = inst.len() as u64;
            let a_n = inst.weights().iter().max().unwrap();
            let c: BigUint = BigUint::from(n) * Pow::pow(a_n, m) - BigUint::one();
            if c < BigUint::one() {
                continue;
            }
            let h = Harness::default().with_mutation(Mutation { shift_constant: Some(c), ..Mutation::default() });
            for r in 0..=inst.len() {
                reports.push(h.check_lemma_2_2(inst, m, r).unwrap());
                reports.push(h.check_lemma_2_3(inst, m, r).unwrap());
            }
        }
    }
    reproduce(&mut tally, "C < n a_n^m", &reports);
    let failed = failing(&reports).len();
    let mut out = tally.outcome("mutation checks");
    out.detail.push_str(&format!(", {failed} failing reports under the small shift"));
    out
}

fn main() -> ExitCode {
    let grid = grid();
    let mixed = mixed_instances();
    let mut restrict = Tally::default();
    let mut sizes = Tally::default();

    let c1 = criterion_1(&grid, &mut restrict, &mut sizes);
    let c2 = criterion_2(&mixed, &mut restrict, &mut sizes);
    let c3 = criterion_3();
    let c4 = restrict.outcome("lift members restricted");
    let c5 = criterion_5();
    let c6 = criterion_6();
    let c7 = criterion_7(&grid);
    let c8 = sizes.outcome("size bounds");

    let results = [
        ("AC1 exhaustive lemma envelope", c1),
        ("AC2 pipeline equivalence", c2),
        ("AC3 worked constants", c3),
        ("AC4 lift restriction", c4),
        ("AC5 dp matches brute force", c5),
        ("AC6 complement bijection", c6),
        ("AC7 fail injection", c7),
        ("AC8 polynomial size", c8),
    ];
    let mut all = true;
    for (name, outcome) in &results {
        all &= outcome.ok;
        println!("{} {name}: {}", if outcome.ok { "PASS" } else { "FAIL" }, outcome.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
