//! Exact-arithmetic toolkit for the polynomially correlated 0-1 knapsack
//! problem `X_m(A, b, q)`, whose item values are the `m`-th powers of the
//! weights.
//!
//! The crate builds the reduction chain from subset sum: a shift by a large
//! constant `C` produces `n + 1` nearly-uniform subset-sum instances, each of
//! which maps to an `X_m` instance with target
//! `G = a_1^(m-1) * (r a_1 + m b')`. Solvers (exhaustive and pseudo-polynomial
//! dynamic programming) and a lemma harness check every step exhaustively on
//! small instances.

pub mod error;
pub mod harness;
pub mod json;
pub mod model;
pub mod num;
pub mod rational;
pub mod reductions;
pub mod solvers;

pub use error::{Error, Result};
pub use harness::{
    generate, BoundMode, CheckReport, Counterexample, GenSpec, Harness, LemmaId, Mutation, ReportSummary,
    TargetMutation, Verdict, Violation,
};
pub use model::{
    evaluate, is_restricted, verify_solution, Instance, KnapsackInstance, PolyCorrInstance, Problem,
    ReductionTrace, SolutionVector, SubsetSumInstance,
};
pub use rational::{rationalize, Rational, Rationalized};
pub use reductions::{
    complement_is_exact, complement_transform, difference_instance, full_pipeline, lift_to_restricted,
    lift_with_shift, restricted_to_polycorr, shift_constant, LiftFamily, PipelineMember, PolyCorrReduction,
};
pub use solvers::{
    capacity_profile, enumerate_witnesses, solve, solve_brute_force, solve_dp, Method, SolveReport, SolveStats,
    SolverConfig, WitnessList,
};
