//! Independent oracles for the integration tests: plain bitmask enumeration
//! over all 2^n assignments, sharing no code with the library's solvers.

#![allow(dead_code)]

use num_bigint::BigUint;
use polyknap::{Problem, SolutionVector, SubsetSumInstance};

pub fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

pub fn bigs(ns: &[u64]) -> Vec<BigUint> {
    ns.iter().copied().map(big).collect()
}

pub fn ss(ws: &[u64], b: u64) -> SubsetSumInstance {
    SubsetSumInstance::new(bigs(ws), big(b)).unwrap()
}

pub fn sv(bits: &[u8]) -> SolutionVector {
    SolutionVector::from_bits(bits).unwrap()
}

/// Assignment for `mask`, item 0 in the most significant position so that
/// ascending masks are ascending lexicographic order.
pub fn assignment(mask: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| mask >> (n - 1 - i) & 1 == 1).collect()
}

/// Total weight and value of `bits`, recomputing `a_i^m` style values from
/// the instance's own `values()`.
fn totals(weights: &[BigUint], values: &[BigUint], bits: &[bool]) -> (BigUint, BigUint) {
    let mut w = BigUint::default();
    let mut v = BigUint::default();
    for (i, &b) in bits.iter().enumerate() {
        if b {
            w += &weights[i];
            v += &values[i];
        }
    }
    (w, v)
}

/// All satisfying assignments in lexicographic order.
pub fn witnesses<P: Problem + ?Sized>(p: &P) -> Vec<Vec<bool>> {
    let n = p.len();
    assert!(n <= 20, "oracle is exponential");
    let values = p.values();
    (0..1u64 << n)
        .map(|mask| assignment(mask, n))
        .filter(|bits| {
            let (w, v) = totals(p.weights(), &values, bits);
            &w <= p.capacity() && &v >= p.target()
        })
        .collect()
}

pub fn satisfiable<P: Problem + ?Sized>(p: &P) -> bool {
    !witnesses(p).is_empty()
}

/// Maximum value within capacity, and the lexicographically first
/// assignment achieving it.
pub fn optimum<P: Problem + ?Sized>(p: &P) -> (BigUint, Vec<bool>) {
    let n = p.len();
    let values = p.values();
    let mut best: Option<(BigUint, Vec<bool>)> = None;
    for mask in 0..1u64 << n {
        let bits = assignment(mask, n);
        let (w, v) = totals(p.weights(), &values, &bits);
        if &w <= p.capacity() && best.as_ref().is_none_or(|(bv, _)| &v > bv) {
            best = Some((v, bits));
        }
    }
    best.unwrap()
}

pub fn cardinality(bits: &[bool]) -> usize {
    bits.iter().filter(|&&b| b).count()
}
