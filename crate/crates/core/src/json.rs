//! JSON wire formats. Big integers travel as canonical decimal strings and
//! unknown fields are rejected everywhere.

use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    Instance, KnapsackInstance, PolyCorrInstance, Problem, ReductionTrace, SolutionVector, SubsetSumInstance,
};
use crate::num::parse_decimal;
use crate::solvers::{Method, SolveReport, SolveStats};

/// A big integer encoded as a decimal string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dec(pub BigUint);

impl Serialize for Dec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Dec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct Visitor;
        impl de::Visitor<'_> for Visitor {
            type Value = Dec;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a decimal integer string")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Dec, E> {
                parse_decimal(v).map(Dec).map_err(E::custom)
            }
        }
        d.deserialize_str(Visitor)
    }
}

pub(crate) fn decs(xs: &[BigUint]) -> Vec<Dec> {
    xs.iter().cloned().map(Dec).collect()
}

fn undec(xs: Vec<Dec>) -> Vec<BigUint> {
    xs.into_iter().map(|d| d.0).collect()
}

pub(crate) mod dec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigUint, D::Error> {
        Ok(Dec::deserialize(d)?.0)
    }
}

pub(crate) mod opt_dec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
        v.clone().map(Dec).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<BigUint>, D::Error> {
        Ok(Option::<Dec>::deserialize(d)?.map(|d| d.0))
    }
}

/// Optional count: a JSON number when it fits in 64 bits, a decimal string
/// otherwise.
pub(crate) mod opt_count {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
        v.as_ref().map(CountWire::from).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<BigUint>, D::Error> {
        Ok(Option::<CountWire>::deserialize(d)?.map(BigUint::from))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Kind {
    Knapsack,
    SubsetSum,
    PolyCorr,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceWire {
    kind: Kind,
    weights: Vec<Dec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    values: Option<Vec<Dec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<u32>,
    capacity: Dec,
    #[serde(default)]
    target: Option<Dec>,
}

impl From<&Instance> for InstanceWire {
    fn from(inst: &Instance) -> Self {
        let (kind, values, m) = match inst {
            Instance::Knapsack(k) => (Kind::Knapsack, Some(decs(&k.values())), None),
            Instance::SubsetSum(_) => (Kind::SubsetSum, None, None),
            Instance::PolyCorr(p) => (Kind::PolyCorr, None, Some(p.exponent())),
        };
        InstanceWire {
            kind,
            weights: decs(inst.weights()),
            values,
            m,
            capacity: Dec(inst.capacity().clone()),
            target: Some(Dec(inst.target().clone())),
        }
    }
}

impl TryFrom<InstanceWire> for Instance {
    type Error = Error;

    fn try_from(w: InstanceWire) -> Result<Self> {
        if w.weights.is_empty() {
            return Err(Error::DomainViolation("an instance needs at least one item".into()));
        }
        let weights = undec(w.weights);
        let capacity = w.capacity.0;
        match w.kind {
            Kind::Knapsack => {
                if w.m.is_some() {
                    return Err(Error::Parse("\"m\" is only valid for poly_corr".into()));
                }
                let values = w.values.ok_or_else(|| Error::Parse("knapsack needs \"values\"".into()))?;
                let target = w.target.ok_or_else(|| Error::Parse("knapsack needs \"target\"".into()))?;
                Ok(KnapsackInstance::new(weights, undec(values), capacity, target.0)?.into())
            }
            Kind::SubsetSum => {
                if w.values.is_some() || w.m.is_some() {
                    return Err(Error::Parse("subset_sum takes neither \"values\" nor \"m\"".into()));
                }
                if let Some(t) = w.target {
                    if t.0 != capacity {
                        return Err(Error::Parse("subset_sum target must equal capacity".into()));
                    }
                }
                Ok(SubsetSumInstance::new(weights, capacity)?.into())
            }
            Kind::PolyCorr => {
                if w.values.is_some() {
                    return Err(Error::Parse("poly_corr values are implicit".into()));
                }
                let m = w.m.ok_or_else(|| Error::Parse("poly_corr needs \"m\"".into()))?;
                let target = w.target.ok_or_else(|| Error::Parse("poly_corr needs \"target\"".into()))?;
                Ok(PolyCorrInstance::new(weights, m, capacity, target.0)?.into())
            }
        }
    }
}

impl Serialize for Instance {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        InstanceWire::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Instance {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Instance::try_from(InstanceWire::deserialize(d)?).map_err(de::Error::custom)
    }
}

impl Serialize for SolutionVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_bits().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SolutionVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let bits = Vec::<u8>::deserialize(d)?;
        SolutionVector::from_bits(&bits).map_err(de::Error::custom)
    }
}

/// `{ "x": [1, 0, 1] }`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionFile {
    pub x: SolutionVector,
}

/// `r` is written as a JSON number when it fits in 64 bits and as a decimal
/// string otherwise.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CountWire {
    Small(u64),
    Big(Dec),
}

impl From<&BigUint> for CountWire {
    fn from(r: &BigUint) -> Self {
        match r.to_u64() {
            Some(small) => CountWire::Small(small),
            None => CountWire::Big(Dec(r.clone())),
        }
    }
}

impl From<CountWire> for BigUint {
    fn from(w: CountWire) -> Self {
        match w {
            CountWire::Small(n) => BigUint::from(n),
            CountWire::Big(d) => d.0,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TraceWire {
    #[serde(rename = "C")]
    c: Option<Dec>,
    #[serde(with = "opt_count")]
    r: Option<BigUint>,
    b_prime: Option<Dec>,
    #[serde(rename = "G")]
    g: Option<Dec>,
    #[serde(rename = "B_m")]
    b_m: Option<Dec>,
    #[serde(default)]
    differences: Vec<Dec>,
    permutation: Vec<usize>,
    dropped: Vec<usize>,
}

impl Serialize for ReductionTrace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TraceWire {
            c: self.shift_constant.clone().map(Dec),
            r: self.solution_count_r.clone(),
            b_prime: self.residual.clone().map(Dec),
            g: self.polycorr_target.clone().map(Dec),
            b_m: self.binomial_peak.clone().map(Dec),
            differences: decs(&self.differences),
            permutation: self.permutation.clone(),
            dropped: self.dropped.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ReductionTrace {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = TraceWire::deserialize(d)?;
        let mut seen = vec![false; w.permutation.len() + w.dropped.len()];
        for &i in w.permutation.iter().chain(&w.dropped) {
            match seen.get_mut(i) {
                Some(slot) if !*slot => *slot = true,
                _ => return Err(de::Error::custom("permutation and dropped must partition the source indices")),
            }
        }
        Ok(ReductionTrace {
            shift_constant: w.c.map(|d| d.0),
            solution_count_r: w.r,
            residual: w.b_prime.map(|d| d.0),
            polycorr_target: w.g.map(|d| d.0),
            binomial_peak: w.b_m.map(|d| d.0),
            differences: undec(w.differences),
            permutation: w.permutation,
            dropped: w.dropped,
        })
    }
}

/// One element of a reduction output file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReductionEntry {
    pub instance: Instance,
    pub trace: ReductionTrace,
}

impl ReductionEntry {
    /// Checks that the trace indexes exactly the items of the instance.
    pub fn validate(&self) -> Result<()> {
        if self.trace.permutation.len() != self.instance.len() {
            return Err(Error::LengthMismatch {
                expected: self.instance.len(),
                found: self.trace.permutation.len(),
            });
        }
        Ok(())
    }
}

impl Serialize for Method {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Method {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match String::deserialize(d)?.as_str() {
            "brute" => Ok(Method::Brute),
            "dp" => Ok(Method::Dp),
            other => Err(de::Error::unknown_variant(other, &["brute", "dp"])),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StatsWire {
    nodes_visited: u64,
    cells_visited: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReportWire {
    satisfiable: bool,
    witness: Option<SolutionVector>,
    optimum: Option<Dec>,
    method: Method,
    stats: StatsWire,
}

impl Serialize for SolveReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ReportWire {
            satisfiable: self.satisfiable,
            witness: self.witness.clone(),
            optimum: self.optimum.clone().map(Dec),
            method: self.method,
            stats: StatsWire {
                nodes_visited: self.stats.nodes_visited,
                cells_visited: self.stats.cells_visited,
            },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SolveReport {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = ReportWire::deserialize(d)?;
        Ok(SolveReport {
            satisfiable: w.satisfiable,
            witness: w.witness,
            optimum: w.optimum.map(|d| d.0),
            method: w.method,
            stats: SolveStats {
                nodes_visited: w.stats.nodes_visited,
                cells_visited: w.stats.cells_visited,
            },
        })
    }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    Ok(serde_json::from_str(text)?)
}

pub fn parse_solution(text: &str) -> Result<SolutionVector> {
    Ok(serde_json::from_str::<SolutionFile>(text)?.x)
}

pub fn parse_reduction_file(text: &str) -> Result<Vec<ReductionEntry>> {
    let entries: Vec<ReductionEntry> = serde_json::from_str(text)?;
    if entries.is_empty() {
        return Err(Error::Parse("reduction file has no entries".into()));
    }
    for e in &entries {
        e.validate()?;
    }
    Ok(entries)
}

pub fn instance_to_json(instance: &Instance) -> String {
    serde_json::to_string(instance).expect("instances always serialize")
}

pub fn solution_to_json(x: &SolutionVector) -> String {
    serde_json::to_string(&SolutionFile { x: x.clone() }).expect("solutions always serialize")
}
