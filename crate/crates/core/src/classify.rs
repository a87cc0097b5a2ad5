//! Exhaustive classification sweeps over all grading tuples of a finite
//! group at a fixed dimension, with optional cross-validation of every
//! decision against the exact matrix oracle.
//!
//! The tuple space is embarrassingly parallel: each tuple is decided
//! independently and results are collected in enumeration order, so two
//! runs with identical inputs produce identical records.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grading::ElementaryGrading;
use crate::group::{Group, GroupElement, GroupError};
use crate::homogeneity::{
    build_theta, check_segment_condition, ConditionWitness, ThetaDecision, ThetaMap, ThetaTag,
};
use crate::matrixalg::{oracle_homogeneity, Field, LinearMapOnUnits};

/// Default guardrail on the number of tuples in one sweep.
pub const DEFAULT_CAP: u128 = 10_000_000;

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("enumeration requires a finite group")]
    InfiniteGroup,
    #[error("space of {size} tuples exceeds the cap of {cap}")]
    CapExceeded { size: u128, cap: u128 },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Decision outcome for one grading tuple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    pub tuple: Vec<GroupElement>,
    pub admits: bool,
    pub tags: Vec<ThetaTag>,
    pub witness: Option<ConditionWitness>,
    pub literal: bool,
    pub oracle_agrees: Option<bool>,
}

/// Aggregate counts for one sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationSummary {
    pub group: String,
    pub n: usize,
    pub total: u64,
    pub admitted: u64,
    pub rejected: u64,
    pub tag_counts: BTreeMap<String, u64>,
    pub literal_disagreements: u64,
    pub oracle_disagreements: u64,
    pub elapsed_ms: u128,
}

/// All |G|^(n-1) grading tuples in lexicographic order of the group's
/// canonical element enumeration.
pub fn enumerate_tuples(
    group: &Group,
    n: usize,
    cap: u128,
) -> Result<Vec<Vec<GroupElement>>, ClassifyError> {
    let elems = group.elements().map_err(|_| ClassifyError::InfiniteGroup)?;
    let order = elems.len() as u128;
    let size = order.checked_pow(n as u32 - 1).unwrap_or(u128::MAX);
    if size > cap {
        return Err(ClassifyError::CapExceeded { size, cap });
    }
    let mut out: Vec<Vec<GroupElement>> = vec![Vec::new()];
    for _ in 0..n - 1 {
        let mut next = Vec::with_capacity(out.len() * elems.len());
        for prefix in &out {
            for e in &elems {
                let mut t = prefix.clone();
                t.push(e.clone());
                next.push(t);
            }
        }
        out = next;
    }
    Ok(out)
}

fn tags_key(tags: &[ThetaTag]) -> String {
    tags.iter()
        .map(ThetaTag::to_string)
        .collect::<Vec<_>>()
        .join("+")
}

/// Decides one tuple: strengthened construction, literal condition, and
/// (when a field is given) the matrix oracle on the reflection
/// involution.
fn classify_tuple<F: Field>(
    group: &Group,
    n: usize,
    tuple: Vec<GroupElement>,
    oracle_field: Option<&F>,
) -> ClassificationRecord {
    let grading = ElementaryGrading::new(group.clone(), n, tuple.clone())
        .expect("enumerated tuples are valid");
    let decision = build_theta(&grading);
    let (literal, _) = check_segment_condition(&grading);
    let oracle_agrees = oracle_field.map(|field| {
        let map = LinearMapOnUnits::canonical_involution(field.clone(), n);
        let oracle = oracle_homogeneity(&grading, &map).expect("reflection is bijective");
        decisions_agree(&decision, oracle.as_ref())
    });
    match decision {
        ThetaDecision::Admits(theta) => ClassificationRecord {
            tuple,
            admits: true,
            tags: theta.tags().iter().copied().collect(),
            witness: None,
            literal,
            oracle_agrees,
        },
        ThetaDecision::Rejects(witness) => ClassificationRecord {
            tuple,
            admits: false,
            tags: Vec::new(),
            witness: Some(witness),
            literal,
            oracle_agrees,
        },
    }
}

fn decisions_agree(decision: &ThetaDecision, oracle: Option<&ThetaMap>) -> bool {
    match (decision.theta(), oracle) {
        (Some(a), Some(b)) => a.mapping() == b.mapping(),
        (None, None) => true,
        _ => false,
    }
}

/// Sweeps every tuple of the space. `oracle_field` switches on
/// theorem-vs-oracle cross-validation.
pub fn classify_space<F: Field>(
    group: &Group,
    n: usize,
    oracle_field: Option<&F>,
    cap: u128,
) -> Result<(ClassificationSummary, Vec<ClassificationRecord>), ClassifyError> {
    let start = Instant::now();
    let tuples = enumerate_tuples(group, n, cap)?;
    let records: Vec<ClassificationRecord> = tuples
        .into_par_iter()
        .map(|tuple| classify_tuple(group, n, tuple, oracle_field))
        .collect();

    let mut tag_counts: BTreeMap<String, u64> = BTreeMap::new();
    let mut admitted = 0;
    let mut rejected = 0;
    let mut literal_disagreements = 0;
    let mut oracle_disagreements = 0;
    for r in &records {
        if r.admits {
            admitted += 1;
            *tag_counts.entry(tags_key(&r.tags)).or_insert(0) += 1;
        } else {
            rejected += 1;
        }
        if r.literal != r.admits {
            literal_disagreements += 1;
        }
        if r.oracle_agrees == Some(false) {
            oracle_disagreements += 1;
        }
    }
    let summary = ClassificationSummary {
        group: group.spec_string(),
        n,
        total: records.len() as u64,
        admitted,
        rejected,
        tag_counts,
        literal_disagreements,
        oracle_disagreements,
        elapsed_ms: start.elapsed().as_millis(),
    };
    Ok((summary, records))
}

/// Agreement report binding the three decision paths for one grading:
/// the strengthened construction, the literal segment condition, and
/// the matrix oracle.
#[derive(Debug, Clone)]
pub struct CrossReport {
    pub strengthened: ThetaDecision,
    pub literal: bool,
    pub literal_witness: Option<ConditionWitness>,
    pub oracle_theta: Option<ThetaMap>,
    pub literal_agrees_strengthened: bool,
    pub oracle_agrees: bool,
}

impl CrossReport {
    pub fn all_agree(&self) -> bool {
        self.literal_agrees_strengthened && self.oracle_agrees
    }
}

pub fn cross_validate<F: Field>(grading: &ElementaryGrading, field: &F) -> CrossReport {
    let strengthened = build_theta(grading);
    let (literal, literal_witness) = check_segment_condition(grading);
    let map = LinearMapOnUnits::canonical_involution(field.clone(), grading.n());
    let oracle_theta = oracle_homogeneity(grading, &map).expect("reflection is bijective");
    let oracle_agrees = decisions_agree(&strengthened, oracle_theta.as_ref());
    CrossReport {
        literal_agrees_strengthened: literal == strengthened.admits(),
        oracle_agrees,
        strengthened,
        literal,
        literal_witness,
        oracle_theta,
    }
}

/// Writes records as a CSV table with the contract columns
/// `tuple, admits, tags, witness, literal, oracle_agrees`.
pub fn write_csv<W: Write>(
    out: W,
    group: &Group,
    records: &[ClassificationRecord],
) -> Result<(), ClassifyError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["tuple", "admits", "tags", "witness", "literal", "oracle_agrees"])
        .map_err(csv_io)?;
    for r in records {
        w.write_record([
            group.format_tuple(&r.tuple),
            r.admits.to_string(),
            r.tags
                .iter()
                .map(ThetaTag::to_string)
                .collect::<Vec<_>>()
                .join(";"),
            r.witness
                .as_ref()
                .map(|w| w.describe(group))
                .unwrap_or_default(),
            r.literal.to_string(),
            r.oracle_agrees.map(|b| b.to_string()).unwrap_or_default(),
        ])
        .map_err(csv_io)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_io(e: csv::Error) -> ClassifyError {
    ClassifyError::Io(std::io::Error::new(std::io::ErrorKind::Other, e))
}

/// Writes records as line-delimited JSON, one record per line.
pub fn write_jsonl<W: Write>(
    mut out: W,
    records: &[ClassificationRecord],
) -> Result<(), ClassifyError> {
    for r in records {
        let line = serde_json::to_string(r)
            .map_err(|e| std::io::Error::new(std::io::ErrorKind::Other, e))?;
        writeln!(out, "{line}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrixalg::PrimeField;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    #[test]
    fn enumerate_tuple_counts() {
        let z2 = Group::parse_spec("Z2").unwrap();
        let tuples = enumerate_tuples(&z2, 3, DEFAULT_CAP).unwrap();
        let fmt: Vec<String> = tuples.iter().map(|t| z2.format_tuple(t)).collect();
        assert_eq!(fmt, vec!["0,0", "0,1", "1,0", "1,1"]);

        let z3 = Group::parse_spec("Z3").unwrap();
        assert_eq!(enumerate_tuples(&z3, 2, DEFAULT_CAP).unwrap().len(), 3);
        assert_eq!(enumerate_tuples(&z3, 1, DEFAULT_CAP).unwrap(), vec![vec![]]);
    }

    #[test]
    fn enumeration_guards() {
        let z = Group::parse_spec("Z").unwrap();
        assert!(matches!(
            enumerate_tuples(&z, 3, DEFAULT_CAP),
            Err(ClassifyError::InfiniteGroup)
        ));
        let z5 = Group::parse_spec("Z5").unwrap();
        assert!(matches!(
            enumerate_tuples(&z5, 10, 100),
            Err(ClassifyError::CapExceeded { .. })
        ));
    }

    #[test]
    fn z2_n3_admits_exactly_the_constant_tuples() {
        let z2 = Group::parse_spec("Z2").unwrap();
        let (summary, records) = classify_space(&z2, 3, Some(&f5()), DEFAULT_CAP).unwrap();
        assert_eq!(summary.total, 4);
        assert_eq!(summary.admitted, 2);
        assert_eq!(summary.oracle_disagreements, 0);
        assert_eq!(summary.literal_disagreements, 0);
        let admitting: Vec<String> = records
            .iter()
            .filter(|r| r.admits)
            .map(|r| z2.format_tuple(&r.tuple))
            .collect();
        assert_eq!(admitting, vec!["0,0", "1,1"]);
    }

    #[test]
    fn z3_n3_admits_five_of_nine() {
        let z3 = Group::parse_spec("Z3").unwrap();
        let (summary, records) = classify_space(&z3, 3, Some(&f5()), DEFAULT_CAP).unwrap();
        assert_eq!(summary.total, 9);
        assert_eq!(summary.admitted, 5);
        assert_eq!(summary.oracle_disagreements, 0);
        for r in &records {
            let t = z3.format_tuple(&r.tuple);
            match t.as_str() {
                "0,0" | "1,1" | "2,2" => {
                    assert!(r.admits);
                    assert!(r.tags.contains(&ThetaTag::Graded), "{t}");
                }
                "1,2" | "2,1" => {
                    assert!(r.admits);
                    assert_eq!(r.tags, vec![ThetaTag::DegreeInverting], "{t}");
                }
                _ => assert!(!r.admits, "{t}"),
            }
        }
    }

    #[test]
    fn n2_always_admits() {
        for spec in ["Z2", "Z3", "Z4", "Z2xZ2"] {
            let g = Group::parse_spec(spec).unwrap();
            let (summary, _) = classify_space(&g, 2, Some(&f5()), DEFAULT_CAP).unwrap();
            assert_eq!(summary.admitted, summary.total, "{spec}");
        }
    }

    #[test]
    fn sweep_is_deterministic() {
        let g = Group::parse_spec("Z4").unwrap();
        let (_, a) = classify_space(&g, 3, Some(&f5()), DEFAULT_CAP).unwrap();
        let (_, b) = classify_space(&g, 3, Some(&f5()), DEFAULT_CAP).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn reversal_symmetry_of_records() {
        let g = Group::parse_spec("Z3").unwrap();
        let (_, records) = classify_space::<PrimeField>(&g, 4, None, DEFAULT_CAP).unwrap();
        for r in &records {
            let mut rev = r.tuple.clone();
            rev.reverse();
            let partner = records.iter().find(|s| s.tuple == rev).unwrap();
            assert_eq!(r.admits, partner.admits);
        }
    }

    #[test]
    fn cross_validate_paths_agree() {
        for (spec, n, tuple) in [("Z2", 3, "0,1"), ("Z", 3, "1,-1"), ("Z3", 4, "0,0,0")] {
            let g = Group::parse_spec(spec).unwrap();
            let t = g.parse_tuple(tuple).unwrap();
            let grading = ElementaryGrading::new(g, n, t).unwrap();
            let report = cross_validate(&grading, &f5());
            assert!(report.all_agree(), "{spec} {tuple}");
        }
    }

    #[test]
    fn json_records_round_trip() {
        let g = Group::parse_spec("Z2xZ2").unwrap();
        let (_, records) = classify_space(&g, 3, Some(&f5()), DEFAULT_CAP).unwrap();
        let mut buf = Vec::new();
        write_jsonl(&mut buf, &records).unwrap();
        let parsed: Vec<ClassificationRecord> = String::from_utf8(buf)
            .unwrap()
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        assert_eq!(parsed, records);
    }

    #[test]
    fn csv_has_contract_columns() {
        let g = Group::parse_spec("Z2").unwrap();
        let (_, records) = classify_space(&g, 3, Some(&f5()), DEFAULT_CAP).unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &g, &records).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let header = text.lines().next().unwrap();
        assert_eq!(header, "tuple,admits,tags,witness,literal,oracle_agrees");
        assert_eq!(text.lines().count(), 5);
    }
}
