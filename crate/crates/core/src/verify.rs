//! Named verification suites binding the decision procedure to the
//! exact matrix algebra: randomized identities over Q and prime fields,
//! and exhaustive enumerations at desk scale.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::classify::{classify_space, DEFAULT_CAP};
use crate::grading::ElementaryGrading;
use crate::group::Group;
use crate::homogeneity::{build_theta, theta_properties_check, ThetaDecision};
use crate::matrixalg::{
    antiauto_apply, conjugate, involution_sign, is_homogeneous_matrix, oracle_homogeneity,
    positions, triangle_size, Field, FieldSpec, LinearMapOnUnits, PrimeField, Rationals, UTMatrix,
};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("suite `{suite}` requires {requirement}")]
    Unsupported { suite: String, requirement: String },
    #[error("{0}")]
    Setup(String),
}

/// Outcome of one suite run.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: String,
    pub cases: u64,
    pub failures: Vec<String>,
    pub elapsed_ms: u128,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(
                f,
                "{}: PASS ({} cases, {} ms)",
                self.name, self.cases, self.elapsed_ms
            )
        } else {
            writeln!(
                f,
                "{}: FAIL ({} cases, {} failures, {} ms)",
                self.name,
                self.cases,
                self.failures.len(),
                self.elapsed_ms
            )?;
            for failure in self.failures.iter().take(10) {
                writeln!(f, "  {failure}")?;
            }
            if self.failures.len() > 10 {
                write!(f, "  ... and {} more", self.failures.len() - 10)?;
            }
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    BlockInverse,
    EntryLemma,
    HomAut,
    Sign,
    ThetaProps,
    KezlanSmall,
    OracleAgreement,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::BlockInverse,
        Suite::EntryLemma,
        Suite::HomAut,
        Suite::Sign,
        Suite::ThetaProps,
        Suite::KezlanSmall,
        Suite::OracleAgreement,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::BlockInverse => "block-inverse",
            Suite::EntryLemma => "entry-lemma",
            Suite::HomAut => "hom-aut",
            Suite::Sign => "sign",
            Suite::ThetaProps => "theta-props",
            Suite::KezlanSmall => "kezlan-small",
            Suite::OracleAgreement => "oracle-agreement",
        }
    }
}

impl FromStr for Suite {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, VerifyError> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| VerifyError::UnknownSuite(s.to_string()))
    }
}

/// Bounds for a suite run.
#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub field: FieldSpec,
    pub n: usize,
    pub samples: u64,
    pub seed: u64,
    pub group: Option<Group>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            field: FieldSpec::Prime(5),
            n: 4,
            samples: 100,
            seed: 0,
            group: None,
        }
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<SuiteReport, VerifyError> {
    let start = Instant::now();
    let (cases, failures) = match suite {
        Suite::BlockInverse => dispatch_field(opts, block_inverse_suite)?,
        Suite::EntryLemma => dispatch_field(opts, entry_lemma_suite)?,
        Suite::HomAut => hom_aut_suite(require_prime(suite, opts)?, opts.n)?,
        Suite::Sign => sign_suite(require_prime(suite, opts)?, opts.n),
        Suite::ThetaProps => theta_props_suite(opts)?,
        Suite::KezlanSmall => kezlan_suite(require_prime(suite, opts)?, opts.n)?,
        Suite::OracleAgreement => oracle_agreement_suite(require_prime(suite, opts)?)?,
    };
    Ok(SuiteReport {
        name: suite.name().to_string(),
        cases,
        failures,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

fn require_prime(suite: Suite, opts: &VerifyOptions) -> Result<PrimeField, VerifyError> {
    match opts.field {
        FieldSpec::Prime(p) => PrimeField::new(p).map_err(|e| VerifyError::Setup(e.to_string())),
        FieldSpec::Rationals => Err(VerifyError::Unsupported {
            suite: suite.name().to_string(),
            requirement: "a prime field (exhaustive enumeration)".to_string(),
        }),
    }
}

fn dispatch_field(
    opts: &VerifyOptions,
    run: impl Fn(&dyn FieldRunner, &VerifyOptions) -> (u64, Vec<String>),
) -> Result<(u64, Vec<String>), VerifyError> {
    match opts.field {
        FieldSpec::Rationals => Ok(run(&Rationals, opts)),
        FieldSpec::Prime(p) => {
            let f = PrimeField::new(p).map_err(|e| VerifyError::Setup(e.to_string()))?;
            Ok(run(&f, opts))
        }
    }
}

/// Object-safe hook so randomized suites run uniformly over Q and F_p.
trait FieldRunner {
    fn block_inverse_cases(&self, opts: &VerifyOptions) -> (u64, Vec<String>);
    fn entry_lemma_cases(&self, opts: &VerifyOptions) -> (u64, Vec<String>);
}

impl<F: Field> FieldRunner for F {
    fn block_inverse_cases(&self, opts: &VerifyOptions) -> (u64, Vec<String>) {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut cases = 0;
        let mut failures = Vec::new();
        for n in 3..=opts.n.max(3) {
            for sample in 0..opts.samples {
                cases += 1;
                let p = UTMatrix::random_invertible(self.clone(), n, &mut rng);
                let inv = p.block_inverse().expect("invertible by construction");
                let id = UTMatrix::identity(self.clone(), n);
                if p.mul(&inv) != id || inv.mul(&p) != id {
                    failures.push(format!("n={n} sample={sample}: P * block_inverse(P) != I"));
                    continue;
                }
                let oracle = p.back_substitution_inverse().expect("invertible");
                if inv != oracle {
                    failures.push(format!(
                        "n={n} sample={sample}: block inverse disagrees with back substitution"
                    ));
                }
            }
        }
        (cases, failures)
    }

    fn entry_lemma_cases(&self, opts: &VerifyOptions) -> (u64, Vec<String>) {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut cases = 0;
        let mut failures = Vec::new();
        for n in 2..=opts.n.max(2) {
            for sample in 0..opts.samples {
                cases += 1;
                let p = UTMatrix::random_invertible(self.clone(), n, &mut rng);
                for k in 1..=n {
                    let ekk = UTMatrix::unit(self.clone(), n, k, k).expect("diagonal");
                    let conj = conjugate(&p, &ekk).expect("invertible");
                    let mirror_unit =
                        UTMatrix::unit(self.clone(), n, n - k + 1, n - k + 1).expect("diagonal");
                    let anti = antiauto_apply(&p, &mirror_unit).expect("invertible");
                    for l in k..=n {
                        let expected = self
                            .div(&p.get(k, l), &p.get(k, k))
                            .expect("diagonal nonzero");
                        if conj.get(k, l) != expected {
                            failures.push(format!(
                                "n={n} sample={sample}: conjugate entry ({k},{l}) != p_kl/p_kk"
                            ));
                        }
                        if anti.get(k, l) != expected {
                            failures.push(format!(
                                "n={n} sample={sample}: antiauto entry ({k},{l}) != p_kl/p_kk"
                            ));
                        }
                    }
                }
            }
        }
        (cases, failures)
    }
}

fn block_inverse_suite(f: &dyn FieldRunner, opts: &VerifyOptions) -> (u64, Vec<String>) {
    f.block_inverse_cases(opts)
}

fn entry_lemma_suite(f: &dyn FieldRunner, opts: &VerifyOptions) -> (u64, Vec<String>) {
    f.entry_lemma_cases(opts)
}

/// All invertible upper triangular matrices over F_p at dimension n.
pub fn enumerate_invertible_ut(field: &PrimeField, n: usize) -> Vec<UTMatrix<PrimeField>> {
    let p = field.modulus();
    let dim = triangle_size(n);
    let count: u128 = positions(n)
        .map(|(i, j)| if i == j { p as u128 - 1 } else { p as u128 })
        .product();
    assert!(count <= 2_000_000, "enumeration space too large: {count}");
    let mut out = Vec::with_capacity(count as usize);
    let pos: Vec<(usize, usize)> = positions(n).collect();
    let mut entries = vec![0u64; dim];
    // diagonal entries start at 1
    for (idx, &(i, j)) in pos.iter().enumerate() {
        if i == j {
            entries[idx] = 1;
        }
    }
    loop {
        out.push(
            UTMatrix::from_upper_entries(*field, n, entries.clone()).expect("entry count"),
        );
        // odometer increment, diagonals skipping zero
        let mut idx = dim;
        loop {
            if idx == 0 {
                return out;
            }
            idx -= 1;
            let (i, j) = pos[idx];
            let lo = if i == j { 1 } else { 0 };
            if entries[idx] + 1 < p {
                entries[idx] += 1;
                break;
            }
            entries[idx] = lo;
        }
    }
}

/// Both directions of the homogeneous-automorphism theorem, exhaustively
/// over invertible P in UT_n(F_p), for every Z2 grading tuple of length
/// n-1: conjugation by P is homogeneous iff P is homogeneous of neutral
/// degree, and every homogeneous case has θ = identity.
fn hom_aut_suite(field: PrimeField, n: usize) -> Result<(u64, Vec<String>), VerifyError> {
    let z2 = Group::parse_spec("Z2").expect("fixed spec");
    let tuples = crate::classify::enumerate_tuples(&z2, n, DEFAULT_CAP)
        .map_err(|e| VerifyError::Setup(e.to_string()))?;
    let matrices = enumerate_invertible_ut(&field, n);
    let mut cases = 0;
    let mut failures = Vec::new();
    for tuple in tuples {
        let grading = ElementaryGrading::new(z2.clone(), n, tuple.clone()).expect("valid tuple");
        let label = z2.format_tuple(&tuple);
        for p in &matrices {
            cases += 1;
            let map = LinearMapOnUnits::conjugation(p).expect("invertible");
            let oracle = oracle_homogeneity(&grading, &map).expect("bijective");
            let neutral = is_homogeneous_matrix(&grading, p) == Some(z2.identity());
            match (&oracle, neutral) {
                (Some(theta), true) => {
                    if !theta.mapping().iter().all(|(g, h)| g == h) {
                        failures.push(format!(
                            "tuple ({label}): homogeneous conjugation with non-identity theta"
                        ));
                    }
                }
                (None, false) => {}
                (Some(_), false) => failures.push(format!(
                    "tuple ({label}): conjugation homogeneous but P not of neutral degree"
                )),
                (None, true) => failures.push(format!(
                    "tuple ({label}): P of neutral degree but conjugation not homogeneous"
                )),
            }
        }
    }
    Ok((cases, failures))
}

/// Involution-sign corollary, exhaustively: the antiautomorphism of P
/// squares to the identity iff P∘ = ±P, and the sign -1 never occurs at
/// odd n.
fn sign_suite(field: PrimeField, n: usize) -> (u64, Vec<String>) {
    let matrices = enumerate_invertible_ut(&field, n);
    let mut cases = 0;
    let mut failures = Vec::new();
    for p in &matrices {
        cases += 1;
        let map = LinearMapOnUnits::antiautomorphism(p).expect("invertible");
        let is_involution = map.compose(&map).is_identity_map();
        let sign = involution_sign(p);
        if is_involution != sign.is_some() {
            failures.push(format!(
                "n={n}: involution status ({is_involution}) disagrees with sign {sign:?}"
            ));
        }
        if n % 2 == 1 && sign == Some(-1) {
            failures.push(format!("n={n}: sign -1 at odd dimension"));
        }
    }
    (cases, failures)
}

/// θ-properties lemma over full tuple sweeps: every admitting grading
/// has θ² = id and θ(gh) = θ(h)θ(g) on nonzero component products.
fn theta_props_suite(opts: &VerifyOptions) -> Result<(u64, Vec<String>), VerifyError> {
    let groups: Vec<Group> = match &opts.group {
        Some(g) => vec![g.clone()],
        None => ["Z2", "Z3", "Z4", "Z2xZ2"]
            .iter()
            .map(|s| Group::parse_spec(s).expect("fixed specs"))
            .collect(),
    };
    let mut cases = 0;
    let mut failures = Vec::new();
    for group in &groups {
        for n in 2..=opts.n.max(2) {
            let tuples = crate::classify::enumerate_tuples(group, n, DEFAULT_CAP)
                .map_err(|e| VerifyError::Setup(e.to_string()))?;
            for tuple in tuples {
                let grading =
                    ElementaryGrading::new(group.clone(), n, tuple.clone()).expect("valid");
                if let ThetaDecision::Admits(theta) = build_theta(&grading) {
                    cases += 1;
                    if !theta_properties_check(&theta, &grading) {
                        failures.push(format!(
                            "{} n={n} tuple ({}): theta properties fail",
                            group.spec_string(),
                            group.format_tuple(&tuple)
                        ));
                    }
                }
            }
        }
    }
    Ok((cases, failures))
}

/// Kezlan's theorem at desk scale: every unital multiplicative bijective
/// linear self-map of UT_2(F_p) is a conjugation by an invertible upper
/// triangular matrix. Counts the invertible linear maps as cases.
fn kezlan_suite(field: PrimeField, n: usize) -> Result<(u64, Vec<String>), VerifyError> {
    if n != 2 {
        return Err(VerifyError::Unsupported {
            suite: "kezlan-small".to_string(),
            requirement: "n = 2 (the full linear-map space is enumerable only there)".to_string(),
        });
    }
    let p = field.modulus();
    let dim = triangle_size(n); // 3
    let conjugations: Vec<LinearMapOnUnits<PrimeField>> = enumerate_invertible_ut(&field, n)
        .iter()
        .map(|m| LinearMapOnUnits::conjugation(m).expect("invertible"))
        .collect();
    let total = (p as u128).pow((dim * dim) as u32);
    assert!(total <= 100_000_000, "map space too large");
    let mut cases = 0;
    let mut failures = Vec::new();
    let mut digits = vec![0u64; dim * dim];
    loop {
        // columns of the matrix are the unit images
        let images: Vec<UTMatrix<PrimeField>> = (0..dim)
            .map(|c| {
                let entries: Vec<u64> = (0..dim).map(|r| digits[r * dim + c]).collect();
                UTMatrix::from_upper_entries(field, n, entries).expect("entry count")
            })
            .collect();
        let map = LinearMapOnUnits::from_images(field, n, images).expect("count");
        if map.is_bijective() {
            cases += 1;
            if map.is_unital() && map.preserves_products() {
                let inner = conjugations.iter().any(|c| *c == map);
                if !inner {
                    failures.push(format!("non-inner automorphism found: {digits:?}"));
                }
            }
        }
        let mut idx = dim * dim;
        loop {
            if idx == 0 {
                return Ok((cases, failures));
            }
            idx -= 1;
            if digits[idx] + 1 < p {
                digits[idx] += 1;
                break;
            }
            digits[idx] = 0;
        }
    }
}

/// The spaces of the theorem/oracle equivalence gate.
pub const AGREEMENT_SPACES: [(&str, usize, usize); 4] = [
    ("Z2", 2, 5),
    ("Z3", 2, 5),
    ("Z4", 2, 4),
    ("Z2xZ2", 2, 4),
];

/// Theorem-vs-oracle agreement (and literal-vs-strengthened agreement)
/// over every tuple of the standard spaces.
fn oracle_agreement_suite(field: PrimeField) -> Result<(u64, Vec<String>), VerifyError> {
    let mut cases = 0;
    let mut failures = Vec::new();
    for (spec, n_lo, n_hi) in AGREEMENT_SPACES {
        let group = Group::parse_spec(spec).expect("fixed specs");
        for n in n_lo..=n_hi {
            let (summary, records) = classify_space(&group, n, Some(&field), DEFAULT_CAP)
                .map_err(|e| VerifyError::Setup(e.to_string()))?;
            cases += summary.total;
            for r in &records {
                if r.oracle_agrees == Some(false) {
                    failures.push(format!(
                        "{spec} n={n} tuple ({}): theorem and oracle disagree",
                        group.format_tuple(&r.tuple)
                    ));
                }
                if r.literal != r.admits {
                    failures.push(format!(
                        "{spec} n={n} tuple ({}): literal condition {} but strengthened {}",
                        group.format_tuple(&r.tuple),
                        r.literal,
                        r.admits
                    ));
                }
            }
        }
    }
    Ok((cases, failures))
}
