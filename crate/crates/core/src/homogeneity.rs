//! Decision procedure for homogeneity of the canonical involution.
//!
//! The algebra UT_n with an elementary grading admits a homogeneous
//! antiautomorphism exactly when the reflection involution is
//! homogeneous, and that is decided on the grading tuple alone: whenever
//! two segments carry the same product, their mirror segments must agree
//! as well. The support permutation θ sends the segment value s(i,k) to
//! the mirror value s(n-i-k+1, k).
//!
//! Two checks are kept distinct on purpose. `check_segment_condition` is
//! the literal segment criterion, quantified over segment-product
//! equalities only. `build_theta` is the strengthened construction: it
//! additionally pins θ(e) = e (diagonal units reflect to diagonal
//! units), so a proper segment whose product is e must have mirror e.
//! The strengthened decision is the authoritative one and is arbitrated
//! against the exact matrix oracle; any divergence between the two
//! checks is reported, never assumed away.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::grading::ElementaryGrading;
use crate::group::{Group, GroupElement};

/// A consecutive run of tuple entries, 1-based start. `len = 0` denotes
/// the diagonal pseudo-segment whose product and mirror are both e.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Segment {
    pub start: usize,
    pub len: usize,
}

impl Segment {
    /// The reflected segment (n-i-k+1, k); applying the reflection twice
    /// returns the original indices.
    pub fn mirror(self, n: usize) -> Segment {
        if self.len == 0 {
            self
        } else {
            Segment {
                start: n - self.start - self.len + 1,
                len: self.len,
            }
        }
    }

    pub fn is_diagonal(self) -> bool {
        self.len == 0
    }
}

/// A concrete violation: two segments share a product value but their
/// mirror products differ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionWitness {
    pub left: Segment,
    pub right: Segment,
    pub value: GroupElement,
    pub mirrors: (GroupElement, GroupElement),
}

impl ConditionWitness {
    pub fn describe(&self, group: &Group) -> String {
        let seg = |s: &Segment| {
            if s.is_diagonal() {
                "s(diag)".to_string()
            } else {
                format!("s({},{})", s.start, s.len)
            }
        };
        format!(
            "{}={}={} but mirror {} != mirror {}",
            seg(&self.left),
            seg(&self.right),
            group.format_element(&self.value),
            group.format_element(&self.mirrors.0),
            group.format_element(&self.mirrors.1),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ThetaTag {
    #[serde(rename = "graded")]
    Graded,
    #[serde(rename = "degree-inverting")]
    DegreeInverting,
    #[serde(rename = "other")]
    Other,
}

impl std::fmt::Display for ThetaTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ThetaTag::Graded => write!(f, "graded"),
            ThetaTag::DegreeInverting => write!(f, "degree-inverting"),
            ThetaTag::Other => write!(f, "other"),
        }
    }
}

/// The support permutation θ with its classification tags. Always an
/// involutive bijection fixing e.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaMap {
    mapping: BTreeMap<GroupElement, GroupElement>,
    tags: BTreeSet<ThetaTag>,
}

impl ThetaMap {
    /// Assembles a θ map from an already-validated bijection and its
    /// tags; used by the matrix oracle.
    pub fn from_parts(
        mapping: BTreeMap<GroupElement, GroupElement>,
        tags: BTreeSet<ThetaTag>,
    ) -> Self {
        Self { mapping, tags }
    }

    pub fn apply(&self, g: &GroupElement) -> Option<&GroupElement> {
        self.mapping.get(g)
    }

    pub fn mapping(&self) -> &BTreeMap<GroupElement, GroupElement> {
        &self.mapping
    }

    pub fn tags(&self) -> &BTreeSet<ThetaTag> {
        &self.tags
    }

    pub fn support(&self) -> impl Iterator<Item = &GroupElement> {
        self.mapping.keys()
    }

    pub fn describe(&self, group: &Group) -> String {
        self.mapping
            .iter()
            .map(|(g, h)| format!("{}->{}", group.format_element(g), group.format_element(h)))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Outcome of the strengthened θ-construction.
#[derive(Debug, Clone, PartialEq)]
pub enum ThetaDecision {
    Admits(ThetaMap),
    Rejects(ConditionWitness),
}

impl ThetaDecision {
    pub fn admits(&self) -> bool {
        matches!(self, ThetaDecision::Admits(_))
    }

    pub fn theta(&self) -> Option<&ThetaMap> {
        match self {
            ThetaDecision::Admits(t) => Some(t),
            ThetaDecision::Rejects(_) => None,
        }
    }

    pub fn witness(&self) -> Option<&ConditionWitness> {
        match self {
            ThetaDecision::Admits(_) => None,
            ThetaDecision::Rejects(w) => Some(w),
        }
    }
}

fn proper_segments(n: usize) -> impl Iterator<Item = Segment> {
    (1..n).flat_map(move |start| (1..=(n - start)).map(move |len| Segment { start, len }))
}

/// Literal segment criterion: for every pair of proper segments with
/// equal products, the mirror products agree. On failure, the
/// lexicographically least violating pair (i,k,j,l) is returned.
pub fn check_segment_condition(
    grading: &ElementaryGrading,
) -> (bool, Option<ConditionWitness>) {
    let n = grading.n();
    let segs: Vec<(Segment, GroupElement, GroupElement)> = proper_segments(n)
        .map(|s| {
            let value = grading.segment(s.start, s.len);
            let m = s.mirror(n);
            let mirror = grading.segment(m.start, m.len);
            (s, value, mirror)
        })
        .collect();
    for (a, va, ma) in &segs {
        for (b, vb, mb) in &segs {
            if va == vb && ma != mb {
                return (
                    false,
                    Some(ConditionWitness {
                        left: *a,
                        right: *b,
                        value: va.clone(),
                        mirrors: (ma.clone(), mb.clone()),
                    }),
                );
            }
        }
    }
    (true, None)
}

/// Strengthened construction: builds the relation
/// `{ s(i,k) -> m(i,k) } ∪ { e -> e }` and returns it as a [`ThetaMap`]
/// iff it is single-valued; otherwise the first conflict in segment
/// order is returned. A well-defined map is automatically an involutive
/// bijection of the support.
pub fn build_theta(grading: &ElementaryGrading) -> ThetaDecision {
    let n = grading.n();
    let group = grading.group();
    let e = group.identity();
    let diag = Segment { start: 1, len: 0 };
    let mut mapping: BTreeMap<GroupElement, (GroupElement, Segment)> = BTreeMap::new();
    mapping.insert(e.clone(), (e.clone(), diag));
    for s in proper_segments(n) {
        let value = grading.segment(s.start, s.len);
        let m = s.mirror(n);
        let mirror = grading.segment(m.start, m.len);
        match mapping.get(&value) {
            None => {
                mapping.insert(value, (mirror, s));
            }
            Some((prior_mirror, prior_seg)) => {
                if *prior_mirror != mirror {
                    return ThetaDecision::Rejects(ConditionWitness {
                        left: *prior_seg,
                        right: s,
                        value,
                        mirrors: (prior_mirror.clone(), mirror),
                    });
                }
            }
        }
    }
    let map: BTreeMap<GroupElement, GroupElement> =
        mapping.into_iter().map(|(g, (h, _))| (g, h)).collect();
    let tags = classify_theta(&map, group);
    ThetaDecision::Admits(ThetaMap { mapping: map, tags })
}

/// Tags a support permutation: `graded` iff it is the identity,
/// `degree-inverting` iff it is g -> g^{-1} on the whole support (both
/// can hold at once, e.g. on exponent-2 supports), `other` iff neither.
pub fn classify_theta(
    mapping: &BTreeMap<GroupElement, GroupElement>,
    group: &Group,
) -> BTreeSet<ThetaTag> {
    let graded = mapping.iter().all(|(g, h)| g == h);
    let inverting = mapping
        .iter()
        .all(|(g, h)| group.inverse(g).map(|gi| gi == *h).unwrap_or(false));
    let mut tags = BTreeSet::new();
    if graded {
        tags.insert(ThetaTag::Graded);
    }
    if inverting {
        tags.insert(ThetaTag::DegreeInverting);
    }
    if tags.is_empty() {
        tags.insert(ThetaTag::Other);
    }
    tags
}

/// Verifies the structural properties forced on θ: θ² = id on the
/// support, and θ(gh) = θ(h)θ(g) whenever the component product A_g A_h
/// is nonzero.
pub fn theta_properties_check(theta: &ThetaMap, grading: &ElementaryGrading) -> bool {
    let group = grading.group();
    for (g, h) in theta.mapping() {
        match theta.apply(h) {
            Some(back) if back == g => {}
            _ => return false,
        }
    }
    let support: Vec<&GroupElement> = theta.support().collect();
    for g in &support {
        for h in &support {
            let nonzero = grading
                .component_product_nonzero(g, h)
                .expect("support elements");
            if !nonzero {
                continue;
            }
            let gh = group.op(g, h).expect("same group");
            let lhs = match theta.apply(&gh) {
                Some(v) => v.clone(),
                None => return false,
            };
            let (tg, th) = match (theta.apply(g), theta.apply(h)) {
                (Some(tg), Some(th)) => (tg, th),
                _ => return false,
            };
            let rhs = group.op(th, tg).expect("same group");
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grading(spec: &str, n: usize, tuple: &str) -> ElementaryGrading {
        let g = Group::parse_spec(spec).unwrap();
        let t = g.parse_tuple(tuple).unwrap();
        ElementaryGrading::new(g, n, t).unwrap()
    }

    #[test]
    fn mirror_is_involutive_on_indices() {
        for n in 2..=8 {
            for s in proper_segments(n) {
                assert_eq!(s.mirror(n).mirror(n), s);
            }
        }
    }

    #[test]
    fn literal_condition_examples() {
        // n=3 over Z2, tuple (0,1): s(2,1)=1=s(1,2) but mirrors 0 != 1
        let g = grading("Z2", 3, "0,1");
        let (ok, witness) = check_segment_condition(&g);
        assert!(!ok);
        let w = witness.unwrap();
        assert_eq!(
            (w.left, w.right),
            (
                Segment { start: 1, len: 2 },
                Segment { start: 2, len: 1 }
            )
        );

        let g = grading("Z2", 4, "0,0,0");
        assert!(check_segment_condition(&g).0);

        let g = grading("Z", 3, "1,-1");
        assert!(check_segment_condition(&g).0);
    }

    #[test]
    fn build_theta_all_e() {
        let g = grading("Z3", 4, "0,0,0");
        let d = build_theta(&g);
        let theta = d.theta().unwrap();
        assert_eq!(theta.mapping().len(), 1);
        assert!(theta.tags().contains(&ThetaTag::Graded));
    }

    #[test]
    fn build_theta_degree_inverting() {
        let g = grading("Z", 3, "1,-1");
        let theta = build_theta(&g).theta().unwrap().clone();
        let group = g.group();
        let pairs: Vec<(String, String)> = theta
            .mapping()
            .iter()
            .map(|(a, b)| (group.format_element(a), group.format_element(b)))
            .collect();
        assert_eq!(
            pairs,
            vec![
                ("-1".into(), "1".into()),
                ("0".into(), "0".into()),
                ("1".into(), "-1".into())
            ]
        );
        assert_eq!(
            theta.tags().iter().copied().collect::<Vec<_>>(),
            vec![ThetaTag::DegreeInverting]
        );
    }

    #[test]
    fn build_theta_conflict() {
        let g = grading("Z2", 3, "0,1");
        let d = build_theta(&g);
        let w = d.witness().unwrap();
        // earliest conflict: segment (1,1) has value e but mirror g_2 = 1,
        // clashing with the pinned e -> e
        assert_eq!(g.group().format_element(&w.value), "0");
        assert!(w.left.is_diagonal());
        assert_eq!(w.right, Segment { start: 1, len: 1 });
        assert_ne!(w.mirrors.0, w.mirrors.1);
    }

    #[test]
    fn z4_n4_graded_but_not_inverting() {
        // support {0,1,2}; theta fixes everything; 1^{-1}=3 not attained
        let g = grading("Z4", 4, "1,0,1");
        let theta = build_theta(&g).theta().unwrap().clone();
        assert!(theta.mapping().iter().all(|(a, b)| a == b));
        assert_eq!(
            theta.tags().iter().copied().collect::<Vec<_>>(),
            vec![ThetaTag::Graded]
        );
    }

    #[test]
    fn identity_theta_on_z2_support_is_both() {
        let g = grading("Z2", 3, "1,1");
        let theta = build_theta(&g).theta().unwrap().clone();
        assert!(theta.tags().contains(&ThetaTag::Graded));
        assert!(theta.tags().contains(&ThetaTag::DegreeInverting));
    }

    #[test]
    fn theta_fixes_identity_and_is_involutive() {
        for (spec, n, tuple) in [
            ("Z2", 4, "1,1,1"),
            ("Z3", 4, "1,2,1"),
            ("Z", 4, "1,0,-1"),
            ("Z2xZ2", 3, "(1,0),(1,0)"),
        ] {
            let g = grading(spec, n, tuple);
            if let ThetaDecision::Admits(theta) = build_theta(&g) {
                let e = g.group().identity();
                assert_eq!(theta.apply(&e), Some(&e));
                for (a, b) in theta.mapping() {
                    assert_eq!(theta.apply(b), Some(a));
                }
                assert!(theta_properties_check(&theta, &g));
            }
        }
    }

    #[test]
    fn theta_properties_on_inverting_example() {
        let g = grading("Z", 3, "1,-1");
        let theta = build_theta(&g).theta().unwrap().clone();
        assert!(theta_properties_check(&theta, &g));
    }

    #[test]
    fn strengthened_implies_literal() {
        // exhaustive over small spaces
        for spec in ["Z2", "Z3", "Z4"] {
            let group = Group::parse_spec(spec).unwrap();
            let elems = group.elements().unwrap();
            for n in 2..=4usize {
                let mut stack = vec![Vec::new()];
                for _ in 0..n - 1 {
                    let mut next = Vec::new();
                    for t in &stack {
                        for e in &elems {
                            let mut t2: Vec<GroupElement> = t.clone();
                            t2.push(e.clone());
                            next.push(t2);
                        }
                    }
                    stack = next;
                }
                for tuple in stack {
                    let g = ElementaryGrading::new(group.clone(), n, tuple).unwrap();
                    if build_theta(&g).admits() {
                        assert!(check_segment_condition(&g).0);
                    }
                }
            }
        }
    }

    #[test]
    fn reversed_tuple_has_same_decision() {
        for (spec, n, tuple) in [
            ("Z2", 3, "0,1"),
            ("Z3", 4, "1,2,0"),
            ("Z", 4, "1,-1,2"),
            ("Z4", 5, "1,0,1,2"),
        ] {
            let g = grading(spec, n, tuple);
            assert_eq!(build_theta(&g).admits(), build_theta(&g.reversed()).admits());
        }
    }
}
