//! Elementary G-gradings on the upper triangular matrices.
//!
//! A grading is determined by the (n-1)-tuple `(g_1, ..., g_{n-1})` with
//! `deg E_{i,i+1} = g_i`; consequently `deg E_{i,j} = g_i ... g_{j-1}`
//! and every diagonal unit has the neutral degree. Positions are 1-based
//! throughout.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use thiserror::Error;

use crate::group::{Group, GroupElement, GroupError};

#[derive(Debug, Error)]
pub enum GradingError {
    #[error("tuple has length {got}, expected n-1 = {expected}")]
    TupleLength { got: usize, expected: usize },
    #[error("tuple entry {index} does not belong to the group")]
    ForeignEntry { index: usize },
    #[error("position ({i},{j}) is not an upper triangular position of UT_{n}")]
    Position { i: usize, j: usize, n: usize },
    #[error("element is not in the support of the grading")]
    NotInSupport,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// An elementary G-grading on UT_n.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementaryGrading {
    group: Group,
    n: usize,
    tuple: Vec<GroupElement>,
}

/// The support of a grading together with its homogeneous components:
/// each upper triangular position appears in exactly one component.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportMap {
    components: BTreeMap<GroupElement, Vec<(usize, usize)>>,
}

impl SupportMap {
    pub fn support(&self) -> impl Iterator<Item = &GroupElement> {
        self.components.keys()
    }

    pub fn support_set(&self) -> BTreeSet<GroupElement> {
        self.components.keys().cloned().collect()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.components.contains_key(g)
    }

    pub fn component(&self, g: &GroupElement) -> Option<&[(usize, usize)]> {
        self.components.get(g).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroupElement, &[(usize, usize)])> {
        self.components.iter().map(|(g, ps)| (g, ps.as_slice()))
    }
}

impl ElementaryGrading {
    /// Builds the grading of UT_n defined by the (n-1)-tuple.
    pub fn new(group: Group, n: usize, tuple: Vec<GroupElement>) -> Result<Self, GradingError> {
        if n < 1 {
            return Err(GradingError::TupleLength {
                got: tuple.len(),
                expected: 0,
            });
        }
        if tuple.len() != n - 1 {
            return Err(GradingError::TupleLength {
                got: tuple.len(),
                expected: n - 1,
            });
        }
        for (index, g) in tuple.iter().enumerate() {
            if !group.contains(g) {
                return Err(GradingError::ForeignEntry { index });
            }
        }
        Ok(Self { group, n, tuple })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tuple(&self) -> &[GroupElement] {
        &self.tuple
    }

    /// The grading with the reversed tuple `(g_{n-1}, ..., g_1)`.
    pub fn reversed(&self) -> Self {
        let mut tuple = self.tuple.clone();
        tuple.reverse();
        Self {
            group: self.group.clone(),
            n: self.n,
            tuple,
        }
    }

    /// Degree of the matrix unit E_{i,j}: `e` on the diagonal, the
    /// segment product `g_i ... g_{j-1}` above it.
    pub fn degree(&self, i: usize, j: usize) -> Result<GroupElement, GradingError> {
        if i < 1 || j < i || j > self.n {
            return Err(GradingError::Position { i, j, n: self.n });
        }
        Ok(self
            .group
            .segment_product(&self.tuple, i, j - i)
            .expect("range checked"))
    }

    /// Segment product s(i,k) = g_i ... g_{i+k-1}; k = 0 yields e.
    pub fn segment(&self, i: usize, k: usize) -> GroupElement {
        self.group
            .segment_product(&self.tuple, i, k)
            .expect("caller keeps segments in range")
    }

    /// Support and components by enumerating all n(n+1)/2 positions.
    pub fn support(&self) -> SupportMap {
        let mut components: BTreeMap<GroupElement, Vec<(usize, usize)>> = BTreeMap::new();
        for i in 1..=self.n {
            for j in i..=self.n {
                let g = self.degree(i, j).expect("valid position");
                components.entry(g).or_default().push((i, j));
            }
        }
        SupportMap { components }
    }

    /// Support computed from the closed expression
    /// `{ s(i,k) } ∪ { e }`, independently of position enumeration.
    pub fn support_closed_form(&self) -> BTreeSet<GroupElement> {
        let mut out = BTreeSet::new();
        out.insert(self.group.identity());
        for i in 1..self.n {
            for k in 1..=(self.n - i) {
                out.insert(self.segment(i, k));
            }
        }
        out
    }

    /// True iff A_g A_h != {0}: some position (i,j) of degree g meets a
    /// position (j,k) of degree h at a shared middle index.
    pub fn component_product_nonzero(
        &self,
        g: &GroupElement,
        h: &GroupElement,
    ) -> Result<bool, GradingError> {
        let support = self.support();
        let left = support.component(g).ok_or(GradingError::NotInSupport)?;
        let right = support.component(h).ok_or(GradingError::NotInSupport)?;
        for &(_, j) in left {
            for &(j2, _) in right {
                if j == j2 {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
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
    fn tuple_length_must_be_n_minus_1() {
        let g = Group::parse_spec("Z2").unwrap();
        let t = g.parse_tuple("0,1").unwrap();
        assert!(ElementaryGrading::new(g, 2, t).is_err());
    }

    #[test]
    fn n_equals_1_is_allowed() {
        let g = grading("Z5", 1, "");
        let s = g.support();
        assert_eq!(s.len(), 1);
        assert_eq!(s.component(&g.group().identity()).unwrap(), &[(1, 1)]);
    }

    #[test]
    fn diagonal_degrees_are_neutral() {
        let g = grading("Z2", 3, "0,1");
        for i in 1..=3 {
            assert_eq!(g.degree(i, i).unwrap(), g.group().identity());
        }
    }

    #[test]
    fn degree_is_segment_product() {
        let g = grading("Z2", 3, "1,1");
        // 1 + 1 = 0 mod 2
        assert_eq!(g.degree(1, 3).unwrap(), g.group().parse_element("0").unwrap());
        let zg = grading("Z", 3, "1,1");
        assert_eq!(zg.degree(1, 3).unwrap(), zg.group().parse_element("2").unwrap());
    }

    #[test]
    fn degree_rejects_lower_positions() {
        let g = grading("Z2", 3, "0,1");
        assert!(g.degree(2, 1).is_err());
        assert!(g.degree(0, 1).is_err());
        assert!(g.degree(1, 4).is_err());
    }

    #[test]
    fn degree_multiplicativity() {
        let g = grading("Z4", 4, "1,2,3");
        for i in 1..=4 {
            for j in i..=4 {
                for k in j..=4 {
                    let lhs = g
                        .group()
                        .op(&g.degree(i, j).unwrap(), &g.degree(j, k).unwrap())
                        .unwrap();
                    assert_eq!(lhs, g.degree(i, k).unwrap());
                }
            }
        }
    }

    #[test]
    fn support_examples() {
        let g = grading("Z2", 4, "0,0,0");
        let s = g.support();
        assert_eq!(s.len(), 1);
        assert_eq!(s.component(&g.group().identity()).unwrap().len(), 10);

        let g = grading("Z", 3, "1,1");
        assert_eq!(
            s_set(&g),
            ["0", "1", "2"]
                .iter()
                .map(|t| g.group().parse_element(t).unwrap())
                .collect()
        );

        let g = grading("Z2", 3, "0,1");
        assert_eq!(
            s_set(&g),
            ["0", "1"]
                .iter()
                .map(|t| g.group().parse_element(t).unwrap())
                .collect()
        );
        let one = g.group().parse_element("1").unwrap();
        assert_eq!(g.support().component(&one).unwrap(), &[(1, 3), (2, 3)]);
    }

    fn s_set(g: &ElementaryGrading) -> BTreeSet<GroupElement> {
        g.support().support_set()
    }

    #[test]
    fn support_matches_closed_form() {
        for (spec, n, tuple) in [
            ("Z2", 3, "0,1"),
            ("Z3", 4, "1,2,1"),
            ("Z", 4, "1,-1,2"),
            ("Z2xZ2", 3, "(1,0),(0,1)"),
        ] {
            let g = grading(spec, n, tuple);
            assert_eq!(g.support().support_set(), g.support_closed_form());
        }
    }

    #[test]
    fn components_partition_all_positions() {
        let g = grading("Z3", 5, "1,0,2,1");
        let total: usize = g.support().iter().map(|(_, ps)| ps.len()).sum();
        assert_eq!(total, 5 * 6 / 2);
    }

    #[test]
    fn component_product_examples() {
        let g = grading("Z2", 3, "0,1");
        let e = g.group().identity();
        let one = g.group().parse_element("1").unwrap();
        assert!(g.component_product_nonzero(&e, &e).unwrap());
        assert!(!g.component_product_nonzero(&one, &one).unwrap());
        assert!(g.component_product_nonzero(&e, &one).unwrap());
        // not in support
        let g5 = grading("Z5", 3, "0,0");
        let two = g5.group().parse_element("2").unwrap();
        assert!(g5.component_product_nonzero(&two, &two).is_err());
    }

    #[test]
    fn component_product_lands_in_support() {
        let g = grading("Z4", 4, "1,2,1");
        let s = g.support();
        for a in s.support() {
            for b in s.support() {
                if g.component_product_nonzero(a, b).unwrap() {
                    let prod = g.group().op(a, b).unwrap();
                    assert!(s.contains(&prod));
                }
            }
        }
    }
}
