//! Linear self-maps of UT_n given by their images on the matrix-unit
//! basis, and the brute-force homogeneity oracle.
//!
//! The oracle decides θ-homogeneity directly from the definition
//! φ(A_g) = A_{θ(g)}: for each support element it spans the images of
//! the degree-g unit basis and compares that span, by exact rank
//! computations, against every candidate homogeneous component. It is
//! deliberately independent of the segment-condition decision path.

use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

use crate::grading::ElementaryGrading;
use crate::group::GroupElement;
use crate::homogeneity::{classify_theta, ThetaMap};
use crate::matrixalg::field::Field;
use crate::matrixalg::matrix::{positions, tri_index, triangle_size, MatrixError, UTMatrix};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("map is not bijective on UT_n")]
    NotBijective,
    #[error("map has {got} unit images, expected {expected}")]
    ImageCount { got: usize, expected: usize },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// A linear map UT_n -> UT_n stored as the image of every matrix unit,
/// in the position order of [`positions`].
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMapOnUnits<F: Field> {
    field: F,
    n: usize,
    images: Vec<UTMatrix<F>>,
}

impl<F: Field> LinearMapOnUnits<F> {
    pub fn from_images(
        field: F,
        n: usize,
        images: Vec<UTMatrix<F>>,
    ) -> Result<Self, OracleError> {
        if images.len() != triangle_size(n) {
            return Err(OracleError::ImageCount {
                got: images.len(),
                expected: triangle_size(n),
            });
        }
        Ok(Self { field, n, images })
    }

    pub fn identity(field: F, n: usize) -> Self {
        let images = positions(n)
            .map(|(i, j)| UTMatrix::unit(field.clone(), n, i, j).expect("valid position"))
            .collect();
        Self { field, n, images }
    }

    /// The reflection involution as a map on units.
    pub fn canonical_involution(field: F, n: usize) -> Self {
        let images = positions(n)
            .map(|(i, j)| {
                UTMatrix::unit(field.clone(), n, i, j)
                    .expect("valid position")
                    .canonical_involution()
            })
            .collect();
        Self { field, n, images }
    }

    /// The inner automorphism X -> P^-1 X P.
    pub fn conjugation(p: &UTMatrix<F>) -> Result<Self, OracleError> {
        let p_inv = p.block_inverse()?;
        let field = p.field().clone();
        let n = p.n();
        let images = positions(n)
            .map(|(i, j)| {
                let unit = UTMatrix::unit(field.clone(), n, i, j).expect("valid position");
                p_inv.mul(&unit).mul(p)
            })
            .collect();
        Ok(Self { field, n, images })
    }

    /// The antiautomorphism X -> P^-1 X∘ P.
    pub fn antiautomorphism(p: &UTMatrix<F>) -> Result<Self, OracleError> {
        let p_inv = p.block_inverse()?;
        let field = p.field().clone();
        let n = p.n();
        let images = positions(n)
            .map(|(i, j)| {
                let unit = UTMatrix::unit(field.clone(), n, i, j).expect("valid position");
                p_inv.mul(&unit.canonical_involution()).mul(p)
            })
            .collect();
        Ok(Self { field, n, images })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn image_of_unit(&self, i: usize, j: usize) -> &UTMatrix<F> {
        &self.images[tri_index(self.n, i, j)]
    }

    pub fn apply(&self, x: &UTMatrix<F>) -> UTMatrix<F> {
        let f = &self.field;
        let mut out = UTMatrix::zero(f.clone(), self.n);
        for (idx, (i, j)) in positions(self.n).enumerate() {
            let c = x.get(i, j);
            if !f.is_zero(&c) {
                out = out.add(&self.images[idx].scale(&c));
            }
        }
        out
    }

    /// Composition self ∘ other.
    pub fn compose(&self, other: &Self) -> Self {
        let images = other.images.iter().map(|img| self.apply(img)).collect();
        Self {
            field: self.field.clone(),
            n: self.n,
            images,
        }
    }

    pub fn is_identity_map(&self) -> bool {
        positions(self.n)
            .enumerate()
            .all(|(idx, (i, j))| {
                self.images[idx]
                    == UTMatrix::unit(self.field.clone(), self.n, i, j).expect("valid")
            })
    }

    pub fn is_bijective(&self) -> bool {
        let rows: Vec<Vec<F::Elem>> = self
            .images
            .iter()
            .map(|img| img.coords().to_vec())
            .collect();
        rank(&self.field, rows) == triangle_size(self.n)
    }

    pub fn is_unital(&self) -> bool {
        let id = UTMatrix::identity(self.field.clone(), self.n);
        self.apply(&id) == id
    }

    /// True iff the map reverses every unit product:
    /// map(E_{i,j} E_{k,l}) = map(E_{k,l}) map(E_{i,j}).
    pub fn reverses_products(&self) -> bool {
        self.check_products(true)
    }

    /// True iff the map preserves every unit product.
    pub fn preserves_products(&self) -> bool {
        self.check_products(false)
    }

    fn check_products(&self, reversed: bool) -> bool {
        let f = self.field.clone();
        let n = self.n;
        for (a, b) in positions(n).flat_map(|a| positions(n).map(move |b| (a, b))) {
            let (i, j) = a;
            let (k, l) = b;
            // E_{i,j} E_{k,l} = E_{i,l} when j = k, zero otherwise
            let product_image = if j == k {
                let unit = UTMatrix::unit(f.clone(), n, i, l).expect("i <= j = k <= l");
                self.apply(&unit)
            } else {
                UTMatrix::zero(f.clone(), n)
            };
            let left = self.image_of_unit(i, j);
            let right = self.image_of_unit(k, l);
            let composed = if reversed {
                right.mul(left)
            } else {
                left.mul(right)
            };
            if composed != product_image {
                return false;
            }
        }
        true
    }

    /// True iff the map is a bijective, unital, product-reversing
    /// linear map — an antiautomorphism of UT_n.
    pub fn is_antiautomorphism(&self) -> bool {
        self.is_bijective() && self.is_unital() && self.reverses_products()
    }

    /// True iff the map is a unital product-preserving bijection — an
    /// automorphism of UT_n.
    pub fn is_automorphism(&self) -> bool {
        self.is_bijective() && self.is_unital() && self.preserves_products()
    }
}

/// Rank of a list of coordinate vectors by Gaussian elimination.
pub fn rank<F: Field>(field: &F, mut rows: Vec<Vec<F::Elem>>) -> usize {
    let width = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..width {
        let Some(pivot) = (r..rows.len()).find(|&i| !field.is_zero(&rows[i][col])) else {
            continue;
        };
        rows.swap(r, pivot);
        let inv = field.inv(&rows[r][col]).expect("nonzero pivot");
        for c in col..width {
            rows[r][c] = field.mul(&rows[r][c], &inv);
        }
        for i in 0..rows.len() {
            if i != r && !field.is_zero(&rows[i][col]) {
                let factor = rows[i][col].clone();
                for c in col..width {
                    let delta = field.mul(&factor, &rows[r][c]);
                    rows[i][c] = field.sub(&rows[i][c], &delta);
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

/// Brute-force θ-homogeneity decision for a bijective linear map: for
/// each support element g, the span of the images of the degree-g unit
/// basis must be exactly one full homogeneous component A_{θ(g)}, and θ
/// must be a bijection of the support. Returns the θ map on success.
pub fn oracle_homogeneity<F: Field>(
    grading: &ElementaryGrading,
    map: &LinearMapOnUnits<F>,
) -> Result<Option<ThetaMap>, OracleError> {
    assert_eq!(grading.n(), map.n(), "dimension mismatch");
    if !map.is_bijective() {
        return Err(OracleError::NotBijective);
    }
    let field = map.field();
    let support = grading.support();
    let mut mapping: BTreeMap<GroupElement, GroupElement> = BTreeMap::new();
    for (g, positions_of_g) in support.iter() {
        let images: Vec<Vec<F::Elem>> = positions_of_g
            .iter()
            .map(|&(i, j)| map.image_of_unit(i, j).coords().to_vec())
            .collect();
        // positions touched by any image vector
        let mut touched: BTreeSet<(usize, usize)> = BTreeSet::new();
        for vec in &images {
            for (idx, (i, j)) in positions(map.n()).enumerate() {
                if !field.is_zero(&vec[idx]) {
                    touched.insert((i, j));
                }
            }
        }
        if touched.is_empty() {
            return Ok(None); // images vanish; cannot match a component
        }
        // all touched positions must share one degree h
        let mut degrees = touched
            .iter()
            .map(|&(i, j)| grading.degree(i, j).expect("valid position"));
        let h = degrees.next().expect("nonempty");
        if degrees.any(|d| d != h) {
            return Ok(None);
        }
        // span must be the full component: rank equals its dimension
        let component_dim = support.component(&h).map_or(0, <[_]>::len);
        if rank(field, images) != component_dim {
            return Ok(None);
        }
        mapping.insert(g.clone(), h);
    }
    // θ must be a bijection of the support
    let values: BTreeSet<&GroupElement> = mapping.values().collect();
    if values.len() != mapping.len() {
        return Ok(None);
    }
    let tags = classify_theta(&mapping, grading.group());
    Ok(Some(ThetaMap::from_parts(mapping, tags)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Group;
    use crate::homogeneity::{build_theta, ThetaTag};
    use crate::matrixalg::field::{PrimeField, Rationals};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn grading(spec: &str, n: usize, tuple: &str) -> ElementaryGrading {
        let g = Group::parse_spec(spec).unwrap();
        let t = g.parse_tuple(tuple).unwrap();
        ElementaryGrading::new(g, n, t).unwrap()
    }

    #[test]
    fn canonical_involution_is_antiautomorphism() {
        let m = LinearMapOnUnits::canonical_involution(Rationals, 3);
        assert!(m.is_antiautomorphism());
        assert!(!m.is_automorphism());
        assert!(m.compose(&m).is_identity_map());
    }

    #[test]
    fn identity_map_is_not_an_antiautomorphism() {
        let m = LinearMapOnUnits::identity(Rationals, 2);
        assert!(!m.is_antiautomorphism());
        assert!(m.is_automorphism());
    }

    #[test]
    fn conjugations_are_automorphisms() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..5 {
            let p = UTMatrix::random_invertible(Rationals, 4, &mut rng);
            let m = LinearMapOnUnits::conjugation(&p).unwrap();
            assert!(m.is_automorphism());
            let a = LinearMapOnUnits::antiautomorphism(&p).unwrap();
            assert!(a.is_antiautomorphism());
        }
    }

    #[test]
    fn rank_of_unit_vectors() {
        let f = PrimeField::new(5).unwrap();
        let rows = vec![
            vec![1, 0, 0],
            vec![0, 2, 0],
            vec![1, 2, 0],
        ];
        assert_eq!(rank(&f, rows), 2);
        assert_eq!(rank(&f, vec![vec![0u64, 0, 0]]), 0);
    }

    #[test]
    fn oracle_on_trivial_grading() {
        let g = grading("Z3", 3, "0,0");
        let f = PrimeField::new(5).unwrap();
        let m = LinearMapOnUnits::canonical_involution(f, 3);
        let theta = oracle_homogeneity(&g, &m).unwrap().unwrap();
        assert_eq!(theta.mapping().len(), 1);
        assert!(theta.tags().contains(&ThetaTag::Graded));
    }

    #[test]
    fn oracle_rejects_straddling_component() {
        let g = grading("Z2", 3, "0,1");
        let f = PrimeField::new(5).unwrap();
        let m = LinearMapOnUnits::canonical_involution(f, 3);
        assert!(oracle_homogeneity(&g, &m).unwrap().is_none());
    }

    #[test]
    fn oracle_finds_inversion() {
        let g = grading("Z", 3, "1,-1");
        let f = PrimeField::new(5).unwrap();
        let m = LinearMapOnUnits::canonical_involution(f, 3);
        let theta = oracle_homogeneity(&g, &m).unwrap().unwrap();
        assert_eq!(
            theta.tags().iter().copied().collect::<Vec<_>>(),
            vec![ThetaTag::DegreeInverting]
        );
        assert_eq!(theta.mapping(), build_theta(&g).theta().unwrap().mapping());
    }

    #[test]
    fn oracle_requires_bijectivity() {
        let f = Rationals;
        let zero = UTMatrix::zero(f, 2);
        let images = vec![zero.clone(), zero.clone(), zero];
        let m = LinearMapOnUnits::from_images(f, 2, images).unwrap();
        let g = grading("Z2", 2, "1");
        assert!(matches!(
            oracle_homogeneity(&g, &m),
            Err(OracleError::NotBijective)
        ));
    }
}
