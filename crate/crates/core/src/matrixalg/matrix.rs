//! Upper triangular matrices over an exact field, with the canonical
//! reflection involution, the recursive block inverse, conjugation and
//! antiautomorphism application.

use rand::RngCore;
use thiserror::Error;

use crate::grading::ElementaryGrading;
use crate::group::GroupElement;
use crate::matrixalg::field::Field;

#[derive(Debug, Error, PartialEq)]
pub enum MatrixError {
    #[error("matrix is singular (zero diagonal entry)")]
    Singular,
    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),
    #[error("expected {expected} upper-triangle entries for n={n}, got {got}")]
    EntryCount { n: usize, expected: usize, got: usize },
    #[error("({i},{j}) is not an upper triangular position of UT_{n}")]
    Position { i: usize, j: usize, n: usize },
}

/// Index of position (i,j), 1-based, i <= j, in row-major
/// upper-triangle order (1,1),(1,2),...,(1,n),(2,2),...
pub fn tri_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(1 <= i && i <= j && j <= n);
    (i - 1) * (n + 1) - i * (i - 1) / 2 + (j - i)
}

/// All upper triangular positions of UT_n in index order.
pub fn positions(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=n).flat_map(move |i| (i..=n).map(move |j| (i, j)))
}

/// Dimension of UT_n as a vector space.
pub fn triangle_size(n: usize) -> usize {
    n * (n + 1) / 2
}

/// An n x n upper triangular matrix; strictly lower entries are
/// implicitly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct UTMatrix<F: Field> {
    field: F,
    n: usize,
    entries: Vec<F::Elem>,
}

impl<F: Field> UTMatrix<F> {
    pub fn zero(field: F, n: usize) -> Self {
        let entries = vec![field.zero(); triangle_size(n)];
        Self { field, n, entries }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zero(field, n);
        for i in 1..=n {
            let one = m.field.one();
            m.set(i, i, one);
        }
        m
    }

    /// The matrix unit E_{i,j}.
    pub fn unit(field: F, n: usize, i: usize, j: usize) -> Result<Self, MatrixError> {
        if i < 1 || j < i || j > n {
            return Err(MatrixError::Position { i, j, n });
        }
        let mut m = Self::zero(field, n);
        let one = m.field.one();
        m.set(i, j, one);
        Ok(m)
    }

    /// Builds from row-major upper-triangle entries.
    pub fn from_upper_entries(
        field: F,
        n: usize,
        entries: Vec<F::Elem>,
    ) -> Result<Self, MatrixError> {
        if entries.len() != triangle_size(n) {
            return Err(MatrixError::EntryCount {
                n,
                expected: triangle_size(n),
                got: entries.len(),
            });
        }
        Ok(Self { field, n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    /// Entry (i,j), 1-based; zero below the diagonal.
    pub fn get(&self, i: usize, j: usize) -> F::Elem {
        if i > j {
            self.field.zero()
        } else {
            self.entries[tri_index(self.n, i, j)].clone()
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        assert!(i <= j, "cannot write below the diagonal");
        self.entries[tri_index(self.n, i, j)] = v;
    }

    /// Coordinates in the matrix-unit basis, index order of
    /// [`positions`].
    pub fn coords(&self) -> &[F::Elem] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| self.field.is_zero(e))
    }

    pub fn is_invertible(&self) -> bool {
        (1..=self.n).all(|i| !self.field.is_zero(&self.get(i, i)))
    }

    pub fn add(&self, other: &Self) -> Self {
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| self.field.add(a, b))
            .collect();
        Self {
            field: self.field.clone(),
            n: self.n,
            entries,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let entries = self.entries.iter().map(|a| self.field.neg(a)).collect();
        Self {
            field: self.field.clone(),
            n: self.n,
            entries,
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let entries = self.entries.iter().map(|a| self.field.mul(c, a)).collect();
        Self {
            field: self.field.clone(),
            n: self.n,
            entries,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let f = &self.field;
        let mut out = Self::zero(f.clone(), self.n);
        for i in 1..=self.n {
            for j in i..=self.n {
                let mut acc = f.zero();
                for k in i..=j {
                    acc = f.add(&acc, &f.mul(&self.get(i, k), &other.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// Reflection along the secondary diagonal: the entry at (i,j)
    /// moves to (n-j+1, n-i+1). Linear, product-reversing, involutive.
    pub fn canonical_involution(&self) -> Self {
        let n = self.n;
        let mut out = Self::zero(self.field.clone(), n);
        for (i, j) in positions(n) {
            out.set(n - j + 1, n - i + 1, self.get(i, j));
        }
        out
    }

    /// The principal UT block on rows/cols lo..=hi.
    fn submatrix(&self, lo: usize, hi: usize) -> Self {
        let size = hi - lo + 1;
        let mut out = Self::zero(self.field.clone(), size);
        for i in 1..=size {
            for j in i..=size {
                out.set(i, j, self.get(lo + i - 1, lo + j - 1));
            }
        }
        out
    }

    /// Inverse by the recursive block formula: split at the pivot k,
    /// invert the diagonal blocks and assemble
    ///
    /// ```text
    /// ( A u B )^-1   ( A^-1  -A^-1 u x^-1   A^-1 (u x^-1 v - B) C^-1 )
    /// ( 0 x v )    = (  0        x^-1           -x^-1 v C^-1        )
    /// ( 0 0 C )      (  0          0                 C^-1           )
    /// ```
    ///
    /// with pivot k = ceil(n/2) and closed forms at n = 1, 2.
    pub fn block_inverse(&self) -> Result<Self, MatrixError> {
        if !self.is_invertible() {
            return Err(MatrixError::Singular);
        }
        Ok(self.block_inverse_unchecked())
    }

    fn block_inverse_unchecked(&self) -> Self {
        let f = self.field.clone();
        let n = self.n;
        let inv = |e: &F::Elem| f.inv(e).expect("invertibility checked");
        match n {
            1 => {
                let mut out = Self::zero(f.clone(), 1);
                out.set(1, 1, inv(&self.get(1, 1)));
                out
            }
            2 => {
                let (a, b, c) = (self.get(1, 1), self.get(1, 2), self.get(2, 2));
                let (ai, ci) = (inv(&a), inv(&c));
                let mut out = Self::zero(f.clone(), 2);
                out.set(1, 1, ai.clone());
                out.set(1, 2, f.neg(&f.mul(&f.mul(&ai, &b), &ci)));
                out.set(2, 2, ci);
                out
            }
            _ => {
                let k = (n + 1) / 2; // 1 < k < n for n >= 3
                let a_inv = self.submatrix(1, k - 1).block_inverse_unchecked();
                let c_inv = self.submatrix(k + 1, n).block_inverse_unchecked();
                let x_inv = inv(&self.get(k, k));
                let u: Vec<F::Elem> = (1..k).map(|i| self.get(i, k)).collect();
                let v: Vec<F::Elem> = (k + 1..=n).map(|j| self.get(k, j)).collect();
                let b: Vec<Vec<F::Elem>> = (1..k)
                    .map(|i| (k + 1..=n).map(|j| self.get(i, j)).collect())
                    .collect();

                let au = a_inv.mul_vec(&u); // A^-1 u
                let vc = c_inv.vec_mul(&v); // v C^-1

                // A^-1 (u x^-1 v - B) C^-1
                let rows = k - 1;
                let cols = n - k;
                let mut mid = vec![vec![f.zero(); cols]; rows];
                for (r, row) in mid.iter_mut().enumerate() {
                    for (c, cell) in row.iter_mut().enumerate() {
                        let uxv = f.mul(&f.mul(&u[r], &x_inv), &v[c]);
                        *cell = f.sub(&uxv, &b[r][c]);
                    }
                }
                let mid = a_inv.mul_rect(&mid);
                let top_right = c_inv.rect_mul(&mid);

                let mut out = Self::zero(f.clone(), n);
                for i in 1..k {
                    for j in i..k {
                        out.set(i, j, a_inv.get(i, j));
                    }
                    out.set(i, k, f.neg(&f.mul(&au[i - 1], &x_inv)));
                    for j in k + 1..=n {
                        out.set(i, j, top_right[i - 1][j - k - 1].clone());
                    }
                }
                out.set(k, k, x_inv.clone());
                for j in k + 1..=n {
                    out.set(k, j, f.neg(&f.mul(&x_inv, &vc[j - k - 1])));
                }
                for i in k + 1..=n {
                    for j in i..=n {
                        out.set(i, j, c_inv.get(i - k, j - k));
                    }
                }
                out
            }
        }
    }

    /// self * v for a column vector v.
    fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        (1..=self.n)
            .map(|i| {
                let mut acc = f.zero();
                for j in i..=self.n {
                    acc = f.add(&acc, &f.mul(&self.get(i, j), &v[j - 1]));
                }
                acc
            })
            .collect()
    }

    /// v * self for a row vector v.
    fn vec_mul(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        (1..=self.n)
            .map(|j| {
                let mut acc = f.zero();
                for i in 1..=j {
                    acc = f.add(&acc, &f.mul(&v[i - 1], &self.get(i, j)));
                }
                acc
            })
            .collect()
    }

    /// self * R for a rectangular block R with `self.n` rows.
    fn mul_rect(&self, r: &[Vec<F::Elem>]) -> Vec<Vec<F::Elem>> {
        let f = &self.field;
        let cols = r.first().map_or(0, Vec::len);
        (1..=self.n)
            .map(|i| {
                (0..cols)
                    .map(|c| {
                        let mut acc = f.zero();
                        for j in i..=self.n {
                            acc = f.add(&acc, &f.mul(&self.get(i, j), &r[j - 1][c]));
                        }
                        acc
                    })
                    .collect()
            })
            .collect()
    }

    /// R * self for a rectangular block R with `self.n` columns.
    fn rect_mul(&self, r: &[Vec<F::Elem>]) -> Vec<Vec<F::Elem>> {
        let f = &self.field;
        r.iter()
            .map(|row| {
                (1..=self.n)
                    .map(|j| {
                        let mut acc = f.zero();
                        for i in 1..=j {
                            acc = f.add(&acc, &f.mul(&row[i - 1], &self.get(i, j)));
                        }
                        acc
                    })
                    .collect()
            })
            .collect()
    }

    /// Independent inverse by column-wise back substitution on P X = I.
    pub fn back_substitution_inverse(&self) -> Result<Self, MatrixError> {
        if !self.is_invertible() {
            return Err(MatrixError::Singular);
        }
        let f = &self.field;
        let n = self.n;
        let mut out = Self::zero(f.clone(), n);
        for j in 1..=n {
            let xjj = f.inv(&self.get(j, j)).expect("diagonal nonzero");
            out.set(j, j, xjj);
            for i in (1..j).rev() {
                let mut acc = f.zero();
                for k in i + 1..=j {
                    acc = f.add(&acc, &f.mul(&self.get(i, k), &out.get(k, j)));
                }
                let val = f
                    .div(&f.neg(&acc), &self.get(i, i))
                    .expect("diagonal nonzero");
                out.set(i, j, val);
            }
        }
        Ok(out)
    }

    /// A uniformly random invertible matrix (diagonal entries re-drawn
    /// until nonzero).
    pub fn random_invertible(field: F, n: usize, rng: &mut dyn RngCore) -> Self {
        let mut m = Self::zero(field.clone(), n);
        for (i, j) in positions(n) {
            let mut v = field.random(rng);
            if i == j {
                while field.is_zero(&v) {
                    v = field.random(rng);
                }
            }
            m.set(i, j, v);
        }
        m
    }
}

/// Conjugation X -> P^-1 X P, the inner automorphism attached to P.
pub fn conjugate<F: Field>(p: &UTMatrix<F>, x: &UTMatrix<F>) -> Result<UTMatrix<F>, MatrixError> {
    if p.n() != x.n() {
        return Err(MatrixError::Dimension(p.n(), x.n()));
    }
    let p_inv = p.block_inverse()?;
    Ok(p_inv.mul(x).mul(p))
}

/// The antiautomorphism X -> P^-1 X∘ P attached to P; every
/// antiautomorphism of UT_n has this form.
pub fn antiauto_apply<F: Field>(
    p: &UTMatrix<F>,
    x: &UTMatrix<F>,
) -> Result<UTMatrix<F>, MatrixError> {
    conjugate(p, &x.canonical_involution())
}

/// Sign of P under the reflection: +1 if P∘ = P, -1 if P∘ = -P, `None`
/// otherwise. The attached antiautomorphism is an involution exactly
/// when a sign exists, and -1 cannot occur for odd n.
pub fn involution_sign<F: Field>(p: &UTMatrix<F>) -> Option<i8> {
    let refl = p.canonical_involution();
    if refl == *p {
        Some(1)
    } else if refl == p.neg() {
        Some(-1)
    } else {
        None
    }
}

/// Homogeneity degree of a matrix: `Some(g)` iff every nonzero entry
/// sits at a position of degree g. The zero matrix reports degree e.
/// An invertible matrix can only be homogeneous of degree e.
pub fn is_homogeneous_matrix<F: Field>(
    grading: &ElementaryGrading,
    m: &UTMatrix<F>,
) -> Option<GroupElement> {
    assert_eq!(grading.n(), m.n(), "dimension mismatch");
    let mut degree: Option<GroupElement> = None;
    for (i, j) in positions(m.n()) {
        if m.field().is_zero(&m.get(i, j)) {
            continue;
        }
        let d = grading.degree(i, j).expect("valid position");
        match &degree {
            None => degree = Some(d),
            Some(existing) if *existing == d => {}
            Some(_) => return None,
        }
    }
    Some(degree.unwrap_or_else(|| grading.group().identity()))
}
