use super::field::{FieldSpec, Scalar};
use super::matrix::{is_zero_vec, Matrix, Vector};

/// A linear subspace of `F^ambient`, stored as the nonzero rows of its
/// reduced row-echelon basis. The representation is canonical, so derived
/// equality is equality of subspaces.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: FieldSpec,
    ambient: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: FieldSpec, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: FieldSpec, ambient: usize) -> Self {
        let id = Matrix::identity(field, ambient);
        Self::from_rref(&id, (0..ambient).collect())
    }

    /// Span of arbitrary vectors of length `ambient`.
    pub fn span(field: FieldSpec, ambient: usize, vectors: &[Vector]) -> Self {
        if vectors.is_empty() {
            return Self::zero(field, ambient);
        }
        let m =
            Matrix::from_rows(field, vectors.to_vec()).expect("vectors share the subspace field");
        assert_eq!(
            m.cols(),
            ambient,
            "vector length differs from ambient dimension"
        );
        let (r, pivots) = m.rref();
        Self::from_rref(&r, pivots)
    }

    fn from_rref(r: &Matrix, pivots: Vec<usize>) -> Self {
        Subspace {
            field: r.field(),
            ambient: r.cols(),
            basis: (0..pivots.len()).map(|i| r.row(i).to_vec()).collect(),
            pivots,
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// RREF basis rows.
    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    /// Pivot column of each basis row.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis rows as a `dim x ambient` matrix.
    pub fn basis_matrix(&self) -> Matrix {
        if self.basis.is_empty() {
            return Matrix::zeros(self.field, 0, self.ambient);
        }
        Matrix::from_rows(self.field, self.basis.clone()).expect("basis is well formed")
    }

    /// `v` minus its component along the pivots: zero iff `v` lies in the subspace.
    pub fn reduce(&self, v: &[Scalar]) -> Vector {
        let mut r = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let c = r[p].clone();
            if c.is_zero() {
                continue;
            }
            for (x, b) in r.iter_mut().zip(row) {
                if !b.is_zero() {
                    *x = &*x - &(&c * b);
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        is_zero_vec(&self.reduce(v))
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// The subspace enlarged by `v`, or `None` if `v` is already inside.
    pub fn extended(&self, v: &[Scalar]) -> Option<Subspace> {
        if self.contains(v) {
            return None;
        }
        let mut vectors = self.basis.clone();
        vectors.push(v.to_vec());
        Some(Self::span(self.field, self.ambient, &vectors))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut vectors = self.basis.clone();
        vectors.extend(other.basis.iter().cloned());
        Self::span(self.field, self.ambient, &vectors)
    }

    /// `{f : f . u = 0 for all u}` under the standard pairing.
    pub fn annihilator(&self) -> Subspace {
        if self.basis.is_empty() {
            return Self::full(self.field, self.ambient);
        }
        self.basis_matrix().kernel_basis()
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        self.annihilator().sum(&other.annihilator()).annihilator()
    }

    /// `{x : m x ∈ target}`.
    pub fn preimage(m: &Matrix, target: &Subspace) -> Subspace {
        let ann = target.annihilator();
        if ann.dim() == 0 {
            return Self::full(m.field(), m.cols());
        }
        ann.basis_matrix().mul(m).kernel_basis()
    }

    /// Image of the subspace under `m`.
    pub fn image(&self, m: &Matrix) -> Subspace {
        let images: Vec<Vector> = self.basis.iter().map(|v| m.mul_vec(v)).collect();
        Self::span(self.field, m.rows(), &images)
    }
}
