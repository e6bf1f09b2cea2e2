//! Linear systems whose unknown is a matrix.

use super::field::{FieldSpec, Scalar};
use super::matrix::{Matrix, Vector};
use super::subspace::Subspace;
use crate::error::{Error, Result};

/// `sum_{i,j} coeffs[i][j] * X[i][j] = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearConstraint {
    pub coeffs: Matrix,
    pub rhs: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AffineSolution {
    Inconsistent,
    Solved {
        /// Solution with every free unknown set to zero.
        particular: Matrix,
        /// Solutions of the homogeneous system, as row-major flattened unknowns.
        homogeneous: Subspace,
    },
}

impl AffineSolution {
    pub fn is_consistent(&self) -> bool {
        matches!(self, AffineSolution::Solved { .. })
    }

    pub fn homogeneous_dim(&self) -> Option<usize> {
        match self {
            AffineSolution::Solved { homogeneous, .. } => Some(homogeneous.dim()),
            AffineSolution::Inconsistent => None,
        }
    }
}

/// A system of affine constraints on an unknown `rows x cols` matrix.
#[derive(Clone, Debug)]
pub struct AffineSystem {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    constraints: Vec<LinearConstraint>,
}

impl AffineSystem {
    pub fn new(field: FieldSpec, rows: usize, cols: usize) -> Self {
        AffineSystem {
            field,
            rows,
            cols,
            constraints: Vec::new(),
        }
    }

    pub fn constraints(&self) -> &[LinearConstraint] {
        &self.constraints
    }

    pub fn push(&mut self, constraint: LinearConstraint) -> Result<()> {
        if constraint.coeffs.field() != self.field {
            return Err(Error::mismatch(self.field, constraint.coeffs.field()));
        }
        if constraint.rhs.field() != self.field {
            return Err(Error::mismatch(self.field, constraint.rhs.field()));
        }
        if (constraint.coeffs.rows(), constraint.coeffs.cols()) != (self.rows, self.cols) {
            return Err(Error::Shape(format!(
                "constraint is {}x{}, unknown is {}x{}",
                constraint.coeffs.rows(),
                constraint.coeffs.cols(),
                self.rows,
                self.cols
            )));
        }
        self.constraints.push(constraint);
        Ok(())
    }

    /// Adds the entrywise equations `map(X) = rhs` for a linear `map`.
    ///
    /// The coefficients are read off by applying `map` to each elementary
    /// matrix, so `map` must be linear.
    pub fn push_linear_equation(
        &mut self,
        map: impl Fn(&Matrix) -> Matrix,
        rhs: &Matrix,
    ) -> Result<()> {
        if rhs.field() != self.field {
            return Err(Error::mismatch(self.field, rhs.field()));
        }
        let images: Vec<Matrix> = (0..self.rows * self.cols)
            .map(|k| {
                let mut e = Matrix::zeros(self.field, self.rows, self.cols);
                e.set(k / self.cols, k % self.cols, self.field.one());
                map(&e)
            })
            .collect();
        for i in 0..rhs.rows() {
            for j in 0..rhs.cols() {
                let coeffs = Matrix::from_fn(self.field, self.rows, self.cols, |a, b| {
                    images[a * self.cols + b].get(i, j).clone()
                });
                self.push(LinearConstraint {
                    coeffs,
                    rhs: rhs.get(i, j).clone(),
                })?;
            }
        }
        Ok(())
    }

    pub fn solve(&self) -> Result<AffineSolution> {
        solve_affine(self.field, self.rows, self.cols, &self.constraints)
    }

    /// Reshapes a flattened homogeneous solution into a matrix.
    pub fn unflatten(&self, v: &[Scalar]) -> Matrix {
        Matrix::from_fn(self.field, self.rows, self.cols, |i, j| {
            v[i * self.cols + j].clone()
        })
    }
}

/// Solves affine constraints on an unknown `rows x cols` matrix.
pub fn solve_affine(
    field: FieldSpec,
    rows: usize,
    cols: usize,
    constraints: &[LinearConstraint],
) -> Result<AffineSolution> {
    let n = rows * cols;
    let mut aug: Vec<Vector> = Vec::with_capacity(constraints.len());
    for c in constraints {
        if c.coeffs.field() != field {
            return Err(Error::mismatch(field, c.coeffs.field()));
        }
        if c.rhs.field() != field {
            return Err(Error::mismatch(field, c.rhs.field()));
        }
        if c.coeffs.entries().len() != n {
            return Err(Error::Shape(format!(
                "constraint has {} coefficients, expected {n}",
                c.coeffs.entries().len()
            )));
        }
        let mut row = c.coeffs.entries().to_vec();
        row.push(c.rhs.clone());
        aug.push(row);
    }
    if aug.is_empty() {
        return Ok(AffineSolution::Solved {
            particular: Matrix::zeros(field, rows, cols),
            homogeneous: Subspace::full(field, n),
        });
    }
    let aug = Matrix::from_rows(field, aug)?;
    let (r, pivots) = aug.rref();
    if pivots.last() == Some(&n) {
        return Ok(AffineSolution::Inconsistent);
    }
    let mut particular = vec![field.zero(); n];
    for (row, &p) in pivots.iter().enumerate() {
        particular[p] = r.get(row, n).clone();
    }
    let coeff = Matrix::from_fn(field, r.rows(), n, |i, j| r.get(i, j).clone());
    Ok(AffineSolution::Solved {
        particular: Matrix::from_fn(field, rows, cols, |i, j| particular[i * cols + j].clone()),
        homogeneous: coeff.kernel_basis(),
    })
}
