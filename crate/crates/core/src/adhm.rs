//! ADHM-type data `(B1, B2, v1, ..., vr)`: commuting nilpotent operators on
//! `V = F^d` with `r` marked vectors, stability, the W-slice, stabilizers and
//! orbit equivalence under `GL(V)`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{AffineSolution, AffineSystem, FieldSpec, Matrix, Scalar, Subspace, Vector};

/// A datum as read from input, before any checks.
#[derive(Clone, Debug)]
pub struct RawDatum {
    pub field: FieldSpec,
    pub d: usize,
    pub r: usize,
    pub b1: Vec<Vec<Scalar>>,
    pub b2: Vec<Vec<Scalar>>,
    pub vectors: Vec<Vec<Scalar>>,
}

/// One reason a raw datum fails to be a point of `N_d x V^r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Shape { detail: String },
    Field { detail: String },
    NoVectors,
    NonCommuting,
    NotNilpotent { operator: u8 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape { detail } => write!(f, "shape: {detail}"),
            Violation::Field { detail } => write!(f, "field: {detail}"),
            Violation::NoVectors => write!(f, "r must be at least 1"),
            Violation::NonCommuting => write!(f, "B1 and B2 do not commute"),
            Violation::NotNilpotent { operator } => write!(f, "B{operator} is not nilpotent"),
        }
    }
}

/// A checked point of `N_d x V^r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuotDatum {
    field: FieldSpec,
    d: usize,
    b1: Matrix,
    b2: Matrix,
    vectors: Vec<Vector>,
}

impl QuotDatum {
    /// Checks commutation, nilpotency, shapes and fields.
    pub fn new(b1: Matrix, b2: Matrix, vectors: Vec<Vector>) -> Result<Self> {
        let field = b1.field();
        let d = b1.rows();
        let violations = check(field, d, vectors.len(), &b1, &b2, &vectors);
        if !violations.is_empty() {
            return Err(Error::InvalidDatum(violations));
        }
        Ok(QuotDatum {
            field,
            d,
            b1,
            b2,
            vectors,
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn r(&self) -> usize {
        self.vectors.len()
    }

    pub fn b1(&self) -> &Matrix {
        &self.b1
    }

    pub fn b2(&self) -> &Matrix {
        &self.b2
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    /// The datum with the marked vectors replaced.
    pub fn with_vectors(&self, vectors: Vec<Vector>) -> Result<Self> {
        QuotDatum::new(self.b1.clone(), self.b2.clone(), vectors)
    }

    /// `g . (B1, B2, v) = (g B1 g^-1, g B2 g^-1, g v)`.
    pub fn act(&self, g: &Matrix) -> Result<Self> {
        let inv = g
            .inverse()
            .ok_or_else(|| Error::Shape("acting matrix is not invertible".into()))?;
        if g.rows() != self.d || g.field() != self.field {
            return Err(Error::Shape(
                "acting matrix does not match the datum".into(),
            ));
        }
        QuotDatum::new(
            g.mul(&self.b1).mul(&inv),
            g.mul(&self.b2).mul(&inv),
            self.vectors.iter().map(|v| g.mul_vec(v)).collect(),
        )
    }
}

fn check(
    field: FieldSpec,
    d: usize,
    r: usize,
    b1: &Matrix,
    b2: &Matrix,
    vectors: &[Vector],
) -> Vec<Violation> {
    let mut out = Vec::new();
    if r == 0 {
        out.push(Violation::NoVectors);
    }
    for (name, m) in [("B1", b1), ("B2", b2)] {
        if m.rows() != d || m.cols() != d {
            out.push(Violation::Shape {
                detail: format!("{name} is {}x{}, expected {d}x{d}", m.rows(), m.cols()),
            });
        }
        if m.field() != field {
            out.push(Violation::Field {
                detail: format!("{name} is over {}, expected {field}", m.field()),
            });
        }
    }
    for (j, v) in vectors.iter().enumerate() {
        if v.len() != d {
            out.push(Violation::Shape {
                detail: format!("v{} has length {}, expected {d}", j + 1, v.len()),
            });
        }
        if v.iter().any(|x| x.field() != field) {
            out.push(Violation::Field {
                detail: format!("v{} has entries outside {field}", j + 1),
            });
        }
    }
    if !out.is_empty() {
        return out;
    }
    if !b1.commutes_with(b2) {
        out.push(Violation::NonCommuting);
    }
    for (k, m) in [(1u8, b1), (2u8, b2)] {
        if !m.is_nilpotent().unwrap_or(false) {
            out.push(Violation::NotNilpotent { operator: k });
        }
    }
    out
}

/// Checks a raw datum, reporting every violated condition at once.
pub fn validate(raw: &RawDatum) -> Result<QuotDatum> {
    let mut violations = Vec::new();
    if raw.vectors.len() != raw.r {
        violations.push(Violation::Shape {
            detail: format!("r = {} but {} vectors given", raw.r, raw.vectors.len()),
        });
    }
    let mut to_matrix = |name: &str, rows: &[Vec<Scalar>]| -> Option<Matrix> {
        if rows.len() != raw.d || rows.iter().any(|row| row.len() != raw.d) {
            violations.push(Violation::Shape {
                detail: format!("{name} is not {0}x{0}", raw.d),
            });
            return None;
        }
        match Matrix::from_rows(raw.field, rows.to_vec()) {
            Ok(m) => Some(m),
            Err(e) => {
                violations.push(Violation::Field {
                    detail: format!("{name}: {e}"),
                });
                None
            }
        }
    };
    let b1 = to_matrix("B1", &raw.b1);
    let b2 = to_matrix("B2", &raw.b2);
    let (Some(b1), Some(b2)) = (b1, b2) else {
        return Err(Error::InvalidDatum(violations));
    };
    violations.extend(check(
        raw.field,
        raw.d,
        raw.vectors.len(),
        &b1,
        &b2,
        &raw.vectors,
    ));
    if !violations.is_empty() {
        return Err(Error::InvalidDatum(violations));
    }
    Ok(QuotDatum {
        field: raw.field,
        d: raw.d,
        b1,
        b2,
        vectors: raw.vectors.clone(),
    })
}

/// The monomial `B1^x B2^y v_generator` (generator is a zero-based index).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Monomial {
    pub x: usize,
    pub y: usize,
    pub generator: usize,
}

impl Monomial {
    pub fn degree(&self) -> usize {
        self.x + self.y
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityCertificate {
    pub stable: bool,
    /// Smallest `B1`, `B2`-invariant subspace containing the marked vectors.
    pub generated: Subspace,
    /// Monomials whose vectors form a basis of `generated`, in graded order
    /// (degree, then `B1` power descending, then generator).
    pub witness_monomials: Vec<Monomial>,
}

/// Breadth-first closure by total degree. Degree `n` vectors are obtained
/// from degree `n - 1` ones, and the loop stops at the first degree that adds
/// nothing, which happens after at most `d` rounds.
pub fn closure(b1: &Matrix, b2: &Matrix, vectors: &[Vector]) -> StabilityCertificate {
    let field = b1.field();
    let d = b1.rows();
    let mut generated = Subspace::zero(field, d);
    let mut witnesses = Vec::new();

    // Entry (x, j) of `layer` holds B1^x B2^(deg - x) v_j, x descending.
    let mut layer: Vec<(Monomial, Vector)> = vectors
        .iter()
        .enumerate()
        .map(|(j, v)| {
            (
                Monomial {
                    x: 0,
                    y: 0,
                    generator: j,
                },
                v.clone(),
            )
        })
        .collect();
    loop {
        let mut grew = false;
        for (m, v) in &layer {
            if let Some(bigger) = generated.extended(v) {
                generated = bigger;
                witnesses.push(*m);
                grew = true;
            }
        }
        if !grew || generated.is_full() {
            break;
        }
        let mut next = Vec::with_capacity(layer.len() + vectors.len());
        // B1 applied to every monomial of this degree gives all x >= 1 terms
        // of the next degree; the pure B2 power comes from the x = 0 terms.
        for (m, v) in &layer {
            next.push((Monomial { x: m.x + 1, ..*m }, b1.mul_vec(v)));
        }
        for (m, v) in layer.iter().filter(|(m, _)| m.x == 0) {
            next.push((Monomial { y: m.y + 1, ..*m }, b2.mul_vec(v)));
        }
        next.sort_by(|(a, _), (b, _)| b.x.cmp(&a.x).then(a.generator.cmp(&b.generator)));
        layer = next;
    }
    StabilityCertificate {
        stable: generated.is_full(),
        generated,
        witness_monomials: witnesses,
    }
}

pub fn generated_subspace(datum: &QuotDatum) -> StabilityCertificate {
    closure(&datum.b1, &datum.b2, &datum.vectors)
}

/// Membership in `U_r`.
pub fn is_stable(datum: &QuotDatum) -> bool {
    generated_subspace(datum).stable
}

/// True iff `v1` alone is cyclic for `(B1, B2)`.
pub fn in_w_slice(datum: &QuotDatum) -> bool {
    closure(&datum.b1, &datum.b2, &datum.vectors[..1]).stable
}

fn stabilizer_system(datum: &QuotDatum) -> AffineSystem {
    let field = datum.field;
    let d = datum.d;
    let mut sys = AffineSystem::new(field, d, d);
    let zero = Matrix::zeros(field, d, d);
    for b in [&datum.b1, &datum.b2] {
        sys.push_linear_equation(|x| x.mul(b).sub(&b.mul(x)), &zero)
            .expect("shapes agree");
    }
    let vs = Matrix::from_columns(field, d, &datum.vectors).expect("vectors have length d");
    sys.push_linear_equation(|x| x.mul(&vs), &Matrix::zeros(field, d, datum.r()))
        .expect("shapes agree");
    sys
}

/// Dimension of `{X : X B_i = B_i X, X v_j = 0}`, the Lie algebra of the
/// stabilizer. Zero on stable data.
pub fn stabilizer_lie_dimension(datum: &QuotDatum) -> usize {
    stabilizer_system(datum)
        .solve()
        .expect("homogeneous system over one field")
        .homogeneous_dim()
        .expect("homogeneous systems are consistent")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitVerdict {
    /// `g . a = b`.
    Equivalent(Matrix),
    Distinct,
}

/// Decides whether two stable data lie in one `GL(V)`-orbit.
///
/// Solves `g B_i(a) = B_i(b) g`, `g v_j(a) = v_j(b)`. On stable data a
/// solution is unique and invertible; both facts are re-checked.
pub fn orbit_witness(a: &QuotDatum, b: &QuotDatum) -> Result<OrbitVerdict> {
    if a.field != b.field {
        return Err(Error::mismatch(a.field, b.field));
    }
    if a.d != b.d || a.r() != b.r() {
        return Err(Error::Shape(format!(
            "data have (d, r) = ({}, {}) and ({}, {})",
            a.d,
            a.r(),
            b.d,
            b.r()
        )));
    }
    for (name, x) in [("first", a), ("second", b)] {
        if !is_stable(x) {
            return Err(Error::Unstable(format!("{name} datum is not stable")));
        }
    }
    let field = a.field;
    let d = a.d;
    let mut sys = AffineSystem::new(field, d, d);
    let zero = Matrix::zeros(field, d, d);
    for (ba, bb) in [(&a.b1, &b.b1), (&a.b2, &b.b2)] {
        sys.push_linear_equation(|g| g.mul(ba).sub(&bb.mul(g)), &zero)?;
    }
    let va = Matrix::from_columns(field, d, &a.vectors)?;
    let vb = Matrix::from_columns(field, d, &b.vectors)?;
    sys.push_linear_equation(|g| g.mul(&va), &vb)?;
    match sys.solve()? {
        AffineSolution::Inconsistent => Ok(OrbitVerdict::Distinct),
        AffineSolution::Solved {
            particular,
            homogeneous,
        } => {
            if homogeneous.dim() != 0 {
                return Err(Error::Internal(
                    "intertwiner of stable data is not unique".into(),
                ));
            }
            if !particular.is_invertible() {
                return Err(Error::Internal(
                    "intertwiner of stable data is singular".into(),
                ));
            }
            if a.act(&particular)? != *b {
                return Err(Error::Internal(
                    "intertwiner does not map the first datum to the second".into(),
                ));
            }
            Ok(OrbitVerdict::Equivalent(particular))
        }
    }
}
