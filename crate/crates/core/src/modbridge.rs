//! Dictionary between data `(B1, B2, v)` and submodules of finite colength
//! in the free module `F[x, y]^r`.
//!
//! A length-`d` quotient is killed by `(x, y)^d`, so all computations happen
//! in the truncation `F[x, y]^r / (x, y)^d F[x, y]^r` with the monomial basis
//! `x^a y^b e_j`, `a + b < d`.

use std::collections::HashMap;

use crate::adhm::{is_stable, Monomial, QuotDatum};
use crate::error::{Error, Result};
use crate::linalg::{is_zero_vec, unit_vector, FieldSpec, Matrix, Subspace, Vector};

/// `F[x, y]^r` truncated at total degree `d`, with monomials listed by degree,
/// then descending `x`-power, then generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedFreeModule {
    field: FieldSpec,
    r: usize,
    d: usize,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl TruncatedFreeModule {
    pub fn new(field: FieldSpec, r: usize, d: usize) -> Self {
        let mut monomials = Vec::with_capacity(r * d * (d + 1) / 2);
        for degree in 0..d {
            for x in (0..=degree).rev() {
                for generator in 0..r {
                    monomials.push(Monomial {
                        x,
                        y: degree - x,
                        generator,
                    });
                }
            }
        }
        let index = monomials.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        TruncatedFreeModule {
            field,
            r,
            d,
            monomials,
            index,
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn monomial_vector(&self, m: &Monomial) -> Option<Vector> {
        self.index_of(m)
            .map(|i| unit_vector(self.field, self.dim(), i))
    }

    fn shift_matrix(&self, dx: usize, dy: usize) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(self.field, n, n);
        for (col, mono) in self.monomials.iter().enumerate() {
            let target = Monomial {
                x: mono.x + dx,
                y: mono.y + dy,
                generator: mono.generator,
            };
            if let Some(row) = self.index_of(&target) {
                m.set(row, col, self.field.one());
            }
        }
        m
    }

    /// Multiplication by `x`; monomials reaching degree `d` are killed.
    pub fn mul_x(&self) -> Matrix {
        self.shift_matrix(1, 0)
    }

    pub fn mul_y(&self) -> Matrix {
        self.shift_matrix(0, 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubmodulePresentation {
    pub module: TruncatedFreeModule,
    pub generators: Vec<Vector>,
    /// Smallest `x`, `y`-stable subspace containing the generators.
    pub closure: Subspace,
    pub colength: usize,
}

/// Closes the span of `gens` under multiplication by `x` and `y`.
pub fn submodule_closure(
    gens: &[Vector],
    ambient: &TruncatedFreeModule,
) -> Result<SubmodulePresentation> {
    let n = ambient.dim();
    for g in gens {
        if g.len() != n {
            return Err(Error::Shape(format!(
                "generator has {} coefficients, module has {n}",
                g.len()
            )));
        }
        if let Some(x) = g.iter().find(|x| x.field() != ambient.field) {
            return Err(Error::mismatch(ambient.field, x.field()));
        }
    }
    let (mx, my) = (ambient.mul_x(), ambient.mul_y());
    let mut closure = Subspace::span(ambient.field, n, gens);
    loop {
        let grown = closure.sum(&closure.image(&mx)).sum(&closure.image(&my));
        if grown.dim() == closure.dim() {
            break;
        }
        closure = grown;
    }
    Ok(SubmodulePresentation {
        module: ambient.clone(),
        generators: gens.to_vec(),
        colength: n - closure.dim(),
        closure,
    })
}

fn reversed(v: &[crate::linalg::Scalar]) -> Vector {
    v.iter().rev().cloned().collect()
}

/// Reads off the quotient as a datum.
///
/// Elimination runs over the monomials in reverse listing order, so the
/// pivots are the largest monomials of each relation and the remaining
/// (standard) monomials form the quotient basis, listed in module order.
/// `B1`, `B2` are the induced multiplications by `x`, `y` and `v_j` is the
/// class of `e_j`.
pub fn quotient_datum(pres: &SubmodulePresentation) -> Result<QuotDatum> {
    let module = &pres.module;
    let field = module.field;
    let n = module.dim();
    let colength = n - pres.closure.dim();
    if colength != module.d {
        return Err(Error::ColengthMismatch {
            expected: module.d,
            found: colength,
        });
    }
    if module.r == 0 {
        return Err(Error::Shape("module of rank zero".into()));
    }
    let (mx, my) = (module.mul_x(), module.mul_y());
    if !pres.closure.contains_subspace(&pres.closure.image(&mx))
        || !pres.closure.contains_subspace(&pres.closure.image(&my))
    {
        return Err(Error::Shape("closure is not stable under x and y".into()));
    }

    let rev_rows: Vec<Vector> = pres.closure.basis().iter().map(|v| reversed(v)).collect();
    let rev_closure = Subspace::span(field, n, &rev_rows);
    let mut is_pivot = vec![false; n];
    for &p in rev_closure.pivots() {
        is_pivot[n - 1 - p] = true;
    }
    let standard: Vec<usize> = (0..n).filter(|&i| !is_pivot[i]).collect();
    let d = standard.len();

    // coordinates of a module element in the standard-monomial basis
    let coords = |v: &[crate::linalg::Scalar]| -> Vector {
        let residual = reversed(&rev_closure.reduce(&reversed(v)));
        standard.iter().map(|&i| residual[i].clone()).collect()
    };
    let induced = |m: &Matrix| -> Matrix {
        let columns: Vec<Vector> = standard
            .iter()
            .map(|&i| coords(&m.mul_vec(&unit_vector(field, n, i))))
            .collect();
        Matrix::from_columns(field, d, &columns).expect("coordinates have length d")
    };
    let b1 = induced(&mx);
    let b2 = induced(&my);
    let vectors: Vec<Vector> = (0..module.r)
        .map(|j| {
            let e = module
                .monomial_vector(&Monomial {
                    x: 0,
                    y: 0,
                    generator: j,
                })
                .expect("d >= 1 keeps the constant monomials");
            coords(&e)
        })
        .collect();
    let datum = QuotDatum::new(b1, b2, vectors).map_err(|e| {
        Error::Internal(format!("quotient of a submodule is not a valid datum: {e}"))
    })?;
    if !is_stable(&datum) {
        return Err(Error::Internal(
            "quotient datum is not generated by the e_j".into(),
        ));
    }
    Ok(datum)
}

/// Kernel of `x^a y^b e_j -> B1^a B2^b v_j` on the truncation at degree `d`.
pub fn presentation_of_datum(datum: &QuotDatum) -> Result<SubmodulePresentation> {
    if !is_stable(datum) {
        return Err(Error::Unstable("evaluation map is not surjective".into()));
    }
    let field = datum.field();
    let d = datum.d();
    let module = TruncatedFreeModule::new(field, datum.r(), d);
    let mut p1 = vec![Matrix::identity(field, d)];
    let mut p2 = vec![Matrix::identity(field, d)];
    for k in 1..d {
        p1.push(p1[k - 1].mul(datum.b1()));
        p2.push(p2[k - 1].mul(datum.b2()));
    }
    let columns: Vec<Vector> = module
        .monomials()
        .iter()
        .map(|m| p1[m.x].mul(&p2[m.y]).mul_vec(&datum.vectors()[m.generator]))
        .collect();
    let evaluation = Matrix::from_columns(field, d, &columns)?;
    let kernel = evaluation.kernel_basis();
    let colength = module.dim() - kernel.dim();
    if colength != d {
        return Err(Error::Internal(format!(
            "evaluation has rank {colength}, expected {d}"
        )));
    }
    Ok(SubmodulePresentation {
        generators: kernel.basis().to_vec(),
        closure: kernel,
        colength,
        module,
    })
}

/// True iff both operators are nilpotent, i.e. the module is supported at
/// the origin.
pub fn support_check(b1: &Matrix, b2: &Matrix) -> bool {
    b1.is_nilpotent().unwrap_or(false) && b2.is_nilpotent().unwrap_or(false)
}

/// Generators of the monomial ideal whose standard monomials are the
/// staircase of `partition` (row `b` holds `x^a y^b` for `a < partition[b]`),
/// inside the truncation at `d = |partition|`.
pub fn staircase_generators(
    field: FieldSpec,
    partition: &[usize],
) -> (TruncatedFreeModule, Vec<Vector>) {
    let d: usize = partition.iter().sum();
    let module = TruncatedFreeModule::new(field, 1, d);
    let inside = |m: &Monomial| m.y < partition.len() && m.x < partition[m.y];
    let gens = module
        .monomials()
        .iter()
        .filter(|m| !inside(m))
        .map(|m| module.monomial_vector(m).expect("listed monomial"))
        .filter(|v| !is_zero_vec(v))
        .collect();
    (module, gens)
}
