//! The companion operator `B2'` with cyclic vector `w`, and the straight
//! line from a stable datum to `(B1, B2', w, v2, ..., vr)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::adhm::{closure, in_w_slice, is_stable, QuotDatum};
use crate::error::{Error, Result};
use crate::jordan::{compatible_jordan_frame, JordanFrame};
use crate::linalg::{vec_add, vec_scale, FieldSpec, Matrix, Scalar, Vector};

/// Default number of random `(alpha, beta)` draws in [`verify_lemma_2_3`].
pub const DEFAULT_PENCIL_SAMPLES: usize = 32;
/// Seed for the pencil draws; reports are reproducible.
pub const PENCIL_SEED: u64 = 0x5eed_2023;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompanionPair {
    pub b2prime: Matrix,
    pub w: Vector,
    pub frame: JordanFrame,
}

/// Builds `B2'` and `w = e_{1,1}` from a compatible frame of `(b1, b2)`.
///
/// Before returning, checks that `B2'` is nilpotent and commutes with `b1`,
/// that `e_{i,j} = B1^(j-1) B2'^(i-1) w`, and that `w` is cyclic for
/// `(b1, B2')`.
pub fn companion_pair(b1: &Matrix, b2: &Matrix) -> Result<CompanionPair> {
    if b1.rows() == 0 {
        return Err(Error::Shape("companion operator needs d >= 1".into()));
    }
    let frame = compatible_jordan_frame(b1, b2)?;
    let b2prime = frame
        .companion_matrix()
        .ok_or_else(|| Error::Internal("frame is not a basis".into()))?;
    let w = frame.vector(0, 0).clone();

    if !b1.commutes_with(&b2prime) {
        return Err(Error::Internal("B2' does not commute with B1".into()));
    }
    if !b2prime.is_nilpotent()? {
        return Err(Error::Internal("B2' is not nilpotent".into()));
    }
    let mut head = w.clone();
    for (i, chain) in frame.chains().iter().enumerate() {
        let mut v = head.clone();
        for (j, e) in chain.iter().enumerate() {
            if &v != e {
                return Err(Error::Internal(format!(
                    "e_({},{}) differs from B1^{} B2'^{} w",
                    i + 1,
                    j + 1,
                    j,
                    i
                )));
            }
            v = b1.mul_vec(&v);
        }
        head = b2prime.mul_vec(&head);
    }
    if !closure(b1, &b2prime, std::slice::from_ref(&w)).stable {
        return Err(Error::Internal("w is not cyclic for (B1, B2')".into()));
    }
    Ok(CompanionPair { b2prime, w, frame })
}

/// `Phi(t) = (B1, t B2' + (1 - t) B2, t w + (1 - t) v1, v2, ..., vr)`.
#[derive(Clone, Debug)]
pub struct DeformationPath {
    origin: QuotDatum,
    companion: CompanionPair,
}

impl DeformationPath {
    pub fn new(origin: &QuotDatum) -> Result<Self> {
        let companion = companion_pair(origin.b1(), origin.b2())?;
        Ok(DeformationPath {
            origin: origin.clone(),
            companion,
        })
    }

    pub fn origin(&self) -> &QuotDatum {
        &self.origin
    }

    pub fn companion(&self) -> &CompanionPair {
        &self.companion
    }

    /// `(B1, B2', w, v2, ..., vr)`, the value at `t = 1`.
    pub fn companion_datum(&self) -> Result<QuotDatum> {
        let mut vectors = self.origin.vectors().to_vec();
        vectors[0] = self.companion.w.clone();
        QuotDatum::new(
            self.origin.b1().clone(),
            self.companion.b2prime.clone(),
            vectors,
        )
    }

    /// Evaluates the line at `t`. The pencil `t B2' + (1 - t) B2` is strictly
    /// lower triangular in the frame basis, so every value is a valid datum.
    pub fn point(&self, t: &Scalar) -> Result<QuotDatum> {
        let field = self.origin.field();
        if t.field() != field {
            return Err(Error::mismatch(field, t.field()));
        }
        let s = &field.one() - t;
        let b2t = self
            .companion
            .b2prime
            .scale(t)
            .add(&self.origin.b2().scale(&s));
        let mut vectors = self.origin.vectors().to_vec();
        vectors[0] = vec_add(
            &vec_scale(t, &self.companion.w),
            &vec_scale(&s, &self.origin.vectors()[0]),
        );
        QuotDatum::new(self.origin.b1().clone(), b2t, vectors)
            .map_err(|e| Error::Internal(format!("path point at t = {t} is invalid: {e}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SampleClass {
    /// First vector cyclic.
    #[serde(rename = "W")]
    WSlice,
    /// Stable, first vector not cyclic.
    #[serde(rename = "Ur")]
    Stable,
    #[serde(rename = "out")]
    Unstable,
}

pub fn classify(datum: &QuotDatum) -> SampleClass {
    if in_w_slice(datum) {
        SampleClass::WSlice
    } else if is_stable(datum) {
        SampleClass::Stable
    } else {
        SampleClass::Unstable
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathSample {
    pub t: Scalar,
    pub class: SampleClass,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectCertificate {
    pub witness_t: Scalar,
    pub samples: Vec<PathSample>,
    /// Samples outside `U_1 x V^(r-1)`.
    pub failures: usize,
    pub bound: usize,
}

/// Walks the line from a stable rational datum towards its companion point
/// and certifies a parameter at which the first vector is cyclic.
///
/// Samples `t = 0, 1, ..., d^2 + d + 2`. A nonzero Krylov minor at `t = 1`
/// has degree at most `d^2 + d` in `t`, so at most that many samples can fail.
pub fn connect_to_w(datum: &QuotDatum) -> Result<ConnectCertificate> {
    let field = datum.field();
    if field != FieldSpec::Rational {
        return Err(Error::Unsupported(format!(
            "connect_to_w needs characteristic zero, got {field}"
        )));
    }
    if !is_stable(datum) {
        return Err(Error::Unstable("connect_to_w needs a stable datum".into()));
    }
    let d = datum.d();
    let bound = d * d + d;
    let path = DeformationPath::new(datum)?;
    let samples: Vec<PathSample> = (0..=(bound as i64 + 2))
        .into_par_iter()
        .map(|k| {
            let t = field.from_i64(k);
            path.point(&t).map(|p| PathSample {
                class: classify(&p),
                t,
            })
        })
        .collect::<Result<_>>()?;
    let failures = samples
        .iter()
        .filter(|s| s.class != SampleClass::WSlice)
        .count();
    if failures > bound {
        return Err(Error::Internal(format!(
            "{failures} samples outside the W-slice exceed the bound {bound}"
        )));
    }
    let witness_t = samples
        .iter()
        .find(|s| s.class == SampleClass::WSlice)
        .map(|s| s.t.clone())
        .ok_or_else(|| Error::Internal("companion endpoint is not in the W-slice".into()))?;
    Ok(ConnectCertificate {
        witness_t,
        samples,
        failures,
        bound,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Lemma23Report {
    pub mu: Vec<usize>,
    /// `B2'` commutes with `B1` and is nilpotent.
    pub commutes: bool,
    /// `B2` and `B2'` are simultaneously strictly lower triangular.
    pub pencil_structural: bool,
    pub pencil_samples: usize,
    pub pencil_sample_failures: usize,
    /// `w` is cyclic for `(B1, B2')`.
    pub cyclic: bool,
    pub failures: Vec<String>,
}

impl Lemma23Report {
    pub fn all_pass(&self) -> bool {
        self.commutes
            && self.pencil_structural
            && self.pencil_sample_failures == 0
            && self.cyclic
            && self.failures.is_empty()
    }
}

/// Re-checks the three conclusions for `(b1, b2)`: `B2'` commutes with `B1`;
/// every `alpha B2 + beta B2'` is nilpotent (structurally via simultaneous
/// triangularity, and on `samples` random draws); `w` is cyclic.
///
/// Invalid pairs are errors; any failed conclusion is reported, not raised.
pub fn verify_lemma_2_3(b1: &Matrix, b2: &Matrix, samples: usize) -> Result<Lemma23Report> {
    let mut report = Lemma23Report {
        pencil_samples: samples,
        ..Default::default()
    };
    let frame = match compatible_jordan_frame(b1, b2) {
        Ok(f) => f,
        Err(Error::Internal(msg)) => {
            report.failures.push(msg);
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    report.mu = frame.mu().to_vec();
    let Some(b2prime) = frame.companion_matrix() else {
        report.failures.push("frame is not a basis".into());
        return Ok(report);
    };
    let w = frame.vector(0, 0).clone();

    report.commutes = b1.commutes_with(&b2prime) && b2prime.is_nilpotent()?;
    if !report.commutes {
        report
            .failures
            .push("(i) B2' fails to commute with B1 or is not nilpotent".into());
    }

    let p = frame.change_of_basis();
    report.pencil_structural = [b2, &b2prime].iter().all(|m| {
        m.in_basis(&p)
            .is_some_and(|x| x.is_strictly_lower_triangular())
    });
    if !report.pencil_structural {
        report
            .failures
            .push("(ii) B2 and B2' are not simultaneously strictly lower triangular".into());
    }

    let field = b1.field();
    let mut rng = ChaCha8Rng::seed_from_u64(PENCIL_SEED);
    for _ in 0..samples {
        let alpha = field.from_i64(rng.gen_range(-9..=9));
        let beta = field.from_i64(rng.gen_range(-9..=9));
        let pencil = b2.scale(&alpha).add(&b2prime.scale(&beta));
        if !pencil.is_nilpotent()? {
            report.pencil_sample_failures += 1;
            report
                .failures
                .push(format!("(ii) {alpha} B2 + {beta} B2' is not nilpotent"));
        }
    }

    report.cyclic = closure(b1, &b2prime, std::slice::from_ref(&w)).stable;
    if !report.cyclic {
        report
            .failures
            .push("(iii) w is not cyclic for (B1, B2')".into());
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unit_vector;

    const Q: FieldSpec = FieldSpec::Rational;

    fn e(d: usize, i: usize) -> Vector {
        unit_vector(Q, d, i)
    }

    fn block3() -> Matrix {
        Matrix::from_i64(Q, &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]])
    }

    #[test]
    fn companion_of_zero_pair() {
        let z = Matrix::zeros(Q, 2, 2);
        let pair = companion_pair(&z, &z).unwrap();
        assert_eq!(pair.frame.mu(), &[1, 1]);
        // e1 -> e2 -> 0
        assert_eq!(pair.b2prime, Matrix::from_i64(Q, &[&[0, 0], &[1, 0]]));
        assert_eq!(pair.w, e(2, 0));
    }

    #[test]
    fn companion_of_single_block() {
        let b1 = block3();
        let pair = companion_pair(&b1, &b1.mul(&b1)).unwrap();
        assert_eq!(pair.frame.mu(), &[3]);
        assert!(pair.b2prime.is_zero());
        assert_eq!(pair.w, e(3, 0));
    }

    #[test]
    fn companion_in_dimension_one() {
        let z = Matrix::zeros(Q, 1, 1);
        let pair = companion_pair(&z, &z).unwrap();
        assert!(pair.b2prime.is_zero());
        assert_eq!(pair.w, vec![Q.one()]);
    }

    #[test]
    fn path_endpoints_and_midpoint() {
        let z = Matrix::zeros(Q, 2, 2);
        let origin = QuotDatum::new(z.clone(), z.clone(), vec![e(2, 1), e(2, 0)]).unwrap();
        let path = DeformationPath::new(&origin).unwrap();
        assert_eq!(path.point(&Q.zero()).unwrap(), origin);
        assert_eq!(
            path.point(&Q.one()).unwrap(),
            path.companion_datum().unwrap()
        );

        let half = Q.from_ratio(1, 2).unwrap();
        let mid = path.point(&half).unwrap();
        let b2prime = Matrix::from_i64(Q, &[&[0, 0], &[1, 0]]);
        assert_eq!(mid.b2(), &b2prime.scale(&half));
        assert_eq!(mid.vectors()[0], vec![half.clone(), half.clone()]);
        assert_eq!(mid.vectors()[1], e(2, 0));
        assert!(is_stable(&mid));
        // (e1 + e2)/2 is cyclic for (0, B2'/2): its image is e2/4
        assert!(in_w_slice(&mid));
    }

    #[test]
    fn path_rejects_foreign_parameter() {
        let z = Matrix::zeros(Q, 1, 1);
        let origin = QuotDatum::new(z.clone(), z, vec![vec![Q.one()]]).unwrap();
        let path = DeformationPath::new(&origin).unwrap();
        assert!(matches!(
            path.point(&FieldSpec::Prime(3).one()),
            Err(Error::FieldMismatch { .. })
        ));
    }

    #[test]
    fn connect_examples() {
        let shift = Matrix::from_i64(Q, &[&[0, 0], &[1, 0]]);
        let z = Matrix::zeros(Q, 2, 2);
        let in_w = QuotDatum::new(shift, z.clone(), vec![e(2, 0), e(2, 1)]).unwrap();
        let cert = connect_to_w(&in_w).unwrap();
        assert!(cert.witness_t.is_zero());

        let zero_pair = QuotDatum::new(z.clone(), z.clone(), vec![e(2, 1), e(2, 0)]).unwrap();
        let cert = connect_to_w(&zero_pair).unwrap();
        assert_eq!(cert.samples[0].class, SampleClass::Stable);
        assert_eq!(cert.samples[1].class, SampleClass::WSlice);
        assert!(cert.witness_t.is_one());
        assert_eq!(cert.bound, 6);
        assert_eq!(cert.samples.len(), 9);
        assert!(cert.failures <= cert.bound);

        let one = Matrix::zeros(Q, 1, 1);
        let line = QuotDatum::new(one.clone(), one, vec![vec![Q.from_i64(5)]]).unwrap();
        let cert = connect_to_w(&line).unwrap();
        assert_eq!(cert.failures, 0);
        assert!(cert.samples.iter().all(|s| s.class == SampleClass::WSlice));
    }

    #[test]
    fn connect_refusals() {
        let z = Matrix::zeros(Q, 2, 2);
        let unstable = QuotDatum::new(z.clone(), z, vec![e(2, 0)]).unwrap();
        assert!(matches!(connect_to_w(&unstable), Err(Error::Unstable(_))));
        let f2 = FieldSpec::Prime(2);
        let z2 = Matrix::zeros(f2, 1, 1);
        let d2 = QuotDatum::new(z2.clone(), z2, vec![vec![f2.one()]]).unwrap();
        assert!(matches!(connect_to_w(&d2), Err(Error::Unsupported(_))));
    }

    #[test]
    fn lemma_examples() {
        for d in 1..=4 {
            let z = Matrix::zeros(Q, d, d);
            assert!(verify_lemma_2_3(&z, &z, DEFAULT_PENCIL_SAMPLES)
                .unwrap()
                .all_pass());
        }
        let b1 = block3();
        let report = verify_lemma_2_3(&b1, &b1.mul(&b1), DEFAULT_PENCIL_SAMPLES).unwrap();
        assert!(report.all_pass(), "{:?}", report.failures);
        assert_eq!(report.mu, vec![3]);
    }

    #[test]
    fn companion_type_is_idempotent() {
        let e21 = Matrix::from_i64(Q, &[&[0, 0, 0], &[1, 0, 0], &[0, 0, 0]]);
        let e31 = Matrix::from_i64(Q, &[&[0, 0, 0], &[0, 0, 0], &[1, 0, 0]]);
        let first = companion_pair(&e21, &e31).unwrap();
        let second = companion_pair(&e21, &first.b2prime).unwrap();
        assert_eq!(first.frame.mu(), second.frame.mu());
    }
}
