//! Exhaustive point counts over prime fields.
//!
//! The outer loop runs over nilpotent `B1` (every matrix, or one Jordan form
//! per conjugacy class weighted by the class size); the inner loop runs over
//! the commutant of `B1`, filtered by nilpotency, and then over marked-vector
//! tuples. Dividing the stable count by `|GL_d(F_q)|` counts `F_q`-points of
//! the punctual Quot scheme, since `GL_d` acts freely on stable tuples.

mod classes;
mod small;

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Serialize, Serializer};

pub use classes::{centralizer_order, class_size, commutant_dim, conjugate, gl_order, partitions};
pub use small::SmallMat;

use crate::adhm::{in_w_slice, is_stable, QuotDatum};
use crate::error::{Error, Result};
use crate::linalg::{AffineSolution, AffineSystem, FieldSpec, Matrix, Vector};
use small::{PairCounter, Space, MAX_SPACE};

/// Default refusal threshold for the estimated number of inner-loop steps.
pub const DEFAULT_BUDGET: u128 = 1_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CensusOptions {
    /// Enumerate one `B1` per Jordan type and weight by class size.
    pub factorized: bool,
    pub jobs: usize,
    pub budget: u128,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            factorized: false,
            jobs: 1,
            budget: DEFAULT_BUDGET,
        }
    }
}

fn as_string<S: Serializer>(x: &u128, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldTag {
    pub kind: &'static str,
    pub p: u64,
}

/// Counts for one `(d, r, q)`. All counts serialize as decimal strings.
#[derive(Clone, Debug, Serialize)]
pub struct CensusReport {
    pub field: FieldTag,
    pub d: usize,
    pub r: usize,
    pub factorized: bool,
    #[serde(serialize_with = "as_string")]
    pub count_pairs: u128,
    #[serde(serialize_with = "as_string")]
    pub count_stable: u128,
    #[serde(serialize_with = "as_string")]
    pub count_w_slice: u128,
    #[serde(serialize_with = "as_string")]
    pub gl_order: u128,
    #[serde(serialize_with = "as_string")]
    pub quot_points: u128,
    #[serde(serialize_with = "as_string")]
    pub w_points: u128,
    /// Wall time; not serialized, so payloads are reproducible.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CensusReport {
    pub fn q(&self) -> u64 {
        self.field.p
    }
}

fn check_q(q: u64) -> Result<u32> {
    FieldSpec::prime(q)?;
    if q > 256 {
        return Err(Error::Unsupported(format!(
            "census over GF({q}) is out of range"
        )));
    }
    Ok(q as u32)
}

/// Estimated inner-loop steps: outer scan (when not factorized) plus, for
/// every enumerated `B1`, its commutant size times `q^d` table entries.
pub fn estimate_work(d: usize, q: u64, factorized: bool) -> u128 {
    let qq = q as u128;
    let pow = |e: usize| qq.checked_pow(e as u32).unwrap_or(u128::MAX);
    let outer = if factorized { 0 } else { pow(d * d) };
    partitions(d).iter().fold(outer, |acc, lambda| {
        let weight = if factorized { 1 } else { class_size(lambda, q) };
        let inner = weight
            .saturating_mul(pow(commutant_dim(lambda)))
            .saturating_mul(pow(d));
        acc.saturating_add(inner)
    })
}

/// Jordan form of type `partition`: each block shifts `e_j -> e_{j+1}`.
pub fn jordan_form(partition: &[usize], q: u32) -> SmallMat {
    let d = partition.iter().sum();
    let mut m = SmallMat::zero(d);
    let mut start = 0;
    for &part in partition {
        for j in start..start + part - 1 {
            m.entries[(j + 1) * d + j] = 1 % q;
        }
        start += part;
    }
    m
}

/// Basis of `{X : X B = B X}` over GF(q).
fn commutant_basis(b1: &SmallMat, q: u32) -> Vec<SmallMat> {
    let field = FieldSpec::Prime(q as u64);
    let b = b1.to_matrix(q);
    let d = b1.d;
    let mut sys = AffineSystem::new(field, d, d);
    sys.push_linear_equation(|x| x.mul(&b).sub(&b.mul(x)), &Matrix::zeros(field, d, d))
        .expect("shapes agree");
    match sys.solve().expect("single field") {
        AffineSolution::Solved { homogeneous, .. } => homogeneous
            .basis()
            .iter()
            .map(|v| SmallMat::from_matrix(&sys.unflatten(v)))
            .collect(),
        AffineSolution::Inconsistent => unreachable!("homogeneous system"),
    }
}

/// Nilpotent elements of the commutant of `b1`.
fn nilpotent_commutant(b1: &SmallMat, q: u32) -> Vec<SmallMat> {
    let basis = commutant_basis(b1, q);
    let mut coeffs = vec![0u32; basis.len()];
    let mut out = Vec::new();
    loop {
        let m = SmallMat::combination(&basis, &coeffs, q);
        let m = if basis.is_empty() {
            SmallMat::zero(b1.d)
        } else {
            m
        };
        if m.is_nilpotent(q) {
            out.push(m);
        }
        // odometer
        let mut k = 0;
        loop {
            if k == coeffs.len() {
                return out;
            }
            coeffs[k] += 1;
            if coeffs[k] < q {
                break;
            }
            coeffs[k] = 0;
            k += 1;
        }
    }
}

/// Outer work units: `(B1, weight)`.
fn outer_units(d: usize, q: u32, factorized: bool) -> Vec<(SmallMat, u128)> {
    if factorized {
        partitions(d)
            .into_iter()
            .map(|lambda| (jordan_form(&lambda, q), class_size(&lambda, q as u64)))
            .collect()
    } else {
        let total = (q as u64).pow((d * d) as u32);
        (0..total)
            .map(|code| SmallMat::from_code(d, q, code))
            .filter(|m| m.is_nilpotent(q))
            .map(|m| (m, 1))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Tally {
    pairs: u128,
    stable: u128,
    w_slice: u128,
}

impl std::ops::Add for Tally {
    type Output = Tally;
    fn add(self, o: Tally) -> Tally {
        Tally {
            pairs: self.pairs + o.pairs,
            stable: self.stable + o.stable,
            w_slice: self.w_slice + o.w_slice,
        }
    }
}

fn run(d: usize, r: Option<usize>, q: u64, opts: &CensusOptions) -> Result<Tally> {
    let qs = check_q(q)?;
    if d == 0 {
        return Err(Error::Unsupported("census needs d >= 1".into()));
    }
    let estimate = estimate_work(d, q, opts.factorized);
    if estimate > opts.budget {
        return Err(Error::BudgetExceeded {
            estimate,
            budget: opts.budget,
        });
    }
    let space_size = (q as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
    if r.is_some() && space_size > MAX_SPACE as u128 {
        return Err(Error::Unsupported(format!(
            "q^d = {space_size} exceeds the table limit {MAX_SPACE}"
        )));
    }
    let space = r.map(|_| Space::new(qs, d));
    let unit = |(b1, weight): &(SmallMat, u128)| -> Tally {
        let mut t = Tally::default();
        for b2 in nilpotent_commutant(b1, qs) {
            t.pairs += weight;
            if let (Some(space), Some(r)) = (&space, r) {
                let (stable, w) = PairCounter::new(space, b1, &b2).count(r);
                t.stable += weight * stable;
                t.w_slice += weight * w;
            }
        }
        t
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?;
    Ok(pool.install(|| {
        outer_units(d, qs, opts.factorized)
            .par_iter()
            .map(unit)
            .reduce(Tally::default, |a, b| a + b)
    }))
}

/// `|N_d(F_q)|`, the number of commuting pairs of nilpotent matrices.
pub fn count_commuting_nilpotent_pairs(d: usize, q: u64, opts: &CensusOptions) -> Result<u128> {
    Ok(run(d, None, q, opts)?.pairs)
}

/// Numbers of stable `r`-tuples and of those with `v1` cyclic.
pub fn count_stable_tuples(
    d: usize,
    r: usize,
    q: u64,
    opts: &CensusOptions,
) -> Result<(u128, u128)> {
    let t = run(d, Some(r), q, opts)?;
    Ok((t.stable, t.w_slice))
}

/// Full census: counts, orbit counts and their divisibility check.
pub fn quot_point_count(d: usize, r: usize, q: u64, opts: &CensusOptions) -> Result<CensusReport> {
    if r == 0 {
        return Err(Error::Unsupported("census needs r >= 1".into()));
    }
    let start = Instant::now();
    let t = run(d, Some(r), q, opts)?;
    let gl = gl_order(d, q);
    for (name, count) in [("stable", t.stable), ("W-slice", t.w_slice)] {
        if count % gl != 0 {
            return Err(Error::Internal(format!(
                "|GL_{d}(F_{q})| = {gl} does not divide the {name} count {count}"
            )));
        }
    }
    Ok(CensusReport {
        field: FieldTag {
            kind: "prime",
            p: q,
        },
        d,
        r,
        factorized: opts.factorized,
        count_pairs: t.pairs,
        count_stable: t.stable,
        count_w_slice: t.w_slice,
        gl_order: gl,
        quot_points: t.stable / gl,
        w_points: t.w_slice / gl,
        elapsed: start.elapsed(),
    })
}

/// Independent slow count: every pair of matrices is tested for commutation
/// and nilpotency, and every tuple is classified through [`is_stable`] and
/// [`in_w_slice`] on a checked datum. Returns `(pairs, stable, w_slice)`.
pub fn brute_force_counts(d: usize, r: usize, q: u64) -> Result<(u128, u128, u128)> {
    let qs = check_q(q)?;
    let field = FieldSpec::Prime(q);
    let n_mats = q.pow((d * d) as u32);
    let nilpotent: Vec<SmallMat> = (0..n_mats)
        .map(|c| SmallMat::from_code(d, qs, c))
        .filter(|m| m.is_nilpotent(qs))
        .collect();
    let vectors: Vec<Vector> = (0..q.pow(d as u32))
        .map(|mut code| {
            (0..d)
                .map(|_| {
                    let x = field.from_i64((code % q) as i64);
                    code /= q;
                    x
                })
                .collect()
        })
        .collect();
    let n_tuples = vectors.len().pow(r as u32);
    let (mut pairs, mut stable, mut w) = (0u128, 0u128, 0u128);
    for b1 in &nilpotent {
        for b2 in &nilpotent {
            if !b1.commutes_with(b2, qs) {
                continue;
            }
            pairs += 1;
            let (m1, m2) = (b1.to_matrix(qs), b2.to_matrix(qs));
            for mut code in 0..n_tuples {
                let tuple: Vec<Vector> = (0..r)
                    .map(|_| {
                        let v = vectors[code % vectors.len()].clone();
                        code /= vectors.len();
                        v
                    })
                    .collect();
                let datum = QuotDatum::new(m1.clone(), m2.clone(), tuple)?;
                if is_stable(&datum) {
                    stable += 1;
                }
                if in_w_slice(&datum) {
                    w += 1;
                }
            }
        }
    }
    Ok((pairs, stable, w))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> CensusOptions {
        CensusOptions::default()
    }

    /// Invertible matrices counted one by one.
    fn count_invertible(d: usize, q: u64) -> u128 {
        (0..q.pow((d * d) as u32))
            .filter(|&c| {
                SmallMat::from_code(d, q as u32, c)
                    .to_matrix(q as u32)
                    .is_invertible()
            })
            .count() as u128
    }

    #[test]
    fn gl_order_examples() {
        assert_eq!(gl_order(1, 3), 2);
        assert_eq!(gl_order(2, 2), 6);
        assert_eq!(gl_order(3, 2), 168);
        assert_eq!(count_invertible(2, 2), 6);
        assert_eq!(count_invertible(3, 2), 168);
        assert_eq!(count_invertible(2, 3), gl_order(2, 3));
    }

    #[test]
    fn pair_count_examples() {
        assert_eq!(count_commuting_nilpotent_pairs(1, 2, &opts()).unwrap(), 1);
        assert_eq!(count_commuting_nilpotent_pairs(1, 5, &opts()).unwrap(), 1);
        assert_eq!(count_commuting_nilpotent_pairs(2, 2, &opts()).unwrap(), 10);
        assert_eq!(count_commuting_nilpotent_pairs(2, 3, &opts()).unwrap(), 33);
        // B1 = 0 contributes q^2 nilpotent B2; each of the q^2 - 1 nonzero
        // nilpotent B1 contributes the q multiples of itself
        for q in [2u64, 3, 5, 7] {
            let expected = (q * q + (q * q - 1) * q) as u128;
            assert_eq!(
                count_commuting_nilpotent_pairs(2, q, &opts()).unwrap(),
                expected
            );
        }
    }

    #[test]
    fn stable_count_examples() {
        assert_eq!(count_stable_tuples(2, 1, 2, &opts()).unwrap(), (18, 18));
        assert_eq!(count_stable_tuples(1, 2, 2, &opts()).unwrap().0, 3);
    }

    #[test]
    fn quot_point_examples() {
        assert_eq!(quot_point_count(2, 1, 2, &opts()).unwrap().quot_points, 3);
        assert_eq!(quot_point_count(3, 1, 2, &opts()).unwrap().quot_points, 7);
        assert_eq!(quot_point_count(1, 2, 3, &opts()).unwrap().quot_points, 4);
    }

    #[test]
    fn fast_counts_match_brute_force() {
        for (d, r, q) in [
            (1, 1, 2),
            (1, 2, 3),
            (2, 1, 2),
            (2, 2, 2),
            (2, 1, 3),
            (3, 1, 2),
        ] {
            let (pairs, stable, w) = brute_force_counts(d, r, q).unwrap();
            let report = quot_point_count(d, r, q, &opts()).unwrap();
            assert_eq!(
                (
                    report.count_pairs,
                    report.count_stable,
                    report.count_w_slice
                ),
                (pairs, stable, w),
                "(d, r, q) = ({d}, {r}, {q})"
            );
        }
    }

    #[test]
    fn factorized_matches_raw() {
        for q in [2u64, 3, 5] {
            for r in 1..=2 {
                let raw = quot_point_count(2, r, q, &opts()).unwrap();
                let fact = quot_point_count(
                    2,
                    r,
                    q,
                    &CensusOptions {
                        factorized: true,
                        ..opts()
                    },
                )
                .unwrap();
                assert_eq!(
                    (raw.count_pairs, raw.count_stable, raw.count_w_slice),
                    (fact.count_pairs, fact.count_stable, fact.count_w_slice)
                );
            }
        }
    }

    #[test]
    fn jobs_do_not_change_results() {
        let one = quot_point_count(3, 1, 2, &opts()).unwrap();
        let four = quot_point_count(3, 1, 2, &CensusOptions { jobs: 4, ..opts() }).unwrap();
        assert_eq!(
            serde_json::to_string(&one).unwrap(),
            serde_json::to_string(&four).unwrap()
        );
    }

    #[test]
    fn budget_guard() {
        let tight = CensusOptions {
            budget: 10,
            ..opts()
        };
        assert!(matches!(
            quot_point_count(2, 1, 2, &tight),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(estimate_work(5, 7, false) > DEFAULT_BUDGET);
    }

    #[test]
    fn jordan_forms_have_their_type() {
        for lambda in partitions(4) {
            let m = jordan_form(&lambda, 3).to_matrix(3);
            assert_eq!(crate::jordan::jordan_type(&m).unwrap(), lambda);
            assert_eq!(
                commutant_basis(&jordan_form(&lambda, 3), 3).len(),
                commutant_dim(&lambda)
            );
        }
    }

    #[test]
    fn report_serializes_counts_as_strings() {
        let report = quot_point_count(2, 1, 2, &opts()).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["quot_points"], "3");
        assert_eq!(json["field"]["p"], 2);
        assert!(json.get("elapsed").is_none());
    }
}
