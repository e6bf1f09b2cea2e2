//! Random instances for property tests and the acceptance suite.
//!
//! Stable data come from two families: polynomial pairs (a conjugated
//! strictly lower triangular `B1` with `B2` a random polynomial in `B1`
//! without constant term), and direct sums of monomial staircase quotients,
//! whose operators are in general not polynomial in each other. Both are
//! conjugated by a random invertible matrix at the end.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::adhm::{is_stable, QuotDatum};
use crate::census::partitions;
use crate::linalg::{vec_add, vec_scale, FieldSpec, Matrix, Vector};
use crate::modbridge::{quotient_datum, staircase_generators, submodule_closure};

fn small(field: FieldSpec, rng: &mut impl Rng, lo: i64, hi: i64) -> crate::linalg::Scalar {
    field.from_i64(rng.gen_range(lo..=hi))
}

fn nonzero(field: FieldSpec, rng: &mut impl Rng) -> crate::linalg::Scalar {
    loop {
        let x = small(field, rng, -3, 3);
        if !x.is_zero() {
            return x;
        }
    }
}

/// Product of random elementary matrices with small entries.
pub fn random_invertible(field: FieldSpec, d: usize, rng: &mut impl Rng) -> Matrix {
    let mut g = Matrix::identity(field, d);
    if d == 0 {
        return g;
    }
    for _ in 0..3 * d {
        let (i, j) = (rng.gen_range(0..d), rng.gen_range(0..d));
        let mut e = Matrix::identity(field, d);
        if i == j {
            e.set(i, i, nonzero(field, rng));
        } else {
            e.set(i, j, small(field, rng, -2, 2));
        }
        g = g.mul(&e);
    }
    g
}

pub fn random_vector(field: FieldSpec, d: usize, rng: &mut impl Rng) -> Vector {
    (0..d).map(|_| small(field, rng, -3, 3)).collect()
}

/// `g N g^-1` with `N` strictly lower triangular, and a random polynomial in
/// it with zero constant term.
pub fn polynomial_pair(field: FieldSpec, d: usize, rng: &mut impl Rng) -> (Matrix, Matrix) {
    let n = Matrix::from_fn(field, d, d, |i, j| {
        if i > j {
            small(field, rng, -2, 2)
        } else {
            field.zero()
        }
    });
    let g = random_invertible(field, d, rng);
    let b1 = g
        .mul(&n)
        .mul(&g.inverse().expect("invertible by construction"));
    let mut b2 = Matrix::zeros(field, d, d);
    let mut power = b1.clone();
    for _ in 1..d.max(2) {
        b2 = b2.add(&power.scale(&small(field, rng, -3, 3)));
        power = power.mul(&b1);
    }
    (b1, b2)
}

/// Commuting nilpotent pairs that are not polynomial in one another.
pub fn handcrafted_pairs(field: FieldSpec) -> Vec<(Matrix, Matrix)> {
    let m = |rows: &[&[i64]]| Matrix::from_i64(field, rows);
    vec![
        // B1 = E21, B2 = E31 (also the staircase (2, 1))
        (
            m(&[&[0, 0, 0], &[1, 0, 0], &[0, 0, 0]]),
            m(&[&[0, 0, 0], &[0, 0, 0], &[1, 0, 0]]),
        ),
        // both operators zero
        (Matrix::zeros(field, 3, 3), Matrix::zeros(field, 3, 3)),
        // B1 = 0, B2 a single 2-block
        (Matrix::zeros(field, 2, 2), m(&[&[0, 1], &[0, 0]])),
        // staircase (2, 2) on {1, x, y, xy}
        (
            m(&[&[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 1, 0]]),
            m(&[&[0, 0, 0, 0], &[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 1, 0, 0]]),
        ),
        // B2 maps the top of a 3-block onto a separate 1-block
        (
            m(&[&[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 0, 0]]),
            m(&[&[0, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 1], &[1, 0, 0, 0]]),
        ),
    ]
}

/// Multiplication by `x` and `y` on `F[x, y] / I` for the staircase ideal of
/// `partition`, with `v = 1`.
pub fn staircase_datum(field: FieldSpec, partition: &[usize]) -> QuotDatum {
    let (module, gens) = staircase_generators(field, partition);
    let pres = submodule_closure(&gens, &module).expect("generators live in the module");
    quotient_datum(&pres).expect("staircase quotients have colength d")
}

fn block_diagonal(field: FieldSpec, blocks: &[&Matrix]) -> Matrix {
    let d: usize = blocks.iter().map(|b| b.rows()).sum();
    let mut out = Matrix::zeros(field, d, d);
    let mut offset = 0;
    for b in blocks {
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                out.set(offset + i, offset + j, b.get(i, j).clone());
            }
        }
        offset += b.rows();
    }
    out
}

fn embed(v: &[crate::linalg::Scalar], offset: usize, d: usize, field: FieldSpec) -> Vector {
    let mut out = vec![field.zero(); d];
    out[offset..offset + v.len()].clone_from_slice(v);
    out
}

/// Direct sum of staircase quotients, one per leading generator, with
/// `parts <= r` summands.
fn staircase_sum(field: FieldSpec, d: usize, r: usize, rng: &mut impl Rng) -> QuotDatum {
    let parts = rng.gen_range(1..=r.min(d));
    // split d into `parts` positive sizes
    let mut cuts: Vec<usize> = (1..d).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(parts - 1).collect();
    cuts.sort_unstable();
    let mut sizes = Vec::with_capacity(parts);
    let mut prev = 0;
    for c in cuts.into_iter().chain(std::iter::once(d)) {
        sizes.push(c - prev);
        prev = c;
    }
    let summands: Vec<QuotDatum> = sizes
        .iter()
        .map(|&n| {
            let shapes = partitions(n);
            staircase_datum(field, shapes.choose(rng).expect("n >= 1 has partitions"))
        })
        .collect();
    let b1 = block_diagonal(field, &summands.iter().map(|s| s.b1()).collect::<Vec<_>>());
    let b2 = block_diagonal(field, &summands.iter().map(|s| s.b2()).collect::<Vec<_>>());
    let mut vectors = Vec::with_capacity(r);
    let mut offset = 0;
    for s in &summands {
        vectors.push(embed(&s.vectors()[0], offset, d, field));
        offset += s.d();
    }
    while vectors.len() < r {
        vectors.push(random_vector(field, d, rng));
    }
    QuotDatum::new(b1, b2, vectors).expect("direct sum of valid data")
}

/// A random stable datum of size `d` with `r` vectors.
///
/// The generating tuple is mixed by a random unitriangular change of
/// generators and everything is conjugated by a random invertible matrix.
pub fn random_stable_datum(field: FieldSpec, d: usize, r: usize, rng: &mut impl Rng) -> QuotDatum {
    assert!(d >= 1 && r >= 1);
    loop {
        let base = if rng.gen_bool(0.5) {
            staircase_sum(field, d, r, rng)
        } else {
            let (b1, b2) = polynomial_pair(field, d, rng);
            let vectors = (0..r).map(|_| random_vector(field, d, rng)).collect();
            QuotDatum::new(b1, b2, vectors).expect("polynomial pairs commute")
        };
        let mut vectors = base.vectors().to_vec();
        vectors.shuffle(rng);
        for j in 1..r {
            for k in 0..j {
                let c = small(field, rng, -1, 1);
                vectors[j] = vec_add(&vectors[j], &vec_scale(&c, &vectors[k]));
            }
        }
        let mixed = base.with_vectors(vectors).expect("same shapes");
        let g = random_invertible(field, d, rng);
        let datum = mixed.act(&g).expect("invertible");
        if is_stable(&datum) {
            return datum;
        }
    }
}
