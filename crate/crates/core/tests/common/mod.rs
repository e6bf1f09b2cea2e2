#![allow(dead_code)]

use quotforge::adhm::QuotDatum;
use quotforge::census::SmallMat;
use quotforge::linalg::{FieldSpec, Matrix, Vector};

/// Every `d x d` matrix over GF(p).
pub fn all_matrices(p: u64, d: usize) -> impl Iterator<Item = Matrix> {
    let total = p.pow((d * d) as u32);
    (0..total).map(move |code| SmallMat::from_code(d, p as u32, code).to_matrix(p as u32))
}

/// Every vector of length `d` over GF(p).
pub fn all_vectors(p: u64, d: usize) -> Vec<Vector> {
    let field = FieldSpec::Prime(p);
    (0..p.pow(d as u32))
        .map(|mut code| {
            (0..d)
                .map(|_| {
                    let x = field.from_i64((code % p) as i64);
                    code /= p;
                    x
                })
                .collect()
        })
        .collect()
}

/// Every commuting pair of nilpotent `d x d` matrices over GF(p).
pub fn commuting_nilpotent_pairs(p: u64, d: usize) -> Vec<(Matrix, Matrix)> {
    let nilpotent: Vec<Matrix> = all_matrices(p, d)
        .filter(|m| m.is_nilpotent().unwrap())
        .collect();
    let mut out = Vec::new();
    for a in &nilpotent {
        for b in &nilpotent {
            if a.commutes_with(b) {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

/// Every datum over GF(p) with the given size and number of vectors.
pub fn all_data(p: u64, d: usize, r: usize) -> Vec<QuotDatum> {
    let vectors = all_vectors(p, d);
    let mut out = Vec::new();
    for (b1, b2) in commuting_nilpotent_pairs(p, d) {
        let mut tuple = vec![0usize; r];
        loop {
            let vs = tuple.iter().map(|&i| vectors[i].clone()).collect();
            out.push(QuotDatum::new(b1.clone(), b2.clone(), vs).unwrap());
            let mut k = 0;
            while k < r {
                tuple[k] += 1;
                if tuple[k] < vectors.len() {
                    break;
                }
                tuple[k] = 0;
                k += 1;
            }
            if k == r {
                break;
            }
        }
    }
    out
}

/// All invertible `d x d` matrices over GF(p).
pub fn general_linear(p: u64, d: usize) -> Vec<Matrix> {
    all_matrices(p, d).filter(|m| m.is_invertible()).collect()
}
