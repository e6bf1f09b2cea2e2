//! Word-size arithmetic on `F_q^d` for enumeration. Vectors are encoded as
//! integers `sum_k x_k q^k`; submodules are bitsets over those codes.

use std::collections::HashMap;

use crate::linalg::{FieldSpec, Matrix};

/// Largest `q^d` handled by the lookup tables.
pub const MAX_SPACE: usize = 1 << 12;

pub struct Space {
    pub q: u32,
    pub d: usize,
    pub size: usize,
    add: Vec<u32>,
    scale: Vec<u32>,
    digits: Vec<u32>,
}

impl Space {
    pub fn new(q: u32, d: usize) -> Self {
        let size = (q as usize).pow(d as u32);
        assert!(
            size <= MAX_SPACE,
            "F_{q}^{d} is too large for lookup tables"
        );
        let mut digits = vec![0u32; size * d];
        for v in 0..size {
            let mut x = v;
            for k in 0..d {
                digits[v * d + k] = (x % q as usize) as u32;
                x /= q as usize;
            }
        }
        let encode = |xs: &mut dyn Iterator<Item = u32>| -> u32 {
            let mut code = 0u32;
            let mut place = 1u32;
            for x in xs {
                code += x * place;
                place *= q;
            }
            code
        };
        let mut add = vec![0u32; size * size];
        for a in 0..size {
            for b in 0..size {
                add[a * size + b] =
                    encode(&mut (0..d).map(|k| (digits[a * d + k] + digits[b * d + k]) % q));
            }
        }
        let mut scale = vec![0u32; q as usize * size];
        for c in 0..q {
            for a in 0..size {
                scale[c as usize * size + a] =
                    encode(&mut (0..d).map(|k| c * digits[a * d + k] % q));
            }
        }
        Space {
            q,
            d,
            size,
            add,
            scale,
            digits,
        }
    }

    pub fn digits(&self, v: u32) -> &[u32] {
        &self.digits[v as usize * self.d..(v as usize + 1) * self.d]
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[a as usize * self.size + b as usize]
    }

    pub fn scale(&self, c: u32, a: u32) -> u32 {
        self.scale[c as usize * self.size + a as usize]
    }

    fn encode(&self, xs: &[u32]) -> u32 {
        xs.iter().rev().fold(0, |acc, &x| acc * self.q + x)
    }

    /// Image of every encoded vector under `m`.
    pub fn table(&self, m: &SmallMat) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.size);
        let mut buf = vec![0u32; self.d];
        for v in 0..self.size as u32 {
            let x = self.digits(v);
            for (i, slot) in buf.iter_mut().enumerate() {
                *slot = (0..self.d).map(|k| m.get(i, k) * x[k]).sum::<u32>() % self.q;
            }
            out.push(self.encode(&buf));
        }
        out
    }
}

/// Square matrix with entries in `[0, q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SmallMat {
    pub d: usize,
    pub entries: Vec<u32>,
}

impl SmallMat {
    pub fn zero(d: usize) -> Self {
        SmallMat {
            d,
            entries: vec![0; d * d],
        }
    }

    /// The matrix numbered `code` in base-`q` row-major order.
    pub fn from_code(d: usize, q: u32, mut code: u64) -> Self {
        let mut entries = vec![0u32; d * d];
        for e in entries.iter_mut() {
            *e = (code % q as u64) as u32;
            code /= q as u64;
        }
        SmallMat { d, entries }
    }

    pub fn from_matrix(m: &Matrix) -> Self {
        SmallMat {
            d: m.rows(),
            entries: m
                .entries()
                .iter()
                .map(|x| x.residue().expect("prime field entry") as u32)
                .collect(),
        }
    }

    pub fn to_matrix(&self, q: u32) -> Matrix {
        let f = FieldSpec::Prime(q as u64);
        Matrix::from_fn(f, self.d, self.d, |i, j| f.from_i64(self.get(i, j) as i64))
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.d + j]
    }

    pub fn mul(&self, other: &SmallMat, q: u32) -> SmallMat {
        let d = self.d;
        let mut entries = vec![0u32; d * d];
        for i in 0..d {
            for j in 0..d {
                entries[i * d + j] = (0..d)
                    .map(|k| self.get(i, k) * other.get(k, j))
                    .sum::<u32>()
                    % q;
            }
        }
        SmallMat { d, entries }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    pub fn is_nilpotent(&self, q: u32) -> bool {
        let mut p = self.clone();
        let mut k = 1;
        while k < self.d {
            if p.is_zero() {
                return true;
            }
            p = p.mul(&p, q);
            k *= 2;
        }
        p.is_zero()
    }

    pub fn commutes_with(&self, other: &SmallMat, q: u32) -> bool {
        self.mul(other, q) == other.mul(self, q)
    }

    /// `sum_k coeffs[k] * basis[k]`.
    pub fn combination(basis: &[SmallMat], coeffs: &[u32], q: u32) -> SmallMat {
        let d = basis.first().map_or(0, |b| b.d);
        let mut entries = vec![0u32; d * d];
        for (b, &c) in basis.iter().zip(coeffs) {
            if c == 0 {
                continue;
            }
            for (e, &x) in entries.iter_mut().zip(&b.entries) {
                *e = (*e + c * x) % q;
            }
        }
        SmallMat { d, entries }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mask(Vec<u64>);

impl Mask {
    fn empty(size: usize) -> Self {
        Mask(vec![0; size.div_ceil(64)])
    }

    fn has(&self, v: u32) -> bool {
        self.0[v as usize / 64] >> (v % 64) & 1 == 1
    }

    fn set(&mut self, v: u32) {
        self.0[v as usize / 64] |= 1 << (v % 64);
    }

    fn contains(&self, other: &Mask) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| b & !a == 0)
    }

    fn members(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &bits)| {
            (0..64)
                .filter(move |b| bits >> b & 1 == 1)
                .map(move |b| (w * 64 + b) as u32)
        })
    }
}

/// Subspace stored as members and bitset.
struct Span {
    members: Vec<u32>,
    mask: Mask,
}

impl Span {
    fn zero(space: &Space) -> Self {
        let mut mask = Mask::empty(space.size);
        mask.set(0);
        Span {
            members: vec![0],
            mask,
        }
    }

    /// Adds `u`; returns false if already inside.
    fn insert(&mut self, space: &Space, u: u32) -> bool {
        if self.mask.has(u) {
            return false;
        }
        let old = self.members.len();
        for c in 1..space.q {
            let cu = space.scale(c, u);
            for i in 0..old {
                let s = space.add(self.members[i], cu);
                self.mask.set(s);
                self.members.push(s);
            }
        }
        true
    }
}

/// Counts, for one commuting nilpotent pair, the `r`-tuples generating
/// `F_q^d` and those whose first vector alone is cyclic.
pub struct PairCounter<'a> {
    space: &'a Space,
    t1: Vec<u32>,
    t2: Vec<u32>,
}

impl<'a> PairCounter<'a> {
    pub fn new(space: &'a Space, b1: &SmallMat, b2: &SmallMat) -> Self {
        PairCounter {
            space,
            t1: space.table(b1),
            t2: space.table(b2),
        }
    }

    /// Submodule generated by a single vector.
    fn cyclic(&self, v: u32) -> Mask {
        let mut span = Span::zero(self.space);
        let mut queue = vec![v];
        span.insert(self.space, v);
        while let Some(u) = queue.pop() {
            for w in [self.t1[u as usize], self.t2[u as usize]] {
                if span.insert(self.space, w) {
                    queue.push(w);
                }
            }
        }
        span.mask
    }

    fn sum(&self, a: &Mask, b: &Mask) -> Mask {
        if a.contains(b) {
            return a.clone();
        }
        if b.contains(a) {
            return b.clone();
        }
        let mut span = Span {
            members: a.members().collect(),
            mask: a.clone(),
        };
        for u in b.members() {
            span.insert(self.space, u);
        }
        span.mask
    }

    /// `(stable, w_slice)` counts of `r`-tuples.
    pub fn count(&self, r: usize) -> (u128, u128) {
        let mut hist: HashMap<Mask, u128> = HashMap::new();
        for v in 0..self.space.size as u32 {
            *hist.entry(self.cyclic(v)).or_default() += 1;
        }
        let mut full = Mask::empty(self.space.size);
        for v in 0..self.space.size as u32 {
            full.set(v);
        }
        let cyclic_count = hist.get(&full).copied().unwrap_or(0);

        let mut state: HashMap<Mask, u128> = HashMap::from([(Span::zero(self.space).mask, 1)]);
        let mut sums: HashMap<(Mask, Mask), Mask> = HashMap::new();
        for _ in 0..r {
            let mut next: HashMap<Mask, u128> = HashMap::new();
            for (m, &count) in &state {
                for (s, &h) in &hist {
                    let key = (m.clone(), s.clone());
                    let total = match sums.get(&key) {
                        Some(t) => t.clone(),
                        None => {
                            let t = self.sum(m, s);
                            sums.insert(key, t.clone());
                            t
                        }
                    };
                    *next.entry(total).or_default() += count * h;
                }
            }
            state = next;
        }
        let stable = state.get(&full).copied().unwrap_or(0);
        let rest = (self.space.size as u128).pow(r.saturating_sub(1) as u32);
        (stable, cyclic_count * rest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn space_tables() {
        let s = Space::new(3, 2);
        assert_eq!(s.size, 9);
        // (1,2) + (2,2) = (0,1)
        let a = 1 + 2 * 3;
        let b = 2 + 2 * 3;
        assert_eq!(s.add(a, b), 3);
        assert_eq!(s.scale(2, a), 2 + 3);
    }

    #[test]
    fn shift_pair_counts() {
        // B1 = shift e1 -> e2 over GF(2): cyclic vectors are those with x_1 = 1
        let s = Space::new(2, 2);
        let b1 = SmallMat {
            d: 2,
            entries: vec![0, 0, 1, 0],
        };
        let counter = PairCounter::new(&s, &b1, &SmallMat::zero(2));
        assert_eq!(counter.count(1), (2, 2));
        // r = 2: 16 tuples minus those inside span{e2} (4) and those with both
        // vectors non-cyclic but spanning: v1, v2 in {0, e2} only, so 12 stable
        assert_eq!(counter.count(2), (12, 8));
    }

    #[test]
    fn nilpotency_of_small_matrices() {
        let q = 3;
        for code in 0..3u64.pow(4) {
            let m = SmallMat::from_code(2, q, code);
            assert_eq!(m.is_nilpotent(q), m.to_matrix(q).is_nilpotent().unwrap());
        }
    }
}
