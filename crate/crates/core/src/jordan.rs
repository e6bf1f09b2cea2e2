//! Jordan bases for a nilpotent `B1` whose chain heads are adapted to a
//! commuting nilpotent `B2`.
//!
//! The frame consists of chains `e_{i,1}, e_{i,2} = B1 e_{i,1}, ...,
//! e_{i,mu_i}` with `mu_1 >= ... >= mu_k`. Besides being a Jordan basis for
//! `B1`, the heads satisfy
//!
//! ```text
//! B2 e_{i,1}  ∈  span{e_{l,1} : l > i} + B1 V
//! ```
//!
//! so that, listing the basis level by level (`e_{1,1}, ..., e_{k,1},
//! e_{1,2}, ...`), `B2` and the block-shift companion operator are both
//! strictly lower triangular.

use serde::Serialize;

use crate::adhm::Violation;
use crate::error::{Error, Result};
use crate::linalg::{FieldSpec, Matrix, Subspace, Vector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanFrame {
    field: FieldSpec,
    d: usize,
    mu: Vec<usize>,
    /// `chains[i][j]` is `e_{i+1, j+1}`.
    chains: Vec<Vec<Vector>>,
    /// Filtration level `V_l = Ker B1^(d-l)` each head was lifted from.
    provenance: Vec<usize>,
}

impl JordanFrame {
    /// Builds a frame from chain heads and block sizes by applying `B1`.
    pub fn from_heads(
        b1: &Matrix,
        heads: Vec<Vector>,
        mu: Vec<usize>,
        provenance: Vec<usize>,
    ) -> Self {
        assert_eq!(heads.len(), mu.len());
        let chains = heads
            .into_iter()
            .zip(&mu)
            .map(|(head, &len)| {
                let mut chain = Vec::with_capacity(len);
                let mut v = head;
                for _ in 0..len {
                    let next = b1.mul_vec(&v);
                    chain.push(v);
                    v = next;
                }
                chain
            })
            .collect();
        JordanFrame {
            field: b1.field(),
            d: b1.rows(),
            mu,
            chains,
            provenance,
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of Jordan blocks.
    pub fn k(&self) -> usize {
        self.mu.len()
    }

    pub fn mu(&self) -> &[usize] {
        &self.mu
    }

    pub fn provenance(&self) -> &[usize] {
        &self.provenance
    }

    pub fn chains(&self) -> &[Vec<Vector>] {
        &self.chains
    }

    /// `e_{i,j}` with zero-based indices.
    pub fn vector(&self, i: usize, j: usize) -> &Vector {
        &self.chains[i][j]
    }

    /// Zero-based `(i, j)` labels in level order: `e_{1,1}, ..., e_{k,1}, e_{1,2}, ...`.
    pub fn level_order(&self) -> Vec<(usize, usize)> {
        let depth = self.mu.iter().copied().max().unwrap_or(0);
        (0..depth)
            .flat_map(|j| {
                (0..self.k())
                    .filter(move |&i| j < self.mu[i])
                    .map(move |i| (i, j))
            })
            .collect()
    }

    /// Basis vectors in level order.
    pub fn basis(&self) -> Vec<Vector> {
        self.level_order()
            .into_iter()
            .map(|(i, j)| self.chains[i][j].clone())
            .collect()
    }

    /// Change-of-basis matrix whose columns are the basis in level order.
    pub fn change_of_basis(&self) -> Matrix {
        let cols = self.basis();
        Matrix::from_columns(self.field, self.d, &cols).expect("frame vectors have length d")
    }

    /// The companion operator `e_{i,j} -> e_{i+1,j}` (zero when `j > mu_{i+1}`),
    /// in standard coordinates. `None` if the frame is not a basis.
    pub fn companion_matrix(&self) -> Option<Matrix> {
        let order = self.level_order();
        let p = self.change_of_basis();
        let position = |i: usize, j: usize| order.iter().position(|&x| x == (i, j));
        let mut shift = Matrix::zeros(self.field, self.d, self.d);
        for (col, &(i, j)) in order.iter().enumerate() {
            if let Some(row) = (i + 1 < self.k()).then(|| position(i + 1, j)).flatten() {
                shift.set(row, col, self.field.one());
            }
        }
        let inv = p.inverse()?;
        Some(p.mul(&shift).mul(&inv))
    }
}

/// Jordan type of a nilpotent matrix from rank differences:
/// `#{i : mu_i >= k} = rank B^(k-1) - rank B^k`.
pub fn jordan_type(b1: &Matrix) -> Result<Vec<usize>> {
    if !b1.is_nilpotent()? {
        return Err(Error::NotNilpotent);
    }
    let d = b1.rows();
    let mut ranks = Vec::with_capacity(d + 1);
    let mut p = Matrix::identity(b1.field(), d);
    for _ in 0..=d {
        ranks.push(p.rank());
        p = p.mul(b1);
    }
    // at_least[k-1] = number of blocks of size >= k
    let at_least: Vec<usize> = (1..=d).map(|k| ranks[k - 1] - ranks[k]).collect();
    let mut mu = Vec::new();
    for k in (1..=d).rev() {
        let bigger = if k < d { at_least[k] } else { 0 };
        for _ in 0..(at_least[k - 1] - bigger) {
            mu.push(k);
        }
    }
    Ok(mu)
}

/// `V_i = Ker B1^(d-i)` for `i = 0..=d`; `V_0 = V` and `V_d = 0`.
pub fn kernel_filtration(b1: &Matrix) -> Result<Vec<Subspace>> {
    if !b1.is_nilpotent()? {
        return Err(Error::NotNilpotent);
    }
    let d = b1.rows();
    let mut powers = Vec::with_capacity(d + 1);
    let mut p = Matrix::identity(b1.field(), d);
    for _ in 0..=d {
        powers.push(p.clone());
        p = p.mul(b1);
    }
    Ok((0..=d).map(|i| powers[d - i].kernel_basis()).collect())
}

fn check_pair(b1: &Matrix, b2: &Matrix) -> Result<()> {
    let mut violations = Vec::new();
    if !b1.is_square() || (b1.rows(), b1.cols()) != (b2.rows(), b2.cols()) {
        violations.push(Violation::Shape {
            detail: format!(
                "operators are {}x{} and {}x{}",
                b1.rows(),
                b1.cols(),
                b2.rows(),
                b2.cols()
            ),
        });
        return Err(Error::InvalidDatum(violations));
    }
    if b1.field() != b2.field() {
        return Err(Error::mismatch(b1.field(), b2.field()));
    }
    if !b1.commutes_with(b2) {
        violations.push(Violation::NonCommuting);
    }
    for (k, m) in [(1u8, b1), (2u8, b2)] {
        if !m.is_nilpotent()? {
            violations.push(Violation::NotNilpotent { operator: k });
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidDatum(violations))
    }
}

/// Builds a Jordan frame for `b1` whose heads are triangular for `b2`.
///
/// For each filtration level `i`, the quotient `W = V_i / (B1 V_{i-1} + V_{i+1})`
/// carries a nilpotent map induced by `B2`. Its kernel flag
/// `K_m = {x ∈ V_i : B2^m x ∈ B1 V_{i-1} + V_{i+1}}` is lifted level by level;
/// heads of higher `B2`-order come first, so `B2` sends each head into the
/// span of later heads modulo `B1 V`.
pub fn compatible_jordan_frame(b1: &Matrix, b2: &Matrix) -> Result<JordanFrame> {
    check_pair(b1, b2)?;
    let field = b1.field();
    let d = b1.rows();
    let filtration = kernel_filtration(b1)?;
    let mut heads = Vec::new();
    let mut mu = Vec::new();
    let mut provenance = Vec::new();

    for i in 0..d {
        let below = if i == 0 {
            Subspace::zero(field, d)
        } else {
            filtration[i - 1].image(b1)
        };
        let denominator = below.sum(&filtration[i + 1]);
        let top = &filtration[i];
        if denominator.dim() == top.dim() {
            continue;
        }
        // kernel flag of the induced B2 on the quotient, as subspaces of V_i
        let mut flag = vec![denominator.clone()];
        while flag.last().expect("flag starts non-empty").dim() < top.dim() {
            let prev = flag.last().expect("flag starts non-empty");
            let next = Subspace::preimage(b2, prev).intersection(top);
            if next.dim() == prev.dim() {
                return Err(Error::Internal(
                    "induced action of B2 is not nilpotent".into(),
                ));
            }
            flag.push(next);
        }
        let mut levels: Vec<Vec<Vector>> = Vec::with_capacity(flag.len() - 1);
        for m in 1..flag.len() {
            let mut span = flag[m - 1].clone();
            let mut chosen = Vec::new();
            for row in flag[m].basis() {
                let rep = denominator.reduce(row);
                if let Some(bigger) = span.extended(&rep) {
                    span = bigger;
                    chosen.push(rep);
                }
            }
            levels.push(chosen);
        }
        for chosen in levels.into_iter().rev() {
            for head in chosen {
                heads.push(head);
                mu.push(d - i);
                provenance.push(i);
            }
        }
    }
    let frame = JordanFrame::from_heads(b1, heads, mu, provenance);
    let report = verify_frame(&frame, b1, b2);
    if !report.ok() {
        return Err(Error::Internal(format!(
            "constructed frame fails verification: {}",
            report.violations.join("; ")
        )));
    }
    Ok(frame)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FrameReport {
    pub is_basis: bool,
    pub jordan_chains: bool,
    pub heads_triangular: bool,
    pub b2_lower_triangular: bool,
    pub companion_lower_triangular: bool,
    pub violations: Vec<String>,
}

impl FrameReport {
    pub fn ok(&self) -> bool {
        self.is_basis
            && self.jordan_chains
            && self.heads_triangular
            && self.b2_lower_triangular
            && self.companion_lower_triangular
    }
}

/// Checks a frame from scratch: basis, chain structure (a), head
/// triangularity (b), and strict lower triangularity of `B2` and the
/// companion operator in level order.
pub fn verify_frame(frame: &JordanFrame, b1: &Matrix, b2: &Matrix) -> FrameReport {
    let mut report = FrameReport::default();
    let d = b1.rows();
    let field = b1.field();
    let sizes_ok = frame.mu.iter().sum::<usize>() == d
        && frame.chains.len() == frame.mu.len()
        && frame
            .chains
            .iter()
            .zip(&frame.mu)
            .all(|(c, &m)| c.len() == m)
        && frame.chains.iter().flatten().all(|v| v.len() == d);
    if !sizes_ok {
        report
            .violations
            .push("block sizes do not match the chains or do not sum to d".into());
        return report;
    }
    let p = frame.change_of_basis();
    report.is_basis = p.is_invertible();
    if !report.is_basis {
        report
            .violations
            .push("frame vectors are not a basis".into());
    }

    report.jordan_chains = true;
    for (i, chain) in frame.chains.iter().enumerate() {
        for (j, v) in chain.iter().enumerate() {
            let image = b1.mul_vec(v);
            let expected = chain
                .get(j + 1)
                .cloned()
                .unwrap_or_else(|| vec![field.zero(); d]);
            if image != expected {
                report.jordan_chains = false;
                report.violations.push(format!(
                    "B1 e_({},{}) is not the next chain vector",
                    i + 1,
                    j + 1
                ));
            }
        }
    }

    let image_b1 = Subspace::full(field, d).image(b1);
    report.heads_triangular = true;
    for i in 0..frame.k() {
        let later: Vec<Vector> = (i + 1..frame.k())
            .map(|l| frame.chains[l][0].clone())
            .collect();
        let target = Subspace::span(field, d, &later).sum(&image_b1);
        if !target.contains(&b2.mul_vec(&frame.chains[i][0])) {
            report.heads_triangular = false;
            report.violations.push(format!(
                "B2 e_({},1) leaves span of later heads + B1 V",
                i + 1
            ));
        }
    }

    if report.is_basis {
        let in_frame = b2.in_basis(&p).expect("invertible");
        report.b2_lower_triangular = in_frame.is_strictly_lower_triangular();
        if !report.b2_lower_triangular {
            report
                .violations
                .push("B2 is not strictly lower triangular in level order".into());
        }
        let companion = frame.companion_matrix().expect("invertible");
        report.companion_lower_triangular = companion
            .in_basis(&p)
            .expect("invertible")
            .is_strictly_lower_triangular();
        if !report.companion_lower_triangular {
            report
                .violations
                .push("companion operator is not strictly lower triangular in level order".into());
        }
    }
    report
}
