//! Conjugacy classes of nilpotent matrices over GF(q), indexed by partitions.

/// Partitions of `n` in reverse lexicographic order, parts non-increasing.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=n.min(max)).rev() {
            prefix.push(part);
            go(n - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

pub fn conjugate(partition: &[usize]) -> Vec<usize> {
    let largest = partition.first().copied().unwrap_or(0);
    (1..=largest)
        .map(|k| partition.iter().filter(|&&p| p >= k).count())
        .collect()
}

/// Dimension of the commutant of a nilpotent matrix of Jordan type `partition`.
pub fn commutant_dim(partition: &[usize]) -> usize {
    conjugate(partition).iter().map(|c| c * c).sum()
}

/// `|GL_d(F_q)| = prod_{i<d} (q^d - q^i)`.
pub fn gl_order(d: usize, q: u64) -> u128 {
    let q = q as u128;
    let qd = q.pow(d as u32);
    (0..d).map(|i| qd - q.pow(i as u32)).product()
}

/// Order of the centralizer in `GL_d(F_q)` of a nilpotent of type `partition`:
/// `q^(c - sum m_i (m_i + 1) / 2) prod_i prod_{k <= m_i} (q^k - 1)`, where
/// `c` is the commutant dimension and `m_i` the multiplicity of part `i`.
pub fn centralizer_order(partition: &[usize], q: u64) -> u128 {
    let q = q as u128;
    let c = commutant_dim(partition) as u32;
    let largest = partition.first().copied().unwrap_or(0);
    let multiplicities: Vec<u32> = (1..=largest)
        .map(|i| partition.iter().filter(|&&p| p == i).count() as u32)
        .collect();
    let shift: u32 = multiplicities.iter().map(|m| m * (m + 1) / 2).sum();
    let units: u128 = multiplicities
        .iter()
        .flat_map(|&m| (1..=m).map(move |k| q.pow(k) - 1))
        .product();
    q.pow(c - shift) * units
}

/// Number of nilpotent `d x d` matrices over GF(q) of Jordan type `partition`.
pub fn class_size(partition: &[usize], q: u64) -> u128 {
    let d = partition.iter().sum();
    gl_order(d, q) / centralizer_order(partition, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_lists() {
        assert_eq!(partitions(3), vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
        assert_eq!(partitions(4).len(), 5);
        assert_eq!(partitions(6).len(), 11);
        assert_eq!(conjugate(&[3, 1]), vec![2, 1, 1]);
        assert_eq!(commutant_dim(&[1, 1]), 4);
        assert_eq!(commutant_dim(&[3]), 3);
    }

    #[test]
    fn class_sizes_divide_and_sum_to_nilpotent_count() {
        for q in [2u64, 3, 5, 7] {
            for d in 1..=5usize {
                let total: u128 = partitions(d)
                    .iter()
                    .map(|p| {
                        assert_eq!(gl_order(d, q) % centralizer_order(p, q), 0);
                        class_size(p, q)
                    })
                    .sum();
                // number of nilpotent d x d matrices is q^(d^2 - d)
                assert_eq!(total, (q as u128).pow((d * d - d) as u32), "d={d} q={q}");
            }
        }
    }
}
