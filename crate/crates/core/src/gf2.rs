//! Internal GF(2) linear-algebra helpers (bit-packed rows).

use rand::Rng;

pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

pub(crate) fn bit_get(row: &[u64], i: usize) -> bool {
    row[i / 64] >> (i % 64) & 1 != 0
}

pub(crate) fn bit_set(row: &mut [u64], i: usize, value: bool) {
    if value {
        row[i / 64] |= 1 << (i % 64);
    } else {
        row[i / 64] &= !(1 << (i % 64));
    }
}

pub(crate) fn xor_assign(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

/// Parity of the AND of two rows.
#[cfg(test)]
pub(crate) fn dot(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).map(|(&x, &y)| (x & y).count_ones()).sum::<u32>() % 2 == 1
}

/// Solution set of the affine system `rows · v = rhs` over GF(2):
/// a particular solution plus a nullspace basis.
pub(crate) struct AffineSolution {
    pub particular: Vec<u64>,
    pub nullspace: Vec<Vec<u64>>,
}

/// Gaussian elimination over bit-packed rows. Returns `None` when the system
/// is inconsistent.
pub(crate) fn solve_affine(rows: &[Vec<u64>], rhs: &[bool], width: usize) -> Option<AffineSolution> {
    let words = words_for(width);
    let mut mat: Vec<Vec<u64>> = rows.iter().map(|r| r.clone()).collect();
    let mut b: Vec<bool> = rhs.to_vec();
    let m = mat.len();

    let mut pivot_of_col: Vec<Option<usize>> = vec![None; width];
    let mut rank = 0usize;
    for col in 0..width {
        let Some(pivot_row) = (rank..m).find(|&r| bit_get(&mat[r], col)) else {
            continue;
        };
        mat.swap(rank, pivot_row);
        b.swap(rank, pivot_row);
        for r in 0..m {
            if r != rank && bit_get(&mat[r], col) {
                let (head, tail) = if r < rank {
                    let (a, c) = mat.split_at_mut(rank);
                    (&mut a[r], &c[0][..])
                } else {
                    let (a, c) = mat.split_at_mut(r);
                    (&mut c[0], &a[rank][..])
                };
                xor_assign(head, tail);
                let flip = b[rank];
                b[r] ^= flip;
            }
        }
        pivot_of_col[col] = Some(rank);
        rank += 1;
    }
    // Inconsistency: zero row with rhs 1.
    for r in rank..m {
        if b[r] {
            return None;
        }
    }

    let mut particular = vec![0u64; words];
    for col in 0..width {
        if let Some(r) = pivot_of_col[col] {
            bit_set(&mut particular, col, b[r]);
        }
    }

    let mut nullspace = Vec::new();
    for free in 0..width {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![0u64; words];
        bit_set(&mut v, free, true);
        for col in 0..width {
            if let Some(r) = pivot_of_col[col] {
                if bit_get(&mat[r], free) {
                    bit_set(&mut v, col, true);
                }
            }
        }
        nullspace.push(v);
    }
    Some(AffineSolution { particular, nullspace })
}

/// Uniform sample from the solution set of `rows · v = rhs`.
pub(crate) fn sample_solution(
    solution: &AffineSolution,
    rng: &mut impl Rng,
) -> Vec<u64> {
    let mut v = solution.particular.clone();
    for basis in &solution.nullspace {
        if rng.gen::<bool>() {
            xor_assign(&mut v, basis);
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn solve_simple_system() {
        // v0 + v1 = 1, v1 + v2 = 0 over width 3
        let width = 3;
        let mut r0 = vec![0u64];
        bit_set(&mut r0, 0, true);
        bit_set(&mut r0, 1, true);
        let mut r1 = vec![0u64];
        bit_set(&mut r1, 1, true);
        bit_set(&mut r1, 2, true);
        let sol = solve_affine(&[r0.clone(), r1.clone()], &[true, false], width).unwrap();
        assert_eq!(sol.nullspace.len(), 1);
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..10 {
            let v = sample_solution(&sol, &mut rng);
            assert!(dot(&r0, &v));
            assert!(!dot(&r1, &v));
        }
    }

    #[test]
    fn inconsistent_system_is_detected() {
        let mut r = vec![0u64];
        bit_set(&mut r, 0, true);
        assert!(solve_affine(&[r.clone(), r], &[true, false], 2).is_none());
    }
}
