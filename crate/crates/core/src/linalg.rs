//! Small dense integer matrix helpers.

/// Kronecker product of square or rectangular integer matrices, with the
/// first factor's index most significant.
pub fn kronecker(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let (ra, rb) = (a.len(), b.len());
    let ca = a.first().map_or(0, Vec::len);
    let cb = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![0; ca * cb]; ra * rb];
    for i in 0..ra {
        for j in 0..ca {
            let x = a[i][j];
            if x == 0 {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    out[i * rb + k][j * cb + l] = x * b[k][l];
                }
            }
        }
    }
    out
}

/// Kronecker product of a list of matrices; the empty product is `[[1]]`.
pub fn kronecker_all(ms: &[Vec<Vec<i64>>]) -> Vec<Vec<i64>> {
    ms.iter().fold(vec![vec![1]], |acc, m| kronecker(&acc, m))
}

/// Default modulus for determinant checks: the largest prime below 2^31.
pub const DET_PRIME: u64 = 2_147_483_647;

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Determinant of a square matrix modulo a prime `p < 2^32`, in `0..p`.
pub fn det_mod_p(m: &[Vec<i64>], p: u64) -> u64 {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "matrix is not square");
    let mut a: Vec<Vec<u64>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect())
        .collect();
    let mut det = 1u64;
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| a[r][c] != 0) else {
            return 0;
        };
        if piv != c {
            a.swap(piv, c);
            det = (p - det) % p;
        }
        det = det * a[c][c] % p;
        let inv = pow_mod(a[c][c], p - 2, p);
        for r in c + 1..n {
            let f = a[r][c] * inv % p;
            if f == 0 {
                continue;
            }
            for k in c..n {
                a[r][k] = (a[r][k] + (p - f) * a[c][k]) % p;
            }
        }
    }
    det
}

/// The determinant modulo `p` read as a signed residue in `(-p/2, p/2]`.
pub fn det_mod_p_signed(m: &[Vec<i64>], p: u64) -> i64 {
    let d = det_mod_p(m, p);
    if d > p / 2 {
        d as i64 - p as i64
    } else {
        d as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Cofactor expansion, fine for tiny matrices.
    fn det_exact(m: &[Vec<i64>]) -> i64 {
        let n = m.len();
        if n == 0 {
            return 1;
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect()).collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det_exact(&minor)
            })
            .sum()
    }

    #[test]
    fn kronecker_small() {
        let a = vec![vec![1, 2], vec![0, -1]];
        let b = vec![vec![0, 1], vec![1, 0]];
        assert_eq!(
            kronecker(&a, &b),
            vec![vec![0, 1, 0, 2], vec![1, 0, 2, 0], vec![0, 0, 0, -1], vec![0, 0, -1, 0]]
        );
        assert_eq!(kronecker_all(&[]), vec![vec![1]]);
        assert_eq!(kronecker_all(std::slice::from_ref(&a)), a);
    }

    #[test]
    fn det_examples() {
        assert_eq!(det_mod_p_signed(&[vec![0, 1], vec![1, 0]], DET_PRIME), -1);
        assert_eq!(det_mod_p_signed(&[vec![2, 4], vec![1, 2]], DET_PRIME), 0);
        assert_eq!(det_mod_p(&[], 7), 1);
    }

    proptest! {
        #[test]
        fn det_matches_cofactors(entries in proptest::collection::vec(-3i64..=3, 16)) {
            let m: Vec<Vec<i64>> = entries.chunks(4).map(|c| c.to_vec()).collect();
            prop_assert_eq!(det_mod_p_signed(&m, DET_PRIME), det_exact(&m));
        }

        #[test]
        fn det_of_kronecker_is_multiplicative(
            a in proptest::collection::vec(-2i64..=2, 4),
            b in proptest::collection::vec(-2i64..=2, 9),
        ) {
            let a: Vec<Vec<i64>> = a.chunks(2).map(|c| c.to_vec()).collect();
            let b: Vec<Vec<i64>> = b.chunks(3).map(|c| c.to_vec()).collect();
            // det(A (x) B) = det(A)^3 det(B)^2 for 2x2 A and 3x3 B.
            let want = det_exact(&a).pow(3) * det_exact(&b).pow(2);
            prop_assert_eq!(det_mod_p_signed(&kronecker(&a, &b), DET_PRIME), want);
        }
    }
}
