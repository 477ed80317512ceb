//! Small dense linear algebra over the prime field `F_p`.

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Inverse modulo a prime `p`; `a` must be nonzero mod `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Inverse modulo an arbitrary `n` when `gcd(a, n) = 1`.
pub fn inv_mod_general(a: i128, n: i128) -> Option<i128> {
    let (mut r0, mut r1) = (a.rem_euclid(n), n);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(n))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Row-reduces `rows` in place and returns the rank.
pub fn row_reduce(rows: &mut Vec<Vec<u64>>, p: u64) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] % p != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = inv_mod(rows[rank][col] % p, p);
        for x in rows[rank].iter_mut() {
            *x = *x % p * inv % p;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][col] % p != 0 {
                let f = rows[r][col] % p;
                for c in 0..ncols {
                    let sub = f * rows[rank][c] % p;
                    rows[r][c] = (rows[r][c] % p + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rank
}

pub fn rank(rows: &[Vec<u64>], p: u64) -> usize {
    let mut m = rows.to_vec();
    row_reduce(&mut m, p)
}

/// Representatives of the nonzero vectors of `F_p^d` up to scalars: each has
/// its first nonzero entry equal to 1. There are `(p^d - 1)/(p - 1)` of them.
pub fn projective_points(d: usize, p: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for lead in 0..d {
        let free = d - lead - 1;
        let count = p.pow(free as u32);
        for code in 0..count {
            let mut v = vec![0u64; d];
            v[lead] = 1;
            let mut c = code;
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = c % p;
                c /= p;
            }
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_point_count() {
        assert_eq!(projective_points(2, 3).len(), 4);
        assert_eq!(projective_points(4, 3).len(), 40);
        assert_eq!(projective_points(4, 5).len(), 156);
    }

    #[test]
    fn rank_of_dependent_rows() {
        assert_eq!(rank(&[vec![1, 2], vec![2, 4]], 5), 1);
        assert_eq!(rank(&[vec![1, 2], vec![2, 1]], 3), 1);
        assert_eq!(rank(&[vec![1, 2], vec![2, 1]], 5), 2);
    }

    #[test]
    fn general_inverse() {
        assert_eq!(inv_mod_general(2, 9), Some(5));
        assert_eq!(inv_mod_general(3, 9), None);
        assert_eq!(inv_mod_general(-1, 7), Some(6));
    }
}
