#![allow(dead_code)]

pub mod oracle;

/// Rank by textbook Gaussian elimination on a dense copy, entries in `0..p`.
pub fn dense_rank(p: u32, mut m: Vec<Vec<u32>>) -> usize {
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..m.len()).find(|&i| m[i][col] != 0) else { continue };
        m.swap(rank, pivot);
        let inv = (1..p).find(|&x| x * m[rank][col] % p == 1).unwrap();
        for x in m[rank].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot_row = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != rank && row[col] != 0 {
                let f = row[col];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + p * p - f * y) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn binomial(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |c, i| c * u128::from(n - i) / u128::from(i + 1))
}
