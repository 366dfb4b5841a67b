use itertools::Itertools;

use crate::error::{Error, Result};
use crate::{CMatrix, C64};

/// Permanent of a square matrix; the empty matrix has permanent 1.
///
/// Dispatches to direct enumeration for `n <= 4` and to Ryser's formula with
/// Gray-code subset order above that.
pub fn permanent(m: &CMatrix) -> Result<C64> {
    check_square(m)?;
    Ok(if m.nrows() <= 4 { naive(m) } else { ryser(m) })
}

/// `sum over sigma in S_n of prod_i m[i][sigma(i)]`.
pub fn permanent_naive(m: &CMatrix) -> Result<C64> {
    check_square(m)?;
    Ok(naive(m))
}

/// Ryser: `(-1)^n sum over column subsets S of (-1)^|S| prod_i sum_{j in S} m[i][j]`,
/// visiting subsets in Gray-code order so each step updates the row sums by
/// one column.
pub fn permanent_ryser(m: &CMatrix) -> Result<C64> {
    check_square(m)?;
    Ok(ryser(m))
}

fn check_square(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::domain(format!(
            "permanent needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.nrows() >= usize::BITS as usize - 1 {
        return Err(Error::SizeLimit { what: "matrix size", value: m.nrows(), limit: 62 });
    }
    Ok(())
}

fn naive(m: &CMatrix) -> C64 {
    let n = m.nrows();
    (0..n)
        .permutations(n)
        .map(|p| p.iter().enumerate().map(|(i, &j)| m[(i, j)]).product::<C64>())
        .sum()
}

fn ryser(m: &CMatrix) -> C64 {
    let n = m.nrows();
    if n == 0 {
        return C64::new(1.0, 0.0);
    }
    let mut row_sums = vec![C64::new(0.0, 0.0); n];
    let mut total = C64::new(0.0, 0.0);
    let mut gray: u64 = 0;
    for k in 1u64..(1u64 << n) {
        let j = k.trailing_zeros() as usize;
        gray ^= 1 << j;
        if gray & (1 << j) != 0 {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s += m[(i, j)];
            }
        } else {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s -= m[(i, j)];
            }
        }
        let prod: C64 = row_sums.iter().product();
        if gray.count_ones() % 2 == 1 {
            total -= prod;
        } else {
            total += prod;
        }
    }
    if n % 2 == 1 {
        -total
    } else {
        total
    }
}
