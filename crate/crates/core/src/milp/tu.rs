//! Exhaustive total-unimodularity check.

use std::collections::HashMap;

use super::scalar::Scalar;
use crate::error::{check_cap, Result};

pub const DEFAULT_TU_CAP: usize = 12;

/// `true` iff every square submatrix has determinant in {-1, 0, 1}.
///
/// Refuses matrices with more than [`DEFAULT_TU_CAP`] rows or columns.
pub fn is_totally_unimodular<F: Scalar>(matrix: &[Vec<F>]) -> Result<bool> {
    is_totally_unimodular_with_cap(matrix, DEFAULT_TU_CAP)
}

/// Subdeterminants are built level by level: the determinant of a k x k
/// submatrix is expanded along its last row using the (k-1) x (k-1) level.
pub fn is_totally_unimodular_with_cap<F: Scalar>(matrix: &[Vec<F>], cap: usize) -> Result<bool> {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, Vec::len);
    check_cap("TU check rows", rows as u128, cap.min(32) as u128)?;
    check_cap("TU check columns", cols as u128, cap.min(32) as u128)?;

    let mut a = vec![vec![0i64; cols]; rows];
    for (i, row) in matrix.iter().enumerate() {
        assert_eq!(row.len(), cols, "ragged matrix");
        for (j, v) in row.iter().enumerate() {
            a[i][j] = if v.is_zero() {
                0
            } else if v.is_one() {
                1
            } else if (-v.clone()).is_one() {
                -1
            } else {
                return Ok(false);
            };
        }
    }

    let key = |r: u32, c: u32| (u64::from(r) << 32) | u64::from(c);
    let mut previous: HashMap<u64, i64> = HashMap::new();
    for size in 1..=rows.min(cols) {
        let mut current = HashMap::new();
        for rmask in masks(rows, size) {
            let last = 31 - rmask.leading_zeros();
            let rest = rmask & !(1 << last);
            for cmask in masks(cols, size) {
                let det = if size == 1 {
                    a[last as usize][cmask.trailing_zeros() as usize]
                } else {
                    // Sign of the cofactor at (last row, c) is (-1)^((k-1) + pos(c)).
                    let mut det = 0;
                    let mut bits = cmask;
                    let mut pos = 0;
                    while bits != 0 {
                        let c = bits.trailing_zeros();
                        bits &= bits - 1;
                        let entry = a[last as usize][c as usize];
                        if entry != 0 {
                            let minor = previous[&key(rest, cmask & !(1 << c))];
                            let sign = if (size - 1 + pos) % 2 == 0 { 1 } else { -1 };
                            det += sign * entry * minor;
                        }
                        pos += 1;
                    }
                    det
                };
                if det.abs() > 1 {
                    return Ok(false);
                }
                current.insert(key(rmask, cmask), det);
            }
        }
        previous = current;
    }
    Ok(true)
}

/// All `width`-bit masks with exactly `k` bits set, in increasing order.
fn masks(width: usize, k: usize) -> impl Iterator<Item = u32> {
    let end = 1u64 << width;
    let mut next = if k == 0 || k > width { end } else { (1u64 << k) - 1 };
    std::iter::from_fn(move || {
        if next >= end {
            return None;
        }
        let cur = next;
        let low = cur & cur.wrapping_neg();
        let ripple = cur + low;
        next = (((ripple ^ cur) >> 2) / low) | ripple;
        Some(cur as u32)
    })
}
