//! Exact Gaussian elimination.

use crate::field::FieldElement;

/// Rank of a dense matrix over an exact field, by row reduction with
/// first-nonzero pivoting. Rows may be empty when there are no columns.
pub fn rank(rows: &[Vec<FieldElement>]) -> usize {
    let mut m: Vec<Vec<FieldElement>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = m[rank][col].inv().expect("pivot is nonzero");
        let pivot_row: Vec<FieldElement> = m[rank].iter().map(|v| v * &inv).collect();
        for row in m.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (c, pv) in pivot_row.iter().enumerate().skip(col) {
                row[c] = &row[c] - &(&factor * pv);
            }
        }
        m[rank] = pivot_row;
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}
