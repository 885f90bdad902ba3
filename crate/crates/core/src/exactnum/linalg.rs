use num_traits::Zero;

use super::Scalar;

/// Reduced row-echelon form; returns the nonzero rows and their pivot
/// columns.
pub fn rref(rows: &[Vec<Scalar>]) -> (Vec<Vec<Scalar>>, Vec<usize>) {
    let mut rows: Vec<Vec<Scalar>> = rows.iter().filter(|v| v.iter().any(|x| !x.is_zero())).cloned().collect();
    let Some(width) = rows.first().map(Vec::len) else {
        return (Vec::new(), Vec::new());
    };
    let mut pivots = Vec::new();
    let mut pivot_row = 0;
    for col in 0..width {
        if pivot_row == rows.len() {
            break;
        }
        let Some(p) = (pivot_row..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(pivot_row, p);
        let pivot = rows[pivot_row][col].clone();
        for x in rows[pivot_row].iter_mut() {
            *x /= &pivot;
        }
        let prow = rows[pivot_row].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != pivot_row && !row[col].is_zero() {
                let factor = row[col].clone();
                for (x, p) in row.iter_mut().zip(&prow) {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    rows.truncate(pivot_row);
    (rows, pivots)
}

pub fn rank(rows: &[Vec<Scalar>]) -> usize {
    rref(rows).0.len()
}

/// Basis of `{v : M v = 0}` for a matrix with `width` columns.
pub fn nullspace(rows: &[Vec<Scalar>], width: usize) -> Vec<Vec<Scalar>> {
    let (r, pivots) = rref(rows);
    let mut out = Vec::new();
    for free in (0..width).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Scalar::zero(); width];
        v[free] = Scalar::from_integer(1.into());
        for (row, &p) in r.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        out.push(v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;

    #[test]
    fn rank_and_kernel() {
        let m = vec![vec![int(1), int(2), int(3)], vec![int(2), int(4), int(6)], vec![int(0), int(1), int(1)]];
        assert_eq!(rank(&m), 2);
        let k = nullspace(&m, 3);
        assert_eq!(k.len(), 1);
        for row in &m {
            let dot: Scalar = row.iter().zip(&k[0]).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
        assert_eq!(nullspace(&[], 2).len(), 2);
    }
}
