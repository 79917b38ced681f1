use ndarray::{Array2, ArrayView2};

use crate::error::{Error, Result};

/// Residual norm below which a column is treated as linearly dependent.
pub const RANK_TOLERANCE: f64 = 1e-12;

/// Modified Gram-Schmidt over the columns of `matrix`, in index order.
///
/// The span of the leading `k` columns is preserved for every `k` when the
/// input has full column rank.
pub fn orthonormalize(matrix: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
    let (n, d) = matrix.dim();
    if d > n {
        return Err(Error::ShapeMismatch(format!(
            "cannot orthonormalize {d} columns in dimension {n}"
        )));
    }
    // column-major scratch so each column is contiguous
    let mut cols: Vec<Vec<f64>> = (0..d).map(|l| matrix.column(l).to_vec()).collect();
    for l in 0..d {
        let (done, rest) = cols.split_at_mut(l);
        let v = &mut rest[0];
        for q in done.iter() {
            let proj = dot(q, v);
            for (x, y) in v.iter_mut().zip(q) {
                *x -= proj * y;
            }
        }
        let norm = dot(v, v).sqrt();
        if !(norm >= RANK_TOLERANCE) {
            return Err(Error::RankDeficient {
                column: l,
                iteration: None,
            });
        }
        v.iter_mut().for_each(|x| *x /= norm);
    }
    Ok(Array2::from_shape_fn((n, d), |(i, l)| cols[l][i]))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Largest absolute entry of `OᵀO − I`.
pub fn orthonormality_error(matrix: ArrayView2<'_, f64>) -> f64 {
    let gram = matrix.t().dot(&matrix);
    gram.indexed_iter()
        .map(|((a, b), &g)| (g - if a == b { 1.0 } else { 0.0 }).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn orthonormal_input_is_a_fixed_point() {
        let s = 0.5f64.sqrt();
        let q = array![[s, 0.0], [s, 0.0], [0.0, 1.0]];
        let out = orthonormalize(q.view()).unwrap();
        for (a, b) in out.iter().zip(q.iter()) {
            assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn hand_worked_example() {
        let m = array![[1.0, 1.0], [0.0, 1.0], [0.0, 0.0]];
        let out = orthonormalize(m.view()).unwrap();
        let expected = array![[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]];
        for (a, b) in out.iter().zip(expected.iter()) {
            assert!((a - b).abs() <= 1e-15);
        }
    }

    #[test]
    fn duplicate_columns_are_rank_deficient() {
        let m = array![[1.0, 1.0], [2.0, 2.0], [3.0, 3.0]];
        match orthonormalize(m.view()) {
            Err(Error::RankDeficient { column, .. }) => assert_eq!(column, 1),
            other => panic!("expected rank deficiency, got {other:?}"),
        }
    }

    #[test]
    fn too_many_columns() {
        let m = Array2::<f64>::zeros((2, 3));
        assert!(orthonormalize(m.view()).is_err());
    }

    #[test]
    fn error_metric() {
        let m = array![[1.0, 0.0], [0.0, 1.0], [0.0, 0.1]];
        assert!((orthonormality_error(m.view()) - 0.01).abs() < 1e-15);
    }
}
