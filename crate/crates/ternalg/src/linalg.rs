//! Small dense kernels for the low-dimensional matrices used throughout:
//! Gaussian elimination with partial pivoting, nothing more.

/// Determinant of a square matrix stored row-major.
pub fn determinant(entries: &[f64], n: usize) -> f64 {
    debug_assert_eq!(entries.len(), n * n);
    let mut a = entries.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let mut pivot = col;
        for row in col + 1..n {
            if a[row * n + col].abs() > a[pivot * n + col].abs() {
                pivot = row;
            }
        }
        let p = a[pivot * n + col];
        if p == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for k in 0..n {
                a.swap(col * n + k, pivot * n + k);
            }
            det = -det;
        }
        det *= a[col * n + col];
        for row in col + 1..n {
            let f = a[row * n + col] / a[col * n + col];
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[row * n + k] -= f * a[col * n + k];
            }
        }
    }
    det
}

/// Inverse by Gauss-Jordan with partial pivoting. Returns `None` when a
/// pivot falls below `pivot_floor` in absolute value.
pub fn invert(entries: &[f64], n: usize, pivot_floor: f64) -> Option<Vec<f64>> {
    debug_assert_eq!(entries.len(), n * n);
    let mut a = entries.to_vec();
    let mut inv = vec![0.0; n * n];
    for i in 0..n {
        inv[i * n + i] = 1.0;
    }
    for col in 0..n {
        let mut pivot = col;
        for row in col + 1..n {
            if a[row * n + col].abs() > a[pivot * n + col].abs() {
                pivot = row;
            }
        }
        if a[pivot * n + col].abs() <= pivot_floor {
            return None;
        }
        if pivot != col {
            for k in 0..n {
                a.swap(col * n + k, pivot * n + k);
                inv.swap(col * n + k, pivot * n + k);
            }
        }
        let p = a[col * n + col];
        for k in 0..n {
            a[col * n + k] /= p;
            inv[col * n + k] /= p;
        }
        for row in 0..n {
            if row == col {
                continue;
            }
            let f = a[row * n + col];
            if f == 0.0 {
                continue;
            }
            for k in 0..n {
                a[row * n + k] -= f * a[col * n + k];
                inv[row * n + k] -= f * inv[col * n + k];
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_2x2() {
        assert_eq!(determinant(&[1.0, 2.0, 3.0, 4.0], 2), -2.0);
        assert_eq!(determinant(&[1.0, 0.0, 0.0, 1.0], 2), 1.0);
        assert_eq!(determinant(&[0.0, 0.0, 0.0, 1.0], 2), 0.0);
    }

    #[test]
    fn invert_round_trips() {
        let m = [2.0, 1.0, 0.0, 1.0, 3.0, -1.0, 0.0, 0.5, 4.0];
        let inv = invert(&m, 3, 1e-12).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0.0;
                for k in 0..3 {
                    s += m[i * 3 + k] * inv[k * 3 + j];
                }
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((s - target).abs() < 1e-12);
            }
        }
        assert!(invert(&[0.0, 0.0, 0.0, 0.0], 2, 1e-12).is_none());
    }
}
