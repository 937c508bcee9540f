//! Small dense linear algebra over generic jet scalars.
//!
//! The tensor layer inverts n-by-n matrices whose entries are jets; pivoting
//! compares innermost payload values. Dimensions here are tiny (n <= 3 in
//! practice), so Gauss-Jordan with partial pivoting is plenty.

use crate::ad::Scalar;

/// Row-major square matrix with generic scalar entries.
#[derive(Clone, Debug)]
pub struct SquareMatrix<S> {
    pub n: usize,
    pub data: Vec<S>,
}

impl<S: Scalar> SquareMatrix<S> {
    pub fn zeros(n: usize) -> Self {
        SquareMatrix {
            n,
            data: vec![S::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = S::one();
        }
        m
    }

    pub fn at(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.n + j] = v;
    }

    /// Inverse by Gauss-Jordan with partial pivoting on payload magnitude.
    /// Panics if a pivot vanishes (singular matrix).
    pub fn inverse(&self) -> Self {
        let n = self.n;
        let mut a = self.data.clone();
        let mut inv = Self::identity(n).data;
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&r1, &r2| {
                    a[r1 * n + col]
                        .value()
                        .abs()
                        .total_cmp(&a[r2 * n + col].value().abs())
                })
                .unwrap();
            assert!(
                a[pivot_row * n + col].value().abs() > 0.0,
                "singular matrix in jet inverse"
            );
            if pivot_row != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot_row * n + j);
                    inv.swap(col * n + j, pivot_row * n + j);
                }
            }
            let piv = a[col * n + col].clone().recip();
            for j in 0..n {
                a[col * n + j] = a[col * n + j].clone() * piv.clone();
                inv[col * n + j] = inv[col * n + j].clone() * piv.clone();
            }
            for row in 0..n {
                if row == col {
                    continue;
                }
                let factor = a[row * n + col].clone();
                for j in 0..n {
                    a[row * n + j] =
                        a[row * n + j].clone() - factor.clone() * a[col * n + j].clone();
                    inv[row * n + j] =
                        inv[row * n + j].clone() - factor.clone() * inv[col * n + j].clone();
                }
            }
        }
        SquareMatrix { n, data: inv }
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        let n = self.n;
        (0..n)
            .map(|i| {
                let mut acc = S::zero();
                for j in 0..n {
                    acc = acc + self.at(i, j).clone() * v[j].clone();
                }
                acc
            })
            .collect()
    }
}

/// Solve a small f64 system in place by Gauss-Jordan with partial pivoting.
/// Returns `None` when the matrix is numerically singular.
pub fn solve_f64(a: &[f64], b: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut m = a.to_vec();
    let mut x = b.to_vec();
    for col in 0..n {
        let piv = (col..n).max_by(|&r1, &r2| m[r1 * n + col].abs().total_cmp(&m[r2 * n + col].abs()))?;
        if m[piv * n + col].abs() < 1e-300 {
            return None;
        }
        if piv != col {
            for j in 0..n {
                m.swap(col * n + j, piv * n + j);
            }
            x.swap(col, piv);
        }
        let d = m[col * n + col];
        for j in col..n {
            m[col * n + j] /= d;
        }
        x[col] /= d;
        for row in 0..n {
            if row == col {
                continue;
            }
            let f = m[row * n + col];
            if f == 0.0 {
                continue;
            }
            for j in col..n {
                m[row * n + j] -= f * m[col * n + j];
            }
            x[row] -= f * x[col];
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ad::{seed_all, Extract, Jet2};
    use approx::assert_relative_eq;

    #[test]
    fn f64_inverse_roundtrip() {
        let a = SquareMatrix {
            n: 2,
            data: vec![4.0, 1.0, 2.0, 3.0],
        };
        let inv = a.inverse();
        let prod = [
            a.at(0, 0) * inv.at(0, 0) + a.at(0, 1) * inv.at(1, 0),
            a.at(0, 0) * inv.at(0, 1) + a.at(0, 1) * inv.at(1, 1),
            a.at(1, 0) * inv.at(0, 0) + a.at(1, 1) * inv.at(1, 0),
            a.at(1, 0) * inv.at(0, 1) + a.at(1, 1) * inv.at(1, 1),
        ];
        assert_relative_eq!(prod[0], 1.0, epsilon = 1e-14);
        assert_relative_eq!(prod[1], 0.0, epsilon = 1e-14);
        assert_relative_eq!(prod[2], 0.0, epsilon = 1e-14);
        assert_relative_eq!(prod[3], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn jet_inverse_differentiates() {
        // d/dt of 1/(2+t) at t=0 is -1/4; exercise through a 1x1 jet matrix.
        let jets = seed_all(&[0.0]);
        let mut m = SquareMatrix::<Jet2<f64>>::zeros(1);
        m.set(0, 0, Jet2::from_f64(2.0) + jets[0].clone());
        let inv = m.inverse();
        assert_relative_eq!(inv.at(0, 0).value(), 0.5, epsilon = 1e-14);
        assert_relative_eq!(inv.at(0, 0).extract(&[0]).unwrap(), -0.25, epsilon = 1e-14);
    }
}
