use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Least-squares polynomial detrending for segments of one fixed length.
///
/// Abscissae are mapped onto [-1, 1] before forming the normal equations, and
/// the normal matrix is LU-factored once and reused for every segment.
#[derive(Debug, Clone)]
pub struct PolyDetrender<T> {
    len: usize,
    order: usize,
    abscissae: Vec<T>,
    /// Row-major LU factors of the (order+1)^2 normal matrix.
    lu: Vec<T>,
    pivots: Vec<usize>,
}

impl<T: Scalar> PolyDetrender<T> {
    pub fn new(len: usize, order: usize) -> Result<Self> {
        if len < order + 2 {
            return Err(Error::DegenerateFit { len, order });
        }
        let span = T::from_count(len - 1);
        let abscissae: Vec<T> = (0..len)
            .map(|i| (T::from_count(2 * i) - span) / span)
            .collect();
        let dim = order + 1;
        // Power sums Σ u^k for k in 0..=2*order fill the Hankel normal matrix.
        let mut moments = vec![T::zero(); 2 * order + 1];
        for &u in &abscissae {
            let mut p = T::one();
            for m in moments.iter_mut() {
                *m = *m + p;
                p = p * u;
            }
        }
        let mut lu = vec![T::zero(); dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                lu[r * dim + c] = moments[r + c];
            }
        }
        let pivots = lu_factor(&mut lu, dim).ok_or(Error::DegenerateFit { len, order })?;
        Ok(Self {
            len,
            order,
            abscissae,
            lu,
            pivots,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Polynomial coefficients in the scaled abscissa, lowest degree first.
    pub fn coefficients(&self, segment: &[T]) -> Vec<T> {
        debug_assert_eq!(segment.len(), self.len);
        let dim = self.order + 1;
        let mut rhs = vec![T::zero(); dim];
        for (&u, &y) in self.abscissae.iter().zip(segment) {
            let mut p = y;
            for r in rhs.iter_mut() {
                *r = *r + p;
                p = p * u;
            }
        }
        lu_solve(&self.lu, &self.pivots, dim, &mut rhs);
        rhs
    }

    /// Mean squared residual of `segment` around its fitted polynomial.
    ///
    /// Residual energy at rounding level relative to the segment's magnitude
    /// is reported as exactly zero.
    pub fn mean_square_residual(&self, segment: &[T]) -> Result<T> {
        if segment.len() != self.len {
            return Err(Error::DegenerateFit {
                len: segment.len(),
                order: self.order,
            });
        }
        let coef = self.coefficients(segment);
        let mut sum = T::zero();
        let mut scale = T::zero();
        for (&u, &y) in self.abscissae.iter().zip(segment) {
            let fit = coef.iter().rev().fold(T::zero(), |acc, &c| acc * u + c);
            let r = y - fit;
            sum = sum + r * r;
            scale = scale.max(y.abs());
        }
        let f2 = sum / T::from_count(self.len);
        let floor = T::lit(1024.0) * T::epsilon() * scale;
        if f2 <= floor * floor {
            Ok(T::zero())
        } else {
            Ok(f2)
        }
    }
}

/// F² of one segment: mean squared deviation from its order-`order`
/// least-squares polynomial.
pub fn detrend_fluctuation<T: Scalar>(segment: &[T], order: usize) -> Result<T> {
    PolyDetrender::new(segment.len(), order)?.mean_square_residual(segment)
}

fn lu_factor<T: Scalar>(a: &mut [T], n: usize) -> Option<Vec<usize>> {
    let mut pivots = Vec::with_capacity(n);
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| {
                a[i * n + k]
                    .abs()
                    .partial_cmp(&a[j * n + k].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap_or(k);
        if a[p * n + k] == T::zero() {
            return None;
        }
        if p != k {
            for c in 0..n {
                a.swap(k * n + c, p * n + c);
            }
        }
        pivots.push(p);
        for i in k + 1..n {
            let f = a[i * n + k] / a[k * n + k];
            a[i * n + k] = f;
            for c in k + 1..n {
                a[i * n + c] = a[i * n + c] - f * a[k * n + c];
            }
        }
    }
    Some(pivots)
}

fn lu_solve<T: Scalar>(lu: &[T], pivots: &[usize], n: usize, b: &mut [T]) {
    for (k, &p) in pivots.iter().enumerate() {
        b.swap(k, p);
    }
    for i in 1..n {
        let mut s = b[i];
        for c in 0..i {
            s = s - lu[i * n + c] * b[c];
        }
        b[i] = s;
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        for c in i + 1..n {
            s = s - lu[i * n + c] * b[c];
        }
        b[i] = s / lu[i * n + i];
    }
}
