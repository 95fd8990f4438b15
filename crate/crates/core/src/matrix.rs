//! Dense matrices over a commutative ring and division-free characteristic
//! polynomials.

use crate::ff::{Field, Ring};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn map<F: Clone>(&self, f: impl Fn(&E) -> F) -> Matrix<F> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// The block [r0, r0+rows) × [c0, c0+cols).
    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn identity<R: Ring<Elem = E>>(ring: &R, n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { ring.one() } else { ring.zero() })
    }

    pub fn mul<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = ring.zero();
            for t in 0..self.cols {
                let a = self.get(i, t);
                if ring.is_zero(a) {
                    continue;
                }
                acc = ring.add(&acc, &ring.mul(a, other.get(t, j)));
            }
            acc
        })
    }

    pub fn scale<R: Ring<Elem = E>>(&self, ring: &R, c: &E) -> Self {
        self.map(|x| ring.mul(c, x))
    }
}

/// Coefficients (c_0 = 1, c_1, ..., c_k) of det(I − A·U) = Σ c_j U^j, via
/// Berkowitz's recurrence. Uses only ring operations, so it is valid over
/// F_q[T] where fraction-free elimination would need exact division.
///
/// Equivalently, x^k + c_1 x^{k−1} + ... + c_k = det(xI − A).
pub fn berkowitz<R: Ring>(ring: &R, a: &Matrix<R::Elem>) -> Vec<R::Elem> {
    let n = a.rows();
    assert_eq!(n, a.cols());
    if n == 0 {
        return vec![ring.one()];
    }
    // Characteristic polynomial of the trailing 1×1 block.
    let mut chi = vec![ring.one(), ring.neg(a.get(n - 1, n - 1))];
    for t in (0..n - 1).rev() {
        // A[t.., t..] = [[a_tt, R], [S, M]] with M = A[t+1.., t+1..] of size s.
        let s = n - t - 1;
        let mut col = Vec::with_capacity(s + 2);
        col.push(ring.one());
        col.push(ring.neg(a.get(t, t)));
        // v = M^i S, starting at S
        let mut v: Vec<R::Elem> = (0..s).map(|i| a.get(t + 1 + i, t).clone()).collect();
        for power in 0..s {
            let rv = (0..s).fold(ring.zero(), |acc, i| ring.add(&acc, &ring.mul(a.get(t, t + 1 + i), &v[i])));
            col.push(ring.neg(&rv));
            if power + 1 < s {
                v = (0..s)
                    .map(|i| {
                        (0..s).fold(ring.zero(), |acc, j| {
                            let m = a.get(t + 1 + i, t + 1 + j);
                            if ring.is_zero(m) {
                                acc
                            } else {
                                ring.add(&acc, &ring.mul(m, &v[j]))
                            }
                        })
                    })
                    .collect();
            }
        }
        // chi_new = Toeplitz(col) · chi, lengths (s+2) = (s+2)×(s+1) · (s+1)
        let next = (0..s + 2)
            .map(|i| {
                (0..=i.min(s)).fold(ring.zero(), |acc, j| {
                    let c = &col[i - j];
                    if ring.is_zero(c) || ring.is_zero(&chi[j]) {
                        acc
                    } else {
                        ring.add(&acc, &ring.mul(c, &chi[j]))
                    }
                })
            })
            .collect();
        chi = next;
    }
    chi
}

/// Determinant over a field by Gaussian elimination.
pub fn det_field<F: Field>(field: &F, a: &Matrix<F::Elem>) -> F::Elem {
    let n = a.rows();
    let mut m = a.clone();
    let mut det = field.one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !field.is_zero(m.get(r, col))) else {
            return field.zero();
        };
        if piv != col {
            for j in 0..n {
                let tmp = m.get(piv, j).clone();
                m.set(piv, j, m.get(col, j).clone());
                m.set(col, j, tmp);
            }
            det = field.neg(&det);
        }
        let p = m.get(col, col).clone();
        det = field.mul(&det, &p);
        let pinv = field.inv(&p).expect("pivot is nonzero");
        for r in col + 1..n {
            let factor = field.mul(m.get(r, col), &pinv);
            if field.is_zero(&factor) {
                continue;
            }
            for j in col..n {
                let v = field.sub(m.get(r, j), &field.mul(&factor, m.get(col, j)));
                m.set(r, j, v);
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::FieldCtx;
    use crate::poly::{Poly, PolyRing};
    use proptest::prelude::*;

    // Laplace expansion along the first row: the small-instance oracle.
    fn cofactor_det<R: Ring>(ring: &R, a: &Matrix<R::Elem>) -> R::Elem {
        let n = a.rows();
        if n == 0 {
            return ring.one();
        }
        let mut acc = ring.zero();
        for j in 0..n {
            let minor = Matrix::from_fn(n - 1, n - 1, |r, c| a.get(r + 1, if c < j { c } else { c + 1 }).clone());
            let term = ring.mul(a.get(0, j), &cofactor_det(ring, &minor));
            acc = if j % 2 == 0 { ring.add(&acc, &term) } else { ring.sub(&acc, &term) };
        }
        acc
    }

    #[test]
    fn two_by_two() {
        let f = FieldCtx::new(5, 1).unwrap();
        let a = Matrix::from_fn(2, 2, |i, j| [[1u32, 2], [3, 4]][i][j]);
        // x² - 5x - 2 = x² + 0x + 3 over F_5
        assert_eq!(berkowitz(&f, &a), vec![1, 0, 3]);
        assert_eq!(det_field(&f, &a), 3);
    }

    proptest! {
        #[test]
        fn berkowitz_matches_cofactor_over_f3_t(
            k in 1usize..=5,
            entries in prop::collection::vec(prop::collection::vec(0u32..3, 0..3), 25),
        ) {
            let f = FieldCtx::new(3, 1).unwrap();
            let ring = PolyRing::new(f.clone());
            let a = Matrix::from_fn(k, k, |i, j| ring.poly(entries[i * 5 + j].clone()));
            let chi = berkowitz(&ring, &a);
            // det(I − A·U) as a polynomial in U with F_3[T] coefficients, by
            // cofactor expansion over F_3[T][U].
            let uring = PolyRing::new(ring.clone());
            let iau = Matrix::from_fn(k, k, |i, j| {
                let one = if i == j { ring.one() } else { Poly::zero() };
                uring.poly(vec![one, ring.neg(a.get(i, j))])
            });
            let det = cofactor_det(&uring, &iau);
            let mut expect = det.coeffs().to_vec();
            expect.resize(k + 1, Poly::zero());
            prop_assert_eq!(chi, expect);
            // constant coefficient det(−A)·(−1)^k... check last coeff = (−1)^k det A
            let d = cofactor_det(&ring, &a);
            let last = if k % 2 == 0 { d } else { ring.neg(&d) };
            prop_assert_eq!(berkowitz(&ring, &a)[k].clone(), last);
        }

        #[test]
        fn gaussian_det_matches_cofactor(k in 1usize..=5, entries in prop::collection::vec(0u32..9, 25)) {
            let f = FieldCtx::new(3, 2).unwrap();
            let a = Matrix::from_fn(k, k, |i, j| entries[i * 5 + j]);
            prop_assert_eq!(det_field(&f, &a), cofactor_det(&f, &a));
        }
    }
}
