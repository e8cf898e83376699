//! Dense square and rectangular matrices over a [`Field`].

use super::field::Field;
use super::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_rows(rows: Vec<Vec<E>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> E) -> Self {
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<G>(&self, f: impl Fn(&E) -> G) -> Matrix<G> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn entries(&self) -> &[E] {
        &self.data
    }
}

pub fn identity<F: Field>(f: &F, n: usize) -> Matrix<F::Elem> {
    Matrix::from_fn(n, n, |i, j| if i == j { f.one() } else { f.zero() })
}

pub fn zeros<F: Field>(f: &F, rows: usize, cols: usize) -> Matrix<F::Elem> {
    Matrix::from_fn(rows, cols, |_, _| f.zero())
}

pub fn mul<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    assert_eq!(a.cols, b.rows, "dimension mismatch");
    Matrix::from_fn(a.rows, b.cols, |i, j| {
        (0..a.cols).fold(f.zero(), |acc, k| {
            let x = a.get(i, k);
            if f.is_zero(x) {
                acc
            } else {
                f.add(&acc, &f.mul(x, b.get(k, j)))
            }
        })
    })
}

pub fn add<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols), "dimension mismatch");
    Matrix::from_fn(a.rows, a.cols, |i, j| f.add(a.get(i, j), b.get(i, j)))
}

pub fn scale<F: Field>(f: &F, c: &F::Elem, a: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    a.map(|x| f.mul(c, x))
}

pub fn mul_vec<F: Field>(f: &F, a: &Matrix<F::Elem>, v: &[F::Elem]) -> Vec<F::Elem> {
    assert_eq!(a.cols, v.len(), "dimension mismatch");
    (0..a.rows)
        .map(|i| {
            a.row(i)
                .iter()
                .zip(v)
                .fold(f.zero(), |acc, (x, y)| f.add(&acc, &f.mul(x, y)))
        })
        .collect()
}

/// Kronecker product.
pub fn kron<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    Matrix::from_fn(a.rows * b.rows, a.cols * b.cols, |i, j| {
        f.mul(a.get(i / b.rows, j / b.cols), b.get(i % b.rows, j % b.cols))
    })
}

pub fn block_diag<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    Matrix::from_fn(a.rows + b.rows, a.cols + b.cols, |i, j| {
        match (i < a.rows, j < a.cols) {
            (true, true) => a.get(i, j).clone(),
            (false, false) => b.get(i - a.rows, j - a.cols).clone(),
            _ => f.zero(),
        }
    })
}

/// Determinant by Gaussian elimination.
pub fn det<F: Field>(f: &F, a: &Matrix<F::Elem>) -> F::Elem {
    assert!(a.is_square(), "determinant of a non-square matrix");
    let n = a.rows;
    let mut m = a.clone();
    let mut d = f.one();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !f.is_zero(m.get(i, c))) else {
            return f.zero();
        };
        if pr != c {
            for j in 0..n {
                m.data.swap(pr * n + j, c * n + j);
            }
            d = f.neg(&d);
        }
        let piv = m.get(c, c).clone();
        d = f.mul(&d, &piv);
        let inv = f.inv(&piv).unwrap();
        for i in c + 1..n {
            let factor = f.mul(m.get(i, c), &inv);
            if f.is_zero(&factor) {
                continue;
            }
            for j in c..n {
                let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(c, j)));
                m.set(i, j, v);
            }
        }
    }
    d
}

/// Inverse by Gauss-Jordan; `None` when singular.
pub fn inverse<F: Field>(f: &F, a: &Matrix<F::Elem>) -> Option<Matrix<F::Elem>> {
    assert!(a.is_square(), "inverse of a non-square matrix");
    let n = a.rows;
    let mut m = a.clone();
    let mut inv = identity(f, n);
    for c in 0..n {
        let pr = (c..n).find(|&i| !f.is_zero(m.get(i, c)))?;
        if pr != c {
            for j in 0..n {
                m.data.swap(pr * n + j, c * n + j);
                inv.data.swap(pr * n + j, c * n + j);
            }
        }
        let pinv = f.inv(m.get(c, c)).unwrap();
        for j in 0..n {
            let v = f.mul(m.get(c, j), &pinv);
            m.set(c, j, v);
            let w = f.mul(inv.get(c, j), &pinv);
            inv.set(c, j, w);
        }
        for i in 0..n {
            if i == c || f.is_zero(m.get(i, c)) {
                continue;
            }
            let factor = m.get(i, c).clone();
            for j in 0..n {
                let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(c, j)));
                m.set(i, j, v);
                let w = f.sub(inv.get(i, j), &f.mul(&factor, inv.get(c, j)));
                inv.set(i, j, w);
            }
        }
    }
    Some(inv)
}

/// Characteristic polynomial `det(X - A)`, constant term first, computed by
/// the division-free Berkowitz recursion.
pub fn charpoly<F: Field>(f: &F, a: &Matrix<F::Elem>) -> Poly<F::Elem> {
    assert!(a.is_square(), "characteristic polynomial of a non-square matrix");
    let n = a.rows;
    // coefficients from the leading one down
    let mut v = vec![f.one()];
    for r in 0..n {
        // column C = A[0..r, r], row R = A[r, 0..r]
        let mut t = Vec::with_capacity(r + 2);
        t.push(f.one());
        t.push(f.neg(a.get(r, r)));
        let mut w: Vec<F::Elem> = (0..r).map(|i| a.get(i, r).clone()).collect();
        for k in 0..r {
            if k > 0 {
                // w <- A_r w
                w = (0..r)
                    .map(|i| (0..r).fold(f.zero(), |acc, j| f.add(&acc, &f.mul(a.get(i, j), &w[j]))))
                    .collect();
            }
            let rw = (0..r).fold(f.zero(), |acc, j| f.add(&acc, &f.mul(a.get(r, j), &w[j])));
            t.push(f.neg(&rw));
        }
        let next: Vec<F::Elem> = (0..r + 2)
            .map(|i| {
                (0..=r.min(i)).fold(f.zero(), |acc, j| {
                    if i - j < t.len() && j < v.len() {
                        f.add(&acc, &f.mul(&t[i - j], &v[j]))
                    } else {
                        acc
                    }
                })
            })
            .collect();
        v = next;
    }
    v.reverse();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::finite::FiniteField;

    fn m(f: &FiniteField, rows: &[&[i64]]) -> Matrix<crate::algebra::finite::FfElem> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| f.from_int(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn berkowitz_matches_trace_and_det() {
        let f = FiniteField::prime(7).unwrap();
        let a = m(&f, &[&[1, 2, 3], &[0, 4, 5], &[6, 1, 2]]);
        let cp = charpoly(&f, &a);
        assert_eq!(cp.len(), 4);
        assert!(f.is_one(&cp[3]));
        assert_eq!(cp[2], f.neg(&f.from_int(7)));
        // constant term = (-1)^3 det
        assert_eq!(cp[0], f.neg(&det(&f, &a)));
        // Cayley-Hamilton
        let mut acc = zeros(&f, 3, 3);
        let mut pw = identity(&f, 3);
        for c in &cp {
            acc = add(&f, &acc, &scale(&f, c, &pw));
            pw = mul(&f, &pw, &a);
        }
        assert_eq!(acc, zeros(&f, 3, 3));
    }

    #[test]
    fn inverse_and_kron() {
        let f = FiniteField::prime(5).unwrap();
        let a = m(&f, &[&[1, 2], &[3, 4]]);
        let ai = inverse(&f, &a).unwrap();
        assert_eq!(mul(&f, &a, &ai), identity(&f, 2));
        let k = kron(&f, &a, &identity(&f, 2));
        assert_eq!(k.rows(), 4);
        assert_eq!(det(&f, &k), f.mul(&det(&f, &a), &det(&f, &a)));
        assert!(inverse(&f, &m(&f, &[&[1, 2], &[2, 4]])).is_none());
    }
}
