//! Small dense symmetric linear algebra: assembly, Cholesky factorization,
//! log-determinants and rank-one updates.

use crate::scalar::Real;

/// Dense symmetric matrix stored in full row-major form.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> SymMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        SymMatrix {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        m.add_diagonal(T::one());
        m
    }

    pub fn from_diagonal(d: &[T]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &x) in d.iter().enumerate() {
            m.data[i * d.len() + i] = x;
        }
        m
    }

    /// Builds from row-major data; the upper triangle is mirrored into the lower.
    pub fn from_rows(n: usize, rows: &[T]) -> Self {
        assert_eq!(rows.len(), n * n);
        let mut m = SymMatrix {
            n,
            data: rows.to_vec(),
        };
        for i in 0..n {
            for j in 0..i {
                m.data[i * n + j] = m.data[j * n + i];
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    pub fn add_diagonal(&mut self, c: T) {
        for i in 0..self.n {
            self.data[i * self.n + i] = self.data[i * self.n + i] + c;
        }
    }

    /// `self += c · a aᵀ` for a sparse vector `a`.
    pub fn add_rank_one(&mut self, c: T, a: &SparseVec<T>) {
        for &(i, ai) in &a.0 {
            for &(j, aj) in &a.0 {
                let idx = i * self.n + j;
                self.data[idx] = self.data[idx] + c * ai * aj;
            }
        }
    }
}

/// Sparse vector as `(index, value)` pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseVec<T>(pub Vec<(usize, T)>);

impl<T: Real> SparseVec<T> {
    pub fn to_dense(&self, n: usize) -> Vec<T> {
        let mut out = vec![T::zero(); n];
        for &(i, x) in &self.0 {
            out[i] = out[i] + x;
        }
        out
    }
}

/// Lower-triangular Cholesky factor `L` with `M = L Lᵀ`.
#[derive(Clone, Debug)]
pub struct Cholesky<T> {
    n: usize,
    l: Vec<T>,
}

impl<T: Real> Cholesky<T> {
    /// Factorizes `m`; `None` unless `m` is positive definite.
    pub fn factor(m: &SymMatrix<T>) -> Option<Self> {
        let n = m.n;
        let mut l = vec![T::zero(); n * n];
        for j in 0..n {
            let mut d = m.get(j, j);
            for k in 0..j {
                d = d - l[j * n + k] * l[j * n + k];
            }
            if !(d > T::zero()) || !d.is_finite() {
                return None;
            }
            let djj = d.sqrt();
            l[j * n + j] = djj;
            for i in (j + 1)..n {
                let mut s = m.get(i, j);
                for k in 0..j {
                    s = s - l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = s / djj;
            }
        }
        Some(Cholesky { n, l })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn logdet(&self) -> T {
        let two = T::one() + T::one();
        (0..self.n).fold(T::zero(), |acc, i| acc + self.l[i * self.n + i].ln()) * two
    }

    /// Solves `L y = b` in place.
    pub fn forward_solve(&self, b: &mut [T]) {
        let n = self.n;
        for i in 0..n {
            let mut s = b[i];
            for k in 0..i {
                s = s - self.l[i * n + k] * b[k];
            }
            b[i] = s / self.l[i * n + i];
        }
    }

    /// `ln det(M + c a aᵀ) − ln det(M)` via the matrix determinant lemma.
    pub fn rank_one_gain(&self, c: T, a: &[T]) -> T {
        let mut y = a.to_vec();
        self.forward_solve(&mut y);
        let q = y.iter().fold(T::zero(), |acc, &v| acc + v * v);
        (c * q).ln_1p()
    }

    /// Updates the factor in place to that of `M + x xᵀ`; `x` is clobbered.
    pub fn update(&mut self, x: &mut [T]) {
        let n = self.n;
        for j in 0..n {
            let ljj = self.l[j * n + j];
            let r = (ljj * ljj + x[j] * x[j]).sqrt();
            let c = r / ljj;
            let s = x[j] / ljj;
            self.l[j * n + j] = r;
            for i in (j + 1)..n {
                let lij = (self.l[i * n + j] + s * x[i]) / c;
                self.l[i * n + j] = lij;
                x[i] = c * x[i] - s * lij;
            }
        }
    }

    /// Applies `M += c a aᵀ` and returns the log-determinant increase.
    pub fn add_rank_one(&mut self, c: T, a: &[T]) -> T {
        if c == T::zero() {
            return T::zero();
        }
        let gain = self.rank_one_gain(c, a);
        let sc = c.sqrt();
        let mut x: Vec<T> = a.iter().map(|&v| v * sc).collect();
        self.update(&mut x);
        gain
    }
}
