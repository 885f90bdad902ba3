use num_traits::{One, Signed, Zero};

use super::{int, Scalar};

/// Symmetric bilinear form on a `dim`-dimensional space, stored as an
/// exact matrix in a fixed orthonormal frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymForm {
    dim: usize,
    entries: Vec<Scalar>,
}

impl SymForm {
    pub fn zero(dim: usize) -> Self {
        SymForm { dim, entries: vec![Scalar::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![Scalar::one(); dim])
    }

    pub fn diagonal(diag: &[Scalar]) -> Self {
        let mut f = Self::zero(diag.len());
        for (i, d) in diag.iter().enumerate() {
            f.entries[i * diag.len() + i] = d.clone();
        }
        f
    }

    /// Builds a form from rows; `None` unless square and symmetric.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Option<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return None;
        }
        for a in 0..dim {
            for b in 0..a {
                if rows[a][b] != rows[b][a] {
                    return None;
                }
            }
        }
        Some(SymForm { dim, entries: rows.into_iter().flatten().collect() })
    }

    /// Symmetric part `(M + M^T)/2` of an arbitrary square matrix.
    pub fn symmetrize(rows: &[Vec<Scalar>]) -> Self {
        let dim = rows.len();
        let two = int(2);
        let mut f = Self::zero(dim);
        for a in 0..dim {
            for b in 0..dim {
                f.entries[a * dim + b] = (&rows[a][b] + &rows[b][a]) / &two;
            }
        }
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, a: usize, b: usize) -> &Scalar {
        &self.entries[a * self.dim + b]
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        self.entries.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    /// Value `v^T M w`.
    pub fn eval(&self, v: &[Scalar], w: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for a in 0..self.dim {
            if v[a].is_zero() {
                continue;
            }
            for b in 0..self.dim {
                if !w[b].is_zero() {
                    acc += &v[a] * self.get(a, b) * &w[b];
                }
            }
        }
        acc
    }

    pub fn sub(&self, other: &SymForm) -> SymForm {
        SymForm {
            dim: self.dim,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn add(&self, other: &SymForm) -> SymForm {
        SymForm {
            dim: self.dim,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> SymForm {
        SymForm { dim: self.dim, entries: self.entries.iter().map(|a| a * s).collect() }
    }

    pub fn neg(&self) -> SymForm {
        self.scale(&int(-1))
    }

    pub fn shift(&self, s: &Scalar) -> SymForm {
        let mut f = self.clone();
        for i in 0..self.dim {
            f.entries[i * self.dim + i] -= s;
        }
        f
    }

    pub fn restrict(&self, idx: &[usize]) -> SymForm {
        let mut f = SymForm::zero(idx.len());
        for (i, &a) in idx.iter().enumerate() {
            for (j, &b) in idx.iter().enumerate() {
                f.entries[i * idx.len() + j] = self.get(a, b).clone();
            }
        }
        f
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.dim).all(|a| (0..self.dim).all(|b| a == b || self.get(a, b).is_zero()))
    }

    pub fn trace(&self) -> Scalar {
        (0..self.dim).map(|i| self.get(i, i).clone()).sum()
    }

    /// Elementary symmetric functions `e_1..e_n` of the eigenvalues, i.e.
    /// signed characteristic-polynomial coefficients, by Faddeev–LeVerrier.
    pub fn eigen_symmetric_functions(&self) -> Vec<Scalar> {
        let n = self.dim;
        let mut e = Vec::with_capacity(n);
        // M_k = A M_{k-1} + c I, c_{n-k} = -tr(A M_k)/k with c_n = 1.
        let mut m = vec![Scalar::zero(); n * n];
        let mut c_prev = Scalar::one();
        for k in 1..=n {
            let mut next = vec![Scalar::zero(); n * n];
            for i in 0..n {
                for j in 0..n {
                    let mut acc = Scalar::zero();
                    for l in 0..n {
                        let a = self.get(i, l);
                        if !a.is_zero() && !m[l * n + j].is_zero() {
                            acc += a * &m[l * n + j];
                        }
                    }
                    if i == j {
                        acc += &c_prev;
                    }
                    next[i * n + j] = acc;
                }
            }
            let mut tr = Scalar::zero();
            for i in 0..n {
                for l in 0..n {
                    let a = self.get(i, l);
                    if !a.is_zero() && !next[l * n + i].is_zero() {
                        tr += a * &next[l * n + i];
                    }
                }
            }
            let c = -tr / int(k as i64);
            // det(λI - A) = Σ c_j λ^j  and  e_k = (-1)^k c_{n-k}
            e.push(if k % 2 == 0 { c.clone() } else { -c.clone() });
            c_prev = c;
            m = next;
        }
        e
    }

    pub fn determinant(&self) -> Scalar {
        if self.dim == 0 {
            return Scalar::one();
        }
        self.eigen_symmetric_functions().pop().unwrap_or_else(Scalar::one)
    }
}

/// Exact test that every eigenvalue is non-negative. A real-rooted
/// polynomial has no negative roots iff all elementary symmetric
/// functions of its roots are non-negative.
pub fn psd_check(form: &SymForm) -> bool {
    for i in 0..form.dim() {
        if form.get(i, i).is_negative() {
            return false;
        }
    }
    form.eigen_symmetric_functions().iter().all(|e| !e.is_negative())
}

/// Certified bracket `[lower, upper]` around the smallest eigenvalue with
/// `upper - lower <= tol`. `lower` is always a certified lower bound
/// (`form - lower*I` is PSD). When the minimum eigenvalue is found to be
/// rational the bracket collapses to a point.
pub fn min_eig_bounds(form: &SymForm, tol: &Scalar) -> (Scalar, Scalar) {
    assert!(tol.is_positive(), "tolerance must be positive");
    let n = form.dim();
    if n == 0 {
        return (Scalar::zero(), Scalar::zero());
    }
    // Gershgorin gives a feasible shift; the smallest diagonal entry is an
    // upper bound on the minimum eigenvalue.
    let mut lo: Option<Scalar> = None;
    let mut hi: Option<Scalar> = None;
    for i in 0..n {
        let radius: Scalar = (0..n).filter(|&j| j != i).map(|j| form.get(i, j).abs()).sum();
        let g = form.get(i, i) - radius;
        if lo.as_ref().is_none_or(|l| &g < l) {
            lo = Some(g);
        }
        if hi.as_ref().is_none_or(|h| form.get(i, i) < h) {
            hi = Some(form.get(i, i).clone());
        }
    }
    let mut lo = lo.unwrap();
    let mut hi = hi.unwrap();
    if psd_check(&form.shift(&hi)) {
        return (hi.clone(), hi);
    }
    if let Some(exact) = try_exact(form, &lo, &hi) {
        return (exact.clone(), exact);
    }
    let two = int(2);
    while &hi - &lo > *tol {
        let mid = (&lo + &hi) / &two;
        if psd_check(&form.shift(&mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
        if &hi - &lo <= tol * int(1 << 10) {
            if let Some(exact) = try_exact(form, &lo, &hi) {
                return (exact.clone(), exact);
            }
        }
    }
    let s = simplest_between(&lo, &hi);
    if psd_check(&form.shift(&s)) {
        lo = s;
    }
    (lo, hi)
}

/// Tries the simplest rational in `[lo, hi]` as an exact eigenvalue.
fn try_exact(form: &SymForm, lo: &Scalar, hi: &Scalar) -> Option<Scalar> {
    let s = simplest_between(lo, hi);
    let shifted = form.shift(&s);
    (psd_check(&shifted) && shifted.determinant().is_zero()).then_some(s)
}

/// The rational with the smallest denominator (then numerator) in the
/// closed interval `[lo, hi]`.
pub fn simplest_between(lo: &Scalar, hi: &Scalar) -> Scalar {
    assert!(lo <= hi);
    if !lo.is_positive() && !hi.is_negative() {
        return Scalar::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi, &-lo);
    }
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    let next = &fl + Scalar::one();
    if &next <= hi {
        return next;
    }
    // lo and hi share the integer part fl
    let inner = simplest_between(&(hi - &fl).recip(), &(lo - &fl).recip());
    fl + inner.recip()
}
