//! Graded orthonormal frames with constant structure constants, and the
//! grading axioms they must satisfy.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactnum::{frac, int, rank, rref, Scalar};
use crate::tensor::Tensor;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("grade index {0} out of range")]
    BadIndex(usize),
    #[error("grade ranks {ranks:?} do not partition a {dim}-dimensional frame with at least one vertical block")]
    InvalidRanks { ranks: Vec<usize>, dim: usize },
    #[error("{0} labels given for a {1}-dimensional frame")]
    LabelCount(usize, usize),
}

/// `[E_a, E_b] = Σ_k c[a][b][k] E_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstants {
    c: Tensor<Scalar>,
}

impl StructureConstants {
    pub fn zero(dim: usize) -> Self {
        StructureConstants { c: Tensor::zeros(dim, 3) }
    }

    /// Sets `[E_a, E_b] = Σ coeff·E_k` and the antisymmetric partner.
    pub fn set_bracket(&mut self, a: usize, b: usize, terms: &[(Scalar, usize)]) {
        for k in 0..self.dim() {
            self.c[[a, b, k]] = Scalar::zero();
            self.c[[b, a, k]] = Scalar::zero();
        }
        for (coeff, k) in terms {
            self.c[[a, b, *k]] += coeff;
            self.c[[b, a, *k]] -= coeff;
        }
    }

    /// Raw setter that does not enforce antisymmetry; used to build
    /// deliberately broken inputs.
    pub fn set_raw(&mut self, a: usize, b: usize, k: usize, v: Scalar) {
        self.c[[a, b, k]] = v;
    }

    pub fn dim(&self) -> usize {
        self.c.dim()
    }

    pub fn get(&self, a: usize, b: usize, k: usize) -> &Scalar {
        &self.c[[a, b, k]]
    }

    pub fn tensor(&self) -> &Tensor<Scalar> {
        &self.c
    }

    pub fn bracket(&self, a: usize, b: usize) -> &[Scalar] {
        self.c.fiber(&[a, b])
    }
}

/// Outcome of the exact antisymmetry and Jacobi checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraReport {
    /// First `(a, b, k)` with `c[a][b][k] + c[b][a][k] != 0`.
    pub antisymmetry_violation: Option<(usize, usize, usize, Scalar)>,
    /// First `(a, b, c, k)` where the cyclic double bracket has a nonzero
    /// `E_k` component.
    pub jacobi_violation: Option<(usize, usize, usize, usize, Scalar)>,
}

impl AlgebraReport {
    pub fn passes(&self) -> bool {
        self.antisymmetry_violation.is_none() && self.jacobi_violation.is_none()
    }
}

pub fn validate_algebra(sc: &StructureConstants) -> AlgebraReport {
    let n = sc.dim();
    let mut antisymmetry_violation = None;
    'outer: for a in 0..n {
        for b in 0..n {
            for k in 0..n {
                let s = sc.get(a, b, k) + sc.get(b, a, k);
                if !s.is_zero() {
                    antisymmetry_violation = Some((a, b, k, s));
                    break 'outer;
                }
            }
        }
    }
    let mut jacobi_violation = None;
    'jac: for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for k in 0..n {
                    let r = double_bracket(sc, a, b, c, k)
                        + double_bracket(sc, b, c, a, k)
                        + double_bracket(sc, c, a, b, k);
                    if !r.is_zero() {
                        jacobi_violation = Some((a, b, c, k, r));
                        break 'jac;
                    }
                }
            }
        }
    }
    AlgebraReport { antisymmetry_violation, jacobi_violation }
}

/// `E_k` component of `[E_a, [E_b, E_c]]`.
pub fn double_bracket(sc: &StructureConstants, a: usize, b: usize, c: usize, k: usize) -> Scalar {
    let mut acc = Scalar::zero();
    for (m, v) in sc.bracket(b, c).iter().enumerate() {
        if !v.is_zero() {
            acc += v * sc.get(a, m, k);
        }
    }
    acc
}

/// An sRC-manifold model: orthonormal frame, structure constants, and
/// grade ranks `(n_0, n_1, …, n_r)` with `n_0 = dim HM`.
/// `[E_a, E_b] = Σ coeff E_k` as `(a, b, [(coeff, k)])`.
pub type BracketRow = (usize, usize, Vec<(Scalar, usize)>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedFrameSpec {
    pub name: String,
    pub labels: Vec<String>,
    sc: StructureConstants,
    ranks: Vec<usize>,
    grade_of: Vec<usize>,
}

impl GradedFrameSpec {
    pub fn new(
        name: impl Into<String>,
        labels: Vec<String>,
        sc: StructureConstants,
        ranks: Vec<usize>,
    ) -> Result<Self, FrameError> {
        let dim = sc.dim();
        if ranks.len() < 2 || ranks.contains(&0) || ranks.iter().sum::<usize>() != dim {
            return Err(FrameError::InvalidRanks { ranks, dim });
        }
        let labels = if labels.is_empty() { (1..=dim).map(|i| format!("E{i}")).collect() } else { labels };
        if labels.len() != dim {
            return Err(FrameError::LabelCount(labels.len(), dim));
        }
        let grade_of = ranks.iter().enumerate().flat_map(|(j, &r)| std::iter::repeat_n(j, r)).collect();
        Ok(GradedFrameSpec { name: name.into(), labels, sc, ranks, grade_of })
    }

    /// Builds a spec from a sparse bracket table.
    pub fn from_brackets(
        name: &str,
        labels: &[&str],
        ranks: &[usize],
        brackets: &[BracketRow],
    ) -> Result<Self, FrameError> {
        let mut sc = StructureConstants::zero(labels.len());
        for (a, b, terms) in brackets {
            sc.set_bracket(*a, *b, terms);
        }
        Self::new(name, labels.iter().map(|s| s.to_string()).collect(), sc, ranks.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.sc.dim()
    }

    pub fn sc(&self) -> &StructureConstants {
        &self.sc
    }

    pub fn c(&self, a: usize, b: usize, k: usize) -> &Scalar {
        self.sc.get(a, b, k)
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Number of vertical blocks `r`.
    pub fn steps(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn grade(&self, a: usize) -> usize {
        self.grade_of[a]
    }

    pub fn indices_of_grade(&self, j: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&a| self.grade_of[a] == j).collect()
    }

    pub fn horizontal(&self) -> Vec<usize> {
        self.indices_of_grade(0)
    }

    pub fn vertical(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&a| self.grade_of[a] > 0).collect()
    }

    pub fn is_horizontal(&self, a: usize) -> bool {
        self.grade_of[a] == 0
    }

    pub fn dim_h(&self) -> usize {
        self.ranks[0]
    }

    pub fn dim_v(&self) -> usize {
        self.dim() - self.ranks[0]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// The same frame with a different grading of the vertical part.
    pub fn with_ranks(&self, ranks: Vec<usize>, name: String) -> Result<Self, FrameError> {
        Self::new(name, self.labels.clone(), self.sc.clone(), ranks)
    }

    /// The basic (one-block) grading of the same frame.
    pub fn basic(&self) -> Self {
        if self.steps() == 1 {
            self.clone()
        } else {
            subgrading(self, 1).expect("k = 1 is always a valid subgrading")
        }
    }
}

/// Flags for the grading axioms, exact over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradingReport {
    /// `HM ⊕ V⁽ʲ⁾ ⊕ [HM, V⁽ʲ⁾] ⊆ HM ⊕ V⁽ʲ⁾ ⊕ V⁽ʲ⁺¹⁾`, for `j = 0..=r`.
    pub grading_valid: Vec<bool>,
    /// The same inclusion holds with equality.
    pub j_regular: Vec<bool>,
    pub equiregular: bool,
    pub bracket_generating: bool,
    pub vm_integrable: bool,
}

impl GradingReport {
    pub fn all_valid(&self) -> bool {
        self.grading_valid.iter().all(|&v| v)
    }
}

pub fn validate_grading(f: &GradedFrameSpec) -> GradingReport {
    let n = f.dim();
    let r = f.steps();
    let h = f.horizontal();
    let mut grading_valid = Vec::with_capacity(r + 1);
    let mut j_regular = Vec::with_capacity(r + 1);
    for j in 0..=r {
        let vj = f.indices_of_grade(j);
        let allowed = |k: usize| f.grade(k) == 0 || f.grade(k) == j || f.grade(k) == j + 1;
        let mut valid = true;
        let mut next_components = Vec::new();
        for &a in &h {
            for &b in &vj {
                let br = f.sc.bracket(a, b);
                if (0..n).any(|k| !allowed(k) && !br[k].is_zero()) {
                    valid = false;
                }
                next_components.push(
                    (0..n).filter(|&k| f.grade(k) == j + 1).map(|k| br[k].clone()).collect::<Vec<_>>(),
                );
            }
        }
        let next_dim = if j < r { f.ranks[j + 1] } else { 0 };
        grading_valid.push(valid);
        j_regular.push(valid && rank(&next_components) == next_dim);
    }
    let equiregular = j_regular.iter().all(|&v| v);

    // span saturation H, H + [H,H], … until stable
    let unit = |a: usize| (0..n).map(|k| if k == a { Scalar::one() } else { Scalar::zero() }).collect::<Vec<_>>();
    let mut span: Vec<Vec<Scalar>> = h.iter().map(|&a| unit(a)).collect();
    loop {
        let before = rank(&span);
        let mut grown = span.clone();
        for u in &span {
            for v in &span {
                grown.push(bracket_vectors(&f.sc, u, v));
            }
        }
        span = basis(&grown);
        if span.len() == before {
            break;
        }
    }
    let bracket_generating = span.len() == n;

    let v = f.vertical();
    let vm_integrable =
        v.iter().all(|&a| v.iter().all(|&b| h.iter().all(|&k| f.c(a, b, k).is_zero())));
    GradingReport { grading_valid, j_regular, equiregular, bracket_generating, vm_integrable }
}

fn bracket_vectors(sc: &StructureConstants, u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
    let n = sc.dim();
    let mut out = vec![Scalar::zero(); n];
    for a in 0..n {
        if u[a].is_zero() {
            continue;
        }
        for b in 0..n {
            if v[b].is_zero() {
                continue;
            }
            let w = &u[a] * &v[b];
            for (k, c) in sc.bracket(a, b).iter().enumerate() {
                if !c.is_zero() {
                    out[k] += &w * c;
                }
            }
        }
    }
    out
}

fn basis(vectors: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    rref(vectors).0
}

/// Keeps the first `k` blocks `V⁽⁰⁾..V⁽ᵏ⁻¹⁾` and merges the rest into `V⁽ᵏ⁾`.
pub fn subgrading(f: &GradedFrameSpec, k: usize) -> Result<GradedFrameSpec, FrameError> {
    if k == 0 || k >= f.steps() {
        return Err(FrameError::BadIndex(k));
    }
    let mut ranks: Vec<usize> = f.ranks[..k].to_vec();
    ranks.push(f.ranks[k..].iter().sum());
    let name = if k == 1 { format!("{}@basic", f.name) } else { format!("{}@{k}", f.name) };
    f.with_ranks(ranks, name)
}

fn one() -> Scalar {
    int(1)
}

/// Built-in models used as regression oracles.
pub fn builtin_catalog() -> Vec<GradedFrameSpec> {
    let mut out = Vec::new();
    let mk = |name: &str, labels: &[&str], ranks: &[usize], br: &[BracketRow]| {
        GradedFrameSpec::from_brackets(name, labels, ranks, br).expect("catalog entries are well formed")
    };
    out.push(mk("abelian3", &["X", "Y", "T"], &[2, 1], &[]));
    out.push(mk("heisenberg3", &["X", "Y", "T"], &[2, 1], &[(0, 1, vec![(one(), 2)])]));
    out.push(mk(
        "heisenberg5",
        &["X1", "Y1", "X2", "Y2", "T"],
        &[4, 1],
        &[(0, 1, vec![(one(), 4)]), (2, 3, vec![(one(), 4)])],
    ));
    out.push(mk(
        "free23",
        &["X1", "X2", "X3", "T12", "T13", "T23"],
        &[3, 3],
        &[(0, 1, vec![(one(), 3)]), (0, 2, vec![(one(), 4)]), (1, 2, vec![(one(), 5)])],
    ));
    let c3 = [(0, 1, vec![(one(), 2)]), (0, 2, vec![(one(), 3)])];
    out.push(mk("c3", &["X", "Y", "T", "S"], &[2, 1, 1], &c3));
    out.push(mk("c3_basic", &["X", "Y", "T", "S"], &[2, 2], &c3));
    out.push(mk(
        "sn",
        &["X", "Y", "T", "S"],
        &[2, 2],
        &[(0, 1, vec![(one(), 2)]), (0, 3, vec![(int(-1), 2)]), (0, 2, vec![(one(), 3)])],
    ));
    out.push(unimodular3("su2", int(1), int(1), int(1)));
    out.push(unimodular3("sl2", int(1), int(1), int(-1)));
    out.push(unimodular3("su2_squashed", int(2), int(1), int(1)));
    out.push(mk(
        "nonunimodular3",
        &["X", "Y", "T"],
        &[2, 1],
        &[(0, 1, vec![(one(), 2)]), (0, 2, vec![(one(), 2)])],
    ));
    out
}

/// Three-dimensional unimodular algebra `[Y,T] = n1 X`, `[T,X] = n2 Y`,
/// `[X,Y] = n3 T` (Jacobi holds for every choice of constants).
pub fn unimodular3(name: &str, n1: Scalar, n2: Scalar, n3: Scalar) -> GradedFrameSpec {
    GradedFrameSpec::from_brackets(
        name,
        &["X", "Y", "T"],
        &[2, 1],
        &[(1, 2, vec![(n1, 0)]), (2, 0, vec![(n2, 1)]), (0, 1, vec![(n3, 2)])],
    )
    .expect("three-dimensional frame")
}

pub fn catalog_entry(name: &str) -> Option<GradedFrameSpec> {
    builtin_catalog().into_iter().find(|f| f.name == name)
}

/// Step-two nilpotent algebra on `d` horizontal and `m` vertical vectors
/// with the given `[X_i, X_j] = Σ coeff T_α` table (Jacobi is automatic).
pub fn step2(name: &str, d: usize, m: usize, coeffs: &[(usize, usize, usize, Scalar)]) -> GradedFrameSpec {
    let mut sc = StructureConstants::zero(d + m);
    for (i, j, alpha, v) in coeffs {
        let old = sc.get(*i, *j, d + alpha).clone();
        sc.set_raw(*i, *j, d + alpha, &old + v);
        sc.set_raw(*j, *i, d + alpha, -(&old + v));
    }
    let labels = (1..=d).map(|i| format!("X{i}")).chain((1..=m).map(|a| format!("T{a}"))).collect();
    GradedFrameSpec::new(name, labels, sc, vec![d, m]).expect("step-two ranks partition the frame")
}

/// Deterministic random step-two algebra; coefficients are small rationals.
pub fn random_step2(seed: u64) -> GradedFrameSpec {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let d = rng.gen_range(2..=4);
    let m = rng.gen_range(1..=2);
    let mut coeffs = Vec::new();
    for i in 0..d {
        for j in (i + 1)..d {
            for alpha in 0..m {
                if rng.gen_bool(0.7) {
                    let v = frac(rng.gen_range(-3..=3), rng.gen_range(1..=2));
                    coeffs.push((i, j, alpha, v));
                }
            }
        }
    }
    step2(&format!("step2_seed{seed}"), d, m, &coeffs)
}

/// The same Lie algebra in a random integer basis, declared orthonormal
/// and graded by `ranks`. Produces frames that are generally not normal.
/// `None` if the drawn basis change is singular or the grading is
/// invalid for it.
pub fn random_rebased(base: &GradedFrameSpec, ranks: &[usize], seed: u64) -> Option<GradedFrameSpec> {
    use rand::{Rng, SeedableRng};
    let n = base.dim();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let p: Vec<Vec<Scalar>> = (0..n).map(|_| (0..n).map(|_| int(rng.gen_range(-2..=2))).collect()).collect();
    // Invert P by reducing [P | I].
    let aug: Vec<Vec<Scalar>> = (0..n)
        .map(|i| p[i].iter().cloned().chain((0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() })).collect())
        .collect();
    let (red, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    let q: Vec<Vec<Scalar>> = red.iter().map(|r| r[n..].to_vec()).collect();
    // e'_a = Σ_i p[a][i] e_i and e_l = Σ_k q[l][k] e'_k.
    let mut sc = StructureConstants::zero(n);
    for a in 0..n {
        for b in 0..n {
            let mut inner = vec![Scalar::zero(); n];
            for i in 0..n {
                for j in 0..n {
                    let w = &p[a][i] * &p[b][j];
                    if w.is_zero() {
                        continue;
                    }
                    for (l, x) in inner.iter_mut().enumerate() {
                        *x += &w * base.c(i, j, l);
                    }
                }
            }
            for k in 0..n {
                let v: Scalar = (0..n).map(|l| &inner[l] * &q[l][k]).sum();
                sc.set_raw(a, b, k, v);
            }
        }
    }
    let labels = (1..=n).map(|i| format!("E{i}")).collect();
    let f = GradedFrameSpec::new(format!("{}_rebased{seed}", base.name), labels, sc, ranks.to_vec()).ok()?;
    validate_grading(&f).all_valid().then_some(f)
}
