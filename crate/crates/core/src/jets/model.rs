//! Built-in coordinate realizations of catalog frames.

use rand::{Rng, SeedableRng};

use super::expr::{parse_expr, Expr};
use super::Num;
use crate::connection::ConnectionError;
use crate::exactnum::frac;
use crate::frame::{catalog_entry, GradedFrameSpec};
use crate::geometry::Geometry;

/// Numeric mode in which a model's identities are evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Polynomial coefficients: exact rational jets.
    Exact,
    /// Trigonometric coefficients: `f64` jets.
    Float,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        }
    }
}

/// Frame fields `E_a = Σ_m fields[a][m] ∂_m` on `ℝⁿ`, realizing `geo.spec`.
/// Every built-in model has unit frame determinant, so the coordinate
/// volume is the frame volume.
#[derive(Clone, Debug)]
pub struct CoordModel {
    pub name: String,
    pub coords: Vec<String>,
    pub fields: Vec<Vec<Expr>>,
    pub mode: Mode,
    /// Geometry of the realized frame spec with its own grading.
    pub geo: Geometry,
    /// The same frame under the basic grading.
    pub basic: Geometry,
}

impl CoordModel {
    fn build(name: &str, spec: &str, coords: &[&str], fields: &[&[&str]]) -> Result<Self, ConnectionError> {
        let coords: Vec<String> = coords.iter().map(|s| s.to_string()).collect();
        let fields: Vec<Vec<Expr>> = fields
            .iter()
            .map(|row| row.iter().map(|e| parse_expr(e, &coords).expect("built-in field expression")).collect())
            .collect();
        let mode = if fields.iter().flatten().any(Expr::uses_trig) { Mode::Float } else { Mode::Exact };
        let spec: GradedFrameSpec = catalog_entry(spec).expect("model realizes a catalog frame");
        let geo = Geometry::new(&spec)?;
        let basic = Geometry::new(&spec.basic())?;
        Ok(CoordModel { name: name.to_string(), coords, fields, mode, geo, basic })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn spec(&self) -> &GradedFrameSpec {
        &self.geo.spec
    }

    /// Deterministic sample points with small rational coordinates in
    /// `[-2, 2]`, converted into the numeric type `T`.
    pub fn points<T: Num>(&self, count: usize, seed: u64) -> Vec<Vec<T>> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                (0..self.dim())
                    .map(|_| {
                        let q = rng.gen_range(1..=7);
                        T::from_scalar(&frac(rng.gen_range(-2 * q..=2 * q), q))
                    })
                    .collect()
            })
            .collect()
    }
}

/// Heisenberg-type fields on pairs `(x_k, y_k)` and one vertical `t`:
/// `X_k = ∂x_k − (y_k/2)∂t`, `Y_k = ∂y_k + (x_k/2)∂t`, `T = ∂t`.
fn heisenberg_fields(pairs: usize) -> (Vec<String>, Vec<Vec<String>>) {
    let mut coords = Vec::new();
    for k in 1..=pairs {
        let sfx = if pairs == 1 { String::new() } else { k.to_string() };
        coords.push(format!("x{sfx}"));
        coords.push(format!("y{sfx}"));
    }
    coords.push("t".to_string());
    let n = coords.len();
    let mut fields = Vec::new();
    for k in 0..pairs {
        for (own, other, sign) in [(2 * k, 2 * k + 1, "-"), (2 * k + 1, 2 * k, "")] {
            let mut row = vec!["0".to_string(); n];
            row[own] = "1".into();
            row[n - 1] = format!("{sign}{}/2", coords[other]);
            fields.push(row);
        }
    }
    let mut t = vec!["0".to_string(); n];
    t[n - 1] = "1".into();
    fields.push(t);
    (coords, fields)
}

pub fn builtin_models() -> Vec<CoordModel> {
    let mut out = Vec::new();
    for (name, pairs) in [("heisenberg3", 1), ("heisenberg5", 2)] {
        let (coords, fields) = heisenberg_fields(pairs);
        let c: Vec<&str> = coords.iter().map(String::as_str).collect();
        let rows: Vec<Vec<&str>> = fields.iter().map(|r| r.iter().map(String::as_str).collect()).collect();
        let rows: Vec<&[&str]> = rows.iter().map(Vec::as_slice).collect();
        out.push(CoordModel::build(name, name, &c, &rows));
    }
    out.push(CoordModel::build(
        "c3",
        "c3",
        &["x", "y", "t", "s"],
        &[&["1", "0", "0", "0"], &["0", "1", "x", "x^2/2"], &["0", "0", "1", "x"], &["0", "0", "0", "1"]],
    ));
    out.push(CoordModel::build(
        "sn",
        "sn",
        &["x", "y", "t", "s"],
        &[
            &["1", "0", "0", "0"],
            &["0", "1", "sin(x)", "-cos(x)"],
            &["0", "0", "cos(x)", "sin(x)"],
            &["0", "0", "-sin(x)", "cos(x)"],
        ],
    ));
    out.into_iter().map(|m| m.expect("catalog frames admit the canonical connection")).collect()
}

pub fn model(name: &str) -> Option<CoordModel> {
    builtin_models().into_iter().find(|m| m.name == name)
}
