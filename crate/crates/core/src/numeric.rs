//! Machine-precision backend for `𝕄ₙ(ℂ)`: decomposing 2×2 projections into
//! Dye form and detecting which rank-one 3×3 projections admit one.
//!
//! Predicates compare in the max-entry norm against a tolerance `ε` carried by
//! each entry (default `1e-12`).

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::classify::is_projection;
use crate::algebra::{ExactScalar, StarRing};
use crate::error::{Error, Result};
use crate::matalg::{dye, StarMatrix};

pub const DEFAULT_TOL: f64 = 1e-12;

/// A complex number together with the tolerance used to compare it.
#[derive(Clone, Copy, Debug)]
pub struct NumScalar {
    pub z: Complex64,
    pub tol: f64,
}

impl NumScalar {
    pub fn new(z: Complex64, tol: f64) -> Self {
        NumScalar { z, tol }
    }

    fn with(&self, other: &Self, z: Complex64) -> Self {
        NumScalar {
            z,
            tol: self.tol.max(other.tol),
        }
    }
}

impl StarRing for NumScalar {
    type Context = f64;

    fn context(&self) -> f64 {
        self.tol
    }
    fn zero_in(tol: f64) -> Self {
        NumScalar::new(Complex64::new(0.0, 0.0), tol)
    }
    fn one_in(tol: f64) -> Self {
        NumScalar::new(Complex64::new(1.0, 0.0), tol)
    }
    fn scalar_in(tol: f64, c: &ExactScalar) -> Self {
        NumScalar::new(c.to_complex64(), tol)
    }
    fn add(&self, other: &Self) -> Result<Self> {
        Ok(self.with(other, self.z + other.z))
    }
    fn sub(&self, other: &Self) -> Result<Self> {
        Ok(self.with(other, self.z - other.z))
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        Ok(self.with(other, self.z * other.z))
    }
    fn neg(&self) -> Self {
        NumScalar::new(-self.z, self.tol)
    }
    fn scale(&self, c: &ExactScalar) -> Self {
        NumScalar::new(self.z * c.to_complex64(), self.tol)
    }
    fn adjoint(&self) -> Self {
        NumScalar::new(self.z.conj(), self.tol)
    }
    fn equals(&self, other: &Self) -> Result<bool> {
        Ok((self.z - other.z).norm() <= self.tol.max(other.tol))
    }
    fn dye_kernel(&self) -> Result<Self> {
        let denom = 1.0 + self.z.norm_sqr();
        if denom.abs() <= self.tol {
            return Err(Error::SingularKernel);
        }
        Ok(NumScalar::new(Complex64::new(1.0 / denom, 0.0), self.tol))
    }
}

pub type ComplexMatrix = StarMatrix<NumScalar>;

pub fn complex_matrix(dim: usize, entries: &[Complex64], tol: f64) -> Result<ComplexMatrix> {
    StarMatrix::from_entries(
        dim,
        entries.iter().map(|&z| NumScalar::new(z, tol)).collect(),
    )
}

pub fn values(m: &ComplexMatrix) -> Vec<Complex64> {
    m.entries().iter().map(|e| e.z).collect()
}

/// `max |a_{ij} − b_{ij}|`.
pub fn max_entry_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| (x.z - y.z).norm())
        .fold(0.0, f64::max)
}

fn tol_of(m: &ComplexMatrix) -> f64 {
    m.inner_context()
}

/// Numerical rank by Gaussian elimination with partial pivoting; pivots
/// with magnitude at most `tol` count as zero.
pub fn numeric_rank(m: &ComplexMatrix, tol: f64) -> usize {
    let d = m.dim();
    let mut a = values(m);
    let mut rank = 0;
    for col in 0..d {
        if rank == d {
            break;
        }
        let (pivot, mag) =
            (rank..d)
                .map(|r| (r, a[r * d + col].norm()))
                .fold(
                    (rank, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
        if mag <= tol {
            continue;
        }
        for c in 0..d {
            a.swap(rank * d + c, pivot * d + c);
        }
        let p = a[rank * d + col];
        for r in rank + 1..d {
            let f = a[r * d + col] / p;
            for c in col..d {
                let v = a[rank * d + c];
                a[r * d + c] -= f * v;
            }
        }
        rank += 1;
    }
    rank
}

/// Dye parameters of a non-trivial 2×2 projection.
#[derive(Clone, Debug, Serialize)]
pub struct Decomposition2 {
    /// Canonical orientation: `P_{i,j}(a)` reproduces the input with `|a| ≤ 1`.
    pub i: usize,
    pub j: usize,
    #[serde(serialize_with = "ser_complex")]
    pub a: Complex64,
    /// `2b / (1 + √(1 − 4|b|²))` with `b = p₁₂`.
    #[serde(serialize_with = "ser_complex")]
    pub branch_plus: Complex64,
    /// `2b / (1 − √(1 − 4|b|²))`; absent when `b = 0` or the branches coincide.
    #[serde(serialize_with = "ser_opt_complex")]
    pub branch_minus: Option<Complex64>,
    /// The branch `c` with `P_{1,2}(c) = p`, when one exists (it fails only for `E₂₂`).
    #[serde(serialize_with = "ser_opt_complex")]
    pub p12_parameter: Option<Complex64>,
    /// Max-entry distance between `P_{i,j}(a)` and the input.
    pub reconstruction_error: f64,
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

fn ser_opt_complex<S: serde::Serializer>(
    z: &Option<Complex64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    z.map(|z| [z.re, z.im]).serialize(s)
}

fn reconstruct(i: usize, j: usize, a: Complex64, dim: usize, tol: f64) -> Result<ComplexMatrix> {
    dye(i, j, &NumScalar::new(a, tol), dim)
}

/// Writes a non-trivial 2×2 projection as a Dye projection.
///
/// With `b = p₁₂` and `s = √(1 − 4|b|²)`, the diagonal entry `p₁₁` is one
/// of `(1 ± s)/2`; `P_{1,2}(2b/(1+s))` covers `p₁₁ ≥ 1/2` and
/// `P_{1,2}(2b/(1−s))` the rest. The canonical answer keeps `|a| ≤ 1` by
/// switching to `P_{2,1}` when `p₂₂ > p₁₁`.
pub fn decompose2(p: &ComplexMatrix) -> Result<Decomposition2> {
    if p.dim() != 2 {
        return Err(Error::DimensionMismatch {
            left: 2,
            right: p.dim(),
        });
    }
    let tol = tol_of(p);
    if !is_projection(p)? {
        return Err(Error::NotAProjection);
    }
    if p.is_zero()? || p.equals(&p.one_like())? {
        return Err(Error::TrivialProjection);
    }
    let v = values(p);
    let (p11, b, p22) = (v[0].re, v[1], v[3].re);
    let zero = Complex64::new(0.0, 0.0);

    if b.norm() <= tol {
        let (i, j) = if p11 >= p22 { (1, 2) } else { (2, 1) };
        let err = max_entry_distance(&reconstruct(i, j, zero, 2, tol)?, p);
        return Ok(Decomposition2 {
            i,
            j,
            a: zero,
            branch_plus: zero,
            branch_minus: None,
            p12_parameter: (i == 1).then_some(zero),
            reconstruction_error: err,
        });
    }

    // Equals √(1 − 4|b|²) on trace-one projections, without cancellation.
    let s = (p11 - p22).abs();
    let branch_plus = 2.0 * b / (1.0 + s);
    let branch_minus = (s > tol).then(|| 2.0 * b / (1.0 - s));
    let p12_parameter = if p11 >= 0.5 {
        branch_plus
    } else {
        branch_minus.unwrap_or(branch_plus)
    };
    let (i, j, a) = if p11 >= p22 {
        (1, 2, branch_plus)
    } else {
        (2, 1, 2.0 * b.conj() / (1.0 + s))
    };
    let err = max_entry_distance(&reconstruct(i, j, a, 2, tol)?, p);
    Ok(Decomposition2 {
        i,
        j,
        a,
        branch_plus,
        branch_minus,
        p12_parameter: Some(p12_parameter),
        reconstruction_error: err,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DyeWitness {
    pub i: usize,
    pub j: usize,
    #[serde(serialize_with = "ser_complex")]
    pub a: Complex64,
    pub reconstruction_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Obstruction {
    /// Whether the projection equals some `P_{i,j}(a)`.
    pub representable: bool,
    pub rank: usize,
    /// Number of non-zero coordinates of the range vector (rank one only).
    pub support: Option<usize>,
    pub witness: Option<DyeWitness>,
}

/// Decides whether a projection in `𝕄₃(ℂ)` (or any `𝕄_d(ℂ)`) is a Dye
/// projection: it must be rank one with range inside a coordinate plane.
pub fn rank1_obstruction3(p: &ComplexMatrix) -> Result<Obstruction> {
    let tol = tol_of(p);
    if !is_projection(p)? {
        return Err(Error::NotAProjection);
    }
    let d = p.dim();
    let v = values(p);
    let rank = numeric_rank(p, tol);
    if rank != 1 || d < 2 {
        return Ok(Obstruction {
            representable: false,
            rank,
            support: None,
            witness: None,
        });
    }
    // The column through the largest diagonal entry spans the range.
    let c = (0..d)
        .max_by(|&x, &y| v[x * d + x].re.total_cmp(&v[y * d + y].re))
        .unwrap_or(0);
    let nonzero: Vec<usize> = (0..d).filter(|&k| v[k * d + c].norm() > tol).collect();
    let witness = match nonzero.as_slice() {
        [k] => {
            let i = k + 1;
            let j = if i == 1 { 2 } else { 1 };
            Some((i, j, Complex64::new(0.0, 0.0)))
        }
        [k, l] => {
            let (i, j) = (k + 1, l + 1);
            Some((i, j, v[k * d + l] / v[k * d + k]))
        }
        _ => None,
    };
    let witness = match witness {
        Some((i, j, a)) => {
            let err = max_entry_distance(&reconstruct(i, j, a, d, tol)?, p);
            Some(DyeWitness {
                i,
                j,
                a,
                reconstruction_error: err,
            })
        }
        None => None,
    };
    Ok(Obstruction {
        representable: witness.is_some(),
        rank,
        support: Some(nonzero.len()),
        witness,
    })
}
