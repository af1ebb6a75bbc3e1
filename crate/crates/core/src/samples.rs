//! Seeded random elements and a fixed pool of exactly known unitaries.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::classify::is_involution;
use crate::algebra::{words_of_length, CuntzAlgebra, CuntzElement, ExactScalar, Word};
use crate::error::Result;
use crate::iso::CuntzMatrix;
use crate::ktheory::{order_of, UnitaryCertificate};
use crate::matalg::StarMatrix;
use crate::numeric::{complex_matrix, ComplexMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A unitary together with what is known about it.
#[derive(Clone, Debug)]
pub struct PoolUnitary {
    pub label: String,
    pub element: CuntzElement,
    /// Smallest `m ≤ 24` with `u^m = 1`, if any.
    pub order: Option<u32>,
    /// An explicit factorization into involutions, if known.
    pub involutions: Option<Vec<CuntzElement>>,
}

impl PoolUnitary {
    pub fn certificate(&self) -> Option<UnitaryCertificate> {
        if let Some(zs) = &self.involutions {
            return Some(UnitaryCertificate::Involutions(zs.clone()));
        }
        self.order.map(UnitaryCertificate::Order)
    }

    pub fn is_involution(&self) -> bool {
        self.order.is_some_and(|m| m <= 2) && is_involution(&self.element).unwrap_or(false)
    }
}

const MAX_ORDER: u32 = 24;

fn entry(
    label: impl Into<String>,
    element: CuntzElement,
    involutions: Option<Vec<CuntzElement>>,
) -> Result<PoolUnitary> {
    let order = order_of(&element, MAX_ORDER)?;
    Ok(PoolUnitary {
        label: label.into(),
        element,
        order,
        involutions,
    })
}

fn diagonal_rest(alg: CuntzAlgebra, skip: &[usize]) -> Result<CuntzElement> {
    let mut acc = alg.zero();
    for k in 1..=alg.n() as usize {
        if !skip.contains(&k) {
            acc = acc.add(&alg.unit(k, k)?)?;
        }
    }
    Ok(acc)
}

/// `e_{k,l} + e_{l,k} + Σ_{other} e_{m,m}`.
pub fn transposition(alg: CuntzAlgebra, k: usize, l: usize) -> Result<CuntzElement> {
    alg.unit(k, l)?
        .add(&alg.unit(l, k)?)?
        .add(&diagonal_rest(alg, &[k, l])?)
}

/// `1 − 2 e_{1,1}`.
pub fn reflection(alg: CuntzAlgebra) -> Result<CuntzElement> {
    alg.one()
        .sub(&alg.unit(1, 1)?.scale(&ExactScalar::integer(2)))
}

/// `(1/√2)(e₁₁ + e₁₂ + e₂₁ − e₂₂) + Σ_{k≥3} e_{k,k}`.
pub fn hadamard(alg: CuntzAlgebra) -> Result<CuntzElement> {
    let r = ExactScalar::inv_sqrt2();
    alg.from_terms([
        (vec![1], vec![1], r.clone()),
        (vec![1], vec![2], r.clone()),
        (vec![2], vec![1], r.clone()),
        (vec![2], vec![2], -r),
    ])?
    .add(&diagonal_rest(alg, &[1, 2])?)
}

/// Exchanges the level-two ranges of `s₁s₁` and `s₁s₂`.
pub fn level_two_swap(alg: CuntzAlgebra) -> Result<CuntzElement> {
    let mut terms = vec![
        (vec![1, 1], vec![1, 2], ExactScalar::one()),
        (vec![1, 2], vec![1, 1], ExactScalar::one()),
    ];
    for w in words_of_length(alg.n(), 2) {
        if w.letters() != [1, 1] && w.letters() != [1, 2] {
            terms.push((
                w.letters().to_vec(),
                w.letters().to_vec(),
                ExactScalar::one(),
            ));
        }
    }
    alg.from_terms(terms)
}

/// `c e₁₁ + Σ_{k≥2} e_{k,k}`.
pub fn phase(alg: CuntzAlgebra, c: ExactScalar) -> Result<CuntzElement> {
    alg.unit(1, 1)?.scale(&c).add(&diagonal_rest(alg, &[1])?)
}

/// `(1 + i)/√2`.
pub fn zeta8() -> ExactScalar {
    &(&ExactScalar::one() + &ExactScalar::i()) * &ExactScalar::inv_sqrt2()
}

/// Scalar units, permutation unitaries, diagonal phases, a Hadamard-type
/// involution and a level-two permutation.
pub fn base_unitaries(alg: CuntzAlgebra) -> Result<Vec<PoolUnitary>> {
    let one = alg.one();
    let minus = one.neg();
    let mut out = vec![
        entry("1", one.clone(), Some(vec![]))?,
        entry("-1", minus.clone(), Some(vec![minus]))?,
        entry("i", alg.scalar(ExactScalar::i()), None)?,
        entry("-i", alg.scalar(-ExactScalar::i()), None)?,
        entry("zeta8", alg.scalar(zeta8()), None)?,
        entry("zeta8*", alg.scalar(zeta8().conj()), None)?,
    ];
    let n = alg.n() as usize;
    for k in 1..n {
        let t = transposition(alg, k, k + 1)?;
        out.push(entry(
            format!("swap{},{}", k, k + 1),
            t.clone(),
            Some(vec![t]),
        )?);
    }
    if n >= 3 {
        let t12 = transposition(alg, 1, 2)?;
        let t23 = transposition(alg, 2, 3)?;
        let c = t12.mul(&t23)?;
        out.push(entry(
            "cycle123",
            c.clone(),
            Some(vec![t12.clone(), t23.clone()]),
        )?);
        out.push(entry("cycle123*", c.adjoint(), Some(vec![t23, t12]))?);
    }
    let p = phase(alg, ExactScalar::i())?;
    out.push(entry("phase(i)", p.clone(), None)?);
    out.push(entry("phase(i)*", p.adjoint(), None)?);
    let r = reflection(alg)?;
    out.push(entry("reflection", r.clone(), Some(vec![r]))?);
    let h = hadamard(alg)?;
    out.push(entry("hadamard", h.clone(), Some(vec![h]))?);
    let l2 = level_two_swap(alg)?;
    out.push(entry("level2swap", l2.clone(), Some(vec![l2]))?);
    Ok(out)
}

/// The base unitaries followed by products `a·b` of distinct non-identity
/// base members, up to `size` entries in total.
pub fn unitary_pool(alg: CuntzAlgebra, size: usize) -> Result<Vec<PoolUnitary>> {
    let base = base_unitaries(alg)?;
    let mut out = base.clone();
    let factors: Vec<&PoolUnitary> = base.iter().filter(|u| u.label != "1").collect();
    'outer: for a in &factors {
        for b in &factors {
            if out.len() >= size {
                break 'outer;
            }
            if a.label == b.label {
                continue;
            }
            let scalar_pair = a.element.as_scalar().is_some() && b.element.as_scalar().is_some();
            if scalar_pair {
                continue;
            }
            let involutions = match (&a.involutions, &b.involutions) {
                (Some(x), Some(y)) => Some(x.iter().chain(y).cloned().collect()),
                _ => None,
            };
            let label = format!("{}*{}", a.label, b.label);
            out.push(entry(label, a.element.mul(&b.element)?, involutions)?);
        }
    }
    Ok(out)
}

const COEFFS: [(i64, i64, bool); 7] = [
    (0, 1, false),
    (1, 1, false),
    (-1, 1, false),
    (1, 2, false),
    (-1, 2, false),
    (1, 2, true),
    (-1, 2, true),
];

fn random_word<R: Rng>(rng: &mut R, n: u8, max_len: usize) -> Vec<u8> {
    let len = rng.random_range(0..=max_len);
    (0..len).map(|_| rng.random_range(1..=n)).collect()
}

pub fn random_coeff<R: Rng>(rng: &mut R) -> ExactScalar {
    let (p, q, imaginary) = COEFFS[rng.random_range(0..COEFFS.len())];
    let c = ExactScalar::rational(p, q);
    if imaginary {
        &c * &ExactScalar::i()
    } else {
        c
    }
}

/// Up to `max_terms` monomials `c s_μ s_ν*` with `|μ|, |ν| ≤ 2` and
/// `c ∈ {0, ±1, ±1/2, ±i/2}`.
pub fn random_element<R: Rng>(
    rng: &mut R,
    alg: CuntzAlgebra,
    max_terms: usize,
) -> Result<CuntzElement> {
    let count = rng.random_range(1..=max_terms.max(1));
    let terms: Vec<_> = (0..count)
        .map(|_| {
            let mu = random_word(rng, alg.n(), 2);
            let nu = random_word(rng, alg.n(), 2);
            (mu, nu, random_coeff(rng))
        })
        .collect();
    alg.from_terms(terms)
}

pub fn random_matrix<R: Rng>(
    rng: &mut R,
    alg: CuntzAlgebra,
    dim: usize,
    max_terms: usize,
) -> Result<CuntzMatrix> {
    let entries = (0..dim * dim)
        .map(|_| random_element(rng, alg, max_terms))
        .collect::<Result<Vec<_>>>()?;
    StarMatrix::from_entries(dim, entries)
}

/// `e₁₁ x e₁₁` for random `x`.
pub fn random_corner_element<R: Rng>(
    rng: &mut R,
    alg: CuntzAlgebra,
    max_terms: usize,
) -> Result<CuntzElement> {
    let e11 = alg.unit(1, 1)?;
    e11.mul(&random_element(rng, alg, max_terms)?)?.mul(&e11)
}

/// A random projection `Σ_{w∈A} s_w s_w*` over a non-empty set of words of
/// length `level`, with an orthogonal partner over a disjoint non-empty set.
pub fn random_orthogonal_pair<R: Rng>(
    rng: &mut R,
    alg: CuntzAlgebra,
    level: usize,
) -> Result<(CuntzElement, CuntzElement)> {
    let words = words_of_length(alg.n(), level.max(1));
    let mut labels: Vec<u8> = (0..words.len()).map(|_| rng.random_range(0..3u8)).collect();
    let first = rng.random_range(0..words.len());
    let second = (first + 1 + rng.random_range(0..words.len() - 1)) % words.len();
    labels[first] = 1;
    labels[second] = 2;
    let pick = |tag: u8| -> Result<CuntzElement> {
        let terms: Vec<_> = words
            .iter()
            .zip(&labels)
            .filter(|(_, &t)| t == tag)
            .map(|(w, _): (&Word, _)| {
                (
                    w.letters().to_vec(),
                    w.letters().to_vec(),
                    ExactScalar::one(),
                )
            })
            .collect();
        alg.from_terms(terms)
    };
    Ok((pick(1)?, pick(2)?))
}

/// A uniformly oriented unit vector in `ℂ^dim`.
pub fn random_unit_vector<R: Rng>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// `v v*` for a unit vector `v`.
pub fn rank_one_projection(v: &[Complex64], tol: f64) -> Result<ComplexMatrix> {
    let entries: Vec<Complex64> = v
        .iter()
        .flat_map(|a| v.iter().map(move |b| a * b.conj()))
        .collect();
    complex_matrix(v.len(), &entries, tol)
}
