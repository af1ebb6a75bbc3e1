//! Involutions `1 − 2η(P_{i,j}(ω))`, the 3×3 block identities behind the
//! factorization of unitaries into such involutions, and forward assembly and
//! verification of eleven-factor products `z₁ v₁ v₂ v₃ v₄ z₂ z₃`.
//!
//! The factorization runs forward: unitaries `α, γ` and involutions
//! `z₁, z₂, z₃` are chosen and the product `u` is computed and checked. No
//! routine here decomposes an arbitrary unitary.

use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::classify::{is_involution, is_unitary};
use crate::algebra::{CuntzAlgebra, CuntzElement, ExactScalar};
use crate::error::{Error, Result};
use crate::iso::{CuntzMatrix, Frame};
use crate::ktheory::{dye_rotation, involution_type, involution_type_via, K0Class};
use crate::matalg::{dye, involution_from_projection, projection_of_involution, StarMatrix};

/// Smallest frame holding the indices `1, 2, 3`: the generators when
/// `n ≥ 3`, and `(s₁, s₂s₁, s₂s₂)` in `𝒪₂`.
pub fn triple_frame(alg: CuntzAlgebra) -> Result<Frame> {
    if alg.n() >= 3 {
        Ok(Frame::standard(alg))
    } else {
        Frame::of_size(alg, 3)
    }
}

/// `1 − 2η(P_{i,j}(ω))` together with its data.
#[derive(Clone, Debug)]
pub struct InvolutionFactor {
    pub i: usize,
    pub j: usize,
    pub omega: CuntzElement,
    pub element: CuntzElement,
}

pub fn dye_involution(
    i: usize,
    j: usize,
    omega: &CuntzElement,
    frame: &Frame,
) -> Result<InvolutionFactor> {
    if !is_unitary(omega)? {
        return Err(Error::NotUnitary);
    }
    let p = dye(i, j, omega, frame.size())?;
    let element = frame.eta(&involution_from_projection(&p)?)?;
    if !is_involution(&element)? {
        return Err(Error::VerificationFailed(
            "bracket is not an involution".into(),
        ));
    }
    Ok(InvolutionFactor {
        i,
        j,
        omega: omega.clone(),
        element,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BlockVariant {
    /// Pairs at `(1, 2)`: `diag(α, α*, 1)`.
    #[serde(rename = "1,2")]
    OneTwo,
    /// Pairs at `(1, 3)`: `diag(α, 1, α*)`.
    #[serde(rename = "1,3")]
    OneThree,
}

impl BlockVariant {
    pub fn pair(&self) -> (usize, usize) {
        match self {
            BlockVariant::OneTwo => (1, 2),
            BlockVariant::OneThree => (1, 3),
        }
    }
}

/// `(I − 2P_{1,k}(−α))(I − 2P_{1,k}(−1))` in `𝕄₃(𝒪ₙ)`.
pub fn block_product(alpha: &CuntzElement, variant: BlockVariant) -> Result<CuntzMatrix> {
    let (i, j) = variant.pair();
    let minus_one = alpha.algebra().one().neg();
    let b1 = involution_from_projection(&dye(i, j, &alpha.neg(), 3)?)?;
    let b2 = involution_from_projection(&dye(i, j, &minus_one, 3)?)?;
    b1.mul(&b2)
}

/// Checks the product of the two block involutions against the diagonal
/// unitary carrying `α` and `α*`.
pub fn diag_identity_check(alpha: &CuntzElement, variant: BlockVariant) -> Result<bool> {
    if !is_unitary(alpha)? {
        return Err(Error::NotUnitary);
    }
    let one = alpha.algebra().one();
    let diag = match variant {
        BlockVariant::OneTwo => vec![alpha.clone(), alpha.adjoint(), one],
        BlockVariant::OneThree => vec![alpha.clone(), one, alpha.adjoint()],
    };
    block_product(alpha, variant)?.equals(&StarMatrix::diagonal(diag)?)
}

/// `u = z₁ v₁ v₂ v₃ v₄ z₂ z₃` with each `v_k` a pair of brackets.
#[derive(Clone, Debug)]
pub struct Assembled {
    pub u: CuntzElement,
    /// `v₁..v₄`.
    pub products: Vec<CuntzElement>,
    /// The eight brackets in product order.
    pub brackets: Vec<InvolutionFactor>,
    pub z: [CuntzElement; 3],
}

impl Assembled {
    /// `z₁, bracket₁, …, bracket₈, z₂, z₃`.
    pub fn factors(&self) -> Vec<CuntzElement> {
        let mut out = vec![self.z[0].clone()];
        out.extend(self.brackets.iter().map(|b| b.element.clone()));
        out.push(self.z[1].clone());
        out.push(self.z[2].clone());
        out
    }
}

pub fn assemble_factorization(
    alpha: &CuntzElement,
    gamma: &CuntzElement,
    z: [&CuntzElement; 3],
    frame: &Frame,
) -> Result<Assembled> {
    for x in [alpha, gamma] {
        if !is_unitary(x)? {
            return Err(Error::NotUnitary);
        }
    }
    for x in z {
        if !is_involution(x)? {
            return Err(Error::NotAnInvolution);
        }
    }
    let minus_one = frame.algebra().one().neg();
    let mut brackets = Vec::with_capacity(8);
    let mut products = Vec::with_capacity(4);
    for (param, (i, j)) in [
        (alpha, (1, 2)),
        (alpha, (1, 3)),
        (gamma, (1, 2)),
        (gamma, (1, 3)),
    ] {
        let first = dye_involution(i, j, &param.neg(), frame)?;
        let second = dye_involution(i, j, &minus_one, frame)?;
        products.push(first.element.mul(&second.element)?);
        brackets.push(first);
        brackets.push(second);
    }
    let mut u = z[0].clone();
    for v in &products {
        u = u.mul(v)?;
    }
    u = u.mul(z[1])?.mul(z[2])?;
    if !is_unitary(&u)? {
        return Err(Error::VerificationFailed(
            "assembled product is not unitary".into(),
        ));
    }
    Ok(Assembled {
        u,
        products,
        brackets,
        z: [z[0].clone(), z[1].clone(), z[2].clone()],
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Claim {
    pub name: &'static str,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DyeForm {
    pub i: usize,
    pub j: usize,
    pub omega: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorInfo {
    pub index: usize,
    pub involution: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dye_form: Option<DyeForm>,
    #[serde(rename = "type", skip_serializing_if = "Option::is_none")]
    pub involution_type: Option<K0Class>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorizationReport {
    pub claims: Vec<Claim>,
    pub factors: Vec<FactorInfo>,
}

impl FactorizationReport {
    pub fn all_pass(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }

    pub fn claim(&self, name: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.name == name)
    }
}

/// Recognizes `z = 1 − 2η(P_{i,j}(ω))` with `ω` unitary: then
/// `η⁻¹((1 − z)/2)` is `P_{i,j}(ω)` and `ω = 2·entry(i, j)`.
pub fn detect_dye_form(
    z: &CuntzElement,
    frame: &Frame,
) -> Result<Option<(usize, usize, CuntzElement)>> {
    let p = frame.eta_inv(&projection_of_involution(z)?)?;
    let k = frame.size();
    for i in 1..=k {
        for j in i + 1..=k {
            let omega = p.entry(i, j).scale(&ExactScalar::integer(2));
            if omega.is_zero() || !is_unitary(&omega)? {
                continue;
            }
            if dye(i, j, &omega, k)?.equals(&p)? {
                return Ok(Some((i, j, omega)));
            }
        }
    }
    Ok(None)
}

fn first_failure(flags: &[(usize, bool)]) -> Option<Value> {
    flags
        .iter()
        .find(|(_, ok)| !ok)
        .map(|(k, _)| json!({ "index": k }))
}

/// Type of `1 − 2η(P_{i,j}(ω))` through `W = η(rotation)`, which carries its
/// projection to the diagonal unit `t_i t_i*` of the AF core.
fn transported_type(
    z: &CuntzElement,
    omega: &CuntzElement,
    i: usize,
    j: usize,
    frame: &Frame,
) -> Result<K0Class> {
    let w = frame.eta(&dye_rotation(omega, i, j, frame.size())?.w)?;
    involution_type_via(z, &w)
}

/// Checks that every factor is an involution, that the ordered product is
/// `u`, and that every factor of Dye form has type `[1]` and hence is
/// conjugate to `−1`. Indices in witnesses are 1-based.
pub fn verify_factorization(
    u: &CuntzElement,
    factors: &[CuntzElement],
    frame: &Frame,
) -> FactorizationReport {
    let alg = u.algebra();
    let mut infos = Vec::with_capacity(factors.len());
    let mut inv_flags = Vec::new();
    let mut type_flags = Vec::new();
    let mut conj_flags = Vec::new();
    let mut errors: Vec<String> = Vec::new();
    let one = K0Class::unit(alg.n());
    let minus_one_type = involution_type(&alg.one().neg()).ok();

    for (k, f) in factors.iter().enumerate() {
        let index = k + 1;
        let involution = is_involution(f).unwrap_or_else(|e| {
            errors.push(format!("factor {index}: {e}"));
            false
        });
        inv_flags.push((index, involution));
        let mut info = FactorInfo {
            index,
            involution,
            dye_form: None,
            involution_type: None,
        };
        if involution {
            info.involution_type = involution_type(f).ok();
            match detect_dye_form(f, frame) {
                Ok(Some((i, j, omega))) => {
                    if info.involution_type.is_none() {
                        info.involution_type = transported_type(f, &omega, i, j, frame)
                            .map_err(|e| errors.push(format!("factor {index}: {e}")))
                            .ok();
                    }
                    type_flags.push((index, info.involution_type == Some(one)));
                    conj_flags.push((
                        index,
                        info.involution_type.is_some() && info.involution_type == minus_one_type,
                    ));
                    info.dye_form = Some(DyeForm {
                        i,
                        j,
                        omega: omega.contract().to_string(),
                    });
                }
                Ok(None) => {}
                Err(e) => errors.push(format!("factor {index}: {e}")),
            }
        }
        infos.push(info);
    }

    let product = factors
        .iter()
        .try_fold(alg.one(), |acc, f| acc.mul(f))
        .and_then(|p| p.sub(u));
    let product_claim = match product {
        Ok(diff) if diff.is_zero() => Claim {
            name: "product",
            pass: true,
            witness: None,
        },
        Ok(diff) => Claim {
            name: "product",
            pass: false,
            witness: Some(json!({ "difference_terms": diff.num_terms() })),
        },
        Err(e) => Claim {
            name: "product",
            pass: false,
            witness: Some(json!({ "error": e.to_string() })),
        },
    };

    let mut claims = vec![
        Claim {
            name: "involutions",
            pass: inv_flags.iter().all(|&(_, b)| b),
            witness: first_failure(&inv_flags),
        },
        product_claim,
        Claim {
            name: "dye-factors-type-one",
            pass: type_flags.iter().all(|&(_, b)| b),
            witness: first_failure(&type_flags),
        },
        Claim {
            name: "dye-factors-conjugate-to-minus-one",
            pass: conj_flags.iter().all(|&(_, b)| b),
            witness: first_failure(&conj_flags),
        },
    ];
    if !errors.is_empty() {
        claims.push(Claim {
            name: "evaluation",
            pass: false,
            witness: Some(json!({ "errors": errors })),
        });
    }
    FactorizationReport {
        claims,
        factors: infos,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(n: usize) -> CuntzAlgebra {
        CuntzAlgebra::new(n).unwrap()
    }

    fn swap(a: CuntzAlgebra) -> CuntzElement {
        a.unit(1, 2).unwrap().add(&a.unit(2, 1).unwrap()).unwrap()
    }

    #[test]
    fn bracket_at_one_is_a_negated_swap() {
        let a = o(2);
        let f = dye_involution(1, 2, &a.one(), &Frame::standard(a)).unwrap();
        assert!(f.element.equals(&swap(a).neg()).unwrap());
    }

    #[test]
    fn bracket_at_minus_one() {
        let a = o(3);
        let f = dye_involution(1, 2, &a.one().neg(), &Frame::standard(a)).unwrap();
        let expected = a
            .unit(1, 2)
            .unwrap()
            .add(&a.unit(2, 1).unwrap())
            .unwrap()
            .add(&a.unit(3, 3).unwrap())
            .unwrap();
        assert!(f.element.equals(&expected).unwrap());
        assert_eq!(involution_type(&f.element).unwrap(), K0Class::unit(3));
        assert_eq!(
            dye_involution(1, 2, &a.generator(1).unwrap(), &Frame::standard(a)).unwrap_err(),
            Error::NotUnitary
        );
    }

    #[test]
    fn permutation_parameter() {
        let a = o(3);
        let omega = swap(a).add(&a.unit(3, 3).unwrap()).unwrap();
        let f = dye_involution(2, 3, &omega, &Frame::standard(a)).unwrap();
        assert_eq!(involution_type(&f.element).unwrap(), K0Class::unit(3));
    }

    #[test]
    fn block_identities() {
        for n in [2, 3] {
            let a = o(n);
            for alpha in [a.one(), a.one().neg(), a.scalar(ExactScalar::i())] {
                for v in [BlockVariant::OneTwo, BlockVariant::OneThree] {
                    assert!(diag_identity_check(&alpha, v).unwrap());
                }
            }
        }
        let a = o(2);
        assert!(diag_identity_check(&swap(a), BlockVariant::OneTwo).unwrap());
        let m = block_product(&a.one().neg(), BlockVariant::OneTwo).unwrap();
        let expected = StarMatrix::diagonal(vec![a.one().neg(), a.one().neg(), a.one()]).unwrap();
        assert!(m.equals(&expected).unwrap());
        assert_eq!(
            diag_identity_check(&a.generator(2).unwrap(), BlockVariant::OneThree).unwrap_err(),
            Error::NotUnitary
        );
    }

    #[test]
    fn trivial_assembly() {
        let a = o(2);
        let f = triple_frame(a).unwrap();
        let one = a.one();
        let r = assemble_factorization(&one, &one, [&one, &one, &one], &f).unwrap();
        assert!(r.u.equals(&one).unwrap());
        assert!(r.products.iter().all(|v| v.equals(&one).unwrap()));
        let m = one.neg();
        let r = assemble_factorization(&one, &one, [&m, &one, &one], &f).unwrap();
        assert!(r.u.equals(&m).unwrap());
    }

    #[test]
    fn assembly_roundtrip() {
        for n in [2, 3] {
            let a = o(n);
            let f = triple_frame(a).unwrap();
            let alpha = a.one().neg();
            let gamma = a.scalar(ExactScalar::i());
            let z = swap(a)
                .add(&a.one())
                .unwrap()
                .sub(&a.unit(1, 1).unwrap())
                .unwrap()
                .sub(&a.unit(2, 2).unwrap())
                .unwrap();
            let r = assemble_factorization(&alpha, &gamma, [&z, &a.one(), &z], &f).unwrap();
            let report = verify_factorization(&r.u, &r.factors(), &f);
            assert!(
                report.all_pass(),
                "n={n} {:?} {}",
                report.claims,
                serde_json::to_string(&report.factors).unwrap()
            );
            let dye_count = report
                .factors
                .iter()
                .filter(|x| x.dye_form.is_some())
                .count();
            assert!(dye_count >= 8);
        }
    }

    #[test]
    fn broken_factor_list() {
        let a = o(3);
        let f = triple_frame(a).unwrap();
        let one = a.one();
        let r = assemble_factorization(&one.neg(), &one, [&one, &one, &one], &f).unwrap();
        let mut factors = r.factors();
        factors[3] = a.generator(1).unwrap();
        let report = verify_factorization(&r.u, &factors, &f);
        let inv = report.claim("involutions").unwrap();
        assert!(!inv.pass);
        assert_eq!(inv.witness, Some(json!({ "index": 4 })));
        assert!(!report.claim("product").unwrap().pass);
    }

    #[test]
    fn minus_one_alone() {
        let a = o(3);
        let m = a.one().neg();
        let report = verify_factorization(&m, std::slice::from_ref(&m), &Frame::standard(a));
        assert!(report.all_pass());
        assert_eq!(report.factors[0].involution_type, Some(K0Class::unit(3)));
        assert!(report.factors[0].dye_form.is_none());
    }
}
