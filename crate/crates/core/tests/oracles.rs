use num_complex::Complex64;

use dye_algebra::algebra::{classify, is_involution, CuntzAlgebra, CuntzElement, ExactScalar};
use dye_algebra::dsl::eval_str;
use dye_algebra::factor::{
    assemble_factorization, block_product, diag_identity_check, dye_involution, triple_frame,
    verify_factorization, BlockVariant,
};
use dye_algebra::iso::{corner_iso, decompose_projection, eta, eta_inv, Frame};
use dye_algebra::ktheory::{
    build_conjugator, conjugate_test, exact_rank, involution_type, k0_class, to_af_core,
    to_af_core_at, verify_class_one, ConjugatorCase, K0Class,
};
use dye_algebra::matalg::{dye, StarMatrix};
use dye_algebra::numeric::{
    complex_matrix, decompose2, rank1_obstruction3, NumScalar, DEFAULT_TOL,
};
use dye_algebra::samples::{random_element, rng, transposition, unitary_pool};
use dye_algebra::Error;
use rand::Rng;

fn q(p: i64, d: i64) -> ExactScalar {
    ExactScalar::rational(p, d)
}

/// Letters of a word in generators and adjoints: `(k, false)` is `s_k`,
/// `(k, true)` is `s_k*`.
type Letter = (u8, bool);

/// Reduces a product of generators and adjoints with `s_i* s_j = δ_{ij}` only.
/// Returns `None` for zero, else the `(μ, ν)` of `s_μ s_ν*`.
fn rewrite(mut letters: Vec<Letter>) -> Option<(Vec<u8>, Vec<u8>)> {
    loop {
        let pos = letters.windows(2).position(|w| w[0].1 && !w[1].1);
        let Some(p) = pos else { break };
        if letters[p].0 != letters[p + 1].0 {
            return None;
        }
        letters.drain(p..p + 2);
    }
    let split = letters.iter().position(|l| l.1).unwrap_or(letters.len());
    let mu = letters[..split].iter().map(|l| l.0).collect();
    let nu = letters[split..].iter().rev().map(|l| l.0).collect();
    Some((mu, nu))
}

fn monomial_letters(mu: &[u8], nu: &[u8]) -> Vec<Letter> {
    let mut out: Vec<Letter> = mu.iter().map(|&l| (l, false)).collect();
    out.extend(nu.iter().rev().map(|&l| (l, true)));
    out
}

fn oracle_product(x: &CuntzElement, y: &CuntzElement) -> CuntzElement {
    let mut terms = Vec::new();
    for (m1, n1, c1) in x.terms() {
        for (m2, n2, c2) in y.terms() {
            let mut letters = monomial_letters(m1.letters(), n1.letters());
            letters.extend(monomial_letters(m2.letters(), n2.letters()));
            if let Some((mu, nu)) = rewrite(letters) {
                terms.push((mu, nu, c1 * c2));
            }
        }
    }
    x.algebra().from_terms(terms).unwrap()
}

#[test]
fn products_agree_with_word_rewriting() {
    let mut r = rng(11);
    for n in 2..=4 {
        let alg = CuntzAlgebra::new(n).unwrap();
        for _ in 0..200 {
            let x = random_element(&mut r, alg, 3).unwrap();
            let y = random_element(&mut r, alg, 3).unwrap();
            assert!(
                x.mul(&y).unwrap().equals(&oracle_product(&x, &y)).unwrap(),
                "{x} * {y}"
            );
        }
    }
}

fn to_numeric(m: &[ExactScalar]) -> Vec<Complex64> {
    m.iter().map(ExactScalar::to_complex64).collect()
}

fn numeric_product(a: &[Complex64], b: &[Complex64], side: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); side * side];
    for i in 0..side {
        for k in 0..side {
            for j in 0..side {
                out[i * side + j] += a[i * side + k] * b[k * side + j];
            }
        }
    }
    out
}

fn numeric_rank(mut a: Vec<Complex64>, side: usize) -> usize {
    let mut rank = 0;
    for col in 0..side {
        let pivot = (rank..side).max_by(|&i, &j| {
            a[i * side + col]
                .norm()
                .total_cmp(&a[j * side + col].norm())
        });
        let Some(p) = pivot.filter(|&p| a[p * side + col].norm() > 1e-9) else {
            continue;
        };
        for c in 0..side {
            a.swap(rank * side + c, p * side + c);
        }
        for r in 0..side {
            if r != rank {
                let f = a[r * side + col] / a[rank * side + col];
                for c in 0..side {
                    let v = a[rank * side + c];
                    a[r * side + c] -= f * v;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn random_degree_zero(r: &mut impl Rng, alg: CuntzAlgebra) -> CuntzElement {
    let coeffs = [
        q(1, 1),
        q(-1, 1),
        q(1, 2),
        &q(1, 2) * &ExactScalar::i(),
        ExactScalar::sqrt2(),
    ];
    let terms: Vec<_> = (0..r.random_range(1..=4))
        .map(|_| {
            let len = r.random_range(0..=2);
            let mu: Vec<u8> = (0..len).map(|_| r.random_range(1..=alg.n())).collect();
            let nu: Vec<u8> = (0..len).map(|_| r.random_range(1..=alg.n())).collect();
            (mu, nu, coeffs[r.random_range(0..coeffs.len())].clone())
        })
        .collect();
    alg.from_terms(terms).unwrap()
}

#[test]
fn af_core_is_a_star_homomorphism_into_numeric_matrices() {
    let mut r = rng(12);
    for n in 2..=3u8 {
        let alg = CuntzAlgebra::new(n as usize).unwrap();
        let side = (n as usize).pow(2);
        for _ in 0..60 {
            let x = random_degree_zero(&mut r, alg);
            let y = random_degree_zero(&mut r, alg);
            let ax = to_numeric(&to_af_core_at(&x, 2).unwrap().entries);
            let ay = to_numeric(&to_af_core_at(&y, 2).unwrap().entries);
            let axy = to_numeric(&to_af_core_at(&x.mul(&y).unwrap(), 2).unwrap().entries);
            let expected = numeric_product(&ax, &ay, side);
            for (a, b) in axy.iter().zip(&expected) {
                assert!((a - b).norm() < 1e-12);
            }
            let star = to_numeric(&to_af_core_at(&x.adjoint(), 2).unwrap().entries);
            for i in 0..side {
                for j in 0..side {
                    assert!((star[i * side + j] - ax[j * side + i].conj()).norm() < 1e-12);
                }
            }
            let exact = to_af_core_at(&x, 2).unwrap();
            assert_eq!(exact.rank(), numeric_rank(ax, side), "{x}");
        }
    }
}

#[test]
fn exact_rank_matches_floating_rank() {
    let mut r = rng(13);
    for _ in 0..50 {
        let side = r.random_range(1..=6);
        let basis: Vec<Vec<i64>> = (0..r.random_range(1..=side))
            .map(|_| (0..side).map(|_| r.random_range(-2..=2)).collect())
            .collect();
        let rows: Vec<Vec<i64>> = (0..side)
            .map(|_| {
                let w: Vec<i64> = basis.iter().map(|_| r.random_range(-2..=2)).collect();
                (0..side)
                    .map(|c| basis.iter().zip(&w).map(|(b, k)| b[c] * k).sum())
                    .collect()
            })
            .collect();
        let exact = exact_rank(
            rows.iter()
                .map(|r| r.iter().map(|&v| q(v, 1)).collect())
                .collect(),
        );
        let floating = numeric_rank(
            rows.iter()
                .flatten()
                .map(|&v| Complex64::new(v as f64, 0.0))
                .collect(),
            side,
        );
        assert_eq!(exact, floating);
    }
}

#[test]
fn scalar_field_example() {
    let one = ExactScalar::one();
    let r2 = ExactScalar::sqrt2();
    assert_eq!(&(&one + &r2) * &(&one - &r2), q(-1, 1));
}

#[test]
fn monomial_product_example() {
    let a = CuntzAlgebra::new(2).unwrap();
    let lhs = eval_str("s1*s2'*s2*s1'", a).unwrap();
    assert!(lhs.equals(&a.unit(1, 1).unwrap()).unwrap());
}

#[test]
fn dye_at_minus_one_by_hand() {
    let a = CuntzAlgebra::new(2).unwrap();
    let p = dye(1, 2, &a.one().neg(), 3).unwrap();
    let h = q(1, 2);
    let expected = [
        h.clone(),
        -h.clone(),
        q(0, 1),
        -h.clone(),
        h,
        q(0, 1),
        q(0, 1),
        q(0, 1),
        q(0, 1),
    ];
    for (x, c) in p.entries().iter().zip(expected) {
        assert!(x.equals(&a.scalar(c)).unwrap());
    }
    assert!(classify(&p).unwrap().projection);
}

fn real2(entries: [f64; 4]) -> dye_algebra::numeric::ComplexMatrix {
    let v: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    complex_matrix(2, &v, DEFAULT_TOL).unwrap()
}

#[test]
fn decompose2_examples_by_hand() {
    let d = decompose2(&real2([0.5, 0.5, 0.5, 0.5])).unwrap();
    assert_eq!((d.i, d.j), (1, 2));
    assert!((d.a - 1.0).norm() < 1e-15);
    assert!(d.branch_minus.is_none());

    let d = decompose2(&real2([0.8, 0.4, 0.4, 0.2])).unwrap();
    assert_eq!((d.i, d.j), (1, 2));
    assert!((d.a - 0.5).norm() < 1e-12);
    assert!((d.branch_minus.unwrap() - 2.0).norm() < 1e-12);
    assert!(d.reconstruction_error < 1e-12);
}

#[test]
fn plane_witness_by_construction() {
    let a = Complex64::new(2.0, 1.0);
    let p = dye(1, 3, &NumScalar::new(a, DEFAULT_TOL), 3).unwrap();
    let obs = rank1_obstruction3(&p).unwrap();
    let w = obs.witness.unwrap();
    assert!(obs.representable);
    assert_eq!((w.i, w.j), (1, 3));
    assert!((w.a - a).norm() < 1e-12);
}

#[test]
fn iso_examples_by_hand() {
    let a = CuntzAlgebra::new(2).unwrap();
    let m = eta_inv(&eval_str("s1*s2'", a).unwrap()).unwrap();
    assert!(m.equals(&StarMatrix::unit(1, 2, 2, a).unwrap()).unwrap());

    let frame = Frame::standard(a);
    let e11 = a.unit(1, 1).unwrap();
    let z = frame.zeta(&e11, 2).unwrap();
    assert!(z
        .equals(&StarMatrix::placed(e11.clone(), 1, 1, 2).unwrap())
        .unwrap());

    let v = a.generator(1).unwrap().adjoint();
    let image = corner_iso(&v, &eval_str("s2*s2'", a).unwrap()).unwrap();
    assert!(image
        .equals(&eval_str("s1*s2*s2'*s1'", a).unwrap())
        .unwrap());

    let d = decompose_projection(&v, &frame).unwrap();
    assert!(d.parts[0]
        .equals(&eval_str("s1*s1*s1'*s1'", a).unwrap())
        .unwrap());
    assert!(d.parts[1]
        .equals(&eval_str("s1*s2*s2'*s1'", a).unwrap())
        .unwrap());
    assert!(d.projection.equals(&e11).unwrap());
}

#[test]
fn k0_examples_by_hand() {
    let a2 = CuntzAlgebra::new(2).unwrap();
    let core = to_af_core(&eval_str("s1*s2*s2'*s1'", a2).unwrap()).unwrap();
    assert_eq!(core.level, 2);
    for r in 0..4 {
        for c in 0..4 {
            let expected = if (r, c) == (1, 1) { q(1, 1) } else { q(0, 1) };
            assert_eq!(core.get(r, c), &expected);
        }
    }

    let a3 = CuntzAlgebra::new(3).unwrap();
    assert_eq!(k0_class(&a3.one()).unwrap(), K0Class::new(3, 1));
    let e = a3.unit(1, 1).unwrap().add(&a3.unit(2, 2).unwrap()).unwrap();
    assert_eq!(k0_class(&e).unwrap().residue(), 0);

    for n in 2..=4 {
        let a = CuntzAlgebra::new(n).unwrap();
        let r = a.one().sub(&a.unit(1, 1).unwrap().scale(&q(2, 1))).unwrap();
        assert_eq!(involution_type(&r).unwrap(), K0Class::unit(n as u8));
        assert!(conjugate_test(&a.one().neg(), &r).unwrap());
    }
    assert!(conjugate_test(&a2.one(), &a2.one().neg()).unwrap());
    assert!(!conjugate_test(&a3.one(), &a3.one().neg()).unwrap());

    let w = transposition(a3, 1, 2).unwrap();
    assert!(!verify_class_one(&e, &a3.one()).unwrap());
    assert!(!verify_class_one(&e, &w).unwrap());
}

#[test]
fn conjugator_examples_by_hand() {
    let a = CuntzAlgebra::new(2).unwrap();
    let minus = a.one().neg();
    let c = build_conjugator(
        &ConjugatorCase::FiniteOrder {
            v: minus.clone(),
            m: 2,
        },
        1,
        2,
        3,
    )
    .unwrap();
    let image =
        c.w.adjoint()
            .mul(&dye(1, 2, &minus, 3).unwrap())
            .unwrap()
            .mul(&c.w)
            .unwrap();
    assert!(image
        .equals(&StarMatrix::unit(1, 1, 3, a).unwrap())
        .unwrap());

    let r = a.one().sub(&a.unit(1, 1).unwrap().scale(&q(2, 1))).unwrap();
    assert!(r.mul(&r).unwrap().equals(&a.one()).unwrap());
    for m in 2..=3 {
        let c = build_conjugator(
            &ConjugatorCase::ProductOfTwo {
                u: r.clone(),
                v: r.clone(),
            },
            1,
            2,
            m,
        )
        .unwrap();
        let image =
            c.w.adjoint()
                .mul(&dye(1, 2, &a.one(), m).unwrap())
                .unwrap()
                .mul(&c.w)
                .unwrap();
        assert!(image
            .equals(&StarMatrix::unit(1, 1, m, a).unwrap())
            .unwrap());
    }
}

#[test]
fn dye_involutions_by_hand() {
    let a = CuntzAlgebra::new(2).unwrap();
    let frame = Frame::standard(a);
    let swap = eval_str("s1*s2' + s2*s1'", a).unwrap();
    let z = dye_involution(1, 2, &a.one(), &frame).unwrap().element;
    assert!(z.equals(&swap.neg()).unwrap());
    let z = dye_involution(1, 2, &a.one().neg(), &frame)
        .unwrap()
        .element;
    assert!(z.equals(&swap).unwrap());
    assert!(is_involution(&z).unwrap());

    let a3 = CuntzAlgebra::new(3).unwrap();
    let omega = transposition(a3, 1, 2).unwrap();
    let z = dye_involution(1, 2, &omega, &Frame::standard(a3))
        .unwrap()
        .element;
    assert!(is_involution(&z).unwrap());
    assert_eq!(involution_type(&z).unwrap(), K0Class::unit(3));
}

#[test]
fn block_identities_by_hand() {
    let a = CuntzAlgebra::new(2).unwrap();
    let minus = a.one().neg();
    let (m, p) = (minus.clone(), a.one());
    for (variant, diag) in [
        (BlockVariant::OneTwo, vec![m.clone(), m.clone(), p.clone()]),
        (
            BlockVariant::OneThree,
            vec![m.clone(), p.clone(), m.clone()],
        ),
    ] {
        let b = block_product(&minus, variant).unwrap();
        assert!(b.equals(&StarMatrix::diagonal(diag).unwrap()).unwrap());
    }
    let swap = eval_str("s1*s2' + s2*s1'", a).unwrap();
    assert!(diag_identity_check(&swap, BlockVariant::OneTwo).unwrap());
    assert!(diag_identity_check(&swap, BlockVariant::OneThree).unwrap());
}

#[test]
fn assembly_example() {
    for n in 2..=3 {
        let a = CuntzAlgebra::new(n).unwrap();
        let frame = triple_frame(a).unwrap();
        let one = a.one();
        let asm = assemble_factorization(&one.neg(), &one, [&one, &one, &one], &frame).unwrap();
        assert!(classify(&asm.u).unwrap().unitary);
        let report = verify_factorization(&asm.u, &asm.factors(), &frame);
        assert!(report.all_pass(), "{report:?}");
    }
}

#[test]
fn assembly_over_pool() {
    let a = CuntzAlgebra::new(3).unwrap();
    let pool = unitary_pool(a, 20).unwrap();
    let frame = triple_frame(a).unwrap();
    let z = transposition(a, 2, 3).unwrap();
    for u in pool.iter().step_by(4) {
        let asm =
            assemble_factorization(&u.element, &u.element.adjoint(), [&z, &z, &a.one()], &frame)
                .unwrap();
        assert!(
            verify_factorization(&asm.u, &asm.factors(), &frame).all_pass(),
            "{}",
            u.label
        );
    }
}

#[test]
fn expression_examples() {
    let a = CuntzAlgebra::new(2).unwrap();
    let swap = eval_str("s1*s2' + s2*s1'", a).unwrap();
    assert!(is_involution(&swap).unwrap());
    let half = eval_str("1/2 - (1/2)*s1*s1'", a).unwrap();
    let expected = a.one().sub(&a.unit(1, 1).unwrap()).unwrap().scale(&q(1, 2));
    assert!(half.equals(&expected).unwrap());
    assert!(matches!(
        eval_str("s3", a),
        Err(Error::IndexOutOfRange { index: 3, n: 2 })
    ));
    assert!(eta(&StarMatrix::identity(2, a))
        .unwrap()
        .equals(&a.one())
        .unwrap());
}
