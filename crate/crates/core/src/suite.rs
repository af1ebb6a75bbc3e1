//! The verification suite: seeded, exact checks of every structural claim
//! the library implements, collected into a deterministic JSON report.

use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::classify::is_projection;
use crate::algebra::{CuntzAlgebra, CuntzElement, DEFAULT_BUDGET};
use crate::dsl::{eval_str, parse};
use crate::error::{Error, Result};
use crate::factor::{
    assemble_factorization, diag_identity_check, triple_frame, verify_factorization, BlockVariant,
};
use crate::iso::{cuntz_units, decompose_projection, eta, eta_inv, Frame};
use crate::ktheory::{
    build_conjugator, class_one_witness, conjugate_test, dye_blocks, dye_plus_units, dye_rotation,
    involution_type, k0_class, verify_class_one, ConjugatorCase, K0Class,
};
use crate::matalg::{dye, validate_matrix_units, StarMatrix};
use crate::numeric::{decompose2, max_entry_distance, rank1_obstruction3, NumScalar, DEFAULT_TOL};
use crate::samples::{
    random_element, random_matrix, random_orthogonal_pair, random_unit_vector, rank_one_projection,
    rng, unitary_pool, PoolUnitary,
};

/// Max-entry error allowed when rebuilding a 2×2 projection.
pub const ROUNDTRIP_TOL: f64 = 1e-12;
/// Allowed deviation of `a₊·conj(a₋)` from 1.
pub const BRANCH_TOL: f64 = 1e-10;
/// Branch identity is only checked for `|b| < 1/2 − BRANCH_MARGIN`.
pub const BRANCH_MARGIN: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub budget: usize,
    pub tol: f64,
    /// Restrict to these check names; empty means all.
    pub only: Vec<String>,
    /// Record wall time per check (makes the report non-reproducible).
    pub timings: bool,
    pub pool_size: usize,
    pub roundtrips: usize,
    pub obstruction_cases: usize,
    pub eta_pairs: usize,
    pub assemblies: usize,
    pub orthogonal_pairs: usize,
    pub ring_triples: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 1,
            budget: DEFAULT_BUDGET,
            tol: DEFAULT_TOL,
            only: Vec::new(),
            timings: false,
            pool_size: 60,
            roundtrips: 1000,
            obstruction_cases: 100,
            eta_pairs: 100,
            assemblies: 20,
            orthogonal_pairs: 50,
            ring_triples: 50,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::Config("budget must be positive".into()));
        }
        if !(self.tol.is_finite() && self.tol > 0.0 && self.tol < 1e-3) {
            return Err(Error::Config(format!(
                "tolerance {} outside (0, 1e-3)",
                self.tol
            )));
        }
        if self.pool_size == 0 {
            return Err(Error::Config("pool size must be positive".into()));
        }
        for name in &self.only {
            if !CHECKS.iter().any(|(n, _)| n == name) {
                return Err(Error::Config(format!("unknown check {name:?}")));
            }
        }
        Ok(())
    }

    fn algebra(&self, n: usize) -> Result<CuntzAlgebra> {
        Ok(CuntzAlgebra::new(n)?.with_budget(self.budget))
    }

    fn pool(&self, n: usize) -> Result<Vec<PoolUnitary>> {
        unitary_pool(self.algebra(n)?, self.pool_size)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub status: Status,
    pub cases: u64,
    pub failures: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub budget: usize,
    pub tol: f64,
    pub status: Status,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn exit_code(&self) -> i32 {
        if self.status == Status::Pass {
            0
        } else {
            1
        }
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is always serializable")
    }
}

#[derive(Default)]
struct Tally {
    cases: u64,
    failures: u64,
    detail: Option<String>,
    max_error: Option<f64>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.detail.is_none() {
                self.detail = Some(what());
            }
        }
    }

    /// Counts a fallible verification: budget exhaustion aborts the check,
    /// any other error counts as a failed case.
    fn verified<T>(&mut self, r: Result<T>, what: impl FnOnce() -> String) -> Result<Option<T>> {
        match r {
            Ok(v) => {
                self.check(true, String::new);
                Ok(Some(v))
            }
            Err(e @ Error::ExpansionBudgetExceeded { .. }) => Err(e),
            Err(e) => {
                self.check(false, || format!("{}: {e}", what()));
                Ok(None)
            }
        }
    }

    fn error(&mut self, e: f64) {
        self.max_error = Some(self.max_error.map_or(e, |m| m.max(e)));
    }
}

type CheckFn = fn(&SuiteConfig, &mut ChaCha8Rng, &mut Tally) -> Result<()>;

/// Registered checks, in report order.
pub const CHECK_NAMES: [&str; 11] = [
    "dye-projection-axioms",
    "dye-2x2-roundtrip",
    "coordinate-plane-obstruction",
    "eta-isomorphism",
    "projection-splitting",
    "block-identities",
    "eleven-factor-assembly",
    "k0-machinery",
    "cuntz-relations",
    "ring-axioms",
    "expression-roundtrip",
];

const CHECKS: [(&str, CheckFn); 11] = [
    (CHECK_NAMES[0], check_dye_axioms),
    (CHECK_NAMES[1], check_roundtrip2),
    (CHECK_NAMES[2], check_obstruction3),
    (CHECK_NAMES[3], check_eta),
    (CHECK_NAMES[4], check_splitting),
    (CHECK_NAMES[5], check_blocks),
    (CHECK_NAMES[6], check_assembly),
    (CHECK_NAMES[7], check_k0),
    (CHECK_NAMES[8], check_relations),
    (CHECK_NAMES[9], check_ring),
    (CHECK_NAMES[10], check_expressions),
];

fn check_seed(seed: u64, name: &str) -> u64 {
    // FNV-1a, so every check draws from its own stream.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h ^ seed
}

/// Runs one registered check on its own.
pub fn run_check(name: &str, config: &SuiteConfig) -> Result<CheckResult> {
    let (name, f) = CHECKS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Config(format!("unknown check {name:?}")))?;
    Ok(execute(name, *f, config))
}

fn execute(name: &'static str, f: CheckFn, config: &SuiteConfig) -> CheckResult {
    let start = Instant::now();
    let mut rng = rng(check_seed(config.seed, name));
    let mut tally = Tally::default();
    let outcome = f(config, &mut rng, &mut tally);
    let status = match (&outcome, tally.failures) {
        (Err(_), _) => Status::Error,
        (Ok(()), 0) => Status::Pass,
        _ => Status::Fail,
    };
    let detail = match outcome {
        Err(e) => Some(e.to_string()),
        Ok(()) => tally.detail,
    };
    CheckResult {
        name,
        status,
        cases: tally.cases,
        failures: tally.failures,
        max_error: tally.max_error,
        detail,
        wall_ms: config.timings.then(|| start.elapsed().as_millis() as u64),
    }
}

/// Runs the selected checks concurrently; results keep registry order.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    config.validate()?;
    let selected: Vec<_> = CHECKS
        .iter()
        .filter(|(n, _)| config.only.is_empty() || config.only.iter().any(|o| o == n))
        .collect();
    let checks: Vec<CheckResult> = std::thread::scope(|scope| {
        let handles: Vec<_> = selected
            .iter()
            .map(|(name, f)| (*name, scope.spawn(move || execute(name, *f, config))))
            .collect();
        handles
            .into_iter()
            .map(|(name, h)| {
                h.join().unwrap_or_else(|_| CheckResult {
                    name,
                    status: Status::Error,
                    cases: 0,
                    failures: 0,
                    max_error: None,
                    detail: Some("check panicked".into()),
                    wall_ms: None,
                })
            })
            .collect()
    });
    let count = |s: Status| checks.iter().filter(|c| c.status == s).count();
    let (passed, failed, errors) = (
        count(Status::Pass),
        count(Status::Fail),
        count(Status::Error),
    );
    Ok(SuiteReport {
        seed: config.seed,
        budget: config.budget,
        tol: config.tol,
        status: if passed == checks.len() {
            Status::Pass
        } else {
            Status::Fail
        },
        passed,
        failed,
        errors,
        checks,
    })
}

fn check_dye_axioms(cfg: &SuiteConfig, _: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    for n in 2..=4 {
        let pool = cfg.pool(n)?;
        for m in 2..=4 {
            for i in 1..=m {
                for j in (1..=m).filter(|&j| j != i) {
                    for u in &pool {
                        let p = dye(i, j, &u.element, m)?;
                        let ok = is_projection(&p)?
                            && p.support()?
                                .iter()
                                .all(|&(r, c)| [i, j].contains(&r) && [i, j].contains(&c));
                        t.check(ok, || format!("n={n} m={m} ({i},{j}) omega={}", u.label));
                    }
                }
            }
        }
    }
    Ok(())
}

fn check_roundtrip2(cfg: &SuiteConfig, rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    for k in 0..cfg.roundtrips {
        let v = random_unit_vector(rng, 2);
        let p = rank_one_projection(&v, cfg.tol)?;
        let d = decompose2(&p)?;
        t.error(d.reconstruction_error);
        t.check(
            d.reconstruction_error <= ROUNDTRIP_TOL && d.a.norm() <= 1.0 + ROUNDTRIP_TOL,
            || {
                format!(
                    "sample {k}: reconstruction error {:e}",
                    d.reconstruction_error
                )
            },
        );
        let b = p.entry(1, 2).z;
        if b.norm() < 0.5 - BRANCH_MARGIN {
            let ok = match d.branch_minus {
                Some(minus) => (d.branch_plus * minus.conj() - 1.0).norm() <= BRANCH_TOL,
                None => b.norm() <= cfg.tol,
            };
            t.check(ok, || format!("sample {k}: branch identity"));
        }
    }
    Ok(())
}

fn check_obstruction3(cfg: &SuiteConfig, rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let third = NumScalar::new(Complex64::new(1.0 / 3.0, 0.0), cfg.tol);
    let flat = StarMatrix::from_entries(3, vec![third; 9])?;
    let obs = rank1_obstruction3(&flat)?;
    t.check(
        !obs.representable && obs.rank == 1 && obs.support == Some(3),
        || "flat rank-one projection accepted".into(),
    );
    for k in 0..cfg.obstruction_cases {
        let i = rng.random_range(1..=3);
        let j = (i + rng.random_range(0..2)) % 3 + 1;
        let a = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let p = dye(i, j, &NumScalar::new(a, cfg.tol), 3)?;
        let obs = rank1_obstruction3(&p)?;
        let Some(w) = obs.witness.filter(|_| obs.representable) else {
            t.check(false, || format!("case {k}: P_({i},{j}) rejected"));
            continue;
        };
        let rebuilt = dye(w.i, w.j, &NumScalar::new(w.a, cfg.tol), 3)?;
        let err = max_entry_distance(&rebuilt, &p);
        t.error(err);
        let scale = 1.0 + a.norm();
        let same = if i < j {
            (w.i, w.j) == (i, j) && (w.a - a).norm() <= 1e-9 * scale
        } else {
            (w.i, w.j) == (j, i) && (w.a * a - 1.0).norm() <= 1e-9 * scale
        };
        t.check(same && err <= ROUNDTRIP_TOL, || {
            format!("case {k}: witness for P_({i},{j})")
        });
    }
    for k in 0..cfg.obstruction_cases / 5 {
        let v = random_unit_vector(rng, 3);
        let obs = rank1_obstruction3(&rank_one_projection(&v, cfg.tol)?)?;
        t.check(!obs.representable, || {
            format!("full-support case {k} accepted")
        });
    }
    Ok(())
}

fn check_eta(cfg: &SuiteConfig, rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    for n in 2..=4 {
        let alg = cfg.algebra(n)?;
        t.check(
            eta(&StarMatrix::identity(n, alg))?.equals(&alg.one())?,
            || format!("n={n}: unit"),
        );
        for k in 0..cfg.eta_pairs {
            let m = random_matrix(rng, alg, n, 2)?;
            let q = random_matrix(rng, alg, n, 2)?;
            let em = eta(&m)?;
            let eq = eta(&q)?;
            t.check(eta(&m.mul(&q)?)?.equals(&em.mul(&eq)?)?, || {
                format!("n={n} pair {k}: product")
            });
            t.check(eta(&m.adjoint())?.equals(&em.adjoint())?, || {
                format!("n={n} pair {k}: adjoint")
            });
            t.check(eta_inv(&em)?.equals(&m)?, || {
                format!("n={n} pair {k}: inverse")
            });
            let x = random_element(rng, alg, 3)?;
            t.check(eta(&eta_inv(&x)?)?.equals(&x)?, || {
                format!("n={n} pair {k}: onto")
            });
        }
    }
    Ok(())
}

fn check_splitting(cfg: &SuiteConfig, _: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    for n in 2..=3 {
        let alg = cfg.algebra(n)?;
        let frame = Frame::standard(alg);
        for v in [
            alg.one(),
            alg.generator(1)?.adjoint(),
            alg.generator(2)?.adjoint(),
        ] {
            let Some(d) =
                t.verified(decompose_projection(&v, &frame), || format!("n={n} v={v}"))?
            else {
                continue;
            };
            let p = v.adjoint().mul(&v)?;
            let mut sum = alg.zero();
            let mut ok = d.projection.equals(&p)? && d.parts.len() == n;
            for (a, x) in d.parts.iter().enumerate() {
                ok &= is_projection(x)?;
                for y in &d.parts[a + 1..] {
                    ok &= x.mul(y)?.is_zero();
                }
                sum = sum.add(x)?;
            }
            ok &= sum.equals(&p)?;
            t.check(ok, || format!("n={n} v={v}: parts"));
        }
    }
    Ok(())
}

fn check_blocks(cfg: &SuiteConfig, _: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    for n in 2..=4 {
        for u in &cfg.pool(n)? {
            for variant in [BlockVariant::OneTwo, BlockVariant::OneThree] {
                t.check(diag_identity_check(&u.element, variant)?, || {
                    format!("n={n} alpha={} {variant:?}", u.label)
                });
            }
        }
    }
    Ok(())
}

fn involutions(pool: &[PoolUnitary]) -> Vec<&PoolUnitary> {
    pool.iter().filter(|u| u.is_involution()).collect()
}

fn check_assembly(cfg: &SuiteConfig, rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let pools = [cfg.pool(2)?, cfg.pool(3)?];
    for k in 0..cfg.assemblies {
        let pool = &pools[k % 2];
        let invs = involutions(pool);
        let alg = pool[0].element.algebra();
        let frame = triple_frame(alg)?;
        let alpha = &pool[rng.random_range(0..pool.len())];
        let gamma = &pool[rng.random_range(0..pool.len())];
        let z: Vec<&CuntzElement> = (0..3)
            .map(|_| &invs[rng.random_range(0..invs.len())].element)
            .collect();
        let asm =
            assemble_factorization(&alpha.element, &gamma.element, [z[0], z[1], z[2]], &frame)?;
        let report = verify_factorization(&asm.u, &asm.factors(), &frame);
        let label = || {
            format!(
                "instance {k} (n={}, alpha={}, gamma={})",
                alg.n(),
                alpha.label,
                gamma.label
            )
        };
        t.check(report.all_pass(), || {
            format!("{}: {:?}", label(), report.claims)
        });
        t.check(asm.brackets.len() == 8 && report.factors.len() == 11, label);
        let unit = K0Class::unit(alg.n());
        for b in &report.factors[1..=8] {
            t.check(b.involution && b.involution_type == Some(unit), || {
                format!("{}: bracket {}", label(), b.index)
            });
        }
    }
    Ok(())
}

fn check_k0(cfg: &SuiteConfig, rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    for n in 2..=4 {
        let alg = cfg.algebra(n)?;
        let pool = cfg.pool(n)?;
        let invs = involutions(&pool);

        for u in &pool {
            let Some(m) = u.order else { continue };
            for (i, j, dim) in [(1, 2, 2), (3, 1, 3)] {
                let case = ConjugatorCase::FiniteOrder {
                    v: u.element.clone(),
                    m,
                };
                let what = || format!("n={n} finite order {} ({i},{j})", u.label);
                if let Some(c) = t.verified(build_conjugator(&case, i, j, dim), what)? {
                    let image = c.w.adjoint().mul(&dye(i, j, &u.element, dim)?)?.mul(&c.w)?;
                    t.check(image.equals(&StarMatrix::unit(i, i, dim, alg)?)?, what);
                }
            }
        }

        for a in invs.iter().take(6) {
            for b in invs.iter().take(6) {
                let case = ConjugatorCase::ProductOfTwo {
                    u: a.element.clone(),
                    v: b.element.clone(),
                };
                let what = || format!("n={n} product {}*{}", a.label, b.label);
                if let Some(c) = t.verified(build_conjugator(&case, 1, 2, 2), what)? {
                    let p = dye(1, 2, &a.element.mul(&b.element)?, 2)?;
                    let image = c.w.adjoint().mul(&p)?.mul(&c.w)?;
                    t.check(image.equals(&StarMatrix::unit(1, 1, 2, alg)?)?, what);
                }
            }
        }

        let ordered: Vec<&PoolUnitary> = pool.iter().filter(|u| u.order.is_some()).collect();
        for _ in 0..10 {
            let w1 = &pool[rng.random_range(0..pool.len())];
            let w2 = &pool[rng.random_range(0..pool.len())];
            let v = ordered[rng.random_range(0..ordered.len())];
            let case = ConjugatorCase::Sandwich {
                w1: w1.element.clone(),
                w2: w2.element.clone(),
                v: v.element.clone(),
                m: v.order.unwrap_or(1),
            };
            let what = || format!("n={n} sandwich {} {} {}", w1.label, v.label, w2.label);
            if let Some(c) = t.verified(build_conjugator(&case, 2, 1, 2), what)? {
                let image = c.w.mul(&dye(2, 1, &v.element, 2)?)?.mul(&c.w.adjoint())?;
                let target = dye(2, 1, &w1.element.mul(&v.element)?.mul(&w2.element)?, 2)?;
                t.check(image.equals(&target)?, what);
            }
        }

        for u in &pool {
            let p = dye(1, 2, &u.element, 2)?;
            let what = || format!("n={n} class one for {}", u.label);
            let w = match u.certificate() {
                Some(cert) => t.verified(class_one_witness(&u.element, &cert, 1, 2, 2), what)?,
                None => t.verified(dye_rotation(&u.element, 1, 2, 2).map(|c| c.w), what)?,
            };
            if let Some(w) = w {
                t.check(verify_class_one(&p, &w)?, what);
            }
        }

        if n <= 3 {
            let frame = Frame::standard(alg);
            let minus = alg.one().neg();
            for u in &pool {
                let z = alg
                    .one()
                    .sub(&frame.eta(&dye(1, 2, &u.element, n)?)?.scale(&2.into()))?;
                let ok =
                    involution_type(&z)? == K0Class::unit(alg.n()) && conjugate_test(&z, &minus)?;
                t.check(ok, || format!("n={n} type of 1-2P(omega) for {}", u.label));
            }
        }

        let units: Vec<_> = ordered
            .iter()
            .filter(|u| u.element.as_scalar().is_none())
            .take(2)
            .map(|u| (u.element.clone(), u.order.unwrap_or(1)))
            .collect();
        let blocks = dye_blocks(&units)?;
        t.check(blocks.pass(), || format!("n={n} blocks: {blocks:?}"));
        if n >= 3 {
            for m in 1..=2 {
                for (v, order) in &units {
                    let r = dye_plus_units(v, *order, m)?;
                    let expected = K0Class::new(alg.n(), m as u64 + 1);
                    t.check(r.pass() && r.direct == expected, || {
                        format!("n={n} m={m}: {r:?}")
                    });
                }
            }
        }
    }

    let pools = [cfg.pool(2)?, cfg.pool(3)?, cfg.pool(4)?];
    for k in 0..cfg.orthogonal_pairs {
        let pool = &pools[k % 3];
        let alg = pool[0].element.algebra();
        let (p, q) = random_orthogonal_pair(rng, alg, 1 + k % 2)?;
        let u = &pool[rng.random_range(0..pool.len())].element;
        let conj = |x: &CuntzElement| u.mul(x)?.mul(&u.adjoint());
        let (p2, q2) = (conj(&p)?, conj(&q)?);
        let sum = k0_class(&p2.add(&q2)?)?;
        let parts = k0_class(&p2)?.add(&k0_class(&q2)?)?;
        t.check(sum == parts && k0_class(&p2)? == k0_class(&p)?, || {
            format!("pair {k}: {sum:?} vs {parts:?}")
        });
    }
    Ok(())
}

fn check_relations(cfg: &SuiteConfig, _: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    for n in 2..=5 {
        let alg = cfg.algebra(n)?;
        let mut total = alg.zero();
        for i in 1..=n {
            let si = alg.generator(i)?;
            for j in 1..=n {
                let prod = si.adjoint().mul(&alg.generator(j)?)?;
                let expected = if i == j { alg.one() } else { alg.zero() };
                t.check(prod.equals(&expected)?, || format!("n={n}: s{i}* s{j}"));
            }
            total = total.add(&si.mul(&si.adjoint())?)?;
        }
        t.check(total.equals(&alg.one())?, || format!("n={n}: completeness"));
        let report = validate_matrix_units(&cuntz_units(alg)?);
        t.check(report.all_pass(), || {
            format!("n={n}: matrix units {report:?}")
        });
        let frame = Frame::of_size(alg, 2 * n - 1)?;
        let report = validate_matrix_units(&frame.units()?);
        t.check(report.all_pass(), || {
            format!("n={n}: frame units {report:?}")
        });
    }
    Ok(())
}

fn check_ring(cfg: &SuiteConfig, rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    for n in 2..=4 {
        let alg = cfg.algebra(n)?;
        for k in 0..cfg.ring_triples {
            let x = random_element(rng, alg, 3)?;
            let y = random_element(rng, alg, 3)?;
            let z = random_element(rng, alg, 3)?;
            let what = |law: &str| format!("n={n} triple {k}: {law}");
            t.check(x.mul(&y)?.mul(&z)?.equals(&x.mul(&y.mul(&z)?)?)?, || {
                what("associativity")
            });
            t.check(
                x.mul(&y.add(&z)?)?.equals(&x.mul(&y)?.add(&x.mul(&z)?)?)?,
                || what("distributivity"),
            );
            t.check(
                x.mul(&y)?
                    .adjoint()
                    .equals(&y.adjoint().mul(&x.adjoint())?)?,
                || what("adjoint"),
            );
            t.check(x.adjoint().adjoint().equals(&x)?, || {
                what("involutive adjoint")
            });
            t.check(x.normalize()?.terms().eq(x.terms()), || what("normal form"));
        }
    }
    Ok(())
}

/// Expressions the suite parses besides printed random elements.
pub const SUITE_EXPRESSIONS: [&str; 8] = [
    "s1*s2' + s2*s1'",
    "1/2 - (1/2)*s1*s1'",
    "(1 + i)*1/2*r2*s1''",
    "-(s1 - s2)'*(s1 - s2)",
    "3/4*i*r2*s2*s2*s1'",
    "0",
    "1",
    "s1*s1' + s2*s2'",
];

fn check_expressions(cfg: &SuiteConfig, rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    for text in SUITE_EXPRESSIONS {
        let first = parse(text, 2)?;
        let again = parse(&first.to_string(), 2)?;
        t.check(again == first, || format!("{text:?} reparses differently"));
    }
    for n in 2..=4 {
        let alg = cfg.algebra(n)?;
        for k in 0..cfg.ring_triples {
            let x = random_element(rng, alg, 4)?;
            let printed = x.to_string();
            let e = parse(&printed, n as u8)?;
            let ok = parse(&e.to_string(), n as u8)? == e && eval_str(&printed, alg)?.equals(&x)?;
            t.check(ok, || format!("n={n} element {k}: {printed}"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteConfig {
        SuiteConfig {
            pool_size: 16,
            roundtrips: 50,
            obstruction_cases: 10,
            eta_pairs: 3,
            assemblies: 2,
            orthogonal_pairs: 6,
            ring_triples: 5,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn small_suite_passes() {
        let report = run_suite(&small()).unwrap();
        for c in &report.checks {
            assert_eq!(c.status, Status::Pass, "{c:?}");
        }
        assert_eq!(report.exit_code(), 0);
    }

    #[test]
    fn filter_and_validation() {
        let cfg = SuiteConfig {
            only: vec!["dye-2x2-roundtrip".into()],
            ..small()
        };
        let report = run_suite(&cfg).unwrap();
        assert_eq!(report.checks.len(), 1);
        assert!(report.checks[0].cases >= 50);
        let bad = SuiteConfig {
            only: vec!["nope".into()],
            ..small()
        };
        assert!(matches!(run_suite(&bad), Err(Error::Config(_))));
        assert!(SuiteConfig {
            tol: 0.0,
            ..small()
        }
        .validate()
        .is_err());
    }

    #[test]
    fn tiny_budget_fails() {
        let cfg = SuiteConfig {
            budget: 10,
            ..small()
        };
        let report = run_suite(&cfg).unwrap();
        assert_eq!(report.exit_code(), 1);
        assert!(report.errors > 0);
        assert!(report
            .checks
            .iter()
            .any(|c| c.detail.as_deref().is_some_and(|d| d.contains("budget"))));
    }

    #[test]
    fn report_is_reproducible() {
        let cfg = SuiteConfig {
            only: vec!["eta-isomorphism".into(), "k0-machinery".into()],
            ..small()
        };
        assert_eq!(
            run_suite(&cfg).unwrap().to_json(),
            run_suite(&cfg).unwrap().to_json()
        );
    }
}
