//! Finite linear combinations of Cuntz monomials `s_μ s_ν*`.
//!
//! Every [`CuntzElement`] is kept in normal form: terms are grouped by degree
//! `|μ| − |ν|`, and inside each degree class every term is expanded with
//! `Σ_w s_w s_w* = 1` until all of them share the same `|ν|`. Monomials of a
//! fixed degree and fixed `|ν|` are linearly independent, so two elements are
//! equal exactly when their difference normalizes to no terms.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::scalar::ExactScalar;
use crate::error::{Error, Result};

/// Default cap on the number of terms a normal form may expand into.
pub const DEFAULT_BUDGET: usize = 1_000_000;

/// A word over the alphabet `1..=n`; the empty word is the unit.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Checks every letter against the alphabet.
    pub fn new(letters: Vec<u8>, n: u8) -> Result<Self> {
        if let Some(&bad) = letters.iter().find(|&&l| l == 0 || l > n) {
            return Err(Error::LetterOutOfRange {
                letter: bad as usize,
                n,
            });
        }
        Ok(Word(letters))
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, tail: &[u8]) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + tail.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(tail);
        Word(v)
    }

    fn strip_prefix<'a>(&'a self, prefix: &Word) -> Option<&'a [u8]> {
        self.0.strip_prefix(prefix.0.as_slice())
    }

    /// Index of the word among all words of its length, base `n`, letters
    /// shifted to digits `0..n`.
    pub fn rank_in(&self, n: u8) -> usize {
        self.0
            .iter()
            .fold(0usize, |acc, &l| acc * n as usize + (l as usize - 1))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// All words of length `len` over `1..=n`, in lexicographic order.
pub fn words_of_length(n: u8, len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    for _ in 0..len {
        out = out
            .iter()
            .flat_map(|w| (1..=n).map(move |l| w.concat(&[l])))
            .collect();
    }
    out
}

/// The ambient algebra `𝒪ₙ` together with the expansion budget used when
/// computing normal forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CuntzAlgebra {
    n: u8,
    budget: usize,
}

type TermKey = (Word, Word);
type TermMap = BTreeMap<TermKey, ExactScalar>;

impl CuntzAlgebra {
    pub fn new(n: usize) -> Result<Self> {
        if !(2..=255).contains(&n) {
            return Err(Error::InvalidAlphabet(n));
        }
        Ok(CuntzAlgebra {
            n: n as u8,
            budget: DEFAULT_BUDGET,
        })
    }

    pub fn with_budget(self, budget: usize) -> Self {
        CuntzAlgebra { budget, ..self }
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    fn join(&self, other: &CuntzAlgebra) -> Result<CuntzAlgebra> {
        if self.n != other.n {
            return Err(Error::AlphabetMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(CuntzAlgebra {
            n: self.n,
            budget: self.budget.min(other.budget),
        })
    }

    pub fn zero(&self) -> CuntzElement {
        CuntzElement {
            alg: *self,
            terms: TermMap::new(),
        }
    }

    pub fn one(&self) -> CuntzElement {
        self.scalar(ExactScalar::one())
    }

    pub fn scalar(&self, c: ExactScalar) -> CuntzElement {
        let mut terms = TermMap::new();
        if !c.is_zero() {
            terms.insert((Word::empty(), Word::empty()), c);
        }
        CuntzElement { alg: *self, terms }
    }

    /// The isometry `s_i`.
    pub fn generator(&self, i: usize) -> Result<CuntzElement> {
        self.monomial(&[self.letter(i)?], &[], ExactScalar::one())
    }

    /// `s_i s_j*`, the matrix unit `e_{i,j}`.
    pub fn unit(&self, i: usize, j: usize) -> Result<CuntzElement> {
        self.monomial(&[self.letter(i)?], &[self.letter(j)?], ExactScalar::one())
    }

    fn letter(&self, i: usize) -> Result<u8> {
        if i == 0 || i > self.n as usize {
            return Err(Error::LetterOutOfRange {
                letter: i,
                n: self.n,
            });
        }
        Ok(i as u8)
    }

    /// `c · s_μ s_ν*`.
    pub fn monomial(&self, mu: &[u8], nu: &[u8], c: ExactScalar) -> Result<CuntzElement> {
        self.from_terms([(mu.to_vec(), nu.to_vec(), c)])
    }

    /// Builds and normalizes `Σ c · s_μ s_ν*`.
    pub fn from_terms<I>(&self, terms: I) -> Result<CuntzElement>
    where
        I: IntoIterator<Item = (Vec<u8>, Vec<u8>, ExactScalar)>,
    {
        let mut map = TermMap::new();
        for (mu, nu, c) in terms {
            let key = (Word::new(mu, self.n)?, Word::new(nu, self.n)?);
            accumulate(&mut map, key, c);
        }
        normalize_map(*self, map)
    }
}

fn accumulate(map: &mut TermMap, key: TermKey, c: ExactScalar) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let sum = e.get() + &c;
            if sum.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = sum;
            }
        }
    }
}

fn degree(key: &TermKey) -> isize {
    key.0.len() as isize - key.1.len() as isize
}

/// Expansion of each degree class to its maximal `|ν|`.
fn normalize_map(alg: CuntzAlgebra, map: TermMap) -> Result<CuntzElement> {
    let mut levels: BTreeMap<isize, usize> = BTreeMap::new();
    for key in map.keys() {
        let l = levels.entry(degree(key)).or_insert(0);
        *l = (*l).max(key.1.len());
    }
    let n = alg.n as u128;
    let mut projected: u128 = 0;
    for key in map.keys() {
        let gap = levels[&degree(key)] - key.1.len();
        let count = u32::try_from(gap)
            .ok()
            .and_then(|g| n.checked_pow(g))
            .unwrap_or(u128::MAX);
        projected = projected.saturating_add(count);
    }
    if projected > alg.budget as u128 {
        return Err(Error::ExpansionBudgetExceeded {
            projected,
            budget: alg.budget,
        });
    }

    let mut out = TermMap::new();
    let mut suffixes: BTreeMap<usize, Vec<Word>> = BTreeMap::new();
    for ((mu, nu), c) in map {
        let gap = levels[&(mu.len() as isize - nu.len() as isize)] - nu.len();
        if gap == 0 {
            accumulate(&mut out, (mu, nu), c);
            continue;
        }
        let tails = suffixes
            .entry(gap)
            .or_insert_with(|| words_of_length(alg.n, gap));
        for w in tails.iter() {
            accumulate(
                &mut out,
                (mu.concat(w.letters()), nu.concat(w.letters())),
                c.clone(),
            );
        }
    }
    Ok(CuntzElement { alg, terms: out })
}

/// A normalized element of the dense `*`-subalgebra of `𝒪ₙ`.
///
/// Structural equality (`PartialEq`) is not provided on purpose: two equal
/// elements may sit at different expansion levels. Use [`CuntzElement::equals`].
#[derive(Clone)]
pub struct CuntzElement {
    alg: CuntzAlgebra,
    terms: TermMap,
}

impl CuntzElement {
    pub fn algebra(&self) -> CuntzAlgebra {
        self.alg
    }

    pub fn n(&self) -> u8 {
        self.alg.n
    }

    /// Terms `(μ, ν, c)` in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Word, &ExactScalar)> {
        self.terms.iter().map(|((mu, nu), c)| (mu, nu, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// True when the term map is empty, i.e. the element is 0.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn with_budget(&self, budget: usize) -> CuntzElement {
        CuntzElement {
            alg: self.alg.with_budget(budget),
            terms: self.terms.clone(),
        }
    }

    /// Re-runs normalization. Elements are always stored normalized, so this
    /// returns an identical term map.
    pub fn normalize(&self) -> Result<CuntzElement> {
        normalize_map(self.alg, self.terms.clone())
    }

    pub fn add(&self, other: &CuntzElement) -> Result<CuntzElement> {
        let alg = self.alg.join(&other.alg)?;
        let mut map = self.terms.clone();
        for (k, c) in &other.terms {
            accumulate(&mut map, k.clone(), c.clone());
        }
        normalize_map(alg, map)
    }

    pub fn sub(&self, other: &CuntzElement) -> Result<CuntzElement> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CuntzElement {
        self.scale(&ExactScalar::integer(-1))
    }

    pub fn scale(&self, c: &ExactScalar) -> CuntzElement {
        if c.is_zero() {
            return self.alg.zero();
        }
        CuntzElement {
            alg: self.alg,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    /// Bilinear extension of
    /// `(s_μ s_ν*)(s_ρ s_σ*) = s_{μρ'} s_σ*` if `ρ = νρ'`,
    /// `s_μ s_{σν'}*` if `ν = ρν'`, and `0` otherwise.
    pub fn mul(&self, other: &CuntzElement) -> Result<CuntzElement> {
        let alg = self.alg.join(&other.alg)?;
        let mut map = TermMap::new();
        for ((mu, nu), c) in &self.terms {
            for ((rho, sigma), d) in &other.terms {
                let key = if let Some(rest) = rho.strip_prefix(nu) {
                    (mu.concat(rest), sigma.clone())
                } else if let Some(rest) = nu.strip_prefix(rho) {
                    (mu.clone(), sigma.concat(rest))
                } else {
                    continue;
                };
                accumulate(&mut map, key, c * d);
            }
        }
        normalize_map(alg, map)
    }

    /// `(s_μ s_ν*)* = s_ν s_μ*`, conjugate-linear on coefficients.
    pub fn adjoint(&self) -> CuntzElement {
        CuntzElement {
            alg: self.alg,
            terms: self
                .terms
                .iter()
                .map(|((mu, nu), c)| ((nu.clone(), mu.clone()), c.conj()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Result<CuntzElement> {
        let mut acc = self.alg.one();
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Exact equality: `normalize(x − y)` has no terms.
    pub fn equals(&self, other: &CuntzElement) -> Result<bool> {
        Ok(self.sub(other)?.is_zero())
    }

    /// Distinct degrees `|μ| − |ν|` present.
    pub fn degrees(&self) -> Vec<isize> {
        let mut d: Vec<isize> = self.terms.keys().map(degree).collect();
        d.dedup();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn is_degree_zero(&self) -> bool {
        self.terms.keys().all(|k| degree(k) == 0)
    }

    /// Common `|ν|` of the given degree class, if that class is present.
    pub fn level(&self, deg: isize) -> Option<usize> {
        self.terms
            .keys()
            .find(|k| degree(k) == deg)
            .map(|k| k.1.len())
    }

    /// `Some(λ)` when the element equals `λ·1`.
    pub fn as_scalar(&self) -> Option<ExactScalar> {
        if self.terms.is_empty() {
            return Some(ExactScalar::zero());
        }
        if !self.is_degree_zero() {
            return None;
        }
        let level = self.level(0)?;
        let expected = words_of_length(self.alg.n, level);
        if expected.len() != self.terms.len() {
            return None;
        }
        let lambda = self.terms.values().next()?.clone();
        for w in &expected {
            match self.terms.get(&(w.clone(), w.clone())) {
                Some(c) if *c == lambda => {}
                _ => return None,
            }
        }
        Some(lambda)
    }

    /// Display transform: folds `Σ_w c·s_{μw} s_{νw}*` back into `c·s_μ s_ν*`
    /// wherever a whole degree class allows it. The value is unchanged and the
    /// result is still a valid normal form, only at a lower level. Equality
    /// never depends on this.
    pub fn contract(&self) -> CuntzElement {
        let n = self.alg.n;
        let mut by_degree: BTreeMap<isize, TermMap> = BTreeMap::new();
        for (k, c) in &self.terms {
            by_degree
                .entry(degree(k))
                .or_default()
                .insert(k.clone(), c.clone());
        }
        let mut out = TermMap::new();
        for (_, mut class) in by_degree {
            while let Some(next) = contract_once(&class, n) {
                class = next;
            }
            out.extend(class);
        }
        CuntzElement {
            alg: self.alg,
            terms: out,
        }
    }
}

fn contract_once(class: &TermMap, n: u8) -> Option<TermMap> {
    let mut groups: BTreeMap<TermKey, Vec<(u8, &ExactScalar)>> = BTreeMap::new();
    for ((mu, nu), c) in class {
        let (&lm, mu_head) = mu.letters().split_last()?;
        let (&ln, nu_head) = nu.letters().split_last()?;
        if lm != ln {
            return None;
        }
        groups
            .entry((Word(mu_head.to_vec()), Word(nu_head.to_vec())))
            .or_default()
            .push((lm, c));
    }
    let mut out = TermMap::new();
    for (key, members) in groups {
        if members.len() != n as usize || members.iter().any(|(_, c)| *c != members[0].1) {
            return None;
        }
        out.insert(key, members[0].1.clone());
    }
    Some(out)
}

fn fmt_monomial(mu: &Word, nu: &Word) -> String {
    let mut parts: Vec<String> = mu.letters().iter().map(|l| format!("s{l}")).collect();
    parts.extend(nu.letters().iter().rev().map(|l| format!("s{l}'")));
    parts.join("*")
}

/// Expression-language rendering, e.g. `(1/2)*s1*s1' + s2*s1'`.
impl fmt::Display for CuntzElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|((mu, nu), c)| {
                let mono = fmt_monomial(mu, nu);
                match (mono.is_empty(), c.is_one()) {
                    (true, _) => format!("({c})"),
                    (false, true) => mono,
                    (false, false) => format!("({c})*{mono}"),
                }
            })
            .collect();
        f.write_str(&rendered.join(" + "))
    }
}

impl fmt::Debug for CuntzElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CuntzElement[n={}]({self})", self.alg.n)
    }
}
