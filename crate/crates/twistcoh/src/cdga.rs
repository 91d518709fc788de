//! Finite-dimensional graded-commutative differential algebras presented by
//! generators, truncations, and a differential.
//!
//! Monomials are kept in a normal form (generators in declaration order) and
//! multiplication carries the Koszul sign: transposing elements of degrees
//! i and j costs (-1)^(ij). Odd generators square to zero; even generators
//! are nilpotent of their declared truncation order, which keeps every
//! algebra finite-dimensional.

use crate::exactlin::{Matrix, Scalar};
use num::{One, Zero};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CdgaError {
    #[error("d({generator}) is not homogeneous of degree {expected}")]
    Degree { generator: String, expected: u32 },
    #[error("d^2({generator}) = {value} is nonzero")]
    Leibniz { generator: String, value: String },
    #[error("truncation error for generator {generator}: {reason}")]
    Truncation { generator: String, reason: String },
    #[error("unknown generator: {0}")]
    UnknownGenerator(String),
    #[error("duplicate generator name: {0}")]
    DuplicateGenerator(String),
    #[error("algebra dimension {dim} exceeds the cap {cap}")]
    TooLarge { dim: u128, cap: u128 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: u32,
    /// Nilpotency order for even generators: g^truncation = 0.
    pub truncation: Option<u32>,
}

impl GeneratorSpec {
    pub fn odd(name: &str, degree: u32) -> Self {
        GeneratorSpec {
            name: name.to_string(),
            degree,
            truncation: None,
        }
    }

    pub fn even(name: &str, degree: u32, truncation: u32) -> Self {
        GeneratorSpec {
            name: name.to_string(),
            degree,
            truncation: Some(truncation),
        }
    }

    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

/// Exponent vector aligned with the generator order of a presentation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub exponents: Vec<u32>,
}

impl Monomial {
    pub fn unit(n: usize) -> Self {
        Monomial {
            exponents: vec![0; n],
        }
    }

    pub fn generator(n: usize, i: usize) -> Self {
        let mut m = Monomial::unit(n);
        m.exponents[i] = 1;
        m
    }
}

/// Sparse exact-rational linear combination of monomials.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Element {
    pub terms: BTreeMap<Monomial, Scalar>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn from_term(m: Monomial, c: Scalar) -> Self {
        let mut e = Element::zero();
        if !c.is_zero() {
            e.terms.insert(m, c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            // look up key again to remove; avoid holding the borrow
            let key = self
                .terms
                .iter()
                .find(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone());
            if let Some(k) = key {
                self.terms.remove(&k);
            }
        }
    }

    pub fn add(&self, other: &Element) -> Element {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Element) -> Element {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Element {
        Element {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Element {
        if s.is_zero() {
            return Element::zero();
        }
        Element {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }
}

/// A validated presentation: generators plus differential, with cached
/// per-degree monomial bases.
#[derive(Debug, Clone)]
pub struct Presentation {
    pub generators: Vec<GeneratorSpec>,
    /// Indexed like `generators`; zero element means d(g) = 0.
    pub differentials: Vec<Element>,
    top_degree: u32,
    bases: Vec<Vec<Monomial>>,
    /// monomial -> (degree, position within that degree's basis)
    index: BTreeMap<Monomial, (u32, usize)>,
    /// monomial -> position in the flattened all-degrees basis
    flat_index: BTreeMap<Monomial, usize>,
    flat: Vec<Monomial>,
    degree_offsets: Vec<usize>,
}

pub const DEFAULT_DIM_CAP: u128 = 1_000_000;

impl Presentation {
    /// Build without validating the differential (the bases are still
    /// computed, and the truncation rules are enforced since they control
    /// finiteness). Used by the parser before `validate`.
    pub fn raw(
        generators: Vec<GeneratorSpec>,
        differentials: Vec<Element>,
        cap: u128,
    ) -> Result<Self, CdgaError> {
        let n = generators.len();
        assert_eq!(differentials.len(), n);
        let mut seen = std::collections::BTreeSet::new();
        for g in &generators {
            if !seen.insert(g.name.clone()) {
                return Err(CdgaError::DuplicateGenerator(g.name.clone()));
            }
            if g.degree == 0 {
                return Err(CdgaError::Truncation {
                    generator: g.name.clone(),
                    reason: "generators must have positive degree".into(),
                });
            }
            match (g.is_odd(), g.truncation) {
                (true, Some(_)) => {
                    return Err(CdgaError::Truncation {
                        generator: g.name.clone(),
                        reason: "odd generators carry no truncation (they square to zero)".into(),
                    })
                }
                (false, None) => {
                    return Err(CdgaError::Truncation {
                        generator: g.name.clone(),
                        reason: "even generators must carry a truncation".into(),
                    })
                }
                (false, Some(t)) if t < 2 => {
                    return Err(CdgaError::Truncation {
                        generator: g.name.clone(),
                        reason: "truncation must be at least 2".into(),
                    })
                }
                _ => {}
            }
        }
        let mut total: u128 = 1;
        for g in &generators {
            let span = if g.is_odd() {
                2
            } else {
                g.truncation.unwrap() as u128
            };
            total = total.saturating_mul(span);
            if total > cap {
                return Err(CdgaError::TooLarge { dim: total, cap });
            }
        }
        let top_degree: u32 = generators
            .iter()
            .map(|g| {
                if g.is_odd() {
                    g.degree
                } else {
                    g.degree * (g.truncation.unwrap() - 1)
                }
            })
            .sum();
        let mut bases: Vec<Vec<Monomial>> = vec![Vec::new(); top_degree as usize + 1];
        let mut stack = vec![0u32; n];
        enumerate(&generators, 0, &mut stack, &mut |exps| {
            let deg: u32 = exps
                .iter()
                .zip(&generators)
                .map(|(e, g)| e * g.degree)
                .sum();
            bases[deg as usize].push(Monomial {
                exponents: exps.to_vec(),
            });
        });
        for b in bases.iter_mut() {
            b.sort_by(|a, b| b.exponents.cmp(&a.exponents));
        }
        let mut index = BTreeMap::new();
        let mut flat_index = BTreeMap::new();
        let mut flat = Vec::new();
        let mut degree_offsets = Vec::with_capacity(bases.len() + 1);
        let mut off = 0usize;
        for (deg, b) in bases.iter().enumerate() {
            degree_offsets.push(off);
            for (pos, m) in b.iter().enumerate() {
                index.insert(m.clone(), (deg as u32, pos));
                flat_index.insert(m.clone(), off + pos);
                flat.push(m.clone());
            }
            off += b.len();
        }
        degree_offsets.push(off);
        Ok(Presentation {
            generators,
            differentials,
            top_degree,
            bases,
            index,
            flat_index,
            flat,
            degree_offsets,
        })
    }

    pub fn new(
        generators: Vec<GeneratorSpec>,
        differentials: Vec<Element>,
    ) -> Result<Self, CdgaError> {
        Presentation::raw(generators, differentials, DEFAULT_DIM_CAP)?.validate()
    }

    /// Check degree homogeneity of every d(g), d^2 = 0 on every generator,
    /// and that the truncation ideal is respected by d.
    pub fn validate(self) -> Result<Self, CdgaError> {
        for (i, g) in self.generators.iter().enumerate() {
            let dg = &self.differentials[i];
            for m in dg.terms.keys() {
                if self.mono_degree(m) != g.degree + 1 {
                    return Err(CdgaError::Degree {
                        generator: g.name.clone(),
                        expected: g.degree + 1,
                    });
                }
            }
        }
        for (i, g) in self.generators.iter().enumerate() {
            let ddg = self.d(&self.differentials[i]);
            if !ddg.is_zero() {
                return Err(CdgaError::Leibniz {
                    generator: g.name.clone(),
                    value: self.format_element(&ddg),
                });
            }
            if let Some(t) = g.truncation {
                if !self.differentials[i].is_zero() {
                    // d(g^t) = t g^(t-1) dg must vanish in the quotient
                    let mut m = Monomial::unit(self.generators.len());
                    m.exponents[i] = t - 1;
                    let lead = Element::from_term(m, Scalar::one());
                    if !self.mul(&lead, &self.differentials[i]).is_zero() {
                        return Err(CdgaError::Truncation {
                            generator: g.name.clone(),
                            reason: format!(
                                "d does not respect the truncation {}^{} = 0",
                                g.name, t
                            ),
                        });
                    }
                }
            }
        }
        Ok(self)
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn generator_element(&self, i: usize) -> Element {
        Element::from_term(
            Monomial::generator(self.generators.len(), i),
            Scalar::one(),
        )
    }

    pub fn one(&self) -> Element {
        Element::from_term(Monomial::unit(self.generators.len()), Scalar::one())
    }

    pub fn top_degree(&self) -> u32 {
        self.top_degree
    }

    pub fn total_dim(&self) -> usize {
        self.flat.len()
    }

    pub fn mono_degree(&self, m: &Monomial) -> u32 {
        m.exponents
            .iter()
            .zip(&self.generators)
            .map(|(e, g)| e * g.degree)
            .sum()
    }

    /// Degree of a homogeneous element; `None` for 0 or inhomogeneous input.
    pub fn element_degree(&self, e: &Element) -> Option<u32> {
        let mut deg = None;
        for m in e.terms.keys() {
            let d = self.mono_degree(m);
            match deg {
                None => deg = Some(d),
                Some(x) if x != d => return None,
                _ => {}
            }
        }
        deg
    }

    pub fn is_homogeneous(&self, e: &Element) -> bool {
        e.is_zero() || self.element_degree(e).is_some()
    }

    /// Every term of odd total degree?
    pub fn is_odd_element(&self, e: &Element) -> bool {
        !e.is_zero() && e.terms.keys().all(|m| self.mono_degree(m) % 2 == 1)
    }

    /// All monomials of the given total degree, canonical order.
    pub fn basis(&self, degree: u32) -> &[Monomial] {
        if degree as usize >= self.bases.len() {
            &[]
        } else {
            &self.bases[degree as usize]
        }
    }

    pub fn dim_degree(&self, degree: u32) -> usize {
        self.basis(degree).len()
    }

    /// Product of two normal-form monomials: combined exponents and the
    /// Koszul sign from interleaving the odd generators. `None` if the
    /// product dies by truncation or an odd square.
    pub fn mul_mono(&self, a: &Monomial, b: &Monomial) -> Option<(Monomial, i32)> {
        let n = self.generators.len();
        let mut exps = vec![0u32; n];
        for i in 0..n {
            let e = a.exponents[i] + b.exponents[i];
            let g = &self.generators[i];
            if g.is_odd() {
                if e > 1 {
                    return None;
                }
            } else if e >= g.truncation.unwrap() {
                return None;
            }
            exps[i] = e;
        }
        // count transpositions of odd generators: each odd factor of b at
        // slot j moves left past the odd factors of a at slots i > j
        let mut swaps: u64 = 0;
        let mut odd_tail: u64 = 0; // odd exponents of a at slots > j, accumulated from the right
        for j in (0..n).rev() {
            if self.generators[j].is_odd() {
                swaps += b.exponents[j] as u64 * odd_tail;
                odd_tail += a.exponents[j] as u64;
            }
        }
        let sign = if swaps % 2 == 0 { 1 } else { -1 };
        Some((Monomial { exponents: exps }, sign))
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        let mut out = Element::zero();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                if let Some((m, sign)) = self.mul_mono(ma, mb) {
                    let mut c = ca * cb;
                    if sign < 0 {
                        c = -c;
                    }
                    out.add_term(m, c);
                }
            }
        }
        out
    }

    /// The untwisted differential, extended from generators by the signed
    /// Leibniz rule.
    pub fn d(&self, a: &Element) -> Element {
        let n = self.generators.len();
        let mut out = Element::zero();
        for (m, coeff) in &a.terms {
            let mut prefix_parity = 0u32;
            for i in 0..n {
                let e = m.exponents[i];
                if e > 0 && !self.differentials[i].is_zero() {
                    let mut front = m.exponents.clone();
                    front[i] -= 1;
                    for slot in front.iter_mut().skip(i + 1) {
                        *slot = 0;
                    }
                    let mut back = vec![0u32; n];
                    back[(i + 1)..].copy_from_slice(&m.exponents[(i + 1)..]);
                    let mut c = coeff * Scalar::from(num::BigInt::from(e));
                    if prefix_parity % 2 == 1 {
                        c = -c;
                    }
                    let front_el = Element::from_term(Monomial { exponents: front }, c);
                    let term = self.mul(
                        &self.mul(&front_el, &self.differentials[i]),
                        &Element::from_term(
                            Monomial { exponents: back },
                            Scalar::one(),
                        ),
                    );
                    out = out.add(&term);
                }
                prefix_parity += e * self.generators[i].degree;
            }
        }
        out
    }

    // ---- coordinates ----------------------------------------------------

    pub fn mono_position(&self, m: &Monomial) -> Option<(u32, usize)> {
        self.index.get(m).copied()
    }

    pub fn flat_basis(&self) -> &[Monomial] {
        &self.flat
    }

    pub fn degree_offset(&self, degree: u32) -> usize {
        let d = degree as usize;
        if d >= self.degree_offsets.len() {
            *self.degree_offsets.last().unwrap()
        } else {
            self.degree_offsets[d]
        }
    }

    /// Coordinates of a homogeneous element in the basis of its degree.
    pub fn to_degree_vec(&self, degree: u32, e: &Element) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.dim_degree(degree)];
        for (m, c) in &e.terms {
            let (d, pos) = self.mono_position(m).expect("monomial outside basis");
            assert_eq!(d, degree, "element not homogeneous of expected degree");
            v[pos] = c.clone();
        }
        v
    }

    pub fn from_degree_vec(&self, degree: u32, v: &[Scalar]) -> Element {
        let mut e = Element::zero();
        for (pos, c) in v.iter().enumerate() {
            if !c.is_zero() {
                e.add_term(self.basis(degree)[pos].clone(), c.clone());
            }
        }
        e
    }

    pub fn to_full_vec(&self, e: &Element) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.total_dim()];
        for (m, c) in &e.terms {
            let pos = self.flat_index[m];
            v[pos] = c.clone();
        }
        v
    }

    pub fn from_full_vec(&self, v: &[Scalar]) -> Element {
        let mut e = Element::zero();
        for (pos, c) in v.iter().enumerate() {
            if !c.is_zero() {
                e.add_term(self.flat[pos].clone(), c.clone());
            }
        }
        e
    }

    /// Matrix of d from degree k to degree k+1 (column j = d of the jth
    /// basis monomial of degree k).
    pub fn d_matrix(&self, degree: u32) -> Matrix {
        let src = self.basis(degree);
        let tgt_dim = self.dim_degree(degree + 1);
        let mut m = Matrix::zero(tgt_dim, src.len());
        for (j, mono) in src.iter().enumerate() {
            let img = self.d(&Element::from_term(mono.clone(), Scalar::one()));
            for (t, c) in &img.terms {
                let (d, pos) = self.mono_position(t).unwrap();
                debug_assert_eq!(d, degree + 1);
                m.set(pos, j, c.clone());
            }
        }
        m
    }

    /// Matrix of d on the flattened all-degrees basis.
    pub fn full_d_matrix(&self) -> Matrix {
        let n = self.total_dim();
        let mut m = Matrix::zero(n, n);
        for (j, mono) in self.flat.iter().enumerate() {
            let img = self.d(&Element::from_term(mono.clone(), Scalar::one()));
            for (t, c) in &img.terms {
                m.set(self.flat_index[t], j, c.clone());
            }
        }
        m
    }

    /// Matrix of left multiplication by a fixed element, on the flattened
    /// basis.
    pub fn left_mult_matrix(&self, e: &Element) -> Matrix {
        let n = self.total_dim();
        let mut m = Matrix::zero(n, n);
        for (j, mono) in self.flat.iter().enumerate() {
            let img = self.mul(e, &Element::from_term(mono.clone(), Scalar::one()));
            for (t, c) in &img.terms {
                m.set(self.flat_index[t], j, c.clone());
            }
        }
        m
    }

    // ---- constructions --------------------------------------------------

    /// Tensor product. Generator names of `other` colliding with ours are
    /// renamed by appending primes.
    pub fn tensor(&self, other: &Presentation) -> Result<Presentation, CdgaError> {
        let n1 = self.generators.len();
        let n2 = other.generators.len();
        let mut gens = self.generators.clone();
        let taken: std::collections::BTreeSet<String> =
            gens.iter().map(|g| g.name.clone()).collect();
        for g in &other.generators {
            let mut name = g.name.clone();
            while taken.contains(&name) || gens.iter().any(|h| h.name == name) {
                name.push('\'');
            }
            gens.push(GeneratorSpec {
                name,
                degree: g.degree,
                truncation: g.truncation,
            });
        }
        let embed1 = |m: &Monomial| {
            let mut e = m.exponents.clone();
            e.extend(std::iter::repeat(0).take(n2));
            Monomial { exponents: e }
        };
        let embed2 = |m: &Monomial| {
            let mut e = vec![0u32; n1];
            e.extend_from_slice(&m.exponents);
            Monomial { exponents: e }
        };
        let mut diffs = Vec::with_capacity(n1 + n2);
        for dg in &self.differentials {
            let mut e = Element::zero();
            for (m, c) in &dg.terms {
                e.add_term(embed1(m), c.clone());
            }
            diffs.push(e);
        }
        for dg in &other.differentials {
            let mut e = Element::zero();
            for (m, c) in &dg.terms {
                e.add_term(embed2(m), c.clone());
            }
            diffs.push(e);
        }
        Presentation::raw(gens, diffs, DEFAULT_DIM_CAP)?.validate()
    }

    /// Embed an element of `self` into `self.tensor(other)` (first factor).
    pub fn embed_left(&self, tensor: &Presentation, e: &Element) -> Element {
        let pad = tensor.generators.len() - self.generators.len();
        let mut out = Element::zero();
        for (m, c) in &e.terms {
            let mut exps = m.exponents.clone();
            exps.extend(std::iter::repeat(0).take(pad));
            out.add_term(Monomial { exponents: exps }, c.clone());
        }
        out
    }

    pub fn format_element(&self, e: &Element) -> String {
        if e.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<(&Monomial, &Scalar)> = e.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            self.mono_degree(a)
                .cmp(&self.mono_degree(b))
                .then(b.exponents.cmp(&a.exponents))
        });
        let mut out = String::new();
        for (i, (m, c)) in terms.iter().enumerate() {
            let mono = self.format_mono(m);
            let (sign, mag) = if crate::exactlin::scalar_is_negative(c) {
                ("-", -(*c).clone())
            } else {
                ("+", (*c).clone())
            };
            if i == 0 {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                write!(out, " {} ", sign).unwrap();
            }
            if mag.is_one() && mono != "1" {
                out.push_str(&mono);
            } else if mono == "1" {
                out.push_str(&crate::exactlin::format_scalar(&mag));
            } else {
                write!(out, "{}*{}", crate::exactlin::format_scalar(&mag), mono).unwrap();
            }
        }
        out
    }

    pub fn format_mono(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.exponents.iter().enumerate() {
            if e == 1 {
                parts.push(self.generators[i].name.clone());
            } else if e > 1 {
                parts.push(format!("{}^{}", self.generators[i].name, e));
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

fn enumerate(
    gens: &[GeneratorSpec],
    i: usize,
    stack: &mut Vec<u32>,
    f: &mut impl FnMut(&[u32]),
) {
    if i == gens.len() {
        f(stack);
        return;
    }
    let max = if gens[i].is_odd() {
        1
    } else {
        gens[i].truncation.unwrap() - 1
    };
    for e in 0..=max {
        stack[i] = e;
        enumerate(gens, i + 1, stack, f);
    }
    stack[i] = 0;
}

// ---- built-in models ---------------------------------------------------

/// Heisenberg nilmanifold model: x, y, z in degree 1 with dz = x*y.
pub fn heisenberg() -> Presentation {
    let gens = vec![
        GeneratorSpec::odd("x", 1),
        GeneratorSpec::odd("y", 1),
        GeneratorSpec::odd("z", 1),
    ];
    let mut dz = Element::zero();
    dz.add_term(
        Monomial {
            exponents: vec![1, 1, 0],
        },
        Scalar::one(),
    );
    Presentation::new(gens, vec![Element::zero(), Element::zero(), dz]).unwrap()
}

/// Torus-bundle tower: generators x, e1..en in degree 1 with
/// d e_i = x*e_(i+1) for i < n and d e_n = 0. tower(2) is isomorphic to
/// the Heisenberg model under z = e1, y = e2.
pub fn tower(n: usize) -> Presentation {
    assert!(n >= 1);
    let mut gens = vec![GeneratorSpec::odd("x", 1)];
    for i in 1..=n {
        gens.push(GeneratorSpec::odd(&format!("e{}", i), 1));
    }
    let mut diffs = vec![Element::zero()];
    for i in 1..=n {
        if i < n {
            let mut exps = vec![0u32; n + 1];
            exps[0] = 1;
            exps[i + 1] = 1; // x * e_(i+1)
            diffs.push(Element::from_term(Monomial { exponents: exps }, Scalar::one()));
        } else {
            diffs.push(Element::zero());
        }
    }
    Presentation::new(gens, diffs).unwrap()
}

/// Complex projective space model: one degree-2 generator t with t^(n+1) = 0.
pub fn cp(n: u32) -> Presentation {
    assert!(n >= 1);
    let gens = vec![GeneratorSpec::even("t", 2, n + 1)];
    Presentation::new(gens, vec![Element::zero()]).unwrap()
}

/// Built-in model lookup by name.
pub fn builtin(name: &str) -> Result<Presentation, CdgaError> {
    match name {
        "heisenberg" => Ok(heisenberg()),
        "cp2" => Ok(cp(2)),
        "cp3" => Ok(cp(3)),
        "tower2" => Ok(tower(2)),
        "tower3" => Ok(tower(3)),
        "m-heisenberg-cp2" => heisenberg().tensor(&cp(2)),
        "tower3-cp3" => tower(3).tensor(&cp(3)),
        _ => Err(CdgaError::UnknownGenerator(format!(
            "unknown builtin model: {name}"
        ))),
    }
}
