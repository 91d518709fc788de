//! Shared helpers for the integration suites: seeded random presentations
//! in Sullivan style (each differential lands in the subalgebra of earlier
//! generators, so d^2 = 0 holds by construction of closed values).
#![allow(dead_code)]

use num::Zero;
use rand::Rng;
use twistcoh::cdga::{Element, GeneratorSpec, Monomial, Presentation};
use twistcoh::{Matrix, Scalar};

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(n.into())
}

/// Random valid presentation: 2..=max_gens generators, odd generators in
/// degree 1 or 3 with differentials drawn from the cocycles of the earlier
/// generators, even generators (degree 2, truncated) with zero differential.
pub fn random_presentation(rng: &mut impl Rng, max_gens: usize) -> Presentation {
    let n = rng.gen_range(2..=max_gens);
    let mut gens: Vec<GeneratorSpec> = Vec::with_capacity(n);
    for i in 0..n {
        let name = format!("g{i}");
        if rng.gen_bool(0.7) {
            let degree = if rng.gen_bool(0.8) { 1 } else { 3 };
            gens.push(GeneratorSpec::odd(&name, degree));
        } else {
            gens.push(GeneratorSpec::even(&name, 2, rng.gen_range(2..=3)));
        }
    }
    let mut diffs: Vec<Element> = vec![Element::zero(); n];
    for i in 1..n {
        if !gens[i].is_odd() {
            continue;
        }
        let sub = Presentation::raw(
            gens[..i].to_vec(),
            diffs[..i]
                .iter()
                .map(|e| truncate_element(e, i))
                .collect(),
            1 << 20,
        )
        .unwrap();
        let target = gens[i].degree + 1;
        if target > sub.top_degree() {
            continue;
        }
        let dim = sub.dim_degree(target);
        if dim == 0 {
            continue;
        }
        // closed elements of the target degree in the earlier subalgebra
        let cocycles = if target == sub.top_degree() {
            twistcoh::Subspace::full(dim)
        } else {
            sub.d_matrix(target).kernel()
        };
        let mut v = vec![Scalar::zero(); dim];
        for b in cocycles.basis_vectors() {
            let c = int(rng.gen_range(-2..=2));
            for (slot, x) in v.iter_mut().zip(&b) {
                *slot += x * &c;
            }
        }
        diffs[i] = pad_element(&sub.from_degree_vec(target, &v), n);
    }
    Presentation::new(gens, diffs).unwrap()
}

/// Project an element of the full algebra onto the first `k` generators
/// (all its monomials only involve those by construction).
fn truncate_element(e: &Element, k: usize) -> Element {
    let mut out = Element::zero();
    for (m, c) in &e.terms {
        debug_assert!(m.exponents[k..].iter().all(|&x| x == 0));
        out.add_term(
            Monomial {
                exponents: m.exponents[..k].to_vec(),
            },
            c.clone(),
        );
    }
    out
}

fn pad_element(e: &Element, n: usize) -> Element {
    let mut out = Element::zero();
    for (m, c) in &e.terms {
        let mut exps = m.exponents.clone();
        exps.resize(n, 0);
        out.add_term(Monomial { exponents: exps }, c.clone());
    }
    out
}

/// Random closed odd twist (possibly zero) of degree 1 or 3.
pub fn random_twist(rng: &mut impl Rng, p: &Presentation) -> Element {
    let degree = if rng.gen_bool(0.5) { 1 } else { 3 };
    if degree > p.top_degree() {
        return Element::zero();
    }
    let dim = p.dim_degree(degree);
    if dim == 0 {
        return Element::zero();
    }
    let cocycles = if degree == p.top_degree() {
        twistcoh::Subspace::full(dim)
    } else {
        p.d_matrix(degree).kernel()
    };
    let mut v = vec![Scalar::zero(); dim];
    for b in cocycles.basis_vectors() {
        let c = int(rng.gen_range(-2..=2));
        for (slot, x) in v.iter_mut().zip(&b) {
            *slot += x * &c;
        }
    }
    p.from_degree_vec(degree, &v)
}

/// Random element of a fixed degree (not necessarily closed).
pub fn random_element(rng: &mut impl Rng, p: &Presentation, degree: u32) -> Element {
    if degree > p.top_degree() {
        return Element::zero();
    }
    let dim = p.dim_degree(degree);
    let v: Vec<Scalar> = (0..dim).map(|_| int(rng.gen_range(-2..=2))).collect();
    p.from_degree_vec(degree, &v)
}

/// Dims of the twisted complex after tensoring with K = Q ⊕ (Q --1--> Q):
/// even' = even ⊕ odd ⊕ even, odd' = odd ⊕ even ⊕ odd, with the
/// contractible summand mapped isomorphically across.
pub fn stabilized_dims(a: &Matrix, b: &Matrix) -> (usize, usize) {
    // a: even -> odd, b: odd -> even
    let ne = a.cols;
    let no = a.rows;
    let block = |rows: Vec<Vec<Matrix>>| -> Matrix {
        let total_r: usize = rows.iter().map(|r| r[0].rows).sum();
        let total_c: usize = rows[0].iter().map(|m| m.cols).sum();
        let mut out = Matrix::zero(total_r, total_c);
        let mut roff = 0;
        for row in &rows {
            let mut coff = 0;
            for m in row {
                for i in 0..m.rows {
                    for j in 0..m.cols {
                        out.set(roff + i, coff + j, m.get(i, j).clone());
                    }
                }
                coff += m.cols;
            }
            roff += row[0].rows;
        }
        out
    };
    let neg_ido = Matrix::from_fn(no, no, |i, j| {
        if i == j {
            -Scalar::from_integer(1.into())
        } else {
            Scalar::zero()
        }
    });
    // D'(v x 1) = Dv x 1; D'(v x s) = Dv x s + (-1)^|v| v x ds with ds = t;
    // D'(v x t) = Dv x t. Columns [V 1, V s, V t], s odd, t even.
    let d_even_to_odd = block(vec![
        vec![a.clone(), Matrix::zero(no, no), Matrix::zero(no, ne)],
        vec![Matrix::zero(ne, ne), b.clone(), Matrix::zero(ne, ne)],
        vec![Matrix::zero(no, ne), neg_ido, a.clone()],
    ]);
    let d_odd_to_even = block(vec![
        vec![b.clone(), Matrix::zero(ne, ne), Matrix::zero(ne, no)],
        vec![Matrix::zero(no, no), a.clone(), Matrix::zero(no, no)],
        vec![Matrix::zero(ne, no), Matrix::identity(ne), b.clone()],
    ]);
    debug_assert!(d_odd_to_even.mul(&d_even_to_odd).is_zero());
    let h0 = d_even_to_odd.kernel().dim() - d_odd_to_even.rank();
    let h1 = d_odd_to_even.kernel().dim() - d_even_to_odd.rank();
    (h0, h1)
}
