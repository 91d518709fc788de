//! The characteristic-class algebra: the graded polynomial algebra in
//! x_1, x_2, ... (x_n of weight n, real degree 2n), the derivation d with
//! d x_n = x_(n-1), the invariant ring J = ker d with its Poincare series,
//! the one-parameter group action y_n = sum x_(n-k) u^k/k!, the delta
//! derivation and exp(lambda*delta) lift, psi-operation characters, Newton
//! conversion, and the Wang-model report.

use crate::exactlin::{binomial, factorial, int, Matrix, Scalar};
use crate::mpoly::{Exps, MPoly};
use crate::par::par_map;
use num::{One, Zero};
use thiserror::Error;

/// Variable id scheme: u = 0; x_n = n (n >= 1); s_n = 100 + n; c_n = 200 + n.
pub const U: u32 = 0;

pub fn xvar(n: u32) -> u32 {
    debug_assert!((1..100).contains(&n));
    n
}

pub fn svar(n: u32) -> u32 {
    100 + n
}

pub fn cvar(n: u32) -> u32 {
    200 + n
}

/// Weight grading: weight(x_n) = weight(s_n) = weight(c_n) = n, weight(u) = 1.
pub fn weight_of(v: u32) -> u32 {
    match v {
        U => 1,
        1..=99 => v,
        100..=199 => v - 100,
        _ => v - 200,
    }
}

/// Word-length grading: every x/s/c variable counts 1, u counts 0.
pub fn word_length_of(v: u32) -> u32 {
    if v == U {
        0
    } else {
        1
    }
}

pub fn name_var(v: u32) -> String {
    match v {
        U => "u".to_string(),
        1..=99 => format!("x{}", v),
        100..=199 => format!("s{}", v - 100),
        _ => format!("c{}", v - 200),
    }
}

pub fn format_poly(p: &MPoly) -> String {
    p.format(name_var)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CharError {
    #[error("element is not invariant (d f != 0)")]
    NotInvariant,
    #[error("element has zero word-length")]
    ZeroWordLength,
    #[error("element is not homogeneous in word-length")]
    NotWordHomogeneous,
}

// ---- the derivations ---------------------------------------------------

/// The derivation with d x_n = x_(n-1) and d x_1 = 0 (x_0 = 0).
pub fn derivation_d(f: &MPoly) -> MPoly {
    derive(f, |n| {
        if n >= 2 {
            Some((MPoly::var(xvar(n - 1)), Scalar::one()))
        } else {
            None
        }
    })
}

/// The derivation with delta(x_k) = k x_(k+1).
pub fn delta(f: &MPoly) -> MPoly {
    derive(f, |n| Some((MPoly::var(xvar(n + 1)), int(n as i64))))
}

/// Extend a generator rule on the x-variables to a derivation by Leibniz.
fn derive(f: &MPoly, rule: impl Fn(u32) -> Option<(MPoly, Scalar)>) -> MPoly {
    let mut out = MPoly::zero();
    for (e, c) in &f.terms {
        for (v, x) in e {
            if !(1..100).contains(v) {
                continue;
            }
            if let Some((image, factor)) = rule(*v) {
                let mut rest = e.clone();
                if *x == 1 {
                    rest.remove(v);
                } else {
                    rest.insert(*v, x - 1);
                }
                let coeff = c * int(*x as i64) * factor;
                out = out.add(&MPoly::from_term(rest, coeff).mul(&image));
            }
        }
    }
    out
}

/// [d, delta] — acts on every monomial as multiplication by its word-length.
pub fn commutator_d_delta(f: &MPoly) -> MPoly {
    derivation_d(&delta(f)).sub(&delta(&derivation_d(f)))
}

// ---- weight blocks and the invariant ring ------------------------------

/// Monomial basis of A_n: partitions of n (variables x_1..x_n),
/// descending map order.
pub fn a_basis(n: u32) -> Vec<Exps> {
    let mut out = Vec::new();
    let mut current = Exps::new();
    fn rec(remaining: u32, max_part: u32, current: &mut Exps, out: &mut Vec<Exps>) {
        if remaining == 0 {
            out.push(current.clone());
            return;
        }
        for part in (1..=max_part.min(remaining)).rev() {
            *current.entry(part).or_insert(0) += 1;
            rec(remaining - part, part, current, out);
            let e = current.get_mut(&part).unwrap();
            if *e == 1 {
                current.remove(&part);
            } else {
                *e -= 1;
            }
        }
    }
    rec(n, n, &mut current, &mut out);
    out.sort_by(|a, b| b.cmp(a));
    out
}

pub fn a_dim(n: u32) -> usize {
    a_basis(n).len()
}

fn poly_to_vec(basis: &[Exps], p: &MPoly) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); basis.len()];
    for (e, c) in &p.terms {
        let pos = basis
            .iter()
            .position(|b| b == e)
            .expect("monomial outside weight block");
        v[pos] = c.clone();
    }
    v
}

fn vec_to_poly(basis: &[Exps], v: &[Scalar]) -> MPoly {
    let mut p = MPoly::zero();
    for (pos, c) in v.iter().enumerate() {
        if !c.is_zero() {
            p.add_term(basis[pos].clone(), c.clone());
        }
    }
    p
}

/// Matrix of d: A_n -> A_(n-1) in the canonical bases.
pub fn d_matrix(n: u32) -> Matrix {
    assert!(n >= 1);
    let src = a_basis(n);
    let tgt = a_basis(n - 1);
    let mut m = Matrix::zero(tgt.len(), src.len());
    for (j, mono) in src.iter().enumerate() {
        let img = derivation_d(&MPoly::from_term(mono.clone(), Scalar::one()));
        for (i, c) in poly_to_vec(&tgt, &img).into_iter().enumerate() {
            m.set(i, j, c);
        }
    }
    m
}

#[derive(Debug, Clone)]
pub struct JWeight {
    pub n: u32,
    pub a_dim: usize,
    pub j_dim: usize,
    pub basis: Vec<MPoly>,
}

#[derive(Debug, Clone)]
pub struct InvariantRing {
    pub weights: Vec<JWeight>,
}

impl InvariantRing {
    pub fn dims(&self) -> Vec<usize> {
        self.weights.iter().map(|w| w.j_dim).collect()
    }
}

/// J_n = ker(d: A_n -> A_(n-1)) with canonical echelon bases, n <= max_weight.
pub fn invariant_ring(max_weight: u32) -> InvariantRing {
    let weights = par_map((0..=max_weight).collect::<Vec<u32>>(), |n| {
        if n == 0 {
            return JWeight {
                n: 0,
                a_dim: 1,
                j_dim: 1,
                basis: vec![MPoly::one()],
            };
        }
        let src = a_basis(n);
        let ker = d_matrix(n).kernel();
        let basis: Vec<MPoly> = ker
            .basis_vectors()
            .into_iter()
            .map(|v| vec_to_poly(&src, &v))
            .collect();
        JWeight {
            n,
            a_dim: src.len(),
            j_dim: basis.len(),
            basis,
        }
    });
    InvariantRing { weights }
}

/// rank(d: A_n -> A_(n-1)) = dim A_(n-1) for 2 <= n <= max (Lemma-style
/// surjectivity in positive degrees).
pub fn check_d_surjective(max: u32) -> Vec<(u32, bool)> {
    par_map((2..=max).collect::<Vec<u32>>(), |n| {
        (n, d_matrix(n).rank() == a_dim(n - 1))
    })
}

/// Coefficients through t^max of prod_(k>=2) (1 - t^k)^(-1) + t:
/// partitions into parts >= 2, plus the extra class in weight 1.
pub fn poincare_series(max: u32) -> Vec<u64> {
    let mut coeffs = vec![0u64; max as usize + 1];
    coeffs[0] = 1;
    for k in 2..=max.max(1) {
        if k > max {
            break;
        }
        for n in k..=max {
            coeffs[n as usize] += coeffs[(n - k) as usize];
        }
    }
    if max >= 1 {
        coeffs[1] += 1;
    }
    coeffs
}

// ---- the tensor-product action on power sums ---------------------------

/// s_n(u) = sum_k C(n,k) s_(n-k) u^k, the action of tensoring by a line
/// element on power sums (s_0 kept symbolic).
pub fn tensor_action_power_sums(n: u32) -> MPoly {
    let mut out = MPoly::zero();
    for k in 0..=n {
        let term = MPoly::var(svar(n - k))
            .mul(&MPoly::var(U).pow(k))
            .scale(&binomial(n, k));
        out = out.add(&term);
    }
    out
}

// ---- the group action y = x * e^u ---------------------------------------

/// y_n = sum_(k=0)^(n-1) x_(n-k) u^k / k! (x_0 = 0).
pub fn y_substitution(n: u32) -> MPoly {
    let mut out = MPoly::zero();
    for k in 0..n {
        let coeff = Scalar::one() / factorial(k);
        out = out.add(&MPoly::var(xvar(n - k)).mul(&MPoly::var(U).pow(k)).scale(&coeff));
    }
    out
}

/// f(y) with y_n substituted for x_n; other variables untouched.
pub fn group_action(f: &MPoly) -> MPoly {
    f.substitute(|v| {
        if (1..100).contains(&v) {
            y_substitution(v)
        } else {
            MPoly::var(v)
        }
    })
}

/// Exact identity f(y) = f(x) in all powers of u.
pub fn is_invariant(f: &MPoly) -> bool {
    group_action(f).sub(f).is_zero()
}

// ---- the lift exp(lambda * delta) --------------------------------------

#[derive(Debug, Clone)]
pub struct LiftReport {
    pub lift: MPoly,
    pub lambda: Scalar,
    pub word_length: u32,
    pub truncation_weight: u32,
    /// (d - 1)(lift) = 0 in all weights <= truncation_weight - 1.
    pub d_minus_one_zero: bool,
    /// [d, delta] acts as word-length on all monomials of weight <= truncation.
    pub commutator_is_word_length: bool,
}

fn word_length_homogeneous(f: &MPoly) -> Result<u32, CharError> {
    let mut wl = None;
    for e in f.terms.keys() {
        let l = MPoly::term_weight(e, word_length_of);
        match wl {
            None => wl = Some(l),
            Some(x) if x != l => return Err(CharError::NotWordHomogeneous),
            _ => {}
        }
    }
    wl.ok_or(CharError::ZeroWordLength)
}

/// exp(lambda*delta)(f) with lambda = 1/word-length(f), truncated to weight
/// <= max_weight, together with the (d-1)-closure and commutator
/// certificates.
pub fn delta_and_lift(f: &MPoly, max_weight: u32) -> Result<LiftReport, CharError> {
    if !derivation_d(f).is_zero() {
        return Err(CharError::NotInvariant);
    }
    let m = word_length_homogeneous(f)?;
    if m == 0 {
        return Err(CharError::ZeroWordLength);
    }
    let lambda = Scalar::one() / int(m as i64);
    let mut lift = MPoly::zero();
    let mut power = f.clone();
    let mut j = 0u32;
    loop {
        let contrib = power.scale(&(num::pow::pow(lambda.clone(), j as usize) / factorial(j)));
        let truncated = contrib.truncate(max_weight, weight_of);
        if truncated.is_zero() && j > 0 {
            break;
        }
        lift = lift.add(&truncated);
        power = delta(&power);
        j += 1;
        if power.is_zero() {
            break;
        }
    }
    let residual = derivation_d(&lift)
        .sub(&lift)
        .truncate(max_weight.saturating_sub(1), weight_of);
    let d_minus_one_zero = residual.is_zero();
    let mut commutator_ok = true;
    for n in 1..=max_weight {
        for mono in a_basis(n) {
            let p = MPoly::from_term(mono.clone(), Scalar::one());
            let wl = MPoly::term_weight(&mono, word_length_of);
            if commutator_d_delta(&p) != p.scale(&int(wl as i64)) {
                commutator_ok = false;
            }
        }
    }
    Ok(LiftReport {
        lift,
        lambda,
        word_length: m,
        truncation_weight: max_weight,
        d_minus_one_zero,
        commutator_is_word_length: commutator_ok,
    })
}

// ---- psi-operation characters ------------------------------------------

/// Character of psi^k: sum_(n>=1) k^n x_n through the weight bound.
pub fn psi_character(k: i64, max_weight: u32) -> MPoly {
    let mut out = MPoly::zero();
    let mut kn = Scalar::one();
    for n in 1..=max_weight {
        kn *= int(k);
        out = out.add(&MPoly::var(xvar(n)).scale(&kn));
    }
    out
}

#[derive(Debug, Clone)]
pub struct PsiMonomialReport {
    pub full: MPoly,
    /// The component of weight l (l = number of psi factors).
    pub lowest_component: MPoly,
    /// lowest component = (prod k_i) x_1^l, forced since each factor has
    /// word-length 1.
    pub lowest_matches: bool,
}

/// Character of the monomial psi^(k_1) ... psi^(k_l), truncated by weight.
pub fn psi_monomial_character(ks: &[i64], max_weight: u32) -> PsiMonomialReport {
    let l = ks.len() as u32;
    let mut full = MPoly::one();
    for &k in ks {
        full = full.mul(&psi_character(k, max_weight)).truncate(max_weight, weight_of);
    }
    let lowest = full.component(l, weight_of);
    let prod_k: Scalar = ks.iter().fold(Scalar::one(), |acc, &k| acc * int(k));
    let expected = MPoly::var(xvar(1)).pow(l).scale(&prod_k);
    PsiMonomialReport {
        lowest_matches: lowest == expected,
        lowest_component: lowest,
        full,
    }
}

// ---- Newton conversion -------------------------------------------------

/// s_n as a polynomial in c_1..c_n (Newton's identities).
pub fn newton_s_in_c(n: u32) -> MPoly {
    assert!(n >= 1);
    let mut s: Vec<MPoly> = vec![MPoly::zero()];
    for k in 1..=n {
        // p_k = sum_(i=1)^(k-1) (-1)^(i-1) e_i p_(k-i) + (-1)^(k-1) k e_k
        let mut pk = MPoly::var(cvar(k)).scale(&int(if k % 2 == 1 { k as i64 } else { -(k as i64) }));
        for i in 1..k {
            let t = MPoly::var(cvar(i)).mul(&s[(k - i) as usize]);
            pk = if i % 2 == 1 { pk.add(&t) } else { pk.sub(&t) };
        }
        s.push(pk);
    }
    s.pop().unwrap()
}

/// c_n as a polynomial in s_1..s_n.
pub fn newton_c_in_s(n: u32) -> MPoly {
    assert!(n >= 1);
    let mut e: Vec<MPoly> = vec![MPoly::one()];
    for k in 1..=n {
        // e_k = (1/k) sum_(i=1)^k (-1)^(i-1) e_(k-i) s_i
        let mut ek = MPoly::zero();
        for i in 1..=k {
            let t = e[(k - i) as usize].mul(&MPoly::var(svar(i)));
            ek = if i % 2 == 1 { ek.add(&t) } else { ek.sub(&t) };
        }
        e.push(ek.scale(&(Scalar::one() / int(k as i64))));
    }
    e.pop().unwrap()
}

// ---- Wang model --------------------------------------------------------

#[derive(Debug, Clone)]
pub struct WangReport {
    /// dim H^(2n) = j_n for n = 0..=max_weight.
    pub even_dims: Vec<usize>,
    /// (odd degree, dimension) for degrees 3, 5, ..., 2*max_weight + 1.
    pub odd_dims: Vec<(u32, usize)>,
    /// (f, g) with d g = f for each positive-weight J-basis element f:
    /// the witness that w*f is a boundary in the model.
    pub annihilation_witnesses: Vec<(MPoly, MPoly)>,
    pub all_annihilated: bool,
}

/// The blockwise model A_n -> A_(n-1) of the universal degree-3-twisted
/// fibration: even cohomology J_n in degree 2n, odd cohomology the cokernel
/// of d in degree 2n+3 (one class, in degree 3 only).
pub fn wang_model_report(max_weight: u32) -> WangReport {
    let ring = invariant_ring(max_weight);
    let even_dims = ring.dims();
    let mut odd_dims = Vec::new();
    for n in 0..max_weight {
        // cokernel of d: A_(n+1) -> A_n, sitting in degree 2n + 3
        let coker = a_dim(n) - d_matrix(n + 1).rank();
        odd_dims.push((2 * n + 3, coker));
    }
    let mut witnesses = Vec::new();
    let mut all_ok = true;
    for w in &ring.weights {
        if w.n == 0 || w.n + 1 > max_weight {
            continue;
        }
        let tgt = a_basis(w.n);
        let src = a_basis(w.n + 1);
        let m = d_matrix(w.n + 1);
        for f in &w.basis {
            match m.solve(&poly_to_vec(&tgt, f)) {
                Some(g) => witnesses.push((f.clone(), vec_to_poly(&src, &g))),
                None => all_ok = false,
            }
        }
    }
    WangReport {
        even_dims,
        odd_dims,
        annihilation_witnesses: witnesses,
        all_annihilated: all_ok,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: u32) -> MPoly {
        MPoly::var(xvar(n))
    }

    #[test]
    fn tensor_action_examples() {
        assert_eq!(format_poly(&tensor_action_power_sums(0)), "s0");
        assert_eq!(format_poly(&tensor_action_power_sums(1)), "u*s0 + s1");
        let s2 = tensor_action_power_sums(2);
        // s2 + 2 s1 u + s0 u^2
        let expected = MPoly::var(svar(2))
            .add(&MPoly::var(svar(1)).mul(&MPoly::var(U)).scale(&int(2)))
            .add(&MPoly::var(svar(0)).mul(&MPoly::var(U).pow(2)));
        assert_eq!(s2, expected);
    }

    #[test]
    fn derivation_examples() {
        assert_eq!(derivation_d(&x(2)), x(1));
        assert!(derivation_d(&x(1).pow(5)).is_zero());
        assert_eq!(derivation_d(&x(2).pow(2)), x(1).mul(&x(2)).scale(&int(2)));
    }

    #[test]
    fn j_dims_through_twelve() {
        let ring = invariant_ring(12);
        assert_eq!(
            ring.dims()[..9],
            [1, 1, 1, 1, 2, 2, 4, 4, 7],
            "j_0..j_8"
        );
        assert_eq!(ring.dims(), poincare_series(12).iter().map(|&c| c as usize).collect::<Vec<_>>());
    }

    #[test]
    fn j_low_weight_bases() {
        let ring = invariant_ring(4);
        let fmt = |n: usize| -> Vec<String> {
            ring.weights[n].basis.iter().map(format_poly).collect()
        };
        assert_eq!(fmt(2), vec!["x1^2"]);
        assert_eq!(fmt(3), vec!["x1^3"]);
        let mut j4 = fmt(4);
        j4.sort();
        assert_eq!(j4, vec!["-2*x1*x3 + x2^2", "x1^4"]);
    }

    #[test]
    fn j_equals_partition_difference() {
        let ring = invariant_ring(10);
        for n in 2..=10u32 {
            assert_eq!(
                ring.weights[n as usize].j_dim,
                a_dim(n) - a_dim(n - 1),
                "j_{n} = a_{n} - a_{}",
                n - 1
            );
        }
    }

    #[test]
    fn d_surjective() {
        assert!(check_d_surjective(12).iter().all(|(_, ok)| *ok));
    }

    #[test]
    fn poincare_coefficients() {
        let c = poincare_series(12);
        assert_eq!(c[..9], [1, 1, 1, 1, 2, 2, 4, 4, 7]);
        // t^12 coefficient: partitions of 12 into parts >= 2
        assert_eq!(c[12] as usize, a_dim(12) - a_dim(11));
    }

    #[test]
    fn group_action_examples() {
        assert_eq!(y_substitution(1), x(1));
        assert_eq!(
            y_substitution(2),
            x(2).add(&x(1).mul(&MPoly::var(U)))
        );
        assert!(is_invariant(&x(1)));
        assert!(!is_invariant(&x(2)));
        let f = x(2).pow(2).sub(&x(1).mul(&x(3)).scale(&int(2)));
        assert!(is_invariant(&f));
    }

    #[test]
    fn invariance_iff_d_zero_spanning() {
        for n in 1..=8u32 {
            for mono in a_basis(n) {
                let p = MPoly::from_term(mono, num::One::one());
                assert_eq!(derivation_d(&p).is_zero(), is_invariant(&p));
            }
        }
    }

    #[test]
    fn lift_of_x1_is_chern_character_tail() {
        let rep = delta_and_lift(&x(1), 12).unwrap();
        let mut expected = MPoly::zero();
        for n in 1..=12 {
            expected = expected.add(&x(n));
        }
        assert_eq!(rep.lift, expected);
        assert!(rep.d_minus_one_zero);
        assert!(rep.commutator_is_word_length);
    }

    #[test]
    fn lift_of_invariants() {
        let rep = delta_and_lift(&x(1).pow(2), 10).unwrap();
        assert_eq!(rep.lambda, crate::exactlin::rat(1, 2));
        assert!(rep.d_minus_one_zero);
        let f = x(2).pow(2).sub(&x(1).mul(&x(3)).scale(&int(2)));
        let rep = delta_and_lift(&f, 10).unwrap();
        assert!(rep.d_minus_one_zero);
    }

    #[test]
    fn lift_rejects_non_invariant() {
        assert_eq!(delta_and_lift(&x(2), 6).unwrap_err(), CharError::NotInvariant);
    }

    #[test]
    fn psi_examples() {
        let id = psi_character(1, 4);
        let mut expected = MPoly::zero();
        for n in 1..=4 {
            expected = expected.add(&x(n));
        }
        assert_eq!(id, expected);
        let dual = psi_character(-1, 3);
        assert_eq!(
            dual,
            x(1).neg().add(&x(2)).sub(&x(3))
        );
        let rep = psi_monomial_character(&[2, -1], 4);
        assert!(rep.lowest_matches);
        assert_eq!(rep.lowest_component, x(1).pow(2).scale(&int(-2)));
    }

    #[test]
    fn newton_examples() {
        assert_eq!(format_poly(&newton_s_in_c(1)), "c1");
        // s2 = c1^2 - 2 c2
        assert_eq!(
            newton_s_in_c(2),
            MPoly::var(cvar(1)).pow(2).sub(&MPoly::var(cvar(2)).scale(&int(2)))
        );
        // c2 = (s1^2 - s2)/2
        assert_eq!(
            newton_c_in_s(2),
            MPoly::var(svar(1))
                .pow(2)
                .sub(&MPoly::var(svar(2)))
                .scale(&crate::exactlin::rat(1, 2))
        );
        // round trip through weight 5
        for n in 1..=5u32 {
            let s = newton_s_in_c(n);
            let back = s.substitute(|v| {
                if (200..300).contains(&v) {
                    newton_c_in_s(v - 200)
                } else {
                    MPoly::var(v)
                }
            });
            assert_eq!(back, MPoly::var(svar(n)));
        }
    }

    #[test]
    fn wang_report_dims() {
        let rep = wang_model_report(8);
        assert_eq!(rep.even_dims, vec![1, 1, 1, 1, 2, 2, 4, 4, 7]);
        assert_eq!(rep.odd_dims[0], (3, 1));
        assert!(rep.odd_dims[1..].iter().all(|(_, d)| *d == 0));
        assert!(rep.all_annihilated);
        for (f, g) in &rep.annihilation_witnesses {
            assert_eq!(&derivation_d(g), f);
        }
    }
}
