//! Symbolic suite for Hankel-class identities: series quotient
//! c(t) = a(t)/b(t), Hankel determinants h_(p,q), resultants with
//! elementary-symmetric re-expression, the induced-map rank/injectivity
//! checks, and Moebius-reparametrization invariance of the index-zero
//! Hankel classes.

use crate::exactlin::{binomial, Matrix, Scalar};
use crate::mpoly::{Exps, MPoly};
use num::{One, Zero};

/// Variable id scheme: u = 0; c_n = 1000 + n; a_i = 2000 + i; b_j = 3000 + j;
/// root variables x_i = 4000 + i, y_j = 5000 + j.
pub const U: u32 = 0;

pub fn cvar(n: u32) -> u32 {
    1000 + n
}

pub fn avar(i: u32) -> u32 {
    2000 + i
}

pub fn bvar(j: u32) -> u32 {
    3000 + j
}

pub fn xroot(i: u32) -> u32 {
    4000 + i
}

pub fn yroot(j: u32) -> u32 {
    5000 + j
}

/// Weight grading: weight(c_n) = n, weight(a_i) = i, weight(b_j) = j,
/// roots and u have weight 1 (real degrees are twice these).
pub fn weight_of(v: u32) -> u32 {
    match v {
        U => 1,
        1000..=1999 => v - 1000,
        2000..=2999 => v - 2000,
        3000..=3999 => v - 3000,
        _ => 1,
    }
}

pub fn name_var(v: u32) -> String {
    match v {
        U => "u".to_string(),
        1000..=1999 => format!("c{}", v - 1000),
        2000..=2999 => format!("a{}", v - 2000),
        3000..=3999 => format!("b{}", v - 3000),
        4000..=4999 => format!("x{}", v - 4000),
        _ => format!("y{}", v - 5000),
    }
}

pub fn format_poly(p: &MPoly) -> String {
    p.format(name_var)
}

// ---- series quotient ---------------------------------------------------

/// c_1..c_n_max of c(t) = a(t)/b(t), a = 1 + a_1 t + ... + a_p t^p,
/// b = 1 + b_1 t + ... + b_q t^q, as polynomials in the a/b variables.
pub fn series_quotient(p: u32, q: u32, n_max: u32) -> Vec<MPoly> {
    let mut cs: Vec<MPoly> = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        // c_n = a_n - sum_(j=1)^(min(n,q)) b_j c_(n-j), with c_0 = 1
        let mut cn = if n <= p {
            MPoly::var(avar(n))
        } else {
            MPoly::zero()
        };
        for j in 1..=q.min(n) {
            let prev = if n == j {
                MPoly::one()
            } else {
                cs[(n - j - 1) as usize].clone()
            };
            cn = cn.sub(&MPoly::var(bvar(j)).mul(&prev));
        }
        cs.push(cn);
    }
    cs
}

// ---- Hankel determinants -----------------------------------------------

fn det(mat: &[Vec<MPoly>]) -> MPoly {
    let n = mat.len();
    if n == 0 {
        return MPoly::one();
    }
    if n == 1 {
        return mat[0][0].clone();
    }
    let mut out = MPoly::zero();
    for (j, entry) in mat[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<MPoly>> = mat[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        let cof = entry.mul(&det(&minor));
        out = if j % 2 == 0 { out.add(&cof) } else { out.sub(&cof) };
    }
    out
}

/// The symbol c_k as a polynomial: 1 for k = 0, 0 for k < 0, c_k otherwise.
fn c_symbol(k: i64) -> MPoly {
    match k {
        k if k < 0 => MPoly::zero(),
        0 => MPoly::one(),
        k => MPoly::var(cvar(k as u32)),
    }
}

/// h_(p,q): determinant of the q x q matrix with (i,j) entry c_(i-j+p)
/// (1-based), in the c-variables. Weight pq.
pub fn hankel_det(p: u32, q: u32) -> MPoly {
    let mat: Vec<Vec<MPoly>> = (1..=q as i64)
        .map(|i| {
            (1..=q as i64)
                .map(|j| c_symbol(i - j + p as i64))
                .collect()
        })
        .collect();
    det(&mat)
}

/// Substitute concrete polynomials for c_1..c_len (panics if a higher c
/// survives — callers must supply enough coefficients).
pub fn substitute_c(h: &MPoly, cs: &[MPoly]) -> MPoly {
    h.substitute(|v| {
        if (1000..2000).contains(&v) {
            let n = (v - 1000) as usize;
            cs[n - 1].clone()
        } else {
            MPoly::var(v)
        }
    })
}

// ---- resultant ---------------------------------------------------------

/// Elementary symmetric polynomial e_k of the given variables.
fn elementary(vars: &[u32], k: usize) -> MPoly {
    if k == 0 {
        return MPoly::one();
    }
    if k > vars.len() {
        return MPoly::zero();
    }
    let mut out = MPoly::zero();
    let n = vars.len();
    // iterate over k-subsets
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let mut e = Exps::new();
        for &i in &idx {
            e.insert(vars[i], 1);
        }
        out.add_term(e, Scalar::one());
        // next combination
        let mut pos = k;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if idx[pos] != pos + n - k {
                idx[pos] += 1;
                for t in pos + 1..k {
                    idx[t] = idx[t - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Rewrite a polynomial symmetric in `vars` in terms of their elementary
/// symmetric polynomials (the classical leading-term algorithm); `evar`
/// names the variable standing for e_k. Coefficients may involve other
/// variables, which are carried along untouched.
fn reduce_symmetric(f: &MPoly, vars: &[u32], evar: impl Fn(u32) -> u32) -> MPoly {
    let mut rest = f.clone();
    let mut out = MPoly::zero();
    let in_group = |v: u32| vars.contains(&v);
    loop {
        // find the term with lex-largest exponent restriction to `vars`
        let mut lead: Option<Vec<u32>> = None;
        for e in rest.terms.keys() {
            let proj: Vec<u32> = vars.iter().map(|v| *e.get(v).unwrap_or(&0)).collect();
            if proj.iter().all(|&x| x == 0) {
                continue;
            }
            if lead.as_ref().map_or(true, |l| proj > *l) {
                lead = Some(proj);
            }
        }
        let Some(lambda) = lead else {
            // all remaining terms are free of the group variables
            return out.add(&rest);
        };
        // collect the full coefficient of that projected monomial
        let mut coeff = MPoly::zero();
        for (e, c) in &rest.terms {
            let proj: Vec<u32> = vars.iter().map(|v| *e.get(v).unwrap_or(&0)).collect();
            if proj == lambda {
                let outside: Exps = e
                    .iter()
                    .filter(|(v, _)| !in_group(**v))
                    .map(|(v, x)| (*v, *x))
                    .collect();
                coeff.add_term(outside, c.clone());
            }
        }
        // lambda is a partition for symmetric input; the matching product of
        // elementaries is prod e_i^(lambda_i - lambda_(i+1))
        let mut e_product = MPoly::one();
        let mut e_symbol = MPoly::one();
        for i in 0..vars.len() {
            let next = if i + 1 < vars.len() { lambda[i + 1] } else { 0 };
            debug_assert!(lambda[i] >= next, "non-partition leading term");
            let pow = lambda[i] - next;
            if pow > 0 {
                e_product = e_product.mul(&elementary(vars, i + 1).pow(pow));
                e_symbol = e_symbol.mul(&MPoly::var(evar(i as u32 + 1)).pow(pow));
            }
        }
        rest = rest.sub(&coeff.mul(&e_product));
        out = out.add(&coeff.mul(&e_symbol));
    }
}

#[derive(Debug, Clone)]
pub struct Resultant {
    /// prod_(i,j) (x_i - y_j) expanded in the root variables.
    pub root_form: MPoly,
    /// The same element rewritten in a_i = e_i(x), b_j = e_j(y).
    pub ab_form: MPoly,
}

/// The resultant of the monic-constant-term polynomials with root sets
/// x_1..x_p and y_1..y_q.
pub fn resultant(p: u32, q: u32) -> Resultant {
    let xs: Vec<u32> = (1..=p).map(xroot).collect();
    let ys: Vec<u32> = (1..=q).map(yroot).collect();
    let mut root_form = MPoly::one();
    for &xi in &xs {
        for &yj in &ys {
            root_form = root_form.mul(&MPoly::var(xi).sub(&MPoly::var(yj)));
        }
    }
    let in_a = reduce_symmetric(&root_form, &xs, |k| avar(k));
    let ab_form = reduce_symmetric(&in_a, &ys, |k| bvar(k));
    Resultant { root_form, ab_form }
}

// ---- resultant-identity verifications ----------------------------------

/// h_(p,q)(c(a/b)) - R(a,b) = 0, symbolically.
pub fn verify_maps_to_resultant(p: u32, q: u32) -> bool {
    let cs = series_quotient(p, q, p + q);
    let h = substitute_c(&hankel_det(p, q), &cs);
    h.sub(&resultant(p, q).ab_form).is_zero()
}

/// h_(p2,q2)(c(a/b)) = 0 when p2 > p and q2 > q.
pub fn verify_vanishing(p: u32, q: u32, p2: u32, q2: u32) -> bool {
    assert!(p2 > p && q2 > q);
    let cs = series_quotient(p, q, p2 + q2);
    substitute_c(&hankel_det(p2, q2), &cs).is_zero()
}

#[derive(Debug, Clone)]
pub struct InjectivityReport {
    pub p: u32,
    pub q: u32,
    pub weight: u32,
    pub c_monomials: usize,
    pub rank: usize,
    pub injective: bool,
    /// An echelon kernel element (in the c-variables) when not injective.
    pub kernel_element: Option<MPoly>,
}

/// Rank of the map Q[c] -> Q[a,b] (c_n |-> quotient coefficients) on the
/// weight-n monomial basis.
pub fn injectivity_rank(p: u32, q: u32, weight: u32) -> InjectivityReport {
    let cs = series_quotient(p, q, weight);
    // c-monomials of the given weight = partitions, shifted into c-ids
    let c_basis: Vec<Exps> = crate::charclass::a_basis(weight)
        .into_iter()
        .map(|e| e.into_iter().map(|(v, x)| (cvar(v), x)).collect())
        .collect();
    let images: Vec<MPoly> = c_basis
        .iter()
        .map(|e| substitute_c(&MPoly::from_term(e.clone(), Scalar::one()), &cs))
        .collect();
    // row space: every a/b-monomial that occurs
    let mut rows: Vec<Exps> = Vec::new();
    for img in &images {
        for e in img.terms.keys() {
            if !rows.contains(e) {
                rows.push(e.clone());
            }
        }
    }
    let m = Matrix::from_fn(rows.len(), images.len(), |i, j| {
        images[j].terms.get(&rows[i]).cloned().unwrap_or_else(Scalar::zero)
    });
    let rank = m.rank();
    let injective = rank == c_basis.len();
    let kernel_element = if injective {
        None
    } else {
        let v = &m.kernel().basis_vectors()[0];
        let mut poly = MPoly::zero();
        for (j, c) in v.iter().enumerate() {
            if !c.is_zero() {
                poly.add_term(c_basis[j].clone(), c.clone());
            }
        }
        Some(poly)
    };
    InjectivityReport {
        p,
        q,
        weight,
        c_monomials: c_basis.len(),
        rank,
        injective,
        kernel_element,
    }
}

// ---- Moebius reparametrization -----------------------------------------

/// Coefficient of t^n in c(t/(1-ut)):
/// c~_n = sum_(m=1)^n C(n-1, n-m) c_m u^(n-m).
pub fn reparam_c(n: u32) -> MPoly {
    let mut out = MPoly::zero();
    for m in 1..=n {
        let term = MPoly::var(cvar(m))
            .mul(&MPoly::var(U).pow(n - m))
            .scale(&binomial(n - 1, n - m));
        out = out.add(&term);
    }
    out
}

#[derive(Debug, Clone)]
pub struct ReparamReport {
    pub p: u32,
    pub hankel: MPoly,
    pub transformed: MPoly,
    pub invariant: bool,
}

/// h_(p,p) is fixed by c(t) -> c(t/(1-ut)), identically in u.
pub fn reparam_invariance(p: u32) -> ReparamReport {
    let h = hankel_det(p, p);
    let max_index = 2 * p - 1;
    let subs: Vec<MPoly> = (1..=max_index).map(reparam_c).collect();
    let transformed = substitute_c(&h, &subs);
    let invariant = transformed.sub(&h).is_zero();
    ReparamReport {
        p,
        hankel: h,
        transformed,
        invariant,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::int;
    use rand::{Rng, SeedableRng};

    #[test]
    fn quotient_low_coefficients() {
        let cs = series_quotient(1, 1, 2);
        // c1 = a1 - b1
        assert_eq!(cs[0], MPoly::var(avar(1)).sub(&MPoly::var(bvar(1))));
        // c2 = b1^2 - a1 b1
        assert_eq!(
            cs[1],
            MPoly::var(bvar(1))
                .pow(2)
                .sub(&MPoly::var(avar(1)).mul(&MPoly::var(bvar(1))))
        );
    }

    #[test]
    fn quotient_degenerate_cases() {
        // b = 1: c_n = a_n, zero beyond p
        let cs = series_quotient(2, 0, 4);
        assert_eq!(cs[0], MPoly::var(avar(1)));
        assert_eq!(cs[1], MPoly::var(avar(2)));
        assert!(cs[2].is_zero() && cs[3].is_zero());
        // a = b (p = q, a_i identified with b_i by evaluation): c_n = 0
        let cs = series_quotient(2, 2, 4);
        for c in &cs {
            let v = c.eval(|v| match v {
                v if (2000..3000).contains(&v) => int((v - 2000) as i64 + 5),
                v if (3000..4000).contains(&v) => int((v - 3000) as i64 + 5),
                _ => int(0),
            });
            assert!(v.is_zero());
        }
    }

    #[test]
    fn hankel_displays() {
        assert_eq!(format_poly(&hankel_det(1, 1)), "c1");
        // h_{2,2} = c2^2 - c3 c1
        let h22 = hankel_det(2, 2);
        let expected = MPoly::var(cvar(2))
            .pow(2)
            .sub(&MPoly::var(cvar(3)).mul(&MPoly::var(cvar(1))));
        assert_eq!(h22, expected);
        // weight(h_{p,q}) = pq
        for (p, q) in [(1, 1), (2, 2), (3, 3), (2, 3)] {
            let h = hankel_det(p, q);
            assert_eq!(h.component(p * q, weight_of), h, "h_{p},{q} weight");
        }
    }

    #[test]
    fn resultant_one_one() {
        let r = resultant(1, 1);
        assert_eq!(
            r.root_form,
            MPoly::var(xroot(1)).sub(&MPoly::var(yroot(1)))
        );
        assert_eq!(r.ab_form, MPoly::var(avar(1)).sub(&MPoly::var(bvar(1))));
    }

    #[test]
    fn resultant_matches_roots_numerically() {
        // evaluate ab_form at a_i = e_i(x*), b_j = e_j(y*) for random
        // rational root tuples and compare with the root product
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for (p, q) in [(2u32, 2u32), (2, 3), (1, 3)] {
            let r = resultant(p, q);
            for _ in 0..10 {
                let xs: Vec<Scalar> = (0..p).map(|_| int(rng.gen_range(-6..7))).collect();
                let ys: Vec<Scalar> = (0..q).map(|_| int(rng.gen_range(-6..7))).collect();
                let ev = |v: u32| -> Scalar {
                    match v {
                        v if (4000..5000).contains(&v) => xs[(v - 4001) as usize].clone(),
                        v if v >= 5000 => ys[(v - 5001) as usize].clone(),
                        v if (2000..3000).contains(&v) => {
                            let vars: Vec<u32> = (1..=p).map(xroot).collect();
                            elementary(&vars, (v - 2000) as usize)
                                .eval(|w| xs[(w - 4001) as usize].clone())
                        }
                        v if (3000..4000).contains(&v) => {
                            let vars: Vec<u32> = (1..=q).map(yroot).collect();
                            elementary(&vars, (v - 3000) as usize)
                                .eval(|w| ys[(w - 5001) as usize].clone())
                        }
                        _ => Scalar::zero(),
                    }
                };
                assert_eq!(r.root_form.eval(ev), r.ab_form.eval(ev));
            }
        }
    }

    #[test]
    fn resultant_specialization() {
        // a_i = 0 for i < p, b = 1: both R and h_{p,q} become a_p^q
        for (p, q) in [(2u32, 2u32), (2, 3)] {
            let r = resultant(p, q);
            let specialize = |f: &MPoly| {
                f.substitute(|v| match v {
                    v if (3000..4000).contains(&v) => MPoly::zero(),
                    v if (2000..3000).contains(&v) && v != avar(p) => MPoly::zero(),
                    v => MPoly::var(v),
                })
            };
            let expected = MPoly::var(avar(p)).pow(q);
            assert_eq!(specialize(&r.ab_form), expected);
            let cs = series_quotient(p, q, p + q);
            let h = substitute_c(&hankel_det(p, q), &cs);
            assert_eq!(specialize(&h), expected);
        }
    }

    #[test]
    fn maps_to_resultant() {
        for (p, q) in [(1u32, 1u32), (1, 2), (2, 1), (2, 2), (2, 3), (1, 3)] {
            assert!(verify_maps_to_resultant(p, q), "(p,q) = ({p},{q})");
        }
    }

    #[test]
    fn vanishing_above_range() {
        assert!(verify_vanishing(1, 1, 2, 2));
        assert!(verify_vanishing(1, 2, 2, 3));
    }

    #[test]
    fn injectivity_table() {
        let rep = injectivity_rank(1, 1, 3);
        assert!(rep.injective);
        let rep = injectivity_rank(1, 1, 4);
        assert!(!rep.injective);
        assert_eq!(rep.c_monomials - rep.rank, 1);
        // the kernel is spanned by h_{2,2}(c) = c2^2 - c1 c3
        let k = rep.kernel_element.unwrap();
        let h22 = hankel_det(2, 2);
        // proportional: both weight-4, compare after normalizing on c2^2
        let mut e = Exps::new();
        e.insert(cvar(2), 2);
        let scale = k.terms[&e].clone();
        assert_eq!(k, h22.scale(&scale));
        let rep = injectivity_rank(1, 2, 5);
        assert!(rep.injective);
    }

    #[test]
    fn moebius_invariance() {
        assert_eq!(reparam_c(1), MPoly::var(cvar(1)));
        // c~2 = c2 + c1 u
        assert_eq!(
            reparam_c(2),
            MPoly::var(cvar(2)).add(&MPoly::var(cvar(1)).mul(&MPoly::var(U)))
        );
        for p in 1..=3 {
            assert!(reparam_invariance(p).invariant, "h_{p},{p}");
        }
    }

    #[test]
    fn root_shift_invariance() {
        // x_i -> x_i + u, y_j -> y_j + u fixes the root form identically
        let r = resultant(2, 2);
        let shifted = r.root_form.substitute(|v| {
            if v >= 4000 {
                MPoly::var(v).add(&MPoly::var(U))
            } else {
                MPoly::var(v)
            }
        });
        assert_eq!(shifted, r.root_form);
    }
}
