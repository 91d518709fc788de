//! The twisted differential D = d - eta, mod-2 graded twisted cohomology,
//! the filtration spectral sequence, and Massey products (triple and
//! eta-iterated), with cross-checks between page differentials and Massey
//! products.

use crate::cdga::{Element, Presentation};
use crate::cohomology::{twisted_full_matrix, Class, CohomologyRing};
use crate::exactlin::{LinError, Matrix, Scalar, Subspace};
use crate::par::par_map;
use num::Zero;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TwistedError {
    #[error("twist is not closed")]
    TwistNotClosed,
    #[error("twist is not of odd total degree")]
    TwistNotOdd,
    #[error("twist must be homogeneous for this operation")]
    TwistNotHomogeneous,
    #[error("product {which} is not zero in cohomology")]
    ProductsNotZero { which: String },
    #[error("iterated Massey product obstructed at stage {stage}")]
    Obstructed { stage: usize },
    #[error("class does not survive to page {r}")]
    ClassDead { r: u32 },
    #[error("page index must be odd and at least 3")]
    BadPageIndex,
    #[error("input class is not closed or not homogeneous")]
    BadClass,
    #[error(transparent)]
    Lin(#[from] LinError),
    #[error(transparent)]
    Cohomology(#[from] crate::cohomology::CohomologyError),
}

fn check_twist(p: &Presentation, eta: &Element) -> Result<(), TwistedError> {
    if !p.d(eta).is_zero() {
        return Err(TwistedError::TwistNotClosed);
    }
    if !eta.is_zero() && !p.is_odd_element(eta) {
        return Err(TwistedError::TwistNotOdd);
    }
    Ok(())
}

/// The two parity blocks of D = d - eta on the flattened basis.
#[derive(Debug, Clone)]
pub struct TwistedComplex {
    pub presentation: Presentation,
    pub eta: Element,
    /// Flat positions of the even-degree / odd-degree monomials.
    pub even_idx: Vec<usize>,
    pub odd_idx: Vec<usize>,
    /// D restricted to the even part, landing in the odd part.
    pub d_even_to_odd: Matrix,
    pub d_odd_to_even: Matrix,
}

impl TwistedComplex {
    pub fn new(p: &Presentation, eta: &Element) -> Result<Self, TwistedError> {
        check_twist(p, eta)?;
        let full = twisted_full_matrix(p, eta);
        let mut even_idx = Vec::new();
        let mut odd_idx = Vec::new();
        for (pos, m) in p.flat_basis().iter().enumerate() {
            if p.mono_degree(m) % 2 == 0 {
                even_idx.push(pos);
            } else {
                odd_idx.push(pos);
            }
        }
        let pick = |rows: &[usize], cols: &[usize]| {
            Matrix::from_fn(rows.len(), cols.len(), |i, j| {
                full.get(rows[i], cols[j]).clone()
            })
        };
        let d_even_to_odd = pick(&odd_idx, &even_idx);
        let d_odd_to_even = pick(&even_idx, &odd_idx);
        debug_assert!(d_odd_to_even.mul(&d_even_to_odd).is_zero());
        debug_assert!(d_even_to_odd.mul(&d_odd_to_even).is_zero());
        Ok(TwistedComplex {
            presentation: p.clone(),
            eta: eta.clone(),
            even_idx,
            odd_idx,
            d_even_to_odd,
            d_odd_to_even,
        })
    }

    fn element_from_parity(&self, idx: &[usize], v: &[Scalar]) -> Element {
        let mut full = vec![Scalar::zero(); self.presentation.total_dim()];
        for (slot, c) in idx.iter().zip(v) {
            full[*slot] = c.clone();
        }
        self.presentation.from_full_vec(&full)
    }
}

#[derive(Debug, Clone)]
pub struct TwistedCohomology {
    pub dim_even: usize,
    pub dim_odd: usize,
    pub reps_even: Vec<Element>,
    pub reps_odd: Vec<Element>,
}

impl TwistedCohomology {
    pub fn total(&self) -> usize {
        self.dim_even + self.dim_odd
    }
}

/// Kernel/image of the two parity blocks of D, with canonical
/// representatives.
pub fn twisted_cohomology(
    p: &Presentation,
    eta: &Element,
) -> Result<TwistedCohomology, TwistedError> {
    let tc = TwistedComplex::new(p, eta)?;
    let h_even = tc
        .d_even_to_odd
        .kernel()
        .quotient_basis(&tc.d_odd_to_even.image())?;
    let h_odd = tc
        .d_odd_to_even
        .kernel()
        .quotient_basis(&tc.d_even_to_odd.image())?;
    Ok(TwistedCohomology {
        dim_even: h_even.len(),
        dim_odd: h_odd.len(),
        reps_even: h_even
            .iter()
            .map(|v| tc.element_from_parity(&tc.even_idx, v))
            .collect(),
        reps_odd: h_odd
            .iter()
            .map(|v| tc.element_from_parity(&tc.odd_idx, v))
            .collect(),
    })
}

// ---- filtration spectral sequence --------------------------------------

/// One filtration block of a page: E_r^p with representative lifts and the
/// outgoing differential d_r: E_r^p -> E_r^(p+r).
#[derive(Debug, Clone)]
pub struct SSBlock {
    pub p: u32,
    pub dim: usize,
    /// Lifts of the E_r^p basis to the full complex.
    pub representatives: Vec<Element>,
    pub rep_vectors: Vec<Vec<Scalar>>,
    pub numerator: Subspace,
    pub denominator: Subspace,
    /// Matrix of d_r into E_r^(p+r) (zero rows when that block is empty).
    pub d_matrix: Matrix,
}

#[derive(Debug, Clone)]
pub struct SSPage {
    pub r: u32,
    pub blocks: Vec<SSBlock>,
}

impl SSPage {
    pub fn total(&self) -> usize {
        self.blocks.iter().map(|b| b.dim).sum()
    }

    pub fn block_dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.dim).collect()
    }

    pub fn differential_is_zero(&self) -> bool {
        self.blocks.iter().all(|b| b.d_matrix.is_zero())
    }

    /// Coordinates of a full-complex vector in the E_r^p basis. `None` when
    /// the vector does not lie in Z_r^p.
    pub fn class_coords(&self, p: u32, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let b = &self.blocks[p as usize];
        if !b.numerator.contains(v) {
            return None;
        }
        let reduced = b.denominator.reduce(v);
        let cols: Vec<Vec<Scalar>> = b
            .rep_vectors
            .iter()
            .map(|r| b.denominator.reduce(r))
            .collect();
        let ambient = v.len();
        let m = Matrix::from_fn(ambient, cols.len(), |i, j| cols[j][i].clone());
        m.solve(&reduced)
    }
}

fn filtration_positions(p: &Presentation, level: i64) -> Vec<usize> {
    p.flat_basis()
        .iter()
        .enumerate()
        .filter(|(_, m)| p.mono_degree(m) as i64 >= level)
        .map(|(pos, _)| pos)
        .collect()
}

/// Z_r^p = { a in F^p : D a in F^(p+r) }, as a subspace of the full complex.
fn z_subspace(pres: &Presentation, dmat: &Matrix, p: i64, r: u32) -> Subspace {
    let n = pres.total_dim();
    let cols = filtration_positions(pres, p);
    let bad: Vec<usize> = pres
        .flat_basis()
        .iter()
        .enumerate()
        .filter(|(_, m)| (pres.mono_degree(m) as i64) < p + r as i64)
        .map(|(pos, _)| pos)
        .collect();
    let unit = |pos: usize| {
        let mut v = vec![Scalar::zero(); n];
        v[pos] = Scalar::from(num::BigInt::from(1));
        v
    };
    if bad.is_empty() {
        return Subspace::from_vectors(n, cols.iter().map(|&c| unit(c)).collect()).unwrap();
    }
    // constrain the coefficients so the bad rows of D (basis of F^p) vanish
    let m = Matrix::from_fn(bad.len(), cols.len(), |i, j| dmat.get(bad[i], cols[j]).clone());
    let ker = m.kernel();
    let vectors = ker
        .basis_vectors()
        .into_iter()
        .map(|c| {
            let mut v = vec![Scalar::zero(); n];
            for (j, pos) in cols.iter().enumerate() {
                v[*pos] = c[j].clone();
            }
            v
        })
        .collect();
    Subspace::from_vectors(n, vectors).unwrap()
}

fn image_under(dmat: &Matrix, s: &Subspace) -> Subspace {
    let vectors = s
        .basis_vectors()
        .into_iter()
        .map(|v| dmat.apply(&v))
        .collect();
    Subspace::from_vectors(dmat.rows, vectors).unwrap()
}

fn compute_page(pres: &Presentation, dmat: &Matrix, r: u32) -> SSPage {
    let top = pres.top_degree();
    let ps: Vec<u32> = (0..=top).collect();
    let mut blocks: Vec<SSBlock> = par_map(ps, |p| {
        let numerator = z_subspace(pres, dmat, p as i64, r);
        let above = z_subspace(pres, dmat, p as i64 + 1, r - 1);
        let incoming = image_under(dmat, &z_subspace(pres, dmat, p as i64 - r as i64 + 1, r - 1));
        let denominator = above.sum(&incoming).unwrap();
        let rep_vectors = numerator.quotient_basis(&denominator).unwrap();
        let representatives = rep_vectors.iter().map(|v| pres.from_full_vec(v)).collect();
        SSBlock {
            p,
            dim: rep_vectors.len(),
            representatives,
            rep_vectors,
            numerator,
            denominator,
            d_matrix: Matrix::zero(0, 0),
        }
    });
    // d_r: E_r^p -> E_r^(p+r), induced by D on the representative lifts
    let page_view = SSPage {
        r,
        blocks: blocks.clone(),
    };
    for p in 0..=top {
        let target_dim = if p + r <= top {
            blocks[(p + r) as usize].dim
        } else {
            0
        };
        let src_dim = blocks[p as usize].dim;
        let mut m = Matrix::zero(target_dim, src_dim);
        if target_dim > 0 {
            for (j, v) in blocks[p as usize].rep_vectors.iter().enumerate() {
                let w = dmat.apply(v);
                let coords = page_view
                    .class_coords(p + r, &w)
                    .expect("D maps Z_r^p into Z_r^(p+r)");
                for (i, c) in coords.into_iter().enumerate() {
                    m.set(i, j, c);
                }
            }
        }
        blocks[p as usize].d_matrix = m;
    }
    SSPage { r, blocks }
}

/// Pages r = 1..=r_max of the filtration spectral sequence.
pub fn spectral_sequence(
    p: &Presentation,
    eta: &Element,
    r_max: u32,
) -> Result<Vec<SSPage>, TwistedError> {
    check_twist(p, eta)?;
    let dmat = twisted_full_matrix(p, eta);
    Ok((1..=r_max).map(|r| compute_page(p, &dmat, r)).collect())
}

/// First page index from which both the totals and the differentials are
/// stable to the end of the computed range.
pub fn stable_from(pages: &[SSPage]) -> Option<u32> {
    let last = pages.last()?;
    let target = last.total();
    let mut answer = None;
    for page in pages.iter().rev() {
        if page.total() == target && page.differential_is_zero() {
            answer = Some(page.r);
        } else {
            break;
        }
    }
    answer
}

// ---- Massey products ---------------------------------------------------

/// A Massey product: a representative class together with its indeterminacy
/// subspace (in the coordinates of the target cohomology group).
#[derive(Debug, Clone)]
pub struct MasseyCoset {
    pub class: Class,
    /// The cocycle representative used to compute the class.
    pub element: Element,
    pub indeterminacy: Subspace,
}

impl MasseyCoset {
    /// Zero means: the representative lies inside the indeterminacy.
    pub fn is_zero(&self) -> bool {
        self.indeterminacy.contains(&self.class.coords)
    }
}

fn indeterminacy_from_classes(
    ring: &CohomologyRing,
    target_degree: u32,
    products: Vec<Element>,
) -> Result<Subspace, TwistedError> {
    let ambient = ring.betti(target_degree);
    let mut vectors = Vec::new();
    for e in products {
        if e.is_zero() {
            continue;
        }
        let c = ring.class_of(&e)?;
        debug_assert_eq!(c.degree, target_degree);
        vectors.push(c.coords);
    }
    Ok(Subspace::from_vectors(ambient, vectors)?)
}

/// Triple Massey product {x, y, z}: with xy = du and yz = dv, the
/// representative is w = u z + (-1)^(p-1) x v, p = deg x.
pub fn massey_triple(
    ring: &CohomologyRing,
    x: &Class,
    y: &Class,
    z: &Class,
) -> Result<MasseyCoset, TwistedError> {
    let pres = &ring.presentation;
    let (xe, ye, ze) = (ring.element_of(x), ring.element_of(y), ring.element_of(z));
    let solve_primitive = |prod: &Element, label: &str| -> Result<Element, TwistedError> {
        if prod.is_zero() {
            return Ok(Element::zero());
        }
        let deg = pres.element_degree(prod).ok_or(TwistedError::BadClass)?;
        let b = pres.to_degree_vec(deg, prod);
        match pres.d_matrix(deg - 1).solve(&b) {
            Some(u) => Ok(pres.from_degree_vec(deg - 1, &u)),
            None => Err(TwistedError::ProductsNotZero {
                which: label.to_string(),
            }),
        }
    };
    let u = solve_primitive(&pres.mul(&xe, &ye), "xy")?;
    let v = solve_primitive(&pres.mul(&ye, &ze), "yz")?;
    let mut w = pres.mul(&u, &ze);
    let xv = pres.mul(&xe, &v);
    if x.degree % 2 == 1 {
        // (-1)^(p-1) = +1 for odd p
        w = w.add(&xv);
    } else {
        w = w.sub(&xv);
    }
    let target = x.degree + y.degree + z.degree - 1;
    let class = if w.is_zero() {
        ring.zero_class(target)
    } else {
        ring.class_of(&w)?
    };
    let mut products = Vec::new();
    for h in ring.representatives(y.degree + z.degree - 1) {
        products.push(pres.mul(&xe, h));
    }
    for h in ring.representatives(x.degree + y.degree - 1) {
        products.push(pres.mul(h, &ze));
    }
    let indeterminacy = indeterminacy_from_classes(ring, target, products)?;
    Ok(MasseyCoset {
        class,
        element: w,
        indeterminacy,
    })
}

/// Defining system of the k-fold product {eta,...,eta,x}: v_0 = x and
/// d v_i = eta v_(i-1) for i = 1..k-1. Returns the chain (v_0..v_(k-1));
/// an unsolvable stage i is the obstruction.
fn eta_defining_system(
    pres: &Presentation,
    full_d: &Matrix,
    eta: &Element,
    x: &Element,
    k: usize,
) -> Result<Vec<Element>, TwistedError> {
    let mut chain = vec![x.clone()];
    for stage in 1..k {
        let rhs = pres.mul(eta, chain.last().unwrap());
        let b = pres.to_full_vec(&rhs);
        match full_d.solve(&b) {
            Some(v) => chain.push(pres.from_full_vec(&v)),
            None => return Err(TwistedError::Obstructed { stage }),
        }
    }
    Ok(chain)
}

/// The k-fold eta-iterated Massey product {eta,...,eta,x} (k copies of
/// eta), computed by the successive-solve recipe. Indeterminacy is
/// eta * H^(deg v_(k-1)).
pub fn massey_eta_iterated(
    ring: &CohomologyRing,
    eta: &Element,
    x: &Class,
    k: usize,
) -> Result<MasseyCoset, TwistedError> {
    assert!(k >= 1);
    let pres = &ring.presentation;
    check_twist(pres, eta)?;
    let eta_deg = pres
        .element_degree(eta)
        .ok_or(TwistedError::TwistNotHomogeneous)?;
    let xe = ring.element_of(x);
    let full_d = pres.full_d_matrix();
    let chain = eta_defining_system(pres, &full_d, eta, &xe, k)?;
    let last = chain.last().unwrap();
    let result = pres.mul(eta, last);
    let target = x.degree + (k as u32) * (eta_deg - 1) + 1;
    let class = if result.is_zero() {
        ring.zero_class(target)
    } else {
        let c = ring.class_of(&result)?;
        debug_assert_eq!(c.degree, target);
        c
    };
    let last_deg = x.degree + (k as u32 - 1) * (eta_deg - 1);
    let products = ring
        .representatives(last_deg)
        .iter()
        .map(|h| pres.mul(eta, h))
        .collect();
    let indeterminacy = indeterminacy_from_classes(ring, target, products)?;
    Ok(MasseyCoset {
        class,
        element: result,
        indeterminacy,
    })
}

// ---- d_r vs Massey cross-check -----------------------------------------

#[derive(Debug, Clone)]
pub struct DrMasseyReport {
    pub r: u32,
    /// The lift x + v_1 + ... + v_(k-1) lying in Z_r^p.
    pub lift: Element,
    /// Coordinates of d_r[lift] in the E_r^(p+r) basis.
    pub dr_coords: Vec<Scalar>,
    /// Coordinates of the iterated Massey representative in the same basis.
    pub massey_coords: Vec<Scalar>,
    pub massey: MasseyCoset,
    /// d_r(class) = -(iterated Massey product) on page r.
    pub agrees: bool,
    pub dr_nonzero: bool,
}

/// Verify d_r(class) = -{eta,...,eta,class} ((r-1)/2 copies of eta) on page
/// r, comparing the page machinery against the Massey solves.
pub fn dr_vs_massey_check(
    ring: &CohomologyRing,
    eta: &Element,
    x: &Class,
    r: u32,
) -> Result<DrMasseyReport, TwistedError> {
    if r < 3 || r % 2 == 0 {
        return Err(TwistedError::BadPageIndex);
    }
    let pres = &ring.presentation;
    check_twist(pres, eta)?;
    let eta_deg = pres
        .element_degree(eta)
        .ok_or(TwistedError::TwistNotHomogeneous)?;
    if eta_deg != 3 {
        return Err(TwistedError::BadPageIndex);
    }
    let k = ((r - 1) / 2) as usize;
    let xe = ring.element_of(x);
    let full_d = pres.full_d_matrix();
    let chain = eta_defining_system(pres, &full_d, eta, &xe, k)
        .map_err(|e| match e {
            TwistedError::Obstructed { .. } => TwistedError::ClassDead { r },
            other => other,
        })?;
    // the lift x + v_1 + ... + v_(k-1) satisfies D(lift) = -eta v_(k-1)
    let mut lift = Element::zero();
    for v in &chain {
        lift = lift.add(v);
    }
    let massey = massey_eta_iterated(ring, eta, x, k)?;
    let dmat = twisted_full_matrix(pres, eta);
    let page = compute_page(pres, &dmat, r);
    let p = x.degree;
    let lift_vec = pres.to_full_vec(&lift);
    let lift_coords = page
        .class_coords(p, &lift_vec)
        .ok_or(TwistedError::ClassDead { r })?;
    let block = &page.blocks[p as usize];
    let dr_coords = block.d_matrix.apply(&lift_coords);
    let massey_coords = if p + r <= pres.top_degree() {
        page.class_coords(p + r, &pres.to_full_vec(&massey.element))
            .expect("Massey representative is D-closed of filtration p+r")
    } else {
        Vec::new()
    };
    let neg_massey: Vec<Scalar> = massey_coords.iter().map(|c| -c).collect();
    let agrees = dr_coords == neg_massey;
    let dr_nonzero = dr_coords.iter().any(|c| !c.is_zero());
    Ok(DrMasseyReport {
        r,
        lift,
        dr_coords,
        massey_coords,
        massey,
        agrees,
        dr_nonzero,
    })
}
