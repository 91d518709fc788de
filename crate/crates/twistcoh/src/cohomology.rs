//! Ordinary (untwisted) cohomology of a presentation: Betti numbers,
//! canonical representatives, class membership, cup products, and the gauge
//! transformation e^zeta between twisted differentials.

use crate::cdga::{Element, Presentation};
use crate::exactlin::{factorial, LinError, Matrix, Scalar, Subspace};
use crate::par::par_map;
use num::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CohomologyError {
    #[error("{element} is not a closed form (d = {differential})")]
    NotClosed {
        element: String,
        differential: String,
    },
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("twist is not closed")]
    TwistNotClosed,
    #[error("twist is not of odd total degree")]
    TwistNotOdd,
    #[error("gauge parameter must be homogeneous of positive even degree")]
    GaugeNotEven,
    #[error(transparent)]
    Lin(#[from] LinError),
}

/// Cocycles, boundaries, and canonical representatives in one degree.
#[derive(Debug, Clone)]
pub struct DegreeData {
    pub cocycles: Subspace,
    pub boundaries: Subspace,
    /// Echelon basis of cocycles/boundaries, as elements.
    pub representatives: Vec<Element>,
}

#[derive(Debug, Clone)]
pub struct CohomologyRing {
    pub presentation: Presentation,
    /// Indexed by degree 0..=top_degree.
    pub degrees: Vec<DegreeData>,
}

/// A cohomology class: coordinates in the canonical representative basis of
/// its degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Class {
    pub degree: u32,
    pub coords: Vec<Scalar>,
}

impl Class {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

pub fn compute_cohomology(p: &Presentation) -> CohomologyRing {
    let degrees: Vec<u32> = (0..=p.top_degree()).collect();
    let data = par_map(degrees, |k| {
        let cocycles = if k == p.top_degree() {
            Subspace::full(p.dim_degree(k))
        } else {
            p.d_matrix(k).kernel()
        };
        let boundaries = if k == 0 {
            Subspace::zero(p.dim_degree(0))
        } else {
            p.d_matrix(k - 1).image()
        };
        let representatives = cocycles
            .quotient_basis(&boundaries)
            .expect("boundaries are cocycles")
            .into_iter()
            .map(|v| p.from_degree_vec(k, &v))
            .collect();
        DegreeData {
            cocycles,
            boundaries,
            representatives,
        }
    });
    CohomologyRing {
        presentation: p.clone(),
        degrees: data,
    }
}

impl CohomologyRing {
    pub fn betti(&self, degree: u32) -> usize {
        self.degrees
            .get(degree as usize)
            .map_or(0, |d| d.representatives.len())
    }

    pub fn betti_vector(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.representatives.len()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.degrees.iter().map(|d| d.representatives.len()).sum()
    }

    pub fn representatives(&self, degree: u32) -> &[Element] {
        self.degrees
            .get(degree as usize)
            .map_or(&[], |d| &d.representatives)
    }

    pub fn zero_class(&self, degree: u32) -> Class {
        Class {
            degree,
            coords: vec![Scalar::zero(); self.betti(degree)],
        }
    }

    pub fn element_of(&self, class: &Class) -> Element {
        let mut e = Element::zero();
        for (rep, c) in self.representatives(class.degree).iter().zip(&class.coords) {
            e = e.add(&rep.scale(c));
        }
        e
    }

    /// Coordinates of [a] in the representative basis of its degree.
    /// Exact forms come back as the zero class.
    pub fn class_of(&self, a: &Element) -> Result<Class, CohomologyError> {
        if a.is_zero() {
            return Ok(self.zero_class(0));
        }
        let p = &self.presentation;
        let degree = p.element_degree(a).ok_or(CohomologyError::NotHomogeneous)?;
        let da = p.d(a);
        if !da.is_zero() {
            return Err(CohomologyError::NotClosed {
                element: p.format_element(a),
                differential: p.format_element(&da),
            });
        }
        let dd = &self.degrees[degree as usize];
        let reduced = dd.boundaries.reduce(&p.to_degree_vec(degree, a));
        // representatives reduce mod boundaries to an independent echelon set
        let cols: Vec<Vec<Scalar>> = dd
            .representatives
            .iter()
            .map(|r| dd.boundaries.reduce(&p.to_degree_vec(degree, r)))
            .collect();
        let m = Matrix::from_fn(p.dim_degree(degree), cols.len(), |i, j| cols[j][i].clone());
        let coords = m.solve(&reduced).expect("cocycle reduces into H basis");
        Ok(Class { degree, coords })
    }

    /// Cup product of two classes.
    pub fn cup(&self, a: &Class, b: &Class) -> Result<Class, CohomologyError> {
        let prod = self
            .presentation
            .mul(&self.element_of(a), &self.element_of(b));
        if prod.is_zero() {
            return Ok(self.zero_class(a.degree + b.degree));
        }
        self.class_of(&prod)
    }
}

/// e^zeta = sum zeta^k / k!, a finite sum since zeta has positive even
/// degree in a finite-dimensional algebra.
pub fn exp_element(p: &Presentation, zeta: &Element) -> Element {
    let mut sum = p.one();
    let mut power = p.one();
    let mut k = 0u32;
    loop {
        power = p.mul(&power, zeta);
        k += 1;
        if power.is_zero() {
            return sum;
        }
        let inv = Scalar::one() / factorial(k);
        sum = sum.add(&power.scale(&inv));
    }
}

/// The twisted differential D = d - (eta .) as a matrix on the flattened
/// all-degrees basis.
pub fn twisted_full_matrix(p: &Presentation, eta: &Element) -> Matrix {
    p.full_d_matrix().sub(&p.left_mult_matrix(eta))
}

#[derive(Debug, Clone)]
pub struct GaugeReport {
    /// Matrix of multiplication by e^zeta on the flattened basis.
    pub exp_matrix: Matrix,
    /// The shifted twist eta + d(zeta).
    pub new_twist: Element,
    /// Whether D_{eta + d zeta} . e^zeta = e^zeta . D_eta holds exactly.
    pub intertwines: bool,
}

/// Gauge transformation between twisted differentials: multiplication by
/// e^zeta intertwines D_eta with D_{eta + d zeta}.
pub fn gauge_transform(
    p: &Presentation,
    eta: &Element,
    zeta: &Element,
) -> Result<GaugeReport, CohomologyError> {
    if !p.d(eta).is_zero() {
        return Err(CohomologyError::TwistNotClosed);
    }
    if !eta.is_zero() && !p.is_odd_element(eta) {
        return Err(CohomologyError::TwistNotOdd);
    }
    if !zeta.is_zero() {
        match p.element_degree(zeta) {
            Some(d) if d > 0 && d % 2 == 0 => {}
            _ => return Err(CohomologyError::GaugeNotEven),
        }
    }
    let e_zeta = exp_element(p, zeta);
    let exp_matrix = p.left_mult_matrix(&e_zeta);
    let new_twist = eta.add(&p.d(zeta));
    let lhs = twisted_full_matrix(p, &new_twist).mul(&exp_matrix);
    let rhs = exp_matrix.mul(&twisted_full_matrix(p, eta));
    Ok(GaugeReport {
        exp_matrix,
        new_twist,
        intertwines: lhs.sub(&rhs).is_zero(),
    })
}
