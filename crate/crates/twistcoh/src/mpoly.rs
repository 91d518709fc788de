//! Sparse multivariate polynomials over exact rationals, shared by the
//! characteristic-class and Hankel modules. Variables are plain `u32` ids;
//! each consumer fixes its own id scheme and naming.

use crate::exactlin::Scalar;
use num::{One, Zero};
use std::collections::BTreeMap;

/// Exponent map, variable id -> positive exponent.
pub type Exps = BTreeMap<u32, u32>;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MPoly {
    pub terms: BTreeMap<Exps, Scalar>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn constant(c: Scalar) -> Self {
        let mut p = MPoly::zero();
        if !c.is_zero() {
            p.terms.insert(Exps::new(), c);
        }
        p
    }

    pub fn one() -> Self {
        MPoly::constant(Scalar::one())
    }

    pub fn var(id: u32) -> Self {
        let mut e = Exps::new();
        e.insert(id, 1);
        MPoly::from_term(e, Scalar::one())
    }

    pub fn from_term(e: Exps, c: Scalar) -> Self {
        let mut p = MPoly::zero();
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Exps, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> MPoly {
        if s.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let mut e = ea.clone();
                for (v, x) in eb {
                    *e.entry(*v).or_insert(0) += x;
                }
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> MPoly {
        let mut out = MPoly::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Substitute every variable through `f` (identity: `MPoly::var(id)`).
    pub fn substitute(&self, f: impl Fn(u32) -> MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (e, c) in &self.terms {
            let mut term = MPoly::constant(c.clone());
            for (v, x) in e {
                term = term.mul(&f(*v).pow(*x));
            }
            out = out.add(&term);
        }
        out
    }

    /// Weighted degree of a term under the given variable weighting.
    pub fn term_weight(e: &Exps, weight_of: impl Fn(u32) -> u32) -> u32 {
        e.iter().map(|(v, x)| weight_of(*v) * x).sum()
    }

    /// Keep only the terms of exactly the given weighted degree.
    pub fn component(&self, w: u32, weight_of: impl Fn(u32) -> u32 + Copy) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| MPoly::term_weight(e, weight_of) == w)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Drop all terms of weighted degree above the bound.
    pub fn truncate(&self, max: u32, weight_of: impl Fn(u32) -> u32 + Copy) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| MPoly::term_weight(e, weight_of) <= max)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn max_weight(&self, weight_of: impl Fn(u32) -> u32 + Copy) -> u32 {
        self.terms
            .keys()
            .map(|e| MPoly::term_weight(e, weight_of))
            .max()
            .unwrap_or(0)
    }

    /// Exact evaluation at rational points.
    pub fn eval(&self, point: impl Fn(u32) -> Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, x) in e {
                let val = point(*v);
                for _ in 0..*x {
                    t *= val.clone();
                }
            }
            acc += t;
        }
        acc
    }

    /// Render with a caller-supplied variable namer; terms in map order.
    pub fn format(&self, name: impl Fn(u32) -> String) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let (sign, mag) = if crate::exactlin::scalar_is_negative(c) {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if i == 0 {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {} ", sign));
            }
            let mono: Vec<String> = e
                .iter()
                .map(|(v, x)| {
                    if *x == 1 {
                        name(*v)
                    } else {
                        format!("{}^{}", name(*v), x)
                    }
                })
                .collect();
            let mono = mono.join("*");
            if mono.is_empty() {
                out.push_str(&crate::exactlin::format_scalar(&mag));
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{}*{}", crate::exactlin::format_scalar(&mag), mono));
            }
        }
        out
    }
}
