//! The group `AN` in exponential coordinates.

use serde::{Deserialize, Serialize};

use super::vector::{AlgVec, ModelDim};
use crate::error::{Error, Result};

/// `rho(t) = (e^t - 1) / t`, extended by `rho(0) = 1`.
pub fn rho(t: f64) -> f64 {
    if t.abs() < 1e-5 {
        1.0 + t / 2.0 + t * t / 6.0 + t * t * t / 24.0
    } else {
        t.exp_m1() / t
    }
}

/// A point `g = Exp(xi)` of `AN`, identified with the point `g(o)` of `CH^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    pub xi: AlgVec,
}

/// Semidirect coordinates `(a, P, p)` with `Exp(bB + X + yZ) <-> (b, rho(b/2) X, rho(b) y)`.
///
/// In these coordinates the element is `Exp_n(P + pZ) Exp(aB)` and the product is
/// `(a,P,p)(b,Q,q) = (a+b, P + e^{a/2} Q, p + e^a q + <JP, e^{a/2} Q>/2)`.
#[derive(Debug, Clone, PartialEq)]
struct Semidirect {
    a: f64,
    n: AlgVec,
}

impl Semidirect {
    fn from_exp(xi: &AlgVec) -> Self {
        let b = xi.a();
        let mut n = xi.alpha_part().scale(rho(b / 2.0));
        n.set_z(rho(b) * xi.z());
        Self { a: b, n }
    }

    fn to_exp(&self) -> AlgVec {
        let mut xi = self.n.alpha_part().scale(1.0 / rho(self.a / 2.0));
        xi.set_a(self.a);
        xi.set_z(self.n.z() / rho(self.a));
        xi
    }

    fn mul(&self, other: &Self) -> Self {
        let s = (self.a / 2.0).exp();
        let q = other.n.alpha_part().scale(s);
        let z = self.n.z() + self.a.exp() * other.n.z() + 0.5 * self.n.omega_alpha(&q);
        let mut n = &self.n.alpha_part() + &q;
        n.set_z(z);
        Self {
            a: self.a + other.a,
            n,
        }
    }
}

impl GroupElement {
    pub fn identity(dim: ModelDim) -> Self {
        Self {
            xi: AlgVec::zero(dim),
        }
    }

    /// `Exp(xi)`; the exponential map is a global diffeomorphism onto `AN`.
    pub fn exp(xi: AlgVec) -> Self {
        Self { xi }
    }

    pub fn dim(&self) -> ModelDim {
        self.xi.dim()
    }

    pub fn inverse(&self) -> Self {
        Self { xi: -&self.xi }
    }

    /// Group product; panics on dimension mismatch (see [`group_multiply`]).
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(
            self.dim(),
            other.dim(),
            "product of elements in different models"
        );
        let p = Semidirect::from_exp(&self.xi).mul(&Semidirect::from_exp(&other.xi));
        Self { xi: p.to_exp() }
    }

    /// Closed-form adjoint action
    /// `Ad(Exp(bB+X+yZ))(aB+Y+xZ) = aB + e^{b/2}Y - (a/2) rho(b/2) X
    ///   + (x e^b - a y rho(b) + e^{b/2} rho(b/2) <JX,Y>) Z`.
    pub fn ad(&self, v: &AlgVec) -> AlgVec {
        assert_eq!(self.dim(), v.dim(), "adjoint across different models");
        let (b, y) = (self.xi.a(), self.xi.z());
        let (a, x) = (v.a(), v.z());
        let eh = (b / 2.0).exp();
        let rh = rho(b / 2.0);
        let big_x = self.xi.alpha_part();
        let big_y = v.alpha_part();
        let mut out = big_y.scale(eh).axpy(-0.5 * a * rh, &big_x);
        out.set_a(a);
        out.set_z(x * b.exp() - a * y * rho(b) + eh * rh * big_x.omega_alpha(&big_y));
        out
    }
}

/// Checked bracket.
pub fn bracket(x: &AlgVec, y: &AlgVec) -> Result<AlgVec> {
    same_dim(x.dim(), y.dim())?;
    Ok(x.bracket(y))
}

/// Checked closed-form adjoint action.
pub fn adjoint(g: &GroupElement, y: &AlgVec) -> Result<AlgVec> {
    same_dim(g.dim(), y.dim())?;
    Ok(g.ad(y))
}

/// `sum_{k=0}^{terms} ad(xi)^k y / k!` using only the bracket.
pub fn adjoint_series_oracle(g: &GroupElement, y: &AlgVec, terms: usize) -> Result<AlgVec> {
    same_dim(g.dim(), y.dim())?;
    let mut term = y.clone();
    let mut acc = y.clone();
    for k in 1..=terms.max(1) {
        term = g.xi.bracket(&term).scale(1.0 / k as f64);
        acc += &term;
    }
    Ok(acc)
}

/// Checked group product.
pub fn group_multiply(g1: &GroupElement, g2: &GroupElement) -> Result<GroupElement> {
    same_dim(g1.dim(), g2.dim())?;
    Ok(g1.mul(g2))
}

pub fn group_inverse(g: &GroupElement) -> GroupElement {
    g.inverse()
}

fn same_dim(a: ModelDim, b: ModelDim) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: a.real_dim(),
            found: b.real_dim(),
        })
    }
}
