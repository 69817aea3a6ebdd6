//! Expression trees over polynomials, evaluated exactly.

use super::poly::{Coeff, Poly};
use crate::error::Result;

#[derive(Clone, Debug)]
pub enum PolyExpr<C: Coeff> {
    Leaf(Poly<C>),
    Add(Box<PolyExpr<C>>, Box<PolyExpr<C>>),
    Sub(Box<PolyExpr<C>>, Box<PolyExpr<C>>),
    Mul(Box<PolyExpr<C>>, Box<PolyExpr<C>>),
    Neg(Box<PolyExpr<C>>),
    Scale(C, Box<PolyExpr<C>>),
    Pow(Box<PolyExpr<C>>, u32),
}

impl<C: Coeff> PolyExpr<C> {
    pub fn leaf(p: &Poly<C>) -> Self {
        PolyExpr::Leaf(p.clone())
    }
    pub fn add(self, o: Self) -> Self {
        PolyExpr::Add(Box::new(self), Box::new(o))
    }
    pub fn sub(self, o: Self) -> Self {
        PolyExpr::Sub(Box::new(self), Box::new(o))
    }
    pub fn mul(self, o: Self) -> Self {
        PolyExpr::Mul(Box::new(self), Box::new(o))
    }
    pub fn neg(self) -> Self {
        PolyExpr::Neg(Box::new(self))
    }
    pub fn scale(self, c: C) -> Self {
        PolyExpr::Scale(c, Box::new(self))
    }
    pub fn pow(self, e: u32) -> Self {
        PolyExpr::Pow(Box::new(self), e)
    }
}

/// Evaluates the tree; mismatched variable contexts give an arity error.
pub fn poly_combine<C: Coeff>(e: &PolyExpr<C>) -> Result<Poly<C>> {
    Ok(match e {
        PolyExpr::Leaf(p) => p.clone(),
        PolyExpr::Add(a, b) => poly_combine(a)?.try_add(&poly_combine(b)?)?,
        PolyExpr::Sub(a, b) => poly_combine(a)?.try_sub(&poly_combine(b)?)?,
        PolyExpr::Mul(a, b) => poly_combine(a)?.try_mul(&poly_combine(b)?)?,
        PolyExpr::Neg(a) => -poly_combine(a)?,
        PolyExpr::Scale(c, a) => poly_combine(a)?.scale(c),
        PolyExpr::Pow(a, k) => poly_combine(a)?.pow(*k),
    })
}
