use std::fmt;

use num_complex::Complex64;

use super::poly::{Coeff, Poly};
use crate::error::{Error, Result};

/// Quotient of two polynomials in a shared context.
#[derive(Clone, Debug)]
pub struct RationalFunction<C: Coeff> {
    num: Poly<C>,
    den: Poly<C>,
}

impl<C: Coeff> RationalFunction<C> {
    pub fn new(num: Poly<C>, den: Poly<C>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Domain("rational function with zero denominator".into()));
        }
        if num.ctx() != den.ctx() {
            return Err(Error::Arity("numerator and denominator contexts differ".into()));
        }
        Ok(RationalFunction { num, den })
    }

    pub fn from_poly(p: Poly<C>) -> Self {
        let den = Poly::one(p.ctx());
        RationalFunction { num: p, den }
    }

    pub fn num(&self) -> &Poly<C> {
        &self.num
    }

    pub fn den(&self) -> &Poly<C> {
        &self.den
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if self.den == o.den {
            return Self::new(self.num.try_add(&o.num)?, self.den.clone());
        }
        Self::new(
            self.num.try_mul(&o.den)?.try_add(&o.num.try_mul(&self.den)?)?,
            self.den.try_mul(&o.den)?,
        )
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        Self::new(self.num.try_mul(&o.num)?, self.den.try_mul(&o.den)?)
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Self::new(self.num.try_mul(&o.den)?, self.den.try_mul(&o.num)?)
    }

    /// Equality as functions, by cross multiplication.
    pub fn equals(&self, o: &Self) -> Result<bool> {
        Ok(self.num.try_mul(&o.den)? == o.num.try_mul(&self.den)?)
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Result<Complex64> {
        let d = self.den.eval_complex(point)?;
        if d.norm() == 0.0 {
            return Err(Error::Domain("denominator vanishes at the evaluation point".into()));
        }
        Ok(self.num.eval_complex(point)? / d)
    }
}

impl<C: Coeff> fmt::Display for RationalFunction<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{parse_poly, Context, MPoly};

    #[test]
    fn arithmetic_and_equality() {
        let ctx = Context::parse("x y").unwrap();
        let p = |s: &str| -> MPoly { parse_poly(s, &ctx).unwrap() };
        let r = RationalFunction::new(p("x"), p("x + y")).unwrap();
        let s = RationalFunction::new(p("y"), p("x + y")).unwrap();
        let one = r.add(&s).unwrap();
        assert!(one.equals(&RationalFunction::from_poly(p("1"))).unwrap());
        let q = r.div(&s).unwrap();
        assert!(q.equals(&RationalFunction::new(p("2*x"), p("2*y")).unwrap()).unwrap());
        assert!(RationalFunction::new(p("x"), p("0")).is_err());
    }
}
