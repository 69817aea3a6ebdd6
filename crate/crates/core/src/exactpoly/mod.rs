//! Exact sparse multivariate polynomials over ℤ and ℚ.

mod data;
mod expr;
mod identity;
pub mod monomial;
mod parse;
mod poly;
mod ratfun;

pub use data::{data, DataSet, DATA_ENV, FILES};
pub use expr::{poly_combine, PolyExpr};
pub use identity::{identity_check, IdentityReport, WITNESS_LIMIT};
pub use parse::{parse_data_file, parse_poly, parse_value, Stanza, Value};
pub use poly::{Coeff, Context, Horner, MPoly, Poly, QPoly};
pub use ratfun::RationalFunction;

use num_complex::Complex64;

use crate::error::Result;

/// Value of a substitution: symbolic when every binding is a polynomial,
/// numeric when every binding is a complex number.
#[derive(Clone, Debug, PartialEq)]
pub enum Substituted<C: Coeff> {
    Poly(Poly<C>),
    Number(Complex64),
}

/// Binding for [`poly_substitute`].
#[derive(Clone, Debug)]
pub enum Binding<C: Coeff> {
    Poly(Poly<C>),
    Number(Complex64),
}

/// Substitutes named bindings. Polynomial bindings compose exactly into the
/// context of the first polynomial binding (unbound variables are carried
/// over and must exist there). Complex bindings evaluate numerically and
/// every variable must then be bound.
pub fn poly_substitute<C: Coeff>(p: &Poly<C>, bindings: &[(&str, Binding<C>)]) -> Result<Substituted<C>> {
    let numeric: Vec<(&str, Complex64)> = bindings
        .iter()
        .filter_map(|(n, b)| match b {
            Binding::Number(z) => Some((*n, *z)),
            _ => None,
        })
        .collect();
    if numeric.len() == bindings.len() && !bindings.is_empty() || p.nvars() == 0 {
        return Ok(Substituted::Number(p.eval_named(&numeric)?));
    }
    if !numeric.is_empty() {
        return Err(crate::error::Error::Arity("cannot mix numeric and polynomial bindings".into()));
    }
    let polys: Vec<(&str, Poly<C>)> = bindings
        .iter()
        .filter_map(|(n, b)| match b {
            Binding::Poly(q) => Some((*n, q.clone())),
            _ => None,
        })
        .collect();
    let target = polys.first().map(|(_, q)| q.ctx().clone()).unwrap_or_else(|| p.ctx().clone());
    Ok(Substituted::Poly(p.substitute(&polys, &target)?))
}
