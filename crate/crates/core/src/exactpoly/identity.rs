use serde::Serialize;

use super::poly::{Coeff, Poly};

/// Outcome of a zero-polynomial assertion.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct IdentityReport {
    pub pass: bool,
    /// Leading terms of `lhs - rhs` (at most 10) when the check fails.
    pub witness_terms: Vec<String>,
    /// Number of terms in `lhs - rhs`.
    pub residual_terms: usize,
}

pub const WITNESS_LIMIT: usize = 10;

/// PASS iff `lhs - rhs` is the zero polynomial.
pub fn identity_check<C: Coeff>(lhs: &Poly<C>, rhs: &Poly<C>) -> IdentityReport {
    let diff = match lhs.try_sub(rhs) {
        Ok(d) => d,
        Err(e) => {
            return IdentityReport {
                pass: false,
                witness_terms: vec![e.to_string()],
                residual_terms: 0,
            }
        }
    };
    IdentityReport {
        pass: diff.is_zero(),
        witness_terms: diff.witness_terms(WITNESS_LIMIT),
        residual_terms: diff.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{parse_poly, Context, MPoly};

    #[test]
    fn failing_check_has_witnesses() {
        let ctx = Context::parse("a b").unwrap();
        let p: MPoly = parse_poly("a^2 + b^2", &ctx).unwrap();
        let q: MPoly = parse_poly("(a + b)^8", &ctx).unwrap();
        let r = identity_check(&p, &q);
        assert!(!r.pass);
        assert_eq!(r.witness_terms.len(), 10);
        assert_eq!(r.residual_terms, 11);
        assert_eq!(r.witness_terms[0], "-a^8");
        assert!(identity_check(&q, &q).pass);
    }
}
