use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::monomial::{self, Key, MAX_EXP, MAX_VARS};
use crate::error::{Error, Result};

/// Coefficient ring of a [`Poly`].
pub trait Coeff:
    Clone
    + fmt::Debug
    + PartialEq
    + Zero
    + One
    + Send
    + Sync
    + 'static
    + Neg<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
{
    fn mul_ref(&self, other: &Self) -> Self;
    fn from_bigint(v: BigInt) -> Self;
    fn from_i64(v: i64) -> Self {
        Self::from_bigint(BigInt::from(v))
    }
    /// Quotient when it exists in the ring.
    fn div_exact(&self, other: &Self) -> Option<Self>;
    fn to_f64(&self) -> f64;
    fn is_negative(&self) -> bool;
    /// Magnitude rendered in the data grammar (`12` or `1/2`).
    fn magnitude_string(&self) -> String;
}

impl Coeff for BigInt {
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn from_bigint(v: BigInt) -> Self {
        v
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(other);
        r.is_zero().then_some(q)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn magnitude_string(&self) -> String {
        self.abs().to_string()
    }
}

impl Coeff for BigRational {
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn from_bigint(v: BigInt) -> Self {
        BigRational::from_integer(v)
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        (!other.is_zero()).then(|| self / other)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn magnitude_string(&self) -> String {
        let a = self.abs();
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
}

/// Ordered variable names shared by every polynomial in one computation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Context(Arc<[String]>);

impl Context {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        if names.len() > MAX_VARS {
            return Err(Error::Arity(format!(
                "{} variables requested, at most {MAX_VARS} supported",
                names.len()
            )));
        }
        let v: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, n) in v.iter().enumerate() {
            if v[..i].contains(n) {
                return Err(Error::Arity(format!("variable `{n}` listed twice")));
            }
        }
        Ok(Context(v.into()))
    }

    /// Context from a whitespace separated list such as `"a b c d"`.
    pub fn parse(spec: &str) -> Result<Self> {
        let names: Vec<&str> = spec.split_whitespace().collect();
        Self::new(&names)
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    fn same(&self, other: &Context) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl fmt::Debug for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0.join(" "))
    }
}

/// Sparse multivariate polynomial in graded-lex order.
#[derive(Clone)]
pub struct Poly<C> {
    ctx: Context,
    terms: BTreeMap<Key, C>,
}

/// Integer coefficients.
pub type MPoly = Poly<BigInt>;
/// Rational coefficients.
pub type QPoly = Poly<BigRational>;

impl<C: Coeff> PartialEq for Poly<C> {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.same(&other.ctx) && self.terms == other.terms
    }
}

impl<C: Coeff> Poly<C> {
    pub fn zero(ctx: &Context) -> Self {
        Poly {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ctx: &Context, c: C) -> Self {
        let mut p = Self::zero(ctx);
        if !c.is_zero() {
            p.terms.insert(0, c);
        }
        p
    }

    pub fn from_i64(ctx: &Context, c: i64) -> Self {
        Self::constant(ctx, C::from_i64(c))
    }

    pub fn one(ctx: &Context) -> Self {
        Self::constant(ctx, C::one())
    }

    pub fn var(ctx: &Context, name: &str) -> Result<Self> {
        let i = ctx
            .index(name)
            .ok_or_else(|| Error::Arity(format!("variable `{name}` not in context {ctx:?}")))?;
        Ok(Self::var_at(ctx, i))
    }

    pub fn var_at(ctx: &Context, i: usize) -> Self {
        Self::monomial(ctx, monomial::var_power(i, 1), C::one())
    }

    pub(crate) fn monomial(ctx: &Context, key: Key, c: C) -> Self {
        let mut p = Self::zero(ctx);
        if !c.is_zero() {
            p.terms.insert(key, c);
        }
        p
    }

    /// Builds from explicit exponent vectors; repeated exponents are summed.
    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, C)>>(ctx: &Context, it: I) -> Result<Self> {
        let mut p = Self::zero(ctx);
        for (e, c) in it {
            if e.len() != ctx.len() {
                return Err(Error::Arity(format!(
                    "exponent tuple of length {} in a {}-variable context",
                    e.len(),
                    ctx.len()
                )));
            }
            if let Some(&bad) = e.iter().find(|&&x| x > MAX_EXP) {
                return Err(Error::Arity(format!("exponent {bad} exceeds {MAX_EXP}")));
            }
            p.add_term(monomial::pack(&e), &c);
        }
        Ok(p)
    }

    pub fn ctx(&self) -> &Context {
        &self.ctx
    }

    pub fn nvars(&self) -> usize {
        self.ctx.len()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&k| k == 0)
    }

    /// Terms in descending graded-lex order as (exponents, coefficient).
    pub fn terms(&self) -> impl Iterator<Item = (Vec<u32>, &C)> + '_ {
        let n = self.nvars();
        self.terms
            .iter()
            .rev()
            .map(move |(&k, c)| (monomial::unpack(k, n), c))
    }

    pub fn coeff(&self, exps: &[u32]) -> C {
        self.terms
            .get(&monomial::pack(exps))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.terms.get(&0).cloned().unwrap_or_else(C::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|&k| monomial::degree(k))
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms
            .keys()
            .map(|&k| monomial::exponent(k, i))
            .max()
            .unwrap_or(0)
    }

    /// Common degree of all terms, or `None` if inhomogeneous. Zero counts as homogeneous of degree 0.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|&k| monomial::degree(k));
        let first = match it.next() {
            Some(d) => d,
            None => return Some(0),
        };
        it.all(|d| d == first).then_some(first)
    }

    /// Degree with respect to integer weights on the variables, if every term agrees.
    pub fn weighted_homogeneous_degree(&self, weights: &[u32]) -> Option<u32> {
        let n = self.nvars();
        let mut deg = None;
        for &k in self.terms.keys() {
            let d: u32 = (0..n).map(|i| weights[i] * monomial::exponent(k, i)).sum();
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return None,
                _ => {}
            }
        }
        Some(deg.unwrap_or(0))
    }

    fn add_term(&mut self, key: Key, c: &C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c.clone());
            }
        }
    }

    fn check_ctx(&self, other: &Self) -> Result<()> {
        if self.ctx.same(&other.ctx) {
            Ok(())
        } else {
            Err(Error::Arity(format!(
                "contexts differ: {:?} vs {:?}",
                self.ctx, other.ctx
            )))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let mut out = self.clone();
        for (&k, c) in &other.terms {
            out.add_term(k, c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let mut out = self.clone();
        for (&k, c) in &other.terms {
            out.add_term(k, &-c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let n = self.nvars();
        for i in 0..n {
            if self.degree_in(i) + other.degree_in(i) > MAX_EXP {
                return Err(Error::Arity(format!(
                    "exponent of `{}` would exceed {MAX_EXP}",
                    self.ctx.names()[i]
                )));
            }
        }
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc: BTreeMap<Key, C> = BTreeMap::new();
        for (&ka, ca) in &small.terms {
            for (&kb, cb) in &large.terms {
                let c = ca.mul_ref(cb);
                match acc.entry(ka + kb) {
                    std::collections::btree_map::Entry::Occupied(mut e) => *e.get_mut() += &c,
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Poly {
            ctx: self.ctx.clone(),
            terms: acc,
        })
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ctx);
        }
        Poly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(&k, v)| (k, v.mul_ref(c))).collect(),
        }
    }

    pub fn scale_i64(&self, c: i64) -> Self {
        self.scale(&C::from_i64(c))
    }

    /// Multiplies by the monomial with exponent vector `exps`.
    pub fn shift(&self, exps: &[u32]) -> Self {
        let m = monomial::pack(exps);
        Poly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(&k, v)| (k + m, v.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one(&self.ctx);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (&k, c) in &self.terms {
            let e = monomial::exponent(k, i);
            if e == 0 {
                continue;
            }
            let key = k - monomial::var_power(i, 1);
            out.add_term(key, &c.mul_ref(&C::from_i64(e as i64)));
        }
        out
    }

    /// Coefficients with respect to variable `i`: entry k multiplies `x_i^k`.
    pub fn coefficients_in(&self, i: usize) -> Vec<Self> {
        let d = self.degree_in(i) as usize;
        let mut out = vec![Self::zero(&self.ctx); d + 1];
        for (&k, c) in &self.terms {
            let e = monomial::exponent(k, i) as usize;
            out[e].terms.insert(monomial::without(k, i), c.clone());
        }
        out
    }

    /// Rewrites the polynomial in a context containing all its variables by name.
    pub fn embed(&self, target: &Context) -> Result<Self> {
        if self.ctx.same(target) {
            return Ok(self.clone());
        }
        let n = self.nvars();
        let map: Vec<Option<usize>> = self.ctx.names().iter().map(|v| target.index(v)).collect();
        let mut out = Self::zero(target);
        for (&k, c) in &self.terms {
            let mut e = vec![0u32; target.len()];
            for i in 0..n {
                let x = monomial::exponent(k, i);
                if x == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => e[j] = x,
                    None => {
                        return Err(Error::Arity(format!(
                            "variable `{}` missing from {target:?}",
                            self.ctx.names()[i]
                        )))
                    }
                }
            }
            out.add_term(monomial::pack(&e), c);
        }
        Ok(out)
    }

    /// Composition: variable `i` is replaced by `images[i]`, all in one target context.
    pub fn compose(&self, images: &[Poly<C>]) -> Result<Self> {
        if images.len() != self.nvars() {
            return Err(Error::Arity(format!(
                "{} images for {} variables",
                images.len(),
                self.nvars()
            )));
        }
        let target = match images.first() {
            Some(p) => p.ctx.clone(),
            None => {
                return Ok(Poly {
                    ctx: self.ctx.clone(),
                    terms: self.terms.clone(),
                })
            }
        };
        for p in images {
            if !p.ctx.same(&target) {
                return Err(Error::Arity("composition images live in different contexts".into()));
            }
        }
        // Horner in the first variable, recursing on the rest.
        Ok(self.compose_rec(0, images, &target))
    }

    fn compose_rec(&self, i: usize, images: &[Poly<C>], target: &Context) -> Self {
        if self.is_zero() {
            return Self::zero(target);
        }
        if i == self.nvars() {
            return Self::constant(target, self.constant_term());
        }
        let coeffs = self.coefficients_in(i);
        let mut acc = Self::zero(target);
        for c in coeffs.iter().rev() {
            acc = &acc * &images[i];
            if !c.is_zero() {
                acc = &acc + &c.compose_rec(i + 1, images, target);
            }
        }
        acc
    }

    /// Substitutes named variables; unbound variables map to themselves in `target`.
    pub fn substitute(&self, bindings: &[(&str, Poly<C>)], target: &Context) -> Result<Self> {
        let images = self
            .ctx
            .names()
            .iter()
            .map(|v| match bindings.iter().find(|(n, _)| n == v) {
                Some((_, p)) => p.embed(target),
                None => Poly::var(target, v).map_err(|_| Error::MissingBinding(v.clone())),
            })
            .collect::<Result<Vec<_>>>()?;
        if images.is_empty() {
            return self.embed(target);
        }
        self.compose(&images)
    }

    /// Exact evaluation at a point of the coefficient ring.
    pub fn eval_exact(&self, point: &[C]) -> Result<C> {
        if point.len() != self.nvars() {
            return Err(Error::Arity(format!(
                "{} values for {} variables",
                point.len(),
                self.nvars()
            )));
        }
        let n = self.nvars();
        let mut powers: Vec<Vec<C>> = (0..n)
            .map(|i| {
                let d = self.degree_in(i) as usize;
                let mut v = Vec::with_capacity(d + 1);
                v.push(C::one());
                for k in 1..=d {
                    let next = v[k - 1].mul_ref(&point[i]);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc = C::zero();
        for (&k, c) in &self.terms {
            let mut t = c.clone();
            for (i, pw) in powers.iter_mut().enumerate() {
                let e = monomial::exponent(k, i) as usize;
                if e > 0 {
                    t = t.mul_ref(&pw[e]);
                }
            }
            acc += &t;
        }
        Ok(acc)
    }

    /// Numeric evaluation by nested Horner.
    pub fn eval_complex(&self, point: &[Complex64]) -> Result<Complex64> {
        if point.len() != self.nvars() {
            return Err(Error::Arity(format!(
                "{} values for {} variables",
                point.len(),
                self.nvars()
            )));
        }
        Ok(Horner::compile(self).eval(point))
    }

    /// Numeric evaluation with named bindings; errors on a free variable.
    pub fn eval_named(&self, bindings: &[(&str, Complex64)]) -> Result<Complex64> {
        let point = self
            .ctx
            .names()
            .iter()
            .map(|v| {
                bindings
                    .iter()
                    .find(|(n, _)| n == v)
                    .map(|(_, z)| *z)
                    .ok_or_else(|| Error::MissingBinding(v.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        self.eval_complex(&point)
    }

    /// Sum of absolute values of the terms at a point (scale for relative residuals).
    pub fn eval_abs_terms(&self, point: &[Complex64]) -> f64 {
        let n = self.nvars();
        self.terms
            .iter()
            .map(|(&k, c)| {
                let mut m = c.to_f64().abs();
                for (i, z) in point.iter().enumerate().take(n) {
                    m *= z.norm().powi(monomial::exponent(k, i) as i32);
                }
                m
            })
            .sum()
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(&k, c)| (k, f(c)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    /// Leading term in graded-lex order.
    pub fn leading(&self) -> Option<(Key, &C)> {
        self.terms.iter().next_back().map(|(&k, c)| (k, c))
    }

    /// Leading term as (exponents, coefficient).
    pub fn leading_term(&self) -> Option<(Vec<u32>, &C)> {
        self.leading().map(|(k, c)| (monomial::unpack(k, self.nvars()), c))
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if self.check_ctx(d).is_err() {
            return None;
        }
        let (lk, lc) = d.leading()?;
        let n = self.nvars();
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.ctx);
        while let Some((rk, rc)) = rem.leading() {
            let mk = monomial::divide(rk, lk, n)?;
            let mc = rc.div_exact(lc)?;
            let t = Self::monomial(&self.ctx, mk, mc.clone());
            rem = &rem - &(&t * d);
            quot.add_term(mk, &mc);
        }
        Some(quot)
    }

    /// First `limit` terms rendered in the grammar, for failure witnesses.
    pub fn witness_terms(&self, limit: usize) -> Vec<String> {
        self.terms
            .iter()
            .rev()
            .take(limit)
            .map(|(&k, c)| Poly::monomial(&self.ctx, k, c.clone()).to_string())
            .collect()
    }
}

impl MPoly {
    pub fn to_rational(&self) -> QPoly {
        self.map_coeffs(|c| BigRational::from_integer(c.clone()))
    }

    /// Content (gcd of the coefficients), positive; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }
}

impl QPoly {
    /// Converts to integer coefficients when every coefficient is integral.
    pub fn to_integer(&self) -> Option<MPoly> {
        if self.terms.values().all(|c| c.is_integer()) {
            Some(self.map_coeffs(|c| c.numer().clone()))
        } else {
            None
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<'a, C: Coeff> $tr<&'a Poly<C>> for &'a Poly<C> {
            type Output = Poly<C>;
            fn $m(self, rhs: &'a Poly<C>) -> Poly<C> {
                self.$checked(rhs).expect("polynomial operands in different contexts")
            }
        }
        impl<C: Coeff> $tr<Poly<C>> for Poly<C> {
            type Output = Poly<C>;
            fn $m(self, rhs: Poly<C>) -> Poly<C> {
                (&self).$m(&rhs)
            }
        }
        impl<'a, C: Coeff> $tr<&'a Poly<C>> for Poly<C> {
            type Output = Poly<C>;
            fn $m(self, rhs: &'a Poly<C>) -> Poly<C> {
                (&self).$m(rhs)
            }
        }
        impl<'a, C: Coeff> $tr<Poly<C>> for &'a Poly<C> {
            type Output = Poly<C>;
            fn $m(self, rhs: Poly<C>) -> Poly<C> {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl<C: Coeff> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly {
            ctx: self.ctx,
            terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect(),
        }
    }
}

impl<C: Coeff> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        -(self.clone())
    }
}

impl<C: Coeff> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = self.ctx.names();
        for (idx, (&k, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mag = c.magnitude_string();
            let mut factors: Vec<String> = Vec::new();
            for (i, name) in names.iter().enumerate() {
                match monomial::exponent(k, i) {
                    0 => {}
                    1 => factors.push(name.clone()),
                    e => factors.push(format!("{name}^{e}")),
                }
            }
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == "1" {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{mag}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} {}", self.ctx, self)
    }
}

/// Nested Horner form for repeated numeric evaluation.
#[derive(Clone, Debug)]
pub enum Horner {
    Const(f64),
    Node {
        var: usize,
        /// (exponent, inner) pairs in descending exponent order.
        parts: Vec<(u32, Horner)>,
    },
}

impl Horner {
    pub fn compile<C: Coeff>(p: &Poly<C>) -> Horner {
        let n = p.nvars();
        let terms: Vec<(Key, f64)> = p.terms.iter().map(|(&k, c)| (k, c.to_f64())).collect();
        Self::build(&terms, 0, n)
    }

    fn build(terms: &[(Key, f64)], var: usize, n: usize) -> Horner {
        if var == n || terms.iter().all(|&(k, _)| k == 0) {
            return Horner::Const(terms.iter().map(|t| t.1).sum());
        }
        let mut groups: BTreeMap<u32, Vec<(Key, f64)>> = BTreeMap::new();
        for &(k, c) in terms {
            groups
                .entry(monomial::exponent(k, var))
                .or_default()
                .push((monomial::without(k, var), c));
        }
        if groups.len() == 1 && groups.contains_key(&0) {
            return Self::build(&groups[&0], var + 1, n);
        }
        let parts = groups
            .into_iter()
            .rev()
            .map(|(e, ts)| (e, Self::build(&ts, var + 1, n)))
            .collect();
        Horner::Node { var, parts }
    }

    pub fn eval(&self, x: &[Complex64]) -> Complex64 {
        match self {
            Horner::Const(c) => Complex64::new(*c, 0.0),
            Horner::Node { var, parts } => {
                let xv = x[*var];
                let mut acc = Complex64::new(0.0, 0.0);
                let mut prev = parts[0].0;
                for (e, inner) in parts {
                    acc = acc * xv.powu(prev - e) + inner.eval(x);
                    prev = *e;
                }
                acc * xv.powu(prev)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Context {
        Context::parse("a b c").unwrap()
    }

    fn v(name: &str) -> MPoly {
        MPoly::var(&ctx(), name).unwrap()
    }

    #[test]
    fn square_of_binomial() {
        let a = v("a");
        let b = v("b");
        let s = (&a + &b).pow(2);
        let expect = &(&a * &a + (&a * &b).scale_i64(2)) + &(&b * &b);
        assert_eq!(s, expect);
        assert_eq!(s.to_string(), "a^2 + 2*a*b + b^2");
    }

    #[test]
    fn zero_terms_are_dropped() {
        let a = v("a");
        let z = &a.scale_i64(2) - &(&a + &a);
        assert!(z.is_zero());
        assert_eq!(z.len(), 0);
    }

    #[test]
    fn mismatched_context_is_an_arity_error() {
        let other = Context::parse("x y").unwrap();
        let x = MPoly::var(&other, "x").unwrap();
        assert!(matches!(v("a").try_add(&x), Err(Error::Arity(_))));
    }

    #[test]
    fn exact_division() {
        let a = v("a");
        let b = v("b");
        let f = &(&a + &b) * &(&a - &b.scale_i64(3));
        assert_eq!(f.div_exact(&(&a + &b)), Some(&a - &b.scale_i64(3)));
        assert_eq!(f.div_exact(&(&a + &b.scale_i64(2))), None);
    }

    #[test]
    fn compose_and_horner_agree() {
        let a = v("a");
        let b = v("b");
        let c = v("c");
        let f = &(&a.pow(3) - &(&b * &c).scale_i64(5)) + &c.pow(2);
        let img = [&a + &b, b.clone(), &c - &a];
        let g = f.compose(&img).unwrap();
        let pt = [
            Complex64::new(0.3, -1.0),
            Complex64::new(2.0, 0.5),
            Complex64::new(-0.7, 0.2),
        ];
        let moved = [pt[0] + pt[1], pt[1], pt[2] - pt[0]];
        let lhs = g.eval_complex(&pt).unwrap();
        let rhs = f.eval_complex(&moved).unwrap();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn derivative_and_coefficients() {
        let a = v("a");
        let b = v("b");
        let f = &(&a.pow(3) * &b) + &b.scale_i64(7);
        assert_eq!(f.derivative(0), (&a.pow(2) * &b).scale_i64(3));
        let cs = f.coefficients_in(0);
        assert_eq!(cs.len(), 4);
        assert_eq!(cs[3], b);
        assert_eq!(cs[0], b.scale_i64(7));
    }
}
