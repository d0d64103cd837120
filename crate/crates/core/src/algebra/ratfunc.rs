use super::polynomial::{poly_gcd, Polynomial};
use super::rational::Rational;
use super::{Domain, Field};
use num::{One, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Element of ℚ(λ) in lowest terms with a monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    numer: Polynomial,
    denom: Polynomial,
}

impl RationalFunction {
    pub fn new(numer: Polynomial, denom: Polynomial) -> Self {
        assert!(!denom.is_zero(), "rational function with zero denominator");
        if numer.is_zero() {
            return Self::zero();
        }
        let g = poly_gcd(&numer, &denom);
        let (mut n, mut d) = (numer.exact_div(&g), denom.exact_div(&g));
        let lead = d.leading();
        if !lead.is_one() {
            let inv = lead.recip();
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        RationalFunction { numer: n, denom: d }
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        RationalFunction { numer: p, denom: Polynomial::one() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_polynomial(Polynomial::constant(c))
    }

    pub fn numer(&self) -> &Polynomial {
        &self.numer
    }

    pub fn denom(&self) -> &Polynomial {
        &self.denom
    }

    pub fn is_polynomial(&self) -> bool {
        self.denom.is_constant()
    }

    /// The rational constant, if the function has no λ-dependence.
    pub fn as_constant(&self) -> Option<Rational> {
        (self.numer.is_constant() && self.denom.is_constant()).then(|| self.numer.coeff(0))
    }

    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.denom.eval(x);
        (!d.is_zero()).then(|| self.numer.eval(x) / d)
    }
}

impl Add for RationalFunction {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.denom == rhs.denom {
            return Self::new(&self.numer + &rhs.numer, self.denom);
        }
        let n = &(&self.numer * &rhs.denom) + &(&rhs.numer * &self.denom);
        Self::new(n, &self.denom * &rhs.denom)
    }
}

impl Sub for RationalFunction {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for RationalFunction {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        Self::new(&self.numer * &rhs.numer, &self.denom * &rhs.denom)
    }
}

impl Div for RationalFunction {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        assert!(!rhs.is_zero(), "division by zero rational function");
        Self::new(&self.numer * &rhs.denom, &self.denom * &rhs.numer)
    }
}

impl Neg for RationalFunction {
    type Output = Self;
    fn neg(self) -> Self {
        RationalFunction { numer: -self.numer, denom: self.denom }
    }
}

impl Zero for RationalFunction {
    fn zero() -> Self {
        RationalFunction { numer: Polynomial::zero(), denom: Polynomial::one() }
    }
    fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }
}

impl One for RationalFunction {
    fn one() -> Self {
        Self::from_polynomial(Polynomial::one())
    }
}

impl Domain for RationalFunction {
    fn exact_div(&self, divisor: &Self) -> Self {
        self.clone() / divisor.clone()
    }
}

impl Field for RationalFunction {}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom.is_one() {
            write!(f, "{}", self.numer)
        } else {
            write!(f, "({}) / ({})", self.numer, self.denom)
        }
    }
}
