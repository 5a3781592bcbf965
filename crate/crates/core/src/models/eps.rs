//! Exact arithmetic in the field of rational functions of a positive
//! infinitesimal `ε`.
//!
//! A number is a ratio of polynomials with rational coefficients. Signs are
//! read off the lowest-order nonzero coefficient, which makes the order exact
//! and total: `ε` is positive and below every positive rational.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A polynomial in `ε`, coefficients in increasing degree, no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct EpsPoly(Vec<BigRational>);

impl EpsPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self(coeffs)
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree of the lowest nonzero term.
    pub fn valuation(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    pub fn lowest(&self) -> Option<&BigRational> {
        self.valuation().map(|v| &self.0[v])
    }

    /// Sign under `0 < ε ≪ every positive rational`.
    pub fn signum(&self) -> i8 {
        match self.lowest() {
            None => 0,
            Some(c) if c.is_positive() => 1,
            Some(_) => -1,
        }
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn shift_down(&self, k: usize) -> Self {
        Self(self.0[k.min(self.0.len())..].to_vec())
    }
}

impl Add for &EpsPoly {
    type Output = EpsPoly;

    fn add(self, rhs: &EpsPoly) -> EpsPoly {
        let len = self.0.len().max(rhs.0.len());
        let zero = BigRational::zero();
        EpsPoly::new(
            (0..len)
                .map(|i| self.0.get(i).unwrap_or(&zero) + rhs.0.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Neg for &EpsPoly {
    type Output = EpsPoly;

    fn neg(self) -> EpsPoly {
        EpsPoly(self.0.iter().map(|c| -c).collect())
    }
}

impl Sub for &EpsPoly {
    type Output = EpsPoly;

    fn sub(self, rhs: &EpsPoly) -> EpsPoly {
        self + &(-rhs)
    }
}

impl Mul for &EpsPoly {
    type Output = EpsPoly;

    fn mul(self, rhs: &EpsPoly) -> EpsPoly {
        if self.is_zero() || rhs.is_zero() {
            return EpsPoly::default();
        }
        let mut out = vec![BigRational::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        EpsPoly::new(out)
    }
}

impl fmt::Display for EpsPoly {
    /// `c0 + c1 eps^1 + ...`, zero terms omitted (beyond the constant).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        write!(f, "{}", self.0[0])?;
        for (k, c) in self.0.iter().enumerate().skip(1) {
            if !c.is_zero() {
                write!(f, " + {c} eps^{k}")?;
            }
        }
        Ok(())
    }
}

fn parse_rational(text: &str) -> Result<BigRational> {
    let bad = || Error::Input(format!("invalid rational {text:?}"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let num: BigInt = num.trim().parse().map_err(|_| bad())?;
    let den: BigInt = den.trim().parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Input(format!("zero denominator in {text:?}")));
    }
    Ok(BigRational::new(num, den))
}

pub fn rational(text: &str) -> Result<BigRational> {
    parse_rational(text)
}

impl FromStr for EpsPoly {
    type Err = Error;

    /// Accepts `<rational>[ (+|-) <rational>[ eps[^k]] ...]`.
    fn from_str(text: &str) -> Result<Self> {
        let mut coeffs: Vec<BigRational> = Vec::new();
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.is_empty() {
            return Err(Error::Input("empty polynomial".into()));
        }
        let mut i = 0;
        let mut sign = BigRational::one();
        let mut first = true;
        while i < tokens.len() {
            if !first {
                match tokens[i] {
                    "+" => sign = BigRational::one(),
                    "-" => sign = -BigRational::one(),
                    other => return Err(Error::Input(format!("expected + or -, found {other:?}"))),
                }
                i += 1;
                if i >= tokens.len() {
                    return Err(Error::Input("dangling operator in polynomial".into()));
                }
            }
            first = false;
            let coeff = parse_rational(tokens[i])?;
            i += 1;
            let mut degree = 0;
            if let Some(t) = tokens.get(i) {
                if let Some(rest) = t.strip_prefix("eps") {
                    degree = match rest.strip_prefix('^') {
                        Some(k) => k
                            .parse()
                            .map_err(|_| Error::Input(format!("invalid exponent in {t:?}")))?,
                        None if rest.is_empty() => 1,
                        None => return Err(Error::Input(format!("invalid term {t:?}"))),
                    };
                    i += 1;
                }
            }
            if coeffs.len() <= degree {
                coeffs.resize(degree + 1, BigRational::zero());
            }
            coeffs[degree] += &sign * coeff;
        }
        Ok(EpsPoly::new(coeffs))
    }
}

/// `numerator / denominator`, denominator positive and not divisible by `ε`
/// unless the numerator is zero.
#[derive(Clone, Debug)]
pub struct EpsilonNumber {
    num: EpsPoly,
    den: EpsPoly,
}

impl EpsilonNumber {
    pub fn new(num: EpsPoly, den: EpsPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Input("division by the zero polynomial".into()));
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: EpsPoly, den: EpsPoly) -> Self {
        let (mut num, mut den) = (num, den);
        if den.signum() < 0 {
            num = -&num;
            den = -&den;
        }
        let k = den.valuation().unwrap_or(0).min(num.valuation().unwrap_or(usize::MAX));
        if k > 0 {
            num = num.shift_down(k);
            den = den.shift_down(k);
        }
        if num.is_zero() {
            den = EpsPoly::constant(BigRational::one());
        }
        Self { num, den }
    }

    pub fn zero() -> Self {
        Self::from_poly(EpsPoly::default())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    /// The infinitesimal `ε` itself.
    pub fn eps() -> Self {
        Self::from_poly(EpsPoly::new(vec![BigRational::zero(), BigRational::one()]))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::from_poly(EpsPoly::constant(r))
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_poly(p: EpsPoly) -> Self {
        Self {
            num: p,
            den: EpsPoly::constant(BigRational::one()),
        }
    }

    pub fn numerator(&self) -> &EpsPoly {
        &self.num
    }

    pub fn denominator(&self) -> &EpsPoly {
        &self.den
    }

    /// The polynomial when the denominator is `1`.
    pub fn as_poly(&self) -> Option<&EpsPoly> {
        (self.den.0.len() == 1 && self.den.0[0].is_one()).then_some(&self.num)
    }

    /// The rational value when `self` has no `ε` terms.
    pub fn as_rational(&self) -> Option<BigRational> {
        let p = self.as_poly()?;
        match p.degree() {
            None => Some(BigRational::zero()),
            Some(0) => Some(p.0[0].clone()),
            Some(_) => None,
        }
    }

    pub fn signum(&self) -> i8 {
        self.num.signum()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    /// Value at `ε = 0` of the reduced ratio; `None` when infinite.
    pub fn standard_part(&self) -> Option<BigRational> {
        let Some(vn) = self.num.valuation() else {
            return Some(BigRational::zero());
        };
        let vd = self.den.valuation().expect("nonzero denominator");
        match vn.cmp(&vd) {
            Ordering::Greater => Some(BigRational::zero()),
            Ordering::Equal => Some(&self.num.0[vn] / &self.den.0[vd]),
            Ordering::Less => None,
        }
    }

    /// Nonzero and with standard part zero.
    pub fn is_infinitesimal(&self) -> bool {
        !self.is_zero() && self.standard_part().is_some_and(|s| s.is_zero())
    }

    pub fn checked_div(&self, rhs: &EpsilonNumber) -> Result<EpsilonNumber> {
        if rhs.is_zero() {
            return Err(Error::Input("division by zero".into()));
        }
        EpsilonNumber::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    /// Comparison through the sign of `other − self`.
    pub fn cmp_by_difference(&self, other: &EpsilonNumber) -> Ordering {
        match (other - self).signum() {
            1 => Ordering::Less,
            -1 => Ordering::Greater,
            _ => Ordering::Equal,
        }
    }
}

impl Add for &EpsilonNumber {
    type Output = EpsilonNumber;

    fn add(self, rhs: &EpsilonNumber) -> EpsilonNumber {
        if self.den == rhs.den {
            return EpsilonNumber::normalized(&self.num + &rhs.num, self.den.clone());
        }
        EpsilonNumber::normalized(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Neg for &EpsilonNumber {
    type Output = EpsilonNumber;

    fn neg(self) -> EpsilonNumber {
        EpsilonNumber {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Sub for &EpsilonNumber {
    type Output = EpsilonNumber;

    fn sub(self, rhs: &EpsilonNumber) -> EpsilonNumber {
        self + &(-rhs)
    }
}

impl Mul for &EpsilonNumber {
    type Output = EpsilonNumber;

    fn mul(self, rhs: &EpsilonNumber) -> EpsilonNumber {
        EpsilonNumber::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &EpsilonNumber {
    type Output = EpsilonNumber;

    /// Panics on division by zero; see [`EpsilonNumber::checked_div`].
    fn div(self, rhs: &EpsilonNumber) -> EpsilonNumber {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl PartialEq for EpsilonNumber {
    fn eq(&self, other: &Self) -> bool {
        (&self.num * &other.den) == (&other.num * &self.den)
    }
}

impl Eq for EpsilonNumber {}

impl PartialOrd for EpsilonNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for EpsilonNumber {
    /// Cross-multiplication; both denominators are positive.
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = &self.num * &other.den;
        let rhs = &other.num * &self.den;
        match (&lhs - &rhs).signum() {
            -1 => Ordering::Less,
            1 => Ordering::Greater,
            _ => Ordering::Equal,
        }
    }
}

impl fmt::Display for EpsilonNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_poly() {
            Some(p) => write!(f, "{p}"),
            None => write!(f, "({}) / ({})", self.num, self.den),
        }
    }
}

impl FromStr for EpsilonNumber {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        Ok(Self::from_poly(text.parse()?))
    }
}
