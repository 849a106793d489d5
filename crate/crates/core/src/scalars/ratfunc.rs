//! Rational functions in the time parameters, in canonical reduced form.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Zero};

use super::poly::MPoly;
use super::{ParamId, Rational, ScalarError};

/// Element of the field of rational functions in the declared time
/// parameters, with exact rational coefficients.
///
/// Canonical form: the denominator is monic under the graded-lexicographic
/// order, `gcd(num, den) = 1`, and zero is stored as `0/1`. Equality of
/// representations is therefore equality of field elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scalar {
    num: MPoly,
    den: MPoly,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            num: MPoly::zero(),
            den: MPoly::one(),
        }
    }

    pub fn one() -> Self {
        Scalar::from_rational(Rational::one())
    }

    pub fn from_rational(c: Rational) -> Self {
        Scalar {
            num: MPoly::constant(c),
            den: MPoly::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(Rational::from_integer(n.into()))
    }

    pub fn var(id: ParamId) -> Self {
        Scalar {
            num: MPoly::var(id),
            den: MPoly::one(),
        }
    }

    pub fn from_poly(num: MPoly) -> Self {
        Scalar {
            num,
            den: MPoly::one(),
        }
    }

    /// Build `num/den` in canonical form.
    pub fn from_fraction(num: MPoly, den: MPoly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: MPoly, den: MPoly) -> Self {
        if num.is_zero() {
            return Scalar::zero();
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_constant() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides"),
                den.div_exact(&g).expect("gcd divides"),
            )
        };
        // make the denominator monic
        let lc = den.leading().expect("nonzero").1.clone();
        if !lc.is_one() {
            let inv = Rational::one() / lc;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Scalar { num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num == MPoly::one()
    }

    pub fn numerator(&self) -> &MPoly {
        &self.num
    }

    pub fn denominator(&self) -> &MPoly {
        &self.den
    }

    /// The value as a plain rational, if parameter-free.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.num.is_constant() && self.den.is_constant() {
            Some(self.num.constant_term() / self.den.constant_term())
        } else {
            None
        }
    }

    pub fn inverse(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::reduced(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self * &rhs.inverse()?)
    }

    /// Formal partial derivative by the quotient rule.
    pub fn partial(&self, v: ParamId) -> Scalar {
        let dn = self.num.derivative(v);
        let dd = self.den.derivative(v);
        // (n/d)' = (n'd - nd') / d^2
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        let den = &self.den * &self.den;
        Self::reduced(num, den)
    }

    /// Exact evaluation at a point of the parameter space.
    ///
    /// The assignment must cover every parameter actually appearing and
    /// must not annihilate the denominator.
    pub fn evaluate(&self, assignment: &BTreeMap<ParamId, Rational>) -> Result<Rational, ScalarError> {
        let max = self
            .num
            .max_var()
            .into_iter()
            .chain(self.den.max_var())
            .max_by_key(|p| p.0);
        let mut values = Vec::new();
        if let Some(m) = max {
            for i in 0..=m.0 {
                let id = ParamId(i);
                match assignment.get(&id) {
                    Some(v) => values.push(v.clone()),
                    None => {
                        if appears(&self.num, id) || appears(&self.den, id) {
                            return Err(ScalarError::UnknownParameter(id.to_string()));
                        }
                        values.push(Rational::zero());
                    }
                }
            }
        }
        let den = self.den.evaluate(&values).expect("covered");
        if den.is_zero() {
            return Err(ScalarError::EvaluationPole);
        }
        let num = self.num.evaluate(&values).expect("covered");
        Ok(num / den)
    }

    pub fn scale_rational(&self, c: &Rational) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }
}

fn appears(p: &MPoly, v: ParamId) -> bool {
    p.terms().any(|(m, _)| m.exponent(v) > 0)
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        // n1/d1 + n2/d2 = (n1 d2 + n2 d1) / (d1 d2)
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        let den = &self.den * &rhs.den;
        Scalar::reduced(num, den)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let num = &(&self.num * &rhs.den) - &(&rhs.num * &self.den);
        let den = &self.den * &rhs.den;
        Scalar::reduced(num, den)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let num = &self.num * &rhs.num;
        let den = &self.den * &rhs.den;
        Scalar::reduced(num, den)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl From<Rational> for Scalar {
    fn from(c: Rational) -> Self {
        Scalar::from_rational(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, rat_int};

    fn t(i: usize) -> Scalar {
        Scalar::var(ParamId(i))
    }

    fn inv(x: &Scalar) -> Scalar {
        x.inverse().unwrap()
    }

    #[test]
    fn antisymmetric_sum_cancels() {
        // 1/(t1-t2) + 1/(t2-t1) = 0
        let a = inv(&(&t(0) - &t(1)));
        let b = inv(&(&t(1) - &t(0)));
        assert!((&a + &b).is_zero());
    }

    #[test]
    fn rational_product() {
        let half = Scalar::from_rational(rat(1, 2));
        let two_thirds = Scalar::from_rational(rat(2, 3));
        assert_eq!(&half * &two_thirds, Scalar::from_rational(rat(1, 3)));
    }

    #[test]
    fn difference_of_squares_reduces() {
        // (t1^2 - t2^2)/(t1 - t2) -> t1 + t2, checked against long division
        let num = &(&t(0) * &t(0)) - &(&t(1) * &t(1));
        let den = &t(0) - &t(1);
        let q = num.div(&den).unwrap();
        assert_eq!(q, &t(0) + &t(1));
        // independent oracle: univariate long division in t1 over Q[t2]
        let oracle = long_division_oracle();
        assert_eq!(q, oracle);
    }

    // Divides t1^2 - t2^2 by t1 - t2 as univariate polynomials in t1 with
    // coefficients in Q[t2], by schoolbook long division.
    fn long_division_oracle() -> Scalar {
        // dividend coefficients by power of t1: [ -t2^2, 0, 1 ]
        // divisor: [ -t2, 1 ]
        let t2 = t(1);
        let mut dividend = vec![&(-&t2) * &t2, Scalar::zero(), Scalar::one()];
        let divisor = [-&t2, Scalar::one()];
        let mut quotient = vec![Scalar::zero(); 2];
        for k in (1..=2).rev() {
            let c = dividend[k].clone();
            quotient[k - 1] = c.clone();
            for (j, d) in divisor.iter().enumerate() {
                let idx = k - 1 + j;
                dividend[idx] = &dividend[idx] - &(&c * d);
            }
        }
        assert!(dividend.iter().all(Scalar::is_zero), "division not exact");
        // quotient = 1*t1 + t2
        &(&quotient[1] * &t(0)) + &quotient[0]
    }

    #[test]
    fn partial_derivative_quotient_rule() {
        // d/dt1 1/(t1 - t2) = -1/(t1-t2)^2
        let f = inv(&(&t(0) - &t(1)));
        let df = f.partial(ParamId(0));
        let d = &t(0) - &t(1);
        let expect = -&inv(&(&d * &d));
        assert_eq!(df, expect);
        // constants and cross terms
        assert!(Scalar::from_int(7).partial(ParamId(0)).is_zero());
        assert_eq!((&t(0) * &t(1)).partial(ParamId(1)), t(0));
    }

    #[test]
    fn partials_commute() {
        let f = inv(&(&(&t(0) * &t(1)) - &t(2)));
        let a = f.partial(ParamId(0)).partial(ParamId(1));
        let b = f.partial(ParamId(1)).partial(ParamId(0));
        assert_eq!(a, b);
    }

    #[test]
    fn evaluation() {
        let f = inv(&(&t(0) - &t(1)));
        let mut asg = BTreeMap::new();
        asg.insert(ParamId(0), rat_int(3));
        asg.insert(ParamId(1), rat_int(1));
        assert_eq!(f.evaluate(&asg).unwrap(), rat(1, 2));

        let sum = &t(0) + &t(1);
        let mut zeros = BTreeMap::new();
        zeros.insert(ParamId(0), rat_int(0));
        zeros.insert(ParamId(1), rat_int(0));
        assert_eq!(sum.evaluate(&zeros).unwrap(), rat_int(0));

        let mut diag = BTreeMap::new();
        diag.insert(ParamId(0), rat_int(1));
        diag.insert(ParamId(1), rat_int(1));
        assert_eq!(f.evaluate(&diag), Err(ScalarError::EvaluationPole));

        let mut partial = BTreeMap::new();
        partial.insert(ParamId(0), rat_int(1));
        assert!(matches!(
            f.evaluate(&partial),
            Err(ScalarError::UnknownParameter(_))
        ));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(
            Scalar::one().div(&Scalar::zero()),
            Err(ScalarError::DivisionByZero)
        );
    }

    #[test]
    fn canonical_form_is_unique() {
        // 2t/2 and t canonicalise identically
        let two_t = Scalar::from_fraction(
            MPoly::var(ParamId(0)).scale(&rat_int(2)),
            MPoly::constant(rat_int(2)),
        )
        .unwrap();
        assert_eq!(two_t, t(0));
    }
}
