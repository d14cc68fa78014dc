use std::fmt;
use std::sync::Arc;

use num::{BigInt, BigRational, One, Zero};
use serde::{Serialize, Serializer};

use super::{CoeffError, Polynomial, VarPool};

/// A rational function in canonical form: numerator and denominator are
/// coprime and the denominator has a positive leading coefficient under the
/// fixed monomial order. Canonical form makes equality structural.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    /// Canonicalize `num/den`. Rejects an identically zero denominator.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, CoeffError> {
        if den.is_zero() {
            return Err(CoeffError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RationalFunction {
                den: Polynomial::one(num.pool().clone()),
                num,
            });
        }
        let g = Polynomial::gcd(&num, &den);
        let mut num = num.div_exact(&g).expect("gcd divides numerator");
        let mut den = den.div_exact(&g).expect("gcd divides denominator");
        if !den.leading_coeff_sign_positive() {
            num = num.neg();
            den = den.neg();
        }
        Ok(RationalFunction { num, den })
    }

    pub fn from_poly(num: Polynomial) -> Self {
        let den = Polynomial::one(num.pool().clone());
        RationalFunction { num, den }
    }

    pub fn zero(pool: Arc<VarPool>) -> Self {
        Self::from_poly(Polynomial::zero(pool))
    }

    pub fn one(pool: Arc<VarPool>) -> Self {
        Self::from_poly(Polynomial::one(pool))
    }

    pub fn from_int(pool: Arc<VarPool>, n: i64) -> Self {
        Self::from_poly(Polynomial::constant(pool, BigInt::from(n)))
    }

    pub fn from_ratio(pool: Arc<VarPool>, num: i64, den: i64) -> Self {
        assert!(den != 0);
        Self::new(
            Polynomial::constant(pool.clone(), BigInt::from(num)),
            Polynomial::constant(pool, BigInt::from(den)),
        )
        .unwrap()
    }

    pub fn from_rational(pool: Arc<VarPool>, q: BigRational) -> Self {
        Self::new(
            Polynomial::constant(pool.clone(), q.numer().clone()),
            Polynomial::constant(pool, q.denom().clone()),
        )
        .unwrap()
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn pool(&self) -> &Arc<VarPool> {
        self.num.pool()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// True when the denominator is 1, i.e. the value is a polynomial.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant() && self.den.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match (self.num.as_constant(), self.den.as_constant()) {
            (Some(n), Some(d)) => Some(BigRational::new(n, d)),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.is_polynomial() && other.is_polynomial() {
            return Self::from_poly(self.num.add(&other.num));
        }
        Self::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
        .expect("nonzero denominators")
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.pool().clone());
        }
        if self.is_polynomial() && other.is_polynomial() {
            return Self::from_poly(self.num.mul(&other.num));
        }
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("nonzero denominators")
    }

    pub fn div(&self, other: &Self) -> Result<Self, CoeffError> {
        if other.is_zero() {
            return Err(CoeffError::ZeroDenominator);
        }
        Self::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn inv(&self) -> Result<Self, CoeffError> {
        Self::one(self.pool().clone()).div(self)
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.mul(&Self::from_int(self.pool().clone(), c))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.pool().clone());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact evaluation with every pool variable bound.
    pub fn eval(&self, point: &[BigRational]) -> Result<BigRational, CoeffError> {
        if point.len() != self.pool().len() {
            return Err(CoeffError::UnboundVariable {
                expected: self.pool().len(),
                got: point.len(),
            });
        }
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(CoeffError::PoleAtPoint);
        }
        Ok(self.num.eval(point) / d)
    }

    /// Substitute a polynomial for one variable, renormalizing.
    pub fn substitute_poly(&self, var: usize, replacement: &Polynomial) -> Self {
        Self::new(
            self.num.substitute(var, replacement),
            self.den.substitute(var, replacement),
        )
        .expect("substitution kept denominator nonzero")
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for RationalFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::super::pool::PoolScalars;
    use super::*;

    fn mk() -> (Arc<VarPool>, RationalFunction, RationalFunction) {
        let pool = VarPool::verma();
        let m = pool.var("m");
        let k = pool.var("k");
        (pool, m, k)
    }

    #[test]
    fn normalize_cancels_common_factor() {
        let (_, m, k) = mk();
        // (m^2 - k^2)/(m - k) -> m + k
        let num = m.mul(&m).sub(&k.mul(&k));
        let den = m.sub(&k);
        let r = RationalFunction::new(num.numerator().clone(), den.numerator().clone()).unwrap();
        assert_eq!(r, m.add(&k));
        assert!(r.is_polynomial());
    }

    #[test]
    fn normalize_zero_numerator() {
        let (pool, _, k) = mk();
        let r = RationalFunction::new(
            Polynomial::zero(pool.clone()),
            k.add(&pool.int(2)).numerator().clone(),
        )
        .unwrap();
        assert!(r.is_zero());
        assert!(r.is_polynomial());
    }

    #[test]
    fn normalize_rejects_zero_denominator() {
        let (pool, m, _) = mk();
        let err = RationalFunction::new(m.numerator().clone(), Polynomial::zero(pool));
        assert_eq!(err.unwrap_err(), CoeffError::ZeroDenominator);
    }

    #[test]
    fn normalize_is_idempotent() {
        let (_, m, k) = mk();
        // (2mk + 2m)/(2m) -> k + 1, derived by expand-and-divide oracle:
        // (2mk + 2m) = (2m)(k + 1) exactly.
        let num = m.mul(&k).scale_int(2).add(&m.scale_int(2));
        let den = m.scale_int(2);
        let r = RationalFunction::new(num.numerator().clone(), den.numerator().clone()).unwrap();
        let expected = k.add(&RationalFunction::from_int(k.pool().clone(), 1));
        assert_eq!(r, expected);
        let renorm =
            RationalFunction::new(r.numerator().clone(), r.denominator().clone()).unwrap();
        assert_eq!(renorm, r);
        // Oracle: multiply back.
        assert_eq!(expected.mul(&den), num);
    }

    #[test]
    fn eval_examples() {
        let (pool, m, k) = mk();
        // a = 1 literal: m + (a-1)(k+2) = m, at m = 5 -> 5
        let a = 1i64;
        let expr = m.add(&k.add(&pool.int(2)).scale_int(a - 1));
        let point = [BigRational::from(BigInt::from(5)), BigRational::zero()];
        assert_eq!(expr.eval(&point).unwrap(), BigRational::from(BigInt::from(5)));

        // kappa = k + 2 at k = -2 -> 0
        let kappa = k.add(&pool.int(2));
        let at = [BigRational::zero(), BigRational::from(BigInt::from(-2))];
        assert!(kappa.eval(&at).unwrap().is_zero());

        // (m+k)/(m-k) at m=3, k=1 -> 2 (hand arithmetic)
        let r = m.add(&k).div(&m.sub(&k)).unwrap();
        let at = [
            BigRational::from(BigInt::from(3)),
            BigRational::from(BigInt::from(1)),
        ];
        assert_eq!(r.eval(&at).unwrap(), BigRational::from(BigInt::from(2)));
    }

    #[test]
    fn eval_errors_are_distinct() {
        let (pool, m, k) = mk();
        let r = m.add(&k).div(&m.sub(&k)).unwrap();
        let pole = [BigRational::one(), BigRational::one()];
        assert_eq!(r.eval(&pole).unwrap_err(), CoeffError::PoleAtPoint);
        let unbound = [BigRational::one()];
        assert_eq!(
            r.eval(&unbound).unwrap_err(),
            CoeffError::UnboundVariable {
                expected: 2,
                got: 1
            }
        );
        let _ = pool;
    }

    #[test]
    fn gcd_divisibility() {
        let (pool, m, k) = mk();
        let g = m.add(&k.scale_int(2)).numerator().clone();
        let p = m.mul(&m).sub(&k).numerator().clone();
        let q = k.mul(&k).add(&m.scale_int(3)).add(&pool.int(1)).numerator().clone();
        let gg = Polynomial::gcd(&p.mul(&g), &q.mul(&g));
        assert!(gg.div_exact(&g).is_some(), "gcd must be divisible by g");
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        /// Small random polynomials over {m, k}.
        fn arb_poly() -> impl Strategy<Value = Polynomial> {
            proptest::collection::vec(((0u32..=2, 0u32..=2), -4i64..=4), 0..4).prop_map(|terms| {
                let pool = VarPool::verma();
                let mut p = Polynomial::zero(pool.clone());
                for ((em, ek), c) in terms {
                    let mono = Polynomial::var(pool.clone(), 0)
                        .pow(em)
                        .mul(&Polynomial::var(pool.clone(), 1).pow(ek))
                        .scale(&num::BigInt::from(c));
                    p = p.add(&mono);
                }
                p
            })
        }

        fn arb_ratfun() -> impl Strategy<Value = RationalFunction> {
            (arb_poly(), arb_poly()).prop_map(|(n, d)| {
                if d.is_zero() {
                    RationalFunction::from_poly(n)
                } else {
                    RationalFunction::new(n, d).unwrap()
                }
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(1000))]

            #[test]
            fn ring_distributivity(a in arb_ratfun(), b in arb_ratfun(), c in arb_ratfun()) {
                prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
            }
        }

        proptest! {
            #[test]
            fn normalize_idempotent_and_eval_compatible(n in arb_poly(), d in arb_poly()) {
                prop_assume!(!d.is_zero());
                let r = RationalFunction::new(n.clone(), d.clone()).unwrap();
                let again = RationalFunction::new(r.numerator().clone(), r.denominator().clone()).unwrap();
                prop_assert_eq!(&again, &r);
                // eval(normalize(x)) = eval(x) wherever both are defined.
                let point = [
                    BigRational::new(num::BigInt::from(3), num::BigInt::from(2)),
                    BigRational::new(num::BigInt::from(-5), num::BigInt::from(7)),
                ];
                let dv = d.eval(&point);
                if !dv.is_zero() && !r.denominator().eval(&point).is_zero() {
                    prop_assert_eq!(r.eval(&point).unwrap(), n.eval(&point) / dv);
                }
            }

            #[test]
            fn gcd_divides_products(p in arb_poly(), q in arb_poly(), g in arb_poly()) {
                prop_assume!(!g.is_zero());
                let gg = Polynomial::gcd(&p.mul(&g), &q.mul(&g));
                if !p.is_zero() || !q.is_zero() {
                    prop_assert!(gg.div_exact(&g).is_some());
                }
            }

            #[test]
            fn mul_commutes_and_assoc(a in arb_ratfun(), b in arb_ratfun(), c in arb_ratfun()) {
                prop_assert_eq!(a.mul(&b), b.mul(&a));
                prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            }
        }
    }

    #[test]
    fn display_is_canonical() {
        let (pool, m, k) = mk();
        let r = m
            .mul(&m)
            .sub(&k.scale_int(2))
            .div(&k.add(&pool.int(2)))
            .unwrap();
        assert_eq!(r.to_string(), "(m^2 - 2*k)/(k + 2)");
        assert_eq!(m.to_string(), "m");
        assert_eq!(pool.int(-7).to_string(), "-7");
    }
}
