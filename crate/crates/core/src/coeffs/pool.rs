use std::fmt;
use std::sync::Arc;

use num::BigRational;

use super::{Polynomial, RationalFunction};

/// A fixed, ordered set of variable names shared by all scalars of a
/// computation session.
///
/// Exponent vectors of [`Polynomial`] terms are indexed by position in the
/// pool, so keeping the pool small keeps canonical forms fast. The pool may
/// be empty, in which case every scalar is a plain rational number.
#[derive(Debug, PartialEq, Eq)]
pub struct VarPool {
    names: Vec<String>,
}

impl VarPool {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Arc<Self> {
        Arc::new(VarPool {
            names: names.iter().map(|s| s.as_ref().to_owned()).collect(),
        })
    }

    /// Pool `{m, k}` used by Verma-side sessions.
    pub fn verma() -> Arc<Self> {
        Self::new(&["m", "k"])
    }

    /// The empty pool: scalars are exact rational constants.
    pub fn constants() -> Arc<Self> {
        Self::new::<&str>(&[])
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Convenience constructors, callable as `pool.var("m")`, `pool.int(2)`, ...
pub trait PoolScalars {
    fn var(&self, name: &str) -> RationalFunction;
    fn int(&self, n: i64) -> RationalFunction;
    fn ratio(&self, num: i64, den: i64) -> RationalFunction;
    fn rational(&self, q: &BigRational) -> RationalFunction;
    fn poly_var(&self, name: &str) -> Polynomial;
}

impl PoolScalars for Arc<VarPool> {
    fn var(&self, name: &str) -> RationalFunction {
        RationalFunction::from_poly(self.poly_var(name))
    }

    fn int(&self, n: i64) -> RationalFunction {
        RationalFunction::from_int(self.clone(), n)
    }

    fn ratio(&self, num: i64, den: i64) -> RationalFunction {
        RationalFunction::from_ratio(self.clone(), num, den)
    }

    fn rational(&self, q: &BigRational) -> RationalFunction {
        RationalFunction::from_rational(self.clone(), q.clone())
    }

    fn poly_var(&self, name: &str) -> Polynomial {
        let idx = self
            .index(name)
            .unwrap_or_else(|| panic!("variable `{name}` not in pool"));
        Polynomial::var(self.clone(), idx)
    }
}

impl fmt::Display for VarPool {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.names.join(", "))
    }
}
