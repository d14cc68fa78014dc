use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

use super::VarPool;

/// A sparse multivariate polynomial over the integers.
///
/// Terms map exponent vectors (one entry per pool variable) to nonzero
/// big-integer coefficients. The `BTreeMap` keeps monomials in lexicographic
/// order of their exponent vectors; the last key is the leading monomial.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    pool: Arc<VarPool>,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl Polynomial {
    pub fn zero(pool: Arc<VarPool>) -> Self {
        Polynomial {
            pool,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(pool: Arc<VarPool>, c: BigInt) -> Self {
        let mut p = Self::zero(pool);
        if !c.is_zero() {
            p.terms.insert(vec![0; p.pool.len()], c);
        }
        p
    }

    pub fn one(pool: Arc<VarPool>) -> Self {
        Self::constant(pool, BigInt::one())
    }

    pub fn var(pool: Arc<VarPool>, idx: usize) -> Self {
        assert!(idx < pool.len(), "variable index out of pool");
        let mut expo = vec![0u32; pool.len()];
        expo[idx] = 1;
        let mut p = Self::zero(pool);
        p.terms.insert(expo, BigInt::one());
        p
    }

    pub fn pool(&self) -> &Arc<VarPool> {
        &self.pool
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// The constant value, if this polynomial is constant.
    pub fn as_constant(&self) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    fn insert_term(&mut self, expo: Vec<u32>, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(expo) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn assert_same_pool(&self, other: &Self) {
        debug_assert_eq!(self.pool, other.pool, "mixed variable pools");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_pool(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_pool(other);
        let mut out = Self::zero(self.pool.clone());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let expo: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.insert_term(expo, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.pool.clone());
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = &*v * c;
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.pool.clone());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Leading term under the lexicographic monomial order.
    pub fn leading(&self) -> Option<(&Vec<u32>, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff_sign_positive(&self) -> bool {
        self.leading().map(|(_, c)| c.is_positive()).unwrap_or(true)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// Gcd of all integer coefficients, non-negative.
    pub fn int_content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn div_int_exact(&self, d: &BigInt) -> Self {
        assert!(!d.is_zero());
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            let (q, r) = v.div_rem(d);
            assert!(r.is_zero(), "inexact integer division in polynomial");
            *v = q;
        }
        out
    }

    /// Exact multivariate division; returns `None` when the division leaves
    /// a remainder. This is long division by the lexicographic leading term.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        self.assert_same_pool(divisor);
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let mut quot = Self::zero(self.pool.clone());
        let (dexpo, dcoeff) = {
            let (e, c) = divisor.leading().unwrap();
            (e.clone(), c.clone())
        };
        while !rem.is_zero() {
            let (rexpo, rcoeff) = {
                let (e, c) = rem.leading().unwrap();
                (e.clone(), c.clone())
            };
            if rexpo.iter().zip(&dexpo).any(|(r, d)| r < d) {
                return None;
            }
            let (q, r) = rcoeff.div_rem(&dcoeff);
            if !r.is_zero() {
                return None;
            }
            let mexpo: Vec<u32> = rexpo.iter().zip(&dexpo).map(|(r, d)| r - d).collect();
            let mut mono = Self::zero(self.pool.clone());
            mono.terms.insert(mexpo, q);
            rem = rem.sub(&mono.mul(divisor));
            quot = quot.add(&mono);
        }
        Some(quot)
    }

    /// Evaluate at a point binding every pool variable.
    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.pool.len(), "point/pool length mismatch");
        let mut acc = BigRational::zero();
        for (expo, coeff) in &self.terms {
            let mut term = BigRational::from(coeff.clone());
            for (v, &e) in expo.iter().enumerate() {
                for _ in 0..e {
                    term *= &point[v];
                }
            }
            acc += term;
        }
        acc
    }

    /// Substitute `replacement` for variable `var`.
    pub fn substitute(&self, var: usize, replacement: &Self) -> Self {
        self.assert_same_pool(replacement);
        let mut out = Self::zero(self.pool.clone());
        // Cache powers of the replacement; degrees stay small here.
        let max_e = self.degree_in(var);
        let mut powers = Vec::with_capacity(max_e as usize + 1);
        powers.push(Self::one(self.pool.clone()));
        for e in 1..=max_e {
            powers.push(powers[(e - 1) as usize].mul(replacement));
        }
        for (expo, coeff) in &self.terms {
            let mut rest = expo.clone();
            let e = rest[var];
            rest[var] = 0;
            let mut mono = Self::zero(self.pool.clone());
            mono.terms.insert(rest, coeff.clone());
            out = out.add(&mono.mul(&powers[e as usize]));
        }
        out
    }

    /// Extract dense coefficients with respect to one variable: entry `d`
    /// is the coefficient polynomial of `var^d` (with `var` zeroed out).
    fn coeffs_in(&self, var: usize) -> Vec<Polynomial> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![Self::zero(self.pool.clone()); deg + 1];
        for (expo, coeff) in &self.terms {
            let d = expo[var] as usize;
            let mut e = expo.clone();
            e[var] = 0;
            out[d].insert_term(e, coeff.clone());
        }
        out
    }

    fn from_coeffs_in(pool: &Arc<VarPool>, var: usize, coeffs: &[Polynomial]) -> Polynomial {
        let mut out = Self::zero(pool.clone());
        for (d, c) in coeffs.iter().enumerate() {
            for (expo, coeff) in &c.terms {
                let mut e = expo.clone();
                e[var] += d as u32;
                out.insert_term(e, coeff.clone());
            }
        }
        out
    }

    /// Content with respect to one variable: gcd of the `var`-coefficients.
    fn content_in(&self, var: usize) -> Polynomial {
        let coeffs = self.coeffs_in(var);
        let mut g = Self::zero(self.pool.clone());
        for c in coeffs.iter().filter(|c| !c.is_zero()) {
            g = Self::gcd(&g, c);
        }
        g
    }

    /// Pseudo-remainder of `a` by `b` viewed in `var`: computes
    /// `lc(b)^(da-db+1) * a  mod  b` without leaving the polynomial ring.
    fn pseudo_rem(a: &Polynomial, b: &Polynomial, var: usize) -> Polynomial {
        let db = b.degree_in(var) as usize;
        let bc = b.coeffs_in(var);
        let lc_b = bc[db].clone();
        let mut rc = a.coeffs_in(var);
        loop {
            while rc.last().map(|c| c.is_zero()).unwrap_or(false) {
                rc.pop();
            }
            if rc.len() <= db {
                break;
            }
            let dr = rc.len() - 1;
            let top = rc[dr].clone();
            for c in rc.iter_mut() {
                *c = c.mul(&lc_b);
            }
            for j in 0..=db {
                rc[dr - db + j] = rc[dr - db + j].sub(&bc[j].mul(&top));
            }
            debug_assert!(rc[dr].is_zero());
            rc.pop();
        }
        Self::from_coeffs_in(&a.pool, var, &rc)
    }

    /// Multivariate gcd by content/primitive-part recursion with a primitive
    /// pseudo-remainder sequence in the chosen main variable. The result has
    /// a positive leading coefficient.
    pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
        let g = Self::gcd_inner(a, b);
        if g.leading_coeff_sign_positive() {
            g
        } else {
            g.neg()
        }
    }

    fn gcd_inner(a: &Polynomial, b: &Polynomial) -> Polynomial {
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        if a.is_constant() || b.is_constant() {
            let g = a.int_content().gcd(&b.int_content());
            return Self::constant(a.pool.clone(), g);
        }
        // Main variable: lowest index occurring in either operand.
        let var = (0..a.pool.len())
            .find(|&v| a.degree_in(v) > 0 || b.degree_in(v) > 0)
            .expect("non-constant polynomial without variables");
        if a.degree_in(var) == 0 {
            return Self::gcd_inner(a, &b.content_in(var));
        }
        if b.degree_in(var) == 0 {
            return Self::gcd_inner(&a.content_in(var), b);
        }
        let ca = a.content_in(var);
        let cb = b.content_in(var);
        let content_gcd = Self::gcd_inner(&ca, &cb);
        let mut p = a.div_exact(&ca).expect("content divides");
        let mut q = b.div_exact(&cb).expect("content divides");
        if p.degree_in(var) < q.degree_in(var) {
            std::mem::swap(&mut p, &mut q);
        }
        loop {
            let r = Self::pseudo_rem(&p, &q, var);
            if r.is_zero() {
                break;
            }
            if r.degree_in(var) == 0 {
                // Primitive parts are coprime in `var`.
                q = Self::one(a.pool.clone());
                break;
            }
            let rc = r.content_in(var);
            p = q;
            q = r.div_exact(&rc).expect("content divides");
        }
        let pq = if q.is_constant() {
            Self::one(a.pool.clone())
        } else {
            let cq = q.content_in(var);
            q.div_exact(&cq).expect("content divides")
        };
        content_gcd.mul(&pq)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        // Descending lexicographic order for a stable, readable form.
        for (expo, coeff) in self.terms.iter().rev() {
            let negative = coeff.is_negative();
            let abs = coeff.abs();
            if first {
                if negative {
                    write!(f, "-")?;
                }
                first = false;
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || expo.iter().all(|&e| e == 0) {
                factors.push(abs.to_string());
            }
            for (v, &e) in expo.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.pool.name(v).to_owned()),
                    _ => factors.push(format!("{}^{}", self.pool.name(v), e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
