//! The twisted de Rham complex on the line punctured at `z_1, ..., z_n`:
//! basis-indexed function and form spaces, the twisted differential, a
//! finite truncation window, cohomology ranks, resonance detection, and
//! primitives certifying cohomological relations.
//!
//! Functions are spanned by `1/(t-z_i)^a` (a >= 1) and `t^a` (a >= 0);
//! one-forms by the corresponding `dt`-multiples. The differential is
//!
//! ```text
//! kappa d(1/(t-z_i)^a) = -(m_i + a kappa) dt/(t-z_i)^(a+1)
//!     + sum_{k=1..a} sum_{j != i} m_j/(z_j-z_i)^k dt/(t-z_i)^(a+1-k)
//!     - sum_{j != i} m_j/(z_j-z_i)^a dt/(t-z_j)
//!
//! kappa d(t^a) = (a kappa - sum_j m_j) t^(a-1) dt
//!     - sum_{k=1..a-1} sum_j m_j z_j^k t^(a-1-k) dt
//!     - sum_j m_j z_j^a dt/(t-z_j)
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::coeffs::{RationalFunction, VarPool};
use crate::linalg;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerhamError {
    #[error("kappa = 0: the twisted de Rham complex is not defined")]
    KappaZero,
    #[error("the marked points z_i must be pairwise distinct")]
    PointsNotDistinct,
    #[error("expected one weight per marked point")]
    WeightCountMismatch,
}

/// Parameters of the master function: marked points `z_1..z_n`, weights
/// `m_1..m_n`, and the twist `kappa`; the weight at infinity is derived as
/// `m_1 + ... + m_n - 2`.
#[derive(Clone, Debug)]
pub struct MasterConfig {
    pool: Arc<VarPool>,
    z: Vec<RationalFunction>,
    weights: Vec<RationalFunction>,
    kappa: RationalFunction,
}

impl MasterConfig {
    pub fn new(
        pool: Arc<VarPool>,
        z: Vec<RationalFunction>,
        weights: Vec<RationalFunction>,
        kappa: RationalFunction,
    ) -> Result<Self, DerhamError> {
        if z.len() != weights.len() || z.is_empty() {
            return Err(DerhamError::WeightCountMismatch);
        }
        if kappa.is_zero() {
            return Err(DerhamError::KappaZero);
        }
        for i in 0..z.len() {
            for j in i + 1..z.len() {
                if z[i].sub(&z[j]).is_zero() {
                    return Err(DerhamError::PointsNotDistinct);
                }
            }
        }
        Ok(MasterConfig {
            pool,
            z,
            weights,
            kappa,
        })
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn pool(&self) -> &Arc<VarPool> {
        &self.pool
    }

    pub fn z(&self, i: usize) -> &RationalFunction {
        &self.z[i]
    }

    pub fn weight(&self, i: usize) -> &RationalFunction {
        &self.weights[i]
    }

    pub fn kappa(&self) -> &RationalFunction {
        &self.kappa
    }

    /// `m_{n+1} = m_1 + ... + m_n - 2`.
    pub fn weight_infinity(&self) -> RationalFunction {
        self.weights
            .iter()
            .fold(RationalFunction::from_int(self.pool.clone(), -2), |acc, w| {
                acc.add(w)
            })
    }

    pub fn weight_sum(&self) -> RationalFunction {
        self.weights
            .iter()
            .fold(RationalFunction::zero(self.pool.clone()), |acc, w| acc.add(w))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Grade {
    Zero,
    One,
}

/// One basis function (or form, depending on grade): a pole at a marked
/// point or a monomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisFn {
    /// `1/(t - z_i)^a`, point index 0-based, `a >= 1`.
    Pole(usize, u32),
    /// `t^a`, `a >= 0`.
    Poly(u32),
}

/// A sparse combination of basis functions (grade 0) or forms (grade 1).
#[derive(Clone, PartialEq, Eq)]
pub struct DeRhamElement {
    grade: Grade,
    terms: BTreeMap<BasisFn, RationalFunction>,
}

impl DeRhamElement {
    pub fn zero(grade: Grade) -> Self {
        DeRhamElement {
            grade,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(pool: &Arc<VarPool>, grade: Grade, f: BasisFn) -> Self {
        if let BasisFn::Pole(_, a) = f {
            assert!(a >= 1, "pole order must be positive");
        }
        let mut el = Self::zero(grade);
        el.add_term(f, RationalFunction::one(pool.clone()));
        el
    }

    /// The constant function 1.
    pub fn one(pool: &Arc<VarPool>) -> Self {
        Self::basis(pool, Grade::Zero, BasisFn::Poly(0))
    }

    /// The logarithmic form `dt/(t - z_i)`.
    pub fn omega(pool: &Arc<VarPool>, i: usize) -> Self {
        Self::basis(pool, Grade::One, BasisFn::Pole(i, 1))
    }

    pub fn grade(&self) -> Grade {
        self.grade
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisFn, &RationalFunction)> {
        self.terms.iter()
    }

    pub fn coeff(&self, f: &BasisFn) -> Option<&RationalFunction> {
        self.terms.get(f)
    }

    pub fn add_term(&mut self, f: BasisFn, coeff: RationalFunction) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(f) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().add(&coeff);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.grade, other.grade, "grade mismatch");
        let mut out = self.clone();
        for (f, c) in &other.terms {
            out.add_term(*f, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn scale(&self, c: &RationalFunction) -> Self {
        if c.is_zero() {
            return Self::zero(self.grade);
        }
        let mut out = Self::zero(self.grade);
        for (f, v) in &self.terms {
            out.add_term(*f, v.mul(c));
        }
        out
    }

    /// Retag a function as a form: multiplication by `dt`.
    pub fn into_form(mut self) -> Self {
        assert_eq!(self.grade, Grade::Zero);
        self.grade = Grade::One;
        self
    }
}

impl fmt::Display for DeRhamElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let dt = match self.grade {
            Grade::Zero => "",
            Grade::One => " dt",
        };
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(b, c)| match b {
                BasisFn::Pole(i, a) if *a == 1 => format!("({c})/(t-z{}){dt}", i + 1),
                BasisFn::Pole(i, a) => format!("({c})/(t-z{})^{a}{dt}", i + 1),
                BasisFn::Poly(0) => format!("({c}){dt}"),
                BasisFn::Poly(1) => format!("({c})*t{dt}"),
                BasisFn::Poly(a) => format!("({c})*t^{a}{dt}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for DeRhamElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The logarithmic derivative `alpha = -(1/kappa) sum m_i dt/(t-z_i)`.
pub fn alpha(cfg: &MasterConfig) -> DeRhamElement {
    alpha_function(cfg).into_form()
}

fn alpha_function(cfg: &MasterConfig) -> DeRhamElement {
    let mut out = DeRhamElement::zero(Grade::Zero);
    for i in 0..cfg.n() {
        let c = cfg
            .weight(i)
            .div(cfg.kappa())
            .expect("kappa is nonzero")
            .neg();
        out.add_term(BasisFn::Pole(i, 1), c);
    }
    out
}

/// The twisted differential, transcribed basis function by basis function.
pub fn differential(cfg: &MasterConfig, x: &DeRhamElement) -> DeRhamElement {
    assert_eq!(x.grade(), Grade::Zero, "the differential starts in grade 0");
    let kappa = cfg.kappa();
    let mut out = DeRhamElement::zero(Grade::One);
    for (&f, coeff) in x.terms() {
        let scaled = coeff.div(kappa).expect("kappa is nonzero");
        match f {
            BasisFn::Pole(i, a) => {
                let mi = cfg.weight(i);
                let lead = mi.add(&kappa.scale_int(a as i64)).neg();
                out.add_term(BasisFn::Pole(i, a + 1), lead.mul(&scaled));
                for k in 1..=a {
                    for j in (0..cfg.n()).filter(|&j| j != i) {
                        let dz = cfg.z(j).sub(cfg.z(i));
                        let c = cfg
                            .weight(j)
                            .div(&dz.pow(k))
                            .expect("marked points are distinct");
                        out.add_term(BasisFn::Pole(i, a + 1 - k), c.mul(&scaled));
                    }
                }
                for j in (0..cfg.n()).filter(|&j| j != i) {
                    let dz = cfg.z(j).sub(cfg.z(i));
                    let c = cfg
                        .weight(j)
                        .div(&dz.pow(a))
                        .expect("marked points are distinct")
                        .neg();
                    out.add_term(BasisFn::Pole(j, 1), c.mul(&scaled));
                }
            }
            BasisFn::Poly(a) => {
                if a >= 1 {
                    let lead = kappa.scale_int(a as i64).sub(&cfg.weight_sum());
                    out.add_term(BasisFn::Poly(a - 1), lead.mul(&scaled));
                }
                for k in 1..a {
                    let mut c = RationalFunction::zero(cfg.pool().clone());
                    for j in 0..cfg.n() {
                        c = c.add(&cfg.weight(j).mul(&cfg.z(j).pow(k)));
                    }
                    out.add_term(BasisFn::Poly(a - 1 - k), c.neg().mul(&scaled));
                }
                for j in 0..cfg.n() {
                    let c = cfg.weight(j).mul(&cfg.z(j).pow(a)).neg();
                    out.add_term(BasisFn::Pole(j, 1), c.mul(&scaled));
                }
            }
        }
    }
    out
}

/// The untwisted de Rham differential.
pub fn plain_d(x: &DeRhamElement) -> DeRhamElement {
    assert_eq!(x.grade(), Grade::Zero);
    let mut out = DeRhamElement::zero(Grade::One);
    for (&f, coeff) in x.terms() {
        match f {
            BasisFn::Pole(i, a) => {
                out.add_term(BasisFn::Pole(i, a + 1), coeff.scale_int(-(a as i64)));
            }
            BasisFn::Poly(a) if a >= 1 => {
                out.add_term(BasisFn::Poly(a - 1), coeff.scale_int(a as i64));
            }
            BasisFn::Poly(_) => {}
        }
    }
    out
}

fn mul_by_t(cfg: &MasterConfig, x: &DeRhamElement) -> DeRhamElement {
    let mut out = DeRhamElement::zero(Grade::Zero);
    for (&f, c) in x.terms() {
        match f {
            BasisFn::Poly(a) => out.add_term(BasisFn::Poly(a + 1), c.clone()),
            BasisFn::Pole(i, 1) => {
                out.add_term(BasisFn::Poly(0), c.clone());
                out.add_term(BasisFn::Pole(i, 1), c.mul(cfg.z(i)));
            }
            BasisFn::Pole(i, a) => {
                out.add_term(BasisFn::Pole(i, a - 1), c.clone());
                out.add_term(BasisFn::Pole(i, a), c.mul(cfg.z(i)));
            }
        }
    }
    out
}

fn mul_by_pole(cfg: &MasterConfig, x: &DeRhamElement, j: usize) -> DeRhamElement {
    let mut out = DeRhamElement::zero(Grade::Zero);
    for (&f, c) in x.terms() {
        match f {
            BasisFn::Poly(a) => {
                // t^a/(t-z_j) = sum_{u<a} z_j^(a-1-u) t^u + z_j^a/(t-z_j)
                for u in 0..a {
                    out.add_term(BasisFn::Poly(u), c.mul(&cfg.z(j).pow(a - 1 - u)));
                }
                out.add_term(BasisFn::Pole(j, 1), c.mul(&cfg.z(j).pow(a)));
            }
            BasisFn::Pole(i, a) if i == j => out.add_term(BasisFn::Pole(i, a + 1), c.clone()),
            BasisFn::Pole(i, a) => {
                let dz = cfg.z(j).sub(cfg.z(i));
                for u in 0..a {
                    let inv = dz.pow(u + 1).inv().expect("marked points are distinct");
                    out.add_term(BasisFn::Pole(i, a - u), c.mul(&inv).neg());
                }
                let inv = dz.pow(a).inv().expect("marked points are distinct");
                out.add_term(BasisFn::Pole(j, 1), c.mul(&inv));
            }
        }
    }
    out
}

/// Exact product of two grade-0 elements, re-expanded in the basis by
/// repeated single-factor partial-fraction steps.
pub fn mul(cfg: &MasterConfig, x: &DeRhamElement, y: &DeRhamElement) -> DeRhamElement {
    assert_eq!(x.grade(), Grade::Zero);
    assert_eq!(y.grade(), Grade::Zero);
    let mut out = DeRhamElement::zero(Grade::Zero);
    for (&f, c) in y.terms() {
        let mut acc = x.scale(c);
        match f {
            BasisFn::Poly(a) => {
                for _ in 0..a {
                    acc = mul_by_t(cfg, &acc);
                }
            }
            BasisFn::Pole(j, a) => {
                for _ in 0..a {
                    acc = mul_by_pole(cfg, &acc, j);
                }
            }
        }
        out = out.add(&acc);
    }
    out
}

/// Independent route for the twisted differential: `d(x) + alpha * x`,
/// with the product expanded by the partial-fraction routine.
pub fn differential_oracle(cfg: &MasterConfig, x: &DeRhamElement) -> DeRhamElement {
    plain_d(x).add(&mul(cfg, x, &alpha_function(cfg)).into_form())
}

/// The finite window: functions with pole order <= A and degree <= A map
/// into forms with pole order <= A+1 and degree <= A-1, so the truncated
/// differential is generically injective with cokernel of rank n-1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Truncation {
    pub a_max: u32,
}

impl Truncation {
    pub fn new(a_max: u32) -> Self {
        assert!(a_max >= 1);
        Truncation { a_max }
    }

    pub fn source_basis(&self, n: usize) -> Vec<BasisFn> {
        let mut out = Vec::new();
        for i in 0..n {
            for a in 1..=self.a_max {
                out.push(BasisFn::Pole(i, a));
            }
        }
        for a in 0..=self.a_max {
            out.push(BasisFn::Poly(a));
        }
        out
    }

    pub fn target_basis(&self, n: usize) -> Vec<BasisFn> {
        let mut out = Vec::new();
        for i in 0..n {
            for a in 1..=self.a_max + 1 {
                out.push(BasisFn::Pole(i, a));
            }
        }
        for a in 0..self.a_max {
            out.push(BasisFn::Poly(a));
        }
        out
    }

    fn contains_target(&self, f: &BasisFn) -> bool {
        match f {
            BasisFn::Pole(_, a) => *a <= self.a_max + 1,
            BasisFn::Poly(a) => *a < self.a_max,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyRanks {
    pub h0: usize,
    pub h1: usize,
    pub rank: usize,
    pub source_dim: usize,
    pub target_dim: usize,
}

/// Matrix of the truncated differential, rows indexed by the target basis.
pub fn differential_matrix(cfg: &MasterConfig, trunc: &Truncation) -> Vec<Vec<RationalFunction>> {
    let source = trunc.source_basis(cfg.n());
    let target = trunc.target_basis(cfg.n());
    let zero = RationalFunction::zero(cfg.pool().clone());
    let mut rows = vec![vec![zero; source.len()]; target.len()];
    for (col, f) in source.iter().enumerate() {
        let image = differential(cfg, &DeRhamElement::basis(cfg.pool(), Grade::Zero, *f));
        for (b, c) in image.terms() {
            debug_assert!(trunc.contains_target(b), "differential escaped the window");
            let row = target
                .iter()
                .position(|t| t == b)
                .expect("image term inside the window");
            rows[row][col] = c.clone();
        }
    }
    rows
}

/// Kernel and cokernel dimensions of the truncated differential.
pub fn cohomology_ranks(cfg: &MasterConfig, trunc: &Truncation) -> CohomologyRanks {
    let rows = differential_matrix(cfg, trunc);
    let source_dim = trunc.source_basis(cfg.n()).len();
    let target_dim = rows.len();
    let rank = linalg::rank(&rows);
    CohomologyRanks {
        h0: source_dim - rank,
        h1: target_dim - rank,
        rank,
        source_dim,
        target_dim,
    }
}

/// Solve `d g = target` inside the window. Returns the particular solution
/// with free coordinates pinned to zero (deterministic in the fixed basis
/// order), or `None` when the form is not exact in the window.
pub fn find_relation_primitive(
    cfg: &MasterConfig,
    target: &DeRhamElement,
    trunc: &Truncation,
) -> Option<DeRhamElement> {
    assert_eq!(target.grade(), Grade::One);
    if target.terms().any(|(b, _)| !trunc.contains_target(b)) {
        return None;
    }
    let target_basis = trunc.target_basis(cfg.n());
    let zero = RationalFunction::zero(cfg.pool().clone());
    let rhs: Vec<RationalFunction> = target_basis
        .iter()
        .map(|b| target.coeff(b).cloned().unwrap_or_else(|| zero.clone()))
        .collect();
    let rows = differential_matrix(cfg, trunc);
    let x = linalg::solve(&rows, &rhs, cfg.pool())?;
    let mut g = DeRhamElement::zero(Grade::Zero);
    for (f, c) in trunc.source_basis(cfg.n()).into_iter().zip(x) {
        g.add_term(f, c);
    }
    Some(g)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Resonance {
    /// `m_i + (a-1) kappa = 0` (1-based point index in reports).
    PointLine { i: usize, a: u32 },
    /// `m_{n+1} + 2 - a kappa = 0`.
    InfinityLine { a: u32 },
    /// `kappa = 0`.
    KappaZero,
}

/// All resonance relations satisfied by the configuration, for `a <= a_max`.
pub fn detect_resonances(cfg: &MasterConfig, a_max: u32) -> Vec<Resonance> {
    let mut out = Vec::new();
    if cfg.kappa().is_zero() {
        out.push(Resonance::KappaZero);
    }
    for a in 1..=a_max {
        for i in 0..cfg.n() {
            if cfg
                .weight(i)
                .add(&cfg.kappa().scale_int(a as i64 - 1))
                .is_zero()
            {
                out.push(Resonance::PointLine { i, a });
            }
        }
        if cfg
            .weight_infinity()
            .add(&RationalFunction::from_int(cfg.pool().clone(), 2))
            .sub(&cfg.kappa().scale_int(a as i64))
            .is_zero()
        {
            out.push(Resonance::InfinityLine { a });
        }
    }
    out
}
