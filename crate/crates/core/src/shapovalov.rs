//! The Shapovalov form: Gram matrices over `Q(m,k)`, resonance lines in the
//! `(m, k)` plane, singular-vector kernels at specialized points, and the
//! continued vectors `X_a`, `Y_a` obtained by solving the Gram system
//! against a scaled dual-basis covector and restricting to a resonance
//! line.

use std::fmt;
use std::sync::Arc;

use num::{BigInt, BigRational, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::coeffs::{Polynomial, RationalFunction, VarPool};
use crate::linalg;
use crate::loop_algebra::{theta_symbol, Degree, LoopSymbol};
use crate::verma::{enumerate_basis, ModuleVector, Orientation, PBWKey, Verma};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapovalovError {
    #[error("kappa = 0 at k0 = -2; the construction is undefined there")]
    KappaZero,
    #[error("point (m0, k0) = ({m0}, {k0}) also lies on resonance line {line}")]
    OnAnotherResonanceLine {
        m0: BigRational,
        k0: BigRational,
        line: ResonanceLine,
    },
    #[error("coordinate {index} of the continued vector has a pole at k0 = {k0}")]
    PoleOnLine { index: usize, k0: BigRational },
    #[error("continued vector vanished at the point; the continuation is defective")]
    ZeroLimit,
}

/// Symmetric Gram matrix of the Shapovalov form on one graded component,
/// indexed by the deterministic basis order.
#[derive(Clone, Debug)]
pub struct GramMatrix {
    pub degree: Degree,
    pub basis: Vec<PBWKey>,
    pub entries: Vec<Vec<RationalFunction>>,
}

/// `S(F v, G v)`: push `G v` through the theta-images of the factors of
/// `F` (leftmost factor first) and read off the coefficient of `v`.
pub fn shapovalov_value(vm: &Verma, left: &PBWKey, right: &PBWKey) -> RationalFunction {
    let mut w = ModuleVector::unit(right.clone(), RationalFunction::one(vm.pool().clone()));
    for x in left.word() {
        if w.is_zero() {
            break;
        }
        let ts = theta_symbol(x);
        let mut next = ModuleVector::zero();
        for (key, c) in w.terms() {
            next = next.add(&vm.act_symbol(ts, key).scale(c));
        }
        w = next;
    }
    w.coeff(&PBWKey::generator())
        .cloned()
        .unwrap_or_else(|| RationalFunction::zero(vm.pool().clone()))
}

pub fn gram_matrix(vm: &Verma, degree: Degree) -> GramMatrix {
    let basis = enumerate_basis(degree);
    let entries = basis
        .iter()
        .map(|left| {
            basis
                .iter()
                .map(|right| shapovalov_value(vm, left, right))
                .collect()
        })
        .collect();
    GramMatrix {
        degree,
        basis,
        entries,
    }
}

impl GramMatrix {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    /// Entries as polynomials; the Gram entries of a Verma session with
    /// polynomial weights are always polynomial.
    pub fn poly_entries(&self) -> Vec<Vec<Polynomial>> {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| {
                        assert!(e.is_polynomial(), "Gram entry is not polynomial: {e}");
                        e.numerator().clone()
                    })
                    .collect()
            })
            .collect()
    }

    pub fn det(&self, pool: &Arc<VarPool>) -> Polynomial {
        linalg::bareiss_det(&self.poly_entries(), pool)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LineKind {
    /// `m - l + 1 + (a-1)(k+2) = 0`, singular degree `(l a, l(a-1))`.
    A,
    /// `m + l + 1 - a(k+2) = 0`, singular degree `(l(a-1), l a)`.
    B,
    /// `k + 2 = 0`.
    KappaZero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ResonanceLine {
    pub kind: LineKind,
    pub l: u32,
    pub a: u32,
}

impl fmt::Display for ResonanceLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            LineKind::A => write!(f, "m - {} + 1 + {}*(k+2) = 0", self.l, self.a - 1),
            LineKind::B => write!(f, "m + {} + 1 - {}*(k+2) = 0", self.l, self.a),
            LineKind::KappaZero => write!(f, "k + 2 = 0"),
        }
    }
}

impl ResonanceLine {
    pub fn a_line(l: u32, a: u32) -> Self {
        ResonanceLine {
            kind: LineKind::A,
            l,
            a,
        }
    }

    pub fn b_line(l: u32, a: u32) -> Self {
        ResonanceLine {
            kind: LineKind::B,
            l,
            a,
        }
    }

    /// The defining linear form as a polynomial in `{m, k}`.
    pub fn poly(&self, pool: &Arc<VarPool>) -> Polynomial {
        let m = Polynomial::var(pool.clone(), 0);
        let k = Polynomial::var(pool.clone(), 1);
        let kappa = k.add(&Polynomial::constant(pool.clone(), BigInt::from(2)));
        let c = |v: i64| Polynomial::constant(pool.clone(), BigInt::from(v));
        match self.kind {
            LineKind::A => m
                .sub(&c(self.l as i64))
                .add(&c(1))
                .add(&kappa.scale(&BigInt::from(self.a as i64 - 1))),
            LineKind::B => m
                .add(&c(self.l as i64))
                .add(&c(1))
                .sub(&kappa.scale(&BigInt::from(self.a as i64))),
            LineKind::KappaZero => kappa,
        }
    }

    /// Degree of the singular vector generating the submodule on this line.
    pub fn singular_degree(&self) -> Option<Degree> {
        let (l, a) = (self.l as i64, self.a as i64);
        match self.kind {
            LineKind::A => Some(Degree(l * a, l * (a - 1))),
            LineKind::B => Some(Degree(l * (a - 1), l * a)),
            LineKind::KappaZero => None,
        }
    }

    /// `m` as a polynomial in `k` on this line.
    pub fn m_of_k(&self, pool: &Arc<VarPool>) -> Polynomial {
        let k = Polynomial::var(pool.clone(), 1);
        let kappa = k.add(&Polynomial::constant(pool.clone(), BigInt::from(2)));
        let c = |v: i64| Polynomial::constant(pool.clone(), BigInt::from(v));
        match self.kind {
            LineKind::A => c(self.l as i64 - 1).sub(&kappa.scale(&BigInt::from(self.a as i64 - 1))),
            LineKind::B => kappa
                .scale(&BigInt::from(self.a as i64))
                .sub(&c(self.l as i64 + 1)),
            LineKind::KappaZero => panic!("kappa = 0 is not a graph over k"),
        }
    }

    pub fn contains(&self, m0: &BigRational, k0: &BigRational) -> bool {
        let kappa = k0 + BigRational::from(BigInt::from(2));
        match self.kind {
            LineKind::A => {
                (m0 - BigRational::from(BigInt::from(self.l as i64 - 1))
                    + kappa * BigRational::from(BigInt::from(self.a as i64 - 1)))
                .is_zero()
            }
            LineKind::B => {
                (m0 + BigRational::from(BigInt::from(self.l as i64 + 1))
                    - kappa * BigRational::from(BigInt::from(self.a as i64)))
                .is_zero()
            }
            LineKind::KappaZero => kappa.is_zero(),
        }
    }
}

/// All `A`/`B` lines whose predicted singular degree fits inside `degree`.
/// These are exactly the lines relevant to the Gram determinant there.
pub fn lines_within(degree: Degree) -> Vec<ResonanceLine> {
    let Degree(p1, p2) = degree;
    let mut out = Vec::new();
    for l in 1..=(p1.max(p2).max(0) as u32) {
        for a in 1..=(p1.max(p2).max(0) as u32) {
            for line in [ResonanceLine::a_line(l, a), ResonanceLine::b_line(l, a)] {
                let d = line.singular_degree().unwrap();
                if d.0 <= p1 && d.1 <= p2 && !out.contains(&line) {
                    out.push(line);
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct DetFactor {
    pub line: ResonanceLine,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct DetFactorization {
    pub degree: (i64, i64),
    pub dim: usize,
    pub factors: Vec<DetFactor>,
    pub kappa_power: u32,
    pub residual: String,
}

/// Factor the Gram determinant by trial division against the resonance
/// linear forms relevant to this degree, plus powers of `kappa`.
pub fn det_factorization(vm: &Verma, degree: Degree) -> DetFactorization {
    let pool = vm.pool();
    let gram = gram_matrix(vm, degree);
    let mut det = gram.det(pool);
    let mut factors = Vec::new();
    for line in lines_within(degree) {
        let p = line.poly(pool);
        let mut multiplicity = 0;
        while let Some(q) = det.div_exact(&p) {
            det = q;
            multiplicity += 1;
        }
        if multiplicity > 0 {
            factors.push(DetFactor { line, multiplicity });
        }
    }
    let kappa = ResonanceLine {
        kind: LineKind::KappaZero,
        l: 0,
        a: 0,
    }
    .poly(pool);
    let mut kappa_power = 0;
    while let Some(q) = det.div_exact(&kappa) {
        det = q;
        kappa_power += 1;
    }
    DetFactorization {
        degree: (degree.0, degree.1),
        dim: gram.dim(),
        factors,
        kappa_power,
        residual: det.to_string(),
    }
}

/// Matrix of `act(s, .)` from the component `degree` to `degree + deg(s)`,
/// rows indexed by the target basis, columns by the source basis.
pub fn act_matrix(
    vm: &Verma,
    s: LoopSymbol,
    degree: Degree,
) -> (Vec<PBWKey>, Vec<Vec<RationalFunction>>) {
    let source = enumerate_basis(degree);
    let target = enumerate_basis(degree + s.degree());
    let zero = RationalFunction::zero(vm.pool().clone());
    let mut rows = vec![vec![zero; source.len()]; target.len()];
    for (col, key) in source.iter().enumerate() {
        let image = vm.act_symbol(s, key);
        for (row, tkey) in target.iter().enumerate() {
            if let Some(c) = image.coeff(tkey) {
                rows[row][col] = c.clone();
            }
        }
    }
    (target, rows)
}

/// Basis of the joint kernel of `e_1 = e` and `e_2 = f*T` on the component
/// `degree` of the module specialized at exact `(m0, k0)`. Degree `(0,0)`
/// is excluded by convention (the generating vector is not singular).
pub fn singular_vectors(degree: Degree, m0: &BigRational, k0: &BigRational) -> Vec<ModuleVector> {
    if degree == Degree(0, 0) {
        return vec![];
    }
    let vm = Verma::specialized(m0, k0);
    let basis = enumerate_basis(degree);
    if basis.is_empty() {
        return vec![];
    }
    let (_, rows_e1) = act_matrix(&vm, LoopSymbol::e(0), degree);
    let (_, rows_e2) = act_matrix(&vm, LoopSymbol::f(1), degree);
    let mut stacked = rows_e1;
    stacked.extend(rows_e2);
    let kernel = linalg::kernel_basis(&stacked, basis.len(), vm.pool());
    kernel
        .into_iter()
        .map(|coords| {
            let mut v = ModuleVector::zero();
            for (key, c) in basis.iter().zip(coords) {
                v.add_term(key.clone(), c);
            }
            v
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Continuation {
    X,
    Y,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContinuationReport {
    pub which: Continuation,
    pub a: u32,
    pub k0: String,
    pub m0: String,
    pub degree: (i64, i64),
    pub basis: Vec<String>,
    /// Coordinates restricted to the line, as rational functions of `k`.
    pub coords_on_line: Vec<RationalFunction>,
    /// Exact coordinates at `k0`.
    pub vector: Vec<String>,
    pub nonzero: bool,
    pub singular: bool,
    /// Comparison against an explicitly expanded singular monomial, where
    /// one is available (X at a = 1, Y at a = 1, 2); `None` otherwise.
    pub mff_proportional: Option<bool>,
}

fn rational_of(v: i64) -> BigRational {
    BigRational::from(BigInt::from(v))
}

/// Solve the Gram system for `X_a` or `Y_a` over `Q(m, k)`, restrict to the
/// defining resonance line, certify pole-freeness at `k0`, and evaluate.
pub fn continue_xy(
    which: Continuation,
    a: u32,
    k0: &BigRational,
) -> Result<ContinuationReport, ShapovalovError> {
    assert!(a >= 1);
    if (k0 + rational_of(2)).is_zero() {
        return Err(ShapovalovError::KappaZero);
    }
    let vm = Verma::symbolic();
    let pool = vm.pool().clone();
    let (degree, target_key, line) = match which {
        Continuation::X => (
            Degree(a as i64, a as i64 - 1),
            PBWKey {
                f_powers: vec![a - 1],
                h_powers: vec![],
                e_powers: vec![],
                orientation: Orientation::FFirst,
            },
            ResonanceLine::a_line(1, a),
        ),
        Continuation::Y => (
            Degree(a as i64 - 1, a as i64),
            PBWKey {
                f_powers: vec![],
                h_powers: vec![],
                e_powers: vec![a],
                orientation: Orientation::EFirst,
            },
            ResonanceLine::b_line(1, a),
        ),
    };
    let m_of_k = line.m_of_k(&pool);
    let m0 = m_of_k.eval(&[BigRational::zero(), k0.clone()]);

    // Reject points that also sit on a second resonance line relevant to
    // this component (those are where the continuation genuinely breaks).
    for other in lines_within(degree) {
        if other != line && other.contains(&m0, k0) {
            return Err(ShapovalovError::OnAnotherResonanceLine {
                m0,
                k0: k0.clone(),
                line: other,
            });
        }
    }

    // At l = 1 the line's linear form is exactly the scaling factor of the
    // dual-basis covector: m + (a-1)(k+2) for X, m + 2 - a(k+2) for Y.
    let gram = gram_matrix(&vm, degree);
    let factor = line.poly(&pool);
    let rhs: Vec<Polynomial> = gram
        .basis
        .iter()
        .map(|key| {
            if *key == target_key {
                factor.clone()
            } else {
                Polynomial::zero(pool.clone())
            }
        })
        .collect();
    let coords = linalg::cramer_solve(&gram.poly_entries(), &rhs, &pool)
        .expect("Gram matrix is nonsingular over Q(m,k)");

    // Restrict to the line: substitute m = m(k).
    let on_line: Vec<RationalFunction> = coords
        .iter()
        .map(|c| c.substitute_poly(0, &m_of_k))
        .collect();
    let point = [BigRational::zero(), k0.clone()];
    let mut values = Vec::with_capacity(on_line.len());
    for (index, c) in on_line.iter().enumerate() {
        match c.eval(&point) {
            Ok(v) => values.push(v),
            Err(_) => {
                return Err(ShapovalovError::PoleOnLine {
                    index,
                    k0: k0.clone(),
                })
            }
        }
    }
    if values.iter().all(|v| v.is_zero()) {
        return Err(ShapovalovError::ZeroLimit);
    }

    // Singularity at the specialization.
    let vm0 = Verma::specialized(&m0, k0);
    let mut vector = ModuleVector::zero();
    for (key, v) in gram.basis.iter().zip(&values) {
        vector.add_term(
            key.clone(),
            RationalFunction::from_rational(vm0.pool().clone(), v.clone()),
        );
    }
    let singular = [LoopSymbol::e(0), LoopSymbol::f(1)].iter().all(|&s| {
        let mut image = ModuleVector::zero();
        for (key, c) in vector.terms() {
            image = image.add(&vm0.act_symbol(s, key).scale(c));
        }
        image.is_zero()
    });

    let mff_proportional = explicit_mff_vector(&vm0, which, a, k0)
        .map(|reference| proportional(&vector, &reference));

    Ok(ContinuationReport {
        which,
        a,
        k0: k0.to_string(),
        m0: m0.to_string(),
        degree: (degree.0, degree.1),
        basis: gram.basis.iter().map(|k| k.to_string()).collect(),
        coords_on_line: on_line,
        vector: values.iter().map(|v| v.to_string()).collect(),
        nonzero: true,
        singular,
        mff_proportional,
    })
}

/// The explicitly expanded singular monomials available at `l = 1`:
/// `F12(1,1) v = f v`, `F21(1,1) v = e/T v`, and the three-term expansion
/// of `F21(1,2)`.
pub fn explicit_mff_vector(
    vm: &Verma,
    which: Continuation,
    a: u32,
    k0: &BigRational,
) -> Option<ModuleVector> {
    let kappa = RationalFunction::from_rational(
        vm.pool().clone(),
        k0 + rational_of(2),
    );
    let one = RationalFunction::one(vm.pool().clone());
    match (which, a) {
        (Continuation::X, 1) => Some(vm.normal_order(&[LoopSymbol::f(0)])),
        (Continuation::Y, 1) => Some(vm.normal_order(&[LoopSymbol::e(-1)])),
        (Continuation::Y, 2) => {
            // f (e/T)^2 v + (1+kappa) h/T e/T v - (1+kappa) kappa e/T^2 v
            let t1 = vm.normal_order(&[LoopSymbol::f(0), LoopSymbol::e(-1), LoopSymbol::e(-1)]);
            let c2 = one.add(&kappa);
            let t2 = vm
                .normal_order(&[LoopSymbol::h(-1), LoopSymbol::e(-1)])
                .scale(&c2);
            let t3 = vm
                .normal_order(&[LoopSymbol::e(-2)])
                .scale(&c2.mul(&kappa).neg());
            Some(t1.add(&t2).add(&t3))
        }
        _ => None,
    }
}

/// Proportionality after normalizing both vectors to leading coefficient
/// one in the deterministic key order.
pub fn proportional(x: &ModuleVector, y: &ModuleVector) -> bool {
    match (x.terms().next(), y.terms().next()) {
        (None, None) => true,
        (Some((kx, cx)), Some((ky, cy))) => {
            if kx != ky {
                return false;
            }
            let sx = x.scale(&cx.inv().expect("leading coefficient nonzero"));
            let sy = y.scale(&cy.inv().expect("leading coefficient nonzero"));
            sx == sy
        }
        _ => false,
    }
}
