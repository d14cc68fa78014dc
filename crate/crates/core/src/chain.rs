//! The Lie algebra of `sl2`-valued functions regular off the marked points,
//! its action on tensor products of contragradient modules (Laurent
//! expansion at each `z_j`, expansion in `1/t` with the `pi` twist at
//! infinity), and the chain map `eta` from the de Rham complex into the
//! last two terms of the chain complex.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational};
use serde::Serialize;

use crate::coeffs::RationalFunction;
use crate::contragradient::{
    coact_symbol, pair_e_key, pair_f_key, single_e_key, single_f_key, Covector,
};
use crate::derham::{self, BasisFn, DeRhamElement, Grade, MasterConfig};
use crate::loop_algebra::{bracket_symbols, Letter, LoopSymbol};
use crate::verma::{PBWKey, Verma};

/// The tensor-product session: one contragradient Verma factor per marked
/// point plus one at infinity, all at level `k = kappa - 2`.
pub struct ChainContext {
    cfg: MasterConfig,
    vermas: Vec<Verma>,
}

impl ChainContext {
    pub fn new(cfg: MasterConfig) -> Self {
        let k = cfg
            .kappa()
            .sub(&RationalFunction::from_int(cfg.pool().clone(), 2));
        let mut vermas = Vec::with_capacity(cfg.n() + 1);
        for j in 0..cfg.n() {
            vermas.push(Verma::new(cfg.pool().clone(), cfg.weight(j).clone(), k.clone()));
        }
        vermas.push(Verma::new(cfg.pool().clone(), cfg.weight_infinity(), k));
        ChainContext { cfg, vermas }
    }

    pub fn cfg(&self) -> &MasterConfig {
        &self.cfg
    }

    /// Number of tensor slots, `n + 1`; the last slot sits at infinity.
    pub fn slots(&self) -> usize {
        self.vermas.len()
    }

    pub fn verma(&self, slot: usize) -> &Verma {
        &self.vermas[slot]
    }

    pub fn unit_tuple(&self) -> Vec<PBWKey> {
        vec![PBWKey::generator(); self.slots()]
    }
}

/// Sparse covector of the tensor product, keyed by one PBW key per slot.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct TensorCovector {
    terms: BTreeMap<Vec<PBWKey>, RationalFunction>,
}

impl TensorCovector {
    pub fn zero() -> Self {
        TensorCovector::default()
    }

    pub fn unit(tuple: Vec<PBWKey>, coeff: RationalFunction) -> Self {
        let mut t = Self::zero();
        t.add_term(tuple, coeff);
        t
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<PBWKey>, &RationalFunction)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, tuple: &[PBWKey]) -> Option<&RationalFunction> {
        self.terms.get(tuple)
    }

    pub fn add_term(&mut self, tuple: Vec<PBWKey>, coeff: RationalFunction) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(tuple) {
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
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.clone());
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
            return Self::zero();
        }
        let mut out = Self::zero();
        for (t, v) in &self.terms {
            out.add_term(t.clone(), v.mul(c));
        }
        out
    }
}

impl fmt::Display for TensorCovector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(tuple, c)| {
                let slots: Vec<String> = tuple.iter().map(|k| format!("[{k}]*")).collect();
                format!("({c})*{}", slots.join("(x)"))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for TensorCovector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An `sl2`-valued function: a sum of `letter (x) u` with `u` a grade-0
/// de Rham element (regular off the marked points).
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Sl2UElement {
    terms: Vec<(Letter, DeRhamElement)>,
}

impl Sl2UElement {
    pub fn new(terms: Vec<(Letter, DeRhamElement)>) -> Self {
        for (letter, u) in &terms {
            assert!(*letter != Letter::C, "no central letter in sl2(U)");
            assert_eq!(u.grade(), Grade::Zero);
        }
        Sl2UElement { terms }
    }

    pub fn single(letter: Letter, u: DeRhamElement) -> Self {
        Self::new(vec![(letter, u)])
    }

    pub fn terms(&self) -> impl Iterator<Item = &(Letter, DeRhamElement)> {
        self.terms.iter()
    }
}

impl fmt::Display for Sl2UElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(l, u)| {
                let name = match l {
                    Letter::E => "e",
                    Letter::H => "h",
                    Letter::F => "f",
                    Letter::C => unreachable!(),
                };
                format!("{name} (x) ({u})")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for Sl2UElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Pointwise bracket `[x (x) u1, y (x) u2] = [x, y] (x) u1 u2`.
pub fn sl2u_bracket(cfg: &MasterConfig, x: &Sl2UElement, y: &Sl2UElement) -> Sl2UElement {
    let mut out = Vec::new();
    for (la, ua) in x.terms() {
        for (lb, ub) in y.terms() {
            let br = bracket_symbols(
                cfg.pool(),
                LoopSymbol { letter: *la, power: 0 },
                LoopSymbol { letter: *lb, power: 0 },
            );
            for (sym, coeff) in br.terms() {
                if sym.letter == Letter::C {
                    continue;
                }
                let product = derham::mul(cfg, ua, ub).scale(coeff);
                if !product.is_zero() {
                    out.push((sym.letter, product));
                }
            }
        }
    }
    Sl2UElement::new(out)
}

/// A degree-1 chain: a finite sum of `g (x) w` terms.
#[derive(Clone, Default)]
pub struct ChainOneElement {
    pub terms: Vec<(Sl2UElement, TensorCovector)>,
}

impl ChainOneElement {
    pub fn push(&mut self, g: Sl2UElement, w: TensorCovector) {
        if !w.is_zero() {
            self.terms.push((g, w));
        }
    }
}

fn binomial(n: u64, k: u64) -> BigInt {
    num::integer::binomial(BigInt::from(n), BigInt::from(k))
}

/// Laurent coefficients of a basis function at the marked point `z_j`,
/// local coordinate `t - z_j`, up to order `r_max` inclusive.
fn laurent_at_point(
    cfg: &MasterConfig,
    f: BasisFn,
    j: usize,
    r_max: i64,
) -> Vec<(i64, RationalFunction)> {
    let pool = cfg.pool().clone();
    let mut out = Vec::new();
    match f {
        BasisFn::Pole(i, a) if i == j => out.push((-(a as i64), RationalFunction::one(pool))),
        BasisFn::Pole(i, a) => {
            // (t-z_i)^(-a) = sum_r (-1)^r C(a+r-1, r) (z_j-z_i)^(-a-r) (t-z_j)^r
            let dz = cfg.z(j).sub(cfg.z(i));
            for r in 0..=r_max.max(0) as u64 {
                let b = binomial(a as u64 + r - 1, r);
                let mut c = RationalFunction::from_rational(pool.clone(), BigRational::from(b));
                if r % 2 == 1 {
                    c = c.neg();
                }
                let c = c.mul(
                    &dz.pow(a + r as u32)
                        .inv()
                        .expect("marked points are distinct"),
                );
                out.push((r as i64, c));
            }
        }
        BasisFn::Poly(a) => {
            // t^a = sum_{r<=a} C(a, r) z_j^(a-r) (t-z_j)^r
            for r in 0..=(a as i64).min(r_max) {
                let c = RationalFunction::from_rational(
                    pool.clone(),
                    BigRational::from(binomial(a as u64, r as u64)),
                )
                .mul(&cfg.z(j).pow(a - r as u32));
                out.push((r, c));
            }
        }
    }
    out
}

/// Laurent coefficients at infinity in the local coordinate `1/t`; the
/// power `r` corresponds to the loop generator `x*T^r`.
fn laurent_at_infinity(cfg: &MasterConfig, f: BasisFn, r_max: i64) -> Vec<(i64, RationalFunction)> {
    let pool = cfg.pool().clone();
    let mut out = Vec::new();
    match f {
        BasisFn::Poly(a) => out.push((-(a as i64), RationalFunction::one(pool))),
        BasisFn::Pole(i, a) => {
            // (t-z_i)^(-a) = sum_{u>=0} C(a+u-1, u) z_i^u s^(a+u), s = 1/t
            let top = r_max - a as i64;
            for u in 0..=top {
                let c = RationalFunction::from_rational(
                    pool.clone(),
                    BigRational::from(binomial(a as u64 + u as u64 - 1, u as u64)),
                )
                .mul(&cfg.z(i).pow(u as u32));
                out.push((a as i64 + u, c));
            }
        }
    }
    out
}

/// `pi` on a letter: swaps `e` and `f`, negates `h` (the sign is returned
/// separately).
fn pi_letter(letter: Letter) -> (Letter, i64) {
    match letter {
        Letter::E => (Letter::F, 1),
        Letter::F => (Letter::E, 1),
        Letter::H => (Letter::H, -1),
        Letter::C => (Letter::C, 1),
    }
}

/// The action of `sl2(U)` on the tensor product: expand at each marked
/// point and act on that slot, expand in `1/t` and apply `pi` before
/// acting on the infinity slot.
pub fn mu_act(ctx: &ChainContext, g: &Sl2UElement, w: &TensorCovector) -> TensorCovector {
    let n = ctx.cfg().n();
    let mut out = TensorCovector::zero();
    for (letter, u) in g.terms() {
        for (ubasis, ucoeff) in u.terms() {
            for (tuple, wcoeff) in w.terms() {
                let scale = ucoeff.mul(wcoeff);
                for slot in 0..ctx.slots() {
                    let vm = ctx.verma(slot);
                    let slot_deg = tuple[slot].degree();
                    let r_max = slot_deg.0.max(slot_deg.1) + 1;
                    let expansion = if slot < n {
                        laurent_at_point(ctx.cfg(), *ubasis, slot, r_max)
                    } else {
                        laurent_at_infinity(ctx.cfg(), *ubasis, r_max)
                    };
                    let phi = Covector::dual_unit(tuple[slot].clone(), vm);
                    for (r, c) in expansion {
                        let (act_letter, sign) = if slot == n {
                            pi_letter(*letter)
                        } else {
                            (*letter, 1)
                        };
                        let sym = LoopSymbol {
                            letter: act_letter,
                            power: r,
                        };
                        let image = coact_symbol(vm, sym, &phi);
                        if image.is_zero() {
                            continue;
                        }
                        let factor = scale.mul(&c).scale_int(sign);
                        for (key, val) in image.terms() {
                            let mut new_tuple = tuple.clone();
                            new_tuple[slot] = key.clone();
                            out.add_term(new_tuple, factor.mul(val));
                        }
                    }
                }
            }
        }
    }
    out
}

/// The chain differential restricted to degree-1 chains.
pub fn chain_d(ctx: &ChainContext, c1: &ChainOneElement) -> TensorCovector {
    let mut out = TensorCovector::zero();
    for (g, w) in &c1.terms {
        out = out.add(&mu_act(ctx, g, w));
    }
    out
}

/// The degree-1 leg of the chain map: one-forms to tensor covectors.
pub fn eta1(ctx: &ChainContext, w: &DeRhamElement) -> TensorCovector {
    assert_eq!(w.grade(), Grade::One);
    let kappa = ctx.cfg().kappa();
    let n = ctx.cfg().n();
    let mut out = TensorCovector::zero();
    for (&f, c) in w.terms() {
        match f {
            BasisFn::Pole(p, a) => {
                let mut tuple = ctx.unit_tuple();
                tuple[p] = single_f_key(a - 1);
                out.add_term(tuple, kappa.neg().mul(c));
            }
            BasisFn::Poly(d) => {
                let mut tuple = ctx.unit_tuple();
                tuple[n] = single_e_key(d + 1);
                out.add_term(tuple, kappa.mul(c));
            }
        }
    }
    out
}

/// The degree-0 leg of the chain map: functions to degree-1 chains.
pub fn eta0(ctx: &ChainContext, x: &DeRhamElement) -> ChainOneElement {
    assert_eq!(x.grade(), Grade::Zero);
    let pool = ctx.cfg().pool();
    let n = ctx.cfg().n();
    let one = RationalFunction::one(pool.clone());
    let mut out = ChainOneElement::default();
    for (&f, c) in x.terms() {
        match f {
            BasisFn::Pole(p, a) => {
                out.push(
                    Sl2UElement::single(
                        Letter::F,
                        DeRhamElement::basis(pool, Grade::Zero, BasisFn::Pole(p, a)).scale(c),
                    ),
                    TensorCovector::unit(ctx.unit_tuple(), one.clone()),
                );
                for l in 1..=a {
                    let mut ff = TensorCovector::zero();
                    for j in 0..=(a - l) / 2 {
                        let i = a - l - j;
                        let mut tuple = ctx.unit_tuple();
                        tuple[p] = pair_f_key(i, j);
                        ff.add_term(tuple, one.scale_int(-2));
                    }
                    out.push(
                        Sl2UElement::single(
                            Letter::E,
                            DeRhamElement::basis(pool, Grade::Zero, BasisFn::Pole(p, l)).scale(c),
                        ),
                        ff,
                    );
                    let mut tuple = ctx.unit_tuple();
                    tuple[p] = single_f_key(a - l);
                    out.push(
                        Sl2UElement::single(
                            Letter::H,
                            DeRhamElement::basis(pool, Grade::Zero, BasisFn::Pole(p, l)).scale(c),
                        ),
                        TensorCovector::unit(tuple, one.neg()),
                    );
                }
            }
            BasisFn::Poly(a) => {
                out.push(
                    Sl2UElement::single(
                        Letter::F,
                        DeRhamElement::basis(pool, Grade::Zero, BasisFn::Poly(a)).scale(c),
                    ),
                    TensorCovector::unit(ctx.unit_tuple(), one.clone()),
                );
                for l in 0..a.saturating_sub(1) {
                    let mut ee = TensorCovector::zero();
                    for j in 1..=(a - l) / 2 {
                        let i = a - l - j;
                        if i >= j {
                            let mut tuple = ctx.unit_tuple();
                            tuple[n] = pair_e_key(i, j);
                            ee.add_term(tuple, one.scale_int(-2));
                        }
                    }
                    out.push(
                        Sl2UElement::single(
                            Letter::E,
                            DeRhamElement::basis(pool, Grade::Zero, BasisFn::Poly(l)).scale(c),
                        ),
                        ee,
                    );
                    let mut tuple = ctx.unit_tuple();
                    tuple[n] = single_e_key(a - l - 1);
                    out.push(
                        Sl2UElement::single(
                            Letter::H,
                            DeRhamElement::basis(pool, Grade::Zero, BasisFn::Poly(l + 1)).scale(c),
                        ),
                        TensorCovector::unit(tuple, one.neg()),
                    );
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainSquareReport {
    pub function: String,
    pub holds: bool,
    /// Mismatching tensor coefficients, when any: tuple, lhs, rhs.
    pub residual: Vec<(String, String, String)>,
}

/// Check `d(eta0(f)) = eta1(d(f))` exactly for one basis function.
pub fn verify_chain_square(ctx: &ChainContext, f: BasisFn) -> ChainSquareReport {
    let x = DeRhamElement::basis(ctx.cfg().pool(), Grade::Zero, f);
    let lhs = chain_d(ctx, &eta0(ctx, &x));
    let rhs = eta1(ctx, &derham::differential(ctx.cfg(), &x));
    let mut residual = Vec::new();
    let diff = lhs.sub(&rhs);
    for (tuple, _) in diff.terms() {
        let zero = RationalFunction::zero(ctx.cfg().pool().clone());
        let l = lhs.coeff(tuple).unwrap_or(&zero).to_string();
        let r = rhs.coeff(tuple).unwrap_or(&zero).to_string();
        let slots: Vec<String> = tuple.iter().map(|k| k.to_string()).collect();
        residual.push((slots.join(" (x) "), l, r));
    }
    ChainSquareReport {
        function: x.to_string(),
        holds: residual.is_empty(),
        residual,
    }
}

/// `eta1` sends the window's form basis to scalar multiples of distinct
/// unit tensors, so injectivity amounts to nonzero scalars and distinct
/// image tuples.
pub fn eta1_injective_on_window(ctx: &ChainContext, trunc: &derham::Truncation) -> bool {
    let mut seen = std::collections::BTreeSet::new();
    for f in trunc.target_basis(ctx.cfg().n()) {
        let image = eta1(
            ctx,
            &DeRhamElement::basis(ctx.cfg().pool(), Grade::One, f),
        );
        let mut it = image.terms();
        let Some((tuple, c)) = it.next() else {
            return false;
        };
        if it.next().is_some() || c.is_zero() || !seen.insert(tuple.clone()) {
            return false;
        }
    }
    true
}
