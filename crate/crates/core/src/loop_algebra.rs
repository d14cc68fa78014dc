//! The affine Lie algebra: loop generators `x*T^j` for `x` in `{e, h, f}`,
//! the central element `c`, the bracket
//! `[a*T^i, b*T^j] = [a,b]*T^(i+j) + i*<a,b>*delta(i+j,0)*c`,
//! and the maps `pi` (Dynkin-fixing automorphism), `rho` (diagram
//! involution) and `theta` (Chevalley antiautomorphism).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;
use std::sync::Arc;

use crate::coeffs::{RationalFunction, VarPool};

/// One of the standard `sl2` generators, or the central element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    E,
    H,
    F,
    C,
}

/// A basis symbol `letter * T^power`; the central element has power 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LoopSymbol {
    pub letter: Letter,
    pub power: i64,
}

/// A component-wise bigraded degree; module components live in the
/// non-negative quadrant, loop symbols can have negative entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Degree(pub i64, pub i64);

impl Add for Degree {
    type Output = Degree;
    fn add(self, rhs: Degree) -> Degree {
        Degree(self.0 + rhs.0, self.1 + rhs.1)
    }
}

impl Degree {
    pub fn is_nonnegative(&self) -> bool {
        self.0 >= 0 && self.1 >= 0
    }
}

impl LoopSymbol {
    pub fn e(power: i64) -> Self {
        LoopSymbol {
            letter: Letter::E,
            power,
        }
    }

    pub fn h(power: i64) -> Self {
        LoopSymbol {
            letter: Letter::H,
            power,
        }
    }

    pub fn f(power: i64) -> Self {
        LoopSymbol {
            letter: Letter::F,
            power,
        }
    }

    pub fn c() -> Self {
        LoopSymbol {
            letter: Letter::C,
            power: 0,
        }
    }

    /// The bigrading: `f*T^j` has degree `(-j+1, -j)`, `h*T^j` has
    /// `(-j, -j)`, `e*T^j` has `(-j-1, -j)`, and `c` has `(0, 0)`.
    pub fn degree(&self) -> Degree {
        let j = self.power;
        match self.letter {
            Letter::F => Degree(-j + 1, -j),
            Letter::H => Degree(-j, -j),
            Letter::E => Degree(-j - 1, -j),
            Letter::C => Degree(0, 0),
        }
    }
}

impl fmt::Display for LoopSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.letter {
            Letter::E => "e",
            Letter::H => "h",
            Letter::F => "f",
            Letter::C => return write!(f, "c"),
        };
        match self.power {
            0 => write!(f, "{name}"),
            1 => write!(f, "{name}*T"),
            -1 => write!(f, "{name}/T"),
            p if p > 0 => write!(f, "{name}*T^{p}"),
            p => write!(f, "{name}/T^{}", -p),
        }
    }
}

/// A finite linear combination of basis symbols with rational-function
/// coefficients. Mixed-degree combinations are allowed.
#[derive(Clone, PartialEq, Eq)]
pub struct LoopElement {
    pool: Arc<VarPool>,
    terms: BTreeMap<LoopSymbol, RationalFunction>,
}

impl LoopElement {
    pub fn zero(pool: Arc<VarPool>) -> Self {
        LoopElement {
            pool,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_symbol(pool: Arc<VarPool>, s: LoopSymbol) -> Self {
        let mut el = Self::zero(pool.clone());
        el.add_term(s, RationalFunction::one(pool));
        el
    }

    pub fn pool(&self) -> &Arc<VarPool> {
        &self.pool
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LoopSymbol, &RationalFunction)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, s: LoopSymbol, coeff: RationalFunction) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(s) {
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
        for (s, c) in &other.terms {
            out.add_term(*s, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &RationalFunction) -> Self {
        let mut out = Self::zero(self.pool.clone());
        for (s, v) in &self.terms {
            out.add_term(*s, v.mul(c));
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.neg();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// The common degree of all terms, if the element is homogeneous.
    pub fn degree(&self) -> Option<Degree> {
        let mut it = self.terms.keys().map(|s| s.degree());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }
}

impl fmt::Display for LoopElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(s, c)| format!("({c})*{s}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for LoopElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `[a, b]` for plain `sl2` letters as a scaled letter: returns
/// `(coefficient, letter)` with `None` for zero.
fn sl2_bracket(a: Letter, b: Letter) -> Option<(i64, Letter)> {
    use Letter::*;
    match (a, b) {
        (E, F) => Some((1, H)),
        (F, E) => Some((-1, H)),
        (H, E) => Some((2, E)),
        (E, H) => Some((-2, E)),
        (H, F) => Some((-2, F)),
        (F, H) => Some((2, F)),
        _ => None,
    }
}

/// The invariant form `<a, b> = tr(ab)`: `<e,f> = <f,e> = 1`, `<h,h> = 2`.
fn trace_form(a: Letter, b: Letter) -> i64 {
    use Letter::*;
    match (a, b) {
        (E, F) | (F, E) => 1,
        (H, H) => 2,
        _ => 0,
    }
}

/// Bracket of two basis symbols as a loop element (at most a letter term
/// plus a central term).
pub fn bracket_symbols(pool: &Arc<VarPool>, a: LoopSymbol, b: LoopSymbol) -> LoopElement {
    let mut out = LoopElement::zero(pool.clone());
    if a.letter == Letter::C || b.letter == Letter::C {
        return out;
    }
    if let Some((coeff, letter)) = sl2_bracket(a.letter, b.letter) {
        out.add_term(
            LoopSymbol {
                letter,
                power: a.power + b.power,
            },
            RationalFunction::from_int(pool.clone(), coeff),
        );
    }
    if a.power + b.power == 0 {
        let central = a.power * trace_form(a.letter, b.letter);
        if central != 0 {
            out.add_term(LoopSymbol::c(), RationalFunction::from_int(pool.clone(), central));
        }
    }
    out
}

/// Bilinear extension of the bracket.
pub fn bracket(x: &LoopElement, y: &LoopElement) -> LoopElement {
    let mut out = LoopElement::zero(x.pool().clone());
    for (sa, ca) in x.terms() {
        for (sb, cb) in y.terms() {
            let br = bracket_symbols(x.pool(), *sa, *sb);
            out = out.add(&br.scale(&ca.mul(cb)));
        }
    }
    out
}

/// The three algebra maps used throughout.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgebraMap {
    /// Automorphism: `e*T^i <-> f*T^i`, `h*T^i -> -h*T^i`, `c -> c`.
    Pi,
    /// Diagram involution: `f*T^j -> e*T^(j-1)`, `e*T^j -> f*T^(j+1)`,
    /// `h*T^j -> -h*T^j` for `j != 0`, `h -> c - h`, `c -> c`.
    Rho,
    /// Chevalley antiautomorphism: `x*T^j -> omega(x)*T^(-j)` with
    /// `omega` swapping `e` and `f`; reverses brackets.
    Theta,
}

pub fn apply_map_symbol(pool: &Arc<VarPool>, map: AlgebraMap, s: LoopSymbol) -> LoopElement {
    let one = RationalFunction::one(pool.clone());
    let mut out = LoopElement::zero(pool.clone());
    match map {
        AlgebraMap::Pi => match s.letter {
            Letter::E => out.add_term(LoopSymbol::f(s.power), one),
            Letter::F => out.add_term(LoopSymbol::e(s.power), one),
            Letter::H => out.add_term(LoopSymbol::h(s.power), one.neg()),
            Letter::C => out.add_term(LoopSymbol::c(), one),
        },
        AlgebraMap::Rho => match s.letter {
            Letter::F => out.add_term(LoopSymbol::e(s.power - 1), one),
            Letter::E => out.add_term(LoopSymbol::f(s.power + 1), one),
            Letter::H if s.power != 0 => out.add_term(LoopSymbol::h(s.power), one.neg()),
            Letter::H => {
                out.add_term(LoopSymbol::c(), one.clone());
                out.add_term(LoopSymbol::h(0), one.neg());
            }
            Letter::C => out.add_term(LoopSymbol::c(), one),
        },
        AlgebraMap::Theta => match s.letter {
            Letter::E => out.add_term(LoopSymbol::f(-s.power), one),
            Letter::F => out.add_term(LoopSymbol::e(-s.power), one),
            Letter::H => out.add_term(LoopSymbol::h(-s.power), one),
            Letter::C => out.add_term(LoopSymbol::c(), one),
        },
    }
    out
}

/// `theta` sends basis symbols to basis symbols; this is the symbol-level
/// version used by the contragradient action and the Shapovalov form.
pub fn theta_symbol(s: LoopSymbol) -> LoopSymbol {
    match s.letter {
        Letter::E => LoopSymbol::f(-s.power),
        Letter::F => LoopSymbol::e(-s.power),
        Letter::H => LoopSymbol::h(-s.power),
        Letter::C => LoopSymbol::c(),
    }
}

pub fn apply_map(map: AlgebraMap, x: &LoopElement) -> LoopElement {
    let mut out = LoopElement::zero(x.pool().clone());
    for (s, c) in x.terms() {
        out = out.add(&apply_map_symbol(x.pool(), map, *s).scale(c));
    }
    out
}
