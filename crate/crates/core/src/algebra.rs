//! The torus algebra: two idempotents, six Reeb chords, and the
//! multiplication between them.
//!
//! Elements are stored as 8-bit masks over the basis
//! `{i0, i1, r1, r2, r3, r12, r23, r123}`; addition over F₂ is XOR.

use std::fmt;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Idempotent {
    I0,
    I1,
}

impl Idempotent {
    pub const ALL: [Idempotent; 2] = [Idempotent::I0, Idempotent::I1];

    pub fn token(self) -> &'static str {
        match self {
            Idempotent::I0 => "i0",
            Idempotent::I1 => "i1",
        }
    }

    pub fn from_token(tok: &str) -> Result<Self, Error> {
        match tok.trim() {
            "i0" => Ok(Idempotent::I0),
            "i1" => Ok(Idempotent::I1),
            other => Err(Error::Parse(format!("unknown idempotent `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Chord {
    R1,
    R2,
    R3,
    R12,
    R23,
    R123,
}

impl Chord {
    pub const ALL: [Chord; 6] = [Chord::R1, Chord::R2, Chord::R3, Chord::R12, Chord::R23, Chord::R123];

    /// The `(left, right)` idempotents with `left · ρ = ρ · right = ρ`.
    pub fn idempotents(self) -> (Idempotent, Idempotent) {
        use Idempotent::*;
        match self {
            Chord::R1 => (I0, I1),
            Chord::R2 => (I1, I0),
            Chord::R3 => (I0, I1),
            Chord::R12 => (I0, I0),
            Chord::R23 => (I1, I1),
            Chord::R123 => (I0, I1),
        }
    }

    pub fn left(self) -> Idempotent {
        self.idempotents().0
    }

    pub fn right(self) -> Idempotent {
        self.idempotents().1
    }

    /// Product of two chords, if nonzero.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Chord) -> Option<Chord> {
        use Chord::*;
        match (self, other) {
            (R1, R2) => Some(R12),
            (R2, R3) => Some(R23),
            (R1, R23) | (R12, R3) => Some(R123),
            _ => None,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            Chord::R1 => "r1",
            Chord::R2 => "r2",
            Chord::R3 => "r3",
            Chord::R12 => "r12",
            Chord::R23 => "r23",
            Chord::R123 => "r123",
        }
    }

    pub fn from_token(tok: &str) -> Result<Self, Error> {
        match Basis::from_token(tok)? {
            Basis::Chord(c) => Ok(c),
            Basis::Idem(_) => Err(Error::Parse(format!("expected a chord, found idempotent `{tok}`"))),
        }
    }
}

pub fn chord_idempotents(c: Chord) -> (Idempotent, Idempotent) {
    c.idempotents()
}

/// One of the eight basis elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    Idem(Idempotent),
    Chord(Chord),
}

impl Basis {
    pub const ALL: [Basis; 8] = [
        Basis::Idem(Idempotent::I0),
        Basis::Idem(Idempotent::I1),
        Basis::Chord(Chord::R1),
        Basis::Chord(Chord::R2),
        Basis::Chord(Chord::R3),
        Basis::Chord(Chord::R12),
        Basis::Chord(Chord::R23),
        Basis::Chord(Chord::R123),
    ];

    pub fn index(self) -> usize {
        match self {
            Basis::Idem(Idempotent::I0) => 0,
            Basis::Idem(Idempotent::I1) => 1,
            Basis::Chord(c) => 2 + c as usize,
        }
    }

    pub fn from_index(i: usize) -> Basis {
        Basis::ALL[i]
    }

    pub fn idempotents(self) -> (Idempotent, Idempotent) {
        match self {
            Basis::Idem(i) => (i, i),
            Basis::Chord(c) => c.idempotents(),
        }
    }

    pub fn is_idempotent(self) -> bool {
        matches!(self, Basis::Idem(_))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Basis) -> Option<Basis> {
        match (self, other) {
            (Basis::Idem(a), Basis::Idem(b)) => (a == b).then_some(self),
            (Basis::Idem(a), Basis::Chord(c)) => (c.left() == a).then_some(other),
            (Basis::Chord(c), Basis::Idem(b)) => (c.right() == b).then_some(self),
            (Basis::Chord(a), Basis::Chord(b)) => a.mul(b).map(Basis::Chord),
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            Basis::Idem(i) => i.token(),
            Basis::Chord(c) => c.token(),
        }
    }

    pub fn from_token(tok: &str) -> Result<Self, Error> {
        let b = match tok.trim() {
            "i0" => Basis::Idem(Idempotent::I0),
            "i1" => Basis::Idem(Idempotent::I1),
            "r1" => Basis::Chord(Chord::R1),
            "r2" => Basis::Chord(Chord::R2),
            "r3" => Basis::Chord(Chord::R3),
            "r12" => Basis::Chord(Chord::R12),
            "r23" => Basis::Chord(Chord::R23),
            "r123" => Basis::Chord(Chord::R123),
            other => return Err(Error::Parse(format!("unknown algebra token `{other}`"))),
        };
        Ok(b)
    }
}

impl From<Chord> for Basis {
    fn from(c: Chord) -> Self {
        Basis::Chord(c)
    }
}

impl From<Idempotent> for Basis {
    fn from(i: Idempotent) -> Self {
        Basis::Idem(i)
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// An F₂-linear combination of basis elements.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraElement(u8);

impl AlgebraElement {
    pub const ZERO: AlgebraElement = AlgebraElement(0);
    pub const ONE: AlgebraElement = AlgebraElement(0b11);

    pub fn from_bits(bits: u8) -> Self {
        AlgebraElement(bits)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, b: Basis) -> bool {
        self.0 & (1 << b.index()) != 0
    }

    pub fn terms(self) -> impl Iterator<Item = Basis> {
        (0..8).filter(move |i| self.0 & (1 << i) != 0).map(Basis::from_index)
    }
}

impl From<Basis> for AlgebraElement {
    fn from(b: Basis) -> Self {
        AlgebraElement(1 << b.index())
    }
}

impl From<Chord> for AlgebraElement {
    fn from(c: Chord) -> Self {
        Basis::Chord(c).into()
    }
}

impl Add for AlgebraElement {
    type Output = AlgebraElement;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Self) -> Self {
        AlgebraElement(self.0 ^ rhs.0)
    }
}

impl AddAssign for AlgebraElement {
    #[allow(clippy::suspicious_op_assign_impl)]
    fn add_assign(&mut self, rhs: Self) {
        self.0 ^= rhs.0;
    }
}

impl Mul for AlgebraElement {
    type Output = AlgebraElement;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Self) -> Self {
        let mut out = AlgebraElement::ZERO;
        for a in self.terms() {
            for b in rhs.terms() {
                if let Some(p) = a.mul(b) {
                    out += p.into();
                }
            }
        }
        out
    }
}

pub fn mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement {
    a * b
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let toks: Vec<&str> = self.terms().map(Basis::token).collect();
        f.write_str(&toks.join("+"))
    }
}

/// Parses a `+`-separated sum such as `r1+r3`, `1` or `0`.
pub fn parse_element(text: &str) -> Result<AlgebraElement, Error> {
    let mut out = AlgebraElement::ZERO;
    for tok in text.split('+') {
        match tok.trim() {
            "0" => {}
            "1" => out += AlgebraElement::ONE,
            "" => return Err(Error::Parse(format!("empty summand in `{text}`"))),
            t => out += Basis::from_token(t)?.into(),
        }
    }
    Ok(out)
}

impl FromStr for AlgebraElement {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        parse_element(s)
    }
}
