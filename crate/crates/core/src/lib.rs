//! Exact computations of wild-ramification invariants for rank-one Artin–Schreier
//! sheaves on surfaces: Swan conductors along curve germs, vanishing-cycle dimensions,
//! blowup statistics, `ep`/codifferent invariants and depth bounds.

pub mod blowup;
pub mod bounds;
pub mod exactalg;
pub mod ideals;
pub mod localgeom;
pub mod ramification;
pub mod sweep;

use std::fmt;

/// A natural number or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtNat {
    Finite(u64),
    Infinity,
}

impl ExtNat {
    pub fn finite(self) -> Option<u64> {
        match self {
            ExtNat::Finite(n) => Some(n),
            ExtNat::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == ExtNat::Infinity
    }
}

impl std::ops::Add for ExtNat {
    type Output = ExtNat;
    fn add(self, o: ExtNat) -> ExtNat {
        match (self, o) {
            (ExtNat::Finite(a), ExtNat::Finite(b)) => ExtNat::Finite(a + b),
            _ => ExtNat::Infinity,
        }
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Finite(n) => write!(f, "{n}"),
            ExtNat::Infinity => write!(f, "inf"),
        }
    }
}
