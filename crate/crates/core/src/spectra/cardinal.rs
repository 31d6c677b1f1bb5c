use std::fmt;
use std::str::FromStr;

/// Finite, countably infinite, or continuum. Every uncountable value is
/// collapsed to `Continuum`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtCardinal {
    Fin(u64),
    Omega,
    Continuum,
}

use ExtCardinal::{Continuum, Fin, Omega};

impl ExtCardinal {
    pub fn is_finite(self) -> bool {
        matches!(self, Fin(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Fin(n) => Some(n),
            _ => None,
        }
    }

    /// `None` only on `u64` overflow of two finite values.
    pub fn checked_add(self, other: Self) -> Option<Self> {
        match (self, other) {
            (Fin(a), Fin(b)) => a.checked_add(b).map(Fin),
            _ => Some(self.max(other)),
        }
    }

    /// Cardinal product; zero annihilates even infinite factors.
    pub fn checked_mul(self, other: Self) -> Option<Self> {
        match (self, other) {
            (Fin(0), _) | (_, Fin(0)) => Some(Fin(0)),
            (Fin(a), Fin(b)) => a.checked_mul(b).map(Fin),
            _ => Some(self.max(other)),
        }
    }

    /// `2^self`.
    pub fn checked_pow2(self) -> Option<Self> {
        match self {
            Fin(n) => 1u64.checked_shl(u32::try_from(n).ok()?).map(Fin),
            Omega | Continuum => Some(Continuum),
        }
    }
}

impl fmt::Display for ExtCardinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fin(n) => write!(f, "{n}"),
            Omega => f.write_str("omega"),
            Continuum => f.write_str("continuum"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not a cardinal: `{0}` (expected a number, `omega` or `continuum`)")]
pub struct ParseCardinalError(pub String);

impl FromStr for ExtCardinal {
    type Err = ParseCardinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "omega" | "w" => Ok(Omega),
            "continuum" | "c" | "2^omega" => Ok(Continuum),
            t => t
                .parse()
                .map(Fin)
                .map_err(|_| ParseCardinalError(s.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order() {
        assert!(Fin(u64::MAX) < Omega);
        assert!(Omega < Continuum);
        assert_eq!(Fin(3).min(Omega), Fin(3));
    }

    #[test]
    fn arithmetic() {
        assert_eq!(Fin(3).checked_mul(Fin(3)), Some(Fin(9)));
        assert_eq!(Fin(2).checked_mul(Omega), Some(Omega));
        assert_eq!(Omega.checked_mul(Continuum), Some(Continuum));
        assert_eq!(Fin(0).checked_mul(Continuum), Some(Fin(0)));
        assert_eq!(Fin(5).checked_add(Omega), Some(Omega));
        assert_eq!(Fin(u64::MAX).checked_add(Fin(1)), None);
        assert_eq!(Fin(10).checked_pow2(), Some(Fin(1024)));
        assert_eq!(Fin(64).checked_pow2(), None);
        assert_eq!(Omega.checked_pow2(), Some(Continuum));
    }

    #[test]
    fn text() {
        for v in [Fin(0), Fin(17), Omega, Continuum] {
            assert_eq!(v.to_string().parse::<ExtCardinal>().unwrap(), v);
        }
        assert!("-1".parse::<ExtCardinal>().is_err());
    }
}
