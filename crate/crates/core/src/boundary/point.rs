//! Boundary points given by a rule that produces arbitrarily long prefixes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundaryPoint {
    /// `a b a b² a b³ …`, an aperiodic point.
    AbPowers,
    /// `head · cycle · cycle · …`
    Periodic { head: Word, cycle: Word },
    /// `g · base`
    Translate { g: Word, base: Box<BoundaryPoint> },
}

impl BoundaryPoint {
    pub fn periodic(head: Word, cycle: Word) -> Result<Self> {
        let p = BoundaryPoint::Periodic { head, cycle };
        p.validate()?;
        Ok(p)
    }

    pub fn translate(&self, g: &Word) -> Self {
        BoundaryPoint::Translate { g: g.clone(), base: Box::new(self.clone()) }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            BoundaryPoint::AbPowers => Ok(()),
            BoundaryPoint::Periodic { head, cycle } => {
                let (Some(first), Some(last)) = (cycle.first(), cycle.last()) else {
                    return Err(Error::Invalid("periodic point with empty cycle".into()));
                };
                if last == first.inverse() || head.last().is_some_and(|h| h == first.inverse()) {
                    return Err(Error::Invalid(format!("periodic point {head}({cycle})^∞ is not reduced")));
                }
                Ok(())
            }
            BoundaryPoint::Translate { base, .. } => base.validate(),
        }
    }

    /// The reduced prefix of length `k`.
    pub fn prefix(&self, k: usize) -> Word {
        match self {
            BoundaryPoint::AbPowers => {
                let mut letters = Vec::with_capacity(k);
                let mut run = 1;
                while letters.len() < k {
                    letters.push(Letter::A);
                    letters.extend(std::iter::repeat_n(Letter::B, run));
                    run += 1;
                }
                letters.truncate(k);
                Word::reduce(letters)
            }
            BoundaryPoint::Periodic { head, cycle } => {
                let letters = head.letters().iter().chain(cycle.letters().iter().cycle()).take(k).copied();
                Word::reduce(letters)
            }
            BoundaryPoint::Translate { g, base } => g.mul(&base.prefix(k + g.len())).prefix(k),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ab_powers_prefix() {
        assert_eq!(BoundaryPoint::AbPowers.prefix(7).to_string(), "ababbab");
    }

    #[test]
    fn translate_prefix() {
        let z = BoundaryPoint::AbPowers.translate(&Word::parse("BA").unwrap());
        assert_eq!(z.prefix(3).to_string(), "abb");
    }

    #[test]
    fn periodic_validation() {
        let w = |s| Word::parse(s).unwrap();
        assert!(BoundaryPoint::periodic(w("b"), w("aB")).is_ok());
        assert!(BoundaryPoint::periodic(w("B"), w("ab")).is_ok());
        assert!(BoundaryPoint::periodic(w("A"), w("ab")).is_err());
        assert!(BoundaryPoint::periodic(w(""), w("abA")).is_err());
    }
}
