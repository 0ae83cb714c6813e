use std::fmt;
use std::ops::{Mul, Neg};

use serde::{Deserialize, Serialize};

/// One of the two players, encoded as `-1` (Alice) or `+1` (Bob).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PlayerSign {
    /// `-1`, Alice.
    Alice,
    /// `+1`, Bob.
    Bob,
}

impl PlayerSign {
    pub const fn value(self) -> i32 {
        match self {
            PlayerSign::Alice => -1,
            PlayerSign::Bob => 1,
        }
    }

    pub fn from_value(value: i32) -> Option<Self> {
        match value {
            -1 => Some(PlayerSign::Alice),
            1 => Some(PlayerSign::Bob),
            _ => None,
        }
    }

    pub const fn letter(self) -> char {
        match self {
            PlayerSign::Alice => 'A',
            PlayerSign::Bob => 'B',
        }
    }

    pub fn render(self, alphabet: Alphabet) -> &'static str {
        match (alphabet, self) {
            (Alphabet::Letters, PlayerSign::Alice) => "A",
            (Alphabet::Letters, PlayerSign::Bob) => "B",
            (Alphabet::PlusMinus, PlayerSign::Alice) => "-1",
            (Alphabet::PlusMinus, PlayerSign::Bob) => "+1",
            (Alphabet::Binary, PlayerSign::Alice) => "1",
            (Alphabet::Binary, PlayerSign::Bob) => "0",
            (Alphabet::BinaryAliceZero, PlayerSign::Alice) => "0",
            (Alphabet::BinaryAliceZero, PlayerSign::Bob) => "1",
        }
    }
}

impl Neg for PlayerSign {
    type Output = PlayerSign;

    fn neg(self) -> PlayerSign {
        match self {
            PlayerSign::Alice => PlayerSign::Bob,
            PlayerSign::Bob => PlayerSign::Alice,
        }
    }
}

impl Mul for PlayerSign {
    type Output = PlayerSign;

    fn mul(self, rhs: PlayerSign) -> PlayerSign {
        if self == rhs {
            PlayerSign::Bob
        } else {
            PlayerSign::Alice
        }
    }
}

impl fmt::Display for PlayerSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// How a sequence of [`PlayerSign`]s is written out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Alphabet {
    /// `A` / `B`.
    #[default]
    Letters,
    /// `-1` / `+1`, comma separated when rendered as a word.
    PlusMinus,
    /// Alice `1`, Bob `0`, the digit convention of duel expansions.
    Binary,
    /// Alice `0`, Bob `1`: `-1` to 0 and `+1` to 1.
    BinaryAliceZero,
}

/// Renders a whole word. `PlusMinus` terms are comma separated, the other
/// alphabets are concatenated.
pub fn render_word(signs: &[PlayerSign], alphabet: Alphabet) -> String {
    let sep = if alphabet == Alphabet::PlusMinus { "," } else { "" };
    signs
        .iter()
        .map(|s| s.render(alphabet))
        .collect::<Vec<_>>()
        .join(sep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negation_is_an_involution() {
        for s in [PlayerSign::Alice, PlayerSign::Bob] {
            assert_eq!(-(-s), s);
            assert_ne!(-s, s);
            assert_eq!((-s).value(), -s.value());
            assert_eq!(PlayerSign::from_value(s.value()), Some(s));
        }
        assert_eq!(PlayerSign::from_value(0), None);
    }

    #[test]
    fn product_matches_integers() {
        for a in [PlayerSign::Alice, PlayerSign::Bob] {
            for b in [PlayerSign::Alice, PlayerSign::Bob] {
                assert_eq!((a * b).value(), a.value() * b.value());
            }
        }
    }

    #[test]
    fn word_rendering() {
        use PlayerSign::*;
        let w = [Alice, Bob, Bob, Alice];
        assert_eq!(render_word(&w, Alphabet::Letters), "ABBA");
        assert_eq!(render_word(&w, Alphabet::Binary), "1001");
        assert_eq!(render_word(&w, Alphabet::BinaryAliceZero), "0110");
        assert_eq!(render_word(&w, Alphabet::PlusMinus), "-1,+1,+1,-1");
    }
}
