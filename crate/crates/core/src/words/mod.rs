//! Reduced words in the free group on `x, y`.
//!
//! Capital letters are inverses. Words are kept freely reduced and compare
//! in shortlex order with `x < X < y < Y`.

mod catalog;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use catalog::{
    discover_longitude, discover_relator, LongitudeSearch, RelatorSearch, WordCatalog, RELATOR_CANDIDATE,
};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[repr(u8)]
pub enum Letter {
    X = 0,
    XInv = 1,
    Y = 2,
    YInv = 3,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::X, Letter::XInv, Letter::Y, Letter::YInv];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Letter {
        Self::ALL[i]
    }

    pub fn inverse(self) -> Letter {
        Self::ALL[self.index() ^ 1]
    }

    pub fn as_char(self) -> char {
        ['x', 'X', 'y', 'Y'][self.index()]
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'x' => Some(Letter::X),
            'X' => Some(Letter::XInv),
            'y' => Some(Letter::Y),
            'Y' => Some(Letter::YInv),
            _ => None,
        }
    }
}

/// A freely reduced word; the empty word is the identity.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Word(Vec<Letter>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("bad word syntax at position {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn x() -> Self {
        Self::letter(Letter::X)
    }

    pub fn y() -> Self {
        Self::letter(Letter::Y)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &Self) -> Self {
        Self::from_letters(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        (0..k.unsigned_abs()).fold(Word::identity(), |acc, _| acc.concat(&base))
    }

    /// `a b a⁻¹ b⁻¹`.
    pub fn commutator(a: &Self, b: &Self) -> Self {
        a.concat(b).concat(&a.inverse()).concat(&b.inverse())
    }

    /// The word with its last letter removed.
    pub fn prefix(&self) -> Option<(Word, Letter)> {
        let (last, init) = self.0.split_last()?;
        Some((Word(init.to_vec()), *last))
    }

    /// All cyclic rotations of this word, each freely reduced.
    pub fn rotations(&self) -> Vec<Word> {
        (0..self.len())
            .map(|k| {
                let mut v = self.0[k..].to_vec();
                v.extend_from_slice(&self.0[..k]);
                Word::from_letters(v)
            })
            .collect()
    }

    /// Reads words such as `x y^-1 x`, `xYx`, `x^2 Y^3` or `1`.
    pub fn parse(s: &str) -> Result<Self, ParseError> {
        let chars: Vec<char> = s.chars().collect();
        let mut letters = Vec::new();
        let mut i = 0;
        let err = |pos: usize, msg: &str| ParseError { pos, msg: msg.to_string() };
        let mut saw_one = false;
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() || c == '*' || c == '.' {
                i += 1;
                continue;
            }
            if c == '1' && !saw_one && letters.is_empty() {
                saw_one = true;
                i += 1;
                continue;
            }
            let Some(l) = Letter::from_char(c) else {
                return Err(err(i, &format!("unexpected character {c:?}")));
            };
            i += 1;
            let mut exp: i64 = 1;
            if i < chars.len() && chars[i] == '^' {
                i += 1;
                let start = i;
                if i < chars.len() && (chars[i] == '-' || chars[i] == '+') {
                    i += 1;
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                exp = text.parse().map_err(|_| err(start, "expected an integer exponent after '^'"))?;
            }
            let l = if exp < 0 { l.inverse() } else { l };
            for _ in 0..exp.unsigned_abs() {
                letters.push(l);
            }
        }
        if saw_one && !letters.is_empty() {
            return Err(err(0, "'1' denotes the identity and cannot be combined"));
        }
        Ok(Self::from_letters(letters))
    }
}

impl FromStr for Word {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Word::parse(s)
    }
}

impl TryFrom<String> for Word {
    type Error = ParseError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        Word::parse(&s)
    }
}

impl From<Word> for String {
    fn from(w: Word) -> String {
        w.to_string()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for l in &self.0 {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({})", self)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `1 + Σ_{k=1..r} 4·3^{k−1}`.
pub fn ball_size(radius: usize) -> usize {
    1 + (1..=radius).map(|k| 4 * 3usize.pow(k as u32 - 1)).sum::<usize>()
}

/// Reduced words of length at most `radius`, in shortlex order.
pub fn enumerate_ball(radius: usize) -> Ball {
    Ball { radius, current: Some(Vec::new()) }
}

/// Shortlex iterator over a ball; see [`enumerate_ball`].
#[derive(Clone, Debug)]
pub struct Ball {
    radius: usize,
    current: Option<Vec<u8>>,
}

impl Ball {
    /// Lex-least reduced word of length `n`: `xxx…`.
    fn first_of_length(n: usize) -> Vec<u8> {
        vec![0; n]
    }

    /// Next reduced word of the same length, odometer style.
    fn advance(w: &mut [u8]) -> bool {
        let n = w.len();
        let mut i = n;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            // bump position i to the next letter that doesn't cancel its left neighbour
            let mut c = w[i] + 1;
            while c < 4 && i > 0 && c == w[i - 1] ^ 1 {
                c += 1;
            }
            if c < 4 {
                w[i] = c;
                // refill the tail minimally
                for j in i + 1..n {
                    let mut d = 0;
                    while d == w[j - 1] ^ 1 {
                        d += 1;
                    }
                    w[j] = d;
                }
                return true;
            }
        }
    }
}

impl Iterator for Ball {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let cur = self.current.take()?;
        let out = Word(cur.iter().map(|&i| Letter::from_index(i as usize)).collect());
        let mut nxt = cur;
        if !Self::advance(&mut nxt) {
            let n = nxt.len() + 1;
            if n <= self.radius {
                self.current = Some(Self::first_of_length(n));
            }
        } else {
            self.current = Some(nxt);
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn parse_examples() {
        use Letter::*;
        assert_eq!(w("x y^-1 x").letters(), &[X, YInv, X]);
        assert!(w("x X").is_identity());
        assert_eq!(w("X y x Y"), Word::commutator(&Word::x().inverse(), &Word::y()));
        assert_eq!(w("x^2 Y^3").to_string(), "xxYYY");
        assert_eq!(w("1"), Word::identity());
        assert_eq!(Word::identity().to_string(), "1");
        let e = Word::parse("x z").unwrap_err();
        assert_eq!(e.pos, 2);
        assert!(Word::parse("x^").is_err());
    }

    #[test]
    fn ball_counts() {
        assert_eq!(enumerate_ball(0).count(), 1);
        assert_eq!(enumerate_ball(1).count(), 5);
        assert_eq!(enumerate_ball(2).count(), 17);
        for r in 0..=7 {
            assert_eq!(enumerate_ball(r).count(), ball_size(r));
        }
    }

    // brute force: all sequences over 4 letters, keep the reduced ones
    fn brute_ball(r: usize) -> Vec<Word> {
        let mut out = vec![Word::identity()];
        let mut layer: Vec<Vec<Letter>> = vec![vec![]];
        for _ in 0..r {
            let mut next = Vec::new();
            for s in &layer {
                for l in Letter::ALL {
                    let mut t = s.clone();
                    t.push(l);
                    next.push(t);
                }
            }
            for s in &next {
                let red = Word::from_letters(s.clone());
                if red.len() == s.len() {
                    out.push(red);
                }
            }
            layer = next;
        }
        out.sort();
        out
    }

    #[test]
    fn ball_matches_brute_force_and_is_sorted() {
        for r in 0..=5 {
            let got: Vec<Word> = enumerate_ball(r).collect();
            assert!(got.windows(2).all(|p| p[0] < p[1]));
            assert_eq!(got, brute_ball(r));
        }
    }

    #[test]
    fn shortlex_order() {
        assert!(w("x") < w("X"));
        assert!(w("X") < w("y"));
        assert!(w("Y") < w("xx"));
        assert!(w("xY") < w("yy"));
    }

    fn arb_word() -> impl Strategy<Value = Word> {
        proptest::collection::vec(0usize..4, 0..20)
            .prop_map(|v| Word::from_letters(v.into_iter().map(Letter::from_index)))
    }

    proptest! {
        #[test]
        fn reduction_is_idempotent(v in proptest::collection::vec(0usize..4, 0..30)) {
            let once = Word::from_letters(v.into_iter().map(Letter::from_index));
            let twice = Word::from_letters(once.letters().to_vec());
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn inverse_cancels(a in arb_word()) {
            prop_assert!(a.concat(&a.inverse()).is_identity());
            prop_assert!(a.inverse().concat(&a).is_identity());
        }

        #[test]
        fn print_parse_round_trip(a in arb_word()) {
            prop_assert_eq!(Word::parse(&a.to_string()).unwrap(), a);
        }
    }
}
