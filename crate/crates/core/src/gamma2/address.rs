use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::GammaError;

/// A reduced word over `{0,1,2}`: no two adjacent letters are equal.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: impl Into<Vec<u8>>) -> Result<Self, GammaError> {
        let letters = letters.into();
        if let Some(&l) = letters.iter().find(|&&l| l > 2) {
            return Err(GammaError::BadLetter(l));
        }
        if letters.windows(2).any(|w| w[0] == w[1]) {
            return Err(GammaError::NotReduced(
                letters.iter().map(|l| char::from(b'0' + l)).collect(),
            ));
        }
        Ok(Word(letters))
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<u8> {
        self.0.last().copied()
    }

    /// Appends `s`, or cancels it against an equal last letter.
    pub fn glue(&self, s: u8) -> Word {
        let mut w = self.0.clone();
        if w.last() == Some(&s) {
            w.pop();
        } else {
            w.push(s);
        }
        Word(w)
    }

    /// All reduced words of length at most `max_len`, shortest first, then lexicographic.
    pub fn all_up_to(max_len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        let mut layer = vec![Word::empty()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for s in 0..3 {
                    if w.last() != Some(s) {
                        next.push(w.glue(s));
                    }
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("-");
        }
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = GammaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "-" {
            return Ok(Word::empty());
        }
        let letters = s
            .bytes()
            .map(|c| match c {
                b'0'..=b'2' => Ok(c - b'0'),
                _ => Err(GammaError::BadId(s.to_string())),
            })
            .collect::<Result<Vec<u8>, _>>()?;
        if letters.is_empty() {
            return Err(GammaError::BadId(s.to_string()));
        }
        Word::new(letters)
    }
}

impl TryFrom<String> for Word {
    type Error = GammaError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Word> for String {
    fn from(w: Word) -> String {
        w.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

/// A tersquare, named by the glueings that lead to it from the central one.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TersquareAddress {
    pub wx: Word,
    pub wy: Word,
}

impl TersquareAddress {
    pub fn root() -> Self {
        Self::default()
    }

    pub fn new(wx: Word, wy: Word) -> Self {
        TersquareAddress { wx, wy }
    }

    /// Parses two letter strings, e.g. `("0", "12")`; empty strings mean empty words.
    pub fn parse(wx: &str, wy: &str) -> Result<Self, GammaError> {
        let w = |s: &str| if s.is_empty() { Ok(Word::empty()) } else { s.parse() };
        Ok(TersquareAddress::new(w(wx)?, w(wy)?))
    }

    /// The tersquare across triangle `s` of the given axis. An involution.
    pub fn glue(&self, axis: Axis, s: u8) -> Self {
        match axis {
            Axis::X => TersquareAddress::new(self.wx.glue(s), self.wy.clone()),
            Axis::Y => TersquareAddress::new(self.wx.clone(), self.wy.glue(s)),
        }
    }

    /// `|wx| + |wy|`.
    pub fn depth(&self) -> usize {
        self.wx.len() + self.wy.len()
    }

    /// The six tersquares sharing a triangle with this one.
    pub fn glued_neighbors(&self) -> Vec<TersquareAddress> {
        let mut out = Vec::with_capacity(6);
        for axis in [Axis::X, Axis::Y] {
            for s in 0..3 {
                out.push(self.glue(axis, s));
            }
        }
        out
    }

    /// Every address with `|wx| + |wy| <= max_depth`.
    pub fn all_up_to(max_depth: usize) -> Vec<TersquareAddress> {
        let words = Word::all_up_to(max_depth);
        let mut out = Vec::new();
        for wx in &words {
            for wy in &words {
                if wx.len() + wy.len() <= max_depth {
                    out.push(TersquareAddress::new(wx.clone(), wy.clone()));
                }
            }
        }
        out.sort();
        out
    }
}

impl fmt::Display for TersquareAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}|{}]", self.wx, self.wy)
    }
}

/// `glue` as a free function.
pub fn glue(j: &TersquareAddress, axis: Axis, s: u8) -> TersquareAddress {
    j.glue(axis, s)
}
