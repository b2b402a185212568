use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::address::{Axis, TersquareAddress, Word};
use super::GammaError;

/// A vertex of the compound: local label `(a, b)` in tersquare `address`, in canonical form
/// (`wx` does not end with `a`, `wy` does not end with `b`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct GammaVertex {
    pub address: TersquareAddress,
    pub a: u8,
    pub b: u8,
}

/// Moves `(J, a, b)` to its canonical tersquare. Idempotent.
pub fn canonical_vertex(j: &TersquareAddress, a: u8, b: u8) -> GammaVertex {
    let mut address = j.clone();
    if address.wx.last() == Some(a) {
        address = address.glue(Axis::X, a);
    }
    if address.wy.last() == Some(b) {
        address = address.glue(Axis::Y, b);
    }
    GammaVertex { address, a, b }
}

/// The 9 vertices of a tersquare, in label order.
pub fn tersquare_vertices(j: &TersquareAddress) -> Vec<GammaVertex> {
    let mut out = Vec::with_capacity(9);
    for a in 0..3 {
        for b in 0..3 {
            out.push(canonical_vertex(j, a, b));
        }
    }
    out
}

impl GammaVertex {
    pub fn new(j: &TersquareAddress, a: u8, b: u8) -> Result<Self, GammaError> {
        if a > 2 || b > 2 {
            return Err(GammaError::BadLetter(a.max(b)));
        }
        Ok(canonical_vertex(j, a, b))
    }

    /// The four tersquares containing this vertex.
    pub fn tersquares(&self) -> [TersquareAddress; 4] {
        let j = &self.address;
        let jx = j.glue(Axis::X, self.a);
        let jy = j.glue(Axis::Y, self.b);
        let jxy = jx.glue(Axis::Y, self.b);
        [j.clone(), jx, jy, jxy]
    }

    /// Row and column mates in each containing tersquare: 8 vertices, sorted.
    pub fn neighbors(&self) -> Vec<GammaVertex> {
        let mut out = Vec::with_capacity(16);
        for t in self.tersquares() {
            for s in 0..3 {
                if s != self.a {
                    out.push(canonical_vertex(&t, s, self.b));
                }
                if s != self.b {
                    out.push(canonical_vertex(&t, self.a, s));
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn id(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for GammaVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}|{}|{}", self.address.wx, self.address.wy, self.a, self.b)
    }
}

impl FromStr for GammaVertex {
    type Err = GammaError;

    /// Parses `wx|wy|a|b`; the result must already be canonical.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GammaError::BadId(s.to_string());
        let parts: Vec<&str> = s.split('|').collect();
        let [wx, wy, a, b] = parts.as_slice() else {
            return Err(bad());
        };
        let letter = |t: &str| match t {
            "0" => Ok(0u8),
            "1" => Ok(1),
            "2" => Ok(2),
            _ => Err(bad()),
        };
        let j = TersquareAddress::new(wx.parse::<Word>()?, wy.parse::<Word>()?);
        let v = GammaVertex {
            address: j,
            a: letter(a)?,
            b: letter(b)?,
        };
        if canonical_vertex(&v.address, v.a, v.b) != v {
            return Err(GammaError::NotCanonical(s.to_string()));
        }
        Ok(v)
    }
}

impl TryFrom<String> for GammaVertex {
    type Error = GammaError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<GammaVertex> for String {
    fn from(v: GammaVertex) -> String {
        v.to_string()
    }
}

/// 0 if equal; the Hamming distance of the labels if the two share a tersquare; 3 otherwise.
pub fn gamma_truncated_distance(u: &GammaVertex, v: &GammaVertex) -> usize {
    if u == v {
        return 0;
    }
    let tu = u.tersquares();
    let shared = v.tersquares().iter().any(|t| tu.contains(t));
    if shared {
        usize::from(u.a != v.a) + usize::from(u.b != v.b)
    } else {
        3
    }
}
