//! Young diagrams inside the `k x (n-k)` box, the cyclic `Z/n` action on
//! them, and the upper triangular classifications used to pick one
//! representative per orbit.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::binomial;

/// The `k x (n-k)` rectangle that indexes the Grassmannian `G(k, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Rect {
    k: usize,
    n: usize,
}

impl Rect {
    pub fn new(k: i64, n: i64) -> Result<Self> {
        if k < 1 || n <= k {
            return Err(Error::InvalidBox { k, n });
        }
        Ok(Rect { k: k as usize, n: n as usize })
    }

    /// Zero-width box; only reachable through [`theta`] with `m = 1`.
    pub(crate) fn square(k: usize) -> Self {
        Rect { k, n: k }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn width(&self) -> usize {
        self.n - self.k
    }

    /// Dimension `k(n-k)` of the Grassmannian.
    pub fn dim(&self) -> usize {
        self.k * self.width()
    }

    pub fn gcd(&self) -> usize {
        num_integer::gcd(self.k, self.n)
    }

    /// Number of diagrams in the box, `C(n, k)`.
    pub fn count(&self) -> u64 {
        binomial(self.n as i64, self.k as i64)
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G({},{})", self.k, self.n)
    }
}

/// A Young diagram with at most `k` rows and `n-k` columns, stored with
/// explicit trailing zeros. Orders lexicographically on its parts.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoxedDiagram {
    parts: Vec<usize>,
    rect: Rect,
}

impl BoxedDiagram {
    pub fn new(rect: Rect, parts: Vec<usize>) -> Result<Self> {
        let fits = parts.len() == rect.k
            && parts.first().is_none_or(|&p| p <= rect.width())
            && parts.windows(2).all(|w| w[0] >= w[1]);
        if !fits {
            return Err(Error::InvalidDiagram {
                parts: parts.iter().map(|&p| p as i64).collect(),
                k: rect.k,
                width: rect.width(),
            });
        }
        Ok(BoxedDiagram { parts, rect })
    }

    /// Accepts a possibly trimmed list of parts and pads it with zeros.
    pub fn padded(rect: Rect, parts: &[usize]) -> Result<Self> {
        let mut parts = parts.to_vec();
        if parts.len() < rect.k {
            parts.resize(rect.k, 0);
        }
        Self::new(rect, parts)
    }

    pub fn empty(rect: Rect) -> Self {
        BoxedDiagram { parts: vec![0; rect.k], rect }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn rect(&self) -> Rect {
        self.rect
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.iter().all(|&p| p == 0)
    }

    /// Componentwise inclusion of Young diagrams, `self ⊆ other`.
    pub fn is_contained_in(&self, other: &BoxedDiagram) -> bool {
        self.parts.iter().zip(&other.parts).all(|(a, b)| a <= b)
    }

    /// `k λ_i <= (n-k)(k-i)` for every row `i` (1-based).
    pub fn is_upper(&self) -> bool {
        let (k, w) = (self.rect.k, self.rect.width());
        self.parts
            .iter()
            .enumerate()
            .all(|(i, &p)| k * p <= w * (k - i - 1))
    }

    /// Upper triangular with strict inequalities in rows `1..k-1`.
    pub fn is_strictly_upper(&self) -> bool {
        let (k, w) = (self.rect.k, self.rect.width());
        self.is_upper()
            && self.parts[..k - 1]
                .iter()
                .enumerate()
                .all(|(i, &p)| k * p < w * (k - i - 1))
    }

    pub fn is_minimal_upper(&self) -> bool {
        self.is_upper() && orbit_of(self).representative == *self
    }

    /// Parts as signed integers, the form used by weight arithmetic.
    pub fn to_weight_entries(&self) -> Vec<i64> {
        self.parts.iter().map(|&p| p as i64).collect()
    }

    /// Boundary path from the lower-left to the upper-right corner:
    /// `1` is a horizontal step, `0` a vertical one. Exactly `k` zeros.
    pub fn to_word(&self) -> Vec<u8> {
        let mut word = Vec::with_capacity(self.rect.n);
        let mut x = 0;
        for &p in self.parts.iter().rev() {
            word.extend(std::iter::repeat_n(1, p - x));
            word.push(0);
            x = p;
        }
        word.extend(std::iter::repeat_n(1, self.rect.width() - x));
        word
    }

    pub fn from_word(rect: Rect, word: &[u8]) -> Result<Self> {
        let zeros = word.iter().filter(|&&b| b == 0).count();
        if word.len() != rect.n || zeros != rect.k || word.iter().any(|&b| b > 1) {
            return Err(Error::Precondition(format!(
                "word {word:?} does not encode a path in {rect}"
            )));
        }
        let mut parts = Vec::with_capacity(rect.k);
        let mut x = 0;
        for &b in word {
            if b == 1 {
                x += 1;
            } else {
                parts.push(x);
            }
        }
        parts.reverse();
        Self::new(rect, parts)
    }
}

impl fmt::Debug for BoxedDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.parts)
    }
}

impl fmt::Display for BoxedDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", body.join(","))
    }
}

impl Serialize for BoxedDiagram {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(serializer)
    }
}

/// The generator of the cyclic action: add a column if there is room,
/// otherwise drop the first row.
pub fn cyclic_step(d: &BoxedDiagram) -> BoxedDiagram {
    let rect = d.rect;
    let parts = if d.parts.first().is_none_or(|&p| p < rect.width()) {
        d.parts.iter().map(|p| p + 1).collect()
    } else {
        let mut p: Vec<usize> = d.parts[1..].to_vec();
        p.push(0);
        p
    };
    BoxedDiagram { parts, rect }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    /// The lexicographically smallest upper triangular member.
    pub representative: BoxedDiagram,
    /// Successive images under [`cyclic_step`], starting at the input.
    pub members: Vec<BoxedDiagram>,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

pub fn orbit_of(d: &BoxedDiagram) -> Orbit {
    let mut members = vec![d.clone()];
    let mut cur = cyclic_step(d);
    while cur != *d {
        let next = cyclic_step(&cur);
        members.push(cur);
        cur = next;
    }
    let representative = members
        .iter()
        .filter(|m| m.is_upper())
        .min()
        .cloned()
        .expect("every orbit has an upper triangular member");
    Orbit { representative, members }
}

/// Orbit length `o(λ)`.
pub fn orbit_length(d: &BoxedDiagram) -> usize {
    let mut len = 1;
    let mut cur = cyclic_step(d);
    while cur != *d {
        cur = cyclic_step(&cur);
        len += 1;
    }
    len
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Filter {
    All,
    Upper,
    StrictlyUpper,
    MinimalUpper,
    ShortMinimalUpper,
}

impl std::str::FromStr for Filter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Filter::All),
            "upper" => Ok(Filter::Upper),
            "strictly_upper" | "strictly-upper" => Ok(Filter::StrictlyUpper),
            "minimal_upper" | "minimal-upper" => Ok(Filter::MinimalUpper),
            "short_minimal_upper" | "short-minimal-upper" | "short" => Ok(Filter::ShortMinimalUpper),
            _ => Err(Error::Precondition(format!("unknown diagram filter {s:?}"))),
        }
    }
}

/// All diagrams in the box passing `filter`, in ascending lexicographic order.
pub fn enumerate(rect: Rect, filter: Filter) -> Vec<BoxedDiagram> {
    let mut all = Vec::with_capacity(rect.count() as usize);
    let mut cur = Vec::with_capacity(rect.k);
    fill(rect, rect.width(), &mut cur, &mut all);
    match filter {
        Filter::All => all,
        Filter::Upper => all.into_iter().filter(|d| d.is_upper()).collect(),
        Filter::StrictlyUpper => all.into_iter().filter(|d| d.is_strictly_upper()).collect(),
        Filter::MinimalUpper => all.into_iter().filter(|d| d.is_minimal_upper()).collect(),
        Filter::ShortMinimalUpper => all
            .into_iter()
            .filter(|d| d.is_minimal_upper() && orbit_length(d) < rect.n)
            .collect(),
    }
}

fn fill(rect: Rect, max: usize, cur: &mut Vec<usize>, out: &mut Vec<BoxedDiagram>) {
    if cur.len() == rect.k {
        out.push(BoxedDiagram { parts: cur.clone(), rect });
        return;
    }
    for p in 0..=max {
        cur.push(p);
        fill(rect, p, cur, out);
        cur.pop();
    }
}

/// Upper triangular diagrams that are not the minimal representative of
/// their orbit.
pub fn non_minimal_upper(rect: Rect) -> Vec<BoxedDiagram> {
    let minimal: BTreeSet<BoxedDiagram> = enumerate(rect, Filter::MinimalUpper).into_iter().collect();
    enumerate(rect, Filter::Upper)
        .into_iter()
        .filter(|d| !minimal.contains(d))
        .collect()
}

/// `θ_{k,km} = ((k-1)(m-1), (k-2)(m-1), ..., m-1, 0)` in `Y_{k,km}`.
pub fn theta(k: usize, m: usize) -> Result<BoxedDiagram> {
    if k < 1 || m < 1 {
        return Err(Error::Precondition(format!("theta needs k, m >= 1 (got {k}, {m})")));
    }
    let rect = if m == 1 { Rect::square(k) } else { Rect { k, n: k * m } };
    let parts = (0..k).map(|i| (k - 1 - i) * (m - 1)).collect();
    BoxedDiagram::new(rect, parts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankMethod {
    Mobius,
    BruteForce,
}

/// Number of diagrams whose cyclic orbit is shorter than `n`.
pub fn residual_rank(rect: Rect, method: RankMethod) -> u64 {
    match method {
        RankMethod::Mobius => {
            let g = rect.gcd() as i64;
            let (k, n) = (rect.k as i64, rect.n as i64);
            let total: i64 = (2..=g)
                .filter(|d| g % d == 0)
                .map(|d| mobius(d as u64) * binomial(n / d, k / d) as i64)
                .sum();
            u64::try_from(-total).expect("residual rank is non-negative")
        }
        RankMethod::BruteForce => short_words(rect.k, rect.n),
    }
}

/// Counts length-`n` binary words with `k` zeros whose rotation orbit is
/// not free.
fn short_words(k: usize, n: usize) -> u64 {
    assert!(n < 64);
    let mask = (1u64 << n) - 1;
    let rotate = |w: u64| ((w >> 1) | ((w & 1) << (n - 1))) & mask;
    let ones = (n - k) as u32;
    (0..=mask)
        .filter(|w| w.count_ones() == ones)
        .filter(|&w| {
            let mut cur = rotate(w);
            let mut len = 1;
            while cur != w {
                cur = rotate(cur);
                len += 1;
            }
            len < n
        })
        .count() as u64
}

pub fn mobius(mut d: u64) -> i64 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= d {
        if d.is_multiple_of(p) {
            d /= p;
            if d.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if d > 1 {
        sign = -sign;
    }
    sign
}
