//! GL(k) weights: twists, duals, Littlewood–Richardson products and the
//! Weyl dimension formula.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::diagrams::BoxedDiagram;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A dominant weight of GL(k): weakly decreasing, entries of any sign.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    entries: Vec<i64>,
}

impl Weight {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.is_empty() || entries.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotDominant(entries));
        }
        Ok(Weight { entries })
    }

    /// The weight `(t, ..., t)` of `O(t)` on a rank-`k` bundle.
    pub fn det_power(k: usize, t: i64) -> Self {
        Weight { entries: vec![t; k] }
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn k(&self) -> usize {
        self.entries.len()
    }

    pub fn size(&self) -> i64 {
        self.entries.iter().sum()
    }

    pub fn first(&self) -> i64 {
        self.entries[0]
    }

    pub fn last(&self) -> i64 {
        self.entries[self.entries.len() - 1]
    }

    /// `λ(t)`: add `t` to every entry.
    pub fn twist(&self, t: i64) -> Weight {
        Weight { entries: self.entries.iter().map(|e| e + t).collect() }
    }

    /// `(-w_k, ..., -w_1)`, the weight of the dual representation.
    pub fn dualize(&self) -> Weight {
        Weight { entries: self.entries.iter().rev().map(|e| -e).collect() }
    }

    /// Splits off full columns: returns the partition `w - w_k` and `w_k`.
    pub fn normalize(&self) -> (Weight, i64) {
        let shift = self.last();
        (self.twist(-shift), shift)
    }

    /// The diagram of this weight if it fits in the box of `rect`.
    pub fn as_diagram(&self, rect: crate::diagrams::Rect) -> Option<BoxedDiagram> {
        if self.last() < 0 {
            return None;
        }
        let parts = self.entries.iter().map(|&e| e as usize).collect();
        BoxedDiagram::new(rect, parts).ok()
    }
}

impl From<&BoxedDiagram> for Weight {
    fn from(d: &BoxedDiagram) -> Self {
        Weight { entries: d.to_weight_entries() }
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.entries)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.entries.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", body.join(","))
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<i64>::deserialize(deserializer)?;
        Weight::new(entries).map_err(serde::de::Error::custom)
    }
}

/// A multiset of weights, the decomposition of a tensor product.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightExpansion {
    terms: BTreeMap<Weight, u64>,
}

impl WeightExpansion {
    pub fn single(w: Weight) -> Self {
        WeightExpansion { terms: BTreeMap::from([(w, 1)]) }
    }

    pub fn add(&mut self, w: Weight, mult: u64) {
        if mult > 0 {
            *self.terms.entry(w).or_insert(0) += mult;
        }
    }

    pub fn terms(&self) -> &BTreeMap<Weight, u64> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Weight, u64)> {
        self.terms.iter().map(|(w, &m)| (w, m))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn multiplicity(&self, w: &Weight) -> u64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn twist(&self, t: i64) -> WeightExpansion {
        WeightExpansion { terms: self.terms.iter().map(|(w, &m)| (w.twist(t), m)).collect() }
    }

    /// Tensor product with a further weight, term by term.
    pub fn times(&self, b: &Weight) -> Result<WeightExpansion> {
        let mut out = WeightExpansion::default();
        for (a, m) in self.iter() {
            for (c, n) in lr_product(a, b)?.iter() {
                out.add(c.clone(), m * n);
            }
        }
        Ok(out)
    }
}

/// Decomposes `Σ^a ⊗ Σ^b` for GL(k) into irreducibles.
pub fn lr_product(a: &Weight, b: &Weight) -> Result<WeightExpansion> {
    if a.k() != b.k() {
        return Err(Error::LengthMismatch { left: a.k(), right: b.k() });
    }
    let (pa, sa) = a.normalize();
    let (pb, sb) = b.normalize();
    let (outer, content) = if pa.size() >= pb.size() { (pa, pb) } else { (pb, pa) };
    let mut out = WeightExpansion::default();
    let k = outer.k();
    let content: Vec<usize> = content.entries.iter().map(|&c| c as usize).filter(|&c| c > 0).collect();
    let shape: Vec<usize> = outer.entries.iter().map(|&c| c as usize).collect();
    let mut counts = vec![vec![0usize; k]; content.len()];
    lr_fill(&content, 0, shape, &mut counts, &mut |nu| {
        let entries = nu.iter().map(|&p| p as i64 + sa + sb).collect();
        out.add(Weight { entries }, 1);
    });
    Ok(out)
}

/// Adds the boxes labelled `label` (row `label` of the content) as a
/// horizontal strip, subject to the lattice condition, then recurses.
/// `counts[r][i]` is the number of `r`-labels placed in row `i`.
fn lr_fill(
    content: &[usize],
    label: usize,
    shape: Vec<usize>,
    counts: &mut Vec<Vec<usize>>,
    emit: &mut dyn FnMut(&[usize]),
) {
    if label == content.len() {
        emit(&shape);
        return;
    }
    let mut next = shape.clone();
    place_row(content, label, 0, content[label], 0, &shape, &mut next, counts, emit);
}

#[allow(clippy::too_many_arguments)]
fn place_row(
    content: &[usize],
    label: usize,
    row: usize,
    remaining: usize,
    placed_here: usize,
    old: &[usize],
    next: &mut Vec<usize>,
    counts: &mut Vec<Vec<usize>>,
    emit: &mut dyn FnMut(&[usize]),
) {
    let k = old.len();
    if remaining == 0 {
        let shape = next.clone();
        lr_fill(content, label + 1, shape, counts, emit);
        return;
    }
    if row == k {
        return;
    }
    // room in this row: horizontal strip bound from the row above
    let strip = if row == 0 { remaining } else { old[row - 1] - old[row] };
    // lattice bound: labels placed so far in rows <= row may not exceed
    // the previous label's count in rows < row
    let lattice = if label == 0 {
        remaining
    } else {
        let above: usize = counts[label - 1][..row].iter().sum();
        above.saturating_sub(placed_here)
    };
    let max = remaining.min(strip).min(lattice);
    for x in (0..=max).rev() {
        next[row] = old[row] + x;
        counts[label][row] = x;
        place_row(content, label, row + 1, remaining - x, placed_here + x, old, next, counts, emit);
    }
    next[row] = old[row];
    counts[label][row] = 0;
}

/// Weyl dimension of the GL(m) representation with highest weight `w`
/// padded by zeros to length `m`.
pub fn dimension<S: Scalar>(w: &Weight, m: usize) -> Result<S> {
    let k = w.k();
    if m < k {
        return Err(Error::RankTooSmall { k, m });
    }
    if m > k && w.last() < 0 {
        return Err(Error::NegativePadding(w.entries.clone()));
    }
    let mut padded = w.entries.clone();
    padded.resize(m, 0);
    Ok(weyl_product(&padded))
}

/// `∏_{i<j} (v_i - v_j + j - i) / (j - i)` for a dominant `v`, folded
/// through prime exponents so that only the final product touches `S`.
pub(crate) fn weyl_product<S: Scalar>(v: &[i64]) -> S {
    let mut exps = PrimeExponents::default();
    let m = v.len();
    for i in 0..m {
        for j in i + 1..m {
            let gap = (j - i) as u64;
            let num = v[i] - v[j] + gap as i64;
            debug_assert!(num > 0, "weight must be dominant");
            exps.add(num as u64, 1);
            exps.add(gap, -1);
        }
    }
    exps.evaluate()
}

#[derive(Default)]
pub(crate) struct PrimeExponents {
    exps: BTreeMap<u64, i64>,
}

impl PrimeExponents {
    pub(crate) fn add(&mut self, mut v: u64, sign: i64) {
        let mut p = 2;
        while p * p <= v {
            while v.is_multiple_of(p) {
                *self.exps.entry(p).or_insert(0) += sign;
                v /= p;
            }
            p += 1;
        }
        if v > 1 {
            *self.exps.entry(v).or_insert(0) += sign;
        }
    }

    pub(crate) fn evaluate<S: Scalar>(&self) -> S {
        let mut acc = S::one();
        for (&p, &e) in &self.exps {
            assert!(e >= 0, "quotient is not integral");
            let p = S::from_count(p);
            for _ in 0..e {
                acc = acc * p.clone();
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn w(e: &[i64]) -> Weight {
        Weight::new(e.to_vec()).unwrap()
    }

    fn expansion(pairs: &[(&[i64], u64)]) -> WeightExpansion {
        let mut e = WeightExpansion::default();
        for (ws, m) in pairs {
            e.add(w(ws), *m);
        }
        e
    }

    #[test]
    fn twist_and_dual() {
        assert_eq!(w(&[2, 1, 0]).twist(1), w(&[3, 2, 1]));
        assert_eq!(w(&[1, 0]).twist(-2), w(&[-1, -2]));
        assert_eq!(w(&[2, 1, 0]).twist(0), w(&[2, 1, 0]));
        assert_eq!(w(&[1, 0]).dualize(), w(&[0, -1]));
        assert_eq!(w(&[2, 2]).dualize(), w(&[-2, -2]));
        assert_eq!(w(&[3, 1, 0]).dualize().dualize(), w(&[3, 1, 0]));
    }

    #[test]
    fn lr_examples() {
        assert_eq!(lr_product(&w(&[1, 0]), &w(&[1, 0])).unwrap(), expansion(&[(&[2, 0], 1), (&[1, 1], 1)]));
        assert_eq!(
            lr_product(&w(&[2, 1, 0]), &w(&[1, 0, 0])).unwrap(),
            expansion(&[(&[3, 1, 0], 1), (&[2, 2, 0], 1), (&[2, 1, 1], 1)])
        );
        assert_eq!(lr_product(&w(&[1, 1]), &w(&[2, 0])).unwrap(), expansion(&[(&[3, 1], 1)]));
    }

    #[test]
    fn lr_multiplicity_two() {
        let e = lr_product(&w(&[2, 1, 0]), &w(&[2, 1, 0])).unwrap();
        assert_eq!(e.multiplicity(&w(&[3, 2, 1])), 2);
        assert_eq!(e.multiplicity(&w(&[4, 2, 0])), 1);
        assert_eq!(e.len(), 5);
        assert_eq!(e.multiplicity(&w(&[2, 2, 2])), 1);
    }

    #[test]
    fn lr_with_dual() {
        // V ⊗ V* = 1 + adjoint
        let e = lr_product(&w(&[1, 0, 0]), &w(&[0, 0, -1])).unwrap();
        assert_eq!(e, expansion(&[(&[0, 0, 0], 1), (&[1, 0, -1], 1)]));
    }

    #[test]
    fn lr_rejects_mismatch() {
        assert!(lr_product(&w(&[1, 0]), &w(&[1, 0, 0])).is_err());
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(dimension::<i64>(&w(&[1, 0, 0, 0, 0]), 5).unwrap(), 5);
        assert_eq!(dimension::<i64>(&w(&[1]), 7).unwrap(), 7);
        assert_eq!(dimension::<i64>(&w(&[1, 1, 0, 0]), 4).unwrap(), 6);
        assert_eq!(dimension::<BigInt>(&w(&[2, 2]), 8).unwrap(), BigInt::from(336));
        assert_eq!(dimension::<i64>(&w(&[0, -1]), 2).unwrap(), 2);
        assert!(matches!(dimension::<i64>(&w(&[1, 0, 0]), 2), Err(Error::RankTooSmall { .. })));
        assert!(matches!(dimension::<i64>(&w(&[0, -1]), 3), Err(Error::NegativePadding(_))));
    }

    #[test]
    fn weight_validation() {
        assert!(Weight::new(vec![0, 1]).is_err());
        assert!(Weight::new(vec![]).is_err());
        assert_eq!(serde_json::to_string(&w(&[2, -1])).unwrap(), "[2,-1]");
        let back: Weight = serde_json::from_str("[3,1,0]").unwrap();
        assert_eq!(back, w(&[3, 1, 0]));
        assert!(serde_json::from_str::<Weight>("[0,1]").is_err());
    }
}
