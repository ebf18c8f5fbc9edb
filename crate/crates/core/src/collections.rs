//! Kapranov and Fonarev collections, the primitive block and its fenced
//! pieces, and Gram matrices computed through the Ext engine.

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use serde_with::{serde_as, SerializeAs};

use crate::bott::{ExtEngine, TwistedSchur};
use crate::diagrams::{enumerate, orbit_length, BoxedDiagram, Filter, Rect};
use crate::error::{Error, Result};
use crate::scalar::{AsNumber, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollectionObject {
    pub bundle: TwistedSchur,
    pub block: usize,
    /// The diagram the object was built from.
    pub diagram: BoxedDiagram,
}

impl CollectionObject {
    fn new(diagram: &BoxedDiagram, block: usize) -> Self {
        CollectionObject { bundle: TwistedSchur::from_diagram(diagram, block as i64), block, diagram: diagram.clone() }
    }

    fn untwisted(diagram: &BoxedDiagram) -> Self {
        CollectionObject { bundle: TwistedSchur::from_diagram(diagram, 0), block: 0, diagram: diagram.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Kapranov,
    Fonarev,
}

impl std::str::FromStr for Style {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kapranov" => Ok(Style::Kapranov),
            "fonarev" => Ok(Style::Fonarev),
            _ => Err(Error::Precondition(format!("unknown collection style {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LefschetzCollection {
    pub rect: Rect,
    pub objects: Vec<CollectionObject>,
    pub support_partition: Vec<usize>,
}

impl LefschetzCollection {
    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn bundles(&self) -> Vec<TwistedSchur> {
        self.objects.iter().map(|o| o.bundle.clone()).collect()
    }

    pub fn blocks(&self) -> Vec<Vec<&CollectionObject>> {
        let mut blocks: Vec<Vec<&CollectionObject>> = vec![Vec::new(); self.support_partition.len()];
        for o in &self.objects {
            blocks[o.block].push(o);
        }
        blocks
    }
}

impl Serialize for LefschetzCollection {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let blocks: Vec<Vec<&TwistedSchur>> =
            self.blocks().into_iter().map(|b| b.into_iter().map(|o| &o.bundle).collect()).collect();
        let mut st = serializer.serialize_struct("LefschetzCollection", 3)?;
        st.serialize_field("box", &self.rect)?;
        st.serialize_field("support_partition", &self.support_partition)?;
        st.serialize_field("blocks", &blocks)?;
        st.end()
    }
}

/// All `Σ^λ U*`, `λ` in the box, in lexicographic order.
pub fn kapranov(rect: Rect) -> LefschetzCollection {
    let objects: Vec<CollectionObject> =
        enumerate(rect, Filter::All).iter().map(CollectionObject::untwisted).collect();
    LefschetzCollection { rect, support_partition: vec![objects.len()], objects }
}

/// `Σ^λ U*(i)` for `λ` minimal upper triangular and `i < o(λ)`, by block
/// then lexicographically.
pub fn fonarev(rect: Rect) -> LefschetzCollection {
    let minimal: Vec<(BoxedDiagram, usize)> = enumerate(rect, Filter::MinimalUpper)
        .into_iter()
        .map(|d| {
            let o = orbit_length(&d);
            (d, o)
        })
        .collect();
    let mut objects = Vec::with_capacity(rect.count() as usize);
    let mut support_partition = Vec::with_capacity(rect.n());
    for i in 0..rect.n() {
        let block: Vec<CollectionObject> =
            minimal.iter().filter(|(_, o)| *o > i).map(|(d, _)| CollectionObject::new(d, i)).collect();
        support_partition.push(block.len());
        objects.extend(block);
    }
    LefschetzCollection { rect, objects, support_partition }
}

pub fn build(rect: Rect, style: Style) -> LefschetzCollection {
    match style {
        Style::Kapranov => kapranov(rect),
        Style::Fonarev => fonarev(rect),
    }
}

/// The full-orbit minimal upper triangular bundles, untwisted.
pub fn primitive_block(rect: Rect) -> Vec<CollectionObject> {
    enumerate(rect, Filter::MinimalUpper)
        .iter()
        .filter(|d| orbit_length(d) == rect.n())
        .map(CollectionObject::untwisted)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Members whose diagram contains `μ`.
    Plus,
    /// Members whose diagram is contained in `μ`.
    Minus,
}

pub fn fenced_block(rect: Rect, mu: &BoxedDiagram, side: Side) -> Result<Vec<CollectionObject>> {
    if mu.rect() != rect {
        return Err(Error::BoxMismatch);
    }
    if !mu.is_minimal_upper() || orbit_length(mu) == rect.n() {
        return Err(Error::NotShort(mu.parts().to_vec()));
    }
    Ok(primitive_block(rect)
        .into_iter()
        .filter(|o| match side {
            Side::Plus => mu.is_contained_in(&o.diagram),
            Side::Minus => o.diagram.is_contained_in(mu),
        })
        .collect())
}

/// A nonzero `Ext^degree(E_row, E_col)` that exceptionality forbids.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation<S: Scalar> {
    pub row: usize,
    pub col: usize,
    pub degree: usize,
    #[serde_as(as = "AsNumber")]
    pub dim: S,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramMatrix<S> {
    pub entries: Vec<Vec<S>>,
    pub ordering: Vec<TwistedSchur>,
}

impl<S: Scalar> GramMatrix<S> {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn is_upper_unitriangular(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, v)| match i.cmp(&j) {
                std::cmp::Ordering::Equal => v.is_one(),
                std::cmp::Ordering::Greater => v.is_zero(),
                std::cmp::Ordering::Less => true,
            })
        })
    }

    pub fn is_identity(&self) -> bool {
        self.entries
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, v)| if i == j { v.is_one() } else { v.is_zero() }))
    }
}

impl<S: Scalar> Serialize for GramMatrix<S> {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        <Vec<Vec<AsNumber>> as SerializeAs<Vec<Vec<S>>>>::serialize_as(&self.entries, serializer)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GramMode {
    Euler,
    FullExt,
}

/// Euler pairings `χ(E_i, E_j)` of an ordered object list, plus in full
/// mode every Ext group contradicting exceptionality.
pub fn gram<S: Scalar>(
    engine: &ExtEngine<S>,
    objects: &[TwistedSchur],
    mode: GramMode,
) -> Result<(GramMatrix<S>, Vec<Violation<S>>)> {
    let n = objects.len();
    let cells: Vec<(S, Vec<Violation<S>>)> = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            let (e, f) = (&objects[i], &objects[j]);
            match mode {
                GramMode::Euler => Ok((engine.euler_char(e, f)?, Vec::new())),
                GramMode::FullExt => {
                    let table = engine.ext_table(e, f)?;
                    let mut bad = Vec::new();
                    if i > j {
                        for (&degree, dim) in table.dims() {
                            bad.push(Violation { row: i, col: j, degree, dim: dim.clone() });
                        }
                    } else if i == j && !table.is_trivial_line() {
                        if !table.get(0).is_one() {
                            bad.push(Violation { row: i, col: j, degree: 0, dim: table.get(0) });
                        }
                        for (&degree, dim) in table.dims().iter().filter(|(&d, _)| d > 0) {
                            bad.push(Violation { row: i, col: j, degree, dim: dim.clone() });
                        }
                    }
                    Ok((table.euler(), bad))
                }
            }
        })
        .collect::<Result<_>>()?;
    let mut entries = vec![Vec::with_capacity(n); n];
    let mut violations = Vec::new();
    for (idx, (v, bad)) in cells.into_iter().enumerate() {
        entries[idx / n].push(v);
        violations.extend(bad);
    }
    Ok((GramMatrix { entries, ordering: objects.to_vec() }, violations))
}

/// Nonzero `Ext(Σ^A U*(j), Σ^B U*(i))` for `i < j` over the first
/// `translates` twists of a block: the semiorthogonality of its translates.
pub fn translate_violations<S: Scalar>(
    engine: &ExtEngine<S>,
    block: &[CollectionObject],
    translates: usize,
) -> Result<Vec<(usize, usize, usize, usize)>> {
    let pairs: Vec<(usize, usize, usize, usize)> = (0..translates)
        .flat_map(|i| (i + 1..translates).map(move |j| (i, j)))
        .flat_map(|(i, j)| (0..block.len()).flat_map(move |a| (0..block.len()).map(move |b| (i, j, a, b))))
        .collect();
    let hits: Vec<Option<(usize, usize, usize, usize)>> = pairs
        .into_par_iter()
        .map(|(i, j, a, b)| {
            let e = block[a].bundle.twisted(j as i64);
            let f = block[b].bundle.twisted(i as i64);
            Ok((!engine.ext_table(&e, &f)?.is_zero()).then_some((i, j, a, b)))
        })
        .collect::<Result<_>>()?;
    Ok(hits.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rect(k: i64, n: i64) -> Rect {
        Rect::new(k, n).unwrap()
    }

    fn diagrams(objs: &[CollectionObject]) -> Vec<Vec<usize>> {
        objs.iter().map(|o| o.diagram.parts().to_vec()).collect()
    }

    #[test]
    fn kapranov_examples() {
        let c = kapranov(rect(2, 4));
        assert_eq!(
            diagrams(&c.objects),
            vec![vec![0, 0], vec![1, 0], vec![1, 1], vec![2, 0], vec![2, 1], vec![2, 2]]
        );
        assert_eq!(kapranov(rect(1, 3)).len(), 3);
        assert_eq!(kapranov(rect(3, 6)).len(), 20);
    }

    #[test]
    fn fonarev_examples() {
        let c = fonarev(rect(3, 6));
        assert_eq!(c.support_partition, vec![4, 4, 3, 3, 3, 3]);
        assert_eq!(c.len(), 20);
        assert_eq!(diagrams(&c.objects[..4]), vec![vec![0, 0, 0], vec![1, 0, 0], vec![1, 1, 0], vec![2, 1, 0]]);
        for m in 2..=4 {
            let mut expected = vec![m; m];
            expected.extend(vec![m - 1; m]);
            assert_eq!(fonarev(rect(2, 2 * m as i64)).support_partition, expected);
            assert_eq!(fonarev(rect(2, 2 * m as i64 + 1)).support_partition, vec![m; 2 * m + 1]);
        }
    }

    #[test]
    fn primitive_examples() {
        assert_eq!(diagrams(&primitive_block(rect(3, 6))), vec![vec![0, 0, 0], vec![1, 0, 0], vec![1, 1, 0]]);
        assert_eq!(diagrams(&primitive_block(rect(2, 4))), vec![vec![0, 0]]);
        let r = rect(3, 7);
        assert_eq!(primitive_block(r).len(), enumerate(r, Filter::MinimalUpper).len());
    }

    #[test]
    fn fenced_examples() {
        let r = rect(3, 6);
        let mu = BoxedDiagram::padded(r, &[2, 1]).unwrap();
        assert_eq!(diagrams(&fenced_block(r, &mu, Side::Minus).unwrap()).len(), 3);
        assert!(fenced_block(r, &mu, Side::Plus).unwrap().is_empty());
        let not_short = BoxedDiagram::padded(r, &[1, 1]).unwrap();
        assert!(matches!(fenced_block(r, &not_short, Side::Minus), Err(Error::NotShort(_))));
    }

    #[test]
    fn gram_examples() {
        let r = rect(1, 3);
        let engine = ExtEngine::<BigInt>::new(r);
        let (g, v) = gram(&engine, &kapranov(r).bundles(), GramMode::Euler).unwrap();
        let expect: Vec<Vec<BigInt>> =
            [[1, 3, 6], [0, 1, 3], [0, 0, 1]].iter().map(|row| row.iter().map(|&x| BigInt::from(x)).collect()).collect();
        assert_eq!(g.entries, expect);
        assert!(v.is_empty());
        assert_eq!(serde_json::to_string(&g).unwrap(), "[[1,3,6],[0,1,3],[0,0,1]]");

        let single = vec![TwistedSchur::line(r, 4)];
        let (g, v) = gram(&engine, &single, GramMode::FullExt).unwrap();
        assert!(g.is_identity() && v.is_empty());
    }

    #[test]
    fn violations_are_reported() {
        let r = rect(1, 2);
        let engine = ExtEngine::<BigInt>::new(r);
        // O(1), O: Hom(O(1), O) = 0 but the order is reversed from Beilinson
        let objs = vec![TwistedSchur::line(r, 1), TwistedSchur::line(r, 0)];
        let (_, v) = gram(&engine, &objs, GramMode::FullExt).unwrap();
        assert_eq!(v, vec![Violation { row: 1, col: 0, degree: 0, dim: BigInt::from(2) }]);
    }

    #[test]
    fn fonarev_is_exceptional_on_small_boxes() {
        for (k, n) in [(2, 4), (3, 6), (2, 5)] {
            let r = rect(k, n);
            let engine = ExtEngine::<BigInt>::new(r);
            let (g, v) = gram(&engine, &fonarev(r).bundles(), GramMode::FullExt).unwrap();
            assert!(v.is_empty(), "{r}: {v:?}");
            assert!(g.is_upper_unitriangular());
        }
    }

    #[test]
    fn collection_json() {
        let c = fonarev(rect(2, 4));
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(
            json,
            concat!(
                r#"{"box":{"k":2,"n":4},"support_partition":[2,2,1,1],"blocks":["#,
                r#"[{"weight":[0,0],"twist":0},{"weight":[1,0],"twist":0}],"#,
                r#"[{"weight":[0,0],"twist":1},{"weight":[1,0],"twist":1}],"#,
                r#"[{"weight":[0,0],"twist":2}],[{"weight":[0,0],"twist":3}]]}"#
            )
        );
    }
}
