//! Borel–Weil–Bott for `Σ^ν U*` on `G(k, n)` and the Ext tables it yields.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};
use serde_with::{serde_as, DisplayFromStr};

use crate::diagrams::{BoxedDiagram, Rect};
use crate::error::{Error, Result};
use crate::scalar::{AsNumber, Scalar};
use crate::schur::{lr_product, weyl_product, Weight, WeightExpansion};

/// `Σ^λ U*(t)` on the Grassmannian of `rect`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TwistedSchur {
    weight: Weight,
    twist: i64,
    rect: Rect,
}

impl TwistedSchur {
    pub fn new(rect: Rect, weight: Weight, twist: i64) -> Result<Self> {
        if weight.k() != rect.k() {
            return Err(Error::LengthMismatch { left: weight.k(), right: rect.k() });
        }
        Ok(TwistedSchur { weight, twist, rect })
    }

    pub fn from_diagram(d: &BoxedDiagram, twist: i64) -> Self {
        TwistedSchur { weight: Weight::from(d), twist, rect: d.rect() }
    }

    /// `O(t)`.
    pub fn line(rect: Rect, t: i64) -> Self {
        TwistedSchur { weight: Weight::det_power(rect.k(), 0), twist: t, rect }
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn twist(&self) -> i64 {
        self.twist
    }

    pub fn rect(&self) -> Rect {
        self.rect
    }

    /// The GL(k) weight with the twist folded in.
    pub fn total_weight(&self) -> Weight {
        self.weight.twist(self.twist)
    }

    pub fn twisted(&self, t: i64) -> TwistedSchur {
        TwistedSchur { twist: self.twist + t, ..self.clone() }
    }

    /// The diagram of the total weight, when it lies in the box.
    pub fn as_basis_diagram(&self) -> Option<BoxedDiagram> {
        self.total_weight().as_diagram(self.rect)
    }
}

impl fmt::Debug for TwistedSchur {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Σ^{}U*({})", self.weight, self.twist)
    }
}

impl Serialize for TwistedSchur {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("TwistedSchur", 2)?;
        st.serialize_field("weight", &self.weight)?;
        st.serialize_field("twist", &self.twist)?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BottOutcome<S> {
    Acyclic,
    Contribution { degree: usize, gln_weight: Vec<i64>, dim: S },
}

impl<S: Scalar> BottOutcome<S> {
    /// Signed contribution to the Euler characteristic.
    pub fn euler(&self) -> S {
        match self {
            BottOutcome::Acyclic => S::zero(),
            BottOutcome::Contribution { degree, dim, .. } => {
                if degree % 2 == 0 {
                    dim.clone()
                } else {
                    -dim.clone()
                }
            }
        }
    }
}

/// Cohomology of `Σ^ν U*`, i.e. of the GL(n) weight `(ν, 0^{n-k})`.
///
/// The GL(n) label is `sort(γ) - ρ`; whether it names `V` or `V*` depends
/// on a duality convention, so only `dim` is meaningful downstream.
pub fn bott<S: Scalar>(rect: Rect, nu: &Weight) -> Result<BottOutcome<S>> {
    let (k, n) = (rect.k(), rect.n());
    if nu.k() != k {
        return Err(Error::LengthMismatch { left: nu.k(), right: k });
    }
    let gamma: Vec<i64> = (0..n)
        .map(|i| nu.entries().get(i).copied().unwrap_or(0) + (n - 1 - i) as i64)
        .collect();
    let mut sorted = gamma.clone();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Ok(BottOutcome::Acyclic);
    }
    let mut degree = 0;
    for i in 0..n {
        for j in i + 1..n {
            if gamma[i] < gamma[j] {
                degree += 1;
            }
        }
    }
    if degree > rect.dim() {
        return Err(Error::Internal(format!("bott degree {degree} exceeds dim {}", rect.dim())));
    }
    let gln_weight: Vec<i64> = sorted.iter().enumerate().map(|(i, g)| g - (n - 1 - i) as i64).collect();
    let dim = weyl_product(&gln_weight);
    Ok(BottOutcome::Contribution { degree, gln_weight, dim })
}

/// Graded dimensions of `Ext^•(E, F)`; zero degrees are not stored.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExtTable<S: Scalar> {
    #[serde_as(as = "BTreeMap<DisplayFromStr, AsNumber>")]
    dims: BTreeMap<usize, S>,
}

impl<S: Scalar> Default for ExtTable<S> {
    fn default() -> Self {
        ExtTable { dims: BTreeMap::new() }
    }
}

impl<S: Scalar> ExtTable<S> {
    pub fn from_dims(dims: impl IntoIterator<Item = (usize, S)>) -> Self {
        let mut t = ExtTable::default();
        for (d, v) in dims {
            t.add(d, v);
        }
        t
    }

    fn add(&mut self, degree: usize, dim: S) {
        if dim.is_zero() {
            return;
        }
        let entry = self.dims.entry(degree).or_insert_with(S::zero);
        *entry = entry.clone() + dim;
        if entry.is_zero() {
            self.dims.remove(&degree);
        }
    }

    pub fn get(&self, degree: usize) -> S {
        self.dims.get(&degree).cloned().unwrap_or_else(S::zero)
    }

    pub fn dims(&self) -> &BTreeMap<usize, S> {
        &self.dims
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    /// `Ext^• = k` in degree 0, the exceptionality condition.
    pub fn is_trivial_line(&self) -> bool {
        self.dims.len() == 1 && self.get(0) == S::one()
    }

    pub fn euler(&self) -> S {
        self.dims.iter().fold(S::zero(), |acc, (d, v)| {
            if d % 2 == 0 {
                acc + v.clone()
            } else {
                acc - v.clone()
            }
        })
    }
}

/// The weights `ν` with `Hom(E, F) ⊗ ... = ⊕ Σ^ν U*`, i.e. the expansion of
/// `(Σ^a U*)^∨ ⊗ Σ^b U*` with the relative twist folded in.
fn hom_expansion(e: &TwistedSchur, f: &TwistedSchur) -> Result<WeightExpansion> {
    if e.rect != f.rect {
        return Err(Error::BoxMismatch);
    }
    Ok(lr_product(&e.weight.dualize(), &f.weight)?.twist(f.twist - e.twist))
}

pub fn ext_table<S: Scalar>(e: &TwistedSchur, f: &TwistedSchur) -> Result<ExtTable<S>> {
    let mut table = ExtTable::default();
    for (nu, mult) in hom_expansion(e, f)?.iter() {
        if let BottOutcome::Contribution { degree, dim, .. } = bott::<S>(e.rect, nu)? {
            table.add(degree, dim * S::from_count(mult));
        }
    }
    Ok(table)
}

pub fn euler_char<S: Scalar>(e: &TwistedSchur, f: &TwistedSchur) -> Result<S> {
    Ok(ext_table::<S>(e, f)?.euler())
}

type LrKey = (Weight, Weight);

/// Memoizing Ext engine for one box; safe to share across threads.
/// Cache hits never change results, only their cost.
pub struct ExtEngine<S: Scalar> {
    rect: Rect,
    lr_cache: RwLock<HashMap<LrKey, Arc<WeightExpansion>>>,
    bott_cache: RwLock<HashMap<Weight, BottOutcome<S>>>,
}

impl<S: Scalar> ExtEngine<S> {
    pub fn new(rect: Rect) -> Self {
        ExtEngine { rect, lr_cache: RwLock::default(), bott_cache: RwLock::default() }
    }

    pub fn rect(&self) -> Rect {
        self.rect
    }

    /// `Σ^a ⊗ Σ^b`, cached on the pair of column-stripped partitions.
    pub fn lr(&self, a: &Weight, b: &Weight) -> Result<(Arc<WeightExpansion>, i64)> {
        let (pa, sa) = a.normalize();
        let (pb, sb) = b.normalize();
        let key = if pa <= pb { (pa, pb) } else { (pb, pa) };
        if let Some(hit) = self.lr_cache.read().expect("lr cache poisoned").get(&key) {
            return Ok((hit.clone(), sa + sb));
        }
        let value = Arc::new(lr_product(&key.0, &key.1)?);
        self.lr_cache
            .write()
            .expect("lr cache poisoned")
            .entry(key)
            .or_insert_with(|| value.clone());
        Ok((value, sa + sb))
    }

    pub fn bott(&self, nu: &Weight) -> Result<BottOutcome<S>> {
        if let Some(hit) = self.bott_cache.read().expect("bott cache poisoned").get(nu) {
            return Ok(hit.clone());
        }
        let value = bott::<S>(self.rect, nu)?;
        self.bott_cache
            .write()
            .expect("bott cache poisoned")
            .insert(nu.clone(), value.clone());
        Ok(value)
    }

    fn check(&self, e: &TwistedSchur, f: &TwistedSchur) -> Result<()> {
        if e.rect != self.rect || f.rect != self.rect {
            return Err(Error::BoxMismatch);
        }
        Ok(())
    }

    pub fn ext_table(&self, e: &TwistedSchur, f: &TwistedSchur) -> Result<ExtTable<S>> {
        self.check(e, f)?;
        let (terms, shift) = self.lr(&e.weight.dualize(), &f.weight)?;
        let shift = shift + f.twist - e.twist;
        let mut table = ExtTable::default();
        for (nu, mult) in terms.iter() {
            if let BottOutcome::Contribution { degree, dim, .. } = self.bott(&nu.twist(shift))? {
                table.add(degree, dim * S::from_count(mult));
            }
        }
        Ok(table)
    }

    pub fn euler_char(&self, e: &TwistedSchur, f: &TwistedSchur) -> Result<S> {
        self.check(e, f)?;
        let (terms, shift) = self.lr(&e.weight.dualize(), &f.weight)?;
        let shift = shift + f.twist - e.twist;
        let mut acc = S::zero();
        for (nu, mult) in terms.iter() {
            let contribution = self.bott(&nu.twist(shift))?.euler();
            if !contribution.is_zero() {
                acc = acc + contribution * S::from_count(mult);
            }
        }
        Ok(acc)
    }
}
