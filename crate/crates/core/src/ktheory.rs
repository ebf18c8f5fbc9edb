//! `K_0(G(k, n))` in the Kapranov basis with its Euler form: classes of
//! twisted Schur bundles, left mutations, the residual classes `F_μ^i`,
//! the action of `τ_R`, and the fullness determinant.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use serde_with::SerializeAs;

use crate::bott::{ExtEngine, TwistedSchur};
use crate::collections::{fenced_block, fonarev, primitive_block, CollectionObject, GramMatrix, Side};
use crate::diagrams::{enumerate, orbit_length, residual_rank, BoxedDiagram, Filter, RankMethod, Rect};
use crate::error::{Error, Result};
use crate::matrix::determinant;
use crate::scalar::{sign_power, AsNumber, Scalar};

/// Coordinates in the lexicographically ordered Kapranov basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KClass<S> {
    coords: Vec<S>,
    rect: Rect,
}

impl<S: Scalar> KClass<S> {
    pub fn zero(rect: Rect) -> Self {
        KClass { coords: vec![S::zero(); rect.count() as usize], rect }
    }

    pub fn unit(rect: Rect, index: usize) -> Self {
        let mut c = Self::zero(rect);
        c.coords[index] = S::one();
        c
    }

    pub fn from_coords(rect: Rect, coords: Vec<S>) -> Result<Self> {
        if coords.len() != rect.count() as usize {
            return Err(Error::LengthMismatch { left: coords.len(), right: rect.count() as usize });
        }
        Ok(KClass { coords, rect })
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn rect(&self) -> Rect {
        self.rect
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, other: &KClass<S>, factor: &S) -> KClass<S> {
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| if b.is_zero() { a.clone() } else { a.clone() + factor.clone() * b.clone() })
            .collect();
        KClass { coords, rect: self.rect }
    }

    pub fn scale(&self, factor: &S) -> KClass<S> {
        KClass { coords: self.coords.iter().map(|c| c.clone() * factor.clone()).collect(), rect: self.rect }
    }
}

impl<S: Scalar> Serialize for KClass<S> {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        <Vec<AsNumber> as SerializeAs<Vec<S>>>::serialize_as(&self.coords, serializer)
    }
}

type TwistCache<S> = HashMap<(usize, i64), Arc<KClass<S>>>;

/// The Grothendieck group of one Grassmannian with its Euler form.
pub struct KTheory<S: Scalar> {
    rect: Rect,
    basis: Vec<BoxedDiagram>,
    index: HashMap<BoxedDiagram, usize>,
    engine: ExtEngine<S>,
    /// `χ(Σ^λ U*, Σ^μ U*)`; unitriangular, so only `λ < μ` is stored.
    gram_upper: Vec<Vec<S>>,
    twist_cache: RwLock<TwistCache<S>>,
}

impl<S: Scalar> KTheory<S> {
    pub fn new(rect: Rect) -> Result<Self> {
        let basis = enumerate(rect, Filter::All);
        let index = basis.iter().cloned().enumerate().map(|(i, d)| (d, i)).collect();
        let engine = ExtEngine::new(rect);
        let bundles: Vec<TwistedSchur> = basis.iter().map(|d| TwistedSchur::from_diagram(d, 0)).collect();
        let n = basis.len();
        let gram_upper = (0..n)
            .into_par_iter()
            .map(|i| (i + 1..n).map(|j| engine.euler_char(&bundles[i], &bundles[j])).collect::<Result<Vec<S>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(KTheory { rect, basis, index, engine, gram_upper, twist_cache: RwLock::default() })
    }

    pub fn rect(&self) -> Rect {
        self.rect
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BoxedDiagram] {
        &self.basis
    }

    pub fn engine(&self) -> &ExtEngine<S> {
        &self.engine
    }

    pub fn index_of(&self, d: &BoxedDiagram) -> Option<usize> {
        self.index.get(d).copied()
    }

    /// Gram entry `χ(e_i, e_j)` of the basis.
    pub fn gram_entry(&self, i: usize, j: usize) -> S {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => S::one(),
            std::cmp::Ordering::Greater => S::zero(),
            std::cmp::Ordering::Less => self.gram_upper[i][j - i - 1].clone(),
        }
    }

    /// Recomputes the whole basis Gram matrix, lower triangle included.
    pub fn full_gram(&self) -> Result<GramMatrix<S>> {
        let bundles = self.basis_bundles();
        let (g, _) = crate::collections::gram(&self.engine, &bundles, crate::collections::GramMode::Euler)?;
        Ok(g)
    }

    fn basis_bundles(&self) -> Vec<TwistedSchur> {
        self.basis.iter().map(|d| TwistedSchur::from_diagram(d, 0)).collect()
    }

    fn check_rect(&self, rect: Rect) -> Result<()> {
        if rect == self.rect {
            Ok(())
        } else {
            Err(Error::BoxMismatch)
        }
    }

    /// Coordinates of `[E]`; basis bundles are read off directly.
    pub fn class_of(&self, e: &TwistedSchur) -> Result<KClass<S>> {
        self.check_rect(e.rect())?;
        if let Some(i) = e.as_basis_diagram().and_then(|d| self.index_of(&d)) {
            return Ok(KClass::unit(self.rect, i));
        }
        self.class_of_solved(e)
    }

    /// Coordinates of `[E]` by the triangular solve, never short-circuited.
    pub fn class_of_solved(&self, e: &TwistedSchur) -> Result<KClass<S>> {
        self.check_rect(e.rect())?;
        let b: Vec<S> = self
            .basis
            .par_iter()
            .map(|d| self.engine.euler_char(&TwistedSchur::from_diagram(d, 0), e))
            .collect::<Result<_>>()?;
        Ok(self.solve(b))
    }

    /// Solves `G c = b` for the unitriangular basis Gram matrix.
    fn solve(&self, b: Vec<S>) -> KClass<S> {
        let n = b.len();
        let mut c = vec![S::zero(); n];
        for i in (0..n).rev() {
            let mut v = b[i].clone();
            for (offset, g) in self.gram_upper[i].iter().enumerate() {
                let cj = &c[i + 1 + offset];
                if !g.is_zero() && !cj.is_zero() {
                    v = v - g.clone() * cj.clone();
                }
            }
            c[i] = v;
        }
        KClass { coords: c, rect: self.rect }
    }

    /// `xᵀ G y`.
    pub fn euler_pairing(&self, x: &KClass<S>, y: &KClass<S>) -> Result<S> {
        self.check_rect(x.rect)?;
        self.check_rect(y.rect)?;
        let mut acc = S::zero();
        for (i, xi) in x.coords.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let mut row = y.coords[i].clone();
            for (offset, g) in self.gram_upper[i].iter().enumerate() {
                let yj = &y.coords[i + 1 + offset];
                if !g.is_zero() && !yj.is_zero() {
                    row = row + g.clone() * yj.clone();
                }
            }
            acc = acc + xi.clone() * row;
        }
        Ok(acc)
    }

    /// K-shadow of the left mutation through an exceptional sequence:
    /// `x ← x − χ(e, x) e` for `e` from the last projector to the first.
    pub fn mutate_left(&self, projectors: &[KClass<S>], x: &KClass<S>) -> Result<KClass<S>> {
        for (i, e) in projectors.iter().enumerate() {
            if !self.euler_pairing(e, e)?.is_one() {
                return Err(Error::NotUnitriangular { row: i, col: i });
            }
            for (j, f) in projectors.iter().enumerate().skip(i + 1) {
                if !self.euler_pairing(f, e)?.is_zero() {
                    return Err(Error::NotUnitriangular { row: j, col: i });
                }
            }
        }
        let mut out = x.clone();
        for e in projectors.iter().rev() {
            let c = self.euler_pairing(e, &out)?;
            if !c.is_zero() {
                out = out.add_scaled(e, &-c);
            }
        }
        for (i, e) in projectors.iter().enumerate() {
            if !self.euler_pairing(e, &out)?.is_zero() {
                return Err(Error::Internal(format!("mutation result pairs nontrivially with projector {i}")));
            }
        }
        Ok(out)
    }

    fn twisted_basis(&self, i: usize, t: i64) -> Result<Arc<KClass<S>>> {
        if let Some(hit) = self.twist_cache.read().expect("twist cache poisoned").get(&(i, t)) {
            return Ok(hit.clone());
        }
        let value = Arc::new(self.class_of(&TwistedSchur::from_diagram(&self.basis[i], t))?);
        self.twist_cache.write().expect("twist cache poisoned").insert((i, t), value.clone());
        Ok(value)
    }

    /// The class of `x ⊗ O(t)`.
    pub fn twist(&self, x: &KClass<S>, t: i64) -> Result<KClass<S>> {
        self.check_rect(x.rect)?;
        let mut out = KClass::zero(self.rect);
        for (i, c) in x.coords.iter().enumerate() {
            if !c.is_zero() {
                out = out.add_scaled(&*self.twisted_basis(i, t)?, c);
            }
        }
        Ok(out)
    }

    pub fn classes_of(&self, objects: &[CollectionObject], extra_twist: i64) -> Result<Vec<KClass<S>>> {
        objects.iter().map(|o| self.class_of(&o.bundle.twisted(extra_twist))).collect()
    }

    /// `[τ_R x] = L_𝔞 [x ⊗ O(1)]`.
    pub fn tau_r(&self, primitive: &[KClass<S>], x: &KClass<S>) -> Result<KClass<S>> {
        self.mutate_left(primitive, &self.twist(x, 1)?)
    }
}

/// One short orbit's contribution to the residual category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortOrbit<S> {
    pub mu: BoxedDiagram,
    pub orbit_length: usize,
    /// `k(n-k)/d` with `d = n / o(μ)`.
    pub sign_exponent: usize,
    /// `[F_μ^i]` for `0 <= i < o(μ)`.
    pub classes: Vec<KClass<S>>,
    pub tau_orbit_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualReport<S> {
    pub rect: Rect,
    pub residual_rank: u64,
    pub orbits: Vec<ShortOrbit<S>>,
    pub residual_gram: Vec<Vec<S>>,
    pub fullness_det: Option<S>,
}

impl<S: Scalar> ResidualReport<S> {
    pub fn classes(&self) -> impl Iterator<Item = &KClass<S>> {
        self.orbits.iter().flat_map(|o| o.classes.iter())
    }

    pub fn class_count(&self) -> usize {
        self.orbits.iter().map(|o| o.classes.len()).sum()
    }

    pub fn gram_is_identity(&self) -> bool {
        self.residual_gram
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, v)| if i == j { v.is_one() } else { v.is_zero() }))
    }

    pub fn tau_orbits_ok(&self) -> bool {
        self.orbits.iter().all(|o| o.tau_orbit_ok)
    }
}

impl<S: Scalar> Serialize for ResidualReport<S> {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        use serde::ser::SerializeStruct;
        let classes: Vec<&KClass<S>> = self.classes().collect();
        let mut st = serializer.serialize_struct("ResidualReport", 9)?;
        st.serialize_field("box", &self.rect)?;
        st.serialize_field("residual_rank", &self.residual_rank)?;
        st.serialize_field("short_diagrams", &self.orbits.iter().map(|o| &o.mu).collect::<Vec<_>>())?;
        st.serialize_field("orbit_lengths", &self.orbits.iter().map(|o| o.orbit_length).collect::<Vec<_>>())?;
        st.serialize_field("sign_exponents", &self.orbits.iter().map(|o| o.sign_exponent).collect::<Vec<_>>())?;
        st.serialize_field("residual_classes", &classes)?;
        st.serialize_field("residual_gram", &GramView(&self.residual_gram))?;
        st.serialize_field("tau_orbit_ok", &self.orbits.iter().map(|o| o.tau_orbit_ok).collect::<Vec<_>>())?;
        st.serialize_field("fullness_det", &self.fullness_det.as_ref().map(|d| NumberView(d)))?;
        st.end()
    }
}

struct GramView<'a, S>(&'a [Vec<S>]);

impl<S: Scalar> Serialize for GramView<'_, S> {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        <Vec<Vec<AsNumber>> as SerializeAs<Vec<Vec<S>>>>::serialize_as(&self.0.to_vec(), serializer)
    }
}

struct NumberView<'a, S>(&'a S);

impl<S: Scalar> Serialize for NumberView<'_, S> {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        <AsNumber as SerializeAs<S>>::serialize_as(self.0, serializer)
    }
}

/// `[F_μ^i] = L_{⟨𝔞, …, 𝔞(i-1), 𝔞_μ^-(i)⟩} [Σ^μ U*(i)]`.
pub fn residual_class<S: Scalar>(kt: &KTheory<S>, mu: &BoxedDiagram, i: usize) -> Result<KClass<S>> {
    let rect = kt.rect();
    let primitive = primitive_block(rect);
    let minus = fenced_block(rect, mu, Side::Minus)?;
    let mut projectors = Vec::new();
    for j in 0..i {
        projectors.extend(kt.classes_of(&primitive, j as i64)?);
    }
    projectors.extend(kt.classes_of(&minus, i as i64)?);
    kt.mutate_left(&projectors, &kt.class_of(&TwistedSchur::from_diagram(mu, i as i64))?)
}

pub fn residual_report<S: Scalar>(kt: &KTheory<S>) -> Result<ResidualReport<S>> {
    let rect = kt.rect();
    let n = rect.n();
    let primitive = kt.classes_of(&primitive_block(rect), 0)?;
    let shorts: Vec<(BoxedDiagram, usize)> =
        enumerate(rect, Filter::ShortMinimalUpper).into_iter().map(|d| {
            let o = orbit_length(&d);
            (d, o)
        }).collect();
    let orbits = shorts
        .into_par_iter()
        .map(|(mu, o)| {
            let classes: Vec<KClass<S>> =
                (0..o).map(|i| residual_class(kt, &mu, i)).collect::<Result<_>>()?;
            let d = n / o;
            let sign_exponent = rect.dim() / d;
            let mut tau_orbit_ok = true;
            for i in 0..o {
                let image = kt.tau_r(&primitive, &classes[i])?;
                let expected =
                    if i + 1 < o { classes[i + 1].clone() } else { classes[0].scale(&sign_power(sign_exponent)) };
                tau_orbit_ok &= image == expected;
            }
            Ok(ShortOrbit { mu, orbit_length: o, sign_exponent, classes, tau_orbit_ok })
        })
        .collect::<Result<Vec<_>>>()?;
    let all: Vec<&KClass<S>> = orbits.iter().flat_map(|o| o.classes.iter()).collect();
    let residual_gram = all
        .par_iter()
        .map(|x| all.iter().map(|y| kt.euler_pairing(x, y)).collect::<Result<Vec<S>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(ResidualReport {
        rect,
        residual_rank: residual_rank(rect, RankMethod::Mobius),
        orbits,
        residual_gram,
        fullness_det: None,
    })
}

/// Determinant of the Fonarev classes written in the Kapranov basis.
pub fn fullness_determinant<S: Scalar>(kt: &KTheory<S>) -> Result<S> {
    let columns: Vec<KClass<S>> = fonarev(kt.rect())
        .objects
        .par_iter()
        .map(|o| kt.class_of(&o.bundle))
        .collect::<Result<_>>()?;
    let n = columns.len();
    let rows: Vec<Vec<S>> = (0..n).map(|i| columns.iter().map(|c| c.coords[i].clone()).collect()).collect();
    determinant(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rect(k: i64, n: i64) -> Rect {
        Rect::new(k, n).unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn class_of_examples() {
        let p1 = rect(1, 2);
        let kt = KTheory::<BigInt>::new(p1).unwrap();
        assert_eq!(kt.class_of(&TwistedSchur::line(p1, 0)).unwrap().coords(), big(&[1, 0]).as_slice());
        assert_eq!(kt.class_of(&TwistedSchur::line(p1, 2)).unwrap().coords(), big(&[-1, 2]).as_slice());
        let r = rect(2, 4);
        let kt = KTheory::<BigInt>::new(r).unwrap();
        for (i, d) in kt.basis().to_vec().iter().enumerate() {
            let e = TwistedSchur::from_diagram(d, 0);
            assert_eq!(kt.class_of(&e).unwrap(), KClass::unit(r, i));
            assert_eq!(kt.class_of_solved(&e).unwrap(), KClass::unit(r, i));
        }
    }

    #[test]
    fn pairing_examples() {
        let r = rect(2, 4);
        let kt = KTheory::<BigInt>::new(r).unwrap();
        let e0 = KClass::unit(r, 0);
        assert_eq!(kt.euler_pairing(&e0, &e0).unwrap(), BigInt::from(1));
        let o1 = kt.class_of(&TwistedSchur::line(r, 1)).unwrap();
        assert_eq!(kt.euler_pairing(&e0, &o1).unwrap(), BigInt::from(6));
        assert!(kt.full_gram().unwrap().is_upper_unitriangular());
    }

    #[test]
    fn mutation_examples() {
        let p1 = rect(1, 2);
        let kt = KTheory::<BigInt>::new(p1).unwrap();
        let e = KClass::unit(p1, 1);
        assert!(kt.mutate_left(std::slice::from_ref(&e), &e).unwrap().is_zero());
        assert_eq!(kt.mutate_left(&[], &e).unwrap(), e);
        let o1 = kt.class_of(&TwistedSchur::line(p1, 1)).unwrap();
        let e0 = KClass::unit(p1, 0);
        let m = kt.mutate_left(std::slice::from_ref(&e0), &o1).unwrap();
        assert_eq!(m, o1.add_scaled(&e0, &BigInt::from(-2)));
        assert_eq!(kt.euler_pairing(&e0, &m).unwrap(), BigInt::from(0));
        // O(1), O is not semiorthogonal in this order
        assert!(matches!(kt.mutate_left(&[o1, e0.clone()], &e0), Err(Error::NotUnitriangular { .. })));
    }

    #[test]
    fn residual_g24() {
        let kt = KTheory::<BigInt>::new(rect(2, 4)).unwrap();
        let rep = residual_report(&kt).unwrap();
        assert_eq!(rep.class_count(), 2);
        assert_eq!(rep.orbits[0].sign_exponent, 2);
        assert!(rep.gram_is_identity(), "{:?}", rep.residual_gram);
        assert!(rep.tau_orbits_ok());
    }

    #[test]
    fn residual_g36() {
        let kt = KTheory::<BigInt>::new(rect(3, 6)).unwrap();
        let rep = residual_report(&kt).unwrap();
        assert_eq!(rep.orbits.len(), 1);
        assert_eq!(rep.orbits[0].mu.parts(), &[2, 1, 0]);
        assert_eq!(rep.orbits[0].sign_exponent, 3);
        assert!(rep.gram_is_identity(), "{:?}", rep.residual_gram);
        assert!(rep.tau_orbits_ok());
        let json = serde_json::to_value(&rep).unwrap();
        assert_eq!(json["short_diagrams"], serde_json::json!([[2, 1, 0]]));
        assert_eq!(json["residual_gram"], serde_json::json!([[1, 0], [0, 1]]));
    }

    #[test]
    fn coprime_residual_is_empty() {
        let kt = KTheory::<BigInt>::new(rect(3, 7)).unwrap();
        let rep = residual_report(&kt).unwrap();
        assert_eq!(rep.residual_rank, 0);
        assert!(rep.orbits.is_empty() && rep.residual_gram.is_empty());
        assert_eq!(rep.class_count(), 0);
    }

    #[test]
    fn fullness_small() {
        for (k, n) in [(2, 4), (3, 6), (1, 3), (2, 5)] {
            let kt = KTheory::<BigInt>::new(rect(k, n)).unwrap();
            let det = fullness_determinant(&kt).unwrap();
            assert_eq!(num_traits::Signed::abs(&det), BigInt::from(1), "G({k},{n})");
        }
    }
}
