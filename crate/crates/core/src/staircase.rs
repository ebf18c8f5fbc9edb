//! Staircase complexes: the path-jump construction, the θ-twisted family
//! and its membership bookkeeping, the `G(3,3m)` table check and the
//! transcribed `G(4,8)` sequence.
//!
//! Differentials are not modelled. What is checked is necessary for
//! exactness: the alternating K-class sum vanishes and consecutive terms
//! admit nonzero degree-0 maps.

use serde::Serialize;

use crate::bott::TwistedSchur;
use crate::diagrams::{cyclic_step, orbit_length, theta, BoxedDiagram, Rect};
use crate::error::{Error, Result};
use crate::ktheory::{KClass, KTheory};
use crate::scalar::{binomial, Scalar};
use crate::schur::{dimension, Weight};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StaircaseTerm {
    /// Exterior power of `V*` tensored with this term.
    pub c: usize,
    pub mu: BoxedDiagram,
    pub extra_twist: i64,
}

impl StaircaseTerm {
    pub fn bundle(&self) -> TwistedSchur {
        TwistedSchur::from_diagram(&self.mu, self.extra_twist)
    }
}

/// `0 → tail → Λ^{c_{n-k}}V* ⊗ … → … → Λ^{c_1}V* ⊗ … → head → 0`, with
/// `terms[0]` the one next to the head.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StaircaseComplex {
    #[serde(skip)]
    pub rect: Rect,
    pub head: TwistedSchur,
    pub terms: Vec<StaircaseTerm>,
    pub tail: TwistedSchur,
}

impl StaircaseComplex {
    /// Each position from the head onward, as bundle and multiplicity.
    pub fn positions(&self) -> Vec<(TwistedSchur, u64)> {
        let n = self.rect.n() as i64;
        let mut out = vec![(self.head.clone(), 1)];
        out.extend(self.terms.iter().map(|t| (t.bundle(), binomial(n, t.c as i64))));
        out.push((self.tail.clone(), 1));
        out
    }

    /// `Σ_p (-1)^p mult_p [term_p]`; zero for an exact complex.
    pub fn alternating_class<S: Scalar>(&self, kt: &KTheory<S>) -> Result<KClass<S>> {
        alternating_sum(kt, self.positions().into_iter().map(|(b, m)| vec![(b, m)]))
    }

    pub fn k_exact<S: Scalar>(&self, kt: &KTheory<S>) -> Result<bool> {
        Ok(self.alternating_class(kt)?.is_zero())
    }

    /// Whether every map `position p+1 → position p` can be nonzero
    /// (degree-0 Hom is nonzero). Returns the failing positions.
    pub fn hom_gaps<S: Scalar>(&self, kt: &KTheory<S>) -> Result<Vec<usize>> {
        let pos = self.positions();
        let mut gaps = Vec::new();
        for p in 0..pos.len() - 1 {
            if kt.engine().ext_table(&pos[p + 1].0, &pos[p].0)?.get(0).is_zero() {
                gaps.push(p);
            }
        }
        Ok(gaps)
    }
}

/// A staircase with its K-exactness verdict, in the serialized shape.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckedStaircase {
    #[serde(flatten)]
    pub complex: StaircaseComplex,
    pub k_exact: bool,
}

fn alternating_sum<S: Scalar>(
    kt: &KTheory<S>,
    positions: impl Iterator<Item = Vec<(TwistedSchur, u64)>>,
) -> Result<KClass<S>> {
    let mut acc = KClass::zero(kt.rect());
    for (p, summands) in positions.enumerate() {
        for (bundle, mult) in summands {
            let factor = S::from_count(mult);
            let factor = if p % 2 == 0 { factor } else { -factor };
            acc = acc.add_scaled(&kt.class_of(&bundle)?, &factor);
        }
    }
    Ok(acc)
}

/// Boundary word of a weight whose path starts at abscissa `x0`.
fn path_word(rows: &[i64], x0: i64, width: i64) -> Vec<u8> {
    let mut word = Vec::new();
    let mut x = x0;
    for &r in rows.iter().rev() {
        word.extend(std::iter::repeat_n(1, (r - x) as usize));
        word.push(0);
        x = r;
    }
    word.extend(std::iter::repeat_n(1, (width - x) as usize));
    word
}

/// Index just past the `count`-th horizontal step, and the height there.
fn after_horizontal(word: &[u8], count: usize) -> (usize, usize) {
    let mut seen = 0;
    let mut height = 0;
    for (i, &b) in word.iter().enumerate() {
        if seen == count {
            return (i, height);
        }
        if b == 1 {
            seen += 1;
        } else {
            height += 1;
        }
    }
    (word.len(), height)
}

/// Follow the path of `λ` up to abscissa `a`, then go up onto the path of
/// `λ'(-1)` and follow it to the end.
fn jump(rect: Rect, green: &[u8], red: &[u8], a: usize) -> Result<BoxedDiagram> {
    let (cut, green_height) = after_horizontal(green, a);
    // the red path starts at abscissa -1, so it leaves abscissa a after
    // its (a+2)-th horizontal step begins
    let (red_cut, red_height) = after_horizontal(red, a + 1);
    let red_top = red_height + red[red_cut..].iter().take_while(|&&b| b == 0).count();
    if red_top < green_height {
        return Err(Error::Internal(format!("staircase paths cross at abscissa {a}")));
    }
    let mut word = green[..cut].to_vec();
    word.extend(std::iter::repeat_n(0, red_top - green_height));
    word.extend(red[red_cut..].iter().skip_while(|&&b| b == 0));
    BoxedDiagram::from_word(rect, &word)
}

pub fn build_staircase(rect: Rect, lambda: &BoxedDiagram) -> Result<StaircaseComplex> {
    if lambda.rect() != rect {
        return Err(Error::BoxMismatch);
    }
    let width = rect.width();
    if lambda.parts()[0] != width {
        return Err(Error::Precondition(format!("staircase needs λ1 = {width}, got {lambda}")));
    }
    let tail_weight = Weight::from(&cyclic_step(lambda)).twist(-1);
    let green = lambda.to_word();
    let red = path_word(tail_weight.entries(), -1, width as i64);
    let terms = (1..=width)
        .map(|i| {
            let mu = jump(rect, &green, &red, width - i)?;
            let c = lambda.size() - mu.size();
            if c == 0 || c >= rect.n() {
                return Err(Error::Internal(format!("staircase term {i} of {lambda} has c = {c}")));
            }
            Ok(StaircaseTerm { c, mu, extra_twist: 0 })
        })
        .collect::<Result<_>>()?;
    Ok(StaircaseComplex {
        rect,
        head: TwistedSchur::from_diagram(lambda, 0),
        terms,
        tail: TwistedSchur::new(rect, tail_weight, 0)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Assignment {
    /// `𝔞(twist)` for `1 - n/d <= twist <= -1`.
    Primitive { twist: i64 },
    /// `𝔞_μ^+(-n/d)`.
    FencedPlus { twist: i64 },
    /// `𝔞_μ^-`.
    FencedMinus,
}

/// Which piece of `⟨𝔞_μ^+(-n/d), 𝔞(1-n/d), …, 𝔞(-1), 𝔞_μ^-⟩` each
/// middle term lies in. The inclusion holds on the nose iff nothing is
/// left unassigned.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MembershipLedger {
    pub mu: BoxedDiagram,
    /// `(position, summand, assignment)`.
    pub assigned: Vec<(usize, usize, Assignment)>,
    pub unassigned: Vec<(usize, usize)>,
}

impl MembershipLedger {
    pub fn is_complete(&self) -> bool {
        self.unassigned.is_empty()
    }
}

/// The piece of the fenced decomposition that `Σ^ν U*` sits in, if any.
pub fn assign(mu: &BoxedDiagram, bundle: &TwistedSchur) -> Option<Assignment> {
    let rect = mu.rect();
    let (alpha, t) = bundle.total_weight().normalize();
    let alpha = alpha.as_diagram(rect)?;
    if !alpha.is_minimal_upper() || orbit_length(&alpha) != rect.n() {
        return None;
    }
    // n/d for d = n/o(μ)
    let depth = orbit_length(mu) as i64;
    if t == -depth && mu.is_contained_in(&alpha) {
        Some(Assignment::FencedPlus { twist: t })
    } else if (1 - depth..=-1).contains(&t) {
        Some(Assignment::Primitive { twist: t })
    } else if t == 0 && alpha.is_contained_in(mu) {
        Some(Assignment::FencedMinus)
    } else {
        None
    }
}

fn ledger(mu: &BoxedDiagram, middle: &[Vec<TwistedSchur>]) -> MembershipLedger {
    let mut assigned = Vec::new();
    let mut unassigned = Vec::new();
    for (p, summands) in middle.iter().enumerate() {
        for (s, b) in summands.iter().enumerate() {
            match assign(mu, b) {
                Some(a) => assigned.push((p + 1, s, a)),
                None => unassigned.push((p + 1, s)),
            }
        }
    }
    MembershipLedger { mu: mu.clone(), assigned, unassigned }
}

/// The staircase of `θ_{k,km}(m-1)` twisted back by `O(1-m)`, written
/// with terms `Σ^{α_i} U*(t_i)`.
pub fn build_theta_staircase(k: usize, m: usize) -> Result<(StaircaseComplex, MembershipLedger)> {
    if k < 2 || m < 2 {
        return Err(Error::Precondition(format!("θ-staircase needs k, m >= 2 (got {k}, {m})")));
    }
    let th = theta(k, m)?;
    let rect = th.rect();
    let shift = m as i64 - 1;
    let lifted = Weight::from(&th).twist(shift).as_diagram(rect).expect("θ(m-1) fits the box");
    let base = build_staircase(rect, &lifted)?;
    let terms = base
        .terms
        .iter()
        .map(|t| {
            let (alpha, low) = Weight::from(&t.mu).normalize();
            let alpha = alpha.as_diagram(rect).expect("column-stripped diagram fits");
            if !alpha.is_minimal_upper() {
                return Err(Error::Precondition(format!("α = {alpha} is not minimal upper triangular")));
            }
            Ok(StaircaseTerm { c: t.c, mu: alpha, extra_twist: low - shift })
        })
        .collect::<Result<Vec<_>>>()?;
    let tail = base.tail.twisted(-shift);
    let tail = TwistedSchur::new(rect, tail.total_weight().normalize().0, tail.total_weight().last())?;
    let complex = StaircaseComplex { rect, head: TwistedSchur::from_diagram(&th, 0), terms, tail };
    let middle: Vec<Vec<TwistedSchur>> = complex.terms.iter().map(|t| vec![t.bundle()]).collect();
    let led = ledger(&th, &middle);
    Ok((complex, led))
}

/// Builds the staircase of `(3(m-1), a, b)` on `G(3, 3m)` and compares it
/// with the three-phase pattern of the table; also checks that the rows
/// above the double line lie in `A_0(α_3)`.
pub fn appendix_table_check(rect: Rect, a: usize, b: usize) -> Result<bool> {
    if rect.k() != 3 || !rect.n().is_multiple_of(3) {
        return Err(Error::Precondition(format!("table check lives on G(3,3m), got {rect}")));
    }
    let m = rect.n() / 3;
    let top = 3 * (m - 1);
    if BoxedDiagram::new(rect, vec![a, b, 0]).is_err() || b < m || a < b || a - b > m - 1 {
        return Err(Error::Precondition(format!("need (a,b,0) in the box, b >= m, a-b <= m-1 (a={a}, b={b}, m={m})")));
    }
    let lambda = BoxedDiagram::new(rect, vec![top, a, b])?;
    let complex = build_staircase(rect, &lambda)?;
    let mut expected: Vec<[i64; 3]> = Vec::new();
    let (a, b, top) = (a as i64, b as i64, top as i64);
    expected.extend((1..=top - a).map(|i| [top - i, a, b]));
    expected.extend((1..=a - b).map(|j| [a - 1, a - j, b]));
    expected.extend((1..=b).map(|j| [a - 1, b - 1, b - j]));
    let got: Vec<[i64; 3]> = complex
        .terms
        .iter()
        .map(|t| {
            let p = t.mu.parts();
            [p[0] as i64, p[1] as i64, p[2] as i64]
        })
        .collect();
    let tail_ok = complex.tail.total_weight().entries() == [a - 1, b - 1, -1];
    let above_line = (top - b + m as i64) as usize;
    let in_a0 = complex.terms[..above_line].iter().all(|t| {
        let (alpha, _) = Weight::from(&t.mu).normalize();
        alpha.as_diagram(rect).is_some_and(|d| d.is_minimal_upper())
    });
    Ok(got == expected && tail_ok && in_a0)
}

/// A tensor factor `Σ^w V` or `Σ^w V*` with `dim V = n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VFactor {
    pub weight: Vec<i64>,
    pub dual: bool,
}

impl VFactor {
    fn new(weight: &[i64], dual: bool) -> Self {
        VFactor { weight: weight.to_vec(), dual }
    }

    pub fn dim<S: Scalar>(&self, n: usize) -> Result<S> {
        dimension(&Weight::new(self.weight.clone())?, n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixtureSummand {
    pub factors: Vec<VFactor>,
    pub bundle: TwistedSchur,
}

impl FixtureSummand {
    pub fn multiplicity(&self, n: usize) -> Result<u64> {
        self.factors.iter().try_fold(1u64, |acc, f| Ok(acc * f.dim::<i64>(n)? as u64))
    }
}

/// The ten-term sequence on `G(4,8)` for `μ = (2,2)`, as transcribed:
/// position `p` maps to position `p + 1`.
pub fn g48_fixture() -> Vec<Vec<FixtureSummand>> {
    let rect = Rect::new(4, 8).expect("valid box");
    let s = |factors: &[(&[i64], bool)], w: &[i64], t: i64| FixtureSummand {
        factors: factors.iter().map(|(fw, d)| VFactor::new(fw, *d)).collect(),
        bundle: TwistedSchur::new(rect, Weight::new(w.to_vec()).expect("dominant"), t).expect("k = 4"),
    };
    let v: &[i64] = &[1];
    let s2: &[i64] = &[2];
    let l2: &[i64] = &[1, 1];
    let l3: &[i64] = &[1, 1, 1];
    vec![
        vec![s(&[], &[2, 2, 0, 0], -4)],
        vec![s(&[(v, false)], &[2, 2, 1, 0], -4)],
        vec![s(&[(s2, false)], &[1, 1, 0, 0], -3), s(&[(l3, false)], &[1, 1, 1, 0], -3)],
        vec![s(&[(v, false), (l3, false)], &[0, 0, 0, 0], -2)],
        vec![s(&[(l2, true), (l2, false)], &[0, 0, 0, 0], -1)],
        vec![s(&[(l2, false), (v, true)], &[1, 0, 0, 0], -1), s(&[(&[2, 2], true)], &[0, 0, 0, 0], 0)],
        vec![s(&[(l2, false)], &[2, 0, 0, 0], -1), s(&[(&[2, 1], true)], &[1, 0, 0, 0], 0)],
        vec![s(&[(s2, true)], &[1, 1, 0, 0], 0), s(&[(l2, true)], &[2, 0, 0, 0], 0)],
        vec![s(&[(v, true)], &[2, 1, 0, 0], 0)],
        vec![s(&[], &[2, 2, 0, 0], 0)],
    ]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixtureVerdict {
    pub k_exact: bool,
    /// Positions `p` with `Hom(term_p, term_{p+1}) = 0` in degree 0.
    pub hom_gaps: Vec<usize>,
    pub ledger: MembershipLedger,
}

impl FixtureVerdict {
    pub fn passed(&self) -> bool {
        self.k_exact && self.hom_gaps.is_empty() && self.ledger.is_complete()
    }
}

pub fn g48_sequence_check<S: Scalar>(kt: &KTheory<S>) -> Result<FixtureVerdict> {
    let rect = Rect::new(4, 8)?;
    if kt.rect() != rect {
        return Err(Error::BoxMismatch);
    }
    let fixture = g48_fixture();
    let n = rect.n();
    let positions = fixture
        .iter()
        .map(|p| p.iter().map(|s| Ok((s.bundle.clone(), s.multiplicity(n)?))).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let k_exact = alternating_sum(kt, positions.into_iter())?.is_zero();
    let mut hom_gaps = Vec::new();
    for p in 0..fixture.len() - 1 {
        let mut any = false;
        for a in &fixture[p] {
            for b in &fixture[p + 1] {
                any |= !kt.engine().ext_table(&a.bundle, &b.bundle)?.get(0).is_zero();
            }
        }
        if !any {
            hom_gaps.push(p);
        }
    }
    let mu = BoxedDiagram::padded(rect, &[2, 2])?;
    let middle: Vec<Vec<TwistedSchur>> =
        fixture[1..fixture.len() - 1].iter().map(|p| p.iter().map(|s| s.bundle.clone()).collect()).collect();
    Ok(FixtureVerdict { k_exact, hom_gaps, ledger: ledger(&mu, &middle) })
}
