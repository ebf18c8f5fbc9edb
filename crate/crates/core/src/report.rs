//! The aggregated verification report for one Grassmannian.
//!
//! Failed mathematical checks are recorded as data; only invalid input or
//! broken internal invariants abort a run.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_with::serde_as;

use crate::collections::{build, gram, GramMode, Style};
use crate::diagrams::{enumerate, residual_rank, Filter, RankMethod, Rect};
use crate::error::Result;
use crate::ktheory::{fullness_determinant, residual_report, KTheory, ResidualReport};
use crate::scalar::AsNumber;
use crate::staircase::{appendix_table_check, build_staircase, build_theta_staircase, g48_sequence_check};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Pass, _) | (_, Verdict::Pass) => Verdict::Pass,
            _ => Verdict::Skipped,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollectionSummary {
    pub style: String,
    pub objects: usize,
    pub expected_objects: u64,
    pub support_partition: Vec<usize>,
    pub verdict: Verdict,
}

#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationRecord {
    pub row: usize,
    pub col: usize,
    pub degree: usize,
    #[serde_as(as = "AsNumber")]
    pub dim: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GramStage {
    pub style: String,
    pub objects: usize,
    pub unitriangular: bool,
    pub violations: Vec<ViolationRecord>,
    pub verdict: Verdict,
}

#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualStage {
    pub residual_rank: u64,
    pub residual_rank_brute_force: u64,
    /// No short orbits: the residual category vanishes.
    pub trivial: bool,
    pub short_diagrams: Vec<Vec<usize>>,
    pub orbit_lengths: Vec<usize>,
    pub sign_exponents: Vec<usize>,
    #[serde_as(as = "Vec<Vec<AsNumber>>")]
    pub residual_classes: Vec<Vec<BigInt>>,
    #[serde_as(as = "Vec<Vec<AsNumber>>")]
    pub residual_gram: Vec<Vec<BigInt>>,
    pub tau_orbit_ok: Vec<bool>,
    pub verdict: Verdict,
}

impl ResidualStage {
    fn from_report(rep: &ResidualReport<BigInt>) -> Self {
        let brute = residual_rank(rep.rect, RankMethod::BruteForce);
        let ok = rep.gram_is_identity()
            && rep.tau_orbits_ok()
            && rep.class_count() as u64 == rep.residual_rank
            && brute == rep.residual_rank;
        ResidualStage {
            residual_rank: rep.residual_rank,
            residual_rank_brute_force: brute,
            trivial: rep.orbits.is_empty(),
            short_diagrams: rep.orbits.iter().map(|o| o.mu.parts().to_vec()).collect(),
            orbit_lengths: rep.orbits.iter().map(|o| o.orbit_length).collect(),
            sign_exponents: rep.orbits.iter().map(|o| o.sign_exponent).collect(),
            residual_classes: rep.classes().map(|c| c.coords().to_vec()).collect(),
            residual_gram: rep.residual_gram.clone(),
            tau_orbit_ok: rep.orbits.iter().map(|o| o.tau_orbit_ok).collect(),
            verdict: Verdict::from_bool(ok),
        }
    }
}

#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullnessStage {
    #[serde_as(as = "AsNumber")]
    pub determinant: BigInt,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaRecord {
    pub k: usize,
    pub m: usize,
    pub k_exact: bool,
    pub hom_gaps: Vec<usize>,
    pub ledger_complete: bool,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppendixRecord {
    pub a: usize,
    pub b: usize,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureRecord {
    pub k_exact: bool,
    pub hom_gaps: Vec<usize>,
    pub ledger_unassigned: Vec<(usize, usize)>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StaircaseStage {
    /// Number of diagrams with `λ1 = n - k` whose staircase was checked.
    pub checked: usize,
    /// Those whose alternating class sum is nonzero.
    pub not_k_exact: Vec<Vec<usize>>,
    pub theta: Option<ThetaRecord>,
    pub appendix: Vec<AppendixRecord>,
    pub g48: Option<FixtureRecord>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    #[serde(rename = "box")]
    pub rect: Rect,
    pub verdict: Verdict,
    pub collections: Vec<CollectionSummary>,
    pub gram: Vec<GramStage>,
    pub residual: ResidualStage,
    pub fullness: FullnessStage,
    pub staircase: StaircaseStage,
    /// Wall-clock microseconds per stage; only present when requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings_us: Option<BTreeMap<String, u64>>,
}

struct Clock {
    enabled: bool,
    start: Instant,
    laps: BTreeMap<String, u64>,
}

impl Clock {
    fn new(enabled: bool) -> Self {
        Clock { enabled, start: Instant::now(), laps: BTreeMap::new() }
    }

    fn lap(&mut self, stage: &str) {
        let now = Instant::now();
        self.laps.insert(stage.to_string(), (now - self.start).as_micros() as u64);
        self.start = now;
    }

    fn finish(self) -> Option<BTreeMap<String, u64>> {
        self.enabled.then_some(self.laps)
    }
}

pub fn residual_stage(kt: &KTheory<BigInt>) -> Result<(ResidualReport<BigInt>, ResidualStage)> {
    let rep = residual_report(kt)?;
    let stage = ResidualStage::from_report(&rep);
    Ok((rep, stage))
}

pub fn staircase_stage(kt: &KTheory<BigInt>) -> Result<StaircaseStage> {
    let rect = kt.rect();
    let (k, n) = (rect.k(), rect.n());
    let mut checked = 0;
    let mut not_k_exact = Vec::new();
    for lambda in enumerate(rect, Filter::All).into_iter().filter(|d| d.parts()[0] == rect.width()) {
        checked += 1;
        if !build_staircase(rect, &lambda)?.k_exact(kt)? {
            not_k_exact.push(lambda.parts().to_vec());
        }
    }
    let mut verdict = Verdict::from_bool(not_k_exact.is_empty());

    let theta = if k >= 2 && n % k == 0 && n / k >= 2 {
        let m = n / k;
        let (complex, ledger) = build_theta_staircase(k, m)?;
        let k_exact = complex.k_exact(kt)?;
        let hom_gaps = complex.hom_gaps(kt)?;
        let ledger_complete = ledger.is_complete();
        let v = Verdict::from_bool(k_exact && hom_gaps.is_empty() && ledger_complete);
        verdict = verdict.and(v);
        Some(ThetaRecord { k, m, k_exact, hom_gaps, ledger_complete, verdict: v })
    } else {
        None
    };

    let mut appendix = Vec::new();
    if k == 3 && n % 3 == 0 {
        let m = n / 3;
        for b in m..=rect.width() {
            for a in b..=(b + m - 1).min(rect.width()) {
                let v = Verdict::from_bool(appendix_table_check(rect, a, b)?);
                verdict = verdict.and(v);
                appendix.push(AppendixRecord { a, b, verdict: v });
            }
        }
    }

    let g48 = if (k, n) == (4, 8) {
        let f = g48_sequence_check(kt)?;
        let v = Verdict::from_bool(f.passed());
        verdict = verdict.and(v);
        Some(FixtureRecord {
            k_exact: f.k_exact,
            hom_gaps: f.hom_gaps,
            ledger_unassigned: f.ledger.unassigned,
            verdict: v,
        })
    } else {
        None
    };

    Ok(StaircaseStage { checked, not_k_exact, theta, appendix, g48, verdict })
}

pub fn gram_stage(kt: &KTheory<BigInt>, style: Style) -> Result<GramStage> {
    let collection = build(kt.rect(), style);
    let (g, violations) = gram(kt.engine(), &collection.bundles(), GramMode::FullExt)?;
    let unitriangular = g.is_upper_unitriangular();
    Ok(GramStage {
        style: style_name(style).to_string(),
        objects: collection.len(),
        unitriangular,
        verdict: Verdict::from_bool(unitriangular && violations.is_empty()),
        violations: violations
            .into_iter()
            .map(|v| ViolationRecord { row: v.row, col: v.col, degree: v.degree, dim: v.dim })
            .collect(),
    })
}

pub fn style_name(style: Style) -> &'static str {
    match style {
        Style::Kapranov => "kapranov",
        Style::Fonarev => "fonarev",
    }
}

/// Runs every stage on `rect`. Parallel sections use the ambient rayon
/// pool; results are merged in index order, so output is independent of
/// the pool size.
pub fn full_report(rect: Rect, timing: bool) -> Result<Report> {
    let mut clock = Clock::new(timing);
    let kt = KTheory::<BigInt>::new(rect)?;
    clock.lap("k_theory");

    let collections: Vec<CollectionSummary> = [Style::Kapranov, Style::Fonarev]
        .into_iter()
        .map(|style| {
            let c = build(rect, style);
            let sorted = c.support_partition.windows(2).all(|w| w[0] >= w[1]);
            let expected = rect.count();
            CollectionSummary {
                style: style_name(style).to_string(),
                objects: c.len(),
                expected_objects: expected,
                verdict: Verdict::from_bool(sorted && c.len() as u64 == expected),
                support_partition: c.support_partition,
            }
        })
        .collect();
    clock.lap("collections");

    let gram = vec![gram_stage(&kt, Style::Kapranov)?, gram_stage(&kt, Style::Fonarev)?];
    clock.lap("gram");

    let (_, residual) = residual_stage(&kt)?;
    clock.lap("residual");

    let det = fullness_determinant(&kt)?;
    let fullness = FullnessStage { verdict: Verdict::from_bool(num_traits::Signed::abs(&det) == BigInt::from(1)), determinant: det };
    clock.lap("fullness");

    let staircase = staircase_stage(&kt)?;
    clock.lap("staircase");

    let verdict = collections
        .iter()
        .map(|c| c.verdict)
        .chain(gram.iter().map(|g| g.verdict))
        .chain([residual.verdict, fullness.verdict, staircase.verdict])
        .fold(Verdict::Skipped, Verdict::and);
    Ok(Report {
        rect,
        verdict,
        collections,
        gram,
        residual,
        fullness,
        staircase,
        timings_us: clock.finish(),
    })
}
