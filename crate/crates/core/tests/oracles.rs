mod common;

use std::collections::BTreeMap;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use grres::matrix::determinant;
use grres::{
    bott, build_staircase, cyclic_step, dimension, enumerate, ext_table, gram, kapranov, lr_product, residual_rank,
    BigInt, BottOutcome, BoxedDiagram, ExactKTheory, Filter, GramMode, RankMethod, TwistedSchur,
};

fn expansion_map(a: &[i64], b: &[i64]) -> BTreeMap<Vec<i64>, i64> {
    lr_product(&weight(a), &weight(b))
        .unwrap()
        .iter()
        .map(|(w, m)| (w.entries().to_vec(), m as i64))
        .collect()
}

fn dominant_weights(k: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    fn go(k: usize, lo: i64, hi: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let top = cur.last().copied().unwrap_or(hi);
        for v in (lo..=top).rev() {
            cur.push(v);
            go(k, lo, hi, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, lo, hi, &mut Vec::new(), &mut out);
    out
}

#[test]
fn lr_matches_polynomial_multiplication() {
    assert_eq!(
        expansion_map(&[2, 1, 0], &[1, 0, 0]),
        BTreeMap::from([(vec![3, 1, 0], 1), (vec![2, 2, 0], 1), (vec![2, 1, 1], 1)])
    );
    for k in 1..=3 {
        let ws = dominant_weights(k, 0, 3);
        for a in &ws {
            for b in &ws {
                if a.iter().sum::<i64>() + b.iter().sum::<i64>() > 7 {
                    continue;
                }
                assert_eq!(expansion_map(a, b), lr_oracle(a, b), "{a:?} x {b:?}");
            }
        }
    }
}

#[test]
fn lr_with_negative_entries_matches_oracle() {
    let ws = dominant_weights(3, -2, 2);
    for a in ws.iter().step_by(3) {
        for b in ws.iter().step_by(5) {
            assert_eq!(expansion_map(a, b), lr_oracle(a, b), "{a:?} x {b:?}");
        }
    }
}

#[test]
fn dimension_matches_tableau_count() {
    assert_eq!(dimension::<BigInt>(&weight(&[2, 2, 0, 0]), 8).unwrap(), BigInt::from(336));
    assert_eq!(dim_oracle(&[2, 2, 0, 0, 0, 0, 0, 0], 8), 336);
    for k in 1..=3 {
        for w in dominant_weights(k, -1, 3) {
            for m in k..=k + 3 {
                let mut padded = w.clone();
                if *w.last().unwrap() >= 0 {
                    padded.resize(m, 0);
                } else {
                    continue;
                }
                assert_eq!(
                    dimension::<BigInt>(&weight(&padded), m).unwrap(),
                    BigInt::from(dim_oracle(&padded, m)),
                    "{padded:?} in GL({m})"
                );
            }
        }
    }
}

#[test]
fn euler_characteristic_matches_weyl_character_oracle() {
    let boxes = [(1, 3), (2, 4), (2, 5), (3, 6)];
    for (k, n) in boxes {
        let r = rect(k, n);
        let ds = enumerate(r, Filter::All);
        for (ia, a) in ds.iter().enumerate() {
            for b in ds.iter().skip(ia % 3).step_by(3) {
                for t in [-(n), -2, 0, 1, 3] {
                    let e = TwistedSchur::from_diagram(a, 0);
                    let f = TwistedSchur::from_diagram(b, t);
                    let got: BigInt = grres::euler_char(&e, &f).unwrap();
                    let want = euler_oracle(&a.to_weight_entries(), 0, &b.to_weight_entries(), t, r);
                    assert_eq!(got, want, "{r}: chi({a}, {b}({t}))");
                }
            }
        }
    }
}

#[test]
fn ext_table_matches_termwise_bott_on_oracle_expansion() {
    let r = rect(3, 6);
    let e = TwistedSchur::new(r, weight(&[2, 1, 0]), 0).unwrap();
    let f = TwistedSchur::new(r, weight(&[1, 1, 0]), 1).unwrap();
    let p = mul(&mul(&invert(&character(&[2, 1, 0])), &character(&[1, 1, 0])), &character(&[1, 1, 1]));
    let mut want: BTreeMap<usize, BigInt> = BTreeMap::new();
    for (w, m) in schur_expand(&p) {
        if let BottOutcome::Contribution { degree, dim, .. } = bott::<BigInt>(r, &weight(&w)).unwrap() {
            *want.entry(degree).or_insert_with(|| BigInt::from(0)) += dim * m;
        }
    }
    want.retain(|_, v| *v != BigInt::from(0));
    let got = ext_table::<BigInt>(&e, &f).unwrap();
    assert_eq!(got.dims(), &want);
    assert_eq!(got.euler(), euler_oracle(&[2, 1, 0], 0, &[1, 1, 0], 1, r));
}

#[test]
fn small_euler_values() {
    let r = rect(2, 4);
    let chi: BigInt = grres::euler_char(&TwistedSchur::line(r, 0), &TwistedSchur::line(r, 1)).unwrap();
    assert_eq!(chi, BigInt::from(6));
    let r = rect(1, 3);
    let chi: BigInt = grres::euler_char(&TwistedSchur::line(r, 1), &TwistedSchur::line(r, 0)).unwrap();
    assert_eq!(chi, BigInt::from(0));
}

#[test]
fn kapranov_p2_gram() {
    let r = rect(1, 3);
    let kt = ExactKTheory::new(r).unwrap();
    let (g, violations) = gram(kt.engine(), &kapranov(r).bundles(), GramMode::Euler).unwrap();
    assert!(violations.is_empty());
    let want: Vec<Vec<BigInt>> =
        vec![vec![1, 3, 6], vec![0, 1, 3], vec![0, 0, 1]].into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
    assert_eq!(g.entries, want);
}

#[test]
fn class_of_line_on_p1() {
    let r = rect(1, 2);
    let kt = ExactKTheory::new(r).unwrap();
    let o2 = kt.class_of(&TwistedSchur::line(r, 2)).unwrap();
    assert_eq!(o2.coords(), &[BigInt::from(-1), BigInt::from(2)]);
    let e0 = kt.class_of(&TwistedSchur::line(r, 0)).unwrap();
    let o1 = kt.class_of(&TwistedSchur::line(r, 1)).unwrap();
    let m = kt.mutate_left(std::slice::from_ref(&e0), &o1).unwrap();
    assert_eq!(m.coords(), &[BigInt::from(-2), BigInt::from(1)]);
    assert_eq!(kt.euler_pairing(&e0, &m).unwrap(), BigInt::from(0));
}

#[test]
fn determinant_matches_laplace_expansion() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut next = || rng.gen_range(-5i64..=5);
    for size in 1..=6 {
        for _ in 0..40 {
            let m: Vec<Vec<i64>> = (0..size).map(|_| (0..size).map(|_| next()).collect()).collect();
            let big: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
            assert_eq!(determinant(&big).unwrap(), BigInt::from(laplace_det(&m)), "{m:?}");
        }
    }
}

#[test]
fn residual_rank_matches_word_count() {
    for n in 2..=13 {
        for k in 1..n {
            let r = rect(k as i64, n as i64);
            let want = short_word_count(k, n);
            assert_eq!(residual_rank(r, RankMethod::Mobius), want, "{r}");
            assert_eq!(residual_rank(r, RankMethod::BruteForce), want, "{r}");
        }
    }
}

#[test]
fn orbit_lengths_match_word_periods() {
    let r = rect(4, 8);
    for d in enumerate(r, Filter::All) {
        let word = d.to_word();
        let period = (1..=8).find(|&s| (0..8).all(|i| word[i] == word[(i + s) % 8])).unwrap();
        assert_eq!(grres::orbit_length(&d), period, "{d}");
    }
}

fn row_formula(lambda: &BoxedDiagram, a: usize) -> Vec<usize> {
    let p = lambda.parts();
    (0..p.len())
        .map(|r| {
            if p[r] <= a {
                p[r]
            } else {
                let next = p.get(r + 1).copied().unwrap_or(0);
                a.max(next.saturating_sub(1))
            }
        })
        .collect()
}

#[test]
fn staircase_terms_match_row_formula() {
    for (k, n) in [(2, 5), (3, 6), (3, 8), (4, 9), (4, 13)] {
        let r = rect(k, n);
        let w = (n - k) as usize;
        for lambda in enumerate(r, Filter::All).into_iter().filter(|d| d.parts()[0] == w) {
            let s = build_staircase(r, &lambda).unwrap();
            assert_eq!(s.terms.len(), w);
            for (idx, term) in s.terms.iter().enumerate() {
                let a = w - 1 - idx;
                assert_eq!(term.mu.parts(), row_formula(&lambda, a).as_slice(), "{lambda} term {}", idx + 1);
                assert_eq!(term.c, lambda.size() - term.mu.size());
                assert_eq!(term.extra_twist, 0);
            }
            let tail = cyclic_step(&lambda);
            assert_eq!(s.tail.total_weight(), TwistedSchur::from_diagram(&tail, -1).total_weight());
        }
    }
}
