#![allow(dead_code)]

//! Slow, independent reference computations used as test oracles.

use std::collections::BTreeMap;

use grres::{BigInt, Rect, Weight};

/// Laurent polynomial in k variables: exponent vector to coefficient.
pub type Poly = BTreeMap<Vec<i64>, i64>;

fn fill(shape: &[usize], vars: usize, cells: &mut Vec<Vec<usize>>, row: usize, col: usize, out: &mut Poly) {
    if row == shape.len() || shape[row] == 0 {
        let mut e = vec![0i64; vars];
        for r in cells.iter() {
            for &v in r {
                e[v] += 1;
            }
        }
        *out.entry(e).or_insert(0) += 1;
        return;
    }
    if col == shape[row] {
        cells.push(Vec::new());
        fill(shape, vars, cells, row + 1, 0, out);
        cells.pop();
        return;
    }
    let left = if col > 0 { cells[row][col - 1] } else { 0 };
    let above = if row > 0 { Some(cells[row - 1][col]) } else { None };
    let lo = match above {
        Some(a) => left.max(a + 1),
        None => left,
    };
    for v in lo..vars {
        cells[row].push(v);
        fill(shape, vars, cells, row, col + 1, out);
        cells[row].pop();
    }
}

/// Schur polynomial of a partition in `vars` variables, by enumerating
/// semistandard tableaux.
pub fn schur_poly(partition: &[usize], vars: usize) -> Poly {
    let shape: Vec<usize> = partition.iter().copied().filter(|&p| p > 0).collect();
    let mut out = Poly::new();
    if shape.len() > vars {
        return out;
    }
    let mut cells = vec![Vec::new()];
    fill(&shape, vars, &mut cells, 0, 0, &mut out);
    out
}

/// Character of the GL(k) representation with dominant weight `w`.
pub fn character(w: &[i64]) -> Poly {
    let k = w.len();
    let shift = *w.last().unwrap();
    let partition: Vec<usize> = w.iter().map(|&x| (x - shift) as usize).collect();
    schur_poly(&partition, k)
        .into_iter()
        .map(|(e, c)| (e.into_iter().map(|x| x + shift).collect(), c))
        .collect()
}

pub fn invert(p: &Poly) -> Poly {
    p.iter().map(|(e, &c)| (e.iter().map(|x| -x).collect(), c)).collect()
}

pub fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<i64> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert(0) += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Re-expands a symmetric Laurent polynomial in the Schur basis by peeling
/// off the lexicographically largest monomial.
pub fn schur_expand(p: &Poly) -> BTreeMap<Vec<i64>, i64> {
    let mut rest = p.clone();
    rest.retain(|_, c| *c != 0);
    let mut out = BTreeMap::new();
    while let Some((top, &c)) = rest.iter().next_back() {
        let top = top.clone();
        assert!(top.windows(2).all(|w| w[0] >= w[1]), "leading monomial {top:?} is not dominant");
        out.insert(top.clone(), c);
        for (e, d) in character(&top) {
            let entry = rest.entry(e).or_insert(0);
            *entry -= c * d;
        }
        rest.retain(|_, c| *c != 0);
    }
    out
}

pub fn lr_oracle(a: &[i64], b: &[i64]) -> BTreeMap<Vec<i64>, i64> {
    schur_expand(&mul(&character(a), &character(b)))
}

fn permutations(k: usize) -> Vec<(Vec<usize>, i64)> {
    if k == 0 {
        return vec![(Vec::new(), 1)];
    }
    let mut out = Vec::new();
    for (p, s) in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            let sign = if (p.len() - pos) % 2 == 0 { s } else { -s };
            out.push((q, sign));
        }
    }
    out
}

/// Euler characteristic on G(k,n) of the homogeneous bundle whose GL(k)
/// character (in the Chern roots of U*) is `p`, via the Weyl character
/// formula: multiply by the Vandermonde antisymmetrizer and evaluate the
/// GL(n) dimension polynomial monomial by monomial.
pub fn euler_of_character(p: &Poly, rect: Rect) -> BigInt {
    let (k, n) = (rect.k(), rect.n());
    let perms = permutations(k);
    let mut numerator = BigInt::from(0);
    for (e, &c) in p {
        for (perm, sign) in &perms {
            let beta: Vec<i64> = (0..k).map(|i| e[i] + (k - 1 - perm[i]) as i64).collect();
            let mut term = BigInt::from(c * sign);
            for i in 0..k {
                for j in i + 1..k {
                    term *= beta[i] - beta[j];
                }
                for j in k + 1..=n {
                    term *= beta[i] + (j - k) as i64;
                }
            }
            numerator += term;
        }
    }
    let mut denominator = BigInt::from(1);
    for i in 1..=k {
        denominator *= i as i64;
    }
    for i in 1..=n {
        for j in i + 1..=n {
            if i <= k {
                denominator *= (j - i) as i64;
            }
        }
    }
    // The factors with k < i < j cancel between numerator and denominator.
    assert_eq!(&numerator % &denominator, BigInt::from(0), "non-integral Euler characteristic");
    numerator / denominator
}

/// χ(Σ^a U*(s), Σ^b U*(t)) from characters alone.
pub fn euler_oracle(a: &[i64], s: i64, b: &[i64], t: i64, rect: Rect) -> BigInt {
    let k = a.len();
    let det = character(&vec![t - s; k]);
    let p = mul(&mul(&invert(&character(a)), &character(b)), &det);
    euler_of_character(&p, rect)
}

/// Number of semistandard tableaux of shape `w` in `m` letters.
pub fn dim_oracle(w: &[i64], m: usize) -> i64 {
    let shift = *w.last().unwrap();
    let partition: Vec<usize> = w.iter().map(|&x| (x - shift) as usize).collect();
    schur_poly(&partition, m).values().sum()
}

pub fn laplace_det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut total = 0;
    for c in 0..n {
        if m[0][c] == 0 {
            continue;
        }
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &v)| v).collect())
            .collect();
        let sign = if c % 2 == 0 { 1 } else { -1 };
        total += sign * m[0][c] * laplace_det(&minor);
    }
    total
}

/// Diagrams with a short orbit, counted as binary words of length n with
/// k ones whose rotation period is smaller than n.
pub fn short_word_count(k: usize, n: usize) -> u64 {
    let mut count = 0;
    for bits in 0u32..(1 << n) {
        if bits.count_ones() as usize != k {
            continue;
        }
        let rot = |x: u32, s: usize| ((x >> s) | (x << (n - s))) & ((1u32 << n) - 1);
        if (1..n).any(|s| rot(bits, s) == bits) {
            count += 1;
        }
    }
    count
}

pub fn weight(entries: &[i64]) -> Weight {
    Weight::new(entries.to_vec()).unwrap()
}

pub fn rect(k: i64, n: i64) -> Rect {
    Rect::new(k, n).unwrap()
}
