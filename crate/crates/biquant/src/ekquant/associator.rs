//! A degree-3 associator table: the group-like, even solution of the
//! pentagon and hexagon equations with braiding exp(t/2).
//!
//! An even exponent has no odd-degree terms, so through degree 3 the
//! table holds a single coefficient: the bracket term of degree 2. The
//! coefficient is determined by solving the hexagon equations degree by
//! degree in the free associative algebra on two letters (the third
//! pairwise operator is minus their sum once the center is dropped); the
//! pentagon residual is then checked to lie in the ideal of the
//! infinitesimal-braid relations on four strands.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::cbh::{FreePoly, LieSeries, LieWord};
use crate::coeff::Rat;
use crate::{Error, Result};

/// The associator at truncation: a group-like exponential of an even Lie
/// series, tabulated through degree `order` <= 3.
#[derive(Clone, Debug)]
pub struct AssociatorTable {
    /// Exponent of the series in two letters; through degree 3 this is a
    /// single bracket term.
    pub exponent: LieSeries<Rat>,
    /// Coefficient of the degree-2 bracket.
    pub bracket_coeff: Rat,
    pub order: u32,
}

/// Solve for the associator through the given order (at most 3).
pub fn associator(order: u32) -> Result<AssociatorTable> {
    if order > 3 {
        return Err(Error::UnsupportedOrder(order));
    }
    let c = solve_hexagon_degree2()?;
    // With the even constraint the degree-3 exponent vanishes; both
    // hexagons and the pentagon must then hold identically through
    // degree 3.
    let (h1, h2) = hexagon_residuals(&c, 3);
    if !h1.is_zero() || !h2.is_zero() {
        return Err(Error::Internal(
            "hexagon residual does not vanish through degree 3".into(),
        ));
    }
    if !pentagon_holds(&c, 3) {
        return Err(Error::Internal(
            "pentagon residual does not vanish through degree 3".into(),
        ));
    }
    let mut terms = BTreeMap::new();
    if !c.is_zero() {
        terms.insert(
            LieWord::bracket(LieWord::Leaf(0), LieWord::Leaf(1)),
            c.clone(),
        );
    }
    Ok(AssociatorTable {
        exponent: LieSeries { terms, order },
        bracket_coeff: c,
        order,
    })
}

/// Phi(p, q) = 1 + c[p, q] through degree 3 (the even exponent has no
/// degree-3 term and the square of the exponent starts at degree 4).
fn phi(p: &FreePoly, q: &FreePoly, c: &Rat, invert: bool) -> FreePoly {
    let comm = p.commutator(q).scale(c);
    let one = FreePoly::one(p.max_deg());
    if invert {
        one.sub(&comm)
    } else {
        one.add(&comm)
    }
}

/// Both hexagon residuals in the two-letter algebra, with the third
/// operator t13 = -(A + B) after dropping the central sum.
fn hexagon_residuals(c: &Rat, max_deg: u32) -> (FreePoly, FreePoly) {
    let a = FreePoly::letter(0, max_deg);
    let b = FreePoly::letter(1, max_deg);
    let t = a.add(&b).scale(&-Rat::one());
    let half = |p: &FreePoly| p.scale(&crate::coeff::rat(1, 2)).exp();

    // Phi(B,T) e^{(A+T)/2} Phi(A,B) = e^{T/2} Phi(A,T) e^{A/2}
    let lhs1 = phi(&b, &t, c, false)
        .mul(&half(&a.add(&t)))
        .mul(&phi(&a, &b, c, false));
    let rhs1 = half(&t).mul(&phi(&a, &t, c, false)).mul(&half(&a));

    // Phi(T,A)^{-1} e^{(T+B)/2} Phi(A,B)^{-1} = e^{T/2} Phi(T,B)^{-1} e^{B/2}
    let lhs2 = phi(&t, &a, c, true)
        .mul(&half(&t.add(&b)))
        .mul(&phi(&a, &b, c, true));
    let rhs2 = half(&t).mul(&phi(&t, &b, c, true)).mul(&half(&b));

    (lhs1.sub(&rhs1), lhs2.sub(&rhs2))
}

/// Determine the degree-2 coefficient from the hexagons. The residual is
/// affine in the coefficient through degree 3, so two evaluations pin it.
fn solve_hexagon_degree2() -> Result<Rat> {
    let (r0a, r0b) = hexagon_residuals(&Rat::zero(), 2);
    let (r1a, r1b) = hexagon_residuals(&Rat::one(), 2);
    let mut solution: Option<Rat> = None;
    for (r0, r1) in [(&r0a, &r1a), (&r0b, &r1b)] {
        let words: std::collections::BTreeSet<Vec<u8>> = r0
            .terms()
            .map(|(w, _)| w.clone())
            .chain(r1.terms().map(|(w, _)| w.clone()))
            .collect();
        for w in words {
            let at0 = r0.coeff(&w);
            let slope = r1.coeff(&w) - &at0;
            if slope.is_zero() {
                if !at0.is_zero() {
                    return Err(Error::Internal(
                        "hexagon system is inconsistent at degree 2".into(),
                    ));
                }
                continue;
            }
            let c = -at0 / slope;
            match &solution {
                None => solution = Some(c),
                Some(prev) if *prev == c => {}
                Some(_) => {
                    return Err(Error::Internal(
                        "hexagon system has conflicting solutions".into(),
                    ));
                }
            }
        }
    }
    solution.ok_or_else(|| Error::Internal("hexagon system is degenerate".into()))
}

/// Letters for the six pairwise operators on four strands, in the order
/// (1,2) (1,3) (1,4) (2,3) (2,4) (3,4).
fn strand_letter(i: usize, j: usize) -> u8 {
    match (i, j) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => unreachable!("strand pair out of range"),
    }
}

/// The infinitesimal-braid relations on four strands, as degree-2
/// polynomials: disjoint pairs commute, and each pairwise operator
/// commutes with the sum over a common triple.
fn braid_relations(max_deg: u32) -> Vec<FreePoly> {
    let letter = |i, j| FreePoly::letter(strand_letter(i, j), max_deg);
    let mut rels = Vec::new();
    // Disjoint supports commute.
    rels.push(letter(0, 1).commutator(&letter(2, 3)));
    rels.push(letter(0, 2).commutator(&letter(1, 3)));
    rels.push(letter(0, 3).commutator(&letter(1, 2)));
    // Triple relations.
    for t in [(0usize, 1usize, 2usize), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
        let (i, j, k) = t;
        let tij = letter(i, j);
        let tik = letter(i, k);
        let tjk = letter(j, k);
        rels.push(tij.commutator(&tik.add(&tjk)));
        rels.push(tik.commutator(&tij.add(&tjk)));
        rels.push(tjk.commutator(&tij.add(&tik)));
    }
    rels
}

/// Check that the pentagon residual lies in the two-sided ideal of the
/// braid relations, degree by degree through max_deg.
fn pentagon_holds(c: &Rat, max_deg: u32) -> bool {
    let letter = |i, j| FreePoly::letter(strand_letter(i, j), max_deg);
    let t12 = letter(0, 1);
    let t13 = letter(0, 2);
    let t23 = letter(1, 2);
    let t24 = letter(1, 3);
    let t34 = letter(2, 3);

    let lhs = phi(&t12, &t23.add(&t24), c, false).mul(&phi(&t13.add(&t23), &t34, c, false));
    let rhs = phi(&t23, &t34, c, false)
        .mul(&phi(&t12.add(&t13), &t24.add(&t34), c, false))
        .mul(&phi(&t12, &t23, c, false));
    let residual = lhs.sub(&rhs);

    let rels = braid_relations(max_deg);
    for deg in 0..=max_deg {
        let component = residual.degree_component(deg);
        if component.is_zero() {
            continue;
        }
        // Ideal component of this degree: x * r * y over monomial
        // cofactors of complementary degrees.
        let mut span: Vec<FreePoly> = Vec::new();
        if deg >= 2 {
            let pad = deg - 2;
            for left_deg in 0..=pad {
                let right_deg = pad - left_deg;
                for lw in words_of_degree(left_deg) {
                    for rw in words_of_degree(right_deg) {
                        let lp = poly_of_word(&lw, max_deg);
                        let rp = poly_of_word(&rw, max_deg);
                        for r in rels.iter() {
                            span.push(lp.mul(r).mul(&rp));
                        }
                    }
                }
            }
        }
        if !in_span(&span, &component) {
            return false;
        }
    }
    true
}

fn words_of_degree(deg: u32) -> Vec<Vec<u8>> {
    let mut out: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 0..deg {
        let mut next = Vec::with_capacity(out.len() * 6);
        for w in out.iter() {
            for l in 0..6u8 {
                let mut w2 = w.clone();
                w2.push(l);
                next.push(w2);
            }
        }
        out = next;
    }
    out
}

fn poly_of_word(w: &[u8], max_deg: u32) -> FreePoly {
    let mut p = FreePoly::one(max_deg);
    for &l in w {
        p = p.mul(&FreePoly::letter(l, max_deg));
    }
    p
}

/// Exact membership of `target` in the rational span of `vectors`, by
/// Gaussian elimination over the words that occur.
fn in_span(vectors: &[FreePoly], target: &FreePoly) -> bool {
    let mut word_index: BTreeMap<Vec<u8>, usize> = BTreeMap::new();
    for v in vectors.iter().chain(std::iter::once(target)) {
        for (w, _) in v.terms() {
            let next = word_index.len();
            word_index.entry(w.clone()).or_insert(next);
        }
    }
    let dim = word_index.len();
    let to_dense = |p: &FreePoly| -> Vec<Rat> {
        let mut row = vec![Rat::zero(); dim];
        for (w, c) in p.terms() {
            row[word_index[w]] = c.clone();
        }
        row
    };
    // Row-reduce the span, then reduce the target against it.
    let mut basis: Vec<(usize, Vec<Rat>)> = Vec::new(); // (pivot, row)
    'next_vec: for v in vectors {
        let mut row = to_dense(v);
        for (pivot, b) in basis.iter() {
            if !row[*pivot].is_zero() {
                let f = row[*pivot].clone() / b[*pivot].clone();
                for i in 0..dim {
                    let delta = &b[i] * &f;
                    row[i] = row[i].clone() - delta;
                }
            }
        }
        for i in 0..dim {
            if !row[i].is_zero() {
                basis.push((i, row));
                continue 'next_vec;
            }
        }
    }
    let mut row = to_dense(target);
    for (pivot, b) in basis.iter() {
        if !row[*pivot].is_zero() {
            let f = row[*pivot].clone() / b[*pivot].clone();
            for i in 0..dim {
                let delta = &b[i] * &f;
                row[i] = row[i].clone() - delta;
            }
        }
    }
    row.iter().all(|c| c.is_zero())
}
