//! Pairings between the symmetric algebra (with the Campbell-Hausdorff
//! coproduct) and the rescaled enveloping algebra of the dual, Gram-matrix
//! triangularity, and dual reconstruction.
//!
//! Multi-indices enumerate the PBW basis of each side; the degree bound
//! is a caller choice. Entries are exact and enumeration is graded
//! lexicographic, so reports are byte-stable.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::cbh::{cbh_coproduct, LieSeries};
use crate::coeff::{factorial, Cap, Rat, TruncSeries};
use crate::deltacalc::monomials_up_to;
use crate::envelope::{Ambient, EnvElement, PbwMonomial};
use crate::liebialg::LieBialgebra;
use crate::{Error, Result};

/// The standard pairing on symmetric algebras of dual spaces:
/// (x_j, y_k) = delta_{j,k} j_1! ... j_d!, extended bilinearly; zero when
/// total degrees differ.
pub fn sym_pairing(a: &EnvElement, b: &EnvElement) -> Result<TruncSeries> {
    if a.ambient().dim() != b.ambient().dim() {
        return Err(Error::AmbientMismatch);
    }
    let mut out = TruncSeries::zero(a.cap());
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            if ma == mb {
                let mut fact = Rat::one();
                for &e in ma.0.iter() {
                    fact *= factorial(e);
                }
                out = out.add(&ca.mul(cb)?.scale(&fact))?;
            }
        }
    }
    Ok(out)
}

/// Scalar version on bare monomials.
pub fn sym_pairing_monomials(j: &PbwMonomial, k: &PbwMonomial) -> Rat {
    if j != k {
        return Rat::zero();
    }
    let mut fact = Rat::one();
    for &e in j.0.iter() {
        fact *= factorial(e);
    }
    fact
}

/// The pairing of an element of `S(g)[[v]]` (with the Campbell-Hausdorff
/// coproduct built from the cobracket of `l`) against the scaled
/// dual-side basis vector v^{|k|} y_k.
///
/// Computed by peeling one factor v*y at a time: the factor pairs against
/// the degree-one component of the relevant leg of the coproduct of `a`,
/// and the recursion bottoms out at the counit. The coefficient cap of
/// `a` must resolve v-order |k|.
pub fn cbh_pairing(
    a: &EnvElement,
    k: &PbwMonomial,
    l: &LieBialgebra,
    mu: &LieSeries<Rat>,
) -> Result<TruncSeries> {
    if a.ambient().dim() != k.0.len() {
        return Err(Error::AmbientMismatch);
    }
    if k.degree() > a.cap().v + 1 {
        return Err(Error::CapTooSmall {
            n: k.degree(),
            cap: a.cap().v,
        });
    }
    let mut current = a.clone();
    let mut remaining = k.clone();
    loop {
        // Leftmost remaining letter.
        let next = remaining.0.iter().position(|&e| e > 0);
        let Some(i0) = next else {
            return Ok(current.counit());
        };
        remaining.0[i0] -= 1;
        // (leg1, v y_{i0}) picks the x_{i0}-component of the first leg.
        let cp = cbh_coproduct(&current, l, mu)?;
        let mut peeled = EnvElement::zero(a.ambient().clone(), a.cap());
        let target = PbwMonomial::generator(i0, a.ambient().dim());
        for (legs, c) in cp.terms() {
            if legs[0] == target {
                peeled.add_term(&legs[1], c);
            }
        }
        current = peeled;
    }
}

/// One Gram entry with its multi-indices.
#[derive(Clone, Debug)]
pub struct GramEntry {
    pub row: PbwMonomial,
    pub col: PbwMonomial,
    pub value: TruncSeries,
}

/// Gram matrix of the pairing on all multi-indices of total degree at
/// most `max_degree`, with the triangularity findings.
#[derive(Clone, Debug)]
pub struct GramReport {
    pub entries: Vec<GramEntry>,
    pub violations: Vec<String>,
    pub max_degree: u32,
}

impl GramReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }

    /// Plain-text matrix dump with row/column multi-index headers.
    pub fn render(&self, names: &[String]) -> String {
        let mut out = String::new();
        let mut cols: Vec<&PbwMonomial> = Vec::new();
        for e in &self.entries {
            if !cols.contains(&&e.col) {
                cols.push(&e.col);
            }
        }
        let header: Vec<String> = cols.iter().map(|c| c.render(names)).collect();
        out.push_str(&format!("columns: {}\n", header.join(" | ")));
        let mut by_row: BTreeMap<&PbwMonomial, Vec<&GramEntry>> = BTreeMap::new();
        for e in &self.entries {
            by_row.entry(&e.row).or_default().push(e);
        }
        for (row, entries) in by_row {
            let cells: Vec<String> = entries.iter().map(|e| e.value.render()).collect();
            out.push_str(&format!("{}: {}\n", row.render(names), cells.join(" | ")));
        }
        for v in &self.violations {
            out.push_str(&format!("violation: {}\n", v));
        }
        out.push_str(if self.pass() {
            "triangularity: PASS\n"
        } else {
            "triangularity: FAIL\n"
        });
        out
    }
}

/// Compute the Gram matrix ((x_j, v^{|k|} y_k)) for |j|, |k| <= max_degree
/// and assert the triangular structure: zero when |j| > |k|, the factorial
/// diagonal when |j| = |k|, and divisibility by v^{|k|-|j|} below.
pub fn gram_report(l: &LieBialgebra, max_degree: u32, order: u32) -> Result<GramReport> {
    let sym = Arc::new(Ambient::symmetric(l));
    let cap = Cap::new(0, order);
    let mu = crate::cbh::bch(order + 1);
    let indices = monomials_up_to(l.dim(), max_degree);
    let mut entries = Vec::new();
    let mut violations = Vec::new();
    for j in indices.iter() {
        let a = EnvElement::from_monomial(sym.clone(), j.clone(), TruncSeries::one(cap));
        for k in indices.iter() {
            if k.degree() > order + 1 {
                continue;
            }
            let value = cbh_pairing(&a, k, l, &mu)?;
            let names = l.names();
            if j.degree() > k.degree() {
                if !value.is_zero() {
                    violations.push(format!(
                        "({}, {}): expected 0 above the diagonal, got {}",
                        j.render(names),
                        k.render(names),
                        value.render()
                    ));
                }
            } else if j.degree() == k.degree() {
                let expect =
                    TruncSeries::constant(sym_pairing_monomials(j, k), cap);
                if value != expect {
                    violations.push(format!(
                        "({}, {}): expected factorial diagonal {}, got {}",
                        j.render(names),
                        k.render(names),
                        expect.render(),
                        value.render()
                    ));
                }
            } else {
                let gap = k.degree() - j.degree();
                if !value.divisible_v(gap) {
                    violations.push(format!(
                        "({}, {}): not divisible by v^{}: {}",
                        j.render(names),
                        k.render(names),
                        gap,
                        value.render()
                    ));
                }
            }
            entries.push(GramEntry {
                row: j.clone(),
                col: k.clone(),
                value,
            });
        }
    }
    Ok(GramReport {
        entries,
        violations,
        max_degree,
    })
}

/// Recover an element of `S(g)[[v]]` from its pairings against the scaled
/// dual basis, by successive approximation down the factorial diagonal.
///
/// `values` maps each multi-index of total degree <= max_degree to the
/// required pairing; indices of the reconstruction are supported on the
/// same degree range. Fails when a residual is not divisible by the
/// expected v-power, which means the prescribed functional is not in the
/// topological dual at this truncation.
pub fn dual_reconstruct(
    values: &BTreeMap<PbwMonomial, TruncSeries>,
    l: &LieBialgebra,
    max_degree: u32,
    order: u32,
) -> Result<EnvElement> {
    let sym = Arc::new(Ambient::symmetric(l));
    let cap = Cap::new(0, order);
    let mu = crate::cbh::bch(order + 1);
    let indices = monomials_up_to(l.dim(), max_degree);
    for k in values.keys() {
        if k.degree() > max_degree {
            return Err(Error::NotInDual(format!(
                "index of degree {} beyond the stated bound {}",
                k.degree(),
                max_degree
            )));
        }
    }
    let zero = TruncSeries::zero(cap);
    let mut approx = EnvElement::zero(sym.clone(), cap);
    for stage in 0..=order {
        let mut correction = EnvElement::zero(sym.clone(), cap);
        for k in indices.iter() {
            let want = values.get(k).unwrap_or(&zero);
            let got = cbh_pairing(&approx, k, l, &mu)?;
            let residual = want.sub(&got)?;
            if !residual.divisible_v(stage) {
                return Err(Error::NotInDual(format!(
                    "residual at index {} has a term below v^{}",
                    k.render(l.names()),
                    stage
                )));
            }
            // The v^stage layer of the residual against the factorial
            // diagonal fixes the v^stage coefficient of the element.
            let c = residual.coeff(0, stage);
            if !c.is_zero() {
                let inv_fact = Rat::one() / sym_pairing_monomials(k, k);
                correction.add_term(k, &TruncSeries::monomial(0, stage, c * inv_fact, cap));
            }
        }
        approx = approx.add(&correction)?;
    }
    // Final consistency at all resolvable orders.
    for k in indices.iter() {
        let want = values.get(k).unwrap_or(&zero);
        let got = cbh_pairing(&approx, k, l, &mu)?;
        if *want != got {
            return Err(Error::NotInDual(format!(
                "pairing at index {} cannot be matched at this truncation",
                k.render(l.names())
            )));
        }
    }
    Ok(approx)
}
