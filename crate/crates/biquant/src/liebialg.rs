//! Finite-dimensional Lie bialgebras given by structure constants over
//! exact rationals: axiom verification by brute-force expansion, dual and
//! op/cop variants, and the Drinfeld double with its canonical r and t
//! tensors.
//!
//! Conventions: `[x_i, x_j] = sum_k c_{ij}^k x_k` and
//! `delta(x_k) = sum_{i,j} f_k^{ij} x_i (x) x_j`. Indices are 0-based in
//! code and 1-based in the JSON interchange document and in reports.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::coeff::{format_rat, parse_rat, Cap, Rat, TruncSeries};
use crate::envelope::{Ambient, PbwMonomial, TensorElement};
use crate::{Error, Result};

/// A Lie bialgebra: dimension plus bracket and cobracket structure
/// constants. Values are immutable once built; all operations are pure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieBialgebra {
    dim: usize,
    /// c[i][j][k] flattened: coefficient of x_k in [x_i, x_j].
    bracket: Vec<Rat>,
    /// f[k][i][j] flattened: coefficient of x_i (x) x_j in delta(x_k).
    cobracket: Vec<Rat>,
    names: Vec<String>,
}

impl LieBialgebra {
    pub fn new(dim: usize, names: Option<Vec<String>>) -> Self {
        let names = names.unwrap_or_else(|| (1..=dim).map(|i| format!("x{}", i)).collect());
        assert_eq!(names.len(), dim, "basis name count must match dimension");
        LieBialgebra {
            dim,
            bracket: vec![Rat::zero(); dim * dim * dim],
            cobracket: vec![Rat::zero(); dim * dim * dim],
            names,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    #[inline]
    fn idx(&self, a: usize, b: usize, c: usize) -> usize {
        (a * self.dim + b) * self.dim + c
    }

    /// Coefficient of x_k in [x_i, x_j].
    pub fn c(&self, i: usize, j: usize, k: usize) -> &Rat {
        &self.bracket[self.idx(i, j, k)]
    }

    /// Coefficient of x_i (x) x_j in delta(x_k).
    pub fn f(&self, k: usize, i: usize, j: usize) -> &Rat {
        &self.cobracket[self.idx(k, i, j)]
    }

    fn set_raw_bracket(&mut self, a: usize, b: usize, c: usize, val: Rat) {
        let ix = self.idx(a, b, c);
        self.bracket[ix] = val;
    }

    fn set_raw_cobracket(&mut self, a: usize, b: usize, c: usize, val: Rat) {
        let ix = self.idx(a, b, c);
        self.cobracket[ix] = val;
    }

    /// Set [x_i, x_j] = coeff * x_k + ..., enforcing antisymmetry.
    pub fn set_bracket(&mut self, i: usize, j: usize, k: usize, coeff: Rat) {
        let (p, q) = (self.idx(i, j, k), self.idx(j, i, k));
        self.bracket[p] = coeff.clone();
        self.bracket[q] = -coeff;
    }

    /// Set delta(x_k) = coeff * x_i (x) x_j + ..., enforcing co-antisymmetry.
    pub fn set_cobracket(&mut self, k: usize, i: usize, j: usize, coeff: Rat) {
        let (p, q) = (self.idx(k, i, j), self.idx(k, j, i));
        self.cobracket[p] = coeff.clone();
        self.cobracket[q] = -coeff;
    }

    /// The abelian Lie bialgebra of the given dimension (zero bracket and
    /// cobracket): the trivial bialgebra.
    pub fn trivial(dim: usize) -> Self {
        Self::new(dim, None)
    }

    /// The two-dimensional Borel example: `[x1,x2] = x2`,
    /// delta(x2) = x1 (x) x2 - x2 (x) x1.
    pub fn borel() -> Self {
        let mut l = Self::new(2, None);
        l.set_bracket(0, 1, 1, Rat::from_integer(1.into()));
        l.set_cobracket(1, 0, 1, Rat::from_integer(1.into()));
        l
    }

    /// delta(x_k) as a list of (i, j, coeff) with nonzero coeff.
    pub fn cobracket_of(&self, k: usize) -> Vec<(usize, usize, Rat)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let c = self.f(k, i, j);
                if !c.is_zero() {
                    out.push((i, j, c.clone()));
                }
            }
        }
        out
    }

    /// [x_i, x_j] as a list of (k, coeff) with nonzero coeff.
    pub fn bracket_of(&self, i: usize, j: usize) -> Vec<(usize, Rat)> {
        let mut out = Vec::new();
        for k in 0..self.dim {
            let c = self.c(i, j, k);
            if !c.is_zero() {
                out.push((k, c.clone()));
            }
        }
        out
    }
}

/// Outcome of one named axiom check: pass/fail with the first
/// counterexample's basis indices (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub pass: bool,
    pub counterexample: Option<Vec<usize>>,
}

impl CheckOutcome {
    fn pass() -> Self {
        CheckOutcome {
            pass: true,
            counterexample: None,
        }
    }

    fn fail(ix: Vec<usize>) -> Self {
        CheckOutcome {
            pass: false,
            counterexample: Some(ix),
        }
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pass {
            write!(f, "PASS")
        } else {
            let ix: Vec<String> = self
                .counterexample
                .as_ref()
                .unwrap()
                .iter()
                .map(|i| (i + 1).to_string())
                .collect();
            write!(f, "FAIL at ({})", ix.join(", "))
        }
    }
}

/// Report of the five Lie bialgebra axioms, each verified by brute-force
/// expansion over all basis tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub antisymmetry: CheckOutcome,
    pub jacobi: CheckOutcome,
    pub co_antisymmetry: CheckOutcome,
    pub co_jacobi: CheckOutcome,
    pub cocycle: CheckOutcome,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.antisymmetry.pass
            && self.jacobi.pass
            && self.co_antisymmetry.pass
            && self.co_jacobi.pass
            && self.cocycle.pass
    }

    pub fn lines(&self) -> Vec<String> {
        vec![
            format!("antisymmetry: {}", self.antisymmetry),
            format!("jacobi: {}", self.jacobi),
            format!("co-antisymmetry: {}", self.co_antisymmetry),
            format!("co-jacobi: {}", self.co_jacobi),
            format!("cocycle: {}", self.cocycle),
        ]
    }
}

/// Verify the Lie bialgebra axioms on every basis tuple.
pub fn check_axioms(l: &LieBialgebra) -> AxiomReport {
    let d = l.dim;

    let mut antisymmetry = CheckOutcome::pass();
    'anti: for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                if (l.c(i, j, k) + l.c(j, i, k)) != Rat::zero() {
                    antisymmetry = CheckOutcome::fail(vec![i, j, k]);
                    break 'anti;
                }
            }
        }
    }

    // [[x_i,x_j],x_k] + [[x_j,x_k],x_i] + [[x_k,x_i],x_j] = 0
    let mut jacobi = CheckOutcome::pass();
    'jac: for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for t in 0..d {
                    let mut acc = Rat::zero();
                    for m in 0..d {
                        acc += l.c(i, j, m) * l.c(m, k, t);
                        acc += l.c(j, k, m) * l.c(m, i, t);
                        acc += l.c(k, i, m) * l.c(m, j, t);
                    }
                    if !acc.is_zero() {
                        jacobi = CheckOutcome::fail(vec![i, j, k, t]);
                        break 'jac;
                    }
                }
            }
        }
    }

    let mut co_antisymmetry = CheckOutcome::pass();
    'coanti: for k in 0..d {
        for i in 0..d {
            for j in 0..d {
                if (l.f(k, i, j) + l.f(k, j, i)) != Rat::zero() {
                    co_antisymmetry = CheckOutcome::fail(vec![k, i, j]);
                    break 'coanti;
                }
            }
        }
    }

    // (id + tau + tau^2)(delta (x) id)delta = 0 with tau(x(x)y(x)z) = y(x)z(x)x
    let mut co_jacobi = CheckOutcome::pass();
    'cojac: for k in 0..d {
        for p in 0..d {
            for q in 0..d {
                for r in 0..d {
                    // (delta (x) id)delta(x_k) has (a,b,c)-component
                    // sum_m f_k^{mc} f_m^{ab}; tau rotates (p,q,r) back.
                    let mut acc = Rat::zero();
                    for m in 0..d {
                        acc += l.f(k, m, r) * l.f(m, p, q); // id
                        acc += l.f(k, m, p) * l.f(m, q, r); // tau: (q,r,p) at source
                        acc += l.f(k, m, q) * l.f(m, r, p); // tau^2
                    }
                    if !acc.is_zero() {
                        co_jacobi = CheckOutcome::fail(vec![k, p, q, r]);
                        break 'cojac;
                    }
                }
            }
        }
    }

    // delta([x_i,x_j]) = x_i . delta(x_j) - x_j . delta(x_i)
    // with x.(z (x) z') = [x,z] (x) z' + z (x) [x,z'].
    let mut cocycle = CheckOutcome::pass();
    'coc: for i in 0..d {
        for j in 0..d {
            for p in 0..d {
                for q in 0..d {
                    let mut lhs = Rat::zero();
                    for k in 0..d {
                        lhs += l.c(i, j, k) * l.f(k, p, q);
                    }
                    let mut rhs = Rat::zero();
                    for a in 0..d {
                        // x_i acting on delta(x_j)
                        rhs += l.f(j, a, q) * l.c(i, a, p);
                        rhs += l.f(j, p, a) * l.c(i, a, q);
                        // minus x_j acting on delta(x_i)
                        rhs -= l.f(i, a, q) * l.c(j, a, p);
                        rhs -= l.f(i, p, a) * l.c(j, a, q);
                    }
                    if lhs != rhs {
                        cocycle = CheckOutcome::fail(vec![i, j, p, q]);
                        break 'coc;
                    }
                }
            }
        }
    }

    AxiomReport {
        antisymmetry,
        jacobi,
        co_antisymmetry,
        co_jacobi,
        cocycle,
    }
}

fn require_axioms(l: &LieBialgebra) -> Result<()> {
    let report = check_axioms(l);
    if report.all_pass() {
        Ok(())
    } else {
        let bad: Vec<String> = report
            .lines()
            .into_iter()
            .filter(|s| s.contains("FAIL"))
            .collect();
        Err(Error::AxiomFailure(bad.join("; ")))
    }
}

/// The dual Lie bialgebra: bracket is the transpose of the cobracket and
/// vice versa.
pub fn dualize(l: &LieBialgebra) -> Result<LieBialgebra> {
    require_axioms(l)?;
    let d = l.dim;
    let names = (1..=d).map(|i| format!("x{}'", i)).collect();
    let mut out = LieBialgebra::new(d, Some(names));
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                out.set_raw_bracket(i, j, k, l.f(k, i, j).clone());
                out.set_raw_cobracket(k, i, j, l.c(i, j, k).clone());
            }
        }
    }
    Ok(out)
}

/// Which structure map `flip` negates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlipKind {
    /// Negate the bracket.
    Op,
    /// Negate the cobracket.
    Cop,
}

/// Negate the bracket (op) or the cobracket (cop); axioms are preserved.
pub fn flip(l: &LieBialgebra, kind: FlipKind) -> LieBialgebra {
    let mut out = l.clone();
    match kind {
        FlipKind::Op => {
            for c in out.bracket.iter_mut() {
                *c = -c.clone();
            }
        }
        FlipKind::Cop => {
            for c in out.cobracket.iter_mut() {
                *c = -c.clone();
            }
        }
    }
    out
}

/// The Drinfeld double of a Lie bialgebra, with the canonical 2-tensors.
#[derive(Clone, Debug)]
pub struct Double {
    /// The double as a Lie bialgebra of dimension 2d. Indices 0..d are the
    /// original basis, d..2d the dual basis.
    pub double: LieBialgebra,
    /// Canonical tensor r = sum_i x_i (x) y_i over the double's enveloping
    /// algebra.
    pub r: TensorElement,
    /// t = r + r_21, symmetric and ad-invariant.
    pub t: TensorElement,
    pub plus_indices: std::ops::Range<usize>,
    pub minus_indices: std::ops::Range<usize>,
}

/// Build the Drinfeld double. Indices 0..d are the plus side, d..2d the
/// minus side, with <x_i, y_j> = delta_ij.
///
/// Mixed brackets come from the pairing action and the cobracket; the
/// double's cobracket is the commutator with r. The tensors r and t carry
/// the cap used by downstream series computations.
pub fn build_double(l: &LieBialgebra, cap: Cap) -> Result<Double> {
    require_axioms(l)?;
    let d = l.dim;
    let mut names: Vec<String> = l.names.clone();
    names.extend((1..=d).map(|i| format!("y{}", i)));
    let mut dbl = LieBialgebra::new(2 * d, Some(names));

    // Plus side keeps the original bracket.
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let c = l.c(i, j, k).clone();
                if !c.is_zero() {
                    dbl.set_raw_bracket(i, j, k, c);
                }
            }
        }
    }
    // Minus side is the dual with opposite bracket transposed:
    // [y_i, y_j] = sum_k f_k^{ij} y_k.
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let c = l.f(k, i, j).clone();
                if !c.is_zero() {
                    dbl.set_raw_bracket(d + i, d + j, d + k, c);
                }
            }
        }
    }
    // Mixed bracket: [x_i, y_j] = sum_b f_i^{jb} x_b - sum_k c_{ik}^j y_k.
    for i in 0..d {
        for j in 0..d {
            for b in 0..d {
                let c = l.f(i, j, b).clone();
                if !c.is_zero() {
                    dbl.set_raw_bracket(i, d + j, b, c.clone());
                    dbl.set_raw_bracket(d + j, i, b, -c);
                }
            }
            for k in 0..d {
                let c = l.c(i, k, j).clone();
                if !c.is_zero() {
                    let neg = -c;
                    dbl.set_raw_bracket(i, d + j, d + k, neg.clone());
                    dbl.set_raw_bracket(d + j, i, d + k, -neg);
                }
            }
        }
    }

    // Cobracket of the double: delta(X) = [X (x) 1 + 1 (x) X, r]
    //                                   = sum_i [X,x_i] (x) y_i + x_i (x) [X,y_i].
    let dd = 2 * d;
    for s in 0..dd {
        let mut delta = vec![Rat::zero(); dd * dd];
        for i in 0..d {
            for a in 0..dd {
                let c1 = dbl.c(s, i, a).clone();
                if !c1.is_zero() {
                    delta[a * dd + (d + i)] += c1;
                }
                let c2 = dbl.c(s, d + i, a).clone();
                if !c2.is_zero() {
                    delta[i * dd + a] += c2;
                }
            }
        }
        for p in 0..dd {
            for q in 0..dd {
                let c = delta[p * dd + q].clone();
                if !c.is_zero() {
                    dbl.set_raw_cobracket(s, p, q, c);
                }
            }
        }
    }

    let ambient = Arc::new(Ambient::enveloping(&dbl));
    let mut r = TensorElement::zero(ambient.clone(), 2, cap);
    let mut t = TensorElement::zero(ambient.clone(), 2, cap);
    for i in 0..d {
        let xi = PbwMonomial::generator(i, 2 * d);
        let yi = PbwMonomial::generator(d + i, 2 * d);
        let one = TruncSeries::one(cap);
        r.add_term(&[xi.clone(), yi.clone()], &one);
        t.add_term(&[xi.clone(), yi.clone()], &one);
        t.add_term(&[yi, xi], &one);
    }

    let out = Double {
        double: dbl,
        r,
        t,
        plus_indices: 0..d,
        minus_indices: d..2 * d,
    };
    verify_double(l, &out)?;
    Ok(out)
}

/// Post-conditions of the double construction: the output passes all
/// axioms and its cobracket restricts correctly to both sides.
fn verify_double(l: &LieBialgebra, dbl: &Double) -> Result<()> {
    require_axioms(&dbl.double)?;
    let d = l.dim;
    // Restriction to the plus side equals the original cobracket (mixed
    // legs must vanish on plus-side generators).
    for k in 0..d {
        for p in 0..2 * d {
            for q in 0..2 * d {
                let got = dbl.double.f(k, p, q);
                let want = if p < d && q < d {
                    l.f(k, p, q).clone()
                } else {
                    Rat::zero()
                };
                if *got != want {
                    return Err(Error::Internal(format!(
                        "double cobracket does not restrict to the plus side at ({}, {}, {})",
                        k + 1,
                        p + 1,
                        q + 1
                    )));
                }
            }
        }
    }
    // Restriction to the minus side equals the cobracket of the dual with
    // negated cobracket: delta_-(y_k) = -sum c_{ij}^k y_i (x) y_j.
    for k in 0..d {
        for p in 0..2 * d {
            for q in 0..2 * d {
                let got = dbl.double.f(d + k, p, q);
                let want = if p >= d && q >= d {
                    -l.c(p - d, q - d, k).clone()
                } else {
                    Rat::zero()
                };
                if *got != want {
                    return Err(Error::Internal(format!(
                        "double cobracket does not restrict to the minus side at ({}, {}, {})",
                        k + 1,
                        p + 1,
                        q + 1
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Ad-invariance of t: [X (x) 1 + 1 (x) X, t] = 0 for all basis X of the
/// double, expanded termwise over structure constants.
pub fn t_is_invariant(dbl: &Double) -> bool {
    let l = &dbl.double;
    let dd = l.dim;
    let d = dd / 2;
    for s in 0..dd {
        // t = sum_i x_i (x) y_i + y_i (x) x_i; compute sum_i [X,t_1] (x) t_2 + t_1 (x) [X,t_2]
        let mut acc = vec![Rat::zero(); dd * dd];
        for i in 0..d {
            for (a, b) in [(i, d + i), (d + i, i)] {
                for k in 0..dd {
                    let c1 = l.c(s, a, k).clone();
                    if !c1.is_zero() {
                        acc[k * dd + b] += c1;
                    }
                    let c2 = l.c(s, b, k).clone();
                    if !c2.is_zero() {
                        acc[a * dd + k] += c2;
                    }
                }
            }
        }
        if acc.iter().any(|c| !c.is_zero()) {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------
// JSON structure-constants document (CLI interchange format).
// ---------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct BracketEntry {
    i: usize,
    j: usize,
    k: usize,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct CobracketEntry {
    k: usize,
    i: usize,
    j: usize,
    coeff: String,
}

/// JSON document: `dim`, `bracket` entries {i, j, k, coeff},
/// `cobracket` entries {k, i, j, coeff}, optional `names`. Indices are
/// 1-based; coefficients are strings "p/q". Unlisted constants are zero.
#[derive(Serialize, Deserialize)]
struct BialgebraDoc {
    dim: usize,
    #[serde(default)]
    bracket: Vec<BracketEntry>,
    #[serde(default)]
    cobracket: Vec<CobracketEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    names: Option<Vec<String>>,
}

/// Load a Lie bialgebra from its JSON structure-constants document.
///
/// The loader symmetrizes antisymmetric pairs and rejects contradictory
/// duplicates.
pub fn from_json(text: &str) -> Result<LieBialgebra> {
    let doc: BialgebraDoc = serde_json::from_str(text)?;
    if doc.dim == 0 {
        return Err(Error::BadStructureConstants("dim must be positive".into()));
    }
    if let Some(names) = &doc.names {
        if names.len() != doc.dim {
            return Err(Error::BadStructureConstants(format!(
                "names has {} entries but dim = {}",
                names.len(),
                doc.dim
            )));
        }
    }
    let d = doc.dim;
    let mut l = LieBialgebra::new(d, doc.names.clone());
    let check = |name: &str, ix: usize| -> Result<usize> {
        if ix == 0 || ix > d {
            Err(Error::BadStructureConstants(format!(
                "{} index {} out of range 1..={}",
                name, ix, d
            )))
        } else {
            Ok(ix - 1)
        }
    };

    // Fill with duplicate detection: seen[(a,b,c)] = value already fixed.
    let mut seen_b: std::collections::BTreeMap<(usize, usize, usize), Rat> = Default::default();
    for e in &doc.bracket {
        let (i, j, k) = (check("i", e.i)?, check("j", e.j)?, check("k", e.k)?);
        let coeff = parse_rat(&e.coeff)?;
        if i == j && !coeff.is_zero() {
            return Err(Error::BadStructureConstants(format!(
                "bracket entry ({}, {}, {}) violates antisymmetry",
                e.i, e.j, e.k
            )));
        }
        for (key, val) in [((i, j, k), coeff.clone()), ((j, i, k), -coeff.clone())] {
            if let Some(prev) = seen_b.get(&key) {
                if *prev != val {
                    return Err(Error::BadStructureConstants(format!(
                        "contradictory duplicate bracket entry at ({}, {}, {})",
                        key.0 + 1,
                        key.1 + 1,
                        key.2 + 1
                    )));
                }
            } else {
                seen_b.insert(key, val);
            }
        }
        l.set_bracket(i, j, k, coeff);
    }

    let mut seen_c: std::collections::BTreeMap<(usize, usize, usize), Rat> = Default::default();
    for e in &doc.cobracket {
        let (k, i, j) = (check("k", e.k)?, check("i", e.i)?, check("j", e.j)?);
        let coeff = parse_rat(&e.coeff)?;
        if i == j && !coeff.is_zero() {
            return Err(Error::BadStructureConstants(format!(
                "cobracket entry ({}, {}, {}) violates co-antisymmetry",
                e.k, e.i, e.j
            )));
        }
        for (key, val) in [((k, i, j), coeff.clone()), ((k, j, i), -coeff.clone())] {
            if let Some(prev) = seen_c.get(&key) {
                if *prev != val {
                    return Err(Error::BadStructureConstants(format!(
                        "contradictory duplicate cobracket entry at ({}, {}, {})",
                        key.0 + 1,
                        key.1 + 1,
                        key.2 + 1
                    )));
                }
            } else {
                seen_c.insert(key, val);
            }
        }
        l.set_cobracket(k, i, j, coeff);
    }
    Ok(l)
}

/// Emit the JSON structure-constants document. Only one entry per
/// antisymmetric pair is listed (i < j), in deterministic order.
pub fn to_json(l: &LieBialgebra) -> String {
    let d = l.dim;
    let mut bracket = Vec::new();
    for i in 0..d {
        for j in (i + 1)..d {
            for k in 0..d {
                let c = l.c(i, j, k);
                if !c.is_zero() {
                    bracket.push(BracketEntry {
                        i: i + 1,
                        j: j + 1,
                        k: k + 1,
                        coeff: format_rat(c),
                    });
                }
            }
        }
    }
    let mut cobracket = Vec::new();
    for k in 0..d {
        for i in 0..d {
            for j in (i + 1)..d {
                let c = l.f(k, i, j);
                if !c.is_zero() {
                    cobracket.push(CobracketEntry {
                        k: k + 1,
                        i: i + 1,
                        j: j + 1,
                        coeff: format_rat(c),
                    });
                }
            }
        }
    }
    let doc = BialgebraDoc {
        dim: d,
        bracket,
        cobracket,
        names: Some(l.names.clone()),
    };
    serde_json::to_string_pretty(&doc).expect("document serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat_int;

    #[test]
    fn abelian_passes_all_axioms() {
        let report = check_axioms(&LieBialgebra::trivial(2));
        assert!(report.all_pass());
    }

    #[test]
    fn borel_passes_all_axioms() {
        let report = check_axioms(&LieBialgebra::borel());
        assert!(report.all_pass(), "{:?}", report);
    }

    #[test]
    fn swapped_borel_cobracket_is_also_a_bialgebra() {
        // d=2, [x1,x2]=x2, delta(x1)=x1(x)x2-x2(x)x1, delta(x2)=0.
        // Expanding the compatibility identity over all basis pairs shows
        // x2 . delta(x1) = 0, so every axiom holds for this variant too.
        let mut l = LieBialgebra::new(2, None);
        l.set_bracket(0, 1, 1, rat_int(1));
        l.set_cobracket(0, 0, 1, rat_int(1));
        assert!(check_axioms(&l).all_pass());
    }

    #[test]
    fn heisenberg_cobracket_fails_cocycle() {
        // [x1,x2]=x3 with delta(x3)=x1(x)x2-x2(x)x1 and delta(x1)=delta(x2)=0:
        // delta([x1,x2]) is nonzero while x1.delta(x2) - x2.delta(x1) = 0.
        let mut l = LieBialgebra::new(3, None);
        l.set_bracket(0, 1, 2, rat_int(1));
        l.set_cobracket(2, 0, 1, rat_int(1));
        let report = check_axioms(&l);
        assert!(report.antisymmetry.pass);
        assert!(report.jacobi.pass);
        assert!(report.co_antisymmetry.pass);
        assert!(report.co_jacobi.pass);
        assert!(!report.cocycle.pass);
        assert_eq!(report.cocycle.counterexample, Some(vec![0, 1, 0, 1]));
    }

    #[test]
    fn dualize_abelian_is_self_dual() {
        let l = LieBialgebra::trivial(2);
        let d = dualize(&l).unwrap();
        assert_eq!(d.bracket, l.bracket);
        assert_eq!(d.cobracket, l.cobracket);
    }

    #[test]
    fn dualize_transposes_constants() {
        let l = LieBialgebra::borel();
        let d = dualize(&l).unwrap();
        // bracket of the dual reads off the cobracket of Borel
        assert_eq!(*d.c(0, 1, 1), *l.f(1, 0, 1));
        assert_eq!(*d.f(1, 0, 1), *l.c(0, 1, 1));
        assert!(check_axioms(&d).all_pass());
    }

    #[test]
    fn dualize_is_involutive_on_borel() {
        let l = LieBialgebra::borel();
        let dd = dualize(&dualize(&l).unwrap()).unwrap();
        assert_eq!(dd.bracket, l.bracket);
        assert_eq!(dd.cobracket, l.cobracket);
    }

    #[test]
    fn flip_is_involutive_and_fixes_abelian() {
        let l = LieBialgebra::borel();
        assert_eq!(flip(&flip(&l, FlipKind::Op), FlipKind::Op), l);
        let a = LieBialgebra::trivial(2);
        assert_eq!(flip(&a, FlipKind::Cop), a);
        assert!(check_axioms(&flip(&l, FlipKind::Op)).all_pass());
        assert!(check_axioms(&flip(&l, FlipKind::Cop)).all_pass());
    }

    #[test]
    fn dual_of_op_equals_cop_of_dual() {
        // (g*)^op = (g^cop)* as structure constants
        let l = LieBialgebra::borel();
        let lhs = flip(&dualize(&l).unwrap(), FlipKind::Op);
        let rhs = dualize(&flip(&l, FlipKind::Cop)).unwrap();
        assert_eq!(lhs.bracket, rhs.bracket);
        assert_eq!(lhs.cobracket, rhs.cobracket);
    }

    #[test]
    fn double_of_trivial_is_abelian_with_zero_cobracket() {
        let cap = Cap::diag(2);
        let dbl = build_double(&LieBialgebra::trivial(1), cap).unwrap();
        assert_eq!(dbl.double.dim(), 2);
        assert!(dbl.double.bracket.iter().all(|c| c.is_zero()));
        // Evaluating the commutator form with a zero bracket yields a zero
        // cobracket on the double.
        assert!(dbl.double.cobracket.iter().all(|c| c.is_zero()));
        // r = x (x) y
        let x = PbwMonomial::generator(0, 2);
        let y = PbwMonomial::generator(1, 2);
        assert_eq!(dbl.r.coeff(&[x, y]).coeff(0, 0), rat_int(1));
    }

    #[test]
    fn double_of_borel_passes_axioms_and_invariance() {
        let cap = Cap::diag(2);
        let dbl = build_double(&LieBialgebra::borel(), cap).unwrap();
        assert_eq!(dbl.double.dim(), 4);
        assert!(check_axioms(&dbl.double).all_pass());
        assert!(t_is_invariant(&dbl));
    }

    #[test]
    fn double_cobracket_matches_termwise_expansion() {
        // delta(X) computed from the commutator with r equals
        // sum_i [X,x_i](x)y_i + x_i(x)[X,y_i] termwise.
        let cap = Cap::diag(2);
        let dbl = build_double(&LieBialgebra::borel(), cap).unwrap();
        let l = &dbl.double;
        let dd = l.dim();
        let d = dd / 2;
        for s in 0..dd {
            let mut acc = vec![Rat::zero(); dd * dd];
            for i in 0..d {
                for k in 0..dd {
                    let c1 = l.c(s, i, k).clone();
                    if !c1.is_zero() {
                        acc[k * dd + (d + i)] += c1;
                    }
                    let c2 = l.c(s, d + i, k).clone();
                    if !c2.is_zero() {
                        acc[i * dd + k] += c2;
                    }
                }
            }
            for p in 0..dd {
                for q in 0..dd {
                    assert_eq!(acc[p * dd + q], *l.f(s, p, q), "at ({}, {}, {})", s, p, q);
                }
            }
        }
    }

    #[test]
    fn json_round_trip_and_errors() {
        let l = LieBialgebra::borel();
        let text = to_json(&l);
        let back = from_json(&text).unwrap();
        assert_eq!(back, l);

        // Listing both antisymmetric orientations consistently is fine.
        let ok = r#"{"dim":2,"bracket":[
            {"i":1,"j":2,"k":2,"coeff":"1"},
            {"i":2,"j":1,"k":2,"coeff":"-1"}]}"#;
        assert!(from_json(ok).is_ok());

        // Contradictory duplicate rejected.
        let bad = r#"{"dim":2,"bracket":[
            {"i":1,"j":2,"k":2,"coeff":"1"},
            {"i":2,"j":1,"k":2,"coeff":"1"}]}"#;
        assert!(from_json(bad).is_err());

        // Out-of-range index rejected.
        let oor = r#"{"dim":2,"bracket":[{"i":1,"j":3,"k":2,"coeff":"1"}]}"#;
        assert!(from_json(oor).is_err());
    }
}
