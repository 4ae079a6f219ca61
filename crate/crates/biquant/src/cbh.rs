//! The Campbell-Hausdorff series, its one-parameter rescaling, and the
//! coproduct it induces on the symmetric algebra by dualizing Lie words
//! through the cobracket.
//!
//! The series is computed in the free associative algebra on two letters
//! by composing log with the product of truncated exponentials, then
//! rewriting each homogeneous component into right-normed Lie words.
//! Correctness is certified by re-expanding the Lie words back into the
//! associative algebra.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::coeff::{Cap, Rat, TruncSeries};
use crate::envelope::{EnvElement, PbwMonomial, TensorElement};
use crate::liebialg::LieBialgebra;
use crate::Result;

/// A polynomial in the free associative algebra over letters 0..alphabet,
/// graded and truncated at max_deg. Words are letter strings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreePoly {
    max_deg: u32,
    terms: BTreeMap<Vec<u8>, Rat>,
}

impl FreePoly {
    pub fn zero(max_deg: u32) -> Self {
        FreePoly {
            max_deg,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(max_deg: u32) -> Self {
        let mut p = Self::zero(max_deg);
        p.terms.insert(Vec::new(), Rat::one());
        p
    }

    pub fn letter(l: u8, max_deg: u32) -> Self {
        let mut p = Self::zero(max_deg);
        p.terms.insert(vec![l], Rat::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_deg(&self) -> u32 {
        self.max_deg
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u8>, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, word: &[u8]) -> Rat {
        self.terms.get(word).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, word: &[u8], c: &Rat) {
        if c.is_zero() || word.len() as u32 > self.max_deg {
            return;
        }
        let cur = self.coeff(word) + c;
        if cur.is_zero() {
            self.terms.remove(word);
        } else {
            self.terms.insert(word.to_vec(), cur);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in other.terms.iter() {
            out.add_term(w, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in other.terms.iter() {
            out.add_term(w, &-c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = Self::zero(self.max_deg);
        if c.is_zero() {
            return out;
        }
        for (w, a) in self.terms.iter() {
            out.terms.insert(w.clone(), a * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.max_deg);
        for (wa, ca) in self.terms.iter() {
            for (wb, cb) in other.terms.iter() {
                if (wa.len() + wb.len()) as u32 > self.max_deg {
                    continue;
                }
                let mut w = wa.clone();
                w.extend_from_slice(wb);
                out.add_term(&w, &(ca * cb));
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// exp of a polynomial with zero constant term.
    pub fn exp(&self) -> Self {
        assert!(self.coeff(&[]).is_zero(), "exp needs zero constant term");
        let mut out = Self::one(self.max_deg);
        let mut power = Self::one(self.max_deg);
        let mut fact = Rat::one();
        for n in 1..=self.max_deg as u64 {
            power = power.mul(self);
            fact *= Rat::from_integer(n.into());
            out = out.add(&power.scale(&(Rat::one() / fact.clone())));
            if power.is_zero() {
                break;
            }
        }
        out
    }

    /// log(1 + self) for a polynomial with zero constant term.
    pub fn log1p(&self) -> Self {
        assert!(self.coeff(&[]).is_zero(), "log1p needs zero constant term");
        let mut out = Self::zero(self.max_deg);
        let mut power = Self::one(self.max_deg);
        for n in 1..=self.max_deg as i64 {
            power = power.mul(self);
            if power.is_zero() {
                break;
            }
            let sign = if n % 2 == 1 { Rat::one() } else { -Rat::one() };
            out = out.add(&power.scale(&(sign / Rat::from_integer(n.into()))));
        }
        out
    }

    pub fn degree_component(&self, n: u32) -> Self {
        let mut out = Self::zero(self.max_deg);
        for (w, c) in self.terms.iter() {
            if w.len() as u32 == n {
                out.terms.insert(w.clone(), c.clone());
            }
        }
        out
    }
}

/// A binary bracketing tree with letter leaves. Degree is the leaf count.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum LieWord {
    Leaf(u8),
    Bracket(Box<LieWord>, Box<LieWord>),
}

impl LieWord {
    pub fn bracket(a: LieWord, b: LieWord) -> Self {
        LieWord::Bracket(Box::new(a), Box::new(b))
    }

    pub fn degree(&self) -> u32 {
        match self {
            LieWord::Leaf(_) => 1,
            LieWord::Bracket(a, b) => a.degree() + b.degree(),
        }
    }

    /// Leaves in left-to-right order.
    pub fn leaves(&self) -> Vec<u8> {
        match self {
            LieWord::Leaf(l) => vec![*l],
            LieWord::Bracket(a, b) => {
                let mut out = a.leaves();
                out.extend(b.leaves());
                out
            }
        }
    }

    /// Expand the nested commutators in the free associative algebra.
    pub fn expand(&self, max_deg: u32) -> FreePoly {
        match self {
            LieWord::Leaf(l) => FreePoly::letter(*l, max_deg),
            LieWord::Bracket(a, b) => a.expand(max_deg).commutator(&b.expand(max_deg)),
        }
    }

    pub fn render(&self, names: &[&str]) -> String {
        match self {
            LieWord::Leaf(l) => names[*l as usize].to_string(),
            LieWord::Bracket(a, b) => format!("[{},{}]", a.render(names), b.render(names)),
        }
    }
}

/// A graded combination of Lie words, capped at some order. The
/// coefficient type is the exact scalar for the plain series and a
/// truncated series for the rescaled one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieSeries<C> {
    pub terms: BTreeMap<LieWord, C>,
    pub order: u32,
}

impl LieSeries<Rat> {
    /// Re-expand into the free associative algebra.
    pub fn expand(&self, max_deg: u32) -> FreePoly {
        let mut out = FreePoly::zero(max_deg);
        for (w, c) in self.terms.iter() {
            out = out.add(&w.expand(max_deg).scale(c));
        }
        out
    }

    /// Render one degree's terms, classical display: a negative
    /// coefficient flips the outermost bracket instead of printing a sign.
    pub fn render_degree(&self, n: u32, names: &[&str]) -> Vec<String> {
        use num_traits::Signed;
        let mut out = Vec::new();
        for (w, c) in self.terms.iter() {
            if w.degree() != n || c.is_zero() {
                continue;
            }
            if c.is_negative() {
                let flipped = match w {
                    LieWord::Bracket(a, b) => LieWord::bracket((**b).clone(), (**a).clone()),
                    LieWord::Leaf(_) => w.clone(),
                };
                let sign = if matches!(w, LieWord::Leaf(_)) { "-" } else { "" };
                out.push(format!(
                    "{}{} {}",
                    sign,
                    crate::coeff::format_rat(&c.abs()),
                    flipped.render(names)
                ));
            } else {
                out.push(format!(
                    "{} {}",
                    crate::coeff::format_rat(c),
                    w.render(names)
                ));
            }
        }
        out.sort();
        out
    }
}

/// Right-normed bracketing [a1,[a2,[...,[a_{n-1},an]...]]] of a word,
/// with the innermost pair sign-ordered. Returns None when the innermost
/// pair collapses.
fn right_normed(word: &[u8]) -> Option<(LieWord, Rat)> {
    let n = word.len();
    assert!(n >= 2);
    let (a, b) = (word[n - 2], word[n - 1]);
    let (mut tree, sign) = if a == b {
        return None;
    } else if a < b {
        (
            LieWord::bracket(LieWord::Leaf(a), LieWord::Leaf(b)),
            Rat::one(),
        )
    } else {
        (
            LieWord::bracket(LieWord::Leaf(b), LieWord::Leaf(a)),
            -Rat::one(),
        )
    };
    for i in (0..n - 2).rev() {
        tree = LieWord::bracket(LieWord::Leaf(word[i]), tree);
    }
    Some((tree, sign))
}

/// The Campbell-Hausdorff series log(e^X e^Y) through degree n, written
/// in right-normed Lie words.
///
/// Each homogeneous associative component is converted with the
/// right-normed quasi-idempotent (degree-n Lie elements rescale by n) and
/// the result is certified by re-expansion.
pub fn bch(n: u32) -> LieSeries<Rat> {
    assert!(n >= 1);
    let assoc = bch_associative(n);
    let mut terms: BTreeMap<LieWord, Rat> = BTreeMap::new();
    for deg in 1..=n {
        let comp = assoc.degree_component(deg);
        if deg == 1 {
            for (w, c) in comp.terms() {
                terms.insert(LieWord::Leaf(w[0]), c.clone());
            }
            continue;
        }
        let scale = Rat::one() / Rat::from_integer((deg as i64).into());
        for (w, c) in comp.terms() {
            if let Some((tree, sign)) = right_normed(w) {
                let entry = terms.entry(tree).or_insert_with(Rat::zero);
                *entry += c * &sign * &scale;
            }
        }
    }
    terms.retain(|_, c| !c.is_zero());
    let series = LieSeries { terms, order: n };
    // Certification: the Lie-word form re-expands to the associative
    // series, degree by degree.
    debug_assert_eq!(series.expand(n), assoc);
    series
}

/// log(e^X e^Y) in the free associative algebra on X = 0, Y = 1.
pub fn bch_associative(n: u32) -> FreePoly {
    let x = FreePoly::letter(0, n);
    let y = FreePoly::letter(1, n);
    let prod = x.exp().mul(&y.exp());
    prod.sub(&FreePoly::one(n)).log1p()
}

/// The rescaled series: every degree-n Lie word is scaled by v^{n-1}, so
/// that the constant-in-v part is X + Y.
pub fn bch_rescaled(n: u32, cap: Cap) -> LieSeries<TruncSeries> {
    let plain = bch(n);
    let mut terms = BTreeMap::new();
    for (w, c) in plain.terms.into_iter() {
        let deg = w.degree();
        let coeff = TruncSeries::monomial(0, deg - 1, c, cap);
        if !coeff.is_zero() {
            terms.insert(w, coeff);
        }
    }
    LieSeries { terms, order: n }
}

/// Iterated cobracket of a generator following a bracketing tree: the
/// pairing of the generator against the tree evaluated on dual-space
/// leaves. Returns terms (leaf-order leg indices, coefficient).
fn cobracket_tree(l: &LieBialgebra, gen: usize, tree: &LieWord) -> Vec<(Vec<usize>, Rat)> {
    match tree {
        LieWord::Leaf(_) => vec![(vec![gen], Rat::one())],
        LieWord::Bracket(a, b) => {
            let d = l.dim();
            let mut out = Vec::new();
            for p in 0..d {
                for q in 0..d {
                    let c = l.f(gen, p, q);
                    if c.is_zero() {
                        continue;
                    }
                    for (legs_a, ca) in cobracket_tree(l, p, a) {
                        for (legs_b, cb) in cobracket_tree(l, q, b) {
                            let mut legs = legs_a.clone();
                            legs.extend(legs_b.iter());
                            out.push((legs, c * &ca * &cb));
                        }
                    }
                }
            }
            out
        }
    }
}

/// The coproduct of the function bialgebra on the dual formal group:
/// each Lie word of the rescaled Campbell-Hausdorff series is dualized
/// through the cobracket of `l`, routing first-letter leaves to the first
/// tensor factor and second-letter leaves to the second, with symmetric
/// multiplication within each factor. Extended to all of S(g) as an
/// algebra morphism; the v-order is capped by the coefficient cap.
pub fn cbh_coproduct(a: &EnvElement, l: &LieBialgebra, mu: &LieSeries<Rat>) -> Result<TensorElement> {
    assert!(
        a.ambient().is_abelian(),
        "the coproduct is defined on the symmetric algebra"
    );
    assert!(
        mu.order > a.cap().v,
        "need Lie words through degree v-cap + 1"
    );
    let sym = a.ambient().clone();
    let cap = a.cap();
    let d = l.dim();

    // Coproduct of each generator, memoized.
    let gen_cp: Vec<TensorElement> = (0..d)
        .map(|g| {
            let mut t = TensorElement::zero(sym.clone(), 2, cap);
            for (w, c) in mu.terms.iter() {
                let deg = w.degree();
                if deg > cap.v + 1 {
                    continue;
                }
                let vpow = TruncSeries::monomial(0, deg - 1, c.clone(), cap);
                if vpow.is_zero() {
                    continue;
                }
                let letters = w.leaves();
                for (legs, r) in cobracket_tree(l, g, w) {
                    let mut left = PbwMonomial::one(d);
                    let mut right = PbwMonomial::one(d);
                    for (pos, &leg) in legs.iter().enumerate() {
                        if letters[pos] == 0 {
                            left.0[leg] += 1;
                        } else {
                            right.0[leg] += 1;
                        }
                    }
                    t.add_term(&[left, right], &vpow.scale(&r));
                }
            }
            t
        })
        .collect();

    let mut out = TensorElement::zero(sym.clone(), 2, cap);
    for (mono, coeff) in a.terms() {
        let mut acc = TensorElement::unit(sym.clone(), 2, cap);
        for (i, &e) in mono.0.iter().enumerate() {
            for _ in 0..e {
                acc = acc.mul(&gen_cp[i])?;
            }
        }
        out = out.add(&acc.scale_series(coeff)?)?;
    }
    Ok(out)
}

/// Convenience: the rescaled series at the order needed by the cap.
pub fn mu_for_cap(cap: Cap) -> LieSeries<Rat> {
    bch(cap.v + 1)
}
