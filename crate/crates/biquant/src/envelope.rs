//! PBW-based enveloping algebras, the symmetric bialgebra with its
//! bi-Poisson structure, and tensor powers thereof.
//!
//! One straightening engine serves all algebras: S(g) is the enveloping
//! algebra of the abelianization (zero bracket), U(g) and U(d) carry the
//! bracket of the input. Elements are finite combinations of normal-ordered
//! monomials x_1^{j_1} ... x_D^{j_D} with truncated-series coefficients;
//! no zero coefficients are stored. The canonical term order is graded
//! lexicographic on exponent vectors.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::coeff::{binomial, factorial, Cap, Rat, TruncSeries};
use crate::liebialg::LieBialgebra;
use crate::{Error, Result};

/// A Lie algebra presented by structure constants, fixing a basis order
/// for PBW normal forms.
#[derive(Debug)]
pub struct Ambient {
    dim: usize,
    /// c[i][j][k] flattened; all zero for symmetric algebras.
    bracket: Vec<Rat>,
    names: Vec<String>,
    abelian: bool,
}

impl Ambient {
    fn new(dim: usize, bracket: Vec<Rat>, names: Vec<String>) -> Self {
        let abelian = bracket.iter().all(|c| c.is_zero());
        Ambient {
            dim,
            bracket,
            names,
            abelian,
        }
    }

    /// U(g): the enveloping algebra of the given Lie (bi)algebra.
    pub fn enveloping(l: &LieBialgebra) -> Self {
        let d = l.dim();
        let mut bracket = vec![Rat::zero(); d * d * d];
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    bracket[(i * d + j) * d + k] = l.c(i, j, k).clone();
                }
            }
        }
        Self::new(d, bracket, l.names().to_vec())
    }

    /// S(g): same basis, zero bracket.
    pub fn symmetric(l: &LieBialgebra) -> Self {
        let d = l.dim();
        Self::new(d, vec![Rat::zero(); d * d * d], l.names().to_vec())
    }

    /// S of an anonymous d-dimensional space.
    pub fn symmetric_of_dim(d: usize, names: Vec<String>) -> Self {
        assert_eq!(names.len(), d);
        Self::new(d, vec![Rat::zero(); d * d * d], names)
    }

    /// Same algebra with the basis relabeled: new index i carries the old
    /// generator `perm[i]`. Used to evaluate module actions that need the
    /// opposite normal order.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let d = self.dim;
        assert_eq!(perm.len(), d);
        let mut inv = vec![0usize; d];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut bracket = vec![Rat::zero(); d * d * d];
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    // [x'_i, x'_j] = [x_{perm(i)}, x_{perm(j)}] = sum_K c x_K
                    bracket[(i * d + j) * d + inv[k]] =
                        self.c(perm[i], perm[j], k).clone();
                }
            }
        }
        let names = perm.iter().map(|&o| self.names[o].clone()).collect();
        Self::new(d, bracket, names)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    #[inline]
    pub fn c(&self, i: usize, j: usize, k: usize) -> &Rat {
        &self.bracket[(i * self.dim + j) * self.dim + k]
    }

    /// Structural compatibility: same dimension and bracket constants.
    pub fn compatible(&self, other: &Ambient) -> bool {
        self.dim == other.dim && self.bracket == other.bracket
    }
}

/// A normal-ordered monomial x_1^{j_1} ... x_D^{j_D}, stored as its
/// exponent vector. The empty exponent vector denotes 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PbwMonomial(pub Vec<u32>);

impl PbwMonomial {
    pub fn one(dim: usize) -> Self {
        PbwMonomial(vec![0; dim])
    }

    pub fn generator(i: usize, dim: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        PbwMonomial(e)
    }

    pub fn from_exponents(e: Vec<u32>) -> Self {
        PbwMonomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Expand into the ordered generator word.
    pub fn word(&self) -> Vec<usize> {
        let mut w = Vec::with_capacity(self.degree() as usize);
        for (i, &e) in self.0.iter().enumerate() {
            for _ in 0..e {
                w.push(i);
            }
        }
        w
    }

    /// Exponent-wise product (valid in commutative ambients).
    pub fn mul_abelian(&self, other: &Self) -> Self {
        PbwMonomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.is_unit() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(names[i].clone()),
                _ => parts.push(format!("{}^{}", names[i], e)),
            }
        }
        parts.join("*")
    }
}

impl PartialOrd for PbwMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PbwMonomial {
    /// Graded lexicographic: total degree first, then exponent vector.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// Straighten a generator word into the PBW normal form.
///
/// Adjacent out-of-order generators x_b x_a (b > a) rewrite as
/// x_a x_b - [x_a, x_b], recursively, until normal order. The memo map is
/// shared across the recursion of one top-level call.
pub fn straighten(amb: &Ambient, word: &[usize]) -> BTreeMap<PbwMonomial, Rat> {
    let mut memo: HashMap<Vec<usize>, BTreeMap<PbwMonomial, Rat>> = HashMap::new();
    straighten_memo(amb, word, &mut memo)
}

fn straighten_memo(
    amb: &Ambient,
    word: &[usize],
    memo: &mut HashMap<Vec<usize>, BTreeMap<PbwMonomial, Rat>>,
) -> BTreeMap<PbwMonomial, Rat> {
    if let Some(hit) = memo.get(word) {
        return hit.clone();
    }
    let descent = word.windows(2).position(|w| w[0] > w[1]);
    let result = match descent {
        None => {
            let mut e = vec![0u32; amb.dim];
            for &g in word {
                e[g] += 1;
            }
            let mut out = BTreeMap::new();
            out.insert(PbwMonomial(e), Rat::one());
            out
        }
        Some(i) => {
            let (b, a) = (word[i], word[i + 1]);
            let mut swapped = word.to_vec();
            swapped.swap(i, i + 1);
            let mut out = straighten_memo(amb, &swapped, memo);
            // x_b x_a = x_a x_b - [x_a, x_b]
            for k in 0..amb.dim {
                let c = amb.c(a, b, k);
                if c.is_zero() {
                    continue;
                }
                let mut shorter = Vec::with_capacity(word.len() - 1);
                shorter.extend_from_slice(&word[..i]);
                shorter.push(k);
                shorter.extend_from_slice(&word[i + 2..]);
                for (mono, coeff) in straighten_memo(amb, &shorter, memo) {
                    let entry = out.entry(mono).or_insert_with(Rat::zero);
                    *entry -= c * &coeff;
                }
            }
            out.retain(|_, c| !c.is_zero());
            out
        }
    };
    memo.insert(word.to_vec(), result.clone());
    result
}

/// Product of two normal-ordered monomials as a normal-ordered sum.
pub fn monomial_product(amb: &Ambient, a: &PbwMonomial, b: &PbwMonomial) -> BTreeMap<PbwMonomial, Rat> {
    if amb.abelian {
        let mut out = BTreeMap::new();
        out.insert(a.mul_abelian(b), Rat::one());
        return out;
    }
    let mut word = a.word();
    word.extend(b.word());
    straighten(amb, &word)
}

/// A finite combination of PBW monomials with truncated-series
/// coefficients.
#[derive(Clone, Debug)]
pub struct EnvElement {
    ambient: Arc<Ambient>,
    cap: Cap,
    terms: BTreeMap<PbwMonomial, TruncSeries>,
}

impl PartialEq for EnvElement {
    fn eq(&self, other: &Self) -> bool {
        self.ambient.compatible(&other.ambient) && self.cap == other.cap && self.terms == other.terms
    }
}

impl EnvElement {
    pub fn zero(ambient: Arc<Ambient>, cap: Cap) -> Self {
        EnvElement {
            ambient,
            cap,
            terms: BTreeMap::new(),
        }
    }

    pub fn unit(ambient: Arc<Ambient>, cap: Cap) -> Self {
        let mut out = Self::zero(ambient.clone(), cap);
        out.add_term(&PbwMonomial::one(ambient.dim()), &TruncSeries::one(cap));
        out
    }

    pub fn generator(ambient: Arc<Ambient>, i: usize, cap: Cap) -> Self {
        let mut out = Self::zero(ambient.clone(), cap);
        out.add_term(
            &PbwMonomial::generator(i, ambient.dim()),
            &TruncSeries::one(cap),
        );
        out
    }

    pub fn from_monomial(ambient: Arc<Ambient>, m: PbwMonomial, coeff: TruncSeries) -> Self {
        let cap = coeff.cap();
        let mut out = Self::zero(ambient, cap);
        out.add_term(&m, &coeff);
        out
    }

    pub fn ambient(&self) -> &Arc<Ambient> {
        &self.ambient
    }

    pub fn cap(&self) -> Cap {
        self.cap
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PbwMonomial, &TruncSeries)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &PbwMonomial) -> TruncSeries {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| TruncSeries::zero(self.cap))
    }

    pub fn add_term(&mut self, m: &PbwMonomial, s: &TruncSeries) {
        if s.is_zero() {
            return;
        }
        match self.terms.get_mut(m) {
            Some(cur) => {
                let sum = cur.add(s).expect("coefficient caps agree by construction");
                if sum.is_zero() {
                    self.terms.remove(m);
                } else {
                    *cur = sum;
                }
            }
            None => {
                self.terms.insert(m.clone(), s.clone());
            }
        }
    }

    pub fn add_rat_term(&mut self, m: &PbwMonomial, c: &Rat) {
        self.add_term(m, &TruncSeries::constant(c.clone(), self.cap));
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if !self.ambient.compatible(&other.ambient) {
            return Err(Error::AmbientMismatch);
        }
        if self.cap != other.cap {
            return Err(Error::CapMismatch(self.cap, other.cap));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, s) in other.terms.iter() {
            out.add_term(m, s);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.ambient.clone(), self.cap);
        for (m, s) in self.terms.iter() {
            out.terms.insert(m.clone(), s.neg());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.ambient.clone(), self.cap);
        }
        let mut out = Self::zero(self.ambient.clone(), self.cap);
        for (m, s) in self.terms.iter() {
            out.terms.insert(m.clone(), s.scale(c));
        }
        out
    }

    pub fn scale_series(&self, s: &TruncSeries) -> Result<Self> {
        if s.cap() != self.cap {
            return Err(Error::CapMismatch(self.cap, s.cap()));
        }
        let mut out = Self::zero(self.ambient.clone(), self.cap);
        for (m, c) in self.terms.iter() {
            out.add_term(m, &c.mul(s)?);
        }
        Ok(out)
    }

    /// PBW product: concatenate and straighten, bilinear over series.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.ambient.clone(), self.cap);
        for (ma, sa) in self.terms.iter() {
            for (mb, sb) in other.terms.iter() {
                let coeff = sa.mul(sb)?;
                if coeff.is_zero() {
                    continue;
                }
                for (mono, c) in monomial_product(&self.ambient, ma, mb) {
                    out.add_term(&mono, &coeff.scale(&c));
                }
            }
        }
        Ok(out)
    }

    /// Counit: the coefficient of the unit monomial.
    pub fn counit(&self) -> TruncSeries {
        self.coeff(&PbwMonomial::one(self.ambient.dim()))
    }

    /// The standard coproduct as a 2-tensor.
    pub fn coproduct(&self) -> TensorElement {
        let t = TensorElement::from_env(self);
        t.expand_leg_standard(0)
    }

    /// Least m with the element in the m-th filtration layer: the maximal
    /// PBW total degree (0 for the zero element).
    pub fn filtration_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Membership in the parametrized enveloping algebra inside `U(g)[u]`:
    /// every u-coefficient must have filtration degree at most its
    /// u-power, and no v-dependence is allowed.
    pub fn vu_member(&self) -> bool {
        for (mono, s) in self.terms.iter() {
            let deg = mono.degree();
            for (&(m, n), c) in s.iter() {
                if c.is_zero() {
                    continue;
                }
                if n != 0 || deg > m {
                    return false;
                }
            }
        }
        true
    }

    /// The associated-graded symbol of an element of `U(g)[u]`: each
    /// u^m-coefficient projects onto its degree-m part in S(g).
    pub fn top_symbol(&self, sym: &Arc<Ambient>) -> EnvElement {
        let mut out = EnvElement::zero(sym.clone(), self.cap);
        for (mono, s) in self.terms.iter() {
            let deg = mono.degree();
            for (&(m, n), c) in s.iter() {
                if n == 0 && m == deg {
                    out.add_term(mono, &TruncSeries::constant(c.clone(), self.cap));
                }
            }
        }
        out
    }

    /// Apply a coefficient-wise series map.
    pub fn map_coeffs(&self, f: impl Fn(&TruncSeries) -> TruncSeries) -> Self {
        let mut out = Self::zero(self.ambient.clone(), self.cap);
        for (m, s) in self.terms.iter() {
            out.add_term(m, &f(s));
        }
        out
    }

    pub fn divisible(&self, a: u32, b: u32) -> bool {
        self.terms
            .values()
            .all(|s| s.divisible_u(a) && s.divisible_v(b))
    }

    pub fn div_monomial(&self, a: u32, b: u32) -> Result<Self> {
        let mut out = Self::zero(self.ambient.clone(), self.cap);
        for (m, s) in self.terms.iter() {
            out.add_term(m, &s.div_monomial(a, b)?);
        }
        Ok(out)
    }

    pub fn eq_up_to(&self, other: &Self, cap: Cap) -> bool {
        if !self.ambient.compatible(&other.ambient) {
            return false;
        }
        let keys: std::collections::BTreeSet<_> =
            self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter().all(|m| {
            self.coeff(m)
                .eq_up_to(&other.coeff(m), cap)
        })
    }

    /// Canonical rendering: graded-lex term order, each coefficient series
    /// parenthesized.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let names = self.ambient.names();
        let mut parts = Vec::new();
        for (m, s) in self.terms.iter() {
            if m.is_unit() {
                parts.push(format!("({})", s.render()));
            } else {
                parts.push(format!("({})*{}", s.render(), m.render(names)));
            }
        }
        parts.join(" + ")
    }
}

/// A finite combination of k-fold tensors of PBW monomials with
/// truncated-series coefficients.
#[derive(Clone, Debug)]
pub struct TensorElement {
    ambient: Arc<Ambient>,
    arity: usize,
    cap: Cap,
    terms: BTreeMap<Vec<PbwMonomial>, TruncSeries>,
}

impl PartialEq for TensorElement {
    fn eq(&self, other: &Self) -> bool {
        self.ambient.compatible(&other.ambient)
            && self.arity == other.arity
            && self.cap == other.cap
            && self.terms == other.terms
    }
}

impl TensorElement {
    pub fn zero(ambient: Arc<Ambient>, arity: usize, cap: Cap) -> Self {
        TensorElement {
            ambient,
            arity,
            cap,
            terms: BTreeMap::new(),
        }
    }

    pub fn unit(ambient: Arc<Ambient>, arity: usize, cap: Cap) -> Self {
        let mut out = Self::zero(ambient.clone(), arity, cap);
        let legs = vec![PbwMonomial::one(ambient.dim()); arity];
        out.add_term(&legs, &TruncSeries::one(cap));
        out
    }

    /// Arity-1 tensor from an element.
    pub fn from_env(a: &EnvElement) -> Self {
        let mut out = Self::zero(a.ambient.clone(), 1, a.cap);
        for (m, s) in a.terms.iter() {
            out.add_term(std::slice::from_ref(m), s);
        }
        out
    }

    /// Collapse an arity-1 tensor back to an element.
    pub fn into_env(&self) -> EnvElement {
        assert_eq!(self.arity, 1, "into_env requires arity 1");
        let mut out = EnvElement::zero(self.ambient.clone(), self.cap);
        for (legs, s) in self.terms.iter() {
            out.add_term(&legs[0], s);
        }
        out
    }

    pub fn ambient(&self) -> &Arc<Ambient> {
        &self.ambient
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn cap(&self) -> Cap {
        self.cap
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<PbwMonomial>, &TruncSeries)> {
        self.terms.iter()
    }

    pub fn coeff(&self, legs: &[PbwMonomial]) -> TruncSeries {
        self.terms
            .get(legs)
            .cloned()
            .unwrap_or_else(|| TruncSeries::zero(self.cap))
    }

    pub fn add_term(&mut self, legs: &[PbwMonomial], s: &TruncSeries) {
        assert_eq!(legs.len(), self.arity, "tensor leg count mismatch");
        if s.is_zero() {
            return;
        }
        match self.terms.get_mut(legs) {
            Some(cur) => {
                let sum = cur.add(s).expect("coefficient caps agree by construction");
                if sum.is_zero() {
                    self.terms.remove(legs);
                } else {
                    *cur = sum;
                }
            }
            None => {
                self.terms.insert(legs.to_vec(), s.clone());
            }
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if !self.ambient.compatible(&other.ambient) {
            return Err(Error::AmbientMismatch);
        }
        if self.arity != other.arity {
            return Err(Error::ArityMismatch(self.arity, other.arity));
        }
        if self.cap != other.cap {
            return Err(Error::CapMismatch(self.cap, other.cap));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (legs, s) in other.terms.iter() {
            out.add_term(legs, s);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.ambient.clone(), self.arity, self.cap);
        for (legs, s) in self.terms.iter() {
            out.terms.insert(legs.clone(), s.neg());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.ambient.clone(), self.arity, self.cap);
        }
        let mut out = Self::zero(self.ambient.clone(), self.arity, self.cap);
        for (legs, s) in self.terms.iter() {
            out.terms.insert(legs.clone(), s.scale(c));
        }
        out
    }

    pub fn scale_series(&self, s: &TruncSeries) -> Result<Self> {
        let mut out = Self::zero(self.ambient.clone(), self.arity, self.cap);
        for (legs, c) in self.terms.iter() {
            out.add_term(legs, &c.mul(s)?);
        }
        Ok(out)
    }

    /// Leg-wise product, straightening within each tensor factor.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.ambient.clone(), self.arity, self.cap);
        for (la, sa) in self.terms.iter() {
            for (lb, sb) in other.terms.iter() {
                let coeff = sa.mul(sb)?;
                if coeff.is_zero() {
                    continue;
                }
                // Expand the product leg by leg.
                let mut partial: Vec<(Vec<PbwMonomial>, Rat)> = vec![(Vec::new(), Rat::one())];
                for leg in 0..self.arity {
                    let products = monomial_product(&self.ambient, &la[leg], &lb[leg]);
                    let mut next = Vec::with_capacity(partial.len() * products.len());
                    for (legs, c) in partial.iter() {
                        for (mono, c2) in products.iter() {
                            let mut legs2 = legs.clone();
                            legs2.push(mono.clone());
                            next.push((legs2, c * c2));
                        }
                    }
                    partial = next;
                }
                for (legs, c) in partial {
                    out.add_term(&legs, &coeff.scale(&c));
                }
            }
        }
        Ok(out)
    }

    /// Embed into a larger arity, placing leg i at position `positions[i]`
    /// and units elsewhere.
    pub fn embed(&self, arity: usize, positions: &[usize]) -> Self {
        assert_eq!(positions.len(), self.arity);
        let mut out = Self::zero(self.ambient.clone(), arity, self.cap);
        let unit = PbwMonomial::one(self.ambient.dim());
        for (legs, s) in self.terms.iter() {
            let mut new_legs = vec![unit.clone(); arity];
            for (i, &p) in positions.iter().enumerate() {
                new_legs[p] = legs[i].clone();
            }
            out.add_term(&new_legs, s);
        }
        out
    }

    /// Permute legs: new leg i is old leg `perm[i]`.
    pub fn permute_legs(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.arity);
        let mut out = Self::zero(self.ambient.clone(), self.arity, self.cap);
        for (legs, s) in self.terms.iter() {
            let new_legs: Vec<PbwMonomial> = perm.iter().map(|&p| legs[p].clone()).collect();
            out.add_term(&new_legs, s);
        }
        out
    }

    /// Swap the two legs of a 2-tensor.
    pub fn swap(&self) -> Self {
        assert_eq!(self.arity, 2);
        self.permute_legs(&[1, 0])
    }

    /// Expand one leg by the standard coproduct: the leg splits into
    /// positions (leg, leg+1).
    ///
    /// For a PBW monomial the coproduct is the exact binomial expansion
    /// Delta(x^j) = sum_k prod C(j_i, k_i) x^k (x) x^{j-k}; both output
    /// legs stay normal-ordered.
    pub fn expand_leg_standard(&self, leg: usize) -> Self {
        assert!(leg < self.arity);
        let d = self.ambient.dim();
        let mut out = Self::zero(self.ambient.clone(), self.arity + 1, self.cap);
        for (legs, s) in self.terms.iter() {
            let target = &legs[leg];
            for (left, right, c) in binomial_splits(target, d) {
                let mut new_legs = Vec::with_capacity(self.arity + 1);
                new_legs.extend_from_slice(&legs[..leg]);
                new_legs.push(left);
                new_legs.push(right);
                new_legs.extend_from_slice(&legs[leg + 1..]);
                out.add_term(&new_legs, &s.scale(&c));
            }
        }
        out
    }

    /// Drop terms whose chosen leg is not the unit, erasing that leg:
    /// applies the counit to one leg.
    pub fn counit_leg(&self, leg: usize) -> Self {
        assert!(leg < self.arity);
        let mut out = Self::zero(self.ambient.clone(), self.arity - 1, self.cap);
        for (legs, s) in self.terms.iter() {
            if legs[leg].is_unit() {
                let mut new_legs = Vec::with_capacity(self.arity - 1);
                new_legs.extend_from_slice(&legs[..leg]);
                new_legs.extend_from_slice(&legs[leg + 1..]);
                out.add_term(&new_legs, s);
            }
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&TruncSeries) -> TruncSeries) -> Self {
        let mut out = Self::zero(self.ambient.clone(), self.arity, self.cap);
        for (legs, s) in self.terms.iter() {
            out.add_term(legs, &f(s));
        }
        out
    }

    pub fn divisible(&self, a: u32, b: u32) -> bool {
        self.terms
            .values()
            .all(|s| s.divisible_u(a) && s.divisible_v(b))
    }

    pub fn div_monomial(&self, a: u32, b: u32) -> Result<Self> {
        let mut out = Self::zero(self.ambient.clone(), self.arity, self.cap);
        for (legs, s) in self.terms.iter() {
            out.add_term(legs, &s.div_monomial(a, b)?);
        }
        Ok(out)
    }

    pub fn eq_up_to(&self, other: &Self, cap: Cap) -> bool {
        if !self.ambient.compatible(&other.ambient) || self.arity != other.arity {
            return false;
        }
        let keys: std::collections::BTreeSet<_> =
            self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter()
            .all(|legs| self.coeff(legs).eq_up_to(&other.coeff(legs), cap))
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let names = self.ambient.names();
        let mut parts = Vec::new();
        for (legs, s) in self.terms.iter() {
            let legs_str: Vec<String> = legs.iter().map(|m| m.render(names)).collect();
            parts.push(format!("({})*{}", s.render(), legs_str.join("(x)")));
        }
        parts.join(" + ")
    }
}

/// All splittings (left, right, multiplicity) of a monomial under the
/// standard coproduct.
pub fn binomial_splits(m: &PbwMonomial, dim: usize) -> Vec<(PbwMonomial, PbwMonomial, Rat)> {
    let mut acc: Vec<(Vec<u32>, Vec<u32>, Rat)> = vec![(Vec::new(), Vec::new(), Rat::one())];
    for i in 0..dim {
        let e = m.0[i];
        let mut next = Vec::with_capacity(acc.len() * (e as usize + 1));
        for (l, r, c) in acc.iter() {
            for k in 0..=e {
                let mut l2 = l.clone();
                let mut r2 = r.clone();
                l2.push(k);
                r2.push(e - k);
                next.push((l2, r2, c * binomial(e, k)));
            }
        }
        acc = next;
    }
    acc.into_iter()
        .map(|(l, r, c)| (PbwMonomial(l), PbwMonomial(r), c))
        .collect()
}

/// The symmetrization map S(g) -> U(g): a degree-n monomial averages its
/// n! orderings, straightened. A coalgebra morphism.
pub fn symmetrize(s: &EnvElement, env: &Arc<Ambient>) -> EnvElement {
    assert!(
        s.ambient().is_abelian(),
        "symmetrize expects an element of the symmetric algebra"
    );
    let mut out = EnvElement::zero(env.clone(), s.cap());
    for (mono, coeff) in s.terms() {
        let word = mono.word();
        let n = word.len();
        if n == 0 {
            out.add_term(mono, coeff);
            continue;
        }
        let scale = Rat::one() / factorial(n as u32);
        let mut acc: BTreeMap<PbwMonomial, Rat> = BTreeMap::new();
        for perm in permutations(n) {
            let arranged: Vec<usize> = perm.iter().map(|&p| word[p]).collect();
            for (m, c) in straighten(env, &arranged) {
                *acc.entry(m).or_insert_with(Rat::zero) += c;
            }
        }
        for (m, c) in acc {
            let c = c * &scale;
            if !c.is_zero() {
                out.add_term(&m, &coeff.scale(&c));
            }
        }
    }
    out
}

/// All permutations of 0..n (Heap's algorithm).
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut items: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    fn heap(k: usize, items: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(items.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, items, out);
            if k.is_multiple_of(2) {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut items, &mut out);
    out
}

/// Poisson bracket on S(g) extending the Lie bracket by the Leibniz rule
/// in both arguments.
pub fn poisson_bracket(l: &LieBialgebra, a: &EnvElement, b: &EnvElement) -> Result<EnvElement> {
    if !a.ambient().is_abelian() {
        return Err(Error::AmbientMismatch);
    }
    a.check_compatible(b)?;
    let d = l.dim();
    let mut out = EnvElement::zero(a.ambient().clone(), a.cap());
    for (ma, sa) in a.terms() {
        for (mb, sb) in b.terms() {
            let coeff = sa.mul(sb)?;
            if coeff.is_zero() {
                continue;
            }
            for p in 0..d {
                if ma.0[p] == 0 {
                    continue;
                }
                for q in 0..d {
                    if mb.0[q] == 0 {
                        continue;
                    }
                    let mult = Rat::from_integer((ma.0[p] as i64).into())
                        * Rat::from_integer((mb.0[q] as i64).into());
                    for k in 0..d {
                        let c = l.c(p, q, k);
                        if c.is_zero() {
                            continue;
                        }
                        let mut e = ma.mul_abelian(mb).0;
                        e[p] -= 1;
                        e[q] -= 1;
                        e[k] += 1;
                        out.add_term(&PbwMonomial(e), &coeff.scale(&(&mult * c)));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Poisson cobracket on S(g): restricts to the Lie cobracket on degree
/// one and satisfies the co-Leibniz rule
/// delta(ab) = delta(a)Delta(b) + Delta(a)delta(b).
pub fn poisson_cobracket(l: &LieBialgebra, a: &EnvElement) -> Result<TensorElement> {
    if !a.ambient().is_abelian() {
        return Err(Error::AmbientMismatch);
    }
    let amb = a.ambient().clone();
    let cap = a.cap();
    let d = l.dim();
    let mut out = TensorElement::zero(amb.clone(), 2, cap);
    for (mono, coeff) in a.terms() {
        let delta_mono = cobracket_monomial(l, &amb, mono, cap, d)?;
        out = out.add(&delta_mono.scale_series(coeff)?)?;
    }
    Ok(out)
}

fn cobracket_monomial(
    l: &LieBialgebra,
    amb: &Arc<Ambient>,
    mono: &PbwMonomial,
    cap: Cap,
    d: usize,
) -> Result<TensorElement> {
    if mono.degree() == 0 {
        return Ok(TensorElement::zero(amb.clone(), 2, cap));
    }
    // Split off the first letter: mono = x_a * rest.
    let a = mono.0.iter().position(|&e| e > 0).unwrap();
    let mut rest = mono.clone();
    rest.0[a] -= 1;

    // delta(x_a) as a 2-tensor.
    let mut delta_a = TensorElement::zero(amb.clone(), 2, cap);
    for p in 0..d {
        for q in 0..d {
            let c = l.f(a, p, q);
            if !c.is_zero() {
                let legs = [PbwMonomial::generator(p, d), PbwMonomial::generator(q, d)];
                delta_a.add_term(&legs, &TruncSeries::constant(c.clone(), cap));
            }
        }
    }
    // Delta(x_a) as a 2-tensor.
    let mut cop_a = TensorElement::zero(amb.clone(), 2, cap);
    let one = TruncSeries::one(cap);
    cop_a.add_term(&[PbwMonomial::generator(a, d), PbwMonomial::one(d)], &one);
    cop_a.add_term(&[PbwMonomial::one(d), PbwMonomial::generator(a, d)], &one);

    if rest.degree() == 0 {
        return Ok(delta_a);
    }
    let delta_rest = cobracket_monomial(l, amb, &rest, cap, d)?;
    let cop_rest = {
        let mut t = TensorElement::zero(amb.clone(), 2, cap);
        for (left, right, c) in binomial_splits(&rest, d) {
            t.add_term(&[left, right], &TruncSeries::constant(c, cap));
        }
        t
    };
    delta_a.mul(&cop_rest)?.add(&cop_a.mul(&delta_rest)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{rat, rat_int};
    use crate::liebialg::LieBialgebra;

    fn borel_env() -> (LieBialgebra, Arc<Ambient>, Cap) {
        let l = LieBialgebra::borel();
        let amb = Arc::new(Ambient::enveloping(&l));
        (l, amb, Cap::diag(2))
    }

    #[test]
    fn straighten_borel_one_step() {
        // x2 * x1 = x1 x2 - x2   (since [x1,x2] = x2)
        let (_, amb, cap) = borel_env();
        let x1 = EnvElement::generator(amb.clone(), 0, cap);
        let x2 = EnvElement::generator(amb.clone(), 1, cap);
        let prod = x2.mul(&x1).unwrap();
        let mut expect = EnvElement::zero(amb.clone(), cap);
        expect.add_rat_term(&PbwMonomial::from_exponents(vec![1, 1]), &rat_int(1));
        expect.add_rat_term(&PbwMonomial::generator(1, 2), &rat_int(-1));
        assert_eq!(prod, expect);
    }

    #[test]
    fn straighten_abelian_commutes() {
        let l = LieBialgebra::trivial(2);
        let amb = Arc::new(Ambient::symmetric(&l));
        let cap = Cap::diag(1);
        let x1 = EnvElement::generator(amb.clone(), 0, cap);
        let x2 = EnvElement::generator(amb.clone(), 1, cap);
        assert_eq!(x2.mul(&x1).unwrap(), x1.mul(&x2).unwrap());
    }

    #[test]
    fn parametrized_relation_inside_polynomial_algebra() {
        // With i(x) = ux: (ux1)(ux2) - (ux2)(ux1) = u * (u x2)
        let (_, amb, cap) = borel_env();
        let u = TruncSeries::monomial(1, 0, Rat::one(), cap);
        let ux1 = EnvElement::generator(amb.clone(), 0, cap)
            .scale_series(&u)
            .unwrap();
        let ux2 = EnvElement::generator(amb.clone(), 1, cap)
            .scale_series(&u)
            .unwrap();
        let lhs = ux1.mul(&ux2).unwrap().sub(&ux2.mul(&ux1).unwrap()).unwrap();
        let rhs = ux2.scale_series(&u).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn pbw_product_is_associative_on_sampled_monomials() {
        let l = LieBialgebra::borel();
        let dbl = crate::liebialg::build_double(&l, Cap::diag(1)).unwrap();
        let amb = Arc::new(Ambient::enveloping(&dbl.double));
        let cap = Cap::diag(1);
        // Deterministic sample of monomials of total degree <= 5 over dim 4.
        let monos = [
            vec![1, 0, 1, 0],
            vec![0, 2, 0, 1],
            vec![1, 1, 1, 1],
            vec![0, 0, 2, 1],
            vec![2, 0, 0, 1],
        ];
        let elems: Vec<EnvElement> = monos
            .iter()
            .map(|e| {
                EnvElement::from_monomial(
                    amb.clone(),
                    PbwMonomial::from_exponents(e.clone()),
                    TruncSeries::one(cap),
                )
            })
            .collect();
        for a in elems.iter() {
            for b in elems.iter() {
                for c in elems.iter() {
                    let ab_c = a.mul(b).unwrap().mul(c).unwrap();
                    let a_bc = a.mul(&b.mul(c).unwrap()).unwrap();
                    assert_eq!(ab_c, a_bc);
                }
            }
        }
    }

    #[test]
    fn coproduct_of_generator_and_unit() {
        let (_, amb, cap) = borel_env();
        let x1 = EnvElement::generator(amb.clone(), 0, cap);
        let cp = x1.coproduct();
        let one = PbwMonomial::one(2);
        let g = PbwMonomial::generator(0, 2);
        assert_eq!(cp.coeff(&[g.clone(), one.clone()]).coeff(0, 0), rat_int(1));
        assert_eq!(cp.coeff(&[one.clone(), g.clone()]).coeff(0, 0), rat_int(1));

        let unit = EnvElement::unit(amb.clone(), cap);
        let cp1 = unit.coproduct();
        assert_eq!(cp1.coeff(&[one.clone(), one.clone()]).coeff(0, 0), rat_int(1));
        assert_eq!(cp1.terms().count(), 1);
    }

    #[test]
    fn coproduct_of_square_has_binomial_middle_term() {
        // Delta(x1^2) = x1^2 (x) 1 + 2 x1 (x) x1 + 1 (x) x1^2
        let (_, amb, cap) = borel_env();
        let x1 = EnvElement::generator(amb.clone(), 0, cap);
        let sq = x1.mul(&x1).unwrap();
        let cp = sq.coproduct();
        let g = PbwMonomial::generator(0, 2);
        assert_eq!(cp.coeff(&[g.clone(), g.clone()]).coeff(0, 0), rat_int(2));
    }

    #[test]
    fn coproduct_is_coassociative_and_multiplicative() {
        let (_, amb, cap) = borel_env();
        // monomials of degree <= 4
        let monos = [vec![1, 0], vec![0, 1], vec![2, 1], vec![1, 3], vec![2, 2]];
        for e in monos.iter() {
            let a = EnvElement::from_monomial(
                amb.clone(),
                PbwMonomial::from_exponents(e.clone()),
                TruncSeries::one(cap),
            );
            let cp = a.coproduct();
            let left = cp.expand_leg_standard(0);
            let right = cp.expand_leg_standard(1);
            assert_eq!(left, right, "coassociativity at {:?}", e);
        }
        // algebra morphism on a sampled pair
        let a = EnvElement::from_monomial(
            amb.clone(),
            PbwMonomial::from_exponents(vec![1, 1]),
            TruncSeries::one(cap),
        );
        let b = EnvElement::from_monomial(
            amb.clone(),
            PbwMonomial::from_exponents(vec![0, 2]),
            TruncSeries::one(cap),
        );
        let lhs = a.mul(&b).unwrap().coproduct();
        let rhs = a.coproduct().mul(&b.coproduct()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn counit_laws() {
        let (_, amb, cap) = borel_env();
        let a = EnvElement::from_monomial(
            amb.clone(),
            PbwMonomial::from_exponents(vec![2, 1]),
            TruncSeries::one(cap),
        );
        let cp = a.coproduct();
        assert_eq!(cp.counit_leg(0).into_env(), a);
        assert_eq!(cp.counit_leg(1).into_env(), a);
    }

    #[test]
    fn filtration_and_membership() {
        let (_, amb, cap) = borel_env();
        let x1x2 = EnvElement::from_monomial(
            amb.clone(),
            PbwMonomial::from_exponents(vec![1, 1]),
            TruncSeries::one(cap),
        );
        assert_eq!(x1x2.filtration_degree(), 2);

        // u x1 + u^2 x1 x2 is a member; bare x1 is not.
        let u = TruncSeries::monomial(1, 0, Rat::one(), cap);
        let u2 = TruncSeries::monomial(2, 0, Rat::one(), cap);
        let x1 = EnvElement::generator(amb.clone(), 0, cap);
        let member = x1
            .scale_series(&u)
            .unwrap()
            .add(&x1x2.scale_series(&u2).unwrap())
            .unwrap();
        assert!(member.vu_member());
        assert!(!x1.vu_member());
    }

    #[test]
    fn symmetrization_straightens_with_half_correction() {
        // In U(Borel): eta(x1 x2) = x1x2 - x2/2
        let (l, env, cap) = borel_env();
        let sym = Arc::new(Ambient::symmetric(&l));
        let s = EnvElement::from_monomial(
            sym.clone(),
            PbwMonomial::from_exponents(vec![1, 1]),
            TruncSeries::one(cap),
        );
        let got = symmetrize(&s, &env);
        let mut expect = EnvElement::zero(env.clone(), cap);
        expect.add_rat_term(&PbwMonomial::from_exponents(vec![1, 1]), &rat_int(1));
        expect.add_rat_term(&PbwMonomial::generator(1, 2), &rat(-1, 2));
        assert_eq!(got, expect);

        // eta(x1) = x1
        let s1 = EnvElement::generator(sym.clone(), 0, cap);
        assert_eq!(
            symmetrize(&s1, &env),
            EnvElement::generator(env.clone(), 0, cap)
        );
    }

    #[test]
    fn symmetrization_is_a_coalgebra_morphism_on_x1x2() {
        let (l, env, cap) = borel_env();
        let sym = Arc::new(Ambient::symmetric(&l));
        let s = EnvElement::from_monomial(
            sym.clone(),
            PbwMonomial::from_exponents(vec![1, 1]),
            TruncSeries::one(cap),
        );
        let lhs = symmetrize(&s, &env).coproduct();
        // (eta (x) eta) Delta_S
        let cp = s.coproduct();
        let mut rhs = TensorElement::zero(env.clone(), 2, cap);
        for (legs, c) in cp.terms() {
            let l0 = symmetrize(
                &EnvElement::from_monomial(sym.clone(), legs[0].clone(), TruncSeries::one(cap)),
                &env,
            );
            let l1 = symmetrize(
                &EnvElement::from_monomial(sym.clone(), legs[1].clone(), TruncSeries::one(cap)),
                &env,
            );
            for (m0, c0) in l0.terms() {
                for (m1, c1) in l1.terms() {
                    let coeff = c.mul(c0).unwrap().mul(c1).unwrap();
                    rhs.add_term(&[m0.clone(), m1.clone()], &coeff);
                }
            }
        }
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn poisson_bracket_of_generators_and_leibniz() {
        let (l, _, cap) = borel_env();
        let sym = Arc::new(Ambient::symmetric(&l));
        let x1 = EnvElement::generator(sym.clone(), 0, cap);
        let x2 = EnvElement::generator(sym.clone(), 1, cap);
        // {x1, x2} = x2
        assert_eq!(poisson_bracket(&l, &x1, &x2).unwrap(), x2);
        // {x1^2, x2} = 2 x1 x2
        let sq = x1.mul(&x1).unwrap();
        let got = poisson_bracket(&l, &sq, &x2).unwrap();
        let mut expect = EnvElement::zero(sym.clone(), cap);
        expect.add_rat_term(&PbwMonomial::from_exponents(vec![1, 1]), &rat_int(2));
        assert_eq!(got, expect);
    }

    #[test]
    fn poisson_cobracket_on_generators() {
        // On the dual-side Borel: delta(x1) = 0 stays 0; Borel's delta(x2)
        // is recovered on degree one.
        let (l, _, cap) = borel_env();
        let sym = Arc::new(Ambient::symmetric(&l));
        let x1 = EnvElement::generator(sym.clone(), 0, cap);
        let x2 = EnvElement::generator(sym.clone(), 1, cap);
        assert!(poisson_cobracket(&l, &x1).unwrap().is_zero());
        let d2 = poisson_cobracket(&l, &x2).unwrap();
        let g1 = PbwMonomial::generator(0, 2);
        let g2 = PbwMonomial::generator(1, 2);
        assert_eq!(d2.coeff(&[g1.clone(), g2.clone()]).coeff(0, 0), rat_int(1));
        assert_eq!(d2.coeff(&[g2, g1]).coeff(0, 0), rat_int(-1));
    }

    #[test]
    fn bi_poisson_compatibility_on_degree_two_monomials() {
        // delta({a,b}) = {delta(a), Delta(b)} + {Delta(a), delta(b)}
        // checked on generators and degree-2 monomials of the Borel example.
        let (l, _, cap) = borel_env();
        let sym = Arc::new(Ambient::symmetric(&l));
        let gens: Vec<EnvElement> = (0..2)
            .map(|i| EnvElement::generator(sym.clone(), i, cap))
            .collect();
        let mut samples = gens.clone();
        samples.push(gens[0].mul(&gens[1]).unwrap());
        samples.push(gens[0].mul(&gens[0]).unwrap());

        // Poisson bracket on 2-tensors per factor pairing:
        // {a (x) a', b (x) b'} = ab (x) {a',b'} + {a,b} (x) a'b'.
        let tensor_bracket = |s: &TensorElement, t: &TensorElement| -> TensorElement {
            let mut out = TensorElement::zero(sym.clone(), 2, cap);
            for (la, ca) in s.terms() {
                for (lb, cb) in t.terms() {
                    let coeff = ca.mul(cb).unwrap();
                    let a = EnvElement::from_monomial(sym.clone(), la[0].clone(), TruncSeries::one(cap));
                    let a2 = EnvElement::from_monomial(sym.clone(), la[1].clone(), TruncSeries::one(cap));
                    let b = EnvElement::from_monomial(sym.clone(), lb[0].clone(), TruncSeries::one(cap));
                    let b2 = EnvElement::from_monomial(sym.clone(), lb[1].clone(), TruncSeries::one(cap));
                    let ab = a.mul(&b).unwrap();
                    let br2 = poisson_bracket(&l, &a2, &b2).unwrap();
                    for (m1, c1) in ab.terms() {
                        for (m2, c2) in br2.terms() {
                            out.add_term(
                                &[m1.clone(), m2.clone()],
                                &coeff.mul(c1).unwrap().mul(c2).unwrap(),
                            );
                        }
                    }
                    let br1 = poisson_bracket(&l, &a, &b).unwrap();
                    let a2b2 = a2.mul(&b2).unwrap();
                    for (m1, c1) in br1.terms() {
                        for (m2, c2) in a2b2.terms() {
                            out.add_term(
                                &[m1.clone(), m2.clone()],
                                &coeff.mul(c1).unwrap().mul(c2).unwrap(),
                            );
                        }
                    }
                }
            }
            out
        };

        for a in samples.iter() {
            for b in samples.iter() {
                let lhs = poisson_cobracket(&l, &poisson_bracket(&l, a, b).unwrap()).unwrap();
                let rhs = tensor_bracket(&poisson_cobracket(&l, a).unwrap(), &b.coproduct())
                    .add(&tensor_bracket(&a.coproduct(), &poisson_cobracket(&l, b).unwrap()))
                    .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn top_symbol_is_an_algebra_morphism_on_samples() {
        // Needs enough u-headroom for the degree-3 product terms.
        let l = LieBialgebra::borel();
        let amb = Arc::new(Ambient::enveloping(&l));
        let cap = Cap::new(4, 0);
        let sym = Arc::new(Ambient::symmetric(&l));
        let u = TruncSeries::monomial(1, 0, Rat::one(), cap);
        let u2 = TruncSeries::monomial(2, 0, Rat::one(), cap);
        let x1 = EnvElement::generator(amb.clone(), 0, cap);
        let x2 = EnvElement::generator(amb.clone(), 1, cap);
        let a = x1.scale_series(&u).unwrap();
        let b = x2
            .scale_series(&u)
            .unwrap()
            .add(&x1.mul(&x2).unwrap().scale_series(&u2).unwrap())
            .unwrap();
        for (p, q) in [(&a, &b), (&b, &a), (&a, &a)] {
            let lhs = p.mul(q).unwrap().top_symbol(&sym);
            let rhs = p.top_symbol(&sym).mul(&q.top_symbol(&sym)).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
