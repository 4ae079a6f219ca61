//! Verma modules over the double and the braided-category operators
//! acting on their tensor products.
//!
//! Each module is free over the opposite side's enveloping algebra on a
//! cyclic vector killed by its own side. A leg of a tensor stores the
//! exponent vector of the opposite-side basis monomial applied to the
//! cyclic vector. Actions are computed by straightening in the double
//! under the order that puts the free side first, then filtering the
//! generators that act through the counit.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::One;

use crate::coeff::{Cap, Rat, TruncSeries};
use crate::envelope::{straighten, Ambient, EnvElement, PbwMonomial, TensorElement};
use crate::liebialg::{build_double, Double, LieBialgebra};
use crate::Result;

/// Which Verma module a tensor leg belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Cyclic vector killed by the plus side; free over the minus side.
    Plus,
    /// Cyclic vector killed by the minus side; free over the plus side.
    Minus,
}

/// Shared context: the double, its enveloping ambient in both normal
/// orders, and the dimension of each half.
#[derive(Debug)]
pub struct DoubleCtx {
    pub lie: LieBialgebra,
    pub double: Double,
    /// U(double) with the plus generators first (indices 0..d).
    pub env: Arc<Ambient>,
    /// Same algebra relabeled with the minus generators first.
    pub env_minus_first: Arc<Ambient>,
    pub d: usize,
}

impl DoubleCtx {
    pub fn new(l: &LieBialgebra, cap: Cap) -> Result<Arc<Self>> {
        let double = build_double(l, cap)?;
        let env = Arc::new(Ambient::enveloping(&double.double));
        let d = l.dim();
        let perm: Vec<usize> = (0..2 * d).map(|i| (i + d) % (2 * d)).collect();
        let env_minus_first = Arc::new(env.relabel(&perm));
        Ok(Arc::new(DoubleCtx {
            lie: l.clone(),
            double,
            env,
            env_minus_first,
            d,
        }))
    }

    /// Index of a plus generator in the double.
    pub fn plus(&self, i: usize) -> usize {
        i
    }

    /// Index of a minus generator in the double.
    pub fn minus(&self, i: usize) -> usize {
        self.d + i
    }

    /// Apply a word of double generators to a basis vector of a module
    /// leg. Returns the normal form as (opposite-side exponents, scalar).
    pub fn act_word(
        &self,
        side: Side,
        word: &[usize],
        leg: &PbwMonomial,
    ) -> Vec<(PbwMonomial, Rat)> {
        let d = self.d;
        match side {
            Side::Minus => {
                // Basis x^j: the normal form x^a y^b acts as [b = 0] x^a.
                let mut w: Vec<usize> = word.to_vec();
                for (i, &e) in leg.0.iter().enumerate() {
                    for _ in 0..e {
                        w.push(i);
                    }
                }
                let mut out = Vec::new();
                for (mono, c) in straighten(&self.env, &w) {
                    if mono.0[d..].iter().all(|&e| e == 0) {
                        out.push((PbwMonomial::from_exponents(mono.0[..d].to_vec()), c));
                    }
                }
                out
            }
            Side::Plus => {
                // Basis y^k: relabel into the minus-first order, where the
                // normal form y^b x^a acts as [a = 0] y^b.
                let mut w: Vec<usize> = word.iter().map(|&o| (o + d) % (2 * d)).collect();
                for (i, &e) in leg.0.iter().enumerate() {
                    for _ in 0..e {
                        w.push(i);
                    }
                }
                let mut out = Vec::new();
                for (mono, c) in straighten(&self.env_minus_first, &w) {
                    if mono.0[d..].iter().all(|&e| e == 0) {
                        out.push((PbwMonomial::from_exponents(mono.0[..d].to_vec()), c));
                    }
                }
                out
            }
        }
    }
}

/// A combination of tensor products of Verma basis vectors with
/// truncated-series coefficients.
#[derive(Clone, Debug)]
pub struct VermaTensor {
    ctx: Arc<DoubleCtx>,
    legs: Vec<Side>,
    cap: Cap,
    terms: BTreeMap<Vec<PbwMonomial>, TruncSeries>,
}

impl PartialEq for VermaTensor {
    fn eq(&self, other: &Self) -> bool {
        self.legs == other.legs && self.cap == other.cap && self.terms == other.terms
    }
}

impl VermaTensor {
    pub fn zero(ctx: Arc<DoubleCtx>, legs: Vec<Side>, cap: Cap) -> Self {
        VermaTensor {
            ctx,
            legs,
            cap,
            terms: BTreeMap::new(),
        }
    }

    /// The tensor of cyclic vectors.
    pub fn vacuum(ctx: Arc<DoubleCtx>, legs: Vec<Side>, cap: Cap) -> Self {
        let d = ctx.d;
        let n = legs.len();
        let mut out = Self::zero(ctx, legs, cap);
        out.add_term(&vec![PbwMonomial::one(d); n], &TruncSeries::one(cap));
        out
    }

    pub fn legs(&self) -> &[Side] {
        &self.legs
    }

    pub fn cap(&self) -> Cap {
        self.cap
    }

    pub fn ctx(&self) -> &Arc<DoubleCtx> {
        &self.ctx
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
        assert_eq!(legs.len(), self.legs.len());
        if s.is_zero() {
            return;
        }
        match self.terms.get_mut(legs) {
            Some(cur) => {
                let sum = cur.add(s).expect("caps agree");
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

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.legs, other.legs);
        let mut out = self.clone();
        for (legs, s) in other.terms.iter() {
            out.add_term(legs, s);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.legs, other.legs);
        let mut out = self.clone();
        for (legs, s) in other.terms.iter() {
            out.add_term(legs, &s.neg());
        }
        out
    }

    pub fn scale_series(&self, s: &TruncSeries) -> Self {
        let mut out = Self::zero(self.ctx.clone(), self.legs.clone(), self.cap);
        for (legs, c) in self.terms.iter() {
            out.add_term(legs, &c.mul(s).expect("caps agree"));
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = Self::zero(self.ctx.clone(), self.legs.clone(), self.cap);
        for (legs, s) in self.terms.iter() {
            out.add_term(legs, &s.scale(c));
        }
        out
    }

    /// Apply one double generator to one leg.
    pub fn apply_gen(&self, leg: usize, gen: usize) -> Self {
        let mut out = Self::zero(self.ctx.clone(), self.legs.clone(), self.cap);
        for (legs, s) in self.terms.iter() {
            for (mono, c) in self.ctx.act_word(self.legs[leg], &[gen], &legs[leg]) {
                let mut new_legs = legs.clone();
                new_legs[leg] = mono;
                out.add_term(&new_legs, &s.scale(&c));
            }
        }
        out
    }

    /// The invariant 2-tensor acting on a pair of legs:
    /// sum_s (x_s at a)(y_s at b) + (y_s at a)(x_s at b).
    pub fn t_pair(&self, a: usize, b: usize) -> Self {
        let ctx = self.ctx.clone();
        let mut out = Self::zero(ctx.clone(), self.legs.clone(), self.cap);
        for s in 0..ctx.d {
            out = out.add(&self.apply_gen(a, ctx.plus(s)).apply_gen(b, ctx.minus(s)));
            out = out.add(&self.apply_gen(a, ctx.minus(s)).apply_gen(b, ctx.plus(s)));
        }
        out
    }

    /// Sum of pairwise 2-tensor actions.
    pub fn t_sum(&self, pairs: &[(usize, usize)]) -> Self {
        let mut out = Self::zero(self.ctx.clone(), self.legs.clone(), self.cap);
        for &(a, b) in pairs {
            out = out.add(&self.t_pair(a, b));
        }
        out
    }

    /// exp(h t/2) on a pair of legs, h realized as uv.
    pub fn exp_half_t(&self, a: usize, b: usize) -> Self {
        let mut out = self.clone();
        let mut power = self.clone();
        let mut fact = Rat::one();
        for n in 1..=self.cap.u.min(self.cap.v) as u64 {
            power = power.t_pair(a, b);
            if power.is_zero() {
                break;
            }
            fact *= Rat::from_integer((2 * n).into());
            let weight =
                TruncSeries::monomial(n as u32, n as u32, Rat::one() / fact.clone(), self.cap);
            out = out.add(&power.scale_series(&weight));
        }
        out
    }

    /// The associator operator 1 + c h^2 [T1, T2] (exact through order 3
    /// for an even group-like associator), where T1 and T2 are sums of
    /// pairwise 2-tensor actions. `invert` applies the inverse.
    pub fn associator_op(
        &self,
        t1: &[(usize, usize)],
        t2: &[(usize, usize)],
        bracket_coeff: &Rat,
        invert: bool,
    ) -> Self {
        let comm = self.t_sum(t2).t_sum(t1).sub(&self.t_sum(t1).t_sum(t2));
        let sign = if invert { -Rat::one() } else { Rat::one() };
        let weight = TruncSeries::monomial(2, 2, bracket_coeff * sign, self.cap);
        self.add(&comm.scale_series(&weight))
    }

    /// Swap the contents and module types of two legs.
    pub fn swap_legs(&self, a: usize, b: usize) -> Self {
        let mut legs = self.legs.clone();
        legs.swap(a, b);
        let mut out = Self::zero(self.ctx.clone(), legs, self.cap);
        for (monos, s) in self.terms.iter() {
            let mut m = monos.clone();
            m.swap(a, b);
            out.add_term(&m, s);
        }
        out
    }

    /// The braiding on legs (a, a+1): exp(h t/2) followed by the
    /// transposition.
    pub fn braiding(&self, a: usize) -> Self {
        self.exp_half_t(a, a + 1).swap_legs(a, a + 1)
    }
}

/// Left action of an element of the double's enveloping algebra on a
/// single-leg module vector.
pub fn verma_act(w: &EnvElement, m: &VermaTensor) -> VermaTensor {
    assert_eq!(m.legs().len(), 1, "verma_act expects a single-leg vector");
    let ctx = m.ctx().clone();
    let side = m.legs()[0];
    let mut out = VermaTensor::zero(ctx.clone(), vec![side], m.cap());
    for (mono, coeff) in w.terms() {
        let word = mono.word();
        for (legs, s) in m.terms() {
            for (res, c) in ctx.act_word(side, &word, &legs[0]) {
                out.add_term(&[res], &coeff.mul(s).expect("caps agree").scale(&c));
            }
        }
    }
    out
}

/// The module-pair picture of the double: w maps to its coproduct acting
/// on the tensor of cyclic vectors.
pub fn to_verma_pair(ctx: &Arc<DoubleCtx>, w: &EnvElement) -> VermaTensor {
    let cap = w.cap();
    let mut out = VermaTensor::zero(ctx.clone(), vec![Side::Plus, Side::Minus], cap);
    for (mono, coeff) in w.terms() {
        for (left, right, c) in crate::envelope::binomial_splits(mono, 2 * ctx.d) {
            let on_plus = ctx.act_word(Side::Plus, &left.word(), &PbwMonomial::one(ctx.d));
            let on_minus = ctx.act_word(Side::Minus, &right.word(), &PbwMonomial::one(ctx.d));
            for (m1, c1) in on_plus.iter() {
                for (m2, c2) in on_minus.iter() {
                    out.add_term(&[m1.clone(), m2.clone()], &coeff.scale(&(&c * c1 * c2)));
                }
            }
        }
    }
    out
}

/// Invert the module-pair picture by back-substitution on the triangular
/// leading-term structure: the pair (y-basis k, x-basis j) has leading
/// preimage x^j y^k with strictly lower-degree corrections.
pub fn from_verma_pair(ctx: &Arc<DoubleCtx>, t: &VermaTensor) -> Result<EnvElement> {
    assert_eq!(t.legs(), &[Side::Plus, Side::Minus]);
    let cap = t.cap();
    let d = ctx.d;
    let mut residual = t.clone();
    let mut out = EnvElement::zero(ctx.env.clone(), cap);
    let mut memo: HashMap<Vec<u32>, VermaTensor> = HashMap::new();
    while !residual.is_zero() {
        let top = residual
            .terms()
            .map(|(legs, _)| legs[0].degree() + legs[1].degree())
            .max()
            .unwrap();
        let picks: Vec<(Vec<PbwMonomial>, TruncSeries)> = residual
            .terms()
            .filter(|(legs, _)| legs[0].degree() + legs[1].degree() == top)
            .map(|(legs, s)| (legs.clone(), s.clone()))
            .collect();
        for (legs, s) in picks {
            // preimage monomial x^j y^k
            let mut exps = vec![0u32; 2 * d];
            exps[..d].copy_from_slice(&legs[1].0);
            exps[d..].copy_from_slice(&legs[0].0);
            let mono = PbwMonomial::from_exponents(exps);
            out.add_term(&mono, &s);
            let image = memo.entry(mono.0.clone()).or_insert_with(|| {
                to_verma_pair(
                    ctx,
                    &EnvElement::from_monomial(
                        ctx.env.clone(),
                        mono.clone(),
                        TruncSeries::one(cap),
                    ),
                )
            });
            residual = residual.sub(&image.scale_series(&s));
        }
        if let Some(new_top) = residual
            .terms()
            .map(|(legs, _)| legs[0].degree() + legs[1].degree())
            .max()
        {
            if new_top >= top {
                return Err(crate::Error::Internal(
                    "module-pair inversion did not reduce the degree".into(),
                ));
            }
        }
    }
    Ok(out)
}

/// Split a four-leg tensor (alternating plus/minus) into a 2-tensor over
/// the double by inverting the module-pair picture on each half.
pub fn split_pairs(ctx: &Arc<DoubleCtx>, t: &VermaTensor) -> Result<TensorElement> {
    assert_eq!(
        t.legs(),
        &[Side::Plus, Side::Minus, Side::Plus, Side::Minus]
    );
    let cap = t.cap();
    let mut out = TensorElement::zero(ctx.env.clone(), 2, cap);
    let mut memo: HashMap<(Vec<u32>, Vec<u32>), EnvElement> = HashMap::new();
    for (legs, s) in t.terms() {
        let mut halves: Vec<EnvElement> = Vec::with_capacity(2);
        for half in 0..2 {
            let key = (legs[2 * half].0.clone(), legs[2 * half + 1].0.clone());
            let elem = match memo.get(&key) {
                Some(e) => e.clone(),
                None => {
                    let mut single =
                        VermaTensor::zero(ctx.clone(), vec![Side::Plus, Side::Minus], cap);
                    single.add_term(
                        &[legs[2 * half].clone(), legs[2 * half + 1].clone()],
                        &TruncSeries::one(cap),
                    );
                    let e = from_verma_pair(ctx, &single)?;
                    memo.insert(key, e.clone());
                    e
                }
            };
            halves.push(elem);
        }
        for (m1, c1) in halves[0].terms() {
            for (m2, c2) in halves[1].terms() {
                let coeff = s.mul(c1)?.mul(c2)?;
                out.add_term(&[m1.clone(), m2.clone()], &coeff);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{rat, rat_int};

    fn ctx_borel(order: u32) -> (Arc<DoubleCtx>, Cap) {
        let cap = Cap::diag(order);
        (DoubleCtx::new(&LieBialgebra::borel(), cap).unwrap(), cap)
    }

    #[test]
    fn own_side_kills_the_cyclic_vector() {
        let (ctx, _) = ctx_borel(2);
        let vac = PbwMonomial::one(2);
        assert!(ctx.act_word(Side::Plus, &[ctx.plus(0)], &vac).is_empty());
        let free = ctx.act_word(Side::Plus, &[ctx.minus(0)], &vac);
        assert_eq!(free, vec![(PbwMonomial::generator(0, 2), rat_int(1))]);
        assert!(ctx.act_word(Side::Minus, &[ctx.minus(1)], &vac).is_empty());
        let free = ctx.act_word(Side::Minus, &[ctx.plus(1)], &vac);
        assert_eq!(free, vec![(PbwMonomial::generator(1, 2), rat_int(1))]);
    }

    #[test]
    fn cross_action_straightens_through_the_mixed_bracket() {
        // x1 acting on (y_j vac_plus): x1 y_j = y_j x1 + [x1, y_j]; the
        // first summand kills the vacuum and the bracket is filtered to
        // its pure-minus part.
        let (ctx, _) = ctx_borel(2);
        let y1 = PbwMonomial::generator(0, 2);
        // [x1, y1] = f_1^{1b} x_b - c_{1k}^1 y_k = 0 for Borel.
        assert!(ctx.act_word(Side::Plus, &[ctx.plus(0)], &y1).is_empty());
        // [x1, y2] = -c_{12}^2 y_2 = -y2.
        let y2 = PbwMonomial::generator(1, 2);
        let got = ctx.act_word(Side::Plus, &[ctx.plus(0)], &y2);
        assert_eq!(got, vec![(y2.clone(), rat_int(-1))]);
    }

    #[test]
    fn element_action_on_single_leg_vectors() {
        let (ctx, cap) = ctx_borel(2);
        let vac_plus = VermaTensor::vacuum(ctx.clone(), vec![Side::Plus], cap);
        // any plus element of positive degree kills the plus vacuum
        for i in 0..2 {
            let x = EnvElement::generator(ctx.env.clone(), ctx.plus(i), cap);
            assert!(verma_act(&x, &vac_plus).is_zero());
        }
        // minus generators act freely
        let y1 = EnvElement::generator(ctx.env.clone(), ctx.minus(0), cap);
        let acted = verma_act(&y1, &vac_plus);
        assert_eq!(
            acted.coeff(&[PbwMonomial::generator(0, 2)]).coeff(0, 0),
            rat_int(1)
        );
        // in the Borel double, x1 acting on (y2 vac_plus) picks up the
        // minus part of the mixed bracket: -y2 vac_plus.
        let x1 = EnvElement::generator(ctx.env.clone(), ctx.plus(0), cap);
        let mut y2_vac = VermaTensor::zero(ctx.clone(), vec![Side::Plus], cap);
        y2_vac.add_term(&[PbwMonomial::generator(1, 2)], &TruncSeries::one(cap));
        let acted = verma_act(&x1, &y2_vac);
        assert_eq!(
            acted.coeff(&[PbwMonomial::generator(1, 2)]).coeff(0, 0),
            rat_int(-1)
        );
        // the action is associative with the product: (wv).m = w.(v.m)
        let w = EnvElement::generator(ctx.env.clone(), ctx.plus(1), cap);
        let v = y1.mul(&y1).unwrap();
        let lhs = verma_act(&w.mul(&v).unwrap(), &vac_plus);
        let rhs = verma_act(&w, &verma_act(&v, &vac_plus));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn module_pair_picture_of_the_unit_and_round_trip() {
        let (ctx, cap) = ctx_borel(2);
        let one = EnvElement::unit(ctx.env.clone(), cap);
        let phi1 = to_verma_pair(&ctx, &one);
        assert_eq!(
            phi1,
            VermaTensor::vacuum(ctx.clone(), vec![Side::Plus, Side::Minus], cap)
        );
        for exps in [
            vec![1, 0, 0, 0],
            vec![0, 0, 1, 0],
            vec![1, 1, 1, 0],
            vec![0, 1, 1, 1],
            vec![2, 0, 0, 1],
        ] {
            let w = EnvElement::from_monomial(
                ctx.env.clone(),
                PbwMonomial::from_exponents(exps),
                TruncSeries::one(cap),
            );
            let back = from_verma_pair(&ctx, &to_verma_pair(&ctx, &w)).unwrap();
            assert_eq!(back, w);
        }
    }

    #[test]
    fn abelian_pair_picture_swaps_the_halves() {
        // For the trivial bialgebra the picture sends a product ab of a
        // plus half and a minus half to (b on the plus vacuum) (x) (a on
        // the minus vacuum).
        let cap = Cap::diag(2);
        let ctx = DoubleCtx::new(&LieBialgebra::trivial(2), cap).unwrap();
        let w = EnvElement::from_monomial(
            ctx.env.clone(),
            PbwMonomial::from_exponents(vec![1, 0, 0, 1]),
            TruncSeries::one(cap),
        );
        let t = to_verma_pair(&ctx, &w);
        let y_leg = PbwMonomial::from_exponents(vec![0, 1]);
        let x_leg = PbwMonomial::from_exponents(vec![1, 0]);
        assert_eq!(t.coeff(&[y_leg, x_leg]).coeff(0, 0), rat_int(1));
        assert_eq!(t.terms().count(), 1);
    }

    #[test]
    fn braiding_on_vacua_creates_the_pairing_terms() {
        let (ctx, cap) = ctx_borel(2);
        let v = VermaTensor::vacuum(ctx.clone(), vec![Side::Plus, Side::Minus], cap);
        let braided = v.braiding(0);
        let vac = PbwMonomial::one(2);
        assert_eq!(braided.legs(), &[Side::Minus, Side::Plus]);
        assert_eq!(
            braided.coeff(&[vac.clone(), vac.clone()]).coeff(0, 0),
            rat_int(1)
        );
        // order-h term: (1/2) sum_s (x_s vac_minus) (x) (y_s vac_plus)
        let x1 = PbwMonomial::generator(0, 2);
        let y1 = PbwMonomial::generator(0, 2);
        assert_eq!(braided.coeff(&[x1, y1]).coeff(1, 1), rat(1, 2));
    }
}
