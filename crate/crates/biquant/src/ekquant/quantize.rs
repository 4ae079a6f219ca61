//! The quantization bundle at truncation order: the twist assembled from
//! associator and braiding actions on Verma modules, the R-matrix, and
//! the conjugated coproduct, with the identities they satisfy.
//!
//! The deformation parameter h is realized as the product uv on the
//! diagonal of the coefficient series, so the two-variable objects are
//! obtained directly.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::coeff::{Cap, Rat, TruncSeries};
use crate::envelope::{EnvElement, TensorElement};
use crate::liebialg::LieBialgebra;
use crate::{Error, Result};

use super::associator::{associator, AssociatorTable};
use super::verma::{split_pairs, DoubleCtx, Side, VermaTensor};

/// An immutable quantization of a Lie bialgebra at a fixed order <= 3.
/// Construction is sequential and deterministic; evaluations are pure.
#[derive(Debug)]
pub struct Quantization {
    pub ctx: Arc<DoubleCtx>,
    pub table: AssociatorTable,
    pub order: u32,
    cap: Cap,
    twist: TensorElement,
    twist_inv: TensorElement,
    r_matrix: TensorElement,
}

impl Quantization {
    pub fn new(l: &LieBialgebra, order: u32) -> Result<Self> {
        if order > 3 {
            return Err(Error::UnsupportedOrder(order));
        }
        let table = associator(order)?;
        let cap = Cap::diag(order);
        let ctx = DoubleCtx::new(l, cap)?;
        let twist = compute_twist(&ctx, &table, cap)?;
        let twist_inv = invert_two_tensor(&twist)?;
        let r_matrix = compute_r(&ctx, &twist, &twist_inv)?;
        let q = Quantization {
            ctx,
            table,
            order,
            cap,
            twist,
            twist_inv,
            r_matrix,
        };
        q.verify_leading_terms()?;
        Ok(q)
    }

    pub fn cap(&self) -> Cap {
        self.cap
    }

    /// The twist J, normalized to 1 (x) 1 + (h/2) r + higher order.
    pub fn twist(&self) -> &TensorElement {
        &self.twist
    }

    pub fn twist_inv(&self) -> &TensorElement {
        &self.twist_inv
    }

    /// The R-matrix (J^{-1})_21 exp(ht/2) J.
    pub fn r_matrix(&self) -> &TensorElement {
        &self.r_matrix
    }

    /// The deformed coproduct J^{-1} Delta(a) J.
    pub fn coproduct(&self, a: &EnvElement) -> Result<TensorElement> {
        let std = a.coproduct();
        self.twist_inv.mul(&std)?.mul(&self.twist)
    }

    /// Expand one leg of a tensor by the deformed coproduct: standard
    /// expansion conjugated by the twist embedded at (leg, leg+1).
    pub fn coproduct_leg(&self, t: &TensorElement, leg: usize) -> Result<TensorElement> {
        let expanded = t.expand_leg_standard(leg);
        let j = self.twist.embed(expanded.arity(), &[leg, leg + 1]);
        let j_inv = self.twist_inv.embed(expanded.arity(), &[leg, leg + 1]);
        j_inv.mul(&expanded)?.mul(&j)
    }

    /// Iterated deformed coproduct as an arity-n tensor (n >= 1).
    pub fn iterated_coproduct(&self, a: &EnvElement, n: usize) -> Result<TensorElement> {
        assert!(n >= 1);
        let mut t = TensorElement::from_env(a);
        for _ in 1..n {
            t = self.coproduct_leg(&t, 0)?;
        }
        Ok(t)
    }

    /// Quasitriangularity: (Delta_h (x) id)(R) = R_13 R_23 and
    /// (id (x) Delta_h)(R) = R_13 R_12. Returns both residuals.
    pub fn quasitriangularity_residuals(&self) -> Result<(TensorElement, TensorElement)> {
        let r = &self.r_matrix;
        let r13 = r.embed(3, &[0, 2]);
        let r23 = r.embed(3, &[1, 2]);
        let r12 = r.embed(3, &[0, 1]);
        let left = self.coproduct_leg(r, 0)?.sub(&r13.mul(&r23)?)?;
        let right = self.coproduct_leg(r, 1)?.sub(&r13.mul(&r12)?)?;
        Ok((left, right))
    }

    /// Intertwining: Delta_h^op(a) = R Delta_h(a) R^{-1}.
    pub fn intertwining_residual(&self, a: &EnvElement) -> Result<TensorElement> {
        let cp = self.coproduct(a)?;
        let r_inv = invert_two_tensor(&self.r_matrix)?;
        let lhs = cp.swap();
        let rhs = self.r_matrix.mul(&cp)?.mul(&r_inv)?;
        lhs.sub(&rhs)
    }

    /// Coassociativity of the deformed coproduct on an element.
    pub fn coassociativity_residual(&self, a: &EnvElement) -> Result<TensorElement> {
        let cp = self.coproduct(a)?;
        let left = self.coproduct_leg(&cp, 0)?;
        let right = self.coproduct_leg(&cp, 1)?;
        left.sub(&right)
    }

    /// The order-h cobracket identity: Delta_h(x) - Delta_h^op(x) - h delta(x)
    /// vanishes modulo h^2 for x in the double.
    pub fn cobracket_residual(&self, gen: usize) -> Result<TensorElement> {
        let x = EnvElement::generator(self.ctx.env.clone(), gen, self.cap);
        let cp = self.coproduct(&x)?;
        let anti = cp.sub(&cp.swap())?;
        let l = &self.ctx.double.double;
        let dd = l.dim();
        let mut delta = TensorElement::zero(self.ctx.env.clone(), 2, self.cap);
        for p in 0..dd {
            for q in 0..dd {
                let c = l.f(gen, p, q);
                if !c.is_zero() {
                    delta.add_term(
                        &[
                            crate::envelope::PbwMonomial::generator(p, dd),
                            crate::envelope::PbwMonomial::generator(q, dd),
                        ],
                        &TruncSeries::monomial(1, 1, c.clone(), self.cap),
                    );
                }
            }
        }
        // Compare modulo h^2: keep only the (1,1) layer of the residual.
        let res = anti.sub(&delta)?;
        Ok(res.map_coeffs(|s| {
            let mut t = TruncSeries::zero(self.cap);
            for (&(m, n), c) in s.iter() {
                if m <= 1 && n <= 1 {
                    t.add_term(m, n, c);
                }
            }
            t
        }))
    }

    fn verify_leading_terms(&self) -> Result<()> {
        // J = 1 (x) 1 + (h/2) r mod h^2.
        let d = self.ctx.d;
        let dd = 2 * d;
        let unit = crate::envelope::PbwMonomial::one(dd);
        if self.twist.coeff(&[unit.clone(), unit.clone()]).coeff(0, 0) != Rat::one() {
            return Err(Error::Internal("twist constant term is not the unit".into()));
        }
        for i in 0..d {
            let xi = crate::envelope::PbwMonomial::generator(i, dd);
            let yi = crate::envelope::PbwMonomial::generator(d + i, dd);
            if self.order >= 1
                && self.twist.coeff(&[xi, yi]).coeff(1, 1) != crate::coeff::rat(1, 2)
            {
                return Err(Error::Internal(
                    "twist order-h term is not half the canonical tensor".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Invert a 2-tensor of the form unit + higher order by the geometric
/// series; the correction is divisible by uv so the series stops at the
/// cap.
pub fn invert_two_tensor(t: &TensorElement) -> Result<TensorElement> {
    let cap = t.cap();
    let unit = TensorElement::unit(t.ambient().clone(), 2, cap);
    let rest = t.sub(&unit)?;
    if !rest.divisible(1, 1) {
        return Err(Error::Internal(
            "tensor is not unit plus a uv-divisible correction".into(),
        ));
    }
    let mut out = unit.clone();
    let mut power = unit.clone();
    let mut sign = Rat::one();
    for _ in 1..=cap.u.min(cap.v) {
        power = power.mul(&rest)?;
        if power.is_zero() {
            break;
        }
        sign = -sign;
        out = out.add(&power.scale(&sign))?;
    }
    // Exactness check up to the cap.
    let check = t.mul(&out)?;
    if check != TensorElement::unit(t.ambient().clone(), 2, cap) {
        return Err(Error::Internal("two-tensor inversion failed".into()));
    }
    Ok(out)
}

/// Evaluate the braided coherence morphism on the four-fold vacuum and
/// split the result into the twist.
fn compute_twist(
    ctx: &Arc<DoubleCtx>,
    table: &AssociatorTable,
    cap: Cap,
) -> Result<TensorElement> {
    let c = &table.bracket_coeff;
    let v0 = VermaTensor::vacuum(
        ctx.clone(),
        vec![Side::Plus, Side::Plus, Side::Minus, Side::Minus],
        cap,
    );
    // Inverse associator regrouping ((++)-)-, then the inner associator.
    let v1 = v0.associator_op(&[(0, 2), (1, 2)], &[(2, 3)], c, true);
    let v2 = v1.associator_op(&[(0, 1)], &[(1, 2)], c, false);
    // Braid the middle legs.
    let v3 = v2.braiding(1);
    // Inverse of the second regrouping on the new arrangement.
    let v4 = v3.associator_op(&[(0, 1)], &[(1, 2)], c, true);
    let v5 = v4.associator_op(&[(0, 2), (1, 2)], &[(2, 3)], c, false);
    split_pairs(ctx, &v5)
}

/// R = (J^{-1})_21 exp(ht/2) J.
fn compute_r(
    ctx: &Arc<DoubleCtx>,
    twist: &TensorElement,
    twist_inv: &TensorElement,
) -> Result<TensorElement> {
    let cap = twist.cap();
    // exp(ht/2) with t the invariant 2-tensor of the double.
    let t = &ctx.double.t;
    let mut exp_ht = TensorElement::unit(ctx.env.clone(), 2, cap);
    let mut power = exp_ht.clone();
    let mut fact = Rat::one();
    for n in 1..=cap.u.min(cap.v) as u64 {
        power = power.mul(t)?;
        if power.is_zero() {
            break;
        }
        fact *= Rat::from_integer((2 * n).into());
        let weight = TruncSeries::monomial(n as u32, n as u32, Rat::one() / fact.clone(), cap);
        exp_ht = exp_ht.add(&power.scale_series(&weight)?)?;
    }
    twist_inv.swap().mul(&exp_ht)?.mul(twist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;
    use crate::envelope::PbwMonomial;

    #[test]
    fn twist_leading_terms_for_borel() {
        let q = Quantization::new(&LieBialgebra::borel(), 2).unwrap();
        // order-h term is (1/2) sum x_i (x) y_i, already checked in the
        // constructor; spot-check one coefficient here.
        let x1 = PbwMonomial::generator(0, 4);
        let y1 = PbwMonomial::generator(2, 4);
        assert_eq!(q.twist().coeff(&[x1, y1]).coeff(1, 1), rat(1, 2));
    }

    #[test]
    fn r_matrix_leading_terms_for_borel() {
        let q = Quantization::new(&LieBialgebra::borel(), 2).unwrap();
        // R = 1 (x) 1 + h r mod h^2.
        let unit = PbwMonomial::one(4);
        assert_eq!(
            q.r_matrix().coeff(&[unit.clone(), unit]).coeff(0, 0),
            rat(1, 1)
        );
        for i in 0..2 {
            let xi = PbwMonomial::generator(i, 4);
            let yi = PbwMonomial::generator(2 + i, 4);
            assert_eq!(q.r_matrix().coeff(&[xi, yi]).coeff(1, 1), rat(1, 1));
        }
    }

    #[test]
    fn quasitriangularity_holds_for_borel_at_order_two() {
        let q = Quantization::new(&LieBialgebra::borel(), 2).unwrap();
        let (left, right) = q.quasitriangularity_residuals().unwrap();
        assert!(left.is_zero(), "{}", left.render());
        assert!(right.is_zero(), "{}", right.render());
    }

    #[test]
    fn cobracket_residual_vanishes_for_borel() {
        let q = Quantization::new(&LieBialgebra::borel(), 2).unwrap();
        for gen in 0..4 {
            let res = q.cobracket_residual(gen).unwrap();
            assert!(res.is_zero(), "generator {}: {}", gen, res.render());
        }
    }

    #[test]
    fn trivial_bialgebra_coproduct_is_undeformed() {
        // For the trivial bialgebra the twist is symmetric in the
        // commutative double, so the conjugated coproduct is the standard
        // one.
        let q = Quantization::new(&LieBialgebra::trivial(2), 2).unwrap();
        let a = EnvElement::from_monomial(
            q.ctx.env.clone(),
            PbwMonomial::from_exponents(vec![1, 0, 1, 0]),
            TruncSeries::one(q.cap()),
        );
        assert_eq!(q.coproduct(&a).unwrap(), a.coproduct());
    }
}
