//! Closed forms for the trivial (abelian, zero-cobracket) Lie bialgebra,
//! used as an independent oracle against the quantization pipeline.
//!
//! Everything here is computed from scratch through elementary
//! exponential expansion over multi-indices, sharing only the scalar and
//! PBW container types with the code under test: the twist is
//! exp(h r / 2), the R-matrix exp(h r), its two-variable form
//! exp(uv r), the contraction table sends each generator x to uv x, the
//! pairing is the factorial pairing, membership is a support-shape
//! condition, and the braiding element is exp((h/2) sum x_i y_i).

use std::sync::Arc;

use num_traits::Zero;

use crate::coeff::{factorial, Cap, Rat, TruncSeries};
use crate::deltacalc::monomials_up_to;
use crate::envelope::{Ambient, EnvElement, PbwMonomial, TensorElement};
use crate::liebialg::{build_double, LieBialgebra};
use crate::Result;

/// The Appendix-style closed forms at dimension d and order N.
pub struct ClosedForms {
    pub dim: usize,
    pub order: u32,
    pub env: Arc<Ambient>,
    /// exp(h r / 2) with h on the diagonal.
    pub twist: TensorElement,
    /// exp(h r).
    pub r_matrix: TensorElement,
    /// exp(uv r), the two-variable R-matrix (identical to `r_matrix` in
    /// the diagonal realization; kept separate as the inflation target).
    pub r_two_variable: TensorElement,
    /// Contraction images: generator i maps to uv x_i.
    pub rho_table: Vec<EnvElement>,
    /// exp((h/2) sum_i x_i y_i).
    pub omega: EnvElement,
}

impl ClosedForms {
    /// The factorial pairing of generator multi-indices: the pairing of
    /// the scaled generators is the constant delta_{j,k} j!.
    pub fn pairing(&self, j: &PbwMonomial, k: &PbwMonomial) -> Rat {
        if j != k {
            return Rat::zero();
        }
        let mut f = Rat::one();
        for &e in j.0.iter() {
            f *= factorial(e);
        }
        f
    }

    /// Membership in the completed subalgebra: every u^m v^n coefficient
    /// lies in the span of pure plus monomials of degree at most m.
    pub fn member(&self, a: &EnvElement) -> bool {
        let d = self.dim;
        for (mono, s) in a.terms() {
            if mono.0[d..].iter().any(|&e| e != 0) {
                return false;
            }
            let deg = mono.degree();
            for (&(m, _), c) in s.iter() {
                if !c.is_zero() && deg > m {
                    return false;
                }
            }
        }
        true
    }
}

use num_traits::One;

/// Compute the closed forms for the trivial bialgebra of dimension d at
/// order N.
pub fn closed_forms(dim: usize, order: u32) -> Result<ClosedForms> {
    let l = LieBialgebra::trivial(dim);
    let cap = Cap::diag(order);
    let dbl = build_double(&l, cap)?;
    let env = Arc::new(Ambient::enveloping(&dbl.double));
    let dd = 2 * dim;

    // exp(c h r) = sum over multi-indices a: c^{|a|} h^{|a|} / a! x^a (x) y^a.
    let exp_r = |c: Rat| -> TensorElement {
        let mut out = TensorElement::zero(env.clone(), 2, cap);
        for a in monomials_up_to(dim, order) {
            let n = a.degree();
            let mut coeff = Rat::one();
            for &e in a.0.iter() {
                coeff /= factorial(e);
            }
            for _ in 0..n {
                coeff *= &c;
            }
            let mut x = vec![0u32; dd];
            let mut y = vec![0u32; dd];
            x[..dim].copy_from_slice(&a.0);
            y[dim..].copy_from_slice(&a.0);
            out.add_term(
                &[
                    PbwMonomial::from_exponents(x),
                    PbwMonomial::from_exponents(y),
                ],
                &TruncSeries::monomial(n, n, coeff, cap),
            );
        }
        out
    };

    let twist = exp_r(crate::coeff::rat(1, 2));
    let r_matrix = exp_r(Rat::one());
    let r_two_variable = r_matrix.clone();

    let rho_table: Vec<EnvElement> = (0..dim)
        .map(|i| {
            let mut e = EnvElement::zero(env.clone(), cap);
            e.add_term(
                &PbwMonomial::generator(i, dd),
                &TruncSeries::monomial(1, 1, Rat::one(), cap),
            );
            e
        })
        .collect();

    // exp((h/2) sum_i x_i y_i) = sum_a (1/2)^{|a|} h^{|a|} / a! x^a y^a.
    let mut omega = EnvElement::zero(env.clone(), cap);
    for a in monomials_up_to(dim, order) {
        let n = a.degree();
        let mut coeff = Rat::one();
        for &e in a.0.iter() {
            coeff /= factorial(e);
        }
        for _ in 0..n {
            coeff *= crate::coeff::rat(1, 2);
        }
        let mut exps = vec![0u32; dd];
        exps[..dim].copy_from_slice(&a.0);
        exps[dim..].copy_from_slice(&a.0);
        omega.add_term(
            &PbwMonomial::from_exponents(exps),
            &TruncSeries::monomial(n, n, coeff, cap),
        );
    }

    Ok(ClosedForms {
        dim,
        order,
        env,
        twist,
        r_matrix,
        r_two_variable,
        rho_table,
        omega,
    })
}
