//! The two-parameter generator family and its pairings: linear forms on
//! either side, contractions of the R-matrix, the generator elements,
//! coordinates in the generator basis, and the biquantization-square
//! checks.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::coeff::{Cap, ProjectMode, Rat, TruncSeries};
use crate::deltacalc::monomials_up_to;
use crate::envelope::{EnvElement, PbwMonomial, TensorElement};
use crate::liebialg::LieBialgebra;
use crate::{Error, Result};

use super::quantize::Quantization;
use super::verma::DoubleCtx;

/// The linear form attached to a plus generator: project onto the pure
/// minus-side part, keep degree at most one, and evaluate against the
/// dual basis. Applied coefficient-wise per (u, v)-power.
pub fn form_on_minus(ctx: &DoubleCtx, i: usize, b: &EnvElement) -> TruncSeries {
    let mut out = TruncSeries::zero(b.cap());
    for (mono, s) in b.terms() {
        let c = form_on_minus_mono(ctx, i, mono);
        if !c.is_zero() {
            out = out.add(&s.scale(&c)).expect("caps agree");
        }
    }
    out
}

fn form_on_minus_mono(ctx: &DoubleCtx, i: usize, mono: &PbwMonomial) -> Rat {
    let d = ctx.d;
    if mono.0[..d].iter().any(|&e| e != 0) {
        return Rat::zero(); // killed by the minus-side projection
    }
    if mono.degree() != 1 {
        return Rat::zero(); // degree-(>=2) killed; <x, 1> = 0
    }
    if mono.0[d + i] == 1 {
        Rat::one()
    } else {
        Rat::zero()
    }
}

/// The mirror form attached to a minus generator.
pub fn form_on_plus(ctx: &DoubleCtx, i: usize, a: &EnvElement) -> TruncSeries {
    let mut out = TruncSeries::zero(a.cap());
    for (mono, s) in a.terms() {
        let c = form_on_plus_mono(ctx, i, mono);
        if !c.is_zero() {
            out = out.add(&s.scale(&c)).expect("caps agree");
        }
    }
    out
}

fn form_on_plus_mono(ctx: &DoubleCtx, i: usize, mono: &PbwMonomial) -> Rat {
    let d = ctx.d;
    if mono.0[d..].iter().any(|&e| e != 0) {
        return Rat::zero();
    }
    if mono.degree() != 1 {
        return Rat::zero();
    }
    if mono.0[i] == 1 {
        Rat::one()
    } else {
        Rat::zero()
    }
}

/// Contract the second leg of a 2-tensor with a per-monomial scalar form.
pub fn contract_right(
    t: &TensorElement,
    form: impl Fn(&PbwMonomial) -> Rat,
) -> EnvElement {
    let mut out = EnvElement::zero(t.ambient().clone(), t.cap());
    for (legs, s) in t.terms() {
        let c = form(&legs[1]);
        if !c.is_zero() {
            out.add_term(&legs[0], &s.scale(&c));
        }
    }
    out
}

/// Contract the first leg of a 2-tensor with a per-monomial scalar form.
pub fn contract_left(
    t: &TensorElement,
    form: impl Fn(&PbwMonomial) -> Rat,
) -> EnvElement {
    let mut out = EnvElement::zero(t.ambient().clone(), t.cap());
    for (legs, s) in t.terms() {
        let c = form(&legs[0]);
        if !c.is_zero() {
            out.add_term(&legs[1], &s.scale(&c));
        }
    }
    out
}

/// rho_+ of the i-th plus form: divisible by uv by construction.
pub fn rho_plus(q: &Quantization, i: usize) -> EnvElement {
    contract_right(q.r_matrix(), |m| form_on_minus_mono(&q.ctx, i, m))
}

/// rho_- of the i-th minus form.
pub fn rho_minus(q: &Quantization, i: usize) -> EnvElement {
    contract_left(q.r_matrix(), |m| form_on_plus_mono(&q.ctx, i, m))
}

/// The plus-side generator for a multi-index: the ordered product of
/// rho_+ images divided by the v-power of the total degree. The empty
/// index yields the unit.
pub fn generator_plus(q: &Quantization, j: &PbwMonomial) -> Result<EnvElement> {
    assert_eq!(j.0.len(), q.ctx.d);
    let mut acc = EnvElement::unit(q.ctx.env.clone(), q.cap());
    for i in 0..q.ctx.d {
        if j.0[i] == 0 {
            continue;
        }
        let rho = rho_plus(q, i);
        for _ in 0..j.0[i] {
            acc = acc.mul(&rho)?;
        }
    }
    let total = j.degree();
    if !acc.divisible(0, total) {
        return Err(Error::Internal(format!(
            "generator product is not divisible by v^{}",
            total
        )));
    }
    acc.div_monomial(0, total)
}

/// The minus-side generator for a multi-index, divided by the u-power.
pub fn generator_minus(q: &Quantization, k: &PbwMonomial) -> Result<EnvElement> {
    assert_eq!(k.0.len(), q.ctx.d);
    let mut acc = EnvElement::unit(q.ctx.env.clone(), q.cap());
    for i in 0..q.ctx.d {
        if k.0[i] == 0 {
            continue;
        }
        let rho = rho_minus(q, i);
        for _ in 0..k.0[i] {
            acc = acc.mul(&rho)?;
        }
    }
    let total = k.degree();
    if !acc.divisible(total, 0) {
        return Err(Error::Internal(format!(
            "generator product is not divisible by u^{}",
            total
        )));
    }
    acc.div_monomial(total, 0)
}

/// The projection onto the plus half at v = 0: kill monomials containing
/// minus generators, then set v to zero in the coefficients.
pub fn p_v(ctx: &DoubleCtx, a: &EnvElement) -> EnvElement {
    let d = ctx.d;
    let mut out = EnvElement::zero(a.ambient().clone(), a.cap());
    for (mono, s) in a.terms() {
        if mono.0[d..].iter().all(|&e| e == 0) {
            out.add_term(mono, &s.project(ProjectMode::KillV));
        }
    }
    out
}

/// The projection onto the minus half at u = 0.
pub fn p_u(ctx: &DoubleCtx, a: &EnvElement) -> EnvElement {
    let d = ctx.d;
    let mut out = EnvElement::zero(a.ambient().clone(), a.cap());
    for (mono, s) in a.terms() {
        if mono.0[..d].iter().all(|&e| e == 0) {
            out.add_term(mono, &s.project(ProjectMode::KillU));
        }
    }
    out
}

/// Coordinates of an element in the plus-generator basis over the scalar
/// ring (polynomials in u, series in v), by peeling v-layers against the
/// leading terms u^{|j|} x_j. Reads the whole coefficient window.
///
/// Fails when a v-layer is not a filtration-bounded combination of pure
/// plus monomials, which certifies non-membership at this truncation.
pub fn expand_in_plus_generators(
    q: &Quantization,
    a: &EnvElement,
) -> Result<BTreeMap<PbwMonomial, TruncSeries>> {
    expand_in_plus_generators_within(q, a, q.cap())
}

/// Coordinate expansion reading only the trusted coefficient window.
///
/// Divisions by u or v lose the top layers of the window, so elements
/// obtained that way carry garbage zeros there; `known` names the window
/// whose coefficients are meaningful. Layers outside it are neither read
/// nor checked.
pub fn expand_in_plus_generators_within(
    q: &Quantization,
    a: &EnvElement,
    known: Cap,
) -> Result<BTreeMap<PbwMonomial, TruncSeries>> {
    let ctx = &q.ctx;
    let d = ctx.d;
    let cap = q.cap();
    // Precompute the generators that can appear.
    let mut gens: BTreeMap<PbwMonomial, EnvElement> = BTreeMap::new();
    for j in monomials_up_to(d, known.u) {
        gens.insert(j.clone(), generator_plus(q, &j)?);
    }
    let mut coords: BTreeMap<PbwMonomial, TruncSeries> = BTreeMap::new();
    let mut residual = a.clone();
    for stage in 0..=known.v {
        // Trusted part of the v^stage layer of the residual.
        let mut pieces: Vec<(PbwMonomial, TruncSeries)> = Vec::new();
        for (mono, s) in residual.terms() {
            for (&(m, n), c) in s.iter() {
                if n != stage || m > known.u {
                    continue;
                }
                if mono.0[d..].iter().any(|&e| e != 0) {
                    return Err(Error::NotInSpan(format!(
                        "v^{} layer contains the mixed monomial {}",
                        stage,
                        mono.render(ctx.env.names())
                    )));
                }
                let deg = mono.degree();
                if deg > m {
                    return Err(Error::NotInSpan(format!(
                        "v^{} layer violates the filtration at u^{} {}",
                        stage,
                        m,
                        mono.render(ctx.env.names())
                    )));
                }
                let j = PbwMonomial::from_exponents(mono.0[..d].to_vec());
                pieces.push((
                    j,
                    TruncSeries::monomial(m - deg, stage, c.clone(), cap),
                ));
            }
        }
        for (j, piece) in pieces {
            let gen = gens
                .get(&j)
                .ok_or_else(|| Error::NotInSpan(format!("index degree {} beyond cap", j.degree())))?;
            residual = residual.sub(&gen.scale_series(&piece)?)?;
            let entry = coords
                .entry(j)
                .or_insert_with(|| TruncSeries::zero(cap));
            *entry = entry.add(&piece)?;
        }
    }
    for (mono, s) in residual.terms() {
        if !s.truncate(known).is_zero() {
            return Err(Error::NotInSpan(format!(
                "nonzero residual at {} after all v-layers",
                mono.render(ctx.env.names())
            )));
        }
    }
    coords.retain(|_, s| !s.is_zero());
    Ok(coords)
}

/// The pairing of a plus-generator index against an element of the minus
/// side: the ordered product of forms (descending generator order, dual
/// to the antimorphism convention) evaluated through the iterated
/// deformed coproduct, divided by the v-power.
pub fn pair_biquant(q: &Quantization, j: &PbwMonomial, b: &EnvElement) -> Result<TruncSeries> {
    let ctx = &q.ctx;
    let m = j.degree() as usize;
    if m == 0 {
        return Ok(b.counit());
    }
    let t = q.iterated_coproduct(b, m)?;
    // Leg p carries the form of generator legs_order[p], descending.
    let mut legs_order: Vec<usize> = Vec::with_capacity(m);
    for i in (0..ctx.d).rev() {
        for _ in 0..j.0[i] {
            legs_order.push(i);
        }
    }
    let mut out = TruncSeries::zero(q.cap());
    for (legs, s) in t.terms() {
        let mut c = Rat::one();
        for (p, mono) in legs.iter().enumerate() {
            c *= form_on_minus_mono(ctx, legs_order[p], mono);
            if c.is_zero() {
                break;
            }
        }
        if !c.is_zero() {
            out = out.add(&s.scale(&c))?;
        }
    }
    if !out.divisible_v(j.degree()) {
        return Err(Error::Internal(format!(
            "pairing value is not divisible by v^{}",
            j.degree()
        )));
    }
    out.div_monomial(0, j.degree())
}

/// One named finding of the square check.
#[derive(Clone, Debug)]
pub struct SquareCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Findings of the biquantization-square verification.
#[derive(Clone, Debug)]
pub struct SquareReport {
    pub checks: Vec<SquareCheck>,
}

impl SquareReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn lines(&self) -> Vec<String> {
        self.checks
            .iter()
            .map(|c| {
                if c.pass {
                    format!("{}: PASS", c.name)
                } else {
                    format!("{}: FAIL ({})", c.name, c.detail)
                }
            })
            .collect()
    }
}

/// Run the biquantization-square checks on the generators at the given
/// order: commutativity modulo u, cocommutativity modulo v, the induced
/// cobracket and bracket, the leading-order multiplication, and the
/// linkage between the two pairings.
pub fn square_check(l: &LieBialgebra, order: u32) -> Result<SquareReport> {
    assert!(order >= 2, "the square checks need at least order 2");
    let q = Quantization::new(l, order)?;
    let ctx = &q.ctx;
    let d = ctx.d;
    let cap = q.cap();
    let mut checks = Vec::new();
    let mut push = |name: &str, pass: bool, detail: String| {
        checks.push(SquareCheck {
            name: name.to_string(),
            pass,
            detail,
        });
    };

    let gens: Vec<EnvElement> = (0..d)
        .map(|i| generator_plus(&q, &PbwMonomial::generator(i, d)))
        .collect::<Result<_>>()?;

    // (i) generator commutators are divisible by u.
    {
        let mut pass = true;
        let mut detail = String::new();
        for a in 0..d {
            for b in 0..d {
                let comm = gens[a].mul(&gens[b])?.sub(&gens[b].mul(&gens[a])?)?;
                if !comm.divisible(1, 0) {
                    pass = false;
                    detail = format!("commutator ({}, {}) not divisible by u", a + 1, b + 1);
                }
            }
        }
        push("commutators divisible by u", pass, detail);
    }

    // (ii) coproduct minus opposite is divisible by v.
    {
        let mut pass = true;
        let mut detail = String::new();
        for (i, g) in gens.iter().enumerate() {
            let cp = q.coproduct(g)?;
            let anti = cp.sub(&cp.swap())?;
            if !anti.divisible(0, 1) {
                pass = false;
                detail = format!("generator {} coproduct asymmetry not divisible by v", i + 1);
            }
        }
        push("coproduct asymmetry divisible by v", pass, detail);
    }

    // (iii) induced cobracket equals u^2 delta(x).
    {
        let mut pass = true;
        let mut detail = String::new();
        for (i, g) in gens.iter().enumerate() {
            let cp = q.coproduct(g)?;
            let anti = cp.sub(&cp.swap())?.div_monomial(0, 1)?;
            // project both legs onto the plus half at v = 0
            let mut projected = TensorElement::zero(ctx.env.clone(), 2, cap);
            for (legs, s) in anti.terms() {
                if legs
                    .iter()
                    .all(|m| m.0[d..].iter().all(|&e| e == 0))
                {
                    projected.add_term(legs, &s.project(ProjectMode::KillV));
                }
            }
            let mut expect = TensorElement::zero(ctx.env.clone(), 2, cap);
            for p in 0..d {
                for qx in 0..d {
                    let c = l.f(i, p, qx);
                    if !c.is_zero() {
                        expect.add_term(
                            &[
                                PbwMonomial::generator(p, 2 * d),
                                PbwMonomial::generator(qx, 2 * d),
                            ],
                            &TruncSeries::monomial(2, 0, c.clone(), cap),
                        );
                    }
                }
            }
            if projected != expect {
                pass = false;
                detail = format!("generator {}: induced cobracket mismatch", i + 1);
            }
        }
        push("induced cobracket equals u^2 delta", pass, detail);
    }

    // (iv) induced bracket at (u, v) = 0 equals the Poisson bracket of the
    // symmetric algebra.
    {
        let mut pass = true;
        let mut detail = String::new();
        for a in 0..d {
            for b in 0..d {
                let comm = gens[a].mul(&gens[b])?.sub(&gens[b].mul(&gens[a])?)?;
                let quotient_window = Cap::new(cap.u - 1, cap.v);
                let coords =
                    expand_in_plus_generators_within(&q, &comm.div_monomial(1, 0)?, quotient_window)?;
                let mut expect: BTreeMap<PbwMonomial, Rat> = BTreeMap::new();
                for k in 0..d {
                    let c = l.c(a, b, k);
                    if !c.is_zero() {
                        expect.insert(PbwMonomial::generator(k, d), c.clone());
                    }
                }
                let got: BTreeMap<PbwMonomial, Rat> = coords
                    .iter()
                    .filter_map(|(j, s)| {
                        let c = s.coeff(0, 0);
                        if c.is_zero() {
                            None
                        } else {
                            Some((j.clone(), c))
                        }
                    })
                    .collect();
                if got != expect {
                    pass = false;
                    detail = format!("bracket ({}, {}) mismatch", a + 1, b + 1);
                }
            }
        }
        push("induced bracket is the Poisson bracket", pass, detail);
    }

    // (v) leading-order multiplication agrees with the symmetric algebra.
    {
        let mut pass = true;
        let mut detail = String::new();
        for a in 0..d {
            for b in 0..d {
                let prod = gens[a].mul(&gens[b])?;
                let coords = expand_in_plus_generators(&q, &prod)?;
                let mut want = PbwMonomial::one(d);
                want.0[a] += 1;
                want.0[b] += 1;
                for (j, s) in coords.iter() {
                    let at0 = s.coeff(0, 0);
                    let expect = if *j == want { Rat::one() } else { Rat::zero() };
                    if at0 != expect {
                        pass = false;
                        detail = format!("product ({}, {}) at index {:?}", a + 1, b + 1, j);
                    }
                }
                if coords.get(&want).map(|s| s.coeff(0, 0)) != Some(Rat::one()) {
                    pass = false;
                    detail = format!("product ({}, {}) misses its leading index", a + 1, b + 1);
                }
            }
        }
        push("leading products agree with the symmetric algebra", pass, detail);
    }

    // (vi) pairing linkage: rows of the generator pairing modulo u are
    // realized by an element of the function bialgebra (reconstructed
    // through the triangular Gram structure) whose pairing reproduces the
    // row; at (u, v) = 0 the Gram matrix is the factorial pairing.
    {
        let mut pass = true;
        let mut detail = String::new();
        let depth = 2.min(order);
        let columns: Vec<PbwMonomial> = monomials_up_to(d, depth);
        let minus_gens: BTreeMap<PbwMonomial, EnvElement> = columns
            .iter()
            .map(|k| Ok((k.clone(), generator_minus(&q, k)?)))
            .collect::<Result<_>>()?;
        for jrow in monomials_up_to(d, depth) {
            // Dividing the pairing by v^{|j|} leaves that many fewer
            // trusted v-layers in the row.
            let trusted = order - jrow.degree().min(order);
            let row_cap = Cap::new(0, trusted);
            let mut row: BTreeMap<PbwMonomial, TruncSeries> = BTreeMap::new();
            for k in columns.iter() {
                let value = pair_biquant(&q, &jrow, &minus_gens[k])?;
                // factorial pairing at the origin
                let at0 = value.coeff(0, 0);
                let expect0 = crate::pairing::sym_pairing_monomials(&jrow, k);
                if at0 != expect0 {
                    pass = false;
                    detail = format!(
                        "Gram at origin: row {:?} col {:?} got {} want {}",
                        jrow,
                        k,
                        at0,
                        expect0
                    );
                }
                row.insert(k.clone(), value.project(ProjectMode::KillU).recap(row_cap));
            }
            // The reconstruction linkage needs at least one trusted
            // v-layer and must be able to evaluate every column.
            if depth > trusted + 1 {
                continue;
            }
            match crate::pairing::dual_reconstruct(&row, l, depth, trusted) {
                Ok(reconstructed) => {
                    // Leading term of the reconstruction is the row index.
                    let sym = reconstructed.map_coeffs(|s| s.project(ProjectMode::KillV));
                    let lead = sym.coeff(&jrow).coeff(0, 0);
                    if lead != Rat::one() {
                        pass = false;
                        detail = format!("row {:?}: reconstruction leading term {}", jrow, lead);
                    }
                }
                Err(e) => {
                    pass = false;
                    detail = format!("row {:?}: {}", jrow, e);
                }
            }
        }
        push("pairing rows live in the dual function bialgebra", pass, detail);
    }

    Ok(SquareReport { checks })
}

/// A perturbed minus-side form differing on degree-2 monomials: used by
/// the choice-independence check. The perturbation receives the pure
/// minus exponents of a degree-2 monomial and responds with an optional
/// replacement value in the minus half.
pub fn rho_plus_perturbed(
    q: &Quantization,
    i: usize,
    perturb: &dyn Fn(&PbwMonomial) -> Vec<(usize, Rat)>,
) -> EnvElement {
    let ctx = &q.ctx;
    let d = ctx.d;
    contract_right(q.r_matrix(), |mono| {
        let mut c = form_on_minus_mono(ctx, i, mono);
        if mono.0[..d].iter().all(|&e| e == 0) && mono.degree() == 2 {
            let minus_part = PbwMonomial::from_exponents(mono.0[d..].to_vec());
            for (target, lambda) in perturb(&minus_part) {
                if target == i {
                    c += lambda;
                }
            }
        }
        c
    })
}

/// The perturbed plus generator of one basis index.
pub fn generator_plus_perturbed(
    q: &Quantization,
    i: usize,
    perturb: &dyn Fn(&PbwMonomial) -> Vec<(usize, Rat)>,
) -> Result<EnvElement> {
    let acc = rho_plus_perturbed(q, i, perturb);
    if !acc.divisible(0, 1) {
        return Err(Error::Internal(
            "perturbed generator is not divisible by v".into(),
        ));
    }
    acc.div_monomial(0, 1)
}
