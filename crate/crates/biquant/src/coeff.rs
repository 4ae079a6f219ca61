//! Exact rational arithmetic and truncated formal power series in two
//! commuting variables u, v.
//!
//! A [`TruncSeries`] stores only nonzero coefficients, keyed by the
//! exponent pair (u-degree, v-degree), with an explicit per-variable cap.
//! Terms above the cap are silently discarded by every operation, so all
//! downstream equalities are asserted "up to cap". Univariate series in a
//! single deformation variable h are carried on the diagonal (m = n)
//! after substituting h -> uv, or as u-only / v-only series in
//! one-variable contexts.
//!
//! Invariants:
//! - no stored coefficient is zero;
//! - no stored exponent exceeds the cap.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Exact rational scalar. Always in lowest terms with positive denominator.
pub type Rat = BigRational;

/// Rational from a numerator/denominator pair of machine integers.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn rat_int(num: i64) -> Rat {
    Rat::from_integer(BigInt::from(num))
}

/// n! as a rational.
pub fn factorial(n: u32) -> Rat {
    let mut acc = BigInt::one();
    for k in 2..=n as u64 {
        acc *= BigInt::from(k);
    }
    Rat::from_integer(acc)
}

/// Binomial coefficient C(n, k) as a rational.
pub fn binomial(n: u32, k: u32) -> Rat {
    if k > n {
        return Rat::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k as u64 {
        acc = acc * BigInt::from(n as u64 - i) / BigInt::from(i + 1);
    }
    Rat::from_integer(acc)
}

/// Parse "p/q" or "p" into a rational. The denominator must be nonzero.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let t = s.trim();
    let make_err = || Error::BadRational(s.to_string());
    match t.split_once('/') {
        Some((p, q)) => {
            let num: BigInt = p.trim().parse().map_err(|_| make_err())?;
            let den: BigInt = q.trim().parse().map_err(|_| make_err())?;
            if den.is_zero() {
                return Err(make_err());
            }
            Ok(Rat::new(num, den))
        }
        None => {
            let num: BigInt = t.parse().map_err(|_| make_err())?;
            Ok(Rat::from_integer(num))
        }
    }
}

/// Canonical "p/q" rendering (plain "p" for integers).
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Maximal retained degrees per variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cap {
    pub u: u32,
    pub v: u32,
}

impl Cap {
    pub fn new(u: u32, v: u32) -> Self {
        Cap { u, v }
    }

    /// Symmetric cap (N, N), the default for h -> uv contexts.
    pub fn diag(n: u32) -> Self {
        Cap { u: n, v: n }
    }

    pub fn contains(&self, m: u32, n: u32) -> bool {
        m <= self.u && n <= self.v
    }
}

impl fmt::Display for Cap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

/// Which variable(s) a projection kills.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProjectMode {
    /// u -> 0: discard terms with positive u-degree.
    KillU,
    /// v -> 0: discard terms with positive v-degree.
    KillV,
    /// (u, v) -> 0: keep only the constant term.
    KillBoth,
}

/// Truncated formal power series in u and v with exact rational
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    cap: Cap,
    coeffs: BTreeMap<(u32, u32), Rat>,
}

impl TruncSeries {
    pub fn zero(cap: Cap) -> Self {
        TruncSeries {
            cap,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(cap: Cap) -> Self {
        Self::constant(Rat::one(), cap)
    }

    pub fn constant(c: Rat, cap: Cap) -> Self {
        let mut s = Self::zero(cap);
        s.set(0, 0, c);
        s
    }

    /// c * u^m * v^n (dropped if beyond the cap).
    pub fn monomial(m: u32, n: u32, c: Rat, cap: Cap) -> Self {
        let mut s = Self::zero(cap);
        s.set(m, n, c);
        s
    }

    /// h^n realized as u^n v^n.
    pub fn h_power(n: u32, cap: Cap) -> Self {
        Self::monomial(n, n, Rat::one(), cap)
    }

    pub fn cap(&self) -> Cap {
        self.cap
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, m: u32, n: u32) -> Rat {
        self.coeffs.get(&(m, n)).cloned().unwrap_or_else(Rat::zero)
    }

    /// Coefficient of h^n on the diagonal.
    pub fn h_coeff(&self, n: u32) -> Rat {
        self.coeff(n, n)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(u32, u32), &Rat)> {
        self.coeffs.iter()
    }

    pub fn set(&mut self, m: u32, n: u32, c: Rat) {
        if !self.cap.contains(m, n) {
            return;
        }
        if c.is_zero() {
            self.coeffs.remove(&(m, n));
        } else {
            self.coeffs.insert((m, n), c);
        }
    }

    pub fn add_term(&mut self, m: u32, n: u32, c: &Rat) {
        if !self.cap.contains(m, n) || c.is_zero() {
            return;
        }
        let cur = self.coeff(m, n) + c;
        self.set(m, n, cur);
    }

    fn check_cap(&self, other: &Self) -> Result<()> {
        if self.cap != other.cap {
            Err(Error::CapMismatch(self.cap, other.cap))
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_cap(other)?;
        let mut out = self.clone();
        for (&(m, n), c) in other.coeffs.iter() {
            out.add_term(m, n, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_cap(other)?;
        let mut out = self.clone();
        for (&(m, n), c) in other.coeffs.iter() {
            out.add_term(m, n, &-c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.cap);
        for (&(m, n), c) in self.coeffs.iter() {
            out.coeffs.insert((m, n), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.cap);
        }
        let mut out = Self::zero(self.cap);
        for (&(m, n), a) in self.coeffs.iter() {
            out.coeffs.insert((m, n), a * c);
        }
        out
    }

    /// Cauchy product, discarding all terms above the cap.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_cap(other)?;
        let mut out = Self::zero(self.cap);
        for (&(ma, na), ca) in self.coeffs.iter() {
            for (&(mb, nb), cb) in other.coeffs.iter() {
                let (m, n) = (ma + mb, na + nb);
                if self.cap.contains(m, n) {
                    out.add_term(m, n, &(ca * cb));
                }
            }
        }
        Ok(out)
    }

    /// Multiply by u^m v^n.
    pub fn mul_monomial(&self, m: u32, n: u32) -> Self {
        let mut out = Self::zero(self.cap);
        for (&(ma, na), c) in self.coeffs.iter() {
            let (p, q) = (ma + m, na + n);
            if self.cap.contains(p, q) {
                out.coeffs.insert((p, q), c.clone());
            }
        }
        out
    }

    /// Multiplicative inverse up to the cap. Requires a nonzero constant
    /// term.
    pub fn invert(&self) -> Result<Self> {
        let c00 = self.coeff(0, 0);
        if c00.is_zero() {
            return Err(Error::NotInvertible);
        }
        let inv00 = Rat::one() / c00.clone();
        let mut out = Self::zero(self.cap);
        // Graded recurrence: b_{mn} = -1/a00 * sum_{(p,q) < (m,n)} a_{m-p,n-q} b_{pq}.
        let mut order: Vec<(u32, u32)> = Vec::new();
        for m in 0..=self.cap.u {
            for n in 0..=self.cap.v {
                order.push((m, n));
            }
        }
        order.sort_by_key(|&(m, n)| (m + n, m));
        for (m, n) in order {
            if (m, n) == (0, 0) {
                out.set(0, 0, inv00.clone());
                continue;
            }
            let mut acc = Rat::zero();
            for (&(p, q), b) in out.coeffs.iter() {
                if p <= m && q <= n && (p, q) != (m, n) {
                    let a = self.coeff(m - p, n - q);
                    if !a.is_zero() {
                        acc += a * b;
                    }
                }
            }
            out.set(m, n, -(&inv00 * acc));
        }
        Ok(out)
    }

    /// Substitute h -> uv: a univariate series carried on the u-axis
    /// becomes a diagonal series in the target cap.
    ///
    /// Panics if the input has positive v-degree terms (it is not
    /// univariate).
    pub fn inflate(&self, cap: Cap) -> Self {
        let mut out = Self::zero(cap);
        for (&(m, n), c) in self.coeffs.iter() {
            assert!(n == 0, "inflate: input series is not univariate in h");
            out.add_term(m, m, c);
        }
        out
    }

    /// Kill the chosen variable(s): the natural projections of the
    /// biquantization square at the scalar level.
    pub fn project(&self, mode: ProjectMode) -> Self {
        let mut out = Self::zero(self.cap);
        for (&(m, n), c) in self.coeffs.iter() {
            let keep = match mode {
                ProjectMode::KillU => m == 0,
                ProjectMode::KillV => n == 0,
                ProjectMode::KillBoth => m == 0 && n == 0,
            };
            if keep {
                out.coeffs.insert((m, n), c.clone());
            }
        }
        out
    }

    /// True when every stored term has u-degree >= k.
    pub fn divisible_u(&self, k: u32) -> bool {
        self.coeffs.keys().all(|&(m, _)| m >= k)
    }

    /// True when every stored term has v-degree >= k.
    pub fn divisible_v(&self, k: u32) -> bool {
        self.coeffs.keys().all(|&(_, n)| n >= k)
    }

    /// Exact division by u^a v^b. The cap is unchanged; coefficients near
    /// the top of the window are lost, consistent with up-to-cap
    /// semantics.
    pub fn div_monomial(&self, a: u32, b: u32) -> Result<Self> {
        if !(self.divisible_u(a) && self.divisible_v(b)) {
            return Err(Error::NotDivisible {
                need_u: a,
                need_v: b,
            });
        }
        let mut out = Self::zero(self.cap);
        for (&(m, n), c) in self.coeffs.iter() {
            out.coeffs.insert((m - a, n - b), c.clone());
        }
        Ok(out)
    }

    /// Re-house the coefficients under a different cap, dropping whatever
    /// falls outside the new window.
    pub fn recap(&self, cap: Cap) -> Self {
        let mut out = Self::zero(cap);
        for (&(m, n), c) in self.coeffs.iter() {
            out.add_term(m, n, c);
        }
        out
    }

    /// Restrict to a smaller cap.
    pub fn truncate(&self, cap: Cap) -> Self {
        let mut out = Self::zero(cap);
        for (&(m, n), c) in self.coeffs.iter() {
            if cap.contains(m, n) {
                out.coeffs.insert((m, n), c.clone());
            }
        }
        out
    }

    /// Compare coefficients on the window (m <= cap.u, n <= cap.v) only.
    pub fn eq_up_to(&self, other: &Self, cap: Cap) -> bool {
        self.truncate(cap).coeffs == other.truncate(cap).coeffs
    }

    /// Canonical text rendering: terms sorted by (total degree, u-degree),
    /// e.g. `1 + 1/2*u*v - 3*u^2`. Byte-stable for golden tests.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut keys: Vec<(u32, u32)> = self.coeffs.keys().cloned().collect();
        keys.sort_by_key(|&(m, n)| (m + n, m));
        let mut out = String::new();
        for (idx, (m, n)) in keys.iter().enumerate() {
            let c = &self.coeffs[&(*m, *n)];
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            out.push_str(&render_term(&abs, *m, *n));
        }
        out
    }
}

fn render_term(abs: &Rat, m: u32, n: u32) -> String {
    let mut parts: Vec<String> = Vec::new();
    if !abs.is_one() || (m == 0 && n == 0) {
        parts.push(format_rat(abs));
    }
    for (name, e) in [("u", m), ("v", n)] {
        match e {
            0 => {}
            1 => parts.push(name.to_string()),
            _ => parts.push(format!("{}^{}", name, e)),
        }
    }
    parts.join("*")
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(terms: &[(u32, u32, i64, i64)], cap: Cap) -> TruncSeries {
        let mut out = TruncSeries::zero(cap);
        for &(m, n, p, q) in terms {
            out.add_term(m, n, &rat(p, q));
        }
        out
    }

    #[test]
    fn mul_polynomial_identity() {
        // (1+u)(1-u) = 1 - u^2
        let cap = Cap::new(4, 4);
        let a = s(&[(0, 0, 1, 1), (1, 0, 1, 1)], cap);
        let b = s(&[(0, 0, 1, 1), (1, 0, -1, 1)], cap);
        let expect = s(&[(0, 0, 1, 1), (2, 0, -1, 1)], cap);
        assert_eq!(a.mul(&b).unwrap(), expect);
    }

    #[test]
    fn mul_square_expansion() {
        // (1 + uv/2)^2 = 1 + uv + u^2 v^2 / 4
        let cap = Cap::diag(3);
        let a = s(&[(0, 0, 1, 1), (1, 1, 1, 2)], cap);
        let expect = s(&[(0, 0, 1, 1), (1, 1, 1, 1), (2, 2, 1, 4)], cap);
        assert_eq!(a.mul(&a).unwrap(), expect);
    }

    #[test]
    fn mul_cap_retains_mixed_degree() {
        // cap (1,1): (1+u)(1+v) = 1 + u + v + uv, all retained
        let cap = Cap::new(1, 1);
        let a = s(&[(0, 0, 1, 1), (1, 0, 1, 1)], cap);
        let b = s(&[(0, 0, 1, 1), (0, 1, 1, 1)], cap);
        let expect = s(&[(0, 0, 1, 1), (1, 0, 1, 1), (0, 1, 1, 1), (1, 1, 1, 1)], cap);
        assert_eq!(a.mul(&b).unwrap(), expect);
    }

    #[test]
    fn mul_cap_mismatch_is_error() {
        let a = TruncSeries::one(Cap::new(2, 2));
        let b = TruncSeries::one(Cap::new(3, 2));
        assert!(matches!(a.mul(&b), Err(Error::CapMismatch(_, _))));
    }

    #[test]
    fn invert_geometric() {
        // 1/(1+u) = 1 - u + u^2 - u^3 at cap (3,0)
        let cap = Cap::new(3, 0);
        let a = s(&[(0, 0, 1, 1), (1, 0, 1, 1)], cap);
        let expect = s(&[(0, 0, 1, 1), (1, 0, -1, 1), (2, 0, 1, 1), (3, 0, -1, 1)], cap);
        assert_eq!(a.invert().unwrap(), expect);
    }

    #[test]
    fn invert_constants() {
        let cap = Cap::diag(2);
        assert_eq!(TruncSeries::one(cap).invert().unwrap(), TruncSeries::one(cap));
        let two = TruncSeries::constant(rat_int(2), cap);
        let half = TruncSeries::constant(rat(1, 2), cap);
        assert_eq!(two.invert().unwrap(), half);
        assert!(matches!(TruncSeries::zero(cap).invert(), Err(Error::NotInvertible)));
    }

    #[test]
    fn inflate_substitutes_h_for_uv() {
        let hcap = Cap::new(3, 0);
        let cap = Cap::diag(3);
        // 1 + c h  ->  1 + c uv
        let a = s(&[(0, 0, 1, 1), (1, 0, 5, 7)], hcap);
        let expect = s(&[(0, 0, 1, 1), (1, 1, 5, 7)], cap);
        assert_eq!(a.inflate(cap), expect);
        // h^2 -> u^2 v^2
        let h2 = s(&[(2, 0, 1, 1)], hcap);
        assert_eq!(h2.inflate(cap), s(&[(2, 2, 1, 1)], cap));
    }

    #[test]
    fn inflate_exponential_termwise() {
        // exp(ch) truncated inflates to exp(c uv) truncated, termwise
        let hcap = Cap::new(3, 0);
        let cap = Cap::diag(3);
        let c = rat(2, 3);
        let mut e = TruncSeries::zero(hcap);
        for n in 0..=3u32 {
            let mut term = Rat::one();
            for k in 1..=n {
                term = term * &c / rat_int(k as i64);
            }
            e.add_term(n, 0, &term);
        }
        let inflated = e.inflate(cap);
        for n in 0..=3u32 {
            let mut term = Rat::one();
            for k in 1..=n {
                term = term * &c / rat_int(k as i64);
            }
            assert_eq!(inflated.coeff(n, n), term);
        }
    }

    #[test]
    fn project_modes() {
        let cap = Cap::diag(2);
        let a = s(&[(0, 0, 1, 1), (1, 0, 1, 1), (0, 1, 1, 1), (1, 1, 1, 1)], cap);
        assert_eq!(a.project(ProjectMode::KillV), s(&[(0, 0, 1, 1), (1, 0, 1, 1)], cap));
        assert_eq!(a.project(ProjectMode::KillBoth), TruncSeries::one(cap));
        let b = s(&[(2, 1, 1, 1)], cap);
        assert!(b.project(ProjectMode::KillU).is_zero());
    }

    #[test]
    fn division_by_monomials() {
        let cap = Cap::diag(3);
        let a = s(&[(1, 1, 1, 1), (2, 1, 3, 2)], cap);
        assert!(a.divisible_u(1));
        assert!(!a.divisible_u(2));
        let d = a.div_monomial(1, 1).unwrap();
        assert_eq!(d, s(&[(0, 0, 1, 1), (1, 0, 3, 2)], cap));
        assert!(a.div_monomial(2, 0).is_err());
    }

    #[test]
    fn render_is_canonical() {
        let cap = Cap::diag(3);
        let a = s(&[(2, 0, -3, 1), (1, 1, 1, 2), (0, 0, 1, 1)], cap);
        assert_eq!(a.render(), "1 + 1/2*u*v - 3*u^2");
        assert_eq!(TruncSeries::zero(cap).render(), "0");
        // (total degree, u-degree) ordering puts v before u
        let b = s(&[(1, 0, 1, 1), (0, 1, -1, 1)], cap);
        assert_eq!(b.render(), "-v + u");
    }

    #[test]
    fn parse_and_format_rationals() {
        assert_eq!(parse_rat("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rat("-5").unwrap(), rat_int(-5));
        assert_eq!(parse_rat(" 7 / 2 ").unwrap(), rat(7, 2));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
        assert_eq!(format_rat(&rat(6, 4)), "3/2");
        assert_eq!(format_rat(&rat_int(-2)), "-2");
    }
}
