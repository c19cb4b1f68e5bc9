//! GF(q³) for prime powers q = pⁿ, realized as GF(p)[x]/(m) with m a monic
//! irreducible of degree 3n, together with the relative trace down to GF(q)
//! and discrete logs with respect to a designated primitive root.
//!
//! Elements are coefficient vectors of length 3n, ascending powers, reduced
//! mod p; the representation is canonical, so vectors compare for equality.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits q into (p, n) with q = p^n, p prime, n >= 1.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q {
        if q.is_multiple_of(p) {
            let mut rest = q;
            let mut n = 0u32;
            while rest.is_multiple_of(p) {
                rest /= p;
                n += 1;
            }
            return if rest == 1 { Some((p, n)) } else { None };
        }
        p += 1;
    }
    Some((q, 1))
}

/// Distinct prime factors, by trial division. Inputs here stay below 13⁹.
pub fn distinct_prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Field element: coefficient vector of length `ext_degree`, ascending powers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FieldElem(pub Vec<u64>);

impl FieldElem {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", poly_string(&self.0))
    }
}

/// Renders a coefficient vector as a polynomial in x, highest power first.
pub fn poly_string(coeffs: &[u64]) -> String {
    let mut terms = Vec::new();
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let t = match (i, c) {
            (0, c) => format!("{c}"),
            (1, 1) => "x".to_string(),
            (1, c) => format!("{c}x"),
            (i, 1) => format!("x^{i}"),
            (i, c) => format!("{c}x^{i}"),
        };
        terms.push(t);
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

// -- polynomial helpers over GF(p), dense ascending coefficient vectors --

fn poly_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai * bj) % p;
        }
    }
    poly_trim(&mut out);
    out
}

/// Remainder of a by the monic polynomial m.
fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    debug_assert_eq!(*m.last().unwrap(), 1, "modulus must be monic");
    let mut r: Vec<u64> = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &mi) in m.iter().enumerate() {
                let idx = i + shift;
                let sub = (lead * mi) % p;
                r[idx] = (r[idx] + p - sub) % p;
            }
        }
        poly_trim(&mut r);
        if r.len() <= dm {
            break;
        }
    }
    r
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-p
/// digits of `idx` (constant term = least significant digit).
fn indexed_monic(idx: u64, deg: usize, p: u64) -> Vec<u64> {
    let mut c = vec![0u64; deg + 1];
    let mut rest = idx;
    for slot in c.iter_mut().take(deg) {
        *slot = rest % p;
        rest /= p;
    }
    c[deg] = 1;
    c
}

/// Trial division by every monic polynomial of degree 1..=deg/2, in the same
/// deterministic counting order used for the modulus search.
fn poly_is_irreducible(m: &[u64], p: u64) -> bool {
    let deg = m.len() - 1;
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for idx in 0..count {
            let cand = indexed_monic(idx, d, p);
            if poly_rem(m, &cand, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// GF(p^{3n}) with a designated primitive root; the relative structure over
/// GF(q) (q = pⁿ) is what every consumer downstream actually uses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldCtx {
    p: u64,
    n: u32,
    q: u64,
    ext_degree: usize,
    /// Monic irreducible, full coefficient list of length 3n+1.
    modulus: Vec<u64>,
    zeta: FieldElem,
    /// p^{3n} - 1.
    group_order: u64,
}

/// Wire format: exactly the four defining fields.
#[derive(Serialize, Deserialize)]
struct FieldCtxWire {
    p: u64,
    n: u32,
    modulus: Vec<u64>,
    zeta: Vec<u64>,
}

impl Serialize for FieldCtx {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FieldCtxWire {
            p: self.p,
            n: self.n,
            modulus: self.modulus.clone(),
            zeta: self.zeta.0.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldCtx {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = FieldCtxWire::deserialize(d)?;
        let ctx = FieldCtx::with_modulus(w.p, w.n, &w.modulus).map_err(serde::de::Error::custom)?;
        let zeta = ctx.elem(&w.zeta).map_err(serde::de::Error::custom)?;
        ctx.with_zeta(zeta).map_err(serde::de::Error::custom)
    }
}

/// Builds the field context; with no modulus the deterministic search picks the
/// first monic irreducible of degree 3n (counting order on low coefficients)
/// whose residue class x is itself primitive, and zeta = x.
pub fn make_field(p: u64, n: u32, modulus: Option<&[u64]>) -> Result<FieldCtx> {
    match modulus {
        Some(m) => FieldCtx::with_modulus(p, n, m),
        None => FieldCtx::new(p, n),
    }
}

impl FieldCtx {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        Self::check_params(p, n)?;
        let deg = (3 * n) as usize;
        let count = p.pow(deg as u32);
        for idx in 0..count {
            let m = indexed_monic(idx, deg, p);
            if !poly_is_irreducible(&m, p) {
                continue;
            }
            let ctx = Self::assemble(p, n, m)?;
            let x = ctx.x();
            if ctx.element_order(&x) == ctx.group_order {
                return ctx.with_zeta(x);
            }
        }
        Err(Error::NoPrimitiveFound)
    }

    pub fn with_modulus(p: u64, n: u32, modulus: &[u64]) -> Result<Self> {
        Self::check_params(p, n)?;
        let deg = (3 * n) as usize;
        let mut m: Vec<u64> = modulus.iter().map(|&c| c % p).collect();
        poly_trim(&mut m);
        if m.len() != deg + 1 {
            return Err(Error::WrongDegree {
                expected: deg,
                got: m.len().saturating_sub(1),
            });
        }
        if *m.last().unwrap() != 1 {
            return Err(Error::BadInput("modulus must be monic".into()));
        }
        if !poly_is_irreducible(&m, p) {
            return Err(Error::ReducibleModulus { p });
        }
        let ctx = Self::assemble(p, n, m)?;
        // Smallest primitive element in counting order on coefficient vectors.
        for val in 1..p.pow(deg as u32) {
            let mut coeffs = vec![0u64; deg];
            let mut rest = val;
            for slot in coeffs.iter_mut() {
                *slot = rest % p;
                rest /= p;
            }
            let cand = FieldElem(coeffs);
            if ctx.element_order(&cand) == ctx.group_order {
                return ctx.with_zeta(cand);
            }
        }
        Err(Error::NoPrimitiveFound)
    }

    fn check_params(p: u64, n: u32) -> Result<()> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if n == 0 {
            return Err(Error::BadInput("n must be at least 1".into()));
        }
        // 3n-degree element tables must stay enumerable.
        if p.checked_pow(3 * n).is_none() || p.pow(3 * n) > 1 << 24 {
            return Err(Error::BadInput(format!("field GF({p}^{}) too large", 3 * n)));
        }
        Ok(())
    }

    fn assemble(p: u64, n: u32, modulus: Vec<u64>) -> Result<Self> {
        let q = p.pow(n);
        Ok(FieldCtx {
            p,
            n,
            q,
            ext_degree: (3 * n) as usize,
            modulus,
            zeta: FieldElem(Vec::new()), // placeholder until with_zeta
            group_order: q * q * q - 1,
        })
    }

    fn with_zeta(mut self, zeta: FieldElem) -> Result<Self> {
        if self.element_order(&zeta) != self.group_order {
            return Err(Error::NoPrimitiveFound);
        }
        self.zeta = zeta;
        Ok(self)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    /// q² + q + 1, the modulus of the exponent ring every difference set lives in.
    pub fn v(&self) -> u64 {
        self.q * self.q + self.q + 1
    }
    pub fn group_order(&self) -> u64 {
        self.group_order
    }
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }
    pub fn zeta(&self) -> &FieldElem {
        &self.zeta
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(vec![0; self.ext_degree])
    }

    pub fn one(&self) -> FieldElem {
        let mut c = vec![0; self.ext_degree];
        c[0] = 1;
        FieldElem(c)
    }

    /// The residue class of the polynomial variable.
    pub fn x(&self) -> FieldElem {
        let mut c = vec![0; self.ext_degree];
        if self.ext_degree > 1 {
            c[1] = 1;
        }
        FieldElem(c)
    }

    /// Validates and canonically reduces a raw coefficient vector.
    pub fn elem(&self, coeffs: &[u64]) -> Result<FieldElem> {
        if coeffs.len() > self.ext_degree {
            return Err(Error::WrongDegree {
                expected: self.ext_degree,
                got: coeffs.len(),
            });
        }
        let mut c: Vec<u64> = coeffs.iter().map(|&x| x % self.p).collect();
        c.resize(self.ext_degree, 0);
        Ok(FieldElem(c))
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| (x + y) % self.p)
                .collect(),
        )
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| (x + self.p - y) % self.p)
                .collect(),
        )
    }

    pub fn scalar_mul(&self, c: u64, a: &FieldElem) -> FieldElem {
        let c = c % self.p;
        FieldElem(a.0.iter().map(|&x| (x * c) % self.p).collect())
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let prod = poly_mul(&a.0, &b.0, self.p);
        let mut r = poly_rem(&prod, &self.modulus, self.p);
        r.resize(self.ext_degree, 0);
        FieldElem(r)
    }

    pub fn pow(&self, a: &FieldElem, mut e: u64) -> FieldElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative order; 0 is mapped to 0 so callers can use it as a
    /// "not a unit" sentinel.
    pub fn element_order(&self, a: &FieldElem) -> u64 {
        if a.is_zero() {
            return 0;
        }
        let mut ord = self.group_order;
        for r in distinct_prime_factors(self.group_order) {
            while ord.is_multiple_of(r) && self.pow(a, ord / r) == self.one() {
                ord /= r;
            }
        }
        ord
    }

    /// Relative trace to GF(q): a + a^q + a^{q²}.
    pub fn trace_rel(&self, a: &FieldElem) -> FieldElem {
        let aq = self.pow(a, self.q);
        let aq2 = self.pow(&aq, self.q);
        self.add(&self.add(a, &aq), &aq2)
    }

    /// Membership in the subfield GF(q), i.e. a^q = a.
    pub fn in_base_field(&self, a: &FieldElem) -> bool {
        self.pow(a, self.q) == *a
    }

    /// All q elements of the subfield GF(q): zero plus the powers of
    /// zeta^(q²+q+1), which generates the subfield units.
    pub fn base_field_elements(&self) -> Vec<FieldElem> {
        let gen = self.pow(&self.zeta, self.v());
        let mut out = vec![self.zero()];
        let mut cur = self.one();
        for _ in 0..self.q - 1 {
            out.push(cur.clone());
            cur = self.mul(&cur, &gen);
        }
        out
    }

    /// exponent table: coefficient vector of zeta^e  ->  e, for e in
    /// 0..group_order. Complete over the nonzero elements.
    pub fn discrete_log_table(&self) -> BTreeMap<Vec<u64>, u64> {
        let mut table = BTreeMap::new();
        let mut cur = self.one();
        for e in 0..self.group_order {
            table.insert(cur.0.clone(), e);
            cur = self.mul(&cur, &self.zeta);
        }
        table
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_modulus_q2_is_x3_x_1() {
        let ctx = make_field(2, 1, None).unwrap();
        assert_eq!(ctx.modulus(), &[1, 1, 0, 1]);
        assert_eq!(ctx.zeta(), &ctx.x());
        assert_eq!(ctx.q(), 2);
        assert_eq!(ctx.v(), 7);
        assert_eq!(ctx.group_order(), 7);
    }

    #[test]
    fn explicit_modulus_matches_default_q2() {
        let a = make_field(2, 1, None).unwrap();
        let b = make_field(2, 1, Some(&[1, 1, 0, 1])).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zeta_order_by_brute_force_multiplication() {
        for (p, n) in [(2u64, 1u32), (3, 1), (2, 2), (5, 1)] {
            let ctx = make_field(p, n, None).unwrap();
            let mut cur = ctx.zeta().clone();
            let mut steps = 1u64;
            while cur != ctx.one() {
                cur = ctx.mul(&cur, ctx.zeta());
                steps += 1;
                assert!(steps <= ctx.group_order());
            }
            assert_eq!(steps, ctx.group_order());
        }
    }

    #[test]
    fn gf64_zeta_has_order_63() {
        let ctx = make_field(2, 2, None).unwrap();
        assert_eq!(ctx.group_order(), 63);
        assert_eq!(ctx.element_order(ctx.zeta()), 63);
    }

    #[test]
    fn trace_values_q2_hand_checked() {
        // Over x³+x+1: Tr(ζ) = ζ + ζ² + ζ⁴ = 0 while Tr(1) = 3 = 1.
        let ctx = make_field(2, 1, None).unwrap();
        assert!(ctx.trace_rel(&ctx.x()).is_zero());
        assert_eq!(ctx.trace_rel(&ctx.one()), ctx.one());
        assert!(ctx.trace_rel(&ctx.zero()).is_zero());
    }

    #[test]
    fn trace_lands_in_base_field_exhaustively() {
        for (p, n) in [(2u64, 1u32), (3, 1), (2, 2)] {
            let ctx = make_field(p, n, None).unwrap();
            let mut cur = ctx.one();
            for _ in 0..ctx.group_order() {
                let t = ctx.trace_rel(&cur);
                assert!(ctx.in_base_field(&t));
                // Frobenius invariance: Tr(a^q) = Tr(a).
                assert_eq!(ctx.trace_rel(&ctx.pow(&cur, ctx.q())), t);
                cur = ctx.mul(&cur, ctx.zeta());
            }
        }
    }

    #[test]
    fn trace_is_additive() {
        let ctx = make_field(3, 1, None).unwrap();
        let all: Vec<FieldElem> = {
            let mut v = vec![ctx.zero()];
            let mut cur = ctx.one();
            for _ in 0..ctx.group_order() {
                v.push(cur.clone());
                cur = ctx.mul(&cur, ctx.zeta());
            }
            v
        };
        for a in all.iter().step_by(3) {
            for b in all.iter().step_by(5) {
                assert_eq!(
                    ctx.trace_rel(&ctx.add(a, b)),
                    ctx.add(&ctx.trace_rel(a), &ctx.trace_rel(b))
                );
            }
        }
    }

    #[test]
    fn dlog_table_q2() {
        let ctx = make_field(2, 1, None).unwrap();
        let table = ctx.discrete_log_table();
        assert_eq!(table.len(), 7);
        assert_eq!(table[&ctx.one().0], 0);
        // ζ³ = ζ + 1 over x³+x+1.
        assert_eq!(table[&vec![1, 1, 0]], 3);
    }

    #[test]
    fn base_field_elements_are_the_subfield() {
        let ctx = make_field(2, 2, None).unwrap();
        let sub = ctx.base_field_elements();
        assert_eq!(sub.len(), 4);
        for a in &sub {
            assert!(ctx.in_base_field(a));
        }
        // Closed under multiplication; exactly the a with a^q = a.
        let mut count = 1; // zero
        let mut cur = ctx.one();
        for _ in 0..ctx.group_order() {
            if ctx.in_base_field(&cur) {
                count += 1;
            }
            cur = ctx.mul(&cur, ctx.zeta());
        }
        assert_eq!(count, 4);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(make_field(4, 1, None), Err(Error::NonPrime(4))));
        assert!(matches!(
            make_field(2, 1, Some(&[1, 0, 0, 1])), // x³+1 = (x+1)(x²+x+1)
            Err(Error::ReducibleModulus { .. })
        ));
        assert!(matches!(
            make_field(2, 1, Some(&[1, 1, 1])),
            Err(Error::WrongDegree { .. })
        ));
    }

    #[test]
    fn field_ctx_round_trips_through_json() {
        let ctx = make_field(3, 1, None).unwrap();
        let text = serde_json::to_string(&ctx).unwrap();
        let back: FieldCtx = serde_json::from_str(&text).unwrap();
        assert_eq!(ctx, back);
        for key in ["\"p\"", "\"n\"", "\"modulus\"", "\"zeta\""] {
            assert!(text.contains(key), "missing {key} in {text}");
        }
    }

    #[test]
    fn prime_power_splits() {
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(13), Some((13, 1)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
    }
}
