//! Perfect difference sets D ⊂ Z/vZ with v = q²+q+1: every nonzero residue is
//! a difference of exactly one ordered pair of D. Construction from the field
//! side (trace-zero exponents, and exponents of the plane a + bζ), multiplier
//! analysis, and exhaustive enumeration of the sets fixed by x ↦ qx.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{self, FieldCtx};

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Units of Z/vZ, ascending, including 1.
pub fn units(v: u64) -> Vec<u64> {
    (1..v).filter(|&u| gcd(u, v) == 1).collect()
}

/// A verified perfect difference set of order q.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct DiffSet {
    q: u64,
    v: u64,
    elems: Vec<u64>,
}

#[derive(Deserialize)]
struct DiffSetWire {
    q: u64,
    v: u64,
    elems: Vec<u64>,
}

impl<'de> Deserialize<'de> for DiffSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = DiffSetWire::deserialize(d)?;
        let set = DiffSet::new(w.q, &w.elems).map_err(serde::de::Error::custom)?;
        if set.v != w.v {
            return Err(serde::de::Error::custom(format!(
                "v = {} does not match q²+q+1 = {}",
                w.v, set.v
            )));
        }
        Ok(set)
    }
}

impl DiffSet {
    /// Validates order, size and the λ = 1 difference property.
    pub fn new(q: u64, elems: &[u64]) -> Result<Self> {
        if gf::prime_power(q).is_none() {
            return Err(Error::NotPrimePower(q));
        }
        let check = verify_pds(elems, q);
        if !check.ok {
            return Err(Error::NotAPds {
                reason: check.reason(),
            });
        }
        let v = q * q + q + 1;
        let mut sorted: Vec<u64> = elems.iter().map(|&e| e % v).collect();
        sorted.sort_unstable();
        Ok(DiffSet { q, v, elems: sorted })
    }

    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn v(&self) -> u64 {
        self.v
    }
    pub fn k(&self) -> u64 {
        self.q + 1
    }
    pub fn elems(&self) -> &[u64] {
        &self.elems
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elems.binary_search(&(x % self.v)).is_ok()
    }

    pub fn shift(&self, s: u64) -> DiffSet {
        let mut elems: Vec<u64> = self.elems.iter().map(|&d| (d + s) % self.v).collect();
        elems.sort_unstable();
        DiffSet {
            q: self.q,
            v: self.v,
            elems,
        }
    }

    pub fn scale(&self, u: u64) -> DiffSet {
        let mut elems: Vec<u64> = self.elems.iter().map(|&d| (d * u) % self.v).collect();
        elems.sort_unstable();
        DiffSet {
            q: self.q,
            v: self.v,
            elems,
        }
    }

    pub fn is_fixed_by(&self, m: u64) -> bool {
        self.scale(m).elems == self.elems
    }
}

/// Difference-coverage certificate for a candidate set.
#[derive(Debug, Clone, Serialize)]
pub struct PdsCheck {
    pub ok: bool,
    pub q: u64,
    pub v: u64,
    pub expected_size: u64,
    pub actual_size: u64,
    /// Nonzero residues never hit as a difference.
    pub missing: Vec<u64>,
    /// Nonzero residues hit more than once.
    pub duplicated: Vec<u64>,
}

impl PdsCheck {
    pub fn reason(&self) -> String {
        if self.actual_size != self.expected_size {
            format!(
                "size {} but a set of order {} needs q+1 = {}",
                self.actual_size, self.q, self.expected_size
            )
        } else {
            format!(
                "{} residues missing, {} duplicated",
                self.missing.len(),
                self.duplicated.len()
            )
        }
    }
}

/// Checks |cand| = q+1 and that the (q+1)q ordered differences cover
/// Z/vZ \ {0} exactly once. Entries are read mod v and deduplicated.
pub fn verify_pds(cand: &[u64], q: u64) -> PdsCheck {
    let v = q * q + q + 1;
    let set: BTreeSet<u64> = cand.iter().map(|&e| e % v).collect();
    let elems: Vec<u64> = set.into_iter().collect();
    let mut counts = vec![0u32; v as usize];
    for &a in &elems {
        for &b in &elems {
            if a != b {
                counts[((a + v - b) % v) as usize] += 1;
            }
        }
    }
    let missing: Vec<u64> = (1..v).filter(|&d| counts[d as usize] == 0).collect();
    let duplicated: Vec<u64> = (1..v).filter(|&d| counts[d as usize] > 1).collect();
    let actual_size = elems.len() as u64;
    PdsCheck {
        ok: actual_size == q + 1 && missing.is_empty() && duplicated.is_empty(),
        q,
        v,
        expected_size: q + 1,
        actual_size,
        missing,
        duplicated,
    }
}

/// Exponents d with Tr(ζ^d) = 0, scanned over 0..v. Tr(ζ^{d+v}) is a GF(q)ˣ
/// multiple of Tr(ζ^d), so the zero set is well defined mod v. The result is
/// always fixed by q.
pub fn singer_trace_pds(ctx: &FieldCtx) -> Result<DiffSet> {
    let v = ctx.v();
    let mut elems = Vec::new();
    let mut power = ctx.one();
    for d in 0..v {
        if ctx.trace_rel(&power).is_zero() {
            elems.push(d);
        }
        power = ctx.mul(&power, ctx.zeta());
    }
    let set = DiffSet::new(ctx.q(), &elems).map_err(|e| {
        Error::Internal(format!("trace-zero exponent set failed validation: {e}"))
    })?;
    if !set.is_fixed_by(ctx.q()) {
        return Err(Error::Internal(
            "trace-zero exponent set is not fixed by q".into(),
        ));
    }
    Ok(set)
}

/// Exponents mod v of the nonzero elements a + bζ with a, b ∈ GF(q), one
/// representative per GF(q)ˣ scalar class. Gives q+1 residues.
pub fn halberstam_laxton_pds(ctx: &FieldCtx) -> Result<DiffSet> {
    let v = ctx.v();
    let table = ctx.discrete_log_table();
    let base = ctx.base_field_elements();
    let mut residues = BTreeSet::new();
    for a in &base {
        for b in &base {
            if a.is_zero() && b.is_zero() {
                continue;
            }
            let elem = ctx.add(a, &ctx.mul(b, ctx.zeta()));
            let e = *table
                .get(&elem.0)
                .ok_or_else(|| Error::Internal("a + bζ missing from the log table".into()))?;
            residues.insert(e % v);
        }
    }
    let elems: Vec<u64> = residues.into_iter().collect();
    DiffSet::new(ctx.q(), &elems)
        .map_err(|e| Error::Internal(format!("span exponent set failed validation: {e}")))
}

/// m is a multiplier when mD = D + s for some (then unique) shift s.
fn multiplier_shift(d: &DiffSet, m: u64) -> Option<u64> {
    let scaled = d.scale(m);
    let s = (scaled.elems[0] + d.v - d.elems[0]) % d.v;
    // A match must align some element with the least scaled element; try all
    // alignments, cheapest first.
    for &base in &d.elems {
        let cand = (scaled.elems[0] + d.v - base) % d.v;
        if d.shift(cand).elems == scaled.elems {
            return Some(cand);
        }
    }
    let _ = s;
    None
}

#[derive(Debug, Clone, Serialize)]
pub struct MultiplierReport {
    pub q: u64,
    pub v: u64,
    pub base: Vec<u64>,
    /// (m, s) with mD = D + s, ascending in m, m > 1.
    pub multipliers: Vec<(u64, u64)>,
    /// The m with shift 0.
    pub fixed_by: Vec<u64>,
}

/// All multipliers of D with their shifts. p and q are guaranteed multipliers
/// of any perfect difference set of order q = pⁿ; their absence would mean a
/// broken input, so it is reported as an internal error.
pub fn multiplier_report(d: &DiffSet) -> Result<MultiplierReport> {
    let mut multipliers = Vec::new();
    for m in units(d.v) {
        if m == 1 {
            continue;
        }
        if let Some(s) = multiplier_shift(d, m) {
            multipliers.push((m, s));
        }
    }
    let fixed_by: Vec<u64> = multipliers
        .iter()
        .filter(|&&(_, s)| s == 0)
        .map(|&(m, _)| m)
        .collect();
    let (p, _) = gf::prime_power(d.q).ok_or(Error::NotPrimePower(d.q))?;
    for required in [p, d.q] {
        if required > 1 && !multipliers.iter().any(|&(m, _)| m == required) {
            return Err(Error::Internal(format!(
                "{required} is not a multiplier of {:?}",
                d.elems
            )));
        }
    }
    Ok(MultiplierReport {
        q: d.q,
        v: d.v,
        base: d.elems.clone(),
        multipliers,
        fixed_by,
    })
}

/// Shifts s with m(D+s) = D+s. There are always exactly gcd(m-1, v) of them
/// when m is a multiplier; NotAMultiplier otherwise.
pub fn fixed_shifts(d: &DiffSet, m: u64) -> Result<Vec<u64>> {
    if gcd(m, d.v) != 1 || multiplier_shift(d, m).is_none() {
        return Err(Error::NotAMultiplier { m });
    }
    Ok((0..d.v)
        .filter(|&s| {
            let shifted = d.shift(s);
            shifted.scale(m).elems == shifted.elems
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FixedShiftBranch {
    /// q ≡ 0 (mod 3)
    QDivisibleBy3,
    /// q ≡ 2 (mod 3)
    Q2Mod3,
    /// q ≡ 1 (mod 3), p ≡ 2 (mod 3)
    Q1Mod3P2Mod3,
    /// q ≡ 1 (mod 3), p ≡ 1 (mod 3)
    Q1Mod3P1Mod3,
}

#[derive(Debug, Clone, Serialize)]
pub struct FixedByAllReport {
    pub q: u64,
    pub p: u64,
    /// Number of shifts s such that D+s is fixed by every multiplier: 1 or 3.
    pub count: u64,
    pub branch: FixedShiftBranch,
}

/// How many shift classes of a perfect difference set of order q are fixed by
/// all multipliers simultaneously: three exactly when q ≡ 1 and p ≡ 1 (mod 3),
/// one otherwise.
pub fn classify_fixed_by_all(q: u64) -> Result<FixedByAllReport> {
    let (p, _) = gf::prime_power(q).ok_or(Error::NotPrimePower(q))?;
    let (count, branch) = match (q % 3, p % 3) {
        (0, _) => (1, FixedShiftBranch::QDivisibleBy3),
        (2, _) => (1, FixedShiftBranch::Q2Mod3),
        (1, 2) => (1, FixedShiftBranch::Q1Mod3P2Mod3),
        (1, 1) => (3, FixedShiftBranch::Q1Mod3P1Mod3),
        _ => {
            return Err(Error::Internal(format!(
                "impossible congruence pair q = {q}, p = {p}"
            )))
        }
    };
    Ok(FixedByAllReport {
        q,
        p,
        count,
        branch,
    })
}

/// Orbits of x ↦ qx on Z/vZ. Every orbit has size 1 or 3 because q³ ≡ 1 mod v.
pub fn q_orbits(q: u64) -> (Vec<u64>, Vec<[u64; 3]>) {
    let v = q * q + q + 1;
    let mut seen = vec![false; v as usize];
    let mut fixed = Vec::new();
    let mut triples = Vec::new();
    for x in 0..v {
        if seen[x as usize] {
            continue;
        }
        let a = x;
        let b = (a * q) % v;
        let c = (b * q) % v;
        seen[a as usize] = true;
        if b == a {
            fixed.push(a);
        } else {
            seen[b as usize] = true;
            seen[c as usize] = true;
            triples.push([a, b, c]);
        }
    }
    (fixed, triples)
}

/// Every perfect difference set of order q fixed by multiplication by q,
/// found by exact search over unions of q-orbits with difference-collision
/// pruning. Output is sorted lexicographically.
pub fn enumerate_pds_fixed_by_q(q: u64) -> Result<Vec<DiffSet>> {
    if gf::prime_power(q).is_none() {
        return Err(Error::NotPrimePower(q));
    }
    let v = q * q + q + 1;
    let k = (q + 1) as usize;
    let (fixed, triples) = q_orbits(q);
    // Orbits as element lists, fixed points first; x = 0 can never join a
    // difference set with another element twice, but the search prunes that
    // naturally.
    let mut orbits: Vec<Vec<u64>> = fixed.iter().map(|&f| vec![f]).collect();
    orbits.extend(triples.iter().map(|t| t.to_vec()));

    struct Search {
        v: u64,
        k: usize,
        orbits: Vec<Vec<u64>>,
        chosen: Vec<u64>,
        diff_seen: Vec<bool>,
        out: Vec<Vec<u64>>,
    }
    impl Search {
        fn run(&mut self, idx: usize) {
            if self.chosen.len() == self.k {
                let mut elems = self.chosen.clone();
                elems.sort_unstable();
                self.out.push(elems);
                return;
            }
            if idx == self.orbits.len() {
                return;
            }
            let remaining: usize = self.orbits[idx..].iter().map(|o| o.len()).sum();
            if self.chosen.len() + remaining < self.k {
                return;
            }
            // Take orbit idx if it fits without killing λ = 1.
            let orbit = self.orbits[idx].clone();
            if self.chosen.len() + orbit.len() <= self.k {
                let mut marked: Vec<usize> = Vec::new();
                let mut ok = true;
                'mark: for (i, &x) in orbit.iter().enumerate() {
                    for &y in self.chosen.iter().chain(orbit[..i].iter()) {
                        let d1 = ((x + self.v - y) % self.v) as usize;
                        let d2 = ((y + self.v - x) % self.v) as usize;
                        if self.diff_seen[d1] || self.diff_seen[d2] {
                            ok = false;
                            break 'mark;
                        }
                        self.diff_seen[d1] = true;
                        self.diff_seen[d2] = true;
                        marked.push(d1);
                        marked.push(d2);
                    }
                }
                if ok {
                    self.chosen.extend_from_slice(&orbit);
                    self.run(idx + 1);
                    self.chosen.truncate(self.chosen.len() - orbit.len());
                }
                for m in marked {
                    self.diff_seen[m] = false;
                }
            }
            self.run(idx + 1);
        }
    }

    let mut search = Search {
        v,
        k,
        orbits,
        chosen: Vec::new(),
        diff_seen: vec![false; v as usize],
        out: Vec::new(),
    };
    search.run(0);
    search.out.sort();
    let mut result = Vec::new();
    for elems in search.out {
        let set = DiffSet::new(q, &elems)
            .map_err(|e| Error::Internal(format!("search emitted a non-PDS: {e}")))?;
        if !set.is_fixed_by(q) {
            return Err(Error::Internal("search emitted a set not fixed by q".into()));
        }
        result.push(set);
    }
    Ok(result)
}

/// Lexicographically least (u, s) with u·D1 + s = D2, scanning units in
/// ascending order and shifts within each unit.
pub fn find_transformation(d1: &DiffSet, d2: &DiffSet) -> Result<(u64, u64)> {
    if d1.q != d2.q {
        return Err(Error::BadInput(format!(
            "orders differ: {} vs {}",
            d1.q, d2.q
        )));
    }
    for u in units(d1.v) {
        let scaled = d1.scale(u);
        for s in 0..d1.v {
            if scaled.shift(s).elems == d2.elems {
                return Ok((u, s));
            }
        }
    }
    Err(Error::NotRelated)
}
