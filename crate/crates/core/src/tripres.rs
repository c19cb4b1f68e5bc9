//! Triangle presentations over the cyclic plane.
//!
//! A triangle presentation compatible with a point-line correspondence
//! `alpha` is a set of ordered triples over Z/vZ that is closed under
//! rotation and extends each incident pair (a, b) with b on line alpha(a)
//! to exactly one triple (a, b, c). The full set has v(q+1) triples; we
//! store one lexicographically least representative per rotation class.
//!
//! Construction from a difference set fixed by q: each multiplication
//! orbit <d, md, m^2 d> of D (m is q or q^2, chosen per orbit) spawns the
//! v triples (j, j+d, j+d+md). Everything downstream (group relators,
//! links, exports) is derived from these classes.

use std::collections::{BTreeMap, BTreeSet};

use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::pds::{units, DiffSet};
use crate::plane::{build_plane, CyclicPlane};

/// All three rotations of a triple, starting with the triple itself.
pub fn rotations(t: [u64; 3]) -> [[u64; 3]; 3] {
    [t, [t[1], t[2], t[0]], [t[2], t[0], t[1]]]
}

/// Lexicographically least rotation, the canonical class representative.
pub fn canonical_rotation(t: [u64; 3]) -> [u64; 3] {
    *rotations(t).iter().min().unwrap()
}

/// Point-line correspondence: a bijection sending point a to the line
/// with index table[a] of a fixed cyclic plane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alpha {
    plane: CyclicPlane,
    table: Vec<u64>,
}

impl Alpha {
    pub fn new(plane: CyclicPlane, table: Vec<u64>) -> Result<Self> {
        let v = plane.v();
        if table.len() as u64 != v {
            return Err(Error::BadInput(format!(
                "alpha table has {} entries, expected v = {}",
                table.len(),
                v
            )));
        }
        let mut seen = table.clone();
        seen.sort_unstable();
        if seen.iter().enumerate().any(|(i, &x)| x != i as u64) {
            return Err(Error::BadInput(
                "alpha table is not a bijection on Z/vZ".into(),
            ));
        }
        Ok(Alpha { plane, table })
    }

    /// The correspondence alpha(i) = line i used by constructed presentations.
    pub fn identity(plane: CyclicPlane) -> Self {
        let table = (0..plane.v()).collect();
        Alpha { plane, table }
    }

    pub fn q(&self) -> u64 {
        self.plane.q()
    }

    pub fn v(&self) -> u64 {
        self.plane.v()
    }

    pub fn plane(&self) -> &CyclicPlane {
        &self.plane
    }

    pub fn table(&self) -> &[u64] {
        &self.table
    }

    /// Line index assigned to point a.
    pub fn of(&self, a: u64) -> u64 {
        self.table[a as usize]
    }

    /// The points of line alpha(a), sorted.
    pub fn point_set(&self, a: u64) -> Vec<u64> {
        self.plane.line(self.of(a))
    }

    /// Whether b lies on line alpha(a).
    pub fn admits(&self, a: u64, b: u64) -> bool {
        self.plane.incident(b, self.of(a))
    }
}

/// One violated condition, with the witness that exhibits it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Violation {
    /// Incident pair (a, b) has no extension (condition 1, coverage half).
    MissingPair { a: u64, b: u64 },
    /// Triple (a, b, z) exists but b is not on line alpha(a) (condition 1).
    ExtraPair { a: u64, b: u64, z: u64 },
    /// Pair (a, b) extends to two distinct triples (condition 3).
    AmbiguousPair { a: u64, b: u64, z1: u64, z2: u64 },
    /// A rotation of this triple is absent (condition 2).
    NotRotationClosed { triple: [u64; 3] },
}

/// Exhaustive verdict for a candidate triple set against an alpha.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub q: u64,
    pub v: u64,
    pub triple_count: usize,
    pub expected_triples: u64,
    pub ok: bool,
    pub violations: Vec<Violation>,
}

/// Checks the three triangle presentation conditions on `triples`, taken
/// literally as a set (no rotation closure is added on the caller's behalf).
pub fn verify(triples: &[[u64; 3]], alpha: &Alpha) -> Result<VerifyReport> {
    let v = alpha.v();
    for t in triples {
        if t.iter().any(|&x| x >= v) {
            return Err(Error::BadInput(format!(
                "triple {t:?} has an entry outside Z/{v}Z"
            )));
        }
    }
    let set: BTreeSet<[u64; 3]> = triples.iter().copied().collect();
    let mut violations = Vec::new();

    for &t in &set {
        if rotations(t).iter().any(|r| !set.contains(r)) {
            violations.push(Violation::NotRotationClosed { triple: t });
        }
    }

    let mut by_pair: BTreeMap<(u64, u64), Vec<u64>> = BTreeMap::new();
    for &[a, b, c] in &set {
        by_pair.entry((a, b)).or_default().push(c);
    }
    for a in 0..v {
        for b in alpha.point_set(a) {
            match by_pair.get(&(a, b)) {
                None => violations.push(Violation::MissingPair { a, b }),
                Some(zs) if zs.len() > 1 => violations.push(Violation::AmbiguousPair {
                    a,
                    b,
                    z1: zs[0],
                    z2: zs[1],
                }),
                Some(_) => {}
            }
        }
    }
    for (&(a, b), zs) in &by_pair {
        if !alpha.admits(a, b) {
            violations.push(Violation::ExtraPair { a, b, z: zs[0] });
        }
    }

    Ok(VerifyReport {
        q: alpha.q(),
        v,
        triple_count: set.len(),
        expected_triples: v * (alpha.q() + 1),
        ok: violations.is_empty(),
        violations,
    })
}

/// A verified triangle presentation: canonical rotation-class
/// representatives plus the alpha they are compatible with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrianglePres {
    alpha: Alpha,
    classes: Vec<[u64; 3]>,
}

impl TrianglePres {
    /// Wraps classes after checking them against alpha. Input triples may
    /// be given in any rotation; they are canonicalized and deduplicated.
    pub fn new(alpha: Alpha, classes: &[[u64; 3]]) -> Result<Self> {
        let canon: BTreeSet<[u64; 3]> =
            classes.iter().map(|&t| canonical_rotation(t)).collect();
        let classes: Vec<[u64; 3]> = canon.into_iter().collect();
        let full = full_closure(&classes);
        let report = verify(&full, &alpha)?;
        if !report.ok {
            return Err(Error::BadInput(format!(
                "classes do not form a triangle presentation; first violation: {:?}",
                report.violations[0]
            )));
        }
        Ok(TrianglePres { alpha, classes })
    }

    pub fn q(&self) -> u64 {
        self.alpha.q()
    }

    pub fn v(&self) -> u64 {
        self.alpha.v()
    }

    pub fn alpha(&self) -> &Alpha {
        &self.alpha
    }

    /// Canonical class representatives, sorted.
    pub fn classes(&self) -> &[[u64; 3]] {
        &self.classes
    }

    /// The rotation closure, sorted: v(q+1) ordered triples.
    pub fn full(&self) -> Vec<[u64; 3]> {
        full_closure(&self.classes)
    }

    pub fn contains(&self, t: [u64; 3]) -> bool {
        self.classes.binary_search(&canonical_rotation(t)).is_ok()
    }

    /// Whether i -> i+1 maps the presentation onto itself. Constructed
    /// presentations always are, by the j-indexing of their families.
    pub fn is_shift_invariant(&self) -> bool {
        let v = self.v();
        self.classes.iter().all(|&[x, y, z]| {
            self.contains([(x + 1) % v, (y + 1) % v, (z + 1) % v])
        })
    }

    /// Whether i -> q*i maps the presentation onto itself.
    pub fn is_s_invariant(&self) -> bool {
        let q = self.q();
        let v = self.v();
        self.classes.iter().all(|&[x, y, z]| {
            self.contains([(q * x) % v, (q * y) % v, (q * z) % v])
        })
    }
}

fn full_closure(classes: &[[u64; 3]]) -> Vec<[u64; 3]> {
    let mut full: BTreeSet<[u64; 3]> = BTreeSet::new();
    for &t in classes {
        for r in rotations(t) {
            full.insert(r);
        }
    }
    full.into_iter().collect()
}

#[derive(Serialize, Deserialize)]
struct TrianglePresWire {
    q: u64,
    alpha: Vec<u64>,
    classes: Vec<[u64; 3]>,
}

impl Serialize for TrianglePres {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        TrianglePresWire {
            q: self.q(),
            alpha: self.alpha.table().to_vec(),
            classes: self.classes.clone(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for TrianglePres {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let wire = TrianglePresWire::deserialize(de)?;
        let v = wire.q * wire.q + wire.q + 1;
        if wire.alpha.len() as u64 != v {
            return Err(D::Error::custom(format!(
                "alpha table has {} entries, expected {}",
                wire.alpha.len(),
                v
            )));
        }
        // The base line is recoverable: the points b with (0, b, _) in the
        // full set form line alpha(0) = table[0] + D.
        let full = full_closure(&wire.classes);
        let through_zero: Vec<u64> = full
            .iter()
            .filter(|t| t[0] == 0)
            .map(|t| (t[1] + v - wire.alpha[0] % v) % v)
            .collect();
        let base = DiffSet::new(wire.q, &through_zero).map_err(D::Error::custom)?;
        let plane = build_plane(&base).map_err(D::Error::custom)?;
        let alpha = Alpha::new(plane, wire.alpha).map_err(D::Error::custom)?;
        TrianglePres::new(alpha, &wire.classes).map_err(D::Error::custom)
    }
}

/// Per-orbit choice of the multiplier m used in the construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MChoice {
    /// m = q on every orbit.
    AllQ,
    /// m = q^2 on every orbit.
    AllQSq,
    /// Explicit choice per 3-orbit (in order of least element);
    /// true picks q^2. Fixed points need no choice.
    Mask(Vec<bool>),
}

impl MChoice {
    fn pick(&self, orbit_idx: usize) -> bool {
        match self {
            MChoice::AllQ => false,
            MChoice::AllQSq => true,
            MChoice::Mask(bits) => bits[orbit_idx],
        }
    }

    /// Whether both m = q and m = q^2 appear among the 3-orbit choices.
    pub fn is_mixed(&self, orbit_count: usize) -> bool {
        match self {
            MChoice::Mask(bits) => {
                let bits = &bits[..orbit_count.min(bits.len())];
                bits.contains(&true) && bits.contains(&false)
            }
            _ => false,
        }
    }
}

/// The multiplication-by-q orbit structure of a difference set fixed by q.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitDecomp {
    pub q: u64,
    pub v: u64,
    /// Elements with qd = d, ascending.
    pub fixed_points: Vec<u64>,
    /// 3-orbits as <d, md, m^2 d> in the chosen order, least element first.
    pub triples: Vec<[u64; 3]>,
    /// The m (q or q^2 mod v) used to order each entry of `triples`.
    pub ms: Vec<u64>,
}

impl OrbitDecomp {
    /// Number of fixed points.
    pub fn f(&self) -> usize {
        self.fixed_points.len()
    }

    /// Number of 3-orbits.
    pub fn t(&self) -> usize {
        self.triples.len()
    }
}

/// Orbit decomposition with the default ordering m = q everywhere.
pub fn orbit_decompose(d: &DiffSet) -> Result<OrbitDecomp> {
    orbit_decompose_with(d, &MChoice::AllQ)
}

/// Orbit decomposition with an explicit per-orbit ordering choice.
pub fn orbit_decompose_with(d: &DiffSet, choice: &MChoice) -> Result<OrbitDecomp> {
    let q = d.q();
    let v = d.v();
    if !d.is_fixed_by(q) {
        return Err(Error::NotFixedByQ { q });
    }
    let mut fixed_points = Vec::new();
    let mut orbit_reps = Vec::new();
    let mut seen = BTreeSet::new();
    for &e in d.elems() {
        if seen.contains(&e) {
            continue;
        }
        let orbit = [e, (q * e) % v, (q * q * e) % v];
        seen.extend(orbit);
        if orbit[1] == orbit[0] {
            fixed_points.push(e);
        } else {
            orbit_reps.push(e);
        }
    }
    if let MChoice::Mask(bits) = choice {
        if bits.len() != orbit_reps.len() {
            return Err(Error::BadInput(format!(
                "m-choice mask has {} bits but the set has {} orbits of size 3",
                bits.len(),
                orbit_reps.len()
            )));
        }
    }
    let mut triples = Vec::new();
    let mut ms = Vec::new();
    for (i, &e) in orbit_reps.iter().enumerate() {
        let m = if choice.pick(i) { (q * q) % v } else { q };
        triples.push([e, (m * e) % v, (m * m % v) * e % v]);
        ms.push(m);
    }
    // Orbit sizes are 1 or 3 because q^3 = 1 mod v, so counts must tile k.
    if fixed_points.len() + 3 * triples.len() != (q + 1) as usize {
        return Err(Error::Internal(format!(
            "orbit sizes do not tile the set: f = {}, t = {}, k = {}",
            fixed_points.len(),
            triples.len(),
            q + 1
        )));
    }
    Ok(OrbitDecomp {
        q,
        v,
        fixed_points,
        triples,
        ms,
    })
}

/// Builds the triangle presentation of a difference set fixed by q.
///
/// Each orbit element e contributes the v triples (j, j+e, j+e+me) with m
/// the orbit's chosen multiplier; fixed points always contribute
/// (j, j+e, j+2e) since me = e there. The result is verified against
/// alpha(i) = line i before it is returned.
pub fn construct(d: &DiffSet, choice: &MChoice) -> Result<TrianglePres> {
    let dec = orbit_decompose_with(d, choice)?;
    let v = dec.v;
    let mut full = Vec::with_capacity((v * (dec.q + 1)) as usize);
    let mut push_family = |e: u64, me: u64| {
        for j in 0..v {
            full.push([j, (j + e) % v, (j + e + me) % v]);
        }
    };
    for &e in &dec.fixed_points {
        push_family(e, e);
    }
    for (orbit, &m) in dec.triples.iter().zip(&dec.ms) {
        for &e in orbit {
            push_family(e, (m * e) % v);
        }
    }
    let classes: BTreeSet<[u64; 3]> =
        full.iter().map(|&t| canonical_rotation(t)).collect();
    let plane = build_plane(d)?;
    let alpha = Alpha::identity(plane);
    let report = verify(&full, &alpha)?;
    if !report.ok {
        return Err(Error::Internal(format!(
            "constructed presentation failed verification: {:?}",
            report.violations[0]
        )));
    }
    Ok(TrianglePres {
        alpha,
        classes: classes.into_iter().collect(),
    })
}

/// Recovers alpha from a full (rotation-closed) triple set: alpha(a) is
/// the line whose points are the b's extending a. The plane is rebuilt
/// with base line alpha(0), so constructed presentations round-trip to
/// the identity table.
pub fn extract_alpha(triples: &[[u64; 3]]) -> Result<Alpha> {
    let set: BTreeSet<[u64; 3]> = triples.iter().copied().collect();
    if set.is_empty() {
        return Err(Error::BadInput("empty triple set".into()));
    }
    for &t in &set {
        if rotations(t).iter().any(|r| !set.contains(r)) {
            return Err(Error::BadInput(format!(
                "triple set is not rotation closed at {t:?}"
            )));
        }
    }
    let mut by_first: BTreeMap<u64, BTreeSet<u64>> = BTreeMap::new();
    let mut unique: BTreeMap<(u64, u64), u64> = BTreeMap::new();
    for &[a, b, c] in &set {
        by_first.entry(a).or_default().insert(b);
        if let Some(&prev) = unique.get(&(a, b)) {
            if prev != c {
                return Err(Error::BadInput(format!(
                    "pair ({a}, {b}) extends to both {prev} and {c}"
                )));
            }
        }
        unique.insert((a, b), c);
    }
    let v = by_first.len() as u64;
    let k = by_first.values().next().unwrap().len();
    if by_first.values().any(|s| s.len() != k) {
        return Err(Error::BadInput(
            "points extend to differently sized pair sets".into(),
        ));
    }
    let q = k as u64 - 1;
    if v != q * q + q + 1 || by_first.keys().copied().ne(0..v) {
        return Err(Error::BadInput(format!(
            "first coordinates do not fill Z/vZ for v = q^2+q+1 (q = {q})"
        )));
    }
    let base_pts: Vec<u64> = by_first[&0].iter().copied().collect();
    let base = DiffSet::new(q, &base_pts)?;
    let plane = build_plane(&base)?;
    let mut table = Vec::with_capacity(v as usize);
    for (a, bs) in &by_first {
        let pts: Vec<u64> = bs.iter().copied().collect();
        table.push(
            plane
                .line_index_of(&pts)
                .ok_or(Error::NotALine { point: *a })?,
        );
    }
    Alpha::new(plane, table)
}

/// All distinct presentations over the 2^t per-orbit m-choices, in mask
/// order with the all-q choice first. Every output shares one alpha.
pub fn enumerate_variants(d: &DiffSet) -> Result<Vec<TrianglePres>> {
    let t = orbit_decompose(d)?.t();
    let mut out: Vec<TrianglePres> = Vec::new();
    let mut seen: BTreeSet<Vec<[u64; 3]>> = BTreeSet::new();
    for mask in 0u32..(1 << t) {
        let bits: Vec<bool> = (0..t).map(|i| mask >> i & 1 == 1).collect();
        let pres = construct(d, &MChoice::Mask(bits))?;
        if seen.insert(pres.classes.clone()) {
            out.push(pres);
        }
    }
    Ok(out)
}

/// Every triangle presentation compatible with `alpha`, by exact cover of
/// the v(q+1) incident pairs with rotation classes. Exponential search,
/// guarded to q <= 3.
pub fn brute_force_all(alpha: &Alpha) -> Result<Vec<TrianglePres>> {
    let q = alpha.q();
    if q > 3 {
        return Err(Error::TooLarge(q));
    }
    let v = alpha.v();

    let mut pair_idx: BTreeMap<(u64, u64), usize> = BTreeMap::new();
    for a in 0..v {
        for b in alpha.point_set(a) {
            let next = pair_idx.len();
            pair_idx.insert((a, b), next);
        }
    }

    // A class is usable only if all three rotations extend incident pairs.
    let mut class_set: BTreeSet<[u64; 3]> = BTreeSet::new();
    for a in 0..v {
        for b in alpha.point_set(a) {
            for c in alpha.point_set(b) {
                if alpha.admits(c, a) {
                    class_set.insert(canonical_rotation([a, b, c]));
                }
            }
        }
    }
    let classes: Vec<[u64; 3]> = class_set.into_iter().collect();
    let covers: Vec<Vec<usize>> = classes
        .iter()
        .map(|&t| {
            let mut ids: Vec<usize> = rotations(t)
                .iter()
                .map(|r| pair_idx[&(r[0], r[1])])
                .collect();
            ids.sort_unstable();
            ids.dedup();
            ids
        })
        .collect();
    let mut by_pair: Vec<Vec<usize>> = vec![Vec::new(); pair_idx.len()];
    for (ci, ids) in covers.iter().enumerate() {
        for &id in ids {
            by_pair[id].push(ci);
        }
    }

    struct Search<'s> {
        covers: &'s [Vec<usize>],
        by_pair: &'s [Vec<usize>],
        covered: Vec<bool>,
        remaining: usize,
        chosen: Vec<usize>,
        solutions: Vec<Vec<usize>>,
    }
    impl Search<'_> {
        fn usable(&self, ci: usize) -> bool {
            self.covers[ci].iter().all(|&id| !self.covered[id])
        }
        fn run(&mut self) {
            if self.remaining == 0 {
                self.solutions.push(self.chosen.clone());
                return;
            }
            let pick = (0..self.covered.len())
                .filter(|&id| !self.covered[id])
                .min_by_key(|&id| {
                    self.by_pair[id].iter().filter(|&&ci| self.usable(ci)).count()
                })
                .unwrap();
            let options: Vec<usize> = self.by_pair[pick]
                .iter()
                .copied()
                .filter(|&ci| self.usable(ci))
                .collect();
            for ci in options {
                for &id in &self.covers[ci] {
                    self.covered[id] = true;
                }
                self.remaining -= self.covers[ci].len();
                self.chosen.push(ci);
                self.run();
                self.chosen.pop();
                self.remaining += self.covers[ci].len();
                for &id in &self.covers[ci] {
                    self.covered[id] = false;
                }
            }
        }
    }

    let mut search = Search {
        covers: &covers,
        by_pair: &by_pair,
        covered: vec![false; pair_idx.len()],
        remaining: pair_idx.len(),
        chosen: Vec::new(),
        solutions: Vec::new(),
    };
    search.run();

    let mut out = Vec::with_capacity(search.solutions.len());
    let mut sols = search.solutions;
    for sol in &mut sols {
        sol.sort_unstable();
    }
    sols.sort();
    for sol in sols {
        let picked: Vec<[u64; 3]> = sol.iter().map(|&ci| classes[ci]).collect();
        out.push(TrianglePres::new(alpha.clone(), &picked)?);
    }
    Ok(out)
}

/// A verified order-2 presentation that is not of the constructed form:
/// its correspondence sends i to line 2i over the plane of {1, 2, 4}, and
/// it contains triples (x, x, z) with z != x, which no constructed
/// presentation or image of one under the searched maps admits. Kept as
/// fixed cross-validation data for the verifier, alpha extraction, and
/// the link checker.
pub fn reference_q2() -> TrianglePres {
    let base = DiffSet::new(2, &[1, 2, 4]).expect("{1,2,4} is a difference set");
    let plane = build_plane(&base).expect("plane of order 2");
    let alpha = Alpha::new(plane, vec![0, 2, 4, 6, 1, 3, 5]).expect("2i table");
    let reps = [
        [3, 3, 1],
        [6, 6, 2],
        [5, 5, 4],
        [1, 4, 2],
        [0, 1, 6],
        [0, 2, 5],
        [0, 4, 3],
    ];
    TrianglePres::new(alpha, &reps).expect("reference classes verify")
}

/// Which of the two equivalence moves relates the presentations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EquivRoute {
    /// (x, y, z) -> (ux+a, uy+a, uz+a).
    Collineation,
    /// (x, y, z) -> (uz+a, uy+a, ux+a): a correlation with parameter
    /// c = -u composed with reversal, then shifted by a.
    CorrelationReverse,
}

/// A map taking one presentation's full triple set exactly onto another's.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EquivWitness {
    pub route: EquivRoute,
    pub u: u64,
    pub a: u64,
    /// For the correlation route, the plane-level correlation parameter.
    pub correlation_c: Option<u64>,
}

impl EquivWitness {
    /// Image of one triple under the witness map.
    pub fn map_triple(&self, t: [u64; 3], v: u64) -> [u64; 3] {
        let f = |x: u64| (self.u * x + self.a) % v;
        match self.route {
            EquivRoute::Collineation => [f(t[0]), f(t[1]), f(t[2])],
            EquivRoute::CorrelationReverse => [f(t[2]), f(t[1]), f(t[0])],
        }
    }

    /// Image of a whole triple set, sorted.
    pub fn map_full(&self, full: &[[u64; 3]], v: u64) -> Vec<[u64; 3]> {
        let mut out: Vec<[u64; 3]> =
            full.iter().map(|&t| self.map_triple(t, v)).collect();
        out.sort_unstable();
        out
    }
}

/// Searches for a witness relating t1 to t2 within the Singer-normalizer
/// family: maps x -> ux+a with u any unit, composed with triple reversal
/// on the correlation route. Witnesses are re-verified by direct image
/// comparison before being returned. `NotRelated` means no map in this
/// family works; it is not a proof of inequivalence under the full
/// collineation group.
pub fn equivalent(t1: &TrianglePres, t2: &TrianglePres) -> Result<EquivWitness> {
    if t1.q() != t2.q() {
        return Err(Error::BadInput(format!(
            "presentations have different orders {} and {}",
            t1.q(),
            t2.q()
        )));
    }
    let v = t1.v();
    let full1 = t1.full();
    let full2 = t2.full();
    let target: BTreeSet<[u64; 3]> = full2.iter().copied().collect();
    for route in [EquivRoute::Collineation, EquivRoute::CorrelationReverse] {
        for u in units(v) {
            for a in 0..v {
                let correlation_c = match route {
                    EquivRoute::Collineation => None,
                    EquivRoute::CorrelationReverse => Some((v - u) % v),
                };
                let w = EquivWitness {
                    route,
                    u,
                    a,
                    correlation_c,
                };
                if full1.iter().all(|&t| target.contains(&w.map_triple(t, v)))
                    && w.map_full(&full1, v) == full2
                {
                    return Ok(w);
                }
            }
        }
    }
    Err(Error::NotRelated)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pds::enumerate_pds_fixed_by_q;

    fn pds(q: u64, elems: &[u64]) -> DiffSet {
        DiffSet::new(q, elems).unwrap()
    }

    fn q2_pres(m_sq: bool) -> TrianglePres {
        construct(&pds(2, &[1, 2, 4]), &MChoice::Mask(vec![m_sq])).unwrap()
    }

    fn reference_pieces() -> (Vec<[u64; 3]>, Alpha) {
        let r = reference_q2();
        (r.full(), r.alpha().clone())
    }

    #[test]
    fn orbit_decomposition_examples() {
        let dec = orbit_decompose(&pds(3, &[0, 1, 3, 9])).unwrap();
        assert_eq!(dec.fixed_points, vec![0]);
        assert_eq!(dec.triples, vec![[1, 3, 9]]);
        assert_eq!((dec.f(), dec.t()), (1, 1));

        let dec = orbit_decompose(&pds(4, &[0, 1, 4, 14, 16])).unwrap();
        assert_eq!(dec.fixed_points, vec![0, 14]);
        assert_eq!(dec.triples, vec![[1, 4, 16]]);

        let d5 = pds(5, &[1, 5, 17, 22, 23, 25]);
        let dec = orbit_decompose(&d5).unwrap();
        assert_eq!(dec.fixed_points, Vec::<u64>::new());
        assert_eq!(dec.triples, vec![[1, 5, 25], [17, 23, 22]]);
        let dec_sq = orbit_decompose_with(&d5, &MChoice::AllQSq).unwrap();
        assert_eq!(dec_sq.triples, vec![[1, 25, 5], [17, 22, 23]]);
        assert_eq!(dec_sq.ms, vec![25, 25]);
    }

    #[test]
    fn decompose_rejects_unfixed_sets() {
        // {2, 3, 5} is a difference set but 2*{2,3,5} = {3,4,6} is not it.
        match orbit_decompose(&pds(2, &[2, 3, 5])) {
            Err(Error::NotFixedByQ { q: 2 }) => {}
            other => panic!("expected NotFixedByQ, got {other:?}"),
        }
    }

    #[test]
    fn mask_length_is_checked() {
        match construct(&pds(2, &[1, 2, 4]), &MChoice::Mask(vec![false, true])) {
            Err(Error::BadInput(_)) => {}
            other => panic!("expected BadInput, got {other:?}"),
        }
    }

    #[test]
    fn orbit_counts_tile_the_set() {
        for q in [2, 3, 4, 5] {
            for d in enumerate_pds_fixed_by_q(q).unwrap() {
                let dec = orbit_decompose(&d).unwrap();
                assert_eq!(dec.f() + 3 * dec.t(), (q + 1) as usize);
            }
        }
    }

    #[test]
    fn one_plus_m_plus_m_squared_vanishes() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13] {
            let v = q * q + q + 1;
            for m in [q, q * q % v] {
                assert_eq!((1 + m + m * m) % v, 0, "q = {q}, m = {m}");
            }
        }
    }

    #[test]
    fn constructed_q2_classes_are_the_known_ones() {
        let classes = q2_pres(false).classes().to_vec();
        assert_eq!(
            classes,
            vec![
                [0, 1, 3],
                [0, 2, 6],
                [0, 4, 5],
                [1, 2, 4],
                [1, 5, 6],
                [2, 3, 5],
                [3, 4, 6],
            ]
        );
        let other = q2_pres(true);
        assert!(other.contains([0, 1, 5]));
        assert_ne!(classes, other.classes());
    }

    #[test]
    fn construction_verifies_for_small_orders() {
        for (q, elems) in [
            (2u64, vec![1u64, 2, 4]),
            (3, vec![0, 1, 3, 9]),
            (4, vec![0, 1, 4, 14, 16]),
            (5, vec![1, 5, 17, 22, 23, 25]),
        ] {
            let d = pds(q, &elems);
            for pres in enumerate_variants(&d).unwrap() {
                let report = verify(&pres.full(), pres.alpha()).unwrap();
                assert!(report.ok);
                assert_eq!(report.triple_count as u64, d.v() * (q + 1));
                assert!(pres.is_s_invariant());
            }
        }
    }

    #[test]
    fn verify_flags_each_condition() {
        let pres = q2_pres(false);
        let alpha = pres.alpha().clone();
        let full = pres.full();

        // Dropping a whole class leaves uncovered incident pairs.
        let gutted: Vec<[u64; 3]> = full
            .iter()
            .copied()
            .filter(|&t| canonical_rotation(t) != [0, 1, 3])
            .collect();
        let report = verify(&gutted, &alpha).unwrap();
        assert!(!report.ok);
        assert!(report
            .violations
            .iter()
            .any(|x| matches!(x, Violation::MissingPair { a: 0, b: 1 })));

        // Dropping one rotation breaks closure.
        let mut chipped = full.clone();
        chipped.retain(|&t| t != [1, 3, 0]);
        let report = verify(&chipped, &alpha).unwrap();
        assert!(report
            .violations
            .iter()
            .any(|x| matches!(x, Violation::NotRotationClosed { .. })));

        // A triple over a non-incident pair is condition 1's other half.
        let mut padded = full.clone();
        padded.extend(rotations([0, 3, 3]));
        let report = verify(&padded, &alpha).unwrap();
        assert!(report
            .violations
            .iter()
            .any(|x| matches!(x, Violation::ExtraPair { a: 0, b: 3, .. })));

        // Two extensions of one incident pair violate uniqueness.
        let mut doubled = full.clone();
        doubled.extend(rotations([0, 1, 5]));
        let report = verify(&doubled, &alpha).unwrap();
        assert!(report
            .violations
            .iter()
            .any(|x| matches!(x, Violation::AmbiguousPair { a: 0, b: 1, .. })));
    }

    #[test]
    fn reference_presentation_verifies_and_extracts() {
        let (full, alpha) = reference_pieces();
        let report = verify(&full, &alpha).unwrap();
        assert!(report.ok, "violations: {:?}", report.violations);

        let extracted = extract_alpha(&full).unwrap();
        assert_eq!(extracted.table(), &[0, 2, 4, 6, 1, 3, 5]);
        assert_eq!(extracted.plane().base().elems(), &[1, 2, 4]);
    }

    #[test]
    fn extract_alpha_round_trips_constructed() {
        for (q, elems) in [(2u64, vec![1u64, 2, 4]), (3, vec![0, 1, 3, 9])] {
            let d = pds(q, &elems);
            let pres = construct(&d, &MChoice::AllQ).unwrap();
            let alpha = extract_alpha(&pres.full()).unwrap();
            assert_eq!(alpha.table(), (0..d.v()).collect::<Vec<_>>());
            assert_eq!(alpha.plane().base(), &d);
            assert!(verify(&pres.full(), &alpha).unwrap().ok);
        }
    }

    #[test]
    fn variant_counts_match_orbit_structure() {
        assert_eq!(enumerate_variants(&pds(2, &[1, 2, 4])).unwrap().len(), 2);
        assert_eq!(enumerate_variants(&pds(3, &[0, 1, 3, 9])).unwrap().len(), 2);
        assert_eq!(
            enumerate_variants(&pds(4, &[0, 1, 4, 14, 16])).unwrap().len(),
            2
        );
        let variants = enumerate_variants(&pds(5, &[1, 5, 17, 22, 23, 25])).unwrap();
        assert_eq!(variants.len(), 4);
        for pair in variants.windows(2) {
            assert_ne!(pair[0].classes(), pair[1].classes());
            assert_eq!(pair[0].alpha(), pair[1].alpha());
        }
    }

    #[test]
    fn brute_force_matches_construction_at_q2() {
        let d = pds(2, &[1, 2, 4]);
        let alpha = Alpha::identity(build_plane(&d).unwrap());
        let found = brute_force_all(&alpha).unwrap();
        let constructed = enumerate_variants(&d).unwrap();
        assert_eq!(found.len(), 2);
        let found_classes: BTreeSet<_> =
            found.iter().map(|p| p.classes().to_vec()).collect();
        let built_classes: BTreeSet<_> =
            constructed.iter().map(|p| p.classes().to_vec()).collect();
        assert_eq!(found_classes, built_classes);
    }

    #[test]
    fn brute_force_finds_the_reference_presentation() {
        let (full, alpha) = reference_pieces();
        let reference: BTreeSet<[u64; 3]> =
            full.iter().map(|&t| canonical_rotation(t)).collect();
        let reference: Vec<[u64; 3]> = reference.into_iter().collect();
        let found = brute_force_all(&alpha).unwrap();
        assert!(found.iter().any(|p| p.classes() == reference));
    }

    #[test]
    fn brute_force_confirms_exactly_two_at_q3() {
        let d = pds(3, &[0, 1, 3, 9]);
        let alpha = Alpha::identity(build_plane(&d).unwrap());
        let found = brute_force_all(&alpha).unwrap();
        let constructed = enumerate_variants(&d).unwrap();
        assert_eq!(found.len(), 2);
        let found_classes: BTreeSet<_> =
            found.iter().map(|p| p.classes().to_vec()).collect();
        let built_classes: BTreeSet<_> =
            constructed.iter().map(|p| p.classes().to_vec()).collect();
        assert_eq!(found_classes, built_classes);
    }

    #[test]
    fn brute_force_rejects_large_orders() {
        let d = pds(4, &[0, 1, 4, 14, 16]);
        let alpha = Alpha::identity(build_plane(&d).unwrap());
        match brute_force_all(&alpha) {
            Err(Error::TooLarge(4)) => {}
            other => panic!("expected TooLarge, got {other:?}"),
        }
    }

    #[test]
    fn equivalence_is_reflexive_with_identity_witness() {
        let pres = q2_pres(false);
        let w = equivalent(&pres, &pres).unwrap();
        assert_eq!((w.route, w.u, w.a), (EquivRoute::Collineation, 1, 0));
    }

    #[test]
    fn shift_images_coincide_with_the_original() {
        // x -> x+1 permutes each family (j, j+e, j+e+me) in place, so the
        // shifted image is the same presentation and the identity witness.
        let pres = q2_pres(false);
        let shift = EquivWitness {
            route: EquivRoute::Collineation,
            u: 1,
            a: 1,
            correlation_c: None,
        };
        let image = shift.map_full(&pres.full(), pres.v());
        assert_eq!(image, pres.full());
    }

    #[test]
    fn m_choices_are_related_by_a_correlation() {
        let w = equivalent(&q2_pres(false), &q2_pres(true)).unwrap();
        assert_eq!(w.route, EquivRoute::CorrelationReverse);
        assert!(w.correlation_c.is_some());
    }

    #[test]
    fn sibling_difference_sets_are_related_by_a_collineation() {
        // {3,5,6} = 3 * {1,2,4}; same m-choice forces the collineation route.
        let t1 = q2_pres(false);
        let t2 = construct(&pds(2, &[3, 5, 6]), &MChoice::AllQ).unwrap();
        let w = equivalent(&t1, &t2).unwrap();
        assert_eq!(w.route, EquivRoute::Collineation);
        assert_eq!(w.map_full(&t1.full(), 7), t2.full());
    }

    #[test]
    fn reference_presentation_is_outside_the_searched_family() {
        // The reference alpha admits pairs (x, x), the constructed ones do
        // not, and the searched maps preserve that, so no witness exists.
        let (full, alpha) = reference_pieces();
        let reps: Vec<[u64; 3]> = full.to_vec();
        let reference = TrianglePres::new(alpha, &reps).unwrap();
        match equivalent(&q2_pres(false), &reference) {
            Err(Error::NotRelated) => {}
            other => panic!("expected NotRelated, got {other:?}"),
        }
    }

    #[test]
    fn json_round_trip_and_validation() {
        let pres = q2_pres(false);
        let text = serde_json::to_string(&pres).unwrap();
        assert!(text.starts_with("{\"q\":2,\"alpha\":[0,1,2,3,4,5,6],\"classes\":[[0,1,3],"));
        let back: TrianglePres = serde_json::from_str(&text).unwrap();
        assert_eq!(back, pres);

        let mut wire: serde_json::Value = serde_json::from_str(&text).unwrap();
        wire["classes"].as_array_mut().unwrap().pop();
        let err = serde_json::from_value::<TrianglePres>(wire);
        assert!(err.is_err());
    }
}
