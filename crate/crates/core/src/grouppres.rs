//! Finitely presented groups read off a triangle presentation: the triangle
//! group itself, its extensions by the index shift and the scaling map, the
//! three-generator period presentation attached to a difference set, and the
//! rhombus subgroup presented by hexagonal relations.
//!
//! Words are fully expanded: one `(generator, sign)` entry per letter.
//! Relators are deduplicated up to cyclic rotation and inversion but stored
//! in the form they were first emitted, so exports stay readable.

use std::collections::BTreeMap;
use std::collections::HashSet;
use std::fmt::Write as _;

use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::pds::DiffSet;
use crate::tripres::TrianglePres;

/// One letter of a word: generator index and exponent sign (+1 or -1).
pub type Letter = (u32, i8);

/// A word over the generators, one entry per letter.
pub type Word = Vec<Letter>;

/// Cancels adjacent inverse pairs until none remain.
pub fn free_reduce(w: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &(g, e) in w {
        match out.last() {
            Some(&(h, f)) if h == g && i16::from(f) + i16::from(e) == 0 => {
                out.pop();
            }
            _ => out.push((g, e)),
        }
    }
    out
}

/// Inverse word: reversed order, flipped signs.
pub fn invert(w: &[Letter]) -> Word {
    w.iter().rev().map(|&(g, e)| (g, -e)).collect()
}

/// Letter order used for canonical forms: positive before negative,
/// so `a0*a1*a3` beats `a3^-1*a1^-1*a0^-1` as a representative.
fn letter_rank(l: Letter) -> (u32, u8) {
    (l.0, u8::from(l.1 < 0))
}

/// Canonical key of a relator: the least word among all cyclic rotations
/// of the word and of its inverse. Two relators define the same normal
/// closure contribution exactly when their keys agree.
pub fn canonical_relator(w: &[Letter]) -> Word {
    let n = w.len();
    if n == 0 {
        return Vec::new();
    }
    // candidates 0..n rotate the word, n..2n rotate its inverse
    let letter = |cand: usize, k: usize| -> Letter {
        if cand < n {
            w[(cand + k) % n]
        } else {
            let (g, e) = w[n - 1 - ((cand - n + k) % n)];
            (g, -e)
        }
    };
    let mut best = 0usize;
    for cand in 1..2 * n {
        for k in 0..n {
            let a = letter_rank(letter(cand, k));
            let b = letter_rank(letter(best, k));
            if a < b {
                best = cand;
                break;
            }
            if a > b {
                break;
            }
        }
    }
    (0..n).map(|k| letter(best, k)).collect()
}

/// Which of the presentation families a [`GroupPres`] belongs to. The
/// variant fixes the generator layout: triangle letters first, then the
/// shift `p`, then the scaling `s`; the period presentation has exactly
/// three generators; the rhombus presentation one per ordered pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PresKind {
    #[serde(rename = "gammaT")]
    GammaT,
    #[serde(rename = "gammaTp")]
    GammaTp,
    #[serde(rename = "tilde")]
    Tilde,
    #[serde(rename = "singer")]
    Singer,
    #[serde(rename = "rhombus")]
    Rhombus,
}

impl PresKind {
    /// Generator count the layout demands for modulus `v`.
    fn expected_generators(self, v: u64) -> u64 {
        match self {
            PresKind::GammaT => v,
            PresKind::GammaTp => v + 1,
            PresKind::Tilde => v + 2,
            PresKind::Singer => 3,
            PresKind::Rhombus => v * (v - 1),
        }
    }
}

/// A finite presentation: named generators and relator words. Construct
/// through [`gamma_t`], [`extend_by_p`], [`extend_by_ps`],
/// [`singer_lattice`] or [`rhombus_presentation`]; serialization
/// round-trips through the JSON export format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPres {
    kind: PresKind,
    q: u64,
    v: u64,
    generators: Vec<String>,
    relators: Vec<Word>,
}

impl GroupPres {
    fn assemble(
        kind: PresKind,
        q: u64,
        v: u64,
        generators: Vec<String>,
        relators: impl IntoIterator<Item = Word>,
    ) -> Self {
        let relators = relators.into_iter();
        let hint = relators.size_hint().0;
        let mut seen: HashSet<Word> = HashSet::with_capacity(hint);
        let mut kept: Vec<Word> = Vec::with_capacity(hint);
        for w in relators {
            let reducible = w
                .windows(2)
                .any(|p| p[0].0 == p[1].0 && i16::from(p[0].1) + i16::from(p[1].1) == 0);
            let w = if reducible { free_reduce(&w) } else { w };
            if seen.insert(canonical_relator(&w)) {
                kept.push(w);
            }
        }
        GroupPres {
            kind,
            q,
            v,
            generators,
            relators: kept,
        }
    }

    pub fn kind(&self) -> PresKind {
        self.kind
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Modulus of the underlying index set, q^2 + q + 1.
    pub fn v(&self) -> u64 {
        self.v
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn relator_count(&self) -> usize {
        self.relators.len()
    }

    /// Whether some stored relator equals `w` up to rotation and inversion.
    pub fn has_relator(&self, w: &[Letter]) -> bool {
        let key = canonical_relator(&free_reduce(w));
        self.relators.iter().any(|r| canonical_relator(r) == key)
    }

    fn classify(&self, idx: u32) -> GenClass {
        let i = u64::from(idx);
        match self.kind {
            PresKind::GammaT => GenClass::Triangle,
            PresKind::GammaTp if i < self.v => GenClass::Triangle,
            PresKind::GammaTp => GenClass::Shift,
            PresKind::Tilde if i < self.v => GenClass::Triangle,
            PresKind::Tilde if i == self.v => GenClass::Shift,
            PresKind::Tilde => GenClass::Scaling,
            PresKind::Singer => GenClass::Period(idx),
            PresKind::Rhombus => GenClass::Rhombus,
        }
    }
}

enum GenClass {
    Triangle,
    Shift,
    Scaling,
    Period(u32),
    Rhombus,
}

/// Triangle group of a presentation: one generator per index, one length
/// three relator per rotation class.
pub fn gamma_t(t: &TrianglePres) -> GroupPres {
    let v = t.v();
    let generators = (0..v).map(|i| format!("a{i}")).collect();
    let relators = t
        .classes()
        .iter()
        .map(|&[x, y, z]| vec![(x as u32, 1), (y as u32, 1), (z as u32, 1)]);
    GroupPres::assemble(PresKind::GammaT, t.q(), v, generators, relators)
}

/// Extension of the triangle group by the index shift `p` of order `v`,
/// acting by `p a_i p^-1 = a_{i+1}`. Requires the presentation to be
/// invariant under the shift, so that conjugation permutes the relators.
pub fn extend_by_p(t: &TrianglePres) -> Result<GroupPres> {
    if !t.is_shift_invariant() {
        return Err(Error::BadInput(
            "presentation is not invariant under i -> i+1, so the shift does not act".into(),
        ));
    }
    let base = gamma_t(t);
    let v = t.v();
    let p = v as u32;
    let mut generators = base.generators.clone();
    generators.push("p".into());
    let mut relators = base.relators.clone();
    relators.push(vec![(p, 1); v as usize]);
    for i in 0..v {
        relators.push(vec![
            (p, 1),
            (i as u32, 1),
            (p, -1),
            (((i + 1) % v) as u32, -1),
        ]);
    }
    Ok(GroupPres::assemble(
        PresKind::GammaTp,
        t.q(),
        v,
        generators,
        relators,
    ))
}

/// Further extension by the scaling `s` of order three, acting by
/// `s p s^-1 = p^q` and `s a_i s^-1 = a_{q*i}`. Requires invariance under
/// both the shift and the scaling.
pub fn extend_by_ps(t: &TrianglePres) -> Result<GroupPres> {
    let inner = extend_by_p(t)?;
    if !t.is_s_invariant() {
        return Err(Error::NotSInvariant);
    }
    let q = t.q();
    let v = t.v();
    let p = v as u32;
    let s = (v + 1) as u32;
    let mut generators = inner.generators.clone();
    generators.push("s".into());
    let mut relators = inner.relators.clone();
    relators.push(vec![(s, 1); 3]);
    let mut spsp = vec![(s, 1), (p, 1), (s, -1)];
    spsp.extend(std::iter::repeat_n((p, -1), q as usize));
    relators.push(spsp);
    for i in 0..v {
        relators.push(vec![
            (s, 1),
            (i as u32, 1),
            (s, -1),
            (((q * i) % v) as u32, -1),
        ]);
    }
    Ok(GroupPres::assemble(
        PresKind::Tilde,
        q,
        v,
        generators,
        relators,
    ))
}

/// Period presentation attached to a difference set: generators
/// `s0, s1, s2`, one relator `s0^e s1^e s2^e` per element `e` of the set
/// (empty when `e = 0`), plus `sj^v` for each generator.
pub fn singer_lattice(d: &DiffSet) -> GroupPres {
    let v = d.v();
    let generators = (0..3u32).map(|j| format!("s{j}")).collect();
    let mut relators: Vec<Word> = Vec::new();
    for &e in d.elems() {
        let mut w: Word = Vec::with_capacity(3 * e as usize);
        for j in 0..3u32 {
            w.extend(std::iter::repeat_n((j, 1), e as usize));
        }
        relators.push(w);
    }
    for j in 0..3u32 {
        relators.push(vec![(j, 1); v as usize]);
    }
    GroupPres::assemble(PresKind::Singer, d.q(), v, generators, relators)
}

/// How many hexagonal relations sit over each six-cycle of the link graph.
/// The middle letter of every link edge is unique, so a cycle determines
/// its six member triples completely; calibrated at the smallest order.
pub const HEX_PER_SIX_CYCLE: usize = 1;

/// A hexagonal relation among rhombus generators. `cycle` alternates
/// out- and in-vertices of the link graph in the canonical order used by
/// the cycle enumerator; `members` are the six triples the relation
/// walks through; `pairs` are the three (positive, negative) letter
/// pairs whose product is the relator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HexRelation {
    pub cycle: [u64; 6],
    pub members: [[u64; 3]; 6],
    pub pairs: [(u64, u64); 3],
}

/// Streams every hexagonal relation of the presentation through `visit`,
/// one per non-collinear triple of indices, without materializing the
/// full list. Visits in increasing order of the out-vertex triple.
pub fn enumerate_hexagons_with(
    t: &TrianglePres,
    mut visit: impl FnMut(&HexRelation),
) -> Result<()> {
    let v = t.v() as usize;
    // z[a*v + b] is the unique in-vertex adjacent to both out_a and out_b,
    // and mid[a*v + c] the middle letter of the edge out_a ~ in_c
    let mut mid: Vec<u64> = vec![u64::MAX; v * v];
    let mut on_line: Vec<Vec<u64>> = vec![Vec::new(); v];
    for &[x, y, z] in &t.full() {
        let slot = &mut mid[x as usize * v + z as usize];
        if *slot != u64::MAX {
            return Err(Error::Internal(format!(
                "edge ({x}, {z}) has two middle letters"
            )));
        }
        *slot = y;
        on_line[z as usize].push(x);
    }
    let mut ztab: Vec<u64> = vec![u64::MAX; v * v];
    for (c, outs) in on_line.iter().enumerate() {
        for (k, &a) in outs.iter().enumerate() {
            for &b in &outs[k + 1..] {
                let (a, b) = (a as usize, b as usize);
                if ztab[a * v + b] != u64::MAX {
                    return Err(Error::Internal(format!(
                        "out vertices {a} and {b} share two in-neighbors"
                    )));
                }
                ztab[a * v + b] = c as u64;
                ztab[b * v + a] = c as u64;
            }
        }
    }
    for (w, &z) in ztab.iter().enumerate() {
        let (a, b) = (w / v, w % v);
        if a != b && z == u64::MAX {
            return Err(Error::Internal(format!(
                "out vertices {a} and {b} share no in-neighbor"
            )));
        }
    }
    let m = |a: u64, c: u64| mid[a as usize * v + c as usize];
    for o1 in 0..v as u64 {
        for o2 in o1 + 1..v as u64 {
            let c12 = ztab[o1 as usize * v + o2 as usize];
            for o3 in o2 + 1..v as u64 {
                let c23 = ztab[o2 as usize * v + o3 as usize];
                if c12 == c23 {
                    // all three indices lie on one line; no hexagon
                    continue;
                }
                let c13 = ztab[o1 as usize * v + o3 as usize];
                // canonical orientation: start at o1, smaller in-vertex first
                let (a, b, ca, cb) = if c12 < c13 {
                    (o2, o3, c12, c13)
                } else {
                    (o3, o2, c13, c12)
                };
                let hex = HexRelation {
                    cycle: [o1, ca, a, c23, b, cb],
                    members: [
                        [o1, m(o1, ca), ca],
                        [a, m(a, ca), ca],
                        [a, m(a, c23), c23],
                        [b, m(b, c23), c23],
                        [b, m(b, cb), cb],
                        [o1, m(o1, cb), cb],
                    ],
                    pairs: [
                        (m(o1, ca), m(a, ca)),
                        (m(a, c23), m(b, c23)),
                        (m(b, cb), m(o1, cb)),
                    ],
                };
                visit(&hex);
            }
        }
    }
    Ok(())
}

/// Collects every hexagonal relation. Intended for small orders; use
/// [`enumerate_hexagons_with`] to stream when the count is large.
pub fn enumerate_hexagons(t: &TrianglePres) -> Result<Vec<HexRelation>> {
    let mut out = Vec::new();
    enumerate_hexagons_with(t, |h| out.push(h.clone()))?;
    Ok(out)
}

/// Re-derives a hexagonal relation from first principles: all six member
/// triples must belong to the presentation, the members must chain along
/// the recorded cycle with the recorded letter pairs, and eliminating
/// each middle letter through its member relator must telescope the
/// relator word to the identity under plain free reduction.
pub fn telescope_check(t: &TrianglePres, h: &HexRelation) -> bool {
    if !h.members.iter().all(|&m| t.contains(m)) {
        return false;
    }
    let [i1, i3, j3, k3, l3, m3] = h.cycle;
    let chained = [
        [i1, h.pairs[0].0, i3],
        [j3, h.pairs[0].1, i3],
        [j3, h.pairs[1].0, k3],
        [l3, h.pairs[1].1, k3],
        [l3, h.pairs[2].0, m3],
        [i1, h.pairs[2].1, m3],
    ];
    if chained != h.members {
        return false;
    }
    // each member (x, y, z) gives a_y = a_x^-1 a_z^-1; substitute into
    // b(pairs[0]) b(pairs[1]) b(pairs[2]) and reduce
    let g = |x: u64| x as u32;
    let word: Word = vec![
        (g(i1), -1),
        (g(i3), -1),
        (g(i3), 1),
        (g(j3), 1),
        (g(j3), -1),
        (g(k3), -1),
        (g(k3), 1),
        (g(l3), 1),
        (g(l3), -1),
        (g(m3), -1),
        (g(m3), 1),
        (g(i1), 1),
    ];
    free_reduce(&word).is_empty()
}

/// Flat generator index of the rhombus letter `b_{i,j}`, `i != j`.
pub fn rhombus_gen_index(v: u64, i: u64, j: u64) -> u32 {
    debug_assert!(i != j && i < v && j < v);
    (i * (v - 1) + if j < i { j } else { j - 1 }) as u32
}

/// Presentation of the rhombus subgroup: one generator `b{i}_{j}` per
/// ordered pair of distinct indices, inverse-pair relators
/// `b_{i,j} b_{j,i}`, and one length three relator per hexagonal
/// relation.
pub fn rhombus_presentation(t: &TrianglePres) -> Result<GroupPres> {
    let v = t.v();
    let mut generators = Vec::with_capacity((v * (v - 1)) as usize);
    for i in 0..v {
        for j in 0..v {
            if i != j {
                generators.push(format!("b{i}_{j}"));
            }
        }
    }
    let mut relators: Vec<Word> = Vec::new();
    for i in 0..v {
        for j in i + 1..v {
            relators.push(vec![
                (rhombus_gen_index(v, i, j), 1),
                (rhombus_gen_index(v, j, i), 1),
            ]);
        }
    }
    enumerate_hexagons_with(t, |h| {
        relators.push(
            h.pairs
                .iter()
                .map(|&(x, y)| (rhombus_gen_index(v, x, y), 1))
                .collect(),
        );
    })?;
    Ok(GroupPres::assemble(
        PresKind::Rhombus,
        t.q(),
        v,
        generators,
        relators,
    ))
}

/// The abelianized invariants used as kernel certificates. `ShiftExp`
/// counts shift letters mod v; `TriangleExp` counts triangle letters
/// mod 3; `PeriodExp` weights the period generators by powers of q,
/// mod v; `TriangleExpPlain` is the mod 3 count on groups without a
/// shift letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Hom {
    #[serde(rename = "Phi")]
    ShiftExp,
    #[serde(rename = "Psi")]
    TriangleExp,
    #[serde(rename = "phi")]
    PeriodExp,
    #[serde(rename = "psi")]
    TriangleExpPlain,
}

/// Value of the invariant on a word, reduced into its cyclic codomain
/// (order v for `ShiftExp` and `PeriodExp`, order 3 otherwise). Errors
/// if a letter lies outside the invariant's domain.
pub fn hom_value(pres: &GroupPres, word: &[Letter], hom: Hom) -> Result<u64> {
    let modulus = match hom {
        Hom::ShiftExp | Hom::PeriodExp => pres.v() as i128,
        Hom::TriangleExp | Hom::TriangleExpPlain => 3,
    };
    let mut acc: i128 = 0;
    for &(g, e) in word {
        if g as usize >= pres.generator_count() {
            return Err(Error::BadInput(format!(
                "letter index {g} out of range for {} generators",
                pres.generator_count()
            )));
        }
        let reject = || Err(Error::UnknownGenerator(pres.generators[g as usize].clone()));
        let weight: i128 = match (hom, pres.classify(g)) {
            (Hom::ShiftExp, GenClass::Shift) => 1,
            (Hom::ShiftExp, GenClass::Triangle | GenClass::Rhombus) => 0,
            (Hom::ShiftExp, _) => return reject(),
            (Hom::TriangleExp, GenClass::Triangle) => 1,
            (Hom::TriangleExp, GenClass::Shift | GenClass::Rhombus) => 0,
            (Hom::TriangleExp, _) => return reject(),
            (Hom::PeriodExp, GenClass::Period(j)) => {
                (pres.q().pow(j % 3) % pres.v()) as i128
            }
            (Hom::PeriodExp, _) => return reject(),
            (Hom::TriangleExpPlain, GenClass::Triangle) => 1,
            (Hom::TriangleExpPlain, GenClass::Rhombus) => 0,
            (Hom::TriangleExpPlain, _) => return reject(),
        };
        acc += weight * i128::from(e);
    }
    Ok(acc.rem_euclid(modulus) as u64)
}

/// Outcome of a kernel membership query. When the invariant is the plain
/// triangle count on the triangle group and the reduced word alternates
/// positive and negative letters, `b_product` lists it as a product of
/// rhombus letters `b_{x,y} = a_x a_y^-1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelReport {
    pub value: u64,
    pub in_kernel: bool,
    pub b_product: Option<Vec<(u64, u64)>>,
}

/// Evaluates the invariant and reports kernel membership, together with
/// a rhombus factorization when one can be read off directly.
pub fn kernel_member(pres: &GroupPres, word: &[Letter], hom: Hom) -> Result<KernelReport> {
    let value = hom_value(pres, word, hom)?;
    let in_kernel = value == 0;
    let mut b_product = None;
    if in_kernel && hom == Hom::TriangleExpPlain && pres.kind() == PresKind::GammaT {
        let reduced = free_reduce(word);
        let mut pairs = Vec::with_capacity(reduced.len() / 2);
        let mut shaped = reduced.len().is_multiple_of(2);
        for chunk in reduced.chunks(2) {
            match *chunk {
                [(x, 1), (y, -1)] => pairs.push((u64::from(x), u64::from(y))),
                _ => {
                    shaped = false;
                    break;
                }
            }
        }
        if shaped {
            b_product = Some(pairs);
        }
    }
    Ok(KernelReport {
        value,
        in_kernel,
        b_product,
    })
}

/// Three period words inside the shift extension, read off the first
/// class `(i, j, k)`: the shift itself, `a_i p a_i^-1`, and
/// `a_k^-1 p a_k`. Each has shift exponent one; a word lies in the
/// triangle subgroup exactly when its shift exponent vanishes.
pub fn chamber_triple(t: &TrianglePres) -> [Word; 3] {
    let [i, _, k] = t.classes()[0];
    let p = t.v() as u32;
    [
        vec![(p, 1)],
        vec![(i as u32, 1), (p, 1), (i as u32, -1)],
        vec![(k as u32, -1), (p, 1), (k as u32, 1)],
    ]
}

/// Text formats a presentation can be exported to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Gap,
    Json,
    Magma,
}

impl ExportFormat {
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "gap" => Ok(ExportFormat::Gap),
            "json" => Ok(ExportFormat::Json),
            "magma" => Ok(ExportFormat::Magma),
            other => Err(Error::UnsupportedFormat(other.into())),
        }
    }
}

/// Appends one word with consecutive equal letters collected into powers,
/// `empty` standing in for the identity.
fn push_word(out: &mut String, pres: &GroupPres, w: &[Letter], empty: &str) {
    if w.is_empty() {
        out.push_str(empty);
        return;
    }
    let mut k = 0;
    while k < w.len() {
        let (g, s) = w[k];
        let mut run = 1usize;
        while k + run < w.len() && w[k + run] == (g, s) {
            run += 1;
        }
        if k > 0 {
            out.push('*');
        }
        out.push_str(&pres.generators[g as usize]);
        let e = i64::from(s) * run as i64;
        if e != 1 {
            let _ = write!(out, "^{e}");
        }
        k += run;
    }
}

fn relator_lines(out: &mut String, pres: &GroupPres, empty: &str) {
    for (k, r) in pres.relators.iter().enumerate() {
        out.push_str("  ");
        push_word(out, pres, r, empty);
        if k + 1 != pres.relators.len() {
            out.push(',');
        }
        out.push('\n');
    }
}

fn gap_text(pres: &GroupPres) -> String {
    let mut out = String::new();
    out.push_str("F := FreeGroup(");
    for (k, n) in pres.generators.iter().enumerate() {
        if k > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{n:?}");
    }
    out.push_str(");;\n");
    out.push_str("AssignGeneratorVariables(F);;\n");
    out.push_str("rels := [\n");
    relator_lines(&mut out, pres, "One(F)");
    out.push_str("];;\n");
    out.push_str("G := F / rels;;\n");
    out
}

fn magma_text(pres: &GroupPres) -> String {
    let mut out = String::new();
    let names = pres.generators.join(", ");
    let _ = writeln!(out, "G<{names}> := Group<");
    let _ = writeln!(out, "  {names} |");
    relator_lines(&mut out, pres, "1");
    out.push_str(">;\n");
    out
}

/// Serializes the presentation for GAP, Magma, or as JSON. The JSON form
/// is the serde representation and parses back to an equal value.
pub fn export(pres: &GroupPres, format: ExportFormat) -> Result<String> {
    match format {
        ExportFormat::Gap => Ok(gap_text(pres)),
        ExportFormat::Magma => Ok(magma_text(pres)),
        ExportFormat::Json => Ok(serde_json::to_string(pres)?),
    }
}

#[derive(Serialize, Deserialize)]
struct GroupPresWire {
    kind: PresKind,
    q: u64,
    v: u64,
    generators: Vec<String>,
    relators: Vec<Vec<(String, i8)>>,
}

impl Serialize for GroupPres {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let wire = GroupPresWire {
            kind: self.kind,
            q: self.q,
            v: self.v,
            generators: self.generators.clone(),
            relators: self
                .relators
                .iter()
                .map(|w| {
                    w.iter()
                        .map(|&(g, e)| (self.generators[g as usize].clone(), e))
                        .collect()
                })
                .collect(),
        };
        wire.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupPres {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = GroupPresWire::deserialize(d)?;
        GroupPres::from_wire(wire).map_err(D::Error::custom)
    }
}

impl GroupPres {
    fn from_wire(wire: GroupPresWire) -> Result<Self> {
        if wire.v == 0 {
            return Err(Error::BadInput("modulus v must be positive".into()));
        }
        let expected = wire.kind.expected_generators(wire.v);
        if wire.generators.len() as u64 != expected {
            return Err(Error::BadInput(format!(
                "expected {expected} generators for this kind and v = {}, got {}",
                wire.v,
                wire.generators.len()
            )));
        }
        let index: BTreeMap<&str, u32> = wire
            .generators
            .iter()
            .enumerate()
            .map(|(k, n)| (n.as_str(), k as u32))
            .collect();
        if index.len() != wire.generators.len() {
            return Err(Error::BadInput("generator names are not distinct".into()));
        }
        let mut relators: Vec<Word> = Vec::with_capacity(wire.relators.len());
        for r in &wire.relators {
            let mut w: Word = Vec::with_capacity(r.len());
            for (name, e) in r {
                let g = *index
                    .get(name.as_str())
                    .ok_or_else(|| Error::UnknownGenerator(name.clone()))?;
                if *e != 1 && *e != -1 {
                    return Err(Error::BadInput(format!(
                        "letter exponent must be +1 or -1, got {e}"
                    )));
                }
                w.push((g, *e));
            }
            relators.push(w);
        }
        Ok(GroupPres::assemble(
            wire.kind,
            wire.q,
            wire.v,
            wire.generators,
            relators,
        ))
    }
}

/// Integer row basis of the relation lattice of a period presentation,
/// in upper triangular form, with the order of the abelian quotient and
/// a flag per generator telling whether it survives in the quotient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingerAbelianization {
    pub lattice_rows: [[i64; 3]; 3],
    pub quotient_order: Option<u64>,
    pub nontrivial: [bool; 3],
}

/// Upper triangular integer basis for the row span, diagonal nonnegative.
fn hermite_rows(rows: &[[i64; 3]]) -> [[i64; 3]; 3] {
    let mut work: Vec<[i64; 3]> = rows.to_vec();
    let mut out = [[0i64; 3]; 3];
    let mut top = 0usize;
    for col in 0..3 {
        loop {
            let mut pivot: Option<usize> = None;
            for (k, r) in work.iter().enumerate().skip(top) {
                if r[col] != 0
                    && pivot.is_none_or(|p| r[col].abs() < work[p][col].abs())
                {
                    pivot = Some(k);
                }
            }
            let Some(p) = pivot else { break };
            work.swap(top, p);
            let head = work[top];
            let mut done = true;
            for r in work.iter_mut().skip(top + 1) {
                if r[col] != 0 {
                    let f = r[col] / head[col];
                    for c in 0..3 {
                        r[c] -= f * head[c];
                    }
                    if r[col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if top < work.len() && work[top][col] != 0 {
            let sign = work[top][col].signum();
            for c in 0..3 {
                out[col][c] = sign * work[top][c];
                work[top][c] = out[col][c];
            }
            top += 1;
        }
    }
    // reduce entries above each pivot into [0, pivot)
    for col in 0..3 {
        let d = out[col][col];
        if d == 0 {
            continue;
        }
        let pivot = out[col];
        for row in out.iter_mut().take(col) {
            let f = row[col].div_euclid(d);
            for (x, p) in row.iter_mut().zip(pivot) {
                *x -= f * p;
            }
        }
    }
    out
}

/// Whether `target` lies in the row span of an upper triangular basis.
fn in_lattice(rows: &[[i64; 3]; 3], target: [i64; 3]) -> bool {
    let mut t = target;
    for col in 0..3 {
        let d = rows[col][col];
        if d == 0 {
            if t[col] != 0 {
                return false;
            }
            continue;
        }
        if t[col] % d != 0 {
            return false;
        }
        let f = t[col] / d;
        for c in 0..3 {
            t[c] -= f * rows[col][c];
        }
    }
    t == [0, 0, 0]
}

/// Abelianizes a period presentation exactly over the integers and
/// reports the relation lattice, the quotient order, and which
/// generators stay nonzero.
pub fn singer_abelianization(pres: &GroupPres) -> Result<SingerAbelianization> {
    if pres.kind() != PresKind::Singer {
        return Err(Error::BadInput(
            "abelianization is only computed for the period presentation".into(),
        ));
    }
    let rows: Vec<[i64; 3]> = pres
        .relators()
        .iter()
        .map(|w| {
            let mut r = [0i64; 3];
            for &(g, e) in w {
                r[g as usize] += i64::from(e);
            }
            r
        })
        .collect();
    let lattice_rows = hermite_rows(&rows);
    let det: i64 = (0..3).map(|k| lattice_rows[k][k]).product();
    let quotient_order = if det != 0 { Some(det as u64) } else { None };
    let mut nontrivial = [false; 3];
    for (j, flag) in nontrivial.iter_mut().enumerate() {
        let mut e = [0i64; 3];
        e[j] = 1;
        *flag = !in_lattice(&lattice_rows, e);
    }
    Ok(SingerAbelianization {
        lattice_rows,
        quotient_order,
        nontrivial,
    })
}
