//! Bundled reference table: for each of the nine supported orders, a
//! difference set fixed by multiplication by q together with its orbit
//! classes. `reproduce_table` re-derives every row from scratch and
//! reports discrepancies, serving as the end-to-end regression gate.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pds::DiffSet;
use crate::tripres::{canonical_rotation, orbit_decompose};

/// One table row: the set, and its q-orbit classes with fixed points
/// written as repeated triples.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TableRow {
    pub q: u64,
    pub diff_set: &'static [u64],
    pub orbits: &'static [[u64; 3]],
}

/// The nine reference rows, ascending in q. Orbit entries list each
/// 3-orbit in one of its two multiplier orders; row checks compare up
/// to rotation and order reversal.
pub fn reference_table() -> &'static [TableRow] {
    &[
        TableRow {
            q: 2,
            diff_set: &[1, 2, 4],
            orbits: &[[1, 2, 4]],
        },
        TableRow {
            q: 3,
            diff_set: &[0, 1, 3, 9],
            orbits: &[[1, 3, 9], [0, 0, 0]],
        },
        TableRow {
            q: 4,
            diff_set: &[0, 1, 4, 14, 16],
            orbits: &[[1, 4, 16], [14, 14, 14], [0, 0, 0]],
        },
        TableRow {
            q: 5,
            diff_set: &[1, 5, 17, 22, 23, 25],
            orbits: &[[1, 5, 25], [17, 23, 22]],
        },
        TableRow {
            q: 7,
            diff_set: &[0, 1, 5, 7, 17, 35, 38, 49],
            orbits: &[[1, 7, 49], [5, 35, 17], [38, 38, 38], [0, 0, 0]],
        },
        TableRow {
            q: 8,
            diff_set: &[1, 2, 4, 8, 16, 32, 37, 55, 64],
            orbits: &[[1, 8, 64], [2, 16, 55], [4, 32, 37]],
        },
        TableRow {
            q: 9,
            diff_set: &[0, 1, 3, 9, 27, 49, 56, 61, 77, 81],
            orbits: &[[1, 9, 81], [3, 27, 61], [49, 77, 56], [0, 0, 0]],
        },
        TableRow {
            q: 11,
            diff_set: &[1, 10, 11, 13, 27, 31, 68, 75, 83, 110, 115, 121],
            orbits: &[[1, 11, 121], [10, 110, 13], [27, 31, 75], [68, 83, 115]],
        },
        TableRow {
            q: 13,
            diff_set: &[0, 1, 13, 61, 67, 69, 107, 110, 132, 139, 149, 160, 165, 169],
            orbits: &[
                [1, 13, 169],
                [107, 110, 149],
                [69, 132, 165],
                [67, 139, 160],
                [61, 61, 61],
                [0, 0, 0],
            ],
        },
    ]
}

/// The bundled row for one order, if there is one.
pub fn reference_row(q: u64) -> Option<&'static TableRow> {
    reference_table().iter().find(|r| r.q == q)
}

/// Keys under which a listed orbit entry matches a computed one: its
/// canonical rotation, in both traversal orders.
fn orbit_keys(t: [u64; 3]) -> [[u64; 3]; 2] {
    [
        canonical_rotation(t),
        canonical_rotation([t[2], t[1], t[0]]),
    ]
}

/// Re-derives one row: the listed set must verify as a difference set
/// fixed by q, and its computed orbit decomposition must match the
/// listed classes exactly, up to rotation and multiplier order.
pub fn check_row(row: &TableRow) -> Result<()> {
    let mismatch = |reason: String| Error::RowMismatch { q: row.q, reason };
    let d = DiffSet::new(row.q, row.diff_set)
        .map_err(|e| mismatch(format!("listed set does not verify: {e}")))?;
    if !d.is_fixed_by(row.q) {
        return Err(mismatch("listed set is not fixed by q".into()));
    }
    let dec = orbit_decompose(&d).map_err(|e| mismatch(e.to_string()))?;

    let mut listed_fixed: Vec<u64> = Vec::new();
    let mut listed_triples: Vec<[u64; 3]> = Vec::new();
    for &t in row.orbits {
        if t[0] == t[1] && t[1] == t[2] {
            listed_fixed.push(t[0]);
        } else {
            listed_triples.push(t);
        }
    }
    listed_fixed.sort_unstable();
    if listed_fixed != dec.fixed_points {
        return Err(mismatch(format!(
            "fixed points: listed {:?}, computed {:?}",
            listed_fixed, dec.fixed_points
        )));
    }
    if listed_triples.len() != dec.triples.len() {
        return Err(mismatch(format!(
            "orbit count: listed {}, computed {}",
            listed_triples.len(),
            dec.triples.len()
        )));
    }
    let mut used = vec![false; dec.triples.len()];
    for &t in &listed_triples {
        let keys = orbit_keys(t);
        let hit = dec.triples.iter().enumerate().find(|&(k, &c)| {
            !used[k] && keys.contains(&canonical_rotation(c))
        });
        match hit {
            Some((k, _)) => used[k] = true,
            None => {
                return Err(mismatch(format!(
                    "listed orbit {t:?} matches no computed orbit in {:?}",
                    dec.triples
                )))
            }
        }
    }
    Ok(())
}

/// Outcome of re-deriving one row.
#[derive(Debug, Clone, Serialize)]
pub struct RowOutcome {
    pub q: u64,
    pub ok: bool,
    pub detail: String,
}

/// Re-derives every bundled row. Never fails as a whole; per-row
/// failures are reported in the outcomes.
pub fn reproduce_table() -> Vec<RowOutcome> {
    reference_table()
        .iter()
        .map(|row| match check_row(row) {
            Ok(()) => RowOutcome {
                q: row.q,
                ok: true,
                detail: "ok".into(),
            },
            Err(e) => RowOutcome {
                q: row.q,
                ok: false,
                detail: e.to_string(),
            },
        })
        .collect()
}
