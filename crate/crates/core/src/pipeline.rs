//! End-to-end artifact generation for one order: field, difference set,
//! plane, every presentation variant, verification, link checks, and
//! group presentation exports, written to a directory with a manifest.

use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{make_field, prime_power, FieldCtx};
use crate::grouppres::{
    export, extend_by_ps, gamma_t, rhombus_presentation, singer_lattice, ExportFormat,
};
use crate::linkcheck::{build_link, edge_triangle_count, matches_incidence_graph};
use crate::pds::singer_trace_pds;
use crate::plane::{build_plane, check_axioms, PlaneAxioms};
use crate::tripres::{enumerate_variants, orbit_decompose, verify, TrianglePres};

/// Everything one run produced and checked; also the manifest contents.
#[derive(Debug, Clone, Serialize)]
pub struct PipelineReport {
    pub q: u64,
    pub v: u64,
    pub field: FieldCtx,
    pub diff_set: Vec<u64>,
    /// Fixed points of the q-action on the set.
    pub f: usize,
    /// 3-orbits of the q-action on the set.
    pub t: usize,
    pub variant_count: usize,
    pub all_variants_verified: bool,
    pub plane: PlaneAxioms,
    pub link_biregular: bool,
    pub link_girth: Option<usize>,
    pub link_matches_incidence: bool,
    pub edge_triangle_counts_ok: bool,
    pub files: Vec<String>,
}

fn write_file(dir: &Path, name: &str, contents: &str, files: &mut Vec<String>) -> Result<()> {
    fs::write(dir.join(name), contents)?;
    files.push(name.to_string());
    Ok(())
}

/// Pretty JSON used for every artifact this module writes, so outputs
/// are diffable and byte-stable across runs.
pub fn artifact_json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

/// Runs the whole chain for one order and writes the artifact bundle
/// into `out_dir` (created if missing). Fails on non-prime-power q and
/// propagates any stage failure.
pub fn run(q: u64, out_dir: &Path) -> Result<PipelineReport> {
    let (p, n) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    let ctx = make_field(p, n, None)?;
    let d = singer_trace_pds(&ctx)?;
    let dec = orbit_decompose(&d)?;
    let variants = enumerate_variants(&d)?;

    let mut all_verified = true;
    for var in &variants {
        let report = verify(&var.full(), var.alpha())?;
        all_verified &= report.ok;
    }

    let plane = build_plane(&d)?;
    let axioms = check_axioms(&plane)?;

    let main: &TrianglePres = &variants[0];
    let link = build_link(main);
    let link_biregular = link.graph().is_biregular((q + 1) as usize);
    let link_girth = link.graph().girth();
    let link_matches = matches_incidence_graph(&link, main);
    let triangle_counts_ok =
        (0..d.v()).all(|i| edge_triangle_count(main, i) == (q + 1) as usize);

    fs::create_dir_all(out_dir)?;
    let mut files = Vec::new();
    write_file(out_dir, "pds.json", &artifact_json(&d)?, &mut files)?;
    write_file(out_dir, "plane.json", &artifact_json(&axioms)?, &mut files)?;
    for (k, var) in variants.iter().enumerate() {
        write_file(
            out_dir,
            &format!("presentation_{k}.json"),
            &artifact_json(var)?,
            &mut files,
        )?;
    }
    let groups = [
        ("gammat.gap", export(&gamma_t(main), ExportFormat::Gap)?),
        ("tilde.gap", export(&extend_by_ps(main)?, ExportFormat::Gap)?),
        ("singer.gap", export(&singer_lattice(&d), ExportFormat::Gap)?),
        (
            "rhombus.gap",
            export(&rhombus_presentation(main)?, ExportFormat::Gap)?,
        ),
    ];
    for (name, text) in &groups {
        write_file(out_dir, name, text, &mut files)?;
    }

    let mut report = PipelineReport {
        q,
        v: d.v(),
        field: ctx,
        diff_set: d.elems().to_vec(),
        f: dec.f(),
        t: dec.t(),
        variant_count: variants.len(),
        all_variants_verified: all_verified,
        plane: axioms,
        link_biregular,
        link_girth,
        link_matches_incidence: link_matches,
        edge_triangle_counts_ok: triangle_counts_ok,
        files,
    };
    report.files.push("manifest.json".to_string());
    fs::write(out_dir.join("manifest.json"), artifact_json(&report)?)?;
    Ok(report)
}

/// Whether every checked property in the report holds.
pub fn report_ok(r: &PipelineReport) -> bool {
    r.all_variants_verified
        && r.link_biregular
        && r.link_girth == Some(6)
        && r.link_matches_incidence
        && r.edge_triangle_counts_ok
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_prime_powers() {
        let dir = std::env::temp_dir().join("pipeline_reject_test");
        assert!(matches!(run(6, &dir), Err(Error::NotPrimePower(6))));
        assert!(matches!(run(0, &dir), Err(Error::NotPrimePower(0))));
    }

    #[test]
    fn order_two_bundle_contents() {
        let dir = tempfile::tempdir().unwrap();
        let report = run(2, dir.path()).unwrap();
        assert!(report_ok(&report));
        assert_eq!(report.v, 7);
        assert_eq!((report.f, report.t), (0, 1));
        assert_eq!(report.variant_count, 2);
        let expected = [
            "pds.json",
            "plane.json",
            "presentation_0.json",
            "presentation_1.json",
            "gammat.gap",
            "tilde.gap",
            "singer.gap",
            "rhombus.gap",
            "manifest.json",
        ];
        assert_eq!(report.files, expected);
        for name in expected {
            assert!(dir.path().join(name).exists(), "{name} missing");
        }
        // outputs re-validate when read back
        let text = std::fs::read_to_string(dir.path().join("presentation_0.json")).unwrap();
        let back: TrianglePres = serde_json::from_str(&text).unwrap();
        assert_eq!(artifact_json(&back).unwrap(), text);
    }

    #[test]
    fn order_four_orbit_shape() {
        let dir = tempfile::tempdir().unwrap();
        let report = run(4, dir.path()).unwrap();
        assert!(report_ok(&report));
        assert_eq!((report.f, report.t), (2, 1));
        assert_eq!(report.variant_count, 2);
    }

    #[test]
    fn runs_are_byte_identical() {
        let d1 = tempfile::tempdir().unwrap();
        let d2 = tempfile::tempdir().unwrap();
        let r1 = run(3, d1.path()).unwrap();
        let r2 = run(3, d2.path()).unwrap();
        assert_eq!(r1.files, r2.files);
        for name in &r1.files {
            let a = std::fs::read(d1.path().join(name)).unwrap();
            let b = std::fs::read(d2.path().join(name)).unwrap();
            assert_eq!(a, b, "{name} differs between runs");
        }
    }
}
