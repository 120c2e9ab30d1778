use std::path::PathBuf;

use logiw::classgroups::AbelianLGroup;
use logiw::tables::{parse_tables, verify, Status};

fn data_files() -> Vec<PathBuf> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    files
}

#[test]
fn bundled_tables_verify_cleanly() {
    let files = data_files();
    assert_eq!(files.len(), 7);
    for path in files {
        let rows = parse_tables(&path).unwrap();
        assert!(!rows.is_empty(), "{}", path.display());
        let report = verify(&rows);
        assert_eq!(report.failures(), 0, "{}: {:#?}", path.display(), report.rows);
        assert!(report.summary.pass > 0);
        assert_eq!(report.rows.len(), rows.len());
        for (r, row) in report.rows.iter().zip(&rows) {
            assert_eq!(r.d, row.d.to_string(), "report order follows input order");
        }
    }
}

#[test]
fn every_tampered_prediction_is_caught() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/cyclotomic_l3_invariants.json");
    let rows = parse_tables(&path).unwrap();
    for i in 0..rows.len() {
        for bump in [-1i64, 1] {
            let mut bad = rows.clone();
            let exp = bad[i].expected.as_mut().unwrap();
            exp.nu = exp.nu.map(|v| v + bump);
            let report = verify(&bad);
            assert_eq!(report.failures(), 1, "row {i}, nu {bump:+}");
            let failed: Vec<_> =
                report.rows[i].checks.iter().filter(|c| c.status == Status::Fail).map(|c| c.tag).collect();
            assert_eq!(failed, ["GrowthLaw"]);
        }
    }
}

#[test]
fn tampered_cl_prime_is_caught() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/cyclotomic_l3_invariants.json");
    let mut rows = parse_tables(&path).unwrap();
    let row = rows
        .iter_mut()
        .find(|r| r.d < 0 && r.layers[0].clp.as_ref().is_some_and(|g| !g.is_trivial()))
        .unwrap();
    row.layers[0].clp = Some(AbelianLGroup::trivial(row.ell));
    let report = verify(&rows);
    assert!(report.failures() >= 1);
    let tags: Vec<_> =
        report.rows.iter().flat_map(|r| &r.checks).filter(|c| c.status == Status::Fail).map(|c| c.tag).collect();
    assert!(tags.contains(&"ClPrimeOracle"), "{tags:?}");
}
