use modfio_core::exponents::{region_scan, RegionSpec};
use modfio_core::CheckerId;

fn scan_csv(spec: RegionSpec) -> String {
    let mut out = Vec::new();
    region_scan(&spec).unwrap().write_csv(&mut out).unwrap();
    String::from_utf8(out).unwrap()
}

#[test]
fn figure_regions_match_golden_files() {
    let cases = [
        ("figure1_pseudo_k16.csv", RegionSpec::figure1(CheckerId::Pseudo, 16)),
        ("figure1_toft_k16.csv", RegionSpec::figure1(CheckerId::Toft, 16)),
        ("figure2_pseudo_k16.csv", RegionSpec::figure2(CheckerId::Pseudo, 16)),
        ("figure2_toft_k16.csv", RegionSpec::figure2(CheckerId::Toft, 16)),
    ];
    for (file, spec) in cases {
        let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(file);
        let golden = std::fs::read_to_string(&path).unwrap();
        assert_eq!(scan_csv(spec), golden, "{file}");
    }
}
