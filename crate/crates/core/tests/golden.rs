//! Golden-report regression: one checked-in report per table row at N = 5,
//! diffed byte-exact against a fresh analysis. Serialization is canonical
//! (sorted keys, no volatile fields), so any difference is a real change.

use qweyl::families::{FamilyId, FamilyParams};
use qweyl::report::{analyze, AnalysisInput, AnalysisOptions};

fn check(file: &str, id: FamilyId, theta: usize, n: u64, k: Option<usize>, d: Option<(u64, u64)>) {
    let params = FamilyParams {
        theta,
        n,
        k,
        d1: d.map(|x| x.0),
        d3: d.map(|x| x.1),
    };
    let input = AnalysisInput::Family {
        id,
        params,
        exps: vec![],
    };
    let report = analyze(&input, &AnalysisOptions::default()).expect("analysis succeeds");
    let fresh = report.to_json();
    let path = format!("{}/tests/golden/{file}.json", env!("CARGO_MANIFEST_DIR"));
    let golden = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {path}"));
    assert_eq!(
        fresh.trim(),
        golden.trim(),
        "golden report drift for {file}; regenerate deliberately if the change is intended"
    );
}

#[test]
fn golden_cartan_rows() {
    check("cartan-a_t2_N5", FamilyId::CartanA, 2, 5, None, None);
    check("cartan-b_t3_N5", FamilyId::CartanB, 3, 5, None, None);
    check("cartan-g2_N5", FamilyId::CartanG2, 2, 5, None, None);
    check("cartan-f4_N5", FamilyId::CartanF4, 4, 5, None, None);
}

#[test]
fn golden_super_rows() {
    check("super-a_t2_k1_N5", FamilyId::SuperA, 2, 5, Some(1), None);
    check("super-a_t4_k2_N5", FamilyId::SuperA, 4, 5, Some(2), None);
    check("super-b_t3_k1_N5", FamilyId::SuperB, 3, 5, Some(1), None);
    check("super-d_t5_k2_N5", FamilyId::SuperD, 5, 5, Some(2), None);
    check("super-d21_N5", FamilyId::SuperD21, 3, 5, None, Some((1, 2)));
    check("super-f4_N5", FamilyId::SuperF4, 4, 5, None, None);
    check("super-g3_N5", FamilyId::SuperG3, 3, 5, None, None);
}

#[test]
fn golden_modular_rows() {
    check("wk4_N5", FamilyId::Wk4, 4, 5, None, None);
    check("br2_N5", FamilyId::Br2, 2, 5, None, None);
}

/// Reports are byte-stable across runs for the same input.
#[test]
fn report_byte_stability() {
    let input = AnalysisInput::Family {
        id: FamilyId::Wk4,
        params: FamilyParams {
            theta: 4,
            n: 5,
            k: None,
            d1: None,
            d3: None,
        },
        exps: vec![],
    };
    let a = analyze(&input, &AnalysisOptions::default()).unwrap().to_json();
    let b = analyze(&input, &AnalysisOptions::default()).unwrap().to_json();
    assert_eq!(a, b);
}
