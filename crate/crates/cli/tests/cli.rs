use k3evenset::run;
use proptest::prelude::*;
use serde_json::Value;

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["k3evenset"];
    full.extend_from_slice(args);
    let out = run(full);
    let v = serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {:?}", out));
    (out.status, v)
}

#[test]
fn disc_of_l6() {
    let (status, v) = json(&["disc", "L:2d=6"]);
    assert_eq!(status, 0);
    assert_eq!(v["schema"], "k3evenset/1");
    assert_eq!(v["invariant_factors"], serde_json::json!([2, 2, 2, 2, 2, 2, 6]));
    assert_eq!(v["matches_prediction"], true);
}

#[test]
fn disc_of_m_prime() {
    let (status, v) = json(&["disc", "M':2d'=8"]);
    assert_eq!(status, 0);
    assert_eq!(v["invariant_factors"], serde_json::json!([2, 2, 2, 2, 2, 2, 8]));
    assert_eq!(v["order"], 512);
}

#[test]
fn chow_example() {
    let (status, v) = json(&["chow", "P4xP2: (2,0)+(1,1)^3"]);
    assert_eq!(status, 0);
    assert_eq!(v["matrix"], serde_json::json!([[6, 6], [6, 2]]));
    assert_eq!(v["k3"], true);
}

#[test]
fn l_minus_nhat_is_ample() {
    let (status, v) = json(&["ample", "L:2d=6", "--divisor", "L-Nhat", "--oracle"]);
    assert_eq!(status, 0);
    assert_eq!(v["status"], "ample");
    assert_eq!(v["a_max"], "1/2");
    assert_eq!(v["oracle"]["discrepancies"], serde_json::json!([]));
}

#[test]
fn l_minus_nhat_is_only_nef_in_degree_four() {
    let (_, v) = json(&["ample", "L:2d=4", "--divisor", "L-Nhat"]);
    assert_eq!(v["d2"], 0);
    assert_eq!(v["status"], "nef");
}

#[test]
fn exit_codes() {
    assert_eq!(run(["k3evenset", "--help"]).status, 0);
    assert_eq!(run(["k3evenset", "disc"]).status, 2);
    assert_eq!(run(["k3evenset", "disc", "Q:2d=6"]).status, 2);
    assert_eq!(run(["k3evenset", "ample", "L:2d=6", "--divisor", "2L+"]).status, 2);
    assert_eq!(run(["k3evenset", "overlattice", "0", "1,2"]).status, 2);
    assert_eq!(run(["k3evenset", "verify-paper", "--criterion", "9"]).status, 2);
    assert_eq!(run(["k3evenset", "verify-paper", "--criterion", "4"]).status, 0);
}

#[test]
fn table_matches_golden_fixture() {
    let out = run(["k3evenset", "table1"]);
    assert_eq!(out.status, 0);
    let golden = include_str!("fixtures/table1.json");
    assert!(out.stdout == golden, "table1 output drifted from tests/fixtures/table1.json");
}

#[test]
fn glue_counts_alternate() {
    let (_, v) = json(&["--dmax", "8", "--jobs", "3", "glues"]);
    let counts: Vec<u64> = v["results"].as_array().unwrap().iter().map(|r| r["count"].as_u64().unwrap()).collect();
    assert_eq!(counts, vec![0, 56, 0, 70, 0, 56, 0, 70]);
}

#[test]
fn correspondence_is_an_involution() {
    let (status, v) = json(&["correspond", "L:2d=6", "--against", "M':2d'=6"]);
    assert_eq!(status, 0);
    assert_eq!(v["partner"], "M':2d'=12");
    assert_eq!(v["involution"], true);
}

#[test]
fn m_octets_are_rejected() {
    let (_, v) = json(&["evenset", "M:2d'=2"]);
    assert_eq!(v["verdict"], "precondition_unsatisfiable");
    let (_, v) = json(&["evenset", "L:2d=4"]);
    assert_eq!(v["verdict"], "even_set");
}

#[test]
fn lattice_json_round_trips() {
    let (_, v) = json(&["disc", "L:2d=4"]);
    let lat: k3evenset::json::LatticeJson = serde_json::from_value(v["lattice"].clone()).unwrap();
    let rebuilt = lat.to_lattice().unwrap();
    let direct = k3evenset_core::families::NsFamily::l(2).make().unwrap();
    assert!(rebuilt.same_points(&direct).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn output_is_deterministic_and_job_independent(d in 2u64..=10, jobs in 1u64..=4) {
        let fam = format!("L:2d={}", 2 * d);
        let a = run(["k3evenset", "ample", fam.as_str(), "--divisor", "L-Nhat"]);
        let b = run(["k3evenset", "--jobs", &jobs.to_string(), "ample", fam.as_str(), "--divisor", "L-Nhat"]);
        prop_assert_eq!(a.status, 0);
        prop_assert_eq!(a, b);
    }
}
