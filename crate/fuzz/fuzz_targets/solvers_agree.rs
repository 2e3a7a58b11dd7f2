#![no_main]
use libfuzzer_sys::fuzz_target;

use polyknap::json::parse_instance;
use polyknap::{solve_brute_force, solve_dp, verify_solution, Problem, SolverConfig};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(instance) = parse_instance(text) else { return };
    let config = SolverConfig { enumeration_cap: 16, dp_capacity_cap: 1 << 16 };
    if instance.len() > 16 {
        return;
    }
    let (Ok(brute), Ok(dp)) = (solve_brute_force(&instance, &config), solve_dp(&instance, &config)) else {
        return;
    };
    assert_eq!(brute.satisfiable, dp.satisfiable);
    assert_eq!(brute.optimum, dp.optimum);
    assert_eq!(brute.witness, dp.witness);
    if let Some(x) = &dp.witness {
        assert!(verify_solution(&instance, x).unwrap());
    }
});
