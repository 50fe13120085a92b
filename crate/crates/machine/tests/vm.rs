use std::path::PathBuf;

use rram_exact::Rational;
use rram_machine::{
    comparison_signature, equivalent, execute, parse_program, snapped_bit_complexity,
    MachineConfig, MachineFault, MachineInput, Outcome, Program,
};

fn fixture(name: &str) -> Program {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path:?}: {e}"));
    parse_program(&text).unwrap()
}

fn rat(s: &str) -> Rational {
    s.parse().unwrap()
}

fn rats(strs: &[&str]) -> Vec<Rational> {
    strs.iter().map(|s| rat(s)).collect()
}

#[test]
fn sum_loop_fixture_has_nine_lines_and_sums_exactly() {
    let program = fixture("sum_loop.rram");
    assert_eq!(program.len(), 9);

    let cfg = MachineConfig::new(8);
    let input = MachineInput::new(rats(&["1/2", "1/3"]), vec![2]);
    let run = execute(&program, &input, &cfg).unwrap();
    assert_eq!(run.outcome, Outcome::Halted);
    assert_eq!(run.final_state.reals[0], rat("5/6"));
}

#[test]
fn sum_loop_empty_input() {
    let program = fixture("sum_loop.rram");
    let cfg = MachineConfig::new(8);
    let run = execute(&program, &MachineInput::new(vec![], vec![0]), &cfg).unwrap();
    assert_eq!(run.outcome, Outcome::Halted);
    assert_eq!(run.final_state.reals[0], Rational::from(0i64));
}

#[test]
fn word_add_wraps_mod_two_to_the_w() {
    let program = parse_program("WADD 2 0 1\nHALT").unwrap();
    let cfg = MachineConfig::new(4);
    let input = MachineInput::new(vec![], vec![13, 7]);
    let run = execute(&program, &input, &cfg).unwrap();
    assert_eq!(run.final_state.words[2], 4); // 20 mod 16
}

#[test]
fn real_division_by_zero_faults() {
    let program = parse_program("RDIV 2 0 1\nHALT").unwrap();
    let cfg = MachineConfig::new(4);
    let input = MachineInput::new(rats(&["1", "0"]), vec![]);
    let run = execute(&program, &input, &cfg).unwrap();
    assert!(matches!(
        run.outcome,
        Outcome::Faulted(MachineFault::DivisionByZero { step: 1, pc: 1 })
    ));
}

#[test]
fn sqrt_exact_only_for_rational_squares() {
    let program = parse_program("RSQRT 1 0\nHALT").unwrap();
    let cfg = MachineConfig::new(4);

    let run = execute(
        &program,
        &MachineInput::new(rats(&["9/4"]), vec![]),
        &cfg,
    )
    .unwrap();
    assert_eq!(run.outcome, Outcome::Halted);
    assert_eq!(run.final_state.reals[1], rat("3/2"));

    let run = execute(&program, &MachineInput::new(rats(&["2"]), vec![]), &cfg).unwrap();
    assert!(matches!(
        run.outcome,
        Outcome::Faulted(MachineFault::UnsupportedExactRoot { .. })
    ));
}

#[test]
fn word_arith_fixture_accepts() {
    let program = fixture("word_arith.rram");
    let cfg = MachineConfig::new(4);
    let run = execute(&program, &MachineInput::default(), &cfg).unwrap();
    assert_eq!(run.outcome, Outcome::Accepted);
    let w = &run.final_state.words;
    assert_eq!((w[2], w[3], w[4], w[5], w[6], w[7], w[8]), (4, 10, 11, 5, 1, 6, 10));
}

#[test]
fn indirect_fixture_accepts() {
    let program = fixture("indirect.rram");
    let cfg = MachineConfig::new(4);
    let run = execute(&program, &MachineInput::default(), &cfg).unwrap();
    assert_eq!(run.outcome, Outcome::Accepted);
}

#[test]
fn indirect_store_out_of_bounds_faults() {
    let program = parse_program("WCONST 0 7\nWSTORE 0 1\nHALT").unwrap();
    let cfg = MachineConfig::new(3).with_memory_bound(4);
    let run = execute(&program, &MachineInput::default(), &cfg).unwrap();
    assert!(matches!(
        run.outcome,
        Outcome::Faulted(MachineFault::AddressOutOfRange { addr: 7, .. })
    ));
}

#[test]
fn fuel_exhaustion_is_an_outcome() {
    let program = parse_program("GOTO 1").unwrap();
    let cfg = MachineConfig::new(4).with_fuel(100);
    let run = execute(&program, &MachineInput::default(), &cfg).unwrap();
    assert_eq!(run.outcome, Outcome::FuelExhausted);
    assert_eq!(run.trace.steps.len(), 100);
}

#[test]
fn trace_export_format() {
    let program = fixture("eq.rram");
    let cfg = MachineConfig::new(3);
    let input = MachineInput::new(vec![], vec![3, 3]);
    let run = execute(&program, &input, &cfg).unwrap();
    let exported = run.trace.export();
    assert_eq!(exported, "1 1 WJEQ branch=1\n2 3 ACCEPT\n");
}

#[test]
fn signature_empty_without_comparisons() {
    let program = parse_program("RONE 0\nHALT").unwrap();
    let cfg = MachineConfig::new(4);
    let run = execute(&program, &MachineInput::default(), &cfg).unwrap();
    assert!(comparison_signature(&run.trace).is_empty());
}

#[test]
fn line_test_signature_is_below_for_interior_point() {
    // (1/5, 4/5): 4/5 < 1/5 * 1/2 + 1 = 11/10, so the single comparison
    // (is the point strictly above?) answers false.
    let program = fixture("line_test.rram");
    let cfg = MachineConfig::new(4);
    let run = execute(
        &program,
        &MachineInput::new(rats(&["1/5", "4/5"]), vec![]),
        &cfg,
    )
    .unwrap();
    assert_eq!(comparison_signature(&run.trace), vec![false]);
    assert_eq!(run.outcome, Outcome::Rejected);
}

#[test]
fn identical_runs_have_identical_traces() {
    let program = fixture("even_interval.rram");
    let cfg = MachineConfig::new(6);
    let input = MachineInput::new(rats(&["3/5"]), vec![4]);
    let a = execute(&program, &input, &cfg).unwrap();
    let b = execute(&program, &input, &cfg).unwrap();
    assert_eq!(a.trace, b.trace);
    assert_eq!(a.outcome, Outcome::Accepted);
}

#[test]
fn equivalence_examples_from_the_line_test() {
    let program = fixture("line_test.rram");
    let cfg = MachineConfig::new(4);
    let a = MachineInput::new(rats(&["1/5", "4/5"]), vec![]);

    // Reflexivity.
    assert!(equivalent(&program, &a, &a, &cfg).unwrap());

    // Snapped companion stays strictly below the line.
    let b = MachineInput::new(rats(&["1/4", "3/4"]), vec![]);
    assert!(equivalent(&program, &a, &b, &cfg).unwrap());

    // On the line versus above: sign changes from zero to positive.
    let on_line = MachineInput::new(rats(&["1/2", "5/4"]), vec![]);
    let above = MachineInput::new(rats(&["1/2", "11/8"]), vec![]);
    assert!(!equivalent(&program, &on_line, &above, &cfg).unwrap());
}

#[test]
fn equivalence_is_an_equivalence_relation_on_samples() {
    let program = fixture("even_interval.rram");
    let cfg = MachineConfig::new(6);
    let inputs: Vec<MachineInput> = (0..12)
        .map(|i| MachineInput::new(vec![Rational::new(i, 12)], vec![6]))
        .collect();
    let eq = |x: &MachineInput, y: &MachineInput| equivalent(&program, x, y, &cfg).unwrap();
    for a in &inputs {
        assert!(eq(a, a));
        for b in &inputs {
            assert_eq!(eq(a, b), eq(b, a));
            for c in &inputs {
                if eq(a, b) && eq(b, c) {
                    assert!(eq(a, c));
                }
            }
        }
    }
}

#[test]
fn snapped_bit_complexity_on_grid_points() {
    let program = fixture("line_test.rram");
    let cfg = MachineConfig::new(8);
    // Inputs already multiples of 2^-3 snap to themselves at w' = 3.
    let g = rats(&["3/8", "5/8"]);
    let got = snapped_bit_complexity(&program, &g, &[], &cfg, 8).unwrap();
    assert!(got.is_some() && got.unwrap() <= 3);
}

#[test]
fn snapped_bit_complexity_of_generic_point_is_small() {
    let program = fixture("line_test.rram");
    let cfg = MachineConfig::new(8);
    let got = snapped_bit_complexity(&program, &rats(&["1/5", "4/5"]), &[], &cfg, 8).unwrap();
    assert!(got.unwrap() <= 3);
}

#[test]
fn snapped_bit_complexity_none_on_the_branch_variety() {
    // (1/3, 7/6) lies exactly on y = x/2 + 1. Snapping both coordinates
    // to any dyadic grid gives 2*round(7*2^w/6) - round(2^w/3) - 2^(w+1),
    // which is odd minus even and therefore never zero: no snapped input
    // ever lands back on the line, so the zero-test never matches.
    let program = fixture("line_test3.rram");
    let cfg = MachineConfig::new(8);
    let got = snapped_bit_complexity(&program, &rats(&["1/3", "7/6"]), &[], &cfg, 12).unwrap();
    assert_eq!(got, None);
}

#[test]
fn base_run_errors_propagate_through_equivalence() {
    let program = parse_program("RDIV 2 0 1\nHALT").unwrap();
    let cfg = MachineConfig::new(4);
    let bad = MachineInput::new(rats(&["1", "0"]), vec![]);
    assert!(equivalent(&program, &bad, &bad, &cfg).is_err());
}
