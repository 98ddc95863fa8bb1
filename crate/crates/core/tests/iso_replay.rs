//! End-to-end replays of the shipped elimination scripts against the
//! 13-dimensional deformation family.

use std::fs;
use std::path::PathBuf;

use nilscope_core::deformation::build_f13_family;
use nilscope_core::iso::{
    build_ansatz, generate_obstructions, replay, replay_with_states,
    second_diagonal_step, Ansatz, EliminationState, ReplayScript, Verdict,
};
use nilscope_core::lie::build_f13;
use nilscope_core::scalar::{MultiPoly, Rat};

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("cannot read {}: {e}", path.display()))
}

fn setup() -> (Ansatz, EliminationState) {
    let family = build_f13_family();
    let target = build_f13();
    let ansatz = build_ansatz(&family, &target).expect("filiform pair");
    let obstructions = generate_obstructions(&ansatz, &family, &target)
        .expect("polynomial family");
    let state = EliminationState::new(&ansatz, obstructions);
    (ansatz, state)
}

fn run_fixture(name: &str) -> (Verdict, Vec<EliminationState>) {
    let (ansatz, state) = setup();
    let script =
        ReplayScript::parse(&fixture(name), &ansatz).expect("script parses");
    replay_with_states(&script, state).expect("engine invariants hold")
}

fn expect_pass(name: &str) -> (nilscope_core::iso::ReplayReport, Vec<EliminationState>) {
    let (verdict, states) = run_fixture(name);
    match verdict {
        Verdict::Pass(report) => (report, states),
        Verdict::Fail(f) => panic!(
            "{name} failed at line {} ({}) on branch `{}`: {}\n  expected: {:?}\n  computed: {:?}",
            f.line, f.text, f.branch, f.reason, f.expected, f.computed
        ),
    }
}

#[test]
fn stage_one_splits_into_two_sign_branches() {
    let (report, states) = expect_pass("lemma_mii.replay");
    assert!(!report.concluded, "stage one does not conclude");
    assert_eq!(report.branches.len(), 2);
    assert_eq!(report.branches[0].label, "m[1,1] = 1");
    assert_eq!(report.branches[1].label, "m[1,1] = -1");
    for state in &states {
        // The top block is diagonal with the corner pinned to a sign.
        assert_eq!(
            state.substitutions().get("m[1,2]"),
            Some(&MultiPoly::zero())
        );
        assert_eq!(
            state.substitutions().get("m[2,1]"),
            Some(&MultiPoly::zero())
        );
        assert_eq!(
            state.substitutions().get("m[2,2]"),
            Some(&MultiPoly::one())
        );
    }
}

#[test]
fn stage_two_matches_the_recurrence_pass() {
    let (report, scripted) = expect_pass("lemma_m32.replay");
    assert!(!report.concluded);
    assert_eq!(report.branches.len(), 2);

    // The dedicated recurrence pass reproduces the scripted eliminations
    // exactly, branch by branch.
    let (_, stage_one_states) = expect_pass("lemma_mii.replay");
    for (walked, scripted) in stage_one_states.into_iter().zip(&scripted) {
        let mut walked = walked;
        second_diagonal_step(&mut walked).expect("recurrence applies");
        assert_eq!(walked.substitutions(), scripted.substitutions());
    }
}

#[test]
fn the_full_elimination_forces_the_parameter_to_vanish() {
    let (report, states) = expect_pass("paper_theorem.replay");
    assert!(report.concluded, "every branch must reach the conclusion");
    assert_eq!(report.branches.len(), 2);
    for branch in &report.branches {
        assert_eq!(
            branch.final_constraint.as_deref(),
            Some("-5/36*t = 0"),
            "branch `{}`",
            branch.label
        );
    }

    let m32 = MultiPoly::var("m[3,2]");
    let expected_m42 = m32.pow(2).scale(&Rat::from_pair(1, 2).unwrap());
    for state in &states {
        assert_eq!(state.substitutions().get("m[4,2]"), Some(&expected_m42));
    }

    // On the unconditional-sign branch the solved value keeps its shape in
    // the free column-one entries.
    let plus = &states[0];
    assert_eq!(plus.assumptions(), &[("m[1,1]".to_string(), Rat::one())]);
    let m31 = MultiPoly::var("m[3,1]");
    let m41 = MultiPoly::var("m[4,1]");
    let expected_m52 = &(&m41 - &(&m31 * &m32))
        + &m32.pow(3).scale(&Rat::from_pair(1, 6).unwrap());
    assert_eq!(plus.substitutions().get("m[5,2]"), Some(&expected_m52));
}

#[test]
fn corrupted_scripts_fail_on_the_edited_line() {
    let (ansatz, _) = setup();

    // Perturbing the terminal assertion must be caught exactly there.
    let text = fixture("paper_theorem.replay");
    let broken = text.replace(
        "assert E[2,3,11] equals -5/36*t",
        "assert E[2,3,11] equals -5/36*t + 1",
    );
    assert_ne!(text, broken);
    let line = broken
        .lines()
        .position(|l| l.contains("-5/36*t + 1"))
        .unwrap()
        + 1;
    let script = ReplayScript::parse(&broken, &ansatz).unwrap();
    let (_, state) = setup();
    match replay(&script, state).unwrap() {
        Verdict::Fail(f) => {
            assert_eq!(f.line, line);
            assert_eq!(f.computed.as_deref(), Some("-5/36*t"));
        }
        Verdict::Pass(_) => panic!("a shifted assertion cannot verify"),
    }

    // Perturbing a factorization must be caught at the factor step.
    let broken = text.replace(
        "factor E3 expect (35)(m[1,1]^4)(m[1,1] - 1)(m[1,1] + 1)",
        "factor E3 expect (35)(m[1,1]^4)(m[1,1] - 2)(m[1,1] + 1)",
    );
    assert_ne!(text, broken);
    let line = broken
        .lines()
        .position(|l| l.contains("m[1,1] - 2"))
        .unwrap()
        + 1;
    let script = ReplayScript::parse(&broken, &ansatz).unwrap();
    let (_, state) = setup();
    match replay(&script, state).unwrap() {
        Verdict::Fail(f) => {
            assert_eq!(f.line, line);
            assert!(f.reason.contains("do not multiply back"));
        }
        Verdict::Pass(_) => panic!("a wrong factor cannot verify"),
    }
}
