//! Exit codes and outputs of the command-line front end.

use gatecalc::cli::{run, EXIT_FAILED, EXIT_OK, EXIT_USAGE};

fn gatecalc(args: &str) -> i32 {
    run(std::iter::once("gatecalc").chain(args.split_whitespace()))
}

#[test]
fn successful_commands_exit_zero() {
    for args in [
        "gate c0@1",
        "gate e57@-1 --apply 01101 --anchor -2",
        "--json gate swap",
        "classify swap --u 000 --v 010 --verify",
        "classify swap --u 0011 --v 0110",
        "classify eca --rule 57",
        "--json classify eca --all",
        "synthesize --u 0000 --v 0100 --gate all",
        "project e57 --n 6 --method both",
        "parity --max-n 16",
        "grammar expand --start T3",
        "grammar verify --start T3 --ring 4",
        "grammar verify --start S3",
        "gate c0@0 c0@1 c0@0",
    ] {
        assert_eq!(gatecalc(args), EXIT_OK, "{args}");
    }
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        "",
        "--bogus",
        "frobnicate",
        "classify eca",
        "classify eca --rule 57 --all",
        "classify swap --u 01 --v 2",
        "parity --max-n 0",
        "grammar expand --start X9",
        "gate nosuchgate",
        "project e57 --n 1",
        "synthesize --u 0 --v 1",
        "search --gen e57@0 --target c0 --mem lots",
    ] {
        assert_eq!(gatecalc(args), EXIT_USAGE, "{args:?}");
    }
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(gatecalc("--help"), EXIT_OK);
    assert_eq!(gatecalc("--version"), EXIT_OK);
}

#[test]
fn unsuccessful_search_exits_one() {
    assert_eq!(
        gatecalc("search --gen e57@1,e57@0,e57@-1 --target c0 --strategy bfs --max-depth 6"),
        EXIT_FAILED
    );
}

#[test]
fn short_search_finds_a_generator() {
    assert_eq!(gatecalc("search --gen e57@1,e57@0,e57@-1 --target e57@0 --max-depth 2"), EXIT_OK);
}

#[test]
fn window_cap_flag_limits_evaluation() {
    // a cap too small for the composite must be reported, not ignored
    assert_eq!(gatecalc("--window-cap 2 gate c0@0 c0@5"), EXIT_USAGE);
    assert_eq!(gatecalc("--window-cap 12 gate c0@0 c0@5"), EXIT_OK);
}
