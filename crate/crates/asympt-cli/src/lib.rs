//! Library half of the `asympt` command-line tool.
//!
//! All behavior lives here so it can be unit-tested; `main.rs` only parses
//! flags, merges them over the optional config file, and maps errors to the
//! documented exit codes: 0 success, 1 acceptance failure, 2 configuration
//! error, 3 method/oracle machinery error, 4 oracle disagreement beyond
//! `--max-error`.

// Validation guards are written as negated comparisons (`!(x > 0.0)`) on
// purpose: NaN must land in the rejection branch, which `x <= 0.0` misses.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cfg;
pub mod exec;
pub mod report;

/// Process exit status for a failed run.
pub fn exit_code(err: &asympt::Error) -> i32 {
    if err.is_config() {
        2
    } else {
        3
    }
}

/// Exit status for a run whose oracle disagreement exceeded `--max-error`.
pub const EXIT_ORACLE_DISAGREEMENT: i32 = 4;

/// Exit status when `verify` finds a failing criterion.
pub const EXIT_VERIFY_FAILED: i32 = 1;
