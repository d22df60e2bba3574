//! Acceptance suite for the workspace. The criteria live in `tests/acceptance.rs`
//! and run with `cargo test -p singlemode-validation --test acceptance`.
