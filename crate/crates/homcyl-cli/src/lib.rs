//! Library surface of the command-line tool: JSON encoding and the
//! verification suites, shared with the acceptance tests.

pub mod json;
pub mod verify;
