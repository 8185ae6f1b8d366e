//! Library surface of the CLI: the serializable report types, shared with
//! the integration tests.

pub mod report;
