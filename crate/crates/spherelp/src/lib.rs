//! File formats, threaded certification and the command-line front end for
//! `spherelp-core`.

pub mod cli;
pub mod docs;
pub mod parallel;
pub mod tables;
