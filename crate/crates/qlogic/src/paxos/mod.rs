//! Bundled theories, goals and traces for the broadcast and Paxos case studies.

mod scenario;
mod theories;

pub use scenario::*;
pub use theories::*;
