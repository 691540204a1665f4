pub mod classical;
pub mod critical;
pub mod deep;
pub mod error;
pub mod geometry;
pub mod lemmas;
pub mod oracles;
pub mod report;
