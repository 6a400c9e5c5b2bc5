pub mod classify;
pub mod experiments;
pub mod game;
pub mod linalg;
pub mod strategy;
