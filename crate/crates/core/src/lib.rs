pub mod cutmodel;
pub mod error;
pub mod exact;
pub mod poly;
pub mod rootfind;
pub mod enumerate;
pub mod verify;
pub mod analysis;
pub mod cli;
