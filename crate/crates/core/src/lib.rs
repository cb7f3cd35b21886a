pub mod bitcore;
pub mod gates;
pub mod cyclic;
pub mod analysis;
pub mod synth;
pub mod grammar;
pub mod search;
pub mod verify;
pub mod cli;
