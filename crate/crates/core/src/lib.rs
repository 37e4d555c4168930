pub mod codes;
pub mod harness;
pub mod colorers;
pub mod randomness;
pub mod stream;
pub mod structures;
pub mod transcript;
pub mod verification;
