pub mod arith;
pub mod catalog;
pub mod chartab;
pub mod cyclotomic;
pub mod dsl;
pub mod group;
pub mod nker;
pub mod schur;
pub mod verify;
