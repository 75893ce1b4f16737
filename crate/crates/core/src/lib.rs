pub mod bitset;
pub mod classes;
pub mod closure;
pub mod constructions;
pub mod proofs;
pub mod search;
pub mod semantics;
pub mod syntax;
