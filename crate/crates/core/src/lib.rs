pub mod character;
pub mod finite;
pub mod group;
pub mod hecke;
pub mod linalg;
pub mod principal;
pub mod suite;
pub mod tree;
pub mod trunc;
pub mod weyl;
