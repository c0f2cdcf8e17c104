pub mod clifford;
pub mod cyclo;
pub mod monomial;
