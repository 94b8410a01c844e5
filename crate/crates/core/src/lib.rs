pub mod bits;
pub mod bounds;
pub mod circuit;
pub mod codes;
pub mod decoder;
pub mod dense;
pub mod error;
pub mod exec;
pub mod faults;
pub mod gadgets;
pub mod gf2;
pub mod io;
pub mod montecarlo;
pub mod noise;
pub mod pauli;
pub mod stabilizer;
pub mod tableau;

pub use bits::BitVec;
pub use error::{Error, Result};
pub use gf2::BitMatrix;
pub use pauli::{Letter, PauliOperator};
pub use stabilizer::{Distance, StabilizerCode, Syndrome};
