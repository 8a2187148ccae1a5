//! Exact Drinfeld modular forms for `GL_2(F_q[T])`: `t`-expansions, Hecke
//! operators, their reductions at `T = 0`, and exact linear algebra over
//! `F_q(T)`.

pub mod error;
pub mod carlitz;
pub mod exactla;
pub mod ffield;
pub mod hecke;
mod kernel;
pub mod modforms;
pub mod poly;
pub mod scan;
pub mod polyring;
pub mod ring;
pub mod text;
pub mod tseries;
pub mod verify;

pub use error::{Error, Result};
pub use ffield::{Fq, FqElem};
pub use poly::{Parse, Poly, PolyRing};
pub use polyring::{ring_a, PolyA, PrimePoly, RatField, RatK, RingA};
pub use ring::{Field, Ring};
pub use tseries::TSeries;
